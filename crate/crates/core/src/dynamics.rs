//! Phase-space dynamics of quadratic Hamiltonians.
//!
//! A quadratic Hamiltonian `H(x) = x.Hx/2 + x.xi + H_0` generates the linear
//! flow `x(t) = S_t (x_0 + H^-1 xi) - H^-1 xi` with `S_t = exp(J H t)`. When
//! the Hessian is positive-definite the Williamson decomposition turns the
//! system into independent oscillators whose frequencies are the symplectic
//! eigenvalues; this module provides both propagation routes (they must
//! agree), the normal-mode frame, the ladder/complex representation, a
//! small-oscillation expansion for smooth Hamiltonians, and the classical
//! kinetic/potential normal-mode construction for cross-checking.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{self, POSITIVITY_TOL};
use crate::matrix::{dot, vec_add, vec_norm, vec_scale, vec_sub, ComplexMatrix, Matrix};
use crate::symplectic::{standard_form, williamson, SymplecticForm};

/// Hamiltonian `H(x) = x.Hx/2 + x.xi + H_0` on a 2n-dimensional phase space.
#[derive(Debug, Clone)]
pub struct QuadraticHamiltonian {
    hessian: Matrix,
    xi: Vec<f64>,
    h0: f64,
}

impl QuadraticHamiltonian {
    /// Validates the ordering convention: `hessian` is 2n x 2n symmetric and
    /// `xi` has length 2n.
    pub fn new(hessian: Matrix, xi: Vec<f64>, h0: f64) -> Result<Self> {
        hessian.require_symmetric(kernel::SYMMETRY_TOL)?;
        if hessian.rows() % 2 != 0 || hessian.rows() == 0 {
            return Err(Error::OddDimension(hessian.rows()));
        }
        if xi.len() != hessian.rows() {
            return Err(Error::DimensionMismatch(format!(
                "xi has length {}, expected {}",
                xi.len(),
                hessian.rows()
            )));
        }
        if !xi.iter().all(|x| x.is_finite()) || !h0.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self { hessian: hessian.symmetrized(), xi, h0 })
    }

    /// Quadratic-only Hamiltonian (`xi = 0`, `H_0 = 0`).
    pub fn from_hessian(hessian: Matrix) -> Result<Self> {
        let dim = hessian.rows();
        Self::new(hessian, vec![0.0; dim], 0.0)
    }

    pub fn degrees_of_freedom(&self) -> usize {
        self.hessian.rows() / 2
    }

    pub fn dim(&self) -> usize {
        self.hessian.rows()
    }

    pub fn hessian(&self) -> &Matrix {
        &self.hessian
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn form(&self) -> SymplecticForm {
        standard_form(self.degrees_of_freedom()).expect("validated at construction")
    }

    pub fn energy(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has length {}, expected {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(0.5 * dot(x, &self.hessian.matvec(x)) + dot(x, &self.xi) + self.h0)
    }

    /// Equilibrium `x_star = -H^-1 xi`; requires a nonsingular Hessian.
    pub fn fixed_point(&self) -> Result<Vec<f64>> {
        let dec = kernel::sym_eig(&self.hessian)?;
        let min_abs = dec.eigenvalues.iter().fold(f64::INFINITY, |acc, &l| acc.min(l.abs()));
        let max_abs = dec.eigenvalues.iter().fold(0.0f64, |acc, &l| acc.max(l.abs()));
        if min_abs <= POSITIVITY_TOL * max_abs.max(1.0) {
            return Err(Error::SingularHessian { min_abs_eigenvalue: min_abs });
        }
        // x_star = -Q diag(1/lambda) Q^T xi
        let q = &dec.eigenvectors;
        let qt_xi = q.transpose().matvec(&self.xi);
        let scaled: Vec<f64> = qt_xi.iter().zip(&dec.eigenvalues).map(|(y, l)| -y / l).collect();
        Ok(q.matvec(&scaled))
    }

    /// Exact propagator `S_t = exp(J H t)`; symplectic for every `t`.
    pub fn propagator(&self, t: f64) -> Result<Matrix> {
        let j = self.form().matrix();
        kernel::expm(&(&j * &self.hessian).scale(t))
    }

    /// Closed-form evolution for a nonsingular Hessian.
    pub fn evolve(&self, x0: &[f64], t: f64) -> Result<Vec<f64>> {
        if x0.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has length {}, expected {}",
                x0.len(),
                self.dim()
            )));
        }
        let x_star = self.fixed_point()?;
        let s_t = self.propagator(t)?;
        Ok(vec_add(&s_t.matvec(&vec_sub(x0, &x_star)), &x_star))
    }

    /// Evolution valid for any Hessian, singular ones included.
    ///
    /// The affine displacement `int_0^t S_tau J xi dtau` is read off the
    /// top-right block of the exponential of the augmented matrix
    /// `[[J H t, J xi t], [0, 0]]`, so no quadrature is involved.
    pub fn evolve_generic(&self, x0: &[f64], t: f64) -> Result<Vec<f64>> {
        if x0.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has length {}, expected {}",
                x0.len(),
                self.dim()
            )));
        }
        let dim = self.dim();
        let form = self.form();
        let jh = &form.matrix() * &self.hessian;
        let jxi = form.apply(&self.xi);
        let mut aug = Matrix::zeros(dim + 1, dim + 1);
        for i in 0..dim {
            for jcol in 0..dim {
                aug[(i, jcol)] = jh[(i, jcol)] * t;
            }
            aug[(i, dim)] = jxi[i] * t;
        }
        let e = kernel::expm(&aug)?;
        let mut x = vec![0.0; dim];
        for i in 0..dim {
            x[i] = e[(i, dim)];
            for jcol in 0..dim {
                x[i] += e[(i, jcol)] * x0[jcol];
            }
        }
        Ok(x)
    }

    /// Williamson normal-mode frame; requires a positive-definite Hessian.
    pub fn normal_mode_frame(&self) -> Result<NormalModeFrame> {
        let wr = williamson(&self.hessian)?;
        let x_star = self.fixed_point()?;
        let x_star_prime = inverse_transpose_apply(&wr.s, &x_star);
        let mut lambda_paired = wr.spectrum.clone();
        lambda_paired.extend_from_slice(&wr.spectrum);
        let weighted: f64 =
            x_star_prime.iter().zip(&lambda_paired).map(|(x, l)| l * x * x).sum();
        let h0_prime = self.h0 - 0.5 * weighted;
        Ok(NormalModeFrame { s_h: wr.s, spectrum: wr.spectrum, x_star, x_star_prime, h0_prime })
    }

    /// Evolution through the normal-mode rotation; agrees with [`Self::evolve`].
    pub fn evolve_via_modes(&self, x0: &[f64], t: f64) -> Result<Vec<f64>> {
        let frame = self.normal_mode_frame()?;
        frame.evolve(x0, t)
    }
}

/// `S^-T v` for a symplectic `S`, using `S^-T = J^T S J`.
fn inverse_transpose_apply(s: &Matrix, v: &[f64]) -> Vec<f64> {
    let n = s.rows() / 2;
    let form = standard_form(n).expect("n >= 1");
    let sjv = s.matvec(&form.apply(v));
    vec_scale(&form.apply(&sjv), -1.0)
}

/// Normal-mode chart of a positive-definite quadratic Hamiltonian: the
/// symplectic `S_H` with `S_H H S_H^T = Lambda`, the mode frequencies, and
/// the fixed point in both charts.
#[derive(Debug, Clone)]
pub struct NormalModeFrame {
    pub s_h: Matrix,
    /// Mode frequencies, ascending.
    pub spectrum: Vec<f64>,
    pub x_star: Vec<f64>,
    pub x_star_prime: Vec<f64>,
    /// Offset `H_0' = H_0 - xi . H^-1 xi / 2`.
    pub h0_prime: f64,
}

impl NormalModeFrame {
    pub fn degrees_of_freedom(&self) -> usize {
        self.spectrum.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.spectrum.len()
    }

    /// Chart change `x' = S_H^-T x`.
    pub fn to_normal_modes(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has length {}, expected {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(inverse_transpose_apply(&self.s_h, x))
    }

    /// Inverse chart change `x = S_H^T x'`.
    pub fn from_normal_modes(&self, x_prime: &[f64]) -> Result<Vec<f64>> {
        if x_prime.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state has length {}, expected {}",
                x_prime.len(),
                self.dim()
            )));
        }
        Ok(self.s_h.transpose().matvec(x_prime))
    }

    /// Normal-mode propagator `S'_t = cos(Lambda t) + J sin(Lambda t)`: each
    /// conjugate pair rotates at its own frequency. Orthogonal and symplectic.
    pub fn propagator(&self, t: f64) -> Matrix {
        let n = self.spectrum.len();
        let mut s = Matrix::zeros(2 * n, 2 * n);
        for (k, &mu) in self.spectrum.iter().enumerate() {
            let (sin, cos) = (mu * t).sin_cos();
            s[(k, k)] = cos;
            s[(n + k, n + k)] = cos;
            s[(k, n + k)] = sin;
            s[(n + k, k)] = -sin;
        }
        s
    }

    /// Evolve by rotating around the fixed point in mode coordinates.
    pub fn evolve(&self, x0: &[f64], t: f64) -> Result<Vec<f64>> {
        let xp0 = self.to_normal_modes(x0)?;
        let rotated = self.propagator(t).matvec(&vec_sub(&xp0, &self.x_star_prime));
        self.from_normal_modes(&vec_add(&rotated, &self.x_star_prime))
    }

    /// Energy in mode coordinates:
    /// `sum_k mu_k/2 [(q'_k - q'*_k)^2 + (p'_k - p'*_k)^2] + H_0'`.
    pub fn mode_energy(&self, x_prime: &[f64]) -> f64 {
        let n = self.spectrum.len();
        let d = vec_sub(x_prime, &self.x_star_prime);
        let mut e = self.h0_prime;
        for (k, &mu) in self.spectrum.iter().enumerate() {
            e += 0.5 * mu * (d[k] * d[k] + d[n + k] * d[n + k]);
        }
        e
    }
}

/// The unitary `W = [[I, iI], [iI, I]] / sqrt(2)` bridging real phase-space
/// coordinates and the complex pairs `(q' + ip')/sqrt(2)`, `(iq' - p')/sqrt(2)`.
pub fn ladder_unitary(n: usize) -> ComplexMatrix {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i == j {
            Complex64::new(inv_sqrt2, 0.0)
        } else if j == i + n || i == j + n {
            Complex64::new(0.0, inv_sqrt2)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Complex/ladder representation attached to a normal-mode frame.
#[derive(Debug, Clone)]
pub struct LadderFrame {
    /// Unitary symmetric `W` with `W^T J W = J`.
    pub w: ComplexMatrix,
    /// Diagonal symplectic unit change `diag(sqrt(m w), 1/sqrt(m w))`.
    pub z: Matrix,
    /// Bogoliubov matrix `W S_H Z W^*`.
    pub bogoliubov: ComplexMatrix,
}

/// Ladder frame for oscillators with the given masses and frequencies.
pub fn ladder_frame(
    frame: &NormalModeFrame,
    masses: &[f64],
    frequencies: &[f64],
) -> Result<LadderFrame> {
    let n = frame.degrees_of_freedom();
    if masses.len() != n || frequencies.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected {n} masses and frequencies, got {} and {}",
            masses.len(),
            frequencies.len()
        )));
    }
    if masses.iter().chain(frequencies).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "masses and frequencies must be positive and finite".into(),
        ));
    }
    let mut diag: Vec<f64> =
        masses.iter().zip(frequencies).map(|(&m, &w)| (m * w).sqrt()).collect();
    let inv: Vec<f64> = diag.iter().map(|d| 1.0 / d).collect();
    diag.extend(inv);
    let z = Matrix::from_diagonal(&diag);
    let w = ladder_unitary(n);
    let sz = &frame.s_h * &z;
    let bogoliubov = &(&w * &sz.to_complex()) * &w.conj();
    Ok(LadderFrame { w, z, bogoliubov })
}

impl LadderFrame {
    /// Hermitian Hessian in ladder coordinates, `(W Z^-1) H (W Z^-1)^dag`.
    pub fn complex_hessian(&self, qh: &QuadraticHamiltonian) -> Result<ComplexMatrix> {
        if qh.dim() != self.z.rows() {
            return Err(Error::DimensionMismatch(format!(
                "Hamiltonian dimension {} does not match frame dimension {}",
                qh.dim(),
                self.z.rows()
            )));
        }
        let z_inv = Matrix::from_diagonal(
            &(0..self.z.rows()).map(|i| 1.0 / self.z[(i, i)]).collect::<Vec<_>>(),
        );
        let wz = &self.w * &z_inv.to_complex();
        Ok(&(&wz * &qh.hessian().to_complex()) * &wz.adjoint())
    }
}

/// Propagator in the complex chart, `W S'_t W^*`: diagonal, with phase
/// `exp(-i mu_k t)` on the annihilation block and `exp(+i mu_k t)` on the
/// conjugate block, matching `a(t) = exp(-i mu t) a(0)` for each mode.
pub fn complex_propagator(frame: &NormalModeFrame, t: f64) -> ComplexMatrix {
    let w = ladder_unitary(frame.degrees_of_freedom());
    &(&w * &frame.propagator(t).to_complex()) * &w.conj()
}

/// A smooth scalar field on phase space with an optional analytic gradient.
///
/// Fields are supplied programmatically; when `gradient` returns `None` the
/// crate falls back to central finite differences.
pub trait SmoothField {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

impl SmoothField for QuadraticHamiltonian {
    fn dim(&self) -> usize {
        self.hessian.rows()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.energy(x).expect("dimension validated by caller")
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(vec_add(&self.hessian.matvec(x), &self.xi))
    }
}

/// Central-difference gradient with step `max(1, |x_i|) * eps^(1/3)`.
pub fn finite_difference_gradient<F: SmoothField + ?Sized>(field: &F, x: &[f64]) -> Vec<f64> {
    let h_base = f64::EPSILON.cbrt();
    let mut g = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        let h = h_base * x[i].abs().max(1.0);
        xp[i] = x[i] + h;
        let fp = field.value(&xp);
        xp[i] = x[i] - h;
        let fm = field.value(&xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

fn field_gradient<F: SmoothField + ?Sized>(field: &F, x: &[f64]) -> Vec<f64> {
    field.gradient(x).unwrap_or_else(|| finite_difference_gradient(field, x))
}

/// Symmetrized numerical Hessian. With an analytic gradient each column is a
/// central difference of the gradient at step `eps^(1/3)`; without one the
/// entries come from second differences of the value at step `eps^(1/4)`,
/// which balances truncation against round-off for second derivatives.
fn field_hessian<F: SmoothField + ?Sized>(field: &F, x: &[f64]) -> Matrix {
    let dim = x.len();
    let mut h = Matrix::zeros(dim, dim);
    if field.gradient(x).is_some() {
        let step = f64::EPSILON.cbrt();
        let mut xp = x.to_vec();
        for j in 0..dim {
            let hj = step * x[j].abs().max(1.0);
            xp[j] = x[j] + hj;
            let gp = field.gradient(&xp).expect("gradient available");
            xp[j] = x[j] - hj;
            let gm = field.gradient(&xp).expect("gradient available");
            xp[j] = x[j];
            for i in 0..dim {
                h[(i, j)] = (gp[i] - gm[i]) / (2.0 * hj);
            }
        }
    } else {
        let step = f64::EPSILON.powf(0.25);
        let f0 = field.value(x);
        let steps: Vec<f64> = x.iter().map(|xi| step * xi.abs().max(1.0)).collect();
        let mut xp = x.to_vec();
        for i in 0..dim {
            xp[i] = x[i] + steps[i];
            let fp = field.value(&xp);
            xp[i] = x[i] - steps[i];
            let fm = field.value(&xp);
            xp[i] = x[i];
            h[(i, i)] = (fp - 2.0 * f0 + fm) / (steps[i] * steps[i]);
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                xp[i] = x[i] + steps[i];
                xp[j] = x[j] + steps[j];
                let fpp = field.value(&xp);
                xp[j] = x[j] - steps[j];
                let fpm = field.value(&xp);
                xp[i] = x[i] - steps[i];
                let fmm = field.value(&xp);
                xp[j] = x[j] + steps[j];
                let fmp = field.value(&xp);
                xp[i] = x[i];
                xp[j] = x[j];
                h[(i, j)] = (fpp - fpm - fmp + fmm) / (4.0 * steps[i] * steps[j]);
            }
        }
    }
    h.symmetrized()
}

/// Quadratic expansion of a smooth field around a fixed point found by
/// damped Newton iteration.
#[derive(Debug, Clone)]
pub struct SmallOscillation {
    pub fixed_point: Vec<f64>,
    /// Expansion in displacement coordinates `y = x - x_star`: Hessian at
    /// the fixed point, zero linear term, offset `H(x_star)`.
    pub hamiltonian: QuadraticHamiltonian,
    /// Whether the Hessian at the fixed point is positive-definite, i.e.
    /// whether the expansion describes oscillations around a stable center.
    pub stable: bool,
}

const NEWTON_MAX_STEPS: usize = 100;
const NEWTON_MAX_HALVINGS: usize = 20;
const NEWTON_TOL: f64 = 1e-8;

/// Expand a smooth Hamiltonian to second order around the fixed point
/// nearest the guess.
///
/// Newton steps are damped by halving (up to 20 times) whenever the gradient
/// norm fails to decrease; convergence means
/// `|grad H| <= 1e-8 * (1 + |H(x)|)`. No globalization is attempted: on a
/// multi-well field the result depends on the guess, and non-convergence is
/// reported rather than patched over.
pub fn small_oscillations<F: SmoothField + ?Sized>(
    field: &F,
    guess: &[f64],
) -> Result<SmallOscillation> {
    if guess.len() != field.dim() {
        return Err(Error::DimensionMismatch(format!(
            "guess has length {}, field dimension is {}",
            guess.len(),
            field.dim()
        )));
    }
    if field.dim() % 2 != 0 || field.dim() == 0 {
        return Err(Error::OddDimension(field.dim()));
    }

    let mut x = guess.to_vec();
    let mut g = field_gradient(field, &x);
    let mut gnorm = vec_norm(&g);
    let mut converged = gnorm <= NEWTON_TOL * (1.0 + field.value(&x).abs());
    let mut steps = 0;
    while !converged && steps < NEWTON_MAX_STEPS {
        let hess = field_hessian(field, &x);
        let delta = match hess.solve(&vec_scale(&g, -1.0)) {
            Ok(d) => d,
            Err(Error::SingularSystem) => return Err(Error::SingularJacobian),
            Err(e) => return Err(e),
        };
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..=NEWTON_MAX_HALVINGS {
            let candidate = vec_add(&x, &vec_scale(&delta, alpha));
            let gc = field_gradient(field, &candidate);
            let gc_norm = vec_norm(&gc);
            if gc_norm < gnorm || gc_norm <= NEWTON_TOL {
                x = candidate;
                g = gc;
                gnorm = gc_norm;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence { steps, residual: gnorm });
        }
        steps += 1;
        converged = gnorm <= NEWTON_TOL * (1.0 + field.value(&x).abs());
    }
    if !converged {
        return Err(Error::NoConvergence { steps, residual: gnorm });
    }

    let hess = field_hessian(field, &x);
    let positivity = kernel::is_positive_definite(&hess, POSITIVITY_TOL)?;
    let hamiltonian = QuadraticHamiltonian::new(hess, vec![0.0; field.dim()], field.value(&x))?;
    Ok(SmallOscillation { fixed_point: x, hamiltonian, stable: positivity.is_positive_definite })
}

/// Normal-mode frequencies of the Lagrangian `L = (v.Tv - q.Uq)/2` with both
/// matrices positive-definite: the ascending square roots of the eigenvalues
/// of `T^-1/2 U T^-1/2`. These coincide with the symplectic spectrum of the
/// Hamiltonian `U (+) T^-1`.
pub fn lagrangian_modes(kinetic: &Matrix, potential: &Matrix) -> Result<Vec<f64>> {
    if kinetic.rows() != potential.rows() {
        return Err(Error::DimensionMismatch(format!(
            "kinetic is {}x{}, potential is {}x{}",
            kinetic.rows(),
            kinetic.cols(),
            potential.rows(),
            potential.cols()
        )));
    }
    potential.require_symmetric(kernel::SYMMETRY_TOL)?;
    let t_invsqrt = kernel::invsqrt_spd(kinetic)?;
    let reduced = (&(&t_invsqrt * potential) * &t_invsqrt).symmetrized();
    let dec = kernel::sym_eig(&reduced)?;
    if dec.eigenvalues[0] <= POSITIVITY_TOL * dec.eigenvalues.last().unwrap().max(0.0) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: dec.eigenvalues[0] });
    }
    Ok(dec.eigenvalues.iter().map(|&u| u.sqrt()).collect())
}
