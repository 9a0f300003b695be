//! The standard symplectic form, symplectic predicates, and the Williamson
//! decomposition of symmetric positive-definite matrices.
//!
//! Conventions: phase-space vectors are ordered `(q_1..q_n, p_1..p_n)` and
//! the symplectic form is the block matrix `J = [[0, I], [-I, 0]]`. A
//! symplectic matrix satisfies `S^T J S = J`; the Williamson decomposition
//! of an SPD matrix `M` is `S M S^T = Lambda` with `S` symplectic and
//! `Lambda = diag(mu_1..mu_n, mu_1..mu_n)`, `mu` ascending.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::{self, POSITIVITY_TOL};
use crate::matrix::{ComplexMatrix, Matrix};

/// Default relative tolerance on symplectic residuals.
pub const SYMPLECTIC_TOL: f64 = 1e-8;

/// The standard symplectic form on a 2n-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    n: usize,
}

impl SymplecticForm {
    pub fn degrees_of_freedom(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Dense `[[0, I], [-I, 0]]`.
    pub fn matrix(&self) -> Matrix {
        let n = self.n;
        Matrix::from_fn(2 * n, 2 * n, |i, j| {
            if i < n && j == i + n {
                1.0
            } else if i >= n && j == i - n {
                -1.0
            } else {
                0.0
            }
        })
    }

    /// `J v` without forming the matrix: `(q, p) -> (p, -q)`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), 2 * self.n);
        let n = self.n;
        let mut out = vec![0.0; 2 * n];
        for i in 0..n {
            out[i] = v[n + i];
            out[n + i] = -v[i];
        }
        out
    }
}

/// Standard form for `n >= 1` degrees of freedom.
pub fn standard_form(n: usize) -> Result<SymplecticForm> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one degree of freedom".into()));
    }
    Ok(SymplecticForm { n })
}

/// Outcome of a symplectic-condition test.
#[derive(Debug, Clone, Copy)]
pub struct SymplecticCheck {
    pub residual: f64,
    pub is_symplectic: bool,
}

/// Residual `max |S^T J S - J|` and a verdict against `tol`.
pub fn is_symplectic(s: &Matrix, tol: f64) -> Result<SymplecticCheck> {
    if !s.is_square() {
        return Err(Error::NonSquare { rows: s.rows(), cols: s.cols() });
    }
    if s.rows() % 2 != 0 || s.rows() == 0 {
        return Err(Error::OddDimension(s.rows()));
    }
    let j = standard_form(s.rows() / 2)?.matrix();
    let residual = (&(&(&s.transpose() * &j) * s) - &j).max_norm();
    Ok(SymplecticCheck { residual, is_symplectic: residual <= tol })
}

/// Williamson decomposition `S M S^T = Lambda` of an SPD matrix.
///
/// The input matrix is retained so the defining invariants stay checkable on
/// the result; `Lambda` is derived from `spectrum` on demand.
#[derive(Debug, Clone)]
pub struct WilliamsonResult {
    /// The symplectic congruence, `S^T J S = J`.
    pub s: Matrix,
    /// Symplectic eigenvalues `mu_1 <= ... <= mu_n`, all positive.
    pub spectrum: Vec<f64>,
    /// The decomposed matrix.
    pub m: Matrix,
}

impl WilliamsonResult {
    pub fn degrees_of_freedom(&self) -> usize {
        self.spectrum.len()
    }

    /// `diag(mu_1..mu_n, mu_1..mu_n)`.
    pub fn lambda(&self) -> Matrix {
        let mut paired = self.spectrum.clone();
        paired.extend_from_slice(&self.spectrum);
        Matrix::from_diagonal(&paired)
    }

    /// Residual `max |S^T J S - J|`.
    pub fn symplectic_residual(&self) -> f64 {
        let j = SymplecticForm { n: self.spectrum.len() }.matrix();
        (&(&(&self.s.transpose() * &j) * &self.s) - &j).max_norm()
    }

    /// Residual `max |S M S^T - Lambda|`.
    pub fn diagonalization_residual(&self) -> f64 {
        (&(&(&self.s * &self.m) * &self.s.transpose()) - &self.lambda()).max_norm()
    }
}

fn require_even_spd(m: &Matrix) -> Result<usize> {
    m.require_symmetric(kernel::SYMMETRY_TOL)?;
    if m.rows() % 2 != 0 || m.rows() == 0 {
        return Err(Error::OddDimension(m.rows()));
    }
    let pos = kernel::is_positive_definite(m, POSITIVITY_TOL)?;
    if !pos.is_positive_definite {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: pos.min_eigenvalue });
    }
    Ok(m.rows() / 2)
}

/// The Hermitian matrix `i sqrt(M) J sqrt(M)` whose eigenvalues are the
/// paired `+/- mu_j`.
fn hermitian_pair_matrix(sqrt_m: &Matrix, n: usize) -> ComplexMatrix {
    let j = SymplecticForm { n }.matrix();
    let skew = &(sqrt_m * &j) * sqrt_m;
    ComplexMatrix::from_fn(2 * n, 2 * n, |r, c| Complex64::new(0.0, skew[(r, c)]))
}

/// Symplectic spectrum of an SPD matrix: the positive half of the paired
/// eigenvalues of `i sqrt(M) J sqrt(M)`, ascending.
pub fn symplectic_spectrum(m: &Matrix) -> Result<Vec<f64>> {
    let n = require_even_spd(m)?;
    let sqrt_m = kernel::sqrt_spd(m)?;
    let herm = hermitian_pair_matrix(&sqrt_m, n);
    let dec = kernel::hermitian_eig(&herm)?;
    // eigenvalues ascend as (-mu_n .. -mu_1, mu_1 .. mu_n)
    Ok(dec.eigenvalues[n..].to_vec())
}

/// Williamson decomposition of an SPD matrix of even dimension.
///
/// Construction follows `S = sqrt(Lambda) O sqrt(M^-1)`. The orthogonal
/// factor comes from the eigenvectors `w_j` of the Hermitian matrix
/// `i sqrt(M) J sqrt(M)` at the positive eigenvalues `mu_j`: the rows of `O`
/// are `(sqrt(2) Im w_1 .. sqrt(2) Im w_n, sqrt(2) Re w_1 .. sqrt(2) Re w_n)`.
/// That pairing makes `O sqrt(M) J sqrt(M) O^T = Lambda J` hold plane by
/// plane, degenerate eigenvalues included. All invariants are verified
/// before returning.
pub fn williamson(m: &Matrix) -> Result<WilliamsonResult> {
    let n = require_even_spd(m)?;
    let dim = 2 * n;
    let dec = kernel::sym_eig(m)?;
    let q = &dec.eigenvectors;
    let sqrt_vals: Vec<f64> = dec.eigenvalues.iter().map(|&l| l.sqrt()).collect();
    let invsqrt_vals: Vec<f64> = sqrt_vals.iter().map(|&r| 1.0 / r).collect();
    let sqrt_m = &(q * &Matrix::from_diagonal(&sqrt_vals)) * &q.transpose();
    let invsqrt_m = &(q * &Matrix::from_diagonal(&invsqrt_vals)) * &q.transpose();

    let herm = hermitian_pair_matrix(&sqrt_m, n);
    let hdec = kernel::hermitian_eig(&herm)?;
    let spectrum: Vec<f64> = hdec.eigenvalues[n..].to_vec();
    if spectrum[0] <= 0.0 {
        return Err(Error::VerificationFailed(format!(
            "non-positive symplectic eigenvalue {} for an SPD input",
            spectrum[0]
        )));
    }

    // u_j = sqrt(2) Re w_j, v_j = sqrt(2) Im w_j are orthonormal because
    // w_j is orthogonal to its own conjugate (the -mu_j eigenvector).
    let mut o = Matrix::zeros(dim, dim);
    let sqrt2 = std::f64::consts::SQRT_2;
    for jcol in 0..n {
        let mut w = hdec.eigenvectors.column(n + jcol);
        phase_fix(&mut w);
        for i in 0..dim {
            o[(jcol, i)] = sqrt2 * w[i].im;
            o[(n + jcol, i)] = sqrt2 * w[i].re;
        }
    }

    // guard the pairing: each plane must carry +mu on the upper-right block
    let skew = &(&sqrt_m * &SymplecticForm { n }.matrix()) * &sqrt_m;
    for jcol in 0..n {
        let v_row: Vec<f64> = (0..dim).map(|i| o[(jcol, i)]).collect();
        let u_row: Vec<f64> = (0..dim).map(|i| o[(n + jcol, i)]).collect();
        let coupling = crate::matrix::dot(&v_row, &skew.matvec(&u_row));
        if coupling < 0.0 {
            for i in 0..dim {
                o[(jcol, i)] = u_row[i];
                o[(n + jcol, i)] = v_row[i];
            }
        }
    }

    let mut sqrt_lambda = spectrum.iter().map(|&mu| mu.sqrt()).collect::<Vec<_>>();
    sqrt_lambda.extend(sqrt_lambda.clone());
    let s = &(&Matrix::from_diagonal(&sqrt_lambda) * &o) * &invsqrt_m;

    let result = WilliamsonResult { s, spectrum, m: m.clone() };
    let scale = m.max_norm().max(1.0);
    if result.symplectic_residual() > SYMPLECTIC_TOL {
        return Err(Error::VerificationFailed(format!(
            "symplectic residual {:.3e} exceeds {:.1e}",
            result.symplectic_residual(),
            SYMPLECTIC_TOL
        )));
    }
    if result.diagonalization_residual() > SYMPLECTIC_TOL * scale {
        return Err(Error::VerificationFailed(format!(
            "diagonalization residual {:.3e} exceeds {:.1e}",
            result.diagonalization_residual(),
            SYMPLECTIC_TOL * scale
        )));
    }
    let det = result.s.det()?;
    if (det - 1.0).abs() > SYMPLECTIC_TOL {
        return Err(Error::VerificationFailed(format!("det S = {det}, expected 1")));
    }
    Ok(result)
}

/// Unit phase so the largest-magnitude component of `Re w` is positive;
/// keeps degenerate eigenspaces deterministic.
fn phase_fix(w: &mut [Complex64]) {
    let mut idx = 0;
    let mut best = 0.0f64;
    for (i, z) in w.iter().enumerate() {
        if z.re.abs() > best {
            best = z.re.abs();
            idx = i;
        }
    }
    if best > 0.0 && w[idx].re < 0.0 {
        for z in w.iter_mut() {
            *z = -*z;
        }
    }
}

/// Symplectic congruence `S^T M S`; the symplectic spectrum is invariant
/// under this map.
pub fn symplectic_congruence(m: &Matrix, s: &Matrix, tol: f64) -> Result<Matrix> {
    m.require_symmetric(kernel::SYMMETRY_TOL)?;
    if m.rows() != s.rows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, transform is {}x{}",
            m.rows(),
            m.cols(),
            s.rows(),
            s.cols()
        )));
    }
    let check = is_symplectic(s, tol)?;
    if !check.is_symplectic {
        return Err(Error::NotSymplectic { residual: check.residual });
    }
    Ok((&(&s.transpose() * m) * s).symmetrized())
}

/// Seeded random symplectic matrix `exp(J G tau)` for a random symmetric `G`.
pub fn random_symplectic_scaled(n: usize, seed: u64, tau: f64) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one degree of freedom".into()));
    }
    let dim = 2 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x: f64 = rng.random_range(-1.0..1.0);
            g[(i, j)] = x;
            g[(j, i)] = x;
        }
    }
    let j = SymplecticForm { n }.matrix();
    kernel::expm(&(&j * &g).scale(tau))
}

/// Seeded random symplectic matrix with unit generator scale.
pub fn random_symplectic(n: usize, seed: u64) -> Result<Matrix> {
    random_symplectic_scaled(n, seed, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_form_n1() {
        let j = standard_form(1).unwrap().matrix();
        assert_eq!(j.as_slice(), &[0.0, 1.0, -1.0, 0.0]);
        assert!(standard_form(0).is_err());
    }

    #[test]
    fn form_squares_to_minus_identity() {
        let form = standard_form(3).unwrap();
        let j = form.matrix();
        let jj = &j * &j;
        assert_eq!((&jj + &Matrix::identity(6)).max_norm(), 0.0);
    }

    #[test]
    fn form_transpose_is_inverse_and_negative() {
        let j = standard_form(2).unwrap().matrix();
        assert_eq!(j.transpose(), j.scale(-1.0));
        let prod = &j.transpose() * &j;
        assert_eq!((&prod - &Matrix::identity(4)).max_norm(), 0.0);
    }

    #[test]
    fn identity_is_symplectic() {
        let check = is_symplectic(&Matrix::identity(6), SYMPLECTIC_TOL).unwrap();
        assert!(check.is_symplectic);
        assert_eq!(check.residual, 0.0);
    }

    #[test]
    fn unit_determinant_2x2_is_symplectic() {
        let s = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(is_symplectic(&s, SYMPLECTIC_TOL).unwrap().is_symplectic);
    }

    #[test]
    fn scaled_identity_is_not_symplectic() {
        let s = Matrix::from_diagonal(&[2.0, 2.0]);
        let check = is_symplectic(&s, SYMPLECTIC_TOL).unwrap();
        assert!(!check.is_symplectic);
        assert!((check.residual - 3.0).abs() < 1e-15); // |4 J - J|
    }

    #[test]
    fn odd_dimension_rejected() {
        let err = is_symplectic(&Matrix::identity(3), SYMPLECTIC_TOL).unwrap_err();
        assert!(matches!(err, Error::OddDimension(3)));
    }

    #[test]
    fn spectrum_of_identity_is_ones() {
        let mu = symplectic_spectrum(&Matrix::identity(6)).unwrap();
        for m in mu {
            assert!((m - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_of_intro_hessian() {
        // Euclidean spectrum {1, 4}, symplectic spectrum {2}
        let m = Matrix::from_rows(&[vec![2.5, 1.5], vec![1.5, 2.5]]).unwrap();
        let mu = symplectic_spectrum(&m).unwrap();
        assert_eq!(mu.len(), 1);
        assert!((mu[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_n1_is_sqrt_det() {
        let m = Matrix::from_rows(&[vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let mu = symplectic_spectrum(&m).unwrap();
        assert!((mu[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn williamson_identity() {
        let res = williamson(&Matrix::identity(4)).unwrap();
        for mu in &res.spectrum {
            assert!((mu - 1.0).abs() < 1e-12);
        }
        assert!(res.symplectic_residual() < 1e-12);
        assert!(res.diagonalization_residual() < 1e-12);
    }

    #[test]
    fn williamson_diag_4_1() {
        let m = Matrix::from_diagonal(&[4.0, 1.0]);
        let res = williamson(&m).unwrap();
        assert!((res.spectrum[0] - 2.0).abs() < 1e-12);
        let lambda = &(&res.s * &m) * &res.s.transpose();
        assert!((lambda[(0, 0)] - 2.0).abs() < 1e-10);
        assert!((lambda[(1, 1)] - 2.0).abs() < 1e-10);
        assert!(lambda[(0, 1)].abs() < 1e-10);
    }

    #[test]
    fn williamson_rejects_indefinite() {
        let m = Matrix::from_diagonal(&[1.0, -1.0]);
        assert!(matches!(williamson(&m), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn williamson_already_diagonal_pairs() {
        // input already in Williamson form: spectrum equals the diagonal
        let m = Matrix::from_diagonal(&[0.5, 3.0, 0.5, 3.0]);
        let res = williamson(&m).unwrap();
        assert!((res.spectrum[0] - 0.5).abs() < 1e-12);
        assert!((res.spectrum[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn williamson_degenerate_spectrum() {
        // scaled identity: every symplectic eigenvalue equals the scale
        let res = williamson(&Matrix::identity(8).scale(2.5)).unwrap();
        for mu in &res.spectrum {
            assert!((mu - 2.5).abs() < 1e-12);
        }
        assert!(res.symplectic_residual() < 1e-10);
    }

    #[test]
    fn congruence_identity_returns_input() {
        let m = Matrix::from_rows(&[vec![2.5, 1.5], vec![1.5, 2.5]]).unwrap();
        let out = symplectic_congruence(&m, &Matrix::identity(2), SYMPLECTIC_TOL).unwrap();
        assert!((&out - &m).max_norm() < 1e-15);
    }

    #[test]
    fn congruence_preserves_spectrum_and_det() {
        let m = Matrix::from_rows(&[
            vec![3.0, 0.5, 0.0, 0.1],
            vec![0.5, 2.0, -0.2, 0.0],
            vec![0.0, -0.2, 1.5, 0.3],
            vec![0.1, 0.0, 0.3, 2.5],
        ])
        .unwrap();
        let s = random_symplectic(2, 7).unwrap();
        let m2 = symplectic_congruence(&m, &s, SYMPLECTIC_TOL).unwrap();
        let mu1 = symplectic_spectrum(&m).unwrap();
        let mu2 = symplectic_spectrum(&m2).unwrap();
        for (a, b) in mu1.iter().zip(&mu2) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
        assert!((m.det().unwrap() - m2.det().unwrap()).abs() < 1e-8 * m.det().unwrap().abs());
    }

    #[test]
    fn congruence_rejects_non_symplectic() {
        let m = Matrix::identity(2);
        let s = Matrix::from_diagonal(&[2.0, 2.0]);
        assert!(matches!(
            symplectic_congruence(&m, &s, SYMPLECTIC_TOL),
            Err(Error::NotSymplectic { .. })
        ));
    }

    #[test]
    fn random_symplectic_passes_check() {
        for seed in [0u64, 1, 42] {
            let s = random_symplectic(3, seed).unwrap();
            let check = is_symplectic(&s, SYMPLECTIC_TOL).unwrap();
            assert!(check.is_symplectic, "seed {seed}: residual {}", check.residual);
        }
    }

    #[test]
    fn random_symplectic_zero_scale_is_identity() {
        let s = random_symplectic_scaled(2, 9, 0.0).unwrap();
        assert!((&s - &Matrix::identity(4)).max_norm() < 1e-15);
    }

    #[test]
    fn random_symplectic_group_closure() {
        let a = random_symplectic(2, 3).unwrap();
        let b = random_symplectic(2, 4).unwrap();
        let check = is_symplectic(&(&a * &b), SYMPLECTIC_TOL).unwrap();
        assert!(check.is_symplectic);
    }

    #[test]
    fn random_symplectic_deterministic_per_seed() {
        let a = random_symplectic(2, 11).unwrap();
        let b = random_symplectic(2, 11).unwrap();
        assert_eq!(a, b);
    }
}
