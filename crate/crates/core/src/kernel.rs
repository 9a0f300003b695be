//! Numeric kernel: eigendecompositions, SPD square roots, matrix
//! exponentials, and positivity predicates.
//!
//! The eigensolvers are cyclic Jacobi sweeps. At phase-space dimensions
//! (2n up to a few tens) Jacobi is plenty fast and delivers eigenvector
//! orthogonality to machine precision, which the symplectic assembly
//! downstream depends on.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Matrix};

/// Relative tolerance for symmetry/Hermiticity preconditions.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Default relative positivity threshold: `lambda_min > tol * lambda_max`.
pub const POSITIVITY_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a real symmetric matrix.
///
/// Eigenvalues ascend; `eigenvectors` holds orthonormal columns in the same
/// order, each with its largest-magnitude component made positive so the
/// output is deterministic.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    /// Reassemble `Q diag(lambda) Q^T`.
    pub fn reconstruct(&self) -> Matrix {
        let q = &self.eigenvectors;
        let lam = Matrix::from_diagonal(&self.eigenvalues);
        &(q * &lam) * &q.transpose()
    }
}

/// Eigendecomposition of a complex Hermitian matrix: real ascending
/// eigenvalues, unitary eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
pub fn sym_eig(a: &Matrix) -> Result<SpectralDecomposition> {
    a.require_symmetric(SYMMETRY_TOL)?;
    let n = a.rows();
    let mut m = a.symmetrized();
    let mut q = Matrix::identity(n);
    let scale = m.max_norm().max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for r in (p + 1)..n {
                off = off.max(m[(p, r)].abs());
            }
        }
        if off <= f64::EPSILON * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apq = m[(p, r)];
                if apq.abs() <= f64::EPSILON * scale * 1e-2 {
                    continue;
                }
                let (c, s) = jacobi_rotation(m[(p, p)], m[(r, r)], apq);
                apply_real_rotation(&mut m, &mut q, p, r, c, s);
            }
        }
    }
    if !converged {
        // one last look after the final sweep
        let mut off = 0.0f64;
        for p in 0..n {
            for r in (p + 1)..n {
                off = off.max(m[(p, r)].abs());
            }
        }
        if off > 1e3 * f64::EPSILON * scale {
            return Err(Error::NonConvergent { sweeps: MAX_SWEEPS });
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[i].partial_cmp(&eigenvalues[j]).unwrap());
    eigenvalues = order.iter().map(|&i| m[(i, i)]).collect();

    let mut vectors = Matrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let mut col = q.column(old_col);
        fix_real_sign(&mut col);
        for i in 0..n {
            vectors[(i, new_col)] = col[i];
        }
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors: vectors })
}

/// Classic two-sided Jacobi rotation annihilating the (p,q) entry.
fn jacobi_rotation(app: f64, aqq: f64, apq: f64) -> (f64, f64) {
    let tau = (aqq - app) / (2.0 * apq);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c)
}

fn apply_real_rotation(m: &mut Matrix, q: &mut Matrix, p: usize, r: usize, c: f64, s: f64) {
    let n = m.rows();
    let app = m[(p, p)];
    let arr = m[(r, r)];
    let apr = m[(p, r)];
    for k in 0..n {
        if k == p || k == r {
            continue;
        }
        let akp = m[(k, p)];
        let akr = m[(k, r)];
        let new_kp = c * akp - s * akr;
        let new_kr = s * akp + c * akr;
        m[(k, p)] = new_kp;
        m[(p, k)] = new_kp;
        m[(k, r)] = new_kr;
        m[(r, k)] = new_kr;
    }
    m[(p, p)] = c * c * app - 2.0 * c * s * apr + s * s * arr;
    m[(r, r)] = s * s * app + 2.0 * c * s * apr + c * c * arr;
    m[(p, r)] = 0.0;
    m[(r, p)] = 0.0;
    for k in 0..n {
        let qkp = q[(k, p)];
        let qkr = q[(k, r)];
        q[(k, p)] = c * qkp - s * qkr;
        q[(k, r)] = s * qkp + c * qkr;
    }
}

fn fix_real_sign(col: &mut [f64]) {
    let mut idx = 0;
    let mut best = 0.0f64;
    for (i, &x) in col.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            idx = i;
        }
    }
    if col[idx] < 0.0 {
        for x in col.iter_mut() {
            *x = -*x;
        }
    }
}

/// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
///
/// Each rotation first strips the phase of the pivot entry, then applies the
/// real Jacobi rotation, keeping the iteration unitary throughout.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianDecomposition> {
    a.require_hermitian(SYMMETRY_TOL)?;
    let n = a.rows();
    // enforce exact Hermiticity before iterating
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| {
        let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
        if i == j {
            Complex64::new(z.re, 0.0)
        } else {
            z
        }
    });
    let mut q = ComplexMatrix::identity(n);
    let scale = m.max_norm().max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for r in (p + 1)..n {
                off = off.max(m[(p, r)].norm());
            }
        }
        if off <= f64::EPSILON * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = m[(p, r)];
                let mag = apr.norm();
                if mag <= f64::EPSILON * scale * 1e-2 {
                    continue;
                }
                let phase = apr / mag;
                let (c, s) = jacobi_rotation(m[(p, p)].re, m[(r, r)].re, mag);
                apply_hermitian_rotation(&mut m, &mut q, p, r, c, s, phase);
            }
        }
    }
    if !converged {
        let mut off = 0.0f64;
        for p in 0..n {
            for r in (p + 1)..n {
                off = off.max(m[(p, r)].norm());
            }
        }
        if off > 1e3 * f64::EPSILON * scale {
            return Err(Error::NonConvergent { sweeps: MAX_SWEEPS });
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[i].partial_cmp(&eigenvalues[j]).unwrap());
    eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();

    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        let mut col = q.column(old_col);
        fix_complex_phase(&mut col);
        for i in 0..n {
            vectors[(i, new_col)] = col[i];
        }
    }
    Ok(HermitianDecomposition { eigenvalues, eigenvectors: vectors })
}

/// Unitary update `A <- U^dag A U`, `Q <- Q U`, where the (p,r) plane of `U`
/// is `[[c, s*phase], [-s*conj(phase), c]]`.
fn apply_hermitian_rotation(
    m: &mut ComplexMatrix,
    q: &mut ComplexMatrix,
    p: usize,
    r: usize,
    c: f64,
    s: f64,
    phase: Complex64,
) {
    let n = m.rows();
    let app = m[(p, p)].re;
    let arr = m[(r, r)].re;
    let mag = m[(p, r)].norm();
    for k in 0..n {
        if k == p || k == r {
            continue;
        }
        let akp = m[(k, p)];
        let akr = m[(k, r)];
        let new_kp = akp * c - akr * s * phase.conj();
        let new_kr = akp * s * phase + akr * c;
        m[(k, p)] = new_kp;
        m[(p, k)] = new_kp.conj();
        m[(k, r)] = new_kr;
        m[(r, k)] = new_kr.conj();
    }
    m[(p, p)] = Complex64::new(c * c * app - 2.0 * c * s * mag + s * s * arr, 0.0);
    m[(r, r)] = Complex64::new(s * s * app + 2.0 * c * s * mag + c * c * arr, 0.0);
    m[(p, r)] = Complex64::new(0.0, 0.0);
    m[(r, p)] = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let qkp = q[(k, p)];
        let qkr = q[(k, r)];
        q[(k, p)] = qkp * c - qkr * s * phase.conj();
        q[(k, r)] = qkp * s * phase + qkr * c;
    }
}

/// Rotate a unit eigenvector by a global phase so its largest-magnitude
/// component is real and positive.
fn fix_complex_phase(col: &mut [Complex64]) {
    let mut idx = 0;
    let mut best = 0.0f64;
    for (i, z) in col.iter().enumerate() {
        if z.norm() > best {
            best = z.norm();
            idx = i;
        }
    }
    if best == 0.0 {
        return;
    }
    let phase = col[idx].conj() / best;
    for z in col.iter_mut() {
        *z *= phase;
    }
}

/// Positivity verdict together with the extreme eigenvalues it was based on.
#[derive(Debug, Clone, Copy)]
pub struct Positivity {
    pub is_positive_definite: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// `true` iff `lambda_min > rel_tol * lambda_max` with `lambda_max > 0`.
pub fn is_positive_definite(a: &Matrix, rel_tol: f64) -> Result<Positivity> {
    let dec = sym_eig(a)?;
    let min = dec.eigenvalues[0];
    let max = *dec.eigenvalues.last().unwrap();
    Ok(Positivity {
        is_positive_definite: max > 0.0 && min > rel_tol * max,
        min_eigenvalue: min,
        max_eigenvalue: max,
    })
}

/// Apply a scalar function to an SPD matrix through its eigenbasis.
pub(crate) fn spd_spectral_map(a: &Matrix, f: impl Fn(f64) -> f64) -> Result<Matrix> {
    let dec = sym_eig(a)?;
    let min = dec.eigenvalues[0];
    let max = *dec.eigenvalues.last().unwrap();
    if !(max > 0.0 && min > POSITIVITY_TOL * max) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    let mapped: Vec<f64> = dec.eigenvalues.iter().map(|&l| f(l)).collect();
    let q = &dec.eigenvectors;
    Ok(&(q * &Matrix::from_diagonal(&mapped)) * &q.transpose())
}

/// Principal square root of a symmetric positive-definite matrix.
pub fn sqrt_spd(a: &Matrix) -> Result<Matrix> {
    spd_spectral_map(a, f64::sqrt)
}

/// Inverse principal square root of a symmetric positive-definite matrix.
pub fn invsqrt_spd(a: &Matrix) -> Result<Matrix> {
    spd_spectral_map(a, |l| 1.0 / l.sqrt())
}

/// Matrix exponential by scaling and squaring with a diagonal Pade(6)
/// approximant.
pub fn expm(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }

    // scale until the norm is comfortably inside the Pade(6) accuracy radius
    let norm = inf_norm(a);
    let mut squarings = 0u32;
    let mut scaled = a.clone();
    if norm > 0.25 {
        squarings = (norm / 0.25).log2().ceil() as u32;
        scaled = a.scale(0.5f64.powi(squarings as i32));
    }

    // diagonal Pade(6): N = sum c_k A^k, D = sum (-1)^k c_k A^k
    const C: [f64; 7] = [
        1.0,
        0.5,
        5.0 / 44.0,
        1.0 / 66.0,
        1.0 / 792.0,
        1.0 / 15_840.0,
        1.0 / 665_280.0,
    ];
    let mut power = Matrix::identity(n);
    let mut num = Matrix::identity(n);
    let mut den = Matrix::identity(n);
    for (k, &coeff) in C.iter().enumerate().skip(1) {
        power = &power * &scaled;
        num = &num + &power.scale(coeff);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        den = &den + &power.scale(sign * coeff);
    }

    let lu = den.lu().map_err(|_| Error::NonConvergent { sweeps: 0 })?;
    let mut result = Matrix::zeros(n, n);
    for j in 0..n {
        let col = lu.solve(&num.column(j))?;
        for i in 0..n {
            result[(i, j)] = col[i];
        }
    }

    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

fn inf_norm(a: &Matrix) -> f64 {
    (0..a.rows()).fold(0.0f64, |acc, i| acc.max(a.row(i).iter().map(|x| x.abs()).sum()))
}
