//! Robertson-Schrodinger validation of covariance matrices.
//!
//! A covariance matrix `V` belongs to a quantum state iff the Hermitian
//! matrix `Delta = V + (i hbar / 2) J` is positive-semidefinite, which for
//! positive-definite `V` is equivalent to every symplectic eigenvalue of `V`
//! being at least `hbar / 2`. Both routes are computed and cross-checked:
//! the diagonalized form `Delta' = Lambda_V + (i hbar / 2) J` has the closed
//! eigenvalue set `mu_j +/- hbar/2`, but the direct Hermitian eigensolve is
//! treated as ground truth and also covers singular (classical) covariances
//! where the symplectic route does not exist.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{self, POSITIVITY_TOL};
use crate::matrix::{ComplexMatrix, Matrix};
use crate::symplectic::{is_symplectic, standard_form, symplectic_spectrum};

/// Relative slack applied to the `mu >= hbar/2` and `Delta >= 0` verdicts so
/// exactly saturated states are not rejected on rounding.
pub const VALIDITY_TOL: f64 = 1e-9;

/// Symmetric positive-semidefinite matrix of second moments, with an
/// optional mean vector.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    v: Matrix,
    mean: Option<Vec<f64>>,
}

impl CovarianceMatrix {
    /// Validates symmetry, even dimension, and positive-semidefiniteness
    /// (`lambda_min >= -tol |V|`).
    pub fn new(v: Matrix, mean: Option<Vec<f64>>) -> Result<Self> {
        v.require_symmetric(kernel::SYMMETRY_TOL)?;
        if v.rows() % 2 != 0 || v.rows() == 0 {
            return Err(Error::OddDimension(v.rows()));
        }
        if let Some(m) = &mean {
            if m.len() != v.rows() {
                return Err(Error::DimensionMismatch(format!(
                    "mean has length {}, expected {}",
                    m.len(),
                    v.rows()
                )));
            }
            if !m.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        let dec = kernel::sym_eig(&v)?;
        let min = dec.eigenvalues[0];
        if min < -VALIDITY_TOL * v.max_norm().max(1e-300) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(Self { v: v.symmetrized(), mean })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.v
    }

    pub fn mean(&self) -> Option<&[f64]> {
        self.mean.as_deref()
    }

    pub fn degrees_of_freedom(&self) -> usize {
        self.v.rows() / 2
    }
}

/// Verdict of the Robertson-Schrodinger check with the evidence from both
/// routes.
#[derive(Debug, Clone)]
pub struct UncertaintyReport {
    /// Symplectic eigenvalues of `V`, ascending; `None` when `V` is
    /// singular and the Williamson route does not apply.
    pub symplectic_spectrum: Option<Vec<f64>>,
    /// Smallest symplectic eigenvalue, when available.
    pub min_mu: Option<f64>,
    /// Smallest Euclidean eigenvalue of `Delta = V + (i hbar/2) J`.
    pub delta_min_eigenvalue: f64,
    /// The quantum verdict: `min_mu >= hbar/2` up to tolerance (symplectic
    /// route) or `Delta >= 0` up to tolerance (direct route on singular `V`).
    pub valid: bool,
    /// Classical admissibility, `V >= 0`; always true for a constructed
    /// [`CovarianceMatrix`] but reported for completeness.
    pub classical_ok: bool,
}

/// Assemble the Hermitian matrix `V + (i hbar / 2) J`.
fn delta_matrix(v: &Matrix, hbar: f64) -> ComplexMatrix {
    let n = v.rows() / 2;
    let j = standard_form(n).expect("validated dimension").matrix();
    ComplexMatrix::from_fn(v.rows(), v.rows(), |r, c| {
        Complex64::new(v[(r, c)], 0.5 * hbar * j[(r, c)])
    })
}

fn require_hbar(hbar: f64) -> Result<()> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    Ok(())
}

/// Smallest Euclidean eigenvalue of `Delta = V + (i hbar/2) J`; works for
/// singular (classical) covariances.
pub fn psd_check_direct(cov: &CovarianceMatrix, hbar: f64) -> Result<f64> {
    require_hbar(hbar)?;
    let dec = kernel::hermitian_eig(&delta_matrix(cov.matrix(), hbar))?;
    Ok(dec.eigenvalues[0])
}

/// Euclidean spectrum of the diagonalized `Delta' = Lambda_V + (i hbar/2) J`:
/// the closed form `{mu_j +/- hbar/2}`, ascending. Requires `V > 0`.
pub fn delta_spectrum(cov: &CovarianceMatrix, hbar: f64) -> Result<Vec<f64>> {
    require_hbar(hbar)?;
    let pos = kernel::is_positive_definite(cov.matrix(), POSITIVITY_TOL)?;
    if !pos.is_positive_definite {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: pos.min_eigenvalue });
    }
    let mu = symplectic_spectrum(cov.matrix())?;
    let mut out: Vec<f64> = mu.iter().flat_map(|&m| [m - 0.5 * hbar, m + 0.5 * hbar]).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Robertson-Schrodinger check of a covariance matrix.
///
/// Always evaluates the direct route; adds the symplectic route when `V` is
/// positive-definite. For singular `V` the report carries the direct verdict
/// and `None` in the symplectic fields.
pub fn rs_check(cov: &CovarianceMatrix, hbar: f64) -> Result<UncertaintyReport> {
    require_hbar(hbar)?;
    let v = cov.matrix();
    let scale = v.max_norm().max(hbar);
    let delta_min = psd_check_direct(cov, hbar)?;
    let direct_valid = delta_min >= -VALIDITY_TOL * scale;

    let pos = kernel::is_positive_definite(v, POSITIVITY_TOL)?;
    let classical_ok = pos.min_eigenvalue >= -VALIDITY_TOL * scale;
    if !pos.is_positive_definite {
        return Ok(UncertaintyReport {
            symplectic_spectrum: None,
            min_mu: None,
            delta_min_eigenvalue: delta_min,
            valid: direct_valid,
            classical_ok,
        });
    }

    let spectrum = symplectic_spectrum(v)?;
    let min_mu = spectrum[0];
    let valid = min_mu >= 0.5 * hbar * (1.0 - VALIDITY_TOL);
    Ok(UncertaintyReport {
        symplectic_spectrum: Some(spectrum),
        min_mu: Some(min_mu),
        delta_min_eigenvalue: delta_min,
        valid,
        classical_ok,
    })
}

/// Covariance transformation `V' = S V S^T` under the symplectic coordinate
/// change `x' = S x`; the uncertainty verdict is invariant.
pub fn covariance_congruence(
    cov: &CovarianceMatrix,
    s: &Matrix,
    tol: f64,
) -> Result<CovarianceMatrix> {
    if s.rows() != cov.matrix().rows() {
        return Err(Error::DimensionMismatch(format!(
            "transform is {}x{}, covariance is {}x{}",
            s.rows(),
            s.cols(),
            cov.matrix().rows(),
            cov.matrix().cols()
        )));
    }
    let check = is_symplectic(s, tol)?;
    if !check.is_symplectic {
        return Err(Error::NotSymplectic { residual: check.residual });
    }
    let transformed = (&(s * cov.matrix()) * &s.transpose()).symmetrized();
    let mean = cov.mean().map(|m| s.matvec(m));
    CovarianceMatrix::new(transformed, mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{random_symplectic, SYMPLECTIC_TOL};

    fn scaled_identity_cov(factor: f64, n: usize) -> CovarianceMatrix {
        CovarianceMatrix::new(Matrix::identity(2 * n).scale(factor), None).unwrap()
    }

    #[test]
    fn vacuum_saturates_the_bound() {
        let hbar = 1.0;
        let cov = scaled_identity_cov(0.5 * hbar, 2);
        let report = rs_check(&cov, hbar).unwrap();
        assert!(report.valid);
        assert!((report.min_mu.unwrap() - 0.5).abs() < 1e-12);
        assert!(report.delta_min_eigenvalue.abs() < 1e-12);
    }

    #[test]
    fn below_vacuum_is_invalid() {
        let hbar = 1.0;
        let cov = scaled_identity_cov(0.25 * hbar, 2);
        let report = rs_check(&cov, hbar).unwrap();
        assert!(!report.valid);
        assert!(report.classical_ok);
        assert!(report.delta_min_eigenvalue < -0.2);
    }

    #[test]
    fn hbar_scales_the_bound() {
        // same matrix, different hbar conventions
        let cov = scaled_identity_cov(1.0, 1);
        assert!(rs_check(&cov, 2.0).unwrap().valid);
        assert!(!rs_check(&cov, 2.1).unwrap().valid);
    }

    #[test]
    fn delta_spectrum_closed_form() {
        let hbar = 0.7;
        // V = hbar I: eigenvalues are hbar/2 and 3 hbar/2 per mode
        let cov = scaled_identity_cov(hbar, 2);
        let ds = delta_spectrum(&cov, hbar).unwrap();
        assert_eq!(ds.len(), 4);
        assert!((ds[0] - 0.5 * hbar).abs() < 1e-12);
        assert!((ds[1] - 0.5 * hbar).abs() < 1e-12);
        assert!((ds[2] - 1.5 * hbar).abs() < 1e-12);
        assert!((ds[3] - 1.5 * hbar).abs() < 1e-12);
    }

    #[test]
    fn delta_spectrum_matches_direct_eigensolve() {
        // Delta' = Lambda_V + (i hbar/2) J diagonalized directly must agree
        // with the mu +/- hbar/2 closed form
        let hbar = 1.3;
        let s = random_symplectic(2, 21).unwrap();
        let base = Matrix::from_diagonal(&[0.9, 1.7, 0.9, 1.7]);
        let v = (&(&s * &base) * &s.transpose()).symmetrized();
        let cov = CovarianceMatrix::new(v, None).unwrap();
        let closed = delta_spectrum(&cov, hbar).unwrap();

        let mu = symplectic_spectrum(cov.matrix()).unwrap();
        let mut lambda_paired = mu.clone();
        lambda_paired.extend_from_slice(&mu);
        let diag_cov =
            CovarianceMatrix::new(Matrix::from_diagonal(&lambda_paired), None).unwrap();
        let direct =
            kernel::hermitian_eig(&delta_matrix(diag_cov.matrix(), hbar)).unwrap().eigenvalues;
        for (c, d) in closed.iter().zip(&direct) {
            assert!((c - d).abs() < 1e-9, "{c} vs {d}");
        }
    }

    #[test]
    fn delta_spectrum_rejects_singular_covariance() {
        let v = Matrix::from_diagonal(&[1.0, 0.0]);
        let cov = CovarianceMatrix::new(v, None).unwrap();
        assert!(matches!(delta_spectrum(&cov, 1.0), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn singular_classical_covariance_direct_route() {
        // a perfectly sharp direction is classically fine, quantum invalid
        let v = Matrix::from_diagonal(&[1.0, 0.0]);
        let cov = CovarianceMatrix::new(v, None).unwrap();
        let report = rs_check(&cov, 1.0).unwrap();
        assert!(report.classical_ok);
        assert!(!report.valid);
        assert!(report.symplectic_spectrum.is_none());
        assert!(report.min_mu.is_none());
        assert!(report.delta_min_eigenvalue < -0.2);
    }

    #[test]
    fn diagonal_covariance_reduces_to_pairwise_conditions() {
        // diag(vq1, vq2, vp1, vp2) is valid iff vqj vpj >= hbar^2/4 per mode
        let hbar = 1.0;
        let ok = Matrix::from_diagonal(&[2.0, 0.3, 0.2, 1.0]);
        let cov = CovarianceMatrix::new(ok, None).unwrap();
        assert!(rs_check(&cov, hbar).unwrap().valid); // 2*0.2 = 0.4 >= 0.25, 0.3*1 >= 0.25

        let bad = Matrix::from_diagonal(&[2.0, 0.3, 0.1, 1.0]);
        let cov = CovarianceMatrix::new(bad, None).unwrap();
        assert!(!rs_check(&cov, hbar).unwrap().valid); // 2*0.1 = 0.2 < 0.25
    }

    #[test]
    fn congruence_identity_and_mean_transport() {
        let cov = CovarianceMatrix::new(Matrix::identity(2), Some(vec![1.0, -2.0])).unwrap();
        let same = covariance_congruence(&cov, &Matrix::identity(2), SYMPLECTIC_TOL).unwrap();
        assert!((same.matrix() - cov.matrix()).max_norm() < 1e-15);
        assert_eq!(same.mean().unwrap(), &[1.0, -2.0]);
    }

    #[test]
    fn congruence_preserves_verdict_and_min_mu() {
        let hbar = 1.0;
        for (seed, factor) in [(3u64, 0.8), (4, 0.45)] {
            let base = Matrix::identity(4).scale(factor);
            let cov = CovarianceMatrix::new(base, None).unwrap();
            let s = random_symplectic(2, seed).unwrap();
            let moved = covariance_congruence(&cov, &s, SYMPLECTIC_TOL).unwrap();
            let before = rs_check(&cov, hbar).unwrap();
            let after = rs_check(&moved, hbar).unwrap();
            assert_eq!(before.valid, after.valid, "seed {seed}");
            let (a, b) = (before.min_mu.unwrap(), after.min_mu.unwrap());
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn congruence_with_williamson_transform_diagonalizes() {
        let s = random_symplectic(1, 17).unwrap();
        let base = Matrix::from_diagonal(&[1.4, 1.4]);
        let v = (&(&s * &base) * &s.transpose()).symmetrized();
        let cov = CovarianceMatrix::new(v.clone(), None).unwrap();
        let wr = crate::symplectic::williamson(&v).unwrap();
        let diag = covariance_congruence(&cov, &wr.s, SYMPLECTIC_TOL).unwrap();
        // paired variances both equal the symplectic eigenvalue
        let d = diag.matrix();
        assert!((d[(0, 0)] - wr.spectrum[0]).abs() < 1e-9);
        assert!((d[(1, 1)] - wr.spectrum[0]).abs() < 1e-9);
        assert!(d[(0, 1)].abs() < 1e-9);
    }

    #[test]
    fn congruence_rejects_non_symplectic() {
        let cov = scaled_identity_cov(1.0, 1);
        let bad = Matrix::from_diagonal(&[2.0, 2.0]);
        assert!(matches!(
            covariance_congruence(&cov, &bad, SYMPLECTIC_TOL),
            Err(Error::NotSymplectic { .. })
        ));
    }

    #[test]
    fn construction_rejects_negative_covariance() {
        let v = Matrix::from_diagonal(&[1.0, -0.2]);
        assert!(matches!(
            CovarianceMatrix::new(v, None),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }
}
