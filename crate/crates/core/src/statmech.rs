//! Canonical-ensemble thermodynamics of quadratic Hamiltonians with a
//! positive-definite Hessian.
//!
//! The partition function factorizes over normal modes,
//! `Z = exp(-beta H_0') / 2^n * prod_k csch(beta hbar mu_k / 2)`, where the
//! `mu_k` are the symplectic eigenvalues of the Hessian and
//! `H_0' = H_0 - xi . H^-1 xi / 2`. Every derived quantity therefore only
//! depends on the symplectic spectrum and is invariant under symplectic
//! congruences of the model. All products live in the log domain; `csch`
//! factors underflow long before `log Z` loses accuracy.

use crate::dynamics::QuadraticHamiltonian;
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::symplectic::{symplectic_spectrum, williamson};

/// A quadratic Hamiltonian in contact with a heat bath.
#[derive(Debug, Clone)]
pub struct ThermalModel {
    qh: QuadraticHamiltonian,
    beta: f64,
    hbar: f64,
    kb: f64,
}

impl ThermalModel {
    /// `beta`, `hbar`, `kb` must be positive and finite; the Hessian must be
    /// positive-definite for any thermodynamic quantity to exist, which is
    /// checked when the spectrum is first needed.
    pub fn new(qh: QuadraticHamiltonian, beta: f64, hbar: f64, kb: f64) -> Result<Self> {
        for (name, v) in [("beta", beta), ("hbar", hbar), ("kb", kb)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { qh, beta, hbar, kb })
    }

    /// Natural units: `hbar = kb = 1`.
    pub fn natural(qh: QuadraticHamiltonian, beta: f64) -> Result<Self> {
        Self::new(qh, beta, 1.0, 1.0)
    }

    pub fn hamiltonian(&self) -> &QuadraticHamiltonian {
        &self.qh
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn kb(&self) -> f64 {
        self.kb
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.qh.clone(), beta, self.hbar, self.kb)
    }

    /// Mode frequencies (symplectic spectrum of the Hessian), ascending.
    pub fn frequencies(&self) -> Result<Vec<f64>> {
        symplectic_spectrum(self.qh.hessian())
    }

    /// Offset `H_0' = H_0 - xi . H^-1 xi / 2` shared by all closed forms.
    pub fn offset(&self) -> Result<f64> {
        let xi = self.qh.xi();
        if xi.iter().all(|&x| x == 0.0) {
            return Ok(self.qh.h0());
        }
        let h_inv_xi = self.qh.hessian().solve(xi)?;
        Ok(self.qh.h0() - 0.5 * dot(xi, &h_inv_xi))
    }
}

/// `ln(2 sinh x)` for `x > 0` without overflowing at large `x`.
fn ln_2sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp()).ln_1p()
}

/// `coth x` for `x > 0`.
fn coth(x: f64) -> f64 {
    let e = (-2.0 * x).exp();
    (1.0 + e) / (1.0 - e)
}

/// Partition function in the log domain; `z` is populated when `exp(log_z)`
/// is representable.
#[derive(Debug, Clone, Copy)]
pub struct PartitionFunction {
    pub log_z: f64,
    pub z: Option<f64>,
}

fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// `log Z = -beta H_0' - sum_k ln(2 sinh(beta hbar mu_k / 2))`.
pub fn partition_function(model: &ThermalModel) -> Result<PartitionFunction> {
    let mu = model.frequencies()?;
    let offset = model.offset()?;
    let mut log_z = -model.beta * offset;
    for &m in &mu {
        log_z -= ln_2sinh(0.5 * model.beta * model.hbar * m);
    }
    Ok(PartitionFunction { log_z, z: finite_or_none(log_z.exp()) })
}

/// Thermodynamic potentials at a single inverse temperature.
///
/// `U` and `C` are the closed forms obtained by differentiating `log Z`
/// analytically; the test-suite cross-checks them against central finite
/// differences of `log Z` in `beta`.
#[derive(Debug, Clone, Copy)]
pub struct ThermoReport {
    /// Log partition function (dimensionless).
    pub log_z: f64,
    /// `exp(log_z)` when representable.
    pub z: Option<f64>,
    /// Internal energy `U = -d(log Z)/d(beta)` (energy).
    pub internal_energy: f64,
    /// Helmholtz free energy `F = -log Z / beta` (energy).
    pub free_energy: f64,
    /// Entropy `S = kb beta (U - F)` (energy per temperature).
    pub entropy: f64,
    /// Heat capacity `C = kb beta^2 d2(log Z)/d(beta)2` (energy per
    /// temperature); positive for every positive-definite Hessian.
    pub heat_capacity: f64,
}

pub fn thermo_report(model: &ThermalModel) -> Result<ThermoReport> {
    let mu = model.frequencies()?;
    let offset = model.offset()?;
    let (beta, hbar, kb) = (model.beta, model.hbar, model.kb);

    let mut log_z = -beta * offset;
    let mut internal_energy = offset;
    let mut heat_capacity = 0.0;
    for &m in &mu {
        let x = 0.5 * beta * hbar * m;
        log_z -= ln_2sinh(x);
        internal_energy += 0.5 * hbar * m * coth(x);
        // (x csch x)^2 * kb, computed through exp(-x) to survive large x
        let e = (-x).exp();
        let xcsch = 2.0 * x * e / (1.0 - e * e);
        heat_capacity += kb * xcsch * xcsch;
    }
    let free_energy = -log_z / beta;
    let entropy = kb * beta * (internal_energy - free_energy);
    Ok(ThermoReport {
        log_z,
        z: finite_or_none(log_z.exp()),
        internal_energy,
        free_energy,
        entropy,
        heat_capacity,
    })
}

/// Classical-limit partition function
/// `Z_c = exp(-beta H_0') / ((beta hbar)^n prod_k mu_k)`; the product of the
/// symplectic eigenvalues equals `sqrt(det H)`.
pub fn log_classical_partition_function(model: &ThermalModel) -> Result<f64> {
    let mu = model.frequencies()?;
    let offset = model.offset()?;
    let mut log_z = -model.beta * offset;
    for &m in &mu {
        log_z -= (model.beta * model.hbar * m).ln();
    }
    Ok(log_z)
}

pub fn classical_partition_function(model: &ThermalModel) -> Result<f64> {
    Ok(log_classical_partition_function(model)?.exp())
}

/// Bosonic occupation numbers `nu_j = 1 / (exp(beta hbar mu_j) - 1)`,
/// ordered like the ascending mode frequencies (so non-increasing).
pub fn occupation_numbers(model: &ThermalModel) -> Result<Vec<f64>> {
    let mu = model.frequencies()?;
    Ok(mu.iter().map(|&m| 1.0 / (model.beta * model.hbar * m).exp_m1()).collect())
}

/// Covariance matrix of the thermal state,
/// `V = (hbar/2) S_H^T (N (+) N) S_H` with
/// `N = diag(coth(beta hbar mu_j / 2))`.
///
/// Its symplectic spectrum is `(hbar/2) coth(beta hbar mu_j / 2)`, which is
/// at least `hbar/2` for every `beta`, so every thermal covariance passes
/// the uncertainty check.
pub fn thermal_covariance(model: &ThermalModel) -> Result<Matrix> {
    let wr = williamson(model.qh.hessian())?;
    let n = wr.degrees_of_freedom();
    let mut diag = Vec::with_capacity(2 * n);
    for &m in &wr.spectrum {
        diag.push(0.5 * model.hbar * coth(0.5 * model.beta * model.hbar * m));
    }
    let second_half = diag.clone();
    diag.extend(second_half);
    let d = Matrix::from_diagonal(&diag);
    Ok((&(&wr.s.transpose() * &d) * &wr.s).symmetrized())
}
