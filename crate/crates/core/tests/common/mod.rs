//! Shared generators for the integration suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symplectica_core::dynamics::SmoothField;
use symplectica_core::Matrix;

/// Random symmetric matrix with entries in [-1, 1].
pub fn random_symmetric(dim: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x: f64 = rng.random_range(-1.0..1.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}

/// Random SPD matrix `G G^T + 0.3 I`; eigenvalues of order [0.3, dim].
pub fn random_spd(dim: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut g = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = rng.random_range(-1.0..1.0);
        }
    }
    let mut m = &g * &g.transpose();
    for i in 0..dim {
        m[(i, i)] += 0.3;
    }
    m.symmetrized()
}

pub fn random_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two ions in harmonic traps coupled by `c / |q1 - q2|`, in the
/// `(q1, q2, p1, p2)` ordering.
pub struct IonChain {
    pub mass: f64,
    pub trap_freq: f64,
    pub coupling: f64,
    pub centers: [f64; 2],
}

impl SmoothField for IonChain {
    fn dim(&self) -> usize {
        4
    }

    fn value(&self, x: &[f64]) -> f64 {
        let (q1, q2, p1, p2) = (x[0], x[1], x[2], x[3]);
        let kinetic = (p1 * p1 + p2 * p2) / (2.0 * self.mass);
        let d1 = q1 - self.centers[0];
        let d2 = q2 - self.centers[1];
        let trap = 0.5 * self.mass * self.trap_freq.powi(2) * (d1 * d1 + d2 * d2);
        kinetic + trap + self.coupling / (q1 - q2).abs()
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        let (q1, q2, p1, p2) = (x[0], x[1], x[2], x[3]);
        let k = self.mass * self.trap_freq.powi(2);
        let sep = q1 - q2;
        let coulomb = -self.coupling * sep.signum() / (sep * sep);
        Some(vec![
            k * (q1 - self.centers[0]) + coulomb,
            k * (q2 - self.centers[1]) - coulomb,
            p1 / self.mass,
            p2 / self.mass,
        ])
    }
}

/// Quadratic trapped-ion potential at equilibrium separation `d`:
/// `U = [[k + 2c/d^3, -2c/d^3], [-2c/d^3, k + 2c/d^3]]` with `k = m w^2`.
pub fn ion_potential_matrix(mass: f64, trap_freq: f64, coupling: f64, d: f64) -> Matrix {
    let k = mass * trap_freq * trap_freq;
    let c2 = 2.0 * coupling / d.powi(3);
    Matrix::from_rows(&[vec![k + c2, -c2], vec![-c2, k + c2]]).unwrap()
}

/// Hessian of the squeezed three-mode model: `[[w I, C], [C, w I]]` with
/// tridiagonal coupling `C = gamma I - (kappa/sqrt(2)) T`, `T` the chain
/// adjacency. `C` has eigenvalues `gamma`, `gamma -/+ kappa`, so the
/// Euclidean spectrum is `w +/- c` and the symplectic one `sqrt(w^2 - c^2)`
/// over those couplings.
pub fn squeezed_modes_hessian(omega: f64, gamma: f64, kappa: f64) -> Matrix {
    let g = gamma;
    let k = kappa / 2f64.sqrt();
    let c = Matrix::from_rows(&[vec![g, -k, 0.0], vec![-k, g, -k], vec![0.0, -k, g]]).unwrap();
    let mut h = Matrix::zeros(6, 6);
    for i in 0..3 {
        h[(i, i)] = omega;
        h[(3 + i, 3 + i)] = omega;
        for j in 0..3 {
            h[(i, 3 + j)] = c[(i, j)];
            h[(3 + i, j)] = c[(i, j)];
        }
    }
    h
}
