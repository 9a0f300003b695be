//! Symplectic spectral toolkit for quadratic Hamiltonian systems.
//!
//! The crate builds up from a small dense-matrix kernel to the Williamson
//! decomposition `S M S^T = diag(mu, mu)` of symmetric positive-definite
//! matrices, and from there to its standard applications:
//!
//! - normal modes and exact phase-space propagators of quadratic
//!   Hamiltonians ([`dynamics`]),
//! - canonical-ensemble thermodynamics of stable quadratic systems
//!   ([`statmech`]),
//! - Robertson-Schrodinger validation of covariance matrices
//!   ([`uncertainty`]).
//!
//! Phase-space ordering is `(q_1..q_n, p_1..p_n)` everywhere.

pub mod dynamics;
pub mod error;
pub mod kernel;
pub mod matrix;
pub mod statmech;
pub mod symplectic;
pub mod uncertainty;

pub use error::{Error, Result};
pub use kernel::{
    expm, hermitian_eig, is_positive_definite, sqrt_spd, sym_eig, HermitianDecomposition,
    Positivity, SpectralDecomposition,
};
pub use matrix::{ComplexMatrix, Matrix};
pub use symplectic::{
    is_symplectic, random_symplectic, standard_form, symplectic_congruence, symplectic_spectrum,
    williamson, SymplecticCheck, SymplecticForm, WilliamsonResult,
};
