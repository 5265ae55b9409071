//! Green kernels, boundary functionals and perturbation determinants for the
//! Laplacian with a delta-like interaction at one interior point of the unit
//! interval or the unit ball.
//!
//! Conventions: `Δ_x G(x, ξ) = δ(x − ξ)`, Dirichlet eigenpairs satisfy
//! `Δω_n = μ_n ω_n` with `μ_n < 0`, and the singular modes `φ_0..φ_d` are
//! normalized so that `γ_i(φ_j) = δ_ij`.

pub mod basis;
pub mod error;
pub mod field;
pub mod gamma;
pub mod kernels;
pub mod oracle;
pub mod perturbation;
pub mod point;
pub mod quadrature;
pub mod solver;

pub use basis::{BasisEntry, SpectralBasis, KAPPA_CANDIDATES};
pub use error::{Error, Result};
pub use field::{DecomposedField, FieldSum, FnField, KernelField, KernelKind, ScalarField};
pub use gamma::{BetaVector, BoundaryTrace, GammaVector};
pub use kernels::KernelBundle;
pub use oracle::{KappaVerdict, OracleReport};
pub use perturbation::{PerturbationK, PunctureSpectrum, RootKind, SpectralRoot, SpectrumOptions};
pub use num_complex::Complex64;
pub use point::{Dim, Point};
pub use solver::{Decomposition, DirichletOptions};
