//! Finite-rank perturbations `B_K` of the Dirichlet Laplacian at a puncture:
//! tables, characteristic determinants, resolvents and spectra.

mod context;
mod determinant;
mod resolvent;
mod spectrum;
mod table;

pub use context::PunctureSpectrum;
pub use determinant::{
    beta_ij, beta_matrix, characteristic_determinant, delta01, delta01_removable, DeterminantEval, Truncated,
    POLE_TOLERANCE,
};
pub use resolvent::{
    apply_functional, beta_of_field, chain_denominator, krein_residual, log_derivative, psi_values, resolvent_apply,
    resolvent_chain, resolvent_field, trace_difference, trace_with_truncation, unperturbed_resolvent,
    EIGENVALUE_TOLERANCE,
};
pub use spectrum::{
    perturbed_spectrum, theorem52_check, RootKind, SpectralRoot, SpectrumOptions, Theorem52Branch, Theorem52Report,
    COLLISION_TOLERANCE,
};
pub use table::{PerturbationK, TableSnapshot};
