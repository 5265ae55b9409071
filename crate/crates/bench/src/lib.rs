//! Shared fixtures for the benchmarks.

use punctum::{Dim, PerturbationK, Point, PunctureSpectrum, Result, SpectralBasis};

/// A puncture context at the points used throughout the experiments.
pub fn context(dim: Dim, cutoff: usize) -> Result<PunctureSpectrum> {
    let x0 = match dim {
        Dim::One => Point::puncture(&[0.3])?,
        Dim::Three => Point::puncture(&[0.2, -0.1, 0.15])?,
    };
    PunctureSpectrum::new(SpectralBasis::new(dim, cutoff)?, x0, 1.0)
}

pub fn delta_table(ctx: &PunctureSpectrum) -> PerturbationK {
    PerturbationK::delta_coupling(1.0, ctx)
}
