use serde::Serialize;

use crate::basis::SpectralBasis;
use crate::error::{Error, Result};
use crate::kernels::KernelBundle;
use crate::point::{Dim, Point};

/// A spectral basis paired with a puncture and the constant `κ` of
/// `⟨G(·, x⁰), ω_n⟩ = κ ω_n(x⁰)/μ_n`.
///
/// Stores the jets `∂^i ω_n(x⁰)` (`i = 0` the value, `i ≥ 1` the partial
/// derivatives) and the mode coefficients `p_in = ⟨φ_i, ω_n⟩ = −κ ∂^i ω_n(x⁰)/μ_n`.
#[derive(Debug, Clone, Serialize)]
pub struct PunctureSpectrum {
    basis: SpectralBasis,
    bundle: KernelBundle,
    kappa: f64,
    jets: Vec<Vec<f64>>,
    modes: Vec<Vec<f64>>,
}

impl PunctureSpectrum {
    pub fn new(basis: SpectralBasis, puncture: Point, kappa: f64) -> Result<Self> {
        if basis.dim() != puncture.dim() {
            return Err(Error::UnsupportedDimension {
                expected: basis.dim().n(),
                got: puncture.dim().n(),
            });
        }
        if !kappa.is_finite() || kappa == 0.0 {
            return Err(Error::InvalidArgument(format!("kappa must be finite and nonzero, got {kappa}")));
        }
        let bundle = KernelBundle::new(puncture)?;
        let nf = puncture.dim().n_functionals();
        let mut jets = vec![Vec::with_capacity(basis.len()); nf];
        for d in basis.evaluate_all(&puncture) {
            jets[0].push(d.v);
            for i in 1..nf {
                jets[i].push(d.d[i - 1]);
            }
        }
        let mus = basis.mus();
        let modes = jets
            .iter()
            .map(|row| row.iter().zip(&mus).map(|(v, mu)| -kappa * v / mu).collect())
            .collect();
        Ok(PunctureSpectrum {
            basis,
            bundle,
            kappa,
            jets,
            modes,
        })
    }

    pub fn basis(&self) -> &SpectralBasis {
        &self.basis
    }

    pub fn bundle(&self) -> &KernelBundle {
        &self.bundle
    }

    pub fn puncture(&self) -> &Point {
        &self.bundle.puncture
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn dim(&self) -> Dim {
        self.basis.dim()
    }

    pub fn cutoff(&self) -> usize {
        self.basis.len()
    }

    pub fn n_functionals(&self) -> usize {
        self.dim().n_functionals()
    }

    pub fn mu(&self, n: usize) -> f64 {
        self.basis.mu(n)
    }

    /// `∂^i ω_n(x⁰)`.
    pub fn jet(&self, i: usize, n: usize) -> f64 {
        self.jets[i][n]
    }

    /// `p_in = ⟨φ_i, ω_n⟩`.
    pub fn mode_coefficient(&self, i: usize, n: usize) -> f64 {
        self.modes[i][n]
    }

    pub fn modes(&self) -> &[Vec<f64>] {
        &self.modes
    }

    /// The same puncture over the leading `cutoff` basis entries.
    pub fn truncated(&self, cutoff: usize) -> PunctureSpectrum {
        let m = cutoff.min(self.cutoff());
        PunctureSpectrum {
            basis: self.basis.truncated(m),
            bundle: self.bundle,
            kappa: self.kappa,
            jets: self.jets.iter().map(|r| r[..m].to_vec()).collect(),
            modes: self.modes.iter().map(|r| r[..m].to_vec()).collect(),
        }
    }
}
