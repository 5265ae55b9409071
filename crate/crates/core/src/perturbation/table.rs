use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::PunctureSpectrum;
use crate::error::{Error, Result};
use crate::point::Dim;

/// A finite-rank perturbation, stored as the table `C_in = γ_i(K ω_n)`,
/// `i = 0..=d`, `n < M`.
///
/// The operator acts as `γ_i(K g) = Σ_n C_in ĝ_n` on fields with Fourier
/// coefficients `ĝ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationK {
    dim: Dim,
    table: DMatrix<Complex64>,
    label: String,
}

/// Plain-data view of a table for serialization.
#[derive(Debug, Clone, Serialize)]
pub struct TableSnapshot {
    pub label: String,
    pub rows: usize,
    pub cutoff: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl PerturbationK {
    pub fn custom(dim: Dim, table: DMatrix<Complex64>) -> Result<Self> {
        if table.nrows() != dim.n_functionals() {
            return Err(Error::Shape(format!(
                "table has {} rows, expected {}",
                table.nrows(),
                dim.n_functionals()
            )));
        }
        if table.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("table entries must be finite".into()));
        }
        Ok(PerturbationK {
            dim,
            table,
            label: "custom".into(),
        })
    }

    pub fn from_real_rows(dim: Dim, rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("ragged table rows".into()));
        }
        let t = DMatrix::from_fn(rows.len(), m, |i, n| Complex64::new(rows[i][n], 0.0));
        Self::custom(dim, t)
    }

    pub fn zero(ctx: &PunctureSpectrum) -> Self {
        PerturbationK {
            dim: ctx.dim(),
            table: DMatrix::zeros(ctx.n_functionals(), ctx.cutoff()),
            label: "zero".into(),
        }
    }

    /// `Δ + k δ(x − x⁰)`: `K f = k ⟨f, G(·, x⁰)⟩ φ_0`, so
    /// `C_0n = k κ ω_n(x⁰)/μ_n` and the other rows vanish. Fields in the
    /// domain satisfy `γ_0(u) = k u_0(x⁰)`.
    pub fn delta_coupling(k: f64, ctx: &PunctureSpectrum) -> Self {
        let mut t = DMatrix::zeros(ctx.n_functionals(), ctx.cutoff());
        for n in 0..ctx.cutoff() {
            t[(0, n)] = Complex64::new(k * ctx.kappa() * ctx.jet(0, n) / ctx.mu(n), 0.0);
        }
        PerturbationK {
            dim: ctx.dim(),
            table: t,
            label: format!("delta(k={k})"),
        }
    }

    /// The family with domain conditions `γ_i(u) = α_i β_i(u)`:
    /// `C_in = α_i κ ∂^i ω_n(x⁰)/μ_n`.
    pub fn alpha_family(alpha: &[Complex64], ctx: &PunctureSpectrum) -> Result<Self> {
        if alpha.len() != ctx.n_functionals() {
            return Err(Error::Shape(format!(
                "alpha has {} entries, expected {}",
                alpha.len(),
                ctx.n_functionals()
            )));
        }
        let t = DMatrix::from_fn(ctx.n_functionals(), ctx.cutoff(), |i, n| {
            alpha[i] * (ctx.kappa() * ctx.jet(i, n) / ctx.mu(n))
        });
        Ok(PerturbationK {
            dim: ctx.dim(),
            table: t,
            label: "alpha".into(),
        })
    }

    /// `K f = Σ_s w_s ⟨f, ∂G/∂ξ_s⟩ φ_s`: every `K ω_n` lies in the span of the
    /// source derivatives, so row 0 vanishes.
    pub fn tangential(weights: &[f64], ctx: &PunctureSpectrum) -> Result<Self> {
        let d = ctx.dim().n();
        if weights.len() != d {
            return Err(Error::Shape(format!("expected {d} tangential weights")));
        }
        if weights.iter().all(|w| *w == 0.0) {
            return Err(Error::InvalidArgument("tangential rows must not all vanish".into()));
        }
        let mut t = DMatrix::zeros(d + 1, ctx.cutoff());
        for s in 1..=d {
            for n in 0..ctx.cutoff() {
                t[(s, n)] = Complex64::new(weights[s - 1] * ctx.kappa() * ctx.jet(s, n) / ctx.mu(n), 0.0);
            }
        }
        Ok(PerturbationK {
            dim: ctx.dim(),
            table: t,
            label: "tangential".into(),
        })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn cutoff(&self) -> usize {
        self.table.ncols()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn table(&self) -> &DMatrix<Complex64> {
        &self.table
    }

    pub fn entry(&self, i: usize, n: usize) -> Complex64 {
        self.table[(i, n)]
    }

    pub fn set_entry(&mut self, i: usize, n: usize, value: Complex64) {
        self.table[(i, n)] = value;
    }

    pub fn scale_row(&mut self, i: usize, c: Complex64) {
        self.table.row_mut(i).iter_mut().for_each(|v| *v *= c);
    }

    /// The table of `B_s`: rows `s..=d` replaced by zero.
    pub fn leading_rows(&self, s: usize) -> PerturbationK {
        let mut t = self.table.clone();
        for i in s..t.nrows() {
            t.row_mut(i).fill(Complex64::new(0.0, 0.0));
        }
        PerturbationK {
            dim: self.dim,
            table: t,
            label: format!("{}[rows<{s}]", self.label),
        }
    }

    /// The leading `cutoff` columns.
    pub fn truncated(&self, cutoff: usize) -> PerturbationK {
        let m = cutoff.min(self.cutoff());
        PerturbationK {
            dim: self.dim,
            table: self.table.columns(0, m).into_owned(),
            label: self.label.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|c| c.norm() == 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.table.iter().all(|c| c.im == 0.0)
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.table.row(i).iter().all(|c| c.norm() == 0.0)
    }

    /// `γ_i(K g) = Σ_n C_in ĝ_n`.
    pub fn apply_row(&self, i: usize, coeffs: &[Complex64]) -> Complex64 {
        self.table.row(i).iter().zip(coeffs).map(|(c, g)| c * g).sum()
    }

    pub fn check_against(&self, ctx: &PunctureSpectrum) -> Result<()> {
        if self.dim != ctx.dim() || self.cutoff() != ctx.cutoff() {
            return Err(Error::Shape(format!(
                "table is {}x{} in d={}, basis has M={} in d={}",
                self.table.nrows(),
                self.cutoff(),
                self.dim.n(),
                ctx.cutoff(),
                ctx.dim().n()
            )));
        }
        Ok(())
    }

    pub fn snapshot(&self) -> TableSnapshot {
        let rows = |f: fn(&Complex64) -> f64| {
            (0..self.table.nrows())
                .map(|i| self.table.row(i).iter().map(f).collect())
                .collect()
        };
        TableSnapshot {
            label: self.label.clone(),
            rows: self.table.nrows(),
            cutoff: self.cutoff(),
            re: rows(|c| c.re),
            im: rows(|c| c.im),
        }
    }
}
