//! Dirichlet eigenpairs `Δω = μω`, `μ < 0`, of the unit interval and the
//! unit ball.

mod bessel;
mod harmonics;

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

pub use bessel::{
    bessel_zero, jl_over_xl, spherical_jn, spherical_jn_derivative, spherical_jn_sequence,
    spherical_jn_zeros, MAX_ORDER, MAX_ZERO_INDEX,
};
pub use harmonics::{harmonic_norm, solid_harmonics, Dual3};

use crate::error::{Error, Result};
use crate::point::{Dim, Point};
use crate::quadrature::GaussLegendre;

/// The two values of the constant in `⟨G(·, x⁰), ω_n⟩ = κ ω_n(x⁰) / μ_n`
/// under consideration; the quadrature oracle picks one.
pub const KAPPA_CANDIDATES: [f64; 2] = [1.0, 2.0];

/// One Dirichlet eigenpair. For the interval `l = m = 0` and `n` is the
/// sine frequency; for the ball `(l, m, n)` labels the harmonic degree,
/// order and radial zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisEntry {
    pub dim: Dim,
    pub l: usize,
    pub m: i32,
    pub n: usize,
    /// `√(−μ)`.
    pub z: f64,
    pub mu: f64,
    /// Radial normalization constant (`√2` on the interval).
    pub norm: f64,
    /// `|‖ω‖² − 1|` measured by quadrature.
    pub norm_residual: f64,
}

impl BasisEntry {
    pub fn value(&self, x: &Point) -> f64 {
        match self.dim {
            Dim::One => self.norm * (self.z * x.x()).sin(),
            Dim::Three => {
                let p = x.coords3();
                let s = solid_harmonics(self.l, p)[self.harmonic_slot()].v;
                self.norm * self.z.powi(self.l as i32) * jl_over_xl(self.l, self.z * x.norm()) * s
            }
        }
    }

    /// `∇ω(x)` written into `out[..d]`.
    pub fn gradient(&self, x: &Point, out: &mut [f64]) {
        match self.dim {
            Dim::One => out[0] = self.norm * self.z * (self.z * x.x()).cos(),
            Dim::Three => {
                let p = x.coords3();
                let s = solid_harmonics(self.l, p)[self.harmonic_slot()];
                let d = self.radial_dual(&p, s);
                out[..3].copy_from_slice(&d.d);
            }
        }
    }

    /// `ω` and `∇ω` from a precomputed solid harmonic value.
    fn radial_dual(&self, p: &[f64; 3], s: Dual3) -> Dual3 {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let zr = self.z * r;
        let g = jl_over_xl(self.l, zr);
        let g1 = jl_over_xl(self.l + 1, zr);
        let c = self.norm * self.z.powi(self.l as i32);
        let z2 = self.z * self.z;
        let mut d = [0.0; 3];
        for k in 0..3 {
            d[k] = c * (g * s.d[k] - z2 * g1 * s.v * p[k]);
        }
        Dual3 { v: c * g * s.v, d }
    }

    /// `Δω − μω` at `x` by central differences of the analytic gradient.
    pub fn eigen_residual(&self, x: &Point) -> f64 {
        let dn = self.dim.n();
        let h = 1e-5;
        let mut lap = 0.0;
        let mut ga = [0.0; 3];
        let mut gb = [0.0; 3];
        for k in 0..dn {
            let mut e = [0.0; 3];
            e[k] = 1.0;
            self.gradient(&x.offset(h, &e), &mut ga);
            self.gradient(&x.offset(-h, &e), &mut gb);
            lap += (ga[k] - gb[k]) / (2.0 * h);
        }
        lap - self.mu * self.value(x)
    }

    fn harmonic_slot(&self) -> usize {
        (self.l * self.l) as usize + (self.m + self.l as i32) as usize
    }
}

/// `μ_n = −(nπ)²`, `ω_n(x) = √2 sin(nπx)`; `n` is one-based.
pub fn interval_eigenpair(n: usize) -> Result<BasisEntry> {
    if n == 0 {
        return Err(Error::BasisIndex(0));
    }
    let z = n as f64 * PI;
    Ok(BasisEntry {
        dim: Dim::One,
        l: 0,
        m: 0,
        n,
        z,
        mu: -z * z,
        norm: SQRT_2,
        norm_residual: interval_norm_residual(n),
    })
}

fn interval_norm_residual(n: usize) -> f64 {
    let gl = GaussLegendre::new(20);
    let panels = n.div_ceil(4).max(1);
    let z = n as f64 * PI;
    let v = gl.integrate_composite(0.0, 1.0, panels, |x| 2.0 * (z * x).sin().powi(2));
    (v - 1.0).abs()
}

/// Ball eigenpair `ω = N j_l(z r) Y_lm`, `μ = −z²` with `z` the `n`-th zero
/// of `j_l`. `N = √2 / |j_{l+1}(z)|`.
pub fn ball_eigenpair(l: usize, m: i32, n: usize) -> Result<BasisEntry> {
    if m.unsigned_abs() as usize > l {
        return Err(Error::InvalidArgument(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    let z = bessel_zero(l, n)?;
    Ok(ball_entry(l, m, n, z))
}

fn ball_entry(l: usize, m: i32, n: usize, z: f64) -> BasisEntry {
    let norm = SQRT_2 / spherical_jn(l + 1, z).abs();
    BasisEntry {
        dim: Dim::Three,
        l,
        m,
        n,
        z,
        mu: -z * z,
        norm,
        norm_residual: ball_norm_residual(l, z, norm),
    }
}

fn ball_norm_residual(l: usize, z: f64, norm: f64) -> f64 {
    let gl = GaussLegendre::new(24);
    let panels = (z / 2.0).ceil() as usize + 1;
    let v = gl.integrate_composite(0.0, 1.0, panels, |r| {
        let j = spherical_jn(l, z * r);
        norm * norm * j * j * r * r
    });
    (v - 1.0).abs()
}

/// The first `M` Dirichlet eigenpairs sorted by `|μ|`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralBasis {
    dim: Dim,
    entries: Vec<BasisEntry>,
    lmax: usize,
}

impl SpectralBasis {
    /// Enumerates the first `cutoff` eigenpairs. Ties in `|μ|` (the `2l+1`
    /// orders of a ball multiplet) are ordered by `(l, m, n)`.
    pub fn new(dim: Dim, cutoff: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::InvalidArgument("basis cutoff must be positive".into()));
        }
        let entries = match dim {
            Dim::One => (1..=cutoff).map(interval_eigenpair).collect::<Result<Vec<_>>>()?,
            Dim::Three => enumerate_ball(cutoff)?,
        };
        let lmax = entries.iter().map(|e| e.l).max().unwrap_or(0);
        Ok(SpectralBasis { dim, entries, lmax })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BasisEntry] {
        &self.entries
    }

    pub fn entry(&self, index: usize) -> Result<&BasisEntry> {
        self.entries.get(index).ok_or(Error::BasisIndex(index))
    }

    pub fn mu(&self, index: usize) -> f64 {
        self.entries[index].mu
    }

    pub fn mus(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.mu).collect()
    }

    /// The leading `cutoff` entries.
    pub fn truncated(&self, cutoff: usize) -> SpectralBasis {
        let entries = self.entries[..cutoff.min(self.len())].to_vec();
        let lmax = entries.iter().map(|e| e.l).max().unwrap_or(0);
        SpectralBasis {
            dim: self.dim,
            entries,
            lmax,
        }
    }

    /// Values and gradients of all entries at `x`.
    pub fn evaluate_all(&self, x: &Point) -> Vec<Dual3> {
        match self.dim {
            Dim::One => {
                let xv = x.x();
                self.entries
                    .iter()
                    .map(|e| {
                        let (s, c) = (e.z * xv).sin_cos();
                        Dual3 {
                            v: e.norm * s,
                            d: [e.norm * e.z * c, 0.0, 0.0],
                        }
                    })
                    .collect()
            }
            Dim::Three => {
                let p = x.coords3();
                let sh = solid_harmonics(self.lmax, p);
                self.entries
                    .iter()
                    .map(|e| e.radial_dual(&p, sh[e.harmonic_slot()]))
                    .collect()
            }
        }
    }

    pub fn values_at(&self, x: &Point) -> Vec<f64> {
        self.evaluate_all(x).into_iter().map(|d| d.v).collect()
    }

    /// `Σ_n a_n ω_n(x)`.
    pub fn series_value(&self, coeffs: &[f64], x: &Point) -> f64 {
        self.values_at(x).iter().zip(coeffs).map(|(w, a)| w * a).sum()
    }

    /// Gram matrix of the first `count` entries by quadrature
    /// (Gauss–Legendre on the interval; radial × sphere product rule on
    /// the ball).
    pub fn gram_matrix(&self, count: usize) -> Vec<Vec<f64>> {
        let count = count.min(self.len());
        let mut gram = vec![vec![0.0; count]; count];
        let sub = self.truncated(count);
        let mut accumulate = |x: &Point, w: f64| {
            let v = sub.values_at(x);
            for a in 0..count {
                for b in 0..=a {
                    gram[a][b] += w * v[a] * v[b];
                }
            }
        };
        match self.dim {
            Dim::One => {
                let gl = GaussLegendre::new(20);
                let zmax = sub.entries.last().map(|e| e.z).unwrap_or(PI);
                let panels = (zmax / 4.0).ceil() as usize + 1;
                let h = 1.0 / panels as f64;
                for k in 0..panels {
                    for (x, w) in gl.on_interval(k as f64 * h, (k + 1) as f64 * h) {
                        accumulate(&Point::raw(Dim::One, [x, 0.0, 0.0]), w);
                    }
                }
            }
            Dim::Three => {
                let lmax = sub.lmax;
                let zmax = sub.entries.last().map(|e| e.z).unwrap_or(PI);
                let radial = GaussLegendre::new((zmax as usize) + lmax + 24);
                let sphere = crate::quadrature::SphereRule::new(lmax + 8, 2 * lmax + 16);
                for (r, wr) in radial.on_interval(0.0, 1.0) {
                    for (eta, ws) in sphere.points.iter().zip(&sphere.weights) {
                        let p = [r * eta[0], r * eta[1], r * eta[2]];
                        accumulate(&Point::raw(Dim::Three, p), wr * ws * r * r);
                    }
                }
            }
        }
        for a in 0..count {
            for b in 0..a {
                gram[b][a] = gram[a][b];
            }
        }
        gram
    }
}

/// Same as [`SpectralBasis::new`].
pub fn enumerate_basis(dim: Dim, cutoff: usize) -> Result<SpectralBasis> {
    SpectralBasis::new(dim, cutoff)
}

fn enumerate_ball(cutoff: usize) -> Result<Vec<BasisEntry>> {
    // Grow the radius bound until at least `cutoff` states lie below it;
    // every state below the bound is then enumerated.
    let mut zmax = 10.0f64;
    loop {
        let mut radial: Vec<(f64, usize, usize)> = Vec::new();
        let count = (zmax / PI).floor() as usize + 1;
        // zeros of j_l interlace, so z_{l,n} > nπ and at most zmax/π lie below zmax
        let mut zeros = spherical_jn_zeros(0, count.min(MAX_ZERO_INDEX))?;
        let mut l = 0;
        loop {
            let below: Vec<f64> = zeros.iter().copied().filter(|z| *z < zmax).collect();
            if below.is_empty() {
                break;
            }
            for (k, z) in below.iter().enumerate() {
                radial.push((*z, l, k + 1));
            }
            l += 1;
            if l > MAX_ORDER {
                return Err(Error::ZeroTableExhausted { l, n: 1 });
            }
            zeros = spherical_jn_zeros(l, count.min(MAX_ZERO_INDEX))?;
        }
        let states: usize = radial.iter().map(|(_, l, _)| 2 * l + 1).sum();
        if states >= cutoff {
            radial.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
            let mut out = Vec::with_capacity(cutoff);
            'outer: for (z, l, n) in radial {
                let first = ball_entry(l, 0, n, z);
                for m in -(l as i32)..=(l as i32) {
                    if out.len() == cutoff {
                        break 'outer;
                    }
                    out.push(BasisEntry { m, ..first });
                }
            }
            return Ok(out);
        }
        zmax *= 1.5;
    }
}

/// Value of `⟨K_j, ω_n⟩` where `K_0 = G(·, x⁰)` and `K_j = ∂G(·, ξ)/∂ξ_j`
/// at `ξ = x⁰`: `κ ω_n(x⁰) / μ_n` for `j = 0` and `κ ∂_j ω_n(x⁰) / μ_n`
/// otherwise. `n` is zero-based.
pub fn phi_fourier_coefficient(
    basis: &SpectralBasis,
    puncture: &Point,
    j: usize,
    n: usize,
    kappa: f64,
) -> Result<f64> {
    let e = basis.entry(n)?;
    if j > basis.dim().n() {
        return Err(Error::InvalidArgument(format!("functional index {j} out of range")));
    }
    let v = if j == 0 {
        e.value(puncture)
    } else {
        let mut g = [0.0; 3];
        e.gradient(puncture, &mut g);
        g[j - 1]
    };
    Ok(kappa * v / e.mu)
}
