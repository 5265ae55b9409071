//! Roots of the characteristic determinant in a real window.
//!
//! Near a group of equal eigenvalues `μ` of multiplicity `m`, `Δ(λ)` has the
//! form `det(A(λ) − λ Q / (μ − λ))` with `A` analytic and
//! `Q_ij = Σ_{n∈group} C_in μ_n p_jn`. Writing `Q = L R` with rank `q`, the
//! bordered matrix
//!
//! ```text
//! Z(λ) = [[ (μ − λ) I_q ,   −λ R        ],
//!          [ −L          ,   A(λ)        ]]
//! ```
//!
//! has `det Z = (μ − λ)^q Δ(λ)` and is analytic at `μ`. The operator keeps
//! `μ` as an eigenvalue of multiplicity `m − q`; the remaining eigenvalues are
//! the zeros of `det Z`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::determinant::{beta_sum, delta01_removable};
use super::{PerturbationK, PunctureSpectrum};
use crate::error::{Error, Result};

/// Relative distance below which a root counts as colliding with a pole.
pub const COLLISION_TOLERANCE: f64 = 1e-8;

const GROUP_TOLERANCE: f64 = 1e-12;
const RANK_TOLERANCE: f64 = 1e-12;
const SPLIT_FRACTION: f64 = 0.4871;
const MAX_ARG_STEP: f64 = PI / 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RootKind {
    /// A sign change of the determinant on the real axis.
    Real,
    /// An unperturbed eigenvalue kept by the perturbation.
    Retained,
    /// Located by argument-principle search off the real scan.
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralRoot {
    pub value: Complex64,
    pub multiplicity: usize,
    pub kind: RootKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Relative root tolerance.
    pub tol: f64,
    /// Run the rectangle winding search even for real tables.
    pub complex_search: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            tol: 1e-13,
            complex_search: false,
        }
    }
}

struct PoleGroup {
    mu: f64,
    multiplicity: usize,
    rank: usize,
    left: DMatrix<Complex64>,
    right: DMatrix<Complex64>,
}

/// `det Z(λ)` for all eigenvalue groups in a band.
struct Compressed<'a> {
    ctx: &'a PunctureSpectrum,
    k: &'a PerturbationK,
    groups: Vec<PoleGroup>,
    skip: Vec<bool>,
}

impl<'a> Compressed<'a> {
    fn new(ctx: &'a PunctureSpectrum, k: &'a PerturbationK, lo: f64, hi: f64) -> Self {
        let nf = ctx.n_functionals();
        let mut skip = vec![false; ctx.cutoff()];
        let mut spans: Vec<(f64, Vec<usize>)> = Vec::new();
        for n in 0..ctx.cutoff() {
            let mu = ctx.mu(n);
            if mu < lo || mu > hi {
                continue;
            }
            skip[n] = true;
            match spans.last_mut() {
                Some((m0, idx)) if (mu - *m0).abs() <= GROUP_TOLERANCE * m0.abs().max(1.0) => idx.push(n),
                _ => spans.push((mu, vec![n])),
            }
        }
        let mut cmax: f64 = 0.0;
        let mut pmax: f64 = 0.0;
        for n in 0..ctx.cutoff() {
            for i in 0..nf {
                cmax = cmax.max((k.entry(i, n) * ctx.mu(n)).norm());
                pmax = pmax.max(ctx.mode_coefficient(i, n).abs());
            }
        }
        let threshold = RANK_TOLERANCE * cmax * pmax;
        let groups = spans
            .into_iter()
            .map(|(mu, idx)| {
                let q = DMatrix::from_fn(nf, nf, |i, j| {
                    idx.iter()
                        .map(|&n| k.entry(i, n) * ctx.mu(n) * ctx.mode_coefficient(j, n))
                        .sum::<Complex64>()
                });
                let svd = q.svd(true, true);
                let u = svd.u.expect("left vectors");
                let vt = svd.v_t.expect("right vectors");
                let keep: Vec<usize> = (0..nf).filter(|&s| svd.singular_values[s] > threshold).collect();
                let left = DMatrix::from_fn(nf, keep.len(), |i, c| u[(i, keep[c])] * svd.singular_values[keep[c]]);
                let right = DMatrix::from_fn(keep.len(), nf, |c, j| vt[(keep[c], j)]);
                PoleGroup {
                    mu,
                    multiplicity: idx.len(),
                    rank: keep.len(),
                    left,
                    right,
                }
            })
            .collect();
        Compressed { ctx, k, groups, skip }
    }

    fn eval(&self, lambda: Complex64) -> Complex64 {
        let nf = self.ctx.n_functionals();
        let qsum: usize = self.groups.iter().map(|g| g.rank).sum();
        let size = qsum + nf;
        let mut z = DMatrix::<Complex64>::zeros(size, size);
        let b = beta_sum(self.ctx, self.k, lambda, self.ctx.cutoff(), &|n| self.skip[n]);
        let a = DMatrix::<Complex64>::identity(nf, nf) - b * lambda;
        z.view_mut((qsum, qsum), (nf, nf)).copy_from(&a);
        let mut off = 0;
        for g in &self.groups {
            let scale = 1.0 / g.mu.abs().max(1.0);
            for c in 0..g.rank {
                z[(off + c, off + c)] = (Complex64::new(g.mu, 0.0) - lambda) * scale;
                for j in 0..nf {
                    z[(off + c, qsum + j)] = -lambda * g.right[(c, j)] * scale;
                    z[(qsum + j, off + c)] = -g.left[(j, c)];
                }
            }
            off += g.rank;
        }
        z.determinant()
    }
}

/// Eigenvalues of `B_K` in `[a, b]` (plus complex ones near it on demand),
/// sorted by modulus.
pub fn perturbed_spectrum(
    ctx: &PunctureSpectrum,
    k: &PerturbationK,
    window: (f64, f64),
    opts: SpectrumOptions,
) -> Result<Vec<SpectralRoot>> {
    k.check_against(ctx)?;
    let (a, b) = window;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidArgument(format!("empty window [{a}, {b}]")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let last = ctx.mu(ctx.cutoff() - 1);
    if a < 0.5 * last {
        return Err(Error::InvalidArgument(format!(
            "window reaches {a}, beyond half the last basis eigenvalue {last}; raise the cutoff"
        )));
    }
    let len = b - a;
    let margin = 0.1 * len + 1.0;
    let z = Compressed::new(ctx, k, a - margin, b + margin);

    let mut roots = Vec::new();
    for g in &z.groups {
        if g.mu >= a && g.mu <= b && g.multiplicity > g.rank {
            roots.push(SpectralRoot {
                value: Complex64::new(g.mu, 0.0),
                multiplicity: g.multiplicity - g.rank,
                kind: RootKind::Retained,
            });
        }
    }

    let f = |l: Complex64| z.eval(l);
    let real_table = k.is_real();
    let mut found: Vec<Complex64> = Vec::new();
    if real_table {
        for r in real_scan(&|x| f(Complex64::new(x, 0.0)).re, a, b, pole_gap(&z, len), opts.tol) {
            found.push(Complex64::new(r, 0.0));
            roots.push(SpectralRoot {
                value: Complex64::new(r, 0.0),
                multiplicity: 1,
                kind: RootKind::Real,
            });
        }
    }
    if opts.complex_search || !real_table {
        let h = (0.25 * len).max(1.0);
        let rect = Rect {
            x0: a,
            x1: b,
            y0: -h,
            y1: h,
        };
        let scale = a.abs().max(b.abs()).max(1.0);
        let deflated = |l: Complex64| found.iter().fold(f(l), |acc, r| acc / (l - r));
        let total = winding(&deflated, &rect)?;
        if total > 0 {
            let mut extra = Vec::new();
            locate(&deflated, rect, total, opts.tol * scale, 0, &mut extra)?;
            for (r, mult) in extra {
                let r = polish(&f, r, opts.tol);
                let kind = if real_table && r.im.abs() <= opts.tol * scale {
                    RootKind::Real
                } else {
                    RootKind::Complex
                };
                roots.push(SpectralRoot {
                    value: r,
                    multiplicity: mult,
                    kind,
                });
            }
        }
    }

    for r in roots.iter().filter(|r| r.kind != RootKind::Retained) {
        for g in &z.groups {
            if (r.value - g.mu).norm() <= COLLISION_TOLERANCE * g.mu.abs().max(1.0) {
                return Err(Error::RootPoleCollision {
                    root: r.value.re,
                    pole: g.mu,
                });
            }
        }
    }
    roots.sort_by(|x, y| {
        x.value
            .norm()
            .total_cmp(&y.value.norm())
            .then(x.value.im.total_cmp(&y.value.im))
    });
    Ok(roots)
}

fn pole_gap(z: &Compressed, len: f64) -> f64 {
    z.groups
        .windows(2)
        .map(|w| (w[1].mu - w[0].mu).abs())
        .fold(len, f64::min)
}

/// Sign changes of `f` on a uniform grid of `max(400, 10·len/gap)` cells,
/// each refined by bisection.
fn real_scan(f: &dyn Fn(f64) -> f64, a: f64, b: f64, gap: f64, tol: f64) -> Vec<f64> {
    let cells = (10.0 * (b - a) / gap).ceil().max(400.0).min(1e6) as usize;
    let xs: Vec<f64> = (0..=cells).map(|i| a + (b - a) * i as f64 / cells as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..cells {
        if vals[i] == 0.0 {
            roots.push(xs[i]);
        } else if vals[i] * vals[i + 1] < 0.0 {
            roots.push(bisect(f, xs[i], xs[i + 1], vals[i], tol));
        }
    }
    if vals[cells] == 0.0 {
        roots.push(xs[cells]);
    }
    roots
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * mid.abs().max(1.0) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm * flo < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Rect {
    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x0, self.y0),
            Complex64::new(self.x1, self.y0),
            Complex64::new(self.x1, self.y1),
            Complex64::new(self.x0, self.y1),
        ]
    }

    fn diameter(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    fn split(&self) -> (Rect, Rect) {
        if self.x1 - self.x0 >= self.y1 - self.y0 {
            let xm = self.x0 + SPLIT_FRACTION * (self.x1 - self.x0);
            (Rect { x1: xm, ..*self }, Rect { x0: xm, ..*self })
        } else {
            let ym = self.y0 + SPLIT_FRACTION * (self.y1 - self.y0);
            (Rect { y1: ym, ..*self }, Rect { y0: ym, ..*self })
        }
    }
}

fn arg_change(f: &dyn Fn(Complex64) -> Complex64, z0: Complex64, z1: Complex64, f0: Complex64, f1: Complex64, depth: u32) -> Result<f64> {
    if f0.norm() == 0.0 || f1.norm() == 0.0 {
        return Err(Error::InvalidArgument(format!("determinant vanishes on the search contour near {z0}")));
    }
    let step = (f1 / f0).arg();
    if step.abs() <= MAX_ARG_STEP || depth > 40 {
        return Ok(step);
    }
    let zm = 0.5 * (z0 + z1);
    let fm = f(zm);
    Ok(arg_change(f, z0, zm, f0, fm, depth + 1)? + arg_change(f, zm, z1, fm, f1, depth + 1)?)
}

/// Number of zeros of `f` inside `r`.
fn winding(f: &dyn Fn(Complex64) -> Complex64, r: &Rect) -> Result<usize> {
    let c = r.corners();
    let mut total = 0.0;
    for side in 0..4 {
        let (za, zb) = (c[side], c[(side + 1) % 4]);
        let pieces = 16;
        let mut prev = za;
        let mut fprev = f(za);
        for p in 1..=pieces {
            let z = za + (zb - za) * (p as f64 / pieces as f64);
            let fz = f(z);
            total += arg_change(f, prev, z, fprev, fz, 0)?;
            prev = z;
            fprev = fz;
        }
    }
    let w = total / (2.0 * PI);
    let n = w.round();
    if (w - n).abs() > 0.2 || n < 0.0 {
        return Err(Error::InvalidArgument(format!("winding number {w:.3} is not a nonnegative integer")));
    }
    Ok(n as usize)
}

fn newton(f: &dyn Fn(Complex64) -> Complex64, mut z: Complex64, tol: f64) -> Option<Complex64> {
    for _ in 0..60 {
        let h = 1e-7 * z.norm().max(1.0);
        let fz = f(z);
        let d = (f(z + h) - f(z - h)) / (2.0 * h);
        if d.norm() == 0.0 || !d.re.is_finite() {
            return None;
        }
        let step = fz / d;
        z -= step;
        if step.norm() <= tol * z.norm().max(1.0) {
            return Some(z);
        }
    }
    None
}

fn polish(f: &dyn Fn(Complex64) -> Complex64, z: Complex64, tol: f64) -> Complex64 {
    match newton(f, z, tol) {
        Some(p) if (p - z).norm() <= 1e-6 * z.norm().max(1.0) => p,
        _ => z,
    }
}

fn locate(
    f: &dyn Fn(Complex64) -> Complex64,
    r: Rect,
    count: usize,
    tol: f64,
    depth: u32,
    out: &mut Vec<(Complex64, usize)>,
) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    if count == 1 {
        if let Some(z) = newton(f, r.center(), tol) {
            if r.contains(z) {
                out.push((z, 1));
                return Ok(());
            }
        }
    }
    if r.diameter() <= tol || depth > 200 {
        out.push((r.center(), count));
        return Ok(());
    }
    let (lo, hi) = r.split();
    let first = winding(f, &lo)?;
    if first > count {
        return Err(Error::InvalidArgument("inconsistent winding counts during root search".into()));
    }
    locate(f, lo, first, tol, depth + 1, out)?;
    locate(f, hi, count - first, tol, depth + 1, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem52Branch {
    /// `ω_N(x⁰) = 0`.
    Node,
    /// `γ_0(K ω_N) = 0`.
    Zeroed,
    /// Neither condition holds.
    Generic,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem52Report {
    pub index: usize,
    pub mu: f64,
    pub branch: Theorem52Branch,
    /// Eigenvalue of `B_1` nearest to `μ_N`.
    pub root: Complex64,
    pub shift: f64,
    /// `μ_N C_0N / Δ_01(μ_N)`, the weight of `θ_0` in the eigenvector.
    pub theta_weight: Option<Complex64>,
    /// Largest coefficient residual of `B_M u = μ_N u` for the eigenvector.
    pub eigen_residual: Option<f64>,
    /// Residual of the domain condition `γ_0(u) = γ_0(K B_M u)`.
    pub domain_residual: Option<f64>,
}

/// The eigenvalue of `B_1` near `μ_N` (zero-based `index`) and, when
/// `ω_N(x⁰) = 0` or `C_0N = 0`, the eigenvector `ω_N + μ_N C_0N/Δ_01(μ_N) θ_0`.
pub fn theorem52_check(ctx: &PunctureSpectrum, k: &PerturbationK, index: usize) -> Result<Theorem52Report> {
    k.check_against(ctx)?;
    if index >= ctx.cutoff() {
        return Err(Error::BasisIndex(index));
    }
    let b1 = k.leading_rows(1);
    let mu = ctx.mu(index);
    let branch = if ctx.jet(0, index).abs() < 1e-12 {
        Theorem52Branch::Node
    } else if b1.entry(0, index).norm() < 1e-14 {
        Theorem52Branch::Zeroed
    } else {
        Theorem52Branch::Generic
    };
    let gap = (0..ctx.cutoff())
        .map(|n| (ctx.mu(n) - mu).abs())
        .filter(|g| *g > GROUP_TOLERANCE * mu.abs().max(1.0))
        .fold(f64::INFINITY, f64::min);
    let half = 0.5 * gap.min(mu.abs());
    let spectrum = perturbed_spectrum(ctx, &b1, (mu - half, mu + half), SpectrumOptions::default())?;
    let root = spectrum
        .iter()
        .map(|r| r.value)
        .min_by(|x, y| (x - mu).norm().total_cmp(&(y - mu).norm()))
        .ok_or_else(|| Error::InvalidArgument(format!("no eigenvalue of B_1 within {half} of mu = {mu}")))?;

    let (theta_weight, eigen_residual, domain_residual) = if branch == Theorem52Branch::Generic {
        (None, None, None)
    } else {
        let lam = Complex64::new(mu, 0.0);
        let d01 = delta01_removable(ctx, &b1, lam)?;
        let weight = mu * b1.entry(0, index) / d01;
        // u = ω_N + a (φ_0 + μ_N R_0 φ_0), the resonant term of R_0 φ_0 dropped
        let regular: Vec<Complex64> = (0..ctx.cutoff())
            .map(|n| {
                let own = if n == index { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                let resonant = (ctx.mu(n) - mu).abs() <= GROUP_TOLERANCE * mu.abs().max(1.0);
                let theta = if resonant {
                    Complex64::new(0.0, 0.0)
                } else {
                    lam * ctx.mode_coefficient(0, n) / (ctx.mu(n) - mu)
                };
                own + weight * theta
            })
            .collect();
        let eig = (0..ctx.cutoff())
            .map(|n| (ctx.mu(n) * regular[n] - lam * (regular[n] + weight * ctx.mode_coefficient(0, n))).norm())
            .fold(0.0, f64::max);
        let bm: Vec<Complex64> = regular.iter().enumerate().map(|(n, c)| c * ctx.mu(n)).collect();
        let dom = (weight - b1.apply_row(0, &bm)).norm();
        (Some(weight), Some(eig / mu.abs().max(1.0)), Some(dom))
    };
    Ok(Theorem52Report {
        index,
        mu,
        branch,
        root,
        shift: (root - mu).norm(),
        theta_weight,
        eigen_residual,
        domain_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::SpectralBasis;
    use crate::perturbation::characteristic_determinant;
    use crate::point::{Dim, Point};

    fn ctx1(x0: f64, m: usize) -> PunctureSpectrum {
        PunctureSpectrum::new(SpectralBasis::new(Dim::One, m).unwrap(), Point::puncture(&[x0]).unwrap(), 1.0).unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn zero_table_keeps_every_eigenvalue() {
        let ctx = ctx1(0.3, 64);
        let k = PerturbationK::zero(&ctx);
        let s = perturbed_spectrum(&ctx, &k, (-400.0, -1.0), SpectrumOptions::default()).unwrap();
        let expect: Vec<f64> = (0..6).map(|n| ctx.mu(n)).filter(|m| *m >= -400.0).collect();
        assert_eq!(s.len(), expect.len());
        for (r, m) in s.iter().zip(&expect) {
            assert_eq!(r.kind, RootKind::Retained);
            assert_eq!(r.value, c(*m));
        }
    }

    #[test]
    fn compressed_determinant_matches_delta() {
        let ctx = ctx1(0.3, 200);
        let k = PerturbationK::alpha_family(&[c(0.7), c(0.2)], &ctx).unwrap();
        let z = Compressed::new(&ctx, &k, -100.0, -5.0);
        for lam in [c(-7.0), Complex64::new(-50.0, 3.0), c(-95.0)] {
            let delta = characteristic_determinant(&ctx, &k, lam).unwrap().value;
            let mut factor = c(1.0);
            for g in &z.groups {
                factor *= ((g.mu - lam) / g.mu.abs().max(1.0)).powi(g.rank as i32);
            }
            let got = z.eval(lam);
            assert!((got - factor * delta).norm() < 1e-10 * (factor * delta).norm().max(1.0), "{got} {}", factor * delta);
        }
    }

    #[test]
    fn roots_are_zeros_of_the_determinant() {
        let ctx = ctx1(0.3, 400);
        let k = PerturbationK::delta_coupling(3.0, &ctx);
        let s = perturbed_spectrum(&ctx, &k, (-250.0, -0.5), SpectrumOptions::default()).unwrap();
        assert_eq!(s.len(), 5);
        for r in &s {
            assert_eq!(r.kind, RootKind::Real);
            let d = characteristic_determinant(&ctx, &k, r.value).unwrap().value;
            let dp = characteristic_determinant(&ctx, &k, r.value + 1e-6).unwrap().value;
            assert!(d.norm() < 1e-6 * (dp - d).norm() * 1e6, "{d}");
        }
    }

    #[test]
    fn node_keeps_even_eigenvalues() {
        let ctx = ctx1(0.5, 200);
        let k = PerturbationK::delta_coupling(1.0, &ctx);
        let s = perturbed_spectrum(&ctx, &k, (-170.0, -0.5), SpectrumOptions::default()).unwrap();
        let retained: Vec<f64> = s.iter().filter(|r| r.kind == RootKind::Retained).map(|r| r.value.re).collect();
        assert_eq!(retained, vec![ctx.mu(1), ctx.mu(3)]);
    }

    #[test]
    fn complex_roots_for_complex_coupling() {
        let ctx = ctx1(0.3, 200);
        let mut k = PerturbationK::delta_coupling(1.0, &ctx);
        k.scale_row(0, Complex64::new(4.0, 6.0));
        let s = perturbed_spectrum(&ctx, &k, (-60.0, -0.5), SpectrumOptions::default()).unwrap();
        assert!(!s.is_empty());
        for r in &s {
            assert_eq!(r.kind, RootKind::Complex);
            assert!(r.value.im.abs() > 1e-6);
            let d = characteristic_determinant(&ctx, &k, r.value).unwrap().value;
            assert!(d.norm() < 1e-8, "{d}");
        }
    }

    #[test]
    fn winding_search_agrees_with_real_scan() {
        let ctx = ctx1(0.3, 200);
        let k = PerturbationK::delta_coupling(2.0, &ctx);
        let real = perturbed_spectrum(&ctx, &k, (-100.0, -0.5), SpectrumOptions::default()).unwrap();
        let both = perturbed_spectrum(
            &ctx,
            &k,
            (-100.0, -0.5),
            SpectrumOptions {
                complex_search: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(real, both);
    }

    #[test]
    fn theorem52_branches() {
        let ctx = ctx1(0.5, 200);
        let k = PerturbationK::delta_coupling(1.0, &ctx);
        let node = theorem52_check(&ctx, &k, 1).unwrap();
        assert_eq!(node.branch, Theorem52Branch::Node);
        assert!(node.shift < 1e-9);
        assert!(node.eigen_residual.unwrap() < 1e-12);

        let ctx = ctx1(0.3, 200);
        let mut k = PerturbationK::delta_coupling(1.0, &ctx);
        k.set_entry(0, 2, c(0.0));
        let zeroed = theorem52_check(&ctx, &k, 2).unwrap();
        assert_eq!(zeroed.branch, Theorem52Branch::Zeroed);
        assert!(zeroed.shift < 1e-9);
        assert!(zeroed.domain_residual.unwrap() < 1e-12);

        let generic = theorem52_check(&ctx, &PerturbationK::delta_coupling(1.0, &ctx), 2).unwrap();
        assert_eq!(generic.branch, Theorem52Branch::Generic);
        assert!(generic.shift > 1e-4);
    }

    #[test]
    fn rejects_window_beyond_cutoff() {
        let ctx = ctx1(0.3, 8);
        let k = PerturbationK::zero(&ctx);
        assert!(perturbed_spectrum(&ctx, &k, (-1e4, -1.0), SpectrumOptions::default()).is_err());
    }
}
