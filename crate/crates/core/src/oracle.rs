//! Brute-force reference computations. Nothing here reaches into the
//! perturbation or solver modules; inputs arrive as closures or plain
//! numbers.
//!
//! The one-dimensional model is `u'' = λu` on `(0, x⁰) ∪ (x⁰, 1)` with
//! `u(0) = u(1) = 0`, `u` continuous and `u'(x⁰+) − u'(x⁰−) = k u(x⁰)`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::green_interval;
use crate::point::{Dim, Point};
use crate::quadrature::{ball_rule_about, geometric_schedule, richardson_to_zero, Extrapolated, GaussLegendre, SphereRule};

/// One comparison between a main-path value and a reference value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    pub main: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub method: String,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, main: f64, oracle: f64, method: impl Into<String>) -> Self {
        let abs_err = (main - oracle).abs();
        OracleReport {
            quantity: quantity.into(),
            main,
            oracle,
            abs_err,
            rel_err: abs_err / oracle.abs().max(f64::MIN_POSITIVE),
            method: method.into(),
        }
    }

    pub fn passes(&self, abs_tol: f64) -> bool {
        self.abs_err <= abs_tol
    }
}

fn check_puncture(x0: f64) -> Result<()> {
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::PunctureNotInterior(vec![x0]));
    }
    Ok(())
}

/// Jump strength of the interval model equivalent to the delta-coupling
/// table with strength `k`: that table imposes `γ_0(u) = κ k u_0(x⁰)` on
/// `u = u_0 + γ_0(u) φ_0`, and `φ_0(x⁰) = x⁰(1 − x⁰)` with slope jump `−1`.
pub fn jump_coupling(k: f64, kappa: f64, x0: f64) -> f64 {
    let s = kappa * k;
    -s / (1.0 + s * x0 * (1.0 - x0))
}

/// Left side of the matching condition `s sin s + k sin(s x⁰) sin(s(1−x⁰))`
/// at `λ = −s²`.
pub fn matching_condition(k: f64, x0: f64, s: f64) -> f64 {
    s * s.sin() + k * (s * x0).sin() * (s * (1.0 - x0)).sin()
}

/// The same condition at `λ = σ² > 0`, divided by `−1`.
fn matching_condition_positive(k: f64, x0: f64, sigma: f64) -> f64 {
    sigma * sigma.sinh() + k * (sigma * x0).sinh() * (sigma * (1.0 - x0)).sinh()
}

fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if b - a <= 1e-15 * m.abs().max(1.0) {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// The `count` eigenvalues of smallest modulus of the interval model with
/// jump strength `k`, ascending in modulus.
///
/// Negative eigenvalues come from sign changes of the matching condition on
/// a grid of step `π/64` in `s`; consecutive roots are at most about `π`
/// apart, and a simple root cannot hide inside one step.
pub fn delta_well_spectrum_1d(k: f64, x0: f64, count: usize) -> Result<Vec<f64>> {
    check_puncture(x0)?;
    if !k.is_finite() {
        return Err(Error::InvalidArgument("coupling must be finite".into()));
    }
    let mut out = Vec::new();
    // λ > 0: the condition reads σ sinh σ + k sinh(σx⁰) sinh(σ(1−x⁰)) = 0
    if k < 0.0 {
        let g = |s: f64| matching_condition_positive(k, x0, s);
        let top = (2.0 * k.abs()).max(10.0);
        let step = 1.0 / 64.0;
        let mut a = 1e-9;
        let mut ga = g(a);
        while a < top {
            let b = a + step;
            let gb = g(b);
            if ga * gb < 0.0 {
                let s = bisect(&g, a, b);
                out.push(s * s);
            }
            a = b;
            ga = gb;
        }
    }
    // λ = 0: u linear on each side; the condition is 1 + k x⁰(1−x⁰) = 0
    if (1.0 + k * x0 * (1.0 - x0)).abs() < 1e-14 {
        out.push(0.0);
    }
    let g = |s: f64| matching_condition(k, x0, s) / s;
    let step = PI / 64.0;
    let mut a = 1e-9;
    let mut ga = g(a);
    let mut negatives = 0;
    while negatives < count + 2 {
        let b = a + step;
        let gb = g(b);
        if gb == 0.0 {
            out.push(-b * b);
            negatives += 1;
            a = b + 1e-12;
            ga = g(a);
            continue;
        }
        if ga * gb < 0.0 {
            let s = bisect(&g, a, b);
            out.push(-s * s);
            negatives += 1;
        }
        a = b;
        ga = gb;
    }
    out.sort_by(|p, q| p.abs().total_cmp(&q.abs()));
    out.truncate(count);
    Ok(out)
}

/// Second-difference eigenvalues on `n` interior nodes, with the point
/// interaction lumped as `k/h` on the node nearest `x⁰`.
pub fn fd_eigenvalues(n: usize, k: f64, x0: f64, count: usize) -> Result<Vec<f64>> {
    check_puncture(x0)?;
    if n < 3 || count == 0 || count > n {
        return Err(Error::InvalidArgument(format!("need 3 <= n and 1 <= count <= n, got n={n}, count={count}")));
    }
    let h = 1.0 / (n + 1) as f64;
    let j0 = ((x0 / h).round() as usize).clamp(1, n) - 1;
    let off = 1.0 / (h * h);
    let mut diag = vec![-2.0 * off; n];
    diag[j0] -= k / h;
    // Sturm count: number of eigenvalues below x
    let below = |x: f64| -> usize {
        let mut c = 0;
        let mut d = diag[0] - x;
        if d < 0.0 {
            c += 1;
        }
        for i in 1..n {
            let prev = if d == 0.0 { 1e-300 } else { d };
            d = diag[i] - x - off * off / prev;
            if d < 0.0 {
                c += 1;
            }
        }
        c
    };
    let radius = 4.0 * off + k.abs() / h;
    let (lo, hi) = (-radius - 1.0, radius + 1.0);
    let mut out = Vec::with_capacity(count);
    // eigenvalues nearest zero are the largest: index n − 1 − j ascending
    for j in 0..count {
        let target = n - 1 - j;
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if b - a <= 1e-14 * m.abs().max(1.0) {
                break;
            }
            if below(m) > target {
                b = m;
            } else {
                a = m;
            }
        }
        out.push(0.5 * (a + b));
    }
    out.sort_by(|p, q| p.abs().total_cmp(&q.abs()));
    Ok(out)
}

/// Finite-difference spectrum on `n` and `2n + 1` interior nodes (mesh width
/// halved) with Richardson extrapolation.
#[derive(Debug, Clone, Serialize)]
pub struct FdSpectrum {
    pub nodes: usize,
    /// Convergence order assumed by the extrapolation: 2 when `x⁰` is a
    /// mesh node on both grids, 1 otherwise.
    pub order: u32,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub extrapolated: Vec<f64>,
    /// `|extrapolated − fine|`.
    pub err: Vec<f64>,
}

pub fn fd_discretize_1d(n: usize, k: f64, x0: f64, count: usize) -> Result<FdSpectrum> {
    let coarse = fd_eigenvalues(n, k, x0, count)?;
    let fine = fd_eigenvalues(2 * n + 1, k, x0, count)?;
    let on_node = |m: usize| {
        let t = x0 * (m + 1) as f64;
        (t - t.round()).abs() < 1e-9
    };
    let order = if on_node(n) && on_node(2 * n + 1) { 2 } else { 1 };
    let factor = 2f64.powi(order as i32);
    let extrapolated: Vec<f64> = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (factor * f - c) / (factor - 1.0))
        .collect();
    let err = extrapolated.iter().zip(&fine).map(|(e, f)| (e - f).abs()).collect();
    Ok(FdSpectrum {
        nodes: n,
        order,
        coarse,
        fine,
        extrapolated,
        err,
    })
}

/// `∫_{Ω ∖ B_δ(x⁰)} f g` extrapolated to `δ → 0` over `δ_k = δ_0 2^{-k}`.
/// `order` sets the Gauss rule per panel.
pub fn volume_inner_product(
    puncture: &Point,
    f: &dyn Fn(&Point) -> f64,
    g: &dyn Fn(&Point) -> f64,
    order: usize,
) -> Result<Extrapolated> {
    if order < 4 {
        return Err(Error::QuadratureOrder(order));
    }
    let delta0 = (0.5 * puncture.distance_to_boundary()).min(0.01);
    let radii = geometric_schedule(delta0, 6);
    let gl = GaussLegendre::new(order);
    let values: Vec<f64> = match puncture.dim() {
        Dim::One => {
            let x0 = puncture.x();
            let piece = |a: f64, b: f64| {
                let panels = (((b - a) * 40.0).ceil() as usize).max(2);
                gl.integrate_composite(a, b, panels, |t| {
                    let p = Point::raw(Dim::One, [t, 0.0, 0.0]);
                    f(&p) * g(&p)
                })
            };
            radii.iter().map(|d| piece(0.0, x0 - d) + piece(x0 + d, 1.0)).collect()
        }
        Dim::Three => {
            let sphere = SphereRule::new(order, 2 * order);
            radii
                .iter()
                .map(|d| {
                    ball_rule_about(puncture.coords3(), *d, &gl, 3, &sphere)
                        .into_iter()
                        .map(|(p, w)| {
                            let pt = Point::raw(Dim::Three, p);
                            w * f(&pt) * g(&pt)
                        })
                        .sum()
                })
                .collect()
        }
    };
    richardson_to_zero(&radii, &values, 1e-14)
}

/// The puncture used by the verdict fixture.
pub const KAPPA_FIXTURE_PUNCTURE: f64 = 0.37;
pub const KAPPA_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct KappaRow {
    pub n: usize,
    pub order: usize,
    pub integral: f64,
    pub err: f64,
    /// `|∫ G ω_n − κ ω_n(x⁰)/μ_n|` for each candidate.
    pub misfit: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaVerdict {
    pub candidates: Vec<f64>,
    /// The single candidate that fits every row, if exactly one does.
    pub kappa: Option<f64>,
    pub rows: Vec<KappaRow>,
}

impl KappaVerdict {
    pub fn label(&self) -> String {
        match self.kappa {
            Some(k) => format!("{k}"),
            None => "undecided".into(),
        }
    }
}

/// Decides the constant in `⟨G(·, x⁰), ω_n⟩ = κ ω_n(x⁰)/μ_n` on the
/// interval by quadrature for `n = 1..=10` and two Gauss orders.
pub fn kappa_verdict(candidates: &[f64], orders: [usize; 2]) -> Result<KappaVerdict> {
    let x0 = KAPPA_FIXTURE_PUNCTURE;
    let p0 = Point::puncture(&[x0])?;
    let mut rows = Vec::new();
    for n in 1..=10 {
        let freq = n as f64 * PI;
        let omega = move |p: &Point| SQRT_2 * (freq * p.x()).sin();
        let kernel = |p: &Point| green_interval(p.x(), x0);
        let target = SQRT_2 * (freq * x0).sin() / -(freq * freq);
        for &order in &orders {
            let v = volume_inner_product(&p0, &kernel, &omega, order)?;
            rows.push(KappaRow {
                n,
                order,
                integral: v.value,
                err: v.err,
                misfit: candidates.iter().map(|k| (v.value - k * target).abs()).collect(),
            });
        }
    }
    let fits: Vec<f64> = candidates
        .iter()
        .enumerate()
        .filter(|(c, _)| rows.iter().all(|r| r.misfit[*c] <= KAPPA_TOLERANCE))
        .map(|(_, k)| *k)
        .collect();
    Ok(KappaVerdict {
        candidates: candidates.to_vec(),
        kappa: if fits.len() == 1 { Some(fits[0]) } else { None },
        rows,
    })
}

/// Singular values (descending) of the matrix whose columns are
/// `apply(f)` for `samples` random unit coefficient vectors of length
/// `cutoff`.
pub fn rank_probe(
    cutoff: usize,
    samples: usize,
    seed: u64,
    apply: &dyn Fn(&[Complex64]) -> Result<Vec<Complex64>>,
) -> Result<Vec<f64>> {
    if cutoff == 0 || samples == 0 {
        return Err(Error::InvalidArgument("rank probe needs a nonempty sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut f: Vec<Complex64> = (0..cutoff).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
        let norm = f.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        f.iter_mut().for_each(|c| *c /= norm);
        let out = apply(&f)?;
        if out.len() != cutoff {
            return Err(Error::Shape(format!("probe returned {} coefficients, expected {cutoff}", out.len())));
        }
        cols.push(out);
    }
    let m = DMatrix::from_fn(cutoff, samples, |i, j| cols[j][i]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Dirichlet Green function of `d²/dx² − λ` on the interval:
/// `−sin(s x_<) sin(s(1 − x_>)) / (s sin s)`, `s² = −λ`.
fn shifted_green(lambda: Complex64, x: f64, t: f64) -> Complex64 {
    let s = (-lambda).sqrt();
    let (lo, hi) = if x <= t { (x, t) } else { (t, x) };
    -(s * lo).sin() * (s * (1.0 - hi)).sin() / (s * s.sin())
}

/// `(u'' − λu = f, u'(x⁰+) − u'(x⁰−) = k u(x⁰))` solved in closed form:
/// `u = R_D f + a g_λ(·, x⁰)`, `a = k (R_D f)(x⁰) / (1 − k g_λ(x⁰, x⁰))`,
/// with `R_D f = ∫ g_λ(·, t) f(t) dt` by composite Gauss quadrature.
pub fn delta_well_resolvent_1d(k: f64, x0: f64, lambda: Complex64, f: &dyn Fn(f64) -> f64, x: f64) -> Result<Complex64> {
    check_puncture(x0)?;
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutsideDomain(vec![x]));
    }
    if lambda.norm() == 0.0 {
        return Err(Error::InvalidArgument("lambda = 0 is outside the oracle's closed form".into()));
    }
    let gl = GaussLegendre::new(24);
    let panels = ((-lambda).sqrt().norm() / 2.0).ceil() as usize + 8;
    let rd = |at: f64| -> Complex64 {
        let mut cuts = vec![0.0, at, x0, 1.0];
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut total = Complex64::new(0.0, 0.0);
        for w in cuts.windows(2) {
            let h = (w[1] - w[0]) / panels as f64;
            for p in 0..panels {
                let lo = w[0] + p as f64 * h;
                for (t, wt) in gl.on_interval(lo, lo + h) {
                    total += shifted_green(lambda, at, t) * f(t) * wt;
                }
            }
        }
        total
    };
    let g00 = shifted_green(lambda, x0, x0);
    let denom = 1.0 - k * g00;
    if denom.norm() < 1e-12 {
        return Err(Error::InvalidArgument("lambda is an eigenvalue of the interval model".into()));
    }
    let a = k * rd(x0) / denom;
    Ok(rd(x) + a * shifted_green(lambda, x, x0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_spectrum() {
        let s = delta_well_spectrum_1d(0.0, 0.3, 5).unwrap();
        for (n, l) in s.iter().enumerate() {
            let e = -((n + 1) as f64 * PI).powi(2);
            assert!((l - e).abs() < 1e-10 * e.abs(), "{l} {e}");
        }
    }

    #[test]
    fn midpoint_keeps_even_levels() {
        for k in [-3.0, 1.0, 7.0] {
            let s = delta_well_spectrum_1d(k, 0.5, 6).unwrap();
            for m in 1..=2 {
                let e = -(2.0 * m as f64 * PI).powi(2);
                assert!(s.iter().any(|l| (l - e).abs() < 1e-9 * e.abs()), "k={k}");
            }
        }
    }

    #[test]
    fn strong_attraction_binds_a_positive_level() {
        // k x⁰(1−x⁰) < −1 pushes the lowest level above zero
        let s = delta_well_spectrum_1d(-10.0, 0.5, 3).unwrap();
        let top = s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(top > 0.0);
        let sigma = top.sqrt();
        assert!(matching_condition_positive(-10.0, 0.5, sigma).abs() < 1e-9);
    }

    #[test]
    fn finite_differences_converge() {
        let fd = fd_eigenvalues(999, 0.0, 0.3, 1).unwrap();
        assert!((fd[0] + PI * PI).abs() < 1e-4);
        let exact = delta_well_spectrum_1d(-0.5, 0.3, 3).unwrap();
        let a = fd_eigenvalues(99, -0.5, 0.3, 3).unwrap();
        let b = fd_eigenvalues(199, -0.5, 0.3, 3).unwrap();
        for i in 0..3 {
            let ratio = (a[i] - exact[i]).abs() / (b[i] - exact[i]).abs();
            assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
        }
        let r = fd_discretize_1d(999, -0.5, 0.3, 3).unwrap();
        assert_eq!(r.order, 2);
        for i in 0..3 {
            assert!((r.extrapolated[i] - exact[i]).abs() <= r.err[i]);
        }
    }

    #[test]
    fn kappa_is_one() {
        let v = kappa_verdict(&[1.0, 2.0], [12, 20]).unwrap();
        assert_eq!(v.kappa, Some(1.0));
        assert!(v.rows.iter().all(|r| r.misfit[0] < 1e-9));
    }

    #[test]
    fn inner_products_of_sines() {
        let p = Point::puncture(&[0.41]).unwrap();
        for (m, n) in [(1, 1), (2, 5), (3, 3)] {
            let fm = move |x: &Point| SQRT_2 * (m as f64 * PI * x.x()).sin();
            let fn_ = move |x: &Point| SQRT_2 * (n as f64 * PI * x.x()).sin();
            let v = volume_inner_product(&p, &fm, &fn_, 16).unwrap();
            let e = if m == n { 1.0 } else { 0.0 };
            assert!((v.value - e).abs() < 1e-10);
        }
    }

    #[test]
    fn ball_inner_product_of_inverse_distance() {
        // ∫_B 1/|x|² dx = 4π, square integrability of 1/r
        let p = Point::puncture(&[0.0, 0.0, 0.0]).unwrap();
        let inv = |x: &Point| 1.0 / x.norm();
        let v = volume_inner_product(&p, &inv, &inv, 12).unwrap();
        assert!((v.value - 4.0 * PI).abs() < 1e-8, "{}", v.value);
    }

    #[test]
    fn closed_form_resolvent_satisfies_the_jump() {
        let (k, x0) = (-1.3, 0.3);
        let lam = Complex64::new(-20.0, 0.0);
        let f = |t: f64| t * (1.0 - t);
        let h = 1e-5;
        let u = |x: f64| delta_well_resolvent_1d(k, x0, lam, &f, x).unwrap();
        let right = (u(x0 + 2.0 * h) - u(x0 + h)) / h;
        let left = (u(x0 - h) - u(x0 - 2.0 * h)) / h;
        let jump = right - left;
        assert!((jump - k * u(x0 - 1e-9)).norm() < 1e-3, "{jump}");
        let x = 0.7;
        let lap = (u(x + 1e-3) - 2.0 * u(x) + u(x - 1e-3)) / 1e-6;
        assert!((lap - lam * u(x) - f(x)).norm() < 1e-4);
    }

    #[test]
    fn rank_probe_of_a_projection() {
        let sv = rank_probe(20, 30, 7, &|f| {
            let c = f[0] + f[3];
            Ok((0..20).map(|n| if n < 2 { c } else { Complex64::new(0.0, 0.0) }).collect())
        })
        .unwrap();
        assert!(sv[0] > 0.1 && sv[1] < 1e-14);
    }
}
