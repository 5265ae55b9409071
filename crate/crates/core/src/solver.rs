//! Solution formulas: the Dirichlet problem, the maximal operator with
//! prescribed singular strengths, and the perturbed problem `B_K u = f`.

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::SpectralBasis;
use crate::error::{Error, Result};
use crate::field::{DecomposedField, ScalarField};
use crate::gamma::gamma_vector;
use crate::kernels::{green, green_interval, KernelBundle};
use crate::perturbation::{PerturbationK, PunctureSpectrum};
use crate::point::{Dim, Point};
use crate::quadrature::{ball_integral_about, ball_rule_about, GaussLegendre, SphereRule};

/// Quadrature levels of the Green volume integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletOptions {
    /// Gauss nodes per panel.
    pub order: usize,
    /// Panels per sub-interval (d = 1) or per ray (d = 3).
    pub panels: usize,
    /// Allowed disagreement between the two refinement levels.
    pub tol: f64,
}

impl Default for DirichletOptions {
    fn default() -> Self {
        DirichletOptions {
            order: 16,
            panels: 4,
            tol: 1e-8,
        }
    }
}

/// `w(x) = ∫_Ω G(x, ξ) f(ξ) dξ`, the solution of `Δw = f`, `w|∂Ω = 0`.
///
/// The interval integral is split at `x`; the ball integral runs in
/// spherical coordinates about `x`, where `ρ² dρ` absorbs the kernel
/// singularity. The value at `order` is compared with one at `order + 8`
/// and twice the panels.
pub fn dirichlet_solve(f: &dyn ScalarField, x: &Point) -> Result<f64> {
    dirichlet_solve_with(f, x, DirichletOptions::default())
}

pub fn dirichlet_solve_with(f: &dyn ScalarField, x: &Point, opts: DirichletOptions) -> Result<f64> {
    if f.dim() != x.dim() {
        return Err(Error::UnsupportedDimension {
            expected: f.dim().n(),
            got: x.dim().n(),
        });
    }
    if opts.order < 2 || opts.panels == 0 {
        return Err(Error::QuadratureOrder(opts.order));
    }
    let coarse = green_integral(f, x, opts.order, opts.panels)?;
    let fine = green_integral(f, x, opts.order + 8, 2 * opts.panels)?;
    let diff = (fine - coarse).abs();
    if !fine.is_finite() || diff > opts.tol * fine.abs().max(1.0) {
        return Err(Error::QuadratureNotConverged(diff));
    }
    Ok(fine)
}

fn green_integral(f: &dyn ScalarField, x: &Point, order: usize, panels: usize) -> Result<f64> {
    let gl = GaussLegendre::new(order);
    match x.dim() {
        Dim::One => {
            let xv = x.x();
            let piece = |a: f64, b: f64| {
                if b <= a {
                    return 0.0;
                }
                gl.integrate_composite(a, b, panels, |t| green_interval(xv, t) * f.value(&Point::raw(Dim::One, [t, 0.0, 0.0])))
            };
            Ok(piece(0.0, xv) + piece(xv, 1.0))
        }
        Dim::Three => {
            let sphere = SphereRule::new(order + 8, 2 * order + 16);
            let mut failed = false;
            let v = ball_integral_about(x.coords3(), 0.0, &gl, panels, &sphere, |p| {
                let xi = Point::raw(Dim::Three, p);
                match green(x, &xi) {
                    Ok(g) => g * f.value(&xi),
                    Err(_) => {
                        failed = true;
                        0.0
                    }
                }
            });
            if failed {
                return Err(Error::KernelSingularity);
            }
            Ok(v)
        }
    }
}

/// `w = Σ f̂_n ω_n / μ_n` for `f` given by its Fourier coefficients.
pub fn dirichlet_solve_spectral(basis: &SpectralBasis, f: &[Complex64], x: &Point) -> Result<Complex64> {
    if f.len() != basis.len() {
        return Err(Error::Shape(format!("{} coefficients for {} basis entries", f.len(), basis.len())));
    }
    let vals = basis.values_at(x);
    Ok(f.iter().zip(&vals).enumerate().map(|(n, (a, w))| a * w / basis.mu(n)).sum())
}

/// The solution of `B_M u = f`, `γ(u) = g`:
/// `u = ∫ G f + Σ g_i φ_i`.
pub fn bm_solve(f: &dyn ScalarField, gamma_targets: &[f64], bundle: &KernelBundle, x: &Point) -> Result<f64> {
    check_targets(bundle, gamma_targets)?;
    if x.distance(&bundle.puncture) == 0.0 {
        return Err(Error::SingularPointEvaluation);
    }
    let mut u = dirichlet_solve(f, x)?;
    for (i, g) in gamma_targets.iter().enumerate() {
        if *g != 0.0 {
            u += g * bundle.mode(x, i)?;
        }
    }
    Ok(u)
}

fn check_targets(bundle: &KernelBundle, g: &[f64]) -> Result<()> {
    let nf = bundle.dim().n_functionals();
    if g.len() != nf {
        return Err(Error::Shape(format!("{} gamma targets, expected {nf}", g.len())));
    }
    Ok(())
}

/// `B_K^{-1} f`: the regular part `Σ f̂_n ω_n/μ_n` plus `Σ γ_i(K f) φ_i`,
/// `γ_i(K f) = Σ_n C_in f̂_n`.
pub fn bk_solve_field(ctx: &PunctureSpectrum, k: &PerturbationK, f: &[Complex64]) -> Result<DecomposedField> {
    k.check_against(ctx)?;
    if f.len() != ctx.cutoff() {
        return Err(Error::Shape(format!("{} coefficients for {} basis entries", f.len(), ctx.cutoff())));
    }
    Ok(DecomposedField {
        regular: f.iter().enumerate().map(|(n, a)| a / ctx.mu(n)).collect(),
        singular: (0..ctx.n_functionals()).map(|i| k.apply_row(i, f)).collect(),
    })
}

/// Value of `B_K^{-1} f` at `x ≠ x⁰`.
pub fn bk_solve(ctx: &PunctureSpectrum, k: &PerturbationK, f: &[Complex64], x: &Point) -> Result<Complex64> {
    bk_solve_field(ctx, k, f)?.evaluate(ctx.basis(), ctx.bundle(), x)
}

/// A field split as `h = h_0 + Σ c_i φ_i`.
#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub field: DecomposedField,
    pub gamma_err: Vec<f64>,
    /// Largest `|h_0 − Σ ĥ_0n ω_n|` over the probe points.
    pub projection_residual: f64,
}

/// Splits `h` into singular strengths `c = γ(h)` and a regular part
/// projected onto `basis`.
pub fn decompose(h: &dyn ScalarField, basis: &SpectralBasis, bundle: &KernelBundle) -> Result<Decomposition> {
    if h.dim() != basis.dim() || basis.dim() != bundle.dim() {
        return Err(Error::UnsupportedDimension {
            expected: basis.dim().n(),
            got: h.dim().n(),
        });
    }
    let gv = gamma_vector(h, &bundle.puncture).map_err(|e| match e {
        Error::GammaNotStable { .. } => Error::FieldOutsideDomain(e.to_string()),
        other => other,
    })?;
    let c = gv.values.clone();
    let regular_value = |x: &Point| -> f64 {
        let mut v = h.value(x);
        for (i, ci) in c.iter().enumerate() {
            if *ci != 0.0 {
                v -= ci * bundle.mode(x, i).unwrap_or(f64::NAN);
            }
        }
        v
    };
    let coeffs = project(basis, &bundle.puncture, &regular_value);
    let mut residual: f64 = 0.0;
    for x in probe_points(basis.dim(), &bundle.puncture) {
        let series = basis.series_value(&coeffs, &x);
        residual = residual.max((regular_value(&x) - series).abs());
    }
    Ok(Decomposition {
        field: DecomposedField {
            regular: coeffs.iter().map(|v| Complex64::new(*v, 0.0)).collect(),
            singular: c.iter().map(|v| Complex64::new(*v, 0.0)).collect(),
        },
        gamma_err: gv.err,
        projection_residual: residual,
    })
}

/// `⟨g, ω_n⟩` for every basis entry.
fn project(basis: &SpectralBasis, puncture: &Point, g: &dyn Fn(&Point) -> f64) -> Vec<f64> {
    let mut out = vec![0.0; basis.len()];
    let zmax = basis.entries().last().map(|e| e.z).unwrap_or(1.0);
    match basis.dim() {
        Dim::One => {
            let gl = GaussLegendre::new(20);
            let x0 = puncture.x();
            for (a, b) in [(0.0, x0), (x0, 1.0)] {
                let panels = ((b - a) * zmax / 3.0).ceil() as usize + 2;
                let h = (b - a) / panels as f64;
                for k in 0..panels {
                    for (t, w) in gl.on_interval(a + k as f64 * h, a + (k + 1) as f64 * h) {
                        let p = Point::raw(Dim::One, [t, 0.0, 0.0]);
                        let gv = g(&p) * w;
                        for (o, e) in out.iter_mut().zip(basis.entries()) {
                            *o += gv * e.norm * (e.z * t).sin();
                        }
                    }
                }
            }
        }
        Dim::Three => {
            let lmax = basis.entries().iter().map(|e| e.l).max().unwrap_or(0);
            let gl = GaussLegendre::new(zmax as usize + 16);
            let sphere = SphereRule::new(lmax + 16, 2 * lmax + 32);
            for (p, w) in ball_rule_about(puncture.coords3(), 0.0, &gl, 2, &sphere) {
                let pt = Point::raw(Dim::Three, p);
                let gv = g(&pt) * w;
                for (o, v) in out.iter_mut().zip(basis.values_at(&pt)) {
                    *o += gv * v;
                }
            }
        }
    }
    out
}

fn probe_points(dim: Dim, puncture: &Point) -> Vec<Point> {
    let mut pts = Vec::new();
    match dim {
        Dim::One => {
            for i in 1..40 {
                let t = i as f64 / 40.0;
                if (t - puncture.x()).abs() > 1e-3 {
                    pts.push(Point::raw(Dim::One, [t, 0.0, 0.0]));
                }
            }
        }
        Dim::Three => {
            let sphere = SphereRule::new(4, 8);
            for r in [0.2, 0.5, 0.8] {
                for eta in &sphere.points {
                    let p = Point::raw(Dim::Three, [r * eta[0], r * eta[1], r * eta[2]]);
                    if p.distance(puncture) > 1e-3 {
                        pts.push(p);
                    }
                }
            }
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FnField, KernelField, KernelKind};

    #[test]
    fn interval_constant_source() {
        let f = FnField::new(Dim::One, |_| 1.0);
        let w = dirichlet_solve(&f, &Point::on_line(0.5).unwrap()).unwrap();
        assert!((w + 0.125).abs() < 1e-13);
        for x in [0.1, 0.37, 0.9] {
            let w = dirichlet_solve(&f, &Point::on_line(x).unwrap()).unwrap();
            assert!((w - (x * x - x) / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn ball_radial_manufactured() {
        // u = (1 − |x|²)/6 has Δu = −1
        let f = FnField::new(Dim::Three, |_| -1.0);
        for p in [[0.0, 0.0, 0.0], [0.2, -0.3, 0.1], [0.5, 0.4, -0.3]] {
            let x = Point::in_ball(p).unwrap();
            let w = dirichlet_solve(&f, &x).unwrap();
            let exact = (1.0 - x.norm_sq()) / 6.0;
            assert!((w - exact).abs() < 1e-9, "{w} {exact}");
        }
    }

    #[test]
    fn eigenfunction_source() {
        let basis = SpectralBasis::new(Dim::Three, 4).unwrap();
        let e = *basis.entry(2).unwrap();
        let f = FnField::new(Dim::Three, move |x| e.value(x));
        let x = Point::in_ball([0.1, 0.25, -0.3]).unwrap();
        let w = dirichlet_solve(&f, &x).unwrap();
        assert!((w - e.value(&x) / e.mu).abs() < 1e-9);
    }

    #[test]
    fn bm_solve_adds_modes() {
        let bundle = KernelBundle::new(Point::puncture(&[0.1, 0.2, -0.1]).unwrap()).unwrap();
        let zero = FnField::new(Dim::Three, |_| 0.0);
        let x = Point::in_ball([0.4, -0.2, 0.3]).unwrap();
        for j in 0..4 {
            let mut g = [0.0; 4];
            g[j] = 1.0;
            let u = bm_solve(&zero, &g, &bundle, &x).unwrap();
            assert!((u - bundle.mode(&x, j).unwrap()).abs() < 1e-15);
        }
        assert!(matches!(
            bm_solve(&zero, &[0.0; 4], &bundle, &bundle.puncture),
            Err(Error::SingularPointEvaluation)
        ));
    }

    #[test]
    fn bk_zero_table_is_dirichlet() {
        let ctx = PunctureSpectrum::new(SpectralBasis::new(Dim::One, 30).unwrap(), Point::puncture(&[0.3]).unwrap(), 1.0).unwrap();
        let k = PerturbationK::zero(&ctx);
        let f: Vec<Complex64> = (0..30).map(|n| Complex64::new(1.0 / (n + 1) as f64, 0.0)).collect();
        let x = Point::on_line(0.7).unwrap();
        let a = bk_solve(&ctx, &k, &f, &x).unwrap();
        let b = dirichlet_solve_spectral(ctx.basis(), &f, &x).unwrap();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn decompose_singular_mode() {
        let basis = SpectralBasis::new(Dim::Three, 20).unwrap();
        let bundle = KernelBundle::new(Point::puncture(&[0.1, -0.2, 0.15]).unwrap()).unwrap();
        let h = KernelField::new(bundle, KernelKind::Mode(1));
        let d = decompose(&h, &basis, &bundle).unwrap();
        assert!((d.field.singular[1].re - 1.0).abs() < 1e-6);
        for i in [0, 2, 3] {
            assert!(d.field.singular[i].norm() < 1e-6);
        }
        assert!(d.field.regular.iter().all(|c| c.norm() < 1e-5));
    }

    #[test]
    fn decompose_interval_series_round_trip() {
        let basis = SpectralBasis::new(Dim::One, 24).unwrap();
        let bundle = KernelBundle::new(Point::puncture(&[0.37]).unwrap()).unwrap();
        let a: Vec<f64> = (0..24).map(|n| if n < 6 { 0.3 / (n + 1) as f64 } else { 0.0 }).collect();
        let b2 = basis.clone();
        let h = FnField::new(Dim::One, move |x| {
            b2.series_value(&a, x) + 0.7 * bundle.mode(x, 0).unwrap() - 0.4 * bundle.mode(x, 1).unwrap()
        });
        let d = decompose(&h, &basis, &bundle).unwrap();
        assert!((d.field.singular[0].re - 0.7).abs() < 1e-6);
        assert!((d.field.singular[1].re + 0.4).abs() < 1e-6);
        assert!(d.projection_residual < 1e-6, "{}", d.projection_residual);
    }
}
