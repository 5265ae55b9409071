//! Gauss–Legendre rules, a product rule on the unit sphere and Richardson
//! extrapolation of radius sequences.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.on_interval(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule over `panels` equal sub-intervals.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + k as f64 * h;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ`, uniform
/// trapezoid in `φ`. Weights sum to `4π`.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let gl = GaussLegendre::new(n_theta);
        let mut points = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        let dphi = 2.0 * PI / n_phi as f64;
        for (ct, wt) in gl.nodes.iter().zip(&gl.weights) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for k in 0..n_phi {
                let phi = (k as f64 + 0.5) * dphi;
                points.push([st * phi.cos(), st * phi.sin(), *ct]);
                weights.push(wt * dphi);
            }
        }
        SphereRule { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn integrate<F: FnMut(&[f64; 3]) -> f64>(&self, mut f: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p))
            .sum()
    }
}

/// Nodes and weights for the part of the unit ball outside
/// `|ξ − c| < inner`, in spherical coordinates about the interior point `c`:
/// each ray `ξ = c + ρη` runs to the boundary and is split into `panels`
/// radial Gauss panels. Weights include the Jacobian `ρ²`.
pub fn ball_rule_about(
    center: [f64; 3],
    inner: f64,
    radial: &GaussLegendre,
    panels: usize,
    sphere: &SphereRule,
) -> Vec<([f64; 3], f64)> {
    let c2 = center.iter().map(|v| v * v).sum::<f64>();
    let mut out = Vec::with_capacity(sphere.len() * panels * radial.len());
    for (eta, ws) in sphere.points.iter().zip(&sphere.weights) {
        let ce = center[0] * eta[0] + center[1] * eta[1] + center[2] * eta[2];
        let reach = -ce + (ce * ce + 1.0 - c2).max(0.0).sqrt();
        if reach <= inner {
            continue;
        }
        let h = (reach - inner) / panels as f64;
        for k in 0..panels {
            let lo = inner + k as f64 * h;
            for (rho, w) in radial.on_interval(lo, lo + h) {
                let p = [center[0] + rho * eta[0], center[1] + rho * eta[1], center[2] + rho * eta[2]];
                out.push((p, ws * w * rho * rho));
            }
        }
    }
    out
}

/// `∫ f` with [`ball_rule_about`].
pub fn ball_integral_about<F: FnMut([f64; 3]) -> f64>(
    center: [f64; 3],
    inner: f64,
    radial: &GaussLegendre,
    panels: usize,
    sphere: &SphereRule,
    mut f: F,
) -> f64 {
    ball_rule_about(center, inner, radial, panels, sphere)
        .into_iter()
        .map(|(p, w)| w * f(p))
        .sum()
}

/// Result of extrapolating a sequence to `δ → 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub err: f64,
}

/// Polynomial (Neville) extrapolation to zero of samples `values[k]` taken at
/// radii `radii[k]`. The remainder is modelled as a power series in the
/// radius starting at first order.
///
/// Fails when the raw sequence is not Cauchy: the last increment is not
/// smaller than the first one and is above `abs_floor`.
pub fn richardson_to_zero(radii: &[f64], values: &[f64], abs_floor: f64) -> Result<Extrapolated> {
    if radii.len() != values.len() || radii.len() < 2 {
        return Err(Error::BadSchedule);
    }
    if radii.windows(2).any(|w| !(w[1] < w[0])) || radii.iter().any(|r| *r <= 0.0) {
        return Err(Error::BadSchedule);
    }
    let n = values.len();
    let first = (values[1] - values[0]).abs();
    let last = (values[n - 1] - values[n - 2]).abs();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !values.iter().all(|v| v.is_finite()) {
        return Err(Error::GammaNotStable {
            increment: f64::INFINITY,
        });
    }
    if last > abs_floor.max(1e-13 * scale) && last >= first {
        return Err(Error::GammaNotStable { increment: last });
    }

    // Neville tableau evaluated at zero; keep the last two diagonal entries.
    let mut t = values.to_vec();
    let mut prev_diag = values[n - 1];
    let mut diag = values[n - 1];
    for level in 1..n {
        for i in (level..n).rev() {
            let ri = radii[i];
            let rj = radii[i - level];
            t[i] = (ri * t[i - 1] - rj * t[i]) / (ri - rj);
        }
        prev_diag = diag;
        diag = t[n - 1];
    }
    Ok(Extrapolated {
        value: diag,
        err: (diag - prev_diag).abs(),
    })
}

/// Geometric schedule `δ_k = δ_0 · 2^{-k}`, `k = 0..levels`.
pub fn geometric_schedule(delta0: f64, levels: usize) -> Vec<f64> {
    (0..levels).map(|k| delta0 * 0.5f64.powi(k as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(8);
        // degree 15 is the limit for 8 nodes
        let exact = 2.0 / 15.0; // ∫_{-1}^{1} x^14 dx
        let v = gl.integrate(-1.0, 1.0, |x| x.powi(14));
        assert!((v - exact).abs() < 1e-14);
        let s: f64 = gl.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_rule_moments() {
        let rule = SphereRule::new(12, 24);
        let area = rule.integrate(|_| 1.0);
        assert!((area - 4.0 * PI).abs() < 1e-12);
        // ∮ η_j² = 4π/3, ∮ η_s η_j = 0
        let xx = rule.integrate(|p| p[0] * p[0]);
        let xy = rule.integrate(|p| p[0] * p[1]);
        let z = rule.integrate(|p| p[2]);
        assert!((xx - 4.0 * PI / 3.0).abs() < 1e-12);
        assert!(xy.abs() < 1e-13);
        assert!(z.abs() < 1e-13);
    }

    #[test]
    fn richardson_removes_polynomial_remainder() {
        let radii = geometric_schedule(0.1, 7);
        let values: Vec<f64> = radii.iter().map(|d| 1.5 + 0.3 * d - 2.0 * d * d + d.powi(3)).collect();
        let e = richardson_to_zero(&radii, &values, 1e-14).unwrap();
        assert!((e.value - 1.5).abs() < 1e-12, "{e:?}");
    }

    #[test]
    fn richardson_flags_divergence() {
        let radii = geometric_schedule(0.1, 7);
        let values: Vec<f64> = radii.iter().map(|d| 1.0 / d).collect();
        assert!(matches!(
            richardson_to_zero(&radii, &values, 1e-12),
            Err(Error::GammaNotStable { .. })
        ));
    }

    #[test]
    fn schedule_must_decrease() {
        assert_eq!(
            richardson_to_zero(&[0.1, 0.2], &[1.0, 1.0], 0.0),
            Err(Error::BadSchedule)
        );
    }

    #[test]
    fn ball_integral_about_offcenter_point() {
        // ∫_B |ξ|² dξ = 4π/5 from any interior center
        let gl = GaussLegendre::new(16);
        let sphere = SphereRule::new(24, 48);
        for c in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.4]] {
            let v = ball_integral_about(c, 0.0, &gl, 2, &sphere, |p| p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
            assert!((v - 4.0 * PI / 5.0).abs() < 1e-10, "{v}");
        }
    }
}
