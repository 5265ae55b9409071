//! Boundary functionals at the puncture.
//!
//! `γ_0(h) = −lim ∮ ∂h/∂ν dS` and `γ_s(h) = d · lim ∮ η_s h dS` over the
//! sphere `|t − x⁰| = δ` with outward unit normal `η`, as `δ → 0`. On the
//! interval the sphere is the point pair `x⁰ ± δ`, so `γ_0` is minus the
//! jump of `h'` and `γ_1` the jump of `h`.
//!
//! `β_0(v) = v_0(x⁰)` and `β_s(v) = ∂_s v_0(x⁰)` are the value and the
//! gradient of the regular part.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::point::{Dim, Point};
use crate::quadrature::{geometric_schedule, richardson_to_zero, Extrapolated, SphereRule};

pub const DEFAULT_ORDER: usize = 24;
pub const DEFAULT_DELTA0: f64 = 0.1;
pub const DEFAULT_LEVELS: usize = 7;
/// Step of the central differences behind `β_s` for fields without an
/// analytic gradient.
pub const BETA_STEP: f64 = 1e-5;
/// Increments below this are treated as converged.
const CAUCHY_FLOOR: f64 = 1e-12;

/// Surface integral defining `γ_j` at a single radius `δ`.
pub fn surface_gamma(h: &dyn ScalarField, j: usize, x0: &Point, delta: f64, order: usize) -> Result<f64> {
    check_functional(x0.dim(), j)?;
    if order < 4 {
        return Err(Error::QuadratureOrder(order));
    }
    let dist = x0.distance_to_boundary();
    if !(delta > 0.0 && delta < dist) {
        return Err(Error::SphereLeavesDomain {
            radius: delta,
            distance: dist,
        });
    }
    match x0.dim() {
        Dim::One => {
            let plus = x0.offset(delta, &[1.0]);
            let minus = x0.offset(-delta, &[1.0]);
            if j == 0 {
                let mut gp = [0.0; 3];
                let mut gm = [0.0; 3];
                h.gradient(&plus, &mut gp);
                h.gradient(&minus, &mut gm);
                Ok(-(gp[0] - gm[0]))
            } else {
                Ok(h.value(&plus) - h.value(&minus))
            }
        }
        Dim::Three => {
            let rule = SphereRule::new(order, 2 * order);
            let area = delta * delta;
            let mut g = [0.0; 3];
            let s = rule.integrate(|eta| {
                let t = x0.offset(delta, eta);
                if j == 0 {
                    h.gradient(&t, &mut g);
                    -(g[0] * eta[0] + g[1] * eta[1] + g[2] * eta[2])
                } else {
                    3.0 * eta[j - 1] * h.value(&t)
                }
            });
            Ok(area * s)
        }
    }
}

fn check_functional(dim: Dim, j: usize) -> Result<()> {
    if j > dim.n() {
        return Err(Error::InvalidArgument(format!(
            "functional index {j} outside 0..={}",
            dim.n()
        )));
    }
    Ok(())
}

/// The default radius schedule `δ_k = δ_0 2^{-k}`, with `δ_0` reduced when
/// the puncture is closer than `2 δ_0` to the boundary.
pub fn default_schedule(x0: &Point) -> Vec<f64> {
    let d0 = DEFAULT_DELTA0.min(0.5 * x0.distance_to_boundary());
    geometric_schedule(d0, DEFAULT_LEVELS)
}

/// Extrapolated `δ → 0` limit of [`surface_gamma`] along `schedule`.
pub fn gamma_limit(h: &dyn ScalarField, j: usize, x0: &Point, schedule: &[f64]) -> Result<Extrapolated> {
    gamma_limit_with_order(h, j, x0, schedule, DEFAULT_ORDER)
}

pub fn gamma_limit_with_order(
    h: &dyn ScalarField,
    j: usize,
    x0: &Point,
    schedule: &[f64],
    order: usize,
) -> Result<Extrapolated> {
    if schedule.len() < 2 || schedule.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::BadSchedule);
    }
    let values = schedule
        .iter()
        .map(|d| surface_gamma(h, j, x0, *d, order))
        .collect::<Result<Vec<_>>>()?;
    richardson_to_zero(schedule, &values, CAUCHY_FLOOR)
}

/// `γ_0..γ_d` with per-entry extrapolation errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaVector {
    pub values: Vec<f64>,
    pub err: Vec<f64>,
}

impl GammaVector {
    pub fn max_abs_diff(&self, target: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(target)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

pub fn gamma_vector(h: &dyn ScalarField, x0: &Point) -> Result<GammaVector> {
    gamma_vector_with(h, x0, &default_schedule(x0), DEFAULT_ORDER)
}

pub fn gamma_vector_with(h: &dyn ScalarField, x0: &Point, schedule: &[f64], order: usize) -> Result<GammaVector> {
    let n = x0.dim().n_functionals();
    let mut values = Vec::with_capacity(n);
    let mut err = Vec::with_capacity(n);
    for j in 0..n {
        let e = gamma_limit_with_order(h, j, x0, schedule, order)?;
        values.push(e.value);
        err.push(e.err);
    }
    Ok(GammaVector { values, err })
}

/// `β_0..β_d` of a regular field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaVector {
    pub values: Vec<f64>,
}

pub fn beta_vector(v0: &dyn ScalarField, x0: &Point) -> BetaVector {
    let dn = x0.dim().n();
    let mut values = vec![v0.value(x0)];
    let mut g = [0.0; 3];
    if v0.has_analytic_gradient() {
        v0.gradient(x0, &mut g);
    } else {
        crate::field::central_gradient(v0, x0, BETA_STEP, &mut g);
    }
    values.extend_from_slice(&g[..dn]);
    BetaVector { values }
}

/// Trace data `(γ(w), β(w))` of a decomposed field. `beta` is `None` when
/// only the singular strengths are known.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryTrace {
    pub gamma: Vec<Complex64>,
    pub beta: Option<Vec<Complex64>>,
}

impl BoundaryTrace {
    pub fn new(gamma: Vec<Complex64>, beta: Vec<Complex64>) -> Self {
        BoundaryTrace {
            gamma,
            beta: Some(beta),
        }
    }

    pub fn gamma_only(gamma: Vec<Complex64>) -> Self {
        BoundaryTrace { gamma, beta: None }
    }

    /// From a real regular part and singular strengths.
    pub fn from_regular(regular: &dyn ScalarField, gamma: &[f64], x0: &Point) -> Self {
        let b = beta_vector(regular, x0);
        BoundaryTrace::new(
            gamma.iter().map(|g| Complex64::new(*g, 0.0)).collect(),
            b.values.iter().map(|v| Complex64::new(*v, 0.0)).collect(),
        )
    }

    /// From complex data split as real and imaginary regular parts.
    pub fn from_complex_regular(
        re: &dyn ScalarField,
        im: &dyn ScalarField,
        gamma: Vec<Complex64>,
        x0: &Point,
    ) -> Self {
        let br = beta_vector(re, x0);
        let bi = beta_vector(im, x0);
        let beta = br
            .values
            .iter()
            .zip(&bi.values)
            .map(|(a, b)| Complex64::new(*a, *b))
            .collect();
        BoundaryTrace::new(gamma, beta)
    }
}

/// `J(w, v) = Σ γ_i(w) conj(β_i(v)) − Σ β_i(w) conj(γ_i(v))`.
pub fn boundary_form(w: &BoundaryTrace, v: &BoundaryTrace) -> Result<Complex64> {
    let (bw, bv) = match (&w.beta, &v.beta) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::DecompositionRequired),
    };
    let n = w.gamma.len();
    if v.gamma.len() != n || bw.len() != n || bv.len() != n {
        return Err(Error::Shape("boundary traces of different dimension".into()));
    }
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        s += w.gamma[i] * bv[i].conj() - bw[i] * v.gamma[i].conj();
    }
    Ok(s)
}
