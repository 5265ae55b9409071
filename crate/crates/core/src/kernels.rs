//! Dirichlet Green kernels of the unit interval and the unit ball in three
//! dimensions.
//!
//! Every kernel is normalized so that `Δ_x G(x, ξ) = δ(x − ξ)` and
//! `G(·, ξ) = 0` on the boundary. With this sign the outward flux of
//! `G(·, ξ)` through a small sphere around `ξ` is `+1`.
//!
//! Besides `G` itself the module evaluates the source derivatives
//! `∂G(x, ξ)/∂ξ_s`, the field derivatives `∂G(x, ξ)/∂x_s` and the gradients
//! of both in `x`, all in closed form.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{Dim, Point};

/// `C_3 = −1/((d − 2) σ_d)` with `σ_3 = 4π`.
pub const C3: f64 = -1.0 / (4.0 * PI);

/// Below this source radius the image term uses its limit value.
pub const IMAGE_LIMIT_RADIUS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XyzQuantities {
    pub x2: f64,
    pub y2: f64,
    pub z2: f64,
}

fn require_three(p: &Point) -> Result<()> {
    if p.dim() != Dim::Three {
        return Err(Error::UnsupportedDimension {
            expected: 3,
            got: p.dim().n(),
        });
    }
    Ok(())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `X² = |x − ξ|²`, `Y² = |ξ|²·|x − ξ/|ξ|²|²`, `Z² = (1 − |x|²)(1 − |ξ|²)`,
/// evaluated from their literal definitions.
pub fn xyz_quantities(x: &Point, xi: &Point) -> Result<XyzQuantities> {
    require_three(x)?;
    require_three(xi)?;
    let xi2 = xi.norm_sq();
    if xi2.sqrt() < IMAGE_LIMIT_RADIUS {
        return Err(Error::ImagePointUndefined);
    }
    let xs = x.as_slice();
    let ks = xi.as_slice();
    let x2: f64 = xs.iter().zip(ks).map(|(a, b)| (a - b) * (a - b)).sum();
    let img: f64 = xs
        .iter()
        .zip(ks)
        .map(|(a, b)| {
            let d = a - b / xi2;
            d * d
        })
        .sum();
    let y2 = xi2 * img;
    let z2 = (1.0 - x.norm_sq()) * (1.0 - xi2);
    Ok(XyzQuantities { x2, y2, z2 })
}

/// `Y²` through the expansion `|x|²|ξ|² − 2 x·ξ + 1`. Equal to the literal
/// definition for `ξ ≠ 0` and continuous at `ξ = 0`, where it is `1`.
fn image_distance_sq(x: &[f64], xi: &[f64]) -> f64 {
    let x2 = dot(x, x);
    let xi2 = dot(xi, xi);
    if xi2.sqrt() < IMAGE_LIMIT_RADIUS {
        return 1.0;
    }
    (x2 * xi2 - 2.0 * dot(x, xi) + 1.0).max(0.0)
}

/// Free-space fundamental solution `C_3 |x − ξ|^{-1}` (`d = 3`).
pub fn fundamental_solution(x: &Point, xi: &Point) -> Result<f64> {
    require_three(x)?;
    require_three(xi)?;
    let r = x.distance(xi);
    if r == 0.0 {
        return Err(Error::KernelSingularity);
    }
    Ok(C3 / r)
}

/// Dirichlet Green function of the unit ball, `C_3 (X^{-1} − Y^{-1})`.
pub fn green_ball(x: &Point, xi: &Point) -> Result<f64> {
    require_three(x)?;
    require_three(xi)?;
    let r = x.distance(xi);
    if r == 0.0 {
        return Err(Error::KernelSingularity);
    }
    let y = image_distance_sq(x.as_slice(), xi.as_slice()).sqrt();
    Ok(C3 * (1.0 / r - 1.0 / y))
}

/// Dirichlet Green function of `(0, 1)` with `G'' = δ(x − t)`.
pub fn green_interval(x: f64, t: f64) -> f64 {
    if x <= t {
        -x * (1.0 - t)
    } else {
        -t * (1.0 - x)
    }
}

/// `G(x, ξ)` for either dimension.
pub fn green(x: &Point, xi: &Point) -> Result<f64> {
    match x.dim() {
        Dim::One => Ok(green_interval(x.x(), xi.x())),
        Dim::Three => green_ball(x, xi),
    }
}

/// Source derivative `∂G(x, ξ)/∂ξ_s`, `s` one-based.
pub fn green_source_gradient(x: &Point, xi: &Point, s: usize) -> Result<f64> {
    check_component(x.dim(), s)?;
    match x.dim() {
        Dim::One => {
            let (xv, t) = (x.x(), xi.x());
            if xv == t {
                return Err(Error::KernelSingularity);
            }
            Ok(if xv < t { xv } else { xv - 1.0 })
        }
        Dim::Three => {
            let xs = x.as_slice();
            let ks = xi.as_slice();
            let r = x.distance(xi);
            if r == 0.0 {
                return Err(Error::KernelSingularity);
            }
            let y = image_distance_sq(xs, ks).sqrt();
            let x2 = dot(xs, xs);
            let i = s - 1;
            Ok(C3 * ((xs[i] - ks[i]) / r.powi(3) - (xs[i] - x2 * ks[i]) / y.powi(3)))
        }
    }
}

/// Field derivative `∂G(x, ξ)/∂x_s`, `s` one-based.
pub fn green_field_gradient(x: &Point, xi: &Point, s: usize) -> Result<f64> {
    check_component(x.dim(), s)?;
    let mut g = [0.0; 3];
    green_gradient_x(x, xi, &mut g)?;
    Ok(g[s - 1])
}

/// `∇_x G(x, ξ)`.
pub fn green_gradient_x(x: &Point, xi: &Point, out: &mut [f64]) -> Result<()> {
    match x.dim() {
        Dim::One => {
            let (xv, t) = (x.x(), xi.x());
            out[0] = if xv <= t { -(1.0 - t) } else { t };
            Ok(())
        }
        Dim::Three => {
            let xs = x.as_slice();
            let ks = xi.as_slice();
            let r = x.distance(xi);
            if r == 0.0 {
                return Err(Error::KernelSingularity);
            }
            let y = image_distance_sq(xs, ks).sqrt();
            let k2 = dot(ks, ks);
            let (r3, y3) = (r.powi(3), y.powi(3));
            for k in 0..3 {
                out[k] = C3 * (-(xs[k] - ks[k]) / r3 + (k2 * xs[k] - ks[k]) / y3);
            }
            Ok(())
        }
    }
}

/// `∇_x ∂G(x, ξ)/∂ξ_s`.
pub fn source_gradient_gradient_x(x: &Point, xi: &Point, s: usize, out: &mut [f64]) -> Result<()> {
    check_component(x.dim(), s)?;
    match x.dim() {
        Dim::One => {
            if x.x() == xi.x() {
                return Err(Error::KernelSingularity);
            }
            out[0] = 1.0;
            Ok(())
        }
        Dim::Three => {
            let xs = x.as_slice();
            let ks = xi.as_slice();
            let r = x.distance(xi);
            if r == 0.0 {
                return Err(Error::KernelSingularity);
            }
            let y = image_distance_sq(xs, ks).sqrt();
            let x2 = dot(xs, xs);
            let k2 = dot(ks, ks);
            let i = s - 1;
            let (r3, r5, y3, y5) = (r.powi(3), r.powi(5), y.powi(3), y.powi(5));
            for k in 0..3 {
                let dks = if k == i { 1.0 } else { 0.0 };
                let direct = dks / r3 - 3.0 * (xs[i] - ks[i]) * (xs[k] - ks[k]) / r5;
                let image = (dks - 2.0 * xs[k] * ks[i]) / y3
                    - 3.0 * (xs[i] - x2 * ks[i]) * (k2 * xs[k] - ks[k]) / y5;
                out[k] = C3 * (direct - image);
            }
            Ok(())
        }
    }
}

/// `∇_x ∂G(x, ξ)/∂x_s`.
pub fn field_gradient_gradient_x(x: &Point, xi: &Point, s: usize, out: &mut [f64]) -> Result<()> {
    check_component(x.dim(), s)?;
    match x.dim() {
        Dim::One => {
            out[0] = 0.0;
            Ok(())
        }
        Dim::Three => {
            let xs = x.as_slice();
            let ks = xi.as_slice();
            let r = x.distance(xi);
            if r == 0.0 {
                return Err(Error::KernelSingularity);
            }
            let y = image_distance_sq(xs, ks).sqrt();
            let k2 = dot(ks, ks);
            let j = s - 1;
            let (r3, r5, y3, y5) = (r.powi(3), r.powi(5), y.powi(3), y.powi(5));
            for k in 0..3 {
                let djk = if k == j { 1.0 } else { 0.0 };
                out[k] = C3
                    * (-djk / r3 + 3.0 * (xs[j] - ks[j]) * (xs[k] - ks[k]) / r5 + k2 * djk / y3
                        - 3.0 * (k2 * xs[j] - ks[j]) * (k2 * xs[k] - ks[k]) / y5);
            }
            Ok(())
        }
    }
}

fn check_component(dim: Dim, s: usize) -> Result<()> {
    if s == 0 || s > dim.n() {
        return Err(Error::InvalidArgument(format!(
            "derivative component {s} outside 1..={}",
            dim.n()
        )));
    }
    Ok(())
}

/// Green kernel of the domain with the puncture `x⁰` fixed.
///
/// The singular modes `φ_0..φ_d` returned by [`KernelBundle::mode`] are the
/// kernels dual to the boundary functionals: `γ_i(φ_j) = δ_ij`. They are
/// `φ_0 = −G(·, x⁰)` and `φ_s = −∂G(·, ξ)/∂ξ_s |_{ξ = x⁰}`; the leading
/// term of `φ_s` near the puncture is `C_d (2 − d) |x − x⁰|^{-d} (x_s − x⁰_s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelBundle {
    pub puncture: Point,
}

impl KernelBundle {
    pub fn new(puncture: Point) -> Result<Self> {
        if puncture.distance_to_boundary() <= 0.0 {
            return Err(Error::PunctureNotInterior(puncture.as_slice().to_vec()));
        }
        Ok(KernelBundle { puncture })
    }

    pub fn dim(&self) -> Dim {
        self.puncture.dim()
    }

    pub fn green(&self, x: &Point) -> Result<f64> {
        green(x, &self.puncture)
    }

    pub fn source_gradient(&self, x: &Point, s: usize) -> Result<f64> {
        green_source_gradient(x, &self.puncture, s)
    }

    pub fn field_gradient(&self, x: &Point, s: usize) -> Result<f64> {
        green_field_gradient(x, &self.puncture, s)
    }

    /// Singular mode `φ_i`, `i = 0..=d`.
    pub fn mode(&self, x: &Point, i: usize) -> Result<f64> {
        if i == 0 {
            Ok(-self.green(x)?)
        } else {
            Ok(-self.source_gradient(x, i)?)
        }
    }

    /// `∇_x φ_i`.
    pub fn mode_gradient(&self, x: &Point, i: usize, out: &mut [f64]) -> Result<()> {
        if i == 0 {
            green_gradient_x(x, &self.puncture, out)?;
        } else {
            source_gradient_gradient_x(x, &self.puncture, i, out)?;
        }
        for v in out.iter_mut().take(self.dim().n()) {
            *v = -*v;
        }
        Ok(())
    }

    /// Value of the regular (compensating) part of `G(·, x⁰)` at the
    /// puncture, i.e. `lim_{x→x⁰} (G(x, x⁰) − ε(x, x⁰))`.
    pub fn green_regular_value_at_puncture(&self) -> f64 {
        match self.dim() {
            Dim::One => green_interval(self.puncture.x(), self.puncture.x()),
            Dim::Three => {
                let p = self.puncture.as_slice();
                -C3 / image_distance_sq(p, p).sqrt()
            }
        }
    }
}
