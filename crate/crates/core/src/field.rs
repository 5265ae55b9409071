//! Scalar fields on the punctured domain.

use num_complex::Complex64;
use serde::Serialize;

use crate::basis::SpectralBasis;
use crate::error::{Error, Result};
use crate::kernels::{field_gradient_gradient_x, green_gradient_x, KernelBundle};
use crate::point::{Dim, Point};

const FD_STEP: f64 = 1e-6;

/// A real field evaluable away from the puncture.
pub trait ScalarField {
    fn dim(&self) -> Dim;

    fn value(&self, x: &Point) -> f64;

    /// `∇h(x)` into `out[..d]`; central differences unless overridden.
    fn gradient(&self, x: &Point, out: &mut [f64]) {
        central_gradient(self, x, FD_STEP, out);
    }

    fn has_analytic_gradient(&self) -> bool {
        false
    }
}

/// Central-difference gradient with step `h`.
pub fn central_gradient<F: ScalarField + ?Sized>(f: &F, x: &Point, h: f64, out: &mut [f64]) {
    for k in 0..f.dim().n() {
        let mut e = [0.0; 3];
        e[k] = 1.0;
        out[k] = (f.value(&x.offset(h, &e)) - f.value(&x.offset(-h, &e))) / (2.0 * h);
    }
}

type ValueFn<'a> = Box<dyn Fn(&Point) -> f64 + 'a>;
type GradientFn<'a> = Box<dyn Fn(&Point, &mut [f64]) + 'a>;

/// A field given by closures.
pub struct FnField<'a> {
    dim: Dim,
    value: ValueFn<'a>,
    gradient: Option<GradientFn<'a>>,
}

impl<'a> FnField<'a> {
    pub fn new(dim: Dim, value: impl Fn(&Point) -> f64 + 'a) -> Self {
        FnField {
            dim,
            value: Box::new(value),
            gradient: None,
        }
    }

    pub fn with_gradient(
        dim: Dim,
        value: impl Fn(&Point) -> f64 + 'a,
        gradient: impl Fn(&Point, &mut [f64]) + 'a,
    ) -> Self {
        FnField {
            dim,
            value: Box::new(value),
            gradient: Some(Box::new(gradient)),
        }
    }
}

impl ScalarField for FnField<'_> {
    fn dim(&self) -> Dim {
        self.dim
    }

    fn value(&self, x: &Point) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &Point, out: &mut [f64]) {
        match &self.gradient {
            Some(g) => g(x, out),
            None => central_gradient(self, x, FD_STEP, out),
        }
    }

    fn has_analytic_gradient(&self) -> bool {
        self.gradient.is_some()
    }
}

/// Which kernel a [`KernelField`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelKind {
    /// `G(·, x⁰)`.
    Green,
    /// `∂G(·, ξ)/∂ξ_s` at `ξ = x⁰`, one-based `s`.
    SourceGradient(usize),
    /// `∂G(ξ, x⁰)/∂ξ_s` with the derivative in the field slot, one-based `s`.
    FieldGradient(usize),
    /// The singular mode `φ_i`, `i = 0..=d`.
    Mode(usize),
}

/// A Green-kernel field with analytic gradient. Evaluates to `NaN` at the
/// puncture.
#[derive(Debug, Clone, Copy)]
pub struct KernelField {
    pub bundle: KernelBundle,
    pub kind: KernelKind,
}

impl KernelField {
    pub fn new(bundle: KernelBundle, kind: KernelKind) -> Self {
        KernelField { bundle, kind }
    }
}

impl ScalarField for KernelField {
    fn dim(&self) -> Dim {
        self.bundle.dim()
    }

    fn value(&self, x: &Point) -> f64 {
        let r = match self.kind {
            KernelKind::Green => self.bundle.green(x),
            KernelKind::SourceGradient(s) => self.bundle.source_gradient(x, s),
            KernelKind::FieldGradient(s) => self.bundle.field_gradient(x, s),
            KernelKind::Mode(i) => self.bundle.mode(x, i),
        };
        r.unwrap_or(f64::NAN)
    }

    fn gradient(&self, x: &Point, out: &mut [f64]) {
        let p = &self.bundle.puncture;
        let r = match self.kind {
            KernelKind::Green => green_gradient_x(x, p, out),
            KernelKind::SourceGradient(s) => {
                crate::kernels::source_gradient_gradient_x(x, p, s, out)
            }
            KernelKind::FieldGradient(s) => field_gradient_gradient_x(x, p, s, out),
            KernelKind::Mode(i) => self.bundle.mode_gradient(x, i, out),
        };
        if r.is_err() {
            out.iter_mut().for_each(|v| *v = f64::NAN);
        }
    }

    fn has_analytic_gradient(&self) -> bool {
        true
    }
}

/// `Σ a_n ω_n` over a spectral basis.
pub struct SeriesField<'a> {
    pub basis: &'a SpectralBasis,
    pub coeffs: Vec<f64>,
}

impl ScalarField for SeriesField<'_> {
    fn dim(&self) -> Dim {
        self.basis.dim()
    }

    fn value(&self, x: &Point) -> f64 {
        self.basis.series_value(&self.coeffs, x)
    }

    fn gradient(&self, x: &Point, out: &mut [f64]) {
        let all = self.basis.evaluate_all(x);
        let dn = self.dim().n();
        out[..dn].iter_mut().for_each(|v| *v = 0.0);
        for (d, a) in all.iter().zip(&self.coeffs) {
            for k in 0..dn {
                out[k] += a * d.d[k];
            }
        }
    }

    fn has_analytic_gradient(&self) -> bool {
        true
    }
}

/// A linear combination of borrowed fields.
pub struct FieldSum<'a> {
    dim: Dim,
    terms: Vec<(f64, &'a dyn ScalarField)>,
}

impl<'a> FieldSum<'a> {
    pub fn new(dim: Dim) -> Self {
        FieldSum { dim, terms: Vec::new() }
    }

    pub fn term(mut self, coeff: f64, field: &'a dyn ScalarField) -> Self {
        self.terms.push((coeff, field));
        self
    }
}

impl ScalarField for FieldSum<'_> {
    fn dim(&self) -> Dim {
        self.dim
    }

    fn value(&self, x: &Point) -> f64 {
        self.terms.iter().map(|(a, f)| a * f.value(x)).sum()
    }

    fn gradient(&self, x: &Point, out: &mut [f64]) {
        let dn = self.dim.n();
        out[..dn].iter_mut().for_each(|v| *v = 0.0);
        let mut g = [0.0; 3];
        for (a, f) in &self.terms {
            f.gradient(x, &mut g);
            for k in 0..dn {
                out[k] += a * g[k];
            }
        }
    }

    fn has_analytic_gradient(&self) -> bool {
        self.terms.iter().all(|(_, f)| f.has_analytic_gradient())
    }
}

/// A field `w_0 + Σ c_i φ_i` with the regular part `w_0` stored as Fourier
/// coefficients over a spectral basis and the singular coefficients
/// `c_i = γ_i` of the field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecomposedField {
    pub regular: Vec<Complex64>,
    pub singular: Vec<Complex64>,
}

impl DecomposedField {
    pub fn zero(cutoff: usize, dim: Dim) -> Self {
        DecomposedField {
            regular: vec![Complex64::new(0.0, 0.0); cutoff],
            singular: vec![Complex64::new(0.0, 0.0); dim.n_functionals()],
        }
    }

    pub fn from_regular(regular: Vec<Complex64>, dim: Dim) -> Self {
        DecomposedField {
            regular,
            singular: vec![Complex64::new(0.0, 0.0); dim.n_functionals()],
        }
    }

    /// The singular mode `φ_i` alone.
    pub fn mode(cutoff: usize, dim: Dim, i: usize) -> Self {
        let mut f = Self::zero(cutoff, dim);
        f.singular[i] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn cutoff(&self) -> usize {
        self.regular.len()
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        DecomposedField {
            regular: self.regular.iter().map(|v| v * a).collect(),
            singular: self.singular.iter().map(|v| v * a).collect(),
        }
    }

    /// `self + a · other`.
    pub fn axpy(&self, a: Complex64, other: &DecomposedField) -> Result<Self> {
        if self.regular.len() != other.regular.len() || self.singular.len() != other.singular.len() {
            return Err(Error::Shape("fields over different bases".into()));
        }
        Ok(DecomposedField {
            regular: self.regular.iter().zip(&other.regular).map(|(x, y)| x + a * y).collect(),
            singular: self.singular.iter().zip(&other.singular).map(|(x, y)| x + a * y).collect(),
        })
    }

    /// Fourier coefficients of the whole field given the coefficients
    /// `modes[i][n] = ⟨φ_i, ω_n⟩`.
    pub fn l2_coefficients(&self, modes: &[Vec<f64>]) -> Vec<Complex64> {
        let mut out = self.regular.clone();
        for (c, p) in self.singular.iter().zip(modes) {
            for (o, pn) in out.iter_mut().zip(p) {
                *o += c * pn;
            }
        }
        out
    }

    /// Value at `x ≠ x⁰`.
    pub fn evaluate(&self, basis: &SpectralBasis, bundle: &KernelBundle, x: &Point) -> Result<Complex64> {
        if x.distance(&bundle.puncture) == 0.0 {
            return Err(Error::SingularPointEvaluation);
        }
        let vals = basis.values_at(x);
        let mut s: Complex64 = self.regular.iter().zip(&vals).map(|(a, w)| a * w).sum();
        for (i, c) in self.singular.iter().enumerate() {
            if *c != Complex64::new(0.0, 0.0) {
                s += c * bundle.mode(x, i)?;
            }
        }
        Ok(s)
    }

    /// The real or imaginary part as an evaluable field.
    pub fn part<'a>(&self, basis: &'a SpectralBasis, bundle: &'a KernelBundle, imaginary: bool) -> AssembledField<'a> {
        let pick = |c: &Complex64| if imaginary { c.im } else { c.re };
        AssembledField {
            regular: SeriesField {
                basis,
                coeffs: self.regular.iter().map(pick).collect(),
            },
            singular: self.singular.iter().map(pick).collect(),
            bundle,
        }
    }
}

/// Real field `Σ a_n ω_n + Σ c_i φ_i` with analytic gradient.
pub struct AssembledField<'a> {
    pub regular: SeriesField<'a>,
    pub singular: Vec<f64>,
    pub bundle: &'a KernelBundle,
}

impl ScalarField for AssembledField<'_> {
    fn dim(&self) -> Dim {
        self.regular.dim()
    }

    fn value(&self, x: &Point) -> f64 {
        let mut v = self.regular.value(x);
        for (i, c) in self.singular.iter().enumerate() {
            if *c != 0.0 {
                v += c * self.bundle.mode(x, i).unwrap_or(f64::NAN);
            }
        }
        v
    }

    fn gradient(&self, x: &Point, out: &mut [f64]) {
        self.regular.gradient(x, out);
        let mut g = [0.0; 3];
        for (i, c) in self.singular.iter().enumerate() {
            if *c != 0.0 {
                if self.bundle.mode_gradient(x, i, &mut g).is_err() {
                    g = [f64::NAN; 3];
                }
                for k in 0..self.dim().n() {
                    out[k] += c * g[k];
                }
            }
        }
    }

    fn has_analytic_gradient(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_field_gradients() {
        let f = FnField::new(Dim::Three, |x| {
            let c = x.as_slice();
            c[0] * c[0] + 3.0 * c[1] - c[2]
        });
        let x = Point::in_ball([0.2, 0.1, -0.3]).unwrap();
        let mut g = [0.0; 3];
        f.gradient(&x, &mut g);
        assert!((g[0] - 0.4).abs() < 1e-8);
        assert!((g[1] - 3.0).abs() < 1e-8);
        assert!((g[2] + 1.0).abs() < 1e-8);
        assert!(!f.has_analytic_gradient());
    }

    #[test]
    fn kernel_field_gradient_matches_differences() {
        let bundle = KernelBundle::new(Point::puncture(&[0.1, -0.2, 0.3]).unwrap()).unwrap();
        let x = Point::in_ball([0.4, 0.2, -0.1]).unwrap();
        for kind in [
            KernelKind::Green,
            KernelKind::SourceGradient(2),
            KernelKind::FieldGradient(3),
            KernelKind::Mode(1),
        ] {
            let f = KernelField::new(bundle, kind);
            let mut a = [0.0; 3];
            let mut b = [0.0; 3];
            f.gradient(&x, &mut a);
            central_gradient(&f, &x, 1e-5, &mut b);
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() < 1e-7, "{kind:?}");
            }
        }
    }

    #[test]
    fn sum_is_linear() {
        let a = FnField::new(Dim::One, |x| x.x());
        let b = FnField::new(Dim::One, |x| x.x() * x.x());
        let s = FieldSum::new(Dim::One).term(2.0, &a).term(-1.0, &b);
        let x = Point::on_line(0.3).unwrap();
        assert!((s.value(&x) - (0.6 - 0.09)).abs() < 1e-15);
    }

    #[test]
    fn decomposed_field_coefficients() {
        let f = DecomposedField {
            regular: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)],
            singular: vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)],
        };
        let modes = vec![vec![0.2, 0.4], vec![1.0, 1.0]];
        let c = f.l2_coefficients(&modes);
        assert_eq!(c[0], Complex64::new(1.1, 0.0));
        assert_eq!(c[1], Complex64::new(0.2, 2.0));
    }
}
