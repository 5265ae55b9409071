//! Resolvent of `B_K` in the coefficient representation.
//!
//! A field is `u = u_0 + Σ c_i φ_i` with `u_0` regular. `B_K u = Δu_0`, and
//! the domain of `B_K` is cut out by `c_j = γ_j(K B_K u) = Σ_n C_jn μ_n û_0n`.
//! Solving `(B_K − λ) u = f` gives `(I − λB) c = β(f)` with
//! `β_j(f) = Σ_n C_jn μ_n f̂_n / (μ_n − λ)`, and
//! `u = R_0 f + Σ c_i Ψ_i`, `Ψ_i = φ_i + λ R_0 φ_i`, `R_0 = (B_0 − λ)^{-1}`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::determinant::{beta_sum, check_pole, det_i_minus_lambda_b};
use super::{PerturbationK, PunctureSpectrum};
use crate::error::{Error, Result};
use crate::field::DecomposedField;
use crate::point::Point;

/// Below this `|Δ(λ)|` the resolvent is refused.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-12;

fn cz(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `(B_0 − λ)^{-1} f` as coefficients.
pub fn unperturbed_resolvent(ctx: &PunctureSpectrum, f: &[Complex64], lambda: Complex64) -> Result<Vec<Complex64>> {
    check_pole(ctx, lambda)?;
    check_len(ctx, f)?;
    Ok(f.iter()
        .enumerate()
        .map(|(n, a)| a / (cz(ctx.mu(n)) - lambda))
        .collect())
}

fn check_len(ctx: &PunctureSpectrum, f: &[Complex64]) -> Result<()> {
    if f.len() != ctx.cutoff() {
        return Err(Error::Shape(format!(
            "field has {} coefficients, basis has {}",
            f.len(),
            ctx.cutoff()
        )));
    }
    Ok(())
}

/// `β_j(f) = γ_j(K B_0 (B_0 − λ)^{-1} f)`.
pub fn beta_of_field(ctx: &PunctureSpectrum, k: &PerturbationK, f: &[Complex64], lambda: Complex64) -> Vec<Complex64> {
    (0..ctx.n_functionals())
        .map(|j| {
            (0..ctx.cutoff())
                .map(|n| {
                    let mu = cz(ctx.mu(n));
                    k.entry(j, n) * mu * f[n] / (mu - lambda)
                })
                .sum()
        })
        .collect()
}

fn system(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64) -> Result<(DMatrix<Complex64>, Complex64)> {
    k.check_against(ctx)?;
    check_pole(ctx, lambda)?;
    let b = beta_sum(ctx, k, lambda, ctx.cutoff(), &|_| false);
    let det = det_i_minus_lambda_b(&b, lambda);
    let nf = ctx.n_functionals();
    let a = DMatrix::<Complex64>::identity(nf, nf) - b * lambda;
    Ok((a, det))
}

/// `(B_K − λ)^{-1} f` in decomposed form.
pub fn resolvent_field(ctx: &PunctureSpectrum, k: &PerturbationK, f: &[Complex64], lambda: Complex64) -> Result<DecomposedField> {
    check_len(ctx, f)?;
    let (a, det) = system(ctx, k, lambda)?;
    if det.norm() < EIGENVALUE_TOLERANCE {
        return Err(Error::PerturbedEigenvalue(det.norm()));
    }
    let rhs = DVector::from_vec(beta_of_field(ctx, k, f, lambda));
    let c = a
        .lu()
        .solve(&rhs)
        .ok_or(Error::PerturbedEigenvalue(det.norm()))?;
    let regular = (0..ctx.cutoff())
        .map(|n| {
            let corr: Complex64 = (0..ctx.n_functionals()).map(|i| c[i] * ctx.mode_coefficient(i, n)).sum();
            (f[n] + lambda * corr) / (cz(ctx.mu(n)) - lambda)
        })
        .collect();
    Ok(DecomposedField {
        regular,
        singular: c.iter().copied().collect(),
    })
}

/// `Ψ_i(x) = φ_i(x) + λ (R_0 φ_i)(x)`.
pub fn psi_values(ctx: &PunctureSpectrum, lambda: Complex64, x: &Point) -> Result<Vec<Complex64>> {
    let vals = ctx.basis().values_at(x);
    (0..ctx.n_functionals())
        .map(|i| {
            let series: Complex64 = (0..ctx.cutoff())
                .map(|n| ctx.mode_coefficient(i, n) * vals[n] / (cz(ctx.mu(n)) - lambda))
                .sum();
            Ok(ctx.bundle().mode(x, i)? + lambda * series)
        })
        .collect()
}

/// `((B_K − λ)^{-1} f)(x) = ((B_0 − λ)^{-1} f)(x) + Q(f, x, λ) / Δ(λ)`.
///
/// `Q` is the bordered determinant `det [[I − λB, β(f)], [−Ψ(x)ᵀ, 0]]`.
pub fn resolvent_apply(ctx: &PunctureSpectrum, k: &PerturbationK, f: &[Complex64], lambda: Complex64, x: &Point) -> Result<Complex64> {
    check_len(ctx, f)?;
    if x.distance(ctx.puncture()) == 0.0 {
        return Err(Error::SingularPointEvaluation);
    }
    let (a, det) = system(ctx, k, lambda)?;
    if det.norm() < EIGENVALUE_TOLERANCE {
        return Err(Error::PerturbedEigenvalue(det.norm()));
    }
    let nf = ctx.n_functionals();
    let beta = beta_of_field(ctx, k, f, lambda);
    let psi = psi_values(ctx, lambda, x)?;
    let mut bordered = DMatrix::<Complex64>::zeros(nf + 1, nf + 1);
    bordered.view_mut((0, 0), (nf, nf)).copy_from(&a);
    for i in 0..nf {
        bordered[(i, nf)] = beta[i];
        bordered[(nf, i)] = -psi[i];
    }
    let q = bordered.determinant();
    let base: Complex64 = {
        let r0 = unperturbed_resolvent(ctx, f, lambda)?;
        let vals = ctx.basis().values_at(x);
        r0.iter().zip(&vals).map(|(a, w)| a * w).sum()
    };
    Ok(base + q / det)
}

/// `γ_j(K g)` of a decomposed field.
pub fn apply_functional(ctx: &PunctureSpectrum, k: &PerturbationK, j: usize, g: &DecomposedField) -> Complex64 {
    k.apply_row(j, &g.l2_coefficients(ctx.modes()))
}

/// Resolvent of `B_s`, the operator whose domain keeps the conditions of
/// `K` for `γ_0..γ_{s−1}` and sets `γ_s..γ_d` to zero, built by the
/// recursion
/// `R_s f = R_{s−1} f + γ_{s−1}(K(f + λR_{s−1}f)) θ_{s−1} / (1 − λ γ_{s−1}(K θ_{s−1}))`
/// with `θ_{s−1} = φ_{s−1} + λ R_{s−1} φ_{s−1}`.
///
/// `s` runs over `0..=d+1`; `B_{d+1} = B_K`, and `B_d = B_K` when row `d`
/// of the table vanishes.
pub fn resolvent_chain(ctx: &PunctureSpectrum, k: &PerturbationK, f: &[Complex64], lambda: Complex64, s: usize) -> Result<DecomposedField> {
    k.check_against(ctx)?;
    check_len(ctx, f)?;
    if s > ctx.n_functionals() {
        return Err(Error::InvalidArgument(format!(
            "chain level {s} outside 0..={}",
            ctx.n_functionals()
        )));
    }
    chain(ctx, k, f, lambda, s)
}

fn chain(ctx: &PunctureSpectrum, k: &PerturbationK, f: &[Complex64], lambda: Complex64, s: usize) -> Result<DecomposedField> {
    if s == 0 {
        return Ok(DecomposedField::from_regular(unperturbed_resolvent(ctx, f, lambda)?, ctx.dim()));
    }
    let j = s - 1;
    let prev = chain(ctx, k, f, lambda, j)?;
    let p_j: Vec<Complex64> = ctx.modes()[j].iter().map(|v| cz(*v)).collect();
    let theta = DecomposedField::mode(ctx.cutoff(), ctx.dim(), j).axpy(lambda, &chain(ctx, k, &p_j, lambda, j)?)?;
    let denom = 1.0 - lambda * apply_functional(ctx, k, j, &theta);
    if denom.norm() < EIGENVALUE_TOLERANCE {
        return Err(Error::ChainNotInvertible { level: j });
    }
    let source = DecomposedField::from_regular(f.to_vec(), ctx.dim()).axpy(lambda, &prev)?;
    let c = apply_functional(ctx, k, j, &source) / denom;
    prev.axpy(c, &theta)
}

/// The chain denominator `1 − λ γ_{s−1}(K θ_{s−1})` at level `s ≥ 1`.
pub fn chain_denominator(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64, s: usize) -> Result<Complex64> {
    if s == 0 || s > ctx.n_functionals() {
        return Err(Error::InvalidArgument(format!("chain level {s} outside 1..={}", ctx.n_functionals())));
    }
    let j = s - 1;
    let p_j: Vec<Complex64> = ctx.modes()[j].iter().map(|v| cz(*v)).collect();
    let theta = DecomposedField::mode(ctx.cutoff(), ctx.dim(), j).axpy(lambda, &chain(ctx, k, &p_j, lambda, j)?)?;
    Ok(1.0 - lambda * apply_functional(ctx, k, j, &theta))
}

/// `Tr((B_K − λ)^{-1} − (B_0 − λ)^{-1})` over the basis.
///
/// The difference is `f ↦ Σ_i c_i(f) Ψ_i` with `c(f) = (I − λB)^{-1} β(f)`;
/// its trace is `tr((I − λB)^{-1} D)` with
/// `D_ji = Σ_n C_jn μ_n² p_in / (μ_n − λ)²`.
pub fn trace_difference(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64) -> Result<Complex64> {
    let (a, det) = system(ctx, k, lambda)?;
    if det.norm() < EIGENVALUE_TOLERANCE {
        return Err(Error::PerturbedEigenvalue(det.norm()));
    }
    Ok(trace_with(ctx, k, lambda, &a, ctx.cutoff()))
}

fn trace_with(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64, a: &DMatrix<Complex64>, upto: usize) -> Complex64 {
    let nf = ctx.n_functionals();
    let mut d = DMatrix::<Complex64>::zeros(nf, nf);
    for n in 0..upto {
        let mu = cz(ctx.mu(n));
        let w = mu * mu / ((mu - lambda) * (mu - lambda));
        for j in 0..nf {
            let cw = k.entry(j, n) * w;
            if cw.norm() == 0.0 {
                continue;
            }
            for i in 0..nf {
                d[(j, i)] += cw * ctx.mode_coefficient(i, n);
            }
        }
    }
    match a.clone().lu().solve(&d) {
        Some(x) => x.trace(),
        None => Complex64::new(f64::NAN, f64::NAN),
    }
}

/// Trace together with `|T_M − T_{M/2}|`.
pub fn trace_with_truncation(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64) -> Result<(Complex64, f64)> {
    let full = trace_difference(ctx, k, lambda)?;
    let half_ctx = ctx.truncated(ctx.cutoff() / 2);
    let half_k = k.truncated(ctx.cutoff() / 2);
    let half = trace_difference(&half_ctx, &half_k, lambda)?;
    Ok((full, (full - half).norm()))
}

/// `|Tr(…) + (ln Δ(λ + h) − ln Δ(λ − h)) / 2h|`, the log difference taken as
/// the principal log of the ratio.
pub fn krein_residual(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64, h: f64) -> Result<f64> {
    let t = trace_difference(ctx, k, lambda)?;
    let dlog = log_derivative(ctx, k, lambda, h)?;
    Ok((t + dlog).norm())
}

/// Central difference of `ln Δ` at `λ` with step `h`.
pub fn log_derivative(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64, h: f64) -> Result<Complex64> {
    let (_, dp) = system(ctx, k, lambda + h)?;
    let (_, dm) = system(ctx, k, lambda - h)?;
    Ok((dp / dm).ln() / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::SpectralBasis;
    use crate::point::Dim;

    fn ctx1(x0: f64, m: usize) -> PunctureSpectrum {
        PunctureSpectrum::new(SpectralBasis::new(Dim::One, m).unwrap(), Point::puncture(&[x0]).unwrap(), 1.0).unwrap()
    }

    fn sample_f(m: usize) -> Vec<Complex64> {
        (0..m).map(|n| cz(1.0 / (1.0 + n as f64).powi(2) * if n % 3 == 0 { -1.0 } else { 1.0 })).collect()
    }

    #[test]
    fn zero_perturbation_is_diagonal() {
        let ctx = ctx1(0.3, 50);
        let k = PerturbationK::zero(&ctx);
        let f = sample_f(50);
        let lam = cz(-7.0);
        let u = resolvent_field(&ctx, &k, &f, lam).unwrap();
        let r0 = unperturbed_resolvent(&ctx, &f, lam).unwrap();
        assert_eq!(u.regular, r0);
        assert!(u.singular.iter().all(|c| c.norm() == 0.0));
        assert_eq!(trace_difference(&ctx, &k, lam).unwrap(), cz(0.0));
        assert!(krein_residual(&ctx, &k, lam, 1e-3).unwrap() == 0.0);
    }

    #[test]
    fn bordered_determinant_matches_direct_solve() {
        let ctx = ctx1(0.3, 80);
        let k = PerturbationK::alpha_family(&[cz(0.8), cz(-0.4)], &ctx).unwrap();
        let f = sample_f(80);
        let lam = Complex64::new(-12.0, 0.5);
        let u = resolvent_field(&ctx, &k, &f, lam).unwrap();
        for x in [0.1, 0.45, 0.8] {
            let p = Point::on_line(x).unwrap();
            let a = resolvent_apply(&ctx, &k, &f, lam, &p).unwrap();
            let b = u.evaluate(ctx.basis(), ctx.bundle(), &p).unwrap();
            assert!((a - b).norm() < 1e-11, "{a} {b}");
        }
    }

    #[test]
    fn domain_conditions_hold() {
        let ctx = ctx1(0.3, 80);
        let k = PerturbationK::alpha_family(&[cz(0.8), cz(-0.4)], &ctx).unwrap();
        let f = sample_f(80);
        let lam = cz(-3.0);
        let u = resolvent_field(&ctx, &k, &f, lam).unwrap();
        for j in 0..2 {
            let bm: Vec<Complex64> = u.regular.iter().enumerate().map(|(n, a)| a * ctx.mu(n)).collect();
            let target = k.apply_row(j, &bm);
            assert!((u.singular[j] - target).norm() < 1e-12);
        }
    }

    #[test]
    fn chain_reproduces_resolvent() {
        let ctx = ctx1(0.37, 60);
        let f = sample_f(60);
        let lam = cz(-6.0);
        let k = PerturbationK::delta_coupling(1.3, &ctx);
        let one = resolvent_chain(&ctx, &k, &f, lam, 1).unwrap();
        let direct = resolvent_field(&ctx, &k, &f, lam).unwrap();
        for (a, b) in one.regular.iter().zip(&direct.regular) {
            assert!((a - b).norm() < 1e-12);
        }
        let ka = PerturbationK::alpha_family(&[cz(0.5), cz(1.5)], &ctx).unwrap();
        let full = resolvent_chain(&ctx, &ka, &f, lam, 2).unwrap();
        let direct = resolvent_field(&ctx, &ka, &f, lam).unwrap();
        for (a, b) in full.singular.iter().zip(&direct.singular) {
            assert!((a - b).norm() < 1e-12);
        }
        let denom = chain_denominator(&ctx, &k, lam, 1).unwrap();
        let d01 = super::super::delta01(&ctx, &k, lam).unwrap();
        assert!((denom - d01).norm() < 1e-12);
    }

    #[test]
    fn krein_identity_for_finite_tables() {
        let ctx = ctx1(0.3, 100);
        let k = PerturbationK::delta_coupling(1.0, &ctx);
        let r = krein_residual(&ctx, &k, cz(-5.0), 1e-4 * 6.0).unwrap();
        assert!(r < 1e-6, "{r}");
        let r1 = krein_residual(&ctx, &k, cz(-5.0), 0.4).unwrap();
        let r2 = krein_residual(&ctx, &k, cz(-5.0), 0.2).unwrap();
        assert!(r2 < r1 / 3.0, "{r1} {r2}");
    }
}
