use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{PerturbationK, PunctureSpectrum};
use crate::error::{Error, Result};

/// Distance below which `λ` counts as sitting on a pole `μ_n`.
pub const POLE_TOLERANCE: f64 = 1e-10;

/// A series value with the difference between the `M` and `M/2` partial
/// sums as truncation estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncated {
    pub value: Complex64,
    pub trunc_err: f64,
}

/// `Δ(λ) = det(I − λ B(λ))` with the matrix `B_ij = β_ij(λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeterminantEval {
    pub lambda: Complex64,
    pub value: Complex64,
    pub matrix: DMatrix<Complex64>,
    pub trunc_err: f64,
}

pub(crate) fn check_pole(ctx: &PunctureSpectrum, lambda: Complex64) -> Result<()> {
    for n in 0..ctx.cutoff() {
        let mu = ctx.mu(n);
        if (lambda - mu).norm() < POLE_TOLERANCE {
            return Err(Error::EvaluationAtPole { index: n, mu });
        }
    }
    Ok(())
}

/// `Σ_{n<upto, n∉skip} μ_n p_jn C_in / (μ_n − λ)`, all `(i, j)`.
pub(crate) fn beta_sum(
    ctx: &PunctureSpectrum,
    k: &PerturbationK,
    lambda: Complex64,
    upto: usize,
    skip: &dyn Fn(usize) -> bool,
) -> DMatrix<Complex64> {
    let nf = ctx.n_functionals();
    let mut b = DMatrix::zeros(nf, nf);
    for n in 0..upto {
        if skip(n) {
            continue;
        }
        let mu = ctx.mu(n);
        let w = Complex64::new(mu, 0.0) / (Complex64::new(mu, 0.0) - lambda);
        for i in 0..nf {
            let c = k.entry(i, n);
            if c.norm() == 0.0 {
                continue;
            }
            let cw = c * w;
            for j in 0..nf {
                b[(i, j)] += cw * ctx.mode_coefficient(j, n);
            }
        }
    }
    b
}

/// The full matrix `B(λ)` over the whole basis.
pub fn beta_matrix(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64) -> Result<DMatrix<Complex64>> {
    k.check_against(ctx)?;
    check_pole(ctx, lambda)?;
    Ok(beta_sum(ctx, k, lambda, ctx.cutoff(), &|_| false))
}

/// `β_ij(λ) = Σ_n μ_n ⟨φ_j, ω_n⟩ C_in / (μ_n − λ)`.
pub fn beta_ij(ctx: &PunctureSpectrum, k: &PerturbationK, i: usize, j: usize, lambda: Complex64) -> Result<Truncated> {
    let nf = ctx.n_functionals();
    if i >= nf || j >= nf {
        return Err(Error::InvalidArgument(format!("beta index ({i}, {j}) outside 0..{nf}")));
    }
    k.check_against(ctx)?;
    check_pole(ctx, lambda)?;
    let full = beta_sum(ctx, k, lambda, ctx.cutoff(), &|_| false)[(i, j)];
    let half = beta_sum(ctx, k, lambda, ctx.cutoff() / 2, &|_| false)[(i, j)];
    Ok(Truncated {
        value: full,
        trunc_err: (full - half).norm(),
    })
}

pub(crate) fn det_i_minus_lambda_b(b: &DMatrix<Complex64>, lambda: Complex64) -> Complex64 {
    let n = b.nrows();
    let a = DMatrix::<Complex64>::identity(n, n) - b * lambda;
    a.determinant()
}

pub fn characteristic_determinant(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64) -> Result<DeterminantEval> {
    let b = beta_matrix(ctx, k, lambda)?;
    let value = det_i_minus_lambda_b(&b, lambda);
    let half = beta_sum(ctx, k, lambda, ctx.cutoff() / 2, &|_| false);
    let trunc_err = (value - det_i_minus_lambda_b(&half, lambda)).norm();
    Ok(DeterminantEval {
        lambda,
        value,
        matrix: b,
        trunc_err,
    })
}

/// `Δ_01(λ) = 1 − λ β_00(λ) = 1 + κ λ Σ_n ω_n(x⁰) C_0n / (μ_n − λ)`.
pub fn delta01(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64) -> Result<Complex64> {
    k.check_against(ctx)?;
    check_pole(ctx, lambda)?;
    Ok(delta01_sum(ctx, k, lambda, &|_| false))
}

fn delta01_sum(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64, skip: &dyn Fn(usize) -> bool) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for n in 0..ctx.cutoff() {
        if skip(n) {
            continue;
        }
        s += ctx.jet(0, n) * k.entry(0, n) / (Complex64::new(ctx.mu(n), 0.0) - lambda);
    }
    1.0 + lambda * ctx.kappa() * s
}

/// `Δ_01` at a pole `μ_N` whose term carries no residue (`ω_N(x⁰) = 0` or
/// `C_0N = 0`); those terms are dropped.
pub fn delta01_removable(ctx: &PunctureSpectrum, k: &PerturbationK, lambda: Complex64) -> Result<Complex64> {
    k.check_against(ctx)?;
    let mut skip = vec![false; ctx.cutoff()];
    for (n, s) in skip.iter_mut().enumerate() {
        if (lambda - ctx.mu(n)).norm() < POLE_TOLERANCE {
            let residue = ctx.jet(0, n) * k.entry(0, n);
            if residue.norm() > 1e-14 {
                return Err(Error::EvaluationAtPole { index: n, mu: ctx.mu(n) });
            }
            *s = true;
        }
    }
    Ok(delta01_sum(ctx, k, lambda, &|n| skip[n]))
}
