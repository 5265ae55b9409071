//! Spherical Bessel functions of the first kind and their positive zeros.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest order with a supported zero table.
pub const MAX_ORDER: usize = 25;
/// Largest zero index with a supported zero table.
pub const MAX_ZERO_INDEX: usize = 200;

/// `j_l(x)` for `l = 0..=lmax`.
pub fn spherical_jn_sequence(lmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; lmax + 1];
    if x.abs() < 1e-3 {
        for (l, o) in out.iter_mut().enumerate() {
            *o = x.powi(l as i32) * jl_series(l, x);
        }
        return out;
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    out[0] = j0;
    if lmax == 0 {
        return out;
    }
    let j1 = s / (x * x) - c / x;
    if x > lmax as f64 {
        // upward recurrence is stable above the turning point
        out[1] = j1;
        for l in 1..lmax {
            out[l + 1] = (2 * l + 1) as f64 / x * out[l] - out[l - 1];
        }
        return out;
    }
    // Miller: downward recurrence from well above lmax, normalized by the
    // larger of j_0, j_1.
    let start = lmax + 20 + (x as usize);
    let mut f_next = 0.0;
    let mut f = 1e-300;
    let mut tmp = vec![0.0; start + 2];
    tmp[start] = f;
    for l in (1..=start).rev() {
        let f_prev = (2 * l + 1) as f64 / x * f - f_next;
        f_next = f;
        f = f_prev;
        tmp[l - 1] = f;
        if f.abs() > 1e250 {
            for t in tmp[l - 1..].iter_mut() {
                *t *= 1e-250;
            }
            f *= 1e-250;
            f_next *= 1e-250;
        }
    }
    let scale = if j0.abs() >= j1.abs() {
        j0 / tmp[0]
    } else {
        j1 / tmp[1]
    };
    for l in 0..=lmax {
        out[l] = tmp[l] * scale;
    }
    out
}

pub fn spherical_jn(l: usize, x: f64) -> f64 {
    spherical_jn_sequence(l, x)[l]
}

/// Power series of `j_l(x) / x^l`:
/// `Σ_k (−x²/2)^k / (k! (2l + 2k + 1)!!)`.
fn jl_series(l: usize, x: f64) -> f64 {
    let mut dfact = 1.0;
    for k in 1..=l {
        dfact *= (2 * k + 1) as f64;
    }
    let mut term = 1.0 / dfact;
    let mut sum = term;
    let y = -0.5 * x * x;
    for k in 1..60 {
        term *= y / (k as f64 * (2 * l + 2 * k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `j_l(x) / x^l`, finite at `x = 0` where it equals `1/(2l+1)!!`.
pub fn jl_over_xl(l: usize, x: f64) -> f64 {
    if x.abs() < 1.0 {
        jl_series(l, x)
    } else {
        spherical_jn(l, x) / x.powi(l as i32)
    }
}

/// `j_l'(x)` via `j_l' = j_{l-1} − (l+1)/x j_l` (and `j_0' = −j_1`).
pub fn spherical_jn_derivative(l: usize, x: f64) -> f64 {
    let seq = spherical_jn_sequence(l + 1, x);
    if l == 0 {
        -seq[1]
    } else {
        (l as f64 * seq[l - 1] - (l + 1) as f64 * seq[l + 1]) / (2 * l + 1) as f64
    }
}

/// First `count` positive zeros of `j_l`.
///
/// Zeros of `j_l` interlace those of `j_{l-1}`; each is bracketed between
/// two consecutive zeros of the lower order and polished by bisection and
/// Newton steps to about `1e-12`.
pub fn spherical_jn_zeros(l: usize, count: usize) -> Result<Vec<f64>> {
    if l > MAX_ORDER || count > MAX_ZERO_INDEX {
        return Err(Error::ZeroTableExhausted { l, n: count });
    }
    let mut zeros: Vec<f64> = (1..=count + l).map(|k| k as f64 * PI).collect();
    for order in 1..=l {
        let needed = count + l - order;
        let mut next = Vec::with_capacity(needed);
        for k in 0..needed {
            next.push(refine_zero(order, zeros[k], zeros[k + 1]));
        }
        zeros = next;
    }
    zeros.truncate(count);
    Ok(zeros)
}

/// The `n`-th positive zero (one-based) of `j_l`.
pub fn bessel_zero(l: usize, n: usize) -> Result<f64> {
    if n == 0 || l > MAX_ORDER || n > MAX_ZERO_INDEX {
        return Err(Error::ZeroTableExhausted { l, n });
    }
    Ok(spherical_jn_zeros(l, n)?[n - 1])
}

fn refine_zero(l: usize, lo: f64, hi: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let mut fa = spherical_jn(l, a);
    // the bracket ends are zeros of j_{l-1}, where j_l is extremal and nonzero
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = spherical_jn(l, m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if b - a < 1e-6 {
            break;
        }
    }
    let mut z = 0.5 * (a + b);
    for _ in 0..20 {
        let f = spherical_jn(l, z);
        let df = spherical_jn_derivative(l, z);
        let step = f / df;
        let cand = z - step;
        z = if cand > a && cand < b { cand } else { z };
        if step.abs() < 1e-15 * z {
            break;
        }
    }
    z
}
