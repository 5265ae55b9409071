//! Real solid harmonics `r^l Y_lm(θ, φ)` as polynomials in Cartesian
//! coordinates, with gradients by forward-mode differentiation.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

/// A value together with its gradient in three variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual3 {
    pub v: f64,
    pub d: [f64; 3],
}

impl Dual3 {
    pub fn constant(v: f64) -> Self {
        Dual3 { v, d: [0.0; 3] }
    }

    pub fn variable(v: f64, axis: usize) -> Self {
        let mut d = [0.0; 3];
        d[axis] = 1.0;
        Dual3 { v, d }
    }

    pub fn scale(self, s: f64) -> Self {
        Dual3 {
            v: self.v * s,
            d: [self.d[0] * s, self.d[1] * s, self.d[2] * s],
        }
    }
}

impl Add for Dual3 {
    type Output = Dual3;
    fn add(self, o: Dual3) -> Dual3 {
        Dual3 {
            v: self.v + o.v,
            d: [self.d[0] + o.d[0], self.d[1] + o.d[1], self.d[2] + o.d[2]],
        }
    }
}

impl Sub for Dual3 {
    type Output = Dual3;
    fn sub(self, o: Dual3) -> Dual3 {
        self + o.scale(-1.0)
    }
}

impl Mul for Dual3 {
    type Output = Dual3;
    fn mul(self, o: Dual3) -> Dual3 {
        let mut d = [0.0; 3];
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = self.d[k] * o.v + self.v * o.d[k];
        }
        Dual3 { v: self.v * o.v, d }
    }
}

fn factorial_ratio(l: usize, m: usize) -> f64 {
    // (l − m)! / (l + m)!
    let mut r = 1.0;
    for k in (l - m + 1)..=(l + m) {
        r /= k as f64;
    }
    r
}

/// Orthonormalization constant of the real harmonic of degree `l` and
/// order `m` on the unit sphere.
pub fn harmonic_norm(l: usize, m: i32) -> f64 {
    let am = m.unsigned_abs() as usize;
    let base = ((2 * l + 1) as f64 / (4.0 * PI) * factorial_ratio(l, am)).sqrt();
    if m == 0 {
        base
    } else {
        base * std::f64::consts::SQRT_2
    }
}

/// All real solid harmonics with degree `≤ lmax` at `x`, indexed by
/// `l*l + (m + l)`.
pub fn solid_harmonics(lmax: usize, x: [f64; 3]) -> Vec<Dual3> {
    let xd = Dual3::variable(x[0], 0);
    let yd = Dual3::variable(x[1], 1);
    let zd = Dual3::variable(x[2], 2);
    let r2 = xd * xd + yd * yd + zd * zd;

    // (x + iy)^m split into real and imaginary parts
    let mut re = vec![Dual3::constant(1.0); lmax + 1];
    let mut im = vec![Dual3::constant(0.0); lmax + 1];
    for m in 1..=lmax {
        re[m] = re[m - 1] * xd - im[m - 1] * yd;
        im[m] = re[m - 1] * yd + im[m - 1] * xd;
    }

    let mut out = vec![Dual3::constant(0.0); (lmax + 1) * (lmax + 1)];
    for m in 0..=lmax {
        // Π_l^m(z, r²): the polar factor r^{l−m} P_l^{(m)}(z/r)
        let mut dfact = 1.0;
        for k in 1..=m {
            dfact *= (2 * k - 1) as f64;
        }
        let mut pm2 = Dual3::constant(0.0);
        let mut pm1 = Dual3::constant(dfact);
        for l in m..=lmax {
            let cur = if l == m {
                pm1
            } else if l == m + 1 {
                let c = zd.scale((2 * m + 1) as f64) * pm1;
                pm2 = pm1;
                pm1 = c;
                c
            } else {
                let c = (zd.scale((2 * l - 1) as f64) * pm1 - (r2 * pm2).scale((l + m - 1) as f64))
                    .scale(1.0 / (l - m) as f64);
                pm2 = pm1;
                pm1 = c;
                c
            };
            let mi = m as i32;
            out[l * l + l + m] = (cur * re[m]).scale(harmonic_norm(l, mi));
            if m > 0 {
                out[l * l + l - m] = (cur * im[m]).scale(harmonic_norm(l, -mi));
            }
        }
    }
    out
}
