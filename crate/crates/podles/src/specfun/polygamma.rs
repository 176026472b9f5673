//! Digamma, trigamma, and tetragamma for complex argument.
//!
//! Strategy: reflect into Re z >= 1/2, push the argument up by the
//! recurrence until Re z >= 15, then use the Bernoulli asymptotic series.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Bernoulli numbers B_2 .. B_16.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

const SHIFT_RE: f64 = 15.0;

/// psi(w) for Re w >= SHIFT_RE.
fn digamma_asymptotic(w: Complex64) -> Complex64 {
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut sum = w.ln() - 0.5 * inv;
    let mut p = inv2;
    for (k, &b) in BERNOULLI.iter().enumerate() {
        sum -= b / (2.0 * (k as f64 + 1.0)) * p;
        p *= inv2;
    }
    sum
}

/// psi'(w) for Re w >= SHIFT_RE.
fn trigamma_asymptotic(w: Complex64) -> Complex64 {
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut sum = inv + 0.5 * inv2;
    let mut p = inv2 * inv;
    for &b in BERNOULLI.iter() {
        sum += b * p;
        p *= inv2;
    }
    sum
}

/// psi''(w) for Re w >= SHIFT_RE.
fn tetragamma_asymptotic(w: Complex64) -> Complex64 {
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut sum = -inv2 - inv2 * inv;
    let mut p = inv2 * inv2;
    for (k, &b) in BERNOULLI.iter().enumerate() {
        sum -= (2.0 * (k as f64 + 1.0) + 1.0) * b * p;
        p *= inv2;
    }
    sum
}

/// Core evaluation for Re z >= 0.5: upward recurrence plus asymptotics.
fn polygamma_right(n: u8, z: Complex64) -> Complex64 {
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_RE {
        match n {
            0 => acc -= 1.0 / w,
            1 => acc += 1.0 / (w * w),
            _ => acc -= 2.0 / (w * w * w),
        }
        w += 1.0;
    }
    let tail = match n {
        0 => digamma_asymptotic(w),
        1 => trigamma_asymptotic(w),
        _ => tetragamma_asymptotic(w),
    };
    tail + acc
}

pub(crate) fn polygamma_unchecked(n: u8, z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        return polygamma_right(n, z);
    }
    // Reflection formulas, with reduced sin/cos of pi z.
    let w = 1.0 - z;
    let s = super::gamma::sin_pi(z);
    let c = super::gamma::cos_pi(z);
    match n {
        0 => {
            // psi(z) = psi(1-z) - pi cot(pi z)
            polygamma_right(0, w) - PI * c / s
        }
        1 => {
            // psi'(z) = -psi'(1-z) + pi^2 / sin^2(pi z)
            -polygamma_right(1, w) + PI * PI / (s * s)
        }
        _ => {
            // psi''(z) = psi''(1-z) - 2 pi^3 cos(pi z)/sin^3(pi z)
            polygamma_right(2, w) - 2.0 * PI * PI * PI * c / (s * s * s)
        }
    }
}

/// Polygamma psi^(n) for n in {0, 1, 2}.
pub fn polygamma(n: u8, z: Complex64) -> Result<Complex64> {
    if n > 2 {
        return Err(Error::domain(format!("polygamma order {n} > 2 unsupported")));
    }
    if z.re <= 0.1 {
        let r = z.re.round();
        if r <= 0.0 && (z.re - r).abs() < 1e-13 && z.im.abs() < 1e-13 {
            return Err(Error::GammaPole(r as i64));
        }
    }
    Ok(polygamma_unchecked(n, z))
}
