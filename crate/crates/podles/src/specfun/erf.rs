//! Error function on the real line.
//!
//! Small arguments use the cancellation-free scaled series
//! erf(x) = (2/sqrt(pi)) x e^{-x^2} sum_n (2x^2)^n / (2n+1)!!,
//! mid-range goes through the continued fraction for erfc, and beyond
//! x = 6 the result saturates to +-1 well below 1e-12.

use std::f64::consts::PI;

const SERIES_CUTOFF: f64 = 3.0;
const SATURATION: f64 = 6.0;

fn erf_series(x: f64) -> f64 {
    let x2 = 2.0 * x * x;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 0u32;
    while term > 1e-18 * sum {
        k += 1;
        term *= x2 / (2.0 * k as f64 + 1.0);
        sum += term;
    }
    2.0 / PI.sqrt() * x * (-x * x).exp() * sum
}

/// erfc(x) e^{x^2} sqrt(pi) as a continued fraction, for x >= SERIES_CUTOFF.
fn erfc_cf(x: f64) -> f64 {
    // f = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz.
    let tiny = 1e-300;
    let mut f = tiny;
    let mut c = f;
    let mut d = 0.0f64;
    for n in 0..200 {
        let (a, b) = if n == 0 {
            (1.0, x)
        } else {
            (n as f64 / 2.0, x)
        };
        d = b + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    f
}

/// erf(x), absolute accuracy about 1e-12 over the real line.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax <= SERIES_CUTOFF {
        erf_series(ax)
    } else if ax < SATURATION {
        1.0 - (-ax * ax).exp() / PI.sqrt() * erfc_cf(ax)
    } else {
        1.0
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Scaled complementary error function e^{x^2} erfc(x) for x >= 0.
///
/// Stays accurate to large x where erfc itself underflows; this is the
/// object the Gaussian-measure cutoff function reduces to.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    assert!(x >= 0.0, "erfcx implemented for x >= 0 only");
    if x <= SERIES_CUTOFF {
        (x * x).exp() * (1.0 - erf_series(x))
    } else {
        erfc_cf(x) / PI.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::tanh_sinh;
    use num_complex::Complex64;

    /// Quadrature oracle: erf(x) = (2/sqrt(pi)) integral of e^{-t^2} over (0, x).
    fn erf_quadrature(x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        2.0 / PI.sqrt()
            * tanh_sinh(|t| Complex64::new((-t * t).exp(), 0.0), 0.0, x, 1e-14)
                .unwrap()
                .re
    }

    #[test]
    fn basics() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(-1.0) + erf(1.0)).abs() < 1e-16);
        assert!((erf(5.0) - 1.0).abs() < 1e-11);
        assert!((erf(100.0) - 1.0).abs() == 0.0);
    }

    #[test]
    fn erfcx_consistent_and_asymptotic() {
        // Against erf on the shared range.
        for &x in &[0.2f64, 1.0, 2.5, 3.5, 5.0] {
            let a = erfcx(x);
            let b = (x * x).exp() * (1.0 - erf(x));
            assert!((a - b).abs() < 1e-10 * a, "x={x}: {a} vs {b}");
        }
        // No saturation: 1/(x sqrt(pi)) envelope at large x.
        for &x in &[8.0f64, 20.0, 100.0] {
            let v = erfcx(x);
            let lead = 1.0 / (x * PI.sqrt());
            assert!((v - lead).abs() < 0.01 * lead, "x={x}: {v} vs {lead}");
            assert!(v > 0.0);
        }
    }

    #[test]
    fn against_quadrature_grid() {
        // Crosses both branches and the matching point at 3.
        for &x in &[0.05, 0.3, 0.9, 1.7, 2.5, 2.999, 3.001, 3.7, 4.8, 5.5] {
            let e = erf(x);
            let q = erf_quadrature(x);
            assert!((e - q).abs() < 1e-12, "x={x}: {e} vs {q}");
        }
    }
}
