//! Bessel J of complex order at real nonnegative argument, the modified
//! family J~^(n)_nu, and the order-zero Y function.
//!
//! All three are power series around the origin with factorially decaying
//! tails:
//!
//!   J_nu(x)      = sum_k (-1)^k / (k! Gamma(nu+k+1)) (x/2)^{2k+nu}
//!   J~^(n)_nu(x) = sum_k (-1)^k / k! (x/2)^{2k+nu} (d^n/da^n 1/Gamma(k+a+nu+1))|_{a=0}
//!
//! The a-derivatives of 1/Gamma are supplied by the gamma module in a form
//! that stays finite when k + nu + 1 hits a non-positive integer.
//!
//! Arguments are restricted to real x >= 0; the residue series only ever
//! evaluates at x = 2ut > 0, and real arguments avoid branch-cut choices.

use crate::error::{Error, Result};
use crate::specfun::{recip_gamma, recip_gamma_d1, recip_gamma_d2, Tracked, EULER_GAMMA};
use crate::sum::CompensatedComplexSum;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Hard cap on series terms; tails decay factorially so this is generous.
const TERM_CAP: usize = 500;
/// Number of consecutive sub-tolerance terms required before stopping.
const QUIET_TERMS: usize = 3;
/// Saturating tolerance used by the untracked public entry points.
const FULL_TOL: f64 = 1e-17;

fn check_argument(nu: Complex64, x: f64) -> Result<Option<Complex64>> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("bessel argument x = {x} must be >= 0")));
    }
    if x == 0.0 {
        if nu.norm() == 0.0 {
            return Ok(Some(Complex64::new(1.0, 0.0)));
        }
        if nu.re > 0.0 {
            return Ok(Some(Complex64::new(0.0, 0.0)));
        }
        // Re nu < 0 is non-integrable; purely imaginary nu oscillates
        // without a limit.
        return Err(Error::domain(format!(
            "bessel order nu = {nu} has no limit at x = 0"
        )));
    }
    Ok(None)
}

/// Shared series driver: sums coeff(k) * (x/2)^{2k}, then multiplies by
/// (x/2)^nu. The tracked maximum partial includes the prefactor scale.
fn series<C>(nu: Complex64, x: f64, tol: f64, mut coeff: C) -> Result<Tracked<Complex64>>
where
    C: FnMut(usize) -> Complex64,
{
    let half = 0.5 * x;
    let half_sq = half * half;
    let mut acc = CompensatedComplexSum::new();
    let mut pow = 1.0f64; // (x/2)^{2k}
    let mut sign = 1.0f64;
    let mut quiet = 0;
    let mut converged = false;
    for k in 0..TERM_CAP {
        let term = coeff(k) * (sign * pow);
        acc.add(term);
        if term.norm() <= tol * (acc.value().norm() + 1.0) {
            quiet += 1;
            if quiet >= QUIET_TERMS {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
        pow *= half_sq;
        sign = -sign;
        if !pow.is_finite() {
            return Err(Error::numeric(format!("bessel series overflow at x = {x}")));
        }
    }
    if !converged {
        return Err(Error::MaxTermsExceeded {
            context: format!("bessel-type series at x = {x}"),
            cap: TERM_CAP,
        });
    }
    // (x/2)^nu with real positive base.
    let prefactor = (nu * half.ln()).exp();
    Ok(Tracked {
        value: prefactor * acc.value(),
        max_partial: prefactor.norm() * acc.max_partial(),
    })
}

/// J_nu(x) with adaptive truncation saturating at machine precision.
pub fn bessel_j(nu: Complex64, x: f64) -> Result<Complex64> {
    Ok(bessel_j_tracked(nu, x, FULL_TOL)?.value)
}

/// J_nu(x) with the stopping tolerance exposed and the peak partial sum
/// reported; used by the residue-series assembly.
pub fn bessel_j_tracked(nu: Complex64, x: f64, tol: f64) -> Result<Tracked<Complex64>> {
    if let Some(v) = check_argument(nu, x)? {
        return Ok(Tracked {
            value: v,
            max_partial: v.norm(),
        });
    }
    let mut k_fact = 1.0f64;
    series(nu, x, tol, move |k| {
        if k > 0 {
            k_fact *= k as f64;
        }
        recip_gamma(nu + (k as f64 + 1.0)) / k_fact
    })
}

/// J~^(n)_nu(x) for n in {1, 2}.
pub fn jtilde(n: u8, nu: Complex64, x: f64) -> Result<Complex64> {
    Ok(jtilde_tracked(n, nu, x, FULL_TOL)?.value)
}

/// Tracked variant of [`jtilde`].
pub fn jtilde_tracked(n: u8, nu: Complex64, x: f64, tol: f64) -> Result<Tracked<Complex64>> {
    if !(n == 1 || n == 2) {
        return Err(Error::domain(format!("jtilde order n = {n} not in {{1, 2}}")));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("jtilde argument x = {x} must be >= 0")));
    }
    let deriv = |m: Complex64| -> Complex64 {
        if n == 1 {
            recip_gamma_d1(m)
        } else {
            recip_gamma_d2(m)
        }
    };
    if x == 0.0 {
        if nu.norm() == 0.0 {
            // Only the k = 0 term survives; regular at the origin.
            let v = deriv(Complex64::new(1.0, 0.0));
            return Ok(Tracked {
                value: v,
                max_partial: v.norm(),
            });
        }
        if nu.re > 0.0 {
            return Ok(Tracked {
                value: Complex64::new(0.0, 0.0),
                max_partial: 0.0,
            });
        }
        return Err(Error::domain(format!(
            "jtilde order nu = {nu} has no limit at x = 0"
        )));
    }
    let mut k_fact = 1.0f64;
    series(nu, x, tol, move |k| {
        if k > 0 {
            k_fact *= k as f64;
        }
        deriv(nu + (k as f64 + 1.0)) / k_fact
    })
}

/// Bessel Y_0 by its logarithmic series; cross-check implementation with
/// target accuracy 1e-10 on [0.1, 10].
pub fn bessel_y0(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("bessel_y0 argument x = {x} must be > 0")));
    }
    let j0 = bessel_j(Complex64::new(0.0, 0.0), x)?.re;
    // sum_{k>=1} (-1)^{k+1} H_k (x^2/4)^k / (k!)^2
    let z = 0.25 * x * x;
    let mut sum = 0.0f64;
    let mut term = 1.0f64; // z^k/(k!)^2
    let mut harmonic = 0.0f64;
    let mut sign = 1.0f64;
    for k in 1..=TERM_CAP {
        term *= z / ((k * k) as f64);
        harmonic += 1.0 / k as f64;
        sum += sign * harmonic * term;
        sign = -sign;
        if term * harmonic < 1e-18 * (sum.abs() + 1.0) {
            break;
        }
    }
    Ok(2.0 / PI * (((0.5 * x).ln() + EULER_GAMMA) * j0 + sum))
}
