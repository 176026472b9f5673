//! The spectral zeta function of |D| and |D_S|.
//!
//! Direct Dirichlet-type series for Re s > 0:
//!
//!   zeta_D(s) = 4 ((1-q^2)/|w|)^s sum_k (k+1) q^{ks} / (1 - q^{2(k+1)})^s
//!
//! meromorphic continuation to all of C:
//!
//!   zeta_D(s) = 4 ((1-q^2)/|w|)^s sum_n [s(s+1)...(s+n-1)/n!] q^{2n} / (1 - q^{s+2n})^2
//!
//! with second-order poles exactly on the lattice Sd1 = -2N + i (2pi/log q) Z,
//! and the closed form for the simplified operator
//!
//!   zeta_DS(s) = 4 |w|^{-s} (1-q^2)^s (1 - q^s)^{-2}
//!
//! whose poles sit on the imaginary lattice i (2pi/log q) Z.
//!
//! The rising factorial is always accumulated as the product
//! s(s+1)...(s+n-1), never as a quotient of Gamma values: the ratio is an
//! entire function of s for each n and stays meaningful at the poles of
//! Gamma where the continuation is still needed.

use crate::error::{Error, Result};
use crate::params::{QParams, SeriesControl};
use crate::sum::CompensatedComplexSum;
use num_complex::Complex64;

/// Which zeta function a lattice operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaKind {
    /// zeta_D(s + shift); shift = 0 is the plain spectral zeta function.
    /// Positive shifts realize Tr(|D|^{-shift} |D|^{-s}).
    Full { shift: u32 },
    /// The simplified-operator zeta function.
    Simplified,
}

impl ZetaKind {
    pub fn full() -> Self {
        ZetaKind::Full { shift: 0 }
    }
}

/// Laurent data of a second-order pole: coefficients of (s-a)^{-2},
/// (s-a)^{-1}, and the constant term.
#[derive(Debug, Clone, Copy)]
pub struct LaurentData {
    pub order: u8,
    pub c_minus2: Complex64,
    pub c_minus1: Complex64,
    pub c_zero: Complex64,
}

/// A confirmed pole from a lattice scan.
#[derive(Debug, Clone, Copy)]
pub struct PoleFinding {
    pub location: Complex64,
    pub order: u8,
    pub c_minus2: Complex64,
    pub c_minus1: Complex64,
}

fn complex_pow(base: f64, s: Complex64) -> Complex64 {
    // base > 0 throughout this module.
    (s * base.ln()).exp()
}

/// Direct eigenvalue series, convergent for Re s > 0.
pub fn zeta_direct(s: Complex64, params: &QParams, ctl: &SeriesControl) -> Result<Complex64> {
    ctl.validate()?;
    if s.re < ctl.min_re_direct {
        return Err(Error::domain(format!(
            "direct zeta series needs Re s >= {}, got {}",
            ctl.min_re_direct, s.re
        )));
    }
    let q = params.q();
    let prefactor = 4.0 * complex_pow((1.0 - q * q) / params.w_abs(), s);
    let mut acc = CompensatedComplexSum::new();
    let qs = complex_pow(q, s); // q^s, |q^s| = q^{Re s} < 1
    let mut qks = Complex64::new(1.0, 0.0); // q^{ks}
    let q_res = q.powf(s.re);
    let mut q_res_k = 1.0f64;
    let tail_scale = (1.0 - q * q).powf(-s.re).max(1.0);
    for k in 0..ctl.max_terms {
        let kp1 = (k + 1) as f64;
        let denom = complex_pow(1.0 - q.powi(2 * (k as i32 + 1)), -s);
        acc.add(kp1 * qks * denom);
        // Geometric tail bound:
        // sum_{j>k} (j+1) x^j = x^{k+1} [(k+2)/(1-x) + x/(1-x)^2], x = q^{Re s}.
        let gap = (1.0 - q_res).max(1e-300);
        let tail = tail_scale * q_res_k * q_res * ((kp1 + 1.0) / gap + q_res / (gap * gap));
        if tail <= ctl.tol * acc.value().norm() && k > 2 {
            return Ok(prefactor * acc.value());
        }
        qks *= qs;
        q_res_k *= q_res;
    }
    Err(Error::MaxTermsExceeded {
        context: format!("zeta_direct at s = {s}"),
        cap: ctl.max_terms,
    })
}

/// Nearest point of the pole lattice of `kind` to s.
pub fn nearest_lattice_point(kind: ZetaKind, s: Complex64, params: &QParams) -> Complex64 {
    let eta = params.eta();
    let a = (s.im / eta).round();
    let re = match kind {
        ZetaKind::Full { shift } => {
            let m = ((-s.re - shift as f64) / 2.0).round().max(0.0);
            -2.0 * m - shift as f64
        }
        ZetaKind::Simplified => 0.0,
    };
    Complex64::new(re, a * eta)
}

fn guard_against_lattice(
    kind: ZetaKind,
    s: Complex64,
    params: &QParams,
    guard: f64,
) -> Result<()> {
    let nearest = nearest_lattice_point(kind, s, params);
    let distance = (s - nearest).norm();
    if distance < guard {
        return Err(Error::PoleProximity { nearest, distance });
    }
    Ok(())
}

/// Meromorphic continuation of zeta_D, valid on all of C off the lattice.
pub fn zeta_continued(s: Complex64, params: &QParams, ctl: &SeriesControl) -> Result<Complex64> {
    ctl.validate()?;
    guard_against_lattice(ZetaKind::full(), s, params, ctl.guard_for(params))?;
    let q = params.q();
    let q2 = q * q;
    let prefactor = 4.0 * complex_pow((1.0 - q2) / params.w_abs(), s);
    let mut acc = CompensatedComplexSum::new();
    // term_n = [s (s+1) ... (s+n-1) / n!] q^{2n}, built recursively so the
    // rising factorial and the factorial never overflow separately.
    let mut term = Complex64::new(1.0, 0.0);
    let mut quiet = 0;
    for n in 0..ctl.max_terms {
        let denom = {
            let w = 1.0 - complex_pow(q, s + 2.0 * n as f64);
            w * w
        };
        let contribution = term / denom;
        acc.add(contribution);
        if contribution.norm() <= ctl.tol * (acc.value().norm() + 1e-300) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(prefactor * acc.value());
            }
        } else {
            quiet = 0;
        }
        term *= (s + n as f64) * q2 / (n as f64 + 1.0);
    }
    Err(Error::MaxTermsExceeded {
        context: format!("zeta_continued at s = {s}"),
        cap: ctl.max_terms,
    })
}

/// Closed form for the simplified operator.
///
/// The eigenvalue sum forces the prefactor 4 |w|^{-s} (1-q^2)^s; this is
/// checked against the direct spectrum in the tests.
pub fn zeta_simplified(s: Complex64, params: &QParams) -> Result<Complex64> {
    let ctl = SeriesControl::default();
    guard_against_lattice(ZetaKind::Simplified, s, params, ctl.guard_for(params))?;
    let q = params.q();
    let base = (1.0 - q * q) / params.w_abs();
    let w = 1.0 - complex_pow(q, s);
    Ok(4.0 * complex_pow(base, s) / (w * w))
}

fn eval_kind(
    kind: ZetaKind,
    s: Complex64,
    params: &QParams,
    ctl: &SeriesControl,
) -> Result<Complex64> {
    match kind {
        ZetaKind::Full { shift } => zeta_continued(s + shift as f64, params, ctl),
        ZetaKind::Simplified => zeta_simplified(s, params),
    }
}

/// Whether alpha lies on the pole lattice of `kind` (up to rounding slack).
pub fn on_lattice(kind: ZetaKind, alpha: Complex64, params: &QParams) -> bool {
    (alpha - nearest_lattice_point(kind, alpha, params)).norm() < 1e-9
}

/// Laurent coefficients about a lattice point, by trapezoid quadrature of
/// zeta on a circle around it. The trapezoid rule is spectrally accurate on
/// analytic circles; the node count is doubled until two successive
/// estimates agree to the requested tolerance.
pub fn laurent_at_pole(
    kind: ZetaKind,
    alpha: Complex64,
    params: &QParams,
    ctl: &SeriesControl,
) -> Result<LaurentData> {
    ctl.validate()?;
    if !on_lattice(kind, alpha, params) {
        return Err(Error::domain(format!(
            "alpha = {alpha} is not on the pole lattice of {kind:?}"
        )));
    }
    let radius = (params.eta() / 4.0).min(0.25);
    // Evaluations on the circle sit at distance `radius` from the center;
    // loosen the guard so they are not refused.
    let mut inner_ctl = *ctl;
    inner_ctl.lattice_guard = Some(0.5 * radius);

    let mut nodes = 64usize;
    let mut prev: Option<[Complex64; 3]> = None;
    loop {
        let mut sums = [Complex64::new(0.0, 0.0); 3];
        for j in 0..nodes {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
            let dir = Complex64::new(theta.cos(), theta.sin());
            let s = alpha + radius * dir;
            let z = eval_kind(kind, s, params, &inner_ctl)?;
            // With s - alpha = r e^{i theta}, ds = i (s - alpha) dtheta and
            // the 1/(2 pi i) of each Cauchy integral turns the contour
            // integral into the plain node average of zeta * (s-alpha)^{j+1}.
            let d = radius * dir;
            sums[0] += z * d * d; // c_{-2}
            sums[1] += z * d; // c_{-1}
            sums[2] += z; // c_0
        }
        let scale = 1.0 / nodes as f64;
        let cur = [sums[0] * scale, sums[1] * scale, sums[2] * scale];
        if let Some(p) = prev {
            let close = (0..3).all(|i| {
                (cur[i] - p[i]).norm() <= ctl.tol * (cur[i].norm() + 1.0)
            });
            if close {
                let c2 = cur[0];
                let c1 = cur[1];
                let c0 = cur[2];
                let order = if c2.norm() > ctl.tol * (c1.norm() + c0.norm()).max(1.0) {
                    2
                } else if c1.norm() > ctl.tol * c0.norm().max(1.0) {
                    1
                } else {
                    0
                };
                return Ok(LaurentData {
                    order,
                    c_minus2: c2,
                    c_minus1: c1,
                    c_zero: c0,
                });
            }
        }
        prev = Some(cur);
        nodes *= 2;
        if nodes > 8192 {
            return Err(Error::numeric(format!(
                "Laurent circle quadrature at alpha = {alpha} did not stabilize"
            )));
        }
    }
}

/// Scan a rectangle for lattice poles, confirming each candidate through
/// its Laurent data.
pub fn pole_scan(
    kind: ZetaKind,
    re_range: (f64, f64),
    im_range: (f64, f64),
    params: &QParams,
    ctl: &SeriesControl,
) -> Result<Vec<PoleFinding>> {
    if !(re_range.0 <= re_range.1) || !(im_range.0 <= im_range.1) {
        return Err(Error::domain("empty scan rectangle"));
    }
    let eta = params.eta();
    let slack = 1e-9;
    let mut findings = Vec::new();

    let a_lo = (im_range.0 / eta - slack).ceil() as i64;
    let a_hi = (im_range.1 / eta + slack).floor() as i64;

    let re_candidates: Vec<f64> = match kind {
        ZetaKind::Full { shift } => {
            let mut v = Vec::new();
            let mut m = 0i64;
            loop {
                let re = -2.0 * m as f64 - shift as f64;
                if re < re_range.0 - slack {
                    break;
                }
                if re <= re_range.1 + slack {
                    v.push(re);
                }
                m += 1;
            }
            v
        }
        ZetaKind::Simplified => {
            if re_range.0 <= slack && re_range.1 >= -slack {
                vec![0.0]
            } else {
                vec![]
            }
        }
    };

    for &re in &re_candidates {
        for a in a_lo..=a_hi {
            let alpha = Complex64::new(re, a as f64 * eta);
            // For the shifted family the Laurent data lives on the
            // unshifted lattice at alpha + shift.
            let data = match kind {
                ZetaKind::Full { shift } => laurent_at_pole(
                    ZetaKind::full(),
                    alpha + shift as f64,
                    params,
                    ctl,
                )?,
                ZetaKind::Simplified => laurent_at_pole(kind, alpha, params, ctl)?,
            };
            if data.order > 0 {
                findings.push(PoleFinding {
                    location: alpha,
                    order: data.order,
                    c_minus2: data.c_minus2,
                    c_minus1: data.c_minus1,
                });
            }
        }
    }
    // Deterministic ordering: by descending Re, then ascending Im.
    findings.sort_by(|x, y| {
        y.location
            .re
            .partial_cmp(&x.location.re)
            .unwrap()
            .then(x.location.im.partial_cmp(&y.location.im).unwrap())
    });
    Ok(findings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{eigenvalue_full, eigenvalue_simplified, multiplicity};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Direct eigenvalue-sum oracle for Re s well inside convergence.
    fn zeta_eigenvalue_sum(s: Complex64, params: &QParams, simplified: bool) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..4000 {
            let lam = if simplified {
                eigenvalue_simplified(k, params)
            } else {
                eigenvalue_full(k, params)
            };
            let term = multiplicity(k) as f64 * (-s * lam.ln()).exp();
            acc += term;
            if term.norm() < 1e-18 * acc.norm() {
                break;
            }
        }
        acc
    }

    #[test]
    fn direct_matches_eigenvalue_sum() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        let s = c(2.0, 0.0);
        let z = zeta_direct(s, &p, &ctl).unwrap();
        let oracle = zeta_eigenvalue_sum(s, &p, false);
        assert!((z - oracle).norm() <= 1e-12 * oracle.norm(), "{z} vs {oracle}");
    }

    #[test]
    fn direct_positive_for_real_s() {
        let p = QParams::new(0.7, 2.0).unwrap();
        let ctl = SeriesControl::default();
        for &s in &[0.3, 1.0, 2.5, 6.0] {
            let z = zeta_direct(c(s, 0.0), &p, &ctl).unwrap();
            assert!(z.re > 0.0 && z.im.abs() < 1e-13 * z.re);
        }
    }

    /// |zeta(x+iy)| <= 4 / (|w|^x (1-q^x)^2) at x = 1.
    #[test]
    fn direct_modulus_bound() {
        let p = QParams::new(0.5, 1.3).unwrap();
        let ctl = SeriesControl::default();
        let x = 1.0;
        let bound = 4.0 / (p.w_abs().powf(x) * (1.0 - p.q().powf(x)).powi(2));
        for &y in &[0.0, 0.7, 3.0, 11.0, 40.0] {
            let z = zeta_direct(c(x, y), &p, &ctl).unwrap();
            assert!(z.norm() <= bound * (1.0 + 1e-12), "y={y}: {} > {bound}", z.norm());
        }
    }

    #[test]
    fn direct_refuses_small_re() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        assert!(zeta_direct(c(0.01, 0.0), &p, &ctl).is_err());
    }

    #[test]
    fn continued_matches_direct() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        let s = c(2.0, 0.0);
        let a = zeta_continued(s, &p, &ctl).unwrap();
        let b = zeta_direct(s, &p, &ctl).unwrap();
        assert!((a - b).norm() <= 1e-10 * b.norm(), "{a} vs {b}");
    }

    /// s = -1 lies between the lattice columns: finite value.
    #[test]
    fn continued_finite_between_columns() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        let v = zeta_continued(c(-1.0, 0.0), &p, &ctl).unwrap();
        assert!(v.norm().is_finite());
    }

    #[test]
    fn continued_refuses_near_pole() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        match zeta_continued(c(0.01, 0.005), &p, &ctl) {
            Err(Error::PoleProximity { nearest, .. }) => {
                assert!((nearest - c(0.0, 0.0)).norm() < 1e-12);
            }
            other => panic!("expected proximity error, got {other:?}"),
        }
    }

    /// Conjugation symmetry: the Dirichlet coefficients are real.
    #[test]
    fn conjugation_symmetry() {
        let p = QParams::new(0.6, 1.0).unwrap();
        let ctl = SeriesControl::default();
        for &s in &[c(1.3, 2.2), c(-0.7, 4.9), c(-3.1, -1.0)] {
            let a = zeta_continued(s, &p, &ctl).unwrap();
            let b = zeta_continued(s.conj(), &p, &ctl).unwrap();
            assert!((a.conj() - b).norm() <= 1e-12 * a.norm());
        }
    }

    /// Growth bound of the continuation off the lattice at Re s = -2M-delta,
    /// spot-checked at (M, delta) = (1, 0.5).
    #[test]
    fn continued_growth_bound_spot_check() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        let q = p.q();
        let delta = 0.5;
        let x = -2.0 - delta;
        let c_qd = (1.0 - q.powf(2.0 - delta))
            .powi(2)
            .min((1.0 - q.powf(-delta)).powi(2));
        for &y in &[0.0, 1.0, 7.0] {
            let s = c(x, y);
            let z = zeta_continued(s, &p, &ctl).unwrap();
            let bound = 4.0 / c_qd
                * ((1.0 - q * q) / p.w_abs()).powf(x)
                * (1.0 - q * q).powf(-s.norm());
            assert!(z.norm() <= bound, "y={y}: {} > {bound}", z.norm());
        }
    }

    #[test]
    fn simplified_matches_eigenvalue_sum_and_scales() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let s = c(2.0, 0.0);
        let z = zeta_simplified(s, &p).unwrap();
        let oracle = zeta_eigenvalue_sum(s, &p, true);
        assert!((z - oracle).norm() <= 1e-12 * oracle.norm(), "{z} vs {oracle}");
        // Scale covariance zeta(s) ~ |w|^{-s}.
        let p2 = QParams::new(0.5, 2.0).unwrap();
        let z2 = zeta_simplified(s, &p2).unwrap();
        assert!((z2 - z * 0.25).norm() <= 1e-13 * z.norm());
    }

    /// lim s^2 zeta(s) = 4/log^2 q at the origin, via the circle quadrature
    /// for both the full and the simplified functions.
    #[test]
    fn double_pole_coefficient_at_origin() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        let expected = 4.0 / p.ln_q().powi(2);
        for kind in [ZetaKind::full(), ZetaKind::Simplified] {
            let data = laurent_at_pole(kind, c(0.0, 0.0), &p, &ctl).unwrap();
            assert_eq!(data.order, 2);
            assert!(
                (data.c_minus2 - expected).norm() <= 1e-9 * expected.abs(),
                "{kind:?}: {} vs {expected}",
                data.c_minus2
            );
        }
    }

    #[test]
    fn laurent_off_lattice_refused() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        assert!(laurent_at_pole(ZetaKind::full(), c(-1.0, 0.0), &p, &ctl).is_err());
    }

    /// Exact imaginary periodicity of the simplified pole data.
    #[test]
    fn simplified_pole_periodicity() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        let d0 = laurent_at_pole(ZetaKind::Simplified, c(0.0, 0.0), &p, &ctl).unwrap();
        let d1 =
            laurent_at_pole(ZetaKind::Simplified, c(0.0, p.eta()), &p, &ctl).unwrap();
        assert_eq!(d1.order, 2);
        assert!(
            (d0.c_minus2.norm() - d1.c_minus2.norm()).abs()
                <= 1e-9 * d0.c_minus2.norm()
        );
    }

    #[test]
    fn scan_finds_sd1_in_window() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        let found = pole_scan(ZetaKind::full(), (-5.0, 1.0), (-1.0, 1.0), &p, &ctl).unwrap();
        let res: Vec<f64> = found.iter().map(|f| f.location.re).collect();
        assert_eq!(res, vec![0.0, -2.0, -4.0]);
        assert!(found.iter().all(|f| f.order == 2));
        assert!(found.iter().all(|f| f.location.im.abs() < 1e-12));
    }

    /// The shifted family realizes the odd columns: zeta_D(s+1) has poles
    /// at -1, -3, -5 in the same window, and the union over shifts 0 and 1
    /// realizes -N.
    #[test]
    fn scan_shifted_family() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        let shifted =
            pole_scan(ZetaKind::Full { shift: 1 }, (-5.0, 1.0), (-1.0, 1.0), &p, &ctl)
                .unwrap();
        let res: Vec<f64> = shifted.iter().map(|f| f.location.re).collect();
        assert_eq!(res, vec![-1.0, -3.0, -5.0]);
        let plain =
            pole_scan(ZetaKind::full(), (-5.0, 1.0), (-1.0, 1.0), &p, &ctl).unwrap();
        let mut union: Vec<f64> = plain
            .iter()
            .chain(shifted.iter())
            .map(|f| f.location.re)
            .collect();
        union.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(union, vec![0.0, -1.0, -2.0, -3.0, -4.0, -5.0]);
    }

    #[test]
    fn scan_right_half_plane_empty() {
        let p = QParams::new(0.5, 1.0).unwrap();
        let ctl = SeriesControl::default();
        let found = pole_scan(ZetaKind::full(), (0.1, 3.0), (-20.0, 20.0), &p, &ctl).unwrap();
        assert!(found.is_empty());
    }
}
