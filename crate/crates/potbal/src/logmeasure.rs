//! Logarithmic interval functions over annuli, the two-sided logarithmic
//! submeasure, characteristic logarithms from the origin, and sampled
//! boundedness reports for the axis conditions on charge sums.
//!
//! The right (left) logarithmic function of a charge over the annulus
//! `r < |z| <= R` integrates the positive (negative) part of `Re(1/z)`.
//! Atoms contribute `mass * max(+-Re z, 0) / |z|^2`; a vertical line at
//! abscissa `x` contributes in closed form through the antiderivative
//! `t -> 2 atan(t/x)` of its density, never by quadrature.

use serde::{Deserialize, Serialize};

use crate::charge::ChargeDistribution;
use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::verdict::{slope_verdict, Verdict};

/// Which axis condition a report samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LindelofKind {
    /// Real parts of `1/z`: the real-axis condition.
    #[serde(rename = "R")]
    RAxis,
    /// Imaginary parts of `1/z`: the imaginary-axis condition.
    #[serde(rename = "iR")]
    IRAxis,
    /// Modulus of the full complex sum of `1/z`.
    #[serde(rename = "full")]
    Full,
}

/// Sampled evidence for one of the axis conditions.
///
/// `samples` holds `(r, S(r))` with `S` the charge sum over `1 < |z| <= r`
/// of the kernel selected by `kind`; `sup_abs` is the largest `|S|` seen;
/// `slope` and `verdict` come from the shared tail-slope rule applied to
/// `|S(r)|` against `ln r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LindelofReport {
    pub kind: LindelofKind,
    pub sup_abs: f64,
    pub samples: Vec<(f64, f64)>,
    pub verdict: Verdict,
    pub r_max: f64,
    pub slope: f64,
}

/// `max(Re(1/z), 0)` contribution kernel.
fn re_plus_recip(re: f64, abs_sq: f64) -> f64 {
    if re > 0.0 {
        re / abs_sq
    } else {
        0.0
    }
}

/// `max(-Re(1/z), 0)` contribution kernel.
fn re_minus_recip(re: f64, abs_sq: f64) -> f64 {
    if re < 0.0 {
        -re / abs_sq
    } else {
        0.0
    }
}

/// Closed-form integral of `|x| / (x^2 + t^2)` (the modulus of the real
/// part of `1/z` along the vertical line at abscissa `x != 0`) over the
/// part of the line inside the annulus `r < |z| <= R`; per unit
/// coefficient.
pub(crate) fn line_abs_re_integral(x: f64, r: f64, big_r: f64) -> f64 {
    let ax = x.abs();
    if ax >= big_r {
        return 0.0;
    }
    let t_outer = (big_r * big_r - x * x).sqrt();
    let t_inner = (r * r - x * x).max(0.0).sqrt();
    2.0 * ((t_outer / ax).atan() - (t_inner / ax).atan())
}

/// Annulus sum over atoms of `mass * kernel`, plus line terms assembled by
/// `line_term`. Empty annuli (when `r >= R`) give 0.
fn annulus_sum(
    nu: &ChargeDistribution,
    r: f64,
    big_r: f64,
    kernel: impl Fn(f64, f64) -> f64,
    line_term: impl Fn(f64, f64) -> f64,
) -> f64 {
    if r >= big_r {
        return 0.0;
    }
    let r2 = r * r;
    let big_r2 = big_r * big_r;
    let mut acc = NeumaierSum::new();
    for a in &nu.atoms {
        let abs_sq = a.position.abs_sq();
        if abs_sq > r2 && abs_sq <= big_r2 {
            acc.add(a.mass * kernel(a.position.re, abs_sq));
        }
    }
    for l in &nu.lines {
        if l.coef != 0.0 {
            acc.add(line_term(l.x, l.coef));
        }
    }
    acc.value()
}

fn check_annulus_args(r: f64, big_r: f64) {
    assert!(
        r > 0.0 && big_r > r && big_r.is_finite(),
        "need 0 < r < R < inf, got r={r}, R={big_r}"
    );
}

/// Right logarithmic function: integral of `max(Re(1/z), 0)` over the
/// annulus `r < |z| <= R` against the charge.
pub fn ell_right(nu: &ChargeDistribution, r: f64, big_r: f64) -> f64 {
    check_annulus_args(r, big_r);
    annulus_sum(nu, r, big_r, re_plus_recip, |x, coef| {
        if x > 0.0 {
            coef * line_abs_re_integral(x, r, big_r)
        } else {
            0.0
        }
    })
}

/// Left logarithmic function: integral of `max(-Re(1/z), 0)`.
pub fn ell_left(nu: &ChargeDistribution, r: f64, big_r: f64) -> f64 {
    check_annulus_args(r, big_r);
    annulus_sum(nu, r, big_r, re_minus_recip, |x, coef| {
        if x < 0.0 {
            coef * line_abs_re_integral(x, r, big_r)
        } else {
            0.0
        }
    })
}

/// Two-sided logarithmic submeasure: the larger of the left and right
/// logarithmic functions. Defined for mass distributions only.
///
/// Errors with [`Error::SignedInput`] when any atom mass or line
/// coefficient is negative.
pub fn ell_sub(nu: &ChargeDistribution, r: f64, big_r: f64) -> Result<f64> {
    if !nu.is_mass_distribution() {
        return Err(Error::SignedInput);
    }
    Ok(ell_right(nu, r, big_r).max(ell_left(nu, r, big_r)))
}

/// Number of halvings in the characteristic-logarithm radius schedule.
const CHAR_LOG_STEPS: u32 = 20;
/// Relative stabilization tolerance for the schedule.
const CHAR_LOG_TOL: f64 = 1e-9;

/// Right characteristic logarithm: the right logarithmic function taken
/// from the origin, probed on the shrinking radius schedule
/// `r_floor / 2^k`, `k = 0..=20`.
///
/// Returns the deepest evaluation (over `r_floor/2^20 < |z| <= R`)
/// together with a convergence flag: `true` when the last halving changed
/// the value by at most `1e-9` relative. Charges that keep contributing
/// all the way down the schedule are flagged `false`.
pub fn char_log_right(nu: &ChargeDistribution, big_r: f64, r_floor: f64) -> (f64, bool) {
    assert!(big_r > 0.0, "char_log_right needs R > 0");
    assert!(r_floor > 0.0, "char_log_right needs r_floor > 0");
    let mut prev = 0.0;
    let mut last = 0.0;
    for k in 0..=CHAR_LOG_STEPS {
        let r = r_floor / f64::powi(2.0, k as i32);
        let v = annulus_sum(nu, r, big_r, re_plus_recip, |x, coef| {
            if x > 0.0 {
                coef * line_abs_re_integral(x, r, big_r)
            } else {
                0.0
            }
        });
        prev = last;
        last = v;
        if k == 0 {
            prev = v;
        }
    }
    let convergent = (last - prev).abs() <= CHAR_LOG_TOL * last.abs().max(1.0);
    (last, convergent)
}

/// Samples the axis-condition sum of `kind` at dyadic radii up to `r_max`
/// and judges boundedness by the shared tail-slope rule.
///
/// The sum runs over `1 < |z| <= r`; vertical lines enter through their
/// closed-form antiderivatives (a line contributes nothing to the
/// imaginary-axis kind, by oddness).
pub fn lindelof_report(nu: &ChargeDistribution, kind: LindelofKind, r_max: f64) -> LindelofReport {
    lindelof_report_with_tol(nu, kind, r_max, crate::verdict::DEFAULT_SLOPE_TOL)
}

/// [`lindelof_report`] with an explicit slope tolerance.
pub fn lindelof_report_with_tol(
    nu: &ChargeDistribution,
    kind: LindelofKind,
    r_max: f64,
    slope_tol: f64,
) -> LindelofReport {
    assert!(r_max >= 2.0, "lindelof_report needs r_max >= 2");
    let k_max = r_max.log2().floor() as u32;
    let mut samples = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let r = f64::powi(2.0, k as i32);
        samples.push((r, axis_sum(nu, kind, r)));
    }
    let sup_abs = samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.0.ln(), s.1.abs())).collect();
    let (slope, verdict) = slope_verdict(&pts, slope_tol);
    LindelofReport {
        kind,
        sup_abs,
        samples,
        verdict,
        r_max,
        slope,
    }
}

/// The kernel sum over `1 < |z| <= r` for a single sample.
fn axis_sum(nu: &ChargeDistribution, kind: LindelofKind, r: f64) -> f64 {
    match kind {
        LindelofKind::RAxis => signed_re_sum(nu, r),
        LindelofKind::IRAxis => im_sum(nu, r),
        LindelofKind::Full => {
            let re = signed_re_sum(nu, r);
            let im = im_sum(nu, r);
            re.hypot(im)
        }
    }
}

fn signed_re_sum(nu: &ChargeDistribution, r: f64) -> f64 {
    annulus_sum(
        nu,
        1.0,
        r,
        |re, abs_sq| re / abs_sq,
        |x, coef| {
            if x == 0.0 {
                0.0
            } else {
                coef * x.signum() * line_abs_re_integral(x, 1.0, r)
            }
        },
    )
}

fn im_sum(nu: &ChargeDistribution, big_r: f64) -> f64 {
    // Lines contribute 0: Im(1/z) is odd along a vertical line and the
    // annulus cuts symmetric parameter ranges.
    if big_r <= 1.0 {
        return 0.0;
    }
    let big_r2 = big_r * big_r;
    let mut acc = NeumaierSum::new();
    for a in &nu.atoms {
        let abs_sq = a.position.abs_sq();
        if abs_sq > 1.0 && abs_sq <= big_r2 {
            acc.add(a.mass * (-a.position.im / abs_sq));
        }
    }
    acc.value()
}
