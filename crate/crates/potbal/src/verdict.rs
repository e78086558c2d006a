//! Evidence-based boundedness verdicts.
//!
//! Whether a sampled quantity stays bounded as the scale grows cannot be
//! decided from finite data. Every report in this crate therefore carries
//! the raw samples together with a verdict produced by one fixed rule: an
//! ordinary least-squares slope of the values against the logarithm of the
//! scale, computed over the tail half of the samples.
//!
//! * slope below `slope_tol`: [`Verdict::Bounded`];
//! * slope at least `3 * slope_tol`: [`Verdict::Unbounded`];
//! * anything in between, too few samples, or a non-finite slope:
//!   [`Verdict::Inconclusive`].
//!
//! A quantity growing like `ln r` has slope about 1 against `ln r`, far
//! above the default tolerance 0.05; a saturating quantity has tail slope
//! near 0. The dead band between `tol` and `3 tol` absorbs borderline
//! fixtures instead of guessing.

use serde::{Deserialize, Serialize};

use crate::numeric::ols_slope;

/// Outcome of a boundedness check on sampled evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Bounded,
    Unbounded,
    Inconclusive,
}

/// Minimum number of samples for any verdict other than `Inconclusive`.
pub const MIN_SAMPLES: usize = 4;

/// Default slope tolerance used by reports when none is given.
pub const DEFAULT_SLOPE_TOL: f64 = 0.05;

/// Computes the tail slope of `points` (pairs of `(x, y)` with `x` a log
/// scale) and the verdict at tolerance `slope_tol`.
///
/// For 8 or more samples only the later half is used for the regression,
/// so early transients do not mask the asymptotic trend.
pub fn slope_verdict(points: &[(f64, f64)], slope_tol: f64) -> (f64, Verdict) {
    if points.len() < MIN_SAMPLES {
        return (0.0, Verdict::Inconclusive);
    }
    let start = if points.len() >= 2 * MIN_SAMPLES {
        points.len() / 2
    } else {
        0
    };
    let tail = &points[start..];
    let xs: Vec<f64> = tail.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.1).collect();
    let slope = ols_slope(&xs, &ys);
    if !slope.is_finite() {
        return (slope, Verdict::Inconclusive);
    }
    let verdict = if slope < slope_tol {
        Verdict::Bounded
    } else if slope >= 3.0 * slope_tol {
        Verdict::Unbounded
    } else {
        Verdict::Inconclusive
    };
    (slope, verdict)
}
