//! Adaptive one-dimensional quadrature for the mean-value and axis
//! integrals used elsewhere in the crate.
//!
//! Plain adaptive Simpson with Richardson extrapolation. Two details
//! matter for our integrands. First, samples can be `-inf` or `NaN` when
//! a growth function is evaluated exactly at a zero; such samples are
//! retried at nearby abscissas before giving up. Second, logarithmic
//! endpoint singularities make per-panel refinement stall at a constant
//! error ratio, so the engine accepts panels at the depth cap and reports
//! failure only when the accumulated error estimate actually exceeds the
//! requested budget.

use crate::error::{Error, Result};

/// Outcome of one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Accumulated per-panel Richardson error estimates.
    pub error_estimate: f64,
    pub evaluations: usize,
    /// Whether the estimate met the requested tolerance.
    pub converged: bool,
}

/// Tolerances and budgets for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOpts {
    pub rtol: f64,
    pub atol: f64,
    pub max_evals: usize,
    pub max_depth: u32,
}

impl Default for QuadOpts {
    fn default() -> Self {
        QuadOpts {
            rtol: 1e-9,
            atol: 1e-15,
            max_evals: 400_000,
            max_depth: 48,
        }
    }
}

impl QuadOpts {
    pub fn with_rtol(rtol: f64) -> Self {
        QuadOpts {
            rtol,
            atol: rtol.min(1e-12),
            ..QuadOpts::default()
        }
    }
}

struct AdaptState<'a> {
    f: &'a mut dyn FnMut(f64) -> f64,
    span: f64,
    evals: usize,
    max_evals: usize,
    err_acc: f64,
    /// Per-node acceptance never drops below this: Richardson differences
    /// under the rounding noise of the whole integral carry no information,
    /// and chasing them turns singular neighborhoods into full trees.
    noise_floor: f64,
}

impl AdaptState<'_> {
    /// Evaluates the integrand, nudging the abscissa when the sample is
    /// not finite (integrable log singularities hit exactly).
    fn eval(&mut self, t: f64) -> f64 {
        self.evals += 1;
        let v = (self.f)(t);
        if v.is_finite() {
            return v;
        }
        for rel in [1e-13, 1e-10, 1e-7] {
            let d = rel * self.span;
            for s in [1.0, -1.0] {
                self.evals += 1;
                let w = (self.f)(t + s * d);
                if w.is_finite() {
                    return w;
                }
            }
        }
        v
    }
}

fn simpson(h: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    st: &mut AdaptState,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = st.eval(lm);
    let frm = st.eval(rm);
    let left = simpson(m - a, fa, flm, fm);
    let right = simpson(b - m, fm, frm, fb);
    let s2 = left + right;
    let d = (s2 - whole) / 15.0;
    if d.abs() <= tol.max(st.noise_floor)
        || depth == 0
        || st.evals >= st.max_evals
        || !d.is_finite()
    {
        st.err_acc += d.abs();
        return s2 + d;
    }
    let half_tol = 0.5 * tol;
    refine(st, a, fa, lm, flm, m, fm, left, half_tol, depth - 1)
        + refine(st, m, fm, rm, frm, b, fb, right, half_tol, depth - 1)
}

/// Integrates `f` over `[a, b]` adaptively. `a > b` integrates with the
/// usual sign flip; `a == b` is zero.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, opts: &QuadOpts) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    if a > b {
        let mut r = integrate(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    let mut st = AdaptState {
        f: &mut f,
        span: b - a,
        evals: 0,
        max_evals: opts.max_evals,
        err_acc: 0.0,
        noise_floor: 0.0,
    };
    let m = 0.5 * (a + b);
    let fa = st.eval(a);
    let fm = st.eval(m);
    let fb = st.eval(b);
    let whole = simpson(b - a, fa, fm, fb);
    // The tolerance scale mixes the crude value with an L1-style magnitude
    // so integrals that cancel to zero do not demand impossible relative
    // accuracy.
    let magnitude = whole
        .abs()
        .max((b - a) / 6.0 * (fa.abs() + 4.0 * fm.abs() + fb.abs()))
        .max(f64::MIN_POSITIVE);
    let tol = opts.atol.max(opts.rtol * magnitude);
    st.noise_floor = f64::EPSILON * magnitude;
    let value = refine(&mut st, a, fa, m, fm, b, fb, whole, tol, opts.max_depth);
    let budget = opts.atol.max(opts.rtol * value.abs().max(magnitude));
    QuadResult {
        value,
        error_estimate: st.err_acc,
        evaluations: st.evals,
        converged: value.is_finite() && st.err_acc <= 4.0 * budget,
    }
}

/// Integrates over `[breaks[0], breaks.last()]` panel by panel so interior
/// kinks and singular points sit on panel boundaries.
pub fn integrate_panels(
    mut f: impl FnMut(f64) -> f64,
    breaks: &[f64],
    opts: &QuadOpts,
) -> QuadResult {
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut value = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    let mut converged = true;
    for w in breaks.windows(2) {
        let r = integrate(&mut f, w[0], w[1], opts);
        value += r.value;
        err += r.error_estimate;
        evals += r.evaluations;
        converged &= r.converged;
    }
    QuadResult {
        value,
        error_estimate: err,
        evaluations: evals,
        converged,
    }
}

/// Like [`integrate`], but turns a failed tolerance into an error.
pub fn integrate_checked(
    f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    opts: &QuadOpts,
) -> Result<f64> {
    let r = integrate(f, a, b, opts);
    if r.converged {
        Ok(r.value)
    } else {
        Err(Error::QuadratureFailure {
            tol: opts.rtol,
            estimate: r.error_estimate,
        })
    }
}
