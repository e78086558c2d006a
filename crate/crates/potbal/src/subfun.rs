//! Evaluable growth functions: canonical products over finite zero sets,
//! a few closed-form built-ins, and the mean-value machinery around them
//! (circle means, disk means, radial maxima, type estimates, and the
//! vertical-axis integral `J`).
//!
//! Values live in `[-inf, +inf)`: logarithmic singularities at zeros are
//! represented by `-inf` explicitly and treated as integrable by the
//! quadrature layer. Canonical products truncate their zero list at a
//! radius and can report an explicit tail estimate for what was dropped.

use serde::{Deserialize, Serialize};
use std::cell::Cell;
use std::f64::consts::{PI, TAU};

use crate::charge::CPoint;
use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;
use crate::quad::{integrate_panels, QuadOpts};

/// A real-valued function on the plane, subharmonic for every variant
/// when parameters are admissible.
///
/// JSON uses a `variant` tag: `{"variant":"log_abs_sin_pi"}`,
/// `{"variant":"canprod","zeros":[{"re":1.0,"im":0.0}],"genus":1,"trunc":1e4}`,
/// `{"variant":"scaled","factor":2.0,"inner":{...}}`, and so on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum GrowthFunction {
    /// `ln |sin(pi z)|`: the model function of exponential type pi with
    /// zeros on the integers.
    LogAbsSinPi,
    /// `|Re z|`: type 1, harmonic off the imaginary axis.
    AbsRe,
    /// `a |z|`.
    LinearAbs { a: f64 },
    /// Identically zero.
    Zero,
    /// The degree-one harmonic polynomial `Re(a z) + c`.
    Harmonic1 { a: CPoint, c: f64 },
    /// Truncated canonical product `sum over |z_n| <= trunc` of
    /// `ln|1 - z/z_n| + genus * Re(z/z_n)`.
    #[serde(rename = "canprod")]
    CanonicalProduct {
        zeros: Vec<CPoint>,
        genus: u8,
        trunc: f64,
    },
    /// `factor * inner`.
    Scaled {
        factor: f64,
        inner: Box<GrowthFunction>,
    },
    /// Pointwise sum; the empty sum is zero.
    Sum { terms: Vec<GrowthFunction> },
}

/// `ln |sin(pi z)|`, stable for all plane points.
///
/// For `|Im z| <= 1/2` uses `|sin(pi z)|^2 = sinh^2(pi y) + sin^2(pi x)`;
/// beyond that switches to the exponential form
/// `pi |y| - ln 2 + ln|1 - q cis(2 pi x)|` with `q = exp(-2 pi |y|)`,
/// which never overflows.
fn log_abs_sin_pi(z: CPoint) -> f64 {
    let (x, y) = (z.re, z.im);
    if y == 0.0 && x == x.round() {
        return f64::NEG_INFINITY;
    }
    let ay = y.abs();
    if ay <= 0.5 {
        let s = (PI * x).sin();
        let sh = (PI * y).sinh();
        return 0.5 * (sh * sh + s * s).ln();
    }
    let q = (-TAU * ay).exp();
    let c = (TAU * x).cos();
    let s = (TAU * x).sin();
    let corr = (1.0 - q * c).hypot(q * s).ln();
    PI * ay - std::f64::consts::LN_2 + corr
}

impl GrowthFunction {
    /// Structural admissibility: canonical-product zeros are nonzero, the
    /// genus is 0 or 1, the truncation radius positive, and containers are
    /// checked recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            GrowthFunction::CanonicalProduct { zeros, genus, trunc } => {
                if zeros.iter().any(|z| z.re == 0.0 && z.im == 0.0) {
                    return Err(Error::OriginInSupport);
                }
                if *genus > 1 {
                    return Err(Error::SupportViolation {
                        detail: "canonical product genus must be 0 or 1".into(),
                    });
                }
                if !(*trunc > 0.0) {
                    return Err(Error::SupportViolation {
                        detail: "canonical product needs a positive truncation radius".into(),
                    });
                }
                Ok(())
            }
            GrowthFunction::Scaled { inner, .. } => inner.validate(),
            GrowthFunction::Sum { terms } => terms.iter().try_for_each(|t| t.validate()),
            _ => Ok(()),
        }
    }

    /// Pointwise value; `-inf` exactly at logarithmic singularities.
    pub fn eval(&self, z: CPoint) -> f64 {
        match self {
            GrowthFunction::LogAbsSinPi => log_abs_sin_pi(z),
            GrowthFunction::AbsRe => z.re.abs(),
            GrowthFunction::LinearAbs { a } => a * z.abs(),
            GrowthFunction::Zero => 0.0,
            GrowthFunction::Harmonic1 { a, c } => a.re * z.re - a.im * z.im + c,
            GrowthFunction::CanonicalProduct { zeros, genus, trunc } => {
                let mut acc = NeumaierSum::new();
                for zn in zeros {
                    if zn.abs() > *trunc {
                        continue;
                    }
                    let den = zn.abs_sq();
                    let wr = (z.re * zn.re + z.im * zn.im) / den;
                    let wi = (z.im * zn.re - z.re * zn.im) / den;
                    let log_term = (1.0 - wr).hypot(wi).ln();
                    if log_term == f64::NEG_INFINITY {
                        return f64::NEG_INFINITY;
                    }
                    acc.add(log_term);
                    if *genus >= 1 {
                        acc.add(wr);
                    }
                }
                acc.value()
            }
            GrowthFunction::Scaled { factor, inner } => factor * inner.eval(z),
            GrowthFunction::Sum { terms } => {
                let mut acc = NeumaierSum::new();
                for t in terms {
                    let v = t.eval(z);
                    if v == f64::NEG_INFINITY {
                        return f64::NEG_INFINITY;
                    }
                    acc.add(v);
                }
                acc.value()
            }
        }
    }

    /// Value together with a truncation-tail estimate: the contribution of
    /// zeros listed beyond the truncation radius is bounded by
    /// `|z|^2 * sum 1/|z_n|^2` for genus 1 and `|z| * sum 1/|z_n|` for
    /// genus 0 (valid once those zeros dwarf `|z|`). Built-ins have no
    /// tail.
    pub fn eval_with_tail(&self, z: CPoint) -> (f64, f64) {
        let tail = self.tail_estimate(z);
        (self.eval(z), tail)
    }

    fn tail_estimate(&self, z: CPoint) -> f64 {
        match self {
            GrowthFunction::CanonicalProduct { zeros, genus, trunc } => {
                let mut acc = NeumaierSum::new();
                for zn in zeros {
                    let r = zn.abs();
                    if r <= *trunc {
                        continue;
                    }
                    acc.add(if *genus >= 1 { 1.0 / (r * r) } else { 1.0 / r });
                }
                let scale = if *genus >= 1 { z.abs_sq() } else { z.abs() };
                scale * acc.value()
            }
            GrowthFunction::Scaled { factor, inner } => factor.abs() * inner.tail_estimate(z),
            GrowthFunction::Sum { terms } => terms.iter().map(|t| t.tail_estimate(z)).sum(),
            _ => 0.0,
        }
    }

    /// Angles (radians, any branch) at which `u` can be singular or
    /// kinked on the circle `|w - z| = r`; used for panel subdivision.
    fn circle_break_angles(&self, z: CPoint, r: f64, out: &mut Vec<f64>) {
        match self {
            GrowthFunction::LogAbsSinPi => {
                // Real-axis crossings; zeros of sin(pi w) live there.
                if z.im.abs() <= r {
                    let s = (-z.im / r).clamp(-1.0, 1.0);
                    let t = s.asin();
                    out.push(t);
                    out.push(PI - t);
                } else if z.im.abs() <= 1.5 * r {
                    // Near miss: the zero line sits just beyond the
                    // circle, so the integrand dips sharply around the
                    // closest-approach angle; a panel break there keeps
                    // the error estimate honest.
                    out.push(if z.im > 0.0 { -0.5 * PI } else { 0.5 * PI });
                }
            }
            GrowthFunction::AbsRe => {
                if z.re.abs() <= r {
                    let c = (-z.re / r).clamp(-1.0, 1.0);
                    let t = c.acos();
                    out.push(t);
                    out.push(-t);
                }
            }
            GrowthFunction::LinearAbs { .. } => {
                if (z.abs() - r).abs() <= 1e-9 * r.max(1.0) {
                    out.push((-z.im).atan2(-z.re));
                }
            }
            GrowthFunction::CanonicalProduct { zeros, trunc, .. } => {
                for zn in zeros {
                    if zn.abs() > *trunc {
                        continue;
                    }
                    let d = zn.dist(z);
                    // Zeros near the circle, not only on it: the dip
                    // around the closest-approach angle narrows with
                    // |d - r| / r and fools the panel error estimate
                    // unless a break centers it.
                    if d > 0.0 && (d - r).abs() <= 0.5 * r {
                        out.push((zn.im - z.im).atan2(zn.re - z.re));
                    }
                }
            }
            GrowthFunction::Scaled { inner, .. } => inner.circle_break_angles(z, r, out),
            GrowthFunction::Sum { terms } => {
                for t in terms {
                    t.circle_break_angles(z, r, out);
                }
            }
            GrowthFunction::Zero | GrowthFunction::Harmonic1 { .. } => {}
        }
    }

    /// Radii `t <= r_max` at which the circle `|w - z| = t` passes through
    /// a singularity or kink of `u`; used as outer break points by
    /// [`disk_mean`].
    fn radial_break_radii(&self, z: CPoint, r_max: f64, out: &mut Vec<f64>) {
        match self {
            GrowthFunction::LogAbsSinPi => {
                if z.im != 0.0 && z.im.abs() <= r_max {
                    out.push(z.im.abs());
                }
                // Circles through the integer zeros within reach.
                let lo = (z.re - r_max).floor() as i64;
                let hi = (z.re + r_max).ceil() as i64;
                if hi - lo <= 4096 {
                    for k in lo..=hi {
                        let d = z.dist(CPoint::new(k as f64, 0.0));
                        if d > 0.0 && d <= r_max {
                            out.push(d);
                        }
                    }
                }
            }
            GrowthFunction::AbsRe => {
                if z.re != 0.0 && z.re.abs() <= r_max {
                    out.push(z.re.abs());
                }
            }
            GrowthFunction::LinearAbs { .. } => {
                let d = z.abs();
                if d > 0.0 && d <= r_max {
                    out.push(d);
                }
            }
            GrowthFunction::CanonicalProduct { zeros, trunc, .. } => {
                for zn in zeros {
                    if zn.abs() > *trunc {
                        continue;
                    }
                    let d = zn.dist(z);
                    if d > 0.0 && d <= r_max {
                        out.push(d);
                    }
                }
            }
            GrowthFunction::Scaled { inner, .. } => inner.radial_break_radii(z, r_max, out),
            GrowthFunction::Sum { terms } => {
                for t in terms {
                    t.radial_break_radii(z, r_max, out);
                }
            }
            GrowthFunction::Zero | GrowthFunction::Harmonic1 { .. } => {}
        }
    }

    /// Radii in `[lo, hi]` at which `u(iy)` or `u(-iy)` is singular.
    fn axis_break_radii(&self, lo: f64, hi: f64, out: &mut Vec<f64>) {
        match self {
            GrowthFunction::CanonicalProduct { zeros, trunc, .. } => {
                for zn in zeros {
                    if zn.re == 0.0 && zn.abs() <= *trunc {
                        let d = zn.im.abs();
                        if d >= lo && d <= hi {
                            out.push(d);
                        }
                    }
                }
            }
            GrowthFunction::Scaled { inner, .. } => inner.axis_break_radii(lo, hi, out),
            GrowthFunction::Sum { terms } => {
                for t in terms {
                    t.axis_break_radii(lo, hi, out);
                }
            }
            // sin(pi z) has no zeros on the imaginary axis except the
            // origin, which lies below any admissible lo > 0.
            _ => {}
        }
    }
}

/// Sorted panel boundaries `[0, ..., 2 pi]` from a bag of angles.
fn angle_breaks(angles: &[f64]) -> Vec<f64> {
    let mut pts: Vec<f64> = angles
        .iter()
        .map(|a| a.rem_euclid(TAU))
        .filter(|a| *a > 1e-9 && *a < TAU - 1e-9)
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let mut breaks = Vec::with_capacity(pts.len() + 2);
    breaks.push(0.0);
    breaks.extend(pts);
    breaks.push(TAU);
    breaks
}

/// Sorted panel boundaries `[lo, ..., hi]` from interior break points.
fn interval_breaks(lo: f64, hi: f64, interior: &[f64]) -> Vec<f64> {
    let width = hi - lo;
    let mut pts: Vec<f64> = interior
        .iter()
        .copied()
        .filter(|t| *t > lo + 1e-12 * width && *t < hi - 1e-12 * width)
        .collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * width.max(1.0));
    let mut breaks = Vec::with_capacity(pts.len() + 2);
    breaks.push(lo);
    breaks.extend(pts);
    breaks.push(hi);
    breaks
}

/// Mean of `u` over the circle `|w - z| = r`, by adaptive quadrature with
/// panels split at singular angles. `r = 0` degenerates to `u(z)`.
pub fn circle_mean(u: &GrowthFunction, z: CPoint, r: f64, tol: f64) -> Result<f64> {
    assert!(r >= 0.0, "circle_mean needs r >= 0");
    if r == 0.0 {
        return Ok(u.eval(z));
    }
    let mut angles = Vec::new();
    u.circle_break_angles(z, r, &mut angles);
    // Uniform seed panels: on a smooth periodic integrand the coarse and
    // refined Simpson estimates can agree by Fourier-mode aliasing, so a
    // single adaptive panel may accept early with a bogus small error.
    // Eight seeds push the first aliased mode deep into the decaying tail.
    for k in 1..8 {
        angles.push(k as f64 * TAU / 8.0);
    }
    let breaks = angle_breaks(&angles);
    let opts = QuadOpts::with_rtol(tol);
    let res = integrate_panels(
        |th| u.eval(CPoint::new(z.re + r * th.cos(), z.im + r * th.sin())),
        &breaks,
        &opts,
    );
    if !res.converged {
        return Err(Error::QuadratureFailure {
            tol,
            estimate: res.error_estimate,
        });
    }
    Ok(res.value / TAU)
}

/// Area mean of `u` over the closed disk of radius `r` about `z`,
/// computed as `(2/r^2) * integral of t * circle_mean(u, z, t) dt`.
/// Inner circle means run at a tenth of the requested tolerance.
pub fn disk_mean(u: &GrowthFunction, z: CPoint, r: f64, tol: f64) -> Result<f64> {
    assert!(r >= 0.0, "disk_mean needs r >= 0");
    if r == 0.0 {
        return Ok(u.eval(z));
    }
    let inner_tol = 0.1 * tol;
    let mut kinks = Vec::new();
    u.radial_break_radii(z, r, &mut kinks);
    let breaks = interval_breaks(0.0, r, &kinks);
    let inner_failed = Cell::new(false);
    let integrand = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        match circle_mean(u, z, t, inner_tol) {
            Ok(m) => t * m,
            Err(_) => {
                inner_failed.set(true);
                0.0
            }
        }
    };
    let res = integrate_panels(integrand, &breaks, &QuadOpts::with_rtol(tol));
    if inner_failed.get() || !res.converged {
        return Err(Error::QuadratureFailure {
            tol,
            estimate: res.error_estimate,
        });
    }
    Ok(2.0 * res.value / (r * r))
}

/// Sampled maximum of `u` over `|z| = r`: `samples` equispaced angles
/// (grid spacing `2 pi / samples`), then a ternary refinement pass
/// between the neighbors of the best grid point.
pub fn radial_max_with(u: &GrowthFunction, r: f64, samples: usize) -> f64 {
    assert!(r >= 0.0, "radial_max needs r >= 0");
    assert!(samples >= 4, "radial_max needs at least 4 samples");
    if r == 0.0 {
        return u.eval(CPoint::new(0.0, 0.0));
    }
    let at = |th: f64| u.eval(CPoint::new(r * th.cos(), r * th.sin()));
    let h = TAU / samples as f64;
    let mut best_k = 0usize;
    let mut best = f64::NEG_INFINITY;
    for k in 0..samples {
        let v = at(k as f64 * h);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    if best == f64::NEG_INFINITY {
        return best;
    }
    let mut lo = best_k as f64 * h - h;
    let mut hi = best_k as f64 * h + h;
    for _ in 0..100 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if at(m1) < at(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best.max(at(0.5 * (lo + hi)))
}

/// [`radial_max_with`] at the default density of 4096 samples.
pub fn radial_max(u: &GrowthFunction, r: f64) -> f64 {
    radial_max_with(u, r, 4096)
}

/// Order-1 type estimator: the largest `max(radial_max(u, r), 0) / r`
/// over dyadic radii `16 <= r = 2^k <= r_max`.
pub fn type_estimate(u: &GrowthFunction, r_max: f64) -> f64 {
    assert!(r_max >= 16.0, "type_estimate needs r_max >= 16");
    let mut best = 0.0_f64;
    let mut k = 4u32;
    loop {
        let r = (k as f64).exp2();
        if r > r_max {
            break;
        }
        best = best.max(radial_max(u, r).max(0.0) / r);
        k += 1;
    }
    best
}

/// The vertical-axis integral
/// `(1/2 pi) * integral from r to R of (u(iy) + u(-iy)) / y^2 dy`,
/// computed after the substitution `y = e^t`.
pub fn j_axis(u: &GrowthFunction, r: f64, big_r: f64, tol: f64) -> Result<f64> {
    assert!(
        r > 0.0 && big_r > r && big_r.is_finite(),
        "j_axis needs 0 < r < R < inf"
    );
    let mut radii = Vec::new();
    u.axis_break_radii(r, big_r, &mut radii);
    let logs: Vec<f64> = radii.iter().map(|d| d.ln()).collect();
    let breaks = interval_breaks(r.ln(), big_r.ln(), &logs);
    let res = integrate_panels(
        |t| {
            let y = t.exp();
            (u.eval(CPoint::new(0.0, y)) + u.eval(CPoint::new(0.0, -y))) * (-t).exp()
        },
        &breaks,
        &QuadOpts::with_rtol(tol),
    );
    if !res.converged {
        return Err(Error::QuadratureFailure {
            tol,
            estimate: res.error_estimate,
        });
    }
    Ok(res.value / TAU)
}

/// A radial covering-radius profile `t -> r(t) in (0, 1]` for variable
/// Hausdorff contents: either a constant, or a constant plateau with a
/// power-law floor beyond a threshold radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadiusProfile {
    Constant { r: f64 },
    /// `c` on `t <= big_r`, then `(1 + t)^(-p)`.
    PowerFloor { c: f64, big_r: f64, p: f64 },
}

impl RadiusProfile {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            RadiusProfile::Constant { r } => *r > 0.0 && *r <= 1.0,
            RadiusProfile::PowerFloor { c, big_r, p } => {
                *c > 0.0 && *c <= 1.0 && *big_r >= 0.0 && *p >= 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SupportViolation {
                detail: "radius profile must stay within (0, 1]".into(),
            })
        }
    }

    /// Covering radius allowed at distance `t >= 0` from the origin.
    pub fn radius(&self, t: f64) -> f64 {
        match self {
            RadiusProfile::Constant { r } => *r,
            RadiusProfile::PowerFloor { c, big_r, p } => {
                if t <= *big_r {
                    *c
                } else {
                    (1.0 + t).powf(-p)
                }
            }
        }
    }

    /// Supremum of the profile over all radii.
    pub fn sup(&self) -> f64 {
        self.sup_beyond(0.0)
    }

    /// Supremum of the profile over `t' > t`.
    pub fn sup_beyond(&self, t: f64) -> f64 {
        match self {
            RadiusProfile::Constant { r } => *r,
            RadiusProfile::PowerFloor { c, big_r, p } => {
                if t < *big_r {
                    c.max((1.0 + *big_r).powf(-p))
                } else {
                    (1.0 + t).powf(-p)
                }
            }
        }
    }
}
