//! Explicit constructions on top of the sweeping machinery: a balancing
//! measure that caps the right logarithmic function, uniformizations that
//! upgrade a swept boundary charge to a multiple of Lebesgue measure, and
//! completions that extend a mass distribution until an axis condition
//! holds.
//!
//! Everything here is exact kernel algebra on atoms; the only sampling is
//! in choosing the Lebesgue factor `c` and in certifying nonnegativity of
//! the boundary densities, and both report their evidence instead of
//! claiming a proof.

use serde::{Deserialize, Serialize};

use crate::balayage::{boundary_cdf, sweep1, BoundaryCharge, PoissonTerm};
use crate::charge::{Atom, ChargeDistribution, CPoint, LineMass, Region};
use crate::criteria::{mu_rh_check, pair_gap_report};
use crate::error::{Error, Result};
use crate::logmeasure::{ell_left, lindelof_report, LindelofKind};
use crate::numeric::NeumaierSum;
use crate::verdict::Verdict;

/// Builds the balancing mass `alpha` on the positive real axis such that
/// the right logarithmic function of `eta + alpha` is bounded by twice
/// the supremum `S` of the right logarithmic function of `eta`, with
/// atoms exactly at the radii where the running supremum steps down.
///
/// The step function is evaluated exactly on the finite set of atom
/// radii; between them nothing changes. The `2S` bound is asserted over
/// every critical radius pair before returning.
pub fn alpha_balance(eta: &ChargeDistribution) -> Result<ChargeDistribution> {
    if !eta.lines.is_empty() {
        return Err(Error::LinePresent);
    }
    if eta.has_origin_atom() {
        return Err(Error::OriginInSupport);
    }
    // Contributions to the right logarithmic function, grouped by exact
    // atom radius.
    let mut by_radius: Vec<(f64, f64)> = Vec::new();
    for atom in &eta.atoms {
        if atom.position.re > 0.0 {
            by_radius.push((atom.position.abs(), atom.mass * atom.position.re_recip()));
        }
    }
    by_radius.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut radii: Vec<f64> = Vec::new();
    let mut steps: Vec<f64> = Vec::new();
    for (rho, w) in by_radius {
        match radii.last() {
            Some(&last) if last == rho => *steps.last_mut().unwrap() += w,
            _ => {
                radii.push(rho);
                steps.push(w);
            }
        }
    }
    // Prefix values v_j of the right logarithmic function from 0 to each
    // radius; its sup over all annuli is the largest forward increment.
    let mut prefix = Vec::with_capacity(radii.len());
    let mut acc = NeumaierSum::new();
    for &s in &steps {
        acc.add(s);
        prefix.push(acc.value());
    }
    let mut sup_s = 0.0f64;
    let mut min_seen = 0.0f64;
    for &v in &prefix {
        sup_s = sup_s.max(v - min_seen);
        min_seen = min_seen.min(v);
    }
    if !sup_s.is_finite() {
        return Err(Error::UnboundedSup);
    }
    // Suffix maxima: T_j = max of prefix values from j on; the balancing
    // atom at radius j carries mass rho_j (T_{j-1} - T_j).
    let m = radii.len();
    let mut suffix_max = vec![0.0f64; m];
    for j in (0..m).rev() {
        suffix_max[j] = if j + 1 < m {
            prefix[j].max(suffix_max[j + 1])
        } else {
            prefix[j]
        };
    }
    let mut alpha_atoms = Vec::new();
    for j in 0..m {
        let prev = if j == 0 {
            suffix_max[0].max(0.0)
        } else {
            suffix_max[j - 1]
        };
        let delta = prev - suffix_max[j];
        if delta > 0.0 {
            alpha_atoms.push(Atom::new(radii[j], 0.0, radii[j] * delta));
        }
    }
    let alpha = ChargeDistribution::from_atoms(alpha_atoms);
    // Postcondition over all critical pairs: with the balanced prefix
    // v'_j = v_j + (T_0 - T_j), every annulus value lies within 2S.
    let t0 = if m == 0 { 0.0 } else { suffix_max[0].max(0.0) };
    let mut hi = 0.0f64;
    let mut lo = 0.0f64;
    for j in 0..m {
        let balanced = prefix[j] + t0 - suffix_max[j];
        hi = hi.max(balanced);
        lo = lo.min(balanced);
    }
    assert!(
        hi - lo <= 2.0 * sup_s + 1e-9 * (1.0 + sup_s),
        "balanced spread {} exceeds twice the sup {}",
        hi - lo,
        sup_s
    );
    Ok(alpha)
}

/// Sampled nonnegativity evidence for a boundary density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonnegEvidence {
    /// Smallest density value over the test grid.
    pub grid_min: f64,
    /// Bound on the oscillating part of the density beyond the grid.
    pub tail_bound: f64,
    /// True when the grid minimum and the tail bound together certify a
    /// nonnegative density on the whole line.
    pub certified: bool,
}

/// Outcome of a uniformization: the balancing mass, the boundary
/// corrections on the target line(s), the Lebesgue factor, and the
/// residual of the final identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformizationResult {
    /// Balancing mass on the real axis, away from the forbidden zone.
    pub alpha: ChargeDistribution,
    /// Correction density on the right target line (the only line for
    /// the half-plane case).
    pub beta_plus: BoundaryCharge,
    /// Correction density on the left target line; empty for the
    /// half-plane case.
    pub beta_minus: BoundaryCharge,
    /// Lebesgue factor of the final boundary charge.
    pub c: f64,
    /// Largest deviation of the final boundary charge from `c` times
    /// Lebesgue measure over distribution-function increments on the
    /// test grid.
    pub residual_sup: f64,
    /// Nonnegativity evidence for the correction densities.
    pub beta_nonneg: NonnegEvidence,
}

/// Half-width of the boundary test grid.
const GRID_HALF_WIDTH: f64 = 1e4;
/// Evenly spaced base points of the boundary test grid.
const GRID_POINTS: usize = 4097;

/// Requires every carrier of `nu` to be an atom in the open cone
/// `Re z > a |z|`.
fn require_cone_support(nu: &ChargeDistribution, a: f64, name: &str) -> Result<()> {
    if !nu.lines.is_empty() {
        return Err(Error::SupportViolation {
            detail: format!("{name} must avoid vertical lines inside the cone"),
        });
    }
    for atom in &nu.atoms {
        if !(atom.position.re > a * atom.position.abs()) {
            return Err(Error::SupportViolation {
                detail: format!(
                    "{name} atom at ({}, {}) leaves the cone Re z > {a}|z|",
                    atom.position.re, atom.position.im
                ),
            });
        }
    }
    Ok(())
}

/// Test grid on the target line: even coverage of `|y| <= 1e4` plus the
/// Poisson peaks and their half-width points.
fn boundary_grid(poisson: &[PoissonTerm], x0: f64) -> Vec<f64> {
    let mut ys = Vec::with_capacity(GRID_POINTS + 3 * poisson.len());
    for k in 0..GRID_POINTS {
        ys.push(-GRID_HALF_WIDTH
            + 2.0 * GRID_HALF_WIDTH * k as f64 / (GRID_POINTS - 1) as f64);
    }
    for term in poisson {
        let v = term.source.im;
        let d = (term.source.re - x0).abs();
        for y in [v, v - d, v + d] {
            if y.abs() <= GRID_HALF_WIDTH {
                ys.push(y);
            }
        }
    }
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.dedup();
    ys
}

/// Density at height `y` of a boundary charge on its target line:
/// Poisson kernels plus the uniform coefficient.
fn boundary_density(poisson: &[PoissonTerm], uniform: f64, x0: f64, y: f64) -> f64 {
    let mut acc = uniform;
    for term in poisson {
        let d = (term.source.re - x0).abs();
        let dy = y - term.source.im;
        acc += term.mass * d / (std::f64::consts::PI * (d * d + dy * dy));
    }
    acc
}

/// Bound on the absolute Poisson part of the density for `|y|` beyond
/// the grid edge; infinite when a source peak lies outside the grid.
fn poisson_tail_bound(poisson: &[PoissonTerm], x0: f64) -> f64 {
    let mut acc = 0.0f64;
    for term in poisson {
        let d = (term.source.re - x0).abs();
        let gap = GRID_HALF_WIDTH - term.source.im.abs();
        if gap <= 0.0 {
            return f64::INFINITY;
        }
        acc += term.mass.abs() * d / (std::f64::consts::PI * (d * d + gap * gap));
    }
    acc
}

/// One half-plane uniformization in the frame where the target line is
/// the imaginary axis.
struct HalfPlaneCore {
    alpha: ChargeDistribution,
    theta: BoundaryCharge,
    /// Numeric supremum of the swept density over the grid, clamped at 0.
    density_sup: f64,
    grid: Vec<f64>,
}

fn half_plane_core(nu: &ChargeDistribution, mu: &ChargeDistribution) -> Result<HalfPlaneCore> {
    let eta = nu.sub(mu);
    let alpha = alpha_balance(&eta)?;
    let theta = sweep1(&nu.add(&alpha).sub(mu))?;
    let uniform: f64 = theta
        .uniform_terms
        .iter()
        .filter(|l| l.x == 0.0)
        .map(|l| l.coef)
        .sum();
    let grid = boundary_grid(&theta.poisson_terms, 0.0);
    let mut sup = 0.0f64;
    for &y in &grid {
        sup = sup.max(boundary_density(&theta.poisson_terms, uniform, 0.0, y));
    }
    Ok(HalfPlaneCore {
        alpha,
        theta,
        density_sup: sup,
        grid,
    })
}

/// The symbolic correction `c Lebesgue - theta` on the target line
/// `x0`, expressed in the same frame as `theta`.
fn lebesgue_minus(theta: &BoundaryCharge, c: f64, x0: f64) -> BoundaryCharge {
    BoundaryCharge {
        retained: ChargeDistribution::empty(),
        poisson_terms: theta
            .poisson_terms
            .iter()
            .map(|t| PoissonTerm {
                source: t.source,
                mass: -t.mass,
                target_line_abscissa: x0,
            })
            .collect(),
        uniform_terms: vec![LineMass::new(x0, c - theta_uniform(theta))],
        axis_atoms: Vec::new(),
        target_lines: vec![x0],
        genus1_only: theta.genus1_only,
    }
}

fn theta_uniform(theta: &BoundaryCharge) -> f64 {
    theta.uniform_terms.iter().map(|l| l.coef).sum()
}

/// Largest deviation of `theta + beta` from `c` times Lebesgue measure
/// over increments of the distribution functions on the grid.
fn residual_over_grid(
    theta: &BoundaryCharge,
    beta: &BoundaryCharge,
    line: f64,
    c: f64,
    grid: &[f64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut prev: Option<(f64, f64)> = None;
    for &y in grid {
        let total = boundary_cdf(theta, line, y)? + boundary_cdf(beta, line, y)?;
        if let Some((y0, t0)) = prev {
            worst = worst.max(((total - t0) - c * (y - y0)).abs());
        }
        prev = Some((y, total));
    }
    Ok(worst)
}

/// Nonnegativity evidence for `c Lebesgue - theta` sampled on the grid.
fn nonneg_evidence(theta: &BoundaryCharge, c: f64, grid: &[f64]) -> NonnegEvidence {
    let uniform = c - theta_uniform(theta);
    let mut grid_min = f64::INFINITY;
    for &y in grid {
        let density = uniform - boundary_density(&theta.poisson_terms, 0.0, 0.0, y);
        grid_min = grid_min.min(density);
    }
    if grid.is_empty() {
        grid_min = uniform;
    }
    let tail_bound = poisson_tail_bound(&theta.poisson_terms, 0.0);
    let certified = grid_min >= -1e-12 && uniform - tail_bound >= -1e-12;
    NonnegEvidence {
        grid_min,
        tail_bound,
        certified,
    }
}

/// Uniformizes the swept image of `nu - mu` on the imaginary axis: finds
/// a balancing mass `alpha` and a boundary correction `beta` such that
/// `sweep1(nu + alpha - mu) + beta = c Lebesgue` on the target line.
///
/// Both supports must lie in the open cone `Re z > a |z|`. The factor
/// scales the sampled density supremum into `c` (2 is the standard
/// choice); any factor at least 1 keeps the correction density
/// nonnegative on the sampled grid.
pub fn uniformize_rh(
    nu: &ChargeDistribution,
    mu: &ChargeDistribution,
    a: f64,
    factor: f64,
) -> Result<UniformizationResult> {
    assert!(a > 0.0 && a < 1.0, "cone parameter must be in (0, 1)");
    assert!(factor >= 1.0, "safety factor must be at least 1");
    require_cone_support(nu, a, "nu")?;
    require_cone_support(mu, a, "mu")?;
    let core = half_plane_core(nu, mu)?;
    let c = factor * core.density_sup;
    let beta = lebesgue_minus(&core.theta, c, 0.0);
    let residual_sup = residual_over_grid(&core.theta, &beta, 0.0, c, &core.grid)?;
    let beta_nonneg = nonneg_evidence(&core.theta, c, &core.grid);
    Ok(UniformizationResult {
        alpha: core.alpha,
        beta_plus: beta,
        beta_minus: empty_boundary(),
        c,
        residual_sup,
        beta_nonneg,
    })
}

fn empty_boundary() -> BoundaryCharge {
    BoundaryCharge {
        retained: ChargeDistribution::empty(),
        poisson_terms: Vec::new(),
        uniform_terms: Vec::new(),
        axis_atoms: Vec::new(),
        target_lines: Vec::new(),
        genus1_only: true,
    }
}

/// Maps a boundary charge computed in a side frame (target line at 0)
/// back to the original strip frame. `to_original` maps a source point
/// of the frame to the original plane; the target line moves to `line`.
fn remap_boundary(
    frame: &BoundaryCharge,
    line: f64,
    to_original: impl Fn(CPoint) -> CPoint,
) -> BoundaryCharge {
    BoundaryCharge {
        retained: ChargeDistribution::empty(),
        poisson_terms: frame
            .poisson_terms
            .iter()
            .map(|t| PoissonTerm {
                source: to_original(t.source),
                mass: t.mass,
                target_line_abscissa: line,
            })
            .collect(),
        uniform_terms: frame
            .uniform_terms
            .iter()
            .map(|l| LineMass::new(line, l.coef))
            .collect(),
        axis_atoms: Vec::new(),
        target_lines: vec![line],
        genus1_only: frame.genus1_only,
    }
}

/// Uniformizes on both boundary lines of the strip `|Re z| <= b`: after
/// checking the gap and axis preconditions, each half outside the strip
/// is swept onto its nearest boundary line in its own half-plane frame,
/// one Lebesgue factor `c` serves both lines (the smaller side is padded
/// up), and the final boundary charge is `c Lebesgue` on each line.
///
/// Supports must avoid both the cone `|Re z| <= a |z|` and the closed
/// strip.
pub fn uniformize_strip(
    nu: &ChargeDistribution,
    mu: &ChargeDistribution,
    a: f64,
    b: f64,
    factor: f64,
    n_max: u32,
    slope_tol: f64,
) -> Result<UniformizationResult> {
    assert!(a > 0.0 && a < 1.0, "cone parameter must be in (0, 1)");
    assert!(b > 0.0, "strip half-width must be positive");
    assert!(factor >= 1.0, "safety factor must be at least 1");
    for (name, set) in [("nu", nu), ("mu", mu)] {
        if !set.lines.is_empty() {
            return Err(Error::SupportViolation {
                detail: format!("{name} must not carry lines"),
            });
        }
        for atom in &set.atoms {
            let z = atom.position;
            if !(z.re.abs() > a * z.abs() && z.re.abs() > b) {
                return Err(Error::SupportViolation {
                    detail: format!(
                        "{name} atom at ({}, {}) meets the cone |Re z| <= {a}|z| or the strip |Re z| <= {b}",
                        z.re, z.im
                    ),
                });
            }
        }
    }
    let gap = pair_gap_report(nu, mu, n_max, slope_tol)?;
    if gap.verdict != Verdict::Bounded {
        return Err(Error::LindelofFailed {
            detail: format!("pair gap verdict {:?} (need Bounded)", gap.verdict),
        });
    }
    let axis = lindelof_report(mu, LindelofKind::Full, (n_max as f64).exp2());
    if axis.verdict != Verdict::Bounded {
        return Err(Error::LindelofFailed {
            detail: format!("comparison charge axis verdict {:?} (need Bounded)", axis.verdict),
        });
    }

    let shift_right = CPoint::new(-b, 0.0);
    let shift_left = CPoint::new(b, 0.0);
    let right = Region::right_half_plane();
    // Right side in its frame: subtract b from the abscissa.
    let nu_r = nu.shift(shift_right).restrict(&right)?;
    let mu_r = mu.shift(shift_right).restrict(&right)?;
    // Left side in its frame: shift by +b, then mirror.
    let nu_l = nu.shift(shift_left).mirror_ir().restrict(&right)?;
    let mu_l = mu.shift(shift_left).mirror_ir().restrict(&right)?;

    let core_r = half_plane_core(&nu_r, &mu_r)?;
    let core_l = half_plane_core(&nu_l, &mu_l)?;
    let c = (factor * core_r.density_sup).max(factor * core_l.density_sup);

    let beta_r_frame = lebesgue_minus(&core_r.theta, c, 0.0);
    let beta_l_frame = lebesgue_minus(&core_l.theta, c, 0.0);
    let residual_r = residual_over_grid(&core_r.theta, &beta_r_frame, 0.0, c, &core_r.grid)?;
    let residual_l = residual_over_grid(&core_l.theta, &beta_l_frame, 0.0, c, &core_l.grid)?;
    let ev_r = nonneg_evidence(&core_r.theta, c, &core_r.grid);
    let ev_l = nonneg_evidence(&core_l.theta, c, &core_l.grid);

    // Alpha back in the original frame: right atoms move out beyond +b,
    // left atoms beyond -b.
    let alpha = core_r
        .alpha
        .shift(CPoint::new(b, 0.0))
        .add(&core_l.alpha.shift(CPoint::new(b, 0.0)).mirror_ir());
    let beta_plus = remap_boundary(&beta_r_frame, b, |z| CPoint::new(z.re + b, z.im));
    let beta_minus = remap_boundary(&beta_l_frame, -b, |z| CPoint::new(-(z.re + b), z.im));

    Ok(UniformizationResult {
        alpha,
        beta_plus,
        beta_minus,
        c,
        residual_sup: residual_r.max(residual_l),
        beta_nonneg: NonnegEvidence {
            grid_min: ev_r.grid_min.min(ev_l.grid_min),
            tail_bound: ev_r.tail_bound.max(ev_l.tail_bound),
            certified: ev_r.certified && ev_l.certified,
        },
    })
}

/// The completion machinery shared by the checked entry points: mirror
/// the left part onto the right, balance the difference against the
/// closed right part, and mirror the balancing mass back to the negative
/// real axis.
fn complete_r_core(mu: &ChargeDistribution) -> Result<ChargeDistribution> {
    let left = mu.restrict(&Region::left_half_plane())?;
    let right_closed = mu.restrict(&Region::left_half_plane().complement())?;
    let eta = left.mirror_ir().sub(&right_closed);
    let alpha = alpha_balance(&eta)?;
    Ok(alpha.mirror_ir())
}

/// Completes `mu` on the negative real axis: returns a mass `gamma`
/// supported on the negative reals such that `mu + gamma` passes the
/// real-axis balance condition, built by balancing the mirrored left
/// part against the right part.
///
/// Precondition: the left-versus-right check on `mu` must come back
/// Bounded; otherwise no completion with finite density exists and
/// `ConditionMuRhFailed` is returned.
pub fn complete_r(
    mu: &ChargeDistribution,
    n_max: u32,
    slope_tol: f64,
) -> Result<ChargeDistribution> {
    if !mu.is_mass_distribution() {
        return Err(Error::SignedInput);
    }
    let check = mu_rh_check(mu, n_max, slope_tol, false)?;
    if check.verdict != Verdict::Bounded {
        return Err(Error::ConditionMuRhFailed);
    }
    complete_r_core(mu)
}

/// Completes `nu` on the imaginary axis: returns a mass `beta` on
/// `i R \ 0` such that `nu + beta` passes the imaginary-axis condition.
///
/// The construction rotates the plane a quarter turn, pads the rotated
/// left part with dyadic atoms on the positive reals (mass
/// `2^{n+1} ell_lh(2^n, 2^{n+1})` at `2^{n+1}`), runs the real-axis
/// completion machinery, and rotates everything back.
pub fn complete_ir(nu: &ChargeDistribution) -> Result<ChargeDistribution> {
    if !nu.is_mass_distribution() {
        return Err(Error::SignedInput);
    }
    if nu.has_origin_atom() {
        return Err(Error::OriginInSupport);
    }
    let rot = nu.rotate_cw()?;
    let left = rot.restrict(&Region::left_half_plane())?;
    let mut pad_atoms = Vec::new();
    if !left.is_empty() {
        let radii: Vec<f64> = left.atoms.iter().map(|a| a.position.abs()).collect();
        let r_min = radii.iter().cloned().fold(f64::INFINITY, f64::min);
        let r_max = radii.iter().cloned().fold(0.0f64, f64::max);
        let n_lo = r_min.log2().floor() as i64 - 1;
        let n_hi = r_max.log2().ceil() as i64;
        for n in n_lo..=n_hi {
            let r = (n as f64).exp2();
            let big_r = ((n + 1) as f64).exp2();
            let g = big_r * ell_left(&left, r, big_r);
            if g > 0.0 {
                pad_atoms.push(Atom::new(big_r, 0.0, g));
            }
        }
    }
    let pad = ChargeDistribution::from_atoms(pad_atoms);
    let mu_prime = rot.add(&pad);
    let gamma_prime = complete_r_core(&mu_prime)?;
    let added = pad.add(&gamma_prime);
    // Three quarter turns rotate the real-axis completion back onto the
    // imaginary axis.
    added.rotate_cw()?.rotate_cw()?.rotate_cw()
}

/// Full completion `Delta = mu + gamma + beta`: first the negative real
/// axis, then the imaginary axis. The added mass never touches the open
/// right half-plane, so the support of `Delta` there equals that of
/// `mu`.
pub fn complete_full(
    mu: &ChargeDistribution,
    n_max: u32,
    slope_tol: f64,
) -> Result<ChargeDistribution> {
    let gamma = complete_r(mu, n_max, slope_tol)?;
    let with_gamma = mu.add(&gamma);
    let beta = complete_ir(&with_gamma)?;
    Ok(with_gamma.add(&beta))
}
