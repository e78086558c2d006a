//! Batch front end: parse charge and growth inputs, run one operation,
//! emit a deterministic report on stdout or into a file.
//!
//! Inputs are JSON files produced by the serde representations in this
//! crate, inline literals for small sets, or `gen:` fixtures:
//! `gen:integers:N` (unit masses at the nonzero integers up to `N`),
//! `gen:ray:STEP:N` (unit masses at `STEP, 2 STEP, ...` on the positive
//! reals), and `gen:lattice-i:N` (unit masses at the nonzero imaginary
//! integers up to `N`).
//!
//! Exit codes: 0 on success, 1 when `--assert-bounded` is set and the
//! verdict is Unbounded, 2 on parse or I/O problems, 3 when a library
//! precondition rejects the input.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::balayage::{sweep0, sweep01, sweep1, sweep_strip, BoundaryCharge};
use crate::charge::{Atom, CPoint, ChargeDistribution};
use crate::construct::{
    alpha_balance, complete_full, complete_ir, complete_r, uniformize_rh, uniformize_strip,
};
use crate::criteria::{
    dyadic_gap_report, eps_condition, inequality_scan, mr_positive, mu_rh_check,
    pair_gap_report, redheffer_bound, CriterionReport, RhsSpec, ScanDomain,
};
use crate::error::Error;
use crate::logmeasure::{ell_left, ell_right, ell_sub, lindelof_report, LindelofKind};
use crate::smallsets::{content_chain_check, hausdorff_content, q_of_e, CoverInput, IntervalSet};
use crate::subfun::{
    circle_mean, disk_mean, j_axis, radial_max, type_estimate, GrowthFunction, RadiusProfile,
};
use crate::verdict::Verdict;

/// Why a run stopped, carrying the exit code.
#[derive(Debug)]
enum Failure {
    /// Bad arguments, unreadable files, malformed JSON or inline
    /// literals: exit 2.
    Parse(String),
    /// The library rejected the input: exit 3.
    Lib(Error),
    /// `--assert-bounded` was set and the verdict came back Unbounded:
    /// exit 1. The report has already been emitted.
    AssertTripped,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CliResult<T> = Result<T, Failure>;

#[derive(Parser)]
#[command(
    name = "potbal",
    version,
    about = "Logarithmic interval measures, balayage, and growth criteria"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Outer dyadic exponent for annulus grids.
    #[arg(long, global = true, default_value_t = 14)]
    n_max: u32,
    /// Slope tolerance for boundedness verdicts.
    #[arg(long, global = true, default_value_t = 0.05)]
    slope_tol: f64,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    quad_tol: f64,
    /// Truncation radius for scans without an explicit range.
    #[arg(long, global = true, default_value_t = 1e4)]
    trunc: f64,
    /// Output format; csv applies to criterion grid reports only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Rh,
    Lh,
    Sub,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    /// Real-axis signed sums.
    #[value(name = "R")]
    R,
    /// Imaginary-axis signed sums.
    #[value(name = "iR")]
    IR,
    /// Both axes combined.
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenusArg {
    /// Harmonic-measure sweep; needs a convergent boundary integral.
    #[value(name = "0")]
    G0,
    /// Kernel corrected by the uniform term; origin must be avoided.
    #[value(name = "1")]
    G1,
    /// Genus 0 inside the disk of radius `--r0`, genus 1 outside.
    #[value(name = "01")]
    G01,
    /// Both boundary lines of the strip `|Re z| <= b`.
    Strip,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeanOp {
    /// Mean over the circle of radius `--r` around `--z`.
    Circle,
    /// Area mean over the disk of radius `--r` around `--z`.
    Disk,
    /// Maximum over the circle of radius `--r`.
    RadialMax,
    /// Growth type estimate up to `--r-max`.
    Type,
    /// Weighted axis integral over the annulus `--r < |y| <= --big-r`.
    J,
}

#[derive(Subcommand)]
enum Command {
    /// Logarithmic interval measure of a charge over an annulus.
    Ell {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        big_r: f64,
        #[arg(long, value_enum, default_value_t = SideArg::Sub)]
        side: SideArg,
    },
    /// Axis boundedness report over dyadic radii.
    Lindelof {
        #[arg(long)]
        nu: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Largest sample radius; defaults to `--trunc`.
        #[arg(long)]
        r_max: Option<f64>,
    },
    /// Sweep a charge onto the imaginary axis or strip boundary.
    Sweep {
        #[arg(long)]
        nu: String,
        #[arg(long, value_enum)]
        genus: GenusArg,
        /// Split radius for genus 01 and the strip sweep.
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        /// Strip half-width for the strip sweep.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
    },
    /// Gap criteria over the dyadic annulus grid.
    Criterion {
        #[command(subcommand)]
        which: CriterionCmd,
    },
    /// Balancing masses, uniformizations, and axis completions.
    Construct {
        #[command(subcommand)]
        which: ConstructCmd,
    },
    /// Variable-radius Hausdorff content of a point set or interval set.
    Content {
        /// JSON file holding a cover input.
        #[arg(long)]
        input: Option<String>,
        /// Inline points "x,y;x,y;...".
        #[arg(long)]
        points: Option<String>,
        /// Inline intervals "a,b;c,d;...".
        #[arg(long)]
        intervals: Option<String>,
        #[arg(long)]
        d: f64,
        /// Radius profile: "const:R" or "power:C:BIGR:P".
        #[arg(long)]
        radius: String,
        /// Second, larger profile; switches to the chain comparison.
        #[arg(long)]
        t_radius: Option<String>,
    },
    /// Logarithmic size gauge of an interval set below a radius.
    Qe {
        /// Inline intervals "a,b;c,d;...".
        #[arg(long)]
        intervals: Option<String>,
        /// JSON file holding an interval set.
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        r: f64,
    },
    /// Circle, disk, and radial means of a growth function.
    Means {
        #[arg(long)]
        u: String,
        #[arg(long, value_enum)]
        op: MeanOp,
        /// Center "x,y" for circle and disk means.
        #[arg(long, default_value = "0,0")]
        z: String,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Outer radius for the axis integral.
        #[arg(long)]
        big_r: Option<f64>,
        /// Range for the type estimate; defaults to `--trunc`.
        #[arg(long)]
        r_max: Option<f64>,
    },
    /// Pointwise inequality scan with an exceptional set.
    Scan {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        /// Compare against a circle mean of the right side with this
        /// power radius instead of the pointwise value.
        #[arg(long)]
        rhs_pow: Option<f64>,
        /// "axis:YMIN:YMAX:N", "strip-boundary:B:YMAX:N", or
        /// "strip-grid:B:YMAX:NX:NY".
        #[arg(long)]
        domain: String,
        /// Inline intervals of excluded heights.
        #[arg(long)]
        exceptional: Option<String>,
    },
}

#[derive(Subcommand)]
enum CriterionCmd {
    /// Growth-versus-charge gaps: axis integral minus interval measure.
    Dyadic {
        #[arg(long)]
        nu: String,
        /// Comparison growth function.
        #[arg(long = "M")]
        comparison: String,
        #[arg(long)]
        assert_bounded: bool,
    },
    /// Charge-versus-charge gaps of the one-sided interval measures.
    Pair {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        assert_bounded: bool,
    },
    /// Harmonic-sum comparison of two positive real supports.
    Mr {
        #[arg(long)]
        z: String,
        #[arg(long)]
        w: String,
        #[arg(long)]
        assert_bounded: bool,
    },
    /// Reciprocal-distance sums against a linear budget; reports the
    /// smallest admissible constant.
    Eps {
        #[arg(long)]
        z: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        assert_bounded: bool,
    },
    /// Left-versus-right comparison of a mass distribution.
    MuRh {
        #[arg(long)]
        nu: String,
        /// Swap the roles of the half-planes.
        #[arg(long)]
        mirrored: bool,
        #[arg(long)]
        assert_bounded: bool,
    },
    /// Integer matching bound for a near-axis zero set.
    Redheffer {
        #[arg(long)]
        z: String,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        assert_bounded: bool,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Balancing mass on the positive reals for a signed charge.
    Alpha {
        #[arg(long)]
        nu: String,
    },
    /// Half-plane uniformization of `nu` against `mu`.
    Uniformize {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        mu: Option<String>,
        /// Cone parameter: supports must satisfy `Re z > a |z|`.
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        /// Safety factor scaling the density supremum into `c`.
        #[arg(long, default_value_t = 2.0)]
        factor: f64,
    },
    /// Strip uniformization on both boundary lines.
    UniformizeStrip {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        /// Strip half-width.
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 2.0)]
        factor: f64,
    },
    /// Completion on the negative real axis.
    CompleteR {
        #[arg(long)]
        nu: String,
    },
    /// Completion on the imaginary axis.
    CompleteIr {
        #[arg(long)]
        nu: String,
    },
    /// Full completion: negative reals, then the imaginary axis.
    Complete {
        #[arg(long)]
        nu: String,
    },
}

#[derive(Serialize)]
struct EllOutput {
    side: &'static str,
    r: f64,
    big_r: f64,
    value: f64,
}

#[derive(Serialize)]
struct EpsOutput {
    /// Smallest constant making the budget inequality hold on the grid.
    c_needed: f64,
    #[serde(flatten)]
    report: CriterionReport,
}

#[derive(Serialize)]
struct RedhefferOutput {
    c: f64,
    value: f64,
    verdict: Verdict,
}

#[derive(Serialize)]
struct MeanOutput {
    op: &'static str,
    value: f64,
}

#[derive(Serialize)]
struct QeOutput {
    r: f64,
    measure_within: f64,
    q: f64,
}

/// Parses the process arguments, runs one operation, and returns the
/// exit code. Argument errors are reported by clap itself with code 2.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => 0,
        Err(Failure::AssertTripped) => 1,
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            3
        }
    }
}

fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Ell { nu, r, big_r, side } => {
            if !(*r > 0.0 && big_r > r && big_r.is_finite()) {
                return Err(Failure::Parse(format!(
                    "need 0 < r < big-r < inf, got r={r}, big-r={big_r}"
                )));
            }
            let set = parse_distribution(nu)?;
            let (name, value) = match side {
                SideArg::Rh => ("rh", ell_right(&set, *r, *big_r)),
                SideArg::Lh => ("lh", ell_left(&set, *r, *big_r)),
                SideArg::Sub => ("sub", ell_sub(&set, *r, *big_r)?),
            };
            emit_json(
                cli,
                &EllOutput {
                    side: name,
                    r: *r,
                    big_r: *big_r,
                    value,
                },
            )
        }
        Command::Lindelof { nu, kind, r_max } => {
            let set = parse_distribution(nu)?;
            let kind = match kind {
                KindArg::R => LindelofKind::RAxis,
                KindArg::IR => LindelofKind::IRAxis,
                KindArg::Full => LindelofKind::Full,
            };
            let r_max = r_max.unwrap_or(cli.trunc);
            if !(r_max > 1.0 && r_max.is_finite()) {
                return Err(Failure::Parse(format!("need 1 < r-max < inf, got {r_max}")));
            }
            emit_json(cli, &lindelof_report(&set, kind, r_max))
        }
        Command::Sweep { nu, genus, r0, b } => {
            let set = parse_distribution(nu)?;
            let swept: BoundaryCharge = match genus {
                GenusArg::G0 => sweep0(&set)?,
                GenusArg::G1 => sweep1(&set)?,
                GenusArg::G01 => {
                    if !(*r0 > 0.0) {
                        return Err(Failure::Parse(format!("need r0 > 0, got {r0}")));
                    }
                    sweep01(&set, *r0)?
                }
                GenusArg::Strip => {
                    if !(*b >= 0.0 && *r0 >= 0.0) {
                        return Err(Failure::Parse(format!(
                            "need b >= 0 and r0 >= 0, got b={b}, r0={r0}"
                        )));
                    }
                    sweep_strip(&set, *b, *r0)?
                }
            };
            emit_json(cli, &swept)
        }
        Command::Criterion { which } => run_criterion(cli, which),
        Command::Construct { which } => run_construct(cli, which),
        Command::Content {
            input,
            points,
            intervals,
            d,
            radius,
            t_radius,
        } => {
            if !(*d > 0.0 && d.is_finite()) {
                return Err(Failure::Parse(format!("need d > 0, got {d}")));
            }
            let cover = parse_cover(input, points, intervals)?;
            let profile = parse_radius(radius)?;
            match t_radius {
                Some(t_spec) => {
                    let t_profile = parse_radius(t_spec)?;
                    emit_json(cli, &content_chain_check(&cover, *d, &profile, &t_profile)?)
                }
                None => emit_json(cli, &hausdorff_content(&cover, *d, &profile)),
            }
        }
        Command::Qe { intervals, input, r } => {
            if !(*r > 0.0 && r.is_finite()) {
                return Err(Failure::Parse(format!("need r > 0, got {r}")));
            }
            let set = match (intervals, input) {
                (Some(inline), None) => parse_intervals(inline)?,
                (None, Some(path)) => from_json_file(path)?,
                _ => {
                    return Err(Failure::Parse(
                        "pass exactly one of --intervals or --input".into(),
                    ))
                }
            };
            emit_json(
                cli,
                &QeOutput {
                    r: *r,
                    measure_within: set.measure_within(0.0, *r),
                    q: q_of_e(&set, *r),
                },
            )
        }
        Command::Means {
            u,
            op,
            z,
            r,
            big_r,
            r_max,
        } => {
            let u = parse_growth(u)?;
            let center = parse_cpoint(z)?;
            if !(*r >= 0.0 && r.is_finite()) {
                return Err(Failure::Parse(format!("need r >= 0, got {r}")));
            }
            let (name, value) = match op {
                MeanOp::Circle => ("circle", circle_mean(&u, center, *r, cli.quad_tol)?),
                MeanOp::Disk => ("disk", disk_mean(&u, center, *r, cli.quad_tol)?),
                MeanOp::RadialMax => ("radial_max", radial_max(&u, *r)),
                MeanOp::Type => {
                    let rm = r_max.unwrap_or(cli.trunc);
                    if !(rm >= 16.0 && rm.is_finite()) {
                        return Err(Failure::Parse(format!("need r-max >= 16, got {rm}")));
                    }
                    ("type", type_estimate(&u, rm))
                }
                MeanOp::J => {
                    let big_r = big_r.ok_or_else(|| {
                        Failure::Parse("the axis integral needs --big-r".into())
                    })?;
                    if !(*r > 0.0 && big_r > *r && big_r.is_finite()) {
                        return Err(Failure::Parse(format!(
                            "need 0 < r < big-r < inf, got r={r}, big-r={big_r}"
                        )));
                    }
                    ("j", j_axis(&u, *r, big_r, cli.quad_tol)?)
                }
            };
            emit_json(cli, &MeanOutput { op: name, value })
        }
        Command::Scan {
            lhs,
            rhs,
            rhs_pow,
            domain,
            exceptional,
        } => {
            let lhs = parse_growth(lhs)?;
            let g = parse_growth(rhs)?;
            let rhs = match rhs_pow {
                Some(p) => RhsSpec::CircleMeanPow { g, p: *p },
                None => RhsSpec::Direct { g },
            };
            let domain = parse_domain(domain)?;
            let e = match exceptional {
                Some(inline) => parse_intervals(inline)?,
                None => IntervalSet::empty(),
            };
            emit_json(cli, &inequality_scan(&lhs, &rhs, &domain, &e, cli.quad_tol)?)
        }
    }
}

fn run_criterion(cli: &Cli, which: &CriterionCmd) -> CliResult<()> {
    let (report, c_needed, assert_bounded) = match which {
        CriterionCmd::Dyadic {
            nu,
            comparison,
            assert_bounded,
        } => {
            let set = parse_distribution(nu)?;
            let m = parse_growth(comparison)?;
            let report =
                dyadic_gap_report(&set, &m, cli.n_max, cli.slope_tol, cli.quad_tol)?;
            (report, None, *assert_bounded)
        }
        CriterionCmd::Pair {
            nu,
            mu,
            assert_bounded,
        } => {
            let nu = parse_distribution(nu)?;
            let mu = parse_distribution(mu)?;
            (
                pair_gap_report(&nu, &mu, cli.n_max, cli.slope_tol)?,
                None,
                *assert_bounded,
            )
        }
        CriterionCmd::Mr { z, w, assert_bounded } => {
            let z = parse_distribution(z)?;
            let w = parse_distribution(w)?;
            (
                mr_positive(&z, &w, cli.n_max, cli.slope_tol)?,
                None,
                *assert_bounded,
            )
        }
        CriterionCmd::Eps {
            z,
            eps,
            assert_bounded,
        } => {
            if !(*eps > 0.0 && eps.is_finite()) {
                return Err(Failure::Parse(format!("need eps > 0, got {eps}")));
            }
            let z = parse_distribution(z)?;
            let (c, report) = eps_condition(&z, *eps, cli.n_max, cli.slope_tol)?;
            (report, Some(c), *assert_bounded)
        }
        CriterionCmd::MuRh {
            nu,
            mirrored,
            assert_bounded,
        } => {
            let set = parse_distribution(nu)?;
            (
                mu_rh_check(&set, cli.n_max, cli.slope_tol, *mirrored)?,
                None,
                *assert_bounded,
            )
        }
        CriterionCmd::Redheffer {
            z,
            c,
            assert_bounded,
        } => {
            if !(*c > 0.0 && c.is_finite()) {
                return Err(Failure::Parse(format!("need c > 0, got {c}")));
            }
            let set = parse_distribution(z)?;
            let (value, verdict) = redheffer_bound(&set, *c, cli.n_max, cli.slope_tol)?;
            emit_json(
                cli,
                &RedhefferOutput {
                    c: *c,
                    value,
                    verdict,
                },
            )?;
            if *assert_bounded && verdict == Verdict::Unbounded {
                return Err(Failure::AssertTripped);
            }
            return Ok(());
        }
    };
    let verdict = report.verdict;
    match cli.format {
        Format::Json => match c_needed {
            Some(c) => emit_json(cli, &EpsOutput { c_needed: c, report })?,
            None => emit_json(cli, &report)?,
        },
        Format::Csv => emit(cli, &criterion_csv(&report))?,
    }
    if assert_bounded && verdict == Verdict::Unbounded {
        return Err(Failure::AssertTripped);
    }
    Ok(())
}

fn run_construct(cli: &Cli, which: &ConstructCmd) -> CliResult<()> {
    match which {
        ConstructCmd::Alpha { nu } => {
            let set = parse_distribution(nu)?;
            emit_json(cli, &alpha_balance(&set)?)
        }
        ConstructCmd::Uniformize { nu, mu, a, factor } => {
            check_cone_args(*a, *factor, None)?;
            let nu = parse_distribution(nu)?;
            let mu = parse_optional_distribution(mu)?;
            emit_json(cli, &uniformize_rh(&nu, &mu, *a, *factor)?)
        }
        ConstructCmd::UniformizeStrip {
            nu,
            mu,
            a,
            b,
            factor,
        } => {
            check_cone_args(*a, *factor, Some(*b))?;
            let nu = parse_distribution(nu)?;
            let mu = parse_optional_distribution(mu)?;
            emit_json(
                cli,
                &uniformize_strip(&nu, &mu, *a, *b, *factor, cli.n_max, cli.slope_tol)?,
            )
        }
        ConstructCmd::CompleteR { nu } => {
            let set = parse_distribution(nu)?;
            emit_json(cli, &complete_r(&set, cli.n_max, cli.slope_tol)?)
        }
        ConstructCmd::CompleteIr { nu } => {
            let set = parse_distribution(nu)?;
            emit_json(cli, &complete_ir(&set)?)
        }
        ConstructCmd::Complete { nu } => {
            let set = parse_distribution(nu)?;
            emit_json(cli, &complete_full(&set, cli.n_max, cli.slope_tol)?)
        }
    }
}

fn check_cone_args(a: f64, factor: f64, b: Option<f64>) -> CliResult<()> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Failure::Parse(format!("need 0 < a < 1, got {a}")));
    }
    if !(factor >= 1.0 && factor.is_finite()) {
        return Err(Failure::Parse(format!("need factor >= 1, got {factor}")));
    }
    if let Some(b) = b {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Failure::Parse(format!("need b > 0, got {b}")));
        }
    }
    Ok(())
}

/// One row per grid cell, in grid order.
fn criterion_csv(report: &CriterionReport) -> String {
    let mut text = String::from("n,N,ell_nu,comparison,gap\n");
    for (k, &(n, nn)) in report.grid.iter().enumerate() {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            n, nn, report.lhs_values[k], report.rhs_values[k], report.gaps[k]
        ));
    }
    text
}

fn emit_json<T: Serialize>(cli: &Cli, value: &T) -> CliResult<()> {
    if cli.format == Format::Csv {
        return Err(Failure::Parse(
            "csv output is only available for criterion grid reports".into(),
        ));
    }
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Parse(format!("cannot serialize report: {e}")))?;
    text.push('\n');
    emit(cli, &text)
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn from_json_file<T: serde::de::DeserializeOwned>(path: &str) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{path}: {e}")))
}

/// A charge input: `gen:` fixture or a JSON file path.
fn parse_distribution(spec: &str) -> CliResult<ChargeDistribution> {
    let Some(rest) = spec.strip_prefix("gen:") else {
        return from_json_file(spec);
    };
    let parts: Vec<&str> = rest.split(':').collect();
    let bad = || Failure::Parse(format!("unknown generator '{spec}'"));
    match parts.as_slice() {
        ["integers", n] => {
            let n: u32 = n.parse().map_err(|_| bad())?;
            Ok(ChargeDistribution::from_atoms((1..=n).flat_map(|k| {
                [
                    Atom::new(k as f64, 0.0, 1.0),
                    Atom::new(-(k as f64), 0.0, 1.0),
                ]
            })))
        }
        ["ray", step, n] => {
            let step: f64 = step.parse().map_err(|_| bad())?;
            let n: u32 = n.parse().map_err(|_| bad())?;
            if !(step > 0.0 && step.is_finite()) {
                return Err(Failure::Parse(format!(
                    "ray step must be positive, got {step}"
                )));
            }
            Ok(ChargeDistribution::from_atoms(
                (1..=n).map(|k| Atom::new(k as f64 * step, 0.0, 1.0)),
            ))
        }
        ["lattice-i", n] => {
            let n: u32 = n.parse().map_err(|_| bad())?;
            Ok(ChargeDistribution::from_atoms((1..=n).flat_map(|k| {
                [
                    Atom::new(0.0, k as f64, 1.0),
                    Atom::new(0.0, -(k as f64), 1.0),
                ]
            })))
        }
        _ => Err(bad()),
    }
}

fn parse_optional_distribution(spec: &Option<String>) -> CliResult<ChargeDistribution> {
    match spec {
        Some(s) => parse_distribution(s),
        None => Ok(ChargeDistribution::empty()),
    }
}

/// A growth function: shorthand name or a JSON file path.
fn parse_growth(spec: &str) -> CliResult<GrowthFunction> {
    match spec {
        "sinpi" => return Ok(GrowthFunction::LogAbsSinPi),
        "absre" => return Ok(GrowthFunction::AbsRe),
        "zero" => return Ok(GrowthFunction::Zero),
        _ => {}
    }
    if let Some(a) = spec.strip_prefix("linear:") {
        let a: f64 = a
            .parse()
            .map_err(|_| Failure::Parse(format!("bad linear coefficient in '{spec}'")))?;
        return Ok(GrowthFunction::LinearAbs { a });
    }
    let u: GrowthFunction = from_json_file(spec)?;
    u.validate()?;
    Ok(u)
}

/// A radius profile: "const:R" or "power:C:BIGR:P".
fn parse_radius(spec: &str) -> CliResult<RadiusProfile> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Failure::Parse(format!("unknown radius profile '{spec}'"));
    let profile = match parts.as_slice() {
        ["const", r] => RadiusProfile::Constant {
            r: r.parse().map_err(|_| bad())?,
        },
        ["power", c, big_r, p] => RadiusProfile::PowerFloor {
            c: c.parse().map_err(|_| bad())?,
            big_r: big_r.parse().map_err(|_| bad())?,
            p: p.parse().map_err(|_| bad())?,
        },
        _ => return Err(bad()),
    };
    profile.validate()?;
    Ok(profile)
}

/// Inline intervals "a,b;c,d;..."; the empty string is the empty set.
fn parse_intervals(inline: &str) -> CliResult<IntervalSet> {
    let mut pairs = Vec::new();
    for piece in inline.split(';').filter(|p| !p.trim().is_empty()) {
        let (a, b) = parse_pair(piece)?;
        pairs.push((a, b));
    }
    Ok(IntervalSet::new(pairs))
}

fn parse_points(inline: &str) -> CliResult<Vec<CPoint>> {
    let mut points = Vec::new();
    for piece in inline.split(';').filter(|p| !p.trim().is_empty()) {
        let (x, y) = parse_pair(piece)?;
        points.push(CPoint::new(x, y));
    }
    Ok(points)
}

fn parse_pair(piece: &str) -> CliResult<(f64, f64)> {
    let mut it = piece.split(',');
    let err = || Failure::Parse(format!("expected 'a,b', got '{piece}'"));
    let a: f64 = it.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
    let b: f64 = it.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
    if it.next().is_some() {
        return Err(err());
    }
    Ok((a, b))
}

fn parse_cpoint(spec: &str) -> CliResult<CPoint> {
    let (x, y) = parse_pair(spec)?;
    Ok(CPoint::new(x, y))
}

fn parse_cover(
    input: &Option<String>,
    points: &Option<String>,
    intervals: &Option<String>,
) -> CliResult<CoverInput> {
    match (input, points, intervals) {
        (Some(path), None, None) => from_json_file(path),
        (None, Some(inline), None) => Ok(CoverInput::Points {
            points: parse_points(inline)?,
        }),
        (None, None, Some(inline)) => Ok(CoverInput::Intervals {
            set: parse_intervals(inline)?,
        }),
        _ => Err(Failure::Parse(
            "pass exactly one of --input, --points, or --intervals".into(),
        )),
    }
}

/// "axis:YMIN:YMAX:N", "strip-boundary:B:YMAX:N", or
/// "strip-grid:B:YMAX:NX:NY".
fn parse_domain(spec: &str) -> CliResult<ScanDomain> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Failure::Parse(format!("unknown scan domain '{spec}'"));
    match parts.as_slice() {
        ["axis", y_min, y_max, samples] => Ok(ScanDomain::AxisSegment {
            y_min: y_min.parse().map_err(|_| bad())?,
            y_max: y_max.parse().map_err(|_| bad())?,
            samples: samples.parse().map_err(|_| bad())?,
        }),
        ["strip-boundary", b, y_max, samples] => Ok(ScanDomain::StripBoundary {
            b: b.parse().map_err(|_| bad())?,
            y_max: y_max.parse().map_err(|_| bad())?,
            samples: samples.parse().map_err(|_| bad())?,
        }),
        ["strip-grid", b, y_max, nx, ny] => Ok(ScanDomain::StripGrid {
            b: b.parse().map_err(|_| bad())?,
            y_max: y_max.parse().map_err(|_| bad())?,
            nx: nx.parse().map_err(|_| bad())?,
            ny: ny.parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}
