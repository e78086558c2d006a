//! Frozen reference values computed by independent means (closed forms,
//! partial-fraction identities, high-precision summation) pinned against
//! the library. A drift here means the numerics changed, not the test.

use potbal::balayage::{boundary_cdf, sweep0, sweep1};
use potbal::charge::{Atom, CPoint, ChargeDistribution};
use potbal::criteria::{axis_gap, gauge_budget, GapSide, GrowthGauge};
use potbal::logmeasure::ell_sub;
use potbal::smallsets::{hausdorff_content, q_of_e, CoverInput, IntervalSet};
use potbal::subfun::{circle_mean, disk_mean, j_axis, type_estimate, GrowthFunction, RadiusProfile};

fn integers(n: u32) -> ChargeDistribution {
    ChargeDistribution::from_atoms((1..=n).flat_map(|k| {
        [
            Atom::new(k as f64, 0.0, 1.0),
            Atom::new(-(k as f64), 0.0, 1.0),
        ]
    }))
}

/// Harmonic partial sums: the interval measure of the unit-mass integer
/// set over `(1, N]` is `H_N - 1` on each side.
#[test]
fn interval_measure_matches_harmonic_numbers() {
    let h1024 = 6.509_175_672_278_133_5_f64;
    let v = ell_sub(&integers(1024), 1.0, 1024.0).unwrap();
    assert!((v - h1024).abs() < 1e-12, "got {v}");

    let h16384 = 9.281_306_710_008_451_f64;
    let v = ell_sub(&integers(16384), 1.0, 16384.0).unwrap();
    assert!((v - h16384).abs() < 1e-12, "got {v}");
}

/// The axis integral of `ln |sin(pi z)|` over dyadic annuli, frozen from
/// converged adaptive quadrature cross-checked at two tolerances.
#[test]
fn axis_integral_of_sinpi_reference_values() {
    let u = GrowthFunction::LogAbsSinPi;
    let j1024 = j_axis(&u, 1.0, 1024.0, 1e-10).unwrap();
    assert!((j1024 - 6.710_978_047_127_744).abs() < 1e-6, "got {j1024}");
    let j16384 = j_axis(&u, 1.0, 16384.0, 1e-10).unwrap();
    assert!((j16384 - 9.483_364_771_442_579).abs() < 1e-6, "got {j16384}");
}

/// The sup over the dyadic grid of |axis integral - interval measure|
/// for the model pair, frozen once and used by the gap criterion.
#[test]
fn sinpi_gap_supremum_frozen() {
    let sup = axis_gap(
        &GrowthFunction::LogAbsSinPi,
        &integers(16384),
        14,
        GapSide::Sub,
        1e-9,
    )
    .unwrap();
    assert!((sup - 0.202_058_061_4).abs() < 1e-4, "got {sup}");
}

/// Harmonic measure of the right half-plane: the swept point mass at 1
/// gives `F(y) = atan(y)/pi + 1/2`, so `F(1) - F(0) = 1/8` of the full
/// circle, i.e. `atan(1)/pi = 1/4` of the mass between 0 and 1.
#[test]
fn swept_point_mass_distribution_function() {
    let one = ChargeDistribution::from_atoms([Atom::new(1.0, 0.0, 1.0)]);
    let bc = sweep0(&one).unwrap();
    let f1 = boundary_cdf(&bc, 0.0, 1.0).unwrap();
    assert!((f1 - 0.25).abs() < 1e-15, "got {f1}");
    // Symmetric tail capture at T = 1e6: the missing mass is
    // 1 - (2/pi) atan(1e6) = (2/pi) atan(1e-6).
    let t = 1e6;
    let captured = boundary_cdf(&bc, 0.0, t).unwrap() - boundary_cdf(&bc, 0.0, -t).unwrap();
    let missing = 6.366_197_723_673_692e-7;
    assert!(((1.0 - captured) - missing).abs() < 1e-12, "got {captured}");
}

/// Genus-1 sweeping subtracts the uniform density `Re(1/z)/pi`; at the
/// swept point mass at 1 the distribution function over `[0, 1]` is
/// `1/4 - 1/pi`
#[test]
fn genus1_point_mass_distribution_function() {
    let one = ChargeDistribution::from_atoms([Atom::new(1.0, 0.0, 1.0)]);
    let bc = sweep1(&one).unwrap();
    let f1 = boundary_cdf(&bc, 0.0, 1.0).unwrap();
    assert!((f1 - (0.25 - 1.0 / std::f64::consts::PI)).abs() < 1e-15, "got {f1}");
    let f2 = boundary_cdf(&bc, 0.0, 2.0).unwrap();
    let expected = f64::atan(2.0) / std::f64::consts::PI - 2.0 / std::f64::consts::PI;
    assert!((f2 - expected).abs() < 1e-15, "got {f2}");
}

/// Gauge budgets against closed-form integrals.
#[test]
fn gauge_budget_closed_forms() {
    // q(t) = sqrt(t): integral of 2 sqrt(t)/t^2 from 1 to 1000 is
    // 4 (1 - 1/sqrt(1000)); with the tail it completes to exactly 4.
    let b = gauge_budget(
        &GrowthGauge::Power { p: 0.5 },
        &GrowthGauge::Zero,
        &IntervalSet::empty(),
        1000.0,
        1e-10,
    )
    .unwrap();
    assert!((b.truncated_value - 3.873_508_893_593_265).abs() < 1e-9, "got {}", b.truncated_value);
    assert!((b.truncated_value + b.tail_estimate - 4.0).abs() < 1e-9);
    assert!(b.convergent);

    // E = [0, 1]: q_E(t) = ln(e t) for t >= 1, and
    // integral of ln(e t)/t^2 from 1 to 100 = 2 - (2 + ln 100)/100.
    let b = gauge_budget(
        &GrowthGauge::Zero,
        &GrowthGauge::Zero,
        &IntervalSet::new([(0.0, 1.0)]),
        100.0,
        1e-10,
    )
    .unwrap();
    assert!((b.truncated_value - 1.933_948_298_140_119).abs() < 1e-9, "got {}", b.truncated_value);
    assert!((b.truncated_value + b.tail_estimate - 2.0).abs() < 1e-9);
}

/// Circle and disk means against textbook values: the mean of
/// `ln |sin(pi z)|` on the circle of radius 1/2 about 0 is `ln(pi/2)`
/// (Jensen with a single zero inside), and the area mean of `ln |1 - z|`
/// over the unit disk at 1 is -1/2.
#[test]
fn mean_value_closed_forms() {
    let sinpi = GrowthFunction::LogAbsSinPi;
    let m = circle_mean(&sinpi, CPoint::new(0.0, 0.0), 0.5, 1e-10).unwrap();
    let expected = (std::f64::consts::PI / 2.0).ln();
    assert!((m - expected).abs() < 1e-9, "got {m}");

    let one_zero = GrowthFunction::CanonicalProduct {
        zeros: vec![CPoint::new(1.0, 0.0)],
        genus: 0,
        trunc: 10.0,
    };
    let m = disk_mean(&one_zero, CPoint::new(1.0, 0.0), 1.0, 1e-10).unwrap();
    assert!((m + 0.5).abs() < 1e-8, "got {m}");
}

/// Growth types of the model functions.
#[test]
fn type_estimates_of_model_functions() {
    let t_sin = type_estimate(&GrowthFunction::LogAbsSinPi, 1024.0);
    assert!((t_sin - std::f64::consts::PI).abs() < 0.02 * std::f64::consts::PI, "got {t_sin}");
    let t_re = type_estimate(&GrowthFunction::AbsRe, 1024.0);
    assert!((t_re - 1.0).abs() < 0.01, "got {t_re}");
}

/// The logarithmic size gauge in its two exact regimes.
#[test]
fn size_gauge_closed_forms() {
    let e = IntervalSet::new([(0.0, 1.0)]);
    let q = q_of_e(&e, std::f64::consts::E);
    assert!((q - 2.0).abs() < 1e-15, "got {q}");
    // Full interval: the bound q <= r is attained.
    let full = IntervalSet::new([(0.0, 7.5)]);
    assert_eq!(q_of_e(&full, 7.5), 7.5);
}

/// Greedy covers on the two pinned instances: two unit disks for the
/// separated pair, one disk of radius 1/2 for the unit interval.
#[test]
fn content_cover_oracles() {
    let pair = CoverInput::Points {
        points: vec![CPoint::new(0.0, 0.0), CPoint::new(3.0, 0.0)],
    };
    let unit = RadiusProfile::Constant { r: 1.0 };
    let est = hausdorff_content(&pair, 1.0, &unit);
    assert!((est.upper - 4.0).abs() < 1e-12, "got {}", est.upper);

    let seg = CoverInput::Intervals {
        set: IntervalSet::new([(0.0, 1.0)]),
    };
    let est = hausdorff_content(&seg, 1.0, &unit);
    assert!((est.upper - 1.0).abs() < 1e-9, "got {}", est.upper);
    assert!(est.lower_exact);
    assert!((est.lower - 1.0).abs() < 1e-15);
}

/// The real-axis completion of the positive integers is the mirrored
/// set with unit masses.
#[test]
fn completion_mirrors_integers() {
    let mu = ChargeDistribution::from_atoms((1..=64).map(|n| Atom::new(n as f64, 0.0, 1.0)));
    let gamma = potbal::construct::complete_r(&mu, 6, 0.05).unwrap();
    assert_eq!(gamma.atoms.len(), 64);
    for atom in &gamma.atoms {
        assert_eq!(atom.position.im, 0.0);
        assert!(atom.position.re <= -1.0 && atom.position.re >= -64.0);
        assert!((atom.mass - 1.0).abs() < 1e-12);
    }
}
