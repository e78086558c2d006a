//! Planar charge distributions: finitely many signed atoms plus uniform
//! linear densities on vertical lines, together with the elementary
//! geometry used by every other module (restriction to regions, shifts,
//! reflections, radial counting functions).
//!
//! A distribution is a finite object. Infinite families such as the
//! integer lattice are materialized by truncation generators at the CLI
//! level; the truncation radius then travels with the report.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;

/// A point of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CPoint {
    pub re: f64,
    pub im: f64,
}

impl CPoint {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// |z|
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// |z|^2, exact products (no hypot rescaling).
    pub fn abs_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    /// Re(1/z). Not finite at the origin.
    pub fn re_recip(self) -> f64 {
        self.re / self.abs_sq()
    }

    /// Im(1/z). Not finite at the origin.
    pub fn im_recip(self) -> f64 {
        -self.im / self.abs_sq()
    }

    pub fn add(self, w: CPoint) -> Self {
        Self::new(self.re + w.re, self.im + w.im)
    }

    /// Mirror image across the imaginary axis: z -> -conj(z).
    pub fn mirror_ir(self) -> Self {
        Self::new(-self.re, self.im)
    }

    /// Quarter turn `z -> i z` (the image of an atom under the clockwise
    /// rotation of the distribution; see [`ChargeDistribution::rotate_cw`]).
    pub fn rotate_cw(self) -> Self {
        Self::new(-self.im, self.re)
    }

    pub fn dist(self, w: CPoint) -> f64 {
        (self.re - w.re).hypot(self.im - w.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl From<CPoint> for num_complex::Complex64 {
    fn from(p: CPoint) -> Self {
        num_complex::Complex64::new(p.re, p.im)
    }
}

/// A point mass. `mass` is signed and must be nonzero for a well-formed
/// distribution; positive integer masses model point (zero) distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(flatten)]
    pub position: CPoint,
    pub mass: f64,
}

impl Atom {
    pub const fn new(re: f64, im: f64, mass: f64) -> Self {
        Self {
            position: CPoint::new(re, im),
            mass,
        }
    }
}

/// A uniform linear density on the vertical line `Re z = x`: the measure
/// `coef` times arc length. `coef` is signed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineMass {
    pub x: f64,
    pub coef: f64,
}

impl LineMass {
    pub const fn new(x: f64, coef: f64) -> Self {
        Self { x, coef }
    }
}

/// A finite signed charge distribution: atoms plus vertical lines.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ChargeDistribution {
    pub atoms: Vec<Atom>,
    #[serde(default)]
    pub lines: Vec<LineMass>,
}

/// Relation of a whole vertical line to a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LineRelation {
    Inside,
    Outside,
    Crosses,
}

/// Subsets of the plane used for restriction: half-planes, vertical cones
/// around the imaginary axis, vertical strips, annuli, disks, and
/// complements. Atom membership is decided by exact `f64` comparisons.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// `Re z > 0` (or `>= 0` when closed).
    RightHalfPlane { closed: bool },
    /// `Re z < 0` (or `<= 0` when closed).
    LeftHalfPlane { closed: bool },
    /// Vertical cone around the imaginary axis: `|Re z| < a |z|`
    /// (closed: `<=`), with `a` in `[0, 1]`. The closed cone with `a = 0`
    /// is exactly the imaginary axis.
    Cone { a: f64, closed: bool },
    /// Vertical strip `|Re z| < b` (closed: `<=`), `b >= 0`.
    Strip { b: f64, closed: bool },
    /// Half-open annulus `r < |z| <= big_r` about the origin.
    Annulus { r: f64, big_r: f64 },
    /// Disk `|z| < r` about the origin (closed: `<=`).
    Disk { r: f64, closed: bool },
    /// Complement of another region.
    Complement(Box<Region>),
}

impl Region {
    pub fn right_half_plane() -> Self {
        Region::RightHalfPlane { closed: false }
    }
    pub fn left_half_plane() -> Self {
        Region::LeftHalfPlane { closed: false }
    }
    pub fn complement(self) -> Self {
        Region::Complement(Box::new(self))
    }

    /// Exact membership test for a point.
    pub fn contains(&self, z: CPoint) -> bool {
        match self {
            Region::RightHalfPlane { closed } => {
                if *closed {
                    z.re >= 0.0
                } else {
                    z.re > 0.0
                }
            }
            Region::LeftHalfPlane { closed } => {
                if *closed {
                    z.re <= 0.0
                } else {
                    z.re < 0.0
                }
            }
            Region::Cone { a, closed } => {
                // |Re z| vs a|z| compared through squares to avoid sqrt.
                let lhs = z.re * z.re;
                let rhs = a * a * z.abs_sq();
                if *closed {
                    lhs <= rhs
                } else {
                    lhs < rhs
                }
            }
            Region::Strip { b, closed } => {
                if *closed {
                    z.re.abs() <= *b
                } else {
                    z.re.abs() < *b
                }
            }
            Region::Annulus { r, big_r } => {
                let a2 = z.abs_sq();
                a2 > r * r && a2 <= big_r * big_r
            }
            Region::Disk { r, closed } => {
                let a2 = z.abs_sq();
                if *closed {
                    a2 <= r * r
                } else {
                    a2 < r * r
                }
            }
            Region::Complement(inner) => !inner.contains(z),
        }
    }

    fn line_relation(&self, x: f64) -> LineRelation {
        match self {
            Region::RightHalfPlane { closed } => {
                let inside = if *closed { x >= 0.0 } else { x > 0.0 };
                if inside {
                    LineRelation::Inside
                } else {
                    LineRelation::Outside
                }
            }
            Region::LeftHalfPlane { closed } => {
                let inside = if *closed { x <= 0.0 } else { x < 0.0 };
                if inside {
                    LineRelation::Inside
                } else {
                    LineRelation::Outside
                }
            }
            Region::Cone { a, closed } => {
                if x == 0.0 {
                    // The axis itself: inside every closed cone; the open
                    // cone misses the origin, and for a = 0 is empty.
                    if *closed {
                        LineRelation::Inside
                    } else if *a > 0.0 {
                        LineRelation::Crosses
                    } else {
                        LineRelation::Outside
                    }
                } else if *a >= 1.0 && *closed {
                    LineRelation::Inside
                } else if *a == 0.0 {
                    LineRelation::Outside
                } else {
                    // Off-axis lines leave the cone near Im z = 0 and enter
                    // it for large |Im z|.
                    LineRelation::Crosses
                }
            }
            Region::Strip { b, closed } => {
                let inside = if *closed { x.abs() <= *b } else { x.abs() < *b };
                if inside {
                    LineRelation::Inside
                } else {
                    LineRelation::Outside
                }
            }
            Region::Annulus { r: _, big_r } => {
                if x.abs() > *big_r {
                    LineRelation::Outside
                } else {
                    LineRelation::Crosses
                }
            }
            Region::Disk { r, closed } => {
                let meets = if *closed { x.abs() <= *r } else { x.abs() < *r };
                if meets {
                    LineRelation::Crosses
                } else {
                    LineRelation::Outside
                }
            }
            Region::Complement(inner) => match inner.line_relation(x) {
                LineRelation::Inside => LineRelation::Outside,
                LineRelation::Outside => LineRelation::Inside,
                LineRelation::Crosses => LineRelation::Crosses,
            },
        }
    }
}

impl ChargeDistribution {
    pub fn new(atoms: Vec<Atom>, lines: Vec<LineMass>) -> Self {
        Self { atoms, lines }
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        Self {
            atoms: atoms.into_iter().collect(),
            lines: Vec::new(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.lines.is_empty()
    }

    /// True when every atom mass and line coefficient is nonnegative.
    pub fn is_mass_distribution(&self) -> bool {
        self.atoms.iter().all(|a| a.mass >= 0.0) && self.lines.iter().all(|l| l.coef >= 0.0)
    }

    /// Checks the structural invariants: finite coordinates, finite nonzero
    /// masses, finite line coefficients.
    pub fn validate(&self) -> Result<()> {
        for a in &self.atoms {
            if !a.position.is_finite() || !a.mass.is_finite() || a.mass == 0.0 {
                return Err(Error::SupportViolation {
                    detail: format!(
                        "malformed atom at ({}, {}) with mass {}",
                        a.position.re, a.position.im, a.mass
                    ),
                });
            }
        }
        for l in &self.lines {
            if !l.x.is_finite() || !l.coef.is_finite() {
                return Err(Error::SupportViolation {
                    detail: format!("malformed line x={} coef={}", l.x, l.coef),
                });
            }
        }
        Ok(())
    }

    /// Concatenation (the sum of charges).
    pub fn add(&self, other: &ChargeDistribution) -> ChargeDistribution {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        let mut lines = self.lines.clone();
        lines.extend_from_slice(&other.lines);
        ChargeDistribution { atoms, lines }
    }

    /// The opposite charge.
    pub fn negate(&self) -> ChargeDistribution {
        ChargeDistribution {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    position: a.position,
                    mass: -a.mass,
                })
                .collect(),
            lines: self
                .lines
                .iter()
                .map(|l| LineMass::new(l.x, -l.coef))
                .collect(),
        }
    }

    /// `self - other`.
    pub fn sub(&self, other: &ChargeDistribution) -> ChargeDistribution {
        self.add(&other.negate())
    }

    /// Restriction to a region. Atoms are kept iff their position lies in
    /// the region; a line is kept iff the whole line does.
    ///
    /// Errors with [`Error::PartialLineOverlap`] when a line crosses the
    /// region boundary: restrictions never clip lines silently.
    pub fn restrict(&self, region: &Region) -> Result<ChargeDistribution> {
        let mut lines = Vec::new();
        for l in &self.lines {
            match region.line_relation(l.x) {
                LineRelation::Inside => lines.push(*l),
                LineRelation::Outside => {}
                LineRelation::Crosses => return Err(Error::PartialLineOverlap { x: l.x }),
            }
        }
        Ok(ChargeDistribution {
            atoms: self
                .atoms
                .iter()
                .copied()
                .filter(|a| region.contains(a.position))
                .collect(),
            lines,
        })
    }

    /// Translation by `w`. Vertical lines stay vertical; only their
    /// abscissa moves, by `Re w`.
    pub fn shift(&self, w: CPoint) -> ChargeDistribution {
        ChargeDistribution {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    position: a.position.add(w),
                    mass: a.mass,
                })
                .collect(),
            lines: self
                .lines
                .iter()
                .map(|l| LineMass::new(l.x + w.re, l.coef))
                .collect(),
        }
    }

    /// Mirror image across the imaginary axis (atom `z -> -conj z`, line
    /// `x -> -x`). An involution.
    pub fn mirror_ir(&self) -> ChargeDistribution {
        ChargeDistribution {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    position: a.position.mirror_ir(),
                    mass: a.mass,
                })
                .collect(),
            lines: self
                .lines
                .iter()
                .map(|l| LineMass::new(-l.x, l.coef))
                .collect(),
        }
    }

    /// Clockwise quarter rotation of the distribution: the rotated
    /// distribution assigns to a set `S` the original charge of `-iS`,
    /// which moves an atom at `z` to `i z`.
    ///
    /// Errors with [`Error::LinePresent`]: vertical lines would become
    /// horizontal, which the representation cannot hold.
    pub fn rotate_cw(&self) -> Result<ChargeDistribution> {
        if !self.lines.is_empty() {
            return Err(Error::LinePresent);
        }
        Ok(ChargeDistribution::from_atoms(self.atoms.iter().map(|a| {
            Atom {
                position: a.position.rotate_cw(),
                mass: a.mass,
            }
        })))
    }

    /// Radial counting function: the charge of the closed disk of radius
    /// `r` about `center`. A line contributes `coef` x chord length.
    pub fn radial_counting(&self, center: CPoint, r: f64) -> f64 {
        assert!(r >= 0.0, "radial_counting needs r >= 0");
        let mut acc = NeumaierSum::new();
        for a in &self.atoms {
            if a.position.dist(center) <= r {
                acc.add(a.mass);
            }
        }
        for l in &self.lines {
            let dx = l.x - center.re;
            let rem = r * r - dx * dx;
            if rem >= 0.0 {
                acc.add(l.coef * 2.0 * rem.sqrt());
            }
        }
        acc.value()
    }

    /// Radial counting function of the total variation |charge|.
    pub fn radial_counting_abs(&self, center: CPoint, r: f64) -> f64 {
        self.abs_charge().radial_counting(center, r)
    }

    /// The distribution with every mass replaced by its absolute value.
    pub fn abs_charge(&self) -> ChargeDistribution {
        ChargeDistribution {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    position: a.position,
                    mass: a.mass.abs(),
                })
                .collect(),
            lines: self
                .lines
                .iter()
                .map(|l| LineMass::new(l.x, l.coef.abs()))
                .collect(),
        }
    }

    /// Total variation over the whole plane. Infinite as soon as a line
    /// with nonzero coefficient is present.
    pub fn total_variation(&self) -> f64 {
        if self.lines.iter().any(|l| l.coef != 0.0) {
            return f64::INFINITY;
        }
        let mut acc = NeumaierSum::new();
        for a in &self.atoms {
            acc.add(a.mass.abs());
        }
        acc.value()
    }

    /// Truncated estimator of the upper density at order `p`: the maximum
    /// of `|charge|(closed disk of radius r) / r^p` over dyadic radii
    /// `r = 2^k <= r_max`.
    pub fn upper_density(&self, p: f64, r_max: f64) -> f64 {
        assert!(p >= 0.0, "upper_density needs p >= 0");
        assert!(r_max > 1.0, "upper_density needs r_max > 1");
        let origin = CPoint::new(0.0, 0.0);
        let abs = self.abs_charge();
        let mut best = 0.0_f64;
        let mut r = 1.0_f64;
        while r <= r_max {
            let ratio = abs.radial_counting(origin, r) / r.powf(p);
            best = best.max(ratio);
            r *= 2.0;
        }
        best
    }

    /// Largest atom modulus (0 for an empty atom list). Lines are ignored.
    pub fn max_atom_abs(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.position.abs())
            .fold(0.0, f64::max)
    }

    /// True when some atom sits exactly at the origin.
    pub fn has_origin_atom(&self) -> bool {
        self.atoms
            .iter()
            .any(|a| a.position.re == 0.0 && a.position.im == 0.0)
    }
}
