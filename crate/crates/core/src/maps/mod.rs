//! Lifts to the plane of torus homeomorphisms isotopic to the identity.
//!
//! A [`TorusLift`] is an immutable combinator tree over a handful of
//! primitives. Every node commutes with integer translations, so the tree
//! also describes a map of the torus `R²/Z²`.

mod spec;

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use spec::{builtin_names, MapSpec};

/// A point or displacement in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct PlanarVec {
    pub x: f64,
    pub y: f64,
}

impl PlanarVec {
    pub const ZERO: PlanarVec = PlanarVec { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3d cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Total lexicographic order on (x, y).
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

impl From<[f64; 2]> for PlanarVec {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<PlanarVec> for [f64; 2] {
    fn from(v: PlanarVec) -> Self {
        [v.x, v.y]
    }
}

impl From<LatticeVec> for PlanarVec {
    fn from(v: LatticeVec) -> Self {
        Self::new(v.x as f64, v.y as f64)
    }
}

impl Add for PlanarVec {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for PlanarVec {
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for PlanarVec {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlanarVec {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<f64> for PlanarVec {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl fmt::Display for PlanarVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An integer vector, i.e. an element of the deck group `Z²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticeVec {
    pub x: i64,
    pub y: i64,
}

impl LatticeVec {
    pub const ZERO: LatticeVec = LatticeVec { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

impl From<[i64; 2]> for LatticeVec {
    fn from([x, y]: [i64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<LatticeVec> for [i64; 2] {
    fn from(v: LatticeVec) -> Self {
        [v.x, v.y]
    }
}

impl Add for LatticeVec {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticeVec {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A lifted point kept as an integer cell plus a fractional part in `[0,1)²`.
///
/// Orbits are advanced in this form so coordinates never grow with the
/// orbit length and integer translations stay exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedPoint {
    pub cell: LatticeVec,
    pub frac: PlanarVec,
}

impl LiftedPoint {
    pub fn from_planar(p: PlanarVec) -> Self {
        let (cell, frac) = split(p);
        Self { cell, frac }
    }

    pub fn to_planar(self) -> PlanarVec {
        PlanarVec::from(self.cell) + self.frac
    }

    /// `self - origin` as a planar displacement.
    pub fn displacement_from(self, origin: LiftedPoint) -> PlanarVec {
        PlanarVec::from(self.cell - origin.cell) + (self.frac - origin.frac)
    }

    fn shifted(self, v: LatticeVec) -> Self {
        Self {
            cell: self.cell + v,
            frac: self.frac,
        }
    }

    fn renormalized(self, image: PlanarVec) -> Self {
        let (cell, frac) = split(image);
        Self {
            cell: self.cell + cell,
            frac,
        }
    }
}

fn frac_coord(t: f64) -> f64 {
    let f = t - t.floor();
    // t slightly below an integer can round up to exactly 1.0
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Largest cell index magnitude kept exactly; beyond it the split reports NaN.
const MAX_CELL: f64 = 4.0e18;

fn split_coord(t: f64) -> (i64, f64) {
    let fl = t.floor();
    if fl.is_nan() || fl.abs() >= MAX_CELL {
        return (0, f64::NAN);
    }
    let f = t - fl;
    if f >= 1.0 {
        (fl as i64 + 1, 0.0)
    } else {
        (fl as i64, f)
    }
}

fn split(p: PlanarVec) -> (LatticeVec, PlanarVec) {
    let (kx, fx) = split_coord(p.x);
    let (ky, fy) = split_coord(p.y);
    (LatticeVec::new(kx, ky), PlanarVec::new(fx, fy))
}

/// The natural projection `R² → T²`, with values in `[0,1)²`.
pub fn project_to_torus(p: PlanarVec) -> PlanarVec {
    PlanarVec::new(frac_coord(p.x), frac_coord(p.y))
}

fn wrap_centered(t: f64) -> f64 {
    t - (t + 0.5).floor()
}

/// Flat distance on `R²/Z²` between the projections of `a` and `b`.
pub fn torus_distance(a: PlanarVec, b: PlanarVec) -> f64 {
    let dx = (a.x - b.x).abs().fract();
    let dy = (a.y - b.y).abs().fract();
    dx.min(1.0 - dx).hypot(dy.min(1.0 - dy))
}

fn tent_profile(t: f64) -> f64 {
    let f = t - t.floor();
    if f <= 0.5 {
        2.0 * f
    } else {
        2.0 - 2.0 * f
    }
}

/// Continuous 1-periodic tent displacement with `tent(0) = 0` and `tent(1/2) = 1`.
pub fn tent(t: f64) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::domain(format!("tent argument {t} is not finite")));
    }
    Ok(tent_profile(t))
}

/// Orientation of a localized twist's elongated support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Ratio of the minor to the major semi-axis of a localized twist's support.
pub const TWIST_ASPECT: f64 = 0.5;

/// A twist supported in a disk around `center`.
///
/// Points move along the ellipses `(dx/a)² + (dy/b)² = ρ²` (semi-axes `a`
/// = `radius` along `axis`, `b` = `radius·TWIST_ASPECT` across it) by the
/// elliptic angle `amplitude·(1 − ρ²)²`. Each level ellipse is invariant, so
/// the map is an area-preserving homeomorphism, the identity outside the
/// disk, and its inverse is the same twist with the amplitude negated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizedShear {
    pub center: PlanarVec,
    pub radius: f64,
    pub amplitude: f64,
    pub axis: Axis,
}

impl LocalizedShear {
    pub fn new(center: PlanarVec, radius: f64, amplitude: f64, axis: Axis) -> Result<Self> {
        let shear = Self {
            center,
            radius,
            amplitude,
            axis,
        };
        shear.validate()?;
        Ok(shear)
    }

    fn validate(&self) -> Result<()> {
        let c = self.center;
        if !(c.is_finite() && (0.0..1.0).contains(&c.x) && (0.0..1.0).contains(&c.y)) {
            return Err(Error::domain(format!("shear center {c} must lie in [0,1)²")));
        }
        if !(self.radius > 0.0 && self.radius < 0.5) {
            return Err(Error::domain(format!(
                "shear radius {} must lie in (0, 1/2)",
                self.radius
            )));
        }
        if !self.amplitude.is_finite() {
            return Err(Error::domain("shear amplitude must be finite"));
        }
        Ok(())
    }

    fn semi_axes(&self) -> (f64, f64) {
        match self.axis {
            Axis::Horizontal => (self.radius, self.radius * TWIST_ASPECT),
            Axis::Vertical => (self.radius * TWIST_ASPECT, self.radius),
        }
    }

    /// Profile `(1 − s²)²` of the bump at normalized radius `s`.
    pub fn bump(s: f64) -> f64 {
        if s >= 1.0 {
            0.0
        } else {
            let t = 1.0 - s * s;
            t * t
        }
    }

    fn apply(&self, p: PlanarVec) -> PlanarVec {
        let (a, b) = self.semi_axes();
        let u = wrap_centered(p.x - self.center.x) / a;
        let v = wrap_centered(p.y - self.center.y) / b;
        let rho2 = u * u + v * v;
        if rho2 >= 1.0 {
            return p;
        }
        let t = 1.0 - rho2;
        let (s, c) = (self.amplitude * t * t).sin_cos();
        let du = c * u - s * v - u;
        let dv = s * u + c * v - v;
        PlanarVec::new(p.x + du * a, p.y + dv * b)
    }
}

/// A lift `F: R² → R²` with `F(p + v) = F(p) + v` for every `v ∈ Z²`.
///
/// `Composition` applies its members in list order, so `[h, g]` is `g ∘ h`.
#[derive(Debug, Clone, PartialEq)]
pub enum TorusLift {
    Identity,
    Translation(PlanarVec),
    /// `(x, y) ↦ (x, y + amplitude·tent(x))`
    VerticalTentShear { amplitude: f64 },
    /// `(x, y) ↦ (x + amplitude·tent(y), y)`
    HorizontalTentShear { amplitude: f64 },
    LocalizedShear(LocalizedShear),
    Composition(Vec<TorusLift>),
    Iterate { base: Box<TorusLift>, k: u32 },
    IntegerTranslate { base: Box<TorusLift>, v: LatticeVec },
}

/// Default twist amplitude of the horseshoe-in-disk map.
pub const HORSESHOE_AMPLITUDE: f64 = 6.0;
/// Default support radius of the horseshoe-in-disk map.
pub const HORSESHOE_RADIUS: f64 = 0.25;
/// Default irrational translation used by examples and the CLI.
pub const DEFAULT_ROTATION: PlanarVec = PlanarVec::new(0.41421356, 0.73205081);

impl TorusLift {
    pub fn translation(v: PlanarVec) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::domain("translation vector must be finite"));
        }
        Ok(TorusLift::Translation(v))
    }

    pub fn rotation(alpha: f64, beta: f64) -> Result<Self> {
        Self::translation(PlanarVec::new(alpha, beta))
    }

    /// The shear `h(x, y) = (x, y + tent(x))` followed by `g(x, y) = (x + tent(y), y)`.
    pub fn lm() -> Self {
        Self::lm_with_amplitude(1.0)
    }

    pub fn lm_with_amplitude(amplitude: f64) -> Self {
        TorusLift::Composition(vec![
            TorusLift::VerticalTentShear { amplitude },
            TorusLift::HorizontalTentShear { amplitude },
        ])
    }

    /// Two transverse localized twists sharing one support disk; the
    /// identity outside that disk.
    pub fn horseshoe_disk(center: PlanarVec, radius: f64, amplitude: f64) -> Result<Self> {
        Ok(TorusLift::Composition(vec![
            TorusLift::LocalizedShear(LocalizedShear::new(
                center,
                radius,
                amplitude,
                Axis::Vertical,
            )?),
            TorusLift::LocalizedShear(LocalizedShear::new(
                center,
                radius,
                amplitude,
                Axis::Horizontal,
            )?),
        ]))
    }

    pub fn default_horseshoe_disk() -> Self {
        Self::horseshoe_disk(
            PlanarVec::new(0.5, 0.5),
            HORSESHOE_RADIUS,
            HORSESHOE_AMPLITUDE,
        )
        .expect("default horseshoe parameters are valid")
    }

    pub fn iterate(base: TorusLift, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("iterate count must be positive"));
        }
        Ok(TorusLift::Iterate {
            base: Box::new(base),
            k,
        })
    }

    pub fn integer_translate(base: TorusLift, v: LatticeVec) -> Self {
        TorusLift::IntegerTranslate {
            base: Box::new(base),
            v,
        }
    }

    /// Checks the invariants of every node in the tree.
    pub fn validate(&self) -> Result<()> {
        match self {
            TorusLift::Identity => Ok(()),
            TorusLift::Translation(v) => {
                if v.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain("translation vector must be finite"))
                }
            }
            TorusLift::VerticalTentShear { amplitude }
            | TorusLift::HorizontalTentShear { amplitude } => {
                if amplitude.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain("tent shear amplitude must be finite"))
                }
            }
            TorusLift::LocalizedShear(s) => s.validate(),
            TorusLift::Composition(maps) => maps.iter().try_for_each(TorusLift::validate),
            TorusLift::Iterate { base, k } => {
                if *k == 0 {
                    return Err(Error::domain("iterate count must be positive"));
                }
                base.validate()
            }
            TorusLift::IntegerTranslate { base, .. } => base.validate(),
        }
    }

    /// Evaluates the lift without checking for finiteness.
    pub fn map_point(&self, p: PlanarVec) -> PlanarVec {
        match self {
            TorusLift::Identity => p,
            TorusLift::Translation(v) => p + *v,
            TorusLift::VerticalTentShear { amplitude } => {
                PlanarVec::new(p.x, p.y + amplitude * tent_profile(p.x))
            }
            TorusLift::HorizontalTentShear { amplitude } => {
                PlanarVec::new(p.x + amplitude * tent_profile(p.y), p.y)
            }
            TorusLift::LocalizedShear(s) => s.apply(p),
            TorusLift::Composition(maps) => maps.iter().fold(p, |q, m| m.map_point(q)),
            TorusLift::Iterate { base, k } => (0..*k).fold(p, |q, _| base.map_point(q)),
            TorusLift::IntegerTranslate { base, v } => base.map_point(p) + PlanarVec::from(*v),
        }
    }

    /// `F(p)`.
    pub fn eval(&self, p: PlanarVec) -> Result<PlanarVec> {
        if !p.is_finite() {
            return Err(Error::domain(format!("cannot evaluate at non-finite point {p}")));
        }
        Ok(self.map_point(p))
    }

    /// Advances a lifted point by one application of the lift.
    ///
    /// Primitive maps are evaluated on the fractional part only; integer
    /// translations act on the cell and are therefore exact.
    pub fn advance(&self, p: LiftedPoint) -> LiftedPoint {
        match self {
            TorusLift::Identity => p,
            TorusLift::Composition(maps) => maps.iter().fold(p, |q, m| m.advance(q)),
            TorusLift::Iterate { base, k } => (0..*k).fold(p, |q, _| base.advance(q)),
            TorusLift::IntegerTranslate { base, v } => base.advance(p).shifted(*v),
            _ => p.renormalized(self.map_point(p.frac)),
        }
    }

    /// The inverse lift, built from the explicit inverse of each node.
    pub fn inverse(&self) -> TorusLift {
        match self {
            TorusLift::Identity => TorusLift::Identity,
            TorusLift::Translation(v) => TorusLift::Translation(-*v),
            TorusLift::VerticalTentShear { amplitude } => TorusLift::VerticalTentShear {
                amplitude: -amplitude,
            },
            TorusLift::HorizontalTentShear { amplitude } => TorusLift::HorizontalTentShear {
                amplitude: -amplitude,
            },
            TorusLift::LocalizedShear(s) => TorusLift::LocalizedShear(LocalizedShear {
                amplitude: -s.amplitude,
                ..*s
            }),
            TorusLift::Composition(maps) => {
                TorusLift::Composition(maps.iter().rev().map(TorusLift::inverse).collect())
            }
            TorusLift::Iterate { base, k } => TorusLift::Iterate {
                base: Box::new(base.inverse()),
                k: *k,
            },
            TorusLift::IntegerTranslate { base, v } => TorusLift::Composition(vec![
                TorusLift::Translation(-PlanarVec::from(*v)),
                base.inverse(),
            ]),
        }
    }

    /// A short canonical description of the tree.
    pub fn label(&self) -> String {
        match self {
            TorusLift::Identity => "identity".into(),
            TorusLift::Translation(v) => format!("translation({},{})", v.x, v.y),
            TorusLift::VerticalTentShear { amplitude } => {
                format!("vertical_tent_shear({amplitude})")
            }
            TorusLift::HorizontalTentShear { amplitude } => {
                format!("horizontal_tent_shear({amplitude})")
            }
            TorusLift::LocalizedShear(s) => format!(
                "localized_shear({:?},{},{},{},{})",
                s.axis, s.center.x, s.center.y, s.radius, s.amplitude
            )
            .to_lowercase(),
            TorusLift::Composition(maps) => {
                let parts: Vec<String> = maps.iter().map(TorusLift::label).collect();
                format!("compose[{}]", parts.join(","))
            }
            TorusLift::Iterate { base, k } => format!("iterate({},{k})", base.label()),
            TorusLift::IntegerTranslate { base, v } => {
                format!("integer_translate({},{},{})", base.label(), v.x, v.y)
            }
        }
    }
}

/// `F^n(p)` by repeated evaluation.
pub fn iterate(lift: &TorusLift, p: PlanarVec, n: u64) -> Result<PlanarVec> {
    if n == 0 {
        return Err(Error::domain("iteration count must be positive"));
    }
    let mut q = lift.eval(p)?;
    for step in 1..=n {
        if !q.is_finite() {
            return Err(Error::Iteration { start: p, step });
        }
        if step == n {
            break;
        }
        q = lift.map_point(q);
    }
    Ok(q)
}

/// Iterates a lifted orbit `n` times, reporting the first non-finite step.
pub(crate) fn advance_checked(
    lift: &TorusLift,
    start: PlanarVec,
    p: LiftedPoint,
    first_step: u64,
    n: u64,
) -> Result<LiftedPoint> {
    let mut q = p;
    for step in first_step..first_step + n {
        q = lift.advance(q);
        if !q.frac.is_finite() {
            return Err(Error::Iteration {
                start,
                step: step + 1,
            });
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lm_fixed_points() -> [(PlanarVec, PlanarVec); 4] {
        [
            (PlanarVec::new(0.0, 0.0), PlanarVec::new(0.0, 0.0)),
            (PlanarVec::new(0.5, 0.0), PlanarVec::new(0.0, 1.0)),
            (PlanarVec::new(0.0, 0.5), PlanarVec::new(1.0, 0.0)),
            (PlanarVec::new(0.5, 0.5), PlanarVec::new(1.0, 1.0)),
        ]
    }

    #[test]
    fn identity_eval() {
        let p = PlanarVec::new(0.3, 0.7);
        assert_eq!(TorusLift::Identity.eval(p).unwrap(), p);
    }

    #[test]
    fn lm_dyadic_fixed_points_are_exact() {
        let lm = TorusLift::lm();
        for (p, d) in lm_fixed_points() {
            assert_eq!(lm.eval(p).unwrap(), p + d, "at {p}");
        }
        assert_eq!(
            lm.eval(PlanarVec::new(0.5, 0.0)).unwrap(),
            PlanarVec::new(0.5, 1.0)
        );
        assert_eq!(
            lm.eval(PlanarVec::new(0.5, 0.5)).unwrap(),
            PlanarVec::new(1.5, 1.5)
        );
    }

    #[test]
    fn tent_values() {
        assert_eq!(tent(0.0).unwrap(), 0.0);
        assert_eq!(tent(0.5).unwrap(), 1.0);
        assert_eq!(tent(0.75).unwrap(), 0.5);
        assert_eq!(tent(1.25).unwrap(), tent(0.25).unwrap());
        assert_eq!(tent(-0.25).unwrap(), 0.5);
        assert!(tent(f64::NAN).is_err());
        assert!(tent(f64::INFINITY).is_err());
    }

    #[test]
    fn non_finite_eval_is_rejected() {
        let err = TorusLift::lm().eval(PlanarVec::new(f64::NAN, 0.0));
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn iterate_examples() {
        let t = TorusLift::rotation(0.25, 0.0).unwrap();
        assert_eq!(
            iterate(&t, PlanarVec::ZERO, 4).unwrap(),
            PlanarVec::new(1.0, 0.0)
        );
        assert_eq!(
            iterate(&TorusLift::lm(), PlanarVec::new(0.5, 0.5), 2).unwrap(),
            PlanarVec::new(2.5, 2.5)
        );
        let p = PlanarVec::new(0.125, 0.875);
        assert_eq!(iterate(&TorusLift::Identity, p, 17).unwrap(), p);
        assert!(iterate(&TorusLift::Identity, p, 0).is_err());
    }

    #[test]
    fn iterate_reports_blowup_step() {
        let huge = TorusLift::VerticalTentShear { amplitude: f64::MAX };
        let err = iterate(&huge, PlanarVec::new(0.5, 0.5), 5).unwrap_err();
        assert!(matches!(err, Error::Iteration { step: 2, .. }), "{err:?}");
    }

    #[test]
    fn projection_examples() {
        assert_eq!(
            project_to_torus(PlanarVec::new(1.25, -0.5)),
            PlanarVec::new(0.25, 0.5)
        );
        assert_eq!(project_to_torus(PlanarVec::ZERO), PlanarVec::ZERO);
        assert_eq!(
            project_to_torus(PlanarVec::new(0.999999, 2.0)),
            PlanarVec::new(0.999999, 0.0)
        );
        let p = project_to_torus(PlanarVec::new(-1e-20, 0.0));
        assert!(p.x >= 0.0 && p.x < 1.0);
    }

    #[test]
    fn localized_shear_identity_outside_support() {
        let hs = TorusLift::default_horseshoe_disk();
        for p in [
            PlanarVec::new(0.0, 0.0),
            PlanarVec::new(0.5, 0.76),
            PlanarVec::new(0.24, 0.5),
            PlanarVec::new(3.9, -2.1),
        ] {
            assert_eq!(hs.eval(p).unwrap(), p);
        }
        let moved = hs.eval(PlanarVec::new(0.55, 0.52)).unwrap();
        assert!(moved != PlanarVec::new(0.55, 0.52));
    }

    #[test]
    fn localized_shear_rejects_bad_radius() {
        let c = PlanarVec::new(0.5, 0.5);
        assert!(LocalizedShear::new(c, 0.5, 1.0, Axis::Vertical).is_err());
        assert!(LocalizedShear::new(c, 0.0, 1.0, Axis::Vertical).is_err());
        assert!(LocalizedShear::new(PlanarVec::new(1.0, 0.0), 0.1, 1.0, Axis::Vertical).is_err());
    }

    #[test]
    fn advance_tracks_planar_eval() {
        let lm = TorusLift::lm();
        let p = PlanarVec::new(0.3, 0.1);
        let lifted = (0..10).fold(LiftedPoint::from_planar(p), |q, _| lm.advance(q));
        let planar = iterate(&lm, p, 10).unwrap();
        assert!((lifted.to_planar() - planar).norm_inf() < 1e-9);
    }

    #[test]
    fn integer_translate_is_exact_on_cells() {
        let hs = TorusLift::default_horseshoe_disk();
        let shifted = TorusLift::integer_translate(hs.clone(), LatticeVec::new(2, -1));
        let start = LiftedPoint::from_planar(PlanarVec::new(0.51, 0.47));
        let (mut a, mut b) = (start, start);
        for _ in 0..500 {
            a = hs.advance(a);
            b = shifted.advance(b);
        }
        assert_eq!(a.frac, b.frac);
        assert_eq!(b.cell - a.cell, LatticeVec::new(1000, -500));
    }

    #[test]
    fn inverse_of_integer_translate() {
        let f = TorusLift::integer_translate(TorusLift::lm(), LatticeVec::new(1, 3));
        let g = f.inverse();
        let p = PlanarVec::new(0.37, 0.81);
        assert!((g.map_point(f.map_point(p)) - p).norm_inf() < 1e-12);
    }
}
