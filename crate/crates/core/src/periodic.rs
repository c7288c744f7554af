//! Periodic orbits with exact integer displacements.
//!
//! A point `x` is `q`-periodic with lift displacement `p ∈ Z²` when
//! `F^q(x) = x + p`; its rotation vector is the rational pair `p/q`.
//! Orbits are found by damped Newton iteration on `G(x) = F^q(x) − x − p`
//! from a grid of seeds.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, ConvexPolygon};
use crate::maps::{project_to_torus, torus_distance, LatticeVec, PlanarVec, TorusLift};
use crate::rotation::{Grid, RotationSetEstimate};

/// Newton acceptance threshold on `‖G‖∞`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Torus distance under which two roots are the same point.
pub const DEDUP_TOLERANCE: f64 = 1e-6;
/// Central-difference step for the Jacobian.
pub const JACOBIAN_STEP: f64 = 1e-6;
/// Fraction of seeds with distinct roots above which the set is a continuum.
pub const CONTINUUM_FRACTION: f64 = 0.25;
/// Orbits kept as a sample when the periodic set is not isolated.
pub const CONTINUUM_SAMPLE: usize = 8;

const MAX_NEWTON_STEPS: usize = 60;
const MIN_DAMPING: f64 = 1.0 / 1024.0;
const SINGULAR_DET: f64 = 1e-12;

/// Exact rational pair `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalVec {
    pub num: LatticeVec,
    pub den: u32,
}

impl RationalVec {
    pub fn to_planar(self) -> PlanarVec {
        PlanarVec::from(self.num) * (1.0 / f64::from(self.den))
    }

    /// Equality as rationals, independent of the representation.
    pub fn same_value(&self, other: &RationalVec) -> bool {
        let (a, b) = (i128::from(self.den), i128::from(other.den));
        i128::from(self.num.x) * b == i128::from(other.num.x) * a
            && i128::from(self.num.y) * b == i128::from(other.num.y) * a
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicOrbit {
    /// Representative point in `[0,1)²`: the lexicographically smallest
    /// point of the orbit.
    pub point: PlanarVec,
    pub period: u32,
    pub displacement: LatticeVec,
    pub residual: f64,
    pub rotation_vector: RationalVec,
}

/// Result of a periodic-orbit search with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSearch {
    pub period: u32,
    pub displacement_box: u32,
    pub seeds: Grid,
    /// Sorted orbits, or a sample of them when `non_isolated` is set.
    pub orbits: Vec<PeriodicOrbit>,
    /// Set when so many seeds converge to distinct roots that the periodic
    /// set looks like a continuum rather than isolated orbits.
    pub non_isolated: bool,
    /// Distinct orbits found before any sampling.
    pub distinct_orbits: usize,
    /// Seed runs abandoned at a numerically singular Jacobian.
    pub singular_seeds: usize,
    /// Seed runs that stalled or hit the step limit.
    pub unconverged_seeds: usize,
    /// Converged roots dropped because their true period divides `q`.
    pub lower_period_roots: usize,
}

enum SeedOutcome {
    Root(PlanarVec),
    Singular,
    Stalled,
}

fn residual_vec(lift: &TorusLift, q: u32, p: LatticeVec, x: PlanarVec) -> PlanarVec {
    let image = (0..q).fold(x, |y, _| lift.map_point(y));
    image - x - PlanarVec::from(p)
}

fn newton(lift: &TorusLift, q: u32, p: LatticeVec, seed: PlanarVec) -> SeedOutcome {
    let g = |x: PlanarVec| residual_vec(lift, q, p, x);
    let mut x = seed;
    let mut r = g(x);
    for _ in 0..MAX_NEWTON_STEPS {
        if !r.is_finite() {
            return SeedOutcome::Stalled;
        }
        let norm = r.norm_inf();
        if norm <= RESIDUAL_TOLERANCE * 1e-3 {
            break;
        }
        let h = JACOBIAN_STEP;
        let ex = PlanarVec::new(h, 0.0);
        let ey = PlanarVec::new(0.0, h);
        let cx = (g(x + ex) - g(x - ex)) * (0.5 / h);
        let cy = (g(x + ey) - g(x - ey)) * (0.5 / h);
        let det = cx.x * cy.y - cy.x * cx.y;
        if det.is_nan() || det.abs() <= SINGULAR_DET {
            if norm <= RESIDUAL_TOLERANCE {
                break;
            }
            return SeedOutcome::Singular;
        }
        // solve J·step = −r with J = [cx cy]
        let step = PlanarVec::new(
            -(cy.y * r.x - cy.x * r.y) / det,
            -(-cx.y * r.x + cx.x * r.y) / det,
        );
        let mut lambda = 1.0;
        let mut improved = false;
        while lambda >= MIN_DAMPING {
            let trial = project_to_torus(x + step * lambda);
            let tr = g(trial);
            if tr.norm_inf() < norm {
                x = trial;
                r = tr;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if r.norm_inf() <= RESIDUAL_TOLERANCE {
        SeedOutcome::Root(project_to_torus(x))
    } else {
        SeedOutcome::Stalled
    }
}

fn near_integer(v: PlanarVec) -> bool {
    (v.x - v.x.round()).abs() <= DEDUP_TOLERANCE && (v.y - v.y.round()).abs() <= DEDUP_TOLERANCE
}

/// True if `x` closes up after some proper divisor `d` of `q`.
fn has_lower_period(lift: &TorusLift, q: u32, x: PlanarVec) -> bool {
    let mut y = x;
    for d in 1..q {
        y = lift.map_point(y);
        if q.is_multiple_of(d) && near_integer(y - x) {
            return true;
        }
    }
    false
}

/// The lexicographically smallest point of the orbit of `x`.
fn orbit_representative(lift: &TorusLift, q: u32, x: PlanarVec) -> PlanarVec {
    let mut best = x;
    let mut y = x;
    for _ in 1..q {
        y = project_to_torus(lift.map_point(y));
        if y.lex_cmp(&best) == Ordering::Less {
            best = y;
        }
    }
    best
}

fn same_orbit(lift: &TorusLift, q: u32, a: PlanarVec, b: PlanarVec) -> bool {
    let mut y = a;
    for _ in 0..q {
        if torus_distance(y, b) <= DEDUP_TOLERANCE {
            return true;
        }
        y = lift.map_point(y);
    }
    false
}

/// Candidate displacements `p` with `|p|∞ ≤ box·q`, in lexicographic order.
fn candidate_displacements(q: u32, displacement_box: u32) -> Vec<LatticeVec> {
    let r = i64::from(displacement_box) * i64::from(q);
    (-r..=r)
        .flat_map(|a| (-r..=r).map(move |b| LatticeVec::new(a, b)))
        .collect()
}

/// Searches for `q`-periodic orbits with displacements in the box.
pub fn find_periodic(
    lift: &TorusLift,
    q: u32,
    displacement_box: u32,
    seeds: Grid,
) -> Result<PeriodicSearch> {
    if q == 0 {
        return Err(Error::domain("period must be positive"));
    }
    if seeds.is_empty() {
        return Err(Error::domain("seed grid is empty"));
    }
    lift.validate()?;
    let candidates = candidate_displacements(q, displacement_box);
    let n_seeds = seeds.len();
    let outcomes: Vec<(LatticeVec, SeedOutcome)> = (0..candidates.len() * n_seeds)
        .into_par_iter()
        .map(|idx| {
            let p = candidates[idx / n_seeds];
            (p, newton(lift, q, p, seeds.point(idx % n_seeds)))
        })
        .collect();

    let mut singular_seeds = 0;
    let mut unconverged_seeds = 0;
    let mut lower_period_roots = 0;
    let mut roots: Vec<(PlanarVec, LatticeVec)> = Vec::new();
    for (p, outcome) in outcomes {
        match outcome {
            SeedOutcome::Singular => singular_seeds += 1,
            SeedOutcome::Stalled => unconverged_seeds += 1,
            SeedOutcome::Root(x) => {
                if q > 1 && has_lower_period(lift, q, x) {
                    lower_period_roots += 1;
                } else {
                    roots.push((orbit_representative(lift, q, x), p));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.lex_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut distinct: Vec<(PlanarVec, LatticeVec)> = Vec::new();
    for (x, p) in roots {
        let duplicate = distinct.iter().rev().any(|(y, d)| {
            *d == p && (torus_distance(x, *y) <= DEDUP_TOLERANCE || same_orbit(lift, q, *y, x))
        });
        if !duplicate {
            distinct.push((x, p));
        }
    }

    let distinct_orbits = distinct.len();
    let non_isolated = distinct_orbits as f64 > CONTINUUM_FRACTION * n_seeds as f64;
    let keep = if non_isolated {
        CONTINUUM_SAMPLE
    } else {
        distinct_orbits
    };
    let orbits = distinct
        .into_iter()
        .take(keep)
        .map(|(x, p)| PeriodicOrbit {
            point: x,
            period: q,
            displacement: p,
            residual: residual_vec(lift, q, p, x).norm_inf(),
            rotation_vector: RationalVec { num: p, den: q },
        })
        .collect();

    Ok(PeriodicSearch {
        period: q,
        displacement_box,
        seeds,
        orbits,
        non_isolated,
        distinct_orbits,
        singular_seeds,
        unconverged_seeds,
        lower_period_roots,
    })
}

/// Outcome of the parity-determinant independence test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCertificate {
    pub determinant: i128,
    pub independent: bool,
}

/// Determinant of the matrix with columns `k2 + (1,0)` and `k3 + (0,1)`.
///
/// With `k2`, `k3` even the diagonal product is odd and the off-diagonal
/// product even, so the determinant is odd and the two rotation vectors
/// `(k2 + (1,0))/n2` and `(k3 + (0,1))/n3` are linearly independent.
pub fn parity_certificate(
    k2: LatticeVec,
    n2: u32,
    k3: LatticeVec,
    n3: u32,
) -> Result<ParityCertificate> {
    if n2 == 0 || n3 == 0 {
        return Err(Error::domain("periods must be positive"));
    }
    for k in [k2, k3] {
        if k.x % 2 != 0 || k.y % 2 != 0 {
            return Err(Error::domain(format!("{k} has an odd component")));
        }
    }
    let (a, c) = (i128::from(k2.x) + 1, i128::from(k2.y));
    let (b, d) = (i128::from(k3.x), i128::from(k3.y) + 1);
    let determinant = a * d - b * c;
    assert!(determinant % 2 != 0, "even determinant from even inputs");
    Ok(ParityCertificate {
        determinant,
        independent: determinant != 0,
    })
}

/// Hull of the realized rational rotation vectors.
pub fn realized_vectors(orbits: &[PeriodicOrbit]) -> Result<ConvexPolygon> {
    if orbits.is_empty() {
        return Err(Error::domain("no orbits to take the hull of"));
    }
    let points: Vec<PlanarVec> = orbits.iter().map(|o| o.rotation_vector.to_planar()).collect();
    convex_hull(&points)
}

/// Slack added to the outer hull's stability in [`sandwich_gap`] checks.
pub const SANDWICH_SLACK: f64 = 1e-6;

/// How far the inner hull of realized vectors sticks out of an estimated
/// rotation set, and the allowance `stability + SANDWICH_SLACK`.
///
/// The inner hull sits inside the outer estimate when the first value does
/// not exceed the second.
pub fn sandwich_gap(realized: &ConvexPolygon, outer: &RotationSetEstimate) -> (f64, f64) {
    let gap = realized
        .vertices()
        .iter()
        .map(|v| outer.hull.distance_to(*v))
        .fold(0.0, f64::max);
    (gap, outer.stability + SANDWICH_SLACK)
}

/// Splits a displacement into an even part and a deck class in `{0,1}²`
/// of the 4-fold covering.
pub fn split_even(displacement: LatticeVec) -> (LatticeVec, LatticeVec) {
    let class = LatticeVec::new(displacement.x.rem_euclid(2), displacement.y.rem_euclid(2));
    (displacement - class, class)
}

/// Parity certificate from two orbits whose displacements fall in the deck
/// classes `(1,0)` and `(0,1)` of the 4-fold covering, if both exist.
pub fn certificate_from_orbits(orbits: &[PeriodicOrbit]) -> Option<(usize, usize, ParityCertificate)> {
    let find = |class: LatticeVec| {
        orbits
            .iter()
            .position(|o| split_even(o.displacement).1 == class)
    };
    let i = find(LatticeVec::new(1, 0))?;
    let j = find(LatticeVec::new(0, 1))?;
    let (k2, _) = split_even(orbits[i].displacement);
    let (k3, _) = split_even(orbits[j].displacement);
    parity_certificate(k2, orbits[i].period, k3, orbits[j].period)
        .ok()
        .map(|c| (i, j, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(x: i64, y: i64) -> LatticeVec {
        LatticeVec::new(x, y)
    }

    #[test]
    fn parity_examples() {
        let c = parity_certificate(lv(0, 0), 1, lv(0, 0), 1).unwrap();
        assert_eq!(c, ParityCertificate { determinant: 1, independent: true });
        let c = parity_certificate(lv(2, 4), 1, lv(6, 2), 1).unwrap();
        assert_eq!(c.determinant, -15);
        assert!(c.independent);
        let c = parity_certificate(lv(-2, 0), 3, lv(0, -2), 5).unwrap();
        assert_eq!(c.determinant, 1);
    }

    #[test]
    fn parity_rejects_odd_entries() {
        assert!(parity_certificate(lv(1, 0), 1, lv(0, 0), 1).is_err());
        assert!(parity_certificate(lv(0, 0), 1, lv(0, -3), 1).is_err());
        assert!(parity_certificate(lv(0, 0), 0, lv(0, 0), 1).is_err());
    }

    #[test]
    fn split_even_classes() {
        assert_eq!(split_even(lv(3, -1)), (lv(2, -2), lv(1, 1)));
        assert_eq!(split_even(lv(1, 0)), (lv(0, 0), lv(1, 0)));
        assert_eq!(split_even(lv(-4, 6)), (lv(-4, 6), lv(0, 0)));
    }

    fn orbit(num: LatticeVec, den: u32) -> PeriodicOrbit {
        PeriodicOrbit {
            point: PlanarVec::ZERO,
            period: den,
            displacement: num,
            residual: 0.0,
            rotation_vector: RationalVec { num, den },
        }
    }

    #[test]
    fn realized_vector_hulls() {
        assert!(realized_vectors(&[]).is_err());
        let single = realized_vectors(&[orbit(lv(0, 0), 1)]).unwrap();
        assert!(single.is_point());
        let tri = realized_vectors(&[orbit(lv(0, 0), 1), orbit(lv(1, 0), 1), orbit(lv(0, 1), 1)])
            .unwrap();
        assert_eq!(crate::geometry::polygon_area(&tri), 0.5);
    }

    #[test]
    fn rational_equality() {
        let a = RationalVec { num: lv(1, 0), den: 2 };
        let b = RationalVec { num: lv(2, 0), den: 4 };
        assert!(a.same_value(&b));
        assert!(!a.same_value(&RationalVec { num: lv(1, 1), den: 2 }));
    }

    #[test]
    fn identity_is_flagged_as_continuum() {
        let s = find_periodic(&TorusLift::Identity, 1, 1, Grid::square(8)).unwrap();
        assert!(s.non_isolated);
        assert_eq!(s.distinct_orbits, 64);
        assert_eq!(s.orbits.len(), CONTINUUM_SAMPLE);
        assert!(s.orbits.iter().all(|o| o.displacement == LatticeVec::ZERO));
    }

    #[test]
    fn half_translation_has_period_two_only() {
        let t = TorusLift::rotation(0.5, 0.0).unwrap();
        let one = find_periodic(&t, 1, 1, Grid::square(4)).unwrap();
        assert!(one.orbits.is_empty());
        assert_eq!(one.distinct_orbits, 0);
        let two = find_periodic(&t, 2, 1, Grid::square(4)).unwrap();
        assert!(!two.orbits.is_empty());
        for o in &two.orbits {
            assert_eq!(o.displacement, lv(1, 0));
            assert_eq!(o.rotation_vector.to_planar(), PlanarVec::new(0.5, 0.0));
        }
    }
}
