//! Finite coverings `R²/(mZ × nZ)` of the torus and empirical transitivity.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{LatticeVec, LiftedPoint, PlanarVec, TorusLift};

/// Occupancy at or above which a report reads as transitive-like.
pub const TRANSITIVE_LIKE: f64 = 0.98;
/// Occupancy at or below which a report reads as obstructed.
pub const OBSTRUCTED: f64 = 0.5;

/// The covering torus with fundamental domain `[0,m) × [0,n)`, `m, n ∈ {1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u8; 2]", into = "[u8; 2]")]
pub struct CoveringTorus {
    m: u8,
    n: u8,
}

impl CoveringTorus {
    pub const BASE: CoveringTorus = CoveringTorus { m: 1, n: 1 };
    pub const HORIZONTAL: CoveringTorus = CoveringTorus { m: 2, n: 1 };
    pub const VERTICAL: CoveringTorus = CoveringTorus { m: 1, n: 2 };
    pub const FOURFOLD: CoveringTorus = CoveringTorus { m: 2, n: 2 };
    pub const ALL: [CoveringTorus; 4] = [Self::BASE, Self::HORIZONTAL, Self::VERTICAL, Self::FOURFOLD];

    pub fn new(m: u8, n: u8) -> Result<Self> {
        if !matches!(m, 1 | 2) || !matches!(n, 1 | 2) {
            return Err(Error::domain(format!("covering factors {m}x{n} must be 1 or 2")));
        }
        Ok(Self { m, n })
    }

    pub fn factors(&self) -> (u8, u8) {
        (self.m, self.n)
    }

    pub fn degree(&self) -> usize {
        usize::from(self.m) * usize::from(self.n)
    }

    /// Reduces a planar point into the fundamental domain.
    pub fn reduce(&self, p: PlanarVec) -> PlanarVec {
        let lifted = LiftedPoint::from_planar(p);
        self.place(lifted)
    }

    fn place(&self, p: LiftedPoint) -> PlanarVec {
        let (m, n) = (i64::from(self.m), i64::from(self.n));
        PlanarVec::new(
            p.cell.x.rem_euclid(m) as f64 + p.frac.x,
            p.cell.y.rem_euclid(n) as f64 + p.frac.y,
        )
    }

    /// The covering projection onto the base torus `[0,1)²`.
    pub fn project(&self, p: PlanarVec) -> PlanarVec {
        LiftedPoint::from_planar(p).frac
    }

    /// Applies a deck translation and reduces into the fundamental domain.
    pub fn deck_apply(&self, p: PlanarVec, deck: LatticeVec) -> PlanarVec {
        let lifted = LiftedPoint::from_planar(p);
        self.place(LiftedPoint {
            cell: lifted.cell + deck,
            frac: lifted.frac,
        })
    }
}

impl From<CoveringTorus> for [u8; 2] {
    fn from(c: CoveringTorus) -> Self {
        [c.m, c.n]
    }
}

impl TryFrom<[u8; 2]> for CoveringTorus {
    type Error = Error;
    fn try_from([m, n]: [u8; 2]) -> Result<Self> {
        Self::new(m, n)
    }
}

impl fmt::Display for CoveringTorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

impl FromStr for CoveringTorus {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::domain(format!("covering `{s}` is not of the form MxN")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u8>()
                .map_err(|_| Error::domain(format!("bad covering factor `{t}`")))
        };
        Self::new(parse(a)?, parse(b)?)
    }
}

/// The dynamics of a lift on a covering torus.
#[derive(Debug, Clone, Copy)]
pub struct CoveringMap<'a> {
    lift: &'a TorusLift,
    cover: CoveringTorus,
}

impl<'a> CoveringMap<'a> {
    pub fn cover(&self) -> CoveringTorus {
        self.cover
    }

    /// One step: evaluate the planar lift, then reduce modulo `mZ × nZ`.
    pub fn step(&self, p: PlanarVec) -> PlanarVec {
        let lifted = LiftedPoint::from_planar(p);
        self.cover.place(self.lift.advance(lifted))
    }

    pub fn orbit(&self, start: PlanarVec, len: usize) -> Vec<PlanarVec> {
        let mut out = Vec::with_capacity(len);
        let mut p = self.cover.reduce(start);
        for _ in 0..len {
            out.push(p);
            p = self.step(p);
        }
        out
    }
}

pub fn lift_to_covering(lift: &TorusLift, cover: CoveringTorus) -> CoveringMap<'_> {
    CoveringMap { lift, cover }
}

/// Representatives `(a, b)`, `0 ≤ a < m`, `0 ≤ b < n`, of the deck group.
pub fn deck_translations(cover: CoveringTorus) -> Vec<LatticeVec> {
    let (m, n) = (i64::from(cover.m), i64::from(cover.n));
    (0..n)
        .flat_map(|b| (0..m).map(move |a| LatticeVec::new(a, b)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitivityVerdict {
    TransitiveLike,
    Inconclusive,
    Obstructed,
}

/// Cell occupancy of forward orbits on a covering torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub covering: CoveringTorus,
    pub starts: Vec<PlanarVec>,
    pub iterations: u64,
    pub cell_resolution: u32,
    /// Fraction of cells visited by the union of all orbits.
    pub occupancy: f64,
    pub per_start_occupancy: Vec<f64>,
    #[serde(skip)]
    occupied: Vec<bool>,
}

impl TransitivityReport {
    pub fn verdict(&self) -> TransitivityVerdict {
        if self.occupancy >= TRANSITIVE_LIKE {
            TransitivityVerdict::TransitiveLike
        } else if self.occupancy <= OBSTRUCTED {
            TransitivityVerdict::Obstructed
        } else {
            TransitivityVerdict::Inconclusive
        }
    }

    /// Grid dimensions `(width, height)` in cells.
    pub fn grid_size(&self) -> (usize, usize) {
        let (m, n) = self.covering.factors();
        let r = self.cell_resolution as usize;
        (usize::from(m) * r, usize::from(n) * r)
    }

    /// Occupancy of cell `(column, row)`, row 0 at the bottom.
    pub fn is_occupied(&self, column: usize, row: usize) -> bool {
        let (w, _) = self.grid_size();
        self.occupied[row * w + column]
    }

    /// Plain (ASCII) PGM image of the union occupancy grid, top row first.
    pub fn to_pgm(&self) -> String {
        let (w, h) = self.grid_size();
        let mut out = format!("P2\n{w} {h}\n255\n");
        for row in (0..h).rev() {
            let line: Vec<&str> = (0..w)
                .map(|c| if self.is_occupied(c, row) { "255" } else { "0" })
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Bins each forward orbit into square cells of side `1/cell_resolution`.
pub fn transitivity_score(
    lift: &TorusLift,
    cover: CoveringTorus,
    starts: &[PlanarVec],
    iterations: u64,
    cell_resolution: u32,
) -> Result<TransitivityReport> {
    if starts.is_empty() {
        return Err(Error::domain("transitivity needs at least one start"));
    }
    if cell_resolution == 0 {
        return Err(Error::domain("cell resolution must be positive"));
    }
    if let Some(bad) = starts.iter().find(|p| !p.is_finite()) {
        return Err(Error::domain(format!("non-finite start {bad}")));
    }
    let r = cell_resolution as usize;
    let (w, h) = (usize::from(cover.m) * r, usize::from(cover.n) * r);
    let total = w * h;
    if iterations < total as u64 {
        return Err(Error::domain(format!(
            "{iterations} iterations cannot visit all {total} cells"
        )));
    }
    let map = lift_to_covering(lift, cover);
    let scale = f64::from(cell_resolution);
    let grids: Vec<Result<Vec<bool>>> = starts
        .par_iter()
        .map(|&start| {
            let mut grid = vec![false; total];
            let mut p = cover.reduce(start);
            for step in 0..iterations {
                if !p.is_finite() {
                    return Err(Error::Iteration { start, step });
                }
                let c = ((p.x * scale) as usize).min(w - 1);
                let row = ((p.y * scale) as usize).min(h - 1);
                grid[row * w + c] = true;
                p = map.step(p);
            }
            Ok(grid)
        })
        .collect();
    let grids = crate::parallel::first_error(grids)?;

    let fraction = |g: &[bool]| g.iter().filter(|b| **b).count() as f64 / total as f64;
    let per_start_occupancy = grids.iter().map(|g| fraction(g)).collect();
    let mut occupied = vec![false; total];
    for g in &grids {
        for (u, b) in occupied.iter_mut().zip(g) {
            *u |= *b;
        }
    }
    Ok(TransitivityReport {
        covering: cover,
        starts: starts.to_vec(),
        iterations,
        cell_resolution,
        occupancy: fraction(&occupied),
        per_start_occupancy,
        occupied,
    })
}
