//! Topological entropy from counts of `(n, ε)` spanning sets.
//!
//! A spanning set `E` covers the torus by dynamical balls
//! `B(x, ε, n) = {y : d(F^k x, F^k y) ≤ ε for 0 ≤ k < n}`. The entropy is the
//! exponential growth rate of the smallest such `|E|` in `n`, as `ε → 0`.
//! Counts here come from a greedy cover of a finite candidate grid, which
//! bounds the grid-restricted minimum from above.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{torus_distance, LiftedPoint, PlanarVec, TorusLift};
use crate::rotation::Grid;

/// Minimum number of candidates per spanning-set member for a count to be
/// used in the growth fit. A count above `candidates / 16` means a typical
/// dynamical ball holds fewer than 4×4 grid points and the grid, not the
/// dynamics, limits the count.
pub const MIN_CANDIDATES_PER_MEMBER: usize = 16;

/// Largest `ε` accepted by the counting routines (exclusive).
pub const MAX_EPSILON: f64 = 0.5;

/// Orbits of every candidate grid point, projected to `[0,1)²`.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    resolution: u32,
    length: usize,
    points: Vec<PlanarVec>,
}

impl OrbitTable {
    /// Iterates each of the `resolution²` candidates for `length` points
    /// (the start included).
    pub fn build(lift: &TorusLift, resolution: u32, length: usize) -> Result<Self> {
        if resolution == 0 || length == 0 {
            return Err(Error::domain("orbit table needs positive resolution and length"));
        }
        let grid = Grid::square(resolution);
        let rows: Vec<Result<Vec<PlanarVec>>> = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let start = grid.point(idx);
                let mut p = LiftedPoint::from_planar(start);
                let mut row = Vec::with_capacity(length);
                row.push(p.frac);
                for step in 1..length {
                    p = lift.advance(p);
                    if !p.frac.is_finite() {
                        return Err(Error::Iteration {
                            start,
                            step: step as u64,
                        });
                    }
                    row.push(p.frac);
                }
                Ok(row)
            })
            .collect();
        let mut points = Vec::with_capacity(grid.len() * length);
        for row in rows {
            points.extend(row?);
        }
        Ok(Self {
            resolution,
            length,
            points,
        })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn candidates(&self) -> usize {
        self.points.len() / self.length
    }

    pub fn orbit(&self, candidate: usize) -> &[PlanarVec] {
        &self.points[candidate * self.length..(candidate + 1) * self.length]
    }
}

#[derive(Default)]
struct CellHasher(u64);

impl Hasher for CellHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.write_u64(u64::from(*b));
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }
}

type CellIndex = HashMap<u64, Vec<u32>, BuildHasherDefault<CellHasher>>;

#[inline]
fn flat_sq_distance(a: PlanarVec, b: PlanarVec) -> f64 {
    let dx = (a.x - b.x).abs();
    let dy = (a.y - b.y).abs();
    let dx = dx.min(1.0 - dx);
    let dy = dy.min(1.0 - dy);
    dx * dx + dy * dy
}

/// Greedy spanning-set size over a prebuilt table, for orbit length `n`.
///
/// Candidates are scanned in row-major order; each one not yet within
/// dynamical distance `ε` of a member becomes a member. Members are indexed
/// by their grid cells (side ≥ ε) at times 0 and `n − 1`, so only members in
/// neighbouring cells at both times are compared.
pub fn greedy_count(table: &OrbitTable, epsilon: f64, n: usize) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < MAX_EPSILON) {
        return Err(Error::domain(format!("epsilon {epsilon} must lie in (0, 1/2)")));
    }
    if n == 0 || n > table.length {
        return Err(Error::domain(format!(
            "orbit length {n} outside 1..={}",
            table.length
        )));
    }
    let cells = (1.0 / epsilon).floor() as i64;
    let cell_of = |t: f64| ((t * cells as f64) as i64).min(cells - 1);
    let mut offsets: Vec<i64> = vec![0, 1, cells - 1];
    offsets.sort_unstable();
    offsets.dedup();
    let last_offsets: &[i64] = if n == 1 { &[0] } else { &offsets };
    let key = |a: i64, b: i64, c: i64, d: i64| -> u64 {
        (((a * cells + b) * cells + c) * cells + d) as u64
    };
    let last = n - 1;
    let eps2 = epsilon * epsilon;

    let mut index = CellIndex::default();
    let mut count = 0;
    for cand in 0..table.candidates() {
        let orbit = &table.orbit(cand)[..n];
        let (a0, b0) = (cell_of(orbit[0].x), cell_of(orbit[0].y));
        let (a1, b1) = if n == 1 {
            (0, 0)
        } else {
            (cell_of(orbit[last].x), cell_of(orbit[last].y))
        };
        let mut covered = false;
        'search: for &da in &offsets {
            for &db in &offsets {
                for &dc in last_offsets {
                    for &dd in last_offsets {
                        let k = key(
                            (a0 + da) % cells,
                            (b0 + db) % cells,
                            (a1 + dc) % cells,
                            (b1 + dd) % cells,
                        );
                        let Some(members) = index.get(&k) else {
                            continue;
                        };
                        for &m in members {
                            let other = &table.orbit(m as usize)[..n];
                            if flat_sq_distance(orbit[last], other[last]) <= eps2
                                && orbit
                                    .iter()
                                    .zip(other)
                                    .all(|(p, q)| flat_sq_distance(*p, *q) <= eps2)
                            {
                                covered = true;
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        if !covered {
            index
                .entry(key(a0, b0, a1, b1))
                .or_default()
                .push(cand as u32);
            count += 1;
        }
    }
    Ok(count)
}

fn check_resolution(epsilon: f64, resolution: u32) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < MAX_EPSILON) {
        return Err(Error::domain(format!("epsilon {epsilon} must lie in (0, 1/2)")));
    }
    if f64::from(resolution) * epsilon < 4.0 {
        return Err(Error::domain(format!(
            "candidate resolution {resolution} is coarser than epsilon/4 for epsilon {epsilon}"
        )));
    }
    Ok(())
}

/// Greedy `(n, ε)` spanning-set size on a `resolution × resolution` grid.
pub fn count_spanning(lift: &TorusLift, epsilon: f64, n: usize, resolution: u32) -> Result<usize> {
    check_resolution(epsilon, resolution)?;
    if n == 0 {
        return Err(Error::domain("orbit length must be positive"));
    }
    let table = OrbitTable::build(lift, resolution, n)?;
    greedy_count(&table, epsilon, n)
}

/// `max_{0 ≤ k < n} d(F^k x, F^k y)` in the flat torus metric.
pub fn dynamical_distance(lift: &TorusLift, x: PlanarVec, y: PlanarVec, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("orbit length must be positive"));
    }
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::domain("dynamical distance needs finite points"));
    }
    let (mut p, mut q) = (LiftedPoint::from_planar(x), LiftedPoint::from_planar(y));
    let mut d = torus_distance(p.frac, q.frac);
    for step in 1..n {
        p = lift.advance(p);
        q = lift.advance(q);
        if !p.frac.is_finite() {
            return Err(Error::Iteration {
                start: x,
                step: step as u64,
            });
        }
        if !q.frac.is_finite() {
            return Err(Error::Iteration {
                start: y,
                step: step as u64,
            });
        }
        d = d.max(torus_distance(p.frac, q.frac));
    }
    Ok(d)
}

/// Count table and fitted growth rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub epsilons: Vec<f64>,
    pub lengths: Vec<usize>,
    /// `counts[i][j]` is the count for `epsilons[i]` and `lengths[j]`.
    pub counts: Vec<Vec<usize>>,
    pub candidate_resolution: u32,
    /// Counts above this are grid-limited and left out of the fits.
    pub resolved_limit: usize,
    /// Lengths used in each fit.
    pub fit_lengths: Vec<Vec<usize>>,
    /// Least-squares slope of `ln count` against `n`, or `None` when fewer
    /// than two resolved counts are available.
    pub slopes: Vec<Option<f64>>,
    /// Root-mean-square residual of each fit.
    pub residuals: Vec<Option<f64>>,
    /// Largest slope over `ε`, floored at zero.
    pub estimate: f64,
}

impl EntropyEstimate {
    /// Number of places where a count decreases in `n` or as `ε` shrinks.
    pub fn monotonicity_violations(&self) -> usize {
        let in_n: usize = self
            .counts
            .iter()
            .map(|row| row.windows(2).filter(|w| w[1] < w[0]).count())
            .sum();
        let in_eps: usize = self
            .counts
            .windows(2)
            .map(|rows| rows[0].iter().zip(&rows[1]).filter(|(a, b)| b < a).count())
            .sum();
        in_n + in_eps
    }

    pub fn is_constant_in_n(&self) -> bool {
        self.counts.iter().all(|row| row.windows(2).all(|w| w[0] == w[1]))
    }
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (my + slope * (x - mx));
            e * e
        })
        .sum();
    (slope, (rss / n).sqrt())
}

/// Fills the count table and fits a growth rate per `ε`.
///
/// Each fit uses the upper half (at least two points) of the lengths whose
/// counts are resolved by the candidate grid.
pub fn estimate_entropy(
    lift: &TorusLift,
    epsilons: &[f64],
    lengths: &[usize],
    resolution: u32,
) -> Result<EntropyEstimate> {
    if epsilons.is_empty() || lengths.is_empty() {
        return Err(Error::domain("need at least one epsilon and one length"));
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("epsilons must be strictly descending"));
    }
    if lengths[0] == 0 || lengths.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("lengths must be positive and strictly ascending"));
    }
    for &eps in epsilons {
        check_resolution(eps, resolution)?;
    }
    let table = OrbitTable::build(lift, resolution, *lengths.last().unwrap())?;

    let cells: Vec<(usize, usize)> = (0..epsilons.len())
        .flat_map(|i| (0..lengths.len()).map(move |j| (i, j)))
        .collect();
    let flat: Vec<Result<usize>> = cells
        .par_iter()
        .map(|&(i, j)| greedy_count(&table, epsilons[i], lengths[j]))
        .collect();
    let flat = crate::parallel::first_error(flat)?;
    let counts: Vec<Vec<usize>> = flat.chunks(lengths.len()).map(<[usize]>::to_vec).collect();

    let resolved_limit = table.candidates() / MIN_CANDIDATES_PER_MEMBER;
    let mut fit_lengths = Vec::new();
    let mut slopes = Vec::new();
    let mut residuals = Vec::new();
    for row in &counts {
        let resolved: Vec<usize> = lengths
            .iter()
            .zip(row)
            .filter(|(_, &c)| c <= resolved_limit)
            .map(|(&n, _)| n)
            .collect();
        let k = resolved.len();
        if k < 2 {
            fit_lengths.push(Vec::new());
            slopes.push(None);
            residuals.push(None);
            continue;
        }
        let window = resolved[k - k.div_ceil(2).max(2)..].to_vec();
        let xs: Vec<f64> = window.iter().map(|&n| n as f64).collect();
        let ys: Vec<f64> = window
            .iter()
            .map(|n| {
                let j = lengths.iter().position(|m| m == n).unwrap();
                (row[j] as f64).ln()
            })
            .collect();
        let (slope, rms) = least_squares(&xs, &ys);
        fit_lengths.push(window);
        slopes.push(Some(slope));
        residuals.push(Some(rms));
    }
    let estimate = slopes.iter().flatten().fold(0.0_f64, |m, s| m.max(*s));

    Ok(EntropyEstimate {
        epsilons: epsilons.to_vec(),
        lengths: lengths.to_vec(),
        counts,
        candidate_resolution: resolution,
        resolved_limit,
        fit_lengths,
        slopes,
        residuals,
        estimate,
    })
}
