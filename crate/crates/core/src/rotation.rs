//! Rotation vectors of points and finite-grid estimates of the rotation set.
//!
//! The rotation set is the set of limits of displacement averages
//! `(Fⁿ(p) − p)/n`. An estimate takes the hull of those averages over a
//! grid of starting points at a fixed horizon and reports how much that hull
//! still moves between horizons.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{affine_image, convex_hull, hausdorff_distance, polygon_area, ConvexPolygon};
use crate::maps::{advance_checked, LatticeVec, LiftedPoint, PlanarVec, TorusLift};
use crate::parallel::first_error;

/// Smallest final horizon accepted by [`estimate_rotation_set`].
pub const MIN_FINAL_HORIZON: u64 = 100;

/// Rows × columns of starting points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct Grid {
    pub rows: u32,
    pub cols: u32,
}

impl Grid {
    pub const fn new(rows: u32, cols: u32) -> Self {
        Self { rows, cols }
    }

    pub const fn square(n: u32) -> Self {
        Self { rows: n, cols: n }
    }

    pub fn len(&self) -> usize {
        self.rows as usize * self.cols as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Start `idx` in row-major order, at a half-cell offset from the lattice.
    pub fn point(&self, idx: usize) -> PlanarVec {
        let cols = self.cols as usize;
        let (i, j) = (idx / cols, idx % cols);
        PlanarVec::new(
            (2 * i + 1) as f64 / (2.0 * self.rows as f64),
            (2 * j + 1) as f64 / (2.0 * self.cols as f64),
        )
    }

    pub fn points(&self) -> Vec<PlanarVec> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

impl From<[u32; 2]> for Grid {
    fn from([rows, cols]: [u32; 2]) -> Self {
        Self { rows, cols }
    }
}

impl From<Grid> for [u32; 2] {
    fn from(g: Grid) -> Self {
        [g.rows, g.cols]
    }
}

/// One orbit's displacement average at one horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationSample {
    pub start: PlanarVec,
    pub horizon: u64,
    pub displacement_average: PlanarVec,
}

impl RotationSample {
    /// Recomputes the average from `start` and `horizon`.
    pub fn recompute(&self, lift: &TorusLift) -> Result<PlanarVec> {
        rotation_vector(lift, self.start, self.horizon)
    }
}

/// Outer empirical picture of a rotation set with convergence diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationSetEstimate {
    pub map_id: String,
    pub grid: Grid,
    pub horizons: Vec<u64>,
    pub samples: Vec<RotationSample>,
    pub hull: ConvexPolygon,
    pub per_horizon_hulls: Vec<ConvexPolygon>,
    /// Hausdorff distances between consecutive per-horizon hulls.
    pub horizon_distances: Vec<f64>,
    /// Hausdorff distance between the last two per-horizon hulls.
    pub stability: f64,
}

impl RotationSetEstimate {
    pub fn area(&self) -> f64 {
        polygon_area(&self.hull)
    }
}

/// Displacement averages of one orbit at each of the ascending `horizons`.
pub fn displacement_averages(
    lift: &TorusLift,
    start: PlanarVec,
    horizons: &[u64],
) -> Result<Vec<PlanarVec>> {
    if !start.is_finite() {
        return Err(Error::domain(format!("non-finite start {start}")));
    }
    let origin = LiftedPoint::from_planar(start);
    let mut current = origin;
    let mut done = 0;
    let mut out = Vec::with_capacity(horizons.len());
    for &n in horizons {
        if n == 0 || n < done {
            return Err(Error::domain("horizons must be positive and ascending"));
        }
        current = advance_checked(lift, start, current, done, n - done)?;
        done = n;
        out.push(current.displacement_from(origin) * (1.0 / n as f64));
    }
    Ok(out)
}

/// `(Fⁿ(p) − p)/n`.
pub fn rotation_vector(lift: &TorusLift, p: PlanarVec, n: u64) -> Result<PlanarVec> {
    if n == 0 {
        return Err(Error::domain("rotation horizon must be positive"));
    }
    Ok(displacement_averages(lift, p, &[n])?[0])
}

fn check_horizons(horizons: &[u64]) -> Result<()> {
    if horizons.len() < 2 {
        return Err(Error::domain(
            "at least two horizons are needed for a stability diagnostic",
        ));
    }
    if horizons[0] == 0 || horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("horizons must be positive and strictly ascending"));
    }
    if *horizons.last().unwrap() < MIN_FINAL_HORIZON {
        return Err(Error::domain(format!(
            "final horizon must be at least {MIN_FINAL_HORIZON}"
        )));
    }
    Ok(())
}

/// Hull of displacement averages over `grid` at each horizon.
pub fn estimate_rotation_set(
    lift: &TorusLift,
    grid: Grid,
    horizons: &[u64],
) -> Result<RotationSetEstimate> {
    if grid.is_empty() {
        return Err(Error::domain("rotation-set grid is empty"));
    }
    check_horizons(horizons)?;

    let per_start: Vec<Result<Vec<PlanarVec>>> = (0..grid.len())
        .into_par_iter()
        .map(|idx| displacement_averages(lift, grid.point(idx), horizons))
        .collect();
    let per_start = first_error(per_start)?;

    let per_horizon_hulls = (0..horizons.len())
        .map(|h| {
            let averages: Vec<PlanarVec> = per_start.iter().map(|a| a[h]).collect();
            convex_hull(&averages)
        })
        .collect::<Result<Vec<_>>>()?;
    let horizon_distances: Vec<f64> = per_horizon_hulls
        .windows(2)
        .map(|w| hausdorff_distance(&w[0], &w[1]))
        .collect();
    let stability = *horizon_distances.last().unwrap();
    let last = horizons.len() - 1;
    let samples = per_start
        .iter()
        .enumerate()
        .map(|(idx, a)| RotationSample {
            start: grid.point(idx),
            horizon: horizons[last],
            displacement_average: a[last],
        })
        .collect();

    Ok(RotationSetEstimate {
        map_id: lift.label(),
        grid,
        horizons: horizons.to_vec(),
        samples,
        hull: per_horizon_hulls[last].clone(),
        per_horizon_hulls,
        horizon_distances,
        stability,
    })
}

/// Discrepancy between the estimate for `F^k` and `k` times the estimate for `F`.
///
/// The iterate is run for `h/k` steps at each base horizon `h`, so both
/// sides follow orbits of the same total length.
pub fn check_iterate_scaling(
    lift: &TorusLift,
    k: u32,
    grid: Grid,
    horizons: &[u64],
) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain("iterate scaling needs k ≥ 2"));
    }
    let k64 = u64::from(k);
    if let Some(h) = horizons.iter().find(|h| *h % k64 != 0) {
        return Err(Error::domain(format!("horizon {h} is not divisible by k = {k}")));
    }
    let scaled: Vec<u64> = horizons.iter().map(|h| h / k64).collect();
    let base = estimate_rotation_set(lift, grid, horizons)?;
    let iterated = estimate_rotation_set(&TorusLift::iterate(lift.clone(), k)?, grid, &scaled)?;
    let expected = affine_image(&base.hull, f64::from(k), PlanarVec::ZERO)?;
    Ok(hausdorff_distance(&iterated.hull, &expected))
}

/// Discrepancy between the estimate for `F + v` and the estimate for `F` shifted by `v`.
pub fn check_translation_equivariance(
    lift: &TorusLift,
    v: LatticeVec,
    grid: Grid,
    horizons: &[u64],
) -> Result<f64> {
    let base = estimate_rotation_set(lift, grid, horizons)?;
    let shifted = estimate_rotation_set(
        &TorusLift::integer_translate(lift.clone(), v),
        grid,
        horizons,
    )?;
    let expected = affine_image(&base.hull, 1.0, PlanarVec::from(v))?;
    Ok(hausdorff_distance(&shifted.hull, &expected))
}

/// Area above `area_threshold`, judged only once the hull has settled to
/// within a tenth of the threshold.
pub fn interior_nonempty(est: &RotationSetEstimate, area_threshold: f64) -> bool {
    est.area() > area_threshold && est.stability < area_threshold / 10.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::DEFAULT_ROTATION;

    #[test]
    fn grid_is_half_cell_offset() {
        let g = Grid::new(4, 2);
        assert_eq!(g.point(0), PlanarVec::new(0.125, 0.25));
        assert_eq!(g.point(1), PlanarVec::new(0.125, 0.75));
        assert_eq!(g.point(7), PlanarVec::new(0.875, 0.75));
    }

    #[test]
    fn translation_rotation_vector() {
        let t = TorusLift::Translation(DEFAULT_ROTATION);
        for p in [PlanarVec::ZERO, PlanarVec::new(0.9, 0.3)] {
            let rv = rotation_vector(&t, p, 1000).unwrap();
            assert!((rv - DEFAULT_ROTATION).norm_inf() <= 1e-12, "{rv}");
        }
    }

    #[test]
    fn lm_vertex_rotation_vector_is_exact() {
        let rv = rotation_vector(&TorusLift::lm(), PlanarVec::new(0.5, 0.0), 100).unwrap();
        assert_eq!(rv, PlanarVec::new(0.0, 1.0));
    }

    #[test]
    fn identity_rotation_vector() {
        for n in [1, 7, 300] {
            let rv = rotation_vector(&TorusLift::Identity, PlanarVec::new(0.2, 0.4), n).unwrap();
            assert_eq!(rv, PlanarVec::ZERO);
        }
    }

    #[test]
    fn horizon_validation() {
        let id = TorusLift::Identity;
        let g = Grid::square(2);
        assert!(estimate_rotation_set(&id, g, &[100]).is_err());
        assert!(estimate_rotation_set(&id, g, &[10, 50]).is_err());
        assert!(estimate_rotation_set(&id, g, &[200, 100]).is_err());
        assert!(estimate_rotation_set(&id, Grid::new(0, 3), &[10, 100]).is_err());
        assert!(check_iterate_scaling(&id, 3, g, &[100, 200]).is_err());
        assert!(check_iterate_scaling(&id, 1, g, &[100, 200]).is_err());
    }

    #[test]
    fn identity_estimate_is_origin() {
        let est = estimate_rotation_set(&TorusLift::Identity, Grid::square(8), &[10, 100]).unwrap();
        assert_eq!(est.hull, ConvexPolygon::point(PlanarVec::ZERO));
        assert_eq!(est.stability, 0.0);
        assert_eq!(est.per_horizon_hulls.len(), 2);
        assert!(!interior_nonempty(&est, 0.1));
    }

    #[test]
    fn samples_recompute_and_lie_in_hull() {
        let lm = TorusLift::lm();
        let est = estimate_rotation_set(&lm, Grid::square(8), &[20, 100]).unwrap();
        for s in &est.samples {
            assert!((s.recompute(&lm).unwrap() - s.displacement_average).norm_inf() <= 1e-12);
            assert!(est.hull.contains(s.displacement_average, 1e-12));
        }
    }

    #[test]
    fn blowup_reports_start() {
        let huge = TorusLift::VerticalTentShear { amplitude: f64::MAX };
        let err = estimate_rotation_set(&huge, Grid::square(2), &[10, 100]).unwrap_err();
        assert!(
            matches!(err, Error::Iteration { start, .. } if start == PlanarVec::new(0.25, 0.25)),
            "{err:?}"
        );
    }
}
