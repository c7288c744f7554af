//! Convex polygons in the plane: hulls, areas, Hausdorff distances.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::PlanarVec;

/// Relative tolerance below which three hull vertices count as collinear.
pub const COLLINEAR_TOLERANCE: f64 = 1e-12;

/// A convex polygon with counterclockwise vertices.
///
/// The vertex list starts at the lexicographically smallest vertex, holds no
/// duplicates and no collinear interior vertices. One vertex is a point, two
/// are a segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<PlanarVec>,
}

impl ConvexPolygon {
    pub fn point(p: PlanarVec) -> Self {
        Self { vertices: vec![p] }
    }

    pub fn vertices(&self) -> &[PlanarVec] {
        &self.vertices
    }

    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for (i, a) in v.iter().enumerate() {
            for b in &v[i + 1..] {
                d = d.max((*a - *b).norm());
            }
        }
        d
    }

    fn edges(&self) -> impl Iterator<Item = (PlanarVec, PlanarVec)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Euclidean distance from `p` to the closed polygon; zero inside.
    pub fn distance_to(&self, p: PlanarVec) -> f64 {
        match self.vertices.as_slice() {
            [a] => (p - *a).norm(),
            [a, b] => segment_distance(p, *a, *b),
            _ => {
                if self.edges().all(|(a, b)| (b - a).cross(p - a) >= 0.0) {
                    0.0
                } else {
                    self.edges()
                        .map(|(a, b)| segment_distance(p, a, b))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Point-in-polygon test with an absolute distance tolerance.
    pub fn contains(&self, p: PlanarVec, tolerance: f64) -> bool {
        self.distance_to(p) <= tolerance
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn bounds(&self) -> (PlanarVec, PlanarVec) {
        bounding_box(&self.vertices)
    }

    /// Closed SVG path through the vertices.
    pub fn svg_path(&self) -> String {
        let mut path = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(path, "{cmd}{} {} ", v.x, v.y);
        }
        path.push('Z');
        path
    }

    fn from_ccw(mut vertices: Vec<PlanarVec>) -> Self {
        if let Some(start) = vertices
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.lex_cmp(b.1))
            .map(|(i, _)| i)
        {
            vertices.rotate_left(start);
        }
        Self { vertices }
    }
}

fn bounding_box(points: &[PlanarVec]) -> (PlanarVec, PlanarVec) {
    let mut lo = PlanarVec::new(f64::INFINITY, f64::INFINITY);
    let mut hi = PlanarVec::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo = PlanarVec::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = PlanarVec::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

fn segment_distance(p: PlanarVec, a: PlanarVec, b: PlanarVec) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (p - a).dot(ab) / len2;
    if t <= 0.0 {
        (p - a).norm()
    } else if t >= 1.0 {
        (p - b).norm()
    } else {
        (p - (a + ab * t)).norm()
    }
}

/// Convex hull by Andrew's monotone chain.
pub fn convex_hull(points: &[PlanarVec]) -> Result<ConvexPolygon> {
    if points.is_empty() {
        return Err(Error::domain("convex hull of an empty point set"));
    }
    if let Some(bad) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::domain(format!("non-finite hull input {bad}")));
    }
    let mut pts = points.to_vec();
    pts.sort_by(PlanarVec::lex_cmp);
    pts.dedup();
    if pts.len() == 1 {
        return Ok(ConvexPolygon::point(pts[0]));
    }

    let (lo, hi) = bounding_box(&pts);
    let diag = hi - lo;
    let tol = COLLINEAR_TOLERANCE * diag.dot(diag);
    let turns_left = |o: PlanarVec, a: PlanarVec, b: PlanarVec| (a - o).cross(b - o) > tol;

    let mut hull: Vec<PlanarVec> = Vec::with_capacity(pts.len() + 1);
    for &p in &pts {
        while hull.len() >= 2 && !turns_left(hull[hull.len() - 2], hull[hull.len() - 1], p) {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && !turns_left(hull[hull.len() - 2], hull[hull.len() - 1], p)
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    Ok(ConvexPolygon::from_ccw(hull))
}

/// Shoelace area; zero for points and segments.
pub fn polygon_area(polygon: &ConvexPolygon) -> f64 {
    if polygon.vertices.len() < 3 {
        return 0.0;
    }
    let twice: f64 = polygon.edges().map(|(a, b)| a.cross(b)).sum();
    (0.5 * twice).abs()
}

/// Hausdorff distance between two convex polygons.
///
/// The distance to a convex set is a convex function, so each one-sided
/// supremum is attained at a vertex.
pub fn hausdorff_distance(p: &ConvexPolygon, q: &ConvexPolygon) -> f64 {
    let one_sided = |from: &ConvexPolygon, to: &ConvexPolygon| {
        from.vertices
            .iter()
            .map(|v| to.distance_to(*v))
            .fold(0.0, f64::max)
    };
    one_sided(p, q).max(one_sided(q, p))
}

/// Vertex-wise image `scale·v + offset`.
pub fn affine_image(polygon: &ConvexPolygon, scale: f64, offset: PlanarVec) -> Result<ConvexPolygon> {
    if !scale.is_finite() || !offset.is_finite() {
        return Err(Error::domain("affine image needs finite scale and offset"));
    }
    if scale == 0.0 {
        return Ok(ConvexPolygon::point(offset));
    }
    // a negative scale is a half-turn in the plane, so orientation is kept
    let vertices = polygon
        .vertices
        .iter()
        .map(|v| *v * scale + offset)
        .collect();
    Ok(ConvexPolygon::from_ccw(vertices))
}

/// Axis-aligned rectangle `[lo.x, hi.x] × [lo.y, hi.y]`.
pub fn rectangle(lo: PlanarVec, hi: PlanarVec) -> Result<ConvexPolygon> {
    convex_hull(&[
        lo,
        PlanarVec::new(hi.x, lo.y),
        hi,
        PlanarVec::new(lo.x, hi.y),
    ])
}
