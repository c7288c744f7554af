//! Numerical tools for homeomorphisms of the 2-torus isotopic to the
//! identity: rotation vectors and rotation sets, periodic orbits with exact
//! rational rotation vectors, topological entropy estimates and finite
//! coverings.

pub mod covering;
pub mod entropy;
pub mod error;
pub mod export;
pub mod geometry;
pub mod maps;
pub mod parallel;
pub mod periodic;
pub mod rotation;

pub use covering::{
    deck_translations, lift_to_covering, transitivity_score, CoveringMap, CoveringTorus,
    TransitivityReport, TransitivityVerdict,
};
pub use entropy::{count_spanning, dynamical_distance, estimate_entropy, EntropyEstimate};
pub use error::{Error, Result};
pub use geometry::{affine_image, convex_hull, hausdorff_distance, polygon_area, ConvexPolygon};
pub use maps::{
    iterate, project_to_torus, tent, torus_distance, Axis, LatticeVec, LiftedPoint,
    LocalizedShear, MapSpec, PlanarVec, TorusLift,
};
pub use periodic::{
    certificate_from_orbits, find_periodic, parity_certificate, realized_vectors, sandwich_gap,
    split_even, ParityCertificate, PeriodicOrbit,
    PeriodicSearch, RationalVec,
};
pub use rotation::{
    check_iterate_scaling, check_translation_equivariance, estimate_rotation_set,
    interior_nonempty, rotation_vector, Grid, RotationSample, RotationSetEstimate,
};
