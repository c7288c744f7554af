//! Fixtures shared by the criterion benchmarks.

use rotaset::{PlanarVec, TorusLift};

/// The built-in maps benchmarked by name.
pub fn builtin_maps() -> Vec<(&'static str, TorusLift)> {
    vec![
        ("identity", TorusLift::Identity),
        ("rotation", TorusLift::Translation(rotaset::maps::DEFAULT_ROTATION)),
        ("lm", TorusLift::lm()),
        ("horseshoe_disk", TorusLift::default_horseshoe_disk()),
    ]
}

/// A deterministic low-discrepancy cloud of `n` points in `[0,1)²`.
pub fn cloud(n: usize) -> Vec<PlanarVec> {
    const G: f64 = 1.324_717_957_244_746;
    let (a1, a2) = (1.0 / G, 1.0 / (G * G));
    (0..n)
        .map(|i| {
            let i = i as f64 + 1.0;
            PlanarVec::new((0.5 + a1 * i).fract(), (0.5 + a2 * i).fract())
        })
        .collect()
}
