#![allow(dead_code)]

use rotaset::maps::DEFAULT_ROTATION;
use rotaset::{Axis, LocalizedShear, PlanarVec, TorusLift};

pub fn v(x: f64, y: f64) -> PlanarVec {
    PlanarVec::new(x, y)
}

/// Every built-in map family at its default parameters, plus a few
/// compositions and iterates.
pub fn builtin_maps() -> Vec<(&'static str, TorusLift)> {
    let shear = LocalizedShear::new(v(0.3, 0.6), 0.2, 2.0, Axis::Horizontal).unwrap();
    vec![
        ("identity", TorusLift::Identity),
        ("rotation", TorusLift::Translation(DEFAULT_ROTATION)),
        ("lm", TorusLift::lm()),
        ("horseshoe_disk", TorusLift::default_horseshoe_disk()),
        ("vertical_tent_shear", TorusLift::VerticalTentShear { amplitude: 1.0 }),
        ("horizontal_tent_shear", TorusLift::HorizontalTentShear { amplitude: 0.7 }),
        ("localized_shear", TorusLift::LocalizedShear(shear)),
        ("lm_squared", TorusLift::iterate(TorusLift::lm(), 2).unwrap()),
        (
            "integer_translate",
            TorusLift::integer_translate(TorusLift::lm(), rotaset::LatticeVec::new(-1, 2)),
        ),
    ]
}
