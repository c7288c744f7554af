use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{Axis, LatticeVec, LocalizedShear, PlanarVec, TorusLift, DEFAULT_ROTATION};
use crate::error::{Error, Result};

/// JSON description of a lift: `{"map": <name>, "params": {...}}`.
///
/// Missing parameters take their defaults; unknown parameters are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub map: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

const BUILTINS: &[&str] = &[
    "identity",
    "rotation",
    "lm",
    "horseshoe_disk",
    "vertical_tent_shear",
    "horizontal_tent_shear",
    "localized_shear",
    "compose",
    "iterate",
    "integer_translate",
];

/// Map names accepted by [`MapSpec::build`].
pub fn builtin_names() -> &'static [&'static str] {
    BUILTINS
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RotationParams {
    #[serde(default = "default_alpha")]
    alpha: f64,
    #[serde(default = "default_beta")]
    beta: f64,
}

fn default_alpha() -> f64 {
    DEFAULT_ROTATION.x
}

fn default_beta() -> f64 {
    DEFAULT_ROTATION.y
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AmplitudeParams {
    #[serde(default = "one")]
    amplitude: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HorseshoeParams {
    #[serde(default = "default_center")]
    center: PlanarVec,
    #[serde(default = "default_radius")]
    radius: f64,
    #[serde(default = "default_twist")]
    amplitude: f64,
}

fn default_center() -> PlanarVec {
    PlanarVec::new(0.5, 0.5)
}

fn default_radius() -> f64 {
    super::HORSESHOE_RADIUS
}

fn default_twist() -> f64 {
    super::HORSESHOE_AMPLITUDE
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ShearParams {
    #[serde(default = "default_center")]
    center: PlanarVec,
    #[serde(default = "default_radius")]
    radius: f64,
    #[serde(default = "default_twist")]
    amplitude: f64,
    axis: Axis,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComposeParams {
    maps: Vec<MapSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IterateParams {
    base: MapSpec,
    k: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TranslateParams {
    base: MapSpec,
    v: LatticeVec,
}

impl MapSpec {
    pub fn new(map: impl Into<String>) -> Self {
        Self {
            map: map.into(),
            params: Map::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    fn params<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(Value::Object(self.params.clone()))
            .map_err(|e| Error::InvalidSpec(format!("{}: {e}", self.map)))
    }

    fn no_params(&self) -> Result<()> {
        if self.params.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("{} takes no parameters", self.map)))
        }
    }

    /// Builds and validates the lift described by this spec.
    pub fn build(&self) -> Result<TorusLift> {
        let lift = match self.map.as_str() {
            "identity" => {
                self.no_params()?;
                TorusLift::Identity
            }
            "rotation" | "translation" => {
                let p: RotationParams = self.params()?;
                TorusLift::Translation(PlanarVec::new(p.alpha, p.beta))
            }
            "lm" => {
                let p: AmplitudeParams = self.params()?;
                TorusLift::lm_with_amplitude(p.amplitude)
            }
            "horseshoe_disk" => {
                let p: HorseshoeParams = self.params()?;
                TorusLift::horseshoe_disk(p.center, p.radius, p.amplitude)
                    .map_err(|e| Error::InvalidSpec(e.to_string()))?
            }
            "vertical_tent_shear" => {
                let p: AmplitudeParams = self.params()?;
                TorusLift::VerticalTentShear {
                    amplitude: p.amplitude,
                }
            }
            "horizontal_tent_shear" => {
                let p: AmplitudeParams = self.params()?;
                TorusLift::HorizontalTentShear {
                    amplitude: p.amplitude,
                }
            }
            "localized_shear" => {
                let p: ShearParams = self.params()?;
                TorusLift::LocalizedShear(
                    LocalizedShear::new(p.center, p.radius, p.amplitude, p.axis)
                        .map_err(|e| Error::InvalidSpec(e.to_string()))?,
                )
            }
            "compose" => {
                let p: ComposeParams = self.params()?;
                TorusLift::Composition(
                    p.maps
                        .iter()
                        .map(MapSpec::build)
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            "iterate" => {
                let p: IterateParams = self.params()?;
                TorusLift::iterate(p.base.build()?, p.k)
                    .map_err(|e| Error::InvalidSpec(e.to_string()))?
            }
            "integer_translate" => {
                let p: TranslateParams = self.params()?;
                TorusLift::integer_translate(p.base.build()?, p.v)
            }
            other => {
                return Err(Error::InvalidSpec(format!(
                    "unknown map `{other}` (known: {})",
                    BUILTINS.join(", ")
                )))
            }
        };
        lift.validate()
            .map_err(|e| Error::InvalidSpec(e.to_string()))?;
        Ok(lift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_defaults() {
        assert_eq!(MapSpec::new("lm").build().unwrap(), TorusLift::lm());
        assert_eq!(
            MapSpec::new("rotation").build().unwrap(),
            TorusLift::Translation(DEFAULT_ROTATION)
        );
        assert_eq!(
            MapSpec::new("horseshoe_disk").build().unwrap(),
            TorusLift::default_horseshoe_disk()
        );
    }

    #[test]
    fn parses_nested_json() {
        let spec = MapSpec::from_json(
            r#"{"map": "compose", "params": {"maps": [
                {"map": "rotation", "params": {"alpha": 0.5, "beta": 0}},
                {"map": "iterate", "params": {"base": {"map": "lm"}, "k": 2}},
                {"map": "integer_translate", "params": {"base": {"map": "identity"}, "v": [1, -2]}}
            ]}}"#,
        )
        .unwrap();
        let lift = spec.build().unwrap();
        let TorusLift::Composition(parts) = &lift else {
            panic!("expected composition")
        };
        assert_eq!(parts.len(), 3);
        assert_eq!(
            parts[2],
            TorusLift::integer_translate(TorusLift::Identity, LatticeVec::new(1, -2))
        );
    }

    #[test]
    fn rejects_bad_specs() {
        for text in [
            r#"{"map": "anosov"}"#,
            r#"{"map": "lm", "params": {"amplitud": 2}}"#,
            r#"{"map": "identity", "params": {"x": 1}}"#,
            r#"{"map": "horseshoe_disk", "params": {"radius": 0.7}}"#,
            r#"{"map": "iterate", "params": {"base": {"map": "lm"}, "k": 0}}"#,
        ] {
            let built = MapSpec::from_json(text).and_then(|s| s.build());
            assert!(matches!(built, Err(Error::InvalidSpec(_))), "{text}");
        }
    }
}
