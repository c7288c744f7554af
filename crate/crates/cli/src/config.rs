//! Serializable run configurations and their assembly from flags and files.

use std::path::Path;

use anyhow::{bail, Context};
use rotaset::{CoveringTorus, LatticeVec, MapSpec, PlanarVec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const DEFAULT_GRID: u32 = 128;
pub const DEFAULT_THRESHOLD: f64 = 0.1;
pub const DEFAULT_RESOLUTION: u32 = 256;
pub const DEFAULT_SEEDS: u32 = 64;
pub const DEFAULT_COVER_ITERATIONS: u64 = 1_000_000;
pub const DEFAULT_CELL_RESOLUTION: u32 = 32;
pub const DEFAULT_MAX_ITERATE: u32 = 8;
pub const DEFAULT_COVER_START: PlanarVec = PlanarVec { x: 0.1, y: 0.2 };

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotsetConfig {
    pub map: MapSpec,
    pub grid: u32,
    pub horizons: Vec<u64>,
    pub threshold: f64,
    pub svg: bool,
    pub csv: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyConfig {
    pub map: MapSpec,
    pub epsilons: Vec<f64>,
    pub lengths: Vec<usize>,
    pub resolution: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicConfig {
    pub map: MapSpec,
    pub period: u32,
    pub displacement_box: u32,
    pub seeds: u32,
    pub cover: Option<CoveringTorus>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverConfig {
    pub map: MapSpec,
    pub factors: CoveringTorus,
    pub iterations: u64,
    pub cell_resolution: u32,
    pub starts: Vec<PlanarVec>,
    /// Iterates `f^N` are scored for `N = 1..=max_iterate`.
    pub max_iterate: u32,
    pub pgm: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub property: String,
    pub map: MapSpec,
    pub grid: u32,
    pub horizons: Vec<u64>,
    pub k: u32,
    pub v: LatticeVec,
    pub period: u32,
    pub displacement_box: u32,
    pub seeds: u32,
    pub k2: LatticeVec,
    pub n2: u32,
    pub k3: LatticeVec,
    pub n3: u32,
}

/// Merges the keys of a JSON config file over the flag-derived config.
pub fn resolve<T>(from_flags: T, file: Option<&Path>) -> anyhow::Result<T>
where
    T: Serialize + DeserializeOwned,
{
    let Some(path) = file else {
        return Ok(from_flags);
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let overrides: Value = serde_json::from_str(&text)
        .map_err(|e| invalid(format!("config {}: {e}", path.display())))?;
    let Value::Object(overrides) = overrides else {
        bail!(invalid(format!("config {} is not a JSON object", path.display())));
    };
    let mut base = serde_json::to_value(from_flags)?;
    let obj = base.as_object_mut().expect("configs serialize to objects");
    for (key, value) in overrides {
        obj.insert(key, value);
    }
    serde_json::from_value(base).map_err(|e| invalid(format!("config {}: {e}", path.display())).into())
}

/// A configuration error, reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InvalidConfig(pub String);

pub fn invalid(msg: impl Into<String>) -> InvalidConfig {
    InvalidConfig(msg.into())
}

/// Parses `a,b,c` or an inclusive range `a..b`.
pub fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (parse_one(a)?, parse_one(b)?);
        if a > b {
            return Err(format!("empty range `{s}`"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(parse_one).collect()
}

fn parse_one<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim().parse().map_err(|_| format!("bad number `{}`", s.trim()))
}

pub fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(parse_one::<f64>).collect()
}

pub fn parse_lattice(s: &str) -> Result<LatticeVec, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("`{s}` is not of the form x,y"))?;
    Ok(LatticeVec::new(parse_one(a)?, parse_one(b)?))
}

pub fn parse_point(s: &str) -> Result<PlanarVec, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("`{s}` is not of the form x,y"))?;
    Ok(PlanarVec::new(parse_one(a)?, parse_one(b)?))
}

pub fn parse_cover(s: &str) -> Result<CoveringTorus, String> {
    s.parse().map_err(|e: rotaset::Error| e.to_string())
}
