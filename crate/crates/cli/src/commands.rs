//! Command bodies. Each writes canonical JSON artifacts under the output
//! directory and prints a short summary.

use std::path::PathBuf;

use anyhow::Context as _;
use rotaset::export::{entropy_csv, hull_svg, samples_csv, to_canonical_json};
use rotaset::{
    certificate_from_orbits, check_iterate_scaling, check_translation_equivariance,
    estimate_entropy, estimate_rotation_set, find_periodic, interior_nonempty, parity_certificate,
    realized_vectors, sandwich_gap, transitivity_score, Grid, MapSpec, TorusLift,
};
use serde::Serialize;
use serde_json::json;

use crate::config::{
    invalid, CoverConfig, EntropyConfig, PeriodicConfig, RotsetConfig, VerifyConfig,
};

pub const TRANSLATION_TOLERANCE: f64 = 1e-9;
pub const ITERATE_SCALING_TOLERANCE: f64 = 0.1;

pub struct Context {
    pub out: PathBuf,
}

impl Context {
    fn write(&self, name: &str, contents: &str) -> anyhow::Result<()> {
        std::fs::create_dir_all(&self.out)
            .with_context(|| format!("creating {}", self.out.display()))?;
        let path = self.out.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
    }

    fn write_json<T: Serialize + ?Sized>(&self, name: &str, value: &T) -> anyhow::Result<()> {
        self.write(name, &to_canonical_json(value)?)
    }

    /// Writes the resolved config so that `--config` on it reproduces the run.
    fn write_config<T: Serialize>(&self, command: &str, config: &T) -> anyhow::Result<()> {
        self.write_json(&format!("{command}_config.json"), config)
    }
}

fn build(spec: &MapSpec) -> anyhow::Result<TorusLift> {
    Ok(spec.build()?)
}

pub fn rotset(ctx: &Context, c: &RotsetConfig) -> anyhow::Result<u8> {
    let lift = build(&c.map)?;
    let est = estimate_rotation_set(&lift, Grid::square(c.grid), &c.horizons)?;
    let area = est.area();
    let verdict = interior_nonempty(&est, c.threshold);

    ctx.write_config("rotset", c)?;
    ctx.write_json(
        "rotset.json",
        &json!({
            "config": c,
            "estimate": est,
            "area": area,
            "stability": est.stability,
            "interior_nonempty": verdict,
        }),
    )?;
    if c.csv {
        ctx.write("rotset_samples.csv", &samples_csv(&est))?;
    }
    if c.svg {
        let cloud: Vec<_> = est.samples.iter().map(|s| s.displacement_average).collect();
        ctx.write("rotset.svg", &hull_svg(&est.hull, &cloud))?;
    }

    println!("map        {}", est.map_id);
    println!("vertices   {}", est.hull.vertices().len());
    for v in est.hull.vertices() {
        println!("           ({}, {})", v.x, v.y);
    }
    println!("area       {area}");
    println!("stability  {}", est.stability);
    println!("interior   {verdict} (threshold {})", c.threshold);
    Ok(0)
}

pub fn entropy(ctx: &Context, c: &EntropyConfig) -> anyhow::Result<u8> {
    let lift = build(&c.map)?;
    let est = estimate_entropy(&lift, &c.epsilons, &c.lengths, c.resolution)?;
    let violations = est.monotonicity_violations();

    ctx.write_config("entropy", c)?;
    ctx.write_json(
        "entropy.json",
        &json!({
            "config": c,
            "estimate": est,
            "monotonicity_violations": violations,
            "constant_in_n": est.is_constant_in_n(),
        }),
    )?;
    ctx.write("entropy.csv", &entropy_csv(&est))?;

    println!("map        {}", lift.label());
    for (eps, slope) in est.epsilons.iter().zip(&est.slopes) {
        match slope {
            Some(s) => println!("eps {eps:<6} slope {s}"),
            None => println!("eps {eps:<6} slope unresolved"),
        }
    }
    println!("entropy    {}", est.estimate);
    println!("violations {violations}");
    Ok(0)
}

pub fn periodic(ctx: &Context, c: &PeriodicConfig) -> anyhow::Result<u8> {
    let lift = build(&c.map)?;
    let search = find_periodic(&lift, c.period, c.displacement_box, Grid::square(c.seeds))?;
    let realized = if search.orbits.is_empty() {
        None
    } else {
        Some(realized_vectors(&search.orbits)?)
    };
    let certificate = match c.cover {
        Some(cover) if cover.factors() == (2, 2) => certificate_from_orbits(&search.orbits)
            .map(|(i, j, cert)| json!({"orbits": [i, j], "certificate": cert})),
        Some(cover) => {
            return Err(invalid(format!(
                "the parity certificate needs the 2x2 covering, got {cover}"
            ))
            .into())
        }
        None => None,
    };

    ctx.write_config("periodic", c)?;
    ctx.write_json(
        "periodic.json",
        &json!({
            "config": c,
            "search": search,
            "realized_hull": realized,
            "parity": certificate,
        }),
    )?;

    println!("map        {}", lift.label());
    println!("orbits     {}", search.distinct_orbits);
    if search.non_isolated {
        println!("           non-isolated; {} sampled", search.orbits.len());
    }
    for o in &search.orbits {
        let r = o.rotation_vector;
        println!(
            "  ({}, {})  rotation ({}, {})/{}  residual {:e}",
            o.point.x, o.point.y, r.num.x, r.num.y, r.den, o.residual
        );
    }
    if c.cover.is_some() {
        match &certificate {
            Some(cert) => println!("parity     {}", cert["certificate"]),
            None => println!("parity     no orbits in deck classes (1,0) and (0,1)"),
        }
    }
    Ok(0)
}

pub fn cover(ctx: &Context, c: &CoverConfig) -> anyhow::Result<u8> {
    let lift = build(&c.map)?;
    if c.max_iterate == 0 {
        return Err(invalid("the iterate bound must be at least 1").into());
    }
    let mut reports = Vec::with_capacity(c.max_iterate as usize);
    for n in 1..=c.max_iterate {
        let f_n = if n == 1 { lift.clone() } else { TorusLift::iterate(lift.clone(), n)? };
        let report = transitivity_score(&f_n, c.factors, &c.starts, c.iterations, c.cell_resolution)?;
        reports.push((n, report));
    }

    ctx.write_config("cover", c)?;
    let entries: Vec<_> = reports
        .iter()
        .map(|(n, r)| json!({"iterate": n, "report": r, "verdict": r.verdict()}))
        .collect();
    ctx.write_json("cover.json", &json!({"config": c, "iterates": entries}))?;
    if c.pgm {
        ctx.write("cover.pgm", &reports[0].1.to_pgm())?;
    }

    println!("map        {}", lift.label());
    println!("covering   {}", c.factors);
    for (n, r) in &reports {
        println!("f^{n:<2}       occupancy {}  {}", r.occupancy, verdict_name(r));
    }
    Ok(0)
}

fn verdict_name(r: &rotaset::TransitivityReport) -> String {
    serde_json::to_value(r.verdict())
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

pub fn verify(ctx: &Context, c: &VerifyConfig) -> anyhow::Result<u8> {
    let grid = Grid::square(c.grid);
    let (discrepancy, tolerance, details) = match c.property.as_str() {
        "translation" => {
            let lift = build(&c.map)?;
            let d = check_translation_equivariance(&lift, c.v, grid, &c.horizons)?;
            (d, TRANSLATION_TOLERANCE, json!({"map": lift.label(), "v": c.v}))
        }
        "iterate-scaling" => {
            let lift = build(&c.map)?;
            let d = check_iterate_scaling(&lift, c.k, grid, &c.horizons)?;
            (d, ITERATE_SCALING_TOLERANCE, json!({"map": lift.label(), "k": c.k}))
        }
        "sandwich" => {
            let lift = build(&c.map)?;
            let est = estimate_rotation_set(&lift, grid, &c.horizons)?;
            let search =
                find_periodic(&lift, c.period, c.displacement_box, Grid::square(c.seeds))?;
            if search.orbits.is_empty() {
                // no realized vectors: the inner hull is empty and trivially inside
                let allowance = est.stability + rotaset::periodic::SANDWICH_SLACK;
                (0.0, allowance, json!({"map": lift.label(), "realized_hull": null}))
            } else {
                let inner = realized_vectors(&search.orbits)?;
                let (gap, allowance) = sandwich_gap(&inner, &est);
                (gap, allowance, json!({"map": lift.label(), "realized_hull": inner}))
            }
        }
        "parity" => {
            let cert = parity_certificate(c.k2, c.n2, c.k3, c.n3)?;
            // the discrepancy is 0 for an independent pair and 1 otherwise
            let d = if cert.independent { 0.0 } else { 1.0 };
            (d, 0.0, json!({"certificate": cert}))
        }
        other => {
            return Err(invalid(format!(
                "unknown property `{other}`; expected iterate-scaling, translation, sandwich or parity"
            ))
            .into())
        }
    };
    let pass = discrepancy <= tolerance;

    ctx.write_config("verify", c)?;
    ctx.write_json(
        "verify.json",
        &json!({
            "config": c,
            "property": c.property,
            "discrepancy": discrepancy,
            "tolerance": tolerance,
            "pass": pass,
            "details": details,
        }),
    )?;

    if let Some(cert) = details.get("certificate") {
        println!("determinant {}", cert["determinant"]);
    }
    println!("{}  discrepancy {discrepancy:e}  tolerance {tolerance:e}  {}", c.property, if pass { "PASS" } else { "FAIL" });
    Ok(if pass { 0 } else { 1 })
}
