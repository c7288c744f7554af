//! `rotaset`: rotation sets, entropy, periodic orbits and coverings of torus maps.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rotaset::{parallel, CoveringTorus, LatticeVec, MapSpec, PlanarVec};

use crate::config::*;

/// A comma list or range parsed into one value; a bare `Vec` would make clap
/// expect repeated flags.
type List<T> = Vec<T>;

#[derive(Parser, Debug)]
#[command(name = "rotaset", version, about = "Numerical toolkit for torus homeomorphisms isotopic to the identity")]
struct Cli {
    /// Artifact directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Worker threads; outputs do not depend on this.
    #[arg(long, global = true, env = parallel::WORKERS_ENV)]
    workers: Option<usize>,

    /// JSON file whose keys override the command-line parameters.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the rotation set on a grid of starts.
    Rotset(RotsetArgs),
    /// Estimate topological entropy from (n, ε) spanning counts.
    Entropy(EntropyArgs),
    /// Search for periodic orbits with exact rotation vectors.
    Periodic(PeriodicArgs),
    /// Score transitivity on a finite covering by cell occupancy.
    Cover(CoverArgs),
    /// Check one structural property and exit 0 iff it holds within tolerance.
    Verify(VerifyArgs),
    /// List the built-in map names.
    MapsList,
}

#[derive(Args, Debug, Clone)]
struct MapArgs {
    /// Built-in map name (see `maps-list`).
    #[arg(long, default_value = "lm")]
    map: String,
    /// JSON map specification `{"map": ..., "params": {...}}`; replaces --map.
    #[arg(long)]
    map_file: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    amplitude: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, value_parser = parse_point)]
    center: Option<PlanarVec>,
}

impl MapArgs {
    fn spec(&self) -> anyhow::Result<MapSpec> {
        if let Some(path) = &self.map_file {
            let text = std::fs::read_to_string(path)?;
            return Ok(MapSpec::from_json(&text)?);
        }
        let mut spec = MapSpec::new(self.map.as_str());
        let scalars = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("amplitude", self.amplitude),
            ("radius", self.radius),
        ];
        for (key, value) in scalars {
            if let Some(v) = value {
                spec = spec.with_param(key, v);
            }
        }
        if let Some(c) = self.center {
            spec = spec.with_param("center", serde_json::json!([c.x, c.y]));
        }
        Ok(spec)
    }
}

#[derive(Args, Debug)]
struct RotsetArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Starts per side of the square grid.
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: u32,
    #[arg(long, value_parser = parse_list, default_value = "100,500,2000")]
    horizons: List<u64>,
    /// Area threshold of the interior verdict.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    /// Also write an SVG of the hull over the sample cloud.
    #[arg(long)]
    svg: bool,
    /// Skip the CSV of samples.
    #[arg(long)]
    no_csv: bool,
}

#[derive(Args, Debug)]
struct EntropyArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, value_parser = parse_floats, default_value = "0.1,0.05")]
    eps: List<f64>,
    #[arg(long, value_parser = parse_list, default_value = "2..14")]
    lengths: List<u64>,
    /// Candidate grid points per side.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: u32,
}

#[derive(Args, Debug)]
struct PeriodicArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, default_value_t = 1)]
    period: u32,
    /// Largest |component| of the displacement searched.
    #[arg(long = "box", default_value_t = 2)]
    displacement_box: u32,
    /// Newton seeds per side.
    #[arg(long, default_value_t = DEFAULT_SEEDS)]
    seeds: u32,
    /// Covering for the parity certificate, e.g. 2x2.
    #[arg(long, value_parser = parse_cover)]
    cover: Option<CoveringTorus>,
}

#[derive(Args, Debug)]
struct CoverArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, value_parser = parse_cover, default_value = "2x2")]
    factors: CoveringTorus,
    #[arg(long, default_value_t = DEFAULT_COVER_ITERATIONS)]
    iters: u64,
    /// Cells per unit length.
    #[arg(long, default_value_t = DEFAULT_CELL_RESOLUTION)]
    resolution: u32,
    /// Start point `x,y`; repeatable.
    #[arg(long = "start", value_parser = parse_point)]
    starts: Vec<PlanarVec>,
    /// Score the iterates f^N for N up to this bound.
    #[arg(long = "iterate", default_value_t = DEFAULT_MAX_ITERATE)]
    max_iterate: u32,
    /// Also write the occupancy grid of f as a PGM image.
    #[arg(long)]
    pgm: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    map: MapArgs,
    /// iterate-scaling | translation | sandwich | parity
    #[arg(long)]
    property: String,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: u32,
    #[arg(long, value_parser = parse_list, default_value = "100,500,2000")]
    horizons: List<u64>,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, value_parser = parse_lattice, default_value = "1,0", allow_hyphen_values = true)]
    v: LatticeVec,
    #[arg(long, default_value_t = 1)]
    period: u32,
    #[arg(long = "box", default_value_t = 2)]
    displacement_box: u32,
    #[arg(long, default_value_t = DEFAULT_SEEDS)]
    seeds: u32,
    #[arg(long, value_parser = parse_lattice, default_value = "0,0", allow_hyphen_values = true)]
    k2: LatticeVec,
    #[arg(long, default_value_t = 1)]
    n2: u32,
    #[arg(long, value_parser = parse_lattice, default_value = "0,0", allow_hyphen_values = true)]
    k3: LatticeVec,
    #[arg(long, default_value_t = 1)]
    n3: u32,
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let cfg = cli.config.as_deref();
    let ctx = commands::Context { out: cli.out };
    let code = match cli.command {
        Command::Rotset(a) => {
            let c = resolve(
                RotsetConfig {
                    map: a.map.spec()?,
                    grid: a.grid,
                    horizons: a.horizons,
                    threshold: a.threshold,
                    svg: a.svg,
                    csv: !a.no_csv,
                },
                cfg,
            )?;
            with_pool(cli.workers, || commands::rotset(&ctx, &c))?
        }
        Command::Entropy(a) => {
            let c = resolve(
                EntropyConfig {
                    map: a.map.spec()?,
                    epsilons: a.eps,
                    lengths: a.lengths.iter().map(|&n| n as usize).collect(),
                    resolution: a.resolution,
                },
                cfg,
            )?;
            with_pool(cli.workers, || commands::entropy(&ctx, &c))?
        }
        Command::Periodic(a) => {
            let c = resolve(
                PeriodicConfig {
                    map: a.map.spec()?,
                    period: a.period,
                    displacement_box: a.displacement_box,
                    seeds: a.seeds,
                    cover: a.cover,
                },
                cfg,
            )?;
            with_pool(cli.workers, || commands::periodic(&ctx, &c))?
        }
        Command::Cover(a) => {
            let starts = if a.starts.is_empty() { vec![DEFAULT_COVER_START] } else { a.starts };
            let c = resolve(
                CoverConfig {
                    map: a.map.spec()?,
                    factors: a.factors,
                    iterations: a.iters,
                    cell_resolution: a.resolution,
                    starts,
                    max_iterate: a.max_iterate,
                    pgm: a.pgm,
                },
                cfg,
            )?;
            with_pool(cli.workers, || commands::cover(&ctx, &c))?
        }
        Command::Verify(a) => {
            let c = resolve(
                VerifyConfig {
                    property: a.property,
                    map: a.map.spec()?,
                    grid: a.grid,
                    horizons: a.horizons,
                    k: a.k,
                    v: a.v,
                    period: a.period,
                    displacement_box: a.displacement_box,
                    seeds: a.seeds,
                    k2: a.k2,
                    n2: a.n2,
                    k3: a.k3,
                    n3: a.n3,
                },
                cfg,
            )?;
            with_pool(cli.workers, || commands::verify(&ctx, &c))?
        }
        Command::MapsList => {
            for name in rotaset::maps::builtin_names() {
                println!("{name}");
            }
            0
        }
    };
    Ok(code)
}

fn with_pool<F>(workers: Option<usize>, f: F) -> anyhow::Result<u8>
where
    F: FnOnce() -> anyhow::Result<u8> + Send,
{
    let workers = workers.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });
    parallel::with_workers(workers, f)?
}

/// 2 for invalid input, 3 for orbits that blow up, 1 for anything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<InvalidConfig>().is_some() {
        return 2;
    }
    match err.downcast_ref::<rotaset::Error>() {
        Some(rotaset::Error::Domain(_) | rotaset::Error::InvalidSpec(_)) => 2,
        Some(rotaset::Error::Iteration { .. }) => 3,
        _ => 1,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
fn execute<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return u8::try_from(err.exit_code()).unwrap_or(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code(&err)
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(execute(std::env::args_os()))
}

#[cfg(test)]
mod golden;
