use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use stringqi::harness::{self, Instance, InstanceSpec};
use stringqi::metricgraph::{metric_pipeline, MetricPlanarGraph};
use stringqi::planarize::planarize_full;

#[derive(Parser)]
#[command(name = "stringqi", version, about = "Planar graphs quasi-isometric to string graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded instance.
    Gen {
        /// grid_polylines, random_triangulation_family, F_ell, metric_random,
        /// outerplanar_random, outerstring_random, edge_cycle or edge_ladder.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Main size parameter: strings, regions, ell, points or length.
        #[arg(long)]
        size: Option<u32>,
        /// Lattice side for grid_polylines.
        #[arg(long, default_value_t = 20)]
        grid: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the pipeline on a string instance and write the certified result.
    Build {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Per-level certificates as JSON lines.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Recheck a result file against its embedded input.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run the pipeline on a metric planar graph.
    Metric {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn spec_for(kind: &str, seed: u64, size: Option<u32>, grid: u32) -> Result<InstanceSpec> {
    Ok(match kind {
        "grid_polylines" => InstanceSpec::GridPolylines { strings: size.unwrap_or(40), grid, seed },
        "random_triangulation_family" => {
            let regions = size.unwrap_or(60);
            InstanceSpec::RandomTriangulationFamily { points: regions * 3 / 2 + 10, regions, seed }
        }
        "F_ell" | "f_ell" => InstanceSpec::FEll { ell: size.unwrap_or(6) },
        "metric_random" => InstanceSpec::MetricRandom { points: size.unwrap_or(12), seed },
        "outerplanar_random" => {
            let vertices = size.unwrap_or(30);
            InstanceSpec::OuterplanarRandom { vertices, regions: vertices / 2 + 2, seed }
        }
        "outerstring_random" => {
            let points = size.unwrap_or(60);
            InstanceSpec::OuterstringRandom { points, regions: points / 2, seed }
        }
        "edge_cycle" => InstanceSpec::EdgeCycle { len: size.unwrap_or(30) },
        "edge_ladder" => InstanceSpec::EdgeLadder { len: size.unwrap_or(20) },
        _ => bail!("unknown kind `{kind}`"),
    })
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { kind, seed, size, grid, out } => {
            let spec = spec_for(&kind, seed, size, grid)?;
            let text = harness::generate(&spec)?.to_json()?;
            write(&out, &text)?;
            println!("{}", spec.name());
        }
        Command::Build { input, out, trace } => {
            let text = read(&input)?;
            let inst = Instance::from_json(&text)?;
            let result = planarize_full(&inst.map, &inst.regions, true)?;
            if let Some(path) = trace {
                let mut f = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                for level in &result.levels {
                    writeln!(f, "{}", serde_json::to_string(level)?)?;
                }
                writeln!(f, "{}", serde_json::json!({ "measured": result.measured }))?;
            }
            write(&out, &harness::result_json(&text, &result, None)?)?;
            let report = harness::verify_result(&read(&out)?)?;
            println!("{}", serde_json::to_string(&report)?);
        }
        Command::Verify { input } => {
            let report = harness::verify_result(&read(&input)?)?;
            println!("{}", serde_json::to_string(&report)?);
        }
        Command::Metric { input, out } => {
            let text = read(&input)?;
            let h = MetricPlanarGraph::from_json(&text)?;
            let (result, report) = metric_pipeline(&h, true)?;
            write(&out, &harness::result_json(&text, &result, Some(&report))?)?;
            let check = harness::verify_result(&read(&out)?)?;
            println!("{}", serde_json::to_string(&check)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
