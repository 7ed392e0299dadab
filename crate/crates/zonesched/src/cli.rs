//! Command-line interface.
//!
//! Exit codes: 0 success, 1 scenario parse/validation error, 2 unschedulable
//! application, 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use zonesched_core::optimizer::CutSchedule;
use zonesched_core::{run_pipeline, PipelineError, RunReport};

use crate::report;
use crate::scenario::{parse_scenario_file, ScenarioError};
use crate::synth;

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_UNSCHEDULABLE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "zonesched",
    version,
    about = "Dependency-aware container placement simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline over a scenario file and emit stage reports.
    Run {
        scenario: PathBuf,
        /// Override the scenario's cut checkpoints, e.g. 20,40,60,80,100
        #[arg(long, value_delimiter = ',')]
        cut_schedule: Option<Vec<f64>>,
        /// Override the number of request/response rounds
        #[arg(long)]
        reps: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario's synthesis seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Parse and validate a scenario file without running it.
    Validate { scenario: PathBuf },
    /// Generate a scenario with a synthetic dependency matrix.
    Synth {
        #[arg(long)]
        apps: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        zones: usize,
    },
}

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                err.exit();
            }
            eprintln!("{err}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let code = match cli.command {
        Command::Run {
            scenario,
            cut_schedule,
            reps,
            format,
            out,
            seed,
        } => cmd_run(&scenario, cut_schedule, reps, format, out.as_deref(), seed),
        Command::Validate { scenario } => cmd_validate(&scenario),
        Command::Synth {
            apps,
            edges,
            seed,
            out,
            zones,
        } => cmd_synth(apps, edges, seed, &out, zones),
    };
    ExitCode::from(code)
}

fn scenario_error_code(err: &ScenarioError) -> u8 {
    match err {
        ScenarioError::Io { .. } => EXIT_IO,
        _ => EXIT_INVALID,
    }
}

fn emit(report: &RunReport, format: OutputFormat, move_traffic_pct: f64, out: Option<&Path>) -> u8 {
    let rendered = match format {
        OutputFormat::Csv => report::to_csv(report),
        OutputFormat::Text => report::to_text(report, move_traffic_pct),
    };
    match out {
        None => {
            print!("{rendered}");
            EXIT_OK
        }
        Some(path) => match std::fs::write(path, rendered) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("cannot write `{}`: {e}", path.display());
                EXIT_IO
            }
        },
    }
}

fn cmd_run(
    path: &Path,
    cut_schedule: Option<Vec<f64>>,
    reps: Option<u32>,
    format: OutputFormat,
    out: Option<&Path>,
    seed: Option<u64>,
) -> u8 {
    let mut loaded = match parse_scenario_file(path) {
        Ok(loaded) => loaded,
        Err(err) => {
            eprintln!("{err}");
            return scenario_error_code(&err);
        }
    };
    if let Some(fractions) = cut_schedule {
        match CutSchedule::new(fractions) {
            Ok(schedule) => loaded.scenario.cut_schedule = schedule,
            Err(err) => {
                eprintln!("{err}");
                return EXIT_INVALID;
            }
        }
    }
    if let Some(reps) = reps {
        loaded.scenario.cost_params.repetitions = reps;
    }
    if let Some(seed) = seed {
        loaded.scenario.seed = Some(seed);
    }

    match run_pipeline(&loaded.scenario) {
        Ok(report) => emit(&report, format, loaded.move_traffic_pct, out),
        Err(PipelineError::Unschedulable { app, partial }) => {
            eprintln!("unschedulable application `{app}`; report truncated at failure");
            let code = emit(&partial, format, loaded.move_traffic_pct, out);
            if code == EXIT_OK {
                EXIT_UNSCHEDULABLE
            } else {
                code
            }
        }
    }
}

fn cmd_validate(path: &Path) -> u8 {
    match parse_scenario_file(path) {
        Ok(loaded) => {
            let s = &loaded.scenario;
            println!(
                "ok: {} applications ({} batches), {} zones, {} dependencies",
                s.apps.len(),
                s.batch_count().max(1),
                s.zones.len(),
                s.deps.edge_count()
            );
            EXIT_OK
        }
        Err(err) => {
            eprintln!("{err}");
            scenario_error_code(&err)
        }
    }
}

fn cmd_synth(apps: usize, edges: usize, seed: u64, out: &Path, zones: usize) -> u8 {
    if zones == 0 {
        eprintln!("--zones must be positive");
        return EXIT_INVALID;
    }
    let pairs = match synth::synthesize_dependencies(apps, edges, seed) {
        Ok(pairs) => pairs,
        Err(err) => {
            eprintln!("{err}");
            return EXIT_INVALID;
        }
    };
    // Uniform applications; containers leave headroom so the optimizer can
    // actually move things around.
    let per_zone = apps.div_ceil(zones);
    let containers = (2 * per_zone).max(2);
    let app_docs: Vec<serde_json::Value> = (0..apps)
        .map(|i| {
            serde_json::json!({
                "name": format!("A{i}"),
                "cpu_req": 1, "ram_req": 2, "disk_req": 5
            })
        })
        .collect();
    let zone_docs: Vec<serde_json::Value> = (0..zones)
        .map(|z| {
            serde_json::json!({
                "name": format!("zone{z}"),
                "cpu_cap": containers as u64,
                "ram_cap": 2 * containers as u64,
                "disk_cap": 5 * containers as u64,
                "container_count": containers
            })
        })
        .collect();
    let deps: Vec<serde_json::Value> = pairs
        .iter()
        .map(|&(a, b)| serde_json::json!([format!("A{a}"), format!("A{b}")]))
        .collect();
    let doc = serde_json::json!({
        "zones": zone_docs,
        "applications": app_docs,
        "dependencies": deps,
        "seed": seed
    });
    let text = serde_json::to_string_pretty(&doc).expect("document serializes");
    match std::fs::write(out, text + "\n") {
        Ok(()) => {
            println!("wrote {} ({apps} apps, {edges} edges, seed {seed})", out.display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("cannot write `{}`: {e}", out.display());
            EXIT_IO
        }
    }
}
