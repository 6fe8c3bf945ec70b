//! Command-line front end: validate configs, generate single graphs,
//! analyze dumped graphs, run full experiments.

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::config::{load_config, ConfigError, DemographyConfig};
use crate::dump::{parse_edge_list, write_edge_list, write_memberships, DumpError};
use crate::experiment::{
    run_experiment, ExperimentError, ExperimentPlan, Stat, DEFAULT_ECCENTRICITY_CUTOFF,
    METRICS_CSV_HEADER,
};
use crate::generate::generate;
use crate::graph::{EdgeLevel, GraphView};
use crate::metrics::{measure_view, MetricsRecord};
use crate::population::SynthesisError;

/// Thread-count cap for the experiment command.
pub const THREADS_ENV: &str = "SOCIOSYNTH_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("--help/--version")]
    HelpRequested(String),
    #[error("cannot read {path}: {source}")]
    ReadFile {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    WriteFile {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Dump(#[from] DumpError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("the requested level view is disconnected; radius/diameter are undefined (raise --ecc-cutoff past n or fix the dump)")]
    DisconnectedAnalysis,
    #[error("invalid {what}: {value}")]
    BadValue { what: &'static str, value: String },
}

#[derive(Debug, Parser)]
#[command(
    name = "sociosynth",
    version,
    about = "Synthesize social graphs from demographic tables and measure their structure"
)]
struct Cli {
    #[command(subcommand)]
    command: RawCommand,
}

#[derive(Debug, Subcommand)]
enum RawCommand {
    /// Check a config document; prints violations, exit 1 when any.
    Validate {
        /// Path of the TOML config document.
        #[arg(long)]
        config: PathBuf,
    },
    /// Generate one graph and dump edges, memberships, and the report.
    Generate {
        #[arg(long)]
        config: PathBuf,
        /// Population size (at least 2). Accepts scientific notation (1e5).
        #[arg(long, value_parser = parse_size_arg)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Also write the expanded level-3 clique edges.
        #[arg(long = "dump-level-3", default_value_t = false)]
        dump_level_3: bool,
    },
    /// Measure a dumped edge list and print one metrics CSV row.
    Analyze {
        /// Path of an edge-list dump.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        levels: LevelsArg,
        /// Node-count cutoff above which radius/diameter are skipped.
        #[arg(long = "ecc-cutoff", default_value_t = DEFAULT_ECCENTRICITY_CUTOFF)]
        ecc_cutoff: usize,
        /// Write the CSV to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the multi-size multi-run protocol, write metrics + plot data.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated sizes (e.g. 1e3,1e4); default: ten log-uniform
        /// points from 1e3 to 1e6.
        #[arg(long, value_delimiter = ',', value_parser = parse_size_arg)]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Fixed repetition count (default: 30 at 1e3 down to 5 at 1e6).
        #[arg(long)]
        reps: Option<u32>,
        #[arg(long = "ecc-cutoff", default_value_t = DEFAULT_ECCENTRICITY_CUTOFF)]
        ecc_cutoff: usize,
    },
}

#[derive(Debug, Args)]
struct LevelsArg {
    /// Comma-separated edge levels to include (subset of 1,2,3).
    #[arg(long, default_value = "1,2", value_delimiter = ',', value_parser = parse_level_arg)]
    levels: Vec<EdgeLevel>,
}

fn parse_size_arg(raw: &str) -> Result<usize, String> {
    let value = if let Ok(v) = raw.parse::<usize>() {
        v
    } else {
        let float: f64 = raw
            .parse()
            .map_err(|_| format!("`{raw}` is not a number"))?;
        if !float.is_finite() || !(0.0..=1e12).contains(&float) {
            return Err(format!("`{raw}` is out of range"));
        }
        float.round() as usize
    };
    if value < 2 {
        return Err(format!("size must be at least 2, got {value}"));
    }
    Ok(value)
}

fn parse_level_arg(raw: &str) -> Result<EdgeLevel, String> {
    let number: u8 = raw
        .parse()
        .map_err(|_| format!("`{raw}` is not a level number"))?;
    EdgeLevel::from_number(number)
        .filter(|level| *level != EdgeLevel::IV)
        .ok_or_else(|| format!("levels must be within 1,2,3; got {raw}"))
}

/// The validated command, ready to run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommandSpec {
    Validate {
        config: PathBuf,
    },
    Generate {
        config: PathBuf,
        n: usize,
        seed: u64,
        out: PathBuf,
        dump_level_3: bool,
    },
    Analyze {
        input: PathBuf,
        levels: Vec<EdgeLevel>,
        ecc_cutoff: usize,
        out: Option<PathBuf>,
    },
    Experiment {
        config: PathBuf,
        out: PathBuf,
        sizes: Option<Vec<usize>>,
        seed: u64,
        reps: Option<u32>,
        ecc_cutoff: usize,
    },
}

/// Parse an argv sequence (including the program name).
pub fn parse_cli<I, T>(argv: I) -> Result<CommandSpec, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            CliError::HelpRequested(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    })?;
    Ok(match cli.command {
        RawCommand::Validate { config } => CommandSpec::Validate { config },
        RawCommand::Generate {
            config,
            n,
            seed,
            out,
            dump_level_3,
        } => CommandSpec::Generate {
            config,
            n,
            seed,
            out,
            dump_level_3,
        },
        RawCommand::Analyze {
            input,
            levels,
            ecc_cutoff,
            out,
        } => {
            let mut levels = levels.levels;
            levels.sort_unstable();
            levels.dedup();
            if levels.is_empty() {
                return Err(CliError::BadValue {
                    what: "levels",
                    value: "empty".into(),
                });
            }
            CommandSpec::Analyze {
                input,
                levels,
                ecc_cutoff,
                out,
            }
        }
        RawCommand::Experiment {
            config,
            out,
            sizes,
            seed,
            reps,
            ecc_cutoff,
        } => CommandSpec::Experiment {
            config,
            out,
            sizes,
            seed,
            reps,
            ecc_cutoff,
        },
    })
}

/// What a finished command asks the process to exit with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandOutcome {
    Success,
    /// The validate command found violations.
    ValidationFailed,
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::ReadFile {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::WriteFile {
        path: path.to_path_buf(),
        source,
    })
}

fn load_config_file(path: &Path) -> Result<DemographyConfig, CliError> {
    Ok(load_config(&read_file(path)?)?)
}

fn metrics_csv_row(record: &MetricsRecord, runs: u32) -> String {
    let mut line = format!("{},{}", record.n, runs);
    let mut push = |value: Option<f64>| match value {
        Some(v) => line.push_str(&format!(",{v},0")),
        None => line.push_str(",,"),
    };
    push(Some(record.mean_degree));
    push(record.tail.as_ref().map(|t| t.exponent));
    push(record.radius.map(f64::from));
    push(record.diameter.map(f64::from));
    push(Some(record.avg_local_clustering));
    push(Some(record.global_transitivity));
    match record.repair_edges {
        Some(r) => line.push_str(&format!(",{r}")),
        None => line.push(','),
    }
    line.push('\n');
    line
}

/// Execute a command. Side effects are file writes under the requested
/// output paths plus stdout reporting.
pub fn run_command(spec: &CommandSpec) -> Result<CommandOutcome, CliError> {
    match spec {
        CommandSpec::Validate { config } => {
            let text = read_file(config)?;
            match load_config(&text) {
                Ok(_) => {
                    println!("ok: no violations");
                    Ok(CommandOutcome::Success)
                }
                Err(ConfigError::Invalid(violations)) => {
                    for violation in &violations {
                        println!("{violation}");
                    }
                    Ok(CommandOutcome::ValidationFailed)
                }
                Err(other) => Err(other.into()),
            }
        }
        CommandSpec::Generate {
            config,
            n,
            seed,
            out,
            dump_level_3,
        } => {
            let config = load_config_file(config)?;
            let generated = generate(&config, *n, *seed)?;
            fs::create_dir_all(out).map_err(|source| CliError::WriteFile {
                path: out.clone(),
                source,
            })?;
            let mut edges = Vec::new();
            write_edge_list(&mut edges, &generated.graph, *seed, *dump_level_3)
                .expect("writing to memory cannot fail");
            write_file(&out.join("edges.csv"), &edges)?;
            let mut memberships = Vec::new();
            write_memberships(&mut memberships, generated.graph.groups())
                .expect("writing to memory cannot fail");
            write_file(&out.join("memberships.csv"), &memberships)?;
            let mut report = Vec::new();
            generated
                .report
                .write_text(&mut report)
                .expect("writing to memory cannot fail");
            write_file(&out.join("report.txt"), &report)?;
            println!(
                "generated n={n} seed={seed}: {} level-1 and {} level-2 edges, {} repairs",
                generated.graph.level_edges(EdgeLevel::I).len(),
                generated.graph.level_edges(EdgeLevel::II).len(),
                generated.report.repair_edges
            );
            Ok(CommandOutcome::Success)
        }
        CommandSpec::Analyze {
            input,
            levels,
            ecc_cutoff,
            out,
        } => {
            let dump = parse_edge_list(&read_file(input)?)?;
            let view = GraphView::from_edges(dump.n as usize, &dump.level_edges(levels));
            let eccentricity = dump.n as usize <= *ecc_cutoff;
            let record = measure_view(&view, dump.seed, eccentricity)
                .map_err(|_| CliError::DisconnectedAnalysis)?;
            let mut csv = String::from(METRICS_CSV_HEADER);
            csv.push('\n');
            csv.push_str(&metrics_csv_row(&record, 1));
            match out {
                Some(path) => write_file(path, csv.as_bytes())?,
                None => print!("{csv}"),
            }
            Ok(CommandOutcome::Success)
        }
        CommandSpec::Experiment {
            config,
            out,
            sizes,
            seed,
            reps,
            ecc_cutoff,
        } => {
            let config = load_config_file(config)?;
            let mut plan = ExperimentPlan::new(
                sizes.clone().unwrap_or_else(ExperimentPlan::default_sizes),
                *seed,
            );
            plan.repetitions_override = *reps;
            plan.eccentricity_cutoff = *ecc_cutoff;
            let results = run_in_pool(|| run_experiment(&plan, &config))?;
            fs::create_dir_all(out).map_err(|source| CliError::WriteFile {
                path: out.clone(),
                source,
            })?;
            write_file(&out.join("metrics.csv"), results.to_csv().as_bytes())?;
            for (name, contents) in results.plot_files() {
                write_file(&out.join(name), contents.as_bytes())?;
            }
            let mut summary = String::new();
            for row in &results.rows {
                let fmt = |stat: Option<Stat>| match stat {
                    Some(s) => format!("{:.2}±{:.2}", s.mean, s.std),
                    None => "-".to_string(),
                };
                summary.push_str(&format!(
                    "n={} runs={} exponent={} radius={} diameter={} cc_local={:.4}\n",
                    row.n,
                    row.runs,
                    fmt(row.averaged_fit.as_ref().map(|f| Stat {
                        mean: f.exponent,
                        std: row.exponent.map(|e| e.std).unwrap_or(0.0),
                    })),
                    fmt(row.radius),
                    fmt(row.diameter),
                    row.cc_local.mean,
                ));
            }
            print!("{summary}");
            println!("wrote {}", out.join("metrics.csv").display());
            Ok(CommandOutcome::Success)
        }
    }
}

/// Run inside a rayon pool capped by SOCIOSYNTH_THREADS when set.
fn run_in_pool<T>(job: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    match std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
    {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool construction")
            .install(job),
        None => job(),
    }
}
