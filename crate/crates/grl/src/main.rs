//! `grl`: integrate scenarios, inspect capacities, reproduce the worked
//! examples and run the theorem suite.
//!
//! Exit status: 0 when a result was computed (even "does not exist"),
//! 1 when the suite or an example fails or output cannot be written,
//! 2 on unreadable or invalid input, 64 on bad command-line usage.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use grl_core::grl::{grl_integrate_with, GrlOptions, Strategy};
use grl_core::suite::{run_suite, SuiteConfig, TheoremId};
use grl_core::EnvelopeConfig;
use grl::format::parse_subset;
use grl::report::{self, FlagsFile};
use grl::sweep::{sweep, write_sweep_csv, Axis};
use grl::{examples, load_capacity, load_scenario, read_text, InputError};

const EXIT_FAILURE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "grl", version, about = "Generalized Riemann-Lebesgue decomposition integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    /// Closed form only
    ClosedForm,
    /// Closed form plus the refinement-envelope trace
    Probed,
    /// Refinement envelopes alone
    Estimate,
}

#[derive(clap::Args)]
struct EngineArgs {
    #[arg(long, value_enum, default_value_t = StrategyArg::Probed)]
    strategy: StrategyArg,
    /// Deepest refinement level of the envelope probe
    #[arg(long, default_value_t = 40)]
    max_depth: u32,
    /// Envelope convergence threshold
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Lower sums beyond this count as divergence
    #[arg(long, default_value_t = 1e6)]
    divergence_bound: f64,
}

impl EngineArgs {
    fn options(&self) -> GrlOptions {
        GrlOptions {
            strategy: match self.strategy {
                StrategyArg::ClosedForm => Strategy::ClosedForm,
                StrategyArg::Probed => Strategy::Probed,
                StrategyArg::Estimate => Strategy::Estimate,
            },
            envelope: EnvelopeConfig {
                max_depth: self.max_depth,
                tolerance: self.tolerance,
                divergence_bound: self.divergence_bound,
                ..EnvelopeConfig::default()
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario file
    Integrate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Print the property flags of a capacity file
    Classify {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Variation of a capacity on a subset (`all`, or indices/labels like `0,2`)
    Variation {
        path: PathBuf,
        #[arg(default_value = "all")]
        subset: String,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Run the built-in worked examples and compare with their known values
    Examples {
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Run the theorem suite on seeded random instances
    Verify {
        /// `all` or a comma-separated list such as `T1,T16`
        #[arg(long, default_value = "all", value_parser = parse_theorems)]
        theorems: TheoremList,
        /// Instances per theorem
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        instances: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Skip the negative controls
        #[arg(long)]
        no_controls: bool,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
        /// Also write one CSV row per theorem to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a scenario template over a parameter grid
    Sweep {
        /// Scenario file with `{{name}}` placeholders
        template: PathBuf,
        /// `name=v1,v2,...`; repeat for more parameters
        #[arg(long = "grid", required = true)]
        grid: Vec<Axis>,
        /// CSV destination; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

#[derive(Clone, Debug)]
struct TheoremList(Vec<TheoremId>);

fn parse_theorems(s: &str) -> Result<TheoremList, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(TheoremList(TheoremId::ALL.to_vec()));
    }
    let ids = s
        .split(',')
        .map(|p| p.trim().parse::<TheoremId>().map_err(|_| format!("unknown theorem id {:?} (expected T1..T16)", p.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TheoremList(ids))
}

enum Failure {
    Input(InputError),
    Output(String, io::Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<u8, Failure>;

fn create(path: &Path) -> Result<File, Failure> {
    File::create(path).map_err(|e| Failure::Output(path.display().to_string(), e))
}

fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn integrate(path: &Path, format: Format, engine: &EngineArgs) -> Outcome {
    let scenario = load_scenario(path)?;
    let report = grl_integrate_with(&scenario, &engine.options());
    emit(&match format {
        Format::Human => report::report_human(&report),
        Format::Structured => report::report_json(&report),
    });
    Ok(0)
}

fn classify(path: &Path, format: Format) -> Outcome {
    let flags = load_capacity(path)?.classify();
    emit(&match format {
        Format::Human => report::flags_human(&flags),
        Format::Structured => serde_json::to_string_pretty(&FlagsFile::from(flags)).expect("flags serialize"),
    });
    Ok(0)
}

fn variation(path: &Path, subset: &str, format: Format) -> Outcome {
    let c = load_capacity(path)?;
    let source = path.display().to_string();
    let invalid = |error| InputError::Invalid { file: source.clone(), line: 1, column: 1, error };
    let b = parse_subset(subset, c.space()).map_err(invalid)?;
    let v = c.variation(b).map_err(invalid)?;
    emit(&match format {
        Format::Human => format!("variation on {b}: {v}"),
        Format::Structured => serde_json::json!({ "subset": b.indices().collect::<Vec<_>>(), "variation": v.to_string() })
            .to_string(),
    });
    Ok(0)
}

fn run_examples(format: Format) -> Outcome {
    let outcomes: Vec<_> = examples::all().iter().map(examples::run).collect();
    match format {
        Format::Human => {
            let mut text = format!("{:<42}{:>12}{:>12}  ok\n", "example", "expected", "computed");
            for o in &outcomes {
                text += &format!("{:<42}{:>12}{:>12}  {}\n", o.name, o.expected, o.computed, if o.matches { "yes" } else { "NO" });
            }
            emit(&text);
        }
        Format::Structured => {
            let rows: Vec<_> = outcomes
                .iter()
                .map(|o| serde_json::json!({ "name": o.name, "expected": o.expected, "computed": o.computed, "matches": o.matches }))
                .collect();
            emit(&serde_json::to_string_pretty(&rows).expect("rows serialize"));
        }
    }
    Ok(if outcomes.iter().all(|o| o.matches) { 0 } else { EXIT_FAILURE })
}

fn verify(theorems: TheoremList, instances: usize, seed: u64, controls: bool, format: Format, out: Option<&Path>) -> Outcome {
    let config = SuiteConfig {
        theorems: theorems.0,
        instances_per_theorem: instances,
        seed,
        negative_controls: controls,
        ..SuiteConfig::default()
    };
    let start = Instant::now();
    let mut suite = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(EXIT_FAILURE);
        }
    };
    suite.wall_clock_ms = Some(start.elapsed().as_millis());
    emit(&match format {
        Format::Human => report::suite_human(&suite),
        Format::Structured => report::suite_json(&suite, seed, instances),
    });
    if let Some(path) = out {
        report::write_suite_csv(&suite, create(path)?).map_err(|e| Failure::Output(path.display().to_string(), e.into()))?;
    }
    Ok(if suite.passed() { 0 } else { EXIT_FAILURE })
}

fn run_sweep(template: &Path, grid: &[Axis], out: Option<&Path>, engine: &EngineArgs) -> Outcome {
    let text = read_text(template)?;
    let rows = sweep(&text, &template.display().to_string(), grid, &engine.options())?;
    let written = match out {
        Some(path) => write_sweep_csv(grid, &rows, create(path)?).map_err(|e| (path.display().to_string(), e)),
        None => write_sweep_csv(grid, &rows, io::stdout().lock()).map_err(|e| ("stdout".to_string(), e)),
    };
    written.map_err(|(p, e)| Failure::Output(p, e.into()))?;
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Integrate { path, format, engine } => integrate(&path, format, &engine),
        Command::Classify { path, format } => classify(&path, format),
        Command::Variation { path, subset, format } => variation(&path, &subset, format),
        Command::Examples { format } => run_examples(format),
        Command::Verify { theorems, instances, seed, no_controls, format, out } => {
            verify(theorems, instances as usize, seed, !no_controls, format, out.as_deref())
        }
        Command::Sweep { template, grid, out, engine } => run_sweep(&template, &grid, out.as_deref(), &engine),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Output(path, e)) => {
            eprintln!("error: cannot write {path}: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
