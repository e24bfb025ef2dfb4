use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mgeo::run::{export_lift, list_examples, render_listing, run, Input, RunConfig};
use mgeo::Format;
use mgeo_core::catalog;
use mgeo_core::lifts::LiftKind;
use mgeo_core::suite::{Suite, ALGEBRAIC_TOLERANCE};
use mgeo_core::SampleConfig;

#[derive(Parser)]
#[command(name = "mgeo", version, about = "Verify metallic structures on chart manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run check suites on manifests or built-in examples.
    Run(RunArgs),
    /// List the built-in examples with their classification flags.
    List {
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Print the lifted chart of a manifold as a manifest.
    Lift {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        bundle: Bundle,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    example: Option<String>,
}

#[derive(Args)]
struct RunArgs {
    /// Manifest file; repeatable.
    #[arg(long)]
    input: Vec<PathBuf>,
    /// Built-in example id (E1..E4) or `all`; repeatable.
    #[arg(long)]
    example: Vec<String>,
    /// core, connections, generalized, lifts or all; repeatable.
    #[arg(long, default_value = "all")]
    suite: Vec<String>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Tolerance of checks that differentiate.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Tolerance of purely algebraic checks.
    #[arg(long, default_value_t = ALGEBRAIC_TOLERANCE)]
    alg_tol: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add per-group wall time to each report.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Bundle {
    Tangent,
    Cotangent,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_config(a: &RunArgs) -> Result<RunConfig, String> {
    let mut inputs: Vec<Input> = a.input.iter().cloned().map(Input::Manifest).collect();
    for e in &a.example {
        if e == "all" {
            inputs.extend(catalog::IDS.iter().map(|id| Input::Example(id.to_string())));
        } else {
            inputs.push(Input::Example(e.clone()));
        }
    }
    let mut suites = Vec::new();
    for s in &a.suite {
        suites.extend(Suite::parse(s).ok_or_else(|| format!("unknown suite {s:?}"))?);
    }
    Ok(RunConfig {
        inputs,
        suites,
        samples: a.samples,
        seed: a.seed,
        tolerance: a.tol,
        algebraic_tolerance: a.alg_tol,
        format: a.format.into(),
        timings: a.timings,
    })
}

fn main_run(a: &RunArgs) -> Result<u8, String> {
    let config = run_config(a)?;
    let outcome = run(&config).map_err(|e| e.to_string())?;
    emit(&outcome.render(config.format), a.out.as_ref())?;
    for f in outcome.failures() {
        eprintln!("failed: {} on {}", f.check_id, f.manifold_id);
    }
    Ok(outcome.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(a) => main_run(a),
        Command::List { format, samples, seed } => {
            let sample = SampleConfig { seed: *seed, count: *samples, ..SampleConfig::default() };
            list_examples(&sample)
                .map_err(|e| e.to_string())
                .map(|l| print!("{}", render_listing(&l, (*format).into())))
                .map(|_| 0)
        }
        Command::Lift { source, bundle, out } => {
            let input = match (&source.input, &source.example) {
                (Some(p), _) => Input::Manifest(p.clone()),
                (None, Some(e)) => Input::Example(e.clone()),
                (None, None) => unreachable!("clap requires one source"),
            };
            let kind = match bundle {
                Bundle::Tangent => LiftKind::Tangent,
                Bundle::Cotangent => LiftKind::Cotangent,
            };
            export_lift(&input, kind)
                .map_err(|e| e.to_string())
                .and_then(|text| emit(&text, out.as_ref()))
                .map(|_| 0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
