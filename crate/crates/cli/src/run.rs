//! Batch verification over manifests and built-in examples.

use std::path::PathBuf;
use std::time::Instant;

use mgeo_core::connections::classify;
use mgeo_core::lifts::{build_lift, LiftKind};
use mgeo_core::suite::{dedup, tasks, Suite, SuiteConfig, ALGEBRAIC_TOLERANCE};
use mgeo_core::{catalog, ChartManifold, GeomError, SampleConfig, Verifier};
use rayon::prelude::*;
use serde::Serialize;

use crate::manifest::{example, read_manifest, validate_on_sample, LoadError};
use crate::report::{self, ReportEntry};

/// Where a manifold comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Manifest(PathBuf),
    Example(String),
}

impl Input {
    pub fn load(&self) -> Result<ChartManifold, LoadError> {
        match self {
            Input::Manifest(p) => read_manifest(p),
            Input::Example(id) => example(id),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub inputs: Vec<Input>,
    pub suites: Vec<Suite>,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub algebraic_tolerance: f64,
    pub format: Format,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            inputs: Vec::new(),
            suites: Suite::ALL.to_vec(),
            samples: 200,
            seed: 42,
            tolerance: 1e-9,
            algebraic_tolerance: ALGEBRAIC_TOLERANCE,
            format: Format::Text,
            timings: false,
        }
    }
}

impl RunConfig {
    pub fn suite_config(&self) -> SuiteConfig {
        SuiteConfig {
            sample: SampleConfig {
                seed: self.seed,
                count: self.samples,
                tolerance: self.tolerance,
            },
            algebraic_tolerance: self.algebraic_tolerance,
        }
    }

    fn validate(&self) -> Result<(), RunError> {
        if self.samples == 0 {
            return Err(RunError::Config("samples must be at least 1".into()));
        }
        for (what, t) in [("tol", self.tolerance), ("alg-tol", self.algebraic_tolerance)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(RunError::Config(format!("{what} must be positive, got {t}")));
            }
        }
        if self.inputs.is_empty() {
            return Err(RunError::Config("no input manifest or example given".into()));
        }
        if self.suites.is_empty() {
            return Err(RunError::Config("no suite selected".into()));
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("{manifold}: {source}")]
    Check {
        manifold: String,
        #[source]
        source: GeomError,
    },
}

/// Reports of a completed run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub reports: Vec<ReportEntry>,
}

impl RunOutcome {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.reports.iter().filter(|r| !r.pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => report::to_text(&self.reports),
            Format::Json => report::to_json(&self.reports),
        }
    }
}

/// Loads every input and runs the selected suites; reports are sorted by
/// check id, then manifold.
pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    config.validate()?;
    let suite_cfg = config.suite_config();
    let manifolds = config
        .inputs
        .iter()
        .map(|i| {
            let m = i.load()?;
            validate_on_sample(&m, &suite_cfg.sample)?;
            Ok(m)
        })
        .collect::<Result<Vec<_>, LoadError>>()?;
    let suites = dedup(&config.suites);
    let jobs: Vec<_> = manifolds
        .iter()
        .flat_map(|m| suites.iter().flat_map(move |s| tasks(*s, m).into_iter().map(move |t| (m, t))))
        .collect();
    let groups = jobs
        .par_iter()
        .map(|(m, t)| {
            let start = Instant::now();
            let reports = t.run(m, &suite_cfg).map_err(|source| RunError::Check {
                manifold: m.name().to_owned(),
                source,
            })?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            Ok((reports, ms))
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    let mut tagged: Vec<(mgeo_core::CheckReport, f64)> = groups
        .into_iter()
        .flat_map(|(rs, ms)| rs.into_iter().map(move |r| (r, ms)))
        .collect();
    tagged.sort_by(|(a, _), (b, _)| a.check_id.cmp(&b.check_id).then_with(|| a.manifold_id.cmp(&b.manifold_id)));
    let reports = tagged
        .iter()
        .map(|(r, ms)| ReportEntry::new(r, config.timings.then_some(*ms)))
        .collect();
    Ok(RunOutcome { reports })
}

/// Runs and renders; returns the process exit code and the rendered
/// report or diagnostic.
pub fn execute(config: &RunConfig) -> (i32, String) {
    match run(config) {
        Ok(outcome) => (outcome.exit_code(), outcome.render(config.format)),
        Err(e) => (2, format!("error: {e}\n")),
    }
}

/// One built-in example with its classification.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleListing {
    pub id: String,
    pub description: String,
    pub integrable: bool,
    pub locally_metallic: bool,
    pub nearly_locally_metallic: bool,
    pub flat: bool,
}

pub fn list_examples(sample: &SampleConfig) -> Result<Vec<ExampleListing>, GeomError> {
    catalog::IDS
        .iter()
        .map(|id| {
            let m = catalog::by_id(id).expect("catalog id");
            let c = classify(&m, &Verifier::new(m.domain(), sample))?;
            Ok(ExampleListing {
                id: id.to_string(),
                description: catalog::description(id).unwrap_or_default().to_owned(),
                integrable: c.integrable,
                locally_metallic: c.locally_metallic,
                nearly_locally_metallic: c.nearly_locally_metallic,
                flat: c.flat,
            })
        })
        .collect()
}

pub fn render_listing(list: &[ExampleListing], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(list).expect("listing serializes") + "\n",
        Format::Text => list
            .iter()
            .map(|e| {
                format!(
                    "{} integrable={} locally_metallic={} nearly_locally_metallic={} flat={}  {}\n",
                    e.id, e.integrable, e.locally_metallic, e.nearly_locally_metallic, e.flat, e.description
                )
            })
            .collect(),
    }
}

/// The lifted chart of `input` as a manifest document.
pub fn export_lift(input: &Input, kind: LiftKind) -> Result<String, RunError> {
    let m = input.load()?;
    let lift = build_lift(&m, kind).map_err(|source| RunError::Check {
        manifold: m.name().to_owned(),
        source,
    })?;
    Ok(crate::manifest::to_manifest(&lift.chart) + "\n")
}
