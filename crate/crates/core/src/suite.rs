//! Named groups of checks run by the command-line runner.

use alloc::vec;
use alloc::vec::Vec;

use crate::connections as conn;
use crate::error::{GeomError, Result};
use crate::generalized as gen;
use crate::lifts::{self, LiftKind};
use crate::manifold::{self, ChartManifold};
use crate::metallic::{self, NordenFamilyParams};
use crate::sample::{CheckReport, SampleConfig, Verifier};

/// Tolerance for identities involving no derivatives.
pub const ALGEBRAIC_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Core,
    Connections,
    Generalized,
    Lifts,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Core, Suite::Connections, Suite::Generalized, Suite::Lifts];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Connections => "connections",
            Suite::Generalized => "generalized",
            Suite::Lifts => "lifts",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        match name {
            "all" => Some(Suite::ALL.to_vec()),
            _ => Suite::ALL.iter().copied().find(|s| s.name() == name).map(|s| vec![s]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Seed, sample count and the tolerance of derivative-based checks.
    pub sample: SampleConfig,
    pub algebraic_tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            sample: SampleConfig::default(),
            algebraic_tolerance: ALGEBRAIC_TOLERANCE,
        }
    }
}

impl SuiteConfig {
    fn differential(&self, m: &ChartManifold) -> Verifier {
        Verifier::new(m.domain(), &self.sample)
    }

    fn algebraic(&self, m: &ChartManifold) -> Verifier {
        Verifier::new(m.domain(), &self.sample.with_tolerance(self.algebraic_tolerance))
    }
}

type Runner = fn(&ChartManifold, &SuiteConfig) -> Result<Vec<CheckReport>>;

/// One group of checks that share their setup.
#[derive(Clone, Copy)]
pub struct CheckTask {
    pub suite: Suite,
    pub name: &'static str,
    run: Runner,
}

impl CheckTask {
    pub fn run(&self, m: &ChartManifold, config: &SuiteConfig) -> Result<Vec<CheckReport>> {
        (self.run)(m, config)
    }
}

impl core::fmt::Debug for CheckTask {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CheckTask").field("suite", &self.suite).field("name", &self.name).finish()
    }
}

fn is_norden(m: &ChartManifold) -> bool {
    let p = m.params();
    p.p == 0.0 && p.q == -1.0
}

fn has_discriminant(m: &ChartManifold) -> bool {
    m.params().discriminant() != 0.0
}

fn negative_discriminant(m: &ChartManifold) -> bool {
    m.params().discriminant() < 0.0
}

macro_rules! task {
    ($suite:ident, $name:literal, $run:expr) => {
        CheckTask { suite: Suite::$suite, name: $name, run: $run }
    };
}

fn core_tasks(m: &ChartManifold) -> Vec<CheckTask> {
    let mut t = vec![task!(Core, "chart", |m, c| {
        let v = c.differential(m);
        Ok(vec![
            manifold::check_metric_symmetric(m, &v)?,
            manifold::check_metric_inverse(m, &v)?,
            manifold::check_g_symmetric_endo(m, &v)?,
            manifold::check_polynomial(m, &v)?,
            manifold::check_signature_constant(m, &v)?,
        ])
    })];
    if negative_discriminant(m) {
        t.push(task!(Core, "norden", |m, c| {
            let v = c.differential(m);
            Ok(vec![metallic::check_norden_from_metallic(m, &v)?, metallic::check_norden_round_trip(m, &v)?])
        }));
    }
    if is_norden(m) {
        t.push(task!(Core, "norden_family", |m, c| {
            let v = c.differential(m);
            Ok(vec![metallic::check_family_identity(m, NordenFamilyParams::new(1.0, 1.0), &v)?])
        }));
    }
    t
}

fn connection_tasks(m: &ChartManifold) -> Vec<CheckTask> {
    let mut t = vec![
        task!(Connections, "levi_civita", |m, c| {
            let v = c.differential(m);
            let mut r = vec![
                conn::check_christoffel_symmetric(m, &v)?,
                conn::check_metric_compatibility(m, &v)?,
                conn::check_nijenhuis_cross(m, &v)?,
            ];
            r.extend(conn::check_curvature_symmetries(m, &v)?);
            Ok(r)
        }),
        task!(Connections, "classification", |m, c| {
            let v = c.differential(m);
            let mut r = vec![conn::check_locally_metallic_integrable(m, &v)?];
            r.extend(conn::check_nearly_identity(m, &v)?);
            Ok(r)
        }),
    ];
    if has_discriminant(m) {
        t.push(task!(Connections, "natural", |m, c| {
            let v = c.differential(m);
            let mut r = conn::check_natural_connection(m, &v)?.to_vec();
            r.push(conn::check_torsion_formula(m, &v)?);
            r.push(conn::check_torsion_identity(m, &v)?);
            r.push(conn::check_parallel_degeneration(m, &v)?);
            Ok(r)
        }));
    }
    if is_norden(m) {
        t.push(task!(Connections, "ganchev_mihova", |m, c| {
            Ok(vec![conn::check_ganchev_mihova(m, &c.differential(m))?])
        }));
    }
    t
}

fn generalized_tasks(m: &ChartManifold) -> Vec<CheckTask> {
    let mut t = vec![task!(Generalized, "algebraic", |m, c| {
        let v = c.algebraic(m);
        let mut r = gen::check_polynomials(m, &v)?.to_vec();
        r.extend(gen::check_product_and_complex(m, &v)?);
        r.extend(gen::check_symplectic_identity(m, &v)?);
        r.push(gen::check_check_equals_hat(m, &v)?);
        r.push(gen::check_metric_symmetric(m, &v)?);
        r.push(gen::check_pairing_antisymmetry(m, &v)?);
        r.push(gen::check_j_star(m, &v)?);
        r.push(gen::check_norden_from_check(m, &v)?);
        Ok(r)
    })];
    if has_discriminant(m) {
        t.push(task!(Generalized, "metrics", |m, c| {
            Ok(gen::check_metric_compatibility(m, &c.algebraic(m))?.to_vec())
        }));
        t.push(task!(Generalized, "d_hat", |m, c| Ok(gen::check_d_hat(m, &c.differential(m))?.to_vec())));
    }
    if negative_discriminant(m) {
        t.push(task!(Generalized, "norden_reconstruction", |m, c| {
            Ok(vec![gen::check_norden_reconstruction(m, &c.algebraic(m))?])
        }));
    }
    if is_norden(m) {
        t.push(task!(Generalized, "norden_family", |m, c| {
            Ok(gen::check_norden_structures(m, NordenFamilyParams::new(1.0, 1.0), &c.algebraic(m))?.to_vec())
        }));
    }
    t
}

fn lift_checks(m: &ChartManifold, c: &SuiteConfig, kind: LiftKind) -> Result<Vec<CheckReport>> {
    let l = lifts::build_lift(m, kind)?;
    let v = l.verifier(&c.sample);
    let va = v.with_tolerance(c.algebraic_tolerance);
    let base = c.differential(m);
    Ok(vec![
        lifts::check_lift_polynomial(&l, &v)?,
        lifts::check_lift_g_symmetric(&l, &v)?,
        lifts::check_frame_table(&l, &base.with_tolerance(c.algebraic_tolerance))?,
        lifts::check_nijenhuis_vertical(&l, &va)?,
        lifts::check_nijenhuis_derived(&l, &v)?,
        lifts::check_flat_integrable(&l, &v, &base)?,
    ])
}

fn lift_tasks(m: &ChartManifold) -> Vec<CheckTask> {
    if !has_discriminant(m) {
        return Vec::new();
    }
    vec![
        task!(Lifts, "tangent", |m, c| lift_checks(m, c, LiftKind::Tangent)),
        task!(Lifts, "cotangent", |m, c| lift_checks(m, c, LiftKind::Cotangent)),
        task!(Lifts, "intertwining", |m, c| Ok(vec![lifts::intertwine_check(m, &c.algebraic(m))?])),
    ]
}

/// The check groups of `suite` whose preconditions `m` meets.
pub fn tasks(suite: Suite, m: &ChartManifold) -> Vec<CheckTask> {
    match suite {
        Suite::Core => core_tasks(m),
        Suite::Connections => connection_tasks(m),
        Suite::Generalized => generalized_tasks(m),
        Suite::Lifts => lift_tasks(m),
    }
}

/// Runs the suites and returns the reports sorted by check id.
pub fn run_suites(m: &ChartManifold, suites: &[Suite], config: &SuiteConfig) -> Result<Vec<CheckReport>> {
    if config.sample.count == 0 {
        return Err(GeomError::InvalidManifold("sample count must be at least 1".into()));
    }
    let mut out = Vec::new();
    for s in dedup(suites) {
        for t in tasks(s, m) {
            out.extend(t.run(m, config)?);
        }
    }
    sort_reports(&mut out);
    Ok(out)
}

/// Suites in canonical order without repeats.
pub fn dedup(suites: &[Suite]) -> Vec<Suite> {
    let mut s = suites.to_vec();
    s.sort();
    s.dedup();
    s
}

pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id).then_with(|| a.manifold_id.cmp(&b.manifold_id)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn parse_names() {
        assert_eq!(Suite::parse("all").unwrap().len(), 4);
        assert_eq!(Suite::parse("lifts").unwrap(), [Suite::Lifts]);
        assert!(Suite::parse("everything").is_none());
    }

    #[test]
    fn core_suite_on_examples() {
        let cfg = SuiteConfig { sample: SampleConfig::default().with_count(20), ..Default::default() };
        for m in catalog::all() {
            let r = run_suites(&m, &[Suite::Core, Suite::Core], &cfg).unwrap();
            assert!(r.windows(2).all(|w| w[0].check_id <= w[1].check_id));
            assert!(r.iter().all(|r| r.pass), "{:?}", r);
        }
    }

    #[test]
    fn norden_only_groups() {
        assert!(tasks(Suite::Connections, &catalog::e1_norden()).iter().any(|t| t.name == "ganchev_mihova"));
        assert!(!tasks(Suite::Connections, &catalog::e2()).iter().any(|t| t.name == "ganchev_mihova"));
    }
}
