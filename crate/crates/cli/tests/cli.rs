use std::path::Path;
use std::process::{Command, Output};

use mgeo::manifest::to_manifest;
use mgeo::report::from_json;
use mgeo::run::{run, Input, RunConfig};
use mgeo_core::catalog;
use mgeo_core::suite::Suite;

fn mgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgeo")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn asymmetric_manifest(dir: &Path) -> std::path::PathBuf {
    let mut spec = catalog::e2_spec();
    spec.name = "skewed".into();
    spec.g = vec![vec!["1".into(), "0".into()], vec!["0".into(), "1".into()]];
    spec.j = vec![vec!["0".into(), "1".into()], vec!["0".into(), "0".into()]];
    let path = dir.join("skewed.json");
    std::fs::write(&path, serde_json::to_string(&spec).unwrap()).unwrap();
    path
}

#[test]
fn all_examples_pass_every_suite() {
    let o = mgeo(&["run", "--example", "all", "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.starts_with("CHECK ") && l.ends_with(" PASS")));
    for id in catalog::IDS {
        assert!(text.contains(&format!(" {id} ")));
    }
}

#[test]
fn asymmetric_structure_fails_the_named_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = asymmetric_manifest(dir.path());
    let o = mgeo(&["run", "--input", path.to_str().unwrap(), "--suite", "core"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("CHECK core.g_symmetric skewed"));
    assert!(stdout(&o).lines().any(|l| l.starts_with("CHECK core.g_symmetric ") && l.ends_with("FAIL")));
    assert!(String::from_utf8_lossy(&o.stderr).contains("failed: core.g_symmetric on skewed"));
}

#[test]
fn load_and_configuration_errors_exit_two() {
    assert_eq!(mgeo(&["run", "--input", "/definitely/missing.json"]).status.code(), Some(2));
    assert_eq!(mgeo(&["run", "--example", "E7"]).status.code(), Some(2));
    assert_eq!(mgeo(&["run", "--example", "E1", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(mgeo(&["run", "--example", "E1", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(mgeo(&["run"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "dim": 2}"#).unwrap();
    let o = mgeo(&["run", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema"));

    let syntax = dir.path().join("syntax.json");
    std::fs::write(&syntax, to_manifest(&catalog::e1()).replace("\"-1\"", "\"1 +* 2\"")).unwrap();
    assert_eq!(mgeo(&["run", "--input", syntax.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn same_seed_gives_identical_json() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = mgeo(&["run", "--example", "E2", "--example", "E4", "--format", "json", "--seed", "7", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);

    let o = mgeo(&["run", "--example", "E2", "--example", "E4", "--format", "json", "--seed", "8"]);
    assert_ne!(o.stdout, ta);
}

#[test]
fn json_report_round_trips_and_is_sorted() {
    let config = RunConfig {
        inputs: vec![Input::Example("E4".into()), Input::Example("E1".into())],
        suites: vec![Suite::Core, Suite::Connections],
        samples: 30,
        timings: true,
        ..RunConfig::default()
    };
    let outcome = run(&config).unwrap();
    let back = from_json(&outcome.render(mgeo::Format::Json)).unwrap();
    assert_eq!(back, outcome.reports);
    assert!(back.iter().all(|r| r.wall_time_ms.is_some() && r.sample_count == 30));
    let keys: Vec<_> = back.iter().map(|r| (r.check_id.clone(), r.manifold_id.clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn listing_shows_classification_flags() {
    let a = stdout(&mgeo(&["list"]));
    assert_eq!(a, stdout(&mgeo(&["list"])));
    let line = |id: &str| a.lines().find(|l| l.starts_with(id)).unwrap().to_owned();
    let e1 = line("E1 ");
    assert!(e1.contains("integrable=true") && e1.contains("locally_metallic=true") && e1.contains("flat=true"));
    assert!(line("E4 ").contains("flat=false"));

    let json: serde_json::Value = serde_json::from_slice(&mgeo(&["list", "--format", "json"]).stdout).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 4);
    assert_eq!(json[3]["flat"], false);
}

#[test]
fn exported_lift_is_a_loadable_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e4-tangent.json");
    let o = mgeo(&["lift", "--example", "E4", "--bundle", "tangent", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = mgeo(&["run", "--input", path.to_str().unwrap(), "--suite", "core", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("CHECK core.polynomial E4-tangent"));
}
