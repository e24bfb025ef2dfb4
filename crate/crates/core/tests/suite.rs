use mgeo_core::suite::{run_suites, Suite, SuiteConfig};
use mgeo_core::catalog;

#[test]
fn every_suite_passes_on_the_examples() {
    let cfg = SuiteConfig::default();
    for m in catalog::all() {
        let reports = run_suites(&m, &Suite::ALL, &cfg).unwrap();
        let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
        assert!(failed.is_empty(), "{}: {:#?}", m.name(), failed);
        assert!(reports.iter().any(|r| r.check_id.starts_with("lifts.")));
    }
}

#[test]
fn helical_fixture_passes_every_suite() {
    let m = catalog::helical_projector();
    let reports = run_suites(&m, &Suite::ALL, &SuiteConfig::default()).unwrap();
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).map(|r| r.check_id.as_str()).collect();
    assert!(failed.is_empty(), "{failed:?}");
}
