use mgeo_core::catalog;
use mgeo_core::lifts::*;
use mgeo_core::{ChartManifold, SampleConfig, Verifier};

fn base_verifier(m: &ChartManifold, tol: f64) -> Verifier {
    Verifier::new(m.domain(), &SampleConfig::default().with_tolerance(tol))
}

fn lift_verifier(l: &LiftedChart, tol: f64, samples: usize) -> Verifier {
    l.verifier(&SampleConfig::default().with_tolerance(tol).with_count(samples))
}

#[test]
fn lifted_charts_are_metallic_and_compatible() {
    for m in catalog::all() {
        for kind in [LiftKind::Tangent, LiftKind::Cotangent] {
            let l = build_lift(&m, kind).unwrap();
            let v = lift_verifier(&l, 1e-9, 200);
            for r in [check_lift_polynomial(&l, &v).unwrap(), check_lift_g_symmetric(&l, &v).unwrap()] {
                assert!(r.pass, "{} on {}: {:e}", r.check_id, r.manifold_id, r.max_abs_err);
            }
        }
    }
}

#[test]
fn frame_tables_match_conjugation() {
    for m in catalog::all() {
        let bv = base_verifier(&m, 1e-12);
        for kind in [LiftKind::Tangent, LiftKind::Cotangent] {
            let l = build_lift(&m, kind).unwrap();
            let r = check_frame_table(&l, &bv).unwrap();
            assert!(r.pass, "{} on {}: {:e}", r.check_id, r.manifold_id, r.max_abs_err);
        }
        let r = intertwine_check(&m, &bv).unwrap();
        assert!(r.pass, "{}: {:e}", r.manifold_id, r.max_abs_err);
    }
}

#[test]
fn brute_force_nijenhuis_matches_derived_formulas() {
    for m in catalog::all().into_iter().chain([catalog::helical_projector()]) {
        for kind in [LiftKind::Tangent, LiftKind::Cotangent] {
            let l = build_lift(&m, kind).unwrap();
            let v = lift_verifier(&l, 1e-9, 40);
            let e = nijenhuis_formula_errors(&l, &v, NijenhuisFormulas::Derived).unwrap();
            let p = nijenhuis_formula_errors(&l, &v, NijenhuisFormulas::Printed).unwrap();
            eprintln!("{} {}: derived {:?} printed {:?}", m.name(), kind.label(), e, p);
            assert!(e.max() < 1e-9, "{} {}: {:?}", m.name(), kind.label(), e);
            assert!(p.vertical_vertical < 1e-12);
        }
    }
}

#[test]
fn vertical_pairs_and_flat_bases() {
    for m in catalog::all() {
        let bv = base_verifier(&m, 1e-10);
        for kind in [LiftKind::Tangent, LiftKind::Cotangent] {
            let l = build_lift(&m, kind).unwrap();
            let v = lift_verifier(&l, 1e-10, 40);
            for r in [check_nijenhuis_vertical(&l, &v).unwrap(), check_flat_integrable(&l, &v, &bv).unwrap()] {
                assert!(r.pass, "{} on {}: {:e}", r.check_id, r.manifold_id, r.max_abs_err);
            }
        }
    }
}

#[test]
fn printed_cotangent_metric_needs_unit_discriminant() {
    let m = catalog::e2();
    let l = build_cotangent_lift(&m).unwrap();
    let v = lift_verifier(&l, 1e-9, 20);
    let d = m.params().discriminant();
    assert!((d - 4.0).abs() > 0.1);
    assert!(printed_metric_compatibility(&l, &v).unwrap() > 1e-3);
    let (_, check) = pullback_discrepancy(&l, &[0.3, 0.4]).unwrap();
    assert!(check.horizontal < 1e-15 && check.mixed < 1e-15);
    assert!((check.vertical_ratio - d / 4.0).abs() < 1e-12);

    let t = build_tangent_lift(&m).unwrap();
    assert!(printed_metric_compatibility(&t, &lift_verifier(&t, 1e-9, 20)).unwrap() < 1e-12);
    let (hat, _) = pullback_discrepancy(&t, &[0.3, 0.4]).unwrap();
    assert!(hat.horizontal.max(hat.mixed).max(hat.vertical) < 1e-12);
}

#[test]
fn exported_chart_round_trips() {
    let l = build_tangent_lift(&catalog::e4()).unwrap();
    let back = l.chart.to_spec().build().unwrap();
    let z = [0.8, 0.3, 0.2, -0.5];
    assert!((back.structure_at(&z).unwrap() - l.chart.structure_at(&z).unwrap()).amax() < 1e-12);
    assert!((back.metric_at(&z).unwrap() - l.chart.metric_at(&z).unwrap()).amax() < 1e-12);
}

#[test]
fn displayed_formulas_miss_the_fiber_independent_term() {
    // at y = 0 the displayed horizontal-horizontal family has no vertical part
    let m = catalog::e4();
    let fields = BaseFields::new(&m).unwrap();
    for kind in [LiftKind::Tangent, LiftKind::Cotangent] {
        let l = build_lift(&m, kind).unwrap();
        let brute_n = mgeo_core::connections::nijenhuis_bracket(l.chart.structure());
        let z = [0.9, 0.4, 0.0, 0.0];
        let printed = nijenhuis_frame_formulas(&l, &fields, &z, NijenhuisFormulas::Printed).unwrap();
        let brute = l.nijenhuis_in_frame(&brute_n, &z).unwrap();
        let (i, j) = (0, 1);
        let vertical_printed: f64 = (2..4).map(|c| printed[[c, i, j]].abs()).fold(0.0, f64::max);
        let vertical_brute: f64 = (2..4).map(|c| brute[[c, i, j]].abs()).fold(0.0, f64::max);
        assert!(vertical_printed < 1e-15);
        assert!(vertical_brute > 0.1, "{}: {vertical_brute}", kind.label());
    }
}
