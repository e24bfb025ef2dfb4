use mgeo_core::catalog;
use mgeo_core::connections::*;
use mgeo_core::sample::fd_partial;
use mgeo_core::{ChartManifold, SampleConfig, Tensor3, Verifier};
use nalgebra::DMatrix;

const H: f64 = 1e-5;

fn verifier(m: &ChartManifold) -> Verifier {
    Verifier::new(m.domain(), &SampleConfig::default())
}

/// Christoffel symbols from finite differences of the metric.
fn fd_christoffel(m: &ChartManifold, x: &[f64]) -> Tensor3<f64> {
    let n = m.dim();
    let ginv = m.inverse_metric_at(x).unwrap();
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|i| {
            DMatrix::from_fn(n, n, |a, b| {
                fd_partial(|y| m.metric().row(a)[b].eval(y), x, i, H).unwrap()
            })
        })
        .collect();
    Tensor3::from_fn(n, |l, j, k| {
        (0..n)
            .map(|s| 0.5 * ginv[(l, s)] * (dg[j][(s, k)] + dg[k][(s, j)] - dg[s][(j, k)]))
            .sum()
    })
}

#[test]
fn christoffel_symbols_match_finite_differences() {
    for m in [catalog::e3(), catalog::e4(), catalog::skew_metric(), catalog::conformal_norden()] {
        let gamma = levi_civita(&m).unwrap();
        for x in verifier(&m).with_tolerance(0.0).sample.iter().take(50) {
            let sym = gamma.eval(x).unwrap();
            let fd = fd_christoffel(&m, x);
            for (a, b) in sym.iter().zip(fd.iter()) {
                assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()), "{}: {a} vs {b}", m.name());
            }
        }
    }
}

#[test]
fn sphere_symbols_in_closed_form() {
    let gamma = levi_civita(&catalog::e4()).unwrap();
    for u in [0.5, 0.7, 0.93] {
        let t = gamma.eval(&[u, 0.2]).unwrap();
        assert!((t[[0, 1, 1]] + u.sin() * u.cos()).abs() < 1e-14);
        assert!((t[[1, 0, 1]] - u.cos() / u.sin()).abs() < 1e-14);
        assert!((t[[1, 1, 0]] - u.cos() / u.sin()).abs() < 1e-14);
    }
}

#[test]
fn covariant_derivative_of_structure_matches_finite_differences() {
    for m in [catalog::e2(), catalog::e4(), catalog::helical_projector()] {
        let n = m.dim();
        let lc = LeviCivitaData::new(&m).unwrap();
        for x in verifier(&m).sample.iter().take(50) {
            let sym = lc.nabla_j.eval(x).unwrap();
            let gamma = fd_christoffel(&m, x);
            let j = m.structure_at(x).unwrap();
            for k in 0..n {
                for i in 0..n {
                    for jj in 0..n {
                        let dj = fd_partial(|y| m.structure().row(k)[jj].eval(y), x, i, H).unwrap();
                        let fd = dj
                            + (0..n)
                                .map(|s| gamma[[k, i, s]] * j[(s, jj)] - gamma[[s, i, jj]] * j[(k, s)])
                                .sum::<f64>();
                        assert!((sym[[k, i, jj]] - fd).abs() <= 1e-6, "{}", m.name());
                    }
                }
            }
        }
    }
}

#[test]
fn sphere_has_unit_sectional_curvature() {
    let m = catalog::e4();
    let r = riemann(&levi_civita(&m).unwrap());
    for x in verifier(&m).sample.iter() {
        let rv = r.eval(x).unwrap();
        let g = m.metric_at(x).unwrap();
        // g(R(∂1,∂2)∂2, ∂1)
        let num: f64 = (0..2).map(|l| g[(0, l)] * rv[[l, 0, 1, 1]]).sum();
        let den = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(0, 1)];
        assert!((num / den - 1.0).abs() < 1e-10);
    }
}

#[test]
fn flat_examples_have_vanishing_curvature() {
    for m in [catalog::e1(), catalog::e3()] {
        let r = riemann(&levi_civita(&m).unwrap());
        for x in verifier(&m).sample.iter() {
            assert!(r.eval(x).unwrap().max_abs() <= 1e-10, "{}", m.name());
        }
    }
}

#[test]
fn every_connection_check_passes_on_the_examples() {
    let mut ms = catalog::all();
    ms.push(catalog::helical_projector());
    ms.push(catalog::skew_metric().with_structure("skew-golden", trivial(), mgeo_core::MetallicParams::new(1.0, 1.0)).unwrap());
    for m in ms {
        let v = verifier(&m);
        let mut reports = vec![
            check_christoffel_symmetric(&m, &v).unwrap(),
            check_metric_compatibility(&m, &v).unwrap(),
            check_nijenhuis_cross(&m, &v).unwrap(),
            check_torsion_formula(&m, &v).unwrap(),
            check_torsion_identity(&m, &v).unwrap(),
            check_parallel_degeneration(&m, &v).unwrap(),
            check_locally_metallic_integrable(&m, &v).unwrap(),
        ];
        reports.extend(check_curvature_symmetries(&m, &v).unwrap());
        reports.extend(check_natural_connection(&m, &v).unwrap());
        for r in reports {
            assert!(r.pass, "{} on {}: {:e}", r.check_id, r.manifold_id, r.max_abs_err);
        }
    }
}

fn trivial() -> mgeo_core::ExprMatrix {
    mgeo_core::metallic::trivial_structure_field(1.0, 1.0, 2, Default::default()).unwrap()
}

#[test]
fn helical_projector_is_not_integrable() {
    let m = catalog::helical_projector();
    let c = classify(&m, &verifier(&m)).unwrap();
    assert!(!c.integrable);
    assert!(c.max_nijenhuis > 0.1);
    assert!(!c.locally_metallic);
    assert!(c.flat);
}

#[test]
fn torsion_identity_needs_the_discriminant_factor_when_n_is_nonzero() {
    // d = 5 here, so the relation without 1/d is off by a factor of five.
    let m = catalog::helical_projector();
    let v = verifier(&m);
    assert!(check_torsion_identity(&m, &v).unwrap().pass);
    assert!(!check_torsion_identity_unnormalized(&m, &v).unwrap().pass);
    for m in catalog::all() {
        let v = verifier(&m);
        assert!(check_torsion_identity_unnormalized(&m, &v).unwrap().pass, "{}", m.name());
    }
}

#[test]
fn natural_connection_of_norden_examples_is_the_canonical_one() {
    for m in [catalog::e1_norden(), catalog::conformal_norden()] {
        let v = verifier(&m);
        let r = check_ganchev_mihova(&m, &v).unwrap();
        assert!(r.pass, "{}: {:e}", m.name(), r.max_abs_err);
        for r in check_natural_connection(&m, &v).unwrap() {
            assert!(r.pass, "{}", r.check_id);
        }
    }
    let m = catalog::conformal_norden();
    let c = classify(&m, &verifier(&m)).unwrap();
    assert!(!c.locally_metallic, "the check must exercise a non-parallel structure");
    assert!(check_ganchev_mihova(&catalog::e2(), &verifier(&catalog::e2())).is_err());
}

#[test]
fn classification_flags_are_consistent() {
    for m in catalog::all() {
        let c = classify(&m, &verifier(&m)).unwrap();
        if c.locally_metallic {
            assert!(c.integrable && c.nearly_locally_metallic);
        }
        if let Some(res) = c.nearly_identity_residual {
            assert!(res <= 1e-9, "{}", m.name());
        }
        assert!(c.half_p_det_min > 0.0);
    }
}
