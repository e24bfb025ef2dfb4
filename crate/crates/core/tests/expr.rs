use mgeo_core::expr::random::random_expr;
use mgeo_core::metallic::{metallic_number, metallic_root};
use mgeo_core::sample::fd_partial;
use mgeo_core::{catalog, parse, Expr, RootSign};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMES: [&str; 3] = ["x", "y", "z"];

fn case(seed: u64) -> (Expr, Vec<f64>, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = random_expr(&mut rng, 3, 4);
    let x = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
    (e, x, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn symbolic_derivative_matches_central_difference(seed in any::<u64>(), i in 0usize..3) {
        let (e, x, _) = case(seed);
        let exact = e.diff(i).eval(&x).unwrap();
        let fd = fd_partial(|p| e.eval(p), &x, i, 1e-5).unwrap();
        prop_assert!((exact - fd).abs() <= 1e-6 * (1.0 + exact.abs()), "{e}: {exact} vs {fd}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplify_preserves_values(seed in any::<u64>()) {
        let (e, x, _) = case(seed);
        let raw = e.eval(&x).unwrap();
        let s = e.simplify().eval(&x).unwrap();
        prop_assert!((raw - s).abs() <= 1e-12 * (1.0 + raw.abs()));
    }

    #[test]
    fn printing_and_reparsing_is_exact(seed in any::<u64>()) {
        let (e, _, mut rng) = case(seed);
        let text = e.display_with(&NAMES).to_string();
        let back = parse(&text, &NAMES).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let (a, b) = (e.eval(&x).unwrap(), back.eval(&x).unwrap());
            prop_assert!(a == b || (a - b).abs() <= f64::EPSILON * a.abs(), "{text}: {a} vs {b}");
        }
    }

    #[test]
    fn mixed_partials_commute(seed in any::<u64>(), i in 0usize..3, j in 0usize..3) {
        let (e, x, _) = case(seed);
        let a = e.diff(i).diff(j).eval(&x).unwrap();
        let b = e.diff(j).diff(i).eval(&x).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs())));
    }

    #[test]
    fn metallic_roots_solve_their_quadratic(p in -10.0..10.0f64, q in -5.0..20.0f64) {
        prop_assume!(p * p + 4.0 * q >= 0.0);
        for sign in [RootSign::Plus, RootSign::Minus] {
            let s = metallic_root(p, q, sign).unwrap();
            prop_assert!((s * s - p * s - q).abs() <= 1e-12 * (1.0 + s * s));
        }
        prop_assert_eq!(metallic_number(p, q).unwrap(), metallic_root(p, q, RootSign::Plus).unwrap());
    }

    #[test]
    fn sharp_inverts_flat(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for m in catalog::all() {
            let x: Vec<f64> = m.domain().iter().map(|iv| rng.random_range(iv.lo..=iv.hi)).collect();
            let v: Vec<f64> = (0..m.dim()).map(|_| rng.random_range(-3.0..3.0)).collect();
            let back = m.sharp(&x, &m.flat(&x, &v).unwrap()).unwrap();
            let scale = v.iter().fold(1.0f64, |a, b| a.max(b.abs()));
            for (a, b) in v.iter().zip(&back) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
        }
    }
}

#[test]
fn negative_discriminant_has_no_metallic_number() {
    assert!(metallic_number(1.0, -1.0).is_err());
}
