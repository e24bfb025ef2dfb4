//! Bounded random expressions for property tests and fuzzing.
//!
//! Every generated tree evaluates without domain errors on `[-1, 1]^n`:
//! logarithms, square roots, divisors and fractional powers only ever see
//! arguments of the form `c + e^2` with `c >= 1/2`.

use rand::Rng;

use super::Expr;

fn positive<R: Rng + ?Sized>(rng: &mut R, n: usize, depth: u32) -> Expr {
    let c = rng.random_range(0.5..2.0);
    random_expr(rng, n, depth).pow(2.0) + Expr::constant(c)
}

/// A random expression in coordinates `0..n` with at most `depth` levels
/// of operators.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, n: usize, depth: u32) -> Expr {
    if depth == 0 || rng.random_bool(0.2) {
        return if rng.random_bool(0.7) {
            Expr::coord(rng.random_range(0..n))
        } else {
            Expr::constant(rng.random_range(-2.0..2.0))
        };
    }
    let d = depth - 1;
    match rng.random_range(0..12) {
        0 => random_expr(rng, n, d) + random_expr(rng, n, d),
        1 => random_expr(rng, n, d) - random_expr(rng, n, d),
        2 | 3 => random_expr(rng, n, d) * random_expr(rng, n, d),
        4 => random_expr(rng, n, d) / positive(rng, n, d),
        5 => random_expr(rng, n, d).sin(),
        6 => random_expr(rng, n, d).cos(),
        7 => random_expr(rng, n, d).sin().exp(),
        8 => positive(rng, n, d).ln(),
        9 => positive(rng, n, d).sqrt(),
        10 => -random_expr(rng, n, d),
        _ => {
            if rng.random_bool(0.5) {
                random_expr(rng, n, d).pow(rng.random_range(2..4) as f64)
            } else {
                positive(rng, n, d).pow(rng.random_range(-1.5..1.5))
            }
        }
    }
}
