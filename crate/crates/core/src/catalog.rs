//! Built-in example manifolds.
//!
//! | id | metric | structure | (p, q) |
//! |----|--------|-----------|--------|
//! | E1 | `diag(1, -1)` on `[-1,1]^2` | `[[1,1],[-1,1]]` | (2, -2) |
//! | E2 | Euclidean on `[-1,1]^2` | `sqrt(5) P + (1-phi) I`, `P` the projector onto `(cos xy, sin xy)` | (1, 1) |
//! | E3 | `diag(1, u^2)`, `u` in `[1,2]` | `phi I` | (1, 1) |
//! | E4 | `diag(1, sin(u)^2)`, `u` in `[0.5,1]` | `diag(phi, 1-phi)` | (1, 1) |

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::manifold::{ChartManifold, ChartSpec};

pub const IDS: [&str; 4] = ["E1", "E2", "E3", "E4"];

const PHI: &str = "1.6180339887498949";
const ONE_MINUS_PHI: &str = "(1-1.6180339887498949)";

fn spec(
    name: &str,
    coords: &[&str],
    p: f64,
    q: f64,
    domain: &[[f64; 2]],
    g: &[&[&str]],
    j: &[&[&str]],
) -> ChartSpec {
    let own = |m: &[&[&str]]| -> Vec<Vec<String>> {
        m.iter().map(|r| r.iter().map(|s| String::from(*s)).collect()).collect()
    };
    ChartSpec {
        name: name.into(),
        dim: coords.len(),
        coords: coords.iter().map(|s| String::from(*s)).collect(),
        p,
        q,
        domain: domain.to_vec(),
        g: own(g),
        j: own(j),
    }
}

fn build(s: ChartSpec) -> ChartManifold {
    s.build().expect("built-in example is well-formed")
}

pub fn e1_spec() -> ChartSpec {
    spec(
        "E1",
        &["x", "y"],
        2.0,
        -2.0,
        &[[-1.0, 1.0], [-1.0, 1.0]],
        &[&["1", "0"], &["0", "-1"]],
        &[&["1", "1"], &["-1", "1"]],
    )
}

pub fn e2_spec() -> ChartSpec {
    spec(
        "E2",
        &["x", "y"],
        1.0,
        1.0,
        &[[-1.0, 1.0], [-1.0, 1.0]],
        &[&["1", "0"], &["0", "1"]],
        &[
            &["sqrt(5)*cos(x*y)^2+(1-sqrt(5))/2", "sqrt(5)*cos(x*y)*sin(x*y)"],
            &["sqrt(5)*cos(x*y)*sin(x*y)", "sqrt(5)*sin(x*y)^2+(1-sqrt(5))/2"],
        ],
    )
}

pub fn e3_spec() -> ChartSpec {
    spec(
        "E3",
        &["u", "v"],
        1.0,
        1.0,
        &[[1.0, 2.0], [0.0, 1.0]],
        &[&["1", "0"], &["0", "u^2"]],
        &[&[PHI, "0"], &["0", PHI]],
    )
}

pub fn e4_spec() -> ChartSpec {
    spec(
        "E4",
        &["u", "v"],
        1.0,
        1.0,
        &[[0.5, 1.0], [0.0, 1.0]],
        &[&["1", "0"], &["0", "sin(u)^2"]],
        &[&[PHI, "0"], &["0", ONE_MINUS_PHI]],
    )
}

/// Flat neutral plane with the constant structure `J_{1,1}`.
pub fn e1() -> ChartManifold {
    build(e1_spec())
}

/// Euclidean plane with a rotating golden projector structure.
pub fn e2() -> ChartManifold {
    build(e2_spec())
}

/// Polar chart of the flat plane with the trivial structure `phi I`.
pub fn e3() -> ChartManifold {
    build(e3_spec())
}

/// Round sphere chart with a constant diagonal golden structure.
pub fn e4() -> ChartManifold {
    build(e4_spec())
}

pub fn all() -> Vec<ChartManifold> {
    vec![e1(), e2(), e3(), e4()]
}

pub fn by_id(id: &str) -> Option<ChartManifold> {
    Some(match id {
        "E1" => e1(),
        "E2" => e2(),
        "E3" => e3(),
        "E4" => e4(),
        _ => return None,
    })
}

pub fn description(id: &str) -> Option<&'static str> {
    Some(match id {
        "E1" => "flat neutral plane, constant J = [[1,1],[-1,1]], (p,q) = (2,-2)",
        "E2" => "Euclidean plane, golden projector structure rotating with xy, (p,q) = (1,1)",
        "E3" => "flat plane in polar chart g = diag(1,u^2), trivial J = phi I, (p,q) = (1,1)",
        "E4" => "unit sphere chart g = diag(1,sin(u)^2), J = diag(phi,1-phi), (p,q) = (1,1)",
        _ => return None,
    })
}

/// E1's metric with the Norden structure `[[0,1],[-1,0]]`.
pub fn e1_norden() -> ChartManifold {
    let mut s = e1_spec();
    s.name = "E1-norden".into();
    s.p = 0.0;
    s.q = -1.0;
    s.j = vec![vec!["0".into(), "1".into()], vec!["-1".into(), "0".into()]];
    build(s)
}

/// Conformally neutral plane `exp(xy) diag(1,-1)` with the constant Norden
/// structure `[[0,1],[-1,0]]`, which is not parallel.
pub fn conformal_norden() -> ChartManifold {
    build(spec(
        "conformal-norden",
        &["x", "y"],
        0.0,
        -1.0,
        &[[-1.0, 1.0], [-1.0, 1.0]],
        &[&["exp(x*y)", "0"], &["0", "-exp(x*y)"]],
        &[&["0", "1"], &["-1", "0"]],
    ))
}

/// Euclidean 3-space with `sqrt(5) P + (1-phi) I`, `P` the projector onto
/// `(cos z, sin z, 0)`. The orthogonal plane field is not integrable, so
/// this structure has a nonzero Nijenhuis tensor.
pub fn helical_projector() -> ChartManifold {
    let a = "sqrt(5)*cos(z)^2+(1-sqrt(5))/2";
    let b = "sqrt(5)*cos(z)*sin(z)";
    let c = "sqrt(5)*sin(z)^2+(1-sqrt(5))/2";
    build(spec(
        "helical-projector",
        &["x", "y", "z"],
        1.0,
        1.0,
        &[[-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]],
        &[&["1", "0", "0"], &["0", "1", "0"], &["0", "0", "1"]],
        &[&[a, b, "0"], &[b, c, "0"], &["0", "0", "(1-sqrt(5))/2"]],
    ))
}

/// A non-diagonal, non-constant Riemannian metric on `[-1,1]^2` carrying
/// the identity structure; used to exercise the Christoffel machinery.
pub fn skew_metric() -> ChartManifold {
    build(spec(
        "skew-metric",
        &["x", "y"],
        0.0,
        1.0,
        &[[-1.0, 1.0], [-1.0, 1.0]],
        &[&["2+sin(x*y)", "x*y/2"], &["x*y/2", "1+x^2+exp(y)/3"]],
        &[&["1", "0"], &["0", "1"]],
    ))
}
