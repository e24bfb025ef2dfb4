//! Levi-Civita connection, curvature, Nijenhuis tensor and the metallic
//! natural connection.
//!
//! Connection coefficients are stored as `c[[k, i, j]] = C^k_{ij}` with
//! `D_{∂_i} ∂_j = C^k_{ij} ∂_k`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{GeomError, Result};
use crate::expr::Expr;
use crate::manifold::ChartManifold;
use crate::sample::{scaled, CheckReport, Verifier};
use crate::tensor::{max_abs, sum, ExprMatrix, Tensor3, Tensor4};

/// `Γ^k_{ij}`, symmetric in `i, j`.
pub type ChristoffelField = Tensor3<Expr>;
/// `C^k_{ij}`, not necessarily symmetric.
pub type ConnectionField = Tensor3<Expr>;
/// A `(1,2)` tensor `K^k_{ij}` stored at `[k, i, j]`.
pub type Tensor12Field = Tensor3<Expr>;
/// `R^l_{ijk}` stored at `[l, i, j, k]`.
pub type CurvatureField = Tensor4<Expr>;

/// `Γ^l_{jk} = ½ g^{lm}(∂_j g_{mk} + ∂_k g_{mj} - ∂_m g_{jk})`.
pub fn levi_civita(m: &ChartManifold) -> Result<ChristoffelField> {
    let n = m.dim();
    let g = m.metric();
    let ginv = g.inverse().ok_or(GeomError::DegenerateMetric { det: 0.0 })?;
    let dg: Vec<ExprMatrix> = (0..n).map(|i| g.diff(i)).collect();
    // First-kind symbols [jk, m].
    let first = Tensor3::from_fn(n, |mm, j, k| {
        (&dg[j][(mm, k)] + &dg[k][(mm, j)] - &dg[mm][(j, k)]) * 0.5
    });
    Ok(Tensor3::from_fn(n, |l, j, k| {
        sum((0..n).map(|mm| &ginv[(l, mm)] * &first[[mm, j, k]]))
    }))
}

/// `(D_i A)^k_j = ∂_i A^k_j + C^k_{is} A^s_j - C^s_{ij} A^k_s`.
pub fn covariant_derivative_endo(a: &ExprMatrix, c: &ConnectionField) -> Tensor12Field {
    let n = c.dim();
    let da: Vec<ExprMatrix> = (0..n).map(|i| a.diff(i)).collect();
    Tensor3::from_fn(n, |k, i, j| {
        let mut t = da[i][(k, j)].clone();
        for s in 0..n {
            t = t + &c[[k, i, s]] * &a[(s, j)] - &c[[s, i, j]] * &a[(k, s)];
        }
        t
    })
}

/// `(D_i g)_{jk} = ∂_i g_{jk} - C^s_{ij} g_{sk} - C^s_{ik} g_{js}`, stored at `[i, j, k]`.
pub fn covariant_derivative_metric(g: &ExprMatrix, c: &ConnectionField) -> Tensor3<Expr> {
    let n = c.dim();
    let dg: Vec<ExprMatrix> = (0..n).map(|i| g.diff(i)).collect();
    Tensor3::from_fn(n, |i, j, k| {
        let mut t = dg[i][(j, k)].clone();
        for s in 0..n {
            t = t - &c[[s, i, j]] * &g[(s, k)] - &c[[s, i, k]] * &g[(j, s)];
        }
        t
    })
}

/// `(∇_i J)^k_j` for the Levi-Civita symbols `gamma`.
pub fn covariant_derivative_j(m: &ChartManifold, gamma: &ChristoffelField) -> Tensor12Field {
    covariant_derivative_endo(m.structure(), gamma)
}

/// `N^k_{ij} = J^s_i ∂_s J^k_j - J^s_j ∂_s J^k_i + J^k_s ∂_j J^s_i - J^k_s ∂_i J^s_j`.
pub fn nijenhuis_bracket(j: &ExprMatrix) -> Tensor12Field {
    let n = j.nrows();
    let dj: Vec<ExprMatrix> = (0..n).map(|i| j.diff(i)).collect();
    Tensor3::from_fn(n, |k, a, b| {
        sum((0..n).map(|s| {
            &j[(s, a)] * &dj[s][(k, b)] - &j[(s, b)] * &dj[s][(k, a)]
                + &j[(k, s)] * &dj[b][(s, a)]
                - &j[(k, s)] * &dj[a][(s, b)]
        }))
    })
}

/// `N^k_{ij} = J^s_i (∇_s J)^k_j - J^s_j (∇_s J)^k_i + J^k_s (∇_j J)^s_i - J^k_s (∇_i J)^s_j`.
pub fn nijenhuis_via_connection(j: &ExprMatrix, nabla_j: &Tensor12Field) -> Tensor12Field {
    let n = j.nrows();
    Tensor3::from_fn(n, |k, a, b| {
        sum((0..n).map(|s| {
            &j[(s, a)] * &nabla_j[[k, s, b]] - &j[(s, b)] * &nabla_j[[k, s, a]]
                + &j[(k, s)] * &nabla_j[[s, b, a]]
                - &j[(k, s)] * &nabla_j[[s, a, b]]
        }))
    })
}

/// `R^l_{ijk} = ∂_i C^l_{jk} - ∂_j C^l_{ik} + C^l_{im} C^m_{jk} - C^l_{jm} C^m_{ik}`.
pub fn curvature(c: &ConnectionField) -> CurvatureField {
    let n = c.dim();
    let dc: Vec<Tensor3<Expr>> = (0..n).map(|i| c.map(|e| e.diff(i))).collect();
    Tensor4::from_fn(n, |l, i, j, k| {
        let quad = sum((0..n).map(|mm| &c[[l, i, mm]] * &c[[mm, j, k]] - &c[[l, j, mm]] * &c[[mm, i, k]]));
        &dc[i][[l, j, k]] - &dc[j][[l, i, k]] + quad
    })
}

pub fn riemann(gamma: &ChristoffelField) -> CurvatureField {
    curvature(gamma)
}

/// `C^k_{ij} = Γ^k_{ij} + (2/d) J^k_s (∇_i J)^s_j - (p/d) (∇_i J)^k_j`, `d = p^2 + 4q`.
pub fn natural_connection(
    m: &ChartManifold,
    gamma: &ChristoffelField,
    nabla_j: &Tensor12Field,
) -> Result<ConnectionField> {
    let params = m.params();
    let d = params.nonzero_discriminant()?;
    let j = m.structure();
    let n = m.dim();
    let a = Expr::constant(2.0 / d);
    let b = Expr::constant(params.p / d);
    Ok(Tensor3::from_fn(n, |k, i, jj| {
        let jnj = sum((0..n).map(|s| &j[(k, s)] * &nabla_j[[s, i, jj]]));
        &gamma[[k, i, jj]] + &a * jnj - &b * &nabla_j[[k, i, jj]]
    }))
}

/// `T^k_{ij} = C^k_{ij} - C^k_{ji}`.
pub fn torsion_of(c: &ConnectionField) -> Tensor12Field {
    Tensor3::from_fn(c.dim(), |k, i, j| &c[[k, i, j]] - &c[[k, j, i]])
}

/// `(1/d)(2J - pI)(∇_X JY - ∇_Y JX)` on coordinate fields, where
/// `∇_{∂_i}(J ∂_j) = ((∇_i J)^k_j + J^k_s Γ^s_{ij}) ∂_k` and `[∂_i, ∂_j] = 0`.
pub fn torsion_formula(
    m: &ChartManifold,
    gamma: &ChristoffelField,
    nabla_j: &Tensor12Field,
) -> Result<Tensor12Field> {
    let params = m.params();
    let d = params.nonzero_discriminant()?;
    let j = m.structure();
    let n = m.dim();
    let w = j.scale(&Expr::constant(2.0)).sub(&ExprMatrix::scalar(n, Expr::constant(params.p)));
    let nabla_of_j = |k: usize, i: usize, jj: usize| {
        &nabla_j[[k, i, jj]] + sum((0..n).map(|s| &j[(k, s)] * &gamma[[s, i, jj]]))
    };
    let diff = Tensor3::from_fn(n, |k, i, jj| nabla_of_j(k, i, jj) - nabla_of_j(k, jj, i));
    Ok(Tensor3::from_fn(n, |k, i, jj| {
        sum((0..n).map(|mm| &w[(k, mm)] * &diff[[mm, i, jj]])) * (1.0 / d)
    }))
}

/// All fields derived from the Levi-Civita connection of one manifold.
#[derive(Clone, Debug)]
pub struct LeviCivitaData {
    pub gamma: ChristoffelField,
    pub nabla_j: Tensor12Field,
}

impl LeviCivitaData {
    pub fn new(m: &ChartManifold) -> Result<Self> {
        let gamma = levi_civita(m)?;
        let nabla_j = covariant_derivative_j(m, &gamma);
        Ok(LeviCivitaData { gamma, nabla_j })
    }

    pub fn natural_connection(&self, m: &ChartManifold) -> Result<ConnectionField> {
        natural_connection(m, &self.gamma, &self.nabla_j)
    }
}

fn max_diff3(a: &Tensor3<f64>, b: &Tensor3<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

fn compare3(a: &Tensor3<Expr>, b: &Tensor3<Expr>, x: &[f64]) -> Result<f64> {
    let a = a.eval(x)?;
    let b = b.eval(x)?;
    Ok(scaled(max_diff3(&a, &b), a.max_abs().max(b.max_abs())))
}

fn vanishing3(t: &Tensor3<Expr>, scale: impl Fn(&[f64]) -> Result<f64>, x: &[f64]) -> Result<f64> {
    Ok(scaled(t.eval(x)?.max_abs(), scale(x)?))
}

/// `Γ^k_{ij} = Γ^k_{ji}` on the sample.
pub fn check_christoffel_symmetric(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let gamma = levi_civita(m)?;
    v.check("connections.christoffel_symmetric", m.name(), |x| {
        let t = gamma.eval(x)?;
        let n = t.dim();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    worst = worst.max((t[[k, i, j]] - t[[k, j, i]]).abs());
                }
            }
        }
        Ok(scaled(worst, t.max_abs()))
    })
}

/// `∇g = 0` for the Levi-Civita symbols.
pub fn check_metric_compatibility(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let gamma = levi_civita(m)?;
    let ng = covariant_derivative_metric(m.metric(), &gamma);
    v.check("connections.metric_compatibility", m.name(), |x| {
        let scale = max_abs(&m.metric_at(x)?) * gamma.eval(x)?.max_abs();
        Ok(scaled(ng.eval(x)?.max_abs(), scale))
    })
}

/// Bracket and connection forms of the Nijenhuis tensor agree.
pub fn check_nijenhuis_cross(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let lc = LeviCivitaData::new(m)?;
    let bracket = nijenhuis_bracket(m.structure());
    let via = nijenhuis_via_connection(m.structure(), &lc.nabla_j);
    v.check("connections.nijenhuis_cross_formula", m.name(), |x| compare3(&bracket, &via, x))
}

/// Antisymmetry of `R^l_{ijk}` in `(i, j)`, of `g_{lm} R^m_{ijk}` in
/// `(k, l)`, and the first Bianchi sum, as one worst residual each.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureSymmetries {
    pub antisymmetry_ij: f64,
    pub antisymmetry_kl: f64,
    pub bianchi: f64,
}

pub fn curvature_symmetries(r: &Tensor4<f64>, g: &DMatrix<f64>) -> CurvatureSymmetries {
    let n = r.dim();
    let scale = r.max_abs();
    let (mut ij, mut kl, mut b): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let lowered = |l: usize, i: usize, j: usize, k: usize| -> f64 { (0..n).map(|m| g[(l, m)] * r[[m, i, j, k]]).sum() };
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    ij = ij.max((r[[l, i, j, k]] + r[[l, j, i, k]]).abs());
                    b = b.max((r[[l, i, j, k]] + r[[l, j, k, i]] + r[[l, k, i, j]]).abs());
                    kl = kl.max((lowered(l, i, j, k) + lowered(k, i, j, l)).abs());
                }
            }
        }
    }
    CurvatureSymmetries {
        antisymmetry_ij: scaled(ij, scale),
        antisymmetry_kl: scaled(kl, scale * max_abs(g)),
        bianchi: scaled(b, scale),
    }
}

/// Reports for the three curvature symmetries of the Levi-Civita curvature.
pub fn check_curvature_symmetries(m: &ChartManifold, v: &Verifier) -> Result<[CheckReport; 3]> {
    let r = riemann(&levi_civita(m)?);
    let mut worst = CurvatureSymmetries {
        antisymmetry_ij: 0.0,
        antisymmetry_kl: 0.0,
        bianchi: 0.0,
    };
    for x in v.sample.iter() {
        let s = curvature_symmetries(&r.eval(x)?, &m.metric_at(x)?);
        worst.antisymmetry_ij = nan_max(worst.antisymmetry_ij, s.antisymmetry_ij);
        worst.antisymmetry_kl = nan_max(worst.antisymmetry_kl, s.antisymmetry_kl);
        worst.bianchi = nan_max(worst.bianchi, s.bianchi);
    }
    let report = |id: &str, e: f64| CheckReport::new(id, m.name(), v.sample.count, e, v.tolerance);
    Ok([
        report("connections.curvature_antisymmetry", worst.antisymmetry_ij),
        report("connections.curvature_lowered_antisymmetry", worst.antisymmetry_kl),
        report("connections.bianchi", worst.bianchi),
    ])
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// `DJ = 0` and `Dg = 0` for the natural connection.
pub fn check_natural_connection(m: &ChartManifold, v: &Verifier) -> Result<[CheckReport; 2]> {
    let lc = LeviCivitaData::new(m)?;
    let c = lc.natural_connection(m)?;
    let dj = covariant_derivative_endo(m.structure(), &c);
    let dg = covariant_derivative_metric(m.metric(), &c);
    let c_scale = |x: &[f64]| -> Result<f64> { Ok(c.eval(x)?.max_abs()) };
    let dj_report = v.check("connections.natural_dj", m.name(), |x| {
        let s = c_scale(x)? * max_abs(&m.structure_at(x)?);
        vanishing3(&dj, |_| Ok(s), x)
    })?;
    let dg_report = v.check("connections.natural_dg", m.name(), |x| {
        let s = c_scale(x)? * max_abs(&m.metric_at(x)?);
        vanishing3(&dg, |_| Ok(s), x)
    })?;
    Ok([dj_report, dg_report])
}

/// `C - C^T` against the closed torsion formula.
pub fn check_torsion_formula(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let lc = LeviCivitaData::new(m)?;
    let t = torsion_of(&lc.natural_connection(m)?);
    let closed = torsion_formula(m, &lc.gamma, &lc.nabla_j)?;
    v.check("connections.torsion_formula", m.name(), |x| compare3(&t, &closed, x))
}

/// Left side `T(JX,Y) + T(X,JY) - pT(X,Y)` and right side `(2J - pI) N(X,Y)`
/// of the torsion identity, as numeric tensors at `x`.
pub fn torsion_identity_sides(
    m: &ChartManifold,
    torsion: &Tensor12Field,
    nijenhuis: &Tensor12Field,
    x: &[f64],
) -> Result<(Tensor3<f64>, Tensor3<f64>)> {
    let p = m.params().p;
    let j = m.structure_at(x)?;
    let t = torsion.eval(x)?;
    let nj = nijenhuis.eval(x)?;
    let n = m.dim();
    let lhs = Tensor3::from_fn(n, |k, a, b| {
        (0..n).map(|s| j[(s, a)] * t[[k, s, b]] + j[(s, b)] * t[[k, a, s]]).sum::<f64>() - p * t[[k, a, b]]
    });
    let rhs = Tensor3::from_fn(n, |k, a, b| {
        (0..n).map(|s| 2.0 * j[(k, s)] * nj[[s, a, b]]).sum::<f64>() - p * nj[[k, a, b]]
    });
    Ok((lhs, rhs))
}

/// `T(JX,Y) + T(X,JY) - pT(X,Y) = (1/d)(2J - pI) N(X,Y)`.
///
/// The right side carries the factor `1/d` that the torsion formula puts
/// in front of `(2J - pI)`; see [`check_torsion_identity_unnormalized`] for
/// the relation without it.
pub fn check_torsion_identity(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let d = m.params().nonzero_discriminant()?;
    torsion_identity_report(m, v, "connections.torsion_identity", 1.0 / d)
}

/// `T(JX,Y) + T(X,JY) - pT(X,Y) = (2J - pI) N(X,Y)` with no `1/d`. Agrees
/// with [`check_torsion_identity`] when `N = 0` or `d = 1`.
pub fn check_torsion_identity_unnormalized(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    m.params().nonzero_discriminant()?;
    torsion_identity_report(m, v, "connections.torsion_identity_unnormalized", 1.0)
}

fn torsion_identity_report(m: &ChartManifold, v: &Verifier, id: &str, factor: f64) -> Result<CheckReport> {
    let lc = LeviCivitaData::new(m)?;
    let t = torsion_of(&lc.natural_connection(m)?);
    let nj = nijenhuis_bracket(m.structure());
    v.check(id, m.name(), |x| {
        let (lhs, rhs) = torsion_identity_sides(m, &t, &nj, x)?;
        let rhs = rhs.map(|r| r * factor);
        Ok(scaled(max_diff3(&lhs, &rhs), lhs.max_abs().max(rhs.max_abs())))
    })
}

/// For `(p, q) = (0, -1)` the natural connection equals
/// `Γ^k_{ij} + ½ (∇_i J)^k_s J^s_j`.
pub fn check_ganchev_mihova(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let params = m.params();
    if params.p != 0.0 || params.q != -1.0 {
        return Err(GeomError::InvalidManifold(format!(
            "{} has (p, q) = ({}, {}), not (0, -1)",
            m.name(),
            params.p,
            params.q
        )));
    }
    let lc = LeviCivitaData::new(m)?;
    let c = lc.natural_connection(m)?;
    let j = m.structure();
    let n = m.dim();
    let gm = Tensor3::from_fn(n, |k, i, jj| {
        &lc.gamma[[k, i, jj]] + sum((0..n).map(|s| &lc.nabla_j[[k, i, s]] * &j[(s, jj)])) * 0.5
    });
    v.check("connections.ganchev_mihova", m.name(), |x| compare3(&c, &gm, x))
}

/// `C^k_{ij} = Γ^k_{ij}` whenever `∇J` vanishes; passes vacuously otherwise.
pub fn check_parallel_degeneration(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let lc = LeviCivitaData::new(m)?;
    let c = lc.natural_connection(m)?;
    let parallel = v.max_over(|x| Ok(lc.nabla_j.eval(x)?.max_abs()))? <= v.tolerance;
    v.check("connections.parallel_degeneration", m.name(), |x| {
        if parallel {
            compare3(&c, &lc.gamma, x)
        } else {
            Ok(0.0)
        }
    })
}

/// Structural flags of a manifold over a sample.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyReport {
    pub manifold_id: String,
    pub integrable: bool,
    pub locally_metallic: bool,
    pub nearly_locally_metallic: bool,
    pub flat: bool,
    pub max_nijenhuis: f64,
    pub max_nabla_j: f64,
    pub max_symmetrized_nabla_j: f64,
    pub max_curvature: f64,
    /// Worst `|N^k_{ij} - 2(2J - pI)^k_s (∇_j J)^s_i|`, evaluated only when
    /// the nearly flag holds and `p^2 + 4q > 0`.
    pub nearly_identity_residual: Option<f64>,
    /// Smallest `|det(J - (p/2) I)|` on the sample; zero would make `p/2` an
    /// eigenvalue of `J`.
    pub half_p_det_min: f64,
}

impl ClassifyReport {
    /// The flags that hold, in a fixed order.
    pub fn flags(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (on, name) in [
            (self.integrable, "integrable"),
            (self.locally_metallic, "locally_metallic"),
            (self.nearly_locally_metallic, "nearly_locally_metallic"),
            (self.flat, "flat"),
        ] {
            if on {
                out.push(name);
            }
        }
        out
    }
}

pub fn classify(m: &ChartManifold, v: &Verifier) -> Result<ClassifyReport> {
    let lc = LeviCivitaData::new(m)?;
    let nj = nijenhuis_bracket(m.structure());
    let r = riemann(&lc.gamma);
    let n = m.dim();
    let params = m.params();
    let sym = Tensor3::from_fn(n, |k, i, j| &lc.nabla_j[[k, i, j]] + &lc.nabla_j[[k, j, i]]);

    let max_nijenhuis = v.max_over(|x| Ok(nj.eval(x)?.max_abs()))?;
    let max_nabla_j = v.max_over(|x| Ok(lc.nabla_j.eval(x)?.max_abs()))?;
    let max_symmetrized_nabla_j = v.max_over(|x| Ok(sym.eval(x)?.max_abs()))?;
    let max_curvature = v.max_over(|x| Ok(r.eval(x)?.max_abs()))?;
    let nearly = max_symmetrized_nabla_j <= v.tolerance;

    let nearly_identity_residual = if nearly && params.discriminant() > 0.0 {
        Some(v.max_over(|x| {
            let j = m.structure_at(x)?;
            let w = &j * 2.0 - DMatrix::identity(n, n) * params.p;
            let nab = lc.nabla_j.eval(x)?;
            let nv = nj.eval(x)?;
            let mut worst: f64 = 0.0;
            for k in 0..n {
                for i in 0..n {
                    for jj in 0..n {
                        let rhs: f64 = (0..n).map(|s| 2.0 * w[(k, s)] * nab[[s, jj, i]]).sum();
                        worst = worst.max((nv[[k, i, jj]] - rhs).abs());
                    }
                }
            }
            Ok(worst)
        })?)
    } else {
        None
    };

    let mut half_p_det_min = f64::INFINITY;
    for x in v.sample.iter() {
        let j = m.structure_at(x)?;
        let det = (j - DMatrix::identity(n, n) * (params.p / 2.0)).determinant();
        half_p_det_min = half_p_det_min.min(det.abs());
    }

    Ok(ClassifyReport {
        manifold_id: m.name().into(),
        integrable: max_nijenhuis <= v.tolerance,
        locally_metallic: max_nabla_j <= v.tolerance,
        nearly_locally_metallic: nearly,
        flat: max_curvature <= v.tolerance,
        max_nijenhuis,
        max_nabla_j,
        max_symmetrized_nabla_j,
        max_curvature,
        nearly_identity_residual,
        half_p_det_min,
    })
}

/// Locally metallic implies integrable: the error is `max |N|` when
/// `∇J = 0` on the sample and zero otherwise.
pub fn check_locally_metallic_integrable(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let c = classify(m, v)?;
    let err = if c.locally_metallic { c.max_nijenhuis } else { 0.0 };
    Ok(CheckReport::new(
        "connections.locally_metallic_integrable",
        m.name(),
        v.sample.count,
        err,
        v.tolerance,
    ))
}

/// The nearly-locally-metallic identity `N = 2(2J - pI)(∇_Y J)X`, reported
/// only when it applies.
pub fn check_nearly_identity(m: &ChartManifold, v: &Verifier) -> Result<Option<CheckReport>> {
    let c = classify(m, v)?;
    Ok(c.nearly_identity_residual.map(|e| {
        CheckReport::new("connections.nearly_identity", m.name(), v.sample.count, e, v.tolerance)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::sample::SampleConfig;

    fn verifier(m: &ChartManifold) -> Verifier {
        Verifier::new(m.domain(), &SampleConfig::default().with_count(40))
    }

    #[test]
    fn constant_metric_has_vanishing_symbols() {
        let gamma = levi_civita(&catalog::e1()).unwrap();
        assert!(gamma.iter().all(Expr::is_zero));
    }

    #[test]
    fn polar_symbols() {
        let gamma = levi_civita(&catalog::e3()).unwrap();
        let x = [1.5, 0.3];
        let t = gamma.eval(&x).unwrap();
        assert!((t[[0, 1, 1]] + 1.5).abs() < 1e-15);
        assert!((t[[1, 0, 1]] - 1.0 / 1.5).abs() < 1e-15);
        assert!((t[[1, 1, 0]] - 1.0 / 1.5).abs() < 1e-15);
        assert_eq!(t[[0, 0, 0]], 0.0);
        assert_eq!(t[[1, 1, 1]], 0.0);
    }

    #[test]
    fn trivial_structure_is_parallel() {
        let m = catalog::e3();
        let lc = LeviCivitaData::new(&m).unwrap();
        let t = lc.nabla_j.eval(&[1.2, 0.4]).unwrap();
        assert!(t.max_abs() < 1e-15);
    }

    #[test]
    fn flat_neutral_example_is_fully_flagged() {
        let m = catalog::e1();
        let c = classify(&m, &verifier(&m)).unwrap();
        assert_eq!(c.flags(), ["integrable", "locally_metallic", "nearly_locally_metallic", "flat"]);
        assert!(c.nearly_identity_residual.is_none(), "d < 0 for E1");
    }

    #[test]
    fn sphere_example_is_neither_flat_nor_parallel() {
        let m = catalog::e4();
        let c = classify(&m, &verifier(&m)).unwrap();
        assert!(!c.flat);
        assert!(!c.locally_metallic);
        assert!(c.integrable);
    }

    #[test]
    fn natural_connection_equals_levi_civita_when_parallel() {
        let m = catalog::e3();
        let lc = LeviCivitaData::new(&m).unwrap();
        let c = lc.natural_connection(&m).unwrap();
        let x = [1.7, 0.2];
        assert_eq!(c.eval(&x).unwrap(), lc.gamma.eval(&x).unwrap());
    }

    #[test]
    fn zero_discriminant_is_rejected() {
        let m = catalog::e1();
        let bad = m
            .with_structure("parabolic", m.structure().clone(), crate::MetallicParams::new(2.0, -1.0))
            .unwrap();
        let lc = LeviCivitaData::new(&bad).unwrap();
        assert_eq!(lc.natural_connection(&bad).unwrap_err(), GeomError::ZeroDiscriminant);
    }

    #[test]
    fn torsion_is_antisymmetric() {
        let m = catalog::e2();
        let lc = LeviCivitaData::new(&m).unwrap();
        let t = torsion_of(&lc.natural_connection(&m).unwrap()).eval(&[0.3, -0.8]).unwrap();
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(t[[k, i, j]], -t[[k, j, i]]);
                }
            }
        }
    }
}
