//! Metallic structures on the tangent and cotangent bundles.
//!
//! A lifted chart has coordinates `(x^1..x^n, y_1..y_n)`, the fiber
//! coordinates ranging over `[-1, 1]^n`. Structures are first written in the
//! adapted frame `{X_1^H..X_n^H, ∂/∂y_1..∂/∂y_n}` and then converted to the
//! coordinate frame through the frame matrix `F`, whose columns are the frame
//! vectors in coordinates:
//!
//! * tangent: `X_i^H = ∂/∂x^i - y^s Γ^k_{is} ∂/∂y^k`
//! * cotangent: `X_i^H = ∂/∂x^i + y_s Γ^s_{ik} ∂/∂y_k`
//!
//! Frame tensors are indexed horizontal first: index `a < n` is `X_a^H`,
//! index `n + k` is `∂/∂y_k`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::connections::{levi_civita, nijenhuis_bracket, riemann, ChristoffelField, LeviCivitaData};
use crate::error::{GeomError, Result};
use crate::expr::{parse::validate_coord_names, Expr};
use crate::generalized::{block_field, PointData};
use crate::manifold::{polynomial_defect, symmetry_defect, ChartManifold};
use crate::metallic::MetallicParams;
use crate::sample::{scaled, CheckReport, Interval, SampleConfig, Verifier};
use crate::tensor::{max_abs, sum, ExprMatrix, Tensor3, Tensor4};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftKind {
    Tangent,
    Cotangent,
}

impl LiftKind {
    pub fn label(self) -> &'static str {
        match self {
            LiftKind::Tangent => "tangent",
            LiftKind::Cotangent => "cotangent",
        }
    }
}

/// A lifted structure together with the data it was assembled from.
#[derive(Clone, Debug)]
pub struct LiftedChart {
    pub base: ChartManifold,
    pub kind: LiftKind,
    /// The `2n`-dimensional chart with coordinate-frame `g` and `J`.
    pub chart: ChartManifold,
    /// Columns are `X_i^H` and the vertical basis in coordinates.
    pub frame: ExprMatrix,
    pub frame_inverse: ExprMatrix,
    /// The structure in the adapted frame, from the coordinate table.
    pub structure_table: ExprMatrix,
    /// The metric table as printed, in the adapted frame.
    pub metric_table: ExprMatrix,
    /// The metric actually placed on the chart, in the adapted frame.
    pub metric_frame: ExprMatrix,
}

fn fiber_names(base: &[String]) -> Vec<String> {
    let n = base.len();
    let mut stem = String::from("y");
    loop {
        let names: Vec<String> = (1..=n).map(|i| format!("{stem}{i}")).collect();
        let mut all: Vec<&str> = base.iter().map(String::as_str).collect();
        all.extend(names.iter().map(String::as_str));
        if validate_coord_names(&all).is_ok() {
            return names;
        }
        stem.push('_');
    }
}

fn lifted_domain(base: &ChartManifold) -> Vec<Interval> {
    let mut d = base.domain().to_vec();
    d.extend((0..base.dim()).map(|_| Interval::new(-1.0, 1.0)));
    d
}

fn fiber(n: usize, s: usize) -> Expr {
    Expr::coord(n + s)
}

/// `[[I, 0], [A, I]]` and its inverse `[[I, 0], [-A, I]]`.
fn unipotent(a: &ExprMatrix) -> (ExprMatrix, ExprMatrix) {
    let n = a.nrows();
    let id = ExprMatrix::identity(n);
    let z = ExprMatrix::zeros(n, n);
    (
        block_field(&id, &z, a, &id),
        block_field(&id, &z, &a.map(|e| -e), &id),
    )
}

fn defect_field(j: &ExprMatrix, params: MetallicParams) -> ExprMatrix {
    let n = j.nrows();
    j.mul(j)
        .map(|e| -e)
        .add(&j.scale(&Expr::constant(params.p)))
        .add(&ExprMatrix::scalar(n, Expr::constant(params.q)))
}

fn assemble(
    base: &ChartManifold,
    kind: LiftKind,
    a: ExprMatrix,
    structure_table: ExprMatrix,
    metric_table: ExprMatrix,
    metric_frame: ExprMatrix,
) -> Result<LiftedChart> {
    let (frame, frame_inverse) = unipotent(&a);
    let j = frame.mul(&structure_table).mul(&frame_inverse);
    let g = frame_inverse.transpose().mul(&metric_frame).mul(&frame_inverse);
    let mut coords = base.coords().to_vec();
    coords.extend(fiber_names(base.coords()));
    let chart = ChartManifold::new(
        format!("{}-{}", base.name(), kind.label()),
        coords,
        g,
        j,
        base.params(),
        lifted_domain(base),
    )?;
    Ok(LiftedChart {
        base: base.clone(),
        kind,
        chart,
        frame,
        frame_inverse,
        structure_table,
        metric_table,
        metric_frame,
    })
}

/// `J̄` and `ḡ` on `TM`:
///
/// `J̄(X_i^H) = J^k_i X_k^H + ∂/∂y^i`,
/// `J̄(∂/∂y^j) = (-J^2+pJ+qI)^k_j X_k^H - J^k_j ∂/∂y^k + p ∂/∂y^j`,
/// `ḡ(X_i^H, X_j^H) = g_{ij}`, `ḡ(X_i^H, ∂/∂y^j) = (p g_{ij} - 2 g_{jl} J^l_i)/d`,
/// `ḡ(∂/∂y^i, ∂/∂y^j) = g_{ij}`.
pub fn build_tangent_lift(m: &ChartManifold) -> Result<LiftedChart> {
    let params = m.params();
    let d = params.nonzero_discriminant()?;
    let n = m.dim();
    let gamma = levi_civita(m)?;
    let j = m.structure();
    let g = m.metric();
    let a = ExprMatrix::from_fn(n, n, |k, i| -sum((0..n).map(|s| fiber(n, s) * &gamma[[k, i, s]])));
    let vertical = ExprMatrix::scalar(n, Expr::constant(params.p)).sub(j);
    let table = block_field(j, &defect_field(j, params), &ExprMatrix::identity(n), &vertical);
    let w = ExprMatrix::from_fn(n, n, |i, jj| {
        let gj = sum((0..n).map(|l| &g[(jj, l)] * &j[(l, i)]));
        (&g[(i, jj)] * params.p - gj * 2.0) * (1.0 / d)
    });
    let metric = block_field(g, &w, &w.transpose(), g);
    assemble(m, LiftKind::Tangent, a, table, metric.clone(), metric)
}

/// `J̃` and `g̃` on `T*M`:
///
/// `J̃(X_i^H) = J^k_i X_k^H + g_{ik} ∂/∂y_k`,
/// `J̃(∂/∂y_j) = (-J^2+pJ+qI)^l_k g^{jk} X_l^H - J^j_k ∂/∂y_k + p ∂/∂y_j`,
/// `g̃(X_i^H, X_j^H) = g_{ij}`, `g̃(X_i^H, ∂/∂y_j) = (p/4) δ_{ij} - ½ J^j_i`.
///
/// The printed table also gives `g̃(∂/∂y_i, ∂/∂y_j) = g^{ij}`; with it `J̃` is
/// symmetric only when `p^2 + 4q = 4`. The chart instead carries the
/// pullback of `ǧ`, whose vertical block is `((p^2+4q)/4) g^{ij}`. The
/// printed table is kept in `metric_table`.
pub fn build_cotangent_lift(m: &ChartManifold) -> Result<LiftedChart> {
    let params = m.params();
    let d = params.discriminant();
    let n = m.dim();
    let gamma = levi_civita(m)?;
    let j = m.structure();
    let g = m.metric();
    let g_inv = g.inverse().ok_or(GeomError::DegenerateMetric { det: 0.0 })?;
    let b = ExprMatrix::from_fn(n, n, |k, i| sum((0..n).map(|s| fiber(n, s) * &gamma[[s, i, k]])));
    let vertical = ExprMatrix::scalar(n, Expr::constant(params.p)).sub(&j.transpose());
    let table = block_field(j, &defect_field(j, params).mul(&g_inv), g, &vertical);
    let cross = ExprMatrix::from_fn(n, n, |i, jj| {
        let delta = if i == jj { params.p / 4.0 } else { 0.0 };
        Expr::constant(delta) - &j[(jj, i)] * 0.5
    });
    let printed = block_field(g, &cross, &cross.transpose(), &g_inv);
    let pulled = block_field(g, &cross, &cross.transpose(), &g_inv.scale(&Expr::constant(d / 4.0)));
    assemble(m, LiftKind::Cotangent, b, table, printed, pulled)
}

pub fn build_lift(m: &ChartManifold, kind: LiftKind) -> Result<LiftedChart> {
    match kind {
        LiftKind::Tangent => build_tangent_lift(m),
        LiftKind::Cotangent => build_cotangent_lift(m),
    }
}

/// Frame matrix of `Ψ` (tangent) or `Φ` (cotangent) at a base point:
/// `[[I, 0], [0, G^{-1}]]` or the identity.
pub fn morphism_matrix(kind: LiftKind, pd: &PointData) -> DMatrix<f64> {
    let n = pd.dim();
    let mut m = DMatrix::identity(2 * n, 2 * n);
    if kind == LiftKind::Tangent {
        m.view_mut((n, n), (n, n)).copy_from(&pd.g_inv);
    }
    m
}

/// `Ψ ∘ Φ^{-1}` in frame components.
pub fn intertwiner_matrix(pd: &PointData) -> DMatrix<f64> {
    morphism_matrix(LiftKind::Tangent, pd)
}

/// Pullback of a generalized metric `b` through a morphism with frame matrix `p`.
fn pull_back(b: &DMatrix<f64>, p: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let p_inv = p.clone().try_inverse().ok_or(GeomError::DegenerateMetric { det: 0.0 })?;
    Ok(p_inv.transpose() * b * p_inv)
}

impl LiftedChart {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// A verifier over the lifted chart's domain.
    pub fn verifier(&self, config: &SampleConfig) -> Verifier {
        Verifier::new(self.chart.domain(), config)
    }

    /// `P J̌ P^{-1}` from the generalized structure at the base point `x`.
    pub fn conjugated_structure(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let pd = PointData::at(&self.base, x)?;
        let p = morphism_matrix(self.kind, &pd);
        let p_inv = p.clone().try_inverse().ok_or(GeomError::DegenerateMetric { det: 0.0 })?;
        Ok(p * pd.check_j(self.base.params()).to_matrix() * p_inv)
    }

    /// Mechanical pullbacks of `ĝ` and `ǧ` to the adapted frame at `x`.
    pub fn pulled_back_metrics(&self, x: &[f64]) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        let pd = PointData::at(&self.base, x)?;
        let p = morphism_matrix(self.kind, &pd);
        let params = self.base.params();
        let hat = pull_back(&pd.hat_g(params)?.matrix, &p)?;
        let check = pull_back(&pd.check_g(params)?.matrix, &p)?;
        Ok((hat, check))
    }

    /// The metric pullback the chart is meant to match: `ĝ` on `TM`, `ǧ` on `T*M`.
    pub fn mechanical_metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let (hat, check) = self.pulled_back_metrics(x)?;
        Ok(match self.kind {
            LiftKind::Tangent => hat,
            LiftKind::Cotangent => check,
        })
    }

    fn base_point<'a>(&self, z: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        z.split_at(self.dim())
    }

    /// Brute-force `N` of the chart structure at `z`, in the adapted frame.
    pub fn nijenhuis_in_frame(&self, brute: &Tensor3<Expr>, z: &[f64]) -> Result<Tensor3<f64>> {
        let nc = brute.eval(z)?;
        let f = self.frame.eval(z)?;
        let fi = self.frame_inverse.eval(z)?;
        let m = nc.dim();
        // contract the lower indices first
        let half = Tensor3::from_fn(m, |c, a_, b_| {
            let mut acc = 0.0;
            for a in 0..m {
                let fa = f[(a, a_)];
                if fa == 0.0 {
                    continue;
                }
                for b in 0..m {
                    acc += nc[[c, a, b]] * fa * f[(b, b_)];
                }
            }
            acc
        });
        Ok(Tensor3::from_fn(m, |cc, a_, b_| (0..m).map(|c| fi[(cc, c)] * half[[c, a_, b_]]).sum()))
    }
}

/// Base-point data for the Nijenhuis component formulas.
#[derive(Clone, Debug)]
pub struct BaseFields {
    pub lc: LeviCivitaData,
    pub curvature: Tensor4<Expr>,
    pub nijenhuis: Tensor3<Expr>,
}

impl BaseFields {
    pub fn new(m: &ChartManifold) -> Result<Self> {
        let lc = LeviCivitaData::new(m)?;
        let curvature = riemann(&lc.gamma);
        let nijenhuis = nijenhuis_bracket(m.structure());
        Ok(BaseFields { lc, curvature, nijenhuis })
    }

    pub fn gamma(&self) -> &ChristoffelField {
        &self.lc.gamma
    }
}

/// Numeric base data at one point.
struct At {
    n: usize,
    p: f64,
    q: f64,
    j: DMatrix<f64>,
    g: DMatrix<f64>,
    nab: Tensor3<f64>,
    r: Tensor4<f64>,
    nj: Tensor3<f64>,
}

impl At {
    fn new(m: &ChartManifold, f: &BaseFields, x: &[f64]) -> Result<Self> {
        let params = m.params();
        Ok(At {
            n: m.dim(),
            p: params.p,
            q: params.q,
            j: m.structure_at(x)?,
            g: m.metric_at(x)?,
            nab: f.lc.nabla_j.eval(x)?,
            r: f.curvature.eval(x)?,
            nj: f.nijenhuis.eval(x)?,
        })
    }

    /// `(∇_j J)^d_i - (∇_i J)^d_j`.
    fn skew_nabla(&self, d: usize, i: usize, j: usize) -> f64 {
        self.nab[[d, j, i]] - self.nab[[d, i, j]]
    }
}

/// Which set of component formulas to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NijenhuisFormulas {
    /// The displayed coordinate formulas.
    Printed,
    /// Formulas derived from the frame brackets of this artifact's lifts.
    Derived,
}

fn fill_frame_tensor(
    n: usize,
    hh_h: impl Fn(usize, usize, usize) -> f64,
    hh_v: impl Fn(usize, usize, usize) -> f64,
    hv_v: impl Fn(usize, usize, usize) -> f64,
) -> Tensor3<f64> {
    Tensor3::from_fn(2 * n, |c, a, b| {
        let (ch, ah, bh) = (c < n, a < n, b < n);
        let (ci, ai, bi) = (c % n, a % n, b % n);
        match (ah, bh) {
            (true, true) => {
                if ch {
                    hh_h(ci, ai, bi)
                } else {
                    hh_v(ci, ai, bi)
                }
            }
            (true, false) if !ch => hv_v(ci, ai, bi),
            (false, true) if !ch => -hv_v(ci, bi, ai),
            _ => 0.0,
        }
    })
}

/// Frame components of `N` of the tangent lift from the component formulas.
fn tangent_formulas(at: &At, y: &[f64], which: NijenhuisFormulas) -> Tensor3<f64> {
    let n = at.n;
    let (p, q) = (at.p, at.q);
    let j = &at.j;
    let r = &at.r;
    let nab = &at.nab;
    let jp = DMatrix::identity(n, n) * p - j;
    let jp2 = &jp * &jp;
    let hh_h = |k: usize, i: usize, jj: usize| at.nj[[k, i, jj]];
    match which {
        NijenhuisFormulas::Printed => fill_frame_tensor(
            n,
            hh_h,
            |rr, i, jj| {
                let mut acc = 0.0;
                for s in 0..n {
                    let mut t = 0.0;
                    for k in 0..n {
                        for h in 0..n {
                            t += j[(k, i)] * j[(h, jj)] * r[[rr, k, h, s]];
                        }
                    }
                    for l in 0..n {
                        for k in 0..n {
                            t -= j[(rr, l)] * j[(k, i)] * r[[l, k, jj, s]];
                        }
                        for h in 0..n {
                            t -= j[(h, jj)] * j[(rr, l)] * r[[l, i, h, s]];
                        }
                        t += p * j[(rr, l)] * r[[l, i, jj, s]];
                    }
                    t += q * r[[rr, i, jj, s]];
                    acc -= y[s] * t;
                }
                acc
            },
            |k, i, jj| {
                (0..n).map(|s| j[(s, i)] * nab[[k, s, jj]]).sum::<f64>()
                    - (0..n).map(|mm| j[(k, mm)] * nab[[mm, i, jj]]).sum::<f64>()
            },
        ),
        NijenhuisFormulas::Derived => fill_frame_tensor(
            n,
            hh_h,
            |d, i, jj| {
                let mut curv = 0.0;
                for s in 0..n {
                    let mut t = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            t += j[(a, i)] * j[(b, jj)] * r[[d, a, b, s]];
                        }
                    }
                    for c in 0..n {
                        for a in 0..n {
                            t -= jp[(d, c)] * j[(a, i)] * r[[c, a, jj, s]];
                            t -= jp[(d, c)] * j[(a, jj)] * r[[c, i, a, s]];
                        }
                        t += jp2[(d, c)] * r[[c, i, jj, s]];
                    }
                    curv += y[s] * t;
                }
                at.skew_nabla(d, i, jj) - curv
            },
            |d, i, jj| {
                -(0..n).map(|a| j[(a, i)] * nab[[d, a, jj]]).sum::<f64>()
                    + (0..n).map(|c| jp[(d, c)] * nab[[c, i, jj]]).sum::<f64>()
            },
        ),
    }
}

/// Frame components of `N` of the cotangent lift; the vertical index is
/// the covector slot `∂/∂y_k`.
fn cotangent_formulas(at: &At, y: &[f64], which: NijenhuisFormulas) -> Tensor3<f64> {
    let n = at.n;
    let (p, q) = (at.p, at.q);
    let j = &at.j;
    let r = &at.r;
    let nab = &at.nab;
    // K^c_d = p δ - J^c_d acts on the vertical slot
    let k_mat = DMatrix::identity(n, n) * p - j;
    let k2 = &k_mat * &k_mat;
    let hh_h = |k: usize, i: usize, jj: usize| at.nj[[k, i, jj]];
    match which {
        NijenhuisFormulas::Printed => fill_frame_tensor(
            n,
            hh_h,
            |s, i, jj| {
                let mut acc = 0.0;
                for l in 0..n {
                    let mut t = 0.0;
                    for k in 0..n {
                        for h in 0..n {
                            t += j[(k, i)] * j[(h, jj)] * r[[l, k, h, s]];
                        }
                    }
                    for rr in 0..n {
                        for k in 0..n {
                            t -= j[(rr, s)] * j[(k, i)] * r[[l, k, jj, rr]];
                            t -= j[(rr, s)] * j[(k, jj)] * r[[l, i, k, rr]];
                        }
                    }
                    for k in 0..n {
                        t += p * j[(k, s)] * r[[l, i, jj, k]];
                    }
                    t += q * r[[l, i, jj, s]];
                    acc += y[l] * t;
                }
                acc
            },
            // N(X_i^H, ∂/∂y_j) = (J^s_i (∇_s J)^j_k - J^j_m (∇_i J)^m_k) ∂/∂y_k
            |k, i, jj| {
                (0..n).map(|s| j[(s, i)] * nab[[jj, s, k]]).sum::<f64>()
                    - (0..n).map(|mm| j[(jj, mm)] * nab[[mm, i, k]]).sum::<f64>()
            },
        ),
        NijenhuisFormulas::Derived => fill_frame_tensor(
            n,
            hh_h,
            |d, i, jj| {
                let skew: f64 = (0..n).map(|c| at.g[(c, d)] * at.skew_nabla(c, i, jj)).sum();
                let mut curv = 0.0;
                for s in 0..n {
                    let mut t = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            t += j[(a, i)] * j[(b, jj)] * r[[s, a, b, d]];
                        }
                    }
                    for c in 0..n {
                        for a in 0..n {
                            t -= j[(a, i)] * r[[s, a, jj, c]] * k_mat[(c, d)];
                            t -= j[(a, jj)] * r[[s, i, a, c]] * k_mat[(c, d)];
                        }
                        t += r[[s, i, jj, c]] * k2[(c, d)];
                    }
                    curv += y[s] * t;
                }
                skew + curv
            },
            // N(X_i^H, ∂/∂y_j) has ∂/∂y_d component
            // -J^a_i (∇_a J)^j_d + (∇_i J)^j_c K^c_d
            |d, i, jj| {
                -(0..n).map(|a| j[(a, i)] * nab[[jj, a, d]]).sum::<f64>()
                    + (0..n).map(|c| nab[[jj, i, c]] * k_mat[(c, d)]).sum::<f64>()
            },
        ),
    }
}

/// Frame components of `N` of the lift at `z = (x, y)` from the component formulas.
pub fn nijenhuis_frame_formulas(
    lift: &LiftedChart,
    fields: &BaseFields,
    z: &[f64],
    which: NijenhuisFormulas,
) -> Result<Tensor3<f64>> {
    let (x, y) = lift.base_point(z);
    let at = At::new(&lift.base, fields, x)?;
    Ok(match lift.kind {
        LiftKind::Tangent => tangent_formulas(&at, y, which),
        LiftKind::Cotangent => cotangent_formulas(&at, y, which),
    })
}

/// Worst errors of one formula set against brute force, per family.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct NijenhuisFamilyErrors {
    pub vertical_vertical: f64,
    pub mixed: f64,
    pub horizontal_horizontal: f64,
}

impl NijenhuisFamilyErrors {
    pub fn max(&self) -> f64 {
        nan_max(nan_max(self.vertical_vertical, self.mixed), self.horizontal_horizontal)
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn family_errors(brute: &Tensor3<f64>, formula: &Tensor3<f64>, n: usize) -> NijenhuisFamilyErrors {
    let scale = brute.max_abs().max(formula.max_abs());
    let mut e = NijenhuisFamilyErrors::default();
    let m = 2 * n;
    for c in 0..m {
        for a in 0..m {
            for b in 0..m {
                let diff = scaled((brute[[c, a, b]] - formula[[c, a, b]]).abs(), scale);
                let slot = match (a < n, b < n) {
                    (true, true) => &mut e.horizontal_horizontal,
                    (false, false) => &mut e.vertical_vertical,
                    _ => &mut e.mixed,
                };
                *slot = nan_max(*slot, diff);
            }
        }
    }
    e
}

/// Compares component formulas with the brute-force Nijenhuis tensor of
/// the chart over the sample, per family.
pub fn nijenhuis_formula_errors(
    lift: &LiftedChart,
    v: &Verifier,
    which: NijenhuisFormulas,
) -> Result<NijenhuisFamilyErrors> {
    let fields = BaseFields::new(&lift.base)?;
    let brute = nijenhuis_bracket(lift.chart.structure());
    let n = lift.dim();
    let mut worst = NijenhuisFamilyErrors::default();
    for z in v.sample.iter() {
        let b = lift.nijenhuis_in_frame(&brute, z)?;
        let f = nijenhuis_frame_formulas(lift, &fields, z, which)?;
        let e = family_errors(&b, &f, n);
        worst.vertical_vertical = nan_max(worst.vertical_vertical, e.vertical_vertical);
        worst.mixed = nan_max(worst.mixed, e.mixed);
        worst.horizontal_horizontal = nan_max(worst.horizontal_horizontal, e.horizontal_horizontal);
    }
    Ok(worst)
}

fn lift_id(lift: &LiftedChart, what: &str) -> String {
    format!("lifts.{}_{}", lift.kind.label(), what)
}

fn report(lift: &LiftedChart, what: &str, v: &Verifier, err: f64) -> CheckReport {
    CheckReport::new(lift_id(lift, what), lift.base.name(), v.sample.count, err, v.tolerance)
}

/// The displayed Nijenhuis coordinate formulas against brute force.
pub fn check_nijenhuis_tables(lift: &LiftedChart, v: &Verifier) -> Result<CheckReport> {
    let e = nijenhuis_formula_errors(lift, v, NijenhuisFormulas::Printed)?;
    Ok(report(lift, "nijenhuis_printed", v, e.max()))
}

/// The derived Nijenhuis frame formulas against brute force.
pub fn check_nijenhuis_derived(lift: &LiftedChart, v: &Verifier) -> Result<CheckReport> {
    let e = nijenhuis_formula_errors(lift, v, NijenhuisFormulas::Derived)?;
    Ok(report(lift, "nijenhuis_formulas", v, e.max()))
}

/// Brute-force `N(∂/∂y_i, ∂/∂y_j) = 0`.
pub fn check_nijenhuis_vertical(lift: &LiftedChart, v: &Verifier) -> Result<CheckReport> {
    let brute = nijenhuis_bracket(lift.chart.structure());
    let n = lift.dim();
    let err = v.max_over(|z| {
        let b = lift.nijenhuis_in_frame(&brute, z)?;
        let mut worst: f64 = 0.0;
        for c in 0..2 * n {
            for a in n..2 * n {
                for bb in n..2 * n {
                    worst = worst.max(b[[c, a, bb]].abs());
                }
            }
        }
        Ok(scaled(worst, b.max_abs()))
    })?;
    Ok(report(lift, "nijenhuis_vv", v, err))
}

/// On a flat, locally metallic base the lift is integrable: `max |N|` of
/// the chart. Passes vacuously on other bases.
pub fn check_flat_integrable(lift: &LiftedChart, v: &Verifier, base_v: &Verifier) -> Result<CheckReport> {
    let c = crate::connections::classify(&lift.base, base_v)?;
    let err = if c.flat && c.locally_metallic {
        let brute = nijenhuis_bracket(lift.chart.structure());
        v.max_over(|z| Ok(brute.eval(z)?.max_abs()))?
    } else {
        0.0
    };
    Ok(report(lift, "flat_integrable", v, err))
}

/// `J^2 = pJ + qI` for the coordinate-frame structure of the chart.
pub fn check_lift_polynomial(lift: &LiftedChart, v: &Verifier) -> Result<CheckReport> {
    let params = lift.chart.params();
    let err = v.max_over(|z| {
        let j = lift.chart.structure_at(z)?;
        let s = max_abs(&j);
        Ok(scaled(max_abs(&polynomial_defect(&j, params)), s * s))
    })?;
    Ok(report(lift, "polynomial", v, err))
}

/// `J^T G = G J` for the chart.
pub fn check_lift_g_symmetric(lift: &LiftedChart, v: &Verifier) -> Result<CheckReport> {
    let err = v.max_over(|z| {
        let g = lift.chart.metric_at(z)?;
        let j = lift.chart.structure_at(z)?;
        Ok(scaled(max_abs(&symmetry_defect(&g, &j)), max_abs(&g) * max_abs(&j)))
    })?;
    Ok(report(lift, "g_symmetric", v, err))
}

/// Frame tables against conjugation `P J̌ P^{-1}` and against the mechanical
/// metric pullback, over base points.
pub fn check_frame_table(lift: &LiftedChart, base_v: &Verifier) -> Result<CheckReport> {
    let err = base_v.max_over(|x| {
        let z = lift_point(lift, x);
        let table = lift.structure_table.eval(&z)?;
        let conj = lift.conjugated_structure(x)?;
        let metric = lift.metric_frame.eval(&z)?;
        let mech = lift.mechanical_metric(x)?;
        Ok(scaled(max_abs(&(&table - &conj)), max_abs(&conj))
            .max(scaled(max_abs(&(&metric - &mech)), max_abs(&mech))))
    })?;
    Ok(report(lift, "frame_table", base_v, err))
}

/// Frame tables do not depend on the fiber; evaluate at `y = 0`.
fn lift_point(lift: &LiftedChart, x: &[f64]) -> Vec<f64> {
    let mut z = x.to_vec();
    z.resize(2 * lift.dim(), 0.0);
    z
}

/// `J̄ ∘ (Ψ ∘ Φ^{-1}) = (Ψ ∘ Φ^{-1}) ∘ J̃` with both frame tables.
pub fn intertwine_check(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let tangent = build_tangent_lift(m)?;
    let cotangent = build_cotangent_lift(m)?;
    v.check("lifts.intertwining", m.name(), |x| {
        let z = lift_point(&tangent, x);
        let pd = PointData::at(m, x)?;
        let w = intertwiner_matrix(&pd);
        let jb = tangent.structure_table.eval(&z)?;
        let jt = cotangent.structure_table.eval(&z)?;
        let lhs = &jb * &w;
        let rhs = &w * &jt;
        Ok(scaled(max_abs(&(&lhs - &rhs)), max_abs(&lhs).max(max_abs(&rhs))))
    })
}

/// Block-wise comparison between two frame metrics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricDiscrepancy {
    pub horizontal: f64,
    pub mixed: f64,
    pub vertical: f64,
    /// `other_vv / printed_vv` at the largest printed entry.
    pub vertical_ratio: f64,
}

fn discrepancy(printed: &DMatrix<f64>, other: &DMatrix<f64>, n: usize) -> MetricDiscrepancy {
    let block = |m: &DMatrix<f64>, r: usize, c: usize| m.view((r, c), (n, n)).into_owned();
    let diff = |r: usize, c: usize| max_abs(&(block(printed, r, c) - block(other, r, c)));
    let pv = block(printed, n, n);
    let ov = block(other, n, n);
    let (idx, _) = pv.iter().enumerate().fold((0, 0.0f64), |(bi, bv), (i, v)| {
        if v.abs() > bv {
            (i, v.abs())
        } else {
            (bi, bv)
        }
    });
    MetricDiscrepancy {
        horizontal: diff(0, 0),
        mixed: diff(0, n),
        vertical: diff(n, n),
        vertical_ratio: ov.as_slice()[idx] / pv.as_slice()[idx],
    }
}

/// Printed metric table against the mechanical pullbacks of `ĝ` and `ǧ`
/// at the base point `x`.
pub fn pullback_discrepancy(lift: &LiftedChart, x: &[f64]) -> Result<(MetricDiscrepancy, MetricDiscrepancy)> {
    let z = lift_point(lift, x);
    let printed = lift.metric_table.eval(&z)?;
    let (hat, check) = lift.pulled_back_metrics(x)?;
    let n = lift.dim();
    Ok((discrepancy(&printed, &hat, n), discrepancy(&printed, &check, n)))
}

/// Scaled `max |J^T G - G J|` of the lift structure against the printed
/// metric table, in the adapted frame.
pub fn printed_metric_compatibility(lift: &LiftedChart, v: &Verifier) -> Result<f64> {
    v.max_over(|z| {
        let g = lift.metric_table.eval(z)?;
        let j = lift.structure_table.eval(z)?;
        Ok(scaled(max_abs(&symmetry_defect(&g, &j)), max_abs(&g) * max_abs(&j)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn fiber_names_avoid_collisions() {
        let base: Vec<String> = ["y1".into(), "x".into()].into();
        assert_eq!(fiber_names(&base), ["y_1", "y_2"]);
        let base: Vec<String> = ["u".into(), "v".into()].into();
        assert_eq!(fiber_names(&base), ["y1", "y2"]);
    }

    #[test]
    fn flat_lift_is_constant() {
        let l = build_tangent_lift(&catalog::e1()).unwrap();
        assert!(l.chart.structure().entries().all(|e| e.max_coord().is_none()));
        assert_eq!(l.chart.dim(), 4);
        assert_eq!(l.chart.coords(), ["x", "y", "y1", "y2"]);
    }

    #[test]
    fn frame_columns_are_horizontal_lifts() {
        let m = catalog::e3();
        let l = build_tangent_lift(&m).unwrap();
        let z = [1.5, 0.2, 0.3, -0.7];
        let f = l.frame.eval(&z).unwrap();
        let g = levi_civita(&m).unwrap().eval(&z[..2]).unwrap();
        // X_2^H has ∂/∂y^1 component -y^s Γ^1_{2s} = -y^2 Γ^1_{22}
        assert!((f[(2, 1)] + z[3] * g[[0, 1, 1]]).abs() < 1e-15);
        let fi = l.frame_inverse.eval(&z).unwrap();
        assert!(max_abs(&(f * fi - DMatrix::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn cotangent_chart_needs_no_discriminant() {
        let m = catalog::e1();
        let parabolic = m
            .with_structure("parabolic", m.structure().clone(), MetallicParams::new(2.0, -1.0))
            .unwrap();
        assert!(build_cotangent_lift(&parabolic).is_ok());
        assert_eq!(build_tangent_lift(&parabolic).unwrap_err(), GeomError::ZeroDiscriminant);
    }
}
