//! Structures on `TM ⊕ T*M`, in the basis `(∂_1..∂_n, dx^1..dx^n)`.
//!
//! An endomorphism is held as four `n x n` blocks acting by
//! `(X, α) ↦ (A X + B α, C X + E α)`. The dual `J*` of an endomorphism acts
//! on covector components by `(J* α)_i = J^s_i α_s`, so its block is `J^T`;
//! `♭_g` has block `G` and `♯_g` has block `G^{-1}`.

mod section;

pub use section::{
    bracket_d, curvature_hat, d_hat, d_hat_form, d_hat_vector, hat_connection_matrices, lie_bracket,
    torsion_hat, GeneralizedSectionField,
};
pub use section::{curvature_action as curvature_action_at, torsion_action as torsion_action_at};

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connections::{curvature, torsion_of, LeviCivitaData};
use crate::error::{GeomError, Result};
use crate::expr::Expr;
use crate::manifold::ChartManifold;
use crate::metallic::{MetallicParams, NordenFamilyParams, RootSign};
use crate::sample::{scaled, CheckReport, Verifier};
use crate::tensor::{max_abs, ExprMatrix};

/// Smallest `|det|` accepted for a generalized metric.
pub const MIN_GENERALIZED_DET: f64 = 1e-10;

/// Random pairs drawn per base point by the symmetry checks.
pub const PAIRS_PER_POINT: usize = 100;

/// A section of `TM ⊕ T*M` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedVector {
    pub vec: DVector<f64>,
    pub form: DVector<f64>,
}

impl GeneralizedVector {
    pub fn new(vec: DVector<f64>, form: DVector<f64>) -> Self {
        assert_eq!(vec.len(), form.len(), "vector and form parts differ in length");
        GeneralizedVector { vec, form }
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    /// `∂_i` for `i < n`, `dx^{i-n}` otherwise.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut all = DVector::zeros(2 * n);
        all[index] = 1.0;
        Self::from_stacked(&all)
    }

    /// Components uniform in `[-1, 1]`.
    pub fn random(rng: &mut impl Rng, n: usize) -> Self {
        let mut draw = || DVector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0));
        let vec = draw();
        GeneralizedVector::new(vec, draw())
    }

    pub fn stacked(&self) -> DVector<f64> {
        let n = self.dim();
        DVector::from_fn(2 * n, |i, _| if i < n { self.vec[i] } else { self.form[i - n] })
    }

    pub fn from_stacked(v: &DVector<f64>) -> Self {
        let n = v.len() / 2;
        GeneralizedVector::new(v.rows(0, n).into_owned(), v.rows(n, n).into_owned())
    }

    fn max_abs(&self) -> f64 {
        self.vec.amax().max(self.form.amax())
    }
}

/// `(X + α, Y + β) = -½ (α(Y) - β(X))`.
pub fn symplectic_pairing(s: &GeneralizedVector, t: &GeneralizedVector) -> f64 {
    -0.5 * (s.form.dot(&t.vec) - t.form.dot(&s.vec))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedEndo {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub e: DMatrix<f64>,
}

impl GeneralizedEndo {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, e: DMatrix<f64>) -> Self {
        let n = a.nrows();
        for m in [&a, &b, &c, &e] {
            assert!(m.nrows() == n && m.ncols() == n, "blocks must be n x n");
        }
        GeneralizedEndo { a, b, c, e }
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.a);
        m.view_mut((0, n), (n, n)).copy_from(&self.b);
        m.view_mut((n, 0), (n, n)).copy_from(&self.c);
        m.view_mut((n, n), (n, n)).copy_from(&self.e);
        m
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows() / 2;
        GeneralizedEndo::new(
            m.view((0, 0), (n, n)).into_owned(),
            m.view((0, n), (n, n)).into_owned(),
            m.view((n, 0), (n, n)).into_owned(),
            m.view((n, n), (n, n)).into_owned(),
        )
    }

    pub fn apply(&self, s: &GeneralizedVector) -> GeneralizedVector {
        GeneralizedVector::new(&self.a * &s.vec + &self.b * &s.form, &self.c * &s.vec + &self.e * &s.form)
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::from_matrix(&(self.to_matrix() * other.to_matrix()))
    }

    /// `s · self + t · I`.
    pub fn affine(&self, s: f64, t: f64) -> Self {
        let n = self.dim();
        Self::from_matrix(&(self.to_matrix() * s + DMatrix::identity(2 * n, 2 * n) * t))
    }

    /// Scaled `max |E^2 - pE - qI|`.
    pub fn polynomial_defect(&self, params: MetallicParams) -> f64 {
        let m = self.to_matrix();
        let k = m.nrows();
        let r = &m * &m - &m * params.p - DMatrix::identity(k, k) * params.q;
        let s = max_abs(&m);
        scaled(max_abs(&r), s * s)
    }
}

/// A bilinear form on `TM ⊕ T*M` as a `2n x 2n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedMetric {
    pub matrix: DMatrix<f64>,
}

impl GeneralizedMetric {
    /// `[[h, m], [m^T, v]]`, rejected when `|det| < MIN_GENERALIZED_DET`.
    pub fn from_blocks(h: &DMatrix<f64>, m: &DMatrix<f64>, v: &DMatrix<f64>) -> Result<Self> {
        let n = h.nrows();
        let mut full = DMatrix::zeros(2 * n, 2 * n);
        full.view_mut((0, 0), (n, n)).copy_from(h);
        full.view_mut((0, n), (n, n)).copy_from(m);
        full.view_mut((n, 0), (n, n)).copy_from(&m.transpose());
        full.view_mut((n, n), (n, n)).copy_from(v);
        let det = full.determinant();
        if !(det.abs() >= MIN_GENERALIZED_DET) {
            return Err(GeomError::DegenerateMetric { det });
        }
        Ok(GeneralizedMetric { matrix: full })
    }

    pub fn eval(&self, s: &GeneralizedVector, t: &GeneralizedVector) -> f64 {
        s.stacked().dot(&(&self.matrix * t.stacked()))
    }

    pub fn asymmetry(&self) -> f64 {
        scaled(max_abs(&(&self.matrix - self.matrix.transpose())), max_abs(&self.matrix))
    }
}

/// `G`, `G^{-1}` and `J` at one base point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointData {
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub j: DMatrix<f64>,
}

impl PointData {
    pub fn at(m: &ChartManifold, x: &[f64]) -> Result<Self> {
        Ok(PointData {
            g: m.metric_at(x)?,
            g_inv: m.inverse_metric_at(x)?,
            j: m.structure_at(x)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    fn id(&self) -> DMatrix<f64> {
        DMatrix::identity(self.dim(), self.dim())
    }

    /// `-J^2 + pJ + qI`.
    pub fn defect(&self, params: MetallicParams) -> DMatrix<f64> {
        -(&self.j * &self.j) + &self.j * params.p + self.id() * params.q
    }

    /// `♭_g J ♯_g = G J G^{-1}`.
    pub fn j_star(&self) -> DMatrix<f64> {
        &self.g * &self.j * &self.g_inv
    }

    /// `(J, 0, G, -J^T + pI)`.
    pub fn hat_j(&self, p: f64) -> GeneralizedEndo {
        let n = self.dim();
        GeneralizedEndo::new(
            self.j.clone(),
            DMatrix::zeros(n, n),
            self.g.clone(),
            -self.j.transpose() + self.id() * p,
        )
    }

    /// `(-J + pI, 0, G, J^T)`.
    pub fn hat_j_prime(&self, p: f64) -> GeneralizedEndo {
        let n = self.dim();
        GeneralizedEndo::new(
            -&self.j + self.id() * p,
            DMatrix::zeros(n, n),
            self.g.clone(),
            self.j.transpose(),
        )
    }

    /// `(J, (-J^2 + pJ + qI) G^{-1}, G, -J^T + pI)`.
    pub fn check_j(&self, params: MetallicParams) -> GeneralizedEndo {
        GeneralizedEndo::new(
            self.j.clone(),
            self.defect(params) * &self.g_inv,
            self.g.clone(),
            -self.j.transpose() + self.id() * params.p,
        )
    }

    /// `(-J + pI, (-J^2 + pJ + qI) G^{-1}, G, J^T)`.
    pub fn check_j_prime(&self, params: MetallicParams) -> GeneralizedEndo {
        GeneralizedEndo::new(
            -&self.j + self.id() * params.p,
            self.defect(params) * &self.g_inv,
            self.g.clone(),
            self.j.transpose(),
        )
    }

    /// `ĝ`: blocks `G`, `(pI - 2J^T)/d`, `G^{-1}`.
    pub fn hat_g(&self, params: MetallicParams) -> Result<GeneralizedMetric> {
        let d = params.nonzero_discriminant()?;
        let cross = (self.id() * params.p - self.j.transpose() * 2.0) / d;
        GeneralizedMetric::from_blocks(&self.g, &cross, &self.g_inv)
    }

    /// `ǧ`: blocks `G`, `(p/4) I - ½ J^T`, `(d/4) G^{-1}`.
    pub fn check_g(&self, params: MetallicParams) -> Result<GeneralizedMetric> {
        let d = params.discriminant();
        let cross = self.id() * (params.p / 4.0) - self.j.transpose() * 0.5;
        GeneralizedMetric::from_blocks(&self.g, &cross, &(&self.g_inv * (d / 4.0)))
    }

    /// The Norden metric: blocks `G`, `½ J^T`, `G^{-1}`.
    pub fn norden_metric(&self) -> Result<GeneralizedMetric> {
        GeneralizedMetric::from_blocks(&self.g, &(self.j.transpose() * 0.5), &self.g_inv)
    }

    /// `(J, 0, G, -J^T)` for a Norden `J`.
    pub fn norden_endo(&self) -> GeneralizedEndo {
        self.hat_j(0.0)
    }

    /// `(aJ + bI, 0, G, -aJ^T + bI)`.
    pub fn norden_family(&self, family: NordenFamilyParams) -> GeneralizedEndo {
        let n = self.dim();
        GeneralizedEndo::new(
            &self.j * family.a + self.id() * family.b,
            DMatrix::zeros(n, n),
            self.g.clone(),
            -self.j.transpose() * family.a + self.id() * family.b,
        )
    }

    /// `±(2J̌ - pI)/sqrt(-p^2 - 4q)`.
    pub fn norden_from_check(&self, params: MetallicParams, sign: RootSign) -> Result<GeneralizedEndo> {
        let d = params.negative_discriminant()?;
        let c = sign.factor() / libm::sqrt(-d);
        Ok(self.check_j(params).affine(2.0 * c, -params.p * c))
    }

    /// `J_± = ±(2J - pI)/sqrt(-d)` at this point, with the same `G`.
    pub fn norden_from_metallic(&self, params: MetallicParams, sign: RootSign) -> Result<PointData> {
        let d = params.negative_discriminant()?;
        let c = sign.factor() / libm::sqrt(-d);
        Ok(PointData {
            g: self.g.clone(),
            g_inv: self.g_inv.clone(),
            j: (&self.j * 2.0 - self.id() * params.p) * c,
        })
    }
}

pub fn hat_j(m: &ChartManifold, x: &[f64]) -> Result<GeneralizedEndo> {
    Ok(PointData::at(m, x)?.hat_j(m.params().p))
}

pub fn hat_j_prime(m: &ChartManifold, x: &[f64]) -> Result<GeneralizedEndo> {
    Ok(PointData::at(m, x)?.hat_j_prime(m.params().p))
}

pub fn check_j(m: &ChartManifold, x: &[f64], params: MetallicParams) -> Result<GeneralizedEndo> {
    Ok(PointData::at(m, x)?.check_j(params))
}

pub fn check_j_prime(m: &ChartManifold, x: &[f64], params: MetallicParams) -> Result<GeneralizedEndo> {
    Ok(PointData::at(m, x)?.check_j_prime(params))
}

pub fn hat_g(m: &ChartManifold, x: &[f64]) -> Result<GeneralizedMetric> {
    PointData::at(m, x)?.hat_g(m.params())
}

pub fn check_g(m: &ChartManifold, x: &[f64], params: MetallicParams) -> Result<GeneralizedMetric> {
    PointData::at(m, x)?.check_g(params)
}

pub fn norden_generalized_metric(m: &ChartManifold, x: &[f64]) -> Result<GeneralizedMetric> {
    PointData::at(m, x)?.norden_metric()
}

/// `(aJ + bI, 0, G, -aJ^T + bI)` for the Norden structure of `m`.
pub fn generalized_norden_family(
    m: &ChartManifold,
    family: NordenFamilyParams,
    x: &[f64],
    v: &Verifier,
) -> Result<GeneralizedEndo> {
    let (square_err, symmetry_err) = crate::metallic::norden_defects(m, v)?;
    if square_err > v.tolerance || symmetry_err > v.tolerance {
        return Err(GeomError::NotNorden {
            square_err,
            symmetry_err,
        });
    }
    Ok(PointData::at(m, x)?.norden_family(family))
}

pub fn generalized_norden_from_check(
    m: &ChartManifold,
    x: &[f64],
    params: MetallicParams,
    sign: RootSign,
) -> Result<GeneralizedEndo> {
    PointData::at(m, x)?.norden_from_check(params, sign)
}

/// Scaled `max |ĝ(Ĵσ,τ) - ĝ(σ,Ĵτ)|` over random pairs.
pub fn metric_symmetry_defect(
    endo: &GeneralizedEndo,
    metric: &GeneralizedMetric,
    rng: &mut impl Rng,
    pairs: usize,
) -> f64 {
    let n = endo.dim();
    let scale = max_abs(&endo.to_matrix()) * max_abs(&metric.matrix);
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let s = GeneralizedVector::random(rng, n);
        let t = GeneralizedVector::random(rng, n);
        let lhs = metric.eval(&endo.apply(&s), &t);
        let rhs = metric.eval(&s, &endo.apply(&t));
        let r = scaled((lhs - rhs).abs(), scale * s.max_abs() * t.max_abs());
        if r.is_nan() {
            return f64::NAN;
        }
        worst = worst.max(r);
    }
    worst
}

/// Scaled `max |(Eσ,τ) + (σ,Eτ) - p(σ,τ)|` over random pairs.
pub fn symplectic_defect(endo: &GeneralizedEndo, p: f64, rng: &mut impl Rng, pairs: usize) -> f64 {
    let n = endo.dim();
    let scale = max_abs(&endo.to_matrix()).max(p.abs());
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let s = GeneralizedVector::random(rng, n);
        let t = GeneralizedVector::random(rng, n);
        let lhs = symplectic_pairing(&endo.apply(&s), &t) + symplectic_pairing(&s, &endo.apply(&t));
        let rhs = p * symplectic_pairing(&s, &t);
        worst = worst.max(scaled((lhs - rhs).abs(), scale * s.max_abs() * t.max_abs()));
    }
    worst
}

fn pair_rng(v: &Verifier, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(v.sample.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn check_pointwise(
    id: &str,
    m: &ChartManifold,
    v: &Verifier,
    mut residual: impl FnMut(&PointData) -> Result<f64>,
) -> Result<CheckReport> {
    v.check(id, m.name(), |x| residual(&PointData::at(m, x)?))
}

/// `E^2 = pE + qI` for `Ĵ`, `Ĵ'`, `J̌` and `J̌'` at `m`'s parameters.
pub fn check_polynomials(m: &ChartManifold, v: &Verifier) -> Result<[CheckReport; 4]> {
    let params = m.params();
    Ok([
        check_pointwise("generalized.hat_polynomial", m, v, |pd| Ok(pd.hat_j(params.p).polynomial_defect(params)))?,
        check_pointwise("generalized.hat_prime_polynomial", m, v, |pd| {
            Ok(pd.hat_j_prime(params.p).polynomial_defect(params))
        })?,
        check_pointwise("generalized.check_polynomial", m, v, |pd| Ok(pd.check_j(params).polynomial_defect(params)))?,
        check_pointwise("generalized.check_prime_polynomial", m, v, |pd| {
            Ok(pd.check_j_prime(params).polynomial_defect(params))
        })?,
    ])
}

/// `J̌_p^2 = I` and `J̌_c^2 = -I` built from `m`'s `J`.
pub fn check_product_and_complex(m: &ChartManifold, v: &Verifier) -> Result<[CheckReport; 2]> {
    let product = MetallicParams::new(0.0, 1.0);
    let complex = MetallicParams::new(0.0, -1.0);
    Ok([
        check_pointwise("generalized.product_structure", m, v, |pd| {
            Ok(pd.check_j(product).polynomial_defect(product))
        })?,
        check_pointwise("generalized.complex_structure", m, v, |pd| {
            Ok(pd.check_j(complex).polynomial_defect(complex))
        })?,
    ])
}

/// `J̌ = Ĵ` for a metallic `J`.
pub fn check_check_equals_hat(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let params = m.params();
    check_pointwise("generalized.check_equals_hat", m, v, |pd| {
        let a = pd.check_j(params).to_matrix();
        let b = pd.hat_j(params.p).to_matrix();
        Ok(scaled(max_abs(&(&a - &b)), max_abs(&a)))
    })
}

/// Symmetry of `ĝ` and `ǧ` as matrices; degenerate ones raise an error.
pub fn check_metric_symmetric(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let params = m.params();
    check_pointwise("generalized.metrics_symmetric", m, v, |pd| {
        Ok(pd.hat_g(params)?.asymmetry().max(pd.check_g(params)?.asymmetry()))
    })
}

/// `ĝ(Ĵσ,τ) = ĝ(σ,Ĵτ)` and `ǧ(J̌σ,τ) = ǧ(σ,J̌τ)` on random pairs.
pub fn check_metric_compatibility(m: &ChartManifold, v: &Verifier) -> Result<[CheckReport; 2]> {
    let params = m.params();
    let mut rng = pair_rng(v, 1);
    let hat = check_pointwise("generalized.hat_g_symmetric", m, v, |pd| {
        Ok(metric_symmetry_defect(&pd.hat_j(params.p), &pd.hat_g(params)?, &mut rng, PAIRS_PER_POINT))
    })?;
    let mut rng = pair_rng(v, 2);
    let check = check_pointwise("generalized.check_g_symmetric", m, v, |pd| {
        Ok(metric_symmetry_defect(&pd.check_j(params), &pd.check_g(params)?, &mut rng, PAIRS_PER_POINT))
    })?;
    Ok([hat, check])
}

/// `(J̌σ,τ) + (σ,J̌τ) = p(σ,τ)`, at `m`'s `p` and at `p = 0`.
pub fn check_symplectic_identity(m: &ChartManifold, v: &Verifier) -> Result<[CheckReport; 2]> {
    let params = m.params();
    let mut rng = pair_rng(v, 3);
    let general = check_pointwise("generalized.symplectic_identity", m, v, |pd| {
        Ok(symplectic_defect(&pd.check_j(params), params.p, &mut rng, PAIRS_PER_POINT))
    })?;
    let mut rng = pair_rng(v, 4);
    let anti = MetallicParams::new(0.0, params.q);
    let anti_report = check_pointwise("generalized.anti_calibrated", m, v, |pd| {
        Ok(symplectic_defect(&pd.check_j(anti), 0.0, &mut rng, PAIRS_PER_POINT))
    })?;
    Ok([general, anti_report])
}

/// `(σ,τ) = -(τ,σ)`; exact in floating point.
pub fn check_pairing_antisymmetry(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let mut rng = pair_rng(v, 5);
    let n = m.dim();
    v.check("generalized.pairing_antisymmetry", m.name(), |_| {
        let mut worst: f64 = 0.0;
        for _ in 0..PAIRS_PER_POINT {
            let s = GeneralizedVector::random(&mut rng, n);
            let t = GeneralizedVector::random(&mut rng, n);
            worst = worst.max((symplectic_pairing(&s, &t) + symplectic_pairing(&t, &s)).abs());
        }
        Ok(worst)
    })
}

/// The `J*` block `J^T` equals `♭_g J ♯_g`.
pub fn check_j_star(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    check_pointwise("generalized.j_star", m, v, |pd| {
        let t = pd.j.transpose();
        Ok(scaled(max_abs(&(&t - pd.j_star())), max_abs(&t)))
    })
}

/// For `d < 0`: `Ĵ` and `Ĵ'` coincide with `Ĵ_{a,b}` built from `J_±`,
/// `a = ±sqrt(-d)/2`, `b = p/2`.
pub fn check_norden_reconstruction(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let params = m.params();
    params.negative_discriminant()?;
    check_pointwise("generalized.norden_reconstruction", m, v, |pd| {
        let hat = pd.hat_j(params.p).to_matrix();
        let prime = pd.hat_j_prime(params.p).to_matrix();
        let mut worst: f64 = 0.0;
        for sign in [RootSign::Plus, RootSign::Minus] {
            let norden = pd.norden_from_metallic(params, sign)?;
            for a_sign in [RootSign::Plus, RootSign::Minus] {
                let family = crate::metallic::norden_reconstruction(params, a_sign)?;
                let e = norden.norden_family(family).to_matrix();
                let target = if sign == a_sign { &hat } else { &prime };
                worst = worst.max(scaled(max_abs(&(&e - target)), max_abs(target)));
            }
        }
        Ok(worst)
    })
}

/// Parameters for the `J̌_±` check: `m`'s own when `d < 0`, otherwise
/// `(1, -1)`, which is allowed because `J̌` is defined for any `(p, q)`.
pub fn norden_check_params(m: &ChartManifold) -> MetallicParams {
    let params = m.params();
    if params.discriminant() < 0.0 {
        params
    } else {
        MetallicParams::new(1.0, -1.0)
    }
}

/// `J̌_±^2 = -I` and `ǧ(J̌_± σ, τ) = ǧ(σ, J̌_± τ)`.
pub fn check_norden_from_check(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let params = norden_check_params(m);
    let complex = MetallicParams::new(0.0, -1.0);
    let mut rng = pair_rng(v, 6);
    check_pointwise("generalized.check_norden", m, v, |pd| {
        let metric = pd.check_g(params)?;
        let mut worst: f64 = 0.0;
        for sign in [RootSign::Plus, RootSign::Minus] {
            let e = pd.norden_from_check(params, sign)?;
            worst = worst
                .max(e.polynomial_defect(complex))
                .max(metric_symmetry_defect(&e, &metric, &mut rng, PAIRS_PER_POINT / 2));
        }
        Ok(worst)
    })
}

/// For a Norden structure: `J̃ = (J, 0, G, -J^T)` is symmetric for the Norden
/// generalized metric, and `Ĵ_{a,b}` squares to `2b Ĵ_{a,b} - (a^2+b^2) I`.
pub fn check_norden_structures(m: &ChartManifold, family: NordenFamilyParams, v: &Verifier) -> Result<[CheckReport; 2]> {
    let x0 = v.sample.points.first().cloned().unwrap_or_else(|| alloc::vec![0.0; m.dim()]);
    generalized_norden_family(m, family, &x0, v)?;
    let mut rng = pair_rng(v, 7);
    let sym = check_pointwise("generalized.norden_metric_symmetric", m, v, |pd| {
        Ok(metric_symmetry_defect(&pd.norden_endo(), &pd.norden_metric()?, &mut rng, PAIRS_PER_POINT))
    })?;
    let fam = check_pointwise("generalized.norden_family", m, v, |pd| {
        Ok(pd.norden_family(family).polynomial_defect(family.induced()))
    })?;
    Ok([sym, fam])
}

/// `Ĵ` as a symbolic `2n x 2n` field.
pub fn hat_j_field(m: &ChartManifold) -> ExprMatrix {
    let n = m.dim();
    let j = m.structure();
    let p = Expr::constant(m.params().p);
    let e = j.transpose().map(|x| -x).add(&ExprMatrix::scalar(n, p));
    block_field(j, &ExprMatrix::zeros(n, n), m.metric(), &e)
}

/// `ĝ` as a symbolic `2n x 2n` field.
pub fn hat_g_field(m: &ChartManifold) -> Result<ExprMatrix> {
    let n = m.dim();
    let params = m.params();
    let d = params.nonzero_discriminant()?;
    let g = m.metric();
    let g_inv = g.inverse().ok_or(GeomError::DegenerateMetric { det: 0.0 })?;
    let cross = ExprMatrix::from_fn(n, n, |i, k| {
        let delta = if i == k { params.p } else { 0.0 };
        (Expr::constant(delta) - &m.structure()[(k, i)] * 2.0) * (1.0 / d)
    });
    Ok(block_field(g, &cross, &cross.transpose(), &g_inv))
}

pub(crate) fn block_field(a: &ExprMatrix, b: &ExprMatrix, c: &ExprMatrix, e: &ExprMatrix) -> ExprMatrix {
    let n = a.nrows();
    ExprMatrix::from_fn(2 * n, 2 * n, |r, col| {
        let blk = match (r < n, col < n) {
            (true, true) => a,
            (true, false) => b,
            (false, true) => c,
            (false, false) => e,
        };
        blk[(r % n, col % n)].clone()
    })
}

/// Checks (i)-(iv) for `D̂` on the `2n` coordinate sections.
pub fn check_d_hat(m: &ChartManifold, v: &Verifier) -> Result<[CheckReport; 4]> {
    let n = m.dim();
    let lc = LeviCivitaData::new(m)?;
    let c = lc.natural_connection(m)?;
    let conn = hat_connection_matrices(&c);
    let hj = hat_j_field(m);
    let hg = hat_g_field(m)?;

    // (D̂_i Ĵ) = ∂_i Ĵ + Ĉ_i Ĵ - Ĵ Ĉ_i
    let dj: Vec<ExprMatrix> = (0..n)
        .map(|i| hj.diff(i).add(&conn[i].mul(&hj)).sub(&hj.mul(&conn[i])))
        .collect();
    // Leibniz defect ∂_i ĝ(s_A, s_B) - ĝ(D̂_i s_A, s_B) - ĝ(s_A, D̂_i s_B)
    let dg: Vec<ExprMatrix> = (0..n)
        .map(|i| hg.diff(i).sub(&conn[i].transpose().mul(&hg)).sub(&hg.mul(&conn[i])))
        .collect();

    let basis: Vec<GeneralizedSectionField> = (0..2 * n).map(|a| GeneralizedSectionField::basis(n, a)).collect();
    let torsion = torsion_of(&c);
    let rd = curvature(&c);
    let mut torsion_terms = Vec::new();
    for s in &basis {
        for t in &basis {
            torsion_terms.push((s.clone(), t.clone(), torsion_hat(&c, s, t)));
        }
    }
    let mut curvature_terms = Vec::new();
    for s in &basis {
        for t in &basis {
            for r in &basis {
                curvature_terms.push((s.clone(), t.clone(), r.clone(), curvature_hat(&c, s, t, r)));
            }
        }
    }

    let scale_c = |x: &[f64]| -> Result<f64> { Ok(c.eval(x)?.max_abs()) };
    let dj_report = v.check("generalized.d_hat_j", m.name(), |x| {
        let s = scale_c(x)? * max_abs(&hj.eval(x)?);
        let mut worst: f64 = 0.0;
        for t in &dj {
            worst = worst.max(max_abs(&t.eval(x)?));
        }
        Ok(scaled(worst, s))
    })?;
    let dg_report = v.check("generalized.d_hat_g", m.name(), |x| {
        let s = scale_c(x)? * max_abs(&hg.eval(x)?);
        let mut worst: f64 = 0.0;
        for t in &dg {
            worst = worst.max(max_abs(&t.eval(x)?));
        }
        Ok(scaled(worst, s))
    })?;
    let torsion_report = v.check("generalized.d_hat_torsion", m.name(), |x| {
        let tv = torsion.eval(x)?;
        let mut worst: f64 = 0.0;
        for (s, t, th) in &torsion_terms {
            let (sx, tx, got) = (s.eval(x)?, t.eval(x)?, th.eval(x)?);
            let want = torsion_action_at(&tv, &sx, &tx);
            worst = worst.max(scaled((&got.stacked() - want.stacked()).amax(), tv.max_abs()));
        }
        Ok(worst)
    })?;
    let curvature_report = v.check("generalized.d_hat_curvature", m.name(), |x| {
        let rv = rd.eval(x)?;
        let mut worst: f64 = 0.0;
        for (s, t, r, rh) in &curvature_terms {
            let got = rh.eval(x)?;
            let want = curvature_action_at(&rv, &s.eval(x)?, &t.eval(x)?, &r.eval(x)?);
            worst = worst.max(scaled((&got.stacked() - want.stacked()).amax(), rv.max_abs()));
        }
        Ok(worst)
    })?;
    Ok([dj_report, dg_report, torsion_report, curvature_report])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn euclid(j: &[f64]) -> PointData {
        PointData {
            g: DMatrix::identity(2, 2),
            g_inv: DMatrix::identity(2, 2),
            j: DMatrix::from_row_slice(2, 2, j),
        }
    }

    #[test]
    fn pairing_values() {
        let s = GeneralizedVector::basis(2, 0);
        let t = GeneralizedVector::basis(2, 2);
        assert_eq!(symplectic_pairing(&s, &t), 0.5);
        assert_eq!(symplectic_pairing(&t, &t), 0.0);
    }

    #[test]
    fn check_structure_for_non_metallic_endomorphism() {
        let pd = euclid(&[1.0, 2.0, 2.0, 0.0]);
        let params = MetallicParams::new(1.0, 1.0);
        assert!(pd.check_j(params).polynomial_defect(params) < 1e-14);
        let np = MetallicParams::new(0.0, -5.0);
        for sign in [RootSign::Plus, RootSign::Minus] {
            let e = pd.norden_from_check(np, sign).unwrap();
            assert!(e.polynomial_defect(MetallicParams::new(0.0, -1.0)) < 1e-14);
        }
        let plus = pd.norden_from_check(np, RootSign::Plus).unwrap();
        let minus = pd.norden_from_check(np, RootSign::Minus).unwrap();
        assert_eq!(plus.to_matrix(), -minus.to_matrix());
    }

    #[test]
    fn check_metric_for_product_parameters() {
        let pd = euclid(&[0.0, 0.0, 0.0, 0.0]);
        // d = 4, so the covector block (d/4) G^{-1} is G^{-1} itself.
        let g = pd.check_g(MetallicParams::new(0.0, 1.0)).unwrap();
        assert_eq!(g.matrix, DMatrix::identity(4, 4));
        let g = pd.check_g(MetallicParams::new(0.0, 0.25)).unwrap();
        let mut want = DMatrix::identity(4, 4);
        want[(2, 2)] = 0.25;
        want[(3, 3)] = 0.25;
        assert_eq!(g.matrix, want);
    }

    #[test]
    fn hat_and_prime_share_top_left_sum() {
        let m = catalog::e2();
        let x = [0.2, 0.9];
        let a = hat_j(&m, &x).unwrap().a + hat_j_prime(&m, &x).unwrap().a;
        assert!(max_abs(&(a - DMatrix::identity(2, 2))) < 1e-15);
    }

    #[test]
    fn norden_family_with_zero_a() {
        let pd = PointData::at(&catalog::e1_norden(), &[0.0, 0.0]).unwrap();
        let e = pd.norden_family(NordenFamilyParams::new(0.0, 1.0));
        assert_eq!(e.a, DMatrix::identity(2, 2));
        assert_eq!(e.e, DMatrix::identity(2, 2));
        assert!(e.polynomial_defect(MetallicParams::new(2.0, -1.0)) < 1e-15);
    }

    #[test]
    fn singular_generalized_metric_is_rejected() {
        let z = DMatrix::zeros(2, 2);
        assert!(matches!(
            GeneralizedMetric::from_blocks(&z, &z, &z),
            Err(GeomError::DegenerateMetric { .. })
        ));
    }

    #[test]
    fn symbolic_blocks_match_pointwise_blocks() {
        let m = catalog::e4();
        let x = [0.7, 0.1];
        let pd = PointData::at(&m, &x).unwrap();
        let a = hat_j_field(&m).eval(&x).unwrap();
        assert!(max_abs(&(a - pd.hat_j(1.0).to_matrix())) < 1e-15);
        let b = hat_g_field(&m).unwrap().eval(&x).unwrap();
        assert!(max_abs(&(b - pd.hat_g(m.params()).unwrap().matrix)) < 1e-14);
    }
}
