//! Metallic numbers, trivial structures and the correspondence between
//! Norden and metallic structures.

use alloc::string::String;

use nalgebra::DMatrix;

use crate::error::{GeomError, Result};
use crate::expr::Expr;
use crate::manifold::{polynomial_defect, symmetry_defect, ChartManifold};
use crate::sample::{scaled, CheckReport, Verifier};
use crate::tensor::{max_abs, ExprMatrix};

/// Coefficients of `J^2 = pJ + qI`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetallicParams {
    pub p: f64,
    pub q: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Discriminant {
    /// `p^2 + 4q > 0`
    Hyperbolic,
    /// `p^2 + 4q = 0`
    Parabolic,
    /// `p^2 + 4q < 0`: metallic Norden.
    EllipticNorden,
}

impl MetallicParams {
    pub const fn new(p: f64, q: f64) -> Self {
        MetallicParams { p, q }
    }

    pub fn discriminant(&self) -> f64 {
        self.p * self.p + 4.0 * self.q
    }

    pub fn classify(&self) -> Discriminant {
        let d = self.discriminant();
        if d > 0.0 {
            Discriminant::Hyperbolic
        } else if d == 0.0 {
            Discriminant::Parabolic
        } else {
            Discriminant::EllipticNorden
        }
    }

    pub(crate) fn nonzero_discriminant(&self) -> Result<f64> {
        let d = self.discriminant();
        if d == 0.0 {
            Err(GeomError::ZeroDiscriminant)
        } else {
            Ok(d)
        }
    }

    pub(crate) fn negative_discriminant(&self) -> Result<f64> {
        let d = self.discriminant();
        if d < 0.0 {
            Ok(d)
        } else {
            Err(GeomError::WrongDiscriminant(d))
        }
    }
}

/// `(a, b)` of the family `aJ + bI` built from a Norden structure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NordenFamilyParams {
    pub a: f64,
    pub b: f64,
}

impl NordenFamilyParams {
    pub const fn new(a: f64, b: f64) -> Self {
        NordenFamilyParams { a, b }
    }

    /// `(2b, -(a^2 + b^2))`.
    pub fn induced(&self) -> MetallicParams {
        MetallicParams::new(2.0 * self.b, -(self.a * self.a + self.b * self.b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RootSign {
    #[default]
    Plus,
    Minus,
}

impl RootSign {
    pub fn factor(self) -> f64 {
        match self {
            RootSign::Plus => 1.0,
            RootSign::Minus => -1.0,
        }
    }
}

/// Positive root of `x^2 - px - q = 0`.
pub fn metallic_number(p: f64, q: f64) -> Result<f64> {
    metallic_root(p, q, RootSign::Plus)
}

/// `(p ± sqrt(p^2+4q)) / 2`.
pub fn metallic_root(p: f64, q: f64, sign: RootSign) -> Result<f64> {
    let d = MetallicParams::new(p, q).discriminant();
    if d < 0.0 {
        return Err(GeomError::NegativeDiscriminant(d));
    }
    Ok((p + sign.factor() * libm::sqrt(d)) / 2.0)
}

/// `mu I` with `mu` a root of `x^2 = px + q`.
pub fn trivial_structure(p: f64, q: f64, n: usize, sign: RootSign) -> Result<DMatrix<f64>> {
    let mu = metallic_root(p, q, sign)?;
    Ok(DMatrix::identity(n, n) * mu)
}

/// `mu I` as a constant structure field.
pub fn trivial_structure_field(p: f64, q: f64, n: usize, sign: RootSign) -> Result<ExprMatrix> {
    Ok(ExprMatrix::scalar(n, Expr::constant(metallic_root(p, q, sign)?)))
}

/// Replaces the structure of `m` by the trivial one for `m`'s parameters.
pub fn with_trivial_structure(m: &ChartManifold, sign: RootSign) -> Result<ChartManifold> {
    let params = m.params();
    let j = trivial_structure_field(params.p, params.q, m.dim(), sign)?;
    let name = alloc::format!("{}-trivial", m.name());
    m.with_structure(name, j, params)
}

/// Worst `|J^2 + I|` and g-symmetry defect of `m`'s structure on the sample.
pub fn norden_defects(m: &ChartManifold, v: &Verifier) -> Result<(f64, f64)> {
    let square = v.max_over(|x| {
        let j = m.structure_at(x)?;
        let n = m.dim();
        Ok(scaled(max_abs(&(&j * &j + DMatrix::identity(n, n))), { let s = max_abs(&j); s * s }))
    })?;
    let symmetry = v.max_over(|x| {
        let g = m.metric_at(x)?;
        let j = m.structure_at(x)?;
        Ok(scaled(max_abs(&symmetry_defect(&g, &j)), max_abs(&g) * max_abs(&j)))
    })?;
    Ok((square, symmetry))
}

fn ensure_norden(m: &ChartManifold, v: &Verifier) -> Result<()> {
    let (square_err, symmetry_err) = norden_defects(m, v)?;
    if square_err <= v.tolerance && symmetry_err <= v.tolerance {
        Ok(())
    } else {
        Err(GeomError::NotNorden {
            square_err,
            symmetry_err,
        })
    }
}

/// A structure field derived from another, with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedStructure {
    pub structure: ExprMatrix,
    pub params: MetallicParams,
}

impl DerivedStructure {
    pub fn into_manifold(self, base: &ChartManifold, name: impl Into<String>) -> Result<ChartManifold> {
        base.with_structure(name, self.structure, self.params)
    }
}

/// `aJ_N + bI` for a Norden structure `J_N` (the structure of `m`).
pub fn metallic_from_norden(m: &ChartManifold, family: NordenFamilyParams, v: &Verifier) -> Result<DerivedStructure> {
    ensure_norden(m, v)?;
    let n = m.dim();
    let a = Expr::constant(family.a);
    let structure = m
        .structure()
        .scale(&a)
        .add(&ExprMatrix::scalar(n, Expr::constant(family.b)));
    Ok(DerivedStructure {
        structure,
        params: family.induced(),
    })
}

/// `±(2J - pI)/sqrt(-p^2-4q)` for a metallic Norden structure.
pub fn norden_from_metallic(m: &ChartManifold, sign: RootSign) -> Result<DerivedStructure> {
    let params = m.params();
    let d = params.negative_discriminant()?;
    let n = m.dim();
    let c = sign.factor() / libm::sqrt(-d);
    let structure = m
        .structure()
        .scale(&Expr::constant(2.0 * c))
        .sub(&ExprMatrix::scalar(n, Expr::constant(params.p * c)));
    Ok(DerivedStructure {
        structure,
        params: MetallicParams::new(0.0, -1.0),
    })
}

/// The `(a, b)` with `J = a J_± + b I`: `a = ±sqrt(-p^2-4q)/2`, `b = p/2`.
pub fn norden_reconstruction(params: MetallicParams, sign: RootSign) -> Result<NordenFamilyParams> {
    let d = params.negative_discriminant()?;
    Ok(NordenFamilyParams::new(
        sign.factor() * libm::sqrt(-d) / 2.0,
        params.p / 2.0,
    ))
}

/// `J_{a,b}^2 = 2b J_{a,b} - (a^2+b^2) I` on the sample.
pub fn check_family_identity(m: &ChartManifold, family: NordenFamilyParams, v: &Verifier) -> Result<CheckReport> {
    let derived = metallic_from_norden(m, family, v)?;
    v.check("core.norden_family_identity", m.name(), |x| {
        let j = derived.structure.eval(x)?;
        let nj = max_abs(&j);
        Ok(scaled(max_abs(&polynomial_defect(&j, derived.params)), nj * nj))
    })
}

/// `J_±^2 = -I` and g-symmetry of `J_±`, reported as one check.
pub fn check_norden_from_metallic(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let mut worst: f64 = 0.0;
    for sign in [RootSign::Plus, RootSign::Minus] {
        let derived = norden_from_metallic(m, sign)?.into_manifold(m, m.name())?;
        let (a, b) = norden_defects(&derived, v)?;
        worst = worst.max(a).max(b);
    }
    Ok(CheckReport::new(
        "core.norden_from_metallic",
        m.name(),
        v.sample.count,
        worst,
        v.tolerance,
    ))
}

/// `J = a J_± + b I` rebuilt from both signs.
pub fn check_norden_round_trip(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let params = m.params();
    let mut rebuilt = alloc::vec::Vec::new();
    for sign in [RootSign::Plus, RootSign::Minus] {
        let norden = norden_from_metallic(m, sign)?.into_manifold(m, m.name())?;
        let family = norden_reconstruction(params, sign)?;
        rebuilt.push(metallic_from_norden(&norden, family, v)?);
    }
    v.check("core.norden_round_trip", m.name(), |x| {
        let j = m.structure_at(x)?;
        let mut worst: f64 = 0.0;
        for r in &rebuilt {
            worst = worst.max(scaled(max_abs(&(r.structure.eval(x)? - &j)), max_abs(&j)));
        }
        Ok(worst)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::sample::SampleConfig;

    #[test]
    fn named_means() {
        assert_eq!(metallic_number(1.0, 1.0).unwrap(), 1.618_033_988_749_895);
        assert!((metallic_number(2.0, 1.0).unwrap() - 2.414_213_562_373_095).abs() < 1e-15);
        assert_eq!(metallic_number(1.0, 2.0).unwrap(), 2.0);
        assert!((metallic_number(1.0, 3.0).unwrap() - 2.302_775_637_731_995).abs() < 1e-15);
    }

    #[test]
    fn negative_discriminant_is_rejected() {
        assert!(matches!(metallic_number(1.0, -1.0), Err(GeomError::NegativeDiscriminant(_))));
        assert!(trivial_structure(0.0, -1.0, 2, RootSign::Plus).is_err());
    }

    #[test]
    fn classification_tags() {
        assert_eq!(MetallicParams::new(1.0, 1.0).classify(), Discriminant::Hyperbolic);
        assert_eq!(MetallicParams::new(2.0, -1.0).classify(), Discriminant::Parabolic);
        assert_eq!(MetallicParams::new(2.0, -2.0).classify(), Discriminant::EllipticNorden);
        let fam = NordenFamilyParams::new(0.0, 5.0).induced();
        assert_eq!(fam, MetallicParams::new(10.0, -25.0));
        assert_eq!(fam.classify(), Discriminant::Parabolic);
    }

    #[test]
    fn trivial_structures() {
        let phi = metallic_number(1.0, 1.0).unwrap();
        assert_eq!(trivial_structure(1.0, 1.0, 2, RootSign::Plus).unwrap(), DMatrix::identity(2, 2) * phi);
        assert_eq!(
            trivial_structure(0.0, 1.0, 3, RootSign::Minus).unwrap(),
            -DMatrix::<f64>::identity(3, 3)
        );
    }

    #[test]
    fn trivial_structure_is_metallic_on_every_example() {
        for m in catalog::all() {
            let t = with_trivial_structure(&m, RootSign::Plus);
            let Ok(t) = t else { continue };
            let v = Verifier::new(t.domain(), &SampleConfig::default());
            assert!(crate::manifold::check_polynomial(&t, &v).unwrap().pass, "{}", m.name());
            assert!(crate::manifold::check_g_symmetric_endo(&t, &v).unwrap().pass);
        }
    }

    #[test]
    fn norden_family_from_flat_neutral_example() {
        let norden = catalog::e1_norden();
        let v = Verifier::new(norden.domain(), &SampleConfig::default());
        let d = metallic_from_norden(&norden, NordenFamilyParams::new(1.0, 1.0), &v).unwrap();
        assert_eq!(d.params, MetallicParams::new(2.0, -2.0));
        let j = d.structure.eval(&[0.0, 0.0]).unwrap();
        assert_eq!(j, DMatrix::from_row_slice(2, 2, &[1.0, 1.0, -1.0, 1.0]));

        let d = metallic_from_norden(&norden, NordenFamilyParams::new(1.0, 0.0), &v).unwrap();
        assert_eq!(d.params, MetallicParams::new(0.0, -1.0));
        assert_eq!(d.structure.eval(&[0.1, 0.2]).unwrap(), norden.structure_at(&[0.1, 0.2]).unwrap());

        let d = metallic_from_norden(&norden, NordenFamilyParams::new(0.0, 5.0), &v).unwrap();
        assert_eq!(d.structure.eval(&[0.0, 0.0]).unwrap(), DMatrix::identity(2, 2) * 5.0);
    }

    #[test]
    fn non_norden_input_is_rejected() {
        let e2 = catalog::e2();
        let v = Verifier::new(e2.domain(), &SampleConfig::default());
        assert!(matches!(
            metallic_from_norden(&e2, NordenFamilyParams::new(1.0, 0.0), &v),
            Err(GeomError::NotNorden { .. })
        ));
    }

    #[test]
    fn norden_from_flat_neutral_metallic() {
        let e1 = catalog::e1();
        let plus = norden_from_metallic(&e1, RootSign::Plus).unwrap();
        let jp = plus.structure.eval(&[0.3, 0.3]).unwrap();
        assert_eq!(jp, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        let minus = norden_from_metallic(&e1, RootSign::Minus).unwrap();
        assert_eq!(minus.structure.eval(&[0.3, 0.3]).unwrap(), -jp);
        assert!(matches!(
            norden_from_metallic(&catalog::e2(), RootSign::Plus),
            Err(GeomError::WrongDiscriminant(_))
        ));
    }

    #[test]
    fn norden_round_trip_recovers_structure() {
        let e1 = catalog::e1();
        let v = Verifier::new(e1.domain(), &SampleConfig::default()).with_tolerance(1e-12);
        assert!(check_norden_round_trip(&e1, &v).unwrap().pass);
        assert!(check_norden_from_metallic(&e1, &v).unwrap().pass);
    }
}
