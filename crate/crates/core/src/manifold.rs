//! Single-chart pseudo-Riemannian manifolds carrying a (1,1)-tensor field.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{GeomError, Result};
use crate::expr::{parse, parse::validate_coord_names, Expr};
use crate::metallic::MetallicParams;
use crate::sample::{scaled, CheckReport, Interval, Verifier};
use crate::tensor::{max_abs, ExprMatrix};

/// Nondegeneracy threshold on `|det g|`.
pub const MIN_METRIC_DET: f64 = 1e-10;

/// Textual description of a chart manifold, as found in manifests.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ChartSpec {
    pub name: String,
    pub dim: usize,
    pub coords: Vec<String>,
    pub p: f64,
    pub q: f64,
    pub domain: Vec<[f64; 2]>,
    pub g: Vec<Vec<String>>,
    #[cfg_attr(feature = "serde", serde(rename = "J"))]
    pub j: Vec<Vec<String>>,
}

impl ChartSpec {
    pub fn build(&self) -> Result<ChartManifold> {
        let n = self.dim;
        if self.coords.len() != n {
            return Err(GeomError::InvalidManifold(format!(
                "{} coordinate names for dimension {n}",
                self.coords.len()
            )));
        }
        let names: Vec<&str> = self.coords.iter().map(String::as_str).collect();
        validate_coord_names(&names)?;
        let metric = parse_matrix("g", &self.g, n, &names)?;
        let structure = parse_matrix("J", &self.j, n, &names)?;
        let domain = self
            .domain
            .iter()
            .map(|[lo, hi]| Interval::new(*lo, *hi))
            .collect();
        ChartManifold::new(
            self.name.clone(),
            self.coords.clone(),
            metric,
            structure,
            MetallicParams::new(self.p, self.q),
            domain,
        )
    }
}

fn shape_of(rows: &[Vec<String>]) -> String {
    let widths: Vec<String> = rows.iter().map(|r| r.len().to_string()).collect();
    format!("{} rows of widths [{}]", rows.len(), widths.join(","))
}

fn parse_matrix(what: &str, rows: &[Vec<String>], n: usize, names: &[&str]) -> Result<ExprMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(GeomError::DimensionMismatch {
            what: what.to_string(),
            expected: n,
            found: shape_of(rows),
        });
    }
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse(s, names)).collect::<core::result::Result<Vec<_>, _>>())
        .collect::<core::result::Result<Vec<_>, _>>()?;
    Ok(ExprMatrix::from_rows(parsed).expect("rows checked square"))
}

/// Chart manifold `(M, g, J)` with metallic parameters `(p, q)` and a
/// sampling box.
///
/// `structure()[(i, j)]` is `J^i_j`; `metric()[(i, j)]` is `g_{ij}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartManifold {
    name: String,
    coords: Vec<String>,
    metric: ExprMatrix,
    structure: ExprMatrix,
    params: MetallicParams,
    domain: Vec<Interval>,
}

impl ChartManifold {
    pub fn new(
        name: String,
        coords: Vec<String>,
        metric: ExprMatrix,
        structure: ExprMatrix,
        params: MetallicParams,
        domain: Vec<Interval>,
    ) -> Result<Self> {
        let n = coords.len();
        if n == 0 {
            return Err(GeomError::InvalidManifold("dimension must be positive".into()));
        }
        let names: Vec<&str> = coords.iter().map(String::as_str).collect();
        validate_coord_names(&names)?;
        for (what, m) in [("g", &metric), ("J", &structure)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(GeomError::DimensionMismatch {
                    what: what.into(),
                    expected: n,
                    found: format!("{}x{}", m.nrows(), m.ncols()),
                });
            }
            if let Some(k) = m.entries().filter_map(Expr::max_coord).max() {
                if k >= n {
                    return Err(GeomError::InvalidManifold(format!(
                        "{what} references coordinate {k} of a {n}-dimensional chart"
                    )));
                }
            }
        }
        if domain.len() != n {
            return Err(GeomError::InvalidManifold(format!(
                "domain has {} intervals for dimension {n}",
                domain.len()
            )));
        }
        if let Some(iv) = domain
            .iter()
            .find(|iv| !(iv.lo.is_finite() && iv.hi.is_finite() && iv.lo <= iv.hi))
        {
            return Err(GeomError::InvalidManifold(format!(
                "bad domain interval [{}, {}]",
                iv.lo, iv.hi
            )));
        }
        if !(params.p.is_finite() && params.q.is_finite()) {
            return Err(GeomError::InvalidManifold("p and q must be finite".into()));
        }
        Ok(ChartManifold {
            name,
            coords,
            metric,
            structure,
            params,
            domain,
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn coord_names(&self) -> Vec<&str> {
        self.coords.iter().map(String::as_str).collect()
    }

    pub fn metric(&self) -> &ExprMatrix {
        &self.metric
    }

    pub fn structure(&self) -> &ExprMatrix {
        &self.structure
    }

    pub fn params(&self) -> MetallicParams {
        self.params
    }

    pub fn domain(&self) -> &[Interval] {
        &self.domain
    }

    /// Same chart and metric with a different structure and parameters.
    pub fn with_structure(&self, name: impl Into<String>, structure: ExprMatrix, params: MetallicParams) -> Result<Self> {
        ChartManifold::new(
            name.into(),
            self.coords.clone(),
            self.metric.clone(),
            structure,
            params,
            self.domain.clone(),
        )
    }

    /// Prints every component back into a [`ChartSpec`].
    pub fn to_spec(&self) -> ChartSpec {
        let names = self.coord_names();
        let print = |m: &ExprMatrix| -> Vec<Vec<String>> {
            (0..m.nrows())
                .map(|r| m.row(r).iter().map(|e| e.display_with(&names).to_string()).collect())
                .collect()
        };
        ChartSpec {
            name: self.name.clone(),
            dim: self.dim(),
            coords: self.coords.clone(),
            p: self.params.p,
            q: self.params.q,
            domain: self.domain.iter().map(|iv| [iv.lo, iv.hi]).collect(),
            g: print(&self.metric),
            j: print(&self.structure),
        }
    }

    pub fn metric_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let g = self.metric.eval(x)?;
        let det = g.determinant();
        if !(det.abs() >= MIN_METRIC_DET) {
            return Err(GeomError::DegenerateMetric { det });
        }
        Ok(g)
    }

    pub fn inverse_metric_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let g = self.metric_at(x)?;
        let det = g.determinant();
        g.try_inverse().ok_or(GeomError::DegenerateMetric { det })
    }

    pub fn structure_at(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        Ok(self.structure.eval(x)?)
    }

    /// Raises a covector: `G^{-1} alpha`.
    pub fn sharp(&self, x: &[f64], covector: &[f64]) -> Result<Vec<f64>> {
        let g = self.metric_at(x)?;
        let det = g.determinant();
        let rhs = nalgebra::DVector::from_column_slice(covector);
        let sol = g.lu().solve(&rhs).ok_or(GeomError::DegenerateMetric { det })?;
        Ok(sol.iter().copied().collect())
    }

    /// Lowers a vector: `G X`.
    pub fn flat(&self, x: &[f64], vector: &[f64]) -> Result<Vec<f64>> {
        let g = self.metric_at(x)?;
        let v = nalgebra::DVector::from_column_slice(vector);
        Ok((g * v).iter().copied().collect())
    }

    /// Signature `(positive, negative)` of the symmetrised metric at `x`.
    pub fn signature_at(&self, x: &[f64]) -> Result<(usize, usize)> {
        let g = self.metric_at(x)?;
        let sym = (&g + g.transpose()) * 0.5;
        let eig = sym.symmetric_eigen().eigenvalues;
        let pos = eig.iter().filter(|v| **v > 0.0).count();
        let neg = eig.iter().filter(|v| **v < 0.0).count();
        Ok((pos, neg))
    }
}

/// `J^T G - G J`, the g-symmetry defect of an endomorphism.
pub fn symmetry_defect(g: &DMatrix<f64>, j: &DMatrix<f64>) -> DMatrix<f64> {
    j.transpose() * g - g * j
}

/// `J^2 - pJ - qI`.
pub fn polynomial_defect(j: &DMatrix<f64>, params: MetallicParams) -> DMatrix<f64> {
    let n = j.nrows();
    j * j - j * params.p - DMatrix::identity(n, n) * params.q
}

pub fn check_g_symmetric_endo(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    v.check("core.g_symmetric", m.name(), |x| {
        let g = m.metric_at(x)?;
        let j = m.structure_at(x)?;
        let scale = max_abs(&g) * max_abs(&j);
        Ok(scaled(max_abs(&symmetry_defect(&g, &j)), scale))
    })
}

pub fn check_polynomial(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let params = m.params();
    v.check("core.polynomial", m.name(), |x| {
        let j = m.structure_at(x)?;
        let nj = max_abs(&j);
        let scale = (nj * nj).max(params.p.abs() * nj).max(params.q.abs());
        Ok(scaled(max_abs(&polynomial_defect(&j, params)), scale))
    })
}

/// `|g_ij - g_ji|` over the sample (also fails on degenerate points).
pub fn check_metric_symmetric(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    v.check("core.metric_symmetric", m.name(), |x| {
        let g = m.metric_at(x)?;
        Ok(scaled(max_abs(&(&g - g.transpose())), max_abs(&g)))
    })
}

/// `||G G^{-1} - I||` over the sample.
pub fn check_metric_inverse(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    v.check("core.metric_inverse", m.name(), |x| {
        let g = m.metric_at(x)?;
        let gi = m.inverse_metric_at(x)?;
        let n = m.dim();
        Ok(scaled(max_abs(&(&g * &gi - DMatrix::identity(n, n))), max_abs(&g) * max_abs(&gi)))
    })
}

/// Number of sample points whose signature differs from the first point's.
pub fn check_signature_constant(m: &ChartManifold, v: &Verifier) -> Result<CheckReport> {
    let first = match v.sample.points.first() {
        Some(x) => m.signature_at(x)?,
        None => (0, 0),
    };
    v.check("core.signature_constant", m.name(), |x| {
        Ok(if m.signature_at(x)? == first { 0.0 } else { 1.0 })
    })
}
