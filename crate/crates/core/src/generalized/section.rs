//! Symbolic sections of `TM ⊕ T*M` and the connection `D̂`.

use alloc::vec::Vec;

use nalgebra::DVector;

use crate::connections::ConnectionField;
use crate::error::Result;
use crate::expr::Expr;
use crate::tensor::{sum, ExprMatrix, Tensor3, Tensor4};

use super::GeneralizedVector;

/// `X + α` with expression components over the base chart.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedSectionField {
    pub vector: Vec<Expr>,
    pub form: Vec<Expr>,
}

impl GeneralizedSectionField {
    pub fn new(vector: Vec<Expr>, form: Vec<Expr>) -> Self {
        assert_eq!(vector.len(), form.len(), "vector and form parts differ in length");
        GeneralizedSectionField { vector, form }
    }

    /// `∂_a` for `a < n`, `dx^{a-n}` otherwise.
    pub fn basis(n: usize, a: usize) -> Self {
        let unit = |i: usize| if i == a { Expr::one() } else { Expr::zero() };
        GeneralizedSectionField::new((0..n).map(unit).collect(), (n..2 * n).map(unit).collect())
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn eval(&self, x: &[f64]) -> Result<GeneralizedVector> {
        let ev = |v: &[Expr]| -> Result<DVector<f64>> {
            let vals = v.iter().map(|e| e.eval(x)).collect::<core::result::Result<Vec<_>, _>>()?;
            Ok(DVector::from_vec(vals))
        };
        Ok(GeneralizedVector::new(ev(&self.vector)?, ev(&self.form)?))
    }

    fn sub(&self, other: &Self) -> Self {
        let d = |a: &[Expr], b: &[Expr]| a.iter().zip(b).map(|(x, y)| x - y).collect();
        GeneralizedSectionField::new(d(&self.vector, &other.vector), d(&self.form, &other.form))
    }
}

/// `Ĉ_i = diag(C_i, -C_i^T)` with `(C_i)^k_s = C^k_{is}`, so that
/// `D̂_{∂_i} s = ∂_i s + Ĉ_i s` on stacked components.
pub fn hat_connection_matrices(c: &ConnectionField) -> Vec<ExprMatrix> {
    let n = c.dim();
    (0..n)
        .map(|i| {
            ExprMatrix::from_fn(2 * n, 2 * n, |r, col| match (r < n, col < n) {
                (true, true) => c[[r, i, col]].clone(),
                (false, false) => -&c[[col - n, i, r - n]],
                _ => Expr::zero(),
            })
        })
        .collect()
}

/// `(D_X Y)^k = X^i (∂_i Y^k + C^k_{is} Y^s)`.
pub fn d_hat_vector(c: &ConnectionField, x: &[Expr], y: &[Expr]) -> Vec<Expr> {
    let n = c.dim();
    (0..n)
        .map(|k| {
            sum((0..n).map(|i| {
                let inner = y[k].diff(i) + sum((0..n).map(|s| &c[[k, i, s]] * &y[s]));
                &x[i] * inner
            }))
        })
        .collect()
}

/// `(D_X β)_k = X^i (∂_i β_k - C^s_{ik} β_s)`.
pub fn d_hat_form(c: &ConnectionField, x: &[Expr], beta: &[Expr]) -> Vec<Expr> {
    let n = c.dim();
    (0..n)
        .map(|k| {
            sum((0..n).map(|i| {
                let inner = beta[k].diff(i) - sum((0..n).map(|s| &c[[s, i, k]] * &beta[s]));
                &x[i] * inner
            }))
        })
        .collect()
}

/// `[X, Y]^k = X^i ∂_i Y^k - Y^i ∂_i X^k`.
pub fn lie_bracket(x: &[Expr], y: &[Expr]) -> Vec<Expr> {
    let n = x.len();
    (0..n)
        .map(|k| sum((0..n).map(|i| &x[i] * y[k].diff(i) - &y[i] * x[k].diff(i))))
        .collect()
}

/// `D̂_{X+α}(Y+β) = D_X Y + D_X β`.
pub fn d_hat(c: &ConnectionField, s: &GeneralizedSectionField, t: &GeneralizedSectionField) -> GeneralizedSectionField {
    GeneralizedSectionField::new(d_hat_vector(c, &s.vector, &t.vector), d_hat_form(c, &s.vector, &t.form))
}

/// `[X+α, Y+β]_D = [X, Y] + D_X β - D_Y α`.
pub fn bracket_d(
    c: &ConnectionField,
    s: &GeneralizedSectionField,
    t: &GeneralizedSectionField,
) -> GeneralizedSectionField {
    let a = d_hat_form(c, &s.vector, &t.form);
    let b = d_hat_form(c, &t.vector, &s.form);
    GeneralizedSectionField::new(
        lie_bracket(&s.vector, &t.vector),
        a.iter().zip(&b).map(|(u, w)| u - w).collect(),
    )
}

/// `T^D̂(σ, τ) = D̂_σ τ - D̂_τ σ - [σ, τ]_D`.
pub fn torsion_hat(
    c: &ConnectionField,
    s: &GeneralizedSectionField,
    t: &GeneralizedSectionField,
) -> GeneralizedSectionField {
    d_hat(c, s, t).sub(&d_hat(c, t, s)).sub(&bracket_d(c, s, t))
}

/// `R^D̂(σ, τ)ρ = D̂_σ D̂_τ ρ - D̂_τ D̂_σ ρ - D̂_{[σ,τ]_D} ρ`.
pub fn curvature_hat(
    c: &ConnectionField,
    s: &GeneralizedSectionField,
    t: &GeneralizedSectionField,
    r: &GeneralizedSectionField,
) -> GeneralizedSectionField {
    let st = d_hat(c, s, &d_hat(c, t, r));
    let ts = d_hat(c, t, &d_hat(c, s, r));
    st.sub(&ts).sub(&d_hat(c, &bracket_d(c, s, t), r))
}

/// `T(X, Y)` in the vector slot, zero form part.
pub fn torsion_action(t: &Tensor3<f64>, s: &GeneralizedVector, u: &GeneralizedVector) -> GeneralizedVector {
    let n = t.dim();
    let v = DVector::from_fn(n, |k, _| {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += t[[k, i, j]] * s.vec[i] * u.vec[j];
            }
        }
        acc
    });
    GeneralizedVector::new(v, DVector::zeros(n))
}

/// `R(X, Y) Z + R(X, Y) γ`, with `(R(X, Y) γ)_k = -γ_l R^l_{ijk} X^i Y^j`.
pub fn curvature_action(
    r: &Tensor4<f64>,
    s: &GeneralizedVector,
    t: &GeneralizedVector,
    z: &GeneralizedVector,
) -> GeneralizedVector {
    let n = r.dim();
    let xy = |l: usize, k: usize| -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += r[[l, i, j, k]] * s.vec[i] * t.vec[j];
            }
        }
        acc
    };
    let vec = DVector::from_fn(n, |l, _| (0..n).map(|k| xy(l, k) * z.vec[k]).sum());
    let form = DVector::from_fn(n, |k, _| -(0..n).map(|l| z.form[l] * xy(l, k)).sum::<f64>());
    GeneralizedVector::new(vec, form)
}
