//! Scalar expressions in chart coordinates.
//!
//! An [`Expr`] is an immutable, reference-counted tree. Coordinates are
//! addressed by their 0-based position in the chart; names only matter when
//! parsing and printing. Exponents of `^` are always real constants, which
//! keeps [`Expr::diff`] total.
//!
//! The arithmetic operators on `Expr` are *smart* constructors: they fold
//! constants and drop the trivial identities (`0+e`, `1*e`, `0*e`, `e^1`,
//! `e^0`). [`Expr::simplify`] rebuilds an arbitrary tree through them.

pub mod parse;
mod print;
pub mod random;

use alloc::sync::Arc;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

pub use parse::{parse, ParseError};
pub use print::Printer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
}

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Exp => "exp",
            UnaryOp::Ln => "ln",
            UnaryOp::Sqrt => "sqrt",
        }
    }

    pub(crate) fn from_function_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "exp" => UnaryOp::Exp,
            "ln" => UnaryOp::Ln,
            "sqrt" => UnaryOp::Sqrt,
            _ => return None,
        })
    }

    fn apply(self, x: f64) -> Result<f64, DomainError> {
        match self {
            UnaryOp::Neg => Ok(-x),
            UnaryOp::Sin => Ok(libm::sin(x)),
            UnaryOp::Cos => Ok(libm::cos(x)),
            UnaryOp::Exp => Ok(libm::exp(x)),
            UnaryOp::Ln if x > 0.0 => Ok(libm::log(x)),
            UnaryOp::Ln => Err(DomainError::LogOfNonPositive(x)),
            UnaryOp::Sqrt if x >= 0.0 => Ok(libm::sqrt(x)),
            UnaryOp::Sqrt => Err(DomainError::SqrtOfNegative(x)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }

    fn apply(self, a: f64, b: f64) -> Result<f64, DomainError> {
        match self {
            BinaryOp::Add => Ok(a + b),
            BinaryOp::Sub => Ok(a - b),
            BinaryOp::Mul => Ok(a * b),
            BinaryOp::Div if b == 0.0 => Err(DomainError::DivisionByZero),
            BinaryOp::Div => Ok(a / b),
        }
    }
}

/// Failure while evaluating an expression at a point.
#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum DomainError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of non-positive value {0}")]
    LogOfNonPositive(f64),
    #[error("square root of negative value {0}")]
    SqrtOfNegative(f64),
    #[error("zero raised to negative power {0}")]
    ZeroToNegativePower(f64),
    #[error("negative base {base} raised to non-integer power {exponent}")]
    FractionalPowerOfNegative { base: f64, exponent: f64 },
    #[error("coordinate {index} out of range for a point of dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
}

fn pow_checked(base: f64, exponent: f64) -> Result<f64, DomainError> {
    if base == 0.0 && exponent < 0.0 {
        return Err(DomainError::ZeroToNegativePower(exponent));
    }
    if base < 0.0 && libm::trunc(exponent) != exponent {
        return Err(DomainError::FractionalPowerOfNegative { base, exponent });
    }
    if exponent == 2.0 {
        return Ok(base * base);
    }
    Ok(libm::pow(base, exponent))
}

#[derive(Debug, PartialEq)]
pub enum Node {
    Const(f64),
    Coord(usize),
    Unary(UnaryOp, Expr),
    Binary(BinaryOp, Expr, Expr),
    /// Base raised to a constant exponent.
    Pow(Expr, f64),
}

#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Expr {
    /// Wraps a node as-is, without simplification.
    pub fn from_node(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(value: f64) -> Self {
        Self::from_node(Node::Const(value))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn coord(index: usize) -> Self {
        Self::from_node(Node::Coord(index))
    }

    pub fn unary(op: UnaryOp, child: Expr) -> Self {
        Self::from_node(Node::Unary(op, child))
    }

    pub fn binary(op: BinaryOp, left: Expr, right: Expr) -> Self {
        Self::from_node(Node::Binary(op, left, right))
    }

    pub fn raw_pow(base: Expr, exponent: f64) -> Self {
        Self::from_node(Node::Pow(base, exponent))
    }

    pub fn as_const(&self) -> Option<f64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_const(&self, value: f64) -> bool {
        self.as_const() == Some(value)
    }

    pub fn is_zero(&self) -> bool {
        self.is_const(0.0)
    }

    /// Largest coordinate index referenced, if any.
    pub fn max_coord(&self) -> Option<usize> {
        match self.node() {
            Node::Const(_) => None,
            Node::Coord(i) => Some(*i),
            Node::Unary(_, c) | Node::Pow(c, _) => c.max_coord(),
            Node::Binary(_, a, b) => match (a.max_coord(), b.max_coord()) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }

    /// Number of nodes in the tree (shared subtrees counted each time).
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Const(_) | Node::Coord(_) => 1,
            Node::Unary(_, c) | Node::Pow(c, _) => 1 + c.size(),
            Node::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64, DomainError> {
        match self.node() {
            Node::Const(c) => Ok(*c),
            Node::Coord(i) => point.get(*i).copied().ok_or(DomainError::CoordinateOutOfRange {
                index: *i,
                dim: point.len(),
            }),
            Node::Unary(op, c) => op.apply(c.eval(point)?),
            Node::Binary(op, a, b) => op.apply(a.eval(point)?, b.eval(point)?),
            Node::Pow(b, e) => pow_checked(b.eval(point)?, *e),
        }
    }

    // ---- smart constructors -------------------------------------------------

    pub fn apply_unary(op: UnaryOp, child: Expr) -> Expr {
        if let Some(c) = child.as_const() {
            if let Ok(v) = op.apply(c) {
                if v.is_finite() {
                    return Expr::constant(v);
                }
            }
        }
        if op == UnaryOp::Neg {
            if let Node::Unary(UnaryOp::Neg, inner) = child.node() {
                return inner.clone();
            }
        }
        Expr::unary(op, child)
    }

    pub fn apply_binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if let Ok(v) = op.apply(x, y) {
                if v.is_finite() {
                    return Expr::constant(v);
                }
            }
        }
        match op {
            BinaryOp::Add => {
                if a.is_zero() {
                    return b;
                }
                if b.is_zero() {
                    return a;
                }
            }
            BinaryOp::Sub => {
                if b.is_zero() {
                    return a;
                }
                if a.is_zero() {
                    return Expr::apply_unary(UnaryOp::Neg, b);
                }
            }
            BinaryOp::Mul => {
                if a.is_zero() || b.is_zero() {
                    return Expr::zero();
                }
                if a.is_const(1.0) {
                    return b;
                }
                if b.is_const(1.0) {
                    return a;
                }
                if a.is_const(-1.0) {
                    return Expr::apply_unary(UnaryOp::Neg, b);
                }
                if b.is_const(-1.0) {
                    return Expr::apply_unary(UnaryOp::Neg, a);
                }
            }
            BinaryOp::Div => {
                if a.is_zero() && !b.is_zero() {
                    return Expr::zero();
                }
                if b.is_const(1.0) {
                    return a;
                }
            }
        }
        Expr::binary(op, a, b)
    }

    pub fn pow(&self, exponent: f64) -> Expr {
        if exponent == 0.0 {
            return Expr::one();
        }
        if exponent == 1.0 {
            return self.clone();
        }
        if let Some(c) = self.as_const() {
            if let Ok(v) = pow_checked(c, exponent) {
                if v.is_finite() {
                    return Expr::constant(v);
                }
            }
        }
        Expr::raw_pow(self.clone(), exponent)
    }

    pub fn sin(&self) -> Expr {
        Expr::apply_unary(UnaryOp::Sin, self.clone())
    }

    pub fn cos(&self) -> Expr {
        Expr::apply_unary(UnaryOp::Cos, self.clone())
    }

    pub fn exp(&self) -> Expr {
        Expr::apply_unary(UnaryOp::Exp, self.clone())
    }

    pub fn ln(&self) -> Expr {
        Expr::apply_unary(UnaryOp::Ln, self.clone())
    }

    pub fn sqrt(&self) -> Expr {
        Expr::apply_unary(UnaryOp::Sqrt, self.clone())
    }

    /// Constant folding and the trivial identities, applied bottom-up.
    pub fn simplify(&self) -> Expr {
        match self.node() {
            Node::Const(_) | Node::Coord(_) => self.clone(),
            Node::Unary(op, c) => Expr::apply_unary(*op, c.simplify()),
            Node::Binary(op, a, b) => Expr::apply_binary(*op, a.simplify(), b.simplify()),
            Node::Pow(b, e) => b.simplify().pow(*e),
        }
    }

    /// Exact partial derivative with respect to coordinate `coord`.
    pub fn diff(&self, coord: usize) -> Expr {
        match self.node() {
            Node::Const(_) => Expr::zero(),
            Node::Coord(i) => Expr::constant(if *i == coord { 1.0 } else { 0.0 }),
            Node::Unary(op, u) => {
                let du = u.diff(coord);
                if du.is_zero() {
                    return Expr::zero();
                }
                match op {
                    UnaryOp::Neg => -du,
                    UnaryOp::Sin => u.cos() * du,
                    UnaryOp::Cos => -(u.sin() * du),
                    UnaryOp::Exp => self.clone() * du,
                    UnaryOp::Ln => du / u.clone(),
                    UnaryOp::Sqrt => du / (Expr::constant(2.0) * self.clone()),
                }
            }
            Node::Binary(op, u, v) => {
                let du = u.diff(coord);
                let dv = v.diff(coord);
                match op {
                    BinaryOp::Add => du + dv,
                    BinaryOp::Sub => du - dv,
                    BinaryOp::Mul => du * v.clone() + u.clone() * dv,
                    BinaryOp::Div => {
                        if dv.is_zero() {
                            du / v.clone()
                        } else {
                            (du * v.clone() - u.clone() * dv) / v.pow(2.0)
                        }
                    }
                }
            }
            Node::Pow(u, e) => {
                let du = u.diff(coord);
                if du.is_zero() {
                    return Expr::zero();
                }
                Expr::constant(*e) * u.pow(*e - 1.0) * du
            }
        }
    }

    /// Renders with the given coordinate names, in the parser's grammar.
    pub fn display_with<'a>(&'a self, names: &'a [&'a str]) -> Printer<'a> {
        Printer::new(self, Some(names))
    }
}

impl From<f64> for Expr {
    fn from(value: f64) -> Self {
        Expr::constant(value)
    }
}

macro_rules! binary_impl {
    ($trait:ident, $method:ident, $op:expr) => {
        impl $trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::apply_binary($op, self, rhs)
            }
        }
        impl $trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::apply_binary($op, self.clone(), rhs.clone())
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::apply_binary($op, self, rhs.clone())
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::apply_binary($op, self.clone(), rhs)
            }
        }
        impl $trait<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::apply_binary($op, self, Expr::constant(rhs))
            }
        }
        impl $trait<f64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::apply_binary($op, self.clone(), Expr::constant(rhs))
            }
        }
        impl $trait<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::apply_binary($op, Expr::constant(self), rhs)
            }
        }
        impl $trait<&Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::apply_binary($op, Expr::constant(self), rhs.clone())
            }
        }
    };
}

binary_impl!(Add, add, BinaryOp::Add);
binary_impl!(Sub, sub, BinaryOp::Sub);
binary_impl!(Mul, mul, BinaryOp::Mul);
binary_impl!(Div, div, BinaryOp::Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::apply_unary(UnaryOp::Neg, self)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::apply_unary(UnaryOp::Neg, self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn p(text: &str, names: &[&str]) -> Expr {
        parse(text, names).unwrap()
    }

    #[test]
    fn parse_builds_the_grammar_tree() {
        let e = p("x^2 + 3*y", &["x", "y"]);
        let expected = Expr::binary(
            BinaryOp::Add,
            Expr::raw_pow(Expr::coord(0), 2.0),
            Expr::binary(BinaryOp::Mul, Expr::constant(3.0), Expr::coord(1)),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn evaluates_simple_expressions() {
        assert_eq!(p("sin(u)*v", &["u", "v"]).eval(&[0.0, 5.0]).unwrap(), 0.0);
        assert_eq!(p("x^2", &["x"]).eval(&[3.0]).unwrap(), 9.0);
        assert_eq!(p("exp(0)*7", &["x"]).eval(&[2.0]).unwrap(), 7.0);
    }

    #[test]
    fn domain_errors_surface_at_evaluation() {
        let e = p("1/(x-x)", &["x"]);
        assert_eq!(e.eval(&[0.3]), Err(DomainError::DivisionByZero));
        assert!(matches!(
            p("ln(x)", &["x"]).eval(&[-1.0]),
            Err(DomainError::LogOfNonPositive(_))
        ));
        assert!(matches!(
            p("sqrt(x)", &["x"]).eval(&[-1.0]),
            Err(DomainError::SqrtOfNegative(_))
        ));
        assert!(matches!(
            p("x^-1", &["x"]).eval(&[0.0]),
            Err(DomainError::ZeroToNegativePower(_))
        ));
        assert!(matches!(
            p("x^0.5", &["x"]).eval(&[-4.0]),
            Err(DomainError::FractionalPowerOfNegative { .. })
        ));
    }

    #[test]
    fn power_rule_and_product_with_constant_factor() {
        let d = p("x^2", &["x"]).diff(0);
        assert_eq!(d.display_with(&["x"]).to_string(), "2*x");
        let d = p("sin(x)*y", &["x", "y"]).diff(1);
        assert_eq!(d.display_with(&["x", "y"]).to_string(), "sin(x)");
    }

    #[test]
    fn derivative_of_constant_subtree_vanishes() {
        assert!(p("sin(y)*3", &["x", "y"]).diff(0).is_zero());
        assert!(p("x^2", &["x", "y"]).diff(1).is_zero());
    }

    #[test]
    fn simplify_drops_identities() {
        let names = ["x", "y"];
        assert_eq!(
            p("0*sin(x)+y", &names).simplify().display_with(&names).to_string(),
            "y"
        );
        assert_eq!(p("x^1", &names).simplify().display_with(&names).to_string(), "x");
        assert!(p("x^0", &names).simplify().is_const(1.0));
        assert!(p("2*3+1", &names).simplify().is_const(7.0));
        assert_eq!(p("1*x+0", &names).simplify(), Expr::coord(0));
    }

    #[test]
    fn simplify_keeps_genuine_singularities() {
        let e = p("1/0", &["x"]).simplify();
        assert_eq!(e.eval(&[1.0]), Err(DomainError::DivisionByZero));
    }

    #[test]
    fn max_coord_reports_highest_index() {
        assert_eq!(p("a + c*b", &["a", "b", "c"]).max_coord(), Some(2));
        assert_eq!(p("2+3", &["a"]).max_coord(), None);
    }

    #[test]
    fn eval_rejects_short_points() {
        let e = Expr::coord(2);
        assert_eq!(
            e.eval(&vec![1.0, 2.0]),
            Err(DomainError::CoordinateOutOfRange { index: 2, dim: 2 })
        );
    }
}
