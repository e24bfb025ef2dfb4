use core::fmt;

use super::{BinaryOp, Expr, Node, UnaryOp};

/// Display adapter printing an expression in the parser's grammar.
///
/// Without names, coordinate `i` prints as `x{i}`.
pub struct Printer<'a> {
    expr: &'a Expr,
    names: Option<&'a [&'a str]>,
}

impl<'a> Printer<'a> {
    pub(crate) fn new(expr: &'a Expr, names: Option<&'a [&'a str]>) -> Self {
        Printer { expr, names }
    }
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e.node() {
        Node::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => PREC_ATOM,
        Node::Const(_) | Node::Coord(_) => PREC_ATOM,
        Node::Unary(UnaryOp::Neg, _) => PREC_NEG,
        Node::Unary(..) => PREC_ATOM,
        Node::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => PREC_ADD,
        Node::Binary(..) => PREC_MUL,
        Node::Pow(..) => PREC_POW,
    }
}

fn write_number(f: &mut fmt::Formatter<'_>, value: f64) -> fmt::Result {
    let magnitude = value.abs();
    let negative = value < 0.0 || (value == 0.0 && value.is_sign_negative());
    if negative {
        f.write_str("(-")?;
    }
    if magnitude != 0.0 && !(1e-4..1e16).contains(&magnitude) {
        write!(f, "{magnitude:e}")?;
    } else {
        write!(f, "{magnitude}")?;
    }
    if negative {
        f.write_str(")")?;
    }
    Ok(())
}

impl Printer<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
        let prec = precedence(e);
        let paren = prec < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match e.node() {
            Node::Const(c) => write_number(f, *c)?,
            Node::Coord(i) => match self.names.and_then(|n| n.get(*i)) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "x{i}")?,
            },
            Node::Unary(UnaryOp::Neg, c) => {
                f.write_str("-")?;
                self.write(f, c, PREC_NEG)?;
            }
            Node::Unary(op, c) => {
                write!(f, "{}(", op.name())?;
                self.write(f, c, 0)?;
                f.write_str(")")?;
            }
            Node::Binary(op, a, b) => {
                // Right operands bind strictly tighter so the tree shape survives.
                self.write(f, a, prec)?;
                write!(f, "{}", op.symbol())?;
                self.write(f, b, prec + 1)?;
            }
            Node::Pow(b, exp) => {
                self.write(f, b, PREC_ATOM)?;
                f.write_str("^")?;
                write_number(f, *exp)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.expr, 0)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer::new(self, None).fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;
    use alloc::string::ToString;

    #[test]
    fn prints_minimal_parentheses() {
        let names = ["x", "y"];
        for (src, out) in [
            ("x^2 + 3*y", "x^2+3*y"),
            ("(x+y)*(x-y)", "(x+y)*(x-y)"),
            ("x-(y-1)", "x-(y-1)"),
            ("-x^2", "-x^2"),
            ("(-x)^2", "(-x)^2"),
            ("x^-2", "x^(-2)"),
            ("sin(x)/(2*y)", "sin(x)/(2*y)"),
            ("-(x*y)", "-(x*y)"),
            ("1e-20*x", "1e-20*x"),
        ] {
            let e = parse(src, &names).unwrap();
            assert_eq!(e.display_with(&names).to_string(), out, "{src}");
        }
    }
}
