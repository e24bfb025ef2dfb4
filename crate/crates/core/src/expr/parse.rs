//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := number | ident | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | exp | ln | sqrt
//! ```

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{BinaryOp, Expr, UnaryOp};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("exponent at {position} is not a constant")]
    NonConstantExponent { position: usize },
    #[error("invalid coordinate name `{0}`")]
    InvalidCoordinateName(String),
}

fn syntax(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        position,
        message: message.into(),
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Checks that `names` are distinct identifiers not shadowing a function.
pub fn validate_coord_names(names: &[&str]) -> Result<(), ParseError> {
    for (i, name) in names.iter().enumerate() {
        if !is_identifier(name)
            || UnaryOp::from_function_name(name).is_some()
            || names[..i].contains(name)
        {
            return Err(ParseError::InvalidCoordinateName(name.to_string()));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let literal = &text[start..i];
            let value: f64 = literal
                .parse()
                .map_err(|_| syntax(start, alloc::format!("malformed number `{literal}`")))?;
            if !value.is_finite() {
                return Err(syntax(start, alloc::format!("number `{literal}` overflows")));
            }
            tokens.push((start, Token::Number(value)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            tokens.push((start, Token::Ident(text[start..i].to_string())));
        } else {
            let token = match c {
                '+' | '-' | '*' | '/' | '^' => Token::Op(c),
                '(' => Token::LParen,
                ')' => Token::RParen,
                _ => return Err(syntax(i, alloc::format!("unexpected character `{c}`"))),
            };
            tokens.push((i, token));
            i += c.len_utf8();
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Some(Token::Op(c)) if ops.contains(c) => {
                let c = *c;
                self.pos += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.offset(), alloc::format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.term()?;
        while let Some(c) = self.eat_op(&['+', '-']) {
            let right = self.term()?;
            let op = if c == '+' { BinaryOp::Add } else { BinaryOp::Sub };
            left = Expr::binary(op, left, right);
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.unary()?;
        while let Some(c) = self.eat_op(&['*', '/']) {
            let right = self.unary()?;
            let op = if c == '*' { BinaryOp::Mul } else { BinaryOp::Div };
            left = Expr::binary(op, left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.eat_op(&['-', '+']) {
            Some('-') => Ok(Expr::unary(UnaryOp::Neg, self.unary()?)),
            Some(_) => self.unary(),
            None => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat_op(&['^']).is_none() {
            return Ok(base);
        }
        let position = self.offset();
        let exponent = self.unary()?;
        if exponent.max_coord().is_some() {
            return Err(ParseError::NonConstantExponent { position });
        }
        match exponent.simplify().as_const() {
            Some(value) => Ok(Expr::raw_pow(base, value)),
            None => Err(syntax(position, "exponent does not fold to a finite constant")),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let position = self.offset();
        let token = self
            .peek()
            .cloned()
            .ok_or_else(|| syntax(position, "unexpected end of input"))?;
        self.pos += 1;
        match token {
            Token::Number(v) => Ok(Expr::constant(v)),
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Ident(name) => {
                if let Some(index) = self.names.iter().position(|n| *n == name) {
                    return Ok(Expr::coord(index));
                }
                if let Some(op) = UnaryOp::from_function_name(&name) {
                    self.expect(Token::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    self.expect(Token::RParen, "`)`")?;
                    return Ok(Expr::unary(op, arg));
                }
                Err(ParseError::UnknownIdentifier { name, position })
            }
            Token::Op(c) => Err(syntax(position, alloc::format!("unexpected operator `{c}`"))),
            Token::RParen => Err(syntax(position, "unexpected `)`")),
        }
    }
}

/// Parses `text`, resolving identifiers to coordinates by their position in
/// `coord_names`.
pub fn parse(text: &str, coord_names: &[&str]) -> Result<Expr, ParseError> {
    validate_coord_names(coord_names)?;
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        names: coord_names,
    };
    let expr = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(syntax(parser.offset(), "unexpected trailing input"));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let names = ["x"];
        let at = |s: &str, x: f64| parse(s, &names).unwrap().eval(&[x]).unwrap();
        assert_eq!(at("2^3^2", 0.0), 512.0);
        assert_eq!(at("-2^2", 0.0), -4.0);
        assert_eq!(at("2^-1", 0.0), 0.5);
        assert_eq!(at("8/4/2", 0.0), 1.0);
        assert_eq!(at("5-3-1", 0.0), 1.0);
        assert_eq!(at("-x*3", 2.0), -6.0);
        assert_eq!(at("2*-x", 2.0), -4.0);
        assert_eq!(at("x^(1/2)", 9.0), 3.0);
        assert_eq!(at("1.5e1 + .5", 0.0), 15.5);
    }

    #[test]
    fn reports_unknown_identifiers() {
        assert_eq!(
            parse("x + z", &["x", "y"]),
            Err(ParseError::UnknownIdentifier {
                name: "z".into(),
                position: 4
            })
        );
    }

    #[test]
    fn rejects_variable_exponents() {
        assert!(matches!(
            parse("x^y", &["x", "y"]),
            Err(ParseError::NonConstantExponent { position: 2 })
        ));
    }

    #[test]
    fn reports_syntax_positions() {
        assert!(matches!(parse("", &["x"]), Err(ParseError::Syntax { position: 0, .. })));
        assert!(matches!(parse("x +", &["x"]), Err(ParseError::Syntax { position: 3, .. })));
        assert!(matches!(parse("(x", &["x"]), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse("x $ 2", &["x"]), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse("x y", &["x", "y"]), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse("1e999", &["x"]), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn validates_coordinate_names() {
        assert!(parse("1", &["x", "x"]).is_err());
        assert!(parse("1", &["sin"]).is_err());
        assert!(parse("1", &["2x"]).is_err());
        assert!(parse("u_1 * u_2", &["u_1", "u_2"]).is_ok());
    }
}
