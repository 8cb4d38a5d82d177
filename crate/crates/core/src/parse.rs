//! Expression parser for polynomials, scalars and points.
//!
//! Grammar: `+ - * / ^` with the usual precedence, `^` right-associative
//! with non-negative integer exponents, integer literals, declared variables
//! and the generator names of the coefficient field. Implicit
//! multiplication is rejected, and division is only allowed by constants.

use std::collections::HashMap;

use thiserror::Error;

use crate::coeff::{CoeffError, Field, Scalar};
use crate::poly::{HomogPoly, Point, Poly, PolyError};

/// Names that may not be used as extension generators.
pub const RESERVED: [&str; 5] = ["x", "y", "z", "u", "v"];

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is not homogeneous: terms {first} and {second} have different degrees")]
    NotHomogeneous { first: String, second: String },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

impl From<PolyError> for ParseError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::NotHomogeneous { first, second } => ParseError::NotHomogeneous { first, second },
            PolyError::Coeff(c) => ParseError::Coeff(c),
            other => ParseError::Syntax {
                pos: 0,
                msg: other.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(chars[start..i].iter().collect())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                pos: i,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a, const N: usize> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    field: &'a Field,
    vars: HashMap<String, usize>,
    gens: HashMap<String, Scalar>,
}

impl<'a, const N: usize> Parser<'a, N> {
    fn new(text: &str, field: &'a Field, vars: &[&str; N]) -> Result<Self, ParseError> {
        let mut gens = HashMap::new();
        let mut cur = field.clone();
        let mut lift: Vec<Field> = Vec::new();
        while let Some(g) = cur.generator() {
            let mut s = g;
            for outer in lift.iter().rev() {
                s = outer.lift(s);
            }
            gens.insert(cur.generator_name().unwrap().to_string(), s);
            lift.push(cur.clone());
            cur = cur.base().unwrap().clone();
        }
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            end: text.chars().count(),
            field,
            vars: vars.iter().enumerate().map(|(i, v)| (v.to_string(), i)).collect(),
            gens,
        })
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn parse_all(mut self) -> Result<Poly<N>, ParseError> {
        if self.toks.is_empty() {
            return self.err("empty expression");
        }
        let p = self.expr()?;
        if self.pos < self.toks.len() {
            return match &self.toks[self.pos].1 {
                Tok::Op(')') => self.err("unbalanced ')'"),
                Tok::Op(c) => self.err(format!("unexpected '{c}'")),
                _ => self.err("missing operator (implicit multiplication is not allowed)"),
            };
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly<N>, ParseError> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly<N>, ParseError> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let at = self.here();
            let rhs = self.unary()?;
            if c == '*' {
                acc = acc.mul(&rhs);
            } else {
                let Some(k) = self.constant_of(&rhs) else {
                    return Err(ParseError::Syntax {
                        pos: at,
                        msg: "division is only allowed by a nonzero constant".into(),
                    });
                };
                let inv = self.field.inv(&k).map_err(|_| ParseError::Syntax {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
                acc = acc.scale(&inv);
            }
        }
        Ok(acc)
    }

    fn constant_of(&self, p: &Poly<N>) -> Option<Scalar> {
        match p.total_degree() {
            None => Some(self.field.zero()),
            Some(0) => Some(p.coeff(&[0; N])),
            _ => None,
        }
    }

    fn unary(&mut self) -> Result<Poly<N>, ParseError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly<N>, ParseError> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let at = self.here();
            let k = self.exponent()?.filter(|&k| k <= 10_000);
            let Some(k) = k else {
                return Err(ParseError::Syntax {
                    pos: at,
                    msg: "exponent too large".into(),
                });
            };
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }

    /// Exponents are integer literals, optionally parenthesized, read as
    /// plain integers so that they do not depend on the characteristic.
    /// `None` signals overflow.
    fn exponent(&mut self) -> Result<Option<u64>, ParseError> {
        let paren = self.peek_op() == Some('(');
        if paren {
            self.pos += 1;
        }
        let Some((_, Tok::Num(s))) = self.toks.get(self.pos).cloned() else {
            return self.err("exponent must be a non-negative integer");
        };
        self.pos += 1;
        if paren {
            if self.peek_op() != Some(')') {
                return self.err("expected ')'");
            }
            self.pos += 1;
        }
        let base = s.parse::<u64>().ok();
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let e = self.exponent()?;
            return Ok(match (base, e) {
                (Some(b), Some(e)) => u32::try_from(e).ok().and_then(|e| b.checked_pow(e)),
                _ => None,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly<N>, ParseError> {
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return self.err("unexpected end of input");
        };
        match tok {
            Tok::Num(s) => {
                self.pos += 1;
                let n: num_bigint::BigInt = s.parse().expect("digits");
                Ok(Poly::constant(self.field, self.field.from_bigint(&n)))
            }
            Tok::Ident(name) => {
                if let Some(&i) = self.vars.get(&name) {
                    self.pos += 1;
                    Ok(Poly::var(self.field, i))
                } else if let Some(g) = self.gens.get(&name) {
                    self.pos += 1;
                    Ok(Poly::constant(self.field, g.clone()))
                } else {
                    self.err(format!("unknown symbol '{name}'"))
                }
            }
            Tok::Op('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::Op(c) => self.err(format!("unexpected '{c}'")),
        }
    }
}

/// Parses a polynomial in the given variables.
pub fn parse_poly<const N: usize>(text: &str, field: &Field, vars: &[&str; N]) -> Result<Poly<N>, ParseError> {
    Parser::new(text, field, vars)?.parse_all()
}

/// Parses a homogeneous polynomial in `x, y, z`.
pub fn parse_homog(text: &str, field: &Field) -> Result<HomogPoly, ParseError> {
    let p = parse_poly(text, field, &crate::poly::XYZ)?;
    Ok(HomogPoly::new(p)?)
}

/// Parses a univariate polynomial, returning coefficients lowest degree first.
pub fn parse_univariate(text: &str, field: &Field, var: &str) -> Result<Vec<Scalar>, ParseError> {
    let p = parse_poly::<1>(text, field, &[var])?;
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut out = vec![field.zero(); deg + 1];
    for (e, c) in p.terms() {
        out[e[0] as usize] = c.clone();
    }
    crate::coeff::dense::trim(field, &mut out);
    Ok(out)
}

/// Parses a field element such as `3/4`, `-i` or `(1+t)/2`.
pub fn parse_scalar(text: &str, field: &Field) -> Result<Scalar, ParseError> {
    let p = parse_poly::<0>(text, field, &[])?;
    Ok(p.coeff(&[]))
}

/// Parses a projective point `(a:b:c)`; the parentheses are optional.
pub fn parse_point(text: &str, field: &Field) -> Result<Point, ParseError> {
    let t = text.trim();
    let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t);
    let parts: Vec<&str> = inner.split(':').collect();
    if parts.len() != 3 {
        return Err(ParseError::Syntax {
            pos: 0,
            msg: format!("point needs three ':'-separated coordinates, got '{text}'"),
        });
    }
    let coords: Vec<Scalar> = parts
        .iter()
        .map(|s| parse_scalar(s, field))
        .collect::<Result<_, _>>()?;
    if coords.iter().all(|c| field.is_zero(c)) {
        return Err(ParseError::Syntax {
            pos: 0,
            msg: "(0:0:0) is not a projective point".into(),
        });
    }
    Ok([coords[0].clone(), coords[1].clone(), coords[2].clone()])
}

/// Canonical text of a point, scaled so its last nonzero coordinate is 1.
pub fn point_text(field: &Field, p: &Point) -> String {
    let k = (0..3).rev().find(|&i| !field.is_zero(&p[i])).unwrap_or(2);
    let inv = field.inv(&p[k]).unwrap_or_else(|_| field.one());
    let parts: Vec<String> = p.iter().map(|c| field.fmt_scalar(&field.mul(c, &inv))).collect();
    format!("({})", parts.join(":"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldConfig;

    #[test]
    fn parses_sums_of_monomials() {
        let q = Field::rationals();
        let f = parse_homog("x^3+y^3+z^3", &q).unwrap();
        assert_eq!(f.degree(), 3);
        let g = parse_homog("x^2*y^2+y^2*z^2+x^2*z^2", &q).unwrap();
        assert_eq!(g.degree(), 4);
        assert_eq!(g.poly().len(), 3);
        assert_eq!(g.to_text(), "x^2*y^2+x^2*z^2+y^2*z^2");
    }

    #[test]
    fn rejects_inhomogeneous_input() {
        let q = Field::rationals();
        match parse_homog("x^2+y^3", &q) {
            Err(ParseError::NotHomogeneous { first, second }) => {
                assert_eq!((first.as_str(), second.as_str()), ("y^3", "x^2"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let q = Field::rationals();
        let e = parse_homog("x^2 + 2y", &q).unwrap_err();
        assert_eq!(e, ParseError::Syntax { pos: 7, msg: "missing operator (implicit multiplication is not allowed)".into() });
        assert!(matches!(parse_homog("x^2 +", &q), Err(ParseError::Syntax { pos: 5, .. })));
        assert!(matches!(parse_homog("x/y", &q), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_homog("x^-1", &q), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_homog("w+x", &q), Err(ParseError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_homog("", &q), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn power_is_right_associative() {
        let q = Field::rationals();
        let p = parse_poly::<1>("x^2^3", &q, &["x"]).unwrap();
        assert_eq!(p.total_degree(), Some(8));
        let p = parse_poly::<1>("-x^2", &q, &["x"]).unwrap();
        assert_eq!(p.to_text(&["x"]), "-x^2");
    }

    #[test]
    fn generators_and_points() {
        let g = FieldConfig::gaussian().build().unwrap();
        let p = parse_point("(i:1:-1)", &g).unwrap();
        assert_eq!(point_text(&g, &p), "(-i:-1:1)");
        let s = parse_scalar("(1+i)/2", &g).unwrap();
        assert_eq!(g.fmt_scalar(&s), "1/2*i+1/2");
        let f = parse_homog("(x+i*y)*(x-i*y)", &g).unwrap();
        assert_eq!(f.to_text(), "x^2+y^2");
    }
}
