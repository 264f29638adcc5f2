//! Lattice expressions such as `diag(1,1,2)`, `E8 + Zn(1)` or `2*Zn(3)`.
//!
//! ```text
//! Expr := Term ('+' Term)*
//! Term := [Int '*'] Atom ['^' Int]
//! Atom := Name | 'diag(' Int (',' Int)* ')' | '(' Expr ')'
//! ```
//! `+` is the orthogonal direct sum, `m*` scales the form and `^k` repeats
//! the summand `k` times.

use std::fmt;

use crate::catalog::catalog;
use crate::error::{LatticeError, Result};
use crate::gram::GramMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeExpr {
    /// Catalog entry, e.g. `E8` or `Zn(3)`.
    Named(String),
    Diag(Vec<i64>),
    Sum(Vec<LatticeExpr>),
    Scale(i64, Box<LatticeExpr>),
    Power(Box<LatticeExpr>, usize),
}

impl LatticeExpr {
    pub fn parse(text: &str) -> Result<LatticeExpr> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self) -> Result<GramMatrix> {
        match self {
            LatticeExpr::Named(name) => catalog(name),
            LatticeExpr::Diag(d) => GramMatrix::diagonal(d),
            LatticeExpr::Sum(terms) => {
                terms.iter().try_fold(GramMatrix::empty(), |acc, t| Ok(acc.direct_sum(&t.eval()?)))
            }
            LatticeExpr::Scale(m, inner) => inner.eval()?.scale(*m),
            LatticeExpr::Power(inner, k) => Ok(inner.eval()?.power(*k)),
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Named(_) | LatticeExpr::Diag(_) => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Named(n) => write!(f, "{n}"),
            LatticeExpr::Diag(d) => {
                let parts: Vec<String> = d.iter().map(ToString::to_string).collect();
                write!(f, "diag({})", parts.join(","))
            }
            LatticeExpr::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    match t {
                        LatticeExpr::Sum(_) => t.fmt_atom(f)?,
                        _ => write!(f, "{t}")?,
                    }
                }
                Ok(())
            }
            LatticeExpr::Scale(m, inner) => {
                write!(f, "{m}*")?;
                match inner.as_ref() {
                    LatticeExpr::Power(a, k) => {
                        a.fmt_atom(f)?;
                        write!(f, "^{k}")
                    }
                    other => other.fmt_atom(f),
                }
            }
            LatticeExpr::Power(inner, k) => {
                inner.fmt_atom(f)?;
                write!(f, "^{k}")
            }
        }
    }
}

/// Parse an expression and evaluate it to a Gram matrix.
pub fn parse_expr(text: &str) -> Result<GramMatrix> {
    LatticeExpr::parse(text)?.eval()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> LatticeError {
        LatticeError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        s.parse().map_err(|_| LatticeError::Parse { pos: start, msg: format!("integer `{s}` out of range") })
    }

    fn positive(&mut self, what: &str) -> Result<i64> {
        let start = self.pos;
        let v = self.int()?;
        if v < 1 {
            return Err(LatticeError::Parse { pos: start, msg: format!("{what} must be at least 1") });
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<LatticeExpr> {
        let mut terms = vec![self.term()?];
        while self.eat(b'+') {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().expect("one term") } else { LatticeExpr::Sum(terms) })
    }

    fn term(&mut self) -> Result<LatticeExpr> {
        let scale = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let m = self.positive("scale factor")?;
            self.expect(b'*')?;
            Some(m)
        } else {
            None
        };
        let mut atom = self.atom()?;
        if self.eat(b'^') {
            let k = self.positive("power")?;
            atom = LatticeExpr::Power(Box::new(atom), k as usize);
        }
        Ok(match scale {
            Some(m) => LatticeExpr::Scale(m, Box::new(atom)),
            None => atom,
        })
    }

    fn atom(&mut self) -> Result<LatticeExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string();
                if ident == "diag" {
                    self.expect(b'(')?;
                    let mut d = vec![self.positive("diagonal entry")?];
                    while self.eat(b',') {
                        d.push(self.positive("diagonal entry")?);
                    }
                    self.expect(b')')?;
                    return Ok(LatticeExpr::Diag(d));
                }
                let name = if self.eat(b'(') {
                    let k = self.int()?;
                    self.expect(b')')?;
                    format!("{ident}({k})")
                } else {
                    ident
                };
                // resolve now so unknown names fail at parse time
                catalog_known(&name).map_err(|_| LatticeError::UnknownName(name.clone()))?;
                Ok(LatticeExpr::Named(name))
            }
            _ => Err(self.error("expected a lattice name, `diag(` or `(`")),
        }
    }
}

fn catalog_known(name: &str) -> Result<()> {
    // avoid building the Leech lattice just to validate the name
    match name {
        "Leech" | "Lambda23" => Ok(()),
        _ => catalog(name).map(|_| ()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn paper_expressions() {
        assert_eq!(parse_expr("diag(1,1,2)").unwrap(), GramMatrix::diagonal(&[1, 1, 2]).unwrap());
        let e8z = parse_expr("E8 + Zn(1)").unwrap();
        assert_eq!(e8z, catalog("E8").unwrap().direct_sum(&GramMatrix::identity(1)));
        assert_eq!(parse_expr("2*Zn(3)").unwrap(), GramMatrix::diagonal(&[2, 2, 2]).unwrap());
        assert_eq!(parse_expr("Zn(1)^3").unwrap(), GramMatrix::identity(3));
        assert_eq!(parse_expr(" ( diag(1) + diag(2) ) ^ 2 ").unwrap(), GramMatrix::diagonal(&[1, 2, 1, 2]).unwrap());
        assert_eq!(parse_expr("2*diag(1)^2").unwrap(), GramMatrix::diagonal(&[2, 2]).unwrap());
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(
            LatticeExpr::parse("diag(1,,2)"),
            Err(LatticeError::Parse { pos: 7, msg: "expected an integer".into() })
        );
        assert!(matches!(LatticeExpr::parse("E8 +"), Err(LatticeError::Parse { pos: 4, .. })));
        assert!(matches!(LatticeExpr::parse("E8 E8"), Err(LatticeError::Parse { pos: 3, .. })));
        assert!(matches!(LatticeExpr::parse("0*E8"), Err(LatticeError::Parse { pos: 0, .. })));
        assert!(matches!(LatticeExpr::parse("diag(0)"), Err(LatticeError::Parse { .. })));
        assert!(matches!(LatticeExpr::parse("E8^0"), Err(LatticeError::Parse { .. })));
        assert!(matches!(LatticeExpr::parse("(E8"), Err(LatticeError::Parse { .. })));
        assert_eq!(LatticeExpr::parse("F4"), Err(LatticeError::UnknownName("F4".into())));
        assert_eq!(LatticeExpr::parse("Zn(0)"), Err(LatticeError::UnknownName("Zn(0)".into())));
    }

    #[test]
    fn printer_output() {
        let e = LatticeExpr::parse("2*(E8 + diag(1,2))^3 + Lambda23").unwrap();
        assert_eq!(e.to_string(), "2*(E8 + diag(1,2))^3 + Lambda23");
    }

    fn atom() -> impl Strategy<Value = LatticeExpr> {
        prop_oneof![
            prop::collection::vec(1i64..5, 1..4).prop_map(LatticeExpr::Diag),
            (1usize..4).prop_map(|k| LatticeExpr::Named(format!("Zn({k})"))),
            (1usize..4).prop_map(|k| LatticeExpr::Named(format!("An({k})"))),
            Just(LatticeExpr::Named("E6".into())),
        ]
    }

    fn expr() -> impl Strategy<Value = LatticeExpr> {
        atom().prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(LatticeExpr::Sum),
                (1i64..4, inner.clone()).prop_map(|(m, e)| LatticeExpr::Scale(m, Box::new(e))),
                (inner, 1usize..3).prop_map(|(e, k)| LatticeExpr::Power(Box::new(e), k)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(e in expr()) {
            let printed = e.to_string();
            let reparsed = LatticeExpr::parse(&printed).unwrap();
            prop_assert_eq!(reparsed.eval().unwrap(), e.eval().unwrap());
        }
    }
}
