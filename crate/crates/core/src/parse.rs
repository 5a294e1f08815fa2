//! Text form of [`EntireExpr`]: tokenizer, recursive-descent parser, and
//! the canonical printer behind its `Display` impl.
//!
//! Grammar (whitespace between tokens is free):
//!
//! ```text
//! expr   := term { "+" term }
//! term   := factor { "*" factor }
//! factor := base { "o" base }              composition, left-associative
//! base   := "z" [ "^" uint ]
//!         | number                          nonnegative decimal
//!         | "exp" [ "[" uint "]" ] "(" expr ")"
//!         | "(" expr ")"
//! ```
//!
//! Numbers accept an optional `e`/`E` exponent. A leading minus sign is a
//! dedicated error ([`Error::NegativeCoefficient`]) rather than a generic
//! syntax failure, because nonnegative coefficients are what make maximum
//! moduli exactly evaluable. The parser builds `Product` nodes with `Const`
//! children for forms like `2 * z^3`; the printer renders the equivalent
//! `Scale` node with the same text, so printed output always reparses to an
//! equal function.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::funfam::EntireExpr;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Plus,
    Star,
    Caret,
    Comp,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Z,
    Exp,
    Minus,
    Number(f64),
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    pos: usize,
}

fn tokenize(src: &str) -> Result<Vec<Spanned>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let pos = i;
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => out.push(Spanned { tok: Tok::Plus, pos }),
            b'*' => out.push(Spanned { tok: Tok::Star, pos }),
            b'^' => out.push(Spanned { tok: Tok::Caret, pos }),
            b'(' => out.push(Spanned { tok: Tok::LParen, pos }),
            b')' => out.push(Spanned { tok: Tok::RParen, pos }),
            b'[' => out.push(Spanned { tok: Tok::LBracket, pos }),
            b']' => out.push(Spanned { tok: Tok::RBracket, pos }),
            b'-' => out.push(Spanned { tok: Tok::Minus, pos }),
            b'0'..=b'9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'.' {
                    j += 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                // exponent only when a digit actually follows
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let text = &src[i..j];
                let value = text.parse::<f64>().map_err(|_| Error::Syntax {
                    pos,
                    msg: format!("bad number literal '{text}'"),
                })?;
                out.push(Spanned {
                    tok: Tok::Number(value),
                    pos,
                });
                i = j;
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_alphabetic() {
                    j += 1;
                }
                let name = &src[i..j];
                let tok = match name {
                    "z" => Tok::Z,
                    "o" => Tok::Comp,
                    "exp" => Tok::Exp,
                    _ => {
                        return Err(Error::Syntax {
                            pos,
                            msg: format!("unknown name '{name}'"),
                        })
                    }
                };
                out.push(Spanned { tok, pos });
                i = j;
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos,
                    msg: format!("unexpected character '{}'", other as char),
                })
            }
        }
        i += 1;
    }
    out.push(Spanned {
        tok: Tok::End,
        pos: bytes.len(),
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Spanned {
        let s = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        s
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let s = self.bump();
        if s.tok == want {
            Ok(())
        } else {
            Err(Error::Syntax {
                pos: s.pos,
                msg: format!("expected {what}"),
            })
        }
    }

    fn uint(&mut self, what: &str) -> Result<u32> {
        let s = self.bump();
        if let Tok::Number(v) = s.tok {
            if v.fract() == 0.0 && (0.0..=f64::from(u32::MAX)).contains(&v) {
                return Ok(v as u32);
            }
        }
        Err(Error::Syntax {
            pos: s.pos,
            msg: format!("expected {what} (a nonnegative integer)"),
        })
    }

    fn expr(&mut self) -> Result<EntireExpr> {
        let mut terms = vec![self.term()?];
        while self.peek().tok == Tok::Plus {
            self.bump();
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            EntireExpr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<EntireExpr> {
        let mut factors = vec![self.factor()?];
        while self.peek().tok == Tok::Star {
            self.bump();
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            EntireExpr::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<EntireExpr> {
        let mut acc = self.base()?;
        while self.peek().tok == Tok::Comp {
            self.bump();
            acc = EntireExpr::compose(acc, self.base()?);
        }
        Ok(acc)
    }

    fn base(&mut self) -> Result<EntireExpr> {
        let s = self.bump();
        match s.tok {
            Tok::Z => {
                if self.peek().tok == Tok::Caret {
                    self.bump();
                    let n = self.uint("monomial degree after '^'")?;
                    Ok(EntireExpr::Monomial(n))
                } else {
                    Ok(EntireExpr::Var)
                }
            }
            Tok::Number(v) => Ok(EntireExpr::Const(v)),
            Tok::Exp => {
                let height = if self.peek().tok == Tok::LBracket {
                    self.bump();
                    let k = self.uint("exponential height inside '[ ]'")?;
                    self.expect(Tok::RBracket, "']'")?;
                    k
                } else {
                    1
                };
                self.expect(Tok::LParen, "'(' after exp")?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(EntireExpr::ExpIter(height, Box::new(inner)))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Minus => {
                if matches!(self.peek().tok, Tok::Number(_)) {
                    Err(Error::NegativeCoefficient { pos: s.pos })
                } else {
                    Err(Error::Syntax {
                        pos: s.pos,
                        msg: "unexpected '-'".into(),
                    })
                }
            }
            _ => Err(Error::Syntax {
                pos: s.pos,
                msg: "expected 'z', a number, 'exp', or '('".into(),
            }),
        }
    }
}

/// Parse the text form of an expression. Structural constraints (positive
/// heights/degrees, non-constant overall) are checked by
/// [`crate::funfam::GrowthObject::from_expr`], not here.
pub fn parse(src: &str) -> Result<EntireExpr> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    let s = p.bump();
    if s.tok != Tok::End {
        return Err(Error::Syntax {
            pos: s.pos,
            msg: "trailing input after expression".into(),
        });
    }
    Ok(e)
}

impl FromStr for EntireExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

// Printer precedence: Sum 0, Product 1, Compose 2, atoms 3.
fn prec(e: &EntireExpr) -> u8 {
    match e {
        EntireExpr::Sum(_) => 0,
        EntireExpr::Product(_) | EntireExpr::Scale(..) => 1,
        EntireExpr::Compose(..) => 2,
        _ => 3,
    }
}

fn write_at(e: &EntireExpr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let needs_parens = prec(e) < min;
    if needs_parens {
        f.write_str("(")?;
    }
    match e {
        EntireExpr::Var => f.write_str("z")?,
        EntireExpr::Const(c) => write!(f, "{c}")?,
        EntireExpr::Monomial(n) => write!(f, "z^{n}")?,
        EntireExpr::Sum(children) => {
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    f.write_str(" + ")?;
                }
                write_at(c, 1, f)?;
            }
        }
        EntireExpr::Product(children) => {
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    f.write_str(" * ")?;
                }
                write_at(c, 2, f)?;
            }
        }
        EntireExpr::Scale(c, inner) => {
            write!(f, "{c} * ")?;
            write_at(inner, 2, f)?;
        }
        EntireExpr::Compose(left, right) => {
            write_at(left, 2, f)?;
            f.write_str(" o ")?;
            // composition is left-associative; parenthesize a right chain
            write_at(right, 3, f)?;
        }
        EntireExpr::ExpIter(k, inner) => {
            if *k == 1 {
                f.write_str("exp(")?;
            } else {
                write!(f, "exp[{k}](")?;
            }
            write_at(inner, 0, f)?;
            f.write_str(")")?;
        }
    }
    if needs_parens {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for EntireExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(src: &str) -> String {
        parse(src).unwrap().to_string()
    }

    #[test]
    fn atoms_and_towers() {
        assert_eq!(parse("z").unwrap(), EntireExpr::Var);
        assert_eq!(parse("z^4").unwrap(), EntireExpr::Monomial(4));
        assert_eq!(parse("2.5").unwrap(), EntireExpr::Const(2.5));
        assert_eq!(
            parse("exp(z)").unwrap(),
            EntireExpr::ExpIter(1, Box::new(EntireExpr::Var))
        );
        assert_eq!(
            parse("exp[3](z^2)").unwrap(),
            EntireExpr::ExpIter(3, Box::new(EntireExpr::Monomial(2)))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // product binds tighter than sum, composition tighter than product
        let e = parse("z^2 + 2 * z o z^3").unwrap();
        assert_eq!(
            e,
            EntireExpr::Sum(vec![
                EntireExpr::Monomial(2),
                EntireExpr::Product(vec![
                    EntireExpr::Const(2.0),
                    EntireExpr::compose(EntireExpr::Var, EntireExpr::Monomial(3)),
                ]),
            ])
        );
        // left-associative composition
        let c = parse("exp(z) o z^2 o z^3").unwrap();
        assert_eq!(
            c,
            EntireExpr::compose(
                EntireExpr::compose(
                    EntireExpr::ExpIter(1, Box::new(EntireExpr::Var)),
                    EntireExpr::Monomial(2)
                ),
                EntireExpr::Monomial(3)
            )
        );
    }

    #[test]
    fn printed_form_reparses_to_the_same_tree() {
        for src in [
            "z",
            "z^7",
            "exp(z^2)",
            "exp[2](z^3) o exp(z)",
            "z^2 + 2 * z^5 + exp(z)",
            "(z + z^2) o exp(z)",
            "exp(z) o (z^2 o z^3)",
            "2 * (z + 1)",
            "exp(z + exp(z))",
            "1e3 * z",
        ] {
            let once = parse(src).unwrap();
            let printed = once.to_string();
            let twice = parse(&printed).unwrap();
            assert_eq!(once, twice, "source '{src}' printed as '{printed}'");
        }
    }

    #[test]
    fn scale_prints_as_product_text() {
        let e = EntireExpr::Scale(3.0, Box::new(EntireExpr::Monomial(2)));
        assert_eq!(e.to_string(), "3 * z^2");
        let re = parse(&e.to_string()).unwrap();
        assert_eq!(
            re,
            EntireExpr::Product(vec![EntireExpr::Const(3.0), EntireExpr::Monomial(2)])
        );
    }

    #[test]
    fn error_positions() {
        match parse("-3 * z") {
            Err(Error::NegativeCoefficient { pos }) => assert_eq!(pos, 0),
            other => panic!("expected NegativeCoefficient, got {other:?}"),
        }
        match parse("z + ") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected Syntax, got {other:?}"),
        }
        match parse("z @ z") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected Syntax, got {other:?}"),
        }
        match parse("w") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("expected Syntax, got {other:?}"),
        }
        assert!(parse("z^2.5").is_err());
        assert!(parse("z z").is_err());
    }

    #[test]
    fn exponent_lexing_does_not_eat_names() {
        // '2exp' must lex as the number 2 followed by 'exp'
        let e = parse("2 * exp(z)").unwrap();
        let tight = parse("2*exp(z)").unwrap();
        assert_eq!(e, tight);
        assert_eq!(parse("1e2").unwrap(), EntireExpr::Const(100.0));
        assert_eq!(parse("1E-2").unwrap(), EntireExpr::Const(0.01));
    }

    #[test]
    fn roundtrip_keeps_text_stable() {
        // a second print after reparse is identical text
        for src in ["exp[2](z^3) o exp(z)", "z^2 + 3 * z", "2 * (z + 1) o z^2"] {
            let printed = roundtrip(src);
            assert_eq!(printed, roundtrip(&printed));
        }
    }
}
