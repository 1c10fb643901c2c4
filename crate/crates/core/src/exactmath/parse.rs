//! Recursive-descent parser for the shared polynomial expression grammar:
//! integers, `p/q`, `zeta(N)`, `zeta(N)^k`, roster variables, `+ - * ^`,
//! parentheses, and juxtaposition as multiplication.

use std::fmt;

use num::BigInt;
use thiserror::Error;

use super::{Cyclo, MultiPoly, Roster, Q};

#[derive(Debug, Clone, PartialEq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {}: {}",
            self.offset, self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Zeta,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let ch = b[i];
        if ch.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match ch {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().unwrap()), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                if text[i..].starts_with("zeta") {
                    i += 4;
                    out.push((Tok::Zeta, start));
                    continue;
                }
                i += 1;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    message: format!("unexpected character '{}'", ch as char),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    roster: &'a Roster,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let n = self.roster.len();
        let mut acc = match self.peek() {
            Tok::Plus => {
                self.bump();
                self.term()?
            }
            Tok::Minus => {
                self.bump();
                -&self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        debug_assert_eq!(acc.nvars(), n);
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Int(_) | Tok::Ident(_) | Tok::Zeta | Tok::LParen
        )
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let d = self.unary()?;
                    let c = d.as_constant().filter(|c| !c.is_zero()).ok_or(ParseError {
                        offset: at,
                        message: "divisor must be a nonzero constant".into(),
                    })?;
                    acc = acc.scale(&c.inv().unwrap());
                }
                _ if self.starts_atom() => {
                    acc = &acc * &self.power()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        let Tok::Int(k) = self.bump() else {
            return Err(ParseError {
                offset: at,
                message: "expected integer exponent".into(),
            });
        };
        let k: u32 = u32::try_from(&k).map_err(|_| ParseError {
            offset: at,
            message: "exponent too large".into(),
        })?;
        if !neg {
            return Ok(base.pow(k));
        }
        match base.as_constant() {
            Some(c) if !c.is_zero() => Ok(MultiPoly::constant(
                self.roster.len(),
                c.pow(-(k as i64)).unwrap(),
            )),
            _ => Err(ParseError {
                offset: at,
                message: "negative exponent needs a nonzero constant base".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        let n = self.roster.len();
        let at = self.offset();
        match self.bump() {
            Tok::Int(v) => Ok(MultiPoly::constant(n, Cyclo::rational(Q::from_integer(v)))),
            Tok::Ident(name) => match self.roster.index_of(&name) {
                Some(i) => Ok(MultiPoly::var(n, i)),
                None => Err(ParseError {
                    offset: at,
                    message: format!("unknown variable '{name}'"),
                }),
            },
            Tok::Zeta => {
                self.expect(Tok::LParen, "'(' after zeta")?;
                let at = self.offset();
                let Tok::Int(k) = self.bump() else {
                    return Err(ParseError {
                        offset: at,
                        message: "expected conductor".into(),
                    });
                };
                let k = u32::try_from(&k)
                    .ok()
                    .filter(|&k| (1..=10_000).contains(&k))
                    .ok_or(ParseError {
                        offset: at,
                        message: "conductor out of range".into(),
                    })?;
                self.expect(Tok::RParen, "')'")?;
                Ok(MultiPoly::constant(n, Cyclo::zeta(k)))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Eof => Err(ParseError {
                offset: at,
                message: "unexpected end of input".into(),
            }),
            t => Err(ParseError {
                offset: at,
                message: format!("unexpected token {t:?}"),
            }),
        }
    }
}

/// Parses over an explicit variable roster.
pub fn parse_with(text: &str, roster: &Roster) -> Result<MultiPoly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        roster,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Parses over the standard roster {w,x,y,z,u,v,x1..x5,y1,y2,t}.
pub fn parse_expression(text: &str) -> Result<MultiPoly, ParseError> {
    parse_with(text, &Roster::standard())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fermat_cubic() {
        let r = Roster::standard();
        let f = parse_expression("w^3 + x^3 + y^3 + z^3").unwrap();
        assert_eq!(f.num_terms(), 4);
        assert_eq!(f.total_degree(), 3);
        assert_eq!(f.fmt_with(&r), "w^3 + x^3 + y^3 + z^3");
    }

    #[test]
    fn zeta_power_times_monomial() {
        let f = parse_expression("zeta(3)^2 * x*y*z").unwrap();
        let (_, c) = f.leading_term().unwrap();
        assert_eq!(c, &Cyclo::zeta_pow(3, 2));
        assert_eq!(f.total_degree(), 3);
    }

    #[test]
    fn syntax_error_offset() {
        let e = parse_expression("x^2 +").unwrap_err();
        assert_eq!(e.offset, 5);
        assert!(e.to_string().contains("offset 5"));
        let e = parse_expression("q + 1").unwrap_err();
        assert!(e.message.contains("unknown variable"));
        assert!(parse_expression("x / y").is_err());
        assert!(parse_expression("(x + 1").is_err());
    }

    #[test]
    fn rationals_and_juxtaposition() {
        let r = Roster::new(&["x", "y", "z"]);
        let a = parse_with("3/2 x(y - z)", &r).unwrap();
        let b = parse_with("3*x*y/2 - 3*x*z/2", &r).unwrap();
        assert_eq!(a, b);
        let c = parse_with("xyz - x y z", &r).unwrap();
        assert!(c.is_zero());
        let d = parse_with("zeta(4)^-1 + zeta(4)", &r).unwrap();
        assert!(d.is_zero());
        assert_eq!(
            parse_with("  -  x ^ 2 ", &r).unwrap(),
            -&MultiPoly::var(3, 0).pow(2)
        );
    }

    #[test]
    fn display_round_trips() {
        let r = Roster::standard();
        for s in [
            "(1 + zeta(4))*x^2 - 3/7*y*t",
            "-zeta(8)^3*x1*y2 + 2",
            "zeta(9)^5 - zeta(9)",
        ] {
            let p = parse_expression(s).unwrap();
            let q = parse_expression(&p.fmt_with(&r)).unwrap();
            assert_eq!(p, q, "{s}");
        }
    }
}
