//! Dense univariate polynomials over Q(ζ_N) in the variable x.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Cyclo, MathError};

/// Coefficients lowest degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    c: Vec<Cyclo>,
}

/// `p = constant · radical · cofactor_root²`, radical monic square-free.
#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreePart {
    pub radical: UniPoly,
    pub cofactor_is_square: bool,
    pub constant: Cyclo,
    pub cofactor_root: UniPoly,
}

impl UniPoly {
    pub fn from_coeffs(mut c: Vec<Cyclo>) -> UniPoly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(c.iter().map(|&v| Cyclo::int(v)).collect())
    }

    pub fn zero() -> UniPoly {
        UniPoly { c: Vec::new() }
    }

    pub fn one() -> UniPoly {
        UniPoly::constant(Cyclo::one())
    }

    pub fn constant(c: Cyclo) -> UniPoly {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn x() -> UniPoly {
        UniPoly::monomial(Cyclo::one(), 1)
    }

    pub fn monomial(c: Cyclo, k: usize) -> UniPoly {
        let mut v = vec![Cyclo::zero(); k + 1];
        v[k] = c;
        UniPoly::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[Cyclo] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Cyclo {
        self.c.get(k).cloned().unwrap_or_else(Cyclo::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Cyclo> {
        self.c.last()
    }

    /// Least common multiple of the coefficient conductors.
    pub fn conductor(&self) -> u32 {
        self.c
            .iter()
            .fold(1, |acc, x| num::integer::lcm(acc, x.conductor()))
    }

    pub fn scale(&self, k: &Cyclo) -> UniPoly {
        UniPoly::from_coeffs(self.c.iter().map(|x| x * k).collect())
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            None => UniPoly::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero lead")),
        }
    }

    pub fn divrem(&self, b: &UniPoly) -> Result<(UniPoly, UniPoly), MathError> {
        let db = b.degree().ok_or(MathError::DivisionByZero)?;
        let mut r = self.c.clone();
        if r.len() <= db {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let linv = b.lead().unwrap().inv()?;
        let mut q = vec![Cyclo::zero(); r.len() - db];
        while r.len() > db {
            let k = r.len() - 1 - db;
            let t = r.last().unwrap() * &linv;
            if !t.is_zero() {
                for (j, bj) in b.c.iter().enumerate() {
                    r[k + j] = &r[k + j] - &(&t * bj);
                }
            }
            q[k] = t;
            r.pop();
        }
        Ok((UniPoly::from_coeffs(q), UniPoly::from_coeffs(r)))
    }

    pub fn exact_div(&self, b: &UniPoly) -> Result<UniPoly, MathError> {
        let (q, r) = self.divrem(b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(MathError::InexactDivision)
        }
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other
            .divrem(self)
            .map(|(_, r)| r.is_zero())
            .unwrap_or(false)
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (mut x, mut y) = (a.monic(), b.monic());
        while !y.is_zero() {
            let (_, r) = x.divrem(&y).expect("nonzero divisor");
            // monic remainders keep the rational coefficients small
            x = std::mem::replace(&mut y, r.monic());
        }
        x.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, x)| x * &Cyclo::int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, at: &Cyclo) -> Cyclo {
        self.c
            .iter()
            .rev()
            .fold(Cyclo::zero(), |acc, x| &(&acc * at) + x)
    }

    /// p(q(x)).
    pub fn compose(&self, q: &UniPoly) -> UniPoly {
        self.c.iter().rev().fold(UniPoly::zero(), |acc, x| {
            &(&acc * q) + &UniPoly::constant(x.clone())
        })
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        (0..k).fold(UniPoly::one(), |acc, _| &acc * self)
    }

    /// Monic square-free factors f_1, f_2, … with p = lead · Π f_i^i (Yun).
    pub fn squarefree_decomposition(&self) -> Vec<UniPoly> {
        let p = self.monic();
        if p.is_constant() {
            return Vec::new();
        }
        let dp = p.derivative();
        let a0 = UniPoly::gcd(&p, &dp);
        let mut b = p.exact_div(&a0).expect("gcd divides");
        let c = dp.exact_div(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        while !b.is_constant() {
            let a = UniPoly::gcd(&b, &d);
            let nb = b.exact_div(&a).expect("gcd divides");
            let nc = d.exact_div(&a).expect("gcd divides");
            d = &nc - &nb.derivative();
            b = nb;
            out.push(a);
        }
        out
    }

    /// Splits off the odd-multiplicity part without factoring.
    pub fn squarefree_part(&self) -> Result<SquarefreePart, MathError> {
        let constant = self
            .lead()
            .ok_or(MathError::ZeroInput("square-free part of zero"))?
            .clone();
        let mut radical = UniPoly::one();
        let mut root = UniPoly::one();
        for (i, f) in self.squarefree_decomposition().iter().enumerate() {
            let mult = i as u32 + 1;
            if mult % 2 == 1 {
                radical = &radical * f;
            }
            root = &root * &f.pow(mult / 2);
        }
        let rebuilt = &(&radical * &(&root * &root)).scale(&constant) - self;
        Ok(SquarefreePart {
            radical,
            cofactor_is_square: rebuilt.is_zero(),
            constant,
            cofactor_root: root,
        })
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, x) in self.c.iter().enumerate().rev() {
            if x.is_zero() {
                continue;
            }
            let s = x.to_string();
            let (neg, mag) = if let Some(rest) = s.strip_prefix('-') {
                if rest.contains(" + ") || rest.contains(" - ") {
                    (false, s.clone())
                } else {
                    (true, rest.to_string())
                }
            } else {
                (false, s.clone())
            };
            let compound = mag.contains(" + ") || mag.contains(" - ");
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let body = if k == 0 {
                if compound {
                    format!("({mag})")
                } else {
                    mag
                }
            } else if mag == "1" {
                mono
            } else if compound {
                format!("({mag})*{mono}")
            } else {
                format!("{mag}*{mono}")
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("x"))
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::from_coeffs((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::from_coeffs((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Cyclo::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.c.iter().map(|x| -x).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(
            UniPoly::gcd(&p(&[-1, 0, 0, 0, 1]), &p(&[-1, 0, 1])),
            p(&[-1, 0, 1])
        );
        assert_eq!(UniPoly::gcd(&p(&[0, 1]), &p(&[1, 1])), UniPoly::one());
        let x_minus_i = UniPoly::from_coeffs(vec![-Cyclo::zeta(4), Cyclo::one()]);
        assert_eq!(UniPoly::gcd(&p(&[1, 0, 1]), &x_minus_i), x_minus_i);
        assert!(UniPoly::gcd(&UniPoly::zero(), &UniPoly::zero()).is_zero());
        assert_eq!(
            UniPoly::gcd(&UniPoly::zero(), &p(&[2, 4])),
            p(&[1, 2]).monic()
        );
    }

    #[test]
    fn squarefree_examples() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let s = p(&[2, -3, 0, 1]).squarefree_part().unwrap();
        assert_eq!(s.radical, p(&[2, 1]));
        assert_eq!(s.constant, Cyclo::one());
        assert!(s.cofactor_is_square);
        let s = p(&[0, 0, 1]).squarefree_part().unwrap();
        assert_eq!(s.radical, UniPoly::one());
        let s = p(&[-1, 0, 0, 0, 1]).squarefree_part().unwrap();
        assert_eq!(s.radical, p(&[-1, 0, 0, 0, 1]));
        assert!(UniPoly::zero().squarefree_part().is_err());
        let s = p(&[-3]).squarefree_part().unwrap();
        assert_eq!((s.radical, s.constant), (UniPoly::one(), Cyclo::int(-3)));
    }

    #[test]
    fn higher_multiplicities() {
        // 5 x^3 (x-1)^4 (x+1)^5
        let f = &(&p(&[0, 0, 0, 5]) * &p(&[-1, 1]).pow(4)) * &p(&[1, 1]).pow(5);
        let s = f.squarefree_part().unwrap();
        assert_eq!(s.radical, &p(&[0, 1]) * &p(&[1, 1]));
        assert_eq!(s.constant, Cyclo::int(5));
        assert!(s.cofactor_is_square);
        assert_eq!(f.squarefree_decomposition().len(), 5);
    }

    #[test]
    fn compose_eval_display() {
        let f = p(&[-1, 0, 1]);
        let g = p(&[1, 1]);
        assert_eq!(f.compose(&g), p(&[0, 2, 1]));
        assert_eq!(f.eval(&Cyclo::int(3)), Cyclo::int(8));
        assert_eq!(f.to_string(), "x^2 - 1");
        let h = UniPoly::from_coeffs(vec![Cyclo::zeta(4), -&(&Cyclo::one() + &Cyclo::zeta(4))]);
        assert_eq!(h.to_string(), "(-1 - zeta(4))*x + zeta(4)");
        assert_eq!(f.derivative(), p(&[0, 2]));
    }
}
