//! Reduced quotients of univariate polynomials with monic denominators.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Cyclo, MathError, UniPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<RatFunc, MathError> {
        if den.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = UniPoly::gcd(&num, &den);
        let num = num.exact_div(&g)?;
        let den = den.exact_div(&g)?;
        let l = den.lead().unwrap().inv()?;
        Ok(RatFunc {
            num: num.scale(&l),
            den: den.scale(&l),
        })
    }

    pub fn from_poly(p: UniPoly) -> RatFunc {
        RatFunc {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: Cyclo) -> RatFunc {
        RatFunc::from_poly(UniPoly::constant(c))
    }

    pub fn int(v: i64) -> RatFunc {
        RatFunc::constant(Cyclo::int(v))
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(UniPoly::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(UniPoly::one())
    }

    pub fn x() -> RatFunc {
        RatFunc::from_poly(UniPoly::x())
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Cyclo> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn conductor(&self) -> u32 {
        num::integer::lcm(self.num.conductor(), self.den.conductor())
    }

    pub fn inv(&self) -> Result<RatFunc, MathError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, MathError> {
        Ok(self * &o.inv()?)
    }

    pub fn scale(&self, c: &Cyclo) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, k: i32) -> Result<RatFunc, MathError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(RatFunc {
            num: base.num.pow(k.unsigned_abs()),
            den: base.den.pow(k.unsigned_abs()),
        })
    }

    /// Evaluation; `None` at a pole.
    pub fn eval(&self, at: &Cyclo) -> Option<Cyclo> {
        let d = self.den.eval(at);
        if d.is_zero() {
            None
        } else {
            Some(&self.num.eval(at) / &d)
        }
    }

    /// self(g(x)).
    pub fn compose(&self, g: &RatFunc) -> Result<RatFunc, MathError> {
        let horner = |p: &UniPoly| -> RatFunc {
            p.coeffs().iter().rev().fold(RatFunc::zero(), |acc, c| {
                &(&acc * g) + &RatFunc::constant(c.clone())
            })
        };
        horner(&self.num).div(&horner(&self.den))
    }

    /// Numerator times denominator: same square class, polynomial form.
    pub fn square_class_representative(&self) -> UniPoly {
        &self.num * &self.den
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.fmt_var(var);
        }
        format!("({})/({})", self.num.fmt_var(var), self.den.fmt_var(var))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("x"))
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone()).unwrap();
        }
        RatFunc::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
        .unwrap()
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(&self.num * &o.num);
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
