//! Elements of the cyclotomic fields Q(ζ_N), stored as residues modulo Φ_N.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use super::MathError;

pub type Q = BigRational;

fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclotomic index must be positive");
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // t^n - 1 divided by every Φ_d with d a proper divisor of n.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let f = cyclotomic_polynomial(d);
            num = int_exact_div_monic(&num, &f);
        }
    }
    let arc = Arc::new(num);
    phi_cache().lock().unwrap().insert(n, arc.clone());
    arc
}

fn int_exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let da = r.len() - 1;
    let mut q = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = r[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

/// Euler's totient, read off as deg Φ_n.
pub fn euler_phi(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

// ---- dense polynomials over Q, lowest degree first ----

fn qtrim(p: &mut Vec<Q>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn qmul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn qsub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out: Vec<Q> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Q::zero);
            let y = b.get(i).cloned().unwrap_or_else(Q::zero);
            x - y
        })
        .collect();
    qtrim(&mut out);
    out
}

fn qdivrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = a.to_vec();
    qtrim(&mut r);
    let mut b = b.to_vec();
    qtrim(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = b.last().unwrap().clone();
    let db = b.len() - 1;
    let mut q = vec![Q::zero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / &lb;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
        r.pop();
        qtrim(&mut r);
    }
    qtrim(&mut q);
    (q, r)
}

/// Inverse of a modulo m, when gcd(a, m) is constant.
fn qinverse_mod(a: &[Q], m: &[Q]) -> Option<Vec<Q>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    qtrim(&mut r1);
    let (mut s0, mut s1): (Vec<Q>, Vec<Q>) = (Vec::new(), vec![Q::one()]);
    while !r1.is_empty() {
        let (q, r) = qdivrem(&r0, &r1);
        let s = qsub(&s0, &qmul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = r0[0].recip();
    Some(s0.into_iter().map(|c| c * &inv).collect())
}

fn reduce_mod_phi(n: u32, mut p: Vec<Q>) -> Vec<Q> {
    let phi = cyclotomic_polynomial(n);
    let d = phi.len() - 1;
    qtrim(&mut p);
    while p.len() > d {
        let k = p.len() - 1 - d;
        let c = p.pop().unwrap();
        if !c.is_zero() {
            for j in 0..d {
                p[k + j] -= &c * Q::from_integer(phi[j].clone());
            }
        }
        qtrim(&mut p);
    }
    p.resize(d, Q::zero());
    p
}

/// Element of Q(ζ_N) in the power basis 1, ζ, …, ζ^{φ(N)-1}.
#[derive(Clone, Debug)]
pub struct Cyclo {
    n: u32,
    c: Vec<Q>,
}

/// Outcome of an exact square test on a constant.
#[derive(Clone, Debug, PartialEq)]
pub enum SquareTest {
    Yes(Cyclo),
    No,
    Indeterminate,
}

impl Cyclo {
    /// Residue of `Σ coeffs[k]·ζ_N^k` modulo Φ_N.
    pub fn cyclo_reduce(n: u32, coeffs: Vec<Q>) -> Cyclo {
        Cyclo {
            n,
            c: reduce_mod_phi(n, coeffs),
        }
    }

    pub fn rational(q: Q) -> Cyclo {
        Cyclo { n: 1, c: vec![q] }
    }

    pub fn int(v: i64) -> Cyclo {
        Cyclo::rational(Q::from_integer(BigInt::from(v)))
    }

    pub fn frac(p: i64, q: i64) -> Cyclo {
        Cyclo::rational(Q::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Cyclo {
        Cyclo::int(0)
    }

    pub fn one() -> Cyclo {
        Cyclo::int(1)
    }

    /// ζ_n^k for any integer k.
    pub fn zeta_pow(n: u32, k: i64) -> Cyclo {
        let e = k.rem_euclid(n as i64) as usize;
        let mut p = vec![Q::zero(); e + 1];
        p[e] = Q::one();
        Cyclo::cyclo_reduce(n, p)
    }

    pub fn zeta(n: u32) -> Cyclo {
        Cyclo::zeta_pow(n, 1)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<Q> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            self.demote(1).map(|e| e.c[0].clone())
        }
    }

    /// Image of this element in Q(ζ_m); `m` must be a multiple of the conductor.
    pub fn promote(&self, m: u32) -> Cyclo {
        assert!(
            m % self.n == 0,
            "conductor {} does not divide {}",
            self.n,
            m
        );
        if m == self.n {
            return self.clone();
        }
        let step = (m / self.n) as usize;
        let mut p = vec![Q::zero(); step * self.c.len().max(1)];
        for (k, x) in self.c.iter().enumerate() {
            p[k * step] = x.clone();
        }
        Cyclo::cyclo_reduce(m, p)
    }

    /// Rewrites the element over Q(ζ_d) when it lies in that subfield.
    pub fn demote(&self, d: u32) -> Option<Cyclo> {
        if self.n % d != 0 {
            return None;
        }
        if d == self.n {
            return Some(self.clone());
        }
        let cols: Vec<Vec<Q>> = (0..euler_phi(d))
            .map(|k| Cyclo::zeta_pow(d, k as i64).promote(self.n).c)
            .collect();
        let sol = solve_columns(&cols, &self.c)?;
        Some(Cyclo { n: d, c: sol })
    }

    /// Representation over the smallest cyclotomic subfield containing the element.
    pub fn simplify(&self) -> Cyclo {
        if self.n <= 2 {
            return Cyclo::rational(self.c[0].clone());
        }
        for d in 1..self.n {
            if self.n % d == 0 && (d == 1 || d % 4 != 2) {
                if let Some(e) = self.demote(d) {
                    return e;
                }
            }
        }
        self.clone()
    }

    fn lift_pair(&self, other: &Cyclo) -> (Cyclo, Cyclo) {
        if self.n == other.n {
            (self.clone(), other.clone())
        } else {
            let l = lcm(self.n, other.n);
            (self.promote(l), other.promote(l))
        }
    }

    pub fn inv(&self) -> Result<Cyclo, MathError> {
        if self.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        let phi: Vec<Q> = cyclotomic_polynomial(self.n)
            .iter()
            .map(|v| Q::from_integer(v.clone()))
            .collect();
        let u = qinverse_mod(&self.c, &phi).ok_or(MathError::DivisionByZero)?;
        Ok(Cyclo::cyclo_reduce(self.n, u))
    }

    pub fn pow(&self, k: i64) -> Result<Cyclo, MathError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Cyclo::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, q: &Q) -> Cyclo {
        Cyclo {
            n: self.n,
            c: self.c.iter().map(|x| x * q).collect(),
        }
    }

    /// Least k in 1..=cap with self^k = 1.
    pub fn root_of_unity_order(&self, cap: u32) -> Option<u32> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_one() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    /// Exact square test in the element's own field Q(ζ_N).
    pub fn is_square_constant(&self) -> Result<SquareTest, MathError> {
        self.is_square_in(self.n)
    }

    /// Exact square test in Q(ζ_field). Decisive over Q, Q(i) and Q(ω).
    pub fn is_square_in(&self, field: u32) -> Result<SquareTest, MathError> {
        if self.is_zero() {
            return Err(MathError::ZeroInput("square test of zero"));
        }
        let lifted_field = lcm(field, self.n);
        if lifted_field != field {
            return Err(MathError::FieldMismatch {
                element: self.n,
                field,
            });
        }
        let x = self.promote(field);
        match field {
            1 | 2 => Ok(match rational_sqrt(&x.c[0]) {
                Some(r) => SquareTest::Yes(Cyclo::rational(r)),
                None => SquareTest::No,
            }),
            4 => Ok(gaussian_sqrt(&x).map_or(SquareTest::No, SquareTest::Yes)),
            3 | 6 => {
                let e = x.demote(3).expect("Q(ζ6) equals Q(ζ3)");
                Ok(eisenstein_sqrt(&e).map_or(SquareTest::No, SquareTest::Yes))
            }
            _ => {
                if let Some(r) = x.as_rational().and_then(|q| rational_sqrt(&q)) {
                    return Ok(SquareTest::Yes(Cyclo::rational(r)));
                }
                if field % 4 == 0 {
                    if let Some(r) = x.demote(4).and_then(|e| gaussian_sqrt(&e)) {
                        return Ok(SquareTest::Yes(r));
                    }
                }
                if field % 3 == 0 {
                    if let Some(r) = x.demote(3).and_then(|e| eisenstein_sqrt(&e)) {
                        return Ok(SquareTest::Yes(r));
                    }
                }
                Ok(SquareTest::Indeterminate)
            }
        }
    }
}

fn solve_columns(cols: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let rows = rhs.len();
    let ncols = cols.len();
    let mut m: Vec<Vec<Q>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Q> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut sol = vec![Q::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][ncols].clone();
    }
    Some(sol)
}

fn rational_sqrt(q: &Q) -> Option<Q> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

// (x + y i)^2 = a + b i  with  x^2 = (a + |c|)/2.
fn gaussian_sqrt(e: &Cyclo) -> Option<Cyclo> {
    let (a, b) = (e.c[0].clone(), e.c[1].clone());
    let two = Q::from_integer(BigInt::from(2));
    let (x, y) = if b.is_zero() {
        if let Some(r) = rational_sqrt(&a) {
            (r, Q::zero())
        } else {
            (Q::zero(), rational_sqrt(&-a)?)
        }
    } else {
        let s = rational_sqrt(&(&a * &a + &b * &b))?;
        let x = rational_sqrt(&((&a + &s) / &two))?;
        let y = &b / (&two * &x);
        (x, y)
    };
    let root = Cyclo {
        n: 4,
        c: vec![x, y],
    };
    (&(&root * &root) == e).then_some(root)
}

// (x + y ω)^2 = (x² - y²) + (2xy - y²) ω, with norm x² - xy + y².
fn eisenstein_sqrt(e: &Cyclo) -> Option<Cyclo> {
    let (a, b) = (e.c[0].clone(), e.c[1].clone());
    let s = rational_sqrt(&(&a * &a - &a * &b + &b * &b))?;
    let three = Q::from_integer(BigInt::from(3));
    let two = Q::from_integer(BigInt::from(2));
    let y2 = (&b - &two * &a + &two * &s) / three;
    let y = rational_sqrt(&y2)?;
    let x = if y.is_zero() {
        rational_sqrt(&a)?
    } else {
        (&a - &s + &two * &y2) / &y
    };
    let root = Cyclo {
        n: 3,
        c: vec![x, y],
    };
    (&(&root * &root) == e).then_some(root)
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Cyclo) -> bool {
        if self.n == other.n {
            self.c == other.c
        } else {
            let (a, b) = self.lift_pair(other);
            a.c == b.c
        }
    }
}

impl<'a> Add<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn add(self, o: &Cyclo) -> Cyclo {
        let (a, b) = self.lift_pair(o);
        Cyclo {
            n: a.n,
            c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a> Sub<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn sub(self, o: &Cyclo) -> Cyclo {
        let (a, b) = self.lift_pair(o);
        Cyclo {
            n: a.n,
            c: a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn mul(self, o: &Cyclo) -> Cyclo {
        if self.n == 1 {
            return o.scale(&self.c[0]);
        }
        if o.n == 1 {
            return self.scale(&o.c[0]);
        }
        let (a, b) = self.lift_pair(o);
        Cyclo::cyclo_reduce(a.n, qmul(&a.c, &b.c))
    }
}

/// Panics on division by zero; use [`Cyclo::inv`] for a checked inverse.
impl<'a> Div<&'a Cyclo> for &'a Cyclo {
    type Output = Cyclo;
    fn div(self, o: &Cyclo) -> Cyclo {
        self * &o.inv().expect("division by zero in Q(ζ)")
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            n: self.n,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, o: Cyclo) -> Cyclo { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, o: &Cyclo) -> Cyclo { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

impl From<i64> for Cyclo {
    fn from(v: i64) -> Cyclo {
        Cyclo::int(v)
    }
}

fn fmt_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders as a sum of `c*zeta(N)^k` terms over the smallest containing field,
/// in a form accepted back by the expression parser.
impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.simplify();
        let mut out = String::new();
        for (k, q) in s.c.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let mag = q.abs();
            let zpart = match k {
                0 => String::new(),
                1 => format!("zeta({})", s.n),
                _ => format!("zeta({})^{}", s.n, k),
            };
            let body = if k == 0 {
                fmt_rational(&mag)
            } else if mag.is_one() {
                zpart
            } else {
                format!("{}*{}", fmt_rational(&mag), zpart)
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
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let small = |n| -> Vec<i64> {
            cyclotomic_polynomial(n)
                .iter()
                .map(|v| i64::try_from(v).unwrap())
                .collect()
        };
        assert_eq!(small(1), vec![-1, 1]);
        assert_eq!(small(3), vec![1, 1, 1]);
        assert_eq!(small(4), vec![1, 0, 1]);
        assert_eq!(small(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(24), 8);
    }

    #[test]
    fn reduction_examples() {
        let i = Cyclo::zeta(4);
        assert_eq!(&i * &i, Cyclo::int(-1));
        let w = Cyclo::zeta(3);
        assert!((&(&w * &w) + &w + Cyclo::one()).is_zero());
        let z8sq = Cyclo::cyclo_reduce(8, vec![Q::zero(), Q::zero(), Q::one()]);
        assert_eq!(z8sq, Cyclo::zeta(4));
        assert_eq!(z8sq.coeffs().len(), 4);
        assert_eq!(Cyclo::zeta_pow(5, 5), Cyclo::one());
    }

    #[test]
    fn mixed_conductors_promote() {
        let s = &Cyclo::zeta(3) * &Cyclo::zeta(4);
        assert_eq!(s.conductor(), 12);
        assert_eq!(s, Cyclo::zeta_pow(12, 7));
        assert_eq!(Cyclo::zeta_pow(8, 2), Cyclo::zeta(4));
        assert_eq!(Cyclo::zeta_pow(6, 2), Cyclo::zeta(3));
    }

    #[test]
    fn inverse_and_powers() {
        let a = &Cyclo::zeta(9) + &Cyclo::int(2);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert_eq!(Cyclo::zeta(9).pow(9).unwrap(), Cyclo::one());
        assert_eq!(Cyclo::zeta(9).pow(-1).unwrap(), Cyclo::zeta_pow(9, 8));
        assert!(Cyclo::zero().inv().is_err());
        assert_eq!(Cyclo::zeta(12).root_of_unity_order(100), Some(12));
    }

    #[test]
    fn square_tests() {
        assert_eq!(
            Cyclo::int(4).is_square_constant().unwrap(),
            SquareTest::Yes(Cyclo::int(2))
        );
        assert_eq!(Cyclo::int(2).is_square_constant().unwrap(), SquareTest::No);
        let two_i = Cyclo::zeta(4).scale(&Q::from_integer(2.into()));
        match two_i.is_square_constant().unwrap() {
            SquareTest::Yes(r) => {
                assert_eq!(&r * &r, two_i);
                assert_eq!(r, &Cyclo::one() + &Cyclo::zeta(4));
            }
            other => panic!("expected a root, got {other:?}"),
        }
        assert!(Cyclo::zero().is_square_constant().is_err());
        assert_eq!(Cyclo::int(-1).is_square_in(1).unwrap(), SquareTest::No);
        assert!(matches!(
            Cyclo::int(-1).is_square_in(4).unwrap(),
            SquareTest::Yes(_)
        ));
        assert!(matches!(
            Cyclo::int(-3).is_square_in(3).unwrap(),
            SquareTest::Yes(_)
        ));
        assert!(matches!(
            Cyclo::zeta(3).is_square_in(3).unwrap(),
            SquareTest::Yes(_)
        ));
        assert_eq!(Cyclo::int(2).is_square_in(3).unwrap(), SquareTest::No);
        assert_eq!(
            Cyclo::int(3).is_square_in(5).unwrap(),
            SquareTest::Indeterminate
        );
        assert!(matches!(
            Cyclo::int(9).is_square_in(5).unwrap(),
            SquareTest::Yes(_)
        ));
        assert!(Cyclo::zeta(4).is_square_in(3).is_err());
    }

    #[test]
    fn simplify_and_display() {
        let minus_one = Cyclo::int(-1).promote(8);
        assert_eq!(minus_one.conductor(), 8);
        assert_eq!(minus_one.to_string(), "-1");
        assert_eq!(Cyclo::zeta_pow(8, 3).to_string(), "zeta(8)^3");
        assert_eq!(Cyclo::frac(3, 2).to_string(), "3/2");
        assert_eq!((&Cyclo::one() + &Cyclo::zeta(4)).to_string(), "1 + zeta(4)");
        let x = Cyclo::zeta(6);
        assert_eq!(x.simplify().conductor(), 3);
    }
}
