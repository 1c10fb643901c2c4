//! The de Jonquières group PGL(2, k(x)) ⋊ PGL(2, k) acting on the plane by
//! (x, y) ↦ (β(x), A(x)(y)), with involution normal forms and the
//! determinant square-class invariant.

use std::fmt;

use num::integer::lcm;
use serde::Serialize;
use thiserror::Error;

use crate::cremaps::{Ambient, MapError, ProjMap};
use crate::exactmath::{
    parse_with, Cyclo, MathError, MultiPoly, RatFunc, Roster, SquareTest, UniPoly,
};
use crate::Order;

pub const JONQ_ORDER_CAP: u64 = 720;
/// Entries of higher degree stop an order search.
pub const JONQ_DEGREE_CAP: usize = 48;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JonqError {
    #[error("matrix is singular")]
    Singular,
    #[error("element is not an involution")]
    NotInvolution,
    #[error("element acts nontrivially on the base")]
    NontrivialBase,
    #[error("involution is not twisting")]
    NotTwisting,
    #[error("degenerate construction: {0}")]
    Degenerate(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("no admissible basis vector found")]
    NoBasisVector,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Row-major 2×2 matrices: `[m11, m12, m21, m22]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JonqElement {
    a: [RatFunc; 4],
    beta: [Cyclo; 4],
}

fn rf_mul(m: &[RatFunc; 4], n: &[RatFunc; 4]) -> [RatFunc; 4] {
    [
        &(&m[0] * &n[0]) + &(&m[1] * &n[2]),
        &(&m[0] * &n[1]) + &(&m[1] * &n[3]),
        &(&m[2] * &n[0]) + &(&m[3] * &n[2]),
        &(&m[2] * &n[1]) + &(&m[3] * &n[3]),
    ]
}

fn rf_det(m: &[RatFunc; 4]) -> RatFunc {
    &(&m[0] * &m[3]) - &(&m[1] * &m[2])
}

fn c_mul(m: &[Cyclo; 4], n: &[Cyclo; 4]) -> [Cyclo; 4] {
    [
        &(&m[0] * &n[0]) + &(&m[1] * &n[2]),
        &(&m[0] * &n[1]) + &(&m[1] * &n[3]),
        &(&m[2] * &n[0]) + &(&m[3] * &n[2]),
        &(&m[2] * &n[1]) + &(&m[3] * &n[3]),
    ]
}

fn c_identity() -> [Cyclo; 4] {
    [Cyclo::one(), Cyclo::zero(), Cyclo::zero(), Cyclo::one()]
}

/// Clears denominators, removes the polynomial content, and makes the first
/// nonzero entry monic. Two matrices agree up to k(x)* iff their forms agree.
fn canonical_a(a: [RatFunc; 4]) -> [RatFunc; 4] {
    let l = a.iter().fold(UniPoly::one(), |l, e| {
        let g = UniPoly::gcd(&l, e.den());
        &l * &e.den().exact_div(&g).expect("gcd divides")
    });
    let polys: Vec<UniPoly> = a
        .iter()
        .map(|e| e.num() * &l.exact_div(e.den()).expect("denominator divides lcm"))
        .collect();
    let mut by_degree: Vec<&UniPoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    by_degree.sort_by_key(|p| p.degree());
    let mut content = by_degree[0].monic();
    for p in &by_degree[1..] {
        if content.is_one() {
            break;
        }
        content = UniPoly::gcd(&content, p);
    }
    let lead = polys
        .iter()
        .find(|p| !p.is_zero())
        .map(|p| {
            p.exact_div(&content)
                .expect("content divides")
                .lead()
                .cloned()
                .expect("nonzero")
        })
        .expect("nonzero matrix");
    let inv = lead.inv().expect("nonzero lead");
    let out: Vec<RatFunc> = polys
        .iter()
        .map(|p| RatFunc::from_poly(p.exact_div(&content).expect("content divides").scale(&inv)))
        .collect();
    out.try_into().expect("four entries")
}

fn canonical_beta(b: [Cyclo; 4]) -> [Cyclo; 4] {
    let inv = b
        .iter()
        .find(|c| !c.is_zero())
        .expect("nonzero matrix")
        .inv()
        .expect("nonzero");
    b.map(|c| &c * &inv)
}

/// A(β(x)) times (r x + s)^D, D the largest entry degree, for β the Möbius
/// map (p x + q)/(r x + s). Entries stay polynomial and A changes only by a
/// scalar. Expects the polynomial entries of a canonical A.
fn substitute(a: &[RatFunc; 4], b: &[Cyclo; 4]) -> [RatFunc; 4] {
    let top = UniPoly::from_coeffs(vec![b[1].clone(), b[0].clone()]);
    let bottom = UniPoly::from_coeffs(vec![b[3].clone(), b[2].clone()]);
    let d = a.iter().filter_map(|e| e.num().degree()).max().unwrap_or(0);
    let tops: Vec<UniPoly> = (0..=d).map(|k| top.pow(k as u32)).collect();
    let bottoms: Vec<UniPoly> = (0..=d).map(|k| bottom.pow(k as u32)).collect();
    a.clone().map(|e| {
        debug_assert!(e.den().is_one());
        let p = e
            .num()
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(UniPoly::zero(), |acc, (k, c)| {
                &acc + &(&tops[k] * &bottoms[d - k]).scale(c)
            });
        RatFunc::from_poly(p)
    })
}

impl JonqElement {
    pub fn new(a: [RatFunc; 4], beta: [Cyclo; 4]) -> Result<JonqElement, JonqError> {
        if rf_det(&a).is_zero() {
            return Err(JonqError::Singular);
        }
        let db = &(&beta[0] * &beta[3]) - &(&beta[1] * &beta[2]);
        if db.is_zero() {
            return Err(JonqError::Singular);
        }
        Ok(JonqElement {
            a: canonical_a(a),
            beta: canonical_beta(beta),
        })
    }

    /// Fibrewise element with trivial β.
    pub fn fibre(a: [RatFunc; 4]) -> Result<JonqElement, JonqError> {
        JonqElement::new(a, c_identity())
    }

    pub fn identity() -> JonqElement {
        JonqElement::fibre([
            RatFunc::one(),
            RatFunc::zero(),
            RatFunc::zero(),
            RatFunc::one(),
        ])
        .expect("invertible")
    }

    /// σ_g : (x, y) ↦ (x, g/y).
    pub fn sigma(g: &RatFunc) -> Result<JonqElement, JonqError> {
        JonqElement::fibre([RatFunc::zero(), g.clone(), RatFunc::one(), RatFunc::zero()])
    }

    /// σ_{a,b} with g = Π(x − bᵢ) / Π(x − aᵢ).
    pub fn sigma_ab(a: &[Cyclo], b: &[Cyclo]) -> Result<JonqElement, JonqError> {
        let prod = |roots: &[Cyclo]| {
            roots.iter().fold(UniPoly::one(), |p, r| {
                &p * &UniPoly::from_coeffs(vec![-r, Cyclo::one()])
            })
        };
        JonqElement::sigma(&RatFunc::new(prod(b), prod(a))?)
    }

    /// (x, y) ↦ (c x, y).
    pub fn base_scaling(c: Cyclo) -> Result<JonqElement, JonqError> {
        JonqElement::new(
            [
                RatFunc::one(),
                RatFunc::zero(),
                RatFunc::zero(),
                RatFunc::one(),
            ],
            [c, Cyclo::zero(), Cyclo::zero(), Cyclo::one()],
        )
    }

    pub fn a(&self) -> &[RatFunc; 4] {
        &self.a
    }

    pub fn beta(&self) -> &[Cyclo; 4] {
        &self.beta
    }

    pub fn has_trivial_beta(&self) -> bool {
        self.beta == c_identity()
    }

    pub fn is_identity(&self) -> bool {
        *self == JonqElement::identity()
    }

    pub fn conductor(&self) -> u32 {
        let a = self.a.iter().fold(1, |n, e| lcm(n, e.conductor()));
        self.beta.iter().fold(a, |n, c| lcm(n, c.conductor()))
    }

    /// Largest degree among the polynomial entries of the canonical A.
    pub fn degree(&self) -> usize {
        self.a
            .iter()
            .filter_map(|e| e.num().degree())
            .max()
            .unwrap_or(0)
    }

    pub fn det(&self) -> RatFunc {
        rf_det(&self.a)
    }

    pub fn inverse(&self) -> JonqElement {
        let b = &self.beta;
        let binv = [b[3].clone(), -&b[1], -&b[2], b[0].clone()];
        let adj = [
            self.a[3].clone(),
            -&self.a[1],
            -&self.a[2],
            self.a[0].clone(),
        ];
        let adj = substitute(&adj, &binv);
        JonqElement::new(adj, binv).expect("inverse of an invertible element")
    }
}

impl fmt::Display for JonqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.beta;
        let x = if b[2].is_zero() && b[3].is_one() && b[1].is_zero() {
            if b[0].is_one() {
                "x".to_string()
            } else {
                format!("({})*x", b[0])
            }
        } else {
            let m = RatFunc::new(
                UniPoly::from_coeffs(vec![b[1].clone(), b[0].clone()]),
                UniPoly::from_coeffs(vec![b[3].clone(), b[2].clone()]),
            )
            .expect("invertible β");
            m.to_string()
        };
        write!(
            f,
            "(x, y) -> ({x}, ({})/({}))",
            linear(&self.a[0], &self.a[1]),
            linear(&self.a[2], &self.a[3])
        )
    }
}

/// a·y + b with zero terms dropped and unit coefficients elided.
fn linear(a: &RatFunc, b: &RatFunc) -> String {
    let wrap = |r: &RatFunc| {
        let s = r.to_string();
        if s.contains(' ') || s.contains('/') {
            format!("({s})")
        } else {
            s
        }
    };
    let y = if a.is_zero() {
        None
    } else if a.is_one() {
        Some("y".to_string())
    } else if (-a).is_one() {
        Some("-y".to_string())
    } else {
        Some(format!("{}*y", wrap(a)))
    };
    match (y, b.is_zero()) {
        (Some(y), true) => y,
        (None, _) => b.to_string(),
        (Some(y), false) => format!("{y} + {}", wrap(b)),
    }
}

/// e₁ ∘ e₂, with e₂ applied first.
pub fn compose_j(e1: &JonqElement, e2: &JonqElement) -> JonqElement {
    let a1 = substitute(&e1.a, &e2.beta);
    JonqElement::new(rf_mul(&a1, &e2.a), c_mul(&e1.beta, &e2.beta))
        .expect("product of invertible elements")
}

pub fn power_j(e: &JonqElement, k: u64) -> JonqElement {
    let mut acc = JonqElement::identity();
    let mut base = e.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = compose_j(&acc, &base);
        }
        base = compose_j(&base, &base);
        k >>= 1;
    }
    acc
}

pub fn order_j(e: &JonqElement, cap: u64) -> Order {
    let mut acc = e.clone();
    for k in 1..=cap {
        if acc.is_identity() {
            return Order::Finite(k);
        }
        if acc.degree() > JONQ_DEGREE_CAP {
            return Order::OverCap;
        }
        acc = compose_j(&acc, e);
    }
    Order::OverCap
}

pub fn is_involution(e: &JonqElement) -> bool {
    !e.is_identity() && compose_j(e, e).is_identity()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantStatus {
    ResolvedSquare,
    ResolvedNonsquare,
    Indeterminate,
}

/// A class in k(x)*/k(x)*²: constant · radical, radical monic square-free.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareClass {
    pub radical: UniPoly,
    pub constant: Cyclo,
    pub status: ConstantStatus,
    /// Conductor of the field the constant was tested in.
    pub field: u32,
}

fn square_status(c: &Cyclo, field: u32) -> ConstantStatus {
    match c.is_square_in(field) {
        Ok(SquareTest::Yes(_)) => ConstantStatus::ResolvedSquare,
        Ok(SquareTest::No) => ConstantStatus::ResolvedNonsquare,
        _ => ConstantStatus::Indeterminate,
    }
}

impl SquareClass {
    pub fn of(f: &RatFunc, field: u32) -> Result<SquareClass, JonqError> {
        if f.is_zero() {
            return Err(JonqError::Singular);
        }
        let field = lcm(field, f.conductor());
        let sf = f.square_class_representative().squarefree_part()?;
        let status = square_status(&sf.constant, field);
        Ok(SquareClass {
            radical: sf.radical,
            constant: sf.constant,
            status,
            field,
        })
    }

    /// Triviality over C: only the radical matters.
    pub fn is_trivial_absolute(&self) -> bool {
        self.radical.is_one()
    }

    /// Triviality over the tested field, `None` when the constant is unresolved.
    pub fn is_trivial(&self) -> Option<bool> {
        if !self.radical.is_one() {
            return Some(false);
        }
        match self.status {
            ConstantStatus::ResolvedSquare => Some(true),
            ConstantStatus::ResolvedNonsquare => Some(false),
            ConstantStatus::Indeterminate => None,
        }
    }

    /// Class equality over the common field, `None` when unresolved.
    pub fn same_class(&self, other: &SquareClass) -> Option<bool> {
        if self.radical != other.radical {
            return Some(false);
        }
        let field = lcm(self.field, other.field);
        match square_status(&(&self.constant / &other.constant), field) {
            ConstantStatus::ResolvedSquare => Some(true),
            ConstantStatus::ResolvedNonsquare => Some(false),
            ConstantStatus::Indeterminate => None,
        }
    }

    pub fn product(&self, other: &SquareClass) -> Result<SquareClass, JonqError> {
        let f = RatFunc::from_poly(&self.radical * &other.radical)
            .scale(&(&self.constant * &other.constant));
        SquareClass::of(&f, lcm(self.field, other.field))
    }
}

/// Determinant class in the element's own field.
pub fn det_class(e: &JonqElement) -> Result<SquareClass, JonqError> {
    det_class_in(e, 1)
}

/// Determinant class with constants tested in Q(ζ_field) joined with the
/// element's field.
pub fn det_class_in(e: &JonqElement, field: u32) -> Result<SquareClass, JonqError> {
    if !e.has_trivial_beta() {
        return Err(JonqError::NontrivialBase);
    }
    SquareClass::of(&e.det(), lcm(field, e.conductor()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwistVerdict {
    /// Over C, where only the radical matters.
    pub absolute: bool,
    /// Over the tested field; `None` when the constant is unresolved.
    pub effective: Option<bool>,
}

fn check_fibre_involution(e: &JonqElement) -> Result<(), JonqError> {
    if !e.has_trivial_beta() {
        return Err(JonqError::NontrivialBase);
    }
    if !is_involution(e) {
        return Err(JonqError::NotInvolution);
    }
    Ok(())
}

/// A fibrewise involution has a trace-zero representative, so its
/// determinant class is δ, and it twists iff δ is nontrivial.
pub fn is_twisting(e: &JonqElement) -> Result<TwistVerdict, JonqError> {
    is_twisting_in(e, 1)
}

pub fn is_twisting_in(e: &JonqElement, field: u32) -> Result<TwistVerdict, JonqError> {
    check_fibre_involution(e)?;
    let c = det_class_in(e, field)?;
    Ok(TwistVerdict {
        absolute: !c.is_trivial_absolute(),
        effective: c.is_trivial().map(|t| !t),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ramification {
    /// Number of twisted fibres, counting x = ∞ when the radical has odd degree.
    pub two_k: usize,
    pub genus: usize,
}

pub fn ramification_data(e: &JonqElement) -> Result<Ramification, JonqError> {
    if !is_twisting(e)?.absolute {
        return Err(JonqError::NotTwisting);
    }
    let c = det_class(e)?;
    let d = c.radical.degree().unwrap_or(0);
    let two_k = d + d % 2;
    Ok(Ramification {
        two_k,
        genus: two_k / 2 - 1,
    })
}

/// The normal form σ_g = (0, g; 1, 0).
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaForm {
    pub g: RatFunc,
}

impl SigmaForm {
    pub fn element(&self) -> JonqElement {
        JonqElement::sigma(&self.g).expect("g is nonzero")
    }
}

fn candidate_vectors() -> Vec<[RatFunc; 2]> {
    let x = RatFunc::x();
    let mut out = vec![
        [RatFunc::one(), RatFunc::zero()],
        [RatFunc::zero(), RatFunc::one()],
        [RatFunc::one(), RatFunc::one()],
        [RatFunc::one(), x.clone()],
        [RatFunc::one(), &x + &RatFunc::one()],
    ];
    for k in 2..=8 {
        let xk = x.pow(k).expect("nonzero");
        out.push([RatFunc::one(), xk.clone()]);
        out.push([RatFunc::one(), &xk + &RatFunc::one()]);
    }
    out
}

/// Returns σ_g and c with e = c ∘ σ_g ∘ c⁻¹.
pub fn normalize_involution(e: &JonqElement) -> Result<(SigmaForm, JonqElement), JonqError> {
    check_fibre_involution(e)?;
    let a = &e.a;
    if a[0].is_zero() && a[3].is_zero() {
        let g = a[1].div(&a[2])?;
        return Ok((SigmaForm { g }, JonqElement::identity()));
    }
    let neg_det = -&e.det();
    for v in candidate_vectors() {
        let w0 = &(&a[0] * &v[0]) + &(&a[1] * &v[1]);
        let w1 = &(&a[2] * &v[0]) + &(&a[3] * &v[1]);
        let p = [v[0].clone(), w0, v[1].clone(), w1];
        if rf_det(&p).is_zero() {
            continue;
        }
        let c = JonqElement::fibre(p)?;
        let form = SigmaForm { g: neg_det.clone() };
        let s = form.element();
        if compose_j(&c, &s) != compose_j(e, &c) {
            return Err(JonqError::VerificationFailed("conjugation identity".into()));
        }
        return Ok((form, c));
    }
    Err(JonqError::NoBasisVector)
}

/// α with α² and α^{2n} checked against their closed forms.
#[derive(Debug, Clone)]
pub struct OddRoot {
    pub alpha: JonqElement,
    pub square: JonqElement,
    pub power_2n: JonqElement,
}

fn x_pow(n: u32) -> RatFunc {
    RatFunc::x().pow(n as i32).expect("nonzero")
}

/// α = (x ↦ ζ_{2n} x, y ↦ −g(xⁿ)(y + g(−xⁿ))/(y + g(xⁿ))) for odd n.
pub fn build_root_odd(n: u32, g: &RatFunc) -> Result<OddRoot, JonqError> {
    if n.is_multiple_of(2) {
        return Err(JonqError::Degenerate(format!("n = {n} is even")));
    }
    if g.is_zero() {
        return Err(JonqError::Degenerate("g is zero".into()));
    }
    let xn = x_pow(n);
    let big_g = g.compose(&xn)?;
    let big_h = g.compose(&-&xn)?;
    let gh = &big_g * &big_h;
    let a = [-&big_g, -&gh, RatFunc::one(), big_g.clone()];
    if rf_det(&a).is_zero() {
        return Err(JonqError::Degenerate(
            "g(x^n) = g(-x^n), so the matrix is singular".into(),
        ));
    }
    let zeta = Cyclo::zeta(2 * n);
    let alpha = JonqElement::new(a, [zeta, Cyclo::zero(), Cyclo::zero(), Cyclo::one()])?;
    let square = compose_j(&alpha, &alpha);
    let expected_sq = JonqElement::new(
        [RatFunc::zero(), gh.clone(), RatFunc::one(), RatFunc::zero()],
        [Cyclo::zeta(n), Cyclo::zero(), Cyclo::zero(), Cyclo::one()],
    )?;
    if square != expected_sq {
        return Err(JonqError::VerificationFailed(format!("alpha^2 = {square}")));
    }
    let power_2n = power_j(&alpha, 2 * n as u64);
    if power_2n != JonqElement::sigma(&gh)? {
        return Err(JonqError::VerificationFailed(format!(
            "alpha^{} = {power_2n}",
            2 * n
        )));
    }
    Ok(OddRoot {
        alpha,
        square,
        power_2n,
    })
}

/// √2 − 1 written in Q(ζ₈).
fn sqrt2_minus_one() -> Cyclo {
    &(&Cyclo::zeta(8) - &Cyclo::zeta_pow(8, 3)) - &Cyclo::one()
}

/// The order-8 element α = (i x, ((x+1)(s−x) y + x⁴ − 1)/(y + (x+1)(s−x)))
/// with s = √2 − 1, whose fourth power is σ_{x⁴−1}.
pub fn fourth_root_example() -> JonqElement {
    let s = UniPoly::from_coeffs(vec![sqrt2_minus_one(), -Cyclo::one()]);
    let p = RatFunc::from_poly(&UniPoly::from_ints(&[1, 1]) * &s);
    let q = RatFunc::from_poly(UniPoly::from_ints(&[-1, 0, 0, 0, 1]));
    JonqElement::new(
        [p.clone(), q, RatFunc::one(), p],
        [Cyclo::zeta(4), Cyclo::zero(), Cyclo::zero(), Cyclo::one()],
    )
    .expect("invertible")
}

/// The square of [`fourth_root_example`] as written by hand:
/// (−x, (−i(x+1)(x−i) y + x⁴ − 1)/(y − i(x+1)(x−i))).
pub fn fourth_root_square_printed() -> JonqElement {
    let i = Cyclo::zeta(4);
    let m = UniPoly::from_coeffs(vec![-&i, Cyclo::one()]);
    let p = RatFunc::from_poly((&UniPoly::from_ints(&[1, 1]) * &m).scale(&-&i));
    let q = RatFunc::from_poly(UniPoly::from_ints(&[-1, 0, 0, 0, 1]));
    JonqElement::new(
        [p.clone(), q, RatFunc::one(), p],
        [-Cyclo::one(), Cyclo::zero(), Cyclo::zero(), Cyclo::one()],
    )
    .expect("invertible")
}

fn homogenize(p: &UniPoly, d: usize) -> MultiPoly {
    MultiPoly::from_terms(
        4,
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (vec![k as u32, (d - k) as u32, 0, 0], c.clone())),
    )
}

/// The element as a bidegree-(d, 1) map on P¹×P¹ in x1, x2, y1, y2.
pub fn to_bihomogeneous(e: &JonqElement) -> Result<ProjMap, JonqError> {
    let amb = Ambient::p1xp1();
    let var = |i| MultiPoly::var(4, i);
    let konst = |c: &Cyclo| MultiPoly::constant(4, c.clone());
    let b = &e.beta;
    let x1 = &(&konst(&b[0]) * &var(0)) + &(&konst(&b[1]) * &var(1));
    let x2 = &(&konst(&b[2]) * &var(0)) + &(&konst(&b[3]) * &var(1));
    // canonical entries are polynomials
    let d = e.degree();
    let h: Vec<MultiPoly> = e.a.iter().map(|r| homogenize(r.num(), d)).collect();
    let y1 = &(&h[0] * &var(2)) + &(&h[1] * &var(3));
    let y2 = &(&h[2] * &var(2)) + &(&h[3] * &var(3));
    Ok(ProjMap::new(&amb, vec![x1, x2, y1, y2])?)
}

/// Order of the subgroup of k(x)*/k(x)*² generated by the determinant
/// classes of σ_g and (h, −g; 1, −h), namely −g and g − h².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassGroupOrder {
    pub absolute: u32,
    pub effective: Option<u32>,
}

pub fn square_class_group(g: &RatFunc, h: &RatFunc) -> Result<ClassGroupOrder, JonqError> {
    let field = lcm(g.conductor(), h.conductor());
    let c1 = SquareClass::of(&-g, field)?;
    let c2 = SquareClass::of(&(g - &(h * h)), field)?;
    let c3 = c1.product(&c2)?;
    let one = SquareClass::of(&RatFunc::one(), field)?;
    let classes = [one, c1, c2, c3];
    let mut absolute: Vec<&UniPoly> = Vec::new();
    for c in &classes {
        if !absolute.contains(&&c.radical) {
            absolute.push(&c.radical);
        }
    }
    let mut effective: Option<Vec<&SquareClass>> = Some(Vec::new());
    for c in &classes {
        let Some(seen) = effective.as_mut() else {
            break;
        };
        let mut fresh = true;
        for s in seen.iter() {
            match s.same_class(c) {
                Some(true) => fresh = false,
                Some(false) => {}
                None => {
                    effective = None;
                    break;
                }
            }
        }
        if let Some(seen) = effective.as_mut() {
            if fresh {
                seen.push(c);
            }
        }
    }
    Ok(ClassGroupOrder {
        absolute: absolute.len() as u32,
        effective: effective.map(|v| v.len() as u32),
    })
}

fn parse_ratfunc(text: &str, roster: &Roster) -> Result<RatFunc, JonqError> {
    let to_uni = |s: &str| -> Result<UniPoly, JonqError> {
        let p = parse_with(s, roster).map_err(|e| JonqError::Parse(format!("'{s}': {e}")))?;
        p.to_unipoly(0)
            .ok_or_else(|| JonqError::Parse(format!("'{s}' is not a polynomial in x")))
    };
    let mut depth = 0i32;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 && text[i + 1..].trim_start().starts_with('(') => {
                let (num, den) = (to_uni(&text[..i])?, to_uni(&text[i + 1..])?);
                return RatFunc::new(num, den)
                    .map_err(|_| JonqError::Parse(format!("zero denominator in '{text}'")));
            }
            _ => {}
        }
    }
    Ok(RatFunc::from_poly(to_uni(text)?))
}

/// Parses `"a11, a12, a21, a22; b11, b12, b21, b22"`. Entries of A are
/// polynomials in x or quotients `(p)/(q)`; β entries are constants. The β
/// part may be omitted for a fibrewise element.
pub fn parse_element(text: &str) -> Result<JonqElement, JonqError> {
    let roster = Roster::new(&["x"]);
    let (a_txt, b_txt) = match text.split_once(';') {
        Some((a, b)) => (a, Some(b)),
        None => (text, None),
    };
    let entries = |s: &str| -> Vec<String> { s.split(',').map(|t| t.trim().to_string()).collect() };
    let a: Vec<RatFunc> = entries(a_txt)
        .iter()
        .map(|s| parse_ratfunc(s, &roster))
        .collect::<Result<_, _>>()?;
    let a: [RatFunc; 4] = a
        .try_into()
        .map_err(|_| JonqError::Parse("A needs four entries".into()))?;
    let beta = match b_txt {
        None => c_identity(),
        Some(b) => {
            let v: Vec<Cyclo> = entries(b)
                .iter()
                .map(|s| {
                    parse_ratfunc(s, &roster)?.as_constant().ok_or_else(|| {
                        JonqError::Parse(format!("beta entry '{s}' is not constant"))
                    })
                })
                .collect::<Result<_, _>>()?;
            v.try_into()
                .map_err(|_| JonqError::Parse("beta needs four entries".into()))?
        }
    };
    JonqElement::new(a, beta)
}
