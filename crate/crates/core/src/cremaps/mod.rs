//! Rational self-maps of projective, product and weighted projective ambients,
//! stored as tuples of polynomials in canonical form.

pub mod corpus;
mod linalg;
pub mod special;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{parse_with, Cyclo, MultiPoly, ParseError, Roster};
use crate::Order;

pub use linalg::span_coefficients;

/// Default caps for [`order`].
pub const ORDER_CAP: u64 = 5040;
pub const DEGREE_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("map acts on {0} but was composed with a map on {1}")]
    AmbientMismatch(String, String),
    #[error("expected {expected} components, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("all components of a factor vanish identically")]
    Vanishing,
    #[error("component {0} is not homogeneous of the expected degree")]
    NotHomogeneous(usize),
    #[error("point lies in the base locus")]
    BaseLocus,
    #[error("point has a factor with all coordinates zero")]
    ZeroPoint,
    #[error("unknown ambient '{0}'")]
    UnknownAmbient(String),
    #[error("weighted ambient needs at least one weight-1 coordinate")]
    NoUnitWeight,
    #[error("malformed tuple: {0}")]
    Tuple(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum AmbientKind {
    /// Pⁿ with n + 1 coordinates.
    Projective(usize),
    /// Pⁿ × Pᵐ.
    Product(usize, usize),
    /// Weighted projective space with these weights.
    Weighted(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ambient {
    pub kind: AmbientKind,
    #[serde(skip)]
    pub roster: Roster,
    pub name: String,
}

impl Ambient {
    fn build(name: &str, kind: AmbientKind, vars: &[&str]) -> Ambient {
        Ambient {
            kind,
            roster: Roster::new(vars),
            name: name.to_string(),
        }
    }

    pub fn p2() -> Ambient {
        Ambient::build("P2", AmbientKind::Projective(2), &["x", "y", "z"])
    }

    pub fn p3() -> Ambient {
        Ambient::build("P3", AmbientKind::Projective(3), &["w", "x", "y", "z"])
    }

    pub fn p4() -> Ambient {
        Ambient::build(
            "P4",
            AmbientKind::Projective(4),
            &["x1", "x2", "x3", "x4", "x5"],
        )
    }

    pub fn p1xp1() -> Ambient {
        Ambient::build(
            "P1xP1",
            AmbientKind::Product(1, 1),
            &["x1", "x2", "y1", "y2"],
        )
    }

    pub fn p2xp2() -> Ambient {
        Ambient::build(
            "P2xP2",
            AmbientKind::Product(2, 2),
            &["x", "y", "z", "u", "v", "w"],
        )
    }

    /// Weighted projective 3-space with coordinates w, x, y, z.
    pub fn weighted(weights: &[u32]) -> Result<Ambient, MapError> {
        if weights.len() != 4 || weights.contains(&0) {
            return Err(MapError::UnknownAmbient(format!("{weights:?}")));
        }
        if !weights.contains(&1) {
            return Err(MapError::NoUnitWeight);
        }
        let name = format!(
            "P({})",
            weights
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok(Ambient::build(
            &name,
            AmbientKind::Weighted(weights.to_vec()),
            &["w", "x", "y", "z"],
        ))
    }

    /// Looks up "P2", "P3", "P4", "P1xP1", "P2xP2" or "P(a,b,c,d)".
    pub fn from_name(name: &str) -> Result<Ambient, MapError> {
        match name.trim() {
            "P2" => Ok(Ambient::p2()),
            "P3" => Ok(Ambient::p3()),
            "P4" => Ok(Ambient::p4()),
            "P1xP1" => Ok(Ambient::p1xp1()),
            "P2xP2" => Ok(Ambient::p2xp2()),
            s => {
                let inner = s
                    .strip_prefix("P(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| MapError::UnknownAmbient(s.to_string()))?;
                let weights: Vec<u32> = inner
                    .split(',')
                    .map(|t| t.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| MapError::UnknownAmbient(s.to_string()))?;
                Ambient::weighted(&weights)
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.roster.len()
    }

    /// Index ranges of the projective factors.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        match self.kind {
            AmbientKind::Product(n, m) => vec![0..n + 1, n + 1..n + m + 2],
            _ => vec![0..self.nvars()],
        }
    }

    pub fn weights(&self) -> Option<&[u32]> {
        match &self.kind {
            AmbientKind::Weighted(w) => Some(w),
            _ => None,
        }
    }

    pub fn parse(&self, text: &str) -> Result<MultiPoly, ParseError> {
        parse_with(text, &self.roster)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjMap {
    ambient: Ambient,
    comps: Vec<MultiPoly>,
}

impl ProjMap {
    /// Checks shape and homogeneity, then brings the tuple to canonical form.
    pub fn new(ambient: &Ambient, comps: Vec<MultiPoly>) -> Result<ProjMap, MapError> {
        let n = ambient.nvars();
        if comps.len() != n {
            return Err(MapError::Arity {
                expected: n,
                got: comps.len(),
            });
        }
        for block in ambient.blocks() {
            if comps[block].iter().all(MultiPoly::is_zero) {
                return Err(MapError::Vanishing);
            }
        }
        let map = ProjMap {
            ambient: ambient.clone(),
            comps,
        };
        map.check_homogeneity()?;
        Ok(map.canonical())
    }

    pub fn identity(ambient: &Ambient) -> ProjMap {
        let n = ambient.nvars();
        ProjMap {
            ambient: ambient.clone(),
            comps: (0..n).map(|i| MultiPoly::var(n, i)).collect(),
        }
    }

    /// Weighted diagonal map (c₀x₀ : … : cₙxₙ).
    pub fn diagonal(ambient: &Ambient, coeffs: &[Cyclo]) -> Result<ProjMap, MapError> {
        let n = ambient.nvars();
        let comps = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| MultiPoly::var(n, i).scale(c))
            .collect();
        ProjMap::new(ambient, comps)
    }

    /// Parses "(e₀ : e₁ : …)" or, for products, "(…) (…)" with one tuple per factor.
    pub fn parse(ambient: &Ambient, text: &str) -> Result<ProjMap, MapError> {
        let comps = parse_tuple(text)?
            .iter()
            .map(|e| ambient.parse(e))
            .collect::<Result<Vec<_>, _>>()?;
        ProjMap::new(ambient, comps)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.comps
    }

    fn check_homogeneity(&self) -> Result<(), MapError> {
        match &self.ambient.kind {
            AmbientKind::Weighted(w) => {
                let mut unit: Option<u32> = None;
                for (i, c) in self.comps.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let d = c.weighted_degree(w).ok_or(MapError::NotHomogeneous(i))?;
                    if d % w[i] != 0 {
                        return Err(MapError::NotHomogeneous(i));
                    }
                    let e = d / w[i];
                    if *unit.get_or_insert(e) != e {
                        return Err(MapError::NotHomogeneous(i));
                    }
                }
            }
            _ => {
                let blocks = self.ambient.blocks();
                let n = self.ambient.nvars();
                for block in &blocks {
                    let mut degs: Option<Vec<u32>> = None;
                    for i in block.clone() {
                        let c = &self.comps[i];
                        if c.is_zero() {
                            continue;
                        }
                        let mut per = Vec::new();
                        for b in &blocks {
                            let w: Vec<u32> = (0..n).map(|j| u32::from(b.contains(&j))).collect();
                            per.push(c.weighted_degree(&w).ok_or(MapError::NotHomogeneous(i))?);
                        }
                        if *degs.get_or_insert_with(|| per.clone()) != per {
                            return Err(MapError::NotHomogeneous(i));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn canonical(mut self) -> ProjMap {
        match self.ambient.weights().map(<[u32]>::to_vec) {
            Some(w) => {
                // Scale by λ with λ^{wᵢ} on coordinate i so that the first nonzero
                // weight-1 component has leading coefficient 1.
                let lead = (0..w.len())
                    .find(|&i| w[i] == 1 && !self.comps[i].is_zero())
                    .and_then(|i| self.comps[i].leading_term().map(|(_, c)| c.clone()));
                if let Some(c) = lead.filter(|c| !c.is_one()) {
                    let inv = c.inv().expect("nonzero leading coefficient");
                    for (i, p) in self.comps.iter_mut().enumerate() {
                        *p = p.scale(&inv.pow(w[i] as i64).unwrap());
                    }
                }
            }
            None => {
                let n = self.ambient.nvars();
                for block in self.ambient.blocks() {
                    let g = MultiPoly::gcd_all(n, self.comps[block.clone()].iter());
                    let divide = !g.is_constant();
                    let first = self.comps[block.clone()]
                        .iter()
                        .find(|p| !p.is_zero())
                        .cloned();
                    let mut scale = first.and_then(|p| {
                        let q = if divide {
                            p.exact_div(&g).expect("gcd divides")
                        } else {
                            p
                        };
                        q.leading_term().map(|(_, c)| c.inv().unwrap())
                    });
                    if scale.as_ref().is_some_and(Cyclo::is_one) {
                        scale = None;
                    }
                    for p in &mut self.comps[block] {
                        if divide {
                            *p = p.exact_div(&g).expect("gcd divides");
                        }
                        if let Some(s) = &scale {
                            *p = p.scale(s);
                        }
                    }
                }
            }
        }
        self
    }

    pub fn is_identity(&self) -> bool {
        *self == ProjMap::identity(&self.ambient)
    }

    /// Largest total degree among the components.
    pub fn degree(&self) -> u32 {
        self.comps
            .iter()
            .map(MultiPoly::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Substitution without normalization: components of self evaluated at `inner`.
    pub fn pull_back(&self, p: &MultiPoly) -> MultiPoly {
        p.substitute(&self.comps)
    }

    pub fn eval(&self, p: &ProjPoint) -> Result<ProjPoint, MapError> {
        let coords: Vec<Cyclo> = self.comps.iter().map(|c| c.eval(&p.coords)).collect();
        ProjPoint::new(&self.ambient, coords).map_err(|_| MapError::BaseLocus)
    }

    pub fn fmt_tuple(&self) -> String {
        self.ambient
            .blocks()
            .into_iter()
            .map(|b| {
                let parts: Vec<String> = self.comps[b]
                    .iter()
                    .map(|c| c.fmt_with(&self.ambient.roster))
                    .collect();
                format!("({})", parts.join(" : "))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for ProjMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_tuple())
    }
}

/// Splits "(a : b) (c : d)" into its expressions, respecting nested parentheses.
pub fn parse_tuple(text: &str) -> Result<Vec<String>, MapError> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    let mut groups = 0;
    for ch in text.chars() {
        match ch {
            '(' => {
                if depth > 0 {
                    cur.push(ch);
                }
                depth += 1;
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| MapError::Tuple("unbalanced ')'".into()))?;
                if depth == 0 {
                    out.push(std::mem::take(&mut cur));
                    groups += 1;
                } else {
                    cur.push(ch);
                }
            }
            ':' if depth == 1 => out.push(std::mem::take(&mut cur)),
            c if depth == 0 => {
                if !c.is_whitespace() {
                    return Err(MapError::Tuple(format!(
                        "unexpected '{c}' outside parentheses"
                    )));
                }
            }
            c => cur.push(c),
        }
    }
    if depth != 0 || groups == 0 {
        return Err(MapError::Tuple("unbalanced parentheses".into()));
    }
    Ok(out.into_iter().map(|s| s.trim().to_string()).collect())
}

fn check_same(f: &ProjMap, g: &ProjMap) -> Result<(), MapError> {
    if f.ambient != g.ambient {
        return Err(MapError::AmbientMismatch(
            f.ambient.name.clone(),
            g.ambient.name.clone(),
        ));
    }
    Ok(())
}

/// f ∘ g: apply g first.
pub fn compose(f: &ProjMap, g: &ProjMap) -> Result<ProjMap, MapError> {
    check_same(f, g)?;
    let comps: Vec<MultiPoly> = f.comps.iter().map(|c| c.substitute(&g.comps)).collect();
    for block in f.ambient.blocks() {
        if comps[block].iter().all(MultiPoly::is_zero) {
            return Err(MapError::Vanishing);
        }
    }
    Ok(ProjMap {
        ambient: f.ambient.clone(),
        comps,
    }
    .canonical())
}

pub fn power(f: &ProjMap, k: u64) -> Result<ProjMap, MapError> {
    let mut acc = ProjMap::identity(&f.ambient);
    for _ in 0..k {
        acc = compose(f, &acc)?;
    }
    Ok(acc)
}

/// Least k ≥ 1 with fᵏ the identity; OverCap once k exceeds `order_cap`
/// or an iterate exceeds `degree_cap`.
pub fn order(f: &ProjMap, order_cap: u64, degree_cap: u32) -> Order {
    let mut p = f.clone();
    for k in 1..=order_cap {
        if p.is_identity() {
            return Order::Finite(k);
        }
        if p.degree() > degree_cap {
            return Order::OverCap;
        }
        match compose(f, &p) {
            Ok(next) => p = next,
            Err(_) => return Order::OverCap,
        }
    }
    Order::OverCap
}

pub fn commute(f: &ProjMap, g: &ProjMap) -> Result<bool, MapError> {
    Ok(compose(f, g)? == compose(g, f)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    ambient: Ambient,
    coords: Vec<Cyclo>,
}

impl ProjPoint {
    pub fn new(ambient: &Ambient, coords: Vec<Cyclo>) -> Result<ProjPoint, MapError> {
        if coords.len() != ambient.nvars() {
            return Err(MapError::Arity {
                expected: ambient.nvars(),
                got: coords.len(),
            });
        }
        if ambient
            .blocks()
            .into_iter()
            .any(|b| coords[b].iter().all(Cyclo::is_zero))
        {
            return Err(MapError::ZeroPoint);
        }
        Ok(ProjPoint {
            ambient: ambient.clone(),
            coords,
        })
    }

    pub fn from_ints(ambient: &Ambient, coords: &[i64]) -> Result<ProjPoint, MapError> {
        ProjPoint::new(ambient, coords.iter().map(|&v| Cyclo::int(v)).collect())
    }

    pub fn coords(&self) -> &[Cyclo] {
        &self.coords
    }

    /// The point (λ^{w₀}c₀ : … : λ^{wₙ}cₙ), with unit weights outside weighted ambients.
    pub fn rescale(&self, lambda: &Cyclo) -> ProjPoint {
        let w = self
            .ambient
            .weights()
            .map(<[u32]>::to_vec)
            .unwrap_or_else(|| vec![1; self.coords.len()]);
        let coords = self
            .coords
            .iter()
            .zip(&w)
            .map(|(c, &k)| c * &lambda.pow(k as i64).unwrap())
            .collect();
        ProjPoint {
            ambient: self.ambient.clone(),
            coords,
        }
    }

    /// Projective equivalence, factor by factor, with weights where present.
    pub fn equivalent(&self, o: &ProjPoint) -> bool {
        if self.ambient != o.ambient {
            return false;
        }
        match self.ambient.weights() {
            Some(w) => weighted_equivalent(&self.coords, &o.coords, w),
            None => self
                .ambient
                .blocks()
                .into_iter()
                .all(|b| proportional(&self.coords[b.clone()], &o.coords[b])),
        }
    }
}

fn proportional(a: &[Cyclo], b: &[Cyclo]) -> bool {
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
        && a.iter().zip(b).all(|(x, y)| x.is_zero() == y.is_zero())
}

/// Is there λ with b_i = λ^{w_i} a_i for all i? λ is never extracted as a root:
/// with g = gcd of the weights on the common support and Bezout exponents uᵢ,
/// the candidate ν = Π (b_i/a_i)^{u_i} is λ^g, and the check runs on ν.
fn weighted_equivalent(a: &[Cyclo], b: &[Cyclo], w: &[u32]) -> bool {
    if a.iter().zip(b).any(|(x, y)| x.is_zero() != y.is_zero()) {
        return false;
    }
    let support: Vec<usize> = (0..a.len()).filter(|&i| !a[i].is_zero()).collect();
    let ratio = |i: usize| &b[i] / &a[i];
    if let Some(&i) = support.iter().find(|&&i| w[i] == 1) {
        let lambda = ratio(i);
        return support
            .iter()
            .all(|&j| ratio(j) == lambda.pow(w[j] as i64).unwrap());
    }
    // Extended gcd over the support weights.
    let mut g = 0i64;
    let mut coef: Vec<i64> = vec![0; a.len()];
    for &i in &support {
        let (d, s, t) = ext_gcd(g, w[i] as i64);
        for c in coef.iter_mut() {
            *c *= s;
        }
        coef[i] = t;
        g = d;
    }
    let mut nu = Cyclo::one();
    for &i in &support {
        nu = &nu * &ratio(i).pow(coef[i]).unwrap();
    }
    // ν = λ^g; each ratio must equal ν^{wᵢ/g}.
    support
        .iter()
        .all(|&i| ratio(i) == nu.pow(w[i] as i64 / g).unwrap())
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (d, s, t) = ext_gcd(b, a.rem_euclid(b));
        (d, t, s - (a.div_euclid(b)) * t)
    }
}

pub fn is_fixed_point(f: &ProjMap, p: &ProjPoint) -> Result<bool, MapError> {
    Ok(f.eval(p)?.equivalent(p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypersurface {
    pub ambient: Ambient,
    pub f: MultiPoly,
}

impl Hypersurface {
    pub fn new(ambient: &Ambient, f: MultiPoly) -> Result<Hypersurface, MapError> {
        if f.is_zero() {
            return Err(MapError::Vanishing);
        }
        let w = ambient
            .weights()
            .map(<[u32]>::to_vec)
            .unwrap_or_else(|| vec![1; ambient.nvars()]);
        if f.weighted_degree(&w).is_none() {
            return Err(MapError::NotHomogeneous(0));
        }
        Ok(Hypersurface {
            ambient: ambient.clone(),
            f,
        })
    }
}

/// λ with F∘f = λ·F, or `None` when F is not semi-invariant.
pub fn semi_invariance(s: &Hypersurface, f: &ProjMap) -> Result<Option<Cyclo>, MapError> {
    if s.ambient != f.ambient {
        return Err(MapError::AmbientMismatch(
            s.ambient.name.clone(),
            f.ambient.name.clone(),
        ));
    }
    Ok(pull_back_factor(&s.f, &f.comps))
}

/// λ with F(c₀, …, cₙ) = λ·F for a raw component tuple, so that the factor
/// refers to that representative rather than to the canonical one.
pub fn pull_back_factor(f: &MultiPoly, comps: &[MultiPoly]) -> Option<Cyclo> {
    let pulled = f.substitute(comps);
    let (e, c) = f.leading_term()?;
    let lambda = &pulled.coeff(e) / c;
    (pulled == f.scale(&lambda)).then_some(lambda)
}

/// Whether every pulled-back equation lies in the span of the equations.
pub fn span_invariance(eqs: &[MultiPoly], f: &ProjMap) -> bool {
    eqs.iter()
        .all(|q| span_coefficients(&f.pull_back(q), eqs).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> ProjMap {
        ProjMap::parse(&Ambient::p2(), s).unwrap()
    }

    #[test]
    fn quadratic_involution() {
        let q = m("(yz : xz : xy)");
        assert!(compose(&q, &q).unwrap().is_identity());
        assert_eq!(order(&q, ORDER_CAP, DEGREE_CAP), Order::Finite(2));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(m("(2x : 2y : 2z)"), m("(x : y : z)"));
        assert_eq!(m("(x*y : y^2 : y*z)"), m("(x : y : z)"));
        assert!(ProjMap::parse(&Ambient::p2(), "(x : y^2 : z)").is_err());
        assert!(ProjMap::parse(&Ambient::p2(), "(0 : 0 : 0)").is_err());
    }

    #[test]
    fn orders_and_commutation() {
        assert_eq!(
            order(&m("(y : z : x)"), ORDER_CAP, DEGREE_CAP),
            Order::Finite(3)
        );
        assert!(!commute(&m("(y : x : z)"), &m("(x : z : y)")).unwrap());
        assert!(commute(&m("(x : -y : z)"), &m("(x : y : zeta(3) z)")).unwrap());
    }

    #[test]
    fn tuple_splitting() {
        assert_eq!(
            parse_tuple("(x2 : x1) (y1 : y2)").unwrap(),
            vec!["x2", "x1", "y1", "y2"]
        );
        assert_eq!(
            parse_tuple("(yz(y - z) : x)").unwrap(),
            vec!["yz(y - z)", "x"]
        );
        assert!(parse_tuple("(x : y").is_err());
    }

    #[test]
    fn weighted_points() {
        let a = Ambient::from_name("P(3,1,1,2)").unwrap();
        let p = ProjPoint::from_ints(&a, &[1, 0, 0, 1]).unwrap();
        let q = p.rescale(&Cyclo::int(2));
        assert_eq!(q.coords()[0], Cyclo::int(8));
        assert!(p.equivalent(&q));
        let r = ProjPoint::from_ints(&a, &[8, 0, 0, 3]).unwrap();
        assert!(!p.equivalent(&r));
        let s = ProjPoint::from_ints(&a, &[-1, 0, 0, 1]).unwrap();
        assert!(p.equivalent(&s));
    }

    #[test]
    fn fixed_points() {
        let p = ProjPoint::from_ints(&Ambient::p2(), &[1, 1, 1]).unwrap();
        assert!(is_fixed_point(&m("(yz : xz : xy)"), &p).unwrap());
        let base = ProjPoint::from_ints(&Ambient::p2(), &[1, 0, 0]).unwrap();
        assert_eq!(
            is_fixed_point(&m("(yz : xz : xy)"), &base),
            Err(MapError::BaseLocus)
        );
    }
}
