//! Sparse multivariate polynomials over Q(ζ_N).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Cyclo, UniPoly};

/// Ordered variable names; polynomial variables are indices into a roster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roster {
    names: Vec<String>,
}

impl Roster {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Roster {
        Roster {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    /// Every variable name admitted by the expression grammar.
    pub fn standard() -> Roster {
        Roster::new(&[
            "w", "x", "y", "z", "u", "v", "x1", "x2", "x3", "x4", "x5", "y1", "y2", "t",
        ])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Terms keyed by exponent vectors; lexicographic key order, so the last
/// entry is the leading term with the first roster variable most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Cyclo>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> MultiPoly {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Cyclo) -> MultiPoly {
        MultiPoly::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> MultiPoly {
        MultiPoly::constant(nvars, Cyclo::one())
    }

    pub fn var(nvars: usize, i: usize) -> MultiPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiPoly::monomial(nvars, e, Cyclo::one())
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: Cyclo) -> MultiPoly {
        assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiPoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, it: impl IntoIterator<Item = (Vec<u32>, Cyclo)>) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        for (e, c) in it {
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: &Cyclo) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &Cyclo)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Cyclo {
        self.terms.get(exps).cloned().unwrap_or_else(Cyclo::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn as_constant(&self) -> Option<Cyclo> {
        if self.is_zero() {
            Some(Cyclo::zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    pub fn conductor(&self) -> u32 {
        self.terms
            .values()
            .fold(1, |acc, c| num::integer::lcm(acc, c.conductor()))
    }

    pub fn leading_term(&self) -> Option<(&Vec<u32>, &Cyclo)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Cyclo) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Scales so the leading coefficient is 1.
    pub fn normalized(&self) -> MultiPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        let mut b = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Common weighted degree of all terms, or `None` for zero or mixed degrees.
    pub fn weighted_degree(&self, weights: &[u32]) -> Option<u32> {
        let mut it = self
            .terms
            .keys()
            .map(|e| e.iter().zip(weights).map(|(a, w)| a * w).sum::<u32>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.weighted_degree(&vec![1; self.nvars]).is_some()
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    /// Replaces variable i by `images[i]`; the result lives in the images' ring.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let n = images.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|p| vec![MultiPoly::one(n), p.clone()])
            .collect();
        let mut out = MultiPoly::zero(n);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k as usize];
            }
            out = &out + &t;
        }
        out
    }

    pub fn eval(&self, at: &[Cyclo]) -> Cyclo {
        assert_eq!(at.len(), self.nvars);
        let mut acc = Cyclo::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &at[i].pow(k as i64).unwrap();
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Moves variable i to index `map[i]` of a ring with `nvars` variables.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> MultiPoly {
        MultiPoly::from_terms(
            nvars,
            self.terms.iter().map(|(e, c)| {
                let mut ne = vec![0; nvars];
                for (i, &k) in e.iter().enumerate() {
                    ne[map[i]] += k;
                }
                (ne, c.clone())
            }),
        )
    }

    pub fn from_unipoly(nvars: usize, var: usize, p: &UniPoly) -> MultiPoly {
        MultiPoly::from_terms(
            nvars,
            p.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; nvars];
                e[var] = k as u32;
                (e, c.clone())
            }),
        )
    }

    /// Univariate view when only `var` occurs.
    pub fn to_unipoly(&self, var: usize) -> Option<UniPoly> {
        let mut c = vec![Cyclo::zero(); self.degree_in(var) as usize + 1];
        for (e, x) in &self.terms {
            if e.iter().enumerate().any(|(i, &k)| i != var && k > 0) {
                return None;
            }
            c[e[var] as usize] = x.clone();
        }
        Some(UniPoly::from_coeffs(c))
    }

    /// Coefficients of var^k, each free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::zero(self.nvars); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[var] = 0;
            out[e[var] as usize].add_term(ne, c);
        }
        out
    }

    fn sub_scaled_shifted(&mut self, c: &Cyclo, shift: &[u32], d: &MultiPoly) {
        for (e, x) in &d.terms {
            let ne: Vec<u32> = e.iter().zip(shift).map(|(a, b)| a + b).collect();
            self.add_term(ne, &-&(x * c));
        }
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (de, dc) = d.leading_term()?;
        let (de, dinv) = (de.clone(), dc.inv().ok()?);
        if d.is_constant() {
            return Some(self.scale(&dinv));
        }
        let mut r = self.clone();
        let mut q = MultiPoly::zero(self.nvars);
        while let Some((re, rc)) = r.leading_term() {
            if re.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let shift: Vec<u32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            let c = rc * &dinv;
            r.sub_scaled_shifted(&c, &shift, d);
            q.add_term(shift, &c);
        }
        Some(q)
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.exact_div(self).is_some()
    }

    /// Normalized greatest common divisor (leading coefficient 1).
    pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
        let n = a.nvars;
        if a.is_zero() {
            return b.normalized();
        }
        if b.is_zero() {
            return a.normalized();
        }
        if a.is_constant() || b.is_constant() {
            return MultiPoly::one(n);
        }
        let mut best: Option<(usize, u32)> = None;
        for v in 0..n {
            let (da, db) = (a.degree_in(v), b.degree_in(v));
            if da == 0 && db == 0 {
                continue;
            }
            if da == 0 {
                return MultiPoly::gcd(a, &b.content_in(v));
            }
            if db == 0 {
                return MultiPoly::gcd(&a.content_in(v), b);
            }
            let m = da.max(db);
            if best.is_none_or(|(_, bm)| m < bm) {
                best = Some((v, m));
            }
        }
        let v = best.expect("nonconstant inputs").0;
        let (ca, cb) = (a.content_in(v), b.content_in(v));
        let pa = a.exact_div(&ca).expect("content divides");
        let pb = b.exact_div(&cb).expect("content divides");
        let c = MultiPoly::gcd(&ca, &cb);
        let g = primitive_prs(pa, pb, v);
        (&g * &c).normalized()
    }

    pub fn gcd_all<'a>(nvars: usize, ps: impl IntoIterator<Item = &'a MultiPoly>) -> MultiPoly {
        let mut g = MultiPoly::zero(nvars);
        for p in ps {
            g = MultiPoly::gcd(&g, p);
            if g.is_constant() && !g.is_zero() {
                break;
            }
        }
        g
    }

    /// gcd of the coefficients with respect to `var`.
    pub fn content_in(&self, var: usize) -> MultiPoly {
        let cs = self.coefficients_in(var);
        MultiPoly::gcd_all(self.nvars, cs.iter().filter(|c| !c.is_zero()))
    }

    fn primitive_part_in(&self, var: usize) -> MultiPoly {
        let c = self.content_in(var);
        self.exact_div(&c).expect("content divides").normalized()
    }

    pub fn fmt_with(&self, roster: &Roster) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        roster.name(i).to_string()
                    } else {
                        format!("{}^{}", roster.name(i), k)
                    }
                })
                .collect();
            let mono = mono.join("*");
            let s = c.to_string();
            let compound = |t: &str| t.contains(" + ") || t.contains(" - ");
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) if !compound(rest) => (true, rest.to_string()),
                _ => (false, s.clone()),
            };
            let body = if mono.is_empty() {
                if compound(&mag) {
                    format!("({mag})")
                } else {
                    mag
                }
            } else if mag == "1" {
                mono
            } else if compound(&mag) {
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

fn primitive_prs(a: MultiPoly, b: MultiPoly, v: usize) -> MultiPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        if b.is_zero() {
            return a.primitive_part_in(v);
        }
        if b.degree_in(v) == 0 {
            return MultiPoly::one(a.nvars);
        }
        let r = pseudo_remainder(&a, &b, v);
        a = b;
        b = if r.is_zero() {
            r
        } else {
            r.primitive_part_in(v)
        };
    }
}

fn pseudo_remainder(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let n = a.nvars;
    let db = b.degree_in(v);
    let lb = b.coefficients_in(v).pop().unwrap();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coefficients_in(v).pop().unwrap();
        let mut e = vec![0; n];
        e[v] = dr - db;
        let shift = &MultiPoly::monomial(n, e, Cyclo::one()) * &lr;
        r = &(&lb * &r) - &(&shift * b);
    }
    r
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        let (mut big, small) = if self.terms.len() >= o.terms.len() {
            (self.clone(), o)
        } else {
            (o.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c);
        }
        big
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), &-c);
        }
        r
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        let mut r = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, &(c1 * c2));
            }
        }
        r
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&Cyclo::int(-1))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        f.write_str(&self.fmt_with(&Roster::new(&names)))
    }
}
