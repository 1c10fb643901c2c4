//! Line-oriented corpus of generator tables and the per-row verifier.
//!
//! Row format:
//! `name | ambient | weights | F = <expr>[, <expr>] | gen = <tuple> ; <tuple> | expect order=a,b structure=d1,d2`
//! with `F = -` for rows without a surface and `weights` either `-` or a
//! comma list (ambient `P`). Comment lines start with `#`; the comments
//! directly above a row are kept as its notes.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use super::{
    commute, compose, order, semi_invariance, span_invariance, Ambient, Hypersurface, ProjMap,
    DEGREE_CAP, ORDER_CAP,
};
use crate::exactmath::{Cyclo, MultiPoly};
use crate::Order;

/// Closure stops once the group exceeds this many elements.
pub const GROUP_CAP: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("corpus line {line}: {message}")]
pub struct CorpusError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct CorpusRow {
    pub name: String,
    pub line: usize,
    pub ambient: Ambient,
    pub equations: Vec<MultiPoly>,
    pub generators: Vec<ProjMap>,
    pub orders: Vec<u64>,
    pub structure: Vec<u64>,
    pub notes: Vec<String>,
}

impl CorpusRow {
    pub fn cardinality(&self) -> u64 {
        self.structure.iter().product()
    }
}

fn field<'a>(s: &'a str, key: &str, line: usize) -> Result<&'a str, CorpusError> {
    let s = s.trim();
    s.strip_prefix(key)
        .map(str::trim_start)
        .and_then(|r| r.strip_prefix('='))
        .map(str::trim)
        .ok_or_else(|| CorpusError {
            line,
            message: format!("expected '{key} = ...', got '{s}'"),
        })
}

fn int_list(s: &str, line: usize) -> Result<Vec<u64>, CorpusError> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<u64>().map_err(|_| CorpusError {
                line,
                message: format!("bad integer '{t}'"),
            })
        })
        .collect()
}

fn parse_expect(s: &str, line: usize) -> Result<(Vec<u64>, Vec<u64>), CorpusError> {
    let body = s.trim().strip_prefix("expect").ok_or(CorpusError {
        line,
        message: "expected 'expect'".into(),
    })?;
    let (mut ord, mut st) = (None, None);
    for part in body.split_whitespace() {
        let (k, v) = part.split_once('=').ok_or(CorpusError {
            line,
            message: format!("bad expectation '{part}'"),
        })?;
        match k {
            "order" => ord = Some(int_list(v, line)?),
            "structure" => st = Some(int_list(v, line)?),
            _ => {
                return Err(CorpusError {
                    line,
                    message: format!("unknown expectation '{k}'"),
                })
            }
        }
    }
    match (ord, st) {
        (Some(o), Some(s)) => Ok((o, s)),
        _ => Err(CorpusError {
            line,
            message: "need both order= and structure=".into(),
        }),
    }
}

fn parse_row(text: &str, line: usize, notes: Vec<String>) -> Result<CorpusRow, CorpusError> {
    let err = |m: String| CorpusError { line, message: m };
    let parts: Vec<&str> = text.split('|').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(err(format!(
            "expected 6 '|'-separated fields, got {}",
            parts.len()
        )));
    }
    let name = parts[0].to_string();
    if name.is_empty() || name.contains(char::is_whitespace) {
        return Err(err(format!("bad row name '{name}'")));
    }
    let ambient_name = match (parts[1], parts[2]) {
        ("P", "-") => return Err(err("weighted ambient needs weights".into())),
        ("P", w) => format!("P({})", w.replace(' ', "")),
        (a, "-") => a.to_string(),
        (a, _) => return Err(err(format!("ambient {a} takes no weights"))),
    };
    let ambient = Ambient::from_name(&ambient_name).map_err(|e| err(e.to_string()))?;
    let eqs = field(parts[3], "F", line)?;
    let equations = if eqs == "-" {
        Vec::new()
    } else {
        eqs.split(',')
            .map(|e| ambient.parse(e.trim()).map_err(|e| err(e.to_string())))
            .collect::<Result<_, _>>()?
    };
    for f in &equations {
        Hypersurface::new(&ambient, f.clone()).map_err(|e| err(e.to_string()))?;
    }
    let generators = field(parts[4], "gen", line)?
        .split(';')
        .map(|g| {
            ProjMap::parse(&ambient, g.trim()).map_err(|e| err(format!("{e} in '{}'", g.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (orders, structure) = parse_expect(parts[5], line)?;
    if orders.len() != generators.len() {
        return Err(err(format!(
            "{} generators but {} orders",
            generators.len(),
            orders.len()
        )));
    }
    Ok(CorpusRow {
        name,
        line,
        ambient,
        equations,
        generators,
        orders,
        structure,
        notes,
    })
}

/// Parses a whole corpus file; row names must be unique.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRow>, CorpusError> {
    let mut rows = Vec::new();
    let mut names = HashSet::new();
    let mut notes = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let s = raw.trim();
        if s.is_empty() {
            notes.clear();
        } else if let Some(c) = s.strip_prefix('#') {
            notes.push(c.trim().to_string());
        } else {
            let row = parse_row(s, i + 1, std::mem::take(&mut notes))?;
            if !names.insert(row.name.clone()) {
                return Err(CorpusError {
                    line: i + 1,
                    message: format!("duplicate row name '{}'", row.name),
                });
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowReport {
    pub name: String,
    pub ambient: String,
    pub pass: bool,
    pub lambdas: Vec<Option<String>>,
    pub orders: Vec<String>,
    pub group_order: Option<usize>,
    pub structure: Option<Vec<u64>>,
    pub checks: Vec<CheckResult>,
}

impl RowReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// f∘g by plain substitution, without canonical rescaling.
fn raw_compose(f: &[MultiPoly], g: &[MultiPoly]) -> Vec<MultiPoly> {
    f.iter().map(|c| c.substitute(g)).collect()
}

/// For a map whose raw n-th power acts as a weighted scalar μ, returns μ.
fn raw_power_scalar(f: &ProjMap, n: u64) -> Option<Cyclo> {
    let mut p = f.components().to_vec();
    for _ in 1..n {
        p = raw_compose(f.components(), &p);
    }
    let w: Vec<u32> = f
        .ambient()
        .weights()
        .map(<[u32]>::to_vec)
        .unwrap_or_else(|| vec![1; p.len()]);
    let i = w.iter().position(|&wi| wi == 1)?;
    let mu = p[i].coeff(&unit_exps(p.len(), i));
    let nv = p.len();
    let ok = p
        .iter()
        .enumerate()
        .all(|(j, c)| *c == MultiPoly::var(nv, j).scale(&mu.pow(w[j] as i64).unwrap()));
    ok.then_some(mu)
}

fn unit_exps(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Rescales the representative of a linear map of order n so that its raw
/// n-th power is the identity, and returns the resulting semi-invariance
/// factor. Needs the scalar of the raw power to be a root of unity.
pub fn normalized_lambda(f: &ProjMap, n: u64, lambda: &Cyclo, degree: u32) -> Option<Cyclo> {
    let c = raw_power_scalar(f, n)?;
    let m = c.root_of_unity_order(ORDER_CAP as u32)?;
    let j = (0..m as i64).find(|&j| Cyclo::zeta_pow(m, j) == c)?;
    let mu = Cyclo::zeta_pow(m * n as u32, -j);
    Some(lambda * &mu.pow(degree as i64).ok()?)
}

fn surface_degree(row: &CorpusRow, f: &MultiPoly) -> u32 {
    let w: Vec<u32> = row
        .ambient
        .weights()
        .map(<[u32]>::to_vec)
        .unwrap_or_else(|| vec![1; row.ambient.nvars()]);
    f.weighted_degree(&w).unwrap_or(0)
}

fn is_linear(f: &ProjMap) -> bool {
    match f.ambient().weights() {
        Some(w) => f
            .components()
            .iter()
            .zip(w)
            .all(|(c, &wi)| c.weighted_degree(w) == Some(wi)),
        None => f.degree() == 1,
    }
}

/// Elements of the group generated by commuting maps, or `None` past the cap.
pub fn group_closure(
    gens: &[ProjMap],
    cap: usize,
) -> Result<Option<Vec<ProjMap>>, super::MapError> {
    let id = ProjMap::identity(gens[0].ambient());
    let mut seen: BTreeMap<String, ProjMap> = BTreeMap::new();
    seen.insert(id.fmt_tuple(), id.clone());
    let mut frontier = vec![id];
    while let Some(e) = frontier.pop() {
        for g in gens {
            let h = compose(g, &e)?;
            let key = h.fmt_tuple();
            if !seen.contains_key(&key) {
                if seen.len() >= cap {
                    return Ok(None);
                }
                seen.insert(key, h.clone());
                frontier.push(h);
            }
        }
    }
    Ok(Some(seen.into_values().collect()))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Invariant factors (ascending, each dividing the next) of a finite abelian
/// group given the multiset of its element orders. `None` if the counts are
/// not those of an abelian group.
pub fn invariant_factors(element_orders: &[u64]) -> Option<Vec<u64>> {
    let n = element_orders.len() as u64;
    let mut per_prime: Vec<Vec<u32>> = Vec::new();
    for p in prime_factors(n) {
        // #{g : ord(g) | p^k} = p^{Σ min(λ_i, k)}
        let mut logs = vec![0u32];
        let mut k = 1;
        loop {
            let pk = p.checked_pow(k)?;
            let c = element_orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let mut l = 0;
            let mut v = c;
            while v % p == 0 && v > 1 {
                v /= p;
                l += 1;
            }
            if v != 1 {
                return None;
            }
            if l == *logs.last().unwrap() {
                break;
            }
            logs.push(l);
            k += 1;
        }
        // number of parts ≥ k is logs[k] − logs[k−1]
        let mut parts = Vec::new();
        for k in 1..logs.len() {
            let ge_k = logs[k] - logs[k - 1];
            let ge_next = if k + 1 < logs.len() {
                logs[k + 1] - logs[k]
            } else {
                0
            };
            parts.extend(std::iter::repeat(k as u32).take((ge_k - ge_next) as usize));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push(parts.into_iter().map(|e| p.pow(e) as u32).collect());
    }
    let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut f: Vec<u64> = (0..len)
        .map(|i| {
            per_prime
                .iter()
                .map(|v| v.get(i).copied().unwrap_or(1) as u64)
                .product()
        })
        .collect();
    f.reverse();
    (f.iter().product::<u64>() == n).then_some(f)
}

fn order_string(o: Order) -> String {
    match o {
        Order::Finite(n) => n.to_string(),
        Order::OverCap => "over-cap".into(),
    }
}

/// Runs every check on a row; never panics on a mathematical failure.
pub fn verify_row(row: &CorpusRow) -> RowReport {
    let mut checks = Vec::new();
    let mut push = |check: &str, pass: bool, detail: String| {
        checks.push(CheckResult {
            check: check.into(),
            pass,
            detail,
        });
    };

    let orders: Vec<Order> = row
        .generators
        .iter()
        .map(|g| order(g, ORDER_CAP, DEGREE_CAP))
        .collect();
    let mut lambdas = Vec::new();

    // invariance
    if row.equations.is_empty() {
        lambdas = vec![None; row.generators.len()];
        push("invariance", true, "no surface equation".into());
    } else if row.equations.len() == 1 {
        let s =
            Hypersurface::new(&row.ambient, row.equations[0].clone()).expect("checked at parse");
        let deg = surface_degree(row, &s.f);
        let mut bad = Vec::new();
        for (i, (g, o)) in row.generators.iter().zip(&orders).enumerate() {
            match semi_invariance(&s, g) {
                Ok(Some(l)) => {
                    let lam = match o {
                        Order::Finite(n) if is_linear(g) => {
                            normalized_lambda(g, *n, &l, deg).unwrap_or(l)
                        }
                        _ => l,
                    };
                    if let Order::Finite(n) = o {
                        let good = lam
                            .root_of_unity_order(ORDER_CAP as u32)
                            .is_some_and(|k| *n % k as u64 == 0);
                        if !good {
                            bad.push(format!("generator {} has factor {lam} not a root of unity of order dividing {n}", i + 1));
                        }
                    }
                    lambdas.push(Some(lam.to_string()));
                }
                Ok(None) => {
                    bad.push(format!("generator {} does not preserve the surface", i + 1));
                    lambdas.push(None);
                }
                Err(e) => {
                    bad.push(format!("generator {}: {e}", i + 1));
                    lambdas.push(None);
                }
            }
        }
        push(
            "invariance",
            bad.is_empty(),
            if bad.is_empty() {
                "semi-invariant".into()
            } else {
                bad.join("; ")
            },
        );
    } else {
        lambdas = vec![None; row.generators.len()];
        let bad: Vec<String> = row
            .generators
            .iter()
            .enumerate()
            .filter(|(_, g)| !span_invariance(&row.equations, g))
            .map(|(i, _)| format!("generator {} leaves the span of the equations", i + 1))
            .collect();
        push(
            "invariance",
            bad.is_empty(),
            if bad.is_empty() {
                "equations preserved".into()
            } else {
                bad.join("; ")
            },
        );
    }

    // orders
    let got: Vec<String> = orders.iter().copied().map(order_string).collect();
    let ok = orders
        .iter()
        .zip(&row.orders)
        .all(|(o, &e)| *o == Order::Finite(e));
    push(
        "orders",
        ok,
        format!("expected {:?}, got [{}]", row.orders, got.join(", ")),
    );

    // commutation
    let mut bad = Vec::new();
    for i in 0..row.generators.len() {
        for j in i + 1..row.generators.len() {
            match commute(&row.generators[i], &row.generators[j]) {
                Ok(true) => {}
                Ok(false) => bad.push(format!("{}-{}", i + 1, j + 1)),
                Err(e) => bad.push(format!("{}-{}: {e}", i + 1, j + 1)),
            }
        }
    }
    let commuting = bad.is_empty();
    push(
        "commute",
        commuting,
        if commuting {
            "pairwise commuting".into()
        } else {
            format!("non-commuting pairs {}", bad.join(", "))
        },
    );

    // group
    let (mut group_order, mut structure) = (None, None);
    if commuting && orders.iter().all(|o| matches!(o, Order::Finite(_))) {
        match group_closure(&row.generators, GROUP_CAP) {
            Ok(Some(elems)) => {
                group_order = Some(elems.len());
                let cap = elems.len() as u64;
                let eo: Option<Vec<u64>> = elems
                    .iter()
                    .map(|e| match order(e, cap, DEGREE_CAP) {
                        Order::Finite(n) => Some(n),
                        Order::OverCap => None,
                    })
                    .collect();
                structure = eo.as_deref().and_then(invariant_factors);
                push(
                    "cardinality",
                    elems.len() as u64 == row.cardinality(),
                    format!("expected {}, got {}", row.cardinality(), elems.len()),
                );
                push(
                    "structure",
                    structure.as_deref() == Some(&row.structure[..]),
                    format!("expected {:?}, got {:?}", row.structure, structure),
                );
            }
            Ok(None) => push(
                "cardinality",
                false,
                format!("closure exceeded {GROUP_CAP} elements"),
            ),
            Err(e) => push("cardinality", false, e.to_string()),
        }
    } else {
        push(
            "cardinality",
            false,
            "skipped: generators do not commute or have unknown order".into(),
        );
    }

    let pass = checks.iter().all(|c| c.pass);
    RowReport {
        name: row.name.clone(),
        ambient: row.ambient.name.clone(),
        pass,
        lambdas,
        orders: got,
        group_order,
        structure,
        checks,
    }
}

/// Distinct row names, for the uniqueness invariant of reports.
pub fn row_names(rows: &[CorpusRow]) -> BTreeSet<&str> {
    rows.iter().map(|r| r.name.as_str()).collect()
}
