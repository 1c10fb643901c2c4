//! The table and identity checks behind `verify-tables`, one per numbered
//! acceptance criterion.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use cremona_core::cremaps::corpus::{
    group_closure, invariant_factors, parse_corpus, verify_row, GROUP_CAP,
};
use cremona_core::cremaps::special::{cs24_generators, verify_dp4_embedding};
use cremona_core::cremaps::{self, Ambient, ProjMap, DEGREE_CAP, ORDER_CAP};
use cremona_core::exactmath::{Cyclo, RatFunc, UniPoly};
use cremona_core::jonquieres::{self as jq, JonqElement};
use cremona_core::piclattice::{
    arcond_search, arithmetic_genus, cauchy_gap, enumerate_conic_classes, enumerate_exceptional,
    exceptional_graph, intersect, is_single_cycle, neighbor_profile, DivClass,
};
use cremona_core::weylaction::{self as weyl, PicAut};
use cremona_core::Order;

use crate::BUNDLED_CORPUS;

pub const EXCEPTIONAL_COUNTS: [usize; 8] = [1, 3, 6, 10, 16, 27, 56, 240];
pub const CONIC_COUNTS: [usize; 8] = [1, 2, 3, 5, 10, 27, 146, 2160];
pub const CRITERIA: u32 = 11;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub limit: Option<Duration>,
}

impl Check {
    pub fn within_limit(&self) -> bool {
        self.limit.is_none_or(|l| self.elapsed <= l)
    }
}

/// Wall-clock limits for the timed criteria.
fn limit(id: u32) -> Option<Duration> {
    let secs = match id {
        1 => 5.0,
        2 => 10.0,
        4 => 2.0,
        6 => 1.0,
        8 => 5.0,
        9 => 60.0,
        _ => return None,
    };
    Some(Duration::from_secs_f64(secs))
}

fn name(id: u32) -> &'static str {
    match id {
        1 => "exceptional class counts",
        2 => "conic bundle class counts",
        3 => "neighbor profiles",
        4 => "Geiser and Bertini matrices",
        5 => "Cs.24 identities",
        6 => "fourth root of a de Jonquieres involution",
        7 => "odd-order root constructor",
        8 => "DP4 embedding residuals",
        9 => "bundled corpus",
        10 => "arcond search and Cauchy check",
        11 => "property suites",
        _ => "unknown",
    }
}

/// Runs criterion `id`; the pass flag includes the time limit.
pub fn run(id: u32) -> Check {
    let t = Instant::now();
    let (ok, detail) = match id {
        1 => exceptional_counts(),
        2 => conic_counts(),
        3 => profiles(),
        4 => geiser_bertini(),
        5 => cs24_suite(),
        6 => fourth_root(),
        7 => odd_roots(),
        8 => dp4_embedding(),
        9 => corpus(),
        10 => appendix_oracles(),
        11 => property_suites(),
        _ => (false, format!("no criterion {id}")),
    };
    let mut c = Check {
        id,
        name: name(id),
        pass: ok,
        detail,
        elapsed: t.elapsed(),
        limit: limit(id),
    };
    c.pass &= c.within_limit();
    c
}

pub fn run_all() -> Vec<Check> {
    (1..=CRITERIA).map(run).collect()
}

type Outcome = (bool, String);

fn counts(f: impl Fn(usize) -> usize, want: &[usize; 8]) -> Outcome {
    let got: Vec<usize> = (1..=8).map(f).collect();
    let ok = got == want;
    let mut detail = format!("got {got:?}");
    if !ok {
        let diffs: Vec<String> = (0..8)
            .filter(|&i| got[i] != want[i])
            .map(|i| format!("r={}: {} vs table {}", i + 1, got[i], want[i]))
            .collect();
        detail.push_str(&format!("; mismatch {}", diffs.join(", ")));
    }
    (ok, detail)
}

fn exceptional_counts() -> Outcome {
    counts(
        |r| enumerate_exceptional(r).map_or(0, |v| v.len()),
        &EXCEPTIONAL_COUNTS,
    )
}

fn conic_counts() -> Outcome {
    counts(
        |r| enumerate_conic_classes(r).map_or(0, |v| v.len()),
        &CONIC_COUNTS,
    )
}

fn profiles() -> Outcome {
    let want: [(usize, &[(i64, usize)]); 3] = [
        (6, &[(1, 10)]),
        (7, &[(1, 27), (2, 1)]),
        (8, &[(1, 126), (2, 56), (3, 1)]),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (r, w) in want {
        let w: BTreeMap<i64, usize> = w.iter().copied().collect();
        match neighbor_profile(r) {
            Ok(p) => {
                ok &= p == w;
                parts.push(format!("r={r} {p:?}"));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("r={r} error {e}"));
            }
        }
    }
    (ok, parts.join("; "))
}

/// Order 2, the given Φ multiplicities, fixed rank 1, and D ↦ −cK − D on
/// every exceptional class.
fn involution_facts(m: &PicAut, phi2: usize, c: i64) -> Result<(), String> {
    if !weyl::is_weyl(m.matrix()) {
        return Err("not a Weyl element".into());
    }
    if weyl::order(m, weyl::ORDER_CAP) != Order::Finite(2) {
        return Err("order is not 2".into());
    }
    let mults = weyl::eigenvalue_multiplicities(m).map_err(|e| e.to_string())?;
    if mults != BTreeMap::from([(1, 1), (2, phi2)]) {
        return Err(format!("eigenvalue multiplicities {mults:?}"));
    }
    let rank = weyl::fixed_rank(std::slice::from_ref(m)).map_err(|e| e.to_string())?;
    if rank != 1 {
        return Err(format!("fixed rank {rank}"));
    }
    let k = DivClass::canonical(m.r());
    let classes = enumerate_exceptional(m.r()).map_err(|e| e.to_string())?;
    let perm = weyl::act_on_exceptional(m).map_err(|e| e.to_string())?;
    for (i, d) in classes.iter().enumerate() {
        if classes[perm[i]] != k.scale(-c).sub(d) {
            return Err(format!("class {i} is not sent to -{c}K - D"));
        }
    }
    Ok(())
}

fn geiser_bertini() -> Outcome {
    let g = involution_facts(&weyl::make_geiser(), 7, 1);
    let b = involution_facts(&weyl::make_bertini(), 8, 2);
    let show = |r: &Result<(), String>| r.as_ref().map_or_else(|e| e.clone(), |_| "ok".into());
    (
        g.is_ok() && b.is_ok(),
        format!("geiser {}; bertini {}", show(&g), show(&b)),
    )
}

fn cs24_suite() -> Outcome {
    let run = || -> Result<Vec<String>, cremaps::MapError> {
        let amb = Ambient::p2();
        let (g1, g2) = cs24_generators();
        let square = ProjMap::parse(&amb, "(-x : y : z)")?;
        let product = ProjMap::parse(&amb, "(x(y + z) : z(y - z) : -y(y - z))")?;
        let mut bad = Vec::new();
        if cremaps::compose(&g1, &g1)? != square {
            bad.push("g1^2".to_string());
        }
        if cremaps::compose(&g2, &g2)? != square {
            bad.push("g2^2".into());
        }
        for (n, g) in [("g1", &g1), ("g2", &g2)] {
            if cremaps::order(g, ORDER_CAP, DEGREE_CAP) != Order::Finite(4) {
                bad.push(format!("order of {n}"));
            }
        }
        if !cremaps::commute(&g1, &g2)? {
            bad.push("commutation".into());
        }
        if cremaps::compose(&g1, &g2)? != product {
            bad.push("g1 g2".into());
        }
        match group_closure(&[g1, g2], GROUP_CAP)? {
            Some(elems) => {
                let orders: Vec<u64> = elems
                    .iter()
                    .map(|e| match cremaps::order(e, ORDER_CAP, DEGREE_CAP) {
                        Order::Finite(k) => k,
                        Order::OverCap => 0,
                    })
                    .collect();
                if elems.len() != 8 || invariant_factors(&orders) != Some(vec![2, 4]) {
                    bad.push(format!(
                        "group of order {} with orders {orders:?}",
                        elems.len()
                    ));
                }
            }
            None => bad.push("group closure over cap".into()),
        }
        Ok(bad)
    };
    match run() {
        Ok(bad) if bad.is_empty() => (
            true,
            "squares, orders, commutation, product and group (2,4) ok".into(),
        ),
        Ok(bad) => (false, format!("failed: {}", bad.join(", "))),
        Err(e) => (false, e.to_string()),
    }
}

fn fourth_root() -> Outcome {
    let run = || -> Result<Vec<String>, jq::JonqError> {
        let a = jq::fourth_root_example();
        let a4 = jq::power_j(&a, 4);
        let sigma = JonqElement::sigma(&RatFunc::from_poly(UniPoly::from_ints(&[-1, 0, 0, 0, 1])))?;
        let mut bad = Vec::new();
        if jq::order_j(&a, jq::JONQ_ORDER_CAP) != Order::Finite(8) {
            bad.push("order 8".to_string());
        }
        if a4 != sigma {
            bad.push(format!("alpha^4 = {a4}"));
        }
        if jq::det_class(&a4)?.radical != UniPoly::from_ints(&[-1, 0, 0, 0, 1]) {
            bad.push("radical".into());
        }
        let r = jq::ramification_data(&a4)?;
        if (r.two_k, r.genus) != (4, 1) {
            bad.push(format!("ramification {r:?}"));
        }
        if !jq::is_twisting(&a4)?.absolute {
            bad.push("twisting".into());
        }
        Ok(bad)
    };
    match run() {
        Ok(bad) if bad.is_empty() => (
            true,
            "order 8, alpha^4 = sigma_{x^4-1}, 2k = 4, genus 1, twisting".into(),
        ),
        Ok(bad) => (false, format!("failed: {}", bad.join(", "))),
        Err(e) => (false, e.to_string()),
    }
}

fn odd_roots() -> Outcome {
    let cases: [(u32, &[i64]); 3] = [(1, &[0, 1]), (3, &[1, 1]), (5, &[2, 0, 1])];
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, g) in cases {
        let g = RatFunc::from_poly(UniPoly::from_ints(g));
        match jq::build_root_odd(n, &g) {
            Ok(_) => parts.push(format!("(n={n}, g={g}) ok")),
            Err(e) => {
                ok = false;
                parts.push(format!("(n={n}, g={g}) {e}"));
            }
        }
    }
    (ok, parts.join("; "))
}

fn dp4_embedding() -> Outcome {
    let r = verify_dp4_embedding();
    (r.pass, format!("residuals [{}]", r.residuals.join(", ")))
}

fn corpus() -> Outcome {
    let rows = match parse_corpus(BUNDLED_CORPUS) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let reports: Vec<_> = rows.par_iter().map(verify_row).collect();
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.name.as_str())
        .collect();
    let detail = if failed.is_empty() {
        format!("{} of {} rows pass", reports.len(), reports.len())
    } else {
        format!(
            "{} of {} rows fail: {}",
            failed.len(),
            reports.len(),
            failed.join(", ")
        )
    };
    (failed.is_empty(), detail)
}

fn appendix_oracles() -> Outcome {
    let sols = arcond_search(100);
    let unique = sols.len() == 1;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut cauchy_ok = 0;
    for _ in 0..1000 {
        let k = rng.gen_range(1..=8);
        let a: Vec<i64> = (0..k).map(|_| rng.gen_range(-9..=9)).collect();
        let gap = cauchy_gap(&a);
        if gap >= 0 && (gap == 0) == a.iter().all(|v| *v == a[0]) {
            cauchy_ok += 1;
        }
    }
    let found: Vec<String> = sols
        .iter()
        .map(|s| format!("m={} s={:?}", s.m, s.s))
        .collect();
    (
        unique && cauchy_ok == 1000,
        format!(
            "arcond solutions [{}]; cauchy {cauchy_ok}/1000",
            found.join(", ")
        ),
    )
}

fn small_poly(rng: &mut StdRng) -> RatFunc {
    let deg = rng.gen_range(0..=2);
    let c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-3..=3)).collect();
    RatFunc::from_poly(UniPoly::from_ints(&c))
}

fn random_element(rng: &mut StdRng, trivial_beta: bool) -> JonqElement {
    const BETAS: [[i64; 4]; 5] = [
        [1, 0, 0, 1],
        [-1, 0, 0, 1],
        [1, 1, 0, 1],
        [0, 1, 1, 0],
        [2, 0, 0, 1],
    ];
    loop {
        let a = [
            small_poly(rng),
            small_poly(rng),
            small_poly(rng),
            small_poly(rng),
        ];
        let b = if trivial_beta {
            BETAS[0]
        } else {
            BETAS[rng.gen_range(0..BETAS.len())]
        };
        if let Ok(e) = JonqElement::new(a, b.map(Cyclo::int)) {
            return e;
        }
    }
}

fn enumeration_invariants() -> Result<(), String> {
    for r in 1..=8 {
        let k = DivClass::canonical(r);
        let exc = enumerate_exceptional(r).map_err(|e| e.to_string())?;
        for c in &exc {
            let facts = (intersect(c, c), intersect(c, &k), arithmetic_genus(c));
            if facts != (Ok(-1), Ok(-1), Ok(0)) {
                return Err(format!("exceptional class {c:?} at r={r}"));
            }
        }
        for f in enumerate_conic_classes(r).map_err(|e| e.to_string())? {
            if (intersect(&f, &f), intersect(&f, &k)) != (Ok(0), Ok(-2)) {
                return Err(format!("conic class {f:?} at r={r}"));
            }
        }
    }
    Ok(())
}

fn r8_involutions() -> Result<(), String> {
    let k = DivClass::canonical(8);
    let exc = enumerate_exceptional(8).map_err(|e| e.to_string())?;
    if exc
        .iter()
        .any(|d| exc.binary_search(&k.scale(-2).sub(d)).is_err())
    {
        return Err("-2K - D leaves the exceptional classes".into());
    }
    let conics = enumerate_conic_classes(8).map_err(|e| e.to_string())?;
    if conics
        .iter()
        .any(|f| conics.binary_search(&k.scale(-4).sub(f)).is_err())
    {
        return Err("-4K - f leaves the conic classes".into());
    }
    Ok(())
}

fn hexagon() -> Result<(), String> {
    let g = exceptional_graph(3).map_err(|e| e.to_string())?;
    is_single_cycle(&g)
        .then_some(())
        .ok_or_else(|| "r=3 graph is not a hexagon".into())
}

fn det_class_conjugation(rng: &mut StdRng) -> Result<(), String> {
    for i in 0..100 {
        let g = loop {
            let g = small_poly(rng);
            if !g.is_zero() {
                break g;
            }
        };
        let s = JonqElement::sigma(&g).map_err(|e| e.to_string())?;
        let c = random_element(rng, true);
        let conj = jq::compose_j(&jq::compose_j(&c, &s), &c.inverse());
        let (a, b) = (jq::det_class(&s), jq::det_class(&conj));
        let same = match (&a, &b) {
            (Ok(a), Ok(b)) => a.same_class(b) == Some(true),
            _ => false,
        };
        if !same {
            return Err(format!("conjugator {i}: {c}"));
        }
    }
    Ok(())
}

fn bihomogeneous_homomorphism(rng: &mut StdRng) -> Result<(), String> {
    for i in 0..100 {
        let (a, b) = (random_element(rng, false), random_element(rng, false));
        let lhs = jq::to_bihomogeneous(&jq::compose_j(&a, &b)).map_err(|e| e.to_string())?;
        let fa = jq::to_bihomogeneous(&a).map_err(|e| e.to_string())?;
        let fb = jq::to_bihomogeneous(&b).map_err(|e| e.to_string())?;
        let rhs = cremaps::compose(&fa, &fb).map_err(|e| e.to_string())?;
        if lhs != rhs {
            return Err(format!("pair {i}: {a} and {b}"));
        }
    }
    Ok(())
}

fn property_suites() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let suites: [(&str, Result<(), String>); 5] = [
        ("enumeration", enumeration_invariants()),
        ("r8 involutions", r8_involutions()),
        ("hexagon", hexagon()),
        (
            "det class conjugation x100",
            det_class_conjugation(&mut rng),
        ),
        (
            "bihomogeneous homomorphism x100",
            bihomogeneous_homomorphism(&mut rng),
        ),
    ];
    let ok = suites.iter().all(|(_, r)| r.is_ok());
    let parts: Vec<String> = suites
        .iter()
        .map(|(n, r)| match r {
            Ok(()) => format!("{n} ok"),
            Err(e) => format!("{n} FAILED ({e})"),
        })
        .collect();
    (ok, parts.join("; "))
}
