//! Command implementations for `cremona-lab`. Each command yields an
//! [`Outcome`] holding a pass flag, a JSON report and a text report.

pub mod checks;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use cremona_core::cremaps::corpus::{parse_corpus, verify_row};
use cremona_core::cremaps::{self, Ambient, ProjMap, DEGREE_CAP};
use cremona_core::jonquieres::{self as jq, JonqElement};
use cremona_core::piclattice::{enumerate_conic_classes, enumerate_exceptional, DivClass};
use cremona_core::weylaction::{self as weyl, PicAut};
use cremona_core::Order;

pub const BUNDLED_CORPUS: &str = include_str!("../corpus/tables.txt");

/// Bad input: exit code 2.
#[derive(Debug, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    UsageError(e.to_string()).into()
}

pub struct Outcome {
    pub pass: bool,
    pub json: Value,
    pub text: String,
}

impl Outcome {
    /// Pretty JSON; keys come out sorted, so equal reports are byte-identical.
    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("values serialize")
    }
}

fn order_value(o: Order) -> Value {
    match o {
        Order::Finite(k) => json!(k),
        Order::OverCap => json!("over_cap"),
    }
}

fn order_text(o: Order) -> String {
    match o {
        Order::Finite(k) => k.to_string(),
        Order::OverCap => "over cap".into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ClassKind {
    Exc,
    Conic,
}

pub fn enumerate(r: usize, kind: ClassKind) -> anyhow::Result<Outcome> {
    let classes = match kind {
        ClassKind::Exc => enumerate_exceptional(r),
        ClassKind::Conic => enumerate_conic_classes(r),
    }
    .map_err(usage)?;
    let json = Value::Array(
        classes
            .iter()
            .map(|c| json!({"d": c.d, "m": c.m}))
            .collect(),
    );
    let mut text: Vec<String> = classes.iter().map(fmt_class).collect();
    text.push(format!("{} classes", classes.len()));
    Ok(Outcome {
        pass: true,
        json,
        text: text.join("\n"),
    })
}

fn fmt_class(c: &DivClass) -> String {
    let mut terms: Vec<(i64, String)> = Vec::new();
    if c.d != 0 {
        terms.push((c.d, "L".into()));
    }
    for (i, m) in c.m.iter().enumerate() {
        if *m != 0 {
            terms.push((-m, format!("E{}", i + 1)));
        }
    }
    let mut s = String::new();
    for (k, (v, b)) in terms.iter().enumerate() {
        let mag = if v.abs() == 1 {
            String::new()
        } else {
            v.abs().to_string()
        };
        match (k, *v < 0) {
            (0, false) => s.push_str(&format!("{mag}{b}")),
            (0, true) => s.push_str(&format!("-{mag}{b}")),
            (_, false) => s.push_str(&format!(" + {mag}{b}")),
            (_, true) => s.push_str(&format!(" - {mag}{b}")),
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

fn pairing_rule(c: i64) -> String {
    if c == 1 {
        "D -> -K - D".into()
    } else {
        format!("D -> -{c}K - D")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Builtin {
    Geiser,
    Bertini,
    Dp4quad,
    Dp4cubic,
}

pub fn weyl_builtin(b: Builtin) -> anyhow::Result<Outcome> {
    let (m, pairing) = match b {
        Builtin::Geiser => (weyl::make_geiser(), Some(1)),
        Builtin::Bertini => (weyl::make_bertini(), Some(2)),
        Builtin::Dp4quad => (weyl::make_dp4_quadratic(), None),
        Builtin::Dp4cubic => (weyl::make_dp4_cubic(), None),
    };
    weyl_report(&m, pairing)
}

/// A row-major JSON array of integer rows.
pub fn weyl_matrix(text: &str) -> anyhow::Result<Outcome> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(text).map_err(usage)?;
    match PicAut::new(rows.clone()) {
        Ok(m) => weyl_report(&m, None),
        Err(weyl::WeylError::NotWeyl) => Ok(Outcome {
            pass: false,
            json: json!({"matrix": rows, "weyl": false}),
            text: "matrix does not preserve the intersection form and K".into(),
        }),
        Err(e) => Err(usage(e)),
    }
}

/// `pairing = Some(c)` also checks D ↦ −cK − D on exceptional classes.
fn weyl_report(m: &PicAut, pairing: Option<i64>) -> anyhow::Result<Outcome> {
    let ord = weyl::order(m, weyl::ORDER_CAP);
    let eig = weyl::eigenvalue_multiplicities(m).ok();
    let rank = weyl::fixed_rank(std::slice::from_ref(m))?;
    let orbits = weyl::orbit_divisibility(std::slice::from_ref(m)).ok();
    let pairs = pairing.map(|c| {
        let k = DivClass::canonical(m.r());
        let classes = enumerate_exceptional(m.r()).unwrap_or_default();
        weyl::act_on_exceptional(m)
            .map(|p| {
                classes
                    .iter()
                    .enumerate()
                    .all(|(i, d)| classes[p[i]] == k.scale(-c).sub(d))
            })
            .unwrap_or(false)
    });
    let eig_json: Option<Value> = eig.as_ref().map(|e| {
        e.iter()
            .map(|(d, n)| (format!("Phi{d}"), json!(n)))
            .collect::<serde_json::Map<_, _>>()
            .into()
    });
    let json = json!({
        "r": m.r(),
        "weyl": true,
        "order": order_value(ord),
        "trace": m.trace(),
        "eigenvalues": eig_json,
        "fixed_rank": rank,
        "orbits": orbits,
        "pairing": pairing.map(|c| json!({"rule": pairing_rule(c), "holds": pairs})),
    });
    let mut text = vec![
        format!(
            "r = {}, order {}, trace {}",
            m.r(),
            order_text(ord),
            m.trace()
        ),
        format!("eigenvalue multiplicities {:?}", eig),
        format!("fixed rank {rank}"),
    ];
    if let Some(o) = &orbits {
        text.push(format!(
            "orbit sizes {:?}, divisible {:?}",
            o.orbit_sizes, o.divisible
        ));
    }
    if let (Some(c), Some(h)) = (pairing, pairs) {
        text.push(format!(
            "{} on all exceptional classes: {h}",
            pairing_rule(c)
        ));
    }
    Ok(Outcome {
        pass: pairs.unwrap_or(true),
        json,
        text: text.join("\n"),
    })
}

fn ambient(name: &str) -> anyhow::Result<Ambient> {
    Ambient::from_name(name).map_err(usage)
}

fn parse_map(amb: &Ambient, text: &str) -> anyhow::Result<ProjMap> {
    ProjMap::parse(amb, text).map_err(usage)
}

/// maps[0] ∘ maps[1] ∘ …, the last map applied first.
pub fn compose_maps(
    amb_name: &str,
    maps: &[String],
    expect: Option<&str>,
) -> anyhow::Result<Outcome> {
    let amb = ambient(amb_name)?;
    let parsed: Vec<ProjMap> = maps
        .iter()
        .map(|m| parse_map(&amb, m))
        .collect::<Result<_, _>>()?;
    let mut acc = ProjMap::identity(&amb);
    for m in &parsed {
        acc = cremaps::compose(&acc, m)?;
    }
    let expected = expect.map(|e| parse_map(&amb, e)).transpose()?;
    let matches = expected.as_ref().map(|e| *e == acc);
    let json = json!({
        "ambient": amb.name,
        "result": acc.fmt_tuple(),
        "degree": acc.degree(),
        "matches_expected": matches,
    });
    let mut text = acc.fmt_tuple();
    if let Some(m) = matches {
        text.push_str(&format!("\nmatches expected: {m}"));
    }
    Ok(Outcome {
        pass: matches.unwrap_or(true),
        json,
        text,
    })
}

pub fn order_map(
    amb_name: &str,
    map: &str,
    cap: u64,
    expect: Option<u64>,
) -> anyhow::Result<Outcome> {
    let amb = ambient(amb_name)?;
    let f = parse_map(&amb, map)?;
    let ord = cremaps::order(&f, cap, DEGREE_CAP);
    let matches = expect.map(|e| ord == Order::Finite(e));
    let json = json!({
        "ambient": amb.name,
        "map": f.fmt_tuple(),
        "order": order_value(ord),
        "matches_expected": matches,
    });
    let mut text = format!("order {}", order_text(ord));
    if let Some(m) = matches {
        text.push_str(&format!("\nmatches expected: {m}"));
    }
    Ok(Outcome {
        pass: matches.unwrap_or(true),
        json,
        text,
    })
}

pub fn jonq(element: &str, analyze: bool, power: Option<u64>) -> anyhow::Result<Outcome> {
    let mut e = jq::parse_element(element).map_err(usage)?;
    if let Some(k) = power {
        e = jq::power_j(&e, k);
    }
    if !analyze {
        return Ok(Outcome {
            pass: true,
            json: json!({"element": e.to_string()}),
            text: e.to_string(),
        });
    }
    Ok(jonq_analysis(&e))
}

fn jonq_analysis(e: &JonqElement) -> Outcome {
    let ord = jq::order_j(e, jq::JONQ_ORDER_CAP);
    let involution = jq::is_involution(e);
    let delta = jq::det_class(e).ok().map(|c| {
        json!({
            "radical": c.radical.fmt_var("x"),
            "constant": c.constant.to_string(),
            "status": c.status,
        })
    });
    let twisting = (involution && e.has_trivial_beta())
        .then(|| jq::is_twisting(e).ok())
        .flatten();
    let ram = twisting
        .filter(|t| t.absolute)
        .and_then(|_| jq::ramification_data(e).ok());
    let json = json!({
        "element": e.to_string(),
        "order": order_value(ord),
        "involution": involution,
        "delta": delta,
        "twisting": twisting.map(|t| json!({"absolute": t.absolute, "effective": t.effective})),
        "two_k": ram.map(|r| r.two_k),
        "genus": ram.map(|r| r.genus),
    });
    let mut text = vec![
        e.to_string(),
        format!("order {}", order_text(ord)),
        format!("involution {involution}"),
    ];
    if let Ok(c) = jq::det_class(e) {
        let status = serde_json::to_value(c.status)
            .map(|v| v.as_str().unwrap_or_default().to_string())
            .unwrap_or_default();
        text.push(format!(
            "delta: radical {}, constant {}, {status}",
            c.radical.fmt_var("x"),
            c.constant
        ));
    }
    if let Some(t) = twisting {
        text.push(format!(
            "twisting over C: {}, over the coefficient field: {:?}",
            t.absolute, t.effective
        ));
    }
    if let Some(r) = ram {
        text.push(format!("2k = {}, genus {}", r.two_k, r.genus));
    }
    Outcome {
        pass: true,
        json,
        text: text.join("\n"),
    }
}

/// Verifies every row; rows are checked in parallel and reported in file order.
pub fn corpus_run(text: &str) -> anyhow::Result<Outcome> {
    let rows = parse_corpus(text).map_err(usage)?;
    let reports: Vec<_> = rows.par_iter().map(verify_row).collect();
    let failed = reports.iter().filter(|r| !r.pass).count();
    let json = json!({
        "rows": reports,
        "total": reports.len(),
        "failed": failed,
    });
    let mut lines: Vec<String> = reports
        .iter()
        .map(|r| {
            let mut l = format!(
                "{} {} {}",
                if r.pass { "ok  " } else { "FAIL" },
                r.name,
                r.ambient
            );
            for c in r.failures() {
                l.push_str(&format!(" | {}: {}", c.check, c.detail));
            }
            l
        })
        .collect();
    lines.push(format!("{} rows, {} failed", reports.len(), failed));
    Ok(Outcome {
        pass: failed == 0,
        json,
        text: lines.join("\n"),
    })
}

pub fn corpus_list(text: &str) -> anyhow::Result<Outcome> {
    let rows = parse_corpus(text).map_err(usage)?;
    let names: Vec<&str> = rows.iter().map(|r| r.name.as_str()).collect();
    Ok(Outcome {
        pass: true,
        json: json!(names),
        text: names.join("\n"),
    })
}

pub fn verify_tables() -> Outcome {
    let results = checks::run_all();
    let pass = results.iter().all(|c| c.pass);
    let text: Vec<String> = results
        .iter()
        .map(|c| {
            format!(
                "[{}] {:>2} {} ({:.2}s): {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                c.name,
                c.elapsed.as_secs_f64(),
                c.detail
            )
        })
        .collect();
    Outcome {
        pass,
        json: json!({"checks": results, "pass": pass}),
        text: text.join("\n"),
    }
}
