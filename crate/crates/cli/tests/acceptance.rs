//! One PASS/FAIL line per acceptance criterion. Criteria listed in
//! `KNOWN_FAILURES` fail for reasons explained in the README; any other
//! failure makes this target exit nonzero.

use std::process::ExitCode;

use cremona_lab::checks::{run, CRITERIA};

const KNOWN_FAILURES: [u32; 2] = [2, 7];

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for id in 1..=CRITERIA {
        let c = run(id);
        let limit = c
            .limit
            .map_or("none".to_string(), |l| format!("{:.0}s", l.as_secs_f64()));
        println!(
            "[{}] criterion {:>2}: {} ({:.2}s, limit {limit}): {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.elapsed.as_secs_f64(),
            c.detail
        );
        if c.pass {
            passed += 1;
        } else if !KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    println!("{passed}/{CRITERIA} criteria pass; known failures {KNOWN_FAILURES:?}");
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures {unexpected:?}");
        ExitCode::FAILURE
    }
}
