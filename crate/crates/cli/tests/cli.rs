use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cremona-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = lab(args);
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn enumerate_json_lists_classes() {
    let v = json(&["enumerate", "--r", "6", "--kind", "exc", "--format", "json"]);
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 27);
    assert_eq!(
        arr[0],
        serde_json::json!({"d": 0, "m": [-1, 0, 0, 0, 0, 0]})
    );
    let v = json(&["--json", "enumerate", "--r", "2", "--kind", "conic"]);
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(lab(&["enumerate", "--r", "9"]).status.code(), Some(2));
}

#[test]
fn weyl_builtins() {
    let v = json(&["weyl", "--builtin", "bertini", "--report", "json"]);
    assert_eq!(v["order"], 2);
    assert_eq!(v["eigenvalues"], serde_json::json!({"Phi1": 1, "Phi2": 8}));
    assert_eq!(v["pairing"]["holds"], true);
    let o = lab(&["weyl", "--matrix", "[[1,0],[0,2]]"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(lab(&["weyl", "--matrix", "[[1,0],"]).status.code(), Some(2));
}

#[test]
fn compose_and_order() {
    let g1 = "(yz : xy : -xz)";
    let o = lab(&["compose", g1, g1, "--expect", "(-x : y : z)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = lab(&["compose", g1, g1, "--expect", "(x : y : z)"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&[
        "order",
        "--json",
        "--ambient",
        "P(2,1,1,1)",
        "(-w : x : y : z)",
        "--expect",
        "2",
    ]);
    assert_eq!(v["order"], 2);
    assert_eq!(v["matches_expected"], true);
    assert_eq!(lab(&["order", "(x : y"]).status.code(), Some(2));
    assert_eq!(
        lab(&["order", "--ambient", "P7", "(x : y : z)"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn jonq_analysis_of_fourth_power() {
    let v = json(&[
        "jonq",
        "--element",
        "0, x^4 - 1, 1, 0",
        "--analyze",
        "--json",
    ]);
    assert_eq!(v["order"], 2);
    assert_eq!(v["involution"], true);
    assert_eq!(v["delta"]["radical"], "x^4 - 1");
    assert_eq!(v["delta"]["constant"], "-1");
    assert_eq!(v["twisting"]["absolute"], true);
    assert_eq!(v["genus"], 1);
    let s = "(x+1)(zeta(8) - zeta(8)^3 - 1 - x), x^4 - 1, 1, (x+1)(zeta(8) - zeta(8)^3 - 1 - x); zeta(4), 0, 0, 1";
    let v = json(&["jonq", "--element", s, "--analyze", "--json"]);
    assert_eq!(v["order"], 8);
    assert_eq!(v["delta"], serde_json::Value::Null);
    assert_eq!(
        lab(&["jonq", "--element", "0, 0, 0, 0"]).status.code(),
        Some(2)
    );
}

#[test]
fn corpus_file_and_bundled() {
    let dir = std::env::temp_dir().join(format!("cremona-lab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.txt");
    std::fs::write(
        &good,
        "C.3 | P2 | - | F = - | gen = (x : zeta(3) y : z) | expect order=3 structure=3\n",
    )
    .unwrap();
    let v = json(&["corpus", "run", good.to_str().unwrap(), "--json"]);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["rows"][0]["name"], "C.3");
    let bad = dir.join("bad.txt");
    std::fs::write(
        &bad,
        "C.3 | P2 | - | F = - | gen = (x : zeta(3) y : z) | expect order=4 structure=4\n",
    )
    .unwrap();
    assert_eq!(
        lab(&["corpus", "run", bad.to_str().unwrap()]).status.code(),
        Some(1)
    );
    let broken = dir.join("broken.txt");
    std::fs::write(&broken, "C.3 | P2 | -\n").unwrap();
    assert_eq!(
        lab(&["corpus", "run", broken.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lab(&["corpus", "run", dir.join("missing.txt").to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();

    let names = json(&["corpus", "list", "--json"]);
    let names: Vec<&str> = names
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let mut uniq = names.clone();
    uniq.sort();
    uniq.dedup();
    assert_eq!(uniq.len(), names.len());
    assert!(names.contains(&"2.G44"));
}

#[test]
fn bundled_corpus_report_is_deterministic() {
    let a = lab(&["corpus", "run", "--json", "--jobs", "4"]);
    let b = lab(&["corpus", "run", "--json", "--jobs", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.len() >= 60);
    // exact scalars travel as strings
    assert!(rows
        .iter()
        .flat_map(|r| r["lambdas"].as_array().unwrap())
        .all(|l| l.is_string() || l.is_null()));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lab(&[]).status.code(), Some(2));
    assert_eq!(
        lab(&["verify-tables", "--frobnicate"]).status.code(),
        Some(2)
    );
    assert_eq!(lab(&["--help"]).status.code(), Some(0));
}
