use std::process::{Command, Output};

fn pgroup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgroup")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_p3_passes_and_is_deterministic() {
    let a = pgroup(&["verify-counterexample", "--p", "3", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    let b = pgroup(&["verify-counterexample", "--p", "3", "--format", "json", "--threads", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    for c in checks {
        let keys: Vec<&str> = c.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["anchor", "check_id", "details", "status"]);
    }
    let family = checks.iter().find(|c| c["check_id"] == "witness.family").unwrap();
    assert_eq!(family["details"]["members"], 17);
    assert_eq!(family["details"]["intersection_order"], 1);
    let text = stdout(&pgroup(&["verify-counterexample", "--p", "3"]));
    assert!(text.contains("result: PASS"));
    assert!(text.contains("CITED e(G) = p^3 = 27"));
}

#[test]
fn verify_rejects_p2() {
    let o = pgroup(&["verify-counterexample", "--p", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd prime required"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pgroup(&["verify-counterexample"]).status.code(), Some(2));
    assert_eq!(pgroup(&["cohomology", "--group", "dihedral:4", "--max-degree", "2"]).status.code(), Some(2));
    assert_eq!(pgroup(&["snf", "--matrix", "1 2; 3"]).status.code(), Some(2));
}

#[test]
fn cohomology_examples() {
    let text = stdout(&pgroup(&["cohomology", "--group", "cyclic:9", "--max-degree", "6"]));
    for n in [2, 4, 6] {
        assert!(text.contains(&format!("H^{n} = Z/9  (exponent 9)")), "{text}");
    }
    assert!(text.contains("e_lowdeg(6) = 9"));

    let o = pgroup(&["cohomology", "--group", "abelian:3,3", "--max-degree", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for n in 1..=4 {
        let e = &v["report"]["degrees"][n]["exponent"];
        assert!(*e == 3 || (n == 1 && *e == 1), "degree {n}: {e}");
    }
    assert_eq!(v["e_lowdeg"], 3);

    let o = pgroup(&["cohomology", "--group", "cyclic:9", "--max-degree", "2", "--engine", "bar"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cohomology_from_table_matches_abelian_engine() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z6.txt");
    let table: String = (0..6).map(|a| (0..6).map(|b| ((a + b) % 6).to_string()).collect::<Vec<_>>().join(" ") + "\n").collect();
    std::fs::write(&path, table).unwrap();
    let group = format!("table:{}", path.display());
    let bar = pgroup(&["cohomology", "--group", &group, "--max-degree", "3", "--format", "json"]);
    assert_eq!(bar.status.code(), Some(0), "{}", String::from_utf8_lossy(&bar.stderr));
    let tensor = pgroup(&["cohomology", "--group", "abelian:2,3", "--max-degree", "3", "--format", "json"]);
    let strip = |o: &Output| {
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["report"]["degrees"].clone()
    };
    assert_eq!(strip(&bar), strip(&tensor));
}

#[test]
fn group_info_examples() {
    let text = stdout(&pgroup(&["group-info", "--builtin", "sl2", "--p", "3"]));
    assert!(text.contains("order: 729") && text.contains("exponent: 9"), "{text}");
    let text = stdout(&pgroup(&["group-info", "--builtin", "zero:1", "--p", "3"]));
    assert!(text.contains("order: 9") && text.contains("exponent: 9"), "{text}");

    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("sl2.txt");
    std::fs::write(&good, "p 3\ndim 3\nnames h x+ x-\nbracket 0 1 -> 0 2 0\nbracket 0 2 -> 0 0 -2\nbracket 1 2 -> 1 0 0\n").unwrap();
    let text = stdout(&pgroup(&["group-info", "--algebra", good.to_str().unwrap()]));
    assert!(text.contains("order: 729"));
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "p 3\ndim 2\nbracket 0 1 -> 1 0\nbracket 1 0 -> 1 0\n").unwrap();
    let o = pgroup(&["group-info", "--algebra", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not alternating"));
}

#[test]
fn subalgebras_and_snf() {
    let text = stdout(&pgroup(&["subalgebras", "--builtin", "sl2", "--p", "3"]));
    assert!(text.starts_with("4 subalgebras of dimension 2"));
    assert!(text.contains("span{(1, 0, 2), (0, 1, 1)}"));
    let o = pgroup(&["snf", "--matrix", "2 4; 6 8", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["diagonal"], serde_json::json!(["2", "4"]));
}
