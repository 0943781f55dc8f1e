use std::process::{Command, Output};

fn qweb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qweb")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

#[test]
fn eval_prints_a_matrix() {
    let out = qweb(&["eval", "-n", "1", "merge(1,1) ; split(1,1)", "--basis"]);
    assert!(out.status.success());
    let v = &stdout_json(&out)[0];
    assert!(v.get("domain_labels").is_some());
}

#[test]
fn eval_reads_files_and_emits_the_ast() {
    let path = std::env::temp_dir().join(format!("qweb-cli-{}.web", std::process::id()));
    std::fs::write(&path, "merge(1,1) ; split(1,1)\n").unwrap();
    let from_file = qweb(&["eval", "-n", "1", "--file", path.to_str().unwrap()]);
    let from_arg = qweb(&["eval", "-n", "1", "merge(1,1) ; split(1,1)"]);
    std::fs::remove_file(&path).unwrap();
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_arg.stdout);

    let out = qweb(&["eval", "-n", "1", "merge(1,1) ; split(1,1)", "--emit", "json"]);
    assert!(out.status.success());
    let v = &stdout_json(&out)[0];
    assert_eq!(v["domain"], "^2");
    assert_eq!(v["ast"]["compose"]["top"]["merge"], serde_json::json!([1, 1]));
}

#[test]
fn eval_rejects_ill_typed_input_with_exit_two() {
    let out = qweb(&["eval", "-n", "1", "merge(1,1) ; dot(3)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("type error"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qweb(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qweb(&["check", "--only", "no-such-check"]).status.code(), Some(2));
    assert_eq!(qweb(&["lr", "--lambda", "2,2", "--nu", "1", "--mu", "3"]).status.code(), Some(2));
}

#[test]
fn check_runs_a_filtered_group_deterministically() {
    let args = ["check", "--only", "R4", "--kmax", "3", "--nmax", "1", "--no-timing"];
    let a = qweb(&args);
    let b = qweb(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let lines = stdout_json(&a);
    assert_eq!(lines.len(), 5);
    assert!(lines.iter().all(|l| l["status"] == "pass" && l["group"] == "R4"));
}

#[test]
fn check_list_names_every_entry() {
    let out = qweb(&["check", "--list"]);
    assert!(out.status.success());
    let groups: std::collections::BTreeSet<String> =
        stdout_json(&out).iter().map(|l| l["group"].as_str().unwrap().to_string()).collect();
    for g in 1..=12 {
        assert!(groups.contains(&format!("R{g}")), "R{g} missing");
    }
}

#[test]
fn sergeev_subcommands() {
    let out = qweb(&["sergeev", "mul", "-k", "2", "p[2,1]", "c[1]"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)[0]["product"], "c[2] * p[2,1]");

    let out = qweb(&["sergeev", "elambda", "--lambda", "2,1"]);
    assert!(out.status.success());
    assert!(stdout_json(&out)[0]["kappa"].is_string());

    assert!(qweb(&["sergeev", "clasp", "-k", "3"]).status.success());
    assert!(qweb(&["sergeev", "psi", "-k", "2", "-n", "1", "c[1]"]).status.success());
}

#[test]
fn combinatorics_subcommands() {
    let out = qweb(&["lr", "--lambda", "3,2,1", "--nu", "8,4,1", "--mu", "8,5,4,2"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)[0]["coefficient"], 1);

    let out = qweb(&["staircase", "--mu", "8,5,4,2", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)[0]["word"], "121'2'31'2'21'1111");

    let out = qweb(&["schurp", "--lambda", "2", "--vars", "2"]);
    assert!(out.status.success());
}

#[test]
fn homdim_counts_equivariant_maps() {
    let out = qweb(&["homdim", "-n", "1", "--from", "^1^1", "--to", "^1^1"]);
    assert!(out.status.success());
    let v = &stdout_json(&out)[0];
    let total = v["even"].as_u64().unwrap() + v["odd"].as_u64().unwrap();
    assert!(total > 0);
}
