use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cartdec"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn demo_file(name: &str) -> PathBuf {
    let o = run(&["demo", name]);
    assert_eq!(o.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("cartdec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(format!("{name}.json"));
    std::fs::write(&p, &o.stdout).unwrap();
    p
}

#[test]
fn a6_demo_classifies_as_2sim() {
    let p = demo_file("a6-2sim");
    let o = run(&["classify", "--json", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["label"], "2sim");
    assert_eq!(r["omega_size"], 36);
    assert!(r["checked"].as_array().unwrap().iter().any(|c| c == "strips.fi_uniform"));
}

#[test]
fn member_replaced_by_m_fails_properness() {
    let p = demo_file("a6-2sim");
    let mut f: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let t: Vec<Value> = f["t_generators"].as_array().unwrap().iter().map(|g| Value::Array(vec![g.clone()])).collect();
    f["system_members"][0] = Value::Array(t);
    let o = run_stdin(&["classify", "--json", "-"], &f.to_string());
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert!(r["failed"].as_array().unwrap().iter().any(|c| c == "eq.member.proper"));
}

#[test]
fn oracle_lists_the_a5_pair() {
    let p = demo_file("a5-2nsim");
    let o = run(&["oracle", "--json", "--max-len", "3", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let i = r["input_system_index"].as_u64().unwrap() as usize;
    assert_eq!(r["systems"][i]["label"], "2nsim");
    assert_eq!(r["bijection"]["violations"].as_array().unwrap().len(), 0);
    assert_eq!(r["agreement"]["tested"], r["agreement"]["agreed"]);
}

#[test]
fn max_len_comes_from_the_environment() {
    let p = demo_file("a5-2nsim");
    let o = bin()
        .args(["oracle", "--json", p.to_str().unwrap()])
        .env("CARTDEC_MAX_LEN", "1")
        .output()
        .unwrap();
    let r = json(&o);
    assert_eq!(r["max_len"], 1);
    assert_eq!(r["systems"].as_array().unwrap().len(), 1);
    assert!(r["input_system_index"].is_null());
}

#[test]
fn element_cap_is_enforced() {
    let p = demo_file("a6a6-1s");
    let o = run(&["verify", "--json", "--element-cap", "100", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let p = demo_file("a6a6-2sim");
    let a = run(&["properties", p.to_str().unwrap()]);
    let b = run(&["properties", p.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn construct_reproduces_the_strip_demo() {
    let p = demo_file("a6a6-1s");
    let o = run(&["construct", "1s", "--json", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["matches_input_system"], true);
    assert_eq!(r["omega_size"], 12960);
}

#[test]
fn fast_check_level_skips_the_graph_suites() {
    let p = demo_file("a6-2sim");
    let fast = json(&run(&["properties", "--json", "--check-level", "fast", p.to_str().unwrap()]));
    let full = json(&run(&["properties", "--json", p.to_str().unwrap()]));
    let n = |r: &Value| r["suites"].as_array().unwrap().len();
    assert_eq!((n(&fast), n(&full)), (3, 5));
}

#[test]
fn input_errors_exit_2_with_a_path() {
    let o = run_stdin(&["verify", "--json", "-"], r#"{"t_generators": ["(0 1"], "t_degree": 2, "k": 1, "m_omega_generators": []}"#);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"]["path"], "$.t_generators[0]");
    let o = run(&["demo", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["extract-graph", "--json", demo_file("a5a5a5-s").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
