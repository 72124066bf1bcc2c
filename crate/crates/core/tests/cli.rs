//! The binary end to end.

use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normgrowth")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = bin(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn classify_t2_json() {
    let v = json(&["classify", "10;11", "--format", "json"]);
    assert_eq!(v["class"], "polynomial");
    assert_eq!(v["certificate"]["words"], serde_json::json!(["(2)^inf", "2(1)^inf"]));
    assert_eq!(v["dimension"], 0.0);
}

#[test]
fn classify_bounded_reports_sup_norm() {
    let text = stdout(&bin(&["classify", "01;10"]));
    assert!(text.contains("class: bounded"));
    assert!(text.contains("sup_norm: 2"));
    let v = json(&["classify", "01;10", "--format", "json"]);
    assert_eq!(v["sup_norm"], "2");
}

#[test]
fn norms_text_and_json_agree() {
    let o = bin(&["norms", "01;10", "--n", "4"]);
    assert_eq!(stdout(&o).trim(), "2 2 2 2");
    let v = json(&["norms", "10;11", "--n", "5", "--format", "json"]);
    assert_eq!(v["norms"], serde_json::json!(["3", "4", "5", "6", "7"]));
    let text = stdout(&bin(&["norms", "10;11", "--n", "5"]));
    let from_text: Vec<&str> = text.split_whitespace().collect();
    assert_eq!(from_text, ["3", "4", "5", "6", "7"]);
}

#[test]
fn words_with_head_and_tail() {
    let o = bin(&["words", "10;11", "--length", "3"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines, ["111", "211", "221", "222"]);
    let o = bin(&["words", "10;11", "--length", "3", "--head", "2", "--tail", "1"]);
    assert_eq!(stdout(&o).lines().collect::<Vec<_>>(), ["211", "221"]);
    let o = bin(&["words", "11;11", "--length", "12", "--cap", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn infinite_census() {
    let text = stdout(&bin(&["infinite", "100;100;110"]));
    assert_eq!(text.lines().next(), Some("finite 4"));
    let v = json(&["infinite", "10;11", "--format", "json"]);
    assert_eq!(v["census"], "countably_infinite");
    assert_eq!(v["count"], Value::Null);
}

#[test]
fn canonical_json_roundtrips() {
    let v = json(&["canonical", "110;011;000", "--format", "json"]);
    let text = v["matrix"].as_str().unwrap().to_string();
    let again = json(&["canonical", &text, "--format", "json"]);
    assert_eq!(again["matrix"], v["matrix"]);
}

#[test]
fn equiv_and_dim() {
    assert_eq!(stdout(&bin(&["equiv", "10;11", "11;01"])).lines().next(), Some("true"));
    assert_eq!(stdout(&bin(&["equiv", "10;11", "11;11"])).trim(), "false");
    let v = json(&["dim", "11;10", "--format", "json"]);
    let want = ((1.0 + 5f64.sqrt()) / 2.0).ln() / 2f64.ln();
    assert!((v["value"].as_f64().unwrap() - want).abs() < 1e-9);
    let v = json(&["dim", "010;001;000", "--format", "json"]);
    assert_eq!(v["empty_word_space"], true);
}

#[test]
fn matrix_from_file() {
    let dir = std::env::temp_dir().join(format!("normgrowth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.txt");
    let b = dir.join("b.txt");
    std::fs::write(&a, "10\n11\n").unwrap();
    std::fs::write(&b, "11\r\n01\r\n").unwrap();
    let v = json(&["classify", "--file", a.to_str().unwrap(), "--format", "json"]);
    assert_eq!(v["matrix"], "10;11");
    let o = bin(&["equiv", "--file", a.to_str().unwrap(), "--file", b.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("true"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    let o = bin(&["classify", "01;00"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 2"));
    assert_eq!(bin(&["classify", "01;0"]).status.code(), Some(1));
    assert_eq!(bin(&["classify"]).status.code(), Some(1));
    assert_eq!(bin(&["verify", "--claim", "nonsense"]).status.code(), Some(1));
    assert_eq!(bin(&["verify", "--claim", "p2_dual", "--b", "5"]).status.code(), Some(1));
    assert_eq!(bin(&["gen", "--b", "9"]).status.code(), Some(1));
}

#[test]
fn verify_sup_extremal_b3() {
    let o = bin(&["verify", "--claim", "sup_extremal", "--b", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["claim_id"], "sup_extremal");
    assert_eq!(v["counterexamples"], serde_json::json!([]));
    assert_eq!(v["population"], v["passes"]);
}

#[test]
fn verify_is_reproducible() {
    let run = || {
        let mut v = json(&["verify", "--claim", "word_norm_bridge", "--b", "2", "--format", "json"]);
        v["elapsed_ms"] = Value::Null;
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn gen_streams_p1_matrices() {
    let o = bin(&["gen", "--b", "2", "--filter", "p1"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 11);
    for l in &lines {
        assert_eq!(json(&["classify", l, "--format", "json"])["matrix"], l.as_str());
    }
    assert_eq!(stdout(&bin(&["gen", "--b", "3"])).lines().count(), 511);
}
