use assert_cmd::Command;
use std::path::PathBuf;
use zperiod::duality::a_odd_involution;

fn zperiod() -> Command {
    Command::cargo_bin("zperiod").unwrap()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = zperiod().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn verdicts(tsv: &str) -> Vec<String> {
    tsv.lines().skip(1).map(|l| l.split('\t').take(2).collect::<Vec<_>>().join("\t")).collect()
}

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../zperiod/data").join(rel)
}

#[test]
fn verify_all_on_a_tensor_product() {
    let (code, json) = run(&["verify-all", "--graph", "tensor(A3,A2)"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!((v["h"].as_u64(), v["h_prime"].as_u64(), v["tropical_period"].as_u64()), (Some(4), Some(3), Some(14)));
    assert!(v["conditions"].as_array().unwrap().iter().all(|c| c["verdict"] == "true"));
}

#[test]
fn verify_all_on_doubled_arrows_is_consistently_false() {
    let (code, tsv) = run(&["verify-all", "--graph", "mult(2,tensor(A2,A2))", "--format", "tsv", "--period", "24"]);
    assert_eq!(code, 1);
    assert!(verdicts(&tsv).iter().all(|l| !l.ends_with("true")), "{tsv}");
}

#[test]
fn verify_all_on_an_exceptional_bigraph() {
    let (code, tsv) = run(&["verify-all", "--graph", "exc:E6≡E6*E6≡E6", "--format", "tsv"]);
    assert_eq!(code, 0);
    let v = verdicts(&tsv);
    for name in ["admissible", "subadditive_labeling", "fixed_point", "tropical_periodic"] {
        assert!(v.contains(&format!("{name}\ttrue")), "{tsv}");
    }
}

#[test]
fn jobs_do_not_change_the_verdicts() {
    let a = run(&["--jobs", "1", "verify-all", "--graph", "ADpow(3,2)", "--format", "tsv"]);
    let b = run(&["--jobs", "4", "verify-all", "--graph", "ADpow(3,2)", "--format", "tsv"]);
    assert_eq!(a.0, b.0);
    assert_eq!(verdicts(&a.1), verdicts(&b.1));
}

#[test]
fn tropical_tsv_with_assigned_initial_data() {
    let (code, tsv) = run(&["tropical", "--graph", "tensor(A3,A1)", "--lambda", "r1c1:3,r2c1:-2,r3c1:7", "--t-max", "13"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines[0], "t\tvertex\tvalue");
    assert_eq!(&lines[1..4], ["0\tr1c1\t3", "0\tr3c1\t7", "1\tr2c1\t-2"]);
    // slice 13 repeats slice 1
    assert!(lines.contains(&"13\tr2c1\t-2"));
    zperiod().args(["tropical", "--graph", "tensor(A3,A1)", "--lambda", "r9c9:1"]).assert().code(2);
}

#[test]
fn classify_reports_broken_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mono.json");
    std::fs::write(&path, r#"{"vertices":[{"id":"a","eps":0},{"id":"b","eps":0}],"gamma":[["a","b"]]}"#).unwrap();
    let (code, json) = run(&["classify", "--graph", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["failure_reason"], "NotBipartite");
}

#[test]
fn dualize_a_symmetric_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a5.json");
    std::fs::write(&path, a_odd_involution(3).to_json()).unwrap();
    let (code, json) = run(&["dualize", "--graph", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    // A5 folds to D4
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(v["gamma"].as_array().unwrap().len(), 3);
}

#[test]
fn certificates_replay_and_tampering_fails() {
    let file = data("reductions/ApowD3-2.json");
    zperiod().args(["reduce", "--graph", "ApowD(3,2)", "--check", file.to_str().unwrap()]).assert().success();
    let text = std::fs::read_to_string(&file).unwrap();
    let mut certs: serde_json::Value = serde_json::from_str(&text).unwrap();
    let w = certs[0]["witness"].as_object_mut().unwrap();
    let keys: Vec<String> = w.keys().take(2).cloned().collect();
    let (a, b) = (w[&keys[0]].clone(), w[&keys[1]].clone());
    w.insert(keys[0].clone(), b);
    w.insert(keys[1].clone(), a);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, certs.to_string()).unwrap();
    zperiod().args(["reduce", "--graph", "ApowD(3,2)", "--check", bad.to_str().unwrap()]).assert().code(1);
}

#[test]
fn gen_round_trips_through_classify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let (_, json) = run(&["gen", "--graph", "twist(D4)"]);
    std::fs::write(&path, json).unwrap();
    let (code, report) = run(&["classify", "--graph", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!((v["h"].as_u64(), v["h_prime"].as_u64()), (Some(6), Some(6)));
}

#[test]
fn labelings_and_fixed_points() {
    let (code, json) = run(&["labeling", "--graph", "tensor(A3,A1)", "--method", "period-sum"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!((v["r1c1"].as_i64(), v["r2c1"].as_i64(), v["r3c1"].as_i64()), (Some(4), Some(6), Some(4)));
    let (code, json) = run(&["fixed-point", "--graph", "tensor(A2,A1)"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((v["r1c1"].as_f64().unwrap() - golden).abs() < 1e-12);
    zperiod().args(["fixed-point", "--graph", "mult(2,tensor(A2,A2))"]).assert().code(2);
}

#[test]
fn propagate_and_birational_outputs() {
    let (code, frames) = run(&["propagate", "--graph", "tensor(A3,A1)", "--source", "r2c1", "--t-max", "3"]);
    assert_eq!(code, 0);
    assert!(frames.starts_with("t = 0\n"));
    let (code, dump) = run(&["birational", "--graph", "tensor(A3,A1)", "--t-max", "3"]);
    assert_eq!(code, 0);
    assert_eq!(dump.lines().count(), 6);
    zperiod().args(["birational", "--graph", "exc:D6*D6", "--budget-terms", "100"]).assert().code(2);
}
