use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_troplift"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &Value) -> Output {
    use std::io::Write;
    let mut child = bin()
        .args(args)
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.to_string().as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({}): {}", e, String::from_utf8_lossy(&o.stdout)))
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

#[test]
fn fixtures_replay_exactly() {
    let o = run(&["fixtures"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["passed"], json!(true));
    assert_eq!(v["examples"].as_array().unwrap().len(), 3);
}

#[test]
fn stored_bundles_match_the_library() {
    let dir = std::env::temp_dir().join(format!("troplift-bundles-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    assert_eq!(run(&["fixtures", "--write", dir.to_str().unwrap()]).status.code(), Some(0));
    for name in ["banana.json", "glued_lines.json"] {
        let fresh: Value = serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap();
        let stored: Value = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
        assert_eq!(fresh, stored, "{}", name);
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn twisting_divisors_of_the_banana() {
    let o = run(&["twistdiv", &path("banana.json"), "--edge", "e1", "--vertex", "v", "--top", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout_json(&o),
        json!([{}, {"e3": 1}, {"e2": 1, "e3": 1}, {"e2": 1, "e3": 1}, {"e1": 1, "e2": 2, "e3": 2}])
    );
}

#[test]
fn twist_and_undo() {
    let o = run(&["twist", &path("banana.json"), "--vertex", "v"]);
    let v = stdout_json(&o);
    assert_eq!(v["multidegree"], json!({"w": {"v": 2, "v'": 1}, "mu": {"e1": 2, "e2": 0, "e3": 1}}));
    let o = run(&["twist", &path("banana.json"), "--vertex", "v", "--edge", "v|v'", "--times", "3"]);
    assert_eq!(stdout_json(&o)["multidegree"]["w"], json!({"v": 1, "v'": 4}));
    let o = run(&["twist", &path("banana.json"), "--vertex", "v", "--times", "-1"]);
    let once = run(&["twist", &path("banana.json"), "--vertex", "v", "--negative"]);
    assert_eq!(o.stdout, once.stdout);
}

#[test]
fn glued_lines_are_not_smoothable() {
    let o = run(&["classify", &path("glued_lines.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["verdict"], json!("NotSmoothable"));
    assert_eq!(v["rule"], json!("thm4.5"));
    assert_eq!(run(&["classify", &path("glued_lines.json"), "--expect", "pass"]).status.code(), Some(1));
}

#[test]
fn expect_flag_drives_the_exit_code() {
    let g = path("glued_lines.json");
    assert_eq!(run(&["check-glueing", &g, "--expect", "pass"]).status.code(), Some(1));
    assert_eq!(run(&["check-glueing", &g, "--expect", "fail"]).status.code(), Some(0));
    assert_eq!(run(&["check-prelimit", &g, "--expect", "pass"]).status.code(), Some(0));
    let v = stdout_json(&run(&["check-glueing", &g]));
    assert_eq!(v["verdict"], json!("violated"));
}

#[test]
fn rank_of_the_empty_divisor_is_zero() {
    let b = json!({"graph": {"vertices": ["v", "w"], "edges": [{"id": "e", "tail": "v", "head": "w", "n": 3}]}, "divisor": {}});
    assert_eq!(stdout_json(&run_stdin(&["rank", "-"], &b)), json!({"rank": 0}));
}

#[test]
fn rational_divisors_are_scaled() {
    // two parallel unit edges form a circle of length 2 with v at 0, w at 1 and the midpoints
    // at 1/2 and 3/2; one point has rank 0, and the two midpoints sum to 2v
    let g = json!({"vertices": ["v", "w"], "edges": [{"id": "a", "tail": "v", "head": "w"}, {"id": "b", "tail": "v", "head": "w"}]});
    let one = json!({"graph": g, "divisor": {"edge": [{"edge": "a", "t": "1/2"}]}});
    assert_eq!(stdout_json(&run_stdin(&["rank", "-"], &one)), json!({"rank": 0}));
    let two = json!({"graph": g, "divisor": {"edge": [{"edge": "a", "t": "1/2"}, {"edge": "b", "t": "1/2"}]}});
    assert_eq!(stdout_json(&run_stdin(&["rank", "-"], &two)), json!({"rank": 1}));
    let eq = json!({"graph": g, "divisor": {"vertex": {"v": 2}}, "divisor2": {"edge": [{"edge": "a", "t": "1/2"}, {"edge": "b", "t": "1/2"}]}});
    let o = run_stdin(&["equiv", "-", "--expect", "pass"], &eq);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["equivalent"], json!(true));
}

#[test]
fn malformed_input_exits_2_with_error_json() {
    let o = run_stdin(&["validate", "-"], &json!({"graph": {"vertices": ["a"], "edges": [{"id": "x", "tail": "a", "head": "b"}]}}));
    assert_eq!(o.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["kind"], json!("unknown_id"));
    let o = bin().args(["rank", "-"]).stdin(std::process::Stdio::null()).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["kind"], json!("malformed"));
}

#[test]
fn output_is_deterministic() {
    for args in [vec!["classify", "x"], vec!["forgetful", "x"], vec!["multivanish", "x"]] {
        let p = path("glued_lines.json");
        let args: Vec<&str> = args.iter().map(|a| if *a == "x" { p.as_str() } else { a }).collect();
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn forgetful_then_invert_through_files() {
    let g = path("glued_lines.json");
    let mut bundle: Value = serde_json::from_str(&std::fs::read_to_string(fixture("glued_lines.json")).unwrap()).unwrap();
    let mc = stdout_json(&run(&["forgetful", &g]));
    bundle["mc"] = mc.clone();
    // inverting and forgetting again is a fixed point once H_v contains 1
    bundle["series"] = stdout_json(&run_stdin(&["invert", "-"], &bundle));
    assert_eq!(stdout_json(&run_stdin(&["forgetful", "-"], &bundle)), mc);
    // the stored series and its forgetful image give the same verdicts
    let v = stdout_json(&run_stdin(&["check-glueing", "-"], &bundle));
    assert_eq!(v["verdict"], json!("violated"));
}

#[test]
fn dprime_and_residues() {
    let b = json!({"graph": {"vertices": ["v", "w"], "edges": [
        {"id": "e1", "tail": "v", "head": "w", "n": 4},
        {"id": "e2", "tail": "v", "head": "w", "n": 2},
        {"id": "e3", "tail": "v", "head": "w", "n": 3}]},
        "multidegree": {"w": {"v": 0, "w": 0}, "mu": {"e1": 1, "e2": 1, "e3": 2}}});
    assert_eq!(stdout_json(&run_stdin(&["dprime", "-"], &b))["max_dprime"], json!(3));
    assert_eq!(run_stdin(&["dprime", "-", "--d-prime", "4", "--expect", "pass"], &b).status.code(), Some(1));
    assert_eq!(stdout_json(&run_stdin(&["residues", "-"], &b)), json!({"distinct": false}));
}

fn two_loops() -> Value {
    json!({"vertices": ["v0", "v1", "v2"], "edges": [
        {"id": "a1", "tail": "v0", "head": "v1", "n": 1},
        {"id": "a2", "tail": "v0", "head": "v1", "n": 2},
        {"id": "b1", "tail": "v1", "head": "v2", "n": 2},
        {"id": "b2", "tail": "v1", "head": "v2", "n": 3}]})
}

#[test]
fn lifted_series_pass_the_checks() {
    let b = json!({"graph": two_loops(), "divisor": {"vertex": {"v1": 2}}});
    let o = run_stdin(&["lift", "-"], &b);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let lifted = stdout_json(&o);
    assert_eq!(lifted["plan"]["route"], json!("rank_one"));
    assert_eq!(run_stdin(&["check-prelimit", "-", "--expect", "pass"], &lifted).status.code(), Some(0));
    assert_eq!(run_stdin(&["check-glueing", "-", "--expect", "pass"], &lifted).status.code(), Some(0));
    let o = run_stdin(&["lift", "-", "--method", "vertex-avoiding"], &b);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let va = stdout_json(&o);
    assert_eq!(va["plan"]["rank"], json!(1));
    assert_eq!(run_stdin(&["check-glueing", "-", "--expect", "pass"], &va).status.code(), Some(0));
}

#[test]
fn lift_routes_by_rank() {
    let trivial = json!({"graph": two_loops(), "divisor": {"vertex": {"v1": 1}}});
    assert_eq!(stdout_json(&run_stdin(&["lift", "-"], &trivial))["plan"]["route"], json!("trivial"));
    let dual = json!({"graph": two_loops(), "divisor": {"vertex": {"v0": 4}}});
    // degree 4 on genus 2: K - D has degree -2
    let v = stdout_json(&run_stdin(&["lift", "-"], &dual));
    assert_eq!(v["plan"]["route"], json!("dual"));
    assert_eq!(v["plan"]["dual_rank"], json!(-1));
    let o = run_stdin(&["lift", "-", "--method", "rank-one"], &trivial);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_pool_override_keeps_verdicts() {
    let o = bin()
        .args(["classify", &path("glued_lines.json")])
        .env("TROPLIFT_SEED_POOL", "11,13,17,19")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&o)["verdict"], json!("NotSmoothable"));
    let b = json!({"graph": two_loops(), "divisor": {"vertex": {"v1": 2}}});
    let mut child = bin();
    child.env("TROPLIFT_SEED_POOL", "101,103");
    let o = {
        use std::io::Write;
        let mut c = child
            .args(["lift", "-"])
            .stdin(std::process::Stdio::piped())
            .stdout(std::process::Stdio::piped())
            .spawn()
            .unwrap();
        c.stdin.take().unwrap().write_all(b.to_string().as_bytes()).unwrap();
        c.wait_with_output().unwrap()
    };
    let lifted = stdout_json(&o);
    assert_eq!(run_stdin(&["check-glueing", "-", "--expect", "pass"], &lifted).status.code(), Some(0));
    let bad = bin().args(["fixtures"]).env("TROPLIFT_SEED_POOL", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
