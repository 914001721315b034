use std::process::{Command, Output};

fn preper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_preper")).args(args).env_remove("PREPER_MAX_TABLE_POINTS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let o = preper(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn worked_example_document() {
    let v = json(&["preperiodic", "z^2 - 7/4", "--primes", "3,5,7", "--format", "json"]);
    assert_eq!(v["periods"]["intersection"], serde_json::json!([1, 2]));
    let periodic: Vec<&str> = v["periodic"].as_array().unwrap().iter().map(|e| e["point"].as_str().unwrap()).collect();
    assert_eq!(periodic, ["(1:0)", "(1:2)", "(-3:2)"]);
    assert_eq!(v["summary"]["total"], 5);
    assert_eq!(v["complete"], true);
    assert!(v["timings"]["lifting"].is_number());
}

#[test]
fn document_is_reproducible_from_its_echo() {
    let strip = |mut v: serde_json::Value| {
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    let a = json(&["preperiodic", "z^2 - 1", "--format", "json"]);
    let echo = a["map"].as_str().unwrap().to_string();
    let b = json(&["preperiodic", &echo, "--format", "json"]);
    assert_eq!(a["summary"]["components"], serde_json::json!([3, 1]));
    assert_eq!(strip(a), strip(b));
}

#[test]
fn periods_intersection() {
    let v = json(&["periods", "z^2 - 7/4", "--primes", "3,5,7", "--format", "json"]);
    assert_eq!(v["intersection"], serde_json::json!([1, 2]));
    let single = json(&["periods", "z^2 - 7/4", "--primes", "7", "--format", "json"]);
    assert_eq!(single["intersection"], single["per_prime"]["7"]);
    let sq = json(&["periods", "z^2", "--primes", "3,5", "--format", "json"]);
    assert!(sq["intersection"].as_array().unwrap().contains(&serde_json::json!(1)));
}

#[test]
fn dynatomic_printing() {
    assert_eq!(stdout(&preper(&["dynatomic", "z^2 - 1", "-m", "1", "-n", "2"])), "z^2 - z\n");
    assert_eq!(stdout(&preper(&["dynatomic", "z^2", "-n", "1", "--homogeneous"])), "x^2*y - x*y^2\n");
    let v = json(&["dynatomic", "z^2 - 29/16", "-m", "2", "-n", "3", "--format", "json"]);
    assert_eq!(v["degree"].to_string(), v["expected_degree"].as_str().unwrap());
}

#[test]
fn graph_export() {
    let dot = stdout(&preper(&["graph", "z^2 - 7/4"]));
    assert_eq!(dot.matches("label=").count(), 5);
    let id = |label: &str| {
        let line = dot.lines().find(|l| l.contains(&format!("label=\"{}\"", label))).unwrap();
        line.split_whitespace().next().unwrap().to_string()
    };
    for (a, b) in [("(3:2)", "(1:2)"), ("(1:2)", "(-3:2)"), ("(-3:2)", "(1:2)"), ("(-1:2)", "(-3:2)"), ("(1:0)", "(1:0)")] {
        assert!(dot.contains(&format!("{} -> {};", id(a), id(b))), "{} -> {}", a, b);
    }
    let sq = stdout(&preper(&["preperiodic", "z^2", "--format", "dot"]));
    let edges: Vec<&str> = sq.lines().filter(|l| l.contains("->")).collect();
    let loops = edges.iter().filter(|l| {
        let t: Vec<&str> = l.trim().trim_end_matches(';').split(" -> ").collect();
        t[0] == t[1]
    });
    assert_eq!((edges.len(), loops.count()), (4, 3));
}

#[test]
fn sweep_from_file() {
    let dir = std::env::temp_dir().join(format!("preper-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    std::fs::write(&path, r#"{"family": {"kind": "conservative_b", "d_min": 2, "d_max": 4}}"#).unwrap();
    let o = preper(&["sweep", path.to_str().unwrap(), "--jobs", "2"]);
    assert!(o.status.success());
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    let counts: Vec<u64> = lines[..3].iter().map(|r| r["n_preperiodic"].as_u64().unwrap()).collect();
    assert_eq!(counts, [4, 2, 2]);
    assert_eq!(lines[3]["record"], "summary");
    std::fs::write(&path, "{").unwrap();
    assert_eq!(preper(&["sweep", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| preper(args).status.code();
    assert_eq!(code(&["preperiodic", "z^2 +"]), Some(2));
    assert_eq!(code(&["preperiodic", "z"]), Some(2));
    assert_eq!(code(&["preperiodic", "[x^2, x*y]"]), Some(2));
    assert_eq!(code(&["nonsense"]), Some(2));
    assert_eq!(code(&["preperiodic", "z^2 - 7/4", "--height-bound", "1"]), Some(4));
    assert_eq!(code(&["preperiodic", "z^2 - 7/4", "--unsafe-height-bound", "1"]), Some(0));
    assert_eq!(code(&["sweep", "/nonexistent/spec.json"]), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_preper")).args(["preperiodic", "z^2 - 1"]).env("PREPER_MAX_TABLE_POINTS", "3").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn incomplete_runs_are_flagged() {
    let v = json(&["preperiodic", "z^2 - 7/4", "--primes", "5", "--max-candidate-period", "2", "--format", "json"]);
    assert_eq!(v["skipped_periods"], serde_json::json!([8, 40]));
    assert_eq!(v["complete"], false);
}
