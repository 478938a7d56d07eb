use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    json: Value,
}

fn dpcolor(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_dpcolor")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout,
        json,
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn chi_dp_of_four_cycle() {
    let dir = TempDir::new().unwrap();
    let c4 = write(&dir, "c4.g6", "C]\n");
    let r = dpcolor(&["chi-dp", "--property", "O", s(&c4)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["value"], 3);
    assert_eq!(r.json["bad_cover_at_k"], 2);
    assert_eq!(r.json["schema_version"], 1);
    assert_eq!(r.json["witness"]["kind"], "cover");
}

#[test]
fn graph6_and_edge_list_agree() {
    let dir = TempDir::new().unwrap();
    let g6 = write(&dir, "c5.g6", "Dhc\n");
    let el = write(&dir, "c5.txt", "5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
    let a = dpcolor(&["chi", s(&g6)]);
    let b = dpcolor(&["chi", s(&el)]);
    assert_eq!(a.code, 0);
    assert_eq!(a.json["value"], 3);
    assert_eq!(a.json["graph6"], b.json["graph6"]);
}

#[test]
fn brooks_exception_for_cycle_and_forests() {
    let dir = TempDir::new().unwrap();
    let c5 = write(&dir, "c5.g6", "Dhc\n");
    let r = dpcolor(&["verify", "brooks", "--property", "D1", "--input", s(&c5)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["exception_class"], "RRegularCR");
    assert_eq!(r.json["holds"], true);
}

const M_CONFIG: &str = r#"{"graph": [[0, 1]], "fibers": [1, 1], "matchings": {"0-1": [[0, 0]]}, "f": {"0:0": 1, "1:0": 1}}"#;

#[test]
fn uncolorable_config_is_constructible() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "m.json", M_CONFIG);
    let r = dpcolor(&["solve-config", s(&cfg)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["colorable"], false);
    assert_eq!(r.json["constructible"], true);
    assert!(r.json["certificate"].is_object());
    let r = dpcolor(&["recognize", s(&cfg)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["certificate"]["blocks"][0]["tag"], "M");
}

#[test]
fn colorable_config_exits_zero() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "ok.json",
        r#"{"graph": [[0, 1]], "fibers": [1, 1], "matchings": {"0-1": [[0, 0]]}, "f": {"0:0": 2, "1:0": 1}}"#,
    );
    let r = dpcolor(&["solve-config", s(&cfg)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["transversal"], serde_json::json!([0, 0]));
}

#[test]
fn duplicated_matching_coordinate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.json",
        r#"{"graph": [[0, 1]], "fibers": [2, 2], "matchings": {"0-1": [[0, 0], [0, 1]]}}"#,
    );
    let r = dpcolor(&["check-cover", s(&bad)]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["error"]["code"], "InvalidCover");
    assert!(r.json["error"]["message"].as_str().unwrap().contains("0-1"));
}

#[test]
fn missing_f_entry_is_named() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "missing.json",
        r#"{"graph": [[0, 1]], "fibers": [1, 1], "matchings": {}, "f": {"0:0": 1}}"#,
    );
    let r = dpcolor(&["solve-config", s(&cfg)]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["error"]["code"], "ParseError");
    assert!(r.json["error"]["message"].as_str().unwrap().contains("1:0"));
}

#[test]
fn syntax_errors_carry_a_location() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "broken.json", "{\n  \"graph\": [[0, 1]\n");
    let r = dpcolor(&["check-cover", s(&cfg)]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["error"]["code"], "ParseError");
    assert!(r.json["error"]["message"].as_str().unwrap().contains("line"));
}

#[test]
fn bad_cover_witness_round_trips() {
    let dir = TempDir::new().unwrap();
    let c5 = write(&dir, "c5.g6", "Dhc\n");
    let r = dpcolor(&["chi-dp", s(&c5)]);
    let cover = serde_json::to_string(&r.json["witness"]["data"]).unwrap();
    let path = write(&dir, "bad.json", &cover);
    let back = dpcolor(&["check-cover", s(&path)]);
    assert_eq!(back.code, 1);
    assert_eq!(back.json["has_transversal"], false);
    assert_eq!(back.json["critical"], true);
}

#[test]
fn certificate_config_round_trips() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "m.json", M_CONFIG);
    let r = dpcolor(&["recognize", s(&cfg)]);
    let block = serde_json::to_string(&r.json["certificate"]["blocks"][0]["config"]).unwrap();
    let path = write(&dir, "block.json", &block);
    let back = dpcolor(&["recognize", s(&path)]);
    assert_eq!(back.code, 0);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "w4.txt", "5\n0 1\n1 2\n2 3\n3 0\n4 0\n4 1\n4 2\n4 3\n");
    let a = dpcolor(&["chi-list", s(&g)]);
    let b = dpcolor(&["chi-list", s(&g)]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dirac_generation_and_bounds() {
    let dir = TempDir::new().unwrap();
    let r = dpcolor(&["gen", "dirac", "--k", "3", "--split", "1,2"]);
    assert_eq!(r.code, 0);
    let g6 = r.stdout.trim().to_string();
    let g = write(&dir, "dir3.g6", &g6);
    assert_eq!(dpcolor(&["chi", s(&g)]).json["value"], 4);
    let r = dpcolor(&["gen", "dirac", "--k", "3", "--split", "1,2", "--format", "json"]);
    assert_eq!(r.json["size"], 11);

    let cover = write(
        &dir,
        "id3.json",
        &format!(
            r#"{{"graph": {}, "fibers": [3,3,3,3,3,3,3], "matchings": {{{}}}}}"#,
            serde_json::to_string(&edges_of(&r.json)).unwrap(),
            edges_of(&r.json)
                .iter()
                .map(|(u, v)| format!(r#""{u}-{v}": [[0,0],[1,1],[2,2]]"#))
                .collect::<Vec<_>>()
                .join(",")
        ),
    );
    let v = dpcolor(&["verify", "dirac", "--input", s(&g), "--cover", s(&cover), "--k", "3"]);
    assert_eq!(v.code, 0, "{}", v.stdout);
    assert_eq!(v.json["numbers"]["equality"], true);
    assert_eq!(v.json["witness"]["kind"], "dirac");

    let bad = dpcolor(&["gen", "dirac", "--k", "3", "--split", "2,2"]);
    assert_eq!(bad.code, 2);
    assert_eq!(bad.json["error"]["code"], "BadSplit");
}

/// Edges of the generated Dir(k) graph, rebuilt from its parts.
fn edges_of(gen: &Value) -> Vec<(u64, u64)> {
    let parts = &gen["parts"];
    let list = |k: &str| -> Vec<u64> { parts[k].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect() };
    let (a, b1, b2) = (list("a"), list("b1"), list("b2"));
    let (v1, v2) = (parts["v1"].as_u64().unwrap(), parts["v2"].as_u64().unwrap());
    let b: Vec<u64> = b1.iter().chain(&b2).copied().collect();
    let mut e = Vec::new();
    for set in [&a, &b] {
        for (i, &x) in set.iter().enumerate() {
            for &y in &set[i + 1..] {
                e.push((x, y));
            }
        }
    }
    for (v, bi) in [(v1, &b1), (v2, &b2)] {
        for &x in a.iter().chain(bi.iter()) {
            e.push((x.min(v), x.max(v)));
        }
    }
    e.sort();
    e
}

#[test]
fn ert_precondition_and_low_vertex_blocks() {
    let dir = TempDir::new().unwrap();
    let k4 = write(
        &dir,
        "k4.json",
        r#"{"graph": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]], "fibers": [2,2,2,2],
            "matchings": {"0-1": [[0,0],[1,1]], "0-2": [[0,0],[1,1]], "0-3": [[0,0],[1,1]],
                          "1-2": [[0,0],[1,1]], "1-3": [[0,0],[1,1]], "2-3": [[0,0],[1,1]]}}"#,
    );
    let r = dpcolor(&["verify", "ert", "--input", s(&k4)]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["error"]["code"], "PreconditionFailed");

    let c5 = write(
        &dir,
        "c5.json",
        r#"{"graph": [[0,1],[1,2],[2,3],[3,4],[0,4]], "fibers": [2,2,2,2,2],
            "matchings": {"0-1": [[0,0],[1,1]], "1-2": [[0,0],[1,1]], "2-3": [[0,0],[1,1]],
                          "3-4": [[0,0],[1,1]], "0-4": [[0,0],[1,1]]}}"#,
    );
    let r = dpcolor(&["verify", "low-vertex", "--input", s(&c5)]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["witness"]["data"][0]["class"], "Cycle");
    let r = dpcolor(&["verify", "low-vertex", "--property", "D1", "--input", s(&c5)]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["error"]["code"], "NotCritical");
}

#[test]
fn mihok_bound_on_path() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.txt", "3\n0 1\n1 2\n");
    let r = dpcolor(&["verify", "mihok", "--input", s(&p3), "--k", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["numbers"]["observed"], "2");
}

#[test]
fn corpus_sweep_and_cover_scan() {
    let r = dpcolor(&["corpus-sweep", "--check", "chain", "--order", "4", "--workers", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json["graphs"], 10);
    assert_eq!(r.json["violations"], serde_json::json!([]));
    let r = dpcolor(&["corpus-sweep", "--check", "brooks", "--order", "4", "--property", "D1", "--no-witness"]);
    assert_eq!(r.code, 0);
    assert!(r.json.get("rows").is_none());
    let r = dpcolor(&["dirac-cover-scan", "--k", "3"]);
    assert_eq!(r.code, 0);
    assert!(r.json["census"]["bad_covers"].as_u64().unwrap() >= 1);
}

#[test]
fn table_format_and_flags() {
    let dir = TempDir::new().unwrap();
    let c4 = write(&dir, "c4.g6", "C]\n");
    let r = dpcolor(&["chi-dp", s(&c4), "--format", "table", "--no-witness"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("value"));
    assert!(!r.stdout.contains("witness"));
    let r = dpcolor(&["chi", s(&c4), "--max-order", "3"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json["error"]["code"], "TooLarge");
    let r = dpcolor(&["chi", s(&c4), "--bogus"]);
    assert_eq!(r.code, 2);
}

#[test]
fn work_budget_from_environment() {
    let dir = TempDir::new().unwrap();
    let k5 = write(&dir, "k5.g6", "D~{\n");
    let out = Command::new(env!("CARGO_BIN_EXE_dpcolor"))
        .args(["chi-list", s(&k5)])
        .env("DPCOLOR_MAX_WORK", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["error"]["code"], "TooLarge");
}
