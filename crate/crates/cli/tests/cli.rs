//! End-to-end checks of the command-line surface: flag parsing, stable
//! output, JSON schemas, exit codes and the cache.

use std::process::{Command, Output};

fn wbasis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wbasis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn enumerate_counts_match_contract() {
    let o = wbasis(&["enumerate", "--type", "b2", "--weight", "1,0,0", "--degree", "1", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "degree,count\n0,1\n1,3\n");

    let o = wbasis(&["enumerate", "--type", "b2", "--weight", "0,1,0", "--degree", "0", "--format", "csv"]);
    assert_eq!(stdout(&o), "degree,count\n0,1\n");

    let o = wbasis(&["enumerate", "--type", "a1", "--weight", "0,1", "--degree", "0", "--format", "csv"]);
    assert_eq!(stdout(&o), "degree,count\n0,2\n");
}

#[test]
fn dims_below_generator_degree() {
    let o = wbasis(&["dims", "--type", "b2", "--weight", "1,0,0", "--degree", "1", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "degree,count\n0,1\n1,3\n");
}

#[test]
fn weighted_json_schema() {
    let o = wbasis(&["enumerate", "--type", "b2", "--weight", "1,0,0", "--degree", "2", "--weighted", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let arr = v.as_array().unwrap();
    assert!(!arr.is_empty());
    for e in arr {
        let w = e["weight"].as_array().unwrap();
        assert_eq!(w.len(), 2);
        assert!(e["degree"].is_i64());
        assert!(e["mult"].is_u64());
    }
    // characters tables use the same schema
    let o = wbasis(&["characters", "--type", "b2", "--weight", "0,0,1", "--degree", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        v.as_array().unwrap().iter().filter(|e| e["degree"] == 0).count(),
        4
    );
}

#[test]
fn partition_list_schema() {
    let o = wbasis(&["enumerate", "--type", "b2", "--weight", "1,0,0", "--degree", "1", "--list"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 4); // empty monomial plus three parts of degree 1
    assert!(arr[1]["exponents"].is_object());
}

#[test]
fn verify_summary_and_exit_codes() {
    let o = wbasis(&["verify", "--check", "a1-coincidence", "--level", "1", "--degree", "6"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("PASS"));
    // the table prints the agreeing per-degree values of all three paths
    for line in ["1 | 1 | 1", "3 | 3 | 3", "4 | 4 | 4", "7 | 7 | 7", "13 | 13 | 13", "19 | 19 | 19"] {
        assert!(out.contains(line), "missing {line:?} in {out}");
    }

    // findings do not fail the exit code
    let o = wbasis(&["verify", "--check", "relation-module", "--level", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("FINDING"));

    // usage errors exit 1
    let o = wbasis(&["enumerate", "--type", "b2", "--weight", "nope", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = wbasis(&["enumerate", "--type", "b2"]);
    assert_eq!(o.status.code(), Some(1));

    // resource limits exit 3, with the finished degrees still reported
    let o = wbasis(&["dims", "--type", "b2", "--weight", "1,0,0", "--degree", "4", "--max-cells", "6", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.contains("degree,count"));
    assert!(out.contains("3,7"), "completed degrees should be reported: {out}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource limit"));
}

#[test]
fn verify_json_reports_have_schema_fields() {
    let o = wbasis(&["verify", "--check", "w-basis", "--weight", "1,0,0", "--degree", "4", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v.as_array().unwrap()[0];
    assert_eq!(r["id"], "w-basis");
    assert_eq!(r["status"], "pass");
    assert!(r["params"].is_object());
    assert!(r["cells"].is_array());
    // timings are omitted by default for byte-stable reports
    assert!(r.get("timing_ms").is_none());
    let o2 = wbasis(&["verify", "--check", "w-basis", "--weight", "1,0,0", "--degree", "4", "--format", "json", "--timings"]);
    let v2: serde_json::Value = serde_json::from_str(&stdout(&o2)).unwrap();
    assert!(v2.as_array().unwrap()[0].get("timing_ms").is_some());
}

#[test]
fn identical_config_gives_identical_bytes_and_cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["dims", "--type", "b2", "--weight", "0,1,1", "--degree", "4", "--format", "json", "--cache-dir", cache];
    let cold = wbasis(&args);
    assert!(cold.status.success());
    let warm = wbasis(&args);
    assert_eq!(cold.stdout, warm.stdout, "cache hit must be byte-identical");

    // and deleting the cache never changes the result
    let o = wbasis(&["cache", "--cache-dir", cache, "stats"]);
    assert!(stdout(&o).contains("1 entries"));
    let o = wbasis(&["cache", "--cache-dir", cache, "clear"]);
    assert!(o.status.success());
    let fresh = wbasis(&args);
    assert_eq!(cold.stdout, fresh.stdout);

    let o = wbasis(&["cache", "--cache-dir", cache, "path"]);
    assert_eq!(stdout(&o).trim(), cache);
}

#[test]
fn generator_dump_schema() {
    let o = wbasis(&["dims", "--type", "a1", "--level", "1", "--degree", "2", "--dump-generators", "-", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let json_part = &out[..out.rfind("degree,count").unwrap()];
    let v: serde_json::Value = serde_json::from_str(json_part).unwrap();
    let gens = v.as_array().unwrap();
    assert_eq!(gens.len(), 5); // the closed family of e(-1)^2
    for g in gens {
        assert_eq!(g["degree"], 2);
        for t in g["terms"].as_array().unwrap() {
            assert!(t["monomial"].is_object());
            assert!(t["num"].is_i64());
            assert!(t["den"].is_i64());
        }
    }
    // spot-check a named variable key
    let first = &gens[0]["terms"][0]["monomial"];
    assert!(first.as_object().unwrap().keys().all(|k| k.contains("(-")));
}

#[test]
fn verify_respects_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["verify", "--check", "w-basis", "--weight", "0,1,0", "--degree", "4", "--cache-dir", cache];
    let cold = wbasis(&args);
    assert!(cold.status.success());
    let warm = wbasis(&args);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.status.code(), warm.status.code());
    let o = wbasis(&["cache", "--cache-dir", cache, "stats"]);
    assert!(stdout(&o).contains("1 entries"));
}

#[test]
fn jobs_flag_is_order_stable() {
    let a = wbasis(&["verify", "--check", "all", "--degree", "4", "--jobs", "1"]);
    let b = wbasis(&["verify", "--check", "all", "--degree", "4", "--jobs", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "report order must not depend on the pool size");
}
