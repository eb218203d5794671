use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bkh(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bkh"))
        .args(args)
        .env("BKH_CACHE_DIR", cache)
        .env("RUST_LOG", "info")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn block<'a>(report: &'a Value, op: &str) -> &'a Value {
    report["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["op"] == op)
        .map(|b| &b["result"])
        .unwrap_or_else(|| panic!("no {op} block"))
}

#[test]
fn three_solutions_in_five() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&bkh(&["count-solutions", "--d", "1", "--n", "5", "--k", "2", "--h", "2"], dir.path()));
    assert_eq!(block(&r, "count_solutions")["f"], 3);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["config"]["spec"]["groups"], serde_json::json!([2, 2]));
}

#[test]
fn colorings_of_four() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&bkh(&["count-colorings", "--d", "1", "--n", "4", "--k", "2", "--h", "2", "--r", "4"], dir.path()));
    let c = block(&r, "count_rainbow_free");
    assert_eq!(c["g"], 232);
    assert_eq!(c["by_palette_size"], serde_json::json!([0, 4, 84, 144, 0]));
}

#[test]
fn reports_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let args = |w: &'static str| ["count-colorings", "--n", "9", "--r", "4", "--workers", w];
    let one = bkh(&args("1"), dir.path());
    let eight = bkh(&args("8"), dir.path());
    assert!(one.status.success() && eight.status.success());
    assert_eq!(one.stdout, eight.stdout);
}

#[test]
fn exit_codes_name_the_failure() {
    let dir = tempfile::tempdir().unwrap();
    let domain = bkh(&["count-solutions", "--n", "5", "--r", "0"], dir.path());
    assert_eq!(domain.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&domain.stderr).contains("color count"));

    let capacity = bkh(&["count-colorings", "--n", "14", "--budget-colorings", "10"], dir.path());
    assert_eq!(capacity.status.code(), Some(3));

    let construction = bkh(&["constructions", "--n", "4", "--kind", "corner"], dir.path());
    assert_eq!(construction.status.code(), Some(2));

    let usage = bkh(&["count-solutions"], dir.path());
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn cache_is_reused_rebuilt_and_keyed_by_spec() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["count-solutions", "--n", "12", "--k", "2", "--h", "2"];
    let first = bkh(&args, dir.path());
    assert!(String::from_utf8_lossy(&first.stderr).contains("cache miss"));
    let second = bkh(&args, dir.path());
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    assert_eq!(first.stdout, second.stdout);

    let entry = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let bytes = fs::read(&entry).unwrap();
    fs::write(&entry, &bytes[..bytes.len() / 3]).unwrap();
    let third = bkh(&args, dir.path());
    assert!(String::from_utf8_lossy(&third.stderr).contains("rebuilding"));
    assert_eq!(first.stdout, third.stdout);

    let other = bkh(&["count-solutions", "--n", "12", "--k", "3", "--h", "2"], dir.path());
    assert!(String::from_utf8_lossy(&other.stderr).contains("cache miss"));
}

#[test]
fn set_files_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("a.txt");
    fs::write(&set, "# a Sidon set\n1\n2\n4\n8\n13\n").unwrap();
    let r = json(&bkh(&["count-solutions", "--n", "13", "--set", set.to_str().unwrap()], dir.path()));
    assert_eq!(block(&r, "count_solutions")["f"], 0);
    assert_eq!(r["config"]["set_size"], 5);

    let csv = dir.path().join("sols.csv");
    let out = dir.path().join("r.json");
    let run = bkh(
        &["count-solutions", "--n", "5", "--csv", csv.to_str().unwrap(), "--out", out.to_str().unwrap()],
        dir.path(),
    );
    assert!(run.status.success());
    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 4);
    let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(block(&r, "count_solutions")["f"], 3);
}

#[test]
fn scan_and_constructions() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let r = json(&bkh(&["extremal-scan", "--n", "4", "--csv", csv.to_str().unwrap()], dir.path()));
    let s = block(&r, "extremal_scan");
    assert_eq!(s["max_g"], 232);
    assert_eq!(s["full_grid_unique_max"], true);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 17);

    let r = json(&bkh(&["constructions", "--n", "120", "--v", "120", "--samples", "200"], dir.path()));
    let c = block(&r, "build_corner_sets");
    assert_eq!(c["pairwise_disjoint"], true);
    assert_eq!(c["a_sets"][0]["size"], 9);
    assert_eq!(block(&r, "forcing_property_check")["passes"], 200);

    let r = json(&bkh(&["constructions", "--n", "9", "--groups", "2,3", "--kind", "ratio"], dir.path()));
    assert_eq!(block(&r, "solution_free_ratio_set")["size"], 3);

    let r = json(&bkh(&["constructions", "--n", "12", "--kind", "shifted", "--v", "3"], dir.path()));
    let s = block(&r, "shifted_subgrid");
    assert_eq!(s["through_v"], s["through_v_prime"]);
}

#[test]
fn hypergraph_and_templates() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&bkh(&["hypergraph-stats", "--n", "5", "--r", "4"], dir.path()));
    let h = block(&r, "build_hypergraph");
    assert_eq!(h["edges"], 72);
    assert_eq!(h["codegrees"][2]["delta"], 1);

    let t = dir.path().join("p.txt");
    fs::write(&t, "0: {1,2}\n1: {1,2}\n2: {3}\n3: {3,4}\n").unwrap();
    let r = json(&bkh(&["template-check", "--n", "4", "--template", t.to_str().unwrap()], dir.path()));
    let b = block(&r, "template");
    assert_eq!(b["rainbow_subtemplates"], 2);
    assert!(b["classification"]["x_sizes"].is_array());
}

#[test]
fn verify_subset_of_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let out = bkh(&["verify-all", "--preset", "desk", "--only", "4", "--only", "6"], dir.path());
    let r = json(&out);
    assert_eq!(r["blocks"].as_array().unwrap().len(), 2);
    assert!(r["blocks"].as_array().unwrap().iter().all(|b| b["result"]["pass"] == true));
}
