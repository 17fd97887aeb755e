use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcyclic")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn count_examples() {
    let v = json(&["count", "--p", "3", "--ell", "2", "--n", "4"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "count");
    assert_eq!(v["result"]["characters_count"], 144);
    assert_eq!(v["result"]["fields_count"], 144);
    assert_eq!(v["result"]["series_coefficient"], "144");

    let v = json(&["count", "--p", "3", "--ell", "2", "--n", "4", "--cond", "X:ram"]);
    let r = &v["result"];
    assert_eq!(r["matched_characters"], 36);
    assert_eq!(r["density"]["exact"], "1/4");
    assert_eq!(r["density"]["float"], 0.25);
    assert_eq!(r["predicted_density"]["exact"], "1/4");
    assert_eq!(r["series_matches"], true);

    let v = json(&["count", "--p", "2", "--e", "2", "--ell", "3", "--n", "2"]);
    assert_eq!(v["result"]["characters_count"], 60);
    assert_eq!(v["result"]["fields_count"], 30);
}

#[test]
fn exit_codes() {
    let overlap = run(&["count", "--p", "3", "--ell", "2", "--n", "4", "--cond", "X:ram", "--cond", "X:split"]);
    assert_eq!(overlap.status.code(), Some(2));
    let bad_place = run(&["count", "--p", "3", "--n", "4", "--cond", "X^2+2X:split"]);
    assert_eq!(bad_place.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_place.stderr).contains("X^2+2X"));
    assert_eq!(run(&["count", "--p", "3", "--ell", "3", "--n", "4"]).status.code(), Some(2));
    assert_eq!(run(&["distribution", "--p", "3", "--ell", "4", "--genus", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--p", "3", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--p", "3", "--n", "40"]).status.code(), Some(3));
    assert_eq!(run(&["distribution", "--p", "3", "--genus", "30"]).status.code(), Some(3));
}

#[test]
fn distribution_model_column() {
    let v = json(&["distribution", "--p", "3", "--ell", "2", "--genus", "1,2"]);
    let genera = v["result"]["genera"].as_array().unwrap();
    assert_eq!(genera.len(), 2);
    for g in genera {
        assert_eq!(g["model"][0]["exact"], "81/4096");
        assert_eq!(g["mean_model"]["exact"], "4/1");
    }
    assert_eq!(genera[0]["fields"], 144);
}

#[test]
fn csv_has_header_row() {
    let out = run(&["distribution", "--p", "3", "--genus", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "genus,m,empirical,empirical_float,model,model_float,total_variation,mean_empirical,mean_model"
    );
    assert_eq!(lines.count(), 9);
}

#[test]
fn verify_examples_pass() {
    for args in [
        &["verify", "--suite", "quadratic-exact", "--p", "3"][..],
        &["verify", "--suite", "series-vs-brute", "--p", "7", "--ell", "3", "--max-n", "4"],
        &["verify", "--suite", "weil", "--p", "3", "--ell", "2", "--genus", "2"],
    ] {
        let v = json(args);
        assert_eq!(v["result"]["pass"], true, "{args:?}");
        for c in v["result"]["suites"][0]["checks"].as_array().unwrap() {
            assert_eq!(c["pass"], true);
            assert_eq!(c["expected"], c["actual"]);
        }
    }
}

#[test]
fn oracle_crosscheck_matches() {
    let v = json(&["oracle-crosscheck", "--p", "3", "--n", "4", "--cond", "X:ram"]);
    let row = &v["result"]["rows"][0];
    assert_eq!(row["covers_characters"], 36);
    assert_eq!(row["map_count"], 36);
    let v = json(&["oracle-crosscheck", "--p", "2", "--e", "2", "--ell", "3", "--max-n", "4"]);
    assert_eq!(v["result"]["all_match"], true);
}

#[test]
fn output_is_independent_of_shards() {
    let base = ["count", "--p", "2", "--e", "2", "--ell", "3", "--n", "5", "--cond", "X:split"];
    let reports: Vec<Vec<u8>> = ["1", "2", "8"]
        .iter()
        .map(|s| {
            let mut args = base.to_vec();
            args.extend(["--shards", s]);
            run(&args).stdout
        })
        .collect();
    assert!(!reports[0].is_empty());
    assert!(reports.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn warm_cache_matches_cold_run() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let plain = run(&["count", "--p", "3", "--n", "6", "--cond", "X+1:inert"]).stdout;
    let cold = run(&["count", "--p", "3", "--n", "6", "--cond", "X+1:inert", "--cache-dir", cache]).stdout;
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 2);
    let warm = run(&["count", "--p", "3", "--n", "6", "--cond", "X+1:inert", "--cache-dir", cache]).stdout;
    assert_eq!(plain, cold);
    assert_eq!(cold, warm);
    let header = files
        .iter()
        .map(|f| std::fs::read_to_string(f).unwrap().lines().next().unwrap().to_string())
        .find(|h| h.contains("conditions=1,1:I"))
        .expect("conditioned cache file");
    assert!(header.starts_with("# lcyclic-orbits v1 q=3 ell=2 n=6 conditions=1,1:I records="));

    let d_plain = run(&["distribution", "--p", "3", "--genus", "2"]).stdout;
    let d_cold = run(&["distribution", "--p", "3", "--genus", "2", "--cache-dir", cache]).stdout;
    let d_warm = run(&["distribution", "--p", "3", "--genus", "2", "--cache-dir", cache]).stdout;
    assert_eq!(d_plain, d_cold);
    assert_eq!(d_cold, d_warm);
}

#[test]
fn series_dump_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("series.txt");
    let v = json(&["series-check", "--p", "3", "--max-n", "6", "--dump", path.to_str().unwrap()]);
    assert_eq!(v["result"]["all_match"], true);
    let text = std::fs::read_to_string(&path).unwrap();
    let (h, s) = lcyclic::series::parse_dump(&text).unwrap();
    assert_eq!((h.q, h.ell, h.truncation), (3, 2, 6));
    assert_eq!(h.construction, "characters");
    assert_eq!(s.coeff(4).as_integer().unwrap().to_string(), "144");
}
