use latcrit::cli::run;
use serde_json::Value;
use std::io::Write;

fn lat(args: &[&str]) -> (i32, String) {
    let argv: Vec<&str> = std::iter::once("lat").chain(args.iter().copied()).collect();
    run(&argv)
}

fn lat_json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["--json"];
    argv.extend_from_slice(args);
    let (code, out) = lat(&argv);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn embed_prints_a_matrix() {
    let (code, out) = lat(&["embed", "--target", "diag(1,1,2)", "--source", "2*Zn(3)"]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.trim().is_empty());
}

#[test]
fn embed_without_a_representation_fails() {
    let (code, _) = lat(&["embed", "--target", "2*Zn(3)", "--source", "diag(1,1,2)"]);
    assert_eq!(code, 1);
}

#[test]
fn criterion_is_verified_within_space() {
    let args = ["check-criterion", "--a", "diag(1,1,2)", "--set", "diag(1,1);2*Zn(3)", "--rank", "3", "--max-diag", "6"];
    let (code, report) = lat_json(&args);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"], "verified-within-space");
    assert!(report["counterexample"].is_null());
}

#[test]
fn counterexample_exits_one_with_certificate() {
    let (code, report) = lat_json(&["check-criterion", "--a", "diag(1,1,2)", "--set", "diag(1,1)", "--max-diag", "2"]);
    assert_eq!(code, 1);
    assert_eq!(report["verdict"], "counterexample");
    assert!(report["counterexample"]["q"].is_string());
}

#[test]
fn json_output_is_deterministic() {
    let args = ["check-criterion", "--a", "diag(1,1,2)", "--set", "diag(1,1)", "--max-diag", "3"];
    let first = lat(&["--json"].iter().chain(&args).copied().collect::<Vec<_>>());
    for _ in 0..3 {
        assert_eq!(lat(&["--json"].iter().chain(&args).copied().collect::<Vec<_>>()), first);
    }
}

#[test]
fn shards_add_up_to_the_whole_space() {
    let base = ["check-criterion", "--a", "diag(1,1,2)", "--set", "diag(1,1);2*Zn(3)", "--max-diag", "4"];
    let count = |extra: &[&str]| {
        let args: Vec<&str> = base.iter().chain(extra).copied().collect();
        let (code, report) = lat_json(&args);
        assert_eq!(code, 0);
        report["classes_checked"].as_u64().unwrap()
    };
    let whole = count(&[]);
    let parts: u64 = ["0", "1", "2"].iter().map(|i| count(&["--shards", "3", "--shard", i])).sum();
    assert_eq!(parts, whole);
}

#[test]
fn lattices_can_be_read_from_files() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "2\n2 1\n1 2").unwrap();
    let arg = format!("@{}", f.path().display());
    let (code, report) = lat_json(&["info", &arg]);
    assert_eq!(code, 0);
    assert_eq!(report["det"], "3");
    assert_eq!(report["min_norm"], 2);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(lat(&["info", "diag(1,"]).0, 2);
    assert_eq!(lat(&["info", "NoSuchLattice"]).0, 2);
    assert_eq!(lat(&["frobnicate"]).0, 2);
    assert_eq!(lat(&["check-criterion", "--a", "Zn(2)"]).0, 2);
    assert_eq!(lat(&["info", "@/nonexistent/file"]).0, 2);
    assert_eq!(lat(&["verify-paper", "--only", "11"]).0, 2);
}

#[test]
fn decompose_splits_a_direct_sum() {
    let (code, report) = lat_json(&["decompose", "E8+An(2)+Zn(1)"]);
    assert_eq!(code, 0);
    assert_eq!(report["summands"].as_array().unwrap().len(), 3);
}

#[test]
fn redundant_partition_part_fails_prop3() {
    let (code, _) = lat(&["check-prop3", "--ground", "Zn(1);E8", "--parts", "0;1"]);
    assert_eq!(code, 0);
    let (code, _) = lat(&["check-prop3", "--ground", "Zn(1);E8", "--parts", "0;1;0,1"]);
    assert_eq!(code, 1);
}

#[test]
fn verify_paper_runs_selected_checks() {
    let (code, out) = lat(&["verify-paper", "--only", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("1/1 checks passed"));
}
