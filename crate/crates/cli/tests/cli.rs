use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn covlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covlab"))
        .args(args)
        .env_remove("COVLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not a JSON report ({e}):\n{}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ac_on_p3_is_three_and_optimal() {
    let out = covlab(&["ac", "perm:3"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["command"], "ac");
    assert_eq!(r["results"]["value"], 3);
    assert_eq!(r["results"]["optimal"], true);
    assert_eq!(r["results"]["solution"]["hyperplanes"].as_array().unwrap().len(), 3);
}

#[test]
fn ac_report_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("ac.json");
    let out = covlab(&["ac", "perm:4", "--vertex", "(2,4,1,3)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["value"], 6);
    std::fs::write(&rep, &out.stdout).unwrap();

    let v = covlab(&["verify", "perm:4", "--hyperplanes", path(&rep)]);
    assert_eq!(code(&v), 0);
    let r = report(&v);
    assert_eq!(r["results"]["verification"]["pass"], true);
    assert_eq!(r["results"]["verification"]["missed"], serde_json::json!(["(2,4,1,3)"]));
}

#[test]
fn maxtrace_p4_is_eight_on_a_pair_sum_hyperplane() {
    let out = covlab(&["maxtrace", "perm:4"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["results"]["size"], 8);
    // on P_4, x_i + x_j = 5 is induced-equivalent to x_i + x_j − x_k − x_l = 0
    let mut normal: Vec<i64> =
        r["results"]["witness"]["normal"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()).collect();
    normal.sort();
    assert_eq!(normal, vec![-1, -1, 1, 1]);
    assert_eq!(r["results"]["witness"]["offset"], 0);
}

#[test]
fn pervandermonde_of_one_two_three() {
    let out = covlab(&["poly", "pervandermonde", "1", "2", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["value"], 48);
    let neg = covlab(&["poly", "pervandermonde", "-1", "2", "3"]);
    assert_eq!(code(&neg), 0);
}

#[test]
fn vandermonde_file_feeds_signed_sum_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("v4.poly");
    assert_eq!(code(&covlab(&["poly", "vandermonde", "4", "-o", path(&f)])), 0);
    let s = covlab(&["poly", "signedsum", path(&f)]);
    assert_eq!(report(&s)["results"]["value"], 24);
    let w = covlab(&["poly", "witness", path(&f), "--alphas", "0,1,3,7"]);
    let r = report(&w);
    assert_eq!(r["results"]["found"], true);
    assert_eq!(r["results"]["point"], "(0,1,3,7)");
}

#[test]
fn numbering_and_afcheck() {
    let n = covlab(&["poly", "numbering", "--a", "1,-1", "--values", "1,2"]);
    assert_eq!(code(&n), 0);
    assert_eq!(report(&n)["results"]["found"], true);

    let af = covlab(&["poly", "afcheck", "--factor", "0,1", "--factor", "0,1,2"]);
    let r = report(&af);
    assert_eq!(r["results"]["applicable"], true);
    assert_eq!(r["results"]["degree"], 3);
    assert_eq!(r["results"]["bound"], 3);
    assert_eq!(r["results"]["margin"], 0);
}

#[test]
fn constructions_verify_and_parity_is_exit_two() {
    for kind in ["column", "diagonal", "even"] {
        let out = covlab(&["construct", kind, "6"]);
        assert_eq!(code(&out), 0, "{kind}");
        assert_eq!(report(&out)["results"]["verification"]["pass"], true, "{kind}");
    }
    let sharp = covlab(&["construct", "sharp", "5"]);
    let r = report(&sharp);
    assert_eq!(r["results"]["count"], 10);
    assert_eq!(r["results"]["verification"]["missed"], serde_json::json!(["(1,2,3,4,5)"]));

    let bad = covlab(&["construct", "odd", "6"]);
    assert_eq!(code(&bad), 2);
    assert_eq!(report(&bad)["error"]["kind"], "ParityMismatch");
}

#[test]
fn failed_verification_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let hs = dir.path().join("hs.txt");
    std::fs::write(&hs, "# a single line\n1 0 ; -1\n").unwrap();
    let out = covlab(&["verify", "cube:2", "--hyperplanes", path(&hs)]);
    assert_eq!(code(&out), 2);
    assert_eq!(report(&out)["results"]["verification"]["pass"], false);
    let ok = covlab(&["verify", "cube:2", "--hyperplanes", path(&hs), "--expect-missed", "0", "1"]);
    assert_eq!(code(&ok), 0);
}

#[test]
fn cover_excluding_the_hull() {
    let out = covlab(&["cover", "perm:4", "--exclude-hull"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["value"], 3);
    let full = covlab(&["cover", "cube:2", "--exclude-hull"]);
    assert_eq!(code(&full), 2);
    assert_eq!(report(&full)["error"]["kind"], "NoAmbientHyperplane");
}

#[test]
fn punctured_paths() {
    let out = covlab(&["punctured", "perm:3", "--holes", "(2,1,3)", "--vertex", "(1,2,3)"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["value"], 2);
    // v inside the affine hull of the holes
    let bad = covlab(&["punctured", "perm:3", "--holes", "(1,2,3)", "--vertex", "(1,2,3)"]);
    assert_eq!(code(&bad), 2);
    let missing = covlab(&["punctured", "perm:3", "--holes", "(2,1,3)", "--vertex", "(9,9,9)"]);
    assert_eq!(code(&missing), 2);
    assert_eq!(report(&missing)["error"]["kind"], "NotAMember");
}

#[test]
fn gen_writes_point_sets_the_solvers_read() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.txt");
    let out = covlab(&["gen", "grid", "--factor", "0,1", "--factor", "-1,0,1", "-o", path(&grid)]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["results"]["points"], 6);
    let ac = covlab(&["ac", path(&grid)]);
    assert_eq!(report(&ac)["results"]["value"], 3);

    let stdout = covlab(&["gen", "permutohedron", "3"]);
    let text = String::from_utf8(stdout.stdout).unwrap();
    assert!(text.starts_with("# dim=3 count=6\n"));
    let orbit = covlab(&["gen", "orbit", "-1", "1/2", "2"]);
    assert_eq!(code(&orbit), 0);
}

#[test]
fn zonotope_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("gens.txt");
    std::fs::write(&g, "2 1\n-1 2\n1 1\n").unwrap();
    let out = covlab(&["zono", "ac", "--generators", path(&g)]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["results"]["vertices"], 6);
    assert_eq!(r["results"]["value"], 3);
    assert_eq!(r["results"]["at_least_rank"], true);
    assert!(r["results"]["scaled_hull"]["verification"]["pass"] == true || r["results"]["scaled_hull"]["skipped"].is_string());
}

#[test]
fn cache_is_written_then_loaded() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("p4.cache");
    let first = covlab(&["--cache", path(&cache), "ac", "perm:4", "--transitive"]);
    assert_eq!(report(&first)["inputs"]["cache"]["action"], "written");
    let second = covlab(&["--cache", path(&cache), "ac", "perm:4", "--transitive"]);
    let r = report(&second);
    assert_eq!(r["inputs"]["cache"]["action"], "loaded");
    assert_eq!(r["results"]["candidates"]["from_cache"], true);
    assert_eq!(r["results"]["value"], 6);

    let other = covlab(&["--cache", path(&cache), "ac", "perm:3"]);
    assert_eq!(code(&other), 64);
    assert_eq!(report(&other)["error"]["kind"], "CacheMismatch");
}

#[test]
fn deterministic_reports_are_identical_across_thread_counts() {
    let one = covlab(&["--deterministic", "--threads", "1", "ac", "perm:4", "--transitive"]);
    let eight = covlab(&["--deterministic", "--threads", "8", "ac", "perm:4", "--transitive"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, eight.stdout);
    assert!(report(&one).get("timings").is_none());
}

#[test]
fn subset_budget_is_exit_three() {
    let out = covlab(&["--budget-subsets", "10", "ac", "perm:4"]);
    assert_eq!(code(&out), 3);
    let r = report(&out);
    assert_eq!(r["error"]["kind"], "SizeLimit");
    assert_eq!(r["budget_hits"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_errors_are_exit_64() {
    assert_eq!(code(&covlab(&["nonsense"])), 64);
    assert_eq!(code(&covlab(&["ac"])), 64);
    assert_eq!(code(&covlab(&["--threads", "0", "ac", "perm:3"])), 64);
    assert_eq!(code(&covlab(&["ac", "perm:3", "--vertex", "99"])), 64);
    assert_eq!(code(&covlab(&["--help"])), 0);
}

#[test]
fn trace_sizes_go_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("column5.csv");
    let out = covlab(&["--trace-csv", path(&csv), "construct", "column", "5"]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "index,hyperplane,trace_size");
    assert_eq!(rows.len(), 1 + 5);
    assert!(rows[1..].iter().all(|r| r.ends_with(",24")));
}
