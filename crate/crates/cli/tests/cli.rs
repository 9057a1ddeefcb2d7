use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exactjoin")).args(args).env_remove("EXACTJOIN_FORMAT_VERSION").output().unwrap()
}

fn run_data(cmd: &[&str], files: &[&str]) -> (i32, String) {
    let paths: Vec<PathBuf> = files.iter().map(|f| data(f)).collect();
    let mut args: Vec<&str> = cmd.to_vec();
    args.extend(paths.iter().map(|p| p.to_str().unwrap()));
    let out = run(&args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn field<'a>(stdout: &'a str, key: &str) -> Option<&'a str> {
    stdout.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
}

#[test]
fn rectangle_and_parallelogram_are_exact() {
    let (code, out) = run_data(&["exact-join", "--domain", "bds"], &["fig4a_bd1.txt", "fig4a_bd2.txt"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("format: v1"));
    assert_eq!(field(&out, "verdict"), Some("exact"));
}

#[test]
fn triangle_and_wedge_report_the_witness() {
    let (code, out) = run_data(&["exact-join", "--domain", "cpoly"], &["ex1_p1.txt", "ex1_p2.txt"]);
    assert_eq!(code, 1);
    assert_eq!(field(&out, "verdict"), Some("inexact"));
    assert_eq!(field(&out, "witness"), Some("P1: beta = x1 + x2 <= 2, g = point(0, 2)"));
    assert_eq!(field(&out, "verified"), Some("yes"));
}

#[test]
fn same_file_twice_is_exact() {
    for f in ["ex1_p1.txt", "ex3_b1.txt", "fig4b_bd3.txt", "oct1.txt", "strip.txt"] {
        let (code, out) = run_data(&["exact-join"], &[f, f]);
        assert_eq!((code, field(&out, "verdict")), (0, Some("exact")), "{f}");
    }
}

#[test]
fn rational_and_integer_verdicts_differ() {
    let (code, out) = run_data(&["exact-join"], &["fig4b_bd3.txt", "fig4b_bd4.txt"]);
    assert_eq!(code, 1);
    assert_eq!(field(&out, "witness"), Some("(i,j,k,l)=(1,2,0,1)"));
    assert_eq!(field(&out, "point"), Some("(5/2, 0)"));
    let (code, _) = run_data(&["exact-join"], &["fig4b_int_bd3.txt", "fig4b_int_bd4.txt"]);
    assert_eq!(code, 0);
}

#[test]
fn grid_oracle_finds_the_half_point() {
    let (code, out) = run_data(&["oracle", "--mode", "grid", "--step", "1/2"], &["fig4b_bd3.txt", "fig4b_bd4.txt"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "oracle-point"), Some("(5/2, 0)"));
    assert_eq!(field(&out, "agreement"), Some("yes"));
    let (code, out) = run_data(&["oracle"], &["fig4b_int_bd3.txt", "fig4b_int_bd4.txt"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "oracle-verdict"), Some("exact"));
}

#[test]
fn coarse_grid_is_inconclusive_not_a_disagreement() {
    let (code, out) = run_data(&["oracle", "--mode", "grid", "--step", "1"], &["fig4b_bd3.txt", "fig4b_bd4.txt"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "agreement"), Some("inconclusive"));
}

#[test]
fn explicit_bbox_accepts_negative_bounds() {
    let (code, out) = run_data(&["oracle", "--mode", "grid", "--step", "1/2", "--bbox", "-4:4"], &["oct1.txt", "oct2.txt"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(field(&out, "grid"), Some("step 1/2 over [-4, 4] x [-4, 4]"));
    assert_eq!(field(&out, "agreement"), Some("yes"));
}

#[test]
fn complement_oracle_agrees_on_examples() {
    for (a, b) in [("oct1.txt", "oct2.txt"), ("ex1_p1.txt", "ex1_p2.txt"), ("strip.txt", "point.txt"), ("ex3_b1.txt", "ex3_b3.txt")] {
        let (code, out) = run_data(&["oracle", "--mode", "complement"], &[a, b]);
        assert_eq!(code, 0, "{a} {b}");
        assert_eq!(field(&out, "agreement"), Some("yes"), "{a} {b}");
    }
}

#[test]
fn merge_collapses_integer_shapes_only() {
    let (code, out) = run_data(&["merge"], &["ps_int_bd34.txt"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "disjuncts-after"), Some("1"));
    let (_, out) = run_data(&["merge"], &["ps_bd34.txt"]);
    assert_eq!(field(&out, "disjuncts-after"), Some("2"));
    let (_, out) = run_data(&["merge", "--mode", "full"], &["ps_three_way.txt"]);
    assert_eq!(field(&out, "result"), Some("powerset { box { x1 in [0, 2]; x2 in [0, 2] } }"));
    assert_eq!(field(&out, "complete"), Some("yes"));
    let (_, out) = run_data(&["merge", "--mode", "pairwise"], &["ps_three_way.txt"]);
    assert_eq!(field(&out, "disjuncts-after"), Some("3"));
}

#[test]
fn merged_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let (_, out) = run_data(&["merge"], &["ps_int_bd34.txt"]);
    let path = dir.path().join("merged.txt");
    std::fs::write(&path, field(&out, "result").unwrap()).unwrap();
    let out = run(&["merge", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(field(&String::from_utf8(out.stdout).unwrap(), "disjuncts-after"), Some("1"));
}

#[test]
fn convert_round_trips_polyhedra() {
    let (code, out) = run_data(&["convert"], &["ex1_p1.txt"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "generators"), Some("cpoly_gen(2) { point(0, 0); point(0, 2); point(2, 0) }"));
    assert_eq!(field(&out, "round-trip"), Some("ok"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.txt");
    std::fs::write(&path, field(&out, "generators").unwrap()).unwrap();
    let out = run(&["convert", path.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(field(&text, "constraints"), Some("cpoly { -x1 <= 0; -x2 <= 0; x1 + x2 <= 2 }"));
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_owned()
    };
    let broken = write("broken.txt", "bds { x1 <= ");
    let oct = write("oct.txt", "bds { x1 + x2 <= 1 }");
    let one = write("one.txt", "bds { x1 <= 1 }");
    let two = write("two.txt", "bds { x2 <= 1 }");
    let strict = write("strict.txt", "cpoly { x1 < 1 }");
    assert_eq!(run(&["exact-join", &broken, &broken]).status.code(), Some(3));
    assert_eq!(run(&["exact-join", &one, &two]).status.code(), Some(4));
    assert_eq!(run(&["exact-join", &oct, &oct]).status.code(), Some(5));
    assert_eq!(run(&["exact-join", &strict, &strict]).status.code(), Some(5));
    assert_eq!(run(&["exact-join", &one, "/nonexistent/file"]).status.code(), Some(2));
    let pinned = Command::new(env!("CARGO_BIN_EXE_exactjoin"))
        .args(["exact-join", &one, &one])
        .env("EXACTJOIN_FORMAT_VERSION", "v9")
        .output()
        .unwrap();
    assert_eq!(pinned.status.code(), Some(2));
    let pinned = Command::new(env!("CARGO_BIN_EXE_exactjoin"))
        .args(["exact-join", &one, &one])
        .env("EXACTJOIN_FORMAT_VERSION", "v1")
        .output()
        .unwrap();
    assert_eq!(pinned.status.code(), Some(0));
}

#[test]
fn fuzzer_is_deterministic_and_writes_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("cex");
    let args = ["fuzz-conjecture", "--trials", "200", "--seed", "3", "--dim", "2", "--out", out_dir.to_str().unwrap()];
    let a = run(&args);
    let b = run(&["fuzz-conjecture", "--trials", "200", "--seed", "3", "--dim", "2", "--jobs", "3", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(field(&text, "trials"), Some("200"));
    let files = std::fs::read_dir(&out_dir).map(|d| d.count()).unwrap_or(0);
    assert_eq!(field(&text, "disagreements").unwrap().parse::<usize>().unwrap(), files);
}

#[test]
fn bench_prints_one_row_per_size() {
    let out = run(&["bench", "--domain", "bds", "--sizes", "2,4", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "format: v1");
    assert_eq!(lines[1], "domain,n,median_ns,reps");
    assert!(lines[2].starts_with("bds,2,") && lines[3].starts_with("bds,4,"));
}
