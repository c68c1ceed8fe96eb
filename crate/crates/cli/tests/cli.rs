use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn segcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segcover")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn greedy_strip_on_h1us_file() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "a.seg", "SEGCOVER 1\nMODE continuous\nSEGMENT 0 0.5 1 0.5\nSEGMENT 1.5 0.2 2.5 0.2\nSEGMENT 3 0.8 4 0.8\n");
    let cover = path(&dir, "a.cov");
    let out = segcover(&["solve", "--alg", "greedy-strip", "-i", &inst, "-o", &cover]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&cover).unwrap();
    assert!(text.starts_with("COVER greedy-strip 2\n"), "{text}");
    assert_eq!(code(&segcover(&["verify", "-i", &inst, "-c", &cover])), 0);
}

#[test]
fn every_algorithm_output_verifies() {
    let dir = TempDir::new().unwrap();
    let cases: &[(&str, &[&str])] = &[
        ("h1us", &["greedy-strip", "h1-2approx", "hv1-4approx", "hv1-3approx", "arb-8approx", "arb-6approx", "exact"]),
        ("h1", &["h1-2approx", "hv1-ptas"]),
        ("hv1", &["hv1-4approx", "hv1-3approx", "hv1-ptas", "exact"]),
        ("arb", &["arb-8approx", "arb-6approx"]),
        ("strip-arb", &["strip-arb-3approx"]),
        ("discrete", &["discrete-16", "exact"]),
    ];
    for (class, algs) in cases {
        let inst = path(&dir, &format!("{class}.seg"));
        let out = segcover(&["gen", "--class", class, "-n", "9", "--seed", "5", "--bbox", "4", "-o", &inst]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        for alg in *algs {
            let cover = path(&dir, &format!("{class}-{alg}.cov"));
            let out = segcover(&["solve", "--alg", alg, "--k", "2", "-i", &inst, "-o", &cover]);
            assert_eq!(code(&out), 0, "{class} {alg}: {}", stderr(&out));
            let out = segcover(&["verify", "-i", &inst, "-c", &cover]);
            assert_eq!(code(&out), 0, "{class} {alg}: {}", stderr(&out));
        }
    }
}

#[test]
fn uncoverable_segment_exits_one() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "d.seg", "SEGCOVER 1\nMODE discrete\nSEGMENT 0 0 1 0\nSEGMENT 5 5 6 5\nSQUARE 0 0\n");
    let out = segcover(&["solve", "--alg", "discrete-16", "-i", &inst]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("segment 1"), "{}", stderr(&out));
}

#[test]
fn parse_and_class_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.seg", "SEGCOVER 1\nMODE continuous\nSEGMENT 0 0 0 0\n");
    let out = segcover(&["solve", "--alg", "arb-6approx", "-i", &bad]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3"));

    let vertical = write(&dir, "v.seg", "SEGCOVER 1\nMODE continuous\nSEGMENT 0 0 0 1\n");
    assert_eq!(code(&segcover(&["solve", "--alg", "greedy-strip", "-i", &vertical])), 2);
    assert_eq!(code(&segcover(&["solve", "--alg", "hv1-ptas", "-i", &vertical])), 2);
    assert_eq!(code(&segcover(&["solve", "--alg", "discrete-16", "-i", &vertical])), 2);
    assert_eq!(code(&segcover(&["solve", "--alg", "nonsense", "-i", &vertical])), 2);
    assert_eq!(code(&segcover(&["solve", "--alg", "exact", "-i", &path(&dir, "missing.seg")])), 2);
}

#[test]
fn exact_guards_size_and_budget() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "big.seg");
    let gen = ["gen", "--class", "arb", "-n", "17", "--seed", "1", "--bbox", "3", "-o", &inst];
    assert_eq!(code(&segcover(&gen)), 0);
    assert_eq!(code(&segcover(&["solve", "--alg", "exact", "-i", &inst])), 2);
    let out = segcover(&["solve", "--alg", "exact", "--force", "--budget", "2", "-i", &inst]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn truncated_cover_names_missing_segment() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "a.seg", "SEGCOVER 1\nMODE continuous\nSEGMENT 0 0 1 0\nSEGMENT 5 0 6 0\n");
    let cover = path(&dir, "a.cov");
    assert_eq!(code(&segcover(&["solve", "--alg", "greedy-strip", "-i", &inst, "-o", &cover])), 0);
    let full = fs::read_to_string(&cover).unwrap();
    assert_eq!(full, "COVER greedy-strip 2\nSQUARE 1 0\nSQUARE 6 0\nASSIGN 0 0\nASSIGN 1 1\n");
    let truncated = write(&dir, "t.cov", "COVER greedy-strip 1\nSQUARE 1 0\nASSIGN 0 0\n");
    let out = segcover(&["verify", "-i", &inst, "-c", &truncated]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("segment 1 is not covered"), "{}", stderr(&out));
}

#[test]
fn ptas_then_verify() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "hv.seg");
    assert_eq!(code(&segcover(&["gen", "--class", "hv1", "-n", "12", "--seed", "8", "--bbox", "5", "-o", &inst])), 0);
    let cover = path(&dir, "hv.cov");
    assert_eq!(code(&segcover(&["solve", "--alg", "hv1-ptas", "--k", "2", "-i", &inst, "-o", &cover])), 0);
    assert_eq!(code(&segcover(&["verify", "-i", &inst, "-c", &cover])), 0);
    assert_eq!(code(&segcover(&["solve", "--alg", "hv1-ptas", "-i", &inst])), 2);
}

#[test]
fn compare_table_within_factors() {
    let dir = TempDir::new().unwrap();
    for seed in 0..5 {
        let inst = path(&dir, &format!("hv{seed}.seg"));
        let gen = ["gen", "--class", "hv1", "-n", "8", "--seed", &seed.to_string(), "--bbox", "4", "-o", &inst];
        assert_eq!(code(&segcover(&gen)), 0);
        let out = segcover(&["compare", "--algs", "hv1-3approx,hv1-ptas", "--k", "2", "-i", &inst, "--exact"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let table = String::from_utf8(out.stdout).unwrap();
        let mut lines = table.lines();
        assert_eq!(lines.next(), Some("alg\tdigest\tsize\ttime_ms\tratio"));
        for (line, bound) in lines.zip([3.0, 2.25]) {
            let ratio: f64 = line.split('\t').nth(4).unwrap().parse().unwrap();
            assert!(ratio <= bound + 1e-4, "{line}");
        }
    }
}

#[test]
fn discrete_trace_lists_ledger() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "d.seg");
    assert_eq!(code(&segcover(&["gen", "--class", "discrete", "-n", "8", "-m", "10", "--seed", "2", "--bbox", "4", "-o", &inst])), 0);
    let trace = path(&dir, "trace.tsv");
    let out = segcover(&["solve", "--alg", "discrete-16", "-i", &inst, "--trace", &trace, "-o", &path(&dir, "d.cov")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("kind\tname\tsegments\tsquares\tlp_objective\toutput\nstage\tstep1\t8\t"));
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("check\t")).collect();
    assert!(checks.iter().any(|l| l.starts_with("check\tstep1\t")));
    assert!(checks.iter().all(|l| l.ends_with("\ttrue")), "{text}");
}

#[test]
fn jobs_do_not_change_output() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "hv.seg");
    assert_eq!(code(&segcover(&["gen", "--class", "hv1", "-n", "14", "--seed", "4", "--bbox", "5", "-o", &inst])), 0);
    let run = |jobs: &str| {
        let out = segcover(&["--jobs", jobs, "solve", "--alg", "hv1-ptas", "--k", "3", "-i", &inst]);
        assert_eq!(code(&out), 0);
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn reduce_vc_matches_vertex_cover() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "k3.vc", "VC 3 3\nE 0 1\nE 1 2\nE 0 2\n");
    let inst = path(&dir, "k3.seg");
    assert_eq!(code(&segcover(&["reduce-vc", "-g", &graph, "-o", &inst])), 0);
    let cover = path(&dir, "k3.cov");
    assert_eq!(code(&segcover(&["solve", "--alg", "exact", "-i", &inst, "-o", &cover])), 0);
    assert!(fs::read_to_string(&cover).unwrap().starts_with("COVER exact 2\n"));
    let looped = write(&dir, "loop.vc", "VC 2 1\nE 1 1\n");
    assert_eq!(code(&segcover(&["reduce-vc", "-g", &looped])), 2);
}

#[test]
fn gen_is_deterministic() {
    let a = segcover(&["gen", "--class", "arb", "-n", "20", "--seed", "11"]);
    let b = segcover(&["gen", "--class", "arb", "-n", "20", "--seed", "11"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(Path::new(env!("CARGO_BIN_EXE_segcover")).exists());
    assert_eq!(code(&segcover(&["gen", "--class", "weird", "-n", "2"])), 2);
}
