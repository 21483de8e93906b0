use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subelections"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const ELECTION_E: &str = "3\n1: 0,1,2\n1: 1,0,2\n1: 2,1,0\n";
const ELECTION_F: &str = "4\n1: 3,0,1,2\n1: 1,3,0,2\n1: 2,3,1,0\n";

#[test]
fn subiso_finds_the_embedding() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(dir.path(), "e.soc", ELECTION_E);
    let f = write(dir.path(), "f.soc", ELECTION_F);
    let out = run(&[
        "solve",
        "--variant",
        "subiso",
        "--case",
        "none",
        e.to_str().unwrap(),
        f.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("answer: yes"));
    assert!(text.contains("value: 9"));
    // Candidate 3 of the larger election stays unmatched.
    assert!(text.contains("sigma: 0->0 1->1 2->2"));
    assert!(text.contains("pi: 0->0 1->1 2->2"));
}

#[test]
fn identical_files_are_isomorphic() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(dir.path(), "e.soc", ELECTION_E);
    let out = run(&["solve", "--variant", "iso", e.to_str().unwrap(), e.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("answer: yes"));
    assert!(text.contains("value: 9"));
}

#[test]
fn negative_decision_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(dir.path(), "e.soc", ELECTION_E);
    let f = write(dir.path(), "f.soc", ELECTION_F);
    let out = run(&["solve", "--variant", "iso", e.to_str().unwrap(), f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("answer: no"));
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.soc", "3\n1: 0,0,2\n");
    let e = write(dir.path(), "e.soc", ELECTION_E);
    let out = run(&["solve", "--variant", "iso", bad.to_str().unwrap(), e.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 2"), "stderr: {err}");
    assert!(err.contains("repeated candidate"), "stderr: {err}");

    let empty = write(dir.path(), "empty.soc", "");
    let out = run(&["solve", "--variant", "iso", empty.to_str().unwrap(), e.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_variant_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(dir.path(), "e.soc", ELECTION_E);
    let out = run(&["solve", "--variant", "nope", e.to_str().unwrap(), e.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn threshold_only_for_max_common_voter() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(dir.path(), "e.soc", ELECTION_E);
    let out = run(&[
        "solve", "--variant", "iso", "--threshold", "2",
        e.to_str().unwrap(), e.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--threshold"));
}

#[test]
fn threshold_turns_maximization_into_a_decision() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(dir.path(), "e.soc", ELECTION_E);
    let f = write(dir.path(), "f.soc", ELECTION_F);
    let out = run(&[
        "solve", "--variant", "max-common-voter", "--threshold", "1",
        e.to_str().unwrap(), e.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("answer: yes"));
    // Candidate counts differ, so the best common voter set is empty.
    let out = run(&[
        "solve", "--variant", "max-common-voter", "--threshold", "1",
        e.to_str().unwrap(), f.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("answer: no"));
    assert!(text.contains("value: 0"));
}

#[test]
fn given_candidate_matching_restricts_the_solution() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(dir.path(), "e.soc", ELECTION_E);
    let sigma = write(dir.path(), "sigma.matching", "0 0\n1 1\n2 2\n");
    let out = run(&[
        "solve", "--variant", "max-common-voter", "--case", "cand",
        "--sigma", sigma.to_str().unwrap(),
        e.to_str().unwrap(), e.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("answer: optimum"));
    assert!(text.contains("value: 3"));

    let out = run(&[
        "solve", "--variant", "max-common-voter", "--case", "cand",
        e.to_str().unwrap(), e.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "--case cand without --sigma");
}

#[test]
fn sampling_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.soc");
    let b = dir.path().join("b.soc");
    for path in [&a, &b] {
        let out = run(&[
            "sample", "--culture", "ic", "-m", "4", "-n", "5", "--seed", "7",
            "-o", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    }
    let bytes_a = std::fs::read(&a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&b).unwrap());
    assert!(!bytes_a.is_empty());

    let out = run(&["solve", "--variant", "iso", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("value: 20"));

    let out = run(&[
        "sample", "--culture", "urn(alpha=-2)", "-m", "4", "-n", "5",
        "-o", a.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn experiment_matrix_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("matrix.csv");
    let svg = dir.path().join("matrix.svg");
    let out = run(&[
        "experiment", "matrix", "--models", "id,ic", "-m", "3", "-n", "4",
        "--pairs", "3", "--seed", "1", "--jobs", "2",
        "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = csv_text.lines().collect();
    assert_eq!(lines[0], "model_a,model_b,m,n,pairs,mean,stddev");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("id,id,3,4,3,1.000000"));
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.trim_end().ends_with("</svg>"));
}

#[test]
fn experiment_matrix_can_export_lp_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("matrix.csv");
    let lp_dir = dir.path().join("lps");
    let out = run(&[
        "experiment", "matrix", "--models", "id", "-m", "3", "-n", "2",
        "--pairs", "2", "--seed", "1",
        "--csv", csv.to_str().unwrap(),
        "--export-lp", lp_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let mut files: Vec<String> = std::fs::read_dir(&lp_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files, vec!["pair_0_0_0.lp", "pair_0_0_1.lp"]);
}

#[test]
fn experiment_timing_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("timing.csv");
    let out = run(&[
        "experiment", "timing", "--models", "id,ic", "--sweep", "voters",
        "--fixed", "3", "--sizes", "2,4", "--pairs", "2", "--seed", "1",
        "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "model,m,n,pairs,mean_seconds");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("id,3,2,2,"));
    assert!(lines[4].starts_with("ic,3,4,2,"));
}

#[test]
fn clique_reduction_round_trips_through_solve() {
    let dir = tempfile::tempdir().unwrap();
    let triangle = write(dir.path(), "triangle.edges", "3\n0 1\n0 2\n1 2\n");
    let prefix = dir.path().join("tri");
    let out = run(&[
        "reduce", "thm2", "--graph", triangle.to_str().unwrap(), "-k", "3",
        "-o", prefix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let left = dir.path().join("tri_left.soc");
    let right = dir.path().join("tri_right.soc");
    let out = run(&[
        "solve", "--variant", "subiso",
        left.to_str().unwrap(), right.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("answer: yes"));

    // A 4-cycle has enough edges for the gadget but no triangle.
    let cycle = write(dir.path(), "cycle.edges", "4\n0 1\n1 2\n2 3\n0 3\n");
    let prefix = dir.path().join("c4");
    let out = run(&[
        "reduce", "thm2", "--graph", cycle.to_str().unwrap(), "-k", "3",
        "-o", prefix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let out = run(&[
        "solve", "--variant", "subiso",
        dir.path().join("c4_left.soc").to_str().unwrap(),
        dir.path().join("c4_right.soc").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn common_candidates_reduction_finds_the_clique_number() {
    let dir = tempfile::tempdir().unwrap();
    let path_graph = write(dir.path(), "path.edges", "3\n0 1\n1 2\n");
    let prefix = dir.path().join("p3");
    let out = run(&[
        "reduce", "thm4", "--graph", path_graph.to_str().unwrap(),
        "-o", prefix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let out = run(&[
        "solve", "--variant", "max-common-cand", "--case", "both",
        "--sigma", dir.path().join("p3_sigma.matching").to_str().unwrap(),
        "--pi", dir.path().join("p3_pi.matching").to_str().unwrap(),
        dir.path().join("p3_left.soc").to_str().unwrap(),
        dir.path().join("p3_right.soc").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("value: 2"));
}

#[test]
fn export_ilp_matches_library_output() {
    let dir = tempfile::tempdir().unwrap();
    let e = write(dir.path(), "e.soc", ELECTION_E);
    let lp = dir.path().join("out.lp");
    let out = run(&[
        "export-ilp", e.to_str().unwrap(), e.to_str().unwrap(),
        "-o", lp.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(&lp).unwrap();
    let golden = include_str!("../../core/tests/data/example1_self.lp");
    assert_eq!(text, golden);
}

#[test]
fn size_limit_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.soc");
    let b = dir.path().join("b.soc");
    for (path, seed) in [(&a, "1"), (&b, "2")] {
        let out = run(&[
            "sample", "--culture", "ic", "-m", "5", "-n", "6", "--seed", seed,
            "-o", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let out = run(&[
        "solve", "--variant", "max-common",
        a.to_str().unwrap(), b.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("size limit"));
}
