//! End-to-end tests of the command-line interface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hublocate"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

/// The worked two-task network, metric-closure matrix hand-checked
/// against an independent shortest-path computation.
fn figure_instance_json(p: usize) -> String {
    format!(
        concat!(
            r#"{{"version":1,"alpha":0.5,"variant":{{"type":"pHM","p":{}}},"#,
            r#""geometry":{{"kind":"matrix","dist":["#,
            "[0,7,7,1,1,6,4,6],",
            "[7,0,6,6,8,1,3,7],",
            "[7,6,0,6,6,7,3,1],",
            "[1,6,6,0,2,5,3,7],",
            "[1,8,6,2,0,7,5,5],",
            "[6,1,7,5,7,0,4,8],",
            "[4,3,3,3,5,4,0,4],",
            "[6,7,1,7,5,8,4,0]",
            r#"]}},"branches":[0,1,2],"hubs":[3,4,5,6,7],"tasks":[[0,1],[0,2]]}}"#
        ),
        p
    )
}

fn csv_field(line: &str, idx: usize) -> &str {
    line.split(',').nth(idx).expect("field")
}

fn csv_rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("instance,") && !l.is_empty())
        .collect()
}

#[test]
fn gen_solve_exact_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    run_ok(&[
        "gen", "--family", "custom", "--tasks", "12", "--branches", "6", "--hubs", "7",
        "--alpha", "0.5", "--p", "3", "--seed", "11", "--out", inst.to_str().unwrap(),
    ]);
    let solve_csv = dir.path().join("solve.csv");
    run_ok(&[
        "solve", inst.to_str().unwrap(), "--algo", "both", "--flp", "greedy",
        "--out", solve_csv.to_str().unwrap(),
    ]);
    let exact_out = run_ok(&["exact", inst.to_str().unwrap()]);

    let solve_text = std::fs::read_to_string(&solve_csv).unwrap();
    let rows = csv_rows(&solve_text);
    assert_eq!(rows.len(), 3); // pa, bap, both
    let objective = |row: &str| csv_field(row, 3).parse::<f64>().unwrap();
    let pa = objective(rows[0]);
    let bap = objective(rows[1]);
    let both = objective(rows[2]);
    assert_eq!(both, pa.min(bap));

    let exact_rows = csv_rows(&exact_out);
    let exact = objective(exact_rows[0]);
    assert!(exact <= pa + 1e-9);
    assert!(exact <= bap + 1e-9);
}

#[test]
fn figure_instance_solves_to_the_hand_enumerated_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("fig.json");
    std::fs::write(&inst, figure_instance_json(2)).unwrap();

    let exact_out = run_ok(&["exact", inst.to_str().unwrap()]);
    let exact_row = csv_rows(&exact_out)[0].to_string();
    assert_eq!(csv_field(&exact_row, 3), "11");

    let solved = run_ok(&[
        "solve", inst.to_str().unwrap(), "--algo", "both", "--flp", "exact",
    ]);
    for row in csv_rows(&solved) {
        let objective: f64 = csv_field(row, 3).parse().unwrap();
        assert!(objective >= 11.0 - 1e-9, "{row}");
    }

    // the four-hub relaxation reaches the cheaper tours
    std::fs::write(&inst, figure_instance_json(4)).unwrap();
    let exact_out = run_ok(&["exact", inst.to_str().unwrap()]);
    assert_eq!(csv_field(csv_rows(&exact_out)[0], 3), "9");
}

#[test]
fn generation_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    let gen = |path: &Path, seed: &str| {
        run_ok(&[
            "gen", "--family", "custom", "--tasks", "30", "--branches", "8", "--hubs", "9",
            "--alpha", "0.7", "--setup", "uniform", "--seed", seed,
            "--out", path.to_str().unwrap(),
        ]);
    };
    gen(&a, "5");
    gen(&b, "5");
    gen(&c, "6");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn solve_appends_without_duplicating_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("fig.json");
    std::fs::write(&inst, figure_instance_json(2)).unwrap();
    let csv = dir.path().join("log.csv");
    for _ in 0..2 {
        run_ok(&[
            "solve", inst.to_str().unwrap(), "--algo", "pa", "--flp", "exact",
            "--out", csv.to_str().unwrap(),
        ]);
    }
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.matches("# hublocate solve v1").count(), 1);
    assert_eq!(text.matches("instance,algo").count(), 1);
    assert_eq!(csv_rows(&text).len(), 2);
}

#[test]
fn empty_task_instances_cost_only_their_setup() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("empty.json");
    std::fs::write(
        &inst,
        r#"{"version":1,"alpha":0.5,"variant":{"type":"uHLP","setup":[1.0,2.0]},"geometry":{"kind":"coords","norm_p":2.0,"points":[[0,0],[1,0],[0,1],[1,1]]},"branches":[0,1],"hubs":[2,3],"tasks":[]}"#,
    )
    .unwrap();
    let out = run_ok(&["solve", inst.to_str().unwrap(), "--algo", "both", "--flp", "greedy"]);
    for row in csv_rows(&out) {
        assert_eq!(csv_field(row, 3), "0"); // objective
        assert_eq!(csv_field(row, 6), "0"); // open hubs
    }
}

#[test]
fn bounds_reports_the_published_intersections() {
    let out = run_ok(&["bounds", "--gamma", "2.675"]);
    let summary = out
        .lines()
        .find(|l| l.contains("combined_guarantee"))
        .expect("summary line");
    assert!(summary.contains("bap_guarantee=3.675"));
    assert!(summary.contains("combined_guarantee=3.450"));
    let first_row = csv_rows(&out)
        .into_iter()
        .find(|l| !l.starts_with("alpha,"))
        .unwrap()
        .to_string();
    assert!(first_row.starts_with("0.01,100,"));
    assert_eq!(out.lines().filter(|l| l.starts_with("0.")).count(), 99);
}

#[test]
fn validate_metric_passes_on_reductions() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("fig.json");
    std::fs::write(&inst, figure_instance_json(2)).unwrap();
    for reduction in ["none", "pa", "bap"] {
        let out = run_ok(&["validate-metric", inst.to_str().unwrap(), "--reduction", reduction]);
        assert!(out.contains("violations=0"), "{reduction}: {out}");
    }
}

#[test]
fn export_ilp_writes_the_model() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("fig.json");
    std::fs::write(&inst, figure_instance_json(2)).unwrap();
    let lp = dir.path().join("model.lp");
    run_ok(&["export-ilp", inst.to_str().unwrap(), "--out", lp.to_str().unwrap()]);
    let text = std::fs::read_to_string(&lp).unwrap();
    assert!(text.starts_with("\\"));
    assert!(text.contains("Minimize"));
    assert!(text.contains("cardinality: Y_3 + Y_4 + Y_5 + Y_6 + Y_7 <= 2"));
    assert!(text.contains("assign_0_1:"));
    assert!(text.contains("assign_0_2:"));
    assert!(text.ends_with("End\n"));
    // 2 tasks x 5 x 5 hub pairs, two linking rows each
    assert_eq!(text.matches("open_first_").count(), 50);
    assert_eq!(text.matches("open_second_").count(), 50);
}

#[test]
fn input_errors_exit_with_code_one() {
    let missing = run(&["solve", "/nonexistent/instance.json"]);
    assert_eq!(missing.status.code(), Some(1));

    let incomplete = run(&["gen", "--family", "custom", "--alpha", "0.5", "--p", "1"]);
    assert_eq!(incomplete.status.code(), Some(1));

    let bad_flag = run(&["solve", "--bogus-flag"]);
    assert_eq!(bad_flag.status.code(), Some(1));

    let no_variant = run(&[
        "gen", "--family", "small", "--alpha", "0.5", "--seed", "1",
    ]);
    assert_eq!(no_variant.status.code(), Some(1));
}

#[test]
fn audit_accepts_an_instance_file() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("fig.json");
    std::fs::write(&inst, figure_instance_json(2)).unwrap();
    let csv = dir.path().join("audit.csv");
    let out = run(&[
        "audit", inst.to_str().unwrap(), "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1); // matrix geometry: metric closure only
    let row = rows[0];
    assert!(row.ends_with(','), "no violations expected: {row}");
    let opt: f64 = csv_field(row, 4).parse().unwrap();
    assert_eq!(opt, 11.0);
}

#[test]
fn jobs_flag_does_not_change_bench_output() {
    let dir = tempfile::tempdir().unwrap();
    let j1 = dir.path().join("j1.csv");
    let j4 = dir.path().join("j4.csv");
    let mut args = vec![
        "bench", "--family", "custom", "--tasks", "40", "--branches", "10", "--hubs", "8",
        "--p", "2", "--alphas", "0.3,0.9", "--seeds", "4",
    ];
    let run_jobs = |jobs: &str, out: &PathBuf, args: &[&str]| {
        let mut full = vec!["--jobs", jobs];
        full.extend_from_slice(args);
        full.push("--out");
        full.push(out.to_str().unwrap());
        run_ok(&full);
    };
    run_jobs("1", &j1, &args);
    run_jobs("4", &j4, &args);
    assert_eq!(
        std::fs::read(&j1).unwrap(),
        std::fs::read(&j4).unwrap(),
        "bench output must not depend on parallelism"
    );
    args.push("--flp");
    args.push("exact");
    let e1 = dir.path().join("e1.csv");
    let e4 = dir.path().join("e4.csv");
    run_jobs("1", &e1, &args);
    run_jobs("4", &e4, &args);
    assert_eq!(std::fs::read(&e1).unwrap(), std::fs::read(&e4).unwrap());
}
