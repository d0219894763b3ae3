//! End-to-end checks of the binary: exit codes, report schema, generator
//! determinism, and the verify round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bisect"))
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn report_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

const P4: &str = "c path on four vertices\np 4 3\ne 1 2 1\ne 2 3 1\ne 3 4 1\n";
const CLAW: &str = "p 4 3\ne 1 2 1\ne 1 3 1\ne 1 4 1\n";

#[test]
fn solve_brute_min_p4() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p4.gr", P4);
    let out = run(&[
        "solve",
        "--solver",
        "brute",
        "--objective",
        "min",
        g.to_str().unwrap(),
    ]);
    let rep = report_of(&out);
    assert_eq!(rep["value"], 1);
    assert_eq!(rep["solver"], "brute");
    assert_eq!(rep["n"], 4);
    assert_eq!(rep["assignment"].as_str().unwrap().len(), 4);
}

#[test]
fn solve_tw_with_td_file_reports_costs() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p4.gr", P4);
    let td = write(
        dir.path(),
        "p4.td",
        "s td 3 2 4\nb 1 1 2\nb 2 2 3\nb 3 3 4\n1 2\n2 3\n",
    );
    let out = run(&[
        "solve",
        "--solver",
        "tw",
        "--objective",
        "max",
        "--td",
        td.to_str().unwrap(),
        g.to_str().unwrap(),
    ]);
    let rep = report_of(&out);
    assert_eq!(rep["value"], 3);
    assert_eq!(rep["details"]["width"], 1);
    assert_eq!(rep["details"]["td_source"], "file");
    assert!(
        rep["details"]["join_cost"].as_u64().unwrap()
            <= rep["details"]["join_bound"].as_u64().unwrap()
    );
}

#[test]
fn solve_vc_matches_brute() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p4.gr", P4);
    for objective in ["min", "max"] {
        let vc = report_of(&run(&[
            "solve",
            "--solver",
            "vc",
            "--objective",
            objective,
            g.to_str().unwrap(),
        ]));
        let brute = report_of(&run(&[
            "solve",
            "--solver",
            "brute",
            "--objective",
            objective,
            g.to_str().unwrap(),
        ]));
        assert_eq!(vc["value"], brute["value"]);
    }
}

#[test]
fn solve_line_rejects_the_claw_with_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "claw.gr", CLAW);
    let out = run(&[
        "solve",
        "--solver",
        "line",
        "--objective",
        "max",
        g.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn solve_line_min_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p4.gr", CLAW);
    let out = run(&[
        "solve",
        "--solver",
        "line",
        "--objective",
        "min",
        g.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn vc_budget_too_small_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    // C4 needs a cover of size 2.
    let g = write(
        dir.path(),
        "c4.gr",
        "p 4 4\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 1 4 1\n",
    );
    let out = run(&[
        "solve",
        "--solver",
        "vc",
        "--objective",
        "max",
        "--k",
        "1",
        g.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_graph_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bad.gr", "p 2 1\ne 1 1 3\n");
    let out = run(&[
        "solve",
        "--solver",
        "brute",
        "--objective",
        "max",
        g.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_ktree_is_deterministic_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    for (out, seed) in [(&out1, "7"), (&out2, "7")] {
        let st = run(&[
            "gen",
            "ktree",
            "--n",
            "40",
            "--k",
            "3",
            "--keep",
            "0.8",
            "--seed",
            seed,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(st.status.success());
    }
    let g1 = std::fs::read(out1.with_extension("gr")).unwrap();
    let g2 = std::fs::read(out2.with_extension("gr")).unwrap();
    assert_eq!(g1, g2);
    let t1 = std::fs::read(out1.with_extension("td")).unwrap();
    let t2 = std::fs::read(out2.with_extension("td")).unwrap();
    assert_eq!(t1, t2);

    let st = run(&[
        "verify",
        "td",
        out1.with_extension("gr").to_str().unwrap(),
        out1.with_extension("td").to_str().unwrap(),
    ]);
    assert!(st.status.success());
}

#[test]
fn verify_td_flags_uncovered_edge() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p3.gr", "p 3 2\ne 1 2 1\ne 2 3 1\n");
    let td = write(dir.path(), "bad.td", "s td 2 2 3\nb 1 1\nb 2 2 3\n1 2\n");
    let out = run(&["verify", "td", g.to_str().unwrap(), td.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("edge"), "witness missing: {err}");
}

#[test]
fn solution_reports_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p4.gr", P4);
    for solver in ["brute", "tw", "vc"] {
        let out = run(&[
            "solve",
            "--solver",
            solver,
            "--objective",
            "max",
            g.to_str().unwrap(),
        ]);
        let rep_path = dir.path().join(format!("{solver}.json"));
        std::fs::write(&rep_path, &out.stdout).unwrap();
        let v = run(&[
            "verify",
            "solution",
            g.to_str().unwrap(),
            rep_path.to_str().unwrap(),
        ]);
        assert!(v.status.success());
    }
}

#[test]
fn tampered_solution_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p4.gr", P4);
    let out = run(&[
        "solve",
        "--solver",
        "brute",
        "--objective",
        "max",
        g.to_str().unwrap(),
    ]);
    let mut rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    rep["value"] = Value::from(rep["value"].as_i64().unwrap() + 1);
    let rep_path = write(dir.path(), "tampered.json", &rep.to_string());
    let v = run(&[
        "verify",
        "solution",
        g.to_str().unwrap(),
        rep_path.to_str().unwrap(),
    ]);
    assert_eq!(v.status.code(), Some(1));
}

#[test]
fn line_certificate_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    // C4 is its own line graph.
    let g = write(
        dir.path(),
        "c4.gr",
        "p 4 4\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 1 4 1\n",
    );
    let out = run(&[
        "solve",
        "--solver",
        "line",
        "--objective",
        "max",
        g.to_str().unwrap(),
    ]);
    let rep = report_of(&out);
    assert_eq!(rep["value"], 4);
    let rep_path = write(dir.path(), "line.json", &rep.to_string());
    let v = run(&[
        "verify",
        "certificate",
        g.to_str().unwrap(),
        rep_path.to_str().unwrap(),
    ]);
    assert!(v.status.success());
    let s = run(&[
        "verify",
        "solution",
        g.to_str().unwrap(),
        rep_path.to_str().unwrap(),
    ]);
    assert!(s.status.success());
}

#[test]
fn solve_line_from_root_graph() {
    let dir = tempfile::tempdir().unwrap();
    // Root P4: line graph is P3 with max bisection 2.
    let g = write(dir.path(), "p4.gr", P4);
    let out = run(&[
        "solve",
        "--solver",
        "line",
        "--objective",
        "max",
        "--root-graph",
        g.to_str().unwrap(),
    ]);
    let rep = report_of(&out);
    assert_eq!(rep["value"], 2);
    assert_eq!(rep["n"], 3);
}

#[test]
fn gen_path_gadget_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let seq = write(
        dir.path(),
        "seq.json",
        r#"{"a": [-1], "b": [-1], "c": [0, 2]}"#,
    );
    let gr = dir.path().join("gadget.gr");
    let map = dir.path().join("gadget.map.json");
    let st = run(&[
        "gen",
        "path-gadget",
        "--seq",
        seq.to_str().unwrap(),
        "--out",
        gr.to_str().unwrap(),
        "--map",
        map.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let rep = report_of(&run(&[
        "solve",
        "--solver",
        "tw",
        "--objective",
        "min",
        gr.to_str().unwrap(),
    ]));
    assert_eq!(rep["n"], 224);
    let side: Value = serde_json::from_str(&std::fs::read_to_string(&map).unwrap()).unwrap();
    let w = side["big_weight"].as_i64().unwrap();
    // n = 1, largest magnitude 2: W = 4 * 1 * 2 + 1.
    assert_eq!(w, 9);
    // Feasible triple: minimum bisection within 3W.
    assert!(rep["value"].as_i64().unwrap() <= 3 * w);
}

#[test]
fn gen_reductions_write_expected_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.gr", "p 3 3\ne 1 2 1\ne 1 3 1\ne 2 3 1\n");
    let out = dir.path().join("red.gr");
    let st = run(&[
        "gen",
        "maxcut-reduction",
        g.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("p 6 3"));

    // The 4-regular circulant on 10 vertices feeds the bipartite gadget.
    let mut edges = String::new();
    let mut count = 0;
    for v in 0..10usize {
        for s in [1usize, 2] {
            let u = (v + s) % 10;
            let (a, b) = (v.min(u) + 1, v.max(u) + 1);
            edges.push_str(&format!("e {a} {b} 1\n"));
            count += 1;
        }
    }
    let c10 = write(dir.path(), "c10.gr", &format!("p 10 {count}\n{edges}"));
    let gadget = dir.path().join("bip.gr");
    let st = run(&[
        "gen",
        "bipartite-gadget",
        c10.to_str().unwrap(),
        "--out",
        gadget.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let text = std::fs::read_to_string(&gadget).unwrap();
    // 2*5^4 + 6*5 vertices.
    assert!(text.starts_with("p 1280 "));
}

#[test]
fn bench_emits_fixed_columns() {
    let out = run(&[
        "bench", "--family", "path", "--sizes", "64,128", "--reps", "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "family,n,width,nice_nodes,time_ms,join_cost,join_bound"
    );
    assert_eq!(lines.clone().count(), 2);
    for line in lines {
        assert!(line.starts_with("path,"));
        assert_eq!(line.split(',').count(), 7);
    }
}

#[test]
fn thread_count_comes_from_flag_or_env_and_keeps_results() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "c4.gr",
        "p 4 4\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 1 4 1\n",
    );
    let single = report_of(&run(&[
        "solve",
        "--solver",
        "tw",
        "--objective",
        "max",
        g.to_str().unwrap(),
    ]));
    assert_eq!(single["details"]["threads"], 1);

    let flagged = report_of(&run(&[
        "solve",
        "--solver",
        "tw",
        "--objective",
        "max",
        "--threads",
        "2",
        g.to_str().unwrap(),
    ]));
    assert_eq!(flagged["details"]["threads"], 2);

    let out = bin()
        .env("BISECT_THREADS", "3")
        .args([
            "solve",
            "--solver",
            "tw",
            "--objective",
            "max",
            g.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    let env_rep = report_of(&out);
    assert_eq!(env_rep["details"]["threads"], 3);

    for rep in [&flagged, &env_rep] {
        assert_eq!(rep["value"], single["value"]);
        assert_eq!(rep["assignment"], single["assignment"]);
    }
}

#[test]
fn degenerate_graphs_solve_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.gr", "p 0 0\n");
    let single = write(dir.path(), "one.gr", "p 1 0\n");
    for (g, n) in [(&empty, 0), (&single, 1)] {
        for solver in ["brute", "tw", "vc"] {
            let rep = report_of(&run(&[
                "solve",
                "--solver",
                solver,
                "--objective",
                "max",
                g.to_str().unwrap(),
            ]));
            assert_eq!(rep["value"], 0, "solver {solver}");
            assert_eq!(rep["n"], n);
        }
    }
}

#[test]
fn report_schema_is_stable_across_solvers() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "c4.gr",
        "p 4 4\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 1 4 1\n",
    );
    let keys = |rep: &Value| {
        let mut ks: Vec<String> = rep.as_object().unwrap().keys().cloned().collect();
        ks.sort();
        ks
    };
    let expected = vec![
        "assignment",
        "details",
        "m",
        "n",
        "objective",
        "solver",
        "value",
        "wall_ms",
    ];
    for solver in ["brute", "tw", "vc", "line"] {
        let rep = report_of(&run(&[
            "solve",
            "--solver",
            solver,
            "--objective",
            "max",
            g.to_str().unwrap(),
        ]));
        assert_eq!(keys(&rep), expected, "solver {solver}");
    }
}

#[test]
fn text_format_prints_summary_only() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p4.gr", P4);
    let out = run(&[
        "solve",
        "--solver",
        "brute",
        "--objective",
        "min",
        "--format",
        "text",
        g.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("value 1"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}
