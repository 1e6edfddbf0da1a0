//! End-to-end tests of the specx binary: output contents, JSON round-trips,
//! batch ordering, and the documented exit codes.

use std::process::Command;

use specx_core::families;
use specx_core::{analyze_graph, parse_graph6, regular_degree, write_graph6, AnalysisOptions};

fn specx() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_specx"));
    cmd.env_remove("SPECX_TOL_EQUALITY");
    cmd
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let output = cmd.output().expect("binary runs");
    (
        output.status.code().expect("no signal"),
        String::from_utf8(output.stdout).expect("stdout is UTF-8"),
        String::from_utf8(output.stderr).expect("stderr is UTF-8"),
    )
}

fn gen_record(spec: &str) -> String {
    write_graph6(&families::generate_spec(spec).unwrap())
}

#[test]
fn analyze_odd4_text_shows_shifts_and_derived_spectrum() {
    let (code, stdout, _) = run(specx().args(["analyze", "--family", "odd:4"]));
    assert_eq!(code, 0);
    assert!(stdout.contains("n = 35  degree = 4"));
    assert!(stdout.contains("intersection array: {4,3,3;1,1,2}"));
    assert!(stdout.contains("tau = 3.6"));
    assert!(stdout.contains("tau = -8"));
    assert!(stdout.contains("phi = 22"));
    assert!(stdout.contains("verdict: equality"));
    assert!(stdout.contains("derived SRG spectrum: 16^1 2^20 (-4)^14"));
    assert!(stdout.contains("srg: (35, 16, 6, 8)"));
    assert!(stdout.contains("warnings: none"));
}

#[test]
fn analyze_json_round_trips_to_the_library_report() {
    let (code, stdout, _) = run(specx().args(["analyze", "--family", "odd:4", "--json"]));
    assert_eq!(code, 0);
    let from_cli: specx_core::AnalysisReport = serde_json::from_str(&stdout).unwrap();
    let graph = families::generate_spec("odd:4").unwrap();
    let local = analyze_graph(&graph, &AnalysisOptions::default()).unwrap();
    assert_eq!(from_cli, local);
}

#[test]
fn analyze_hamming_json_reports_the_tight_bound() {
    let (code, stdout, _) = run(specx().args(["analyze", "--family", "hamming:4,3", "--json"]));
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let theorems = report["theorems"].as_array().unwrap();
    let d4_dist2 = theorems
        .iter()
        .find(|t| t["theorem"] == "d4-dist2")
        .unwrap();
    assert_eq!(d4_dist2["applicable"], true);
    let rep = &d4_dist2["reports"][0];
    assert_eq!(rep["tau"], 4.0);
    assert_eq!(rep["phi"], 33.0);
    assert_eq!(rep["bound_target"], 33.0);
    assert_eq!(rep["verdict"], "equality");
    let eigs = rep["derived_srg"]["eigenvalues"].as_array().unwrap();
    let pairs: Vec<(f64, u64)> = eigs
        .iter()
        .map(|e| {
            (
                e["value"].as_f64().unwrap(),
                e["multiplicity"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(pairs, vec![(24.0, 1), (6.0, 24), (-3.0, 56)]);
    assert_eq!(rep["derived_srg"]["reconstructed"], false);
}

#[test]
fn analyze_complete_graph_marks_theorems_not_applicable() {
    let (code, stdout, _) = run(specx().args(["analyze", "--g6", "C~"]));
    assert_eq!(code, 0);
    assert!(stdout.contains("n = 4  degree = 3"));
    assert!(stdout.contains("distinct eigenvalues = 2"));
    assert!(stdout.contains("conclusion: distance-regular"));
    assert!(stdout.contains("theorem d3-dist2 (distance-2): not applicable"));
    assert!(stdout.contains("theorem d4-dist12 (distance-1-or-2): not applicable"));
}

#[test]
fn theorem_flag_restricts_the_run() {
    let (code, stdout, _) = run(specx().args([
        "analyze",
        "--family",
        "hypercube:4",
        "--theorem",
        "d4-dist12",
        "--json",
    ]));
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let theorems = report["theorems"].as_array().unwrap();
    assert_eq!(theorems.len(), 1);
    assert_eq!(theorems[0]["theorem"], "d4-dist12");
    assert_eq!(theorems[0]["reports"][0]["verdict"], "equality");
}

#[test]
fn gen_output_parses_back_to_the_family_member() {
    let (code, stdout, _) = run(specx().args(["gen", "odd:4"]));
    assert_eq!(code, 0);
    let graph = parse_graph6(stdout.trim()).unwrap();
    assert_eq!(graph.n(), 35);
    assert_eq!(regular_degree(&graph).unwrap(), 4);

    let (code, listing, _) = run(specx().args(["gen", "--list"]));
    assert_eq!(code, 0);
    for name in ["complete", "cycle", "hypercube", "hamming", "kneser", "odd"] {
        assert!(listing.contains(name));
    }
}

#[test]
fn convert_reencodes_canonically() {
    let (code, stdout, _) = run(specx().args(["convert", "--g6", "C~"]));
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "C~");

    let record = gen_record("cycle:6");
    let (code, stdout, _) = run(specx().args(["convert", "--g6", &record]));
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), record);
}

#[test]
fn batch_keeps_input_order_and_tolerates_bad_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("graphs.g6");
    let star = write_graph6(&specx_core::Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]));
    let body = format!(
        "{}\n\n!!bad\n{}\n{}\n",
        gen_record("odd:4"),
        gen_record("hamming:4,3"),
        star
    );
    std::fs::write(&path, body).unwrap();

    let (code, stdout, _) = run(specx().args(["batch", "--json"]).arg(&path));
    assert_eq!(code, 0, "bad records must not fail the batch");
    let lines: Vec<serde_json::Value> = stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0]["line"], 1);
    assert!(lines[0]["report"].is_object());
    assert_eq!(lines[1]["line"], 3);
    assert_eq!(lines[1]["error"]["class"], "parse");
    assert_eq!(lines[2]["line"], 4);
    assert_eq!(lines[2]["report"]["n"], 81);
    assert_eq!(lines[3]["line"], 5);
    assert_eq!(lines[3]["error"]["class"], "precondition");
    let summary = &lines[4]["summary"];
    assert_eq!(summary["total"], 4);
    assert_eq!(summary["analyzed"], 2);
    assert_eq!(summary["errors"]["parse"], 1);
    assert_eq!(summary["errors"]["precondition"], 1);
    assert_eq!(summary["distance_regular"], 2);
}

#[test]
fn batch_concurrency_preserves_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycles.g6");
    let specs: Vec<String> = (5..17).map(|n| format!("cycle:{n}")).collect();
    let body: String = specs.iter().map(|s| gen_record(s) + "\n").collect();
    std::fs::write(&path, body).unwrap();

    let (code, stdout, _) = run(specx().args(["batch", "--json"]).arg(&path));
    assert_eq!(code, 0);
    let lines: Vec<serde_json::Value> = stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), specs.len() + 1);
    for (i, line) in lines[..specs.len()].iter().enumerate() {
        assert_eq!(line["line"], i as u64 + 1);
        assert_eq!(line["report"]["n"], i as u64 + 5);
    }
    assert_eq!(
        lines[specs.len()]["summary"]["analyzed"],
        specs.len() as u64
    );
}

#[test]
fn batch_empty_file_yields_an_empty_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.g6");
    std::fs::write(&path, "").unwrap();

    let (code, stdout, _) = run(specx().args(["batch"]).arg(&path));
    assert_eq!(code, 0);
    assert!(stdout.contains("summary: 0 records, 0 analyzed, 0 failed"));

    let (code, stdout, _) = run(specx().args(["batch", "--json"]).arg(&path));
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 1);
    let summary: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(summary["summary"]["total"], 0);
}

#[test]
fn batch_output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.g6");
    let output = dir.path().join("out.txt");
    std::fs::write(&input, gen_record("cycle:5") + "\n").unwrap();

    let (code, stdout, _) = run(specx().args(["batch", "--output"]).arg(&output).arg(&input));
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let written = std::fs::read_to_string(&output).unwrap();
    assert!(written.contains("summary: 1 records, 1 analyzed, 0 failed"));
}

#[test]
fn missing_batch_file_is_an_io_error() {
    let (code, _, stderr) = run(specx().args(["batch", "/nonexistent/graphs.g6"]));
    assert_eq!(code, 1);
    assert!(stderr.contains("cannot read"));
}

#[test]
fn closed_stdout_pipe_exits_cleanly() {
    use std::io::Read;
    use std::process::Stdio;

    // Enough records that the NDJSON output far exceeds the pipe buffer, so
    // the writer is still mid-write when the read end closes.
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("many.g6");
    let record = gen_record("cycle:7");
    let lines: Vec<&str> = std::iter::repeat_n(record.as_str(), 400).collect();
    std::fs::write(&input, lines.join("\n")).unwrap();

    let mut child = specx()
        .args(["batch", "--json"])
        .arg(&input)
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    let mut head = [0u8; 256];
    child
        .stdout
        .take()
        .unwrap()
        .read_exact(&mut head)
        .expect("some output arrives");
    // Dropping the handle above closed the read end; the binary must treat
    // the resulting broken pipe as a clean early exit, not a panic.
    let status = child.wait().expect("binary terminates");
    assert_eq!(status.code(), Some(0));
    let mut stderr = String::new();
    child
        .stderr
        .take()
        .unwrap()
        .read_to_string(&mut stderr)
        .unwrap();
    assert!(stderr.is_empty(), "unexpected stderr: {stderr}");
}

#[test]
fn exit_codes_separate_parse_precondition_and_usage() {
    let (code, _, stderr) = run(specx().args(["analyze", "--g6", "!!bad"]));
    assert_eq!(code, 3);
    assert!(stderr.contains("graph6"));

    let (code, _, _) = run(specx().args(["analyze", "--family", "nope:3"]));
    assert_eq!(code, 3);

    // A path on three vertices is connected but irregular.
    let path3 = write_graph6(&specx_core::Graph::from_edges(3, [(0, 1), (1, 2)]));
    let (code, _, stderr) = run(specx().args(["analyze", "--g6", &path3]));
    assert_eq!(code, 4);
    assert!(stderr.contains("not regular"));

    // Two disjoint edges are regular but disconnected.
    let two_edges = write_graph6(&specx_core::Graph::from_edges(4, [(0, 1), (2, 3)]));
    let (code, _, stderr) = run(specx().args(["analyze", "--g6", &two_edges]));
    assert_eq!(code, 4);
    assert!(stderr.contains("disconnected"));

    let (code, _, stderr) = run(specx().args(["analyze", "--g6", "C~", "--theorem", "bogus"]));
    assert_eq!(code, 2);
    assert!(stderr.contains("registered names"));

    let (code, _, _) = run(specx().args(["analyze"]));
    assert_eq!(code, 2);
}

#[test]
fn equality_tolerance_env_is_a_default_override() {
    let (code, _, stderr) = run(specx()
        .args(["analyze", "--family", "cycle:5"])
        .env("SPECX_TOL_EQUALITY", "abc"));
    assert_eq!(code, 2);
    assert!(stderr.contains("SPECX_TOL_EQUALITY"));

    // An explicit flag beats a broken environment value.
    let (code, _, _) = run(specx()
        .args(["analyze", "--family", "cycle:5", "--tol-equality", "1e-6"])
        .env("SPECX_TOL_EQUALITY", "abc"));
    assert_eq!(code, 0);

    let (code, _, _) = run(specx()
        .args(["analyze", "--family", "cycle:5"])
        .env("SPECX_TOL_EQUALITY", "1e-9"));
    assert_eq!(code, 0);
}
