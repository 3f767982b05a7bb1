//! End-to-end tests of the `algconc` binary.

use std::io::Write;
use std::process::{Command, Stdio};

use algconc_cli::report::{ReportRecord, Row};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_algconc"))
}

fn run_with_stdin(mut cmd: Command, stdin: &str) -> (i32, String, String) {
    let mut child = cmd
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn algconc");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// Parse a json report: skip the header line, return the rows.
fn json_rows(stdout: &str) -> Vec<Row> {
    let mut lines = stdout.lines();
    let header = lines.next().expect("header line");
    assert!(header.contains("sign_conventions"), "missing header: {header}");
    lines
        .map(|l| serde_json::from_str::<Row>(l).expect("row parses"))
        .collect()
}

fn orders(rows: &[Row]) -> Vec<(String, String)> {
    rows.iter()
        .map(|r| match r {
            Row::Report(rec) => (rec.name.clone(), rec.order.clone()),
            Row::Error { name, .. } => (name.clone(), "error".into()),
        })
        .collect()
}

const TWO_KNOTS: &str = "{\"name\":\"3_1\",\"seifert_matrix\":[[-1,1],[0,-1]]}\n\
                         {\"name\":\"4_1\",\"seifert_matrix\":[[1,1],[0,-1]]}\n";

const GENUS3_ORDER2: &str = "{\"name\":\"12n525\",\"seifert_matrix\":\
[[2,2,-1,0,0,1],[1,1,0,1,0,0],[-1,-1,-1,0,0,0],[0,1,-1,1,-1,2],[0,0,0,-2,3,0],[1,0,0,2,-1,-2]]}\n";

#[test]
fn two_knot_table_lists_infinite_and_order_two() {
    let (code, stdout, _) = run_with_stdin(bin(), TWO_KNOTS);
    assert_eq!(code, 0);
    assert!(stdout.lines().any(|l| l.starts_with('#')), "conventions header");
    let body: Vec<&str> = stdout.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(body[0].starts_with("NAME"));
    assert!(body[1].starts_with("3_1") && body[1].contains("infinite"), "{}", body[1]);
    assert!(body[2].starts_with("4_1"), "{}", body[2]);
    assert!(body[2].split_whitespace().nth(1) == Some("2"), "{}", body[2]);
}

#[test]
fn brace_format_reads_knot_table_lines() {
    let mut cmd = bin();
    cmd.args(["--format", "brace", "--report", "json"]);
    let (code, stdout, _) = run_with_stdin(cmd, "{{-1,1},{0,-1}}\n{{1,1},{0,-2}}\n");
    assert_eq!(code, 0);
    let got = orders(&json_rows(&stdout));
    assert_eq!(
        got,
        vec![
            ("#1".to_string(), "infinite".to_string()),
            ("#2".to_string(), "slice".to_string()),
        ]
    );
}

#[test]
fn csv_format_pairs_names_with_matrices() {
    let mut cmd = bin();
    cmd.args(["--format", "csv", "--report", "json"]);
    let input = "name,seifert_matrix\n3_1,\"{{-1,1},{0,-1}}\"\n6_1ish,\"{{1,1},{0,-2}}\"\n";
    let (code, stdout, _) = run_with_stdin(cmd, input);
    assert_eq!(code, 0);
    let got = orders(&json_rows(&stdout));
    assert_eq!(
        got,
        vec![
            ("3_1".to_string(), "infinite".to_string()),
            ("6_1ish".to_string(), "slice".to_string()),
        ]
    );
}

#[test]
fn symmetric_matrix_is_rejected_but_batch_continues() {
    let mut cmd = bin();
    cmd.args(["--report", "json"]);
    let input = "{\"name\":\"id\",\"seifert_matrix\":[[1,0],[0,1]]}\n\
                 {\"name\":\"3_1\",\"seifert_matrix\":[[-1,1],[0,-1]]}\n";
    let (code, stdout, _) = run_with_stdin(cmd, input);
    assert_eq!(code, 1, "per-item error must set exit code 1");
    let rows = json_rows(&stdout);
    assert_eq!(rows.len(), 2);
    match &rows[0] {
        Row::Error { name, error } => {
            assert_eq!(name, "id");
            assert!(error.contains("det(V - V^t) = 0"), "{error}");
            assert!(error.contains("row 1, column 1"), "{error}");
        }
        other => panic!("expected error row, got {other:?}"),
    }
    assert_eq!(orders(&rows)[1], ("3_1".into(), "infinite".into()));
}

#[test]
fn explain_emits_certificate_steps() {
    let mut cmd = bin();
    cmd.args(["--report", "json", "--explain"]);
    let (code, stdout, _) = run_with_stdin(cmd, TWO_KNOTS);
    assert_eq!(code, 0);
    for row in json_rows(&stdout) {
        match row {
            Row::Report(rec) => assert!(
                !rec.certificate.is_empty(),
                "certificate missing for {}",
                rec.name
            ),
            other => panic!("unexpected {other:?}"),
        }
    }
    assert!(stdout.contains("\"rule\""));
}

#[test]
fn report_rows_parse_and_reserialize_identically() {
    let mut cmd = bin();
    cmd.args(["--report", "json", "--explain", "--verify"]);
    let (code, stdout, _) = run_with_stdin(cmd, TWO_KNOTS);
    assert_eq!(code, 0);
    for line in stdout.lines().skip(1) {
        let row: Row = serde_json::from_str(line).unwrap();
        let rec = match row {
            Row::Report(rec) => rec,
            other => panic!("unexpected {other:?}"),
        };
        let reserialized = serde_json::to_string(&rec).unwrap();
        assert_eq!(reserialized, line, "parse/serialize is not the identity");
        let reparsed: ReportRecord = serde_json::from_str(&reserialized).unwrap();
        assert_eq!(reparsed, rec);
    }
}

#[test]
fn verify_passes_on_reference_matrices() {
    let mut cmd = bin();
    cmd.args(["--report", "json", "--verify"]);
    let input = "{\"name\":\"3_1\",\"seifert_matrix\":[[-1,1],[0,-1]]}\n\
                 {\"name\":\"4_1\",\"seifert_matrix\":[[1,1],[0,-1]]}\n\
                 {\"name\":\"slice\",\"seifert_matrix\":[[1,1],[0,-2]]}\n\
                 {\"name\":\"order4\",\"seifert_matrix\":[[1,1],[0,-5]]}\n";
    let (code, stdout, stderr) = run_with_stdin(cmd, input);
    assert_eq!(code, 0, "stderr: {stderr}");
    let got = orders(&json_rows(&stdout));
    assert_eq!(
        got,
        vec![
            ("3_1".to_string(), "infinite".to_string()),
            ("4_1".to_string(), "2".to_string()),
            ("slice".to_string(), "slice".to_string()),
            ("order4".to_string(), "4".to_string()),
        ]
    );
}

#[test]
fn row_order_matches_input_order_for_any_jobs() {
    let mut input = String::new();
    let matrices = [
        "[[-1,1],[0,-1]]",
        "[[1,1],[0,-1]]",
        "[[1,1],[0,-2]]",
        "[[1,1],[0,-5]]",
    ];
    for i in 0..12 {
        input.push_str(&format!(
            "{{\"name\":\"k{i}\",\"seifert_matrix\":{}}}\n",
            matrices[i % matrices.len()]
        ));
    }
    let mut sequential = bin();
    sequential.args(["--report", "json", "--jobs", "1"]);
    let (c1, out1, _) = run_with_stdin(sequential, &input);
    let mut parallel = bin();
    parallel.args(["--report", "json", "--jobs", "4"]);
    let (c2, out2, _) = run_with_stdin(parallel, &input);
    assert_eq!((c1, c2), (0, 0));
    let a = orders(&json_rows(&out1));
    let b = orders(&json_rows(&out2));
    assert_eq!(a, b, "row order must not depend on --jobs");
    let names: Vec<String> = a.iter().map(|(n, _)| n.clone()).collect();
    let expected: Vec<String> = (0..12).map(|i| format!("k{i}")).collect();
    assert_eq!(names, expected, "rows must follow input order");
}

#[test]
fn jobs_env_variable_is_respected_and_validated() {
    let mut cmd = bin();
    cmd.args(["--report", "json"]).env("ALGCONC_JOBS", "2");
    let (code, stdout, _) = run_with_stdin(cmd, TWO_KNOTS);
    assert_eq!(code, 0);
    assert_eq!(json_rows(&stdout).len(), 2);

    let mut bad = bin();
    bad.env("ALGCONC_JOBS", "many");
    let (code, _, stderr) = run_with_stdin(bad, TWO_KNOTS);
    assert_eq!(code, 2, "invalid ALGCONC_JOBS is a fatal config error");
    assert!(stderr.contains("ALGCONC_JOBS"), "{stderr}");

    // --jobs beats the environment.
    let mut flagged = bin();
    flagged
        .args(["--report", "json", "--jobs", "1"])
        .env("ALGCONC_JOBS", "many");
    let (code, _, _) = run_with_stdin(flagged, TWO_KNOTS);
    assert_eq!(code, 0);
}

#[test]
fn precision_ceiling_produces_undetermined_and_default_decides() {
    let mut limited = bin();
    limited.args(["--report", "json", "--max-precision", "4"]);
    let (code, stdout, _) = run_with_stdin(limited, GENUS3_ORDER2);
    assert_eq!(code, 0, "undetermined is a verdict, not an error");
    let rows = json_rows(&stdout);
    match &rows[0] {
        Row::Report(rec) => {
            assert_eq!(rec.order, "undetermined");
            let reason = rec.reason.as_deref().unwrap_or("");
            assert!(reason.contains("precision ceiling"), "{reason}");
        }
        other => panic!("unexpected {other:?}"),
    }

    let mut default = bin();
    default.args(["--report", "json", "--verify"]);
    let (code, stdout, _) = run_with_stdin(default, GENUS3_ORDER2);
    assert_eq!(code, 0);
    assert_eq!(orders(&json_rows(&stdout))[0].1, "2");
}

#[test]
fn input_and_output_files_round_trip() {
    let dir = std::env::temp_dir();
    let input_path = dir.join(format!("algconc-cli-in-{}.jsonl", std::process::id()));
    let output_path = dir.join(format!("algconc-cli-out-{}.csv", std::process::id()));
    std::fs::write(&input_path, TWO_KNOTS).unwrap();
    let status = bin()
        .args([
            "--input",
            input_path.to_str().unwrap(),
            "--output",
            output_path.to_str().unwrap(),
            "--report",
            "csv",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&output_path).unwrap();
    assert!(text.starts_with("# symmetrized form"));
    assert!(text.contains("3_1,infinite"));
    assert!(text.contains("4_1,2"));
    std::fs::remove_file(&input_path).ok();
    std::fs::remove_file(&output_path).ok();
}

#[test]
fn fatal_configuration_errors_exit_two() {
    let (code, _, stderr) = run_with_stdin(
        {
            let mut c = bin();
            c.args(["--input", "/nonexistent/path.jsonl"]);
            c
        },
        "",
    );
    assert_eq!(code, 2);
    assert!(stderr.contains("nonexistent"), "{stderr}");

    let (code, _, _) = run_with_stdin(
        {
            let mut c = bin();
            c.args(["--format", "yaml"]);
            c
        },
        "",
    );
    assert_eq!(code, 2, "clap rejects unknown formats");
}

#[test]
fn empty_input_is_a_successful_empty_report() {
    let mut cmd = bin();
    cmd.args(["--report", "json"]);
    let (code, stdout, _) = run_with_stdin(cmd, "");
    assert_eq!(code, 0);
    assert_eq!(json_rows(&stdout).len(), 0);
}
