//! Input ingestion: json-lines, brace-matrix lines, and two-column CSV.

use algconc::arith::int;
use algconc::linalg::IntMat;
use algconc::SeifertMatrix;
use anyhow::Context;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// One JSON object per line: {"name": ..., "seifert_matrix": [[...]], "amphicheiral": ...}
    Json,
    /// One matrix per line in knot-table brace notation: {{-1,1},{0,-1}}
    Brace,
    /// Two-column CSV: name, brace-notation matrix
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub name: String,
    pub seifert_matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amphicheiral: Option<bool>,
}

/// One ingested item: either a record to classify or a per-item failure that
/// is carried through to the report (and to exit code 1).
#[derive(Debug, Clone)]
pub enum Parsed {
    Record(InputRecord),
    Bad { name: String, error: String },
}

/// Parse the whole input stream. Individual malformed items become
/// [`Parsed::Bad`]; only structural impossibilities are fatal.
pub fn parse_input(text: &str, format: InputFormat) -> anyhow::Result<Vec<Parsed>> {
    match format {
        InputFormat::Json => Ok(parse_json_lines(text)),
        InputFormat::Brace => Ok(parse_brace_lines(text)),
        InputFormat::Csv => parse_csv(text),
    }
}

fn parse_json_lines(text: &str) -> Vec<Parsed> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<InputRecord>(line) {
            Ok(rec) => out.push(Parsed::Record(rec)),
            Err(e) => out.push(Parsed::Bad {
                name: format!("line-{}", i + 1),
                error: format!("invalid JSON record: {e}"),
            }),
        }
    }
    out
}

fn parse_brace_lines(text: &str) -> Vec<Parsed> {
    let mut out = Vec::new();
    let mut item = 0usize;
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        item += 1;
        let name = format!("#{item}");
        match parse_brace_matrix(t) {
            Ok(m) => out.push(Parsed::Record(InputRecord {
                name,
                seifert_matrix: m,
                amphicheiral: None,
            })),
            Err(e) => out.push(Parsed::Bad { name, error: e }),
        }
    }
    out
}

fn parse_csv(text: &str) -> anyhow::Result<Vec<Parsed>> {
    let mut out = Vec::new();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    for (i, record) in reader.records().enumerate() {
        let number = i + 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                out.push(Parsed::Bad {
                    name: format!("line-{number}"),
                    error: format!("invalid CSV record: {e}"),
                });
                continue;
            }
        };
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let name = record.get(0).unwrap_or("").to_string();
        let matrix = record.get(1).unwrap_or("");
        // Tolerate one header row: first record whose matrix column does not
        // look like a brace matrix.
        if i == 0 && !matrix.trim_start().starts_with('{') {
            continue;
        }
        if record.len() < 2 {
            out.push(Parsed::Bad {
                name: if name.is_empty() {
                    format!("line-{number}")
                } else {
                    name
                },
                error: "expected two columns: name, brace-notation matrix".into(),
            });
            continue;
        }
        match parse_brace_matrix(matrix) {
            Ok(m) => out.push(Parsed::Record(InputRecord {
                name,
                seifert_matrix: m,
                amphicheiral: None,
            })),
            Err(e) => out.push(Parsed::Bad { name, error: e }),
        }
    }
    Ok(out)
}

/// Parse knot-table brace notation such as "{{-1,1},{0,-1}}".
pub fn parse_brace_matrix(s: &str) -> Result<Vec<Vec<i64>>, String> {
    let t = s.trim();
    if !t.starts_with('{') || !t.ends_with('}') {
        return Err(format!("expected a brace-notation matrix, got '{t}'"));
    }
    let json: String = t
        .chars()
        .map(|c| match c {
            '{' => '[',
            '}' => ']',
            other => other,
        })
        .collect();
    serde_json::from_str::<Vec<Vec<i64>>>(&json)
        .map_err(|e| format!("invalid brace-notation matrix '{t}': {e}"))
}

/// Validate an input record into a Seifert matrix. Reports non-square shapes
/// with the offending row and Seifert-condition violations with the row and
/// column at which unimodularity of V - V^t first fails.
pub fn validate(rec: &InputRecord) -> Result<SeifertMatrix, String> {
    let rows = &rec.seifert_matrix;
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(format!(
                "matrix is not square: row {i} has {} entries, expected {n}",
                row.len()
            ));
        }
    }
    let v = IntMat::from_rows(rows).map_err(|e| e.to_string())?;
    let d = v
        .sub(&v.transpose())
        .and_then(|d| d.det())
        .map_err(|e| e.to_string())?;
    if d != int(1) && d != int(-1) {
        let (r, c, why) = unimodularity_witness(rows);
        return Err(format!(
            "Seifert condition violated: det(V - V^t) = {d}, expected ±1; \
             first failure at row {r}, column {c} ({why})"
        ));
    }
    SeifertMatrix::from_rows(rows).map_err(|e| e.to_string())
}

/// Locate the first leading principal block of V - V^t whose determinant is
/// not ±1. Such a block exists whenever the full determinant is not ±1: for
/// even n the full matrix itself qualifies, and odd-sized skew matrices are
/// always singular.
fn unimodularity_witness(rows: &[Vec<i64>]) -> (usize, usize, String) {
    let n = rows.len();
    let mut k = 2;
    while k <= n {
        let block: Vec<Vec<i64>> = rows[..k].iter().map(|r| r[..k].to_vec()).collect();
        let det = IntMat::from_rows(&block)
            .and_then(|a| a.sub(&a.transpose()))
            .and_then(|d| d.det())
            .unwrap_or_else(|_| int(0));
        if det != int(1) && det != int(-1) {
            return (
                k - 1,
                k - 1,
                format!("leading {k}x{k} block of V - V^t has determinant {det}"),
            );
        }
        k += 2;
    }
    (
        n.saturating_sub(1),
        n.saturating_sub(1),
        format!("odd dimension {n} forces det(V - V^t) = 0"),
    )
}

pub fn read_input(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)
            .context("reading stdin")?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading input file '{path}'"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brace_notation_round_trips() {
        let m = parse_brace_matrix("{{-1,1},{0,-1}}").unwrap();
        assert_eq!(m, vec![vec![-1, 1], vec![0, -1]]);
        assert!(parse_brace_matrix("[[1,0],[0,1]]").is_err());
        assert!(parse_brace_matrix("{{1,2},{3}}").is_ok());
        assert!(parse_brace_matrix("{{1,a}}").is_err());
    }

    #[test]
    fn json_lines_keep_names_and_flags() {
        let text = "\n{\"name\":\"3_1\",\"seifert_matrix\":[[-1,1],[0,-1]]}\n\
                    {\"name\":\"k\",\"seifert_matrix\":[[1,1],[0,-1]],\"amphicheiral\":true}\n";
        let parsed = parse_json_lines(text);
        assert_eq!(parsed.len(), 2);
        match &parsed[0] {
            Parsed::Record(r) => {
                assert_eq!(r.name, "3_1");
                assert_eq!(r.amphicheiral, None);
            }
            other => panic!("unexpected {other:?}"),
        }
        match &parsed[1] {
            Parsed::Record(r) => assert_eq!(r.amphicheiral, Some(true)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_json_line_is_per_item() {
        let parsed = parse_json_lines("{\"name\":\n");
        assert_eq!(parsed.len(), 1);
        assert!(matches!(&parsed[0], Parsed::Bad { name, .. } if name == "line-1"));
    }

    #[test]
    fn csv_pairs_names_with_matrices() {
        let text = "name,matrix\n3_1,\"{{-1,1},{0,-1}}\"\n4_1,\"{{1,1},{0,-1}}\"\n";
        let parsed = parse_csv(text).unwrap();
        assert_eq!(parsed.len(), 2);
        match &parsed[0] {
            Parsed::Record(r) => {
                assert_eq!(r.name, "3_1");
                assert_eq!(r.seifert_matrix, vec![vec![-1, 1], vec![0, -1]]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn symmetric_matrix_is_rejected_with_position() {
        let rec = InputRecord {
            name: "id".into(),
            seifert_matrix: vec![vec![1, 0], vec![0, 1]],
            amphicheiral: None,
        };
        let err = validate(&rec).unwrap_err();
        assert!(err.contains("det(V - V^t) = 0"), "{err}");
        assert!(err.contains("row 1, column 1"), "{err}");
    }

    #[test]
    fn first_failing_block_is_reported() {
        // The upper-left 2x2 block is already non-unimodular here.
        let rec = InputRecord {
            name: "bad".into(),
            seifert_matrix: vec![
                vec![0, 2, 0, 0],
                vec![0, 0, 0, 0],
                vec![0, 0, 0, 1],
                vec![0, 0, 0, 0],
            ],
            amphicheiral: None,
        };
        let err = validate(&rec).unwrap_err();
        assert!(err.contains("row 1, column 1"), "{err}");
        assert!(err.contains("determinant 4"), "{err}");
    }

    #[test]
    fn odd_dimension_is_explained() {
        let rec = InputRecord {
            name: "odd".into(),
            seifert_matrix: vec![vec![1]],
            amphicheiral: None,
        };
        let err = validate(&rec).unwrap_err();
        assert!(err.contains("odd dimension"), "{err}");
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let rec = InputRecord {
            name: "ragged".into(),
            seifert_matrix: vec![vec![1, 2], vec![3]],
            amphicheiral: None,
        };
        let err = validate(&rec).unwrap_err();
        assert!(err.contains("row 1 has 1 entries"), "{err}");
    }
}
