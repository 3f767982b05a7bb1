//! Report records and the json / csv / table emitters.

use algconc::CertificateStep;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

/// The engine's pinned sign conventions, included as a header in every
/// report format.
pub const SIGN_CONVENTIONS: [&str; 4] = [
    "symmetrized form: Q = V + V^t",
    "isometry: T = V^{-1} V^t",
    "Alexander polynomial: Delta(t) = det(V - t V^t)",
    "signatures: sigma(omega) = signature((1-omega) V + (1-conj(omega)) V^t) \
     sampled at omega = x + i sqrt(1-x^2) on the upper unit circle",
];

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    /// One JSON object per line, preceded by a JSON header line.
    Json,
    /// Comma-separated rows with a commented header.
    Csv,
    /// Human-readable aligned columns.
    Table,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    /// Wall-clock classification time in microseconds.
    pub classify_us: u64,
    /// Wall-clock certificate verification time, when --verify is active.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify_us: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub name: String,
    /// "slice" | "2" | "4" | "infinite" | "undetermined"
    pub order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificate: Vec<CertificateStep>,
    pub timings: Timings,
}

/// One output row: a verdict or a per-item failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Row {
    Report(ReportRecord),
    Error { name: String, error: String },
}

impl Row {
    pub fn name(&self) -> &str {
        match self {
            Row::Report(r) => &r.name,
            Row::Error { name, .. } => name,
        }
    }

    pub fn is_error(&self) -> bool {
        matches!(self, Row::Error { .. })
    }
}

pub fn render(rows: &[Row], format: ReportFormat, explain: bool) -> anyhow::Result<String> {
    match format {
        ReportFormat::Json => render_json(rows),
        ReportFormat::Csv => render_csv(rows, explain),
        ReportFormat::Table => Ok(render_table(rows, explain)),
    }
}

fn render_json(rows: &[Row]) -> anyhow::Result<String> {
    let mut out = String::new();
    let header = serde_json::json!({ "header": { "sign_conventions": SIGN_CONVENTIONS } });
    out.push_str(&serde_json::to_string(&header)?);
    out.push('\n');
    for row in rows {
        out.push_str(&serde_json::to_string(row)?);
        out.push('\n');
    }
    Ok(out)
}

fn render_csv(rows: &[Row], explain: bool) -> anyhow::Result<String> {
    let mut out = String::new();
    for line in SIGN_CONVENTIONS {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["name", "order", "reason", "classify_us", "verify_us"];
    if explain {
        head.push("certificate");
    }
    writer.write_record(&head)?;
    for row in rows {
        let mut fields: Vec<String> = match row {
            Row::Report(r) => vec![
                r.name.clone(),
                r.order.clone(),
                r.reason.clone().unwrap_or_default(),
                r.timings.classify_us.to_string(),
                r.timings.verify_us.map(|v| v.to_string()).unwrap_or_default(),
            ],
            Row::Error { name, error } => vec![
                name.clone(),
                "error".into(),
                error.clone(),
                String::new(),
                String::new(),
            ],
        };
        if explain {
            fields.push(match row {
                Row::Report(r) if !r.certificate.is_empty() => {
                    serde_json::to_string(&r.certificate)?
                }
                _ => String::new(),
            });
        }
        writer.write_record(&fields)?;
    }
    out.push_str(&String::from_utf8(writer.into_inner()?)?);
    Ok(out)
}

fn render_table(rows: &[Row], explain: bool) -> String {
    let mut out = String::new();
    for line in SIGN_CONVENTIONS {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    let mut table: Vec<[String; 4]> = vec![[
        "NAME".into(),
        "ORDER".into(),
        "TIME".into(),
        "NOTES".into(),
    ]];
    for row in rows {
        table.push(match row {
            Row::Report(r) => {
                let mut notes = r.reason.clone().unwrap_or_default();
                if explain && !r.certificate.is_empty() {
                    let rules: Vec<&str> = r.certificate.iter().map(rule_name).collect();
                    if !notes.is_empty() {
                        notes.push_str("; ");
                    }
                    notes.push_str(&format!("rules: {}", rules.join(" > ")));
                }
                [
                    r.name.clone(),
                    r.order.clone(),
                    format_micros(r.timings.classify_us),
                    notes,
                ]
            }
            Row::Error { name, error } => [
                name.clone(),
                "error".into(),
                String::new(),
                error.clone(),
            ],
        });
    }
    let mut widths = [0usize; 4];
    for row in &table {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    for row in &table {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < row.len() {
                for _ in cell.len()..widths[i] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn format_micros(us: u64) -> String {
    if us >= 1000 {
        format!("{:.1}ms", us as f64 / 1000.0)
    } else {
        format!("{us}us")
    }
}

fn rule_name(step: &CertificateStep) -> &'static str {
    match step {
        CertificateStep::NonsingularReduction { .. } => "NonsingularReduction",
        CertificateStep::SignatureNonzero { .. } => "SignatureNonzero",
        CertificateStep::SignatureProfileZero { .. } => "SignatureProfileZero",
        CertificateStep::AlexanderFactored { .. } => "AlexanderFactored",
        CertificateStep::NoSymmetricFactor => "NoSymmetricFactor",
        CertificateStep::ConjugatePairMetabolizer { .. } => "ConjugatePairMetabolizer",
        CertificateStep::OddValuationObstruction { .. } => "OddValuationObstruction",
        CertificateStep::NoPrime3Mod4 { .. } => "NoPrime3Mod4",
        CertificateStep::CandidateScreen { .. } => "CandidateScreen",
        CertificateStep::Amphicheiral => "Amphicheiral",
        CertificateStep::FactorOddValuation { .. } => "FactorOddValuation",
        CertificateStep::ModPScreen { .. } => "ModPScreen",
        CertificateStep::TraceFactorization { .. } => "TraceFactorization",
        CertificateStep::CyclicSquareMetabolizer { .. } => "CyclicSquareMetabolizer",
        CertificateStep::EvenExponentComponents { .. } => "EvenExponentComponents",
        CertificateStep::LocalObstruction { .. } => "LocalObstruction",
        CertificateStep::PrecisionCeiling { .. } => "PrecisionCeiling",
        CertificateStep::UnresolvedLocalFactor { .. } => "UnresolvedLocalFactor",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ReportRecord {
        ReportRecord {
            name: "4_1".into(),
            order: "2".into(),
            reason: None,
            certificate: vec![CertificateStep::NoPrime3Mod4 {
                det_q: "-5".into(),
                factorization: vec![],
            }],
            timings: Timings {
                classify_us: 1234,
                verify_us: Some(77),
            },
        }
    }

    #[test]
    fn report_record_round_trips_through_json() {
        let r = sample();
        let text = serde_json::to_string(&r).unwrap();
        let back: ReportRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        // And again with the optional fields absent.
        let bare = ReportRecord {
            reason: Some("precision ceiling".into()),
            certificate: vec![],
            timings: Timings {
                classify_us: 9,
                verify_us: None,
            },
            ..sample()
        };
        let text = serde_json::to_string(&bare).unwrap();
        let back: ReportRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, bare);
    }

    #[test]
    fn json_report_starts_with_conventions_header() {
        let rows = vec![Row::Report(sample())];
        let text = render(&rows, ReportFormat::Json, true).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.contains("sign_conventions"));
        assert!(first.contains("Q = V + V^t"));
    }

    #[test]
    fn table_alignment_and_errors() {
        let rows = vec![
            Row::Report(sample()),
            Row::Error {
                name: "id".into(),
                error: "not a Seifert matrix".into(),
            },
        ];
        let text = render(&rows, ReportFormat::Table, false).unwrap();
        assert!(text.contains("NAME"));
        assert!(text.contains("error"));
        assert!(text.contains("not a Seifert matrix"));
    }

    #[test]
    fn csv_report_has_certificate_column_only_with_explain() {
        let rows = vec![Row::Report(sample())];
        let with = render(&rows, ReportFormat::Csv, true).unwrap();
        assert!(with.contains("certificate"));
        assert!(with.contains("NoPrime3Mod4"));
        let without = render(&rows, ReportFormat::Csv, false).unwrap();
        assert!(!without.contains("certificate"));
    }
}
