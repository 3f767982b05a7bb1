//! Batch classification of integral Seifert matrices: ingestion, parallel
//! classification behind a deterministic collator, and report emission.
//!
//! Exit codes: 0 full success, 1 any per-item error (including certificate
//! verification mismatches), 2 fatal configuration errors.

pub mod input;
pub mod report;

use std::time::Instant;

use algconc::{classify, verify_certificate, ClassifyOptions};
use anyhow::Context;
use clap::Parser;
use rayon::prelude::*;

use input::{parse_input, read_input, validate, InputFormat, Parsed};
use report::{render, ReportFormat, ReportRecord, Row, Timings};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "algconc",
    version,
    about = "Classify the algebraic concordance order (slice, 2, 4, or infinite) \
             of integral Seifert matrices, with replayable certificates"
)]
pub struct Args {
    /// Input path, or "-" for stdin.
    #[arg(long, default_value = "-")]
    pub input: String,

    /// Input format.
    #[arg(long, value_enum, default_value_t = InputFormat::Json)]
    pub format: InputFormat,

    /// Output path, or "-" for stdout.
    #[arg(long, default_value = "-")]
    pub output: String,

    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    pub report: ReportFormat,

    /// Include the full certificate of every verdict in the report.
    #[arg(long)]
    pub explain: bool,

    /// Ceiling on p-adic working precision (p^K) before the engine returns
    /// "undetermined" rather than guessing.
    #[arg(long, default_value_t = 64)]
    pub max_precision: u32,

    /// Worker threads; defaults to ALGCONC_JOBS or the number of cores.
    #[arg(long)]
    pub jobs: Option<usize>,

    /// Replay every certificate against an independent checker before
    /// emitting. Never changes a verdict; a mismatch fails the item.
    #[arg(long)]
    pub verify: bool,
}

/// Run the batch job. `Ok(code)` is the process exit code for per-item
/// outcomes; `Err` means a fatal configuration problem (exit code 2).
pub fn run(args: &Args) -> anyhow::Result<i32> {
    let text = read_input(&args.input)?;
    let parsed = parse_input(&text, args.format)?;
    let jobs = resolve_jobs(args.jobs)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building worker pool")?;

    let outcomes: Vec<(Row, Option<String>)> = pool.install(|| {
        parsed
            .par_iter()
            .map(|item| process_one(item, args))
            .collect()
    });

    let mut any_error = false;
    let mut rows = Vec::with_capacity(outcomes.len());
    for (row, verify_error) in outcomes {
        if row.is_error() {
            any_error = true;
        }
        if let Some(msg) = verify_error {
            any_error = true;
            eprintln!("verification failed for '{}': {msg}", row.name());
        }
        rows.push(row);
    }

    let rendered = render(&rows, args.report, args.explain)?;
    if args.output == "-" {
        print!("{rendered}");
    } else {
        std::fs::write(&args.output, rendered)
            .with_context(|| format!("writing output file '{}'", args.output))?;
    }
    Ok(if any_error { 1 } else { 0 })
}

/// Classify one parsed item. The second component reports a certificate
/// verification failure, which taints the exit code but never the verdict.
fn process_one(item: &Parsed, args: &Args) -> (Row, Option<String>) {
    let rec = match item {
        Parsed::Bad { name, error } => {
            return (
                Row::Error {
                    name: name.clone(),
                    error: error.clone(),
                },
                None,
            )
        }
        Parsed::Record(rec) => rec,
    };
    let matrix = match validate(rec) {
        Ok(v) => v,
        Err(error) => {
            return (
                Row::Error {
                    name: rec.name.clone(),
                    error,
                },
                None,
            )
        }
    };
    let options = ClassifyOptions {
        amphicheiral: rec.amphicheiral.unwrap_or(false),
        max_precision: args.max_precision,
    };
    let started = Instant::now();
    let verdict = match classify(&matrix, &options) {
        Ok(v) => v,
        Err(e) => {
            return (
                Row::Error {
                    name: rec.name.clone(),
                    error: format!("classification failed: {e}"),
                },
                None,
            )
        }
    };
    let classify_us = started.elapsed().as_micros() as u64;

    let (verify_us, verify_error) = if args.verify {
        let started = Instant::now();
        let outcome = verify_certificate(&matrix, &verdict);
        (
            Some(started.elapsed().as_micros() as u64),
            outcome.err().map(|e| e.to_string()),
        )
    } else {
        (None, None)
    };

    let record = ReportRecord {
        name: rec.name.clone(),
        order: verdict.order.as_str().to_string(),
        reason: verdict.reason.clone(),
        certificate: if args.explain {
            verdict.certificate
        } else {
            Vec::new()
        },
        timings: Timings {
            classify_us,
            verify_us,
        },
    };
    (Row::Report(record), verify_error)
}

fn resolve_jobs(flag: Option<usize>) -> anyhow::Result<usize> {
    if let Some(j) = flag {
        return Ok(j);
    }
    match std::env::var("ALGCONC_JOBS") {
        Ok(value) => value
            .trim()
            .parse::<usize>()
            .with_context(|| format!("ALGCONC_JOBS must be a thread count, got '{value}'")),
        Err(_) => Ok(0),
    }
}
