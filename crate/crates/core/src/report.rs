//! Rendering benchmark reports as a text table, CSV or JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::bench::{BenchmarkReport, HUMAN_REFERENCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    /// Systems as column pairs (M, SD), environments as rows; best mean per
    /// row in bold.
    Table,
    /// `system,environment,mean_questions,sd,iterations,trials,base_seed`
    Delimited,
    /// Pretty-printed JSON with per-iteration data and seeds.
    Structured,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "delimited" | "csv" => Ok(ReportFormat::Delimited),
            "structured" | "json" => Ok(ReportFormat::Structured),
            _ => Err(format!(
                "unknown format `{s}` (expected table, delimited or structured)"
            )),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("failed to encode report: {0}")]
    Encode(#[from] serde_json::Error),
}

pub const DELIMITED_HEADER: &str =
    "system,environment,mean_questions,sd,iterations,trials,base_seed";

pub fn emit_report(report: &BenchmarkReport, format: ReportFormat) -> Result<String, ReportError> {
    Ok(match format {
        ReportFormat::Table => table(report),
        ReportFormat::Delimited => delimited(report),
        ReportFormat::Structured => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
    })
}

pub fn parse_structured(text: &str) -> Result<BenchmarkReport, ReportError> {
    Ok(serde_json::from_str(text)?)
}

fn delimited(report: &BenchmarkReport) -> String {
    let mut out = String::from(DELIMITED_HEADER);
    out.push('\n');
    for c in &report.cells {
        let _ = writeln!(
            out,
            "{},{},{:.4},{:.4},{},{},{}",
            c.system.key(),
            c.environment,
            c.mean_questions,
            c.sd,
            report.iterations,
            report.trials_per_iteration,
            report.base_seed
        );
    }
    out
}

fn table(report: &BenchmarkReport) -> String {
    let mut header = vec!["Environment".to_string()];
    for s in &report.systems {
        header.push(format!("{} M", s.display_name()));
        header.push("SD".to_string());
    }

    let mut rows = Vec::new();
    for env in &report.environments {
        let cells: Vec<_> = report
            .systems
            .iter()
            .map(|&s| report.cell(s, env.key()))
            .collect();
        let best = cells
            .iter()
            .flatten()
            .map(|c| round2(c.mean_questions))
            .fold(f64::INFINITY, f64::min);
        let mut row = vec![env.display_name()];
        for c in cells {
            match c {
                Some(c) => {
                    let m = format!("{:.2}", c.mean_questions);
                    row.push(if round2(c.mean_questions) == best {
                        format!("**{m}**")
                    } else {
                        m
                    });
                    row.push(format!("{:.2}", c.sd));
                }
                None => row.extend(["-".to_string(), "-".to_string()]),
            }
        }
        rows.push(row);
    }

    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            rows.iter()
                .map(|r| r[i].len())
                .chain([header[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };

    let mut out = format!(
        "Mean questions per instruction ({} iterations x {} trials, base seed {}; lower is better)\n\n",
        report.iterations, report.trials_per_iteration, report.base_seed
    );
    out.push_str(&line(&header));
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
    for r in &rows {
        out.push_str(&line(r));
    }

    out.push_str(&format!(
        "\nSD: {}. Best mean per environment in bold.\n",
        report.sd_basis
    ));
    for c in &report.comparisons {
        match c.welch {
            Some(w) => {
                let _ = writeln!(
                    out,
                    "Welch t ({} vs {}, {}): t({:.1}) = {:.2}",
                    c.system.display_name(),
                    c.against.display_name(),
                    c.environment,
                    w.df,
                    w.t
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "Welch t ({} vs {}, {}): undefined, both samples have zero variance",
                    c.system.display_name(),
                    c.against.display_name(),
                    c.environment
                );
            }
        }
    }
    let _ = writeln!(
        out,
        "Reference: human corpus, spacecraft environment, M = {:.2}, SD = {:.2} (not reproduced here).",
        HUMAN_REFERENCE.0, HUMAN_REFERENCE.1
    );
    out
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
