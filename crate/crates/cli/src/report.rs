//! Report rendering.

use bipolar_core::audit::{AuditReport, Counterexample, PropertyReport, ReportDocument};
use serde::Serialize;

use crate::config::Format;
use crate::error::CliResult;

#[derive(Serialize)]
struct NamedDocument<'a> {
    name: &'a str,
    report: ReportDocument,
}

#[derive(Serialize)]
struct AuditDocument<'a> {
    audit: &'a str,
    operator: &'a str,
    items: Vec<NamedDocument<'a>>,
    notes: &'a [String],
}

fn witness_text(w: &Counterexample) -> String {
    let inputs: Vec<String> = w.inputs.iter().map(|v| v.get().to_string()).collect();
    format!("witness=({}) lhs={} rhs={} gap={}", inputs.join(", "), w.lhs.get(), w.rhs.get(), w.gap)
}

fn text_line(name: &str, r: &PropertyReport) -> String {
    let mut line = format!(
        "{name:<26} {:<17} max_violation={} samples={}",
        r.verdict.to_string(),
        r.max_violation,
        r.samples_evaluated
    );
    if let Some(w) = &r.witness {
        line.push(' ');
        line.push_str(&witness_text(w));
    }
    line
}

fn csv_rows(rows: &[(&str, &PropertyReport)]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "item",
        "law",
        "domain",
        "verdict",
        "max_violation",
        "samples_evaluated",
        "witness_inputs",
        "witness_lhs",
        "witness_rhs",
        "witness_gap",
    ])?;
    for (name, r) in rows {
        let (inputs, lhs, rhs, gap) = match &r.witness {
            Some(w) => (
                w.inputs.iter().map(|v| v.get().to_string()).collect::<Vec<_>>().join(";"),
                w.lhs.get().to_string(),
                w.rhs.get().to_string(),
                w.gap.to_string(),
            ),
            None => Default::default(),
        };
        w.write_record([
            name.to_string(),
            r.law.law.name(),
            r.law.domain.to_string(),
            r.verdict.to_string(),
            r.max_violation.to_string(),
            r.samples_evaluated.to_string(),
            inputs,
            lhs,
            rhs,
            gap,
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render_law(name: &str, r: &PropertyReport, format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&r.to_document())? + "\n",
        Format::Csv => csv_rows(&[(name, r)])?,
        Format::Text => text_line(name, r) + "\n",
    })
}

pub fn render_audit(kind: &str, operator: &str, audit: &AuditReport, format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Json => {
            let doc = AuditDocument {
                audit: kind,
                operator,
                items: audit
                    .items
                    .iter()
                    .map(|i| NamedDocument { name: &i.name, report: i.report.to_document() })
                    .collect(),
                notes: &audit.notes,
            };
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => {
            let rows: Vec<(&str, &PropertyReport)> = audit.items.iter().map(|i| (i.name.as_str(), &i.report)).collect();
            csv_rows(&rows)?
        }
        Format::Text => {
            let mut out = format!("{kind} audit of {operator}\n");
            for item in &audit.items {
                out.push_str(&text_line(&item.name, &item.report));
                out.push('\n');
            }
            for note in &audit.notes {
                out.push_str("note: ");
                out.push_str(note);
                out.push('\n');
            }
            out
        }
    })
}

#[derive(Serialize)]
pub struct SearchDocument {
    pub operator: String,
    pub law: String,
    pub domain: String,
    pub budget: usize,
    pub seed: u64,
    pub witness: Option<Counterexample>,
}

pub fn render_search(doc: &SearchDocument, format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(doc)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["law", "domain", "budget", "seed", "witness_inputs", "witness_lhs", "witness_rhs", "witness_gap"])?;
            let (inputs, lhs, rhs, gap) = match &doc.witness {
                Some(c) => (
                    c.inputs.iter().map(|v| v.get().to_string()).collect::<Vec<_>>().join(";"),
                    c.lhs.get().to_string(),
                    c.rhs.get().to_string(),
                    c.gap.to_string(),
                ),
                None => Default::default(),
            };
            w.write_record([
                doc.law.clone(),
                doc.domain.clone(),
                doc.budget.to_string(),
                doc.seed.to_string(),
                inputs,
                lhs,
                rhs,
                gap,
            ])?;
            let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
            String::from_utf8(bytes).expect("csv output is utf-8")
        }
        Format::Text => match &doc.witness {
            Some(w) => format!("{} on {}: {}\n", doc.law, doc.operator, witness_text(w)),
            None => format!("{} on {}: no counterexample in {} samples\n", doc.law, doc.operator, doc.budget),
        },
    })
}
