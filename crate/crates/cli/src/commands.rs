//! Subcommands.

use std::io::Write;

use bipolar_core::audit::{
    audit_abelian_group, audit_oag, audit_ring, audit_ring_on, check_law, search_counterexample, AuditItem,
    AuditReport, Domain, Law, LawSpec, OAGStructure, Verdict,
};
use bipolar_core::ops::{BinaryOp, Carrier};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{Expectation, Flags, Format, RunConfig};
use crate::error::{CliError, CliResult};
use crate::expr::{evaluate, parse_expression, EvalOutcome};
use crate::registry::{parse_op, OpContext};
use crate::report::{render_audit, render_law, render_search, SearchDocument};

/// Bipolar-scale operators: evaluation, law audits, tables and counterexample search.
#[derive(Parser, Debug)]
#[command(name = "bipolar", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate an expression such as `0.3 (+) 0.6` or `svee(0.5, -0.5, 0.2)`.
    Eval { expression: String },
    /// Audit an operator against a law set.
    Audit {
        #[arg(value_enum)]
        kind: AuditKind,
    },
    /// Print the operator's value table as CSV.
    Table,
    /// Random search for a counterexample to `--law`.
    Search,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AuditKind {
    Group,
    Ring,
    Oag,
    Law,
}

impl AuditKind {
    fn name(self) -> &'static str {
        match self {
            AuditKind::Group => "group",
            AuditKind::Ring => "ring",
            AuditKind::Oag => "oag",
            AuditKind::Law => "law",
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Exit code for an error: every error the CLI reports is a usage, config or parse problem.
pub fn exit_code(_: &CliError) -> i32 {
    EXIT_USAGE
}

pub fn run(cli: &Cli) -> CliResult<i32> {
    let cfg = RunConfig::resolve(&cli.flags)?;
    let ctx = OpContext::new(&cfg.conorm, &cfg.norm, cfg.boundary)?;
    match &cli.command {
        Command::Eval { expression } => eval_command(expression, &ctx, &cfg),
        Command::Audit { kind } => audit_command(*kind, &ctx, &cfg),
        Command::Table => table_command(&ctx, &cfg),
        Command::Search => search_command(&ctx, &cfg),
    }
}

fn emit(text: &str, cfg: &RunConfig) -> CliResult<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct EvalDocument {
    expression: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    undefined: Option<[f64; 2]>,
}

fn eval_command(expression: &str, ctx: &OpContext, cfg: &RunConfig) -> CliResult<i32> {
    let ast = parse_expression(expression)?;
    let outcome = evaluate(&ast, ctx)?;
    let text = match cfg.format {
        Format::Json => {
            let (value, undefined) = match &outcome {
                EvalOutcome::Value(v) => (Some(v.get()), None),
                EvalOutcome::Undefined(u) => (None, Some([u.low, u.high])),
            };
            serde_json::to_string_pretty(&EvalDocument { expression: ast.to_string(), value, undefined })? + "\n"
        }
        _ => format!("{outcome}\n"),
    };
    emit(&text, cfg)?;
    Ok(EXIT_OK)
}

/// `distributivity(over=<op>)`, `de_morgan(dual=<op>)` or an argument-free law.
pub fn parse_law(spec: &str, ctx: &OpContext) -> CliResult<Law> {
    let spec = spec.trim();
    let with_op = |prefix: &str, key: &str| -> Option<&str> {
        spec.strip_prefix(prefix)?
            .strip_prefix('(')?
            .strip_suffix(')')?
            .trim()
            .strip_prefix(key)?
            .trim_start()
            .strip_prefix('=')
            .map(str::trim)
    };
    if let Some(op) = with_op("distributivity", "over") {
        return Ok(Law::Distributivity(parse_op(op, ctx)?));
    }
    if let Some(op) = with_op("de_morgan", "dual") {
        return Ok(Law::DeMorgan(parse_op(op, ctx)?));
    }
    Law::parse_simple(spec).map_err(|e| CliError::Config(e.to_string()))
}

fn operator(ctx: &OpContext, cfg: &RunConfig) -> CliResult<BinaryOp> {
    parse_op(cfg.op.as_deref().unwrap_or("oplus"), ctx)
}

/// Compares verdicts with `--expect`; names are matched against item names.
fn check_expectation(items: &[AuditItem], expect: &Option<Expectation>) -> CliResult<Option<String>> {
    let Some(expect) = expect else { return Ok(None) };
    match expect {
        Expectation::All(Verdict::HoldsOnSamples) => {
            let failing: Vec<&str> = items.iter().filter(|i| !i.report.holds()).map(|i| i.name.as_str()).collect();
            Ok((!failing.is_empty()).then(|| format!("expected all laws to hold; failing: {}", failing.join(", "))))
        }
        Expectation::All(Verdict::Fails) => Ok(items
            .iter()
            .all(|i| i.report.holds())
            .then(|| "expected at least one law to fail; all hold".to_string())),
        Expectation::Items(pairs) => {
            let mut mismatches = Vec::new();
            for (name, want) in pairs {
                let item = items.iter().find(|i| &i.name == name).ok_or_else(|| {
                    let known: Vec<&str> = items.iter().map(|i| i.name.as_str()).collect();
                    CliError::Usage(format!("no audit item `{name}`; items are {}", known.join(", ")))
                })?;
                if item.report.verdict != *want {
                    mismatches.push(format!("{name}: expected {want}, got {}", item.report.verdict));
                }
            }
            Ok((!mismatches.is_empty()).then(|| mismatches.join("; ")))
        }
        Expectation::Found(_) => Err(CliError::Usage("found/none expectations apply to `search` only".into())),
    }
}

fn finish(mismatch: Option<String>) -> i32 {
    match mismatch {
        Some(msg) => {
            eprintln!("expectation not met: {msg}");
            EXIT_MISMATCH
        }
        None => EXIT_OK,
    }
}

fn audit_command(kind: AuditKind, ctx: &OpContext, cfg: &RunConfig) -> CliResult<i32> {
    let plan = &cfg.plan;
    if kind == AuditKind::Law {
        let law_text = cfg.law.as_deref().ok_or_else(|| CliError::Usage("`audit law` needs --law".into()))?;
        let op = operator(ctx, cfg)?;
        let law = parse_law(law_text, ctx)?;
        let name = law.name();
        let spec = LawSpec { law, domain: cfg.domain.clone().unwrap_or(Domain::Open) };
        let report = check_law(&op, &spec, plan);
        let text = render_law(&name, &report, cfg.format)?;
        emit(&text, cfg)?;
        let mut items = vec![AuditItem { name: name.clone(), report }];
        // the bare law word is accepted as an item name too
        if let Some(short) = law_text.split('(').next().filter(|s| *s != name) {
            items.push(AuditItem { name: short.trim().to_string(), report: items[0].report.clone() });
        }
        return Ok(finish(check_expectation(&items, &cfg.expect)?));
    }
    let (label, audit): (String, AuditReport) = match kind {
        AuditKind::Group => {
            let op = operator(ctx, cfg)?;
            (op.label().to_string(), audit_abelian_group(&op, plan))
        }
        AuditKind::Ring => {
            let add = BinaryOp::pseudo_addition(&ctx.pseudo_addition());
            let mul = BinaryOp::pseudo_multiplication(&ctx.pseudo_multiplication());
            let label = format!("({}, {})", add.label(), mul.label());
            let audit = match &cfg.domain {
                Some(d) => audit_ring_on(&add, &mul, plan, d.clone()),
                None => audit_ring(&add, &mul, plan),
            };
            (label, audit)
        }
        AuditKind::Oag => {
            let s = match cfg.op.as_deref() {
                Some("real_line") => OAGStructure::real_line_reference(),
                _ => OAGStructure::bipolar(operator(ctx, cfg)?),
            };
            (s.label.clone(), audit_oag(&s, plan, cfg.extended))
        }
        AuditKind::Law => unreachable!(),
    };
    let text = render_audit(kind.name(), &label, &audit, cfg.format)?;
    emit(&text, cfg)?;
    Ok(finish(check_expectation(&audit.items, &cfg.expect)?))
}

/// Grid over the operator's carrier with exact endpoints.
pub fn table_axis(carrier: Carrier, resolution: usize) -> Vec<f64> {
    let (lo, hi) = carrier.bounds();
    if resolution == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (resolution - 1) as f64;
    (0..resolution)
        .map(|i| if i == resolution - 1 { hi } else { lo + i as f64 * step })
        .collect()
}

fn table_command(ctx: &OpContext, cfg: &RunConfig) -> CliResult<i32> {
    let op = operator(ctx, cfg)?;
    let axis = table_axis(op.carrier(), cfg.resolution);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![String::new()];
    header.extend(axis.iter().map(f64::to_string));
    w.write_record(&header)?;
    for &x in &axis {
        let mut row = vec![x.to_string()];
        row.extend(axis.iter().map(|&y| op.apply(x, y).to_string()));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    emit(&String::from_utf8(bytes).expect("csv output is utf-8"), cfg)?;
    Ok(EXIT_OK)
}

fn search_command(ctx: &OpContext, cfg: &RunConfig) -> CliResult<i32> {
    let law_text = cfg.law.as_deref().ok_or_else(|| CliError::Usage("`search` needs --law".into()))?;
    let op = operator(ctx, cfg)?;
    let law = parse_law(law_text, ctx)?;
    let spec = LawSpec { law, domain: cfg.domain.clone().unwrap_or(Domain::Full) };
    let witness = search_counterexample(&op, &spec, cfg.budget, cfg.plan.seed)?;
    let doc = SearchDocument {
        operator: op.label().to_string(),
        law: spec.law.name(),
        domain: spec.domain.to_string(),
        budget: cfg.budget,
        seed: cfg.plan.seed,
        witness,
    };
    emit(&render_search(&doc, cfg.format)?, cfg)?;
    let mismatch = match &cfg.expect {
        None => None,
        Some(Expectation::Found(want)) => (doc.witness.is_some() != *want).then(|| {
            if *want { "expected a counterexample, found none".to_string() } else { "expected no counterexample".to_string() }
        }),
        Some(_) => return Err(CliError::Usage("`search` takes --expect found or --expect none".into())),
    };
    Ok(finish(mismatch))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_specs() {
        let ctx = OpContext::default();
        assert!(matches!(parse_law("distributivity(over=oplus)", &ctx).unwrap(), Law::Distributivity(_)));
        assert!(matches!(parse_law("de_morgan(dual = swedge)", &ctx).unwrap(), Law::DeMorgan(_)));
        assert!(matches!(parse_law("neutral(0)", &ctx).unwrap(), Law::Neutral(c) if c == 0.0));
        assert!(parse_law("distributivity(over=nothing)", &ctx).is_err());
        assert!(parse_law("idempotence", &ctx).is_err());
    }

    #[test]
    fn table_axes() {
        assert_eq!(table_axis(Carrier::Bipolar, 5), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(table_axis(Carrier::Unit, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(table_axis(Carrier::Unit, 1), vec![0.0]);
    }
}
