//! Textual operator specs.
//!
//! ```text
//! conorms   max | prob_sum | luk | lukasiewicz_conorm | gen:ratio | gen:prob | gen:luk
//!           osum(a=0.5,upper=prob_sum[,lower=gen:ratio])
//! norms     min | product | luk | lukasiewicz_norm | gen:product | gen:luk
//! ops       oplus | (+) | otimes | (*) | svee | swedge | umax | real_line
//!           uninorm(gen=logit|<strict conorm>) | compose(T=..,S=..,e=..,fill=min|max)
//!           rescaled(<uninorm>) | conorm:<conorm> | norm:<norm> | <conorm> | <norm>
//! ```

use bipolar_core::audit::OAGStructure;
use bipolar_core::conorms::{
    builtin, conorm_from_generator, norm_from_generator, ordinal_sum_upper, Builtin, OrdinalSumSpec,
    TriangularConorm, TriangularNorm,
};
use bipolar_core::generator::{
    lukasiewicz_conorm_generator, lukasiewicz_norm_generator, prob_sum_generator, product_generator,
    ratio_generator,
};
use bipolar_core::ops::BinaryOp;
use bipolar_core::symmetric::{Boundary, PseudoAddition, PseudoMultiplication};
use bipolar_core::uninorms::{
    compose_uninorm, from_pseudo_addition, representable_from_generator, to_pseudo_addition, u_max_operator,
    Fill, Uninorm, UninormGenerator,
};

use crate::error::{CliError, CliResult};

/// Operators the `(+)` and `(*)` symbols resolve to.
#[derive(Clone, Debug)]
pub struct OpContext {
    pub conorm: TriangularConorm,
    pub norm: TriangularNorm,
    pub boundary: Boundary,
}

impl OpContext {
    pub fn new(conorm: &str, norm: &str, boundary: Boundary) -> CliResult<Self> {
        Ok(OpContext { conorm: parse_conorm(conorm)?, norm: parse_norm(norm)?, boundary })
    }

    pub fn pseudo_addition(&self) -> PseudoAddition {
        PseudoAddition::new(self.conorm.clone(), self.boundary)
    }

    pub fn pseudo_multiplication(&self) -> PseudoMultiplication {
        PseudoMultiplication::new(self.norm.clone())
    }
}

impl Default for OpContext {
    fn default() -> Self {
        OpContext {
            conorm: TriangularConorm::prob_sum(),
            norm: TriangularNorm::product(),
            boundary: Boundary::PlusOne,
        }
    }
}

/// `name(k=v, ...)` split at top-level commas; `None` without parentheses.
fn split_call(spec: &str) -> Option<(&str, Vec<&str>)> {
    let open = spec.find('(')?;
    let inner = spec[open + 1..].strip_suffix(')')?;
    let mut args = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                args.push(inner[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if !inner[start..].trim().is_empty() {
        args.push(inner[start..].trim());
    }
    Some((spec[..open].trim(), args))
}

fn keyed<'a>(spec: &str, args: &[&'a str]) -> CliResult<Vec<(&'a str, &'a str)>> {
    args.iter()
        .map(|a| {
            a.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| CliError::UnknownSpec(format!("{spec}: expected key=value, got `{a}`")))
        })
        .collect()
}

fn lookup<'a>(spec: &str, pairs: &[(&'a str, &'a str)], key: &str) -> CliResult<Option<&'a str>> {
    for (k, _) in pairs {
        if !matches!(*k, "a" | "upper" | "lower" | "gen" | "T" | "S" | "e" | "fill") {
            return Err(CliError::UnknownSpec(format!("{spec}: unknown key `{k}`")));
        }
    }
    Ok(pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v))
}

fn required<'a>(spec: &str, pairs: &[(&'a str, &'a str)], key: &str) -> CliResult<&'a str> {
    lookup(spec, pairs, key)?.ok_or_else(|| CliError::UnknownSpec(format!("{spec}: missing `{key}`")))
}

fn number(spec: &str, v: &str) -> CliResult<f64> {
    v.parse::<f64>().map_err(|_| CliError::UnknownSpec(format!("{spec}: `{v}` is not a number")))
}

pub fn parse_conorm(spec: &str) -> CliResult<TriangularConorm> {
    let spec = spec.trim();
    match spec {
        "luk" => return Ok(TriangularConorm::lukasiewicz()),
        "gen:ratio" => return Ok(conorm_from_generator(ratio_generator())?),
        "gen:prob" => return Ok(conorm_from_generator(prob_sum_generator())?),
        "gen:luk" => return Ok(conorm_from_generator(lukasiewicz_conorm_generator())?),
        _ => {}
    }
    if let Some(("osum", args)) = split_call(spec) {
        let pairs = keyed(spec, &args)?;
        let a = number(spec, required(spec, &pairs, "a")?)?;
        let upper = parse_conorm(required(spec, &pairs, "upper")?)?;
        let mut os = OrdinalSumSpec::new(a, upper)?;
        if let Some(lower) = lookup(spec, &pairs, "lower")? {
            os = os.with_lower(parse_conorm(lower)?)?;
        }
        return Ok(ordinal_sum_upper(os));
    }
    match builtin(spec) {
        Ok(Builtin::Conorm(s)) => Ok(s),
        _ => Err(CliError::UnknownSpec(spec.to_string())),
    }
}

pub fn parse_norm(spec: &str) -> CliResult<TriangularNorm> {
    let spec = spec.trim();
    match spec {
        "luk" => return Ok(TriangularNorm::lukasiewicz()),
        "gen:product" => return Ok(norm_from_generator(product_generator())?),
        "gen:luk" => return Ok(norm_from_generator(lukasiewicz_norm_generator())?),
        _ => {}
    }
    match builtin(spec) {
        Ok(Builtin::Norm(t)) => Ok(t),
        _ => Err(CliError::UnknownSpec(spec.to_string())),
    }
}

pub fn parse_uninorm(spec: &str, ctx: &OpContext) -> CliResult<Uninorm> {
    let spec = spec.trim();
    if spec == "umax" {
        return Ok(u_max_operator());
    }
    match split_call(spec) {
        Some(("uninorm", args)) => {
            let pairs = keyed(spec, &args)?;
            match required(spec, &pairs, "gen")? {
                "logit" => Ok(representable_from_generator(UninormGenerator::logit(
                    ctx.boundary.infinity_mode(),
                ))),
                conorm => Ok(from_pseudo_addition(&PseudoAddition::new(parse_conorm(conorm)?, ctx.boundary))?),
            }
        }
        Some(("compose", args)) => {
            let pairs = keyed(spec, &args)?;
            let t = parse_norm(required(spec, &pairs, "T")?)?;
            let s = parse_conorm(required(spec, &pairs, "S")?)?;
            let e = match lookup(spec, &pairs, "e")? {
                Some(v) => number(spec, v)?,
                None => 0.5,
            };
            let fill: Fill = lookup(spec, &pairs, "fill")?.unwrap_or("min").parse()?;
            Ok(compose_uninorm(&t, &s, e, fill)?)
        }
        _ => Err(CliError::UnknownSpec(spec.to_string())),
    }
}

/// Resolves an operator spec to a binary operation.
pub fn parse_op(spec: &str, ctx: &OpContext) -> CliResult<BinaryOp> {
    let spec = spec.trim();
    match spec {
        "oplus" | "(+)" => return Ok(BinaryOp::pseudo_addition(&ctx.pseudo_addition())),
        "otimes" | "(*)" => return Ok(BinaryOp::pseudo_multiplication(&ctx.pseudo_multiplication())),
        "svee" => return Ok(BinaryOp::sym_max()),
        "swedge" => return Ok(BinaryOp::sym_min()),
        "real_line" => return Ok(OAGStructure::real_line_reference().add),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("conorm:") {
        return Ok(BinaryOp::conorm(&parse_conorm(rest)?));
    }
    if let Some(rest) = spec.strip_prefix("norm:") {
        return Ok(BinaryOp::norm(&parse_norm(rest)?));
    }
    if let Some(("rescaled", args)) = split_call(spec) {
        if args.len() != 1 {
            return Err(CliError::UnknownSpec(spec.to_string()));
        }
        return Ok(to_pseudo_addition(&parse_uninorm(args[0], ctx)?)?);
    }
    if let Ok(u) = parse_uninorm(spec, ctx) {
        return Ok(BinaryOp::uninorm(&u));
    }
    if let Ok(s) = parse_conorm(spec) {
        return Ok(BinaryOp::conorm(&s));
    }
    if let Ok(t) = parse_norm(spec) {
        return Ok(BinaryOp::norm(&t));
    }
    // surface construction errors (e.g. a non-strict conorm in uninorm(...))
    if split_call(spec).is_some() {
        parse_uninorm(spec, ctx)?;
        parse_conorm(spec)?;
    }
    Err(CliError::UnknownSpec(spec.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conorm_specs() {
        for s in ["max", "prob_sum", "luk", "lukasiewicz_conorm", "gen:ratio", "gen:prob", "gen:luk"] {
            parse_conorm(s).unwrap();
        }
        let os = parse_conorm("osum(a=0.5,upper=prob_sum)").unwrap();
        assert_eq!(os.apply(0.3, 0.7), 0.7);
        let two = parse_conorm("osum(a=0.5, upper=prob_sum, lower=gen:ratio)").unwrap();
        assert!(two.ordinal_sum().unwrap().lower().is_some());
        assert!(parse_conorm("osum(a=0.5)").is_err());
        assert!(parse_conorm("osum(a=0.5,upper=luk)").is_err());
        assert!(parse_conorm("osum(a=0.5,upper=prob_sum,b=1)").is_err());
        assert!(parse_conorm("min").is_err());
    }

    #[test]
    fn op_specs() {
        let ctx = OpContext::default();
        for s in [
            "oplus", "(+)", "otimes", "(*)", "svee", "swedge", "umax", "real_line", "prob_sum", "min",
            "conorm:luk", "norm:luk", "uninorm(gen=logit)", "uninorm(gen=prob_sum)",
            "compose(T=product,S=prob_sum,e=0.3,fill=max)", "rescaled(umax)",
        ] {
            parse_op(s, &ctx).unwrap_or_else(|e| panic!("{s}: {e}"));
        }
        assert_eq!(parse_op("umax", &ctx).unwrap().apply(0.3, 0.7), 0.5);
        assert_eq!(parse_op("rescaled(umax)", &ctx).unwrap().apply(0.5, -0.5), 0.0);
        assert!(matches!(parse_op("uninorm(gen=luk)", &ctx), Err(CliError::Core(_))));
        assert!(matches!(parse_op("nonsense", &ctx), Err(CliError::UnknownSpec(_))));
    }
}
