//! Run configuration: command-line flags over an optional `key=value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bipolar_core::audit::{Domain, Verdict};
use bipolar_core::symmetric::Boundary;
use bipolar_core::SamplingPlan;
use clap::Args;

use crate::error::{CliError, CliResult};

pub const MAX_TABLE_RESOLUTION: usize = 1001;

/// Flags shared by every command; each also works as a config-file key.
#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// t-conorm behind `(+)`
    #[arg(long, global = true)]
    pub conorm: Option<String>,
    /// t-norm behind `(*)`
    #[arg(long, global = true)]
    pub norm: Option<String>,
    /// value of 1 (+) -1: plus_one or minus_one
    #[arg(long, global = true)]
    pub boundary: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// grid points per axis
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// number of random tuples
    #[arg(long, global = true)]
    pub random: Option<usize>,
    /// value and generator tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// json, csv or text
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key=value file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// operator spec for `audit law|group|oag`, `table` and `search`
    #[arg(long, global = true)]
    pub op: Option<String>,
    /// law for `audit law` and `search`
    #[arg(long, global = true)]
    pub law: Option<String>,
    /// full, open, positive, negative, corners, magnitude(lo,hi), magnitude_open(lo,hi)
    #[arg(long, global = true)]
    pub domain: Option<String>,
    /// holds, fails, or name:verdict,...; found or none for `search`
    #[arg(long, global = true)]
    pub expect: Option<String>,
    /// sample budget for `search`
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// grid points per axis for `table`
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    /// include the extended-structure items in `audit oag`
    #[arg(long, global = true)]
    pub extended: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(CliError::Config(format!("format must be json, csv or text, got `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    All(Verdict),
    Items(Vec<(String, Verdict)>),
    Found(bool),
}

fn verdict(s: &str) -> CliResult<Verdict> {
    match s {
        "holds" | "holds_on_samples" => Ok(Verdict::HoldsOnSamples),
        "fails" => Ok(Verdict::Fails),
        other => Err(CliError::Config(format!("expected holds or fails, got `{other}`"))),
    }
}

impl FromStr for Expectation {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let s = s.trim();
        match s {
            "found" => return Ok(Expectation::Found(true)),
            "none" => return Ok(Expectation::Found(false)),
            _ => {}
        }
        if !s.contains(':') {
            return Ok(Expectation::All(verdict(s)?));
        }
        s.split(',')
            .map(|item| {
                let (name, v) = item
                    .split_once(':')
                    .ok_or_else(|| CliError::Config(format!("expected name:verdict, got `{item}`")))?;
                Ok((name.trim().to_string(), verdict(v.trim())?))
            })
            .collect::<CliResult<Vec<_>>>()
            .map(Expectation::Items)
    }
}

pub fn parse_domain(s: &str) -> CliResult<Domain> {
    let s = s.trim();
    let bad = || CliError::Config(format!("unknown domain `{s}`"));
    match s {
        "full" => return Ok(Domain::Full),
        "open" => return Ok(Domain::Open),
        "positive" => return Ok(Domain::Positive),
        "negative" => return Ok(Domain::Negative),
        "corners" => return Ok(Domain::Corners),
        _ => {}
    }
    let (name, rest) = s.split_once('(').ok_or_else(bad)?;
    let args = rest.strip_suffix(')').ok_or_else(bad)?;
    let (lo, hi) = args.split_once(',').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(0.0..=1.0).contains(&lo) || !(lo..=1.0).contains(&hi) {
        return Err(bad());
    }
    match name.trim() {
        "magnitude" => Ok(Domain::Magnitude { lo, hi, lo_open: false }),
        "magnitude_open" => Ok(Domain::Magnitude { lo, hi, lo_open: true }),
        _ => Err(bad()),
    }
}

/// Fully resolved settings for one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub conorm: String,
    pub norm: String,
    pub boundary: Boundary,
    pub plan: SamplingPlan,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub op: Option<String>,
    pub law: Option<String>,
    pub domain: Option<Domain>,
    pub expect: Option<Expectation>,
    pub budget: usize,
    pub resolution: usize,
    pub extended: bool,
}

const KEYS: [&str; 16] = [
    "conorm", "norm", "boundary", "seed", "grid", "random", "tol", "format", "out", "op", "law", "domain", "expect",
    "budget", "resolution", "extended",
];

pub fn read_config_file(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", n + 1)))?;
        let key = k.trim().trim_start_matches("--").replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("line {}: unknown key `{key}`", n + 1)));
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key `{key}`", n + 1)));
        }
    }
    Ok(map)
}

fn parsed<T: FromStr>(key: &str, flag: Option<T>, file: &BTreeMap<String, String>) -> CliResult<Option<T>> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => match file.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::Config(format!("bad value `{raw}` for `{key}`"))),
            None => Ok(None),
        },
    }
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> CliResult<Self> {
        let file = match &flags.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        Self::merge(flags, &file)
    }

    pub fn merge(flags: &Flags, file: &BTreeMap<String, String>) -> CliResult<Self> {
        let text = |key: &str, flag: &Option<String>| flag.clone().or_else(|| file.get(key).cloned());
        let defaults = SamplingPlan::default();
        let mut plan = SamplingPlan {
            grid_resolution: parsed("grid", flags.grid, file)?.unwrap_or(defaults.grid_resolution),
            random_count: parsed("random", flags.random, file)?.unwrap_or(defaults.random_count),
            seed: parsed("seed", flags.seed, file)?.unwrap_or(defaults.seed),
            ..defaults
        };
        if let Some(tol) = parsed("tol", flags.tol, file)? {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(CliError::Config(format!("tolerance must be positive, got {tol}")));
            }
            plan = plan.with_tolerance(tol);
        }
        let boundary = match text("boundary", &flags.boundary) {
            Some(b) => b.parse::<Boundary>().map_err(|e| CliError::Config(e.to_string()))?,
            None => Boundary::PlusOne,
        };
        let format = match text("format", &flags.format) {
            Some(f) => f.parse()?,
            None => Format::Text,
        };
        let domain = text("domain", &flags.domain).map(|d| parse_domain(&d)).transpose()?;
        let expect = text("expect", &flags.expect).map(|e| e.parse()).transpose()?;
        let extended = flags.extended || parsed::<bool>("extended", None, file)?.unwrap_or(false);
        let resolution = parsed("resolution", flags.resolution, file)?.unwrap_or(11);
        if resolution == 0 || resolution > MAX_TABLE_RESOLUTION {
            return Err(CliError::Config(format!(
                "resolution must lie in 1..={MAX_TABLE_RESOLUTION}, got {resolution}"
            )));
        }
        let budget = parsed("budget", flags.budget, file)?.unwrap_or(10_000);
        if budget == 0 {
            return Err(CliError::Config("budget must be positive".into()));
        }
        Ok(RunConfig {
            conorm: text("conorm", &flags.conorm).unwrap_or_else(|| "prob_sum".into()),
            norm: text("norm", &flags.norm).unwrap_or_else(|| "product".into()),
            boundary,
            plan,
            format,
            out: flags.out.clone().or_else(|| file.get("out").map(PathBuf::from)),
            op: text("op", &flags.op),
            law: text("law", &flags.law),
            domain,
            expect,
            budget,
            resolution,
            extended,
        })
    }
}
