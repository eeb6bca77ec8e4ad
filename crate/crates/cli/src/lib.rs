//! Command-line driver for the identity catalog.
//!
//! Exit codes: `0` when every requested check passed, `1` when any
//! verification did not converge or a cross validation mismatched, `2` on
//! usage errors (bad flags, unknown ids, invalid parameters, unwritable
//! output). Every parameter is validated before any summation starts.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use orthospec_core::identities::{catalog, instantiate_group, Identity, IdentityError, CSV_HEADER, MIN_TERMS};
use orthospec_core::numerics::{check_precision, BigReal};
use orthospec_core::{verify, VerificationReport, VerifyOptions};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub const PRECISION_ENV: &str = "ORTHOSPEC_PRECISION";

const DEFAULT_PRECISION: u32 = 256;
const DEFAULT_TOLERANCE: &str = "1e-30";
const DEFAULT_MAX_TERMS: usize = 100_000;
const DEFAULT_CHECK_TERMS: usize = 30;
const DEFAULT_GENERATE_TERMS: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "orthospec", version, about = "Verify infinite Rogers dilogarithm identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Working precision in bits [default: 256, or $ORTHOSPEC_PRECISION]
    #[arg(long, global = true)]
    pub precision: Option<u32>,

    /// Absolute tolerance as a decimal string [default: 1e-30]
    #[arg(long, global = true)]
    pub tolerance: Option<String>,

    /// Per-series term limit [default: 100000]
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,

    /// Output format [default: text]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// File of `key=value` lines; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List catalog ids, parameter signatures and formulas
    List,
    /// Verify the given identities
    Verify(Selection),
    /// Verify every catalog entry at its default parameters
    VerifyAll,
    /// Compare arithmetic arguments with the geometric enumeration
    CrossValidate {
        #[command(flatten)]
        selection: Selection,
        /// Terms per series and orbit family
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Print the first arguments of every series
    Generate {
        #[command(flatten)]
        selection: Selection,
        /// Terms per series
        #[arg(long)]
        terms: Option<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Selection {
    /// Identity id; a bare id such as `eq-5.3` selects its lettered members
    #[arg(long = "id", required = true)]
    pub ids: Vec<String>,

    /// Template parameter as `name=value`; repeatable
    #[arg(long = "param", value_parser = parse_key_value)]
    pub params: Vec<(String, String)>,

    /// Continued fraction quotients, shorthand for `--param cf=...`
    #[arg(long)]
    pub cf: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

fn parse_key_value(s: &str) -> Result<(String, String), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(format!("empty parameter name in `{s}`"));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Identity(#[from] IdentityError),
    #[error("cannot read {path}: {source}")]
    ReadConfig { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// Computation failures are `1`; everything caught up front is `2`.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Identity(
                IdentityError::NotDecreasing { .. }
                | IdentityError::ArgumentOutOfRange { .. }
                | IdentityError::Numerics(_),
            ) => 1,
            _ => 2,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Numeric settings after applying flag > config file > environment >
/// default.
#[derive(Debug, Clone)]
pub struct Settings {
    pub precision: u32,
    pub tolerance: BigReal,
    pub max_terms: usize,
    pub format: Format,
    pub terms: Option<usize>,
}

impl Settings {
    pub fn options(&self) -> VerifyOptions {
        VerifyOptions::new(self.precision, self.tolerance.clone(), self.max_terms)
    }
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = parse_key_value(line).map_err(|e| usage(format!("config line {}: {e}", n + 1)))?;
        let k = k.replace('-', "_");
        if !matches!(k.as_str(), "precision" | "tolerance" | "max_terms" | "format" | "terms") {
            return Err(usage(format!("config line {}: unknown key `{k}`", n + 1)));
        }
        map.insert(k, v);
    }
    Ok(map)
}

fn parse_field<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| usage(format!("invalid {key} `{value}`")))
}

/// Resolves settings; `env` looks up environment variables.
pub fn resolve_settings(
    cli: &Cli,
    config: &BTreeMap<String, String>,
    env: impl Fn(&str) -> Option<String>,
) -> Result<Settings, CliError> {
    let precision = match (cli.precision, config.get("precision"), env(PRECISION_ENV)) {
        (Some(p), _, _) => p,
        (None, Some(v), _) => parse_field("precision", v)?,
        (None, None, Some(v)) => parse_field(PRECISION_ENV, &v)?,
        (None, None, None) => DEFAULT_PRECISION,
    };
    check_precision(precision).map_err(|e| usage(e.to_string()))?;

    let tol_text = cli
        .tolerance
        .clone()
        .or_else(|| config.get("tolerance").cloned())
        .unwrap_or_else(|| DEFAULT_TOLERANCE.to_string());
    let tolerance = BigReal::parse_decimal(&tol_text, precision).map_err(|e| usage(format!("tolerance: {e}")))?;
    if !(tolerance > 0) {
        return Err(usage(format!("tolerance must be positive, got `{tol_text}`")));
    }

    let max_terms = match (cli.max_terms, config.get("max_terms")) {
        (Some(n), _) => n,
        (None, Some(v)) => parse_field("max_terms", v)?,
        (None, None) => DEFAULT_MAX_TERMS,
    };
    if max_terms < MIN_TERMS {
        return Err(usage(format!(
            "max-terms must be at least {MIN_TERMS}, got {max_terms}"
        )));
    }

    let format = match (cli.format, config.get("format")) {
        (Some(f), _) => f,
        (None, Some(v)) => parse_field("format", v)?,
        (None, None) => Format::Text,
    };

    let flag_terms = match &cli.command {
        Command::CrossValidate { terms, .. } | Command::Generate { terms, .. } => *terms,
        _ => None,
    };
    let terms = match (flag_terms, config.get("terms")) {
        (Some(n), _) => Some(n),
        (None, Some(v)) => Some(parse_field("terms", v)?),
        (None, None) => None,
    };
    if terms == Some(0) {
        return Err(usage("terms must be positive"));
    }

    Ok(Settings {
        precision,
        tolerance,
        max_terms,
        format,
        terms,
    })
}

/// Instantiates every selected identity, failing before any computation.
pub fn select(selection: &Selection) -> Result<Vec<Identity>, CliError> {
    let mut params = selection.params.clone();
    if let Some(cf) = &selection.cf {
        params.push(("cf".into(), cf.clone()));
    }
    let mut out = Vec::new();
    for id in &selection.ids {
        out.extend(instantiate_group(id, &params)?);
    }
    Ok(out)
}

/// The rendered output and the exit code it implies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

/// Runs a parsed command line.
pub fn run(cli: &Cli, env: impl Fn(&str) -> Option<String>) -> Result<Outcome, CliError> {
    let config = match &cli.config {
        Some(path) => parse_config(&std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.clone(),
            source,
        })?)?,
        None => BTreeMap::new(),
    };
    let settings = resolve_settings(cli, &config, env)?;
    let outcome = match &cli.command {
        Command::List => Outcome {
            output: render_list(settings.format),
            code: 0,
        },
        Command::Verify(selection) => {
            let identities = select(selection)?;
            verify_many(&identities, &settings)?
        }
        Command::VerifyAll => {
            let identities = catalog()
                .iter()
                .map(|t| t.instantiate(&[]))
                .collect::<Result<Vec<_>, _>>()?;
            verify_many(&identities, &settings)?
        }
        Command::CrossValidate { selection, .. } => {
            let identities = select(selection)?;
            if let Some(bare) = identities.iter().find(|i| i.model.is_none()) {
                return Err(IdentityError::NoModel(bare.id.clone()).into());
            }
            cross_validate_many(&identities, &settings)
        }
        Command::Generate { selection, .. } => {
            let identities = select(selection)?;
            generate(&identities, &settings)?
        }
    };
    if let Some(path) = &cli.output {
        write_file(path, &outcome.output)?;
    }
    Ok(outcome)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses `args` and runs; prints to standard output or `--output`, and
/// diagnostics to standard error. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli, |k| std::env::var(k).ok()) {
        Ok(outcome) => {
            if cli.output.is_none() {
                print!("{}", outcome.output);
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Serialize)]
struct ListEntry<'a> {
    id: &'a str,
    params: String,
    formula: &'a str,
}

fn render_list(format: Format) -> String {
    let entries: Vec<ListEntry> = catalog()
        .iter()
        .map(|t| ListEntry {
            id: t.id,
            params: t.signature(),
            formula: t.formula,
        })
        .collect();
    match format {
        Format::Json => serde_json::to_string_pretty(&entries).expect("plain data") + "\n",
        Format::Csv => {
            let mut out = String::from("id,params,formula\n");
            for e in &entries {
                let _ = writeln!(out, "{},{},{}", e.id, csv_quote(&e.params), csv_quote(e.formula));
            }
            out
        }
        Format::Text => {
            let w_id = entries.iter().map(|e| e.id.len()).max().unwrap_or(0);
            let w_p = entries.iter().map(|e| e.params.len()).max().unwrap_or(0).max(6);
            let mut out = format!("{:w_id$}  {:w_p$}  formula\n", "id", "params");
            for e in &entries {
                let params = if e.params.is_empty() { "-" } else { e.params.as_str() };
                let _ = writeln!(out, "{:w_id$}  {:w_p$}  {}", e.id, params, e.formula);
            }
            out
        }
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn verify_many(identities: &[Identity], settings: &Settings) -> Result<Outcome, CliError> {
    let opts = settings.options();
    let reports: Vec<VerificationReport> = identities
        .par_iter()
        .map(|id| verify(id, &opts))
        .collect::<Result<_, _>>()?;
    let code = if reports.iter().all(|r| r.converged) { 0 } else { 1 };
    Ok(Outcome {
        output: render_reports(&reports, settings.format),
        code,
    })
}

/// Renders reports; text and CSV are free of timings.
pub fn render_reports(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Json => {
            let values: Vec<_> = reports.iter().map(VerificationReport::to_json_value).collect();
            serde_json::to_string_pretty(&values).expect("plain data") + "\n"
        }
        Format::Csv => {
            let mut out = format!("{CSV_HEADER}\n");
            for r in reports {
                out.push_str(&r.to_csv_row());
                out.push('\n');
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&r.to_text());
                out.push('\n');
            }
            let ok = reports.iter().filter(|r| r.converged).count();
            let _ = writeln!(out, "{ok}/{} converged", reports.len());
            out
        }
    }
}

#[derive(Serialize)]
struct CrossRow {
    id: String,
    params: BTreeMap<String, String>,
    terms: usize,
    ok: bool,
    compared: Option<usize>,
    scale: Option<String>,
    cutoff: Option<String>,
    error: Option<String>,
}

fn cross_validate_many(identities: &[Identity], settings: &Settings) -> Outcome {
    let terms = settings.terms.unwrap_or(DEFAULT_CHECK_TERMS);
    let rows: Vec<CrossRow> = identities
        .par_iter()
        .map(|id| {
            let params = id.params.iter().cloned().collect();
            match id.cross_validate(terms) {
                Ok(c) => CrossRow {
                    id: id.id.clone(),
                    params,
                    terms,
                    ok: true,
                    compared: Some(c.compared),
                    scale: Some(c.scale.to_string()),
                    cutoff: Some(c.cutoff.to_string()),
                    error: None,
                },
                Err(e) => CrossRow {
                    id: id.id.clone(),
                    params,
                    terms,
                    ok: false,
                    compared: None,
                    scale: None,
                    cutoff: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let code = if rows.iter().all(|r| r.ok) { 0 } else { 1 };
    let show_params =
        |p: &BTreeMap<String, String>| p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
    let output = match settings.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("plain data") + "\n",
        Format::Csv => {
            let mut out = String::from("id,params,terms,ok,compared,scale,error\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.id,
                    csv_quote(&show_params(&r.params)),
                    r.terms,
                    r.ok,
                    r.compared.map(|n| n.to_string()).unwrap_or_default(),
                    r.scale.clone().unwrap_or_default(),
                    csv_quote(r.error.as_deref().unwrap_or(""))
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in &rows {
                let params = show_params(&r.params);
                let params = if params.is_empty() {
                    String::new()
                } else {
                    format!(" [{params}]")
                };
                if r.ok {
                    let _ = writeln!(
                        out,
                        "{}{}: MATCH ({} arguments above {}, scale {})",
                        r.id,
                        params,
                        r.compared.unwrap_or(0),
                        r.cutoff.as_deref().unwrap_or("?"),
                        r.scale.as_deref().unwrap_or("?")
                    );
                } else {
                    let _ = writeln!(out, "{}{}: MISMATCH {}", r.id, params, r.error.as_deref().unwrap_or(""));
                }
            }
            out
        }
    };
    Outcome { output, code }
}

#[derive(Serialize)]
struct GeneratedTerm {
    id: String,
    series: String,
    weight: String,
    index: i64,
    argument: String,
    value: String,
}

fn generate(identities: &[Identity], settings: &Settings) -> Result<Outcome, CliError> {
    let count = settings.terms.unwrap_or(DEFAULT_GENERATE_TERMS);
    let digits = 30.min(BigReal::decimal_digits(settings.precision));
    let mut rows = Vec::new();
    for id in identities {
        for s in &id.series {
            for (i, arg) in s.args(count)?.into_iter().enumerate() {
                rows.push(GeneratedTerm {
                    id: id.id.clone(),
                    series: s.label.clone(),
                    weight: s.weight.to_string(),
                    index: s.start + i as i64,
                    argument: arg.to_string(),
                    value: arg.to_real(settings.precision).to_decimal_digits(digits),
                });
            }
        }
    }
    let output = match settings.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("plain data") + "\n",
        Format::Csv => {
            let mut out = String::from("id,series,weight,index,argument,value\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.id,
                    csv_quote(&r.series),
                    r.weight,
                    r.index,
                    csv_quote(&r.argument),
                    r.value
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            let mut current: Option<(&str, &str)> = None;
            for r in &rows {
                if current != Some((&r.id, &r.series)) {
                    let weight = if r.weight == "1" {
                        String::new()
                    } else {
                        format!(" x{}", r.weight)
                    };
                    let _ = writeln!(out, "{} {}{}", r.id, r.series, weight);
                    current = Some((&r.id, &r.series));
                }
                let _ = writeln!(out, "  {:>5}  {}  ~ {}", r.index, r.argument, r.value);
            }
            out
        }
    };
    Ok(Outcome { output, code: 0 })
}
