use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rug::Rational;
use serde_json::{json, Value};

use mtstar::evaluations::{parse_params, EvaluationReport, Evaluator, Formula, FORMULA_IDS};
use mtstar::finite::{
    gn_closed_eval, gn_coefficient_closed, gn_restricted_weighted, gn_series_eval, gn_tail_certificate,
    t_harmonic_star,
};
use mtstar::index::{parse_blocks, parse_index};
use mtstar::numerics::{parse_rational, rational_string};
use mtstar::series::{g_eval_closed, g_eval_series, nested_t_sum, restricted_g_eval, t_star_closed_blocks, t_star_direct};
use mtstar::suites::{write_jsonl, CheckRecord, Suite, SuiteConfig};
use mtstar::{BigReal, Error, ParsedIndex, Precision, TruncatedValue};

#[derive(Parser)]
#[command(name = "mtstar", version, about = "Multiple t-values, t-star values and their generating functions")]
struct Cli {
    /// Working precision in decimal digits (at least 10).
    #[arg(long, global = true, default_value_t = 50)]
    precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Direct,
    Closed,
    Series,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a star value, an alternating t-value or a closed formula.
    Eval(EvalArgs),
    /// Evaluate a generating function, finite (with --n) or infinite.
    Gen(GenArgs),
    /// Run a verification suite; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Tabulate a closed formula against the direct oracle.
    Table(TableArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Index such as "3,1,2"; "~" marks an alternating entry ("~2,1").
    #[arg(long, conflicts_with_all = ["blocks", "formula"])]
    index: Option<String>,
    /// Block form "a0:c1:a1:…" for ({2}^a0, c1, {2}^a1, …).
    #[arg(long, conflicts_with = "formula")]
    blocks: Option<String>,
    /// Closed formula id (thm41 … thm49, liwang42) with --params.
    #[arg(long, requires = "params")]
    formula: Option<String>,
    /// Formula parameters, e.g. "a=1,b=0" or "a=0,b=0,c=0,case=31".
    #[arg(long)]
    params: Option<String>,
    /// Truncation K (terms for direct sums, shells for closed forms).
    #[arg(long)]
    terms: Option<u64>,
    /// Finite truncation n: evaluates t★_n exactly.
    #[arg(long)]
    n: Option<u64>,
    /// Strict-inequality sum t(s) instead of the star sum.
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value_t = Mode::Direct)]
    mode: Mode,
    /// With --formula, compare against the direct oracle at this tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct GenArgs {
    /// Separators c_1,…,c_d (empty for d = 0).
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    c: String,
    /// Variables z_0,…,z_d as rationals or decimals.
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    /// Finite truncation n; omit for the infinite generating function.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, value_enum, default_value_t = Mode::Closed)]
    mode: Mode,
    /// Largest run of twos summed by the series mode.
    #[arg(long, default_value_t = 40)]
    amax: u32,
    #[arg(long)]
    terms: Option<u64>,
    /// Keep only terms with a_u ≥ 1.
    #[arg(long)]
    restrict_u: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// Larger grids with 10^6-term oracles.
    #[arg(long)]
    extended: bool,
    /// Oracle terms (default 10^5, or 10^6 with --extended).
    #[arg(long)]
    terms: Option<u64>,
    /// Override the per-formula oracle tolerances.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    family: String,
    /// Parameter range such as "a=0..4"; repeat for each parameter.
    #[arg(long = "range")]
    ranges: Vec<String>,
    #[arg(long)]
    terms: Option<u64>,
    #[arg(long, default_value_t = 1e-5)]
    tolerance: f64,
}

enum Failure {
    Checks(usize),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Invalid(format!("serialization error: {e}"))
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(n)) => {
            eprintln!("{n} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let prec = Precision::new(cli.precision)?;
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let result = match &cli.command {
        Command::Eval(args) => eval(args, prec, cli.format, &mut out),
        Command::Gen(args) => gen(args, prec, cli.format, &mut out),
        Command::Verify(args) => verify(args, prec, cli.format, &mut out),
        Command::Table(args) => table(args, prec, cli.format, &mut out),
    };
    out.flush()?;
    result
}

fn check_terms(terms: Option<u64>, default: u64) -> Result<u64, Failure> {
    match terms {
        Some(0) => Err(invalid("--terms must be at least 1")),
        Some(k) => Ok(k),
        None => Ok(default),
    }
}

fn check_tolerance(t: f64) -> Result<f64, Failure> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(invalid("--tolerance must be a positive number"))
    }
}

/// One evaluated quantity with provenance.
struct Evaluated {
    target: String,
    quantity: &'static str,
    engine: &'static str,
    terms: Option<u64>,
    value: Value,
    text: String,
}

fn truncated(target: String, quantity: &'static str, engine: &'static str, v: &TruncatedValue, digits: u32) -> Evaluated {
    Evaluated {
        text: format!(
            "{} ± {} ({})",
            v.estimate.to_decimal(digits),
            v.error_indicator.to_bound_string(),
            v.bound_kind
        ),
        value: serde_json::to_value(v).expect("values serialize"),
        target,
        quantity,
        engine,
        terms: Some(v.terms_used),
    }
}

fn exact(target: String, quantity: &'static str, engine: &'static str, q: &Rational, n: u64, digits: u32) -> Evaluated {
    let approx = BigReal::from_rational(q, Precision::new(digits.max(10)).expect("digits >= 10"));
    Evaluated {
        text: format!("{} ≈ {}", rational_string(q), approx.to_decimal(digits)),
        value: json!({ "exact": rational_string(q), "decimal": approx.to_decimal(digits) }),
        target,
        quantity,
        engine,
        terms: Some(n),
    }
}

fn emit(e: &Evaluated, prec: Precision, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let doc = json!({
                "target": e.target,
                "quantity": e.quantity,
                "engine": e.engine,
                "K": e.terms,
                "precision": prec.digits(),
                "value": e.value,
            });
            writeln!(out, "{}", serde_json::to_string(&doc)?)?;
        }
        Format::Csv => {
            writeln!(out, "target,quantity,engine,K,precision,value")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                csv_field(&e.target),
                e.quantity,
                e.engine,
                e.terms.map(|k| k.to_string()).unwrap_or_default(),
                prec.digits(),
                csv_field(&e.text)
            )?;
        }
        Format::Text => {
            let k = e.terms.map(|k| format!(", K={k}")).unwrap_or_default();
            writeln!(out, "{} {} = {}", e.quantity, e.target, e.text)?;
            writeln!(out, "  [{}{k}, {} digits]", e.engine, prec.digits())?;
        }
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn eval(args: &EvalArgs, prec: Precision, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let digits = prec.digits();
    if let Some(id) = &args.formula {
        return eval_formula(id, args, prec, format, out);
    }
    let evaluated = if let Some(text) = &args.index {
        let parsed = parse_index(text)?;
        match (parsed, args.n) {
            (ParsedIndex::Plain(idx), Some(n)) => {
                if args.strict {
                    return Err(invalid("--strict is not available with --n"));
                }
                exact(format!("({idx})"), "t-star-n", "finite", &t_harmonic_star(n, &idx), n, digits)
            }
            (ParsedIndex::Signed(_), Some(_)) => {
                return Err(invalid("finite truncations take an index without `~`"))
            }
            (ParsedIndex::Plain(idx), None) if !args.strict => {
                if args.mode != Mode::Direct {
                    return Err(invalid("--index is evaluated by direct summation; use --blocks for --mode closed"));
                }
                let k = check_terms(args.terms, 100_000)?;
                let v = t_star_direct(&idx, k, prec)?;
                truncated(format!("({idx})"), "t-star", "direct", &v, digits)
            }
            (parsed, None) => {
                let s = parsed.into_signed();
                let k = check_terms(args.terms, 100_000)?;
                let v = nested_t_sum(&s, k, prec)?;
                truncated(format!("({s})"), "t", "direct", &v, digits)
            }
        }
    } else if let Some(text) = &args.blocks {
        let b = parse_blocks(text)?;
        let target = format!("({}) = blocks {b}", b.expand());
        match (args.n, args.mode) {
            (Some(n), Mode::Closed) => {
                exact(target, "t-star-n", "finite-closed", &gn_coefficient_closed(n, &b)?, n, digits)
            }
            (Some(n), _) => exact(target, "t-star-n", "finite", &t_harmonic_star(n, &b.expand()), n, digits),
            (None, Mode::Closed) => {
                let k = check_terms(args.terms, 2000)?;
                truncated(target, "t-star", "closed-shells", &t_star_closed_blocks(&b, k, prec)?, digits)
            }
            (None, _) => {
                let k = check_terms(args.terms, 100_000)?;
                truncated(target, "t-star", "direct", &t_star_direct(&b.expand(), k, prec)?, digits)
            }
        }
    } else {
        return Err(invalid("eval needs one of --index, --blocks or --formula"));
    };
    emit(&evaluated, prec, format, out)
}

fn eval_formula(id: &str, args: &EvalArgs, prec: Precision, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let params = parse_params(args.params.as_deref().unwrap_or(""))?;
    let f = Formula::from_params(id, &params)?;
    let ev = Evaluator::new(prec, check_terms(args.terms, 100_000)?)?;
    match args.tolerance {
        Some(t) => {
            let report = ev.cross_check(&f, check_tolerance(t)?)?;
            write_reports(std::slice::from_ref(&report), prec, format, out)?;
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Checks(1))
            }
        }
        None => {
            let lines = ev.evaluate(&f)?;
            for (i, v) in lines.iter().enumerate() {
                let e = truncated(format!("{f} line {}", i + 1), "closed-form", "closed", v, prec.digits());
                emit(&e, prec, format, out)?;
            }
            Ok(())
        }
    }
}

fn parse_list<T>(text: &str, what: &str, parse: impl Fn(&str) -> Result<T, Error>) -> Result<Vec<T>, Failure> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|f| parse(f.trim()).map_err(|e| invalid(format!("{what}: {e}"))))
        .collect()
}

fn gen(args: &GenArgs, prec: Precision, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let c: Vec<u32> = parse_list(&args.c, "--c", |f| {
        f.parse::<u32>().map_err(|_| Error::Parse {
            offset: 0,
            message: format!("`{f}` is not a positive integer"),
        })
    })?;
    let target = format!("G(c=[{}]; z=[{}])", args.c.trim(), args.z.trim());
    let digits = prec.digits();
    let evaluated = if let Some(n) = args.n {
        let z = parse_list(&args.z, "--z", parse_rational)?;
        let target = format!("G_{n}{}", &target[1..]);
        match (args.mode, args.restrict_u) {
            (Mode::Series, Some(_)) => return Err(invalid("--restrict-u is available in closed mode")),
            (Mode::Series, None) => {
                let v = gn_series_eval(n, &c, &z, args.amax)?;
                let cert = gn_tail_certificate(n, &c, &z, args.amax)?;
                let mut e = exact(target, "generating-n", "finite-series", &v, n, digits);
                let cert_text = rational_string(&cert);
                e.text = format!("{} (tail ≤ {})", e.text, BigReal::from_rational(&cert, prec).to_bound_string());
                e.value["tail_certificate"] = Value::String(cert_text);
                e
            }
            (_, Some(u)) => exact(target, "generating-n-restricted", "finite-closed", &gn_restricted_weighted(n, &c, &z, u)?, n, digits),
            (_, None) => exact(target, "generating-n", "finite-closed", &gn_closed_eval(n, &c, &z)?, n, digits),
        }
    } else {
        let z = parse_list(&args.z, "--z", |f| BigReal::parse(f, prec))?;
        match (args.mode, args.restrict_u) {
            (Mode::Series, Some(_)) => return Err(invalid("--restrict-u is available in closed mode")),
            (Mode::Series, None) => {
                let k = check_terms(args.terms, 4000)?;
                truncated(target, "generating", "series", &g_eval_series(&c, &z, args.amax, k, prec)?, digits)
            }
            (_, Some(u)) => {
                let k = check_terms(args.terms, 2000)?;
                truncated(target, "generating-restricted", "closed-shells", &restricted_g_eval(&c, &z, u, k, prec)?, digits)
            }
            (_, None) => {
                let k = check_terms(args.terms, 2000)?;
                truncated(target, "generating", "closed-shells", &g_eval_closed(&c, &z, k, prec)?, digits)
            }
        }
    };
    emit(&evaluated, prec, format, out)
}

fn write_records(records: &[CheckRecord], format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => write_jsonl(records, out)?,
        Format::Csv => {
            writeln!(out, "id,formula,inputs,lhs,rhs,abs_error,bound,pass,engine,K,precision")?;
            for r in records {
                let ins: Vec<String> = r.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    csv_field(&r.id),
                    r.formula,
                    csv_field(&ins.join(";")),
                    csv_field(&r.lhs),
                    csv_field(&r.rhs),
                    r.abs_error,
                    r.bound,
                    r.pass,
                    r.engine,
                    r.terms.map(|k| k.to_string()).unwrap_or_default(),
                    r.precision.map(|p| p.to_string()).unwrap_or_default()
                )?;
            }
        }
        Format::Text => {
            for r in records {
                let mark = if r.pass { "PASS" } else { "FAIL" };
                writeln!(out, "{mark} {}  |Δ| = {}  bound {}", r.id, r.abs_error, r.bound)?;
            }
        }
    }
    Ok(())
}

fn verify(args: &VerifyArgs, prec: Precision, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let suite: Suite = args.suite.parse()?;
    let mut cfg = if args.extended {
        SuiteConfig::extended()
    } else {
        SuiteConfig::default()
    };
    cfg.precision = prec;
    cfg.oracle_terms = check_terms(args.terms, cfg.oracle_terms)?;
    cfg.tolerance = args.tolerance.map(check_tolerance).transpose()?;
    let records = suite.run(&cfg)?;
    write_records(&records, format, out)?;
    let failed = records.iter().filter(|r| !r.pass).count();
    eprintln!("suite {suite}: {} checks, {failed} failed", records.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Checks(failed))
    }
}

fn parse_range(text: &str) -> Result<(String, u32, u32), Failure> {
    let bad = || invalid(format!("range `{text}` should look like a=0..4"));
    let (name, span) = text.split_once('=').ok_or_else(bad)?;
    let (lo, hi) = span.split_once("..").ok_or_else(bad)?;
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((name.trim().to_string(), lo, hi))
}

/// Parameters of a family with their default ranges.
fn family_params(id: &str) -> Result<Vec<(&'static str, u32, u32)>, Failure> {
    Ok(match id {
        "thm41" => vec![("a", 0, 4)],
        "thm42" | "liwang42" => vec![("a", 0, 2), ("b", 0, 2)],
        "thm44" => vec![("a", 1, 2), ("b", 0, 2)],
        "thm45" => vec![("a", 0, 1), ("b", 0, 1), ("c", 1, 2)],
        "thm46" => vec![("a", 0, 1), ("b", 0, 1), ("c", 0, 1), ("case", 31, 33)],
        "thm47" => vec![("a", 1, 1), ("b", 0, 1), ("c", 0, 1), ("case", 11, 13)],
        "thm48" => vec![("d", 0, 2)],
        "thm49" => vec![("d", 1, 2), ("a", 0, 1)],
        other => {
            return Err(invalid(format!(
                "unknown family `{other}` (expected one of {})",
                FORMULA_IDS.join(", ")
            )))
        }
    })
}

fn table(args: &TableArgs, prec: Precision, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let mut params = family_params(&args.family)?;
    for text in &args.ranges {
        let (name, lo, hi) = parse_range(text)?;
        let slot = params
            .iter_mut()
            .find(|p| p.0 == name)
            .ok_or_else(|| invalid(format!("family {} has no parameter `{name}`", args.family)))?;
        slot.1 = lo;
        slot.2 = hi;
    }
    let mut combos: Vec<BTreeMap<String, u32>> = vec![BTreeMap::new()];
    for &(name, lo, hi) in &params {
        let values: Vec<u32> = if name == "case" {
            [lo, hi].into_iter().collect::<std::collections::BTreeSet<_>>().into_iter().collect()
        } else {
            (lo..=hi).collect()
        };
        combos = combos
            .into_iter()
            .flat_map(|m| {
                values.iter().map(move |&v| {
                    let mut m = m.clone();
                    m.insert(name.to_string(), v);
                    m
                })
            })
            .collect();
    }
    let formulas: Vec<Formula> = combos
        .iter()
        .map(|m| Formula::from_params(&args.family, m))
        .collect::<Result<_, _>>()?;
    let tol = check_tolerance(args.tolerance)?;
    let ev = Evaluator::new(prec, check_terms(args.terms, 100_000)?)?;
    let reports: Vec<EvaluationReport> = formulas
        .par_iter()
        .map(|f| ev.cross_check(f, tol))
        .collect::<Result<_, _>>()?;
    write_reports(&reports, prec, format, out)?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Checks(failed))
    }
}

fn write_reports(reports: &[EvaluationReport], prec: Precision, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    let digits = prec.digits();
    match format {
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            writeln!(out, "formula,inputs,target,closed,oracle,abs_disagreement,combined_error,tolerance,pass")?;
            for r in reports {
                let ins: Vec<String> = r.formula.inputs().iter().map(|(k, v)| format!("{k}={v}")).collect();
                let closed: Vec<String> = r.closed_values.iter().map(|v| v.estimate.to_decimal(digits)).collect();
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.formula.id(),
                    csv_field(&ins.join(";")),
                    csv_field(&r.target.to_string()),
                    csv_field(&closed.join(";")),
                    r.oracle_value.estimate.to_decimal(digits),
                    r.abs_disagreement.to_bound_string(),
                    r.combined_error.to_bound_string(),
                    r.tolerance,
                    r.pass
                )?;
            }
        }
        Format::Text => {
            for r in reports {
                let mark = if r.pass { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{mark} {}  t★({}) = {}  oracle {}  |Δ| = {}",
                    r.formula,
                    r.target,
                    r.closed_values[0].estimate.to_decimal(digits.min(20)),
                    r.oracle_value.estimate.to_decimal(digits.min(20)),
                    r.abs_disagreement.to_bound_string()
                )?;
            }
        }
    }
    Ok(())
}
