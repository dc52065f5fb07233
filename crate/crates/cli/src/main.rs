//! `wtelim`: command-line front end.
//!
//! Exit codes: 0 pass, 1 mathematical counterexample (or failed selftest),
//! 2 invalid input.

use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use wtelim::elimination::enumerate_types;
use wtelim::io::{RepRecord, TypeRecord, WeightRecord, SCHEMA_VERSION};
use wtelim::verify::SurveyConfig;
use wtelim::weights::WeightClassKey;
use wtelim::{
    canonicalize, covering_type, digits_of, eliminate, enumerate_semisimple, enumerate_weights,
    is_compatible, is_regular, padic_solve, rep_compatible, rep_margin, selftest, survey,
    theta_set_final, theta_set_raw, verify_theorem, weight_margin, Int, Mode, Params, Sampling,
    VerifyConfig,
};

#[derive(Parser)]
#[command(name = "wtelim", version, about = "Weight elimination for mod p Galois representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Genericity margin of a weight or representation record.
    Genericity(InputArg),
    /// Surviving weights of a representation, sorted by (margin, class key).
    Eliminate {
        #[command(flatten)]
        input: InputArg,
        /// One survivor per line instead of a single document.
        #[arg(long)]
        ndjson: bool,
    },
    /// Check the genericity bound over δ-generic representations.
    Verify(RunArgs),
    /// Histogram of survivor margins per δ.
    Survey(RunArgs),
    /// Run the embedded oracle checks.
    Selftest,
    /// Base-p digits of m modulo p^d - 1.
    Digits {
        #[arg(long)]
        p: Int,
        #[arg(long)]
        d: usize,
        #[arg(allow_hyphen_values = true)]
        m: Int,
    },
    /// Solve alpha_j = t_j p - t_{j-1} (cyclic) for integer carries.
    Solve {
        #[arg(long)]
        p: Int,
        #[arg(required = true, allow_hyphen_values = true)]
        alpha: Vec<Int>,
    },
    /// Canonical representative of a weight record.
    Canonicalize(InputArg),
    /// Covering inertial type of a weight record.
    CoveringType(InputArg),
    /// θ-set of an inertial type record for an irreducible block of size ni.
    Theta {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        ni: usize,
        /// The set produced by the descent construction instead of the closed form.
        #[arg(long)]
        raw: bool,
    },
    /// Whether a representation is compatible with an inertial type.
    Compatible {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long = "type")]
        xi: PathBuf,
    },
    /// Stream every class of the given kind as line-delimited JSON.
    Enumerate {
        kind: Kind,
        #[arg(long)]
        p: Int,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: usize,
        /// Representations only: keep those at least this generic.
        #[arg(long)]
        delta: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Weights,
    Reps,
    Types,
}

#[derive(Args)]
struct InputArg {
    /// JSON file; standard input when absent or `-`.
    input: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// JSON file with any of the flag fields; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<Int>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    f: Option<usize>,
    /// `A`, or `A..B` (inclusive) for survey.
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Sample this many representations uniformly (needs --seed).
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Also write the report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Deserialize)]
enum ModeArg {
    #[value(name = "general")]
    #[serde(rename = "general")]
    General,
    #[value(name = "f_equals_1")]
    #[serde(rename = "f_equals_1")]
    FEquals1,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::General => Mode::General,
            ModeArg::FEquals1 => Mode::FEquals1,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DeltaField {
    One(u32),
    Range(String),
}

/// Contents of a `--config` file.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    p: Option<Int>,
    n: Option<usize>,
    f: Option<usize>,
    delta: Option<DeltaField>,
    mode: Option<ModeArg>,
    sample: Option<usize>,
    seed: Option<u64>,
    workers: Option<usize>,
    out: Option<PathBuf>,
}

/// Invalid input; reported on stderr with exit code 2.
struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

type Outcome = Result<u8, Invalid>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Genericity(input) => genericity(&read_input(&input.input)?),
        Command::Eliminate { input, ndjson } => cmd_eliminate(&read_input(&input.input)?, ndjson),
        Command::Verify(args) => cmd_verify(args),
        Command::Survey(args) => cmd_survey(args),
        Command::Selftest => cmd_selftest(),
        Command::Digits { p, d, m } => {
            let x = digits_of(m, d, p)?;
            emit(&json!({ "p": p, "d": d, "m": m, "digits": x.digits() }))
        }
        Command::Solve { p, alpha } => {
            let out = match padic_solve(&alpha, p)? {
                Some(sol) => json!({ "p": p, "alpha": alpha, "carries": sol.carries, "quotient": sol.quotient }),
                None => json!({ "p": p, "alpha": alpha, "carries": null }),
            };
            emit(&out)
        }
        Command::Canonicalize(input) => {
            let w = parse::<WeightRecord>(&read_input(&input.input)?, "weight")?.to_weight()?;
            emit(&WeightRecord::from(&canonicalize(&w)))
        }
        Command::CoveringType(input) => {
            let w = parse::<WeightRecord>(&read_input(&input.input)?, "weight")?.to_weight()?;
            emit(&TypeRecord::from(&covering_type(&w)))
        }
        Command::Theta { input, ni, raw } => {
            let xi = parse::<TypeRecord>(&read_input(&input.input)?, "type")?.to_type()?;
            let set = if raw { theta_set_raw(&xi, ni)? } else { theta_set_final(&xi, ni)? };
            emit(&json!({ "ni": ni, "d": set.d, "raw": raw, "thetas": set.thetas }))
        }
        Command::Compatible { rep, xi } => {
            let rho = parse::<RepRecord>(&read_input(&Some(rep))?, "rep")?.to_rep()?;
            let xi = parse::<TypeRecord>(&read_input(&Some(xi))?, "type")?.to_type()?;
            let per_summand = rho
                .summands()
                .iter()
                .map(|s| is_compatible(s.m(), &xi, s.ni()))
                .collect::<wtelim::Result<Vec<bool>>>()?;
            emit(&json!({ "compatible": rep_compatible(&rho, &xi)?, "summands": per_summand }))
        }
        Command::Enumerate { kind, p, n, f, delta } => enumerate(kind, Params::new(p, n, f)?, delta),
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Invalid> {
    match path.as_deref() {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Invalid(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

/// Deserializes with the path of the offending field in the diagnostic.
fn parse<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, Invalid> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            Invalid(format!("malformed {what} record: {}", e.inner()))
        } else {
            Invalid(format!("malformed {what} record: field `{path}`: {}", e.inner()))
        }
    })
}

fn emit<T: Serialize>(value: &T) -> Outcome {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(0)
}

fn genericity(text: &str) -> Outcome {
    let value: Value = parse(text, "input")?;
    let is_weight = value.get("lambda").is_some();
    let is_rep = value.get("summands").is_some();
    match (is_weight, is_rep) {
        (true, false) => {
            let w = parse::<WeightRecord>(text, "weight")?.to_weight()?;
            emit(&json!({ "margin": weight_margin(&w).value(), "regular": is_regular(&w) }))
        }
        (false, true) => {
            let rho = parse::<RepRecord>(text, "rep")?.to_rep()?;
            emit(&json!({ "margin": rep_margin(&rho).value() }))
        }
        _ => Err(Invalid("input needs exactly one of the fields `lambda` (weight) or `summands` (rep)".into())),
    }
}

/// A survivor line: the canonical weight record plus its margin and class key.
#[derive(Serialize)]
struct SurvivorRecord {
    #[serde(flatten)]
    weight: WeightRecord,
    margin: u32,
    key: WeightClassKey,
}

fn cmd_eliminate(text: &str, ndjson: bool) -> Outcome {
    let rho = parse::<RepRecord>(text, "rep")?.to_rep()?;
    let report = eliminate(&rho)?;
    let records = report.survivors.iter().map(|s| SurvivorRecord {
        weight: WeightRecord::from(&s.weight),
        margin: s.margin.value(),
        key: s.key.clone(),
    });
    if ndjson {
        let mut out = BufWriter::new(io::stdout().lock());
        for r in records {
            serde_json::to_writer(&mut out, &r)?;
            writeln!(out)?;
        }
        out.flush()?;
        return Ok(0);
    }
    emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "rep": RepRecord::from(&rho),
        "rep_margin": rep_margin(&rho).value(),
        "weight_classes": report.weight_classes,
        "survivors": records.collect::<Vec<_>>(),
    }))
}

struct Resolved {
    params: Params,
    delta: (u32, u32),
    mode: Mode,
    sampling: Sampling,
    workers: Option<usize>,
    out: Option<PathBuf>,
}

fn parse_delta(s: &str, allow_range: bool) -> Result<(u32, u32), Invalid> {
    let bad = || Invalid(format!("field `delta`: expected a non-negative integer{}, got {s:?}",
        if allow_range { " or A..B" } else { "" }));
    match s.split_once("..") {
        Some((a, b)) if allow_range => {
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        }
        Some(_) => Err(bad()),
        None => {
            let d = s.trim().parse().map_err(|_| bad())?;
            Ok((d, d))
        }
    }
}

/// Merges `--config` with flags (flags win) and validates.
fn resolve(args: RunArgs, allow_range: bool) -> Result<Resolved, Invalid> {
    let file = match &args.config {
        Some(path) => parse::<RunConfig>(&read_input(&Some(path.clone()))?, "config")?,
        None => RunConfig::default(),
    };
    let missing = |name: &str| Invalid(format!("missing field `{name}` (flag --{name} or config)"));
    let p = args.p.or(file.p).ok_or_else(|| missing("p"))?;
    let n = args.n.or(file.n).ok_or_else(|| missing("n"))?;
    let f = args.f.or(file.f).ok_or_else(|| missing("f"))?;
    let params = Params::new(p, n, f)?;
    let delta = match (args.delta, file.delta) {
        (Some(s), _) | (None, Some(DeltaField::Range(s))) => parse_delta(&s, allow_range)?,
        (None, Some(DeltaField::One(d))) => (d, d),
        (None, None) => return Err(missing("delta")),
    };
    let sampling = match (args.sample.or(file.sample), args.seed.or(file.seed)) {
        (None, None) => Sampling::Exhaustive,
        (Some(count), Some(seed)) => Sampling::Uniform { count, seed },
        (Some(_), None) => return Err(Invalid("field `seed`: sampling requires a seed".into())),
        (None, Some(_)) => return Err(Invalid("field `sample`: a seed was given without a sample count".into())),
    };
    let workers = args.workers.or(file.workers);
    if workers == Some(0) {
        return Err(Invalid("field `workers`: must be at least 1".into()));
    }
    Ok(Resolved {
        params,
        delta,
        mode: args.mode.or(file.mode).map_or(Mode::General, Mode::from),
        sampling,
        workers,
        out: args.out.or(file.out),
    })
}

fn write_report<T: Serialize>(report: &T, out: &Option<PathBuf>) -> Result<(), Invalid> {
    let text = serde_json::to_string_pretty(report)?;
    if let Some(path) = out {
        fs::write(path, format!("{text}\n"))
            .map_err(|e| Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    println!("{text}");
    Ok(())
}

fn cmd_verify(args: RunArgs) -> Outcome {
    let r = resolve(args, false)?;
    let config = VerifyConfig {
        params: r.params,
        delta: r.delta.0,
        mode: r.mode,
        sampling: r.sampling,
        workers: r.workers,
    };
    let report = verify_theorem(&config);
    write_report(&report, &r.out)?;
    if let Some(reason) = &report.reason {
        eprintln!("error: {reason}");
    }
    Ok(report.exit_code() as u8)
}

fn cmd_survey(args: RunArgs) -> Outcome {
    let r = resolve(args, true)?;
    let config = SurveyConfig {
        params: r.params,
        delta_min: r.delta.0,
        delta_max: r.delta.1,
        sampling: r.sampling,
        workers: r.workers,
    };
    let report = survey(&config)?;
    write_report(&report, &r.out)?;
    Ok(if report.all_bounds_hold() { 0 } else { 1 })
}

fn cmd_selftest() -> Outcome {
    match selftest::run() {
        Ok(results) => {
            for (name, cases) in results {
                println!("ok    {name} ({cases} cases)");
            }
            Ok(0)
        }
        Err(failure) => {
            println!("FAIL  {failure}");
            eprintln!("selftest failed: {}", failure.property);
            Ok(1)
        }
    }
}

fn enumerate(kind: Kind, params: Params, delta: Option<u32>) -> Outcome {
    let mut out = BufWriter::new(io::stdout().lock());
    match kind {
        Kind::Weights => {
            for w in enumerate_weights(params) {
                serde_json::to_writer(&mut out, &WeightRecord::from(&w))?;
                writeln!(out)?;
            }
        }
        Kind::Types => {
            for xi in enumerate_types(params) {
                serde_json::to_writer(&mut out, &TypeRecord::from(&xi))?;
                writeln!(out)?;
            }
        }
        Kind::Reps => {
            let reps: Box<dyn Iterator<Item = _>> = match delta {
                Some(d) => Box::new(wtelim::filter_generic(enumerate_semisimple(params), params, d)?),
                None => Box::new(enumerate_semisimple(params)),
            };
            for rho in reps {
                serde_json::to_writer(&mut out, &RepRecord::from(&rho))?;
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    Ok(0)
}

