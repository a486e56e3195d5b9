//! Command-line front end: `integrate`, `bound`, `fuzz`, `verify` and
//! `reproduce`.
//!
//! Every command prints a JSON document on stdout, or a plain table with
//! `--pretty`. Exit codes: 0 success, 1 malformed input, 2 a hypothesis
//! fails, 3 a bound is violated or a fixture mismatches.

pub mod fixtures;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::binops::{BinaryOpSpec, MixedOpSpec};
use crate::bounds::{check_bound, BoundId, BoundReport};
use crate::instance::{parse_conj, InstanceFile};
use crate::integrals::{integrate, IntegralResult};
use crate::measure::Subset;
use crate::profile::Instance;
use crate::symmetric::{asymmetric_integral, symmetric_integral};
use crate::verify::fuzz::{fuzz, FuzzConfig, FuzzReport};
use crate::verify::predicates::{check_discrete, interval_property, Predicate};
use crate::verify::MeasureKind;
use crate::{Error, Result};

use fixtures::{fmt12, run_fixture, FixtureReport, FIXTURE_IDS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sugeno-bounds", version, about = "Generalized Sugeno integrals and Jensen-type bounds")]
pub struct Cli {
    /// Comparison tolerance for bounds and profile searches.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print a table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Also write the JSON document to this file.
    #[arg(long = "json-out", global = true)]
    pub json_out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate f (or H(f)) over A.
    Integrate(IntegrateArgs),
    /// Evaluate both sides of one or more bounds.
    Bound(BoundArgs),
    /// Check bounds on random discrete instances.
    Fuzz(FuzzArgs),
    /// Test a measure for (weak) sub- or superadditivity.
    Verify(VerifyArgs),
    /// Run the worked examples.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    /// min, product, a t-norm, qconj:<t-norm> or semicopula:<name>.
    #[arg(long, default_value = "min")]
    pub op: String,
    #[arg(long, conflicts_with = "profile")]
    pub instance: Option<PathBuf>,
    /// An interval instance file.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Integrate H(f) with the instance's H.
    #[arg(long)]
    pub transform: bool,
    /// The ⋆-symmetric Sugeno integral of a signed f.
    #[arg(long)]
    pub symmetric: bool,
    /// plus or ovee.
    #[arg(long, default_value = "plus")]
    pub star: String,
    /// A second discrete instance whose measure integrates the negative part.
    #[arg(long)]
    pub nu: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Bound ids separated by commas, or `all`.
    #[arg(long)]
    pub id: String,
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub op: Option<String>,
    #[arg(long)]
    pub conj: Option<String>,
    #[arg(long)]
    pub star: Option<String>,
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Bound ids separated by commas (default: every bound that is claimed to hold).
    #[arg(long)]
    pub bounds: Option<String>,
    /// general, subadditive, superadditive, weakly_sub, weakly_super or mixed.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// subadditive, superadditive, weakly-subadditive or weakly-superadditive.
    #[arg(long)]
    pub predicate: String,
    /// 0-based elements of A, comma separated (default: the instance's A).
    #[arg(long = "A")]
    pub a: Option<String>,
    #[arg(long)]
    pub instance: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// A fixture id or `all`.
    pub id: String,
    /// Exponent for ex2_9.
    #[arg(long)]
    pub q: Option<f64>,
}

/// What a command produced.
#[derive(Debug)]
pub struct Output {
    pub json: Value,
    pub table: String,
    pub code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Hypothesis(_) => EXIT_HYPOTHESIS,
        _ => EXIT_MALFORMED,
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn parse_ids(list: &str) -> Result<Vec<BoundId>> {
    if list.trim() == "all" {
        return Ok(BoundId::ALL.to_vec());
    }
    list.split(',').filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse()).collect()
}

fn parse_subset(list: &str) -> Result<Subset> {
    let idx = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad element {s:?} in --A"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subset::from_indices(idx))
}

pub fn execute(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Integrate(a) => cmd_integrate(cli, a),
        Command::Bound(a) => cmd_bound(cli, a),
        Command::Fuzz(a) => cmd_fuzz(cli, a),
        Command::Verify(a) => cmd_verify(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    }
}

fn integral_table(label: &str, r: &IntegralResult) -> String {
    let mut t = format!("{label}\n  value      {}\n  mode       {:?}\n", fmt12(r.value.to_f64()), r.mode);
    if let Some(e) = r.error_bound {
        let _ = writeln!(t, "  error      ≤ {e:e}");
    }
    let _ = writeln!(t, "  argmax t   {}", fmt12(r.argmax_t.to_f64()));
    t
}

fn cmd_integrate(cli: &Cli, args: &IntegrateArgs) -> Result<Output> {
    let path = args
        .instance
        .as_ref()
        .or(args.profile.as_ref())
        .ok_or_else(|| Error::InvalidValue("give --instance or --profile".into()))?;
    let file = InstanceFile::read(path)?;
    let inst = file.to_instance()?;
    if args.profile.is_some() && inst.is_discrete() {
        return Err(Error::InvalidValue("--profile expects an interval instance".into()));
    }
    let h = if args.transform {
        Some(file.transform()?.ok_or_else(|| Error::InvalidValue("--transform needs \"H\" in the instance".into()))?)
    } else {
        None
    };
    let star = MixedOpSpec::builtin(&args.star)?;

    if let Some(nu_path) = &args.nu {
        let nu_inst = InstanceFile::read(nu_path)?.to_instance()?;
        let (Instance::Discrete { measure: mu, a, f }, Instance::Discrete { measure: nu, .. }) = (&inst, &nu_inst) else {
            return Err(Error::NotEnumerable);
        };
        let g = match &h {
            Some(h) => f.iter().map(|v| h.eval_signed(*v)).collect::<Result<Vec<_>>>()?,
            None => f.clone(),
        };
        let op = BinaryOpSpec::builtin(&args.op)?;
        let v = asymmetric_integral(&op, &star, mu, nu, *a, &g)?;
        let json = json!({"kind": "asymmetric", "op": op.name(), "star": star.name(), "value": v});
        let table = format!("asymmetric integral ({}, {})\n  value      {}\n", op.name(), star.name(), fmt12(v.to_f64()));
        return Ok(Output { json, table, code: EXIT_OK });
    }

    if args.symmetric {
        let v = symmetric_integral(&star, &inst, h.as_ref(), cli.tol)?;
        let mut json = to_value(&v)?;
        json["kind"] = json!("symmetric");
        json["star"] = json!(star.name());
        let table = format!(
            "symmetric integral (⋆ = {})\n  value      {}\n  positive   {}\n  negative   {}\n",
            star.name(),
            fmt12(v.value.to_f64()),
            fmt12(v.positive.value.to_f64()),
            fmt12(v.negative.value.to_f64())
        );
        return Ok(Output { json, table, code: EXIT_OK });
    }

    let op = BinaryOpSpec::builtin(&args.op)?;
    let chain: Vec<_> = h.iter().collect();
    let r = integrate(&op, &inst, &chain, cli.tol)?;
    let mut json = to_value(&r)?;
    json["op"] = json!(op.name());
    let table = integral_table(&format!("integral (∘ = {})", op.name()), &r);
    Ok(Output { json, table, code: EXIT_OK })
}

fn bound_table(r: &BoundReport) -> String {
    let mut t = String::new();
    let verdict = match (r.holds, r.hypotheses_hold) {
        (true, _) => "holds",
        (false, true) => "VIOLATED",
        (false, false) => "fails (hypotheses not met)",
    };
    let _ = writeln!(t, "{} ({:?} bound): {verdict}", r.bound, r.direction);
    let _ = writeln!(t, "  lhs        {}", fmt12(r.lhs.to_f64()));
    let _ = writeln!(t, "  rhs        {}", fmt12(r.rhs.to_f64()));
    let _ = writeln!(t, "  slack      {}   (tolerance {:e})", fmt12(r.slack.to_f64()), r.tolerance);
    for (k, v) in &r.quantities {
        let _ = writeln!(t, "  {k:<10} {}", fmt12(v.to_f64()));
    }
    for h in &r.hypotheses {
        let _ = writeln!(t, "  [{}] {}: {}", if h.holds { "ok" } else { "no" }, h.name, h.detail);
    }
    for n in &r.notes {
        let _ = writeln!(t, "  note: {n}");
    }
    t
}

fn cmd_bound(cli: &Cli, args: &BoundArgs) -> Result<Output> {
    let ids = parse_ids(&args.id)?;
    let mut bi = InstanceFile::read(&args.instance)?.to_bound_instance()?;
    if let Some(op) = &args.op {
        bi.op = BinaryOpSpec::builtin(op)?;
    }
    if let Some(c) = &args.conj {
        bi.conj = Some(parse_conj(c)?);
    }
    if let Some(s) = &args.star {
        bi.star = MixedOpSpec::builtin(s)?;
    }
    if !bi.instance.is_discrete() {
        bi.profile_tol = bi.profile_tol.min(cli.tol);
    }
    let reports = ids.iter().map(|&id| check_bound(&bi, id, cli.tol)).collect::<Result<Vec<_>>>()?;
    let code = if reports.iter().any(|r| !r.holds && r.hypotheses_hold) {
        EXIT_VIOLATION
    } else if reports.iter().any(|r| !r.hypotheses_hold) {
        EXIT_HYPOTHESIS
    } else {
        EXIT_OK
    };
    let table = reports.iter().map(bound_table).collect::<Vec<_>>().join("\n");
    let json = if reports.len() == 1 { to_value(&reports[0])? } else { to_value(&reports)? };
    Ok(Output { json, table, code })
}

fn fuzz_table(r: &FuzzReport) -> String {
    let mut t = format!("{:<14} {:>9} {:>8} {:>10}\n", "bound", "evaluated", "skipped", "violations");
    for (b, s) in &r.stats {
        let _ = writeln!(t, "{:<14} {:>9} {:>8} {:>10}", b.name(), s.evaluated, s.skipped, s.violations);
    }
    const SHOWN: usize = 10;
    for v in r.violations.iter().take(SHOWN) {
        let _ = writeln!(
            t,
            "violation: {} trial {} lhs {} rhs {} ({} shrink steps)\n  {}",
            v.bound,
            v.trial,
            fmt12(v.lhs.to_f64()),
            fmt12(v.rhs.to_f64()),
            v.shrink_steps,
            v.instance.to_json()
        );
    }
    if r.violations.len() > SHOWN {
        let _ = writeln!(t, "... and {} more (see the JSON output)", r.violations.len() - SHOWN);
    }
    let _ = writeln!(t, "digest {}", r.digest);
    t
}

fn cmd_fuzz(cli: &Cli, args: &FuzzArgs) -> Result<Output> {
    let mut cfg = FuzzConfig {
        seed: cli.seed.unwrap_or(0),
        trials: args.trials,
        n_range: (args.n_min, args.n_max),
        tol: cli.tol,
        ..FuzzConfig::default()
    };
    if let Some(b) = &args.bounds {
        cfg.bounds = parse_ids(b)?;
    }
    if let Some(k) = &args.kind {
        cfg.kind = Some(k.parse::<MeasureKind>()?);
    }
    let report = fuzz(&cfg)?;
    let code = if report.violations.is_empty() { EXIT_OK } else { EXIT_VIOLATION };
    Ok(Output { json: to_value(&report)?, table: fuzz_table(&report), code })
}

fn cmd_verify(args: &VerifyArgs) -> Result<Output> {
    let pred: Predicate = args.predicate.parse()?;
    let file = InstanceFile::read(&args.instance)?;
    let inst = file.to_instance()?;
    let (holds, detail, witness) = match &inst {
        Instance::Discrete { measure, a, .. } => {
            let a = match &args.a {
                Some(list) => parse_subset(list)?,
                None => *a,
            };
            let scope = if pred.is_weak() { Some(a) } else { None };
            let r = check_discrete(measure, scope, pred)?;
            let witness = r.witness.map(|(b, c)| json!([b.iter().collect::<Vec<_>>(), c.iter().collect::<Vec<_>>()]));
            (r.holds, r.detail(measure), witness)
        }
        Instance::Interval { measure, .. } => {
            let holds = interval_property(measure, pred);
            (holds, format!("{measure:?} decided in closed form"), None)
        }
    };
    let json = json!({"predicate": pred, "holds": holds, "detail": detail, "witness": witness});
    let table = format!("{}: {}\n  {detail}\n", pred.name(), if holds { "true" } else { "false" });
    Ok(Output { json, table, code: EXIT_OK })
}

fn fixture_table(r: &FixtureReport) -> String {
    let mut t = format!("{} — {}\n", r.id, r.title);
    for c in &r.checks {
        let _ = writeln!(
            t,
            "  [{}] {:<40} {:>20}   expected {}   ({})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            fmt12(c.value),
            c.expected,
            c.source
        );
    }
    for n in &r.notes {
        let _ = writeln!(t, "  note: {n}");
    }
    t
}

fn cmd_reproduce(args: &ReproduceArgs) -> Result<Output> {
    let ids: Vec<&str> = if args.id == "all" { FIXTURE_IDS.to_vec() } else { vec![args.id.as_str()] };
    let reports = ids.iter().map(|id| run_fixture(id, args.q)).collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let mut table = reports.iter().map(fixture_table).collect::<Vec<_>>().join("\n");
    let _ = writeln!(table, "\n{}/{} fixtures pass", reports.iter().filter(|r| r.pass).count(), reports.len());
    let json = json!({"pass": pass, "fixtures": reports});
    Ok(Output { json, table, code: if pass { EXIT_OK } else { EXIT_VIOLATION } })
}

/// Parses the arguments, runs the command, prints its output and returns
/// the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.json).expect("JSON values serialize");
            if let Some(path) = &cli.json_out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_MALFORMED;
                }
            }
            if cli.pretty {
                print!("{}", out.table);
            } else {
                println!("{text}");
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
