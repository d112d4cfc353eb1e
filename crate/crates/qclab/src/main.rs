mod cache;
mod error;
mod table;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qclab_core::arith::is_squarefree;
use qclab_core::cm_orders::{c2_group, script_b, CandidateSource, DyadicPrime};
use qclab_core::ideal_lattices::{dyadic_ideal, capitulation_kernel_order, PrincipalMode};
use qclab_core::quadratic_core::{Direct, QuadraticData};
use qclab_core::quaternion_formulas::format_q;
use serde_json::{json, Value};

use crate::cache::CachedSource;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qclab", version, about = "Class and type numbers of superspecial abelian surfaces over prime fields")]
struct Cli {
    /// Class-number cache file.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One row per prime in the range.
    Table(TableArgs),
    /// Run every identity check over a prime range and print a JSON summary.
    Verify(RangeArgs),
    /// Capitulation of the class of [4, 1 + sqrt(d)] from Z[sqrt(d)] to O_F.
    Capitulation(RadicandArgs),
    /// CM orders over Q(sqrt(d)) that capitulate a class of O_F.
    #[command(name = "scriptB")]
    ScriptB(RadicandArgs),
    /// Inspect or delete the cache file.
    Cache(CacheArgs),
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[arg(long)]
    from: u64,
    #[arg(long)]
    to: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[command(flatten)]
    range: RangeArgs,
    /// Comma-separated column names; `p` always comes first.
    #[arg(long, default_value = "H,T")]
    columns: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct RadicandArgs {
    #[arg(long, allow_negative_numbers = true)]
    d: i64,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct CacheArgs {
    #[arg(long)]
    inspect: bool,
    #[arg(long)]
    clear: bool,
}

const DEFAULT_CACHE: &str = "qclab-cache.txt";

fn check_range(r: &RangeArgs) -> Result<(), CliError> {
    if r.from > r.to {
        return Err(CliError::Input(format!("empty range: --from {} exceeds --to {}", r.from, r.to)));
    }
    if r.jobs == 0 {
        return Err(CliError::Input("--jobs must be positive".into()));
    }
    Ok(())
}

fn check_radicand(d: i64) -> Result<(), CliError> {
    if d <= 1 || !is_squarefree(d) {
        return Err(CliError::Input(format!("d = {d} is not a squarefree integer greater than 1")));
    }
    Ok(())
}

fn print_json(v: &Value) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn run_table<S: QuadraticData + Sync>(args: &TableArgs, data: &S) -> Result<(), CliError> {
    check_range(&args.range)?;
    let columns = table::parse_columns(&args.columns)?;
    let rows = table::compute_rows(&table::primes(args.range.from, args.range.to), args.range.jobs, data)?;
    let out = io::stdout().lock();
    match args.format {
        Format::Csv => table::write_csv(out, &rows, &columns),
        Format::Json => table::write_json(out, &rows, &columns),
    }
}

fn run_verify<S: QuadraticData + Sync>(args: &RangeArgs, data: &S) -> Result<(), CliError> {
    check_range(args)?;
    let rows = table::compute_rows(&table::primes(args.from, args.to), args.jobs, data)?;
    let failures: Vec<Value> = rows
        .iter()
        .filter(|r| !r.passed())
        .map(|r| json!({ "p": r.p, "failed": r.failures().collect::<Vec<_>>() }))
        .collect();
    let checks: usize = rows.iter().map(|r| r.checks.len()).sum();
    let summary = json!({
        "from": args.from,
        "to": args.to,
        "primes": rows.len(),
        "checks": checks,
        "passed": rows.len() - failures.len(),
        "failed": failures.len(),
        "first_failures": failures.iter().take(10).collect::<Vec<_>>(),
    });
    print_json(&summary)?;
    if let Some(first) = failures.first() {
        eprintln!("identity failure at p = {}: {}", first["p"], first["failed"]);
        return Err(CliError::Identity);
    }
    Ok(())
}

fn math(d: i64) -> impl Fn(qclab_core::Error) -> CliError {
    move |e| CliError::Math(d.unsigned_abs(), e)
}

fn run_capitulation<S: QuadraticData>(d: i64, data: &S) -> Result<(), CliError> {
    check_radicand(d)?;
    if d.rem_euclid(8) != 5 {
        return Err(CliError::Input(format!("d = {d} is not 5 mod 8")));
    }
    let kernel = capitulation_kernel_order(d, data).map_err(math(d))?;
    let verdict = dyadic_ideal(d).and_then(|a| a.is_principal(PrincipalMode::Wide)).map_err(math(d))?;
    let unit = data.fundamental_unit(d).map_err(math(d))?;
    let generator = verdict.generator.map(|g| {
        let (x, y) = (format_q(&g.x), format_q(&g.y));
        Value::String(format!("{x} + {y}*sqrt({d})"))
    });
    print_json(&json!({
        "d": d,
        "ideal": format!("[4, 1 + sqrt({d})]"),
        "kernel_order": kernel,
        "principal": verdict.principal,
        "generator": generator,
        "fundamental_unit": {
            "x": unit.x.to_string(),
            "y": unit.y.to_string(),
            "denominator": unit.denom,
            "norm": unit.norm,
        },
        "unit_in_order": unit.in_z_sqrt_m(),
    }))
}

fn prime_json(p: &DyadicPrime, exponent: u32) -> Value {
    json!({ "index": p.index, "norm": p.norm, "ramification": p.ram_index, "exponent": exponent })
}

fn run_script_b<S: QuadraticData>(d: i64, data: &S) -> Result<(), CliError> {
    check_radicand(d)?;
    let c2 = c2_group(d).map_err(math(d))?;
    let entries = script_b(d, data).map_err(math(d))?;
    let fields: Vec<Value> = entries
        .iter()
        .map(|e| {
            let sources: Vec<Value> = e
                .sources
                .iter()
                .map(|s| match s {
                    CandidateSource::Rational { primes } => json!({ "kind": "ramified_product", "primes": primes }),
                    CandidateSource::TimesUnit { primes } => json!({ "kind": "times_unit", "primes": primes }),
                    CandidateSource::SqrtMinusOne => json!({ "kind": "sqrt_minus_one" }),
                })
                .collect();
            let orders: Vec<Value> = e
                .orders
                .iter()
                .map(|o| {
                    json!({
                        "conductor": o.conductor.iter().map(|(p, k)| prime_json(p, *k)).collect::<Vec<_>>(),
                        "delta": o.delta,
                        "unit_index": o.unit_index,
                        "class_number": o.h_b,
                    })
                })
                .collect();
            json!({
                "field": e.field.label(),
                "radicand": e.field.m(),
                "class_number": e.h_k,
                "sources": sources,
                "b0_conductor": e.f0.iter().map(|(p, k)| prime_json(p, *k)).collect::<Vec<_>>(),
                "orders": orders,
            })
        })
        .collect();
    print_json(&json!({ "d": d, "c2_order": c2.order, "fields": fields }))
}

fn run_cache(args: &CacheArgs, path: PathBuf) -> Result<(), CliError> {
    if args.clear {
        let removed = cache::clear(&path)?;
        return print_json(&json!({ "path": path.display().to_string(), "removed": removed }));
    }
    let exists = path.exists();
    let src = CachedSource::open(&path)?;
    let s = src.stats();
    print_json(&json!({
        "path": path.display().to_string(),
        "exists": exists,
        "header": cache::HEADER,
        "header_ok": s.header_ok,
        "class_numbers": s.class_numbers,
        "units": s.units,
        "corrupt_lines": s.corrupt,
    }))
}

fn dispatch<S: QuadraticData + Sync>(command: &Command, data: &S) -> Result<(), CliError> {
    match command {
        Command::Table(a) => run_table(a, data),
        Command::Verify(a) => run_verify(a, data),
        Command::Capitulation(a) => run_capitulation(a.d, data),
        Command::ScriptB(a) => run_script_b(a.d, data),
        Command::Cache(_) => unreachable!("handled before a data source is chosen"),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Command::Cache(args) = &cli.command {
        return run_cache(args, cli.cache.unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE)));
    }
    match &cli.cache {
        None => dispatch(&cli.command, &Direct),
        Some(path) => {
            let src = CachedSource::open(path)?;
            let outcome = dispatch(&cli.command, &src);
            src.flush()?;
            outcome
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Identity) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
