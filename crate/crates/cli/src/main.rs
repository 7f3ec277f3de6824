use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use charmean::{emit_report, parse_identities, run_sweep, OutputFormat, PrimeRange, SweepConfig, SweepError};
use charmean_core::combinatorics;
use charmean_core::identities::{comparisons_for, verify, DEFAULT_MAX_CUBIC_PRIME};
use charmean_core::{IdentityId, PrimeContext, Status, Tolerance, Workspace};
use clap::{Args, Parser, Subcommand};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "charmean", version, about = "Verify power-mean identities of character sums mod p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep a prime range and report every selected identity.
    Verify(VerifyArgs),
    /// Pretty-print one identity at one prime with intermediate quantities.
    Show(ShowArgs),
    /// Time the selected identities; no cache, no report file.
    Bench(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Inclusive prime range, `A..B`.
    #[arg(long, default_value = "5..97")]
    primes: String,
    /// `all` or a comma-separated list such as `TH1,TH2`.
    #[arg(long, default_value = "all")]
    identities: String,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Relative tolerance factor; the absolute floor stays at 1e-6.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Largest prime at which the O(p^3) exact integer routes run.
    #[arg(long, default_value_t = DEFAULT_MAX_CUBIC_PRIME)]
    max_cubic_prime: u32,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Result cache directory.
    #[arg(long, env = "CHARMEAN_CACHE")]
    cache: Option<PathBuf>,
    /// Also re-run the (n, k)-independent identities at 3 random coprime pairs.
    #[arg(long)]
    vary_nk: bool,
    /// Seed for the vary-nk pairs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ShowArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long)]
    identity: IdentityId,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// How many individual checks to list.
    #[arg(long, default_value_t = 12)]
    limit: usize,
}

impl CommonArgs {
    fn config(&self) -> Result<SweepConfig, SweepError> {
        let mut tolerance = Tolerance::default();
        if let Some(rel) = self.tolerance {
            tolerance.rel = rel;
        }
        Ok(SweepConfig {
            primes: self.primes.parse::<PrimeRange>()?,
            identities: parse_identities(&self.identities)?,
            tolerance,
            jobs: self.jobs,
            n: self.n,
            k: self.k,
            max_cubic_prime: self.max_cubic_prime,
            ..SweepConfig::default()
        })
    }
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, SweepError> {
    let config = SweepConfig {
        format: args.format,
        out: args.out,
        cache_dir: args.cache,
        vary_nk: args.vary_nk,
        seed: args.seed,
        ..args.common.config()?
    };
    let report = run_sweep(&config)?;
    emit_report(&report, config.format, config.out.as_deref())?;
    let s = &report.summary;
    eprintln!(
        "{} records: {} pass, {} fail, {} skipped, {} cached ({:.1} ms)",
        s.total, s.pass, s.fail, s.skipped, s.cache_hits, s.elapsed_ms
    );
    for r in report.records.iter().filter(|r| r.status.is_fail()) {
        eprintln!("FAIL {} p={} n={} k={}: {}", r.identity, r.prime, r.n, r.k, r.detail);
    }
    Ok(if report.any_failed() { ExitCode::from(EXIT_FAIL) } else { ExitCode::SUCCESS })
}

fn run_bench(args: CommonArgs) -> Result<ExitCode, SweepError> {
    let config = args.config()?;
    let report = run_sweep(&config)?;
    let mut per_id: BTreeMap<IdentityId, (f64, usize)> = BTreeMap::new();
    for r in &report.records {
        let e = per_id.entry(r.identity).or_default();
        e.0 += r.elapsed_ms;
        e.1 += 1;
    }
    println!("{:<14} {:>8} {:>12}", "identity", "records", "total ms");
    for (id, (ms, count)) in per_id {
        println!("{:<14} {:>8} {:>12.2}", id.as_str(), count, ms);
    }
    println!(
        "wall {:.2} ms over {} primes with {} job(s)",
        report.summary.elapsed_ms,
        config.primes.primes().len(),
        config.jobs
    );
    Ok(if report.any_failed() { ExitCode::from(EXIT_FAIL) } else { ExitCode::SUCCESS })
}

fn run_show(args: ShowArgs) -> anyhow::Result<ExitCode> {
    let ctx = PrimeContext::new(args.prime)?;
    let p = ctx.p();
    let ws = Workspace::new(ctx.clone(), args.n, args.k)?;
    println!("p = {p}, primitive root g = {}, (n, k) = ({}, {})", ctx.primitive_root(), ws.n(), ws.k());

    let record = verify(&ws, args.identity);
    println!(
        "{} -> {} (lhs {}, rhs {}, abs_err {:e}, {:.2} ms)",
        record.identity, record.status, record.lhs, record.rhs, record.abs_err, record.elapsed_ms
    );
    println!("  {}", record.detail);
    if !matches!(record.status, Status::Skipped(_)) {
        let comparisons = comparisons_for(&ws, args.identity);
        for c in comparisons.iter().take(args.limit) {
            println!(
                "  {:<48} lhs {:>22.12} {:+.3e}i   rhs {:>22.12} {:+.3e}i",
                c.label, c.lhs.re, c.lhs.im, c.rhs.re, c.rhs.im
            );
        }
        if comparisons.len() > args.limit {
            println!("  ... {} more", comparisons.len() - args.limit);
        }
    }

    println!();
    println!("T(p)  direct      = {}", combinatorics::t_direct(&ctx));
    println!("T(p)  Delta form  = {}", combinatorics::t_via_delta(&ctx));
    println!("T(p)  |U| - |U0|  = {}", combinatorics::t_via_sets(&ctx));
    println!("T_L(p)            = {}", combinatorics::t_l(&ctx));
    let census = combinatorics::s_census(&ctx);
    println!("census |S(N)|:");
    println!("  {:>6} {:>6} {:>6} {:>8}", "N", "(N|p)", "|S(N)|", "class");
    for n in ctx.units() {
        println!(
            "  {:>6} {:>6} {:>6} {:>8}",
            n,
            ctx.legendre(n as i64),
            census[n as usize],
            combinatorics::s_class_count(&ctx, n)
        );
    }
    Ok(if record.status.is_fail() { ExitCode::from(EXIT_FAIL) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => run_verify(args).map_err(anyhow::Error::from),
        Command::Bench(args) => run_bench(args).map_err(anyhow::Error::from),
        Command::Show(args) => run_show(args).context("show"),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
