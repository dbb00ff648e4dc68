//! Command-line front end: enumerations, presentation dimensions, character
//! tables, the verification suite, and the result cache.
//!
//! Exit codes: 0 pass, 1 usage error, 2 mismatch, 3 resource limit.

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use wbasis_core::cache::Cache;
use wbasis_core::characters::{weight_multiplicities_a1, weight_multiplicities_b2};
use wbasis_core::error::Error as CoreError;
use wbasis_core::partitions::{
    enumerate_admissible, enumerate_admissible_weighted, enumerate_sl2, enumerate_sl2_partitions,
    DominantWeight, Sl2Weight, WeightedCount,
};
use wbasis_core::presentation::{
    graded_quotient_dims, ideal_generators_a1, ideal_generators_b2, ArithmeticMode, GeneratorDump,
    DEFAULT_PRIMES,
};
use wbasis_core::verify::{
    check_a1_coincidence, check_leading_terms, check_negative_controls, check_pivot_audit,
    check_relation_module, check_semi_infinite, check_sl2_monomial_bases, check_w_basis,
    CheckReport,
};

const EXIT_USAGE: i32 = 1;
const EXIT_MISMATCH: i32 = 2;
const EXIT_RESOURCE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "wbasis",
    version,
    about = "Enumeration and verification engine for combinatorial bases of B2(1)/A1(1) modules"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Cache directory (overrides the WBASIS_CACHE_DIR environment variable)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads for independent slices and checks
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgebraType {
    B2,
    A1,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Rational,
    Modular,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate admissible monomials and report counts or tables
    Enumerate(EnumerateArgs),
    /// Graded dimensions of the presented quotient
    Dims(DimsArgs),
    /// Weight multiplicities of standard modules (character oracle)
    Characters(CharactersArgs),
    /// Run verification checks
    Verify(VerifyArgs),
    /// Inspect or clear the result cache
    Cache(CacheArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long = "type", value_enum)]
    algebra: AlgebraType,
    /// k0,k1,k2 for b2 or k0,k1 for a1
    #[arg(long)]
    weight: String,
    /// Maximum degree
    #[arg(long)]
    degree: u32,
    /// Per-(weight, degree) table instead of per-degree counts
    #[arg(long)]
    weighted: bool,
    /// List the monomials themselves (JSON)
    #[arg(long)]
    list: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct DimsArgs {
    #[arg(long = "type", value_enum)]
    algebra: AlgebraType,
    /// k0,k1,k2 (b2 only)
    #[arg(long)]
    weight: Option<String>,
    /// level k of the vacuum weight (a1 only)
    #[arg(long)]
    level: Option<u32>,
    #[arg(long)]
    degree: u32,
    #[arg(long, value_enum, default_value = "rational")]
    mode: Mode,
    /// Comma-separated primes for the modular backends
    #[arg(long)]
    primes: Option<String>,
    /// Per-(weight, degree) table instead of per-degree totals
    #[arg(long)]
    refine_weight: bool,
    /// Write the generator dump JSON to a file ("-" for stdout)
    #[arg(long)]
    dump_generators: Option<String>,
    /// Matrix-size budget in cells per slice
    #[arg(long)]
    max_cells: Option<u64>,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct CharactersArgs {
    #[arg(long = "type", value_enum)]
    algebra: AlgebraType,
    #[arg(long)]
    weight: String,
    #[arg(long)]
    degree: u32,
    /// Per-degree totals instead of the full weight table
    #[arg(long)]
    totals: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckName {
    WBasis,
    A1Coincidence,
    Sl2Bases,
    SemiInfinite,
    LeadingTerms,
    RelationModule,
    PivotAudit,
    NegativeControls,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: CheckName,
    /// Level parameter for level-indexed checks
    #[arg(long)]
    level: Option<u32>,
    /// Weight parameter for weight-indexed checks (k0,k1,k2 or k0,k1)
    #[arg(long)]
    weight: Option<String>,
    /// Degree cut (defaults per check)
    #[arg(long)]
    degree: Option<u32>,
    /// Random sample count for the leading-term property
    #[arg(long, default_value_t = 10_000)]
    samples: u32,
    #[arg(long, default_value_t = 0xB2B2)]
    seed: u64,
    #[arg(long, value_enum, default_value = "rational")]
    mode: Mode,
    #[arg(long)]
    primes: Option<String>,
    /// Include wall-clock timings in the reports (off for reproducible output)
    #[arg(long)]
    timings: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct CacheArgs {
    #[command(subcommand)]
    action: CacheAction,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Print the resolved cache directory
    Path,
    /// Remove every cached entry
    Clear,
    /// Entry count
    Stats,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are successful exits; everything else is usage
            use clap::error::ErrorKind::*;
            let code = match e.kind() {
                DisplayHelp | DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code_for(e: &anyhow::Error) -> i32 {
    if let Some(core) = e.downcast_ref::<CoreError>() {
        return match core {
            CoreError::ResourceLimit { .. } | CoreError::StabilizationFailed { .. } => {
                EXIT_RESOURCE
            }
            CoreError::InvalidArgument(_) => EXIT_USAGE,
            CoreError::Internal(_) => EXIT_MISMATCH,
        };
    }
    EXIT_USAGE
}

fn run(cli: &Cli) -> anyhow::Result<i32> {
    match &cli.cmd {
        Cmd::Enumerate(args) => cmd_enumerate(args),
        Cmd::Dims(args) => cmd_dims(cli, args),
        Cmd::Characters(args) => cmd_characters(cli, args),
        Cmd::Verify(args) => cmd_verify(cli, args),
        Cmd::Cache(args) => cmd_cache(cli, args),
    }
}

fn parse_weight(s: &str, want: usize) -> anyhow::Result<Vec<u32>> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("cannot parse weight {s:?}"))?;
    if parts.len() != want {
        bail!("weight {s:?} must have {want} components");
    }
    Ok(parts)
}

fn parse_mode(mode: Mode, primes: &Option<String>) -> anyhow::Result<ArithmeticMode> {
    let primes = match primes {
        None => DEFAULT_PRIMES.to_vec(),
        Some(s) => s
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .context("cannot parse prime list")?,
    };
    let m = match mode {
        Mode::Rational => ArithmeticMode::Rational,
        Mode::Modular => ArithmeticMode::Modular(primes),
        Mode::Both => ArithmeticMode::Both(primes),
    };
    m.validate()?;
    Ok(m)
}

fn resolve_cache(cli: &Cli) -> anyhow::Result<Option<Cache>> {
    let dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("WBASIS_CACHE_DIR").map(PathBuf::from));
    match dir {
        None => Ok(None),
        Some(d) => Ok(Some(Cache::open(&d).context("cannot open cache directory")?)),
    }
}

fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(s.as_bytes());
    if !s.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
}

fn render_counts(counts: &[(i64, u64)], format: Format) -> String {
    match format {
        Format::Json => {
            let arr: Vec<serde_json::Value> = counts
                .iter()
                .map(|(d, c)| serde_json::json!({"degree": d, "count": c}))
                .collect();
            serde_json::to_string_pretty(&arr).expect("serializable")
        }
        Format::Csv => {
            let mut s = String::from("degree,count\n");
            for (d, c) in counts {
                s.push_str(&format!("{d},{c}\n"));
            }
            s
        }
        Format::Table => {
            let mut s = String::from("degree  count\n");
            for (d, c) in counts {
                s.push_str(&format!("{d:>6}  {c}\n"));
            }
            s
        }
    }
}

fn render_weighted(table: &WeightedCount, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(table).expect("serializable"),
        Format::Csv => {
            let mut s = String::from("degree,weight1x2,weight2x2,mult\n");
            for (w, d, m) in table.entries() {
                s.push_str(&format!("{d},{},{},{m}\n", w.d1, w.d2));
            }
            s
        }
        Format::Table => {
            let mut s = String::from("degree  2*weight      mult\n");
            for (w, d, m) in table.entries() {
                s.push_str(&format!("{d:>6}  [{:>3},{:>3}]    {m}\n", w.d1, w.d2));
            }
            s
        }
    }
}

fn cmd_enumerate(args: &EnumerateArgs) -> anyhow::Result<i32> {
    match args.algebra {
        AlgebraType::B2 => {
            let w = parse_weight(&args.weight, 3)?;
            let lambda = DominantWeight::new(w[0], w[1], w[2]);
            if lambda.level() == 0 {
                bail!("level must be >= 1");
            }
            if args.list {
                let mut all = Vec::new();
                for n in 0..=args.degree {
                    all.extend(enumerate_admissible(&lambda, n));
                }
                emit(&serde_json::to_string_pretty(&all)?);
            } else if args.weighted {
                let mut table = WeightedCount::new();
                for n in 0..=args.degree {
                    for (w, d, m) in enumerate_admissible_weighted(&lambda, n).entries() {
                        table.add(w, d, m);
                    }
                }
                emit(&render_weighted(&table, args.format));
            } else {
                let counts: Vec<(i64, u64)> = (0..=args.degree)
                    .map(|n| (n as i64, enumerate_admissible(&lambda, n).len() as u64))
                    .collect();
                emit(&render_counts(&counts, args.format));
            }
        }
        AlgebraType::A1 => {
            let w = parse_weight(&args.weight, 2)?;
            let lambda = Sl2Weight::new(w[0], w[1]);
            if lambda.level() == 0 {
                bail!("level must be >= 1");
            }
            if args.list {
                let mut all = Vec::new();
                for n in 0..=args.degree {
                    all.extend(enumerate_sl2_partitions(&lambda, n));
                }
                emit(&serde_json::to_string_pretty(&all)?);
            } else if args.weighted {
                let mut table = WeightedCount::new();
                for n in 0..=args.degree {
                    for (w, d, m) in enumerate_sl2(&lambda, n).entries() {
                        table.add(w, d, m);
                    }
                }
                emit(&render_weighted(&table, args.format));
            } else {
                let counts: Vec<(i64, u64)> = (0..=args.degree)
                    .map(|n| (n as i64, enumerate_sl2_partitions(&lambda, n).len() as u64))
                    .collect();
                emit(&render_counts(&counts, args.format));
            }
        }
    }
    Ok(0)
}

fn mode_cache_tag(mode: &ArithmeticMode) -> String {
    match mode {
        ArithmeticMode::Rational => "rational".into(),
        ArithmeticMode::Modular(p) => format!("modular:{p:?}"),
        ArithmeticMode::Both(p) => format!("both:{p:?}"),
    }
}

fn cmd_dims(cli: &Cli, args: &DimsArgs) -> anyhow::Result<i32> {
    let mode = parse_mode(args.mode, &args.primes)?;
    let (ideal, weight_tag) = match args.algebra {
        AlgebraType::B2 => {
            let w = parse_weight(
                args.weight
                    .as_deref()
                    .ok_or_else(|| anyhow!("--weight is required for --type b2"))?,
                3,
            )?;
            let lambda = DominantWeight::new(w[0], w[1], w[2]);
            (ideal_generators_b2(&lambda, args.degree)?, format!("b2:{lambda}"))
        }
        AlgebraType::A1 => {
            let k = args
                .level
                .ok_or_else(|| anyhow!("--level is required for --type a1"))?;
            (ideal_generators_a1(k, args.degree)?, format!("a1:{k}"))
        }
    };

    if let Some(target) = &args.dump_generators {
        let dump = GeneratorDump { generators: &ideal.generators, alphabet: ideal.ring.alphabet };
        let json = serde_json::to_string_pretty(&dump)?;
        if target == "-" {
            emit(&json);
        } else {
            std::fs::write(target, json).with_context(|| format!("writing {target}"))?;
        }
    }

    let cache = resolve_cache(cli)?;
    let key = Cache::key(&[
        "dims",
        &weight_tag,
        &args.degree.to_string(),
        &mode_cache_tag(&mode),
        &args.refine_weight.to_string(),
        &(args.format as u8).to_string(),
        &ideal.content_hash(),
    ]);
    if let Some(cache) = &cache {
        if let Some(hit) = cache.get(&key) {
            emit(&hit);
            return Ok(0);
        }
    }

    let dims = match graded_quotient_dims(&ideal, args.degree, &mode, args.max_cells) {
        Ok(d) => d,
        Err(CoreError::ResourceLimit { detail, partial }) => {
            // surface whatever was finished before the budget ran out
            if !partial.is_empty() {
                if args.refine_weight {
                    emit(&render_weighted(&partial, args.format));
                } else {
                    let counts: Vec<(i64, u64)> = partial.totals().into_iter().collect();
                    emit(&render_counts(&counts, args.format));
                }
            }
            eprintln!("error: resource limit exceeded: {detail}");
            return Ok(EXIT_RESOURCE);
        }
        Err(e) => return Err(e.into()),
    };
    let rendered = if args.refine_weight {
        render_weighted(&dims.per_weight, args.format)
    } else {
        let counts: Vec<(i64, u64)> = dims.totals().into_iter().collect();
        render_counts(&counts, args.format)
    };
    if let Some(cache) = &cache {
        let _ = cache.put(&key, &rendered);
    }
    emit(&rendered);
    Ok(0)
}

fn cmd_characters(cli: &Cli, args: &CharactersArgs) -> anyhow::Result<i32> {
    let (table, tag) = match args.algebra {
        AlgebraType::B2 => {
            let w = parse_weight(&args.weight, 3)?;
            let lambda = DominantWeight::new(w[0], w[1], w[2]);
            (
                weight_multiplicities_b2(&lambda, args.degree as usize)?,
                format!("b2:{lambda}"),
            )
        }
        AlgebraType::A1 => {
            let w = parse_weight(&args.weight, 2)?;
            let lambda = Sl2Weight::new(w[0], w[1]);
            (
                weight_multiplicities_a1(&lambda, args.degree as usize)?,
                format!("a1:{lambda}"),
            )
        }
    };
    let cache = resolve_cache(cli)?;
    let key = Cache::key(&[
        "characters",
        &tag,
        &args.degree.to_string(),
        &args.totals.to_string(),
        &(args.format as u8).to_string(),
    ]);
    if let Some(cache) = &cache {
        if let Some(hit) = cache.get(&key) {
            emit(&hit);
            return Ok(0);
        }
    }
    let rendered = if args.totals {
        let mut counts: Vec<(i64, u64)> = (0..=args.degree as i64).map(|d| (d, 0)).collect();
        for (d, m) in table.totals() {
            counts[d as usize].1 = m;
        }
        render_counts(&counts, args.format)
    } else {
        render_weighted(&table, args.format)
    };
    if let Some(cache) = &cache {
        let _ = cache.put(&key, &rendered);
    }
    emit(&rendered);
    Ok(0)
}

fn strip_timing(mut r: CheckReport, keep: bool) -> CheckReport {
    if !keep {
        r.timing_ms = None;
    }
    r
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> anyhow::Result<i32> {
    let mode = parse_mode(args.mode, &args.primes)?;
    // reports are byte-stable without timings, so they can be cached whole
    let cache = if args.timings { None } else { resolve_cache(cli)? };
    let cache_key = Cache::key(&[
        "verify",
        &(args.check as u8).to_string(),
        &format!("{:?}", args.level),
        &format!("{:?}", args.weight),
        &format!("{:?}", args.degree),
        &args.samples.to_string(),
        &args.seed.to_string(),
        &mode_cache_tag(&mode),
        &(args.format as u8).to_string(),
    ]);
    if let Some(cache) = &cache {
        if let Some(hit) = cache.get(&cache_key) {
            let envelope: serde_json::Value = serde_json::from_str(&hit)?;
            if let (Some(output), Some(code)) =
                (envelope["output"].as_str(), envelope["exit"].as_i64())
            {
                emit(output);
                return Ok(code as i32);
            }
        }
    }
    let b2_weight = |fallback: DominantWeight| -> anyhow::Result<DominantWeight> {
        match &args.weight {
            None => Ok(fallback),
            Some(s) => {
                let w = parse_weight(s, 3)?;
                Ok(DominantWeight::new(w[0], w[1], w[2]))
            }
        }
    };
    let level = args.level.unwrap_or(1);
    let mut reports: Vec<CheckReport> = Vec::new();
    match args.check {
        CheckName::WBasis => {
            let lambda = b2_weight(DominantWeight::new(level, 0, 0))?;
            reports.push(check_w_basis(&lambda, args.degree.unwrap_or(6), &mode, true));
        }
        CheckName::A1Coincidence => {
            reports.push(check_a1_coincidence(level, args.degree.unwrap_or(6), &mode));
        }
        CheckName::Sl2Bases => {
            let (k0, k1) = match &args.weight {
                None => (level, 0),
                Some(s) => {
                    let w = parse_weight(s, 2)?;
                    (w[0], w[1])
                }
            };
            reports.push(check_sl2_monomial_bases(
                &Sl2Weight::new(k0, k1),
                args.degree.unwrap_or(6),
            ));
        }
        CheckName::SemiInfinite => {
            let lambda = b2_weight(DominantWeight::new(level, 0, 0))?;
            reports.push(check_semi_infinite(&lambda, args.degree.unwrap_or(4)));
        }
        CheckName::LeadingTerms => {
            reports.push(check_leading_terms(level, args.samples, args.seed, 20));
        }
        CheckName::RelationModule => {
            reports.push(check_relation_module(level, args.degree.unwrap_or(6)));
        }
        CheckName::PivotAudit => {
            let lambda = b2_weight(DominantWeight::new(level, 0, 0))?;
            reports.push(check_pivot_audit(&lambda, args.degree.unwrap_or(5)));
        }
        CheckName::NegativeControls => {
            let lambda = b2_weight(DominantWeight::new(level, 0, 0))?;
            reports.push(check_negative_controls(&lambda, args.degree.unwrap_or(5)));
        }
        CheckName::All => {
            reports.extend(standard_suite(args, &mode));
        }
    }
    let reports: Vec<CheckReport> =
        reports.into_iter().map(|r| strip_timing(r, args.timings)).collect();

    let mut output = String::new();
    match args.format {
        Format::Json => output.push_str(&serde_json::to_string_pretty(&reports)?),
        Format::Table => {
            for r in &reports {
                output.push_str(&r.render_table());
            }
        }
        Format::Csv => {
            for r in &reports {
                output.push_str(&r.summary_line());
                output.push('\n');
            }
        }
    }
    let code = if reports.iter().any(|r| r.failed()) {
        EXIT_MISMATCH
    } else if reports.iter().any(|r| r.resource_limited()) {
        EXIT_RESOURCE
    } else {
        0
    };
    if let Some(cache) = &cache {
        let envelope = serde_json::json!({"exit": code, "output": output});
        let _ = cache.put(&cache_key, &envelope.to_string());
    }
    emit(&output);
    Ok(code)
}

/// The desk-scale default suite: every check across the level 1 and 2
/// envelope. Checks are independent jobs; they run on the worker pool and
/// the report order is fixed regardless of completion order.
fn standard_suite(args: &VerifyArgs, mode: &ArithmeticMode) -> Vec<CheckReport> {
    use rayon::prelude::*;
    let n = args.degree.unwrap_or(6);
    let samples = args.samples;
    let seed = args.seed;
    enum Job {
        W(DominantWeight, u32, ArithmeticMode),
        A1(u32, u32, ArithmeticMode),
        Sl2(Sl2Weight, u32),
        Semi(DominantWeight, u32),
        Leading(u32),
        Relation(u32),
        Pivot(DominantWeight, u32),
        Controls(DominantWeight, u32),
    }
    let mut jobs: Vec<Job> = Vec::new();
    for lambda in DominantWeight::all_of_level(1) {
        jobs.push(Job::W(lambda, n, mode.clone()));
    }
    for lambda in DominantWeight::all_of_level(2) {
        jobs.push(Job::W(lambda, n.min(5), ArithmeticMode::modular_default()));
    }
    for k in 1..=2 {
        jobs.push(Job::A1(k, n, mode.clone()));
    }
    for (k0, k1) in [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
        jobs.push(Job::Sl2(Sl2Weight::new(k0, k1), n));
    }
    for lambda in DominantWeight::all_of_level(1) {
        jobs.push(Job::Semi(lambda, n.min(4)));
    }
    for k in 1..=2 {
        jobs.push(Job::Leading(k));
        jobs.push(Job::Relation(k));
    }
    jobs.push(Job::Pivot(DominantWeight::new(1, 0, 0), n.min(5)));
    jobs.push(Job::Controls(DominantWeight::new(1, 0, 0), n.min(5)));

    jobs.into_par_iter()
        .map(|job| match job {
            Job::W(l, n, m) => check_w_basis(&l, n, &m, true),
            Job::A1(k, n, m) => check_a1_coincidence(k, n, &m),
            Job::Sl2(l, n) => check_sl2_monomial_bases(&l, n),
            Job::Semi(l, n) => check_semi_infinite(&l, n),
            Job::Leading(k) => check_leading_terms(k, samples, seed + k as u64, 20),
            Job::Relation(k) => check_relation_module(k, 6),
            Job::Pivot(l, n) => check_pivot_audit(&l, n),
            Job::Controls(l, n) => check_negative_controls(&l, n),
        })
        .collect()
}

fn cmd_cache(cli: &Cli, args: &CacheArgs) -> anyhow::Result<i32> {
    let cache = resolve_cache(cli)?
        .ok_or_else(|| anyhow!("no cache directory configured (--cache-dir or WBASIS_CACHE_DIR)"))?;
    match args.action {
        CacheAction::Path => emit(&cache.dir().display().to_string()),
        CacheAction::Clear => {
            let removed = cache.clear()?;
            emit(&format!("removed {removed} entries"));
        }
        CacheAction::Stats => emit(&format!("{} entries", cache.len())),
    }
    Ok(0)
}
