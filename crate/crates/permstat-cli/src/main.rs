//! Command-line surface over the permstat library: statistic evaluation,
//! bijection application, set enumeration, distribution polynomials,
//! equidistribution checks, and the discovery searches.
//!
//! Exit codes: 0 success (and true verdicts), 1 usage error, 2 domain error
//! (membership or enumeration guard), 3 an equidistribution check returned
//! false. Payload goes to stdout, diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use permstat::bijections::{BijectionError, BijectionExpr, ConsistentPair, Value};
use permstat::discovery::{self, DiscoveryError, DiscoveryReport, Verdict};
use permstat::dist;
use permstat::perm::Permutation;
use permstat::qpoly::QPolynomial;
use permstat::sets::{Guard, SetError, SetFamily, SetSpec};
use permstat::stats::{self, StatError, StatValue};
use serde_json::json;

const GUARD_ENV_VAR: &str = "PERMSTAT_MAX_MEMBERS";

#[derive(Parser)]
#[command(
    name = "permstat",
    version,
    about = "Permutation statistics, pattern-avoiding sets, and equidistribution bijections",
    after_help = "Set specs: all | av:<p1>[,<p2>..] | avp:231 (patterns in dash grammar, e.g. av:2-3-1).\n\
                  Bijections: reverse, complement, invert, theta1, theta2, theta_prime, theta, \
                  big_theta, psi, their _inv forms, and compositions joined with '∘' or '.'.\n\
                  Permutations: digit string up to length 9 (4235167), comma-separated beyond."
)]
struct Cli {
    /// Output format for the payload.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Enumeration guard override in predicted members (also read from
    /// PERMSTAT_MAX_MEMBERS).
    #[arg(long, global = true)]
    max_members: Option<u64>,
    /// Directory caching enumerated-set counts as JSON.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a statistic on one permutation.
    Stat {
        #[arg(long)]
        stat: String,
        #[arg(long)]
        perm: String,
    },
    /// Apply a bijection expression to a permutation (or consistent pair).
    Map {
        #[arg(long)]
        bijection: String,
        #[arg(long)]
        perm: Option<String>,
        /// Consistent pair input as c1,c2,..:m1,m2,.. (for theta2 pipelines).
        #[arg(long, conflicts_with = "perm")]
        pair: Option<String>,
    },
    /// List or count the members of a permutation set.
    Enumerate {
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: usize,
        /// Print only the member count.
        #[arg(long)]
        count: bool,
    },
    /// Distribution polynomial of a statistic over a set.
    Dist {
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        stat: String,
    },
    /// Compare two statistic distributions for every length in a range.
    Equidist {
        /// Left side as <spec>:<stat>, e.g. av:2-3-1:maj.
        #[arg(long)]
        left: String,
        /// Right side as <spec>:<stat>.
        #[arg(long)]
        right: String,
        /// Length range a..b (inclusive) or a single length.
        #[arg(long)]
        n: String,
    },
    /// Discovery searches over a statistic pool.
    Discover {
        #[command(subcommand)]
        search: DiscoverCommand,
    },
}

#[derive(Subcommand)]
enum DiscoverCommand {
    /// Statistics preserved pointwise by a bijection on a set family.
    Invariants {
        #[arg(long)]
        bijection: String,
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: String,
        /// Comma-separated statistic names, or "default".
        #[arg(long, default_value = "default")]
        pool: String,
    },
    /// Statistics distributing evenly across matching partition blocks.
    Refine {
        /// Left side as <spec>:<stat>.
        #[arg(long)]
        left: String,
        /// Right side as <spec>:<stat>.
        #[arg(long)]
        right: String,
        #[arg(long)]
        n: String,
        #[arg(long, default_value = "default")]
        pool: String,
    },
}

/// Failures mapped to exit codes; refutation results are not errors.
enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(msg) | CliError::Domain(msg) => msg,
        }
    }
}

fn usage(err: impl ToString) -> CliError {
    CliError::Usage(err.to_string())
}

impl From<SetError> for CliError {
    fn from(err: SetError) -> Self {
        match err {
            SetError::Parse { .. } | SetError::NotClassical { .. } | SetError::ZeroLength => {
                CliError::Usage(err.to_string())
            }
            SetError::GuardExceeded { .. } | SetError::LengthMismatch { .. } => {
                CliError::Domain(err.to_string())
            }
        }
    }
}

impl From<StatError> for CliError {
    fn from(err: StatError) -> Self {
        match err {
            StatError::OutsideDomain { .. } => CliError::Domain(err.to_string()),
            _ => CliError::Usage(err.to_string()),
        }
    }
}

impl From<BijectionError> for CliError {
    fn from(err: BijectionError) -> Self {
        match err {
            BijectionError::PatternOccurrence { .. } | BijectionError::FirstEntryNotMax { .. } => {
                CliError::Domain(err.to_string())
            }
            _ => CliError::Usage(err.to_string()),
        }
    }
}

impl From<dist::DistError> for CliError {
    fn from(err: dist::DistError) -> Self {
        match err {
            dist::DistError::Set(e) => e.into(),
            dist::DistError::Stat(e) => e.into(),
        }
    }
}

impl From<DiscoveryError> for CliError {
    fn from(err: DiscoveryError) -> Self {
        match err {
            DiscoveryError::Set(e) => e.into(),
            DiscoveryError::Stat(e) => e.into(),
            DiscoveryError::Bijection(e) => e.into(),
            DiscoveryError::DomainMismatch { .. } => CliError::Domain(err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let guard = resolve_guard(cli.max_members)?;
    let format = cli.format;
    match cli.command {
        Command::Stat { stat, perm } => cmd_stat(format, &stat, &perm),
        Command::Map {
            bijection,
            perm,
            pair,
        } => cmd_map(format, &bijection, perm.as_deref(), pair.as_deref()),
        Command::Enumerate { set, n, count } => {
            cmd_enumerate(format, &set, n, count, &guard, cli.cache_dir.as_deref())
        }
        Command::Dist { set, n, stat } => cmd_dist(format, &set, n, &stat, &guard),
        Command::Equidist { left, right, n } => cmd_equidist(format, &left, &right, &n, &guard),
        Command::Discover { search } => match search {
            DiscoverCommand::Invariants {
                bijection,
                set,
                n,
                pool,
            } => cmd_invariants(format, &bijection, &set, &n, &pool, &guard),
            DiscoverCommand::Refine {
                left,
                right,
                n,
                pool,
            } => cmd_refine(format, &left, &right, &n, &pool, &guard),
        },
    }
}

fn resolve_guard(flag: Option<u64>) -> Result<Guard, CliError> {
    if let Some(max) = flag {
        return Ok(Guard::with_max(max));
    }
    match std::env::var(GUARD_ENV_VAR) {
        Ok(text) => {
            let max = text
                .parse::<u64>()
                .map_err(|_| usage(format!("{GUARD_ENV_VAR} must be an integer, got {text:?}")))?;
            Ok(Guard::with_max(max))
        }
        Err(_) => Ok(Guard::DEFAULT),
    }
}

fn parse_perm(text: &str) -> Result<Permutation, CliError> {
    text.parse().map_err(usage)
}

/// Splits `<spec>:<stat>` at the last colon.
fn parse_side(text: &str) -> Result<(SetFamily, String), CliError> {
    let (family_text, stat) = text
        .rsplit_once(':')
        .ok_or_else(|| usage(format!("expected <spec>:<stat>, got {text:?}")))?;
    let family = SetFamily::parse(family_text)?;
    Ok((family, stat.to_string()))
}

/// Parses `a..b` (inclusive) or a single length.
fn parse_range(text: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || usage(format!("expected a length or a..b range, got {text:?}"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.parse().map_err(|_| bad())?;
        let hi: usize = hi.strip_prefix('=').unwrap_or(hi).parse().map_err(|_| bad())?;
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        Ok(lo..=hi)
    } else {
        let k: usize = text.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Ok(k..=k)
    }
}

fn parse_pool(text: &str) -> Result<Vec<String>, CliError> {
    if text == "default" {
        return Ok(stats::default_pool().iter().map(|s| s.to_string()).collect());
    }
    Ok(text.split(',').map(|s| s.trim().to_string()).collect())
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn emit_json(command: &str, inputs: serde_json::Value, result: serde_json::Value) {
    let envelope = json!({ "command": command, "inputs": inputs, "result": result });
    println!("{envelope}");
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_stat(format: Format, stat: &str, perm: &str) -> Result<u8, CliError> {
    let pi = parse_perm(perm)?;
    let value = stats::eval_stat(stat, &pi)?;
    match format {
        Format::Plain => println!("{value}"),
        Format::Json => {
            let result = match &value {
                StatValue::Count(c) => json!(c),
                StatValue::Positions(ps) => json!(ps),
                StatValue::Values(vs) => json!(vs),
            };
            emit_json("stat", json!({ "perm": pi, "stat": stat }), result);
        }
        Format::Csv => {
            println!("stat,value");
            println!("{},{}", csv_field(stat), csv_field(&value.to_string()));
        }
    }
    Ok(0)
}

fn cmd_map(
    format: Format,
    bijection: &str,
    perm: Option<&str>,
    pair: Option<&str>,
) -> Result<u8, CliError> {
    let expr = BijectionExpr::parse(bijection)?;
    let (input_text, input) = match (perm, pair) {
        (Some(text), None) => (text.to_string(), Value::Perm(parse_perm(text)?)),
        (None, Some(text)) => {
            let parsed: ConsistentPair = text.parse().map_err(usage)?;
            (text.to_string(), Value::Pair(parsed))
        }
        _ => return Err(usage("map needs exactly one of --perm or --pair")),
    };
    let output = expr.apply(input)?;
    match format {
        Format::Plain => println!("{output}"),
        Format::Json => {
            let result = match &output {
                Value::Perm(pi) => json!(pi),
                Value::Pair(pair) => json!(pair),
            };
            emit_json(
                "map",
                json!({ "bijection": bijection, "input": input_text }),
                result,
            );
        }
        Format::Csv => {
            println!("input,output");
            println!(
                "{},{}",
                csv_field(&input_text),
                csv_field(&output.to_string())
            );
        }
    }
    Ok(0)
}

fn cmd_enumerate(
    format: Format,
    set: &str,
    n: usize,
    count_only: bool,
    guard: &Guard,
    cache_dir: Option<&Path>,
) -> Result<u8, CliError> {
    let family = SetFamily::parse(set)?;
    let spec = family.spec(n)?;
    if count_only {
        let count = counted(&spec, guard, cache_dir)?;
        match format {
            Format::Plain => println!("{count}"),
            Format::Json => emit_json(
                "enumerate",
                json!({ "count": true, "n": n, "set": family.to_string() }),
                json!(count),
            ),
            Format::Csv => {
                println!("count");
                println!("{count}");
            }
        }
        return Ok(0);
    }
    let members: Vec<Permutation> = spec.stream_with_guard(guard)?.collect();
    match format {
        Format::Plain => {
            for pi in &members {
                println!("{pi}");
            }
        }
        Format::Json => emit_json(
            "enumerate",
            json!({ "count": false, "n": n, "set": family.to_string() }),
            json!(members),
        ),
        Format::Csv => {
            println!("permutation");
            for pi in &members {
                println!("{}", csv_field(&pi.to_string()));
            }
        }
    }
    Ok(0)
}

/// Member count with an optional JSON cache keyed by the canonical family
/// string and length.
fn counted(spec: &SetSpec, guard: &Guard, cache_dir: Option<&Path>) -> Result<u64, CliError> {
    let family_text = spec.family().to_string();
    let cache_path = cache_dir.map(|dir| {
        let sanitized = family_text.replace(':', "_").replace(',', "+");
        dir.join(format!("{sanitized}.n{}.json", spec.n()))
    });
    if let Some(path) = &cache_path {
        if let Ok(text) = fs::read_to_string(path) {
            if let Ok(entry) = serde_json::from_str::<serde_json::Value>(&text) {
                if entry["set"] == json!(family_text) && entry["n"] == json!(spec.n()) {
                    if let Some(count) = entry["count"].as_u64() {
                        return Ok(count);
                    }
                }
            }
        }
    }
    let count = spec.count_members(guard)?;
    if let Some(path) = &cache_path {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::Domain(format!("cannot create cache dir: {e}")))?;
        }
        let entry = json!({ "count": count, "n": spec.n(), "set": family_text });
        fs::write(path, entry.to_string())
            .map_err(|e| CliError::Domain(format!("cannot write cache file: {e}")))?;
    }
    Ok(count)
}

fn cmd_dist(format: Format, set: &str, n: usize, stat: &str, guard: &Guard) -> Result<u8, CliError> {
    let family = SetFamily::parse(set)?;
    let spec = family.spec(n)?;
    let poly = dist::distribution_with_guard(&spec, stat, guard)?;
    match format {
        Format::Plain => println!("{poly}"),
        Format::Json => emit_json(
            "dist",
            json!({ "n": n, "set": family.to_string(), "stat": stat }),
            serde_json::to_value(&poly).expect("polynomial serializes"),
        ),
        Format::Csv => {
            println!("exponent,coefficient");
            for (exp, c) in poly.coeffs().iter().enumerate() {
                println!("{exp},{c}");
            }
        }
    }
    Ok(0)
}

fn cmd_equidist(
    format: Format,
    left: &str,
    right: &str,
    range: &str,
    guard: &Guard,
) -> Result<u8, CliError> {
    let (left_family, left_stat) = parse_side(left)?;
    let (right_family, right_stat) = parse_side(right)?;
    let range = parse_range(range)?;
    let mut verdicts: Vec<(usize, bool, QPolynomial, QPolynomial)> = Vec::new();
    for n in range {
        let lhs = dist::distribution_with_guard(&left_family.spec(n)?, &left_stat, guard)?;
        let rhs = dist::distribution_with_guard(&right_family.spec(n)?, &right_stat, guard)?;
        let equal = lhs == rhs;
        verdicts.push((n, equal, lhs, rhs));
    }
    let all_equal = verdicts.iter().all(|(_, equal, _, _)| *equal);
    match format {
        Format::Plain => {
            for (n, equal, _, _) in &verdicts {
                println!("n={n} {equal}");
            }
        }
        Format::Json => {
            let result: serde_json::Value = verdicts
                .iter()
                .map(|(n, equal, lhs, rhs)| {
                    json!({ "equal": equal, "left": lhs, "n": n, "right": rhs })
                })
                .collect();
            emit_json(
                "equidist",
                json!({ "left": left, "right": right }),
                result,
            );
        }
        Format::Csv => {
            println!("n,equal");
            for (n, equal, _, _) in &verdicts {
                println!("{n},{equal}");
            }
        }
    }
    Ok(if all_equal { 0 } else { 3 })
}

fn cmd_invariants(
    format: Format,
    bijection: &str,
    set: &str,
    range: &str,
    pool: &str,
    guard: &Guard,
) -> Result<u8, CliError> {
    let expr = BijectionExpr::parse(bijection)?;
    let family = SetFamily::parse(set)?;
    let range = parse_range(range)?;
    let pool = parse_pool(pool)?;
    let pool_refs: Vec<&str> = pool.iter().map(String::as_str).collect();
    let reports = discovery::bijection_invariants(&expr, &family, &pool_refs, range, guard)?;
    render_reports(
        format,
        "discover.invariants",
        json!({ "bijection": bijection, "set": family.to_string() }),
        &reports,
        ("preserved", "refuted"),
    );
    Ok(0)
}

fn cmd_refine(
    format: Format,
    left: &str,
    right: &str,
    range: &str,
    pool: &str,
    guard: &Guard,
) -> Result<u8, CliError> {
    let (left_family, left_stat) = parse_side(left)?;
    let (right_family, right_stat) = parse_side(right)?;
    let range = parse_range(range)?;
    let pool = parse_pool(pool)?;
    let pool_refs: Vec<&str> = pool.iter().map(String::as_str).collect();
    let reports = discovery::refine_partitions(
        (&left_family, &left_stat),
        (&right_family, &right_stat),
        &pool_refs,
        range,
        guard,
    )?;
    render_reports(
        format,
        "discover.refine",
        json!({ "left": left, "right": right }),
        &reports,
        ("compatible", "refuted"),
    );
    Ok(0)
}

fn render_reports(
    format: Format,
    command: &str,
    inputs: serde_json::Value,
    reports: &[DiscoveryReport],
    (ok_word, bad_word): (&str, &str),
) {
    match format {
        Format::Plain => {
            for report in reports {
                if report.compatible {
                    println!("{ok_word} {}", report.candidate);
                } else {
                    let detail = report
                        .first_refutation()
                        .map(|nv| match &nv.verdict {
                            Verdict::RefutedPreservation {
                                witness,
                                before,
                                after,
                            } => format!(" (witness {witness}: {before} -> {after}, n={})", nv.n),
                            Verdict::RefutedPartition { label, .. } => {
                                format!(" (label {label} at n={})", nv.n)
                            }
                            Verdict::Compatible => String::new(),
                        })
                        .unwrap_or_default();
                    println!("{bad_word} {}{detail}", report.candidate);
                }
            }
        }
        Format::Json => emit_json(
            command,
            inputs,
            serde_json::to_value(reports).expect("reports serialize"),
        ),
        Format::Csv => {
            println!("candidate,verdict");
            for report in reports {
                let verdict = if report.compatible { ok_word } else { bad_word };
                println!("{},{verdict}", csv_field(&report.candidate));
            }
        }
    }
}
