mod cache;
mod output;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use latinpat::analysis::{self, LambdaMethod, LambdaReport, WilfLimits, WilfMode, WilfReport};
use latinpat::construct;
use latinpat::perm::CompiledPattern;
use latinpat::rectpat::{contains_rectangle, LatinRectangle};
use latinpat::{AvoidanceSpec, CountResult, Enumerator, LatinSquare, Permutation};
use num_bigint::BigUint;
use serde::Deserialize;
use serde_json::{json, Value};

use cache::{Cache, CacheKey};
use output::Format;

/// Pattern avoidance in Latin squares.
#[derive(Parser)]
#[command(name = "latinpat", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Report search progress on standard error.
    #[arg(long, global = true, value_enum)]
    progress: Option<ProgressFormat>,
    /// Add elapsed wall time to the output.
    #[arg(long, global = true)]
    timing: bool,
    #[arg(long, global = true, env = "LATINPAT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Recompute cached results and fail if they differ.
    #[arg(long, global = true, conflicts_with = "no_cache")]
    verify_cache: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProgressFormat {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Count squares satisfying an avoidance spec.
    Count {
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// List squares satisfying an avoidance spec, in lexicographic order.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        spec: SpecArgs,
    },
    #[command(subcommand)]
    Construct(Construct),
    /// Longest monotone line forced in every square of an order.
    #[command(group(ArgGroup::new("method").required(true).args(["exhaustive", "bounds"])))]
    Lambda {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        bounds: bool,
    },
    /// Group all patterns of one length by their avoider counts.
    Wilf {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Mode::SinglePass)]
        mode: Mode,
    },
    /// Test a square for a pattern in its rows and columns, or for a
    /// rectangular pattern.
    #[command(group(ArgGroup::new("target").required(true).args(["pattern", "rectangle"])))]
    Check {
        #[arg(long)]
        square: PathBuf,
        #[arg(long, value_parser = parse_pattern)]
        pattern: Option<Permutation>,
        #[arg(long)]
        rectangle: Option<PathBuf>,
    },
    /// Test a square for a rectangular pattern.
    RectCheck {
        #[arg(long)]
        square: PathBuf,
        #[arg(long)]
        rectangle: PathBuf,
    },
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Subcommand)]
enum Construct {
    /// Avoiders of a length-3 pattern in rows and columns.
    S3 {
        #[arg(long)]
        order: usize,
        #[arg(long, value_parser = parse_pattern)]
        pattern: Permutation,
        /// Top-left symbol; all `order` avoiders when omitted.
        #[arg(long)]
        start: Option<usize>,
    },
    /// Complete a row into the unique square whose columns avoid a
    /// length-3 pattern. For 231 and 213 the row is the bottom row.
    Prop2 {
        #[arg(long, value_parser = parse_pattern)]
        first_row: Permutation,
        #[arg(long, value_parser = parse_pattern)]
        pattern: Permutation,
    },
    /// The order root² square whose longest monotone line is root+1.
    Connolly {
        #[arg(long)]
        root: usize,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Full-length pattern counts against the closed formulas.
    Theorem6 {
        #[arg(long)]
        order: usize,
    },
    /// Containment of 123, 231, 312 (and of 132, 213, 321) coincides.
    Corollary6 {
        #[arg(long)]
        order: usize,
    },
    /// Length-3 avoiders have cyclic columns and match the closed form.
    Remark4 {
        #[arg(long)]
        order: usize,
    },
    /// Monotone subsequences of length p+1 or q+1 in every permutation of
    /// length pq+1, optionally with the four-line check at an order.
    Es {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        order: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    SinglePass,
    PerPattern,
}

#[derive(Args)]
struct SpecArgs {
    /// Patterns avoided by every row and column.
    #[arg(long, value_delimiter = ',', value_parser = parse_pattern)]
    avoid: Vec<Permutation>,
    #[arg(long, value_delimiter = ',', value_parser = parse_pattern)]
    avoid_rows: Vec<Permutation>,
    #[arg(long, value_delimiter = ',', value_parser = parse_pattern)]
    avoid_cols: Vec<Permutation>,
    /// Patterns avoided by every symbol permutation (row to column).
    #[arg(long, value_delimiter = ',', value_parser = parse_pattern)]
    avoid_symbols: Vec<Permutation>,
}

impl SpecArgs {
    fn spec(&self) -> AvoidanceSpec {
        AvoidanceSpec::new(
            self.avoid.iter().chain(&self.avoid_rows).cloned(),
            self.avoid.iter().chain(&self.avoid_cols).cloned(),
            self.avoid_symbols.iter().cloned(),
        )
    }
}

fn parse_pattern(s: &str) -> std::result::Result<Permutation, String> {
    if s.is_empty() || s.len() > 9 || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!(
            "expected a pattern of 1 to 9 digits such as 2413, got {s:?}"
        ));
    }
    s.parse().map_err(|e: latinpat::Error| e.to_string())
}

/// Malformed input that is not a library error, such as an unreadable file.
#[derive(Debug)]
struct InvalidInput(String);

impl fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

/// A verification ran to completion and found a failure.
#[derive(Debug)]
struct CheckFailed(String);

impl fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} does not hold", self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<latinpat::Error>() {
            return match e {
                latinpat::Error::BoundExceeded { .. } => 3,
                latinpat::Error::Unavailable(_) => 1,
                _ => 2,
            };
        }
        if cause.is::<InvalidInput>() {
            return 2;
        }
    }
    1
}

struct Session {
    format: Format,
    timing: bool,
    progress: bool,
    enumerator: Enumerator,
    cache: Option<Cache>,
    verify_cache: bool,
}

impl Session {
    fn new(global: &Global) -> Result<Self> {
        let jobs = global.jobs.unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
        if jobs == 0 {
            return Err(InvalidInput("--jobs must be at least 1".into()).into());
        }
        let cache = match (&global.cache_dir, global.no_cache) {
            (Some(dir), false) => Some(Cache::open(dir)?),
            _ => None,
        };
        Ok(Session {
            format: global.format,
            timing: global.timing,
            progress: global.progress.is_some(),
            enumerator: Enumerator::new().with_jobs(jobs),
            cache,
            verify_cache: global.verify_cache,
        })
    }

    fn report_progress(&self, p: latinpat::enumerate::Progress) {
        if self.progress {
            eprintln!(
                "{}",
                json!({"progress": {"done": p.done, "total": p.total}})
            );
        }
    }

    /// Runs `compute` unless the cache holds a value for `key`. With
    /// `--verify-cache` a cached value is recomputed and must match.
    fn cached<T>(
        &self,
        key: CacheKey,
        compute: impl FnOnce() -> Result<T>,
        to_value: impl Fn(&T) -> Value,
        from_value: impl Fn(Value) -> Result<T>,
    ) -> Result<T> {
        let Some(cache) = &self.cache else {
            return compute();
        };
        match cache.lookup(&key)? {
            Some(stored) if self.verify_cache => {
                let fresh = compute()?;
                if to_value(&fresh) != stored {
                    bail!(
                        "cached {} result for order {} differs from recomputation",
                        key.operation,
                        key.order
                    );
                }
                Ok(fresh)
            }
            Some(stored) => from_value(stored)
                .with_context(|| format!("unreadable cache entry for {}", key.operation)),
            None => {
                let fresh = compute()?;
                cache.store(key, to_value(&fresh))?;
                Ok(fresh)
            }
        }
    }

    fn with_timing(&self, mut value: Value, elapsed: Duration) -> Value {
        if self.timing {
            if let Value::Object(map) = &mut value {
                map.insert("elapsed_ms".into(), json!(elapsed.as_secs_f64() * 1e3));
            }
        }
        value
    }
}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| InvalidInput(format!("cannot read {}: {e}", path.display())).into())
}

fn big_from_value(v: &Value) -> Result<BigUint> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(BigUint::from)
            .ok_or_else(|| anyhow!("count {n} is not a non-negative integer")),
        Value::String(s) => Ok(s.parse()?),
        other => bail!("unexpected count {other}"),
    }
}

fn count_value(r: &CountResult) -> Value {
    serde_json::to_value(r).expect("count results serialize")
}

fn run_count(ctx: &Session, order: usize, spec: &AvoidanceSpec) -> Result<String> {
    let started = Instant::now();
    let key = CacheKey::new(order, &spec.canonical(), "count");
    let result = ctx.cached(
        key,
        || {
            Ok(ctx
                .enumerator
                .count_with_progress(order, spec, &|p| ctx.report_progress(p))?)
        },
        count_value,
        |v| {
            Ok(CountResult {
                order,
                spec: spec.clone(),
                count: big_from_value(&v["count"])?,
                nodes_explored: v["nodes_explored"]
                    .as_u64()
                    .ok_or_else(|| anyhow!("missing nodes_explored"))?,
                elapsed: Duration::ZERO,
            })
        },
    )?;
    let value = ctx.with_timing(count_value(&result), started.elapsed());
    match ctx.format {
        Format::Json => Ok(output::json_line(&value)),
        Format::Table => Ok(output::table(&value)),
        Format::Csv => {
            let join = |it: &mut dyn Iterator<Item = &Permutation>| {
                json!(it
                    .map(|p| p.to_compact_string())
                    .collect::<Vec<_>>()
                    .join(" "))
            };
            let mut fields = vec![
                ("order", json!(order)),
                ("rows", join(&mut spec.row_patterns())),
                ("cols", join(&mut spec.col_patterns())),
                ("symbols", join(&mut spec.symbol_patterns())),
                ("count", value["count"].clone()),
                ("nodes_explored", json!(result.nodes_explored)),
            ];
            if ctx.timing {
                fields.push(("elapsed_ms", value["elapsed_ms"].clone()));
            }
            output::csv_record(&fields)
        }
    }
}

fn run_enumerate(ctx: &Session, order: usize, spec: &AvoidanceSpec) -> Result<String> {
    let squares = ctx.enumerator.fold(
        order,
        spec,
        Vec::new,
        |acc: &mut Vec<LatinSquare>, s| acc.push(s.clone()),
        |mut a, b| {
            a.extend(b);
            a
        },
        &|p| ctx.report_progress(p),
    )?;
    output::squares(&squares, ctx.format)
}

fn run_construct(ctx: &Session, c: &Construct) -> Result<String> {
    let squares = match c {
        Construct::S3 {
            order,
            pattern,
            start: Some(start),
        } => vec![construct::construct_s3_avoider(*order, pattern, *start)?],
        Construct::S3 {
            order,
            pattern,
            start: None,
        } => {
            if *order == 0 {
                return Err(InvalidInput("order must be at least 1".into()).into());
            }
            construct::all_s3_avoiders(*order, pattern)?
        }
        Construct::Prop2 { first_row, pattern } => {
            vec![construct::complete_columns_avoiding(first_row, pattern)?]
        }
        Construct::Connolly { root } => vec![construct::connolly_square(*root)?],
    };
    output::squares(&squares, ctx.format)
}

#[derive(Deserialize)]
struct StoredLambda {
    lower_bound: u64,
    upper_bound: Option<u64>,
    exact_value: Option<u64>,
    witness: Option<LatinSquare>,
}

fn render_report(ctx: &Session, value: Value) -> Result<String> {
    match ctx.format {
        Format::Json => Ok(output::json_line(&value)),
        Format::Table => Ok(output::table(&value)),
        Format::Csv => output::csv_record(&output::fields(&value)),
    }
}

fn run_lambda(ctx: &Session, order: usize, exhaustive: bool) -> Result<String> {
    let started = Instant::now();
    let report = if exhaustive {
        ctx.cached(
            CacheKey::new(order, "lambda", "lambda-exhaustive"),
            || {
                Ok(analysis::compute_lambda_exhaustive_with_progress(
                    order,
                    &ctx.enumerator,
                    &|p| ctx.report_progress(p),
                )?)
            },
            |r| serde_json::to_value(r).expect("reports serialize"),
            |v| {
                let s: StoredLambda = serde_json::from_value(v)?;
                Ok(LambdaReport {
                    order,
                    lower_bound: s.lower_bound,
                    upper_bound: s.upper_bound,
                    exact_value: s.exact_value,
                    witness: s.witness,
                    method: LambdaMethod::Exhaustive,
                })
            },
        )?
    } else {
        analysis::lambda_bounds(order)?
    };
    let mut value = serde_json::to_value(&report)?;
    if ctx.format != Format::Json {
        if let Some(w) = &report.witness {
            value["witness"] = json!(w.to_text().trim_end().replace('\n', " / "));
        }
    }
    render_report(ctx, ctx.with_timing(value, started.elapsed()))
}

fn run_wilf(ctx: &Session, length: usize, order: usize, mode: Mode) -> Result<String> {
    let started = Instant::now();
    let mode = match mode {
        Mode::SinglePass => WilfMode::SinglePass,
        Mode::PerPattern => WilfMode::PerPattern,
    };
    let report = ctx.cached(
        CacheKey::new(order, &format!("length={length}"), "wilf"),
        || {
            Ok(analysis::wilf_classes(
                length,
                order,
                mode,
                WilfLimits::default(),
                &ctx.enumerator,
                &|p| ctx.report_progress(p),
            )?)
        },
        |r| serde_json::to_value(r).expect("reports serialize"),
        |v| {
            let counts = v["counts"]
                .as_object()
                .ok_or_else(|| anyhow!("missing counts"))?
                .iter()
                .map(|(k, c)| Ok((k.parse::<Permutation>()?, big_from_value(c)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            Ok(WilfReport::from_counts(length, order, counts))
        },
    )?;
    match ctx.format {
        Format::Csv => Ok(report.to_csv()),
        Format::Json => {
            let mut value = serde_json::to_value(&report)?;
            value["class_count"] = json!(report.classes.len());
            Ok(output::json_line(
                &ctx.with_timing(value, started.elapsed()),
            ))
        }
        Format::Table => {
            let mut out = format!(
                "{} classes of patterns of length {length} at order {order}\n",
                report.classes.len()
            );
            for (i, class) in report.classes.iter().enumerate() {
                let names: Vec<String> = class.iter().map(Permutation::to_compact_string).collect();
                out.push_str(&format!(
                    "{:>3}  {:>12}  {}\n",
                    i + 1,
                    report.counts[&class[0]],
                    names.join(" ")
                ));
            }
            Ok(out)
        }
    }
}

fn pattern_witness(square: &LatinSquare, pattern: &Permutation) -> Option<Value> {
    let compiled = CompiledPattern::new(pattern);
    let n = square.order();
    let lines = (1..=n)
        .map(|i| ("row", i, square.row(i).to_vec()))
        .chain((1..=n).map(|j| ("column", j, square.column(j))));
    for (kind, index, line) in lines {
        if let Some(pos) = compiled.first_occurrence(&line) {
            let positions: Vec<usize> = pos.iter().map(|p| p + 1).collect();
            let values: Vec<u8> = pos.iter().map(|&p| line[p]).collect();
            return Some(
                json!({"line": kind, "index": index, "positions": positions, "values": values}),
            );
        }
    }
    None
}

fn rectangle_witness(square: &LatinSquare, path: &Path) -> Result<Option<Value>> {
    let rect = LatinRectangle::parse(&read_input(path)?)?;
    Ok(contains_rectangle(square, &rect)?.map(|w| json!({"rows": w.rows, "cols": w.cols})))
}

fn render_verdict(ctx: &Session, witness: Option<Value>) -> Result<String> {
    let contained = witness.is_some();
    match ctx.format {
        Format::Json => Ok(output::json_line(
            &json!({"contained": contained, "witness": witness}),
        )),
        Format::Csv => output::csv_record(&[
            ("contained", json!(contained)),
            ("witness", witness.unwrap_or(Value::Null)),
        ]),
        Format::Table => {
            let mut out = String::from(if contained {
                "contained\n"
            } else {
                "avoided\n"
            });
            if let Some(Value::Object(w)) = witness {
                for (k, v) in w {
                    out.push_str(&format!("{k}  {}\n", output::scalar(&v)));
                }
            }
            Ok(out)
        }
    }
}

fn run_verify(ctx: &Session, v: &Verify) -> Result<String> {
    let e = &ctx.enumerator;
    let (name, value, holds) = match v {
        Verify::Theorem6 { order } => {
            let r = analysis::verify_theorem6(*order, &analysis::full_length_sample(*order), e)?;
            ("theorem6", serde_json::to_value(&r)?, r.holds)
        }
        Verify::Corollary6 { order } => {
            let r = analysis::verify_corollary6(*order, e)?;
            ("corollary6", serde_json::to_value(&r)?, r.holds)
        }
        Verify::Remark4 { order } => {
            let reports = analysis::verify_remark4(*order, e)?;
            let holds = reports.iter().all(|r| r.holds);
            (
                "remark4",
                json!({"order": order, "reports": reports, "holds": holds}),
                holds,
            )
        }
        Verify::Es { p, q, order } => {
            let r = analysis::verify_erdos_szekeres(*p, *q, *order, e)?;
            ("es", serde_json::to_value(&r)?, r.holds)
        }
    };
    let text = render_report(ctx, value)?;
    if holds {
        Ok(text)
    } else {
        print!("{text}");
        Err(CheckFailed(name.into()).into())
    }
}

fn run(cli: Cli) -> Result<String> {
    let ctx = Session::new(&cli.global)?;
    match &cli.command {
        Command::Count { order, spec } => run_count(&ctx, *order, &spec.spec()),
        Command::Enumerate { order, spec } => run_enumerate(&ctx, *order, &spec.spec()),
        Command::Construct(c) => run_construct(&ctx, c),
        Command::Lambda {
            order, exhaustive, ..
        } => run_lambda(&ctx, *order, *exhaustive),
        Command::Wilf {
            length,
            order,
            mode,
        } => run_wilf(&ctx, *length, *order, *mode),
        Command::Check {
            square,
            pattern,
            rectangle,
        } => {
            let s = LatinSquare::parse(&read_input(square)?)?;
            let witness = match (pattern, rectangle) {
                (Some(p), _) => pattern_witness(&s, p),
                (None, Some(r)) => rectangle_witness(&s, r)?,
                (None, None) => unreachable!("clap requires one target"),
            };
            render_verdict(&ctx, witness)
        }
        Command::RectCheck { square, rectangle } => {
            let s = LatinSquare::parse(&read_input(square)?)?;
            render_verdict(&ctx, rectangle_witness(&s, rectangle)?)
        }
        Command::Verify(v) => run_verify(&ctx, v),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("latinpat: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
