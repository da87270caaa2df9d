mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use thue_family::diophantine::small_value_witnesses;
use thue_family::forms::{coeffs, eval_form, eval_form_allow_degenerate};
use thue_family::laws::{verify_diagonal_bounds, verify_pm_one_inputs, verify_recurrence_lemma};
use thue_family::roots::{check_paper_bounds, isolate_roots, log_lambda2_estimate};
use thue_family::search::{reproduce_table, run_search, TableConfig, TableEntry};
use thue_family::units::{decompose, gamma_triple, lambda_diagnostics, siegel_report};
use thue_family::{Error, SearchConfig, Strategy};

use config::FileConfig;
use output::{Format, Sink};

#[derive(Parser, Debug)]
#[command(name = "thue-family", version, about = "Exact arithmetic for the Thue forms F_{n,a} of the simplest cubic fields")]
struct Cli {
    /// Working precision in bits for root enclosures.
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// Write records here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// jsonl, csv or pretty.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Flat `key = value` file supplying any long option.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, env = "THUE_FAMILY_THREADS")]
    threads: Option<usize>,
    /// JSON-lines checkpoint for `search` and `table`.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Default)]
struct Point {
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    a: Option<i64>,
    #[arg(long)]
    x: Option<BigInt>,
    #[arg(long)]
    y: Option<BigInt>,
}

#[derive(Args, Debug, Default)]
struct Grid {
    #[arg(long)]
    n_min: Option<i64>,
    #[arg(long)]
    n_max: Option<i64>,
    #[arg(long)]
    a_min: Option<i64>,
    #[arg(long)]
    a_max: Option<i64>,
    #[arg(long)]
    y_max: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Coefficients (u_a, v_a) of F_{n,a}.
    #[command(allow_negative_numbers = true)]
    Coeffs {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        a: Option<i64>,
    },
    /// Evaluate F_{n,a}(x, y).
    #[command(allow_negative_numbers = true)]
    Eval {
        #[command(flatten)]
        p: Point,
        /// Allow a = 0.
        #[arg(long)]
        degenerate: bool,
    },
    /// Certified enclosures of the roots of f_n and the bound report.
    #[command(allow_negative_numbers = true)]
    Roots {
        #[arg(long)]
        n: Option<i64>,
    },
    /// Continued-fraction witnesses of small values of F_{n,a}.
    #[command(allow_negative_numbers = true)]
    Witness {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        count: Option<usize>,
    },
    /// All solutions of 0 < |F_{n,a}(x, y)| <= m over a grid of (n, a).
    #[command(allow_negative_numbers = true)]
    Search {
        #[command(flatten)]
        g: Grid,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        x_max: Option<u64>,
        /// naive or proximity.
        #[arg(long)]
        strategy: Option<Strategy>,
    },
    /// Recompute the exotic solutions of F = 1 and diff them against the embedded table.
    #[command(allow_negative_numbers = true)]
    Table {
        #[command(flatten)]
        g: Grid,
        #[arg(long)]
        box_bound: Option<u64>,
    },
    /// Unit decomposition of x - λ0^a y.
    #[command(allow_negative_numbers = true)]
    Decompose {
        #[command(flatten)]
        p: Point,
        /// Also certify μ and Λ.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Exact check of the Siegel identity.
    #[command(allow_negative_numbers = true)]
    Siegel {
        #[command(flatten)]
        p: Point,
    },
    /// Grid checks of the coefficient inequalities, unit inputs and diagonal bounds.
    #[command(allow_negative_numbers = true)]
    Verify {
        /// recurrence, pm-one, diagonal or all.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        n_max: Option<i64>,
        #[arg(long)]
        a_max: Option<i64>,
        #[arg(long)]
        x_max: Option<i64>,
    },
}

enum Failure {
    Usage(String),
    Diff(String),
    Invariant(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Diff(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Diff(m) | Failure::Invariant(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Precondition(_) | Error::DegenerateForm | Error::ZeroValue | Error::Checkpoint(_) => {
                Failure::Usage(msg)
            }
            Error::Io(_) | Error::Json(_) => Failure::Runtime(msg),
            _ => Failure::Invariant(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Res<T> = Result<T, Failure>;

fn usage(e: String) -> Failure {
    Failure::Usage(e)
}

struct Ctx {
    file: FileConfig,
    prec: u32,
    checkpoint: Option<PathBuf>,
}

impl Ctx {
    fn req<T: std::str::FromStr>(&self, v: Option<T>, key: &str) -> Res<T>
    where
        T::Err: std::fmt::Display,
    {
        self.file.require(v, key).map_err(usage)
    }

    fn opt<T: std::str::FromStr>(&self, v: Option<T>, key: &str) -> Res<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.file.pick(v, key).map_err(usage)
    }

    fn point(&self, p: Point) -> Res<(i64, i64, BigInt, BigInt)> {
        Ok((self.req(p.n, "n")?, self.req(p.a, "a")?, self.req(p.x, "x")?, self.req(p.y, "y")?))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("thue-family: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Res<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p).map_err(usage)?,
        None => FileConfig::default(),
    };
    let format = file.pick(cli.format, "format").map_err(usage)?.unwrap_or(Format::Jsonl);
    let out = file.pick(cli.out, "out").map_err(usage)?;
    if let Some(t) = file.pick(cli.threads, "threads").map_err(usage)? {
        if t == 0 {
            return Err(usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    let prec = file.pick(cli.prec, "prec").map_err(usage)?.unwrap_or(128);
    if prec < 32 {
        return Err(usage(format!("--prec must be at least 32 bits, got {prec}")));
    }
    let checkpoint = file.pick(cli.checkpoint, "checkpoint").map_err(usage)?;
    let ctx = Ctx { file, prec, checkpoint };
    let mut sink = Sink::new(format, out.as_deref())?;
    let result = dispatch(&ctx, cli.cmd, &mut sink);
    sink.finish()?;
    result
}

fn dispatch(ctx: &Ctx, cmd: Cmd, sink: &mut Sink) -> Res<()> {
    match cmd {
        Cmd::Coeffs { n, a } => {
            let c = coeffs(ctx.req(n, "n")?, ctx.req(a, "a")?)?;
            sink.emit(&c)?;
        }
        Cmd::Eval { p, degenerate } => {
            let degenerate = ctx.file.flag(degenerate, "degenerate").map_err(usage)?;
            let (n, a, x, y) = ctx.point(p)?;
            let value = if degenerate { eval_form_allow_degenerate(n, a, &x, &y)? } else { eval_form(n, a, &x, &y)? };
            sink.emit(&json!({"n": n, "a": a, "x": x.to_string(), "y": y.to_string(), "value": value.to_string()}))?;
        }
        Cmd::Roots { n } => {
            let n = ctx.req(n, "n")?;
            let roots = isolate_roots(n, ctx.prec)?;
            let bounds = if n >= 1 { Some(check_paper_bounds(n)?) } else { None };
            let estimate = if n >= 1 { log_lambda2_estimate(&roots)? } else { None };
            if let Some(b) = &bounds {
                if !b.asserted_hold() {
                    return Err(Failure::Invariant(format!("root bounds fail for n = {n}")));
                }
            }
            sink.emit(&json!({
                "n": n,
                "prec": roots.prec(),
                "lambda0": roots.lam(0),
                "lambda1": roots.lam(1),
                "lambda2": roots.lam(2),
                "bounds": bounds.map(|b| b.checks),
                "log_lambda2_estimate": estimate,
            }))?;
        }
        Cmd::Witness { n, a, count } => {
            let count = ctx.opt(count, "count")?.unwrap_or(5);
            for w in small_value_witnesses(ctx.req(n, "n")?, ctx.req(a, "a")?, count)? {
                sink.emit(&w)?;
            }
        }
        Cmd::Search { g, m, x_max, strategy } => {
            let d = SearchConfig::default();
            let cfg = SearchConfig {
                n_min: ctx.opt(g.n_min, "n-min")?.unwrap_or(d.n_min),
                n_max: ctx.opt(g.n_max, "n-max")?.unwrap_or(d.n_max),
                a_min: ctx.opt(g.a_min, "a-min")?.unwrap_or(d.a_min),
                a_max: ctx.opt(g.a_max, "a-max")?.unwrap_or(d.a_max),
                m: ctx.opt(m, "m")?.unwrap_or(d.m),
                y_max: ctx.opt(g.y_max, "y-max")?.unwrap_or(d.y_max),
                x_max: ctx.opt(x_max, "x-max")?,
                strategy: ctx.opt(strategy, "strategy")?.unwrap_or(d.strategy),
                checkpoint: ctx.checkpoint.clone(),
            };
            for s in run_search(&cfg)? {
                sink.emit(&s)?;
            }
        }
        Cmd::Table { g, box_bound } => table(ctx, g, box_bound, sink)?,
        Cmd::Decompose { p, diagnostics } => {
            let diagnostics = ctx.file.flag(diagnostics, "diagnostics").map_err(usage)?;
            let (n, a, x, y) = ctx.point(p)?;
            let g = gamma_triple(n, a, &x, &y)?;
            let d = decompose(&g)?;
            let diag = if diagnostics { Some(lambda_diagnostics(&g, &d)?) } else { None };
            sink.emit(&json!({
                "n": n,
                "a": a,
                "x": x.to_string(),
                "y": y.to_string(),
                "value": g.value.to_string(),
                "i0": g.i0,
                "gamma": g.gamma,
                "decomposition": d,
                "diagnostics": diag,
            }))?;
        }
        Cmd::Siegel { p } => {
            let (n, a, x, y) = ctx.point(p)?;
            let r = siegel_report(&gamma_triple(n, a, &x, &y)?);
            sink.emit(&r)?;
            if !r.zero {
                return Err(Failure::Invariant(format!("Siegel residual is nonzero at ({n}, {a}, {x}, {y})")));
            }
        }
        Cmd::Verify { suite, n_max, a_max, x_max } => verify(ctx, suite, n_max, a_max, x_max, sink)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct TableRow<'a> {
    #[serde(flatten)]
    entry: &'a TableEntry,
    status: &'static str,
}

fn table(ctx: &Ctx, g: Grid, box_bound: Option<u64>, sink: &mut Sink) -> Res<()> {
    let d = TableConfig::default();
    let cfg = TableConfig {
        n_min: ctx.opt(g.n_min, "n-min")?.unwrap_or(d.n_min),
        n_max: ctx.opt(g.n_max, "n-max")?.unwrap_or(d.n_max),
        a_min: ctx.opt(g.a_min, "a-min")?.unwrap_or(d.a_min),
        a_max: ctx.opt(g.a_max, "a-max")?.unwrap_or(d.a_max),
        y_max: ctx.opt(g.y_max, "y-max")?.unwrap_or(d.y_max),
        box_bound: ctx.opt(box_bound, "box-bound")?.unwrap_or(d.box_bound),
        checkpoint: ctx.checkpoint.clone(),
    };
    let r = reproduce_table(&cfg)?;
    let mut rows: Vec<TableRow> = Vec::new();
    for e in &r.found {
        rows.push(TableRow { entry: e, status: if r.extra.contains(e) { "extra" } else { "match" } });
    }
    rows.extend(r.missing.iter().map(|e| TableRow { entry: e, status: "missing" }));
    rows.extend(r.outside_box.iter().map(|e| TableRow { entry: e, status: "outside_box" }));
    rows.sort_by(|s, t| s.entry.cmp(t.entry));
    for row in &rows {
        sink.emit(row)?;
    }
    eprintln!(
        "table: {} expected, {} found, {} missing, {} extra, {} outside the box",
        r.expected.len(),
        r.found.len(),
        r.missing.len(),
        r.extra.len(),
        r.outside_box.len()
    );
    if r.matches() {
        Ok(())
    } else {
        Err(Failure::Diff("recomputed table differs from the embedded one".into()))
    }
}

fn verify(
    ctx: &Ctx,
    suite: Option<String>,
    n_max: Option<i64>,
    a_max: Option<i64>,
    x_max: Option<i64>,
    sink: &mut Sink,
) -> Res<()> {
    let suite = ctx.opt(suite, "suite")?.unwrap_or_else(|| "all".into());
    let suites: &[&str] = match suite.as_str() {
        "all" => &["recurrence", "pm-one", "diagonal"],
        "recurrence" => &["recurrence"],
        "pm-one" => &["pm-one"],
        "diagonal" => &["diagonal"],
        other => return Err(usage(format!("unknown suite {other:?} (expected recurrence, pm-one, diagonal or all)"))),
    };
    let n_max = ctx.opt(n_max, "n-max")?;
    let a_max = ctx.opt(a_max, "a-max")?;
    let x_max = ctx.opt(x_max, "x-max")?;
    let mut failed = Vec::new();
    for &s in suites {
        let (ok, report): (bool, Value) = match s {
            "recurrence" => {
                let r = verify_recurrence_lemma(n_max.unwrap_or(100), a_max.unwrap_or(100))?;
                (r.matches(), serde_json::to_value(&r).map_err(Error::from)?)
            }
            "pm-one" => {
                let r = verify_pm_one_inputs(n_max.unwrap_or(300), a_max.unwrap_or(300))?;
                (r.matches(), serde_json::to_value(&r).map_err(Error::from)?)
            }
            _ => {
                let r = verify_diagonal_bounds(n_max.unwrap_or(50), a_max.unwrap_or(30), x_max.unwrap_or(20))?;
                (r.matches(), serde_json::to_value(&r).map_err(Error::from)?)
            }
        };
        sink.emit(&json!({"suite": s, "matches": ok, "report": report}))?;
        eprintln!("verify {s}: {}", if ok { "ok" } else { "MISMATCH" });
        if !ok {
            failed.push(s);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Diff(format!("verification mismatch in: {}", failed.join(", "))))
    }
}
