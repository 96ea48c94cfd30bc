//! Argument parsing and the subcommands. [`run`] returns the rendered
//! report and the exit code so it can be driven in-process.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use oneloop_core::cocycle::cancellation::{adopt_convention, check_principal_cancellation, CancellationReport, Group};
use oneloop_core::cocycle::contract::Convention;
use oneloop_core::enumerate::{enumerate_admissible, Filter, DEFAULT_LIMIT};
use oneloop_core::graph::named;
use oneloop_core::orientation::is_zero_class;
use oneloop_core::reductions::chordize::{chordize, DEFAULT_MAX_DEPTH};
use oneloop_core::reductions::weight::{applicable, weight_of_graph, weight_of_vector};
use oneloop_core::reductions::wheel_reduce::wheel_reduce_even;
use oneloop_core::reductions::young::young_bound;
use oneloop_core::relations::{RelationTable, SpanOptions};
use oneloop_core::{GraphVector, Parity};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{resolve_dir, CacheStatus, Presentations};
use crate::csi::{antipodal_symmetry_check, gauss_linking, Method, SphereConfig};
use crate::error::{exit, AppError};
use crate::format::{self, parse_parity, read_vector, Term};
use crate::verify;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "oneloop", version, about = "Exact computations in the 1-loop graph spaces A_k")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Presentation cache directory (default: $ONELOOP_CACHE_DIR, then the
    /// user cache directory).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Ceiling on the number of graphs enumerated per order.
    #[arg(long, global = true, default_value_t = DEFAULT_LIMIT)]
    pub max_graphs: usize,
    /// Relation table to use instead of the built-in one.
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,
    /// Add wall-clock times to reports. Makes output non-reproducible.
    #[arg(long, global = true)]
    pub timings: bool,
    /// Log cache activity on stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

/// Parity class, either directly or from explicit dimensions.
#[derive(Debug, Args)]
pub struct ParityArgs {
    /// Parities of (n, j), e.g. `odd,even`.
    #[arg(long, conflicts_with_all = ["n", "j"])]
    pub parity: Option<String>,
    #[arg(long, requires = "j")]
    pub n: Option<usize>,
    #[arg(long, requires = "n")]
    pub j: Option<usize>,
}

impl ParityArgs {
    fn get(&self) -> Result<Option<Parity>, AppError> {
        match (&self.parity, self.n, self.j) {
            (Some(p), _, _) => parse_parity(p).map(Some),
            (None, Some(n), Some(j)) => Ok(Some(Parity::from_dims(n, j))),
            _ => Ok(None),
        }
    }

    fn require(&self) -> Result<Parity, AppError> {
        self.get()?.ok_or_else(|| AppError::Usage("--parity (or --n and --j) is required".into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    /// Try both and adopt one that passes.
    Auto,
    InteriorFirst,
    InteriorLast,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List admissible graphs of order k.
    Enumerate {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        parity: ParityArgs,
        #[arg(long, conflicts_with = "wheel_only")]
        chord_only: bool,
        #[arg(long)]
        wheel_only: bool,
        /// Only print the counts.
        #[arg(long)]
        count: bool,
    },
    /// Dimension of A_k.
    Dim {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        parity: ParityArgs,
        /// Leave the Y relation out of the span.
        #[arg(long)]
        without_y: bool,
    },
    /// Normal form of a graph vector.
    Reduce {
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        parity: ParityArgs,
        #[arg(long)]
        input: String,
        /// Also run the independent reduction (wheel coefficient in even
        /// codimension, chord-diagram rewriting in odd) and compare.
        #[arg(long)]
        rewrite: bool,
    },
    /// Principal-face cancellation of the cocycle.
    CheckCocycle {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        parity: ParityArgs,
        #[arg(long, value_enum, default_value_t = ConventionArg::Auto)]
        convention: ConventionArg,
    },
    /// Upper bound on dim A_k in odd codimension.
    Bound {
        #[arg(long)]
        k: usize,
    },
    /// The weight system w_k on a graph vector (even codimension).
    Weight {
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        parity: ParityArgs,
        #[arg(long)]
        input: String,
        /// Check that w_k vanishes on the relations of order k.
        #[arg(long)]
        check: bool,
    },
    /// Gauss linking number of the two spheres.
    Linking {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = verify::pinned::LINKING_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = verify::pinned::LINKING_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Method::MonteCarlo)]
        method: Method,
        /// x3 coordinate of the centre of A; 1 is the linked position.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        offset: f64,
        /// Also compare with the antipodal composite.
        #[arg(long)]
        antipodal: bool,
    },
    /// Run the acceptance suite and print a pass/fail matrix.
    VerifyPaper {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Dim { .. } => "dim",
            Command::Reduce { .. } => "reduce",
            Command::CheckCocycle { .. } => "check-cocycle",
            Command::Bound { .. } => "bound",
            Command::Weight { .. } => "weight",
            Command::Linking { .. } => "linking",
            Command::VerifyPaper { .. } => "verify-paper",
        }
    }
}

struct Ctx {
    pres: Presentations,
    timings: bool,
    verbose: bool,
}

impl Ctx {
    fn quotient(&self, k: usize, parity: Parity, opts: &SpanOptions) -> Result<oneloop_core::Quotient, AppError> {
        let (q, status) = self.pres.get(k, parity, opts)?;
        if self.verbose {
            let s = match status {
                CacheStatus::Disabled => "cache disabled",
                CacheStatus::Hit => "cache hit",
                CacheStatus::Miss => "cache miss, stored",
            };
            eprintln!("presentation k={k} {parity}: {s}");
        }
        Ok(q)
    }
}

fn check_order(k: usize) -> Result<(), AppError> {
    if k == 0 {
        return Err(AppError::Usage("the order k must be at least 1".into()));
    }
    Ok(())
}

/// Outcome of a command: the report body and whether verification passed.
struct Outcome {
    body: Value,
    passed: bool,
}

fn ok(body: Value) -> Outcome {
    Outcome { body, passed: true }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn enumerate(k: usize, parity: Option<Parity>, filter: Filter, count_only: bool, limit: usize) -> Result<Outcome, AppError> {
    check_order(k)?;
    let forms = enumerate_admissible(k, filter, limit)?;
    let filter_name = match filter {
        Filter::All => "all",
        Filter::ChordDiagramsOnly => "chord_diagrams",
        Filter::WheelTypeOnly => "wheel_type",
    };
    let mut body = json!({ "k": k, "filter": filter_name, "count": forms.len() });
    if let Some(p) = parity {
        let zero: Vec<bool> = forms.iter().map(|f| is_zero_class(&f.to_graph(), p)).collect();
        body["parity"] = json!(p.label());
        body["nonzero_count"] = json!(zero.iter().filter(|z| !**z).count());
        if !count_only {
            body["graphs"] = forms
                .iter()
                .zip(&zero)
                .map(|(f, z)| json!({ "graph": f.to_string(), "zero": z }))
                .collect();
        }
    } else if !count_only {
        body["graphs"] = forms.iter().map(|f| json!(f.to_string())).collect();
    }
    Ok(ok(body))
}

fn dim(ctx: &Ctx, k: usize, parity: Parity, without_y: bool) -> Result<Outcome, AppError> {
    check_order(k)?;
    let opts = if without_y { SpanOptions::without(&["Y"]) } else { SpanOptions::default() };
    let t = Instant::now();
    let q = ctx.quotient(k, parity, &opts)?;
    let mut body = json!({
        "k": k,
        "parity": parity.label(),
        "excluded_relations": opts.exclude,
        "dimension": q.dimension(),
        "rank": q.rank(),
        "ambient": q.basis.len(),
        "basis": q.free_columns().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "table_sha256": ctx.pres.table_sha256,
    });
    if ctx.timings {
        body["wall_time"] = json!(t.elapsed().as_secs_f64());
    }
    Ok(ok(body))
}

fn input_order(input: &format::InputVector, k: Option<usize>) -> Result<usize, AppError> {
    let order = input.order().ok_or_else(|| AppError::Input("empty vector or graphs of mixed order".into()))?;
    match k {
        Some(k) if k != order => Err(AppError::Usage(format!("--k {k} but the input has order {order}"))),
        _ => Ok(order),
    }
}

fn input_parity(args: &ParityArgs, input: &format::InputVector) -> Result<Parity, AppError> {
    args.get()?
        .or(input.parity)
        .ok_or_else(|| AppError::Usage("--parity is required unless the input file names one".into()))
}

fn reduce(ctx: &Ctx, k: Option<usize>, args: &ParityArgs, path: &str, rewrite: bool) -> Result<Outcome, AppError> {
    let input = read_vector(path)?;
    let parity = input_parity(args, &input)?;
    let k = input_order(&input, k)?;
    let v = input.to_vector(parity);
    let q = ctx.quotient(k, parity, &SpanOptions::default())?;
    let nf = q.reduce(&v)?;
    let mut body = json!({
        "k": k,
        "parity": parity.label(),
        "input": format::terms(&v),
        "normal_form": format::terms(&nf),
        "is_zero": nf.is_zero(),
    });
    let mut passed = true;
    if rewrite {
        let r = if parity.even_codim() {
            let c = wheel_reduce_even(&v, parity).map_err(|e| AppError::Computation(e.to_string()))?;
            let wheel = GraphVector::from_graph(&named::wheel(k), parity);
            let agrees = q.is_zero(&v.sub(&wheel.scaled(&c)))?;
            json!({ "method": "wheel_reduce", "wheel_coefficient": c.to_string(), "agrees_with_solver": agrees })
        } else {
            let out = chordize(&v, parity, &ctx.pres.table, DEFAULT_MAX_DEPTH)
                .map_err(|e| AppError::Computation(e.to_string()))?;
            let agrees = q.is_zero(&v.sub(&out))?;
            json!({ "method": "chordize", "result": format::terms(&out), "agrees_with_solver": agrees })
        };
        passed = r["agrees_with_solver"] == json!(true);
        body["rewrite"] = r;
    }
    Ok(Outcome { body, passed })
}

#[derive(Serialize)]
struct GroupJson {
    target: String,
    legs: String,
    members: usize,
    labelled_members: String,
    residue: Vec<Term>,
}

fn group_json(g: &Group) -> GroupJson {
    GroupJson {
        target: g.target.to_string(),
        legs: g.legs_label(),
        members: g.members,
        labelled_members: g.labelled_members.to_string(),
        residue: format::terms(&g.residue),
    }
}

fn cocycle_summary(r: &CancellationReport) -> Value {
    json!({
        "convention": r.convention_name(),
        "passed": r.passed(),
        "groups_checked": r.groups_checked(),
        "failures": r.failures().count(),
    })
}

fn check_cocycle(ctx: &Ctx, k: usize, parity: Parity, conv: ConventionArg) -> Result<Outcome, AppError> {
    check_order(k)?;
    let q = ctx.quotient(k, parity, &SpanOptions::default())?;
    let limit = ctx.pres.limit;
    let reports = match conv {
        ConventionArg::Auto => adopt_convention(&q, limit)?,
        ConventionArg::InteriorFirst => vec![check_principal_cancellation(&q, Convention::InteriorFirst, limit)?],
        ConventionArg::InteriorLast => vec![check_principal_cancellation(&q, Convention::InteriorLast, limit)?],
    };
    let r = &reports[0];
    let body = json!({
        "k": k,
        "parity": parity.label(),
        "adopted_sign_convention": r.convention_name(),
        "passed": r.passed(),
        "groups_checked": r.groups_checked(),
        "failures": r.failures().map(group_json).collect::<Vec<_>>(),
        "six_term_groups": r.six_term_groups().map(group_json).collect::<Vec<_>>(),
        "skipped_degenerate": r.skipped_degenerate,
        "skipped_zero_target": r.skipped_zero_target,
        "conventions": reports.iter().map(cocycle_summary).collect::<Vec<_>>(),
    });
    Ok(Outcome { passed: r.passed(), body })
}

fn bound(k: usize) -> Result<Outcome, AppError> {
    if k < 2 {
        return Err(AppError::Usage("the bound is defined for k >= 2".into()));
    }
    Ok(ok(json!({ "k": k, "bound": young_bound(k) })))
}

fn weight(ctx: &Ctx, k: Option<usize>, args: &ParityArgs, path: &str, check: bool) -> Result<Outcome, AppError> {
    let input = read_vector(path)?;
    let parity = input_parity(args, &input)?;
    let k = input_order(&input, k)?;
    if !applicable(k, parity) {
        return Err(AppError::Usage(format!("w_k needs even codimension and k of the other parity than n ({parity}, k = {k})")));
    }
    let v = input.to_vector(parity);
    let value = weight_of_vector(&v, parity).map_err(|e| AppError::Computation(e.to_string()))?;
    let mut body = json!({ "k": k, "parity": parity.label(), "value": value.to_string() });
    let mut passed = true;
    if check {
        let q = ctx.quotient(k, parity, &SpanOptions::default())?;
        let f = |form: &oneloop_core::Form| oneloop_core::vector::q(weight_of_graph(&form.to_graph(), parity).unwrap_or(0));
        let well_defined = match q.pair_with_functional(&v, f) {
            Ok(x) => x == value,
            Err(oneloop_core::quotient::QuotientError::FunctionalNotWellDefined { .. }) => false,
            Err(e) => return Err(e.into()),
        };
        body["well_defined"] = json!(well_defined);
        passed = well_defined;
    }
    let _ = value.is_zero();
    Ok(Outcome { body, passed })
}

#[allow(clippy::too_many_arguments)]
fn linking(n: usize, j: usize, samples: u64, seed: u64, method: Method, offset: f64, antipodal: bool) -> Result<Outcome, AppError> {
    let cfg = SphereConfig::with_offset(n, j, offset)?;
    let e = gauss_linking(&cfg, samples, seed, method)?;
    let mut body = to_value(&e);
    body["nearest_integer_3sigma"] = json!(e.integer(3.0));
    let mut passed = true;
    if antipodal {
        let a = antipodal_symmetry_check(&cfg, samples, seed)?;
        passed = a.passed;
        body["antipodal"] = to_value(&a);
    }
    Ok(Outcome { body, passed })
}

fn verify_paper(ctx: &Ctx, only: &[u8]) -> Result<Outcome, AppError> {
    let p = &ctx.pres;
    type Check<'a> = &'a dyn Fn() -> Result<verify::Criterion, AppError>;
    let all: [(u8, Check); 9] = [
        (1, &|| verify::criterion_1(p)),
        (2, &|| verify::criterion_2(p)),
        (3, &|| verify::criterion_3(p)),
        (4, &|| verify::criterion_4(p)),
        (5, &|| verify::criterion_5(p)),
        (6, &|| verify::criterion_6(p)),
        (7, &|| verify::criterion_7(p)),
        (8, &verify::criterion_8),
        (9, &|| verify::criterion_9(p)),
    ];
    if let Some(bad) = only.iter().find(|i| !(1..=9).contains(*i)) {
        return Err(AppError::Usage(format!("no criterion {bad}")));
    }
    let mut rows = Vec::new();
    let mut passed = true;
    for (id, f) in all.iter() {
        if !only.is_empty() && !only.contains(id) {
            continue;
        }
        let c = f()?;
        passed &= c.passed;
        let mut row = to_value(&c);
        if ctx.timings {
            row["wall_time"] = json!(c.elapsed.as_secs_f64());
        }
        rows.push(row);
    }
    Ok(Outcome { body: json!({ "passed": passed, "criteria": rows }), passed })
}

fn load_table(path: Option<&PathBuf>) -> Result<RelationTable, AppError> {
    let Some(p) = path else { return Ok(RelationTable::builtin()) };
    let src = std::fs::read_to_string(p).map_err(|e| AppError::io(p.display().to_string(), e))?;
    let t = RelationTable::parse(&src).map_err(|e| AppError::Input(format!("{}: {e}", p.display())))?;
    t.validate().map_err(|e| AppError::Input(format!("{}: {e}", p.display())))?;
    Ok(t)
}

fn dispatch(cli: &Cli) -> Result<Outcome, AppError> {
    let table = load_table(cli.table.as_ref())?;
    let dir = if cli.no_cache { None } else { resolve_dir(cli.cache_dir.as_deref()) };
    let ctx = Ctx { pres: Presentations::new(dir, table, cli.max_graphs), timings: cli.timings, verbose: cli.verbose };
    match &cli.command {
        Command::Enumerate { k, parity, chord_only, wheel_only, count } => {
            let filter = if *chord_only {
                Filter::ChordDiagramsOnly
            } else if *wheel_only {
                Filter::WheelTypeOnly
            } else {
                Filter::All
            };
            enumerate(*k, parity.get()?, filter, *count, cli.max_graphs)
        }
        Command::Dim { k, parity, without_y } => dim(&ctx, *k, parity.require()?, *without_y),
        Command::Reduce { k, parity, input, rewrite } => reduce(&ctx, *k, parity, input, *rewrite),
        Command::CheckCocycle { k, parity, convention } => check_cocycle(&ctx, *k, parity.require()?, *convention),
        Command::Bound { k } => bound(*k),
        Command::Weight { k, parity, input, check } => weight(&ctx, *k, parity, input, *check),
        Command::Linking { n, j, samples, seed, method, offset, antipodal } => {
            linking(*n, *j, *samples, *seed, *method, *offset, *antipodal)
        }
        Command::VerifyPaper { only } => verify_paper(&ctx, only),
    }
}

fn render_table(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_table(x, indent + 1, out);
                    }
                    Value::Array(a) if a.iter().any(|e| e.is_object() || e.is_array()) => {
                        out.push_str(&format!("{pad}{k}: ({} entries)\n", a.len()));
                        for e in a {
                            out.push_str(&format!("{pad}  -\n"));
                            render_table(e, indent + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k:<24} {}\n", scalar(x))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn verify_matrix(body: &Value) -> String {
    let mut out = String::new();
    for c in body["criteria"].as_array().into_iter().flatten() {
        out.push_str(&format!(
            "{:>2}  {:<4}  {:<44} {}\n",
            c["id"],
            if c["passed"] == json!(true) { "PASS" } else { "FAIL" },
            c["name"].as_str().unwrap_or(""),
            c["detail"].as_str().unwrap_or("")
        ));
    }
    out
}

/// Runs the parsed command. Returns what to print on stdout and the exit
/// code; errors are rendered as a JSON error report.
pub fn run(cli: &Cli) -> (String, i32) {
    if let Some(t) = cli.threads {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let name = cli.command.name();
    match dispatch(cli) {
        Ok(o) => {
            let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": name });
            if let (Value::Object(d), Value::Object(b)) = (&mut doc, o.body.clone()) {
                d.extend(b);
            }
            let text = match cli.format {
                OutputFormat::Json => serde_json::to_string_pretty(&doc).unwrap() + "\n",
                OutputFormat::Table if name == "verify-paper" => verify_matrix(&o.body),
                OutputFormat::Table => {
                    let mut s = String::new();
                    render_table(&doc, 0, &mut s);
                    s
                }
            };
            (text, if o.passed { exit::PASS } else { exit::VERIFICATION_FAILED })
        }
        Err(e) => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": name,
                "error": e.to_string(),
                "exit_code": e.exit_code(),
            });
            (serde_json::to_string_pretty(&doc).unwrap() + "\n", e.exit_code())
        }
    }
}
