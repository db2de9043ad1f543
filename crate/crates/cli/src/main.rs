// Negated comparisons like `!(x > 0.0)` are load-bearing: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Command-line front end: evaluate merit functions, run the verification
//! suite, sweep the regularization parameter, and trace externally produced
//! iterate sequences. All output is CSV; plotting is left to other tools.
//!
//! Exit codes: 0 success (verify: all checks pass), 1 verification failure,
//! 2 evaluation failure (rows carry an error column), 64 usage error,
//! 65 malformed input data, 66 unreadable or unwritable file.
//!
//! The MERIT_LOG environment variable (off | info | debug) controls progress
//! notes on stderr.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use momerit_core::merit::{
    eval_u0, eval_u_ell, eval_w_ell, DualSolveConfig, MeritEvaluation, MeritKind,
};
use momerit_core::problem::MultiobjectiveProblem;
use momerit_core::verify::{self, CheckId, ProblemRef, SamplePlan, TheoremCheck};
use momerit_core::zoo::{self, KnownSolutions, ProblemSpec};

const EXIT_OK: i32 = 0;
const EXIT_VERIFY_FAIL: i32 = 1;
const EXIT_EVAL_FAIL: i32 = 2;
const EXIT_USAGE: i32 = 64;
const EXIT_DATA: i32 = 65;
const EXIT_FILE: i32 = 66;

#[derive(Parser)]
#[command(
    name = "momerit",
    version,
    about = "Merit functions for multiobjective optimization: evaluate, verify, sweep, trace"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a merit function at one or more points.
    Eval(EvalArgs),
    /// Run property checks and write text + CSV reports.
    Verify(VerifyArgs),
    /// Evaluate one merit across a grid of regularization parameters.
    Sweep(SweepArgs),
    /// Score an externally produced iterate sequence, one merit value per row.
    Trace(TraceArgs),
    /// List built-in problems.
    ZooList(ZooListArgs),
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Built-in problem id (see `momerit zoo-list`).
    #[arg(long, conflicts_with = "spec")]
    builtin: Option<String>,
    /// Path to a problem-spec JSON document.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SolveArgs {
    /// Frank-Wolfe duality-gap tolerance.
    #[arg(long)]
    gap_tol: Option<f64>,
    /// Inner proximal-gradient residual tolerance.
    #[arg(long)]
    inner_tol: Option<f64>,
    /// Points per axis for grid-routed evaluations (0 = per-dimension default).
    #[arg(long, default_value_t = 0)]
    grid_resolution: usize,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Merit kind: u0 | u_ell | w_ell.
    #[arg(long)]
    kind: String,
    /// Regularization parameter (required for u_ell and w_ell).
    #[arg(long)]
    ell: Option<f64>,
    /// Inline points: coordinates comma-separated, points semicolon-separated
    /// (for 1-D problems a plain comma list is a list of points).
    #[arg(long)]
    points: Option<String>,
    /// CSV file of points with header x1,...,xn.
    #[arg(long)]
    points_csv: Option<PathBuf>,
    /// Sample this many random feasible points instead.
    #[arg(long)]
    sample_points: Option<usize>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluate points with this many threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Restrict to these check ids (comma-separated, e.g. NONNEG_U0,ERROR_BOUND_W).
    #[arg(long)]
    checks: Option<String>,
    /// Directory for report.txt and report.csv.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Merit kind: u_ell | w_ell.
    #[arg(long)]
    kind: String,
    /// Comma-separated regularization grid, e.g. 1,2,4.
    #[arg(long)]
    ell_grid: String,
    #[arg(long)]
    points: Option<String>,
    #[arg(long)]
    points_csv: Option<PathBuf>,
    #[arg(long)]
    sample_points: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    solve: SolveArgs,
}

#[derive(Args)]
struct ZooListArgs {
    /// Print the catalogued solution/non-solution points of one builtin
    /// instead of the summary table.
    #[arg(long)]
    known: Option<String>,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Merit kind: u0 | u_ell | w_ell.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    ell: Option<f64>,
    /// CSV of iterates with header x1,...,xn, one iterate per row.
    #[arg(long)]
    points_csv: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    solve: SolveArgs,
}

enum Failure {
    Usage(String),
    Data(String),
    File(String),
}

impl Failure {
    fn report(&self) -> i32 {
        let (code, msg) = match self {
            Failure::Usage(m) => (EXIT_USAGE, m),
            Failure::Data(m) => (EXIT_DATA, m),
            Failure::File(m) => (EXIT_FILE, m),
        };
        eprintln!("momerit: {msg}");
        code
    }
}

fn log_level() -> u8 {
    match std::env::var("MERIT_LOG").as_deref() {
        Ok("debug") => 2,
        Ok("info") => 1,
        _ => 0,
    }
}

fn log(level: u8, msg: &str) {
    if log_level() >= level {
        eprintln!("momerit: {msg}");
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Trace(args) => cmd_trace(args),
        Command::ZooList(args) => cmd_zoo_list(args),
    }
    .unwrap_or_else(|f| f.report());
    std::process::exit(code);
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn load_source(source: &SourceArgs) -> Result<(String, ProblemSpec), Failure> {
    match (&source.builtin, &source.spec) {
        (Some(id), None) => {
            let entry = zoo::builtin(id)
                .map_err(|e| Failure::Usage(format!("unknown builtin: {e}")))?;
            Ok((entry.id, entry.spec))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::File(format!("cannot read {}: {e}", path.display())))?;
            let spec = zoo::parse_spec(&text)
                .map_err(|e| Failure::Data(format!("bad problem spec: {e}")))?;
            spec.validate()
                .map_err(|e| Failure::Data(format!("bad problem spec: {e}")))?;
            Ok((path.display().to_string(), spec))
        }
        _ => Err(Failure::Usage(
            "exactly one problem source required: --builtin ID or --spec PATH".to_string(),
        )),
    }
}

fn build_problem(spec: &ProblemSpec) -> Result<MultiobjectiveProblem, Failure> {
    spec.build()
        .map_err(|e| Failure::Data(format!("cannot build problem: {e}")))
}

fn solve_config(s: &SolveArgs) -> Result<DualSolveConfig, Failure> {
    let mut cfg = DualSolveConfig::default();
    if let Some(g) = s.gap_tol {
        if !(g > 0.0) {
            return Err(Failure::Usage("--gap-tol must be positive".to_string()));
        }
        cfg.gap_tol = g;
    }
    if let Some(t) = s.inner_tol {
        if !(t > 0.0) {
            return Err(Failure::Usage("--inner-tol must be positive".to_string()));
        }
        cfg.inner.tol = t;
    }
    cfg.grid_resolution = s.grid_resolution;
    Ok(cfg)
}

fn parse_kind(s: &str) -> Result<MeritKind, Failure> {
    MeritKind::parse(s)
        .ok_or_else(|| Failure::Usage(format!("unknown merit kind `{s}` (u0 | u_ell | w_ell)")))
}

fn require_ell(kind: MeritKind, ell: Option<f64>) -> Result<f64, Failure> {
    match kind {
        MeritKind::U0 => Ok(0.0),
        _ => {
            let ell = ell.ok_or_else(|| {
                Failure::Usage("--ell is required for u_ell and w_ell".to_string())
            })?;
            if !(ell > 0.0) {
                return Err(Failure::Usage("--ell must be positive".to_string()));
            }
            Ok(ell)
        }
    }
}

fn parse_inline_points(text: &str, n: usize) -> Result<Vec<Vec<f64>>, Failure> {
    let parse_coord = |s: &str| -> Result<f64, Failure> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Failure::Data(format!("cannot parse coordinate `{s}`")))
    };
    let groups: Vec<&str> = if text.contains(';') {
        text.split(';').collect()
    } else if n == 1 {
        // 1-D convenience: a comma list is a list of points.
        return text
            .split(',')
            .map(|s| Ok(vec![parse_coord(s)?]))
            .collect();
    } else {
        vec![text]
    };
    groups
        .into_iter()
        .map(|g| {
            let coords: Result<Vec<f64>, Failure> = g.split(',').map(parse_coord).collect();
            let coords = coords?;
            if coords.len() != n {
                return Err(Failure::Data(format!(
                    "point `{g}` has {} coordinates, problem dimension is {n}",
                    coords.len()
                )));
            }
            Ok(coords)
        })
        .collect()
}

fn read_points_csv(path: &Path, n: usize) -> Result<Vec<Vec<f64>>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::File(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Failure::Data("points CSV is empty".to_string()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let expected: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
    if cols != expected.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(Failure::Data(format!(
            "points CSV header `{header}` does not match dimension {n} (expected {})",
            expected.join(",")
        )));
    }
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let coords: Result<Vec<f64>, _> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect();
        let coords = coords.map_err(|_| {
            Failure::Data(format!("bad number on data row {}", lineno + 1))
        })?;
        if coords.len() != n {
            return Err(Failure::Data(format!(
                "row {} has {} coordinates, expected {n}",
                lineno + 1,
                coords.len()
            )));
        }
        out.push(coords);
    }
    Ok(out)
}

fn sample_feasible_points(
    p: &MultiobjectiveProblem,
    known: Option<&KnownSolutions>,
    count: usize,
    seed: u64,
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = known
        .and_then(|k| k.sample_box.clone())
        .or_else(|| p.feasible_set().bounding_box())
        .unwrap_or_else(|| momerit_core::problem::BoundingBox::new(
            vec![-2.0; p.dimension()],
            vec![2.0; p.dimension()],
        ));
    (0..count)
        .map(|_| {
            let raw: Vec<f64> = (0..p.dimension())
                .map(|j| rng.random_range(b.lo[j]..=b.hi[j]))
                .collect();
            p.feasible_set().project(&raw)
        })
        .collect()
}

fn resolve_points(
    p: &MultiobjectiveProblem,
    known: Option<&KnownSolutions>,
    inline: &Option<String>,
    csv: &Option<PathBuf>,
    sample: Option<usize>,
    seed: u64,
) -> Result<Vec<Vec<f64>>, Failure> {
    let n = p.dimension();
    match (inline, csv, sample) {
        (Some(text), None, None) => parse_inline_points(text, n),
        (None, Some(path), None) => read_points_csv(path, n),
        (None, None, Some(k)) => Ok(sample_feasible_points(p, known, k, seed)),
        (None, None, None) => Err(Failure::Usage(
            "a points source is required: --points, --points-csv, or --sample-points".to_string(),
        )),
        _ => Err(Failure::Usage(
            "use exactly one of --points, --points-csv, --sample-points".to_string(),
        )),
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::File(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn evaluate(
    p: &MultiobjectiveProblem,
    kind: MeritKind,
    x: &[f64],
    ell: f64,
    cfg: &DualSolveConfig,
) -> Result<MeritEvaluation, String> {
    let r = match kind {
        MeritKind::U0 => eval_u0(p, x, cfg),
        MeritKind::UEll => eval_u_ell(p, x, ell, cfg),
        MeritKind::WEll => eval_w_ell(p, x, ell, cfg),
    };
    r.map_err(|e| e.to_string().replace([',', '\n'], ";"))
}

/// Run `work` over indices 0..count on `jobs` threads; results keep input
/// order regardless of completion order.
fn indexed_parallel<T: Send, F>(count: usize, jobs: usize, work: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync,
{
    let jobs = jobs.max(1).min(count.max(1));
    if jobs == 1 {
        return (0..count).map(&work).collect();
    }
    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    let chunks: Vec<(usize, &mut [Option<T>])> = {
        let mut v = Vec::new();
        let mut rest = slots.as_mut_slice();
        let base = count / jobs;
        let extra = count % jobs;
        let mut start = 0;
        for t in 0..jobs {
            let len = base + usize::from(t < extra);
            let (head, tail) = rest.split_at_mut(len);
            v.push((start, head));
            rest = tail;
            start += len;
        }
        v
    };
    std::thread::scope(|scope| {
        for (start, chunk) in chunks {
            let work = &work;
            scope.spawn(move || {
                for (offset, slot) in chunk.iter_mut().enumerate() {
                    *slot = Some(work(start + offset));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}

fn join_coords(x: &[f64]) -> String {
    x.iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_eval(args: EvalArgs) -> Result<i32, Failure> {
    let (label, spec) = load_source(&args.source)?;
    let p = build_problem(&spec)?;
    let kind = parse_kind(&args.kind)?;
    let ell = require_ell(kind, args.ell)?;
    let cfg = solve_config(&args.solve)?;
    let points = resolve_points(
        &p,
        spec.known.as_ref(),
        &args.points,
        &args.points_csv,
        args.sample_points,
        args.seed,
    )?;
    log(1, &format!("evaluating {} points on {label}", points.len()));

    let n = p.dimension();
    let m = p.objective_count();
    let mut csv = String::from("point_index,");
    csv.push_str(&(1..=n).map(|j| format!("x{j}")).collect::<Vec<_>>().join(","));
    csv.push_str(",kind,ell,value,fw_gap,");
    csv.push_str(&(1..=m).map(|i| format!("w{i}")).collect::<Vec<_>>().join(","));
    csv.push(',');
    csv.push_str(&(1..=n).map(|j| format!("y{j}")).collect::<Vec<_>>().join(","));
    csv.push_str(",error\n");

    let results = indexed_parallel(points.len(), args.jobs, |i| {
        log(2, &format!("point {i}"));
        evaluate(&p, kind, &points[i], ell, &cfg)
    });
    let mut failures = 0;
    for (i, result) in results.iter().enumerate() {
        match result {
            Ok(ev) => {
                csv.push_str(&format!(
                    "{i},{},{},{},{},{},{},{},\n",
                    join_coords(&points[i]),
                    kind.as_str(),
                    ev.ell,
                    ev.value,
                    ev.fw_gap,
                    join_coords(ev.dual_weights.as_slice()),
                    join_coords(&ev.maximizer),
                ));
            }
            Err(msg) => {
                failures += 1;
                csv.push_str(&format!(
                    "{i},{},{},{ell},,,{},{},{msg}\n",
                    join_coords(&points[i]),
                    kind.as_str(),
                    vec![""; m].join(","),
                    vec![""; n].join(","),
                ));
            }
        }
    }
    write_output(&args.out, &csv)?;
    Ok(if failures > 0 { EXIT_EVAL_FAIL } else { EXIT_OK })
}

fn cmd_sweep(args: SweepArgs) -> Result<i32, Failure> {
    let (label, spec) = load_source(&args.source)?;
    let p = build_problem(&spec)?;
    let kind = parse_kind(&args.kind)?;
    if kind == MeritKind::U0 {
        return Err(Failure::Usage(
            "sweep varies the regularization parameter; use u_ell or w_ell".to_string(),
        ));
    }
    let cfg = solve_config(&args.solve)?;
    let ells: Result<Vec<f64>, _> = args
        .ell_grid
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect();
    let ells = ells.map_err(|_| Failure::Usage("cannot parse --ell-grid".to_string()))?;
    if ells.is_empty() || ells.iter().any(|e| !(*e > 0.0)) {
        return Err(Failure::Usage(
            "--ell-grid needs a nonempty list of positive values".to_string(),
        ));
    }
    let points = resolve_points(
        &p,
        spec.known.as_ref(),
        &args.points,
        &args.points_csv,
        args.sample_points,
        args.seed,
    )?;
    log(
        1,
        &format!("sweeping {} ells over {} points on {label}", ells.len(), points.len()),
    );

    let n = p.dimension();
    let mut csv = String::from("point_index,");
    csv.push_str(&(1..=n).map(|j| format!("x{j}")).collect::<Vec<_>>().join(","));
    csv.push_str(",kind,ell,value,fw_gap,error\n");

    let tasks: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|i| (0..ells.len()).map(move |e| (i, e)))
        .collect();
    let results = indexed_parallel(tasks.len(), args.jobs, |t| {
        let (i, e) = tasks[t];
        evaluate(&p, kind, &points[i], ells[e], &cfg)
    });
    let mut failures = 0;
    for (t, result) in results.iter().enumerate() {
        let (i, e) = tasks[t];
        match result {
            Ok(ev) => csv.push_str(&format!(
                "{i},{},{},{},{},{},\n",
                join_coords(&points[i]),
                kind.as_str(),
                ells[e],
                ev.value,
                ev.fw_gap,
            )),
            Err(msg) => {
                failures += 1;
                csv.push_str(&format!(
                    "{i},{},{},{},,,{msg}\n",
                    join_coords(&points[i]),
                    kind.as_str(),
                    ells[e],
                ));
            }
        }
    }
    write_output(&args.out, &csv)?;
    Ok(if failures > 0 { EXIT_EVAL_FAIL } else { EXIT_OK })
}

fn cmd_trace(args: TraceArgs) -> Result<i32, Failure> {
    let (label, spec) = load_source(&args.source)?;
    let p = build_problem(&spec)?;
    let kind = parse_kind(&args.kind)?;
    let ell = require_ell(kind, args.ell)?;
    let cfg = solve_config(&args.solve)?;
    let iterates = read_points_csv(&args.points_csv, p.dimension())?;
    log(1, &format!("tracing {} iterates on {label}", iterates.len()));

    let mut csv = String::from("iterate,value,error\n");
    let mut failures = 0;
    for (i, x) in iterates.iter().enumerate() {
        match evaluate(&p, kind, x, ell, &cfg) {
            Ok(ev) => csv.push_str(&format!("{i},{},\n", ev.value)),
            Err(msg) => {
                failures += 1;
                csv.push_str(&format!("{i},,{msg}\n"));
            }
        }
    }
    write_output(&args.out, &csv)?;
    Ok(if failures > 0 { EXIT_EVAL_FAIL } else { EXIT_OK })
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Failure> {
    let cfg = solve_config(&args.solve)?;
    let filter: Option<Vec<CheckId>> = match &args.checks {
        None => None,
        Some(list) => {
            let ids: Result<Vec<CheckId>, Failure> = list
                .split(',')
                .map(|name| {
                    CheckId::parse(name.trim()).ok_or_else(|| {
                        Failure::Usage(format!("unknown check id `{}`", name.trim()))
                    })
                })
                .collect();
            Some(ids?)
        }
    };

    let mut suite = match (&args.source.builtin, &args.source.spec) {
        (None, None) => verify::default_suite(args.seed, &cfg),
        _ => {
            let (label, spec) = load_source(&args.source)?;
            single_problem_suite(label, spec, args.seed, &cfg)
        }
    };
    if let Some(ids) = filter {
        suite.retain(|c| ids.contains(&c.id));
        if suite.is_empty() {
            return Err(Failure::Usage(
                "the check filter removed every check".to_string(),
            ));
        }
    }
    log(1, &format!("running {} checks", suite.len()));
    let report = verify::run_all(&suite, &cfg);

    fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure::File(format!("cannot create {}: {e}", args.out_dir.display())))?;
    let text = report.render_text();
    let csv = report.to_csv();
    fs::write(args.out_dir.join("report.txt"), &text)
        .map_err(|e| Failure::File(format!("cannot write report.txt: {e}")))?;
    fs::write(args.out_dir.join("report.csv"), &csv)
        .map_err(|e| Failure::File(format!("cannot write report.csv: {e}")))?;
    print!("{text}");
    Ok(if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAIL
    })
}

/// Suite over a single user problem: every check whose prerequisites the
/// problem can satisfy; checks skip what does not apply.
fn single_problem_suite(
    label: String,
    spec: ProblemSpec,
    seed: u64,
    cfg: &DualSolveConfig,
) -> Vec<TheoremCheck> {
    let eps = cfg.epsilon_eval();
    let tol = 10.0 * eps;
    let problems = vec![ProblemRef::Inline {
        label,
        spec: Box::new(spec),
    }];
    let plan = |salt: u64, points: usize, ell_grid: Vec<f64>| SamplePlan {
        problems: problems.clone(),
        points,
        ell_grid,
        seed: seed.wrapping_add(salt),
    };
    vec![
        TheoremCheck {
            id: CheckId::NonnegU0,
            plan: plan(1, 8, vec![]),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::IffWeakParetoU0,
            plan: plan(2, 0, vec![]),
            tolerance: eps,
        },
        TheoremCheck {
            id: CheckId::NonnegUEll,
            plan: plan(3, 8, vec![0.5, 1.0, 2.0]),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::IffWeakParetoUEll,
            plan: plan(4, 0, vec![1.0]),
            tolerance: eps,
        },
        TheoremCheck {
            id: CheckId::NonnegWEll,
            plan: plan(5, 8, vec![0.5, 1.0, 2.0]),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::IffStationaryWEll,
            plan: plan(6, 0, vec![0.5, 1.0]),
            tolerance: eps,
        },
        TheoremCheck {
            id: CheckId::BetweenConvex,
            plan: plan(7, 6, vec![0.5, 1.5]),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::BetweenLipschitz,
            plan: plan(8, 6, vec![3.0, 5.0]),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::InnerScalingW,
            plan: plan(9, 6, vec![0.5, 1.0, 2.0]),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::InnerScalingU,
            plan: plan(10, 6, vec![0.5, 1.0, 2.0]),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::LevelBoundedProbe,
            plan: plan(11, 0, vec![]),
            tolerance: 0.5,
        },
        TheoremCheck {
            id: CheckId::ErrorBoundW,
            plan: plan(12, 8, vec![0.5, 1.0, 4.0]),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::ErrorBoundU,
            plan: plan(13, 8, vec![0.5, 1.0, 4.0]),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::ErrorBoundU0,
            plan: plan(14, 8, vec![]),
            tolerance: tol,
        },
        TheoremCheck {
            id: CheckId::RemarkWEqualsU,
            plan: plan(15, 8, vec![0.5, 1.0, 2.0]),
            tolerance: 2.0 * eps,
        },
    ]
}

fn cmd_zoo_list(args: ZooListArgs) -> Result<i32, Failure> {
    if let Some(id) = &args.known {
        let entry = zoo::builtin(id)
            .map_err(|e| Failure::Usage(format!("unknown builtin: {e}")))?;
        print!("{}", entry.known_points_csv());
        return Ok(EXIT_OK);
    }
    let mut out = String::from("id,dimension,objectives,provenance\n");
    for id in zoo::builtin_ids() {
        let entry = zoo::builtin(id).expect("listed builtins exist");
        out.push_str(&format!(
            "{},{},{},\"{}\"\n",
            entry.id,
            entry.spec.dimension,
            entry.spec.objectives.len(),
            entry.provenance
        ));
    }
    print!("{out}");
    Ok(EXIT_OK)
}
