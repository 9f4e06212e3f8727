use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;

use dynsep::bmm::BoolMatrix;
use dynsep::experiment::{run_experiment, run_seeds, write_reports_csv, Algorithm, ExperimentConfig, Policy, RunReport};
use dynsep::gen;
use dynsep::oracle;
use dynsep::reductions::{self, TripartiteInstance};
use dynsep::rng::{derive, rng};
use dynsep::trace::Trace;
use dynsep::triangle_values::triangle_stats;
use dynsep::Graph;

type BoxError = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(name = "dynsep", version, about = "Dynamic clique, MIS and triangle structures with oracle-checked experiments")]
struct Cli {
    /// Master seed; every random choice is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write per-update (or per-item) results to this CSV file.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Check outputs against brute-force oracles.
    #[arg(long, global = true, value_enum, default_value_t = Verify::Auto)]
    verify: Verify,
    /// Largest vertex count the oracles are run on.
    #[arg(long, global = true, default_value_t = oracle::DEFAULT_GUARD)]
    oracle_guard: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Verify {
    Auto,
    Off,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance in edge-list format.
    Gen(GenArgs),
    /// Print size, degree and triangle statistics of a graph.
    Stats { graph: PathBuf },
    /// Dynamic MIS under a trace or an adaptive policy.
    Mis(RunArgs),
    /// Decremental triangle detection.
    DecrTriangle(RunArgs),
    /// Maximal clique through a single low-degree pivot.
    CliquePivot(RunArgs),
    /// Clique that is maximal or has at least three vertices.
    Clique3(RunArgs),
    /// Maximal clique in every connected component.
    Mccc(RunArgs),
    /// Run a reduction on an input instance.
    Reduce(ReduceArgs),
    /// Repeat an experiment over several seeds on generated instances.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Gnp,
    Regular,
    Tripartite,
    K4Lattice,
}

#[derive(Args, Clone)]
struct InstanceArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Edge probability (gnp, tripartite).
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// Degree (regular).
    #[arg(long, default_value_t = 8)]
    d: usize,
    /// Degree cap (tripartite); defaults to floor(sqrt(n)).
    #[arg(long)]
    cap: Option<usize>,
    /// Lattice rows and columns (k4-lattice).
    #[arg(long, default_value_t = 2)]
    rows: usize,
    #[arg(long, default_value_t = 2)]
    cols: usize,
}

impl InstanceArgs {
    fn cap(&self) -> usize {
        self.cap.unwrap_or_else(|| (self.n as f64).sqrt().floor() as usize)
    }

    fn graph(&self, seed: u64) -> Result<Graph, BoxError> {
        Ok(match self.kind {
            Kind::Gnp => gen::gnp(self.n, self.p, seed)?,
            Kind::Regular => gen::regular(self.n, self.d, seed)?,
            Kind::Tripartite => gen::tripartite(self.n, self.p, Some(self.cap()), seed)?.graph().clone(),
            Kind::K4Lattice => gen::k4_lattice(self.rows, self.cols),
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Output file; stdout if omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write a full deletion trace (JSON lines) for the instance.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Graph in edge-list format.
    graph: PathBuf,
    /// Trace file (JSON lines); only with the oblivious policy.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// oblivious, kill-active or kill-output-vertex.
    #[arg(long, default_value = "oblivious")]
    policy: String,
    /// Length of generated MIS traces.
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    /// Write the executed updates as a trace file.
    #[arg(long)]
    emit_trace: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Reduction {
    Aetd,
    TriFdmc,
    TriIncmis,
    Oumv,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(value_enum)]
    which: Reduction,
    /// Tripartite edge list (aetd), edge list (tri-*), or 0/1 matrix (oumv).
    input: PathBuf,
    /// Number of random queries for oumv; defaults to n.
    #[arg(long)]
    queries: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    algorithm: String,
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value = "oblivious")]
    policy: String,
    #[arg(long, default_value_t = 10)]
    reps: u64,
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
}

#[derive(Serialize)]
struct ReductionRow {
    reduction: &'static str,
    item: String,
    answer: bool,
    expected: Option<bool>,
    forced_insertions: u64,
    forced_deletions: u64,
    resets: usize,
}

fn open(path: &Path) -> Result<BufReader<File>, BoxError> {
    File::open(path).map(BufReader::new).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn create(path: &Path) -> Result<BufWriter<File>, BoxError> {
    File::create(path).map(BufWriter::new).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn read_graph(path: &Path) -> Result<Graph, BoxError> {
    Ok(Graph::read_edge_list(open(path)?)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Returns `Ok(false)` when some output failed verification.
fn run(cli: &Cli) -> Result<bool, BoxError> {
    let verify = cli.verify == Verify::Auto;
    match &cli.cmd {
        Cmd::Gen(a) => generate(a, cli.seed).map(|_| true),
        Cmd::Stats { graph } => stats(&read_graph(graph)?).map(|_| true),
        Cmd::Mis(a) => single(Algorithm::Mis, a, cli),
        Cmd::DecrTriangle(a) => single(Algorithm::DecrTriangle, a, cli),
        Cmd::CliquePivot(a) => single(Algorithm::CliquePivot, a, cli),
        Cmd::Clique3(a) => single(Algorithm::Clique3, a, cli),
        Cmd::Mccc(a) => single(Algorithm::Mccc, a, cli),
        Cmd::Reduce(a) => reduce(a, cli.seed, verify, cli.oracle_guard, cli.csv.as_deref()),
        Cmd::Bench(a) => bench(a, cli),
    }
}

fn generate(a: &GenArgs, seed: u64) -> Result<(), BoxError> {
    let mut out: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let g = if a.instance.kind == Kind::Tripartite {
        let t = gen::tripartite(a.instance.n, a.instance.p, Some(a.instance.cap()), seed)?;
        t.write_edge_list(&mut out)?;
        t.graph().clone()
    } else {
        let g = a.instance.graph(seed)?;
        g.write_edge_list(&mut out)?;
        g
    };
    out.flush()?;
    if let Some(p) = &a.trace {
        let mut w = create(p)?;
        Trace::full_deletion(&g, derive(seed, 1)).write_jsonl(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn stats(g: &Graph) -> Result<(), BoxError> {
    let s = triangle_stats(g);
    println!(
        "n={} m={} max_degree={} triangles={} triangle_edges={} edge_value_total={:.6}",
        g.n(),
        g.m(),
        g.max_degree(),
        s.triangle_count(),
        s.triangle_edge_count(),
        s.edge_value_total()
    );
    Ok(())
}

fn config(algorithm: Algorithm, policy: &str, steps: usize, cli: &Cli, seed: u64) -> Result<ExperimentConfig, BoxError> {
    let mut cfg = ExperimentConfig::new(algorithm, policy.parse::<Policy>()?, seed);
    cfg.verify = cli.verify == Verify::Auto;
    cfg.oracle_guard = cli.oracle_guard;
    cfg.steps = steps;
    Ok(cfg)
}

fn finish(reports: &[RunReport], csv: Option<&Path>) -> Result<bool, BoxError> {
    for r in reports {
        println!("{}", r.summary_line());
    }
    if let Some(p) = csv {
        write_reports_csv(reports, create(p)?)?;
    }
    Ok(reports.iter().all(RunReport::ok))
}

fn single(algorithm: Algorithm, a: &RunArgs, cli: &Cli) -> Result<bool, BoxError> {
    let g = read_graph(&a.graph)?;
    let trace = match &a.trace {
        Some(p) => Some(Trace::read_jsonl(open(p)?, cli.seed)?),
        None => None,
    };
    let cfg = config(algorithm, &a.policy, a.steps, cli, cli.seed)?;
    let report = run_experiment(&g, trace.as_ref(), &cfg)?;
    if let Some(p) = &a.emit_trace {
        let mut w = create(p)?;
        report.trace.write_jsonl(&mut w)?;
        w.flush()?;
    }
    finish(std::slice::from_ref(&report), cli.csv.as_deref())
}

fn bench(a: &BenchArgs, cli: &Cli) -> Result<bool, BoxError> {
    let algorithm: Algorithm = a.algorithm.parse()?;
    let seeds: Vec<u64> = (0..a.reps).map(|i| cli.seed + i).collect();
    let results = run_seeds(&seeds, |s| -> Result<RunReport, String> {
        let g = a.instance.graph(derive(s, 0)).map_err(|e| e.to_string())?;
        let cfg = config(algorithm, &a.policy, a.steps, cli, s).map_err(|e| e.to_string())?;
        run_experiment(&g, None, &cfg).map_err(|e| e.to_string())
    });
    let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    finish(&reports, cli.csv.as_deref())
}

fn reduce(a: &ReduceArgs, seed: u64, verify: bool, guard: usize, csv: Option<&Path>) -> Result<bool, BoxError> {
    let mut rows = Vec::new();
    let mut ok = true;
    match a.which {
        Reduction::Aetd => {
            let inst = TripartiteInstance::read_edge_list(open(&a.input)?)?;
            let out = reductions::solve_aetd_via_mccc(&inst, seed)?;
            let truth = (verify && inst.graph().n() <= guard).then(|| oracle::oracle_aetd(&inst, guard)).transpose()?;
            for (i, &(e, ans)) in out.answers.iter().enumerate() {
                let expected = truth.as_ref().map(|t| t[i].1);
                ok &= expected.is_none_or(|x| x == ans);
                rows.push(ReductionRow {
                    reduction: "aetd",
                    item: format!("{}-{}", e.u, e.v),
                    answer: ans,
                    expected,
                    forced_insertions: 0,
                    forced_deletions: out.deletions,
                    resets: out.repivots,
                });
            }
            println!(
                "reduction=aetd edges={} yes={} deletions={} triangles_reported={} repivots={} work={}",
                out.answers.len(),
                out.answers.iter().filter(|x| x.1).count(),
                out.deletions,
                out.triangles_reported,
                out.repivots,
                out.work
            );
        }
        Reduction::TriFdmc | Reduction::TriIncmis => {
            let g = read_graph(&a.input)?;
            let expected = (verify && g.n() <= guard).then(|| oracle::oracle_triangle(&g, guard)).transpose()?;
            let (name, answer, ins, del) = if a.which == Reduction::TriFdmc {
                let o = reductions::solve_triangle_via_fd_clique(&g)?;
                ("tri-fdmc", o.has_triangle, o.insertions, o.deletions)
            } else {
                let o = reductions::solve_triangle_via_incr_mis(&g)?;
                ("tri-incmis", o.has_triangle, o.insertions, 0)
            };
            ok &= expected.is_none_or(|x| x == answer);
            println!("reduction={name} n={} m={} triangle={answer} forced_insertions={ins} forced_deletions={del}", g.n(), g.m());
            rows.push(ReductionRow {
                reduction: name,
                item: "graph".into(),
                answer,
                expected,
                forced_insertions: ins,
                forced_deletions: del,
                resets: 0,
            });
        }
        Reduction::Oumv => {
            let m = BoolMatrix::parse_text(&std::fs::read_to_string(&a.input)?)?;
            let n = m.rows();
            let mut r = rng(derive(seed, 5));
            let queries: Vec<(Vec<usize>, Vec<usize>)> = (0..a.queries.unwrap_or(n))
                .map(|_| {
                    let xs = (0..n).filter(|_| r.gen_bool(0.5)).collect();
                    let ys = (0..m.cols()).filter(|_| r.gen_bool(0.5)).collect();
                    (xs, ys)
                })
                .collect();
            let out = reductions::oumv_via_incr_triangle(&m, &queries)?;
            for (i, ((xs, ys), &ans)) in queries.iter().zip(&out.answers).enumerate() {
                let expected = verify.then(|| xs.iter().any(|&x| ys.iter().any(|&y| m.get(x, y))));
                ok &= expected.is_none_or(|x| x == ans);
                rows.push(ReductionRow {
                    reduction: "oumv",
                    item: i.to_string(),
                    answer: ans,
                    expected,
                    forced_insertions: 0,
                    forced_deletions: 0,
                    resets: out.reset_count,
                });
            }
            println!(
                "reduction=oumv n={n} queries={} yes={} groups={} resets={} bound={}",
                queries.len(),
                out.answers.iter().filter(|&&x| x).count(),
                out.groups,
                out.reset_count,
                n + out.groups.pow(3)
            );
        }
    }
    if let Some(p) = csv {
        let mut w = csv::Writer::from_writer(create(p)?);
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    Ok(ok)
}
