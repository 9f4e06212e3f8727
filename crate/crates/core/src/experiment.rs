//! Experiment runner: drives one algorithm through a trace or an adaptive
//! policy, checks every output against the oracles and records a CSV row
//! per update.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::clique::{CliqueError, MccConfig, Mccc, PivotClique, ThreeMaxClique};
use crate::decr_triangle::DecrTriangle;
use crate::graph::{Edge, Graph, GraphError};
use crate::mis::{CounterMis, MisBackend};
use crate::oracle::{self, TriangleWatch};
use crate::rng::{derive, rng};
use crate::trace::{Op, Trace, TraceError, TraceMode, Update};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("unknown policy `{0}`")]
    UnknownPolicy(String),
    #[error("policy `{policy}` does not apply to `{algorithm}`")]
    PolicyMismatch { algorithm: Algorithm, policy: Policy },
    #[error("`{0}` only accepts deletions")]
    NotDecremental(Algorithm),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Clique(CliqueError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Algorithm {
    Mis,
    DecrTriangle,
    CliquePivot,
    Clique3,
    Mccc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::Mis, Algorithm::DecrTriangle, Algorithm::CliquePivot, Algorithm::Clique3, Algorithm::Mccc];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mis => "mis",
            Algorithm::DecrTriangle => "decr-triangle",
            Algorithm::CliquePivot => "clique-pivot",
            Algorithm::Clique3 => "clique3",
            Algorithm::Mccc => "mccc",
        }
    }

    fn decremental(self) -> bool {
        self != Algorithm::Mis
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| ExperimentError::UnknownAlgorithm(s.into()))
    }
}

/// Where the updates come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Policy {
    /// A fixed trace, given or generated up front.
    Oblivious,
    /// Delete an edge of the reported triangle.
    KillActive,
    /// Delete (or, for MIS, insert) an edge touching the reported set.
    KillOutputVertex,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::Oblivious => "oblivious",
            Policy::KillActive => "kill-active",
            Policy::KillOutputVertex => "kill-output-vertex",
        }
    }

    fn applies_to(self, a: Algorithm) -> bool {
        match self {
            Policy::Oblivious => true,
            Policy::KillActive => matches!(a, Algorithm::DecrTriangle | Algorithm::Clique3),
            Policy::KillOutputVertex => a != Algorithm::DecrTriangle,
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Policy::Oblivious, Policy::KillActive, Policy::KillOutputVertex]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| ExperimentError::UnknownPolicy(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub policy: Policy,
    pub seed: u64,
    pub verify: bool,
    pub oracle_guard: usize,
    /// Length of generated MIS traces.
    pub steps: usize,
    pub mccc: MccConfig,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, policy: Policy, seed: u64) -> Self {
        ExperimentConfig {
            algorithm,
            policy,
            seed,
            verify: true,
            oracle_guard: oracle::DEFAULT_GUARD,
            steps: 10_000,
            mccc: MccConfig::default(),
        }
    }
}

/// One CSV row: the initial state (`op = init`) or one update.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub seed: u64,
    pub step: usize,
    pub op: &'static str,
    pub u: Option<usize>,
    pub v: Option<usize>,
    /// Space-separated reported vertices.
    pub output: String,
    pub output_size: usize,
    /// Size of the symmetric difference with the previous output.
    pub recourse: usize,
    pub stage: Option<usize>,
    /// Cumulative elementary operations.
    pub work: u64,
    pub verified: Option<bool>,
    pub nanos: u64,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub policy: Policy,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub rows: Vec<Row>,
    /// The updates actually executed.
    pub trace: Trace,
    /// Steps whose output failed verification.
    pub mismatches: Vec<usize>,
    /// A failure the algorithm is allowed to have, e.g. pivot exhaustion.
    pub declared_failure: Option<String>,
}

impl RunReport {
    pub fn updates(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn verified_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.verified.is_some()).count()
    }

    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn total_recourse(&self) -> usize {
        self.rows.iter().skip(1).map(|r| r.recourse).sum()
    }

    pub fn final_output(&self) -> &str {
        self.rows.last().map_or("", |r| r.output.as_str())
    }

    pub fn summary_line(&self) -> String {
        format!(
            "algorithm={} policy={} seed={} n={} m={} updates={} verified={} mismatches={} recourse={} work={} failure={}",
            self.algorithm,
            self.policy,
            self.seed,
            self.n,
            self.m,
            self.updates(),
            self.verified_rows(),
            self.mismatches.len(),
            self.total_recourse(),
            self.rows.last().map_or(0, |r| r.work),
            self.declared_failure.as_deref().unwrap_or("none"),
        )
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), ExperimentError> {
        write_reports_csv(std::slice::from_ref(self), w)
    }
}

/// Writes several reports into one CSV with a single header row.
pub fn write_reports_csv<W: Write>(reports: &[RunReport], w: W) -> Result<(), ExperimentError> {
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        for row in &r.rows {
            out.serialize(row)?;
        }
    }
    if reports.iter().all(|r| r.rows.is_empty()) {
        out.write_record(["seed", "step", "op", "u", "v", "output", "output_size", "recourse", "stage", "work", "verified", "nanos"])?;
    }
    out.flush()?;
    Ok(())
}

/// Uniform view of the algorithms for the runner.
trait Subject {
    fn output(&self) -> Vec<usize>;
    fn apply(&mut self, up: Update) -> Result<(), CliqueError>;
    fn work(&self) -> u64;
    fn stage(&self) -> Option<usize> {
        None
    }
    fn check(&self, g: &Graph, tri: &mut Option<TriangleWatch>, was_insertion: bool) -> bool;
}

impl Subject for CounterMis {
    fn output(&self) -> Vec<usize> {
        self.members()
    }
    fn apply(&mut self, up: Update) -> Result<(), CliqueError> {
        let e = up.edge()?;
        match up.op {
            Op::Del => self.delete_edge(e)?,
            Op::Ins => self.insert_edge(e)?,
        };
        Ok(())
    }
    fn work(&self) -> u64 {
        MisBackend::work(self)
    }
    fn check(&self, g: &Graph, _: &mut Option<TriangleWatch>, _: bool) -> bool {
        oracle::oracle_mis_check(g, &self.members())
    }
}

impl Subject for DecrTriangle {
    fn output(&self) -> Vec<usize> {
        self.active().map_or_else(Vec::new, |t| t.vertices().to_vec())
    }
    fn apply(&mut self, up: Update) -> Result<(), CliqueError> {
        self.delete(up.edge()?)?;
        Ok(())
    }
    fn work(&self) -> u64 {
        0
    }
    fn stage(&self) -> Option<usize> {
        Some(self.stage())
    }
    fn check(&self, g: &Graph, tri: &mut Option<TriangleWatch>, was_insertion: bool) -> bool {
        let watch = tri.get_or_insert_with(|| TriangleWatch::new(g));
        let truth = watch.update(g, was_insertion);
        match self.active() {
            Some(t) => truth && oracle::oracle_is_triangle(g, t.vertices()),
            None => !truth,
        }
    }
}

impl Subject for PivotClique {
    fn output(&self) -> Vec<usize> {
        self.clique()
    }
    fn apply(&mut self, up: Update) -> Result<(), CliqueError> {
        PivotClique::apply(self, up.edge()?)
    }
    fn work(&self) -> u64 {
        PivotClique::work(self)
    }
    fn check(&self, g: &Graph, _: &mut Option<TriangleWatch>, _: bool) -> bool {
        oracle::oracle_max_clique_in_component(g, &self.clique(), self.pivot())
    }
}

impl Subject for ThreeMaxClique {
    fn output(&self) -> Vec<usize> {
        self.report().vertices()
    }
    fn apply(&mut self, up: Update) -> Result<(), CliqueError> {
        self.delete(up.edge()?)?;
        Ok(())
    }
    fn work(&self) -> u64 {
        0
    }
    fn stage(&self) -> Option<usize> {
        Some(self.triangle_state().stage())
    }
    fn check(&self, g: &Graph, _: &mut Option<TriangleWatch>, _: bool) -> bool {
        oracle::oracle_three_max_check(g, &self.output())
    }
}

impl Subject for Mccc {
    fn output(&self) -> Vec<usize> {
        Mccc::output(self)
    }
    fn apply(&mut self, up: Update) -> Result<(), CliqueError> {
        Mccc::apply(self, up.edge()?)
    }
    fn work(&self) -> u64 {
        Mccc::work(self)
    }
    fn check(&self, g: &Graph, _: &mut Option<TriangleWatch>, _: bool) -> bool {
        oracle::oracle_max_clique_check(g, &Mccc::output(self), true)
    }
}

/// Picks the next update from the current graph and output, or `None`
/// when the run is over.
fn next_adaptive(
    policy: Policy,
    algorithm: Algorithm,
    g: &Graph,
    out: &[usize],
    rng: &mut ChaCha8Rng,
    executed: usize,
    steps: usize,
) -> Option<Update> {
    if algorithm == Algorithm::Mis {
        return (executed < steps).then(|| mis_adversary(g, out, rng)).flatten();
    }
    // Delete an edge inside the reported set; with nothing to hit, sweep the
    // remaining edges in order so the trace still empties the graph.
    let pairs: Vec<Edge> = out
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| out[i + 1..].iter().map(move |&b| Edge::ordered(a, b)))
        .filter(|&e| g.contains(e))
        .collect();
    let targeted = match policy {
        Policy::KillActive if out.len() == 3 => pairs.choose(rng).copied(),
        Policy::KillOutputVertex => pairs.choose(rng).copied(),
        _ => None,
    };
    targeted.or_else(|| g.edges().next()).map(Update::del)
}

fn mis_adversary(g: &Graph, members: &[usize], rng: &mut ChaCha8Rng) -> Option<Update> {
    let n = g.n();
    if n < 2 {
        return None;
    }
    if members.len() >= 2 && rng.gen_bool(0.5) {
        let pick: Vec<usize> = members.choose_multiple(rng, 2).copied().collect();
        return Some(Update::ins(Edge::ordered(pick[0], pick[1])));
    }
    let x = rng.gen_range(0..n);
    let nbrs: Vec<usize> = g.neighbors(x).collect();
    if let Some(&y) = nbrs.choose(rng) {
        return Some(Update::del(Edge::ordered(x, y)));
    }
    let y = (x + rng.gen_range(1..n)) % n;
    Some(Update::ins(Edge::ordered(x, y)))
}

fn sym_diff(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut d) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => (d, i) = (d + 1, i + 1),
            std::cmp::Ordering::Greater => (d, j) = (d + 1, j + 1),
            std::cmp::Ordering::Equal => (i, j) = (i + 1, j + 1),
        }
    }
    d + (a.len() - i) + (b.len() - j)
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Runs one experiment on `g`. For the oblivious policy `trace` is used
/// when given; otherwise a full deletion trace (or random toggles for MIS)
/// is generated from the seed.
pub fn run_experiment(g: &Graph, trace: Option<&Trace>, cfg: &ExperimentConfig) -> Result<RunReport, ExperimentError> {
    if !cfg.policy.applies_to(cfg.algorithm) {
        return Err(ExperimentError::PolicyMismatch { algorithm: cfg.algorithm, policy: cfg.policy });
    }
    let fixed = match (cfg.policy, trace) {
        (Policy::Oblivious, Some(t)) => Some(t.clone()),
        (Policy::Oblivious, None) if cfg.algorithm == Algorithm::Mis => {
            Some(Trace::random_toggles(g, cfg.steps, derive(cfg.seed, 1)))
        }
        (Policy::Oblivious, None) => Some(Trace::full_deletion(g, derive(cfg.seed, 1))),
        _ => None,
    };
    if let Some(t) = &fixed {
        if cfg.algorithm.decremental() && !t.is_decremental() {
            return Err(ExperimentError::NotDecremental(cfg.algorithm));
        }
        t.validate(g)?;
    }
    let seed = derive(cfg.seed, 2);
    match cfg.algorithm {
        Algorithm::Mis => drive(CounterMis::init(g.clone()), g, fixed, cfg),
        Algorithm::DecrTriangle => drive(DecrTriangle::new(g, seed), g, fixed, cfg),
        Algorithm::CliquePivot => drive(PivotClique::new(g).map_err(ExperimentError::Clique)?, g, fixed, cfg),
        Algorithm::Clique3 => drive(ThreeMaxClique::new(g, seed), g, fixed, cfg),
        Algorithm::Mccc => match Mccc::with_config(g, seed, cfg.mccc) {
            Ok(m) => drive(m, g, fixed, cfg),
            Err(e @ CliqueError::NoValidPivot { .. }) => Ok(failed_report(g, cfg, e.to_string())),
            Err(e) => Err(ExperimentError::Clique(e)),
        },
    }
}

fn failed_report(g: &Graph, cfg: &ExperimentConfig, why: String) -> RunReport {
    RunReport {
        algorithm: cfg.algorithm,
        policy: cfg.policy,
        seed: cfg.seed,
        n: g.n(),
        m: g.m(),
        rows: Vec::new(),
        trace: Trace { updates: Vec::new(), mode: TraceMode::Oblivious, seed: cfg.seed },
        mismatches: Vec::new(),
        declared_failure: Some(why),
    }
}

fn drive<S: Subject>(mut subject: S, g: &Graph, fixed: Option<Trace>, cfg: &ExperimentConfig) -> Result<RunReport, ExperimentError> {
    let verify = cfg.verify && g.n() <= cfg.oracle_guard;
    let mut shadow = g.clone();
    let mut watch = None;
    let mut rng = rng(derive(cfg.seed, 3));
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    let mut executed = Vec::new();
    let mut declared_failure = None;

    let mut prev = subject.output();
    let ok = verify.then(|| subject.check(&shadow, &mut watch, false));
    if ok == Some(false) {
        mismatches.push(0);
    }
    rows.push(Row {
        seed: cfg.seed,
        step: 0,
        op: "init",
        u: None,
        v: None,
        output: join(&prev),
        output_size: prev.len(),
        recourse: 0,
        stage: subject.stage(),
        work: subject.work(),
        verified: ok,
        nanos: 0,
    });

    let mut queue = fixed.as_ref().map(|t| t.updates.iter().copied());
    loop {
        let up = match &mut queue {
            Some(it) => it.next(),
            None => next_adaptive(cfg.policy, cfg.algorithm, &shadow, &prev, &mut rng, executed.len(), cfg.steps),
        };
        let Some(up) = up else { break };
        up.apply(&mut shadow)?;
        let t0 = Instant::now();
        let res = subject.apply(up);
        let nanos = t0.elapsed().as_nanos() as u64;
        match res {
            Ok(()) => {}
            Err(e @ CliqueError::NoValidPivot { .. }) => {
                declared_failure = Some(e.to_string());
                break;
            }
            Err(e) => return Err(ExperimentError::Clique(e)),
        }
        executed.push(up);
        let step = executed.len();
        let out = subject.output();
        let ok = verify.then(|| subject.check(&shadow, &mut watch, up.op == Op::Ins));
        if ok == Some(false) {
            mismatches.push(step);
        }
        rows.push(Row {
            seed: cfg.seed,
            step,
            op: match up.op {
                Op::Del => "del",
                Op::Ins => "ins",
            },
            u: Some(up.u),
            v: Some(up.v),
            output: join(&out),
            output_size: out.len(),
            recourse: sym_diff(&prev, &out),
            stage: subject.stage(),
            work: subject.work(),
            verified: ok,
            nanos,
        });
        prev = out;
    }

    let mode = match (&fixed, cfg.policy) {
        (Some(_), _) => TraceMode::Oblivious,
        (None, p) => TraceMode::Adaptive(p.name().into()),
    };
    Ok(RunReport {
        algorithm: cfg.algorithm,
        policy: cfg.policy,
        seed: cfg.seed,
        n: g.n(),
        m: g.m(),
        rows,
        trace: Trace { updates: executed, mode, seed: cfg.seed },
        mismatches,
        declared_failure,
    })
}

/// Worker count: `DYNSEP_THREADS` if set and positive, else rayon's default.
pub fn worker_threads() -> usize {
    std::env::var("DYNSEP_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs `f` for every seed on a worker pool; results come back in seed order.
pub fn run_seeds<T, F>(seeds: &[u64], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(worker_threads()).build().expect("thread pool");
    pool.install(|| seeds.par_iter().map(|&s| f(s)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn no_timing(csv: &[u8]) -> Vec<String> {
        String::from_utf8_lossy(csv).lines().map(|l| l.rsplit_once(',').map_or(l, |(a, _)| a).to_string()).collect()
    }

    #[test]
    fn mccc_on_two_triangles_verifies() {
        let cfg = ExperimentConfig::new(Algorithm::Mccc, Policy::Oblivious, 4);
        let r = run_experiment(&gen::two_triangles(), None, &cfg).unwrap();
        assert!(r.ok());
        assert_eq!(r.updates(), 6);
        assert_eq!(r.verified_rows(), 7);
    }

    #[test]
    fn kill_active_on_k4_ends_without_triangle() {
        let cfg = ExperimentConfig::new(Algorithm::DecrTriangle, Policy::KillActive, 4);
        let r = run_experiment(&Graph::complete(4), None, &cfg).unwrap();
        assert!(r.ok());
        assert_eq!(r.final_output(), "");
        assert!(r.rows.iter().all(|row| row.stage.is_some()));
        assert_eq!(r.trace.mode, TraceMode::Adaptive("kill-active".into()));
    }

    #[test]
    fn config_errors() {
        assert!(matches!("bogus".parse::<Algorithm>(), Err(ExperimentError::UnknownAlgorithm(_))));
        assert!(matches!("x".parse::<Policy>(), Err(ExperimentError::UnknownPolicy(_))));
        let cfg = ExperimentConfig::new(Algorithm::DecrTriangle, Policy::KillOutputVertex, 0);
        assert!(matches!(run_experiment(&Graph::complete(3), None, &cfg), Err(ExperimentError::PolicyMismatch { .. })));
        let t = Trace::random_toggles(&Graph::empty(5), 10, 1);
        let cfg = ExperimentConfig::new(Algorithm::Mccc, Policy::Oblivious, 0);
        assert!(matches!(run_experiment(&Graph::empty(5), Some(&t), &cfg), Err(ExperimentError::NotDecremental(_))));
    }

    #[test]
    fn every_algorithm_and_policy_verifies() {
        let g = gen::gnp(24, 0.4, 2).unwrap();
        for a in Algorithm::ALL {
            for p in [Policy::Oblivious, Policy::KillActive, Policy::KillOutputVertex] {
                if !p.applies_to(a) {
                    continue;
                }
                let mut cfg = ExperimentConfig::new(a, p, 9);
                cfg.steps = 300;
                let r = run_experiment(&g, None, &cfg).unwrap();
                assert!(r.ok(), "{a} {p}: {:?}", r.mismatches);
                if a.decremental() && r.declared_failure.is_none() {
                    assert_eq!(r.updates(), g.m(), "{a} {p}");
                }
            }
        }
    }

    #[test]
    fn csv_is_deterministic_apart_from_timing() {
        let g = gen::gnp(20, 0.3, 5).unwrap();
        let cfg = ExperimentConfig::new(Algorithm::Clique3, Policy::KillActive, 11);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        run_experiment(&g, None, &cfg).unwrap().write_csv(&mut a).unwrap();
        run_experiment(&g, None, &cfg).unwrap().write_csv(&mut b).unwrap();
        assert!(no_timing(&a)[0].starts_with("seed,step,op,u,v,output"));
        assert_eq!(no_timing(&a), no_timing(&b));
    }

    #[test]
    fn seeds_come_back_in_order() {
        assert_eq!(run_seeds(&[5, 3, 9], |s| s * 2), vec![10, 6, 18]);
    }
}
