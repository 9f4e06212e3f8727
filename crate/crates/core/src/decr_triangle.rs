//! Staged decremental triangle detection, plus a naive incremental detector.
//!
//! The decremental structure works in stages. A stage starts by dropping
//! every edge that lies in no triangle, then computes a balanced triangle
//! set and reports its smallest triangle as the active one. Deleting an edge
//! kills the selected triangles through it; when the active triangle dies a
//! new alive one is reported. Once the set is empty the next stage begins.
//! Edges dropped internally become no-ops when the caller deletes them.

use crate::graph::{Edge, Graph, GraphError};
use crate::rng::derive;
use crate::triangle_values::{balanced_triangle_set, triangle_stats, BalanceConfig, EdgeTriangleStats, Triangle, TriangleSet};

/// Bookkeeping for one stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord {
    pub stage: usize,
    /// `|E(G_i)|` after pruning, at the start of the stage.
    pub edges_at_start: usize,
    /// Number of distinct triangles in the stage's balanced set.
    pub triangles_selected: usize,
    /// Edges of `G_i` gone by the start of the next stage (deleted or pruned).
    pub removed_edges: usize,
    /// Largest `multiplicity(e) / v(e)` over edges of `G_i`. Only with
    /// progress tracking.
    pub alpha_measured: Option<f64>,
    /// Sum of `v_{G_i}(e)` over removed edges. Only with progress tracking,
    /// and only once the stage has ended.
    pub removed_value: Option<f64>,
}

/// Decremental triangle detection that keeps an explicit triangle.
#[derive(Debug, Clone)]
pub struct DecrTriangle {
    graph: Graph,
    pruned: Graph,
    set: TriangleSet,
    active: Option<Triangle>,
    stage: usize,
    seed: u64,
    cfg: BalanceConfig,
    log: Vec<StageRecord>,
    track_progress: bool,
    stage_stats: Option<EdgeTriangleStats>,
    terminated: bool,
}

impl DecrTriangle {
    pub fn new(g: &Graph, seed: u64) -> Self {
        Self::with_config(g, seed, BalanceConfig::default(), false)
    }

    /// `track_progress` recomputes exact values at every stage start so the
    /// log carries `alpha_measured` and `removed_value`. This costs a full
    /// triangle enumeration per stage.
    pub fn with_config(g: &Graph, seed: u64, cfg: BalanceConfig, track_progress: bool) -> Self {
        let mut st = DecrTriangle {
            graph: g.clone(),
            pruned: Graph::empty(g.n()),
            set: TriangleSet::default(),
            active: None,
            stage: 0,
            seed,
            cfg,
            log: Vec::new(),
            track_progress,
            stage_stats: None,
            terminated: false,
        };
        st.prune();
        st.begin_stages();
        st
    }

    /// Currently reported triangle, `None` once the graph is triangle-free.
    pub fn active(&self) -> Option<Triangle> {
        self.active
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// Index of the current stage.
    pub fn stage(&self) -> usize {
        self.stage
    }

    /// Number of stages started so far.
    pub fn stage_count(&self) -> usize {
        self.log.len()
    }

    pub fn stage_log(&self) -> &[StageRecord] {
        &self.log
    }

    /// Internal graph `G_i` minus the deletions seen in this stage.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn triangle_set(&self) -> &TriangleSet {
        &self.set
    }

    /// True if `e` was dropped internally and not yet deleted by the caller.
    pub fn is_pruned(&self, e: Edge) -> bool {
        self.pruned.contains(e)
    }

    /// Processes the deletion of `e` and returns the triangle now reported.
    pub fn delete(&mut self, e: Edge) -> Result<Option<Triangle>, GraphError> {
        if self.pruned.contains(e) {
            self.pruned.delete_edge(e)?;
            return Ok(self.active);
        }
        self.graph.delete_edge(e)?;
        self.set.kill_edge(e);
        if let Some(stats) = &self.stage_stats {
            let v = stats.v_edge(e);
            if let Some(rec) = self.log.last_mut() {
                rec.removed_edges += 1;
                *rec.removed_value.get_or_insert(0.0) += v;
            }
        } else if let Some(rec) = self.log.last_mut() {
            rec.removed_edges += 1;
        }
        if self.active.is_some_and(|t| t.contains_edge(e)) {
            self.active = self.set.first_alive();
            if self.active.is_none() {
                self.finish_stage();
            }
        }
        Ok(self.active)
    }

    /// Drops edges in no triangle; returns them.
    fn prune(&mut self) -> Vec<Edge> {
        let dead: Vec<Edge> = self
            .graph
            .edges()
            .filter(|e| self.graph.common_neighbor(e.u, e.v).is_none())
            .collect();
        for &e in &dead {
            self.graph.delete_edge(e).expect("edge present");
            self.pruned.insert_edge(e).expect("edge not yet pruned");
        }
        dead
    }

    fn finish_stage(&mut self) {
        let dead = self.prune();
        if let Some(rec) = self.log.last_mut() {
            rec.removed_edges += dead.len();
            if let Some(stats) = &self.stage_stats {
                let extra: f64 = dead.iter().map(|&e| stats.v_edge(e)).sum();
                *rec.removed_value.get_or_insert(0.0) += extra;
            }
        }
        self.stage += 1;
        self.begin_stages();
    }

    /// Starts stages until one selects a triangle or the graph is empty.
    fn begin_stages(&mut self) {
        loop {
            if self.graph.m() == 0 {
                self.active = None;
                self.set = TriangleSet::default();
                self.stage_stats = None;
                self.terminated = true;
                return;
            }
            self.set = balanced_triangle_set(&self.graph, derive(self.seed, self.stage as u64), &self.cfg);
            let mut rec = StageRecord {
                stage: self.stage,
                edges_at_start: self.graph.m(),
                triangles_selected: self.set.len(),
                removed_edges: 0,
                alpha_measured: None,
                removed_value: None,
            };
            if self.track_progress {
                let stats = triangle_stats(&self.graph);
                let alpha = self
                    .graph
                    .edges()
                    .map(|e| self.set.multiplicity(e) as f64 / stats.v_edge(e))
                    .fold(0.0, f64::max);
                rec.alpha_measured = Some(alpha);
                rec.removed_value = Some(0.0);
                self.stage_stats = Some(stats);
            }
            self.log.push(rec);
            self.active = self.set.first_alive();
            if self.active.is_some() {
                return;
            }
            // Sampling missed every triangle; treat it as an empty stage.
            self.prune();
            self.stage += 1;
        }
    }
}

/// Incremental triangle detection by a row intersection per insertion.
/// The answer is sticky once a triangle appears.
#[derive(Debug, Clone)]
pub struct IncrTriangle {
    graph: Graph,
    found: Option<Triangle>,
}

impl IncrTriangle {
    pub fn new(n: usize) -> Self {
        IncrTriangle { graph: Graph::empty(n), found: None }
    }

    /// Starts from an existing graph, checking it once for a triangle.
    pub fn from_graph(g: Graph) -> Self {
        let found = g
            .edges()
            .find_map(|e| g.common_neighbor(e.u, e.v).map(|w| Triangle::new(e.u, e.v, w)));
        IncrTriangle { graph: g, found }
    }

    /// Inserts `e`; returns whether the graph now contains a triangle.
    pub fn insert(&mut self, e: Edge) -> Result<bool, GraphError> {
        self.graph.insert_edge(e)?;
        if self.found.is_none() {
            if let Some(w) = self.graph.common_neighbor(e.u, e.v) {
                self.found = Some(Triangle::new(e.u, e.v, w));
            }
        }
        Ok(self.found.is_some())
    }

    pub fn has_triangle(&self) -> bool {
        self.found.is_some()
    }

    pub fn triangle(&self) -> Option<Triangle> {
        self.found
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}
