//! Per-edge triangle counts, the credit values derived from them, and the
//! sampled balanced triangle set.
//!
//! Each edge in a triangle holds one credit and splits it evenly over its
//! `tau(e)` triangles; a triangle's value is the credit it receives, and an
//! edge's value is a third of the values of its triangles. When every edge
//! lies in a triangle, both totals equal the edge count.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bmm::masked_witness;
use crate::graph::{words_for, BitIter, Edge, Graph};

/// A triangle with vertices sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Triangle {
    /// Sorts the three vertices. Panics if any two coincide.
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        let mut t = [a, b, c];
        t.sort_unstable();
        assert!(t[0] != t[1] && t[1] != t[2], "degenerate triangle {a},{b},{c}");
        Triangle { x: t[0], y: t[1], z: t[2] }
    }

    pub fn edges(&self) -> [Edge; 3] {
        [
            Edge { u: self.x, v: self.y },
            Edge { u: self.x, v: self.z },
            Edge { u: self.y, v: self.z },
        ]
    }

    pub fn vertices(&self) -> [usize; 3] {
        [self.x, self.y, self.z]
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges().contains(&e)
    }

    pub fn is_in(&self, g: &Graph) -> bool {
        self.edges().iter().all(|&e| g.contains(e))
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// Exact triangle counts and values for every edge of a graph, computed by
/// full triangle enumeration.
#[derive(Debug, Clone)]
pub struct EdgeTriangleStats {
    n: usize,
    edges: Vec<Edge>,
    tau: Vec<u32>,
    v_edge: Vec<f64>,
    triangle_count: usize,
    triangle_value_total: f64,
}

impl EdgeTriangleStats {
    #[inline]
    fn key(&self, e: Edge) -> usize {
        e.u * self.n + e.v
    }

    /// Number of triangles containing `e` (0 for non-edges).
    pub fn tau(&self, e: Edge) -> u32 {
        if e.v >= self.n {
            return 0;
        }
        self.tau[self.key(e)]
    }

    /// Value of `e`; 0 when `e` is in no triangle.
    pub fn v_edge(&self, e: Edge) -> f64 {
        if e.v >= self.n {
            return 0.0;
        }
        self.v_edge[self.key(e)]
    }

    /// Value of a triangle of the underlying graph.
    pub fn v_tri(&self, t: Triangle) -> f64 {
        t.edges()
            .iter()
            .map(|&e| {
                let tau = self.tau(e);
                assert!(tau > 0, "{t} is not a triangle of the graph");
                1.0 / tau as f64
            })
            .sum()
    }

    /// Edges of the graph the statistics were computed on.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triangle_count(&self) -> usize {
        self.triangle_count
    }

    /// Number of edges lying in at least one triangle.
    pub fn triangle_edge_count(&self) -> usize {
        self.edges.iter().filter(|&&e| self.tau(e) > 0).count()
    }

    /// Sum of all edge values.
    pub fn edge_value_total(&self) -> f64 {
        self.edges.iter().map(|&e| self.v_edge(e)).sum()
    }

    /// Sum of all triangle values.
    pub fn triangle_value_total(&self) -> f64 {
        self.triangle_value_total
    }
}

/// Enumerates every triangle of `g` and derives `tau`, edge values and
/// triangle values.
pub fn triangle_stats(g: &Graph) -> EdgeTriangleStats {
    let n = g.n();
    let edges: Vec<Edge> = g.edges().collect();
    let mut tau = vec![0u32; n * n];
    let key = |a: usize, b: usize| a * n + b;

    let for_each_triangle = |f: &mut dyn FnMut(usize, usize, usize)| {
        for e in g.edges() {
            for w in BitIter::new(g.row(e.u)) {
                if w > e.v && g.has_edge(e.v, w) {
                    f(e.u, e.v, w);
                }
            }
        }
    };

    let mut count = 0usize;
    for_each_triangle(&mut |x, y, z| {
        tau[key(x, y)] += 1;
        tau[key(x, z)] += 1;
        tau[key(y, z)] += 1;
        count += 1;
    });

    let mut v_edge = vec![0.0f64; n * n];
    let mut total = 0.0;
    for_each_triangle(&mut |x, y, z| {
        let vt = 1.0 / tau[key(x, y)] as f64 + 1.0 / tau[key(x, z)] as f64 + 1.0 / tau[key(y, z)] as f64;
        total += vt;
        for k in [key(x, y), key(x, z), key(y, z)] {
            v_edge[k] += vt / 3.0;
        }
    });

    EdgeTriangleStats {
        n,
        edges,
        tau,
        v_edge,
        triangle_count: count,
        triangle_value_total: total,
    }
}

/// Tuning constants for the balanced triangle set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceConfig {
    /// `c1` in the repetition count `ceil(c1 * 4^i * ln n)` of iteration `i`.
    pub repetition_factor: f64,
    /// `C` in the per-edge multiplicity bound `C * (1 + v(e)) * log2(n)^2`.
    pub balance_constant: f64,
}

impl Default for BalanceConfig {
    fn default() -> Self {
        BalanceConfig { repetition_factor: 4.0, balance_constant: 1.0 }
    }
}

impl BalanceConfig {
    /// Repetitions performed in iteration `i` on an `n`-vertex graph.
    pub fn repetitions(&self, i: u32, n: usize) -> usize {
        let ln = (n.max(2) as f64).ln();
        (self.repetition_factor * 4f64.powi(i as i32) * ln).ceil() as usize
    }

    /// Largest multiplicity an edge of value `v_edge` may have.
    pub fn multiplicity_bound(&self, v_edge: f64, n: usize) -> f64 {
        let lg = (n.max(2) as f64).log2();
        self.balance_constant * (1.0 + v_edge) * lg * lg
    }
}

/// A set of triangles with alive flags and a per-edge incidence index.
///
/// Triangles are kept in canonical order, so the smallest alive triangle is
/// found by advancing a cursor that never moves backwards.
#[derive(Debug, Clone, Default)]
pub struct TriangleSet {
    triangles: Vec<Triangle>,
    alive: Vec<bool>,
    alive_count: usize,
    keys: Vec<Edge>,
    offsets: Vec<usize>,
    incidence: Vec<u32>,
    cursor: usize,
}

impl TriangleSet {
    /// Builds a set from arbitrary triangles; duplicates are dropped.
    pub fn from_triangles(mut triangles: Vec<Triangle>) -> Self {
        triangles.sort_unstable();
        triangles.dedup();
        let mut pairs: Vec<(Edge, u32)> = Vec::with_capacity(3 * triangles.len());
        for (i, t) in triangles.iter().enumerate() {
            for e in t.edges() {
                pairs.push((e, i as u32));
            }
        }
        pairs.sort_unstable();
        let mut keys = Vec::new();
        let mut offsets = Vec::new();
        let mut incidence = Vec::with_capacity(pairs.len());
        for (e, i) in pairs {
            if keys.last() != Some(&e) {
                keys.push(e);
                offsets.push(incidence.len());
            }
            incidence.push(i);
        }
        offsets.push(incidence.len());
        let len = triangles.len();
        TriangleSet {
            triangles,
            alive: vec![true; len],
            alive_count: len,
            keys,
            offsets,
            incidence,
            cursor: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn alive_triangles(&self) -> impl Iterator<Item = Triangle> + '_ {
        self.triangles.iter().zip(&self.alive).filter(|(_, &a)| a).map(|(t, _)| *t)
    }

    pub fn is_alive(&self, t: Triangle) -> bool {
        self.triangles.binary_search(&t).is_ok_and(|i| self.alive[i])
    }

    fn slot(&self, e: Edge) -> &[u32] {
        match self.keys.binary_search(&e) {
            Ok(k) => &self.incidence[self.offsets[k]..self.offsets[k + 1]],
            Err(_) => &[],
        }
    }

    /// Number of triangles of the set (alive or not) containing `e`.
    pub fn multiplicity(&self, e: Edge) -> usize {
        self.slot(e).len()
    }

    /// Edges covered by at least one triangle of the set.
    pub fn covered_edges(&self) -> &[Edge] {
        &self.keys
    }

    /// Alive triangles containing `e`.
    pub fn alive_incident(&self, e: Edge) -> impl Iterator<Item = Triangle> + '_ {
        self.slot(e)
            .iter()
            .filter(|&&i| self.alive[i as usize])
            .map(|&i| self.triangles[i as usize])
    }

    /// Marks every triangle containing `e` dead; returns how many died.
    pub fn kill_edge(&mut self, e: Edge) -> usize {
        let Ok(k) = self.keys.binary_search(&e) else {
            return 0;
        };
        let mut killed = 0;
        for &i in &self.incidence[self.offsets[k]..self.offsets[k + 1]] {
            let slot = &mut self.alive[i as usize];
            if *slot {
                *slot = false;
                killed += 1;
            }
        }
        self.alive_count -= killed;
        killed
    }

    /// Smallest alive triangle in canonical order.
    pub fn first_alive(&mut self) -> Option<Triangle> {
        while self.cursor < self.triangles.len() && !self.alive[self.cursor] {
            self.cursor += 1;
        }
        self.triangles.get(self.cursor).copied()
    }
}

/// Samples `V'` with independent inclusion probability `2^-shift`, returned
/// sorted. Gaps between included vertices are geometric, which is the same
/// distribution as one coin flip per vertex.
fn sample_vertices(n: usize, shift: u32, rng: &mut impl Rng, out: &mut Vec<usize>) {
    out.clear();
    if shift == 0 {
        out.extend(0..n);
        return;
    }
    let p = 0.5f64.powi(shift as i32);
    let denom = (1.0 - p).ln();
    let mut pos = 0usize;
    loop {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let gap = (u.ln() / denom).floor();
        if gap >= (n - pos) as f64 {
            return;
        }
        pos += gap as usize;
        out.push(pos);
        pos += 1;
        if pos >= n {
            return;
        }
    }
}

/// Computes a balanced set of triangles of `g`.
///
/// Edges are bucketed by `floor(log2 tau(e))`. In iteration `i` the
/// procedure repeats `ceil(c1 * 4^i * ln n)` times: sample `V'` at rate
/// `2^-i`, and for every edge of bucket `i` inside `V'` add the triangle
/// formed with its smallest witness in `g[V']`.
pub fn balanced_triangle_set(g: &Graph, seed: u64, cfg: &BalanceConfig) -> TriangleSet {
    let n = g.n();
    const NONE: u8 = u8::MAX;
    let mut class = vec![NONE; n * n];
    let mut buckets: Vec<Vec<Edge>> = Vec::new();
    for e in g.edges() {
        let tau = g.common_neighbor_count(e.u, e.v);
        if tau == 0 {
            continue;
        }
        let i = tau.ilog2() as usize;
        if buckets.len() <= i {
            buckets.resize_with(i + 1, Vec::new);
        }
        buckets[i].push(e);
        class[e.u * n + e.v] = i as u8;
    }

    let words = words_for(n);
    let mut found = Vec::new();
    let mut sample = Vec::new();
    let mut mask = vec![0u64; words];
    for (i, bucket) in buckets.iter().enumerate() {
        if bucket.is_empty() {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64 + 1);
        let reps = cfg.repetitions(i as u32, n);
        for _ in 0..reps {
            sample_vertices(n, i as u32, &mut rng, &mut sample);
            let k = sample.len();
            if k < 3 {
                continue;
            }
            if k * k * k < 2 * bucket.len() || k <= 24 {
                for (a_idx, &a) in sample.iter().enumerate() {
                    for &b in &sample[a_idx + 1..] {
                        if class[a * n + b] != i as u8 {
                            continue;
                        }
                        let z = sample.iter().copied().find(|&z| g.has_edge(a, z) && g.has_edge(b, z));
                        if let Some(z) = z {
                            found.push(Triangle::new(a, b, z));
                        }
                    }
                }
            } else {
                mask.iter_mut().for_each(|w| *w = 0);
                for &v in &sample {
                    mask[v / 64] |= 1 << (v % 64);
                }
                let inside = |v: usize| mask[v / 64] >> (v % 64) & 1 == 1;
                for &e in bucket {
                    if inside(e.u) && inside(e.v) {
                        if let Some(z) = masked_witness(g, e, &mask) {
                            found.push(Triangle::new(e.u, e.v, z));
                        }
                    }
                }
            }
        }
    }
    TriangleSet::from_triangles(found)
}
