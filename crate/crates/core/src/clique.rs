//! Decremental maximal clique.
//!
//! * [`PivotClique`] keeps a maximal clique of the pivot's component by
//!   running a dynamic MIS on the complement of the pivot's neighbourhood.
//!   Deleting a pivot edge `{v, w}` strips `w`'s complement edges; deleting
//!   an edge inside the neighbourhood inserts it into the complement.
//! * [`BigComponent`] follows the component of more than half the vertices
//!   (if any) with several pivot copies, reporting the clique of the first
//!   copy whose pivot still lies in it.
//! * [`Mccc`] keeps a maximal clique in every component by recursing into
//!   components of at most half the vertices.
//! * [`ThreeMaxClique`] reports a triangle while one exists, then an edge,
//!   then a vertex.

use std::cell::Cell;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::connectivity::{DecrConnectivity, Label, Split};
use crate::decr_triangle::DecrTriangle;
use crate::graph::{Edge, Graph, GraphError};
use crate::mis::{CounterMis, MisBackend};
use crate::rng::{derive, rng};
use crate::triangle_values::Triangle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliqueError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    /// Every pivot copy left the big component while it still exists.
    #[error("no valid pivot copy left for the big component ({vertices} vertices at this level)")]
    NoValidPivot { vertices: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
}

const NO_POS: usize = usize::MAX;

/// Maximal clique containing a fixed pivot, maintained under deletions.
#[derive(Debug, Clone)]
pub struct PivotClique<M: MisBackend = CounterMis> {
    g: Graph,
    pivot: usize,
    nbrs: Vec<usize>,
    pos: Vec<usize>,
    eliminated: Vec<bool>,
    mis: M,
    routing_work: u64,
}

impl PivotClique<CounterMis> {
    /// Uses a lowest-degree vertex (smallest id on ties) as pivot.
    pub fn new(g: &Graph) -> Result<Self, CliqueError> {
        Self::build(g)
    }

    pub fn with_pivot(g: &Graph, pivot: usize) -> Result<Self, CliqueError> {
        Self::build_with_pivot(g, pivot)
    }
}

impl<M: MisBackend> PivotClique<M> {
    /// Lowest-degree pivot with an arbitrary MIS backend.
    pub fn build(g: &Graph) -> Result<Self, CliqueError> {
        let pivot = (0..g.n()).min_by_key(|&v| (g.degree(v), v)).ok_or(CliqueError::EmptyGraph)?;
        Self::build_with_pivot(g, pivot)
    }

    pub fn build_with_pivot(g: &Graph, pivot: usize) -> Result<Self, CliqueError> {
        if pivot >= g.n() {
            return Err(GraphError::OutOfRange { vertex: pivot, n: g.n() }.into());
        }
        let nbrs: Vec<usize> = g.neighbors(pivot).collect();
        let mut pos = vec![NO_POS; g.n()];
        for (i, &w) in nbrs.iter().enumerate() {
            pos[w] = i;
        }
        let (gprime, _) = g.complement_induced(&nbrs);
        let eliminated = vec![false; nbrs.len()];
        let d = nbrs.len() as u64;
        Ok(PivotClique {
            g: g.clone(),
            pivot,
            nbrs,
            pos,
            eliminated,
            mis: M::init(gprime),
            // Scanning N(v) and testing every pair inside it.
            routing_work: d + d * d.saturating_sub(1) / 2,
        })
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    /// Degree of the pivot at initialisation.
    pub fn initial_degree(&self) -> usize {
        self.nbrs.len()
    }

    /// The current external graph.
    pub fn graph(&self) -> &Graph {
        &self.g
    }

    /// Complement graph the MIS backend runs on.
    pub fn complement(&self) -> &Graph {
        self.mis.graph()
    }

    pub fn mis(&self) -> &M {
        &self.mis
    }

    /// Original ids of former neighbours whose pivot edge was deleted.
    pub fn eliminated(&self) -> Vec<usize> {
        (0..self.nbrs.len()).filter(|&i| self.eliminated[i]).map(|i| self.nbrs[i]).collect()
    }

    /// Edge updates forwarded to the MIS backend so far.
    pub fn mis_updates(&self) -> u64 {
        self.mis.updates()
    }

    /// Elementary operations: routing plus the backend's own work.
    pub fn work(&self) -> u64 {
        self.routing_work + self.mis.work()
    }

    /// True while the pivot still has a neighbour.
    pub fn is_live(&self) -> bool {
        self.g.degree(self.pivot) > 0
    }

    /// `{pivot} ∪ (S ∩ N(pivot))`, sorted.
    pub fn clique(&self) -> Vec<usize> {
        let mut k: Vec<usize> = (0..self.nbrs.len())
            .filter(|&i| !self.eliminated[i] && self.mis.in_mis(i))
            .map(|i| self.nbrs[i])
            .collect();
        k.push(self.pivot);
        k.sort_unstable();
        k
    }

    /// Applies a deletion; returns the clique afterwards.
    pub fn delete(&mut self, e: Edge) -> Result<Vec<usize>, CliqueError> {
        self.apply(e)?;
        Ok(self.clique())
    }

    /// Applies a deletion without materialising the clique.
    pub fn apply(&mut self, e: Edge) -> Result<(), CliqueError> {
        self.g.delete_edge(e)?;
        self.routing_work += 1;
        if e.contains(self.pivot) {
            let x = self.pos[e.other(self.pivot)];
            self.eliminated[x] = true;
            let incident: Vec<usize> = self.mis.graph().neighbors(x).collect();
            for y in incident {
                self.mis.delete_edge(Edge::ordered(x, y))?;
            }
        } else {
            let (a, b) = (self.pos[e.u], self.pos[e.v]);
            // Eliminated vertices stay isolated in the complement.
            if a != NO_POS && b != NO_POS && !self.eliminated[a] && !self.eliminated[b] {
                self.mis.insert_edge(Edge::ordered(a, b))?;
            }
        }
        Ok(())
    }
}

/// What to do when every pivot copy has left the big component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exhaustion {
    /// Report [`CliqueError::NoValidPivot`].
    #[default]
    Fail,
    /// Draw a fresh uniform pivot from the big component and continue.
    Repivot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MccConfig {
    /// Copies per big component; `None` means `ceil(2 log2 n) + 4`.
    pub gamma: Option<usize>,
    pub exhaustion: Exhaustion,
}

impl MccConfig {
    pub fn gamma_for(&self, n: usize) -> usize {
        self.gamma.unwrap_or_else(|| default_gamma(n))
    }
}

/// `ceil(2 log2 n) + 4`.
pub fn default_gamma(n: usize) -> usize {
    (2.0 * (n.max(1) as f64).log2()).ceil() as usize + 4
}

/// Effect of one deletion on the big component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StarUpdate {
    pub split: Option<Split>,
    /// Label of the big component after the deletion, if it still exists.
    pub star: Option<Label>,
}

/// Maximal clique of the component holding more than half the vertices.
#[derive(Debug, Clone)]
pub struct BigComponent {
    conn: DecrConnectivity,
    n0: usize,
    star: Option<Label>,
    copies: Vec<PivotClique>,
    valid: Vec<bool>,
    front: usize,
    rng: ChaCha8Rng,
    exhaustion: Exhaustion,
    repivots: usize,
}

impl BigComponent {
    pub fn new(g: &Graph, seed: u64) -> Result<Self, CliqueError> {
        Self::with_config(g, seed, &MccConfig::default())
    }

    pub fn with_config(g: &Graph, seed: u64, cfg: &MccConfig) -> Result<Self, CliqueError> {
        Self::from_connectivity(DecrConnectivity::new(g.clone()), seed, cfg)
    }

    fn from_connectivity(conn: DecrConnectivity, seed: u64, cfg: &MccConfig) -> Result<Self, CliqueError> {
        let n0 = conn.graph().n();
        let star = conn.largest().filter(|&(_, s)| 2 * s > n0).map(|(l, _)| l);
        let mut rng = rng(seed);
        let gamma = cfg.gamma_for(n0);
        let mut copies = Vec::with_capacity(gamma);
        let mut valid = Vec::with_capacity(gamma);
        if let Some(star) = star {
            for _ in 0..gamma {
                let v = rng.gen_range(0..n0);
                let ok = conn.component_of(v) == star;
                valid.push(ok);
                // Copies outside the big component are invalid for good.
                copies.push(if ok {
                    PivotClique::with_pivot(conn.graph(), v)?
                } else {
                    PivotClique::with_pivot(&Graph::empty(1), 0)?
                });
            }
        }
        let mut st = BigComponent {
            conn,
            n0,
            star,
            copies,
            valid,
            front: 0,
            rng,
            exhaustion: cfg.exhaustion,
            repivots: 0,
        };
        st.advance_front()?;
        Ok(st)
    }

    pub fn connectivity(&self) -> &DecrConnectivity {
        &self.conn
    }

    /// Label of the big component, if it exists.
    pub fn star(&self) -> Option<Label> {
        self.star
    }

    pub fn level_size(&self) -> usize {
        self.n0
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.copies.iter().map(|c| c.pivot()).collect()
    }

    /// Index of the copy currently reported.
    pub fn front(&self) -> usize {
        self.front
    }

    /// Fresh pivots drawn under [`Exhaustion::Repivot`].
    pub fn repivots(&self) -> usize {
        self.repivots
    }

    pub fn work(&self) -> u64 {
        self.conn.work() + self.copies.iter().map(PivotClique::work).sum::<u64>()
    }

    /// Whether `v` lies in the big component.
    pub fn in_star(&self, v: usize) -> bool {
        self.star.is_some_and(|s| self.conn.component_of(v) == s)
    }

    /// Clique of the big component, empty if it no longer exists.
    pub fn clique(&self) -> Vec<usize> {
        match self.star {
            Some(_) => self.copies[self.front].clique(),
            None => Vec::new(),
        }
    }

    fn advance_front(&mut self) -> Result<(), CliqueError> {
        let Some(star) = self.star else {
            return Ok(());
        };
        while self.front < self.copies.len() {
            if self.valid[self.front] && self.conn.component_of(self.copies[self.front].pivot()) == star {
                return Ok(());
            }
            self.valid[self.front] = false;
            self.front += 1;
        }
        match self.exhaustion {
            Exhaustion::Fail => Err(CliqueError::NoValidPivot { vertices: self.n0 }),
            Exhaustion::Repivot => {
                let v = *self.conn.members(star).choose(&mut self.rng).expect("non-empty component");
                self.copies.push(PivotClique::with_pivot(self.conn.graph(), v)?);
                self.valid.push(true);
                self.repivots += 1;
                Ok(())
            }
        }
    }

    /// Deletes an edge of the big component.
    pub fn delete(&mut self, e: Edge) -> Result<StarUpdate, CliqueError> {
        let split = self.conn.delete(e)?;
        for i in self.front..self.copies.len() {
            if self.valid[i] {
                self.copies[i].apply(e)?;
            }
        }
        if let (Some(s), Some(star)) = (split, self.star) {
            if s.kept == star && 2 * s.kept_size <= self.n0 {
                self.star = None;
            }
        }
        self.advance_front()?;
        Ok(StarUpdate { split, star: self.star })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Owner {
    Star,
    Child(usize, usize),
}

/// Maximal clique in every connected component, under deletions.
#[derive(Debug, Clone)]
pub struct Mccc {
    n: usize,
    seed: u64,
    cfg: MccConfig,
    star: Option<BigComponent>,
    children: Vec<(Mccc, Vec<usize>)>,
    owner: Vec<Owner>,
    spawned: u64,
    /// Work of big-component structures already discarded.
    retired_work: u64,
}

impl Mccc {
    pub fn new(g: &Graph, seed: u64) -> Result<Self, CliqueError> {
        Self::with_config(g, seed, MccConfig::default())
    }

    pub fn with_config(g: &Graph, seed: u64, cfg: MccConfig) -> Result<Self, CliqueError> {
        let n = g.n();
        let mut st = Mccc {
            n,
            seed,
            cfg,
            star: None,
            children: Vec::new(),
            owner: vec![Owner::Star; n],
            spawned: 0,
            retired_work: 0,
        };
        if n <= 1 {
            return Ok(st);
        }
        let conn = DecrConnectivity::new(g.clone());
        let big = conn.largest().filter(|&(_, s)| 2 * s > n).map(|(l, _)| l);
        let mut labels: Vec<Label> = conn.labels().to_vec();
        labels.sort_unstable();
        labels.dedup();
        for &l in &labels {
            if Some(l) != big {
                let verts = conn.members(l);
                st.spawn(conn.graph(), verts)?;
            }
        }
        if big.is_some() {
            st.star = Some(BigComponent::from_connectivity(conn, derive(seed, 0), &cfg)?);
        }
        Ok(st)
    }

    fn spawn(&mut self, g: &Graph, verts: Vec<usize>) -> Result<(), CliqueError> {
        self.spawned += 1;
        let (sub, _) = g.induced(&verts);
        let child = Mccc::with_config(&sub, derive(self.seed, self.spawned), self.cfg)?;
        let idx = self.children.len();
        for (local, &v) in verts.iter().enumerate() {
            self.owner[v] = Owner::Child(idx, local);
        }
        self.children.push((child, verts));
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of recursive instances below this one.
    pub fn descendants(&self) -> usize {
        self.children.iter().map(|(c, _)| 1 + c.descendants()).sum()
    }

    /// Fresh pivots drawn across the whole recursion.
    pub fn repivots(&self) -> usize {
        self.star.as_ref().map_or(0, BigComponent::repivots)
            + self.children.iter().map(|(c, _)| c.repivots()).sum::<usize>()
    }

    pub fn work(&self) -> u64 {
        self.retired_work + self.star.as_ref().map_or(0, BigComponent::work) + self.children.iter().map(|(c, _)| c.work()).sum::<u64>()
    }

    /// Current output: the union of every component's clique, sorted.
    pub fn output(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out.sort_unstable();
        out
    }

    fn collect(&self, out: &mut Vec<usize>) {
        if self.n == 1 {
            out.push(0);
            return;
        }
        if let Some(star) = &self.star {
            out.extend(star.clique());
        }
        for (child, verts) in &self.children {
            let start = out.len();
            child.collect(out);
            for x in &mut out[start..] {
                *x = verts[*x];
            }
        }
    }

    /// The clique reported for the component containing `v`, sorted.
    pub fn component_clique(&self, v: usize) -> Vec<usize> {
        assert!(v < self.n, "vertex {v} out of range");
        if self.n == 1 {
            return vec![0];
        }
        match self.owner[v] {
            Owner::Star => self.star.as_ref().expect("star owner").clique(),
            Owner::Child(i, local) => {
                let (child, verts) = &self.children[i];
                let mut k: Vec<usize> = child.component_clique(local).into_iter().map(|x| verts[x]).collect();
                k.sort_unstable();
                k
            }
        }
    }

    /// Deletes `e` and returns the new output.
    pub fn delete(&mut self, e: Edge) -> Result<Vec<usize>, CliqueError> {
        self.apply(e)?;
        Ok(self.output())
    }

    /// Deletes `e` without materialising the output.
    pub fn apply(&mut self, e: Edge) -> Result<(), CliqueError> {
        if e.v >= self.n {
            return Err(GraphError::OutOfRange { vertex: e.v, n: self.n }.into());
        }
        match (self.owner[e.u], self.owner[e.v]) {
            (Owner::Child(i, a), Owner::Child(j, b)) if i == j => self.children[i].0.apply(Edge::ordered(a, b)),
            (Owner::Star, Owner::Star) if self.star.is_some() => {
                let star = self.star.as_mut().expect("checked");
                let upd = star.delete(e)?;
                if let Some(split) = upd.split {
                    self.on_split(split, upd.star)?;
                }
                Ok(())
            }
            _ => Err(GraphError::MissingEdge(e).into()),
        }
    }

    fn on_split(&mut self, split: Split, star_after: Option<Label>) -> Result<(), CliqueError> {
        let big = self.star.take().expect("split inside the big component");
        let conn = big.connectivity();
        let small = conn.members(split.split_off);
        self.spawn(conn.graph(), small)?;
        if star_after.is_some() {
            self.star = Some(big);
        } else {
            let rest = conn.members(split.kept);
            self.spawn(conn.graph(), rest)?;
            self.retired_work += big.work();
        }
        Ok(())
    }
}

/// What [`ThreeMaxClique`] currently reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThreeMaxReport {
    Triangle(Triangle),
    Edge(Edge),
    Vertex(usize),
    /// Only for the graph with no vertices.
    Nothing,
}

impl ThreeMaxReport {
    pub fn vertices(&self) -> Vec<usize> {
        match *self {
            ThreeMaxReport::Triangle(t) => t.vertices().to_vec(),
            ThreeMaxReport::Edge(e) => vec![e.u, e.v],
            ThreeMaxReport::Vertex(v) => vec![v],
            ThreeMaxReport::Nothing => Vec::new(),
        }
    }

    /// 3 for triangles, 2 for edges, 1 for vertices, 0 otherwise.
    pub fn phase(&self) -> usize {
        self.vertices().len()
    }
}

/// A clique that is maximal or has at least three vertices.
#[derive(Debug, Clone)]
pub struct ThreeMaxClique {
    tri: DecrTriangle,
    g: Graph,
    cursor: Cell<usize>,
}

impl ThreeMaxClique {
    pub fn new(g: &Graph, seed: u64) -> Self {
        ThreeMaxClique { tri: DecrTriangle::new(g, seed), g: g.clone(), cursor: Cell::new(0) }
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn triangle_state(&self) -> &DecrTriangle {
        &self.tri
    }

    pub fn delete(&mut self, e: Edge) -> Result<ThreeMaxReport, GraphError> {
        self.g.delete_edge(e)?;
        self.tri.delete(e)?;
        Ok(self.report())
    }

    pub fn report(&self) -> ThreeMaxReport {
        if let Some(t) = self.tri.active() {
            return ThreeMaxReport::Triangle(t);
        }
        // Edges only disappear, so the smallest remaining one never moves back.
        let n = self.g.n();
        let mut u = self.cursor.get();
        while u < n {
            if let Some(v) = self.g.neighbors(u).find(|&v| v > u) {
                self.cursor.set(u);
                return ThreeMaxReport::Edge(Edge { u, v });
            }
            u += 1;
        }
        self.cursor.set(n);
        if n > 0 {
            ThreeMaxReport::Vertex(0)
        } else {
            ThreeMaxReport::Nothing
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(u: usize, v: usize) -> Edge {
        Edge::new(u, v).unwrap()
    }

    #[test]
    fn pivot_on_k3() {
        let mut pc = PivotClique::with_pivot(&Graph::complete(3), 0).unwrap();
        assert_eq!(pc.complement().m(), 0);
        assert_eq!(pc.clique(), vec![0, 1, 2]);
        let k = pc.delete(e(1, 2)).unwrap();
        assert_eq!(pc.complement().m(), 1);
        // Larger id is evicted from the MIS.
        assert_eq!(k, vec![0, 1]);
        assert_eq!(pc.mis_updates(), 1);
    }

    #[test]
    fn pivot_on_star_leaf() {
        let star = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let pc = PivotClique::new(&star).unwrap();
        assert_eq!(pc.pivot(), 1);
        assert_eq!(pc.clique(), vec![0, 1]);
    }

    #[test]
    fn pivot_elimination() {
        let mut pc = PivotClique::with_pivot(&Graph::complete(4), 0).unwrap();
        assert_eq!(pc.clique(), vec![0, 1, 2, 3]);
        assert_eq!(pc.delete(e(0, 1)).unwrap(), vec![0, 2, 3]);
        assert_eq!(pc.eliminated(), vec![1]);
        // Edge touching an eliminated vertex never reaches the complement.
        let before = pc.mis_updates();
        pc.delete(e(1, 2)).unwrap();
        assert_eq!(pc.mis_updates(), before);
        assert_eq!(pc.delete(e(2, 3)).unwrap(), vec![0, 2]);
        assert!(pc.delete(e(2, 3)).is_err());
    }

    #[test]
    fn big_component_examples() {
        let bc = BigComponent::new(&Graph::complete(4), 5).unwrap();
        assert_eq!(bc.clique(), vec![0, 1, 2, 3]);

        let halves = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let bc = BigComponent::new(&halves, 5).unwrap();
        assert_eq!(bc.star(), None);
        assert!(bc.clique().is_empty());
    }

    #[test]
    fn big_component_fail_and_repivot() {
        // Path of 5 vertices; a single copy pinned by gamma = 1.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let cfg = MccConfig { gamma: Some(1), exhaustion: Exhaustion::Fail };
        let mut failed = 0;
        for seed in 0..40 {
            let mut bc = BigComponent::with_config(&g, seed, &cfg).unwrap();
            let p = bc.pivots()[0];
            // Detach the pivot end of the path when it is an end vertex.
            let r = if p == 0 { bc.delete(e(0, 1)) } else if p == 4 { bc.delete(e(3, 4)) } else { continue };
            if matches!(r, Err(CliqueError::NoValidPivot { .. })) {
                failed += 1;
            }
        }
        assert!(failed > 0);

        let cfg = MccConfig { gamma: Some(1), exhaustion: Exhaustion::Repivot };
        for seed in 0..40 {
            let mut bc = BigComponent::with_config(&g, seed, &cfg).unwrap();
            bc.delete(e(0, 1)).unwrap();
            let k = bc.clique();
            assert_eq!(k.len(), 2);
            assert!(k.iter().all(|&v| bc.in_star(v)));
        }
    }

    #[test]
    fn mccc_examples() {
        let two = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let m = Mccc::new(&two, 1).unwrap();
        assert_eq!(m.output(), vec![0, 1, 2, 3, 4, 5]);

        let mut m = Mccc::new(&Graph::complete(2), 1).unwrap();
        assert_eq!(m.output(), vec![0, 1]);
        assert_eq!(m.delete(e(0, 1)).unwrap(), vec![0, 1]);
        assert!(m.delete(e(0, 1)).is_err());
    }

    #[test]
    fn three_max_examples() {
        let t = ThreeMaxClique::new(&Graph::complete(4), 3);
        assert!(matches!(t.report(), ThreeMaxReport::Triangle(_)));

        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let mut t = ThreeMaxClique::new(&c4, 3);
        assert_eq!(t.report(), ThreeMaxReport::Edge(e(0, 1)));
        assert_eq!(t.delete(e(0, 1)).unwrap(), ThreeMaxReport::Edge(e(0, 3)));

        let t = ThreeMaxClique::new(&Graph::empty(3), 3);
        assert_eq!(t.report(), ThreeMaxReport::Vertex(0));
        let t = ThreeMaxClique::new(&Graph::empty(0), 3);
        assert_eq!(t.report(), ThreeMaxReport::Nothing);
    }
}
