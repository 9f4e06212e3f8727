//! Mutable undirected simple graph over a fixed vertex set `0..n`.
//!
//! Every vertex owns a bitset row of `ceil(n / 64)` words. Edge tests and
//! updates are O(1) word operations; common-neighbour queries AND two rows.

use std::fmt;
use std::io::{BufRead, Write};

use thiserror::Error;

/// Errors raised by graph construction, updates and edge-list parsing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("edge {0} already present")]
    DuplicateEdge(Edge),
    #[error("edge {0} not present")]
    MissingEdge(Edge),
    #[error("edge list parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An undirected edge stored canonically with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Canonicalises `{a, b}`. Rejects `a == b`.
    pub fn new(a: usize, b: usize) -> Result<Self, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        Ok(Self::ordered(a, b))
    }

    /// Canonicalises without the self-loop check. Callers guarantee `a != b`.
    #[inline]
    pub(crate) fn ordered(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b);
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`.
    #[inline]
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Iterates the set bits of a word slice in increasing order.
pub(crate) struct BitIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> BitIter<'a> {
    pub(crate) fn new(words: &'a [u64]) -> Self {
        let cur = words.first().copied().unwrap_or(0);
        BitIter { words, idx: 0, cur }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Undirected simple graph with bitset adjacency rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    degree: Vec<usize>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            adj: vec![0; n * words],
            degree: vec![0; n],
            m: 0,
        }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.set(u, v);
            }
        }
        g
    }

    /// Builds a graph from an edge list, rejecting duplicates, self-loops and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            let e = Edge::new(a, b)?;
            g.insert_edge(e)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// Number of 64-bit words per adjacency row.
    #[inline]
    pub fn row_words(&self) -> usize {
        self.words
    }

    /// Adjacency row of `v` as packed words.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a >= self.n || b >= self.n || a == b {
            return false;
        }
        self.adj[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.has_edge(e.u, e.v)
    }

    fn check(&self, e: Edge) -> Result<(), GraphError> {
        if e.u == e.v {
            return Err(GraphError::SelfLoop(e.u));
        }
        for x in [e.u, e.v] {
            if x >= self.n {
                return Err(GraphError::OutOfRange { vertex: x, n: self.n });
            }
        }
        Ok(())
    }

    #[inline]
    fn set(&mut self, a: usize, b: usize) {
        self.adj[a * self.words + b / 64] |= 1 << (b % 64);
        self.adj[b * self.words + a / 64] |= 1 << (a % 64);
        self.degree[a] += 1;
        self.degree[b] += 1;
        self.m += 1;
    }

    #[inline]
    fn clear(&mut self, a: usize, b: usize) {
        self.adj[a * self.words + b / 64] &= !(1 << (b % 64));
        self.adj[b * self.words + a / 64] &= !(1 << (a % 64));
        self.degree[a] -= 1;
        self.degree[b] -= 1;
        self.m -= 1;
    }

    /// Inserts an absent edge.
    pub fn insert_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        self.check(e)?;
        if self.has_edge(e.u, e.v) {
            return Err(GraphError::DuplicateEdge(e));
        }
        self.set(e.u, e.v);
        Ok(())
    }

    /// Deletes a present edge.
    pub fn delete_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        self.check(e)?;
        if !self.has_edge(e.u, e.v) {
            return Err(GraphError::MissingEdge(e));
        }
        self.clear(e.u, e.v);
        Ok(())
    }

    /// Removes every edge incident to `v`, returning the former neighbours.
    pub fn isolate(&mut self, v: usize) -> Vec<usize> {
        let nbrs: Vec<usize> = self.neighbors(v).collect();
        for &w in &nbrs {
            self.clear(v, w);
        }
        nbrs
    }

    /// Neighbours of `v` in increasing id order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        BitIter::new(self.row(v))
    }

    /// All edges in canonical lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |u| {
            BitIter::new(self.row(u))
                .filter(move |&v| v > u)
                .map(move |v| Edge { u, v })
        })
    }

    /// Smallest common neighbour of `a` and `b`, if any.
    pub fn common_neighbor(&self, a: usize, b: usize) -> Option<usize> {
        let (ra, rb) = (self.row(a), self.row(b));
        for (i, (x, y)) in ra.iter().zip(rb).enumerate() {
            let w = x & y;
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Number of common neighbours of `a` and `b`.
    pub fn common_neighbor_count(&self, a: usize, b: usize) -> usize {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .map(|(x, y)| (x & y).count_ones() as usize)
            .sum()
    }

    /// Subgraph induced by `verts`, relabelled `0..verts.len()` in the given
    /// order. The returned vector maps new ids to original ids.
    pub fn induced(&self, verts: &[usize]) -> (Graph, Vec<usize>) {
        let mut h = Graph::empty(verts.len());
        for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    h.set(i, j);
                }
            }
        }
        (h, verts.to_vec())
    }

    /// Complement of the subgraph induced by `verts`, relabelled
    /// `0..verts.len()`. The returned vector maps new ids to original ids.
    pub fn complement_induced(&self, verts: &[usize]) -> (Graph, Vec<usize>) {
        let mut h = Graph::empty(verts.len());
        for (i, &a) in verts.iter().enumerate() {
            for (j, &b) in verts.iter().enumerate().skip(i + 1) {
                if !self.has_edge(a, b) {
                    h.set(i, j);
                }
            }
        }
        (h, verts.to_vec())
    }

    /// Reads the edge-list text format: a header line `n m` followed by `m`
    /// lines `u v`. Blank lines and lines starting with `#` are skipped.
    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut g = Graph::empty(0);
        let mut seen = 0usize;
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| GraphError::Parse { line: lineno, msg: e.to_string() })?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let nums = parse_pair(t, lineno)?;
            match header {
                None => {
                    header = Some(nums);
                    g = Graph::empty(nums.0);
                }
                Some(_) => {
                    let e = Edge::new(nums.0, nums.1)?;
                    g.insert_edge(e)?;
                    seen += 1;
                }
            }
        }
        let (_, m) = header.ok_or(GraphError::Parse { line: 0, msg: "missing `n m` header".into() })?;
        if seen != m {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header declares {m} edges, found {seen}"),
            });
        }
        Ok(g)
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n, self.m)?;
        for e in self.edges() {
            writeln!(w, "{} {}", e.u, e.v)?;
        }
        Ok(())
    }

    /// Debug-only structural check of the representation invariants.
    pub fn check_invariants(&self) -> bool {
        let mut bits = 0usize;
        for v in 0..self.n {
            let row = self.row(v);
            let pop: usize = row.iter().map(|w| w.count_ones() as usize).sum();
            if pop != self.degree[v] || self.has_edge(v, v) {
                return false;
            }
            if !self.n.is_multiple_of(64) {
                if let Some(last) = row.last() {
                    if last >> (self.n % 64) != 0 {
                        return false;
                    }
                }
            }
            for w in self.neighbors(v) {
                if !self.has_edge(w, v) {
                    return false;
                }
            }
            bits += pop;
        }
        bits == 2 * self.m
    }
}

fn parse_pair(t: &str, line: usize) -> Result<(usize, usize), GraphError> {
    let mut it = t.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = it.next().ok_or(GraphError::Parse { line, msg: "expected two integers".into() })?;
        tok.parse().map_err(|_| GraphError::Parse { line, msg: format!("bad integer `{tok}`") })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(GraphError::Parse { line, msg: "trailing tokens".into() });
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn k3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn construct_small_graphs() {
        let g = k3();
        assert_eq!(g.m(), 3);
        assert!(g.degrees().iter().all(|&d| d == 2));

        let e = Graph::from_edges(4, []).unwrap();
        assert_eq!(e.m(), 0);

        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k4, Graph::complete(4));
        assert!(k4.degrees().iter().all(|&d| d == 3));
        assert!(k4.check_invariants());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, [(0, 3)]),
            Err(GraphError::OutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(Edge { u: 0, v: 1 }))
        );
    }

    #[test]
    fn delete_and_insert() {
        let mut g = k3();
        let orig = g.clone();
        let e = Edge::new(1, 0).unwrap();
        g.delete_edge(e).unwrap();
        assert_eq!(g.m(), 2);
        assert!(g.has_edge(0, 2) && g.has_edge(1, 2) && !g.has_edge(0, 1));
        assert_eq!(g.delete_edge(e), Err(GraphError::MissingEdge(e)));
        g.insert_edge(e).unwrap();
        assert_eq!(g, orig);
        assert_eq!(g.insert_edge(e), Err(GraphError::DuplicateEdge(e)));

        let mut h = Graph::empty(2);
        h.insert_edge(Edge::new(0, 1).unwrap()).unwrap();
        assert_eq!(h.m(), 1);
    }

    #[test]
    fn complement_induced_examples() {
        let (h, map) = k3().complement_induced(&[1, 2]);
        assert_eq!((h.n(), h.m()), (2, 0));
        assert_eq!(map, vec![1, 2]);

        let (h, _) = Graph::empty(3).complement_induced(&[0, 1, 2]);
        assert_eq!(h, Graph::complete(3));

        let mut k4 = Graph::complete(4);
        k4.delete_edge(Edge::new(2, 3).unwrap()).unwrap();
        let (h, map) = k4.complement_induced(&[1, 2, 3]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![Edge { u: 1, v: 2 }]);
        assert_eq!((map[1], map[2]), (2, 3));
    }

    #[test]
    fn common_neighbors_across_words() {
        let mut g = Graph::empty(200);
        for (a, b) in [(3, 150), (7, 150), (3, 199), (7, 199), (3, 70)] {
            g.insert_edge(Edge::new(a, b).unwrap()).unwrap();
        }
        assert_eq!(g.common_neighbor(3, 7), Some(150));
        assert_eq!(g.common_neighbor_count(3, 7), 2);
        assert_eq!(g.common_neighbor(3, 150), None);
        assert!(g.check_invariants());
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = k3();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "3 3\n0 1\n0 2\n1 2\n");
        assert_eq!(Graph::read_edge_list(&buf[..]).unwrap(), g);

        assert!(matches!(
            Graph::read_edge_list(&b"3 2\n0 1\n"[..]),
            Err(GraphError::Parse { .. })
        ));
        assert!(matches!(
            Graph::read_edge_list(&b"3 1\n0 x\n"[..]),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert_eq!(
            Graph::read_edge_list(&b"3 1\n2 2\n"[..]),
            Err(GraphError::SelfLoop(2))
        );
    }

    #[derive(Debug, Clone)]
    enum Op {
        Toggle(usize, usize),
        Isolate(usize),
    }

    fn ops(n: usize) -> impl Strategy<Value = Vec<Op>> {
        prop::collection::vec(
            prop_oneof![
                4 => (0..n, 0..n).prop_map(|(a, b)| Op::Toggle(a, b)),
                1 => (0..n).prop_map(Op::Isolate),
            ],
            0..300,
        )
    }

    proptest! {
        #[test]
        fn agrees_with_shadow_pair_set(n in 1usize..140, seq in ops(140)) {
            let mut g = Graph::empty(n);
            let mut shadow = BTreeSet::new();
            for op in seq {
                match op {
                    Op::Toggle(a, b) => {
                        let (a, b) = (a % n, b % n);
                        if a == b { continue; }
                        let e = Edge::new(a, b).unwrap();
                        if shadow.remove(&e) {
                            g.delete_edge(e).unwrap();
                        } else {
                            shadow.insert(e);
                            g.insert_edge(e).unwrap();
                        }
                    }
                    Op::Isolate(v) => {
                        let v = v % n;
                        g.isolate(v);
                        shadow.retain(|e: &Edge| !e.contains(v));
                    }
                }
            }
            prop_assert!(g.check_invariants());
            prop_assert_eq!(g.m(), shadow.len());
            prop_assert_eq!(g.edges().collect::<BTreeSet<_>>(), shadow);
        }

        #[test]
        fn double_complement_is_identity(n in 0usize..80, edges in prop::collection::vec((0usize..80, 0usize..80), 0..400)) {
            let mut g = Graph::empty(n);
            for (a, b) in edges {
                if n == 0 { break; }
                let (a, b) = (a % n, b % n);
                if a != b && !g.has_edge(a, b) {
                    g.insert_edge(Edge::new(a, b).unwrap()).unwrap();
                }
            }
            let all: Vec<usize> = (0..n).collect();
            let (c, _) = g.complement_induced(&all);
            prop_assert_eq!(c.m() + g.m(), n * n.saturating_sub(1) / 2);
            let (cc, _) = c.complement_induced(&all);
            prop_assert_eq!(cc, g);
        }
    }
}
