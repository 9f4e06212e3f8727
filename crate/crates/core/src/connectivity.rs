//! Decremental connectivity over a spanning forest.
//!
//! Deleting a non-tree edge changes nothing. Deleting a tree edge explores
//! both halves of the broken tree in lock-step until one side is exhausted;
//! that side is the smaller one. Its vertices are then scanned for a
//! non-tree edge leaving the side. If one exists it becomes a tree edge,
//! otherwise the smaller side is relabelled as a new component.

use crate::graph::{Edge, Graph, GraphError};

pub type Label = usize;

/// Result of a deletion that disconnected a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    /// The side that kept the old label.
    pub kept: Label,
    pub kept_size: usize,
    /// The side that received a fresh label; never larger than `kept`.
    pub split_off: Label,
    pub split_off_size: usize,
}

#[derive(Debug, Clone)]
pub struct DecrConnectivity {
    g: Graph,
    forest: Graph,
    comp_id: Vec<Label>,
    comp_size: Vec<usize>,
    live: usize,
    stamp: Vec<u32>,
    epoch: u32,
    work: u64,
}

impl DecrConnectivity {
    pub fn new(g: Graph) -> Self {
        let n = g.n();
        let mut forest = Graph::empty(n);
        let mut comp_id = vec![usize::MAX; n];
        let mut comp_size = Vec::new();
        let mut queue = Vec::new();
        for s in 0..n {
            if comp_id[s] != usize::MAX {
                continue;
            }
            let label = comp_size.len();
            comp_id[s] = label;
            queue.clear();
            queue.push(s);
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head];
                head += 1;
                for y in g.neighbors(x) {
                    if comp_id[y] == usize::MAX {
                        comp_id[y] = label;
                        forest.insert_edge(Edge::ordered(x, y)).expect("tree edge");
                        queue.push(y);
                    }
                }
            }
            comp_size.push(queue.len());
        }
        let live = comp_size.len();
        DecrConnectivity {
            g,
            forest,
            comp_id,
            comp_size,
            live,
            stamp: vec![0; n],
            epoch: 0,
            work: 0,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn component_of(&self, v: usize) -> Label {
        self.comp_id[v]
    }

    pub fn component_size(&self, label: Label) -> usize {
        self.comp_size[label]
    }

    pub fn same_component(&self, a: usize, b: usize) -> bool {
        self.comp_id[a] == self.comp_id[b]
    }

    pub fn component_count(&self) -> usize {
        self.live
    }

    /// Per-vertex labels.
    pub fn labels(&self) -> &[Label] {
        &self.comp_id
    }

    /// A largest component, ties broken toward the smaller label.
    pub fn largest(&self) -> Option<(Label, usize)> {
        self.comp_size
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0)
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(l, &s)| (l, s))
    }

    /// Vertices of a component in increasing id order.
    pub fn members(&self, label: Label) -> Vec<usize> {
        (0..self.g.n()).filter(|&v| self.comp_id[v] == label).collect()
    }

    pub fn is_tree_edge(&self, e: Edge) -> bool {
        self.forest.contains(e)
    }

    /// Elementary operations spent on tree searches so far.
    pub fn work(&self) -> u64 {
        self.work
    }

    /// Deletes `e`; reports a split if it disconnected its component.
    pub fn delete(&mut self, e: Edge) -> Result<Option<Split>, GraphError> {
        self.g.delete_edge(e)?;
        if !self.forest.contains(e) {
            return Ok(None);
        }
        self.forest.delete_edge(e)?;

        self.epoch += 2;
        let (mark_a, mark_b) = (self.epoch, self.epoch + 1);
        let mut side_a = vec![e.u];
        let mut side_b = vec![e.v];
        self.stamp[e.u] = mark_a;
        self.stamp[e.v] = mark_b;
        let (mut ha, mut hb) = (0, 0);
        // Lock-step BFS over tree edges; stops when either side is complete.
        let (small, mark) = loop {
            if ha == side_a.len() {
                break (side_a, mark_a);
            }
            if hb == side_b.len() {
                break (side_b, mark_b);
            }
            let x = side_a[ha];
            ha += 1;
            for y in self.forest.neighbors(x) {
                self.work += 1;
                if self.stamp[y] != mark_a {
                    self.stamp[y] = mark_a;
                    side_a.push(y);
                }
            }
            let x = side_b[hb];
            hb += 1;
            for y in self.forest.neighbors(x) {
                self.work += 1;
                if self.stamp[y] != mark_b {
                    self.stamp[y] = mark_b;
                    side_b.push(y);
                }
            }
        };

        for &x in &small {
            for y in self.g.neighbors(x) {
                self.work += 1;
                if self.stamp[y] != mark {
                    self.forest.insert_edge(Edge::ordered(x, y))?;
                    return Ok(None);
                }
            }
        }

        let old = self.comp_id[e.u];
        let fresh = self.comp_size.len();
        for &x in &small {
            self.comp_id[x] = fresh;
        }
        self.comp_size[old] -= small.len();
        self.comp_size.push(small.len());
        self.live += 1;
        Ok(Some(Split {
            kept: old,
            kept_size: self.comp_size[old],
            split_off: fresh,
            split_off_size: small.len(),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(u: usize, v: usize) -> Edge {
        Edge::new(u, v).unwrap()
    }

    /// Ground-truth component partition by BFS, canonicalised by each
    /// vertex's smallest component member.
    fn bfs_partition(g: &Graph) -> Vec<usize> {
        let n = g.n();
        let mut rep = vec![usize::MAX; n];
        for s in 0..n {
            if rep[s] != usize::MAX {
                continue;
            }
            rep[s] = s;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for y in 0..n {
                    if g.has_edge(x, y) && rep[y] == usize::MAX {
                        rep[y] = s;
                        stack.push(y);
                    }
                }
            }
        }
        rep
    }

    fn canonical(labels: &[Label]) -> Vec<usize> {
        let mut first = std::collections::HashMap::new();
        labels
            .iter()
            .enumerate()
            .map(|(v, l)| *first.entry(*l).or_insert(v))
            .collect()
    }

    #[test]
    fn examples() {
        let mut c = DecrConnectivity::new(Graph::complete(2));
        let s = c.delete(e(0, 1)).unwrap().unwrap();
        assert_eq!((s.kept_size, s.split_off_size), (1, 1));

        let mut c = DecrConnectivity::new(Graph::complete(3));
        assert_eq!(c.delete(e(0, 1)).unwrap(), None);
        assert_eq!(c.component_count(), 1);

        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
        let mut c = DecrConnectivity::new(g);
        assert_eq!(c.largest(), Some((0, 6)));
        let s = c.delete(e(2, 3)).unwrap().unwrap();
        assert_eq!((s.kept_size, s.split_off_size), (3, 3));
        assert_eq!(c.component_count(), 2);
        assert!(!c.same_component(0, 5));
        assert_eq!(c.members(c.component_of(4)), vec![3, 4, 5]);
    }

    #[test]
    fn missing_edge_is_an_error() {
        let mut c = DecrConnectivity::new(Graph::empty(3));
        assert!(c.delete(e(0, 1)).is_err());
    }

    #[test]
    fn matches_bfs_on_random_traces() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let n = rng.gen_range(2..=256);
            let p = rng.gen_range(0.5..6.0) / n as f64;
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(p.min(1.0)) {
                        g.insert_edge(Edge { u, v }).unwrap();
                    }
                }
            }
            let mut edges: Vec<Edge> = g.edges().collect();
            edges.shuffle(&mut rng);
            edges.truncate(1000);
            let mut c = DecrConnectivity::new(g.clone());
            let mut shadow = g;
            let mut count = c.component_count();
            for x in edges {
                shadow.delete_edge(x).unwrap();
                let split = c.delete(x).unwrap();
                let truth = bfs_partition(&shadow);
                assert_eq!(canonical(c.labels()), truth);
                let true_count = truth.iter().enumerate().filter(|(v, r)| *v == **r).count();
                assert_eq!(split.is_some(), true_count > count);
                if let Some(s) = split {
                    assert!(s.split_off_size <= s.kept_size);
                    assert_eq!(c.component_size(s.kept) + c.component_size(s.split_off), s.kept_size + s.split_off_size);
                }
                count = true_count;
                assert_eq!(c.component_count(), count);
                let total: usize = (0..c.comp_size.len()).map(|l| c.component_size(l)).sum();
                assert_eq!(total, n);
            }
        }
    }
}
