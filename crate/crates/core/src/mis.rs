//! Fully dynamic maximal independent set.
//!
//! [`MisBackend`] is the interface the clique and reduction code programs
//! against. [`CounterMis`] keeps, for every vertex, the number of its
//! neighbours in the set; a vertex outside the set with a zero counter is
//! admitted immediately. Each update touches O(deg) counters, and ties are
//! always resolved toward the smaller id, so identical traces give identical
//! trajectories.

use crate::graph::{Edge, Graph, GraphError};

/// Membership changes caused by one update, each list sorted by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MisDelta {
    pub entered: Vec<usize>,
    pub left: Vec<usize>,
}

impl MisDelta {
    pub fn len(&self) -> usize {
        self.entered.len() + self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entered.is_empty() && self.left.is_empty()
    }

    fn finish(mut self) -> Self {
        self.entered.sort_unstable();
        self.left.sort_unstable();
        self
    }
}

/// A dynamic MIS algorithm operating on its own copy of the graph.
pub trait MisBackend {
    /// Builds the structure for `g` with some initial MIS.
    fn init(g: Graph) -> Self
    where
        Self: Sized;

    fn graph(&self) -> &Graph;

    fn insert_edge(&mut self, e: Edge) -> Result<MisDelta, GraphError>;

    fn delete_edge(&mut self, e: Edge) -> Result<MisDelta, GraphError>;

    fn in_mis(&self, v: usize) -> bool;

    /// Current set in increasing id order.
    fn members(&self) -> Vec<usize>;

    /// Total number of membership changes since initialisation.
    fn recourse(&self) -> u64;

    /// Number of edge updates processed since initialisation.
    fn updates(&self) -> u64;

    /// Elementary operations (counter reads/writes and neighbour visits)
    /// spent since initialisation.
    fn work(&self) -> u64;
}

/// Counter-based MIS with greedy-by-id initialisation and larger-id eviction.
#[derive(Debug, Clone)]
pub struct CounterMis {
    g: Graph,
    in_mis: Vec<bool>,
    mis_nbr_count: Vec<u32>,
    recourse_total: u64,
    updates: u64,
    work: u64,
}

impl CounterMis {
    fn join(&mut self, v: usize, delta: &mut MisDelta) {
        self.in_mis[v] = true;
        delta.entered.push(v);
        for w in self.g.neighbors(v) {
            self.mis_nbr_count[w] += 1;
            self.work += 1;
        }
    }

    fn leave(&mut self, v: usize, delta: &mut MisDelta) {
        self.in_mis[v] = false;
        delta.left.push(v);
        for w in self.g.neighbors(v) {
            self.mis_nbr_count[w] -= 1;
            self.work += 1;
        }
    }

    fn try_join(&mut self, v: usize, delta: &mut MisDelta) {
        self.work += 1;
        if !self.in_mis[v] && self.mis_nbr_count[v] == 0 {
            self.join(v, delta);
        }
    }

    /// Neighbour count of `v` inside the set.
    pub fn mis_neighbor_count(&self, v: usize) -> u32 {
        self.mis_nbr_count[v]
    }

    /// Recomputes every counter and checks independence and maximality.
    pub fn check_invariants(&self) -> bool {
        let n = self.g.n();
        (0..n).all(|v| {
            let cnt = self.g.neighbors(v).filter(|&w| self.in_mis[w]).count() as u32;
            cnt == self.mis_nbr_count[v] && if self.in_mis[v] { cnt == 0 } else { cnt >= 1 }
        })
    }
}

impl MisBackend for CounterMis {
    fn init(g: Graph) -> Self {
        let n = g.n();
        let mut st = CounterMis {
            g,
            in_mis: vec![false; n],
            mis_nbr_count: vec![0; n],
            recourse_total: 0,
            updates: 0,
            work: 0,
        };
        let mut scratch = MisDelta::default();
        for v in 0..n {
            st.try_join(v, &mut scratch);
        }
        st
    }

    fn graph(&self) -> &Graph {
        &self.g
    }

    fn insert_edge(&mut self, e: Edge) -> Result<MisDelta, GraphError> {
        self.g.insert_edge(e)?;
        self.updates += 1;
        self.work += 1;
        let (u, v) = (e.u, e.v);
        if self.in_mis[u] {
            self.mis_nbr_count[v] += 1;
        }
        if self.in_mis[v] {
            self.mis_nbr_count[u] += 1;
        }
        let mut delta = MisDelta::default();
        if self.in_mis[u] && self.in_mis[v] {
            // Evict the larger id, then admit its freed neighbours in id order.
            self.leave(v, &mut delta);
            let nbrs: Vec<usize> = self.g.neighbors(v).collect();
            for w in nbrs {
                self.try_join(w, &mut delta);
            }
        }
        let delta = delta.finish();
        self.recourse_total += delta.len() as u64;
        Ok(delta)
    }

    fn delete_edge(&mut self, e: Edge) -> Result<MisDelta, GraphError> {
        self.g.delete_edge(e)?;
        self.updates += 1;
        self.work += 1;
        let (u, v) = (e.u, e.v);
        if self.in_mis[u] {
            self.mis_nbr_count[v] -= 1;
        }
        if self.in_mis[v] {
            self.mis_nbr_count[u] -= 1;
        }
        let mut delta = MisDelta::default();
        self.try_join(u, &mut delta);
        self.try_join(v, &mut delta);
        let delta = delta.finish();
        self.recourse_total += delta.len() as u64;
        Ok(delta)
    }

    fn in_mis(&self, v: usize) -> bool {
        self.in_mis[v]
    }

    fn members(&self) -> Vec<usize> {
        (0..self.g.n()).filter(|&v| self.in_mis[v]).collect()
    }

    fn recourse(&self) -> u64 {
        self.recourse_total
    }

    fn updates(&self) -> u64 {
        self.updates
    }

    fn work(&self) -> u64 {
        self.work
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(u: usize, v: usize) -> Edge {
        Edge::new(u, v).unwrap()
    }

    #[test]
    fn greedy_init() {
        assert_eq!(CounterMis::init(Graph::empty(4)).members(), vec![0, 1, 2, 3]);
        assert_eq!(CounterMis::init(Graph::complete(4)).members(), vec![0]);
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(CounterMis::init(path).members(), vec![0, 2]);
    }

    #[test]
    fn update_examples() {
        let mut st = CounterMis::init(Graph::complete(2));
        assert_eq!(st.members(), vec![0]);
        let d = st.delete_edge(e(0, 1)).unwrap();
        assert_eq!(d, MisDelta { entered: vec![1], left: vec![] });
        assert_eq!(st.members(), vec![0, 1]);

        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut st = CounterMis::init(path);
        let d = st.insert_edge(e(0, 2)).unwrap();
        assert_eq!(d, MisDelta { entered: vec![], left: vec![2] });
        assert_eq!(st.members(), vec![0]);
        assert!(st.check_invariants());

        // At most one endpoint in the set: nothing moves.
        let mut st = CounterMis::init(Graph::from_edges(4, [(0, 1)]).unwrap());
        assert_eq!(st.members(), vec![0, 2, 3]);
        assert!(st.insert_edge(e(1, 2)).unwrap().is_empty());
        assert_eq!(st.recourse(), 0);
        assert!(st.check_invariants());
    }

    #[test]
    fn contract_violations_are_errors() {
        let mut st = CounterMis::init(Graph::complete(3));
        assert!(matches!(st.insert_edge(e(0, 1)), Err(GraphError::DuplicateEdge(_))));
        st.delete_edge(e(0, 1)).unwrap();
        assert!(matches!(st.delete_edge(e(0, 1)), Err(GraphError::MissingEdge(_))));
        assert_eq!(st.updates(), 1);
    }

    proptest! {
        #[test]
        fn invariants_hold_on_random_traces(n in 2usize..70, ops in prop::collection::vec((0usize..70, 0usize..70), 1..400)) {
            let mut st = CounterMis::init(Graph::empty(n));
            let mut recourse = 0u64;
            for (a, b) in ops {
                let (a, b) = (a % n, b % n);
                if a == b { continue; }
                let x = e(a, b);
                let d = if st.graph().contains(x) { st.delete_edge(x) } else { st.insert_edge(x) }.unwrap();
                recourse += d.len() as u64;
                prop_assert!(st.check_invariants());
            }
            prop_assert_eq!(recourse, st.recourse());
        }
    }
}
