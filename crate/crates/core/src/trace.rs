//! Update sequences and their line-delimited JSON format
//! (`{"op":"del","u":3,"v":7}` per line).

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError};
use crate::rng::rng;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("update {step}: {source}")]
    Invalid { step: usize, source: GraphError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Del,
    Ins,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Update {
    pub op: Op,
    pub u: usize,
    pub v: usize,
}

impl Update {
    pub fn del(e: Edge) -> Self {
        Update { op: Op::Del, u: e.u, v: e.v }
    }

    pub fn ins(e: Edge) -> Self {
        Update { op: Op::Ins, u: e.u, v: e.v }
    }

    pub fn edge(&self) -> Result<Edge, GraphError> {
        Edge::new(self.u, self.v)
    }

    /// Applies the update to `g`, failing if its precondition does not hold.
    pub fn apply(&self, g: &mut Graph) -> Result<(), GraphError> {
        let e = self.edge()?;
        match self.op {
            Op::Del => g.delete_edge(e),
            Op::Ins => g.insert_edge(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceMode {
    Oblivious,
    /// Generated on the fly by the named policy.
    Adaptive(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub updates: Vec<Update>,
    pub mode: TraceMode,
    pub seed: u64,
}

impl Trace {
    /// Every edge deleted once, in a seeded random order.
    pub fn full_deletion(g: &Graph, seed: u64) -> Self {
        let mut edges: Vec<Edge> = g.edges().collect();
        edges.shuffle(&mut rng(seed));
        Trace { updates: edges.into_iter().map(Update::del).collect(), mode: TraceMode::Oblivious, seed }
    }

    /// `steps` random toggles: a uniformly random vertex pair is deleted if
    /// present and inserted otherwise.
    pub fn random_toggles(g: &Graph, steps: usize, seed: u64) -> Self {
        let n = g.n();
        let mut cur = g.clone();
        let mut r = rng(seed);
        let mut updates = Vec::with_capacity(steps);
        if n >= 2 {
            while updates.len() < steps {
                let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
                if a == b {
                    continue;
                }
                let e = Edge::ordered(a, b);
                let up = if cur.contains(e) { Update::del(e) } else { Update::ins(e) };
                up.apply(&mut cur).expect("toggle matches state");
                updates.push(up);
            }
        }
        Trace { updates, mode: TraceMode::Oblivious, seed }
    }

    /// Checks every precondition against `g`; returns the final graph.
    pub fn validate(&self, g: &Graph) -> Result<Graph, TraceError> {
        let mut cur = g.clone();
        for (step, up) in self.updates.iter().enumerate() {
            up.apply(&mut cur).map_err(|source| TraceError::Invalid { step, source })?;
        }
        Ok(cur)
    }

    pub fn is_decremental(&self) -> bool {
        self.updates.iter().all(|u| u.op == Op::Del)
    }

    pub fn read_jsonl<R: BufRead>(r: R, seed: u64) -> Result<Self, TraceError> {
        let mut updates = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            updates.push(serde_json::from_str(&line).map_err(|source| TraceError::Json { line: i + 1, source })?);
        }
        Ok(Trace { updates, mode: TraceMode::Oblivious, seed })
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<(), TraceError> {
        for up in &self.updates {
            serde_json::to_writer(&mut w, up).map_err(std::io::Error::from)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_deletion_of_k4() {
        let g = Graph::complete(4);
        let t = Trace::full_deletion(&g, 5);
        let mut seen: Vec<Edge> = t.updates.iter().map(|u| u.edge().unwrap()).collect();
        assert!(t.is_decremental());
        seen.sort();
        assert_eq!(seen, g.edges().collect::<Vec<_>>());
        assert_eq!(t.validate(&g).unwrap().m(), 0);
    }

    #[test]
    fn json_lines_round_trip() {
        let g = Graph::from_edges(8, [(3, 7), (0, 1)]).unwrap();
        let t = Trace::random_toggles(&g, 50, 2);
        t.validate(&g).unwrap();
        let mut buf = Vec::new();
        t.write_jsonl(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).lines().all(|l| l.starts_with("{\"op\":\"")));
        assert_eq!(Trace::read_jsonl(&buf[..], 2).unwrap(), t);

        let one = Trace::read_jsonl(&br#"{"op":"del","u":3,"v":7}"#[..], 0).unwrap();
        assert_eq!(one.updates, vec![Update { op: Op::Del, u: 3, v: 7 }]);
        assert!(matches!(Trace::read_jsonl(&b"{\"op\":\"cut\"}"[..], 0), Err(TraceError::Json { line: 1, .. })));
    }

    #[test]
    fn invalid_trace_is_reported() {
        let g = Graph::complete(3);
        let t = Trace { updates: vec![Update::del(Edge { u: 0, v: 1 }); 2], mode: TraceMode::Oblivious, seed: 0 };
        assert!(matches!(t.validate(&g), Err(TraceError::Invalid { step: 1, .. })));
    }
}
