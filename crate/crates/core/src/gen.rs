//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::reductions::TripartiteInstance;
use crate::rng::rng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("edge probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("no {d}-regular graph on {n} vertices")]
    Regular { n: usize, d: usize },
}

fn check_p(p: f64) -> Result<(), GenError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GenError::Probability(p))
    }
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GenError> {
    check_p(p)?;
    let mut r = rng(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                g.insert_edge(Edge { u, v }).expect("fresh pair");
            }
        }
    }
    Ok(g)
}

/// A `d`-regular graph: a circulant randomised by degree-preserving
/// double-edge swaps.
pub fn regular(n: usize, d: usize, seed: u64) -> Result<Graph, GenError> {
    if (d >= n && n > 0) || (n == 0 && d > 0) || (n * d) % 2 == 1 {
        return Err(GenError::Regular { n, d });
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for k in 1..=d / 2 {
            let v = (u + k) % n;
            if !g.has_edge(u, v) {
                g.insert_edge(Edge::ordered(u, v)).expect("fresh pair");
            }
        }
        if d % 2 == 1 && u < n / 2 {
            g.insert_edge(Edge::ordered(u, u + n / 2)).expect("fresh pair");
        }
    }
    let mut r = rng(seed);
    let mut edges: Vec<Edge> = g.edges().collect();
    let m = edges.len();
    if m < 2 {
        return Ok(g);
    }
    for _ in 0..10 * m {
        let (i, j) = (r.gen_range(0..m), r.gen_range(0..m));
        let (a, b) = (edges[i].u, edges[i].v);
        let (mut c, mut dd) = (edges[j].u, edges[j].v);
        if r.gen_bool(0.5) {
            std::mem::swap(&mut c, &mut dd);
        }
        // {a,b},{c,d} -> {a,d},{c,b}
        if a == dd || c == b || a == c || b == dd || g.has_edge(a, dd) || g.has_edge(c, b) {
            continue;
        }
        g.delete_edge(edges[i]).expect("present");
        g.delete_edge(edges[j]).expect("present");
        edges[i] = Edge::ordered(a, dd);
        edges[j] = Edge::ordered(c, b);
        g.insert_edge(edges[i]).expect("absent");
        g.insert_edge(edges[j]).expect("absent");
    }
    Ok(g)
}

/// Part sizes for `n` vertices split as evenly as possible, X first.
pub fn tripartite_sizes(n: usize) -> (usize, usize, usize) {
    (n / 3 + usize::from(!n.is_multiple_of(3)), n / 3 + usize::from(n % 3 > 1), n / 3)
}

/// Random tripartite graph: each cross-part pair, visited in random
/// order, is kept with probability `p` while both ends are below
/// `degree_cap`.
pub fn tripartite(n: usize, p: f64, degree_cap: Option<usize>, seed: u64) -> Result<TripartiteInstance, GenError> {
    check_p(p)?;
    let (nx, ny, nz) = tripartite_sizes(n);
    let part = |v: usize| usize::from(v >= nx) + usize::from(v >= nx + ny);
    let mut pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| part(u) != part(v)).collect();
    let mut r = rng(seed);
    pairs.shuffle(&mut r);
    let cap = degree_cap.unwrap_or(usize::MAX);
    let mut g = Graph::empty(n);
    for (u, v) in pairs {
        if g.degree(u) < cap && g.degree(v) < cap && r.gen_bool(p) {
            g.insert_edge(Edge { u, v }).expect("fresh pair");
        }
    }
    Ok(TripartiteInstance::new(nx, ny, nz, g).expect("cross-part edges only"))
}

/// A `rows × cols` grid of `K4` blocks. Block `b` owns vertices
/// `4b..4b+4`; horizontally adjacent blocks are joined by one bridge from
/// vertex 1 to vertex 0, vertically adjacent ones from vertex 3 to vertex 2.
pub fn k4_lattice(rows: usize, cols: usize) -> Graph {
    let blocks = rows * cols;
    let mut g = Graph::empty(4 * blocks);
    for b in 0..blocks {
        for i in 0..4 {
            for j in i + 1..4 {
                g.insert_edge(Edge { u: 4 * b + i, v: 4 * b + j }).expect("fresh pair");
            }
        }
        let (r, c) = (b / cols, b % cols);
        if c + 1 < cols {
            g.insert_edge(Edge::ordered(4 * b + 1, 4 * (b + 1))).expect("fresh pair");
        }
        if r + 1 < rows {
            g.insert_edge(Edge::ordered(4 * b + 3, 4 * (b + cols) + 2)).expect("fresh pair");
        }
    }
    g
}

/// Two disjoint triangles `{0,1,2}` and `{3,4,5}`.
pub fn two_triangles() -> Graph {
    Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(gnp(0, 0.5, 1).unwrap().n(), 0);
        let t = tripartite(3, 1.0, None, 4).unwrap();
        assert_eq!(t.graph().m(), 3);
        assert!(gnp(4, 1.5, 1).is_err());
        assert_eq!(k4_lattice(1, 1), Graph::complete(4));
        assert_eq!(k4_lattice(2, 3).m(), 6 * 6 + 3 + 4);
    }

    #[test]
    fn regular_degrees() {
        for (n, d) in [(10, 3), (16, 4), (64, 8), (33, 6)] {
            let g = regular(n, d, 7).unwrap();
            assert!((0..n).all(|v| g.degree(v) == d), "n={n} d={d}");
            assert!(g.check_invariants());
        }
        assert!(regular(5, 3, 1).is_err());
        assert!(regular(4, 4, 1).is_err());
        assert_ne!(regular(64, 8, 1).unwrap(), regular(64, 8, 2).unwrap());
    }

    #[test]
    fn tripartite_cap() {
        let t = tripartite(90, 0.8, Some(9), 3).unwrap();
        assert!(t.graph().max_degree() <= 9);
        assert_eq!(t.sizes(), (30, 30, 30));
        assert_eq!(tripartite(90, 0.8, Some(9), 3).unwrap(), t);
    }

    #[test]
    fn seeded_determinism() {
        assert_eq!(gnp(40, 0.3, 11).unwrap(), gnp(40, 0.3, 11).unwrap());
        assert_ne!(gnp(40, 0.3, 11).unwrap(), gnp(40, 0.3, 12).unwrap());
    }
}
