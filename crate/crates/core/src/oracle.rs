//! Brute-force ground truth.
//!
//! Everything here works on a private `Vec<Vec<bool>>` copy of the
//! adjacency built from the edge list, and checks definitions directly.
//! Nothing reuses the bitset machinery of the algorithms under test.

use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::reductions::{Part, TripartiteInstance};

pub const DEFAULT_GUARD: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("graph with {n} vertices exceeds the oracle guard of {guard}")]
pub struct OracleTooLarge {
    pub n: usize,
    pub guard: usize,
}

/// Dense adjacency owned by the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    adj: Vec<Vec<bool>>,
}

impl Adjacency {
    pub fn of(g: &Graph) -> Self {
        let n = g.n();
        let mut adj = vec![vec![false; n]; n];
        for e in g.edges() {
            adj[e.u][e.v] = true;
            adj[e.v][e.u] = true;
        }
        Adjacency { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    fn is_clique(&self, k: &[usize]) -> bool {
        k.iter().enumerate().all(|(i, &a)| k[i + 1..].iter().all(|&b| a != b && self.adj[a][b]))
    }

    /// Component id per vertex by plain DFS.
    fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = s;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for y in 0..n {
                    if self.adj[x][y] && comp[y] == usize::MAX {
                        comp[y] = s;
                        stack.push(y);
                    }
                }
            }
        }
        comp
    }
}

fn guard(n: usize, limit: usize) -> Result<(), OracleTooLarge> {
    if n > limit {
        Err(OracleTooLarge { n, guard: limit })
    } else {
        Ok(())
    }
}

/// Triple loop over vertex triples.
pub fn oracle_triangle(g: &Graph, limit: usize) -> Result<bool, OracleTooLarge> {
    guard(g.n(), limit)?;
    let a = Adjacency::of(g);
    let n = a.n();
    for x in 0..n {
        for y in x + 1..n {
            if !a.edge(x, y) {
                continue;
            }
            for z in y + 1..n {
                if a.edge(x, z) && a.edge(y, z) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Whether edge `e` lies in some triangle.
pub fn oracle_edge_in_triangle(g: &Graph, e: Edge) -> bool {
    let a = Adjacency::of(g);
    a.edge(e.u, e.v) && (0..a.n()).any(|w| a.edge(e.u, w) && a.edge(e.v, w))
}

/// Per `X × Z` edge: does it lie in a triangle `(x, y, z)`?
pub fn oracle_aetd(inst: &TripartiteInstance, limit: usize) -> Result<Vec<(Edge, bool)>, OracleTooLarge> {
    let g = inst.graph();
    guard(g.n(), limit)?;
    let a = Adjacency::of(g);
    let n = a.n();
    let mut out = Vec::new();
    for x in (0..n).filter(|&v| inst.part_of(v) == Part::X) {
        for z in (0..n).filter(|&v| inst.part_of(v) == Part::Z) {
            if a.edge(x, z) {
                let hit = (0..n).any(|y| inst.part_of(y) == Part::Y && a.edge(x, y) && a.edge(y, z));
                out.push((Edge { u: x, v: z }, hit));
            }
        }
    }
    Ok(out)
}

/// `s` is independent and no vertex outside it can be added.
pub fn oracle_mis_check(g: &Graph, s: &[usize]) -> bool {
    let a = Adjacency::of(g);
    let n = a.n();
    let mut member = vec![false; n];
    for &v in s {
        if v >= n || member[v] {
            return false;
        }
        member[v] = true;
    }
    let independent = s.iter().all(|&x| s.iter().all(|&y| !a.edge(x, y)));
    let maximal = (0..n).all(|v| member[v] || s.iter().any(|&x| a.edge(v, x)));
    independent && maximal
}

/// Without scoping: `k` is a maximal clique of `g`. With scoping: the
/// intersection of `k` with every component is a maximal clique of it.
pub fn oracle_max_clique_check(g: &Graph, k: &[usize], component_scoped: bool) -> bool {
    let a = Adjacency::of(g);
    let n = a.n();
    if k.iter().any(|&v| v >= n) {
        return false;
    }
    let mut member = vec![false; n];
    for &v in k {
        if member[v] {
            return false;
        }
        member[v] = true;
    }
    if !component_scoped {
        return !k.is_empty() && a.is_clique(k) && (0..n).all(|v| member[v] || k.iter().any(|&x| !a.edge(v, x)));
    }
    let comp = a.components();
    let mut reps: Vec<usize> = comp.clone();
    reps.sort_unstable();
    reps.dedup();
    reps.into_iter().all(|c| {
        let part: Vec<usize> = k.iter().copied().filter(|&v| comp[v] == c).collect();
        !part.is_empty()
            && a.is_clique(&part)
            && (0..n).filter(|&v| comp[v] == c && !member[v]).all(|v| part.iter().any(|&x| !a.edge(v, x)))
    })
}

/// `k` lies in the component of `v` and is a maximal clique of it.
pub fn oracle_max_clique_in_component(g: &Graph, k: &[usize], v: usize) -> bool {
    let a = Adjacency::of(g);
    let n = a.n();
    if v >= n || k.iter().any(|&x| x >= n) {
        return false;
    }
    let comp = a.components();
    let c = comp[v];
    let mut sorted = k.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == k.len()
        && !k.is_empty()
        && k.iter().all(|&x| comp[x] == c)
        && a.is_clique(k)
        && (0..n).filter(|&w| comp[w] == c && sorted.binary_search(&w).is_err()).all(|w| k.iter().any(|&x| !a.edge(w, x)))
}

/// Triangle-freeness tracked along a trace. A full scan runs only when
/// the remembered witness triangle is destroyed or after an insertion
/// into a triangle-free graph; deletions cannot create triangles.
#[derive(Debug, Clone)]
pub struct TriangleWatch {
    witness: Option<[usize; 3]>,
    scans: usize,
}

impl TriangleWatch {
    pub fn new(g: &Graph) -> Self {
        let mut w = TriangleWatch { witness: None, scans: 0 };
        w.rescan(&Adjacency::of(g));
        w
    }

    fn rescan(&mut self, a: &Adjacency) {
        self.scans += 1;
        let n = a.n();
        self.witness = None;
        for x in 0..n {
            for y in x + 1..n {
                if !a.edge(x, y) {
                    continue;
                }
                if let Some(z) = (y + 1..n).find(|&z| a.edge(x, z) && a.edge(y, z)) {
                    self.witness = Some([x, y, z]);
                    return;
                }
            }
        }
    }

    /// Refreshes the verdict after `g` changed by one update.
    pub fn update(&mut self, g: &Graph, was_insertion: bool) -> bool {
        let stale = match self.witness {
            Some(t) => !oracle_is_triangle(g, t),
            None => was_insertion,
        };
        if stale {
            self.rescan(&Adjacency::of(g));
        }
        self.witness.is_some()
    }

    pub fn has_triangle(&self) -> bool {
        self.witness.is_some()
    }

    /// Full scans performed so far.
    pub fn scans(&self) -> usize {
        self.scans
    }
}

/// A clique with at least three vertices, or a maximal clique.
pub fn oracle_three_max_check(g: &Graph, k: &[usize]) -> bool {
    let a = Adjacency::of(g);
    if k.len() >= 3 {
        let mut sorted = k.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == k.len() && k.iter().all(|&v| v < a.n()) && a.is_clique(k)
    } else {
        oracle_max_clique_check(g, k, false)
    }
}

/// `t` is a triangle of `g`.
pub fn oracle_is_triangle(g: &Graph, t: [usize; 3]) -> bool {
    let n = g.n();
    t.iter().all(|&v| v < n) && t[0] != t[1] && t[1] != t[2] && t[0] != t[2] && {
        // Edge-list lookups only; avoids rebuilding the dense copy per call.
        let nb = |a: usize, b: usize| g.neighbors(a).any(|x| x == b);
        nb(t[0], t[1]) && nb(t[0], t[2]) && nb(t[1], t[2])
    }
}

/// Naive `OR_j (M_ij AND ...)` style check: is there a one of `m` inside
/// `rows × cols`?
pub fn oracle_oumv(m: &[Vec<bool>], rows: &[usize], cols: &[usize]) -> bool {
    rows.iter().any(|&i| cols.iter().any(|&j| m[i][j]))
}
