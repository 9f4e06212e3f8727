//! Reductions from static problems to the dynamic structures, run as
//! adaptive adversaries.
//!
//! Each driver observes the structure's output and picks the next update
//! from it. They double as cross-checks: a wrong answer from a driver means
//! the structure under it broke its contract.

use thiserror::Error;

use crate::bmm::BoolMatrix;
use crate::clique::{CliqueError, Exhaustion, MccConfig, Mccc};
use crate::decr_triangle::IncrTriangle;
use crate::graph::{Edge, Graph, GraphError};
use crate::mis::{CounterMis, MisBackend};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Clique(#[from] CliqueError),
    #[error("edge {0} joins two vertices of the same part")]
    IntraPart(Edge),
    #[error("reduction invariant violated: {0}")]
    Invariant(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("{queries} queries exceed the limit of {limit}")]
    TooManyQueries { queries: usize, limit: usize },
    #[error("query index {index} out of range for dimension {n}")]
    QueryOutOfRange { index: usize, n: usize },
}

fn invariant(msg: impl Into<String>) -> ReductionError {
    ReductionError::Invariant(msg.into())
}

/// Which part of a tripartite instance a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    X,
    Y,
    Z,
}

/// A graph on `X ⊔ Y ⊔ Z` with vertex ids `X = 0..nx`, `Y = nx..nx+ny`
/// and `Z` after that, and no edge inside a part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripartiteInstance {
    nx: usize,
    ny: usize,
    nz: usize,
    g: Graph,
}

impl TripartiteInstance {
    pub fn new(nx: usize, ny: usize, nz: usize, g: Graph) -> Result<Self, ReductionError> {
        if g.n() != nx + ny + nz {
            return Err(GraphError::OutOfRange { vertex: nx + ny + nz, n: g.n() }.into());
        }
        let inst = TripartiteInstance { nx, ny, nz, g };
        if let Some(e) = inst.g.edges().find(|e| inst.part_of(e.u) == inst.part_of(e.v)) {
            return Err(ReductionError::IntraPart(e));
        }
        Ok(inst)
    }

    pub fn from_edges(
        nx: usize,
        ny: usize,
        nz: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ReductionError> {
        Self::new(nx, ny, nz, Graph::from_edges(nx + ny + nz, edges)?)
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.nx, self.ny, self.nz)
    }

    pub fn part_of(&self, v: usize) -> Part {
        if v < self.nx {
            Part::X
        } else if v < self.nx + self.ny {
            Part::Y
        } else {
            Part::Z
        }
    }

    /// Edge-list format with the part sizes in a `# parts nx ny nz` line.
    pub fn write_edge_list<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# parts {} {} {}", self.nx, self.ny, self.nz)?;
        self.g.write_edge_list(w)
    }

    /// Reads the edge-list format; without a `# parts` line the vertices
    /// are split as evenly as possible, X first.
    pub fn read_edge_list<R: std::io::BufRead>(r: R) -> Result<Self, ReductionError> {
        let mut text = String::new();
        for line in r.lines() {
            let line = line.map_err(|e| GraphError::Parse { line: 0, msg: e.to_string() })?;
            text.push_str(&line);
            text.push('\n');
        }
        let g = Graph::read_edge_list(text.as_bytes())?;
        let parts = text.lines().find_map(|l| {
            let rest = l.trim().strip_prefix('#')?.trim().strip_prefix("parts")?;
            let v: Vec<usize> = rest.split_whitespace().map(str::parse).collect::<Result<_, _>>().ok()?;
            (v.len() == 3).then(|| (v[0], v[1], v[2]))
        });
        let n = g.n();
        let (nx, ny, nz) = parts.unwrap_or((n / 3 + usize::from(n % 3 > 0), n / 3 + usize::from(n % 3 > 1), n / 3));
        Self::new(nx, ny, nz, g)
    }

    /// The queried `X × Z` edges in canonical order.
    pub fn xz_edges(&self) -> Vec<Edge> {
        self.g
            .edges()
            .filter(|e| self.part_of(e.u) == Part::X && self.part_of(e.v) == Part::Z)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AetdOutcome {
    /// One entry per `X × Z` edge, canonical order.
    pub answers: Vec<(Edge, bool)>,
    /// Deletions the driver issued.
    pub deletions: u64,
    /// Triangles the structure reported along the way.
    pub triangles_reported: u64,
    /// Fresh pivots the structure drew after exhausting its copies.
    pub repivots: usize,
    pub work: u64,
}

/// All-edges triangle detection by deleting edges from a component-wise
/// maximal clique structure until the graph is empty.
pub fn solve_aetd_via_mccc(inst: &TripartiteInstance, seed: u64) -> Result<AetdOutcome, ReductionError> {
    // An adaptive adversary can strand every pivot copy; draw new ones.
    let cfg = MccConfig { gamma: None, exhaustion: Exhaustion::Repivot };
    solve_aetd_via_mccc_with(inst, seed, cfg)
}

pub fn solve_aetd_via_mccc_with(
    inst: &TripartiteInstance,
    seed: u64,
    cfg: MccConfig,
) -> Result<AetdOutcome, ReductionError> {
    let mut shadow = inst.g.clone();
    let mut mccc = Mccc::with_config(&shadow, seed, cfg)?;
    let xz = inst.xz_edges();
    let mut yes = vec![false; xz.len()];
    let (mut deletions, mut triangles) = (0u64, 0u64);
    let mut cursor = 0;
    loop {
        while cursor < shadow.n() && shadow.degree(cursor) == 0 {
            cursor += 1;
        }
        if cursor == shadow.n() {
            break;
        }
        let k = mccc.component_clique(cursor);
        if !is_clique(&shadow, &k) {
            return Err(invariant(format!("reported set {k:?} is not a clique")));
        }
        let victim = match k.len() {
            3 => {
                // Sorted ids follow the part order X < Y < Z.
                let e = Edge::ordered(k[0], k[2]);
                if inst.part_of(k[0]) != Part::X || inst.part_of(k[2]) != Part::Z {
                    return Err(invariant(format!("triangle {k:?} does not span the three parts")));
                }
                let i = xz.binary_search(&e).map_err(|_| invariant(format!("{e} is not a queried edge")))?;
                yes[i] = true;
                triangles += 1;
                e
            }
            2 => Edge::ordered(k[0], k[1]),
            _ => return Err(invariant(format!("component clique {k:?} has the wrong size"))),
        };
        shadow.delete_edge(victim)?;
        mccc.apply(victim)?;
        deletions += 1;
    }
    Ok(AetdOutcome {
        answers: xz.into_iter().zip(yes).collect(),
        deletions,
        triangles_reported: triangles,
        repivots: mccc.repivots(),
        work: mccc.work(),
    })
}

fn is_clique(g: &Graph, k: &[usize]) -> bool {
    k.iter().enumerate().all(|(i, &a)| k[i + 1..].iter().all(|&b| g.has_edge(a, b)))
}

/// Fully dynamic maximal clique by recomputation: after every update the
/// clique is rebuilt greedily in id order.
#[derive(Debug, Clone)]
pub struct NaiveMaxClique {
    g: Graph,
}

impl NaiveMaxClique {
    pub fn new(g: Graph) -> Self {
        NaiveMaxClique { g }
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn insert_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        self.g.insert_edge(e)
    }

    pub fn delete_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        self.g.delete_edge(e)
    }

    /// Greedy maximal clique, sorted.
    pub fn clique(&self) -> Vec<usize> {
        let w = self.g.row_words();
        let mut cand = vec![u64::MAX; w];
        let mut k = Vec::new();
        for v in 0..self.g.n() {
            if cand[v / 64] >> (v % 64) & 1 == 1 {
                k.push(v);
                for (c, r) in cand.iter_mut().zip(self.g.row(v)) {
                    *c &= r;
                }
            }
        }
        k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FdCliqueOutcome {
    pub has_triangle: bool,
    pub insertions: u64,
    pub deletions: u64,
    pub marked: usize,
}

/// Triangle detection through a fully dynamic maximal clique, marking
/// vertices that cannot lie in a triangle.
pub fn solve_triangle_via_fd_clique(g: &Graph) -> Result<FdCliqueOutcome, ReductionError> {
    let n = g.n();
    let mut oracle = NaiveMaxClique::new(g.clone());
    let mut marked = vec![false; n];
    let mut out = FdCliqueOutcome { has_triangle: false, insertions: 0, deletions: 0, marked: 0 };
    while out.marked < n {
        let rest: Vec<usize> = oracle.clique().into_iter().filter(|&v| !marked[v]).collect();
        match rest.len() {
            0 => return Err(invariant("clique holds only marked vertices while some are unmarked")),
            1 => {
                let v = rest[0];
                let missing: Vec<usize> = (0..n).filter(|&w| w != v && !oracle.graph().has_edge(v, w)).collect();
                for w in missing {
                    oracle.insert_edge(Edge::ordered(v, w))?;
                    out.insertions += 1;
                }
                marked[v] = true;
                out.marked += 1;
            }
            2 => {
                oracle.delete_edge(Edge::ordered(rest[0], rest[1]))?;
                out.deletions += 1;
            }
            _ => {
                if !is_clique(g, &rest[..3]) {
                    return Err(invariant(format!("{:?} is not a triangle of the input", &rest[..3])));
                }
                out.has_triangle = true;
                return Ok(out);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IncMisOutcome {
    pub has_triangle: bool,
    /// Edge insertions the driver forced on the MIS structure.
    pub insertions: u64,
    pub marked: usize,
    /// Membership changes of the MIS across the run.
    pub recourse: u64,
    pub work: u64,
}

/// Triangle detection through incremental MIS on two copies of the
/// complement, using [`CounterMis`].
pub fn solve_triangle_via_incr_mis(g: &Graph) -> Result<IncMisOutcome, ReductionError> {
    solve_triangle_via_incr_mis_with::<CounterMis>(g)
}

/// State of the doubled-complement construction. Copy 1 uses ids `0..n`,
/// copy 2 uses `n..2n`.
struct IncMisReduction<'a, M> {
    g: &'a Graph,
    n: usize,
    mis: M,
    marked: Vec<bool>,
    marked_count: usize,
    /// Edges currently inside one copy.
    copy_edges: usize,
    insertions: u64,
}

impl<M: MisBackend> IncMisReduction<'_, M> {
    fn insert(&mut self, a: usize, b: usize) -> Result<(), ReductionError> {
        self.mis.insert_edge(Edge::ordered(a, b))?;
        self.insertions += 1;
        Ok(())
    }

    fn mark(&mut self, v: usize) -> Result<(), ReductionError> {
        let n = self.n;
        self.marked[v] = true;
        self.marked_count += 1;
        // The bi-clique on marked vertices includes v1 v2 itself.
        let marked: Vec<usize> = (0..n).filter(|&u| self.marked[u]).collect();
        for u in marked {
            self.insert(v, n + u)?;
            if u != v {
                self.insert(u, n + v)?;
            }
        }
        Ok(())
    }

    fn add_intra(&mut self, u: usize, v: usize) -> Result<(), ReductionError> {
        // Only edges of G in no triangle may be inserted.
        if !self.g.has_edge(u, v) || self.g.common_neighbor_count(u, v) != 0 {
            return Err(invariant(format!("inserting {{{u},{v}}} would drop a triangle edge")));
        }
        self.insert(u, v)?;
        self.insert(self.n + u, self.n + v)?;
        self.copy_edges += 1;
        Ok(())
    }

    /// Cross edges are the marked bi-clique, marked vertices are universal
    /// in their copy, and the two copies coincide.
    fn check(&self) -> Result<(), ReductionError> {
        let n = self.n;
        let gp = self.mis.graph();
        let row = |x: usize| -> Vec<bool> { (0..2 * n).map(|y| gp.has_edge(x, y)).collect() };
        for u in 0..n {
            let (r1, r2) = (row(u), row(n + u));
            for w in 0..n {
                let cross = self.marked[u] && self.marked[w];
                if r1[n + w] != cross || r2[w] != cross {
                    return Err(invariant(format!("cross edge between copies of {u} and {w} does not match marks")));
                }
                if r1[w] != r2[n + w] {
                    return Err(invariant(format!("copies disagree on {{{u},{w}}}")));
                }
                if self.marked[u] && w != u && !r1[w] {
                    return Err(invariant(format!("marked {u} is not adjacent to {w}")));
                }
            }
        }
        Ok(())
    }
}

pub fn solve_triangle_via_incr_mis_with<M: MisBackend>(g: &Graph) -> Result<IncMisOutcome, ReductionError> {
    let n = g.n();
    let all: Vec<usize> = (0..n).collect();
    let (comp, _) = g.complement_induced(&all);
    let mut doubled = Graph::empty(2 * n);
    for e in comp.edges() {
        doubled.insert_edge(e)?;
        doubled.insert_edge(Edge { u: n + e.u, v: n + e.v })?;
    }
    let mut st = IncMisReduction {
        g,
        n,
        mis: M::init(doubled),
        marked: vec![false; n],
        marked_count: 0,
        copy_edges: comp.m(),
        insertions: 0,
    };
    let complete = n * n.saturating_sub(1) / 2;
    let mut has_triangle = false;
    st.check()?;
    // Runs until every vertex is marked; marked vertices are universal in
    // their copy, so both copies are complete by then.
    while st.marked_count < n {
        let k = st.mis.members();
        let k1: Vec<usize> = k.iter().copied().filter(|&x| x < n).collect();
        let k2: Vec<usize> = k.iter().copied().filter(|&x| x >= n).map(|x| x - n).collect();
        // Prefer copy 1 when neither side holds a marked vertex.
        let side = if k1.iter().all(|&v| !st.marked[v]) {
            k1
        } else if k2.iter().all(|&v| !st.marked[v]) {
            k2
        } else {
            return Err(invariant("both copies of the MIS hold a marked vertex"));
        };
        match side.len() {
            0 => return Err(invariant("MIS misses a copy entirely")),
            1 => st.mark(side[0])?,
            2 => st.add_intra(side[0], side[1])?,
            _ => {
                if !is_clique(g, &side[..3]) {
                    return Err(invariant(format!("{:?} is not a triangle of the input", &side[..3])));
                }
                has_triangle = true;
                break;
            }
        }
        st.check()?;
    }
    if !has_triangle && st.copy_edges != complete {
        return Err(invariant("copies are not complete after marking every vertex"));
    }
    Ok(IncMisOutcome {
        has_triangle,
        insertions: st.insertions,
        marked: st.marked_count,
        recourse: st.mis.recourse(),
        work: st.mis.work(),
    })
}

/// `ceil(n^(1/3))`, computed exactly.
pub fn group_count(n: usize) -> usize {
    let mut g = (n as f64).cbrt().round() as usize;
    while g * g * g < n {
        g += 1;
    }
    while g > 1 && (g - 1) * (g - 1) * (g - 1) >= n {
        g -= 1;
    }
    g.max(1)
}

/// One tripartite incremental triangle instance over `X_i`, `Y_j` and a
/// fresh `Z` part. Local ids: `X_i` first, then `Y_j`, then `Z`.
#[derive(Debug, Clone)]
struct GroupInstance {
    xs: std::ops::Range<usize>,
    ys: std::ops::Range<usize>,
    z_size: usize,
    tri: IncrTriangle,
    next_z: usize,
    exhaustion_resets: usize,
}

impl GroupInstance {
    fn build(m: &BoolMatrix, xs: std::ops::Range<usize>, ys: std::ops::Range<usize>, z_size: usize) -> Self {
        let (a, b) = (xs.len(), ys.len());
        let mut g = Graph::empty(a + b + z_size);
        for (lx, x) in xs.clone().enumerate() {
            for (ly, y) in ys.clone().enumerate() {
                if m.get(x, y) {
                    g.insert_edge(Edge { u: lx, v: a + ly }).expect("fresh edge");
                }
            }
        }
        GroupInstance { xs, ys, z_size, tri: IncrTriangle::from_graph(g), next_z: 0, exhaustion_resets: 0 }
    }

    fn reset(&mut self, m: &BoolMatrix) {
        let keep = self.exhaustion_resets;
        *self = GroupInstance::build(m, self.xs.clone(), self.ys.clone(), self.z_size);
        self.exhaustion_resets = keep;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OumvOutcome {
    pub answers: Vec<bool>,
    pub groups: usize,
    pub z_size: usize,
    pub reset_count: usize,
    /// Resets caused by running out of isolated `Z` nodes.
    pub exhaustion_resets: usize,
    pub triangles_introduced: usize,
}

/// Online queries "is there an edge of `M` in `X' × Y'`" answered through
/// incremental triangle detection on `g^2` grouped instances.
#[derive(Debug, Clone)]
pub struct OumvSolver {
    m: BoolMatrix,
    n: usize,
    groups: usize,
    z_size: usize,
    block: usize,
    instances: Vec<GroupInstance>,
    queries: usize,
    reset_count: usize,
    triangles: usize,
}

impl OumvSolver {
    pub fn new(m: BoolMatrix) -> Result<Self, ReductionError> {
        let (rows, cols) = (m.rows(), m.cols());
        if rows != cols {
            return Err(ReductionError::NonSquare { rows, cols });
        }
        let n = rows;
        let groups = group_count(n);
        let block = n.div_ceil(groups).max(1);
        let z_size = (2 * n).div_ceil(groups).max(1);
        let ranges: Vec<std::ops::Range<usize>> = (0..n.div_ceil(block)).map(|i| i * block..((i + 1) * block).min(n)).collect();
        let mut instances = Vec::with_capacity(ranges.len() * ranges.len());
        for xs in &ranges {
            for ys in &ranges {
                instances.push(GroupInstance::build(&m, xs.clone(), ys.clone(), z_size));
            }
        }
        Ok(OumvSolver { m, n, groups, z_size, block, instances, queries: 0, reset_count: 0, triangles: 0 })
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn reset_count(&self) -> usize {
        self.reset_count
    }

    /// Answers one query given as index sets of rows and columns.
    pub fn query(&mut self, xq: &[usize], yq: &[usize]) -> Result<bool, ReductionError> {
        if self.queries >= self.n.max(1) {
            return Err(ReductionError::TooManyQueries { queries: self.queries + 1, limit: self.n.max(1) });
        }
        let n = self.n;
        let in_x = index_mask(xq, n)?;
        let in_y = index_mask(yq, n)?;
        self.queries += 1;
        let mut answer = false;
        let mut introduced = 0;
        for inst in &mut self.instances {
            let xs: Vec<usize> = inst.xs.clone().filter(|&x| in_x[x]).map(|x| x - inst.xs.start).collect();
            let ys: Vec<usize> = inst.ys.clone().filter(|&y| in_y[y]).map(|y| y - inst.ys.start + inst.xs.len()).collect();
            if xs.is_empty() && ys.is_empty() {
                continue;
            }
            let z = inst.xs.len() + inst.ys.len() + inst.next_z;
            inst.next_z += 1;
            for &v in xs.iter().chain(&ys) {
                inst.tri.insert(Edge::ordered(v, z))?;
            }
            if inst.tri.has_triangle() {
                introduced += 1;
                answer = true;
                break;
            }
        }
        if introduced > 1 {
            return Err(invariant("one query introduced more than one triangle"));
        }
        self.triangles += introduced;
        for inst in &mut self.instances {
            let exhausted = inst.next_z == inst.z_size;
            if inst.tri.has_triangle() || exhausted {
                if exhausted && !inst.tri.has_triangle() {
                    inst.exhaustion_resets += 1;
                    if inst.exhaustion_resets > self.groups {
                        return Err(invariant("an instance ran out of isolated nodes too often"));
                    }
                }
                inst.reset(&self.m);
                self.reset_count += 1;
            }
        }
        Ok(answer)
    }

    pub fn outcome(&self, answers: Vec<bool>) -> OumvOutcome {
        OumvOutcome {
            answers,
            groups: self.groups,
            z_size: self.z_size,
            reset_count: self.reset_count,
            exhaustion_resets: self.instances.iter().map(|i| i.exhaustion_resets).sum(),
            triangles_introduced: self.triangles,
        }
    }

    /// Rows and columns per group.
    pub fn block(&self) -> usize {
        self.block
    }
}

fn index_mask(idx: &[usize], n: usize) -> Result<Vec<bool>, ReductionError> {
    let mut mask = vec![false; n];
    for &i in idx {
        *mask.get_mut(i).ok_or(ReductionError::QueryOutOfRange { index: i, n })? = true;
    }
    Ok(mask)
}

/// Runs every query; checks the reset bound `n + g^3` at the end.
pub fn oumv_via_incr_triangle(m: &BoolMatrix, queries: &[(Vec<usize>, Vec<usize>)]) -> Result<OumvOutcome, ReductionError> {
    let mut solver = OumvSolver::new(m.clone())?;
    let limit = m.rows().max(1);
    if queries.len() > limit {
        return Err(ReductionError::TooManyQueries { queries: queries.len(), limit });
    }
    let answers = queries.iter().map(|(x, y)| solver.query(x, y)).collect::<Result<Vec<_>, _>>()?;
    let g = solver.groups();
    if solver.reset_count() > m.rows() + g * g * g {
        return Err(invariant(format!("{} resets exceed n + g^3", solver.reset_count())));
    }
    Ok(solver.outcome(answers))
}
