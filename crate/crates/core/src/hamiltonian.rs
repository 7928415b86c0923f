//! Bipartite closure, exact Hamilton path/cycle search, and biclique search.
//!
//! The closure of a balanced graph on `(n, n)` repeatedly joins nonadjacent
//! cross pairs whose degree sum is at least `n + 1`; Hamiltonicity and
//! traceability are invariant under it, which lets the deciders work on the
//! (usually much denser) closed graph. Explicit certificates are always
//! produced by dynamic programming on the graph they certify.

use crate::graph::{BipartiteGraph, Side, VertexId};
use thiserror::Error;

/// Default cap on `|X| + |Y|` for the exact subset DP.
pub const DEFAULT_VERTEX_LIMIT: usize = 24;

/// Per-side cap for biclique enumeration.
pub const BICLIQUE_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HamiltonError {
    #[error("closure requires a balanced graph, got ({0}, {1}); augment the smaller class with a universal vertex (add_universal_vertex) first")]
    ClosureUnbalanced(usize, usize),
    #[error("Hamiltonicity decision requires a balanced graph, got ({0}, {1})")]
    NotBalanced(usize, usize),
    #[error(
        "traceability decision requires partition sizes differing by at most one, got ({0}, {1})"
    )]
    PartitionSkew(usize, usize),
    #[error("graph has {vertices} vertices, over the exact-search limit {limit}; reduce via the closure first or raise the limit")]
    TooLarge { vertices: usize, limit: usize },
    #[error("biclique search supports min(|X|, |Y|) <= {limit}, got ({0}, {1})", limit = BICLIQUE_LIMIT)]
    BicliqueTooLarge(usize, usize),
    #[error("biclique search is undefined for an empty edge set")]
    EmptyEdgeSet,
}

/// One closure step: the pair added and the degree sum that justified it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ClosureAddition {
    pub x: usize,
    pub y: usize,
    pub degree_sum: usize,
}

/// The closed graph together with the ordered list of added pairs.
#[derive(Debug, Clone)]
pub struct ClosureTrace {
    pub graph: BipartiteGraph,
    pub additions: Vec<ClosureAddition>,
}

/// Scan order for the closure's pair search. The resulting closed graph is
/// order-independent; only the trace changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanOrder {
    #[default]
    Lexicographic,
    ReverseLexicographic,
}

/// Bipartite closure of a balanced graph: adds the first qualifying pair in
/// scan order, then restarts the scan, until no nonadjacent cross pair has
/// degree sum at least `n + 1`.
pub fn b_closure(g: &BipartiteGraph) -> Result<ClosureTrace, HamiltonError> {
    b_closure_with_order(g, ScanOrder::Lexicographic)
}

pub fn b_closure_with_order(
    g: &BipartiteGraph,
    order: ScanOrder,
) -> Result<ClosureTrace, HamiltonError> {
    if !g.is_balanced() {
        return Err(HamiltonError::ClosureUnbalanced(g.x_count(), g.y_count()));
    }
    let n = g.x_count();
    let mut h = g.clone();
    let mut dx: Vec<usize> = (0..n).map(|x| h.x_degree(x)).collect();
    let mut dy: Vec<usize> = (0..n).map(|y| h.y_degree(y)).collect();
    let mut additions = Vec::new();
    let indices: Vec<usize> = match order {
        ScanOrder::Lexicographic => (0..n).collect(),
        ScanOrder::ReverseLexicographic => (0..n).rev().collect(),
    };
    'restart: loop {
        for &x in &indices {
            for &y in &indices {
                if !h.has_edge(x, y) && dx[x] + dy[y] > n {
                    h.set_edge(x, y);
                    additions.push(ClosureAddition {
                        x,
                        y,
                        degree_sum: dx[x] + dy[y],
                    });
                    dx[x] += 1;
                    dy[y] += 1;
                    continue 'restart;
                }
            }
        }
        return Ok(ClosureTrace {
            graph: h,
            additions,
        });
    }
}

/// A balanced graph is closed iff every nonadjacent cross pair has degree sum
/// at most `n`.
pub fn is_b_closed(g: &BipartiteGraph) -> Result<bool, HamiltonError> {
    if !g.is_balanced() {
        return Err(HamiltonError::ClosureUnbalanced(g.x_count(), g.y_count()));
    }
    let n = g.x_count();
    let dx: Vec<usize> = (0..n).map(|x| g.x_degree(x)).collect();
    let dy: Vec<usize> = (0..n).map(|y| g.y_degree(y)).collect();
    for (x, dxv) in dx.iter().enumerate() {
        for (y, dyv) in dy.iter().enumerate() {
            if !g.has_edge(x, y) && dxv + dyv > n {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Spanning path, listed end to end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCertificate {
    pub vertices: Vec<VertexId>,
}

/// Spanning cycle; the closing edge from last back to first is implied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCertificate {
    pub vertices: Vec<VertexId>,
}

fn sequence_valid(g: &BipartiteGraph, vs: &[VertexId]) -> bool {
    let mut seen_x = vec![false; g.x_count()];
    let mut seen_y = vec![false; g.y_count()];
    for v in vs {
        let seen = match v.side {
            Side::X => {
                if v.index >= g.x_count() {
                    return false;
                }
                &mut seen_x[v.index]
            }
            Side::Y => {
                if v.index >= g.y_count() {
                    return false;
                }
                &mut seen_y[v.index]
            }
        };
        if *seen {
            return false;
        }
        *seen = true;
    }
    if vs.len() != g.vertex_count() {
        return false;
    }
    vs.windows(2).all(|w| adjacent(g, w[0], w[1]))
}

fn adjacent(g: &BipartiteGraph, a: VertexId, b: VertexId) -> bool {
    match (a.side, b.side) {
        (Side::X, Side::Y) => g.has_edge(a.index, b.index),
        (Side::Y, Side::X) => g.has_edge(b.index, a.index),
        _ => false,
    }
}

impl PathCertificate {
    /// Independent check: covers every vertex exactly once and walks along
    /// edges.
    pub fn validate(&self, g: &BipartiteGraph) -> bool {
        sequence_valid(g, &self.vertices)
    }
}

impl CycleCertificate {
    pub fn validate(&self, g: &BipartiteGraph) -> bool {
        if self.vertices.len() < 4 || !g.is_balanced() {
            return false;
        }
        sequence_valid(g, &self.vertices)
            && adjacent(g, *self.vertices.last().unwrap(), self.vertices[0])
    }
}

/// Subset DP state shared by the path and cycle searches. Vertices are
/// indexed `X` first, then `Y`; `table[mask]` is the set of vertices at which
/// some simple path with vertex set `mask` can end.
struct SubsetDp {
    adjacency: Vec<u32>,
    table: Vec<u32>,
    total: usize,
}

impl SubsetDp {
    fn new(g: &BipartiteGraph) -> Self {
        let m = g.x_count();
        let total = g.vertex_count();
        let mut adjacency = vec![0u32; total];
        for x in 0..m {
            for y in g.neighbors_of_x(x) {
                adjacency[x] |= 1 << (m + y);
                adjacency[m + y] |= 1 << x;
            }
        }
        SubsetDp {
            adjacency,
            table: vec![0u32; 1 << total],
            total,
        }
    }

    fn run(&mut self, starts: u32) {
        for v in 0..self.total {
            if starts >> v & 1 == 1 {
                self.table[1 << v] = 1 << v;
            }
        }
        for mask in 1..self.table.len() {
            let mut lasts = self.table[mask];
            while lasts != 0 {
                let v = lasts.trailing_zeros() as usize;
                lasts &= lasts - 1;
                let mut nexts = self.adjacency[v] & !(mask as u32);
                while nexts != 0 {
                    let w = nexts.trailing_zeros() as usize;
                    nexts &= nexts - 1;
                    self.table[mask | 1 << w] |= 1 << w;
                }
            }
        }
    }

    /// Walks the table backwards from `(full, last)` to a start vertex.
    fn reconstruct(&self, g: &BipartiteGraph, mut last: usize) -> Vec<VertexId> {
        let m = g.x_count();
        let as_vertex = |v: usize| {
            if v < m {
                VertexId::x(v)
            } else {
                VertexId::y(v - m)
            }
        };
        let mut mask = (1usize << self.total) - 1;
        let mut out = vec![as_vertex(last)];
        while mask.count_ones() > 1 {
            let prev_mask = mask & !(1 << last);
            let candidates = self.table[prev_mask] & self.adjacency[last];
            debug_assert_ne!(candidates, 0, "DP table must contain a predecessor");
            let prev = candidates.trailing_zeros() as usize;
            out.push(as_vertex(prev));
            mask = prev_mask;
            last = prev;
        }
        out.reverse();
        out
    }
}

fn check_limit(g: &BipartiteGraph, limit: usize) -> Result<(), HamiltonError> {
    if g.vertex_count() > limit {
        return Err(HamiltonError::TooLarge {
            vertices: g.vertex_count(),
            limit,
        });
    }
    Ok(())
}

/// Exact spanning-path search on `g` itself. A vertex-free graph counts as
/// traceable with an empty certificate.
pub fn hamilton_path(g: &BipartiteGraph) -> Result<Option<PathCertificate>, HamiltonError> {
    hamilton_path_with_limit(g, DEFAULT_VERTEX_LIMIT)
}

pub fn hamilton_path_with_limit(
    g: &BipartiteGraph,
    limit: usize,
) -> Result<Option<PathCertificate>, HamiltonError> {
    check_limit(g, limit)?;
    let total = g.vertex_count();
    if total == 0 {
        return Ok(Some(PathCertificate { vertices: vec![] }));
    }
    if g.x_count().abs_diff(g.y_count()) > 1 || !g.is_connected() {
        return Ok(None);
    }
    if total == 1 {
        let v = if g.x_count() == 1 {
            VertexId::x(0)
        } else {
            VertexId::y(0)
        };
        return Ok(Some(PathCertificate { vertices: vec![v] }));
    }
    let mut dp = SubsetDp::new(g);
    // A spanning path must start in the larger class when the sizes differ.
    let starts: u32 = match g.x_count().cmp(&g.y_count()) {
        std::cmp::Ordering::Greater => (1 << g.x_count()) - 1,
        std::cmp::Ordering::Less => ((1 << g.y_count()) - 1) << g.x_count(),
        std::cmp::Ordering::Equal => (1u32 << total) - 1,
    };
    dp.run(starts);
    let full = (1usize << total) - 1;
    if dp.table[full] == 0 {
        return Ok(None);
    }
    let last = dp.table[full].trailing_zeros() as usize;
    let vertices = dp.reconstruct(g, last);
    let cert = PathCertificate { vertices };
    debug_assert!(cert.validate(g));
    Ok(Some(cert))
}

/// Exact spanning-cycle search on `g` itself. Needs a balanced graph with at
/// least two vertices per class; smaller graphs have no simple spanning
/// cycle.
pub fn hamilton_cycle(g: &BipartiteGraph) -> Result<Option<CycleCertificate>, HamiltonError> {
    hamilton_cycle_with_limit(g, DEFAULT_VERTEX_LIMIT)
}

pub fn hamilton_cycle_with_limit(
    g: &BipartiteGraph,
    limit: usize,
) -> Result<Option<CycleCertificate>, HamiltonError> {
    check_limit(g, limit)?;
    if !g.is_balanced() || g.x_count() < 2 || g.min_degree() < 2 || !g.is_connected() {
        return Ok(None);
    }
    let total = g.vertex_count();
    let mut dp = SubsetDp::new(g);
    dp.run(1); // anchor at x0: every spanning cycle passes through it
    let full = (1usize << total) - 1;
    let closing = dp.table[full] & dp.adjacency[0];
    if closing == 0 {
        return Ok(None);
    }
    let last = closing.trailing_zeros() as usize;
    let vertices = dp.reconstruct(g, last);
    let cert = CycleCertificate { vertices };
    debug_assert!(cert.validate(g));
    Ok(Some(cert))
}

/// Traceability through the closure pipeline: augment a nearly balanced
/// graph with a universal vertex on its smaller class (spanning paths of the
/// original correspond to spanning cycles of the augmentation), close, answer
/// immediately on a complete closure, otherwise run the exact search on the
/// closed graph. Certificates for the original graph come from
/// [`hamilton_path`] instead, since only the boolean transfers through the
/// closure.
pub fn is_traceable(g: &BipartiteGraph) -> Result<bool, HamiltonError> {
    let (m, n_y) = (g.x_count(), g.y_count());
    if m.abs_diff(n_y) > 1 {
        return Err(HamiltonError::PartitionSkew(m, n_y));
    }
    if g.vertex_count() <= 1 {
        return Ok(true);
    }
    if m == n_y {
        let closed = b_closure(g)?.graph;
        if closed.edge_count() == m * m {
            return Ok(true);
        }
        return Ok(hamilton_path(&closed)?.is_some());
    }
    let smaller = if m < n_y { Side::X } else { Side::Y };
    is_hamiltonian(&g.add_universal_vertex(smaller))
}

/// Hamiltonicity through the closure: the closure preserves the existence of
/// a spanning cycle, and a complete balanced graph on at least two vertices
/// per class always has one.
pub fn is_hamiltonian(g: &BipartiteGraph) -> Result<bool, HamiltonError> {
    if !g.is_balanced() {
        return Err(HamiltonError::NotBalanced(g.x_count(), g.y_count()));
    }
    let n = g.x_count();
    if n < 2 {
        return Ok(false);
    }
    let closed = b_closure(g)?.graph;
    if closed.edge_count() == n * n {
        return Ok(true);
    }
    Ok(hamilton_cycle(&closed)?.is_some())
}

/// A complete bipartite subgraph, both sides nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BicliqueWitness {
    pub x_set: Vec<usize>,
    pub y_set: Vec<usize>,
}

impl BicliqueWitness {
    /// Larger side size.
    pub fn s(&self) -> usize {
        self.x_set.len().max(self.y_set.len())
    }

    /// Smaller side size.
    pub fn t(&self) -> usize {
        self.x_set.len().min(self.y_set.len())
    }

    pub fn order(&self) -> usize {
        self.x_set.len() + self.y_set.len()
    }

    pub fn validate(&self, g: &BipartiteGraph) -> bool {
        !self.x_set.is_empty()
            && !self.y_set.is_empty()
            && self
                .x_set
                .iter()
                .all(|&x| self.y_set.iter().all(|&y| g.has_edge(x, y)))
    }
}

/// Maximum biclique under the objective (maximize `s + t`, then `s`), over
/// bicliques with both sides nonempty. Enumerates subsets of the smaller
/// class and closes each under common neighborhoods, which visits every
/// maximal biclique.
pub fn max_biclique(g: &BipartiteGraph) -> Result<BicliqueWitness, HamiltonError> {
    if g.edge_count() == 0 {
        return Err(HamiltonError::EmptyEdgeSet);
    }
    if g.x_count().min(g.y_count()) > BICLIQUE_LIMIT {
        return Err(HamiltonError::BicliqueTooLarge(g.x_count(), g.y_count()));
    }
    let enumerate_y = g.y_count() <= g.x_count();
    let work = if enumerate_y {
        g.clone()
    } else {
        g.transpose()
    };
    // In `work`, subsets run over Y and common neighborhoods live in X.
    let rows: Vec<u64> = (0..work.x_count()).map(|x| work.row_mask(x)).collect();
    let mut best: Option<(usize, usize, u64, u64)> = None; // (s+t, s, x_mask, y_mask)
    let count = work.y_count();
    for y_mask in 1u64..1 << count {
        let t = y_mask.count_ones() as usize;
        let mut x_mask = 0u64;
        for (x, &row) in rows.iter().enumerate() {
            if row & y_mask == y_mask {
                x_mask |= 1 << x;
            }
        }
        let s_side = x_mask.count_ones() as usize;
        if s_side == 0 {
            continue;
        }
        let key = (s_side + t, s_side.max(t));
        if best.is_none_or(|(bo, bs, _, _)| key > (bo, bs)) {
            best = Some((key.0, key.1, x_mask, y_mask));
        }
    }
    let (_, _, x_mask, y_mask) = best.expect("a graph with an edge contains a 1x1 biclique");
    let xs: Vec<usize> = (0..work.x_count())
        .filter(|&x| x_mask >> x & 1 == 1)
        .collect();
    let ys: Vec<usize> = (0..work.y_count())
        .filter(|&y| y_mask >> y & 1 == 1)
        .collect();
    let witness = if enumerate_y {
        BicliqueWitness {
            x_set: xs,
            y_set: ys,
        }
    } else {
        BicliqueWitness {
            x_set: ys,
            y_set: xs,
        }
    };
    debug_assert!(witness.validate(g));
    Ok(witness)
}

/// Does `g` contain a complete `K_{s_x, t_y}` with `s_x` vertices from `X`
/// and `t_y` from `Y`? Orientation matters; zero-size requests are trivially
/// true when the other side fits.
pub fn contains_biclique(
    g: &BipartiteGraph,
    s_x: usize,
    t_y: usize,
) -> Result<bool, HamiltonError> {
    if s_x > g.x_count() || t_y > g.y_count() {
        return Ok(false);
    }
    if s_x == 0 || t_y == 0 {
        return Ok(true);
    }
    if g.x_count().min(g.y_count()) > BICLIQUE_LIMIT {
        return Err(HamiltonError::BicliqueTooLarge(g.x_count(), g.y_count()));
    }
    // Count, for each Y-subset of size t_y, the common neighborhood in X.
    let n = g.y_count();
    let mut y_mask: u64 = (1 << t_y) - 1;
    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    loop {
        let mut common = 0usize;
        for x in 0..g.x_count() {
            if g.row_mask(x) & y_mask == y_mask {
                common += 1;
                if common >= s_x {
                    return Ok(true);
                }
            }
        }
        match next_subset(y_mask, full) {
            Some(next) => y_mask = next,
            None => return Ok(false),
        }
    }
}

/// Orientation-free containment of a complete `K_{a,b}`: either `a` rows
/// against `b` columns or `b` rows against `a` columns.
pub fn contains_biclique_unordered(
    g: &BipartiteGraph,
    a: usize,
    b: usize,
) -> Result<bool, HamiltonError> {
    Ok(contains_biclique(g, a, b)? || (a != b && contains_biclique(g, b, a)?))
}

/// Gosper's hack: next bitmask with the same popcount within `full`.
fn next_subset(mask: u64, full: u64) -> Option<u64> {
    let c = mask & mask.wrapping_neg();
    let r = mask + c;
    let next = (((r ^ mask) >> 2) / c) | r;
    if next & !full != 0 || next < mask {
        None
    } else {
        Some(next)
    }
}
