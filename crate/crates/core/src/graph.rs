//! Bipartite graphs with a fixed, ordered bipartition.
//!
//! A graph lives on vertex classes `X` (size `m`) and `Y` (size `n_y`); only
//! cross edges exist. The partition is part of the identity: a graph on
//! `(m, n_y)` and its transpose on `(n_y, m)` are distinct values unless
//! `m = n_y`. Rows are bitmasks over `Y`, segmented into 64-bit words when
//! `n_y` exceeds the word width (sizes used here never do, but the contract
//! holds for any size).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the two partition classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::X => write!(f, "X"),
            Side::Y => write!(f, "Y"),
        }
    }
}

/// A vertex named by its class and 0-based position within the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexId {
    pub side: Side,
    pub index: usize,
}

impl VertexId {
    pub fn x(index: usize) -> Self {
        VertexId {
            side: Side::X,
            index,
        }
    }

    pub fn y(index: usize) -> Self {
        VertexId {
            side: Side::Y,
            index,
        }
    }
}

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.side {
            Side::X => write!(f, "x{}", self.index),
            Side::Y => write!(f, "y{}", self.index),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({x}, {y}) out of range for partition sizes ({m}, {n_y})")]
    EdgeOutOfRange {
        x: usize,
        y: usize,
        m: usize,
        n_y: usize,
    },
    #[error("vertex {vertex} out of range for partition sizes ({m}, {n_y})")]
    VertexOutOfRange {
        vertex: VertexId,
        m: usize,
        n_y: usize,
    },
    #[error("partition sizes ({0}, {1}) and ({2}, {3}) do not match")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("graph on ({m}, {n_y}) exceeds the exact canonicalization limit of {limit} per side; use labeled comparison instead")]
    TooLargeForCanonical { m: usize, n_y: usize, limit: usize },
}

/// Bipartite graph on `X` of size `m` and `Y` of size `n_y`, stored as one
/// bitmask row per `X`-vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    m: usize,
    n_y: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

fn words_for(n_y: usize) -> usize {
    n_y.div_ceil(64)
}

impl BipartiteGraph {
    /// Builds the graph with exactly the given edge set. Duplicate pairs are
    /// collapsed; any out-of-range pair is rejected.
    pub fn new(m: usize, n_y: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(m, n_y);
        for &(x, y) in edges {
            if x >= m || y >= n_y {
                return Err(GraphError::EdgeOutOfRange { x, y, m, n_y });
            }
            g.set_edge(x, y);
        }
        Ok(g)
    }

    pub fn empty(m: usize, n_y: usize) -> Self {
        let words_per_row = words_for(n_y);
        BipartiteGraph {
            m,
            n_y,
            words_per_row,
            bits: vec![0; m * words_per_row],
        }
    }

    pub fn complete(m: usize, n_y: usize) -> Self {
        Self::empty(m, n_y).quasi_complement()
    }

    pub fn x_count(&self) -> usize {
        self.m
    }

    pub fn y_count(&self) -> usize {
        self.n_y
    }

    pub fn vertex_count(&self) -> usize {
        self.m + self.n_y
    }

    pub fn is_balanced(&self) -> bool {
        self.m == self.n_y
    }

    pub fn is_nearly_balanced(&self) -> bool {
        self.m.abs_diff(self.n_y) == 1
    }

    pub fn row_words(&self, x: usize) -> &[u64] {
        &self.bits[x * self.words_per_row..(x + 1) * self.words_per_row]
    }

    fn row_words_mut(&mut self, x: usize) -> &mut [u64] {
        &mut self.bits[x * self.words_per_row..(x + 1) * self.words_per_row]
    }

    /// Row mask as a single word; callable only when `n_y <= 64`.
    pub fn row_mask(&self, x: usize) -> u64 {
        debug_assert!(self.n_y <= 64);
        if self.words_per_row == 0 {
            0
        } else {
            self.bits[x * self.words_per_row]
        }
    }

    pub(crate) fn set_edge(&mut self, x: usize, y: usize) {
        self.row_words_mut(x)[y / 64] |= 1 << (y % 64);
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.m && y < self.n_y);
        self.row_words(x)[y / 64] >> (y % 64) & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges in lexicographic `(x, y)` order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for x in 0..self.m {
            for y in self.neighbors_of_x(x) {
                out.push((x, y));
            }
        }
        out
    }

    pub fn neighbors_of_x(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(x)
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| BitIter(word).map(move |b| w * 64 + b))
    }

    pub fn neighbors_of_y(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(move |&x| self.has_edge(x, y))
    }

    pub fn x_degree(&self, x: usize) -> usize {
        self.row_words(x)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn y_degree(&self, y: usize) -> usize {
        (0..self.m).filter(|&x| self.has_edge(x, y)).count()
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        match v.side {
            Side::X if v.index < self.m => Ok(self.x_degree(v.index)),
            Side::Y if v.index < self.n_y => Ok(self.y_degree(v.index)),
            _ => Err(GraphError::VertexOutOfRange {
                vertex: v,
                m: self.m,
                n_y: self.n_y,
            }),
        }
    }

    /// Minimum degree over all vertices of both classes; 0 for a graph with
    /// no vertices.
    pub fn min_degree(&self) -> usize {
        let dx = (0..self.m).map(|x| self.x_degree(x)).min();
        let dy = (0..self.n_y).map(|y| self.y_degree(y)).min();
        match (dx, dy) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => 0,
        }
    }

    /// Flips every cross pair: `x ~ y` in the result iff `x !~ y` here. An
    /// involution; partition sizes are preserved.
    pub fn quasi_complement(&self) -> Self {
        let mut out = self.clone();
        if self.words_per_row == 0 {
            return out;
        }
        let tail_bits = self.n_y % 64;
        let tail_mask = if tail_bits == 0 {
            u64::MAX
        } else {
            (1u64 << tail_bits) - 1
        };
        for x in 0..self.m {
            let row = out.row_words_mut(x);
            for w in row.iter_mut() {
                *w = !*w;
            }
            *row.last_mut().unwrap() &= tail_mask;
        }
        out
    }

    /// Transpose: swaps the two classes, so the result lives on
    /// `(n_y, m)`. Never applied implicitly by any other operation.
    pub fn transpose(&self) -> Self {
        let mut out = Self::empty(self.n_y, self.m);
        for x in 0..self.m {
            for y in self.neighbors_of_x(x) {
                out.set_edge(y, x);
            }
        }
        out
    }

    /// Block join: the union of both graphs plus every edge between `X1` and
    /// `Y2` and between `Y1` and `X2`. Vertices of `self` keep their indices;
    /// `other`'s are shifted past them.
    pub fn join(&self, other: &Self) -> Self {
        let m = self.m + other.m;
        let n_y = self.n_y + other.n_y;
        let mut edges = Vec::new();
        edges.extend(self.edges());
        edges.extend(
            other
                .edges()
                .into_iter()
                .map(|(x, y)| (self.m + x, self.n_y + y)),
        );
        for x in 0..self.m {
            for y in 0..other.n_y {
                edges.push((x, self.n_y + y));
            }
        }
        for x in 0..other.m {
            for y in 0..self.n_y {
                edges.push((self.m + x, y));
            }
        }
        Self::new(m, n_y, &edges).expect("join edges are in range by construction")
    }

    /// Disjoint union; no cross edges between the operands.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut edges = self.edges();
        edges.extend(
            other
                .edges()
                .into_iter()
                .map(|(x, y)| (self.m + x, self.n_y + y)),
        );
        Self::new(self.m + other.m, self.n_y + other.n_y, &edges)
            .expect("union edges are in range by construction")
    }

    /// Appends one vertex to `side`, adjacent to every vertex of the opposite
    /// class.
    pub fn add_universal_vertex(&self, side: Side) -> Self {
        match side {
            Side::X => {
                let mut out = Self::empty(self.m + 1, self.n_y);
                for x in 0..self.m {
                    for y in self.neighbors_of_x(x) {
                        out.set_edge(x, y);
                    }
                }
                for y in 0..self.n_y {
                    out.set_edge(self.m, y);
                }
                out
            }
            Side::Y => {
                let mut out = Self::empty(self.m, self.n_y + 1);
                for x in 0..self.m {
                    for y in self.neighbors_of_x(x) {
                        out.set_edge(x, y);
                    }
                    out.set_edge(x, self.n_y);
                }
                out
            }
        }
    }

    /// Pads the smaller class with isolated vertices until both classes have
    /// equal size. Identity on balanced graphs.
    pub fn pad_to_balanced(&self) -> Self {
        match self.m.cmp(&self.n_y) {
            std::cmp::Ordering::Less => self.disjoint_union(&Self::empty(self.n_y - self.m, 0)),
            std::cmp::Ordering::Greater => self.disjoint_union(&Self::empty(0, self.m - self.n_y)),
            std::cmp::Ordering::Equal => self.clone(),
        }
    }

    /// Labeled subgraph test: same partition sizes and `E(self) ⊆ E(host)`.
    pub fn is_labeled_subgraph(&self, host: &Self) -> Result<bool, GraphError> {
        if self.m != host.m || self.n_y != host.n_y {
            return Err(GraphError::SizeMismatch(self.m, self.n_y, host.m, host.n_y));
        }
        Ok(self.bits.iter().zip(&host.bits).all(|(a, b)| a & !b == 0))
    }

    /// Connectivity over the whole vertex set (a vertex-free graph counts as
    /// connected; any isolated vertex in a larger graph breaks it).
    pub fn is_connected(&self) -> bool {
        let total = self.vertex_count();
        if total <= 1 {
            return true;
        }
        let mut seen_x = vec![false; self.m];
        let mut seen_y = vec![false; self.n_y];
        let mut stack = Vec::new();
        if self.m > 0 {
            seen_x[0] = true;
            stack.push(VertexId::x(0));
        } else {
            seen_y[0] = true;
            stack.push(VertexId::y(0));
        }
        let mut count = 1;
        while let Some(v) = stack.pop() {
            match v.side {
                Side::X => {
                    for y in self.neighbors_of_x(v.index) {
                        if !seen_y[y] {
                            seen_y[y] = true;
                            count += 1;
                            stack.push(VertexId::y(y));
                        }
                    }
                }
                Side::Y => {
                    for x in self.neighbors_of_y(v.index) {
                        if !seen_x[x] {
                            seen_x[x] = true;
                            count += 1;
                            stack.push(VertexId::x(x));
                        }
                    }
                }
            }
        }
        count == total
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let b = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_rejects_out_of_range() {
        let err = BipartiteGraph::new(2, 2, &[(0, 0), (2, 1)]).unwrap_err();
        assert_eq!(
            err,
            GraphError::EdgeOutOfRange {
                x: 2,
                y: 1,
                m: 2,
                n_y: 2
            }
        );
    }

    #[test]
    fn new_collapses_duplicates() {
        let g = BipartiteGraph::new(2, 2, &[(0, 0), (0, 0), (1, 1)]).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn k22_has_four_edges() {
        let g = BipartiteGraph::new(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g, BipartiteGraph::complete(2, 2));
    }

    #[test]
    fn single_vertex_graph_is_legal() {
        let g = BipartiteGraph::new(1, 0, &[]).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.min_degree(), 0);
    }

    #[test]
    fn perfect_matching() {
        let g = BipartiteGraph::new(3, 3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.min_degree(), 1);
    }

    #[test]
    fn complete_and_empty_counts() {
        assert_eq!(BipartiteGraph::complete(3, 4).edge_count(), 12);
        assert_eq!(BipartiteGraph::empty(5, 2).edge_count(), 0);
    }

    #[test]
    fn quasi_complement_of_complete_is_empty() {
        let g = BipartiteGraph::complete(3, 4);
        assert_eq!(g.quasi_complement(), BipartiteGraph::empty(3, 4));
        assert_eq!(
            BipartiteGraph::empty(2, 3).quasi_complement(),
            BipartiteGraph::complete(2, 3)
        );
    }

    #[test]
    fn quasi_complement_is_involution() {
        let g = BipartiteGraph::new(3, 5, &[(0, 4), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert_eq!(g.quasi_complement().quasi_complement(), g);
        assert_eq!(g.edge_count() + g.quasi_complement().edge_count(), 15);
    }

    #[test]
    fn join_of_k11_and_phi11_is_path() {
        let k11 = BipartiteGraph::complete(1, 1);
        let phi11 = BipartiteGraph::empty(1, 1);
        let j = k11.join(&phi11);
        assert_eq!((j.x_count(), j.y_count()), (2, 2));
        assert_eq!(j.edges(), vec![(0, 0), (0, 1), (1, 0)]);
    }

    #[test]
    fn join_edge_count_identity() {
        let g1 = BipartiteGraph::new(2, 3, &[(0, 1), (1, 2)]).unwrap();
        let g2 = BipartiteGraph::new(3, 1, &[(2, 0)]).unwrap();
        let j = g1.join(&g2);
        assert_eq!(j.edge_count(), 2 + 1 + 2 + 9);
    }

    #[test]
    fn join_with_null_graph_is_identity() {
        let g = BipartiteGraph::new(2, 2, &[(0, 1)]).unwrap();
        let null = BipartiteGraph::empty(0, 0);
        assert_eq!(g.join(&null), g);
        assert_eq!(g.disjoint_union(&null), g);
    }

    #[test]
    fn universal_vertex_on_each_side() {
        let g = BipartiteGraph::empty(0, 1);
        let k11 = g.add_universal_vertex(Side::X);
        assert_eq!(k11, BipartiteGraph::complete(1, 1));

        let m = BipartiteGraph::new(2, 2, &[(0, 0)]).unwrap();
        let gy = m.add_universal_vertex(Side::Y);
        assert_eq!((gy.x_count(), gy.y_count()), (2, 3));
        assert_eq!(gy.x_degree(0), 2);
        assert_eq!(gy.y_degree(2), 2);
    }

    #[test]
    fn degrees_and_min_degree() {
        let g = BipartiteGraph::complete(3, 5);
        assert_eq!(g.degree(VertexId::x(0)).unwrap(), 5);
        assert_eq!(g.degree(VertexId::y(4)).unwrap(), 3);
        assert_eq!(g.min_degree(), 3);
        assert!(g.degree(VertexId::y(5)).is_err());
    }

    #[test]
    fn degree_sums_match_edge_count() {
        let g = BipartiteGraph::new(4, 3, &[(0, 0), (1, 0), (1, 2), (3, 1)]).unwrap();
        let sx: usize = (0..4).map(|x| g.x_degree(x)).sum();
        let sy: usize = (0..3).map(|y| g.y_degree(y)).sum();
        assert_eq!(sx, g.edge_count());
        assert_eq!(sy, g.edge_count());
    }

    #[test]
    fn labeled_subgraph() {
        let p4 = BipartiteGraph::new(2, 2, &[(0, 0), (0, 1), (1, 0)]).unwrap();
        let k22 = BipartiteGraph::complete(2, 2);
        assert!(p4.is_labeled_subgraph(&k22).unwrap());
        assert!(!k22.is_labeled_subgraph(&p4).unwrap());
        assert!(p4
            .is_labeled_subgraph(&BipartiteGraph::complete(3, 3))
            .is_err());
    }

    #[test]
    fn mutual_labeled_subgraphs_are_equal() {
        let g = BipartiteGraph::new(3, 3, &[(0, 1), (2, 2)]).unwrap();
        let h = BipartiteGraph::new(3, 3, &[(2, 2), (0, 1)]).unwrap();
        assert!(g.is_labeled_subgraph(&h).unwrap());
        assert!(h.is_labeled_subgraph(&g).unwrap());
        assert_eq!(g, h);
    }

    #[test]
    fn transpose_swaps_sides() {
        let g = BipartiteGraph::new(2, 3, &[(0, 2), (1, 0)]).unwrap();
        let t = g.transpose();
        assert_eq!((t.x_count(), t.y_count()), (3, 2));
        assert!(t.has_edge(2, 0) && t.has_edge(0, 1));
        assert_eq!(t.transpose(), g);
    }

    #[test]
    fn connectivity() {
        assert!(BipartiteGraph::complete(2, 3).is_connected());
        assert!(!BipartiteGraph::new(2, 2, &[(0, 0)]).unwrap().is_connected());
        assert!(BipartiteGraph::empty(1, 0).is_connected());
        assert!(!BipartiteGraph::empty(1, 1).is_connected());
    }

    #[test]
    fn wide_rows_use_multiple_words() {
        let mut edges = Vec::new();
        for y in 0..100 {
            if y % 3 == 0 {
                edges.push((0, y));
            }
        }
        let g = BipartiteGraph::new(2, 100, &edges).unwrap();
        assert_eq!(g.x_degree(0), 34);
        assert_eq!(g.quasi_complement().x_degree(0), 66);
        assert_eq!(g.quasi_complement().x_degree(1), 100);
        assert_eq!(g.transpose().y_degree(0), 34);
    }
}
