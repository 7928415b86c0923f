#![allow(dead_code, clippy::needless_range_loop)]

//! Independent oracles for the integration suites. Everything here is
//! deliberately written against different algorithms than the library:
//! dense Jacobi eigensolving instead of power iteration, permutation
//! enumeration instead of canonical forms, saturation instead of scan-order
//! closure, and plain backtracking instead of subset DP.

use bigraph::graph::{BipartiteGraph, Side, VertexId};

/// Cyclic Jacobi eigenvalue iteration for a dense symmetric matrix.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    if n == 0 {
        return vec![];
    }
    for _ in 0..200 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() < 1e-13 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let (aip, aiq) = (a[i][p], a[i][q]);
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let (api, aqi) = (a[p][i], a[q][i]);
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

pub fn adjacency_matrix(g: &BipartiteGraph) -> Vec<Vec<f64>> {
    let (m, n) = (g.x_count(), g.y_count());
    let total = m + n;
    let mut a = vec![vec![0.0; total]; total];
    for x in 0..m {
        for y in g.neighbors_of_x(x) {
            a[x][m + y] = 1.0;
            a[m + y][x] = 1.0;
        }
    }
    a
}

/// Spectral radius via dense Jacobi.
pub fn oracle_rho(g: &BipartiteGraph) -> f64 {
    jacobi_eigenvalues(adjacency_matrix(g))
        .into_iter()
        .fold(0.0, f64::max)
}

/// Signless Laplacian spectral radius via dense Jacobi.
pub fn oracle_q(g: &BipartiteGraph) -> f64 {
    let (m, n) = (g.x_count(), g.y_count());
    let mut a = adjacency_matrix(g);
    for x in 0..m {
        a[x][x] = g.x_degree(x) as f64;
    }
    for y in 0..n {
        a[m + y][m + y] = g.y_degree(y) as f64;
    }
    jacobi_eigenvalues(a).into_iter().fold(0.0, f64::max)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=i {
                let mut q = p.clone();
                q.insert(pos, i);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

fn relabel(g: &BipartiteGraph, xp: &[usize], yp: &[usize]) -> BipartiteGraph {
    let edges: Vec<(usize, usize)> = g.edges().into_iter().map(|(x, y)| (xp[x], yp[y])).collect();
    BipartiteGraph::new(g.x_count(), g.y_count(), &edges).unwrap()
}

/// Brute-force isomorphism over all relabelings, with class exchange when
/// balanced. Feasible for sides up to about 4.
pub fn oracle_isomorphic(g: &BipartiteGraph, h: &BipartiteGraph) -> bool {
    if g.x_count() != h.x_count() || g.y_count() != h.y_count() {
        return false;
    }
    let candidates: Vec<BipartiteGraph> = if g.is_balanced() {
        vec![g.clone(), g.transpose()]
    } else {
        vec![g.clone()]
    };
    let xps = permutations(g.x_count());
    let yps = permutations(g.y_count());
    for base in candidates {
        for xp in &xps {
            for yp in &yps {
                if &relabel(&base, xp, yp) == h {
                    return true;
                }
            }
        }
    }
    false
}

/// Closure by saturation: add every currently qualifying pair at once and
/// repeat. The qualifying rule is monotone, so this reaches the same
/// fixpoint as one-at-a-time insertion.
pub fn oracle_closure(g: &BipartiteGraph) -> BipartiteGraph {
    assert!(g.is_balanced());
    let n = g.x_count();
    let mut edges: std::collections::BTreeSet<(usize, usize)> = g.edges().into_iter().collect();
    loop {
        let current =
            BipartiteGraph::new(n, n, &edges.iter().copied().collect::<Vec<_>>()).unwrap();
        let dx: Vec<usize> = (0..n).map(|x| current.x_degree(x)).collect();
        let dy: Vec<usize> = (0..n).map(|y| current.y_degree(y)).collect();
        let mut added = false;
        for x in 0..n {
            for y in 0..n {
                if !current.has_edge(x, y) && dx[x] + dy[y] > n {
                    added |= edges.insert((x, y));
                }
            }
        }
        if !added {
            return current;
        }
    }
}

/// All-subsets maximum biclique: scans every nonempty `(X', Y')` pair.
/// Returns `(s + t, s)` of the best biclique, or `None` when the graph has
/// no edge.
pub fn oracle_max_biclique(g: &BipartiteGraph) -> Option<(usize, usize)> {
    let (m, n) = (g.x_count(), g.y_count());
    let mut best: Option<(usize, usize)> = None;
    for xs in 1u32..1 << m {
        for ys in 1u32..1 << n {
            let mut complete = true;
            'outer: for x in 0..m {
                if xs >> x & 1 == 0 {
                    continue;
                }
                for y in 0..n {
                    if ys >> y & 1 == 1 && !g.has_edge(x, y) {
                        complete = false;
                        break 'outer;
                    }
                }
            }
            if complete {
                let a = xs.count_ones() as usize;
                let b = ys.count_ones() as usize;
                let key = (a + b, a.max(b));
                if best.is_none_or(|old| key > old) {
                    best = Some(key);
                }
            }
        }
    }
    best
}

fn vertex_list(g: &BipartiteGraph) -> Vec<VertexId> {
    (0..g.x_count())
        .map(VertexId::x)
        .chain((0..g.y_count()).map(VertexId::y))
        .collect()
}

fn extend_path(
    g: &BipartiteGraph,
    used: &mut Vec<VertexId>,
    remaining: &mut Vec<VertexId>,
    need_cycle: bool,
) -> bool {
    if remaining.is_empty() {
        return !need_cycle || edge_between(g, *used.last().unwrap(), used[0]);
    }
    for i in 0..remaining.len() {
        let v = remaining[i];
        if used.is_empty() || edge_between(g, *used.last().unwrap(), v) {
            remaining.swap_remove(i);
            used.push(v);
            if extend_path(g, used, remaining, need_cycle) {
                return true;
            }
            used.pop();
            remaining.push(v);
            let last = remaining.len() - 1;
            remaining.swap(i.min(last), last);
        }
    }
    false
}

fn edge_between(g: &BipartiteGraph, a: VertexId, b: VertexId) -> bool {
    match (a.side, b.side) {
        (Side::X, Side::Y) => g.has_edge(a.index, b.index),
        (Side::Y, Side::X) => g.has_edge(b.index, a.index),
        _ => false,
    }
}

/// Plain backtracking spanning-path existence, independent of the DP.
pub fn oracle_traceable(g: &BipartiteGraph) -> bool {
    let total = g.vertex_count();
    if total == 0 {
        return true;
    }
    let mut remaining = vertex_list(g);
    let mut used = Vec::with_capacity(total);
    extend_path(g, &mut used, &mut remaining, false)
}

/// Plain backtracking spanning-cycle existence.
pub fn oracle_hamiltonian(g: &BipartiteGraph) -> bool {
    if !g.is_balanced() || g.x_count() < 2 {
        return false;
    }
    let mut remaining = vertex_list(g);
    let first = remaining.remove(0);
    let mut used = vec![first];
    extend_path(g, &mut used, &mut remaining, true)
}
