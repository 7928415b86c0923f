//! Exact canonical forms and isomorphism search for desk-scale graphs.
//!
//! Isomorphism here is part-preserving relabeling (independent permutations
//! of `X` and `Y`), plus exchanging the two classes when `m = n_y`. The
//! canonical form minimizes the row encoding over all column permutations;
//! rows are sorted rather than permuted, which collapses the `X`-side factor
//! of the group.

use crate::graph::{BipartiteGraph, GraphError};

/// Per-side size limit for exact canonicalization.
pub const CANONICAL_LIMIT: usize = 8;

fn check_limit(g: &BipartiteGraph) -> Result<(), GraphError> {
    if g.x_count() > CANONICAL_LIMIT || g.y_count() > CANONICAL_LIMIT {
        return Err(GraphError::TooLargeForCanonical {
            m: g.x_count(),
            n_y: g.y_count(),
            limit: CANONICAL_LIMIT,
        });
    }
    Ok(())
}

/// Minimal sorted-row encoding over all permutations of the columns.
fn min_encoding(g: &BipartiteGraph) -> Vec<u64> {
    let m = g.x_count();
    let n = g.y_count();
    let rows: Vec<u64> = (0..m).map(|x| g.row_mask(x)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u64>> = None;
    permute(&mut perm, 0, &mut |p| {
        let mut remapped: Vec<u64> = rows
            .iter()
            .map(|&row| {
                let mut v = 0u64;
                for (from, &to) in p.iter().enumerate() {
                    v |= (row >> from & 1) << to;
                }
                v
            })
            .collect();
        remapped.sort_unstable();
        if best.as_ref().is_none_or(|b| remapped < *b) {
            best = Some(remapped);
        }
    });
    best.unwrap_or_default()
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Canonical byte string: equal for two graphs iff they are isomorphic under
/// part-preserving relabeling, with class exchange allowed when `m = n_y`.
pub fn canonical_form(g: &BipartiteGraph) -> Result<Vec<u8>, GraphError> {
    check_limit(g)?;
    let mut enc = min_encoding(g);
    if g.is_balanced() {
        let t = min_encoding(&g.transpose());
        if t < enc {
            enc = t;
        }
    }
    let mut bytes = Vec::with_capacity(4 + enc.len());
    bytes.extend_from_slice(&(g.x_count() as u16).to_be_bytes());
    bytes.extend_from_slice(&(g.y_count() as u16).to_be_bytes());
    for row in enc {
        bytes.push(row as u8);
    }
    Ok(bytes)
}

pub fn canonical_hex(g: &BipartiteGraph) -> Result<String, GraphError> {
    Ok(canonical_form(g)?
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

/// Isomorphism under the canonical form's group; requires equal partition
/// sizes.
pub fn isomorphic(g: &BipartiteGraph, h: &BipartiteGraph) -> Result<bool, GraphError> {
    if g.x_count() != h.x_count() || g.y_count() != h.y_count() {
        return Err(GraphError::SizeMismatch(
            g.x_count(),
            g.y_count(),
            h.x_count(),
            h.y_count(),
        ));
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}

/// Isomorphism that also accepts transposed partition sizes, for comparing
/// against families defined with the classes the other way around.
pub fn isomorphic_upto_transpose(
    g: &BipartiteGraph,
    h: &BipartiteGraph,
) -> Result<bool, GraphError> {
    if g.x_count() == h.x_count() && g.y_count() == h.y_count() {
        let direct = isomorphic(g, h)?;
        if direct || g.x_count() != g.y_count() {
            return Ok(direct);
        }
        return Ok(false);
    }
    if g.x_count() == h.y_count() && g.y_count() == h.x_count() {
        return isomorphic(g, &h.transpose());
    }
    Ok(false)
}

/// Witness for an embedding of one graph into another: vertex `x_i` of the
/// small graph maps to `x_map[i]` in the host (after transposing the small
/// graph when `swapped` is set).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgraphWitness {
    pub x_map: Vec<usize>,
    pub y_map: Vec<usize>,
    pub swapped: bool,
}

/// Searches for a part-preserving relabeling of `g` under which every edge of
/// `g` is an edge of `host`; class exchange is tried only when both graphs
/// are balanced. Exact backtracking over column images with degree pruning,
/// then a row matching.
pub fn subgraph_upto_iso(
    g: &BipartiteGraph,
    host: &BipartiteGraph,
) -> Result<Option<SubgraphWitness>, GraphError> {
    if g.x_count() != host.x_count() || g.y_count() != host.y_count() {
        return Err(GraphError::SizeMismatch(
            g.x_count(),
            g.y_count(),
            host.x_count(),
            host.y_count(),
        ));
    }
    check_limit(g)?;
    if let Some((x_map, y_map)) = embed(g, host) {
        return Ok(Some(SubgraphWitness {
            x_map,
            y_map,
            swapped: false,
        }));
    }
    if g.is_balanced() {
        if let Some((x_map, y_map)) = embed(&g.transpose(), host) {
            return Ok(Some(SubgraphWitness {
                x_map,
                y_map,
                swapped: true,
            }));
        }
    }
    Ok(None)
}

fn embed(g: &BipartiteGraph, host: &BipartiteGraph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.y_count();
    let g_deg: Vec<usize> = (0..n).map(|y| g.y_degree(y)).collect();
    let h_deg: Vec<usize> = (0..n).map(|y| host.y_degree(y)).collect();
    // Most constrained columns first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&y| std::cmp::Reverse(g_deg[y]));

    let mut y_map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    backtrack(g, host, &order, 0, &g_deg, &h_deg, &mut y_map, &mut used).map(|x_map| (x_map, y_map))
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    g: &BipartiteGraph,
    host: &BipartiteGraph,
    order: &[usize],
    depth: usize,
    g_deg: &[usize],
    h_deg: &[usize],
    y_map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> Option<Vec<usize>> {
    if depth == order.len() {
        return match_rows(g, host, y_map);
    }
    let y = order[depth];
    for target in 0..host.y_count() {
        if used[target] || h_deg[target] < g_deg[y] {
            continue;
        }
        used[target] = true;
        y_map[y] = target;
        if let Some(x_map) = backtrack(g, host, order, depth + 1, g_deg, h_deg, y_map, used) {
            return Some(x_map);
        }
        used[target] = false;
        y_map[y] = usize::MAX;
    }
    None
}

/// Given a full column mapping, finds a row bijection sending each remapped
/// row of `g` under a host row (Kuhn's matching on the compatibility graph).
fn match_rows(g: &BipartiteGraph, host: &BipartiteGraph, y_map: &[usize]) -> Option<Vec<usize>> {
    let m = g.x_count();
    let remapped: Vec<u64> = (0..m)
        .map(|x| {
            let mut v = 0u64;
            for (from, &to) in y_map.iter().enumerate() {
                v |= (g.row_mask(x) >> from & 1) << to;
            }
            v
        })
        .collect();
    let host_rows: Vec<u64> = (0..m).map(|x| host.row_mask(x)).collect();

    let mut owner = vec![usize::MAX; m]; // host row -> g row
    for x in 0..m {
        let mut visited = vec![false; m];
        if !augment(x, &remapped, &host_rows, &mut owner, &mut visited) {
            return None;
        }
    }
    let mut x_map = vec![usize::MAX; m];
    for (h, &gx) in owner.iter().enumerate() {
        if gx != usize::MAX {
            x_map[gx] = h;
        }
    }
    Some(x_map)
}

fn augment(
    x: usize,
    remapped: &[u64],
    host_rows: &[u64],
    owner: &mut Vec<usize>,
    visited: &mut Vec<bool>,
) -> bool {
    for (h, &host_row) in host_rows.iter().enumerate() {
        if visited[h] || remapped[x] & !host_row != 0 {
            continue;
        }
        visited[h] = true;
        if owner[h] == usize::MAX || augment(owner[h], remapped, host_rows, owner, visited) {
            owner[h] = x;
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: usize, n: usize, edges: &[(usize, usize)]) -> BipartiteGraph {
        BipartiteGraph::new(m, n, edges).unwrap()
    }

    #[test]
    fn canonical_equal_for_relabelings() {
        let a = g(3, 3, &[(0, 0), (1, 1), (2, 2)]);
        let b = g(3, 3, &[(0, 2), (1, 0), (2, 1)]);
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn canonical_separates_nonisomorphic() {
        let star = g(2, 2, &[(0, 0), (0, 1)]);
        let matching = g(2, 2, &[(0, 0), (1, 1)]);
        assert_ne!(
            canonical_form(&star).unwrap(),
            canonical_form(&matching).unwrap()
        );
    }

    #[test]
    fn canonical_merges_transposes_when_balanced() {
        let star_x = g(2, 2, &[(0, 0), (0, 1)]);
        let star_y = g(2, 2, &[(0, 0), (1, 0)]);
        assert!(isomorphic(&star_x, &star_y).unwrap());
    }

    #[test]
    fn canonical_fixed_sides_when_unbalanced() {
        let a = g(1, 2, &[(0, 0), (0, 1)]);
        let b = g(2, 1, &[(0, 0), (1, 0)]);
        assert!(isomorphic(&a, &b).is_err());
        assert!(isomorphic_upto_transpose(&a, &b).unwrap());
    }

    #[test]
    fn canonical_respects_quasi_complement_involution() {
        let a = g(3, 2, &[(0, 1), (2, 0)]);
        let twice = a.quasi_complement().quasi_complement();
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&twice).unwrap());
    }

    #[test]
    fn canonical_rejects_oversized() {
        let big = BipartiteGraph::empty(9, 2);
        assert!(matches!(
            canonical_form(&big),
            Err(GraphError::TooLargeForCanonical { .. })
        ));
    }

    #[test]
    fn path_embeds_in_k22() {
        let p4 = g(2, 2, &[(0, 0), (0, 1), (1, 0)]);
        let k22 = BipartiteGraph::complete(2, 2);
        let w = subgraph_upto_iso(&p4, &k22).unwrap().unwrap();
        assert!(!w.swapped);
    }

    #[test]
    fn identity_embedding() {
        let a = g(3, 3, &[(0, 0), (1, 1), (0, 2)]);
        let w = subgraph_upto_iso(&a, &a).unwrap().unwrap();
        // Witness must be a genuine embedding.
        for (x, y) in a.edges() {
            assert!(a.has_edge(w.x_map[x], w.y_map[y]));
        }
    }

    #[test]
    fn embedding_needs_enough_edges() {
        let k22 = BipartiteGraph::complete(2, 2);
        let p4 = g(2, 2, &[(0, 0), (0, 1), (1, 0)]);
        assert!(subgraph_upto_iso(&k22, &p4).unwrap().is_none());
    }

    #[test]
    fn swapped_embedding_found_for_balanced() {
        // Star with center in X embeds into the host star with center in Y
        // only after exchanging classes.
        let star_x = g(3, 3, &[(0, 0), (0, 1), (0, 2)]);
        let star_y = g(3, 3, &[(0, 0), (1, 0), (2, 0)]);
        let w = subgraph_upto_iso(&star_x, &star_y).unwrap().unwrap();
        assert!(w.swapped);
    }
}
