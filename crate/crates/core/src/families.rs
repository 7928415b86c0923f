//! The named extremal families and their classes.
//!
//! Every family is a block construction: either a join `H ⊔ Φ` (all edges
//! between `H`'s `X` side and `Φ`'s `Y` side and vice versa) or a disjoint
//! union of complete graphs. Block layouts are deterministic — the `H` block
//! comes first on both sides — so builds are reproducible byte for byte.
//!
//! The three fixed graphs `Lspider`, `L1`, `L2` exist only as pictures in the
//! source material; their edge lists are frozen here as constants.

use crate::canon;
use crate::graph::{BipartiteGraph, GraphError, Side, VertexId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown family {0:?} (expected one of B, Q, R, S, T, Gamma0, Lspider, L1, L2)")]
    UnknownFamily(String),
    #[error("family {family} requires parameter {which}")]
    MissingParameter { family: String, which: &'static str },
    #[error("family {family} takes no parameter {which}")]
    UnexpectedParameter { family: String, which: &'static str },
    #[error("parameters (n={n}, k={k}) out of range for {family}: requires {requirement}")]
    OutOfRange {
        family: String,
        n: usize,
        k: usize,
        requirement: &'static str,
    },
    #[error("graph on ({0}, {1}) cannot belong to a class on ({2}, {3}) in either orientation")]
    ClassSizeMismatch(usize, usize, usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Symbolic description of a buildable family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilySpec {
    B { n: usize, k: usize },
    Q { n: usize, k: usize },
    R { n: usize, k: usize },
    S { n: usize, k: usize },
    T { n: usize, k: usize },
    Gamma0 { n: usize },
    Lspider,
    L1,
    L2,
}

impl std::fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            FamilySpec::B { n, k } => write!(f, "B({n},{k})"),
            FamilySpec::Q { n, k } => write!(f, "Q({n},{k})"),
            FamilySpec::R { n, k } => write!(f, "R({n},{k})"),
            FamilySpec::S { n, k } => write!(f, "S({n},{k})"),
            FamilySpec::T { n, k } => write!(f, "T({n},{k})"),
            FamilySpec::Gamma0 { n } => write!(f, "Gamma0({n})"),
            FamilySpec::Lspider => write!(f, "Lspider"),
            FamilySpec::L1 => write!(f, "L1"),
            FamilySpec::L2 => write!(f, "L2"),
        }
    }
}

impl FamilySpec {
    /// Builds a spec from a case-insensitive family name and optional
    /// parameters, rejecting missing, extra, or out-of-range ones.
    pub fn parse(name: &str, n: Option<usize>, k: Option<usize>) -> Result<Self, FamilyError> {
        let family = name.to_string();
        let need_n = || FamilyError::MissingParameter {
            family: name.into(),
            which: "n",
        };
        let need_k = || FamilyError::MissingParameter {
            family: name.into(),
            which: "k",
        };
        let spec = match name.to_ascii_lowercase().as_str() {
            "b" => FamilySpec::B {
                n: n.ok_or_else(need_n)?,
                k: k.ok_or_else(need_k)?,
            },
            "q" => FamilySpec::Q {
                n: n.ok_or_else(need_n)?,
                k: k.ok_or_else(need_k)?,
            },
            "r" => FamilySpec::R {
                n: n.ok_or_else(need_n)?,
                k: k.ok_or_else(need_k)?,
            },
            "s" => FamilySpec::S {
                n: n.ok_or_else(need_n)?,
                k: k.ok_or_else(need_k)?,
            },
            "t" => FamilySpec::T {
                n: n.ok_or_else(need_n)?,
                k: k.ok_or_else(need_k)?,
            },
            "gamma0" | "gamma" => {
                if k.is_some() {
                    return Err(FamilyError::UnexpectedParameter { family, which: "k" });
                }
                FamilySpec::Gamma0 {
                    n: n.ok_or_else(need_n)?,
                }
            }
            fixed @ ("lspider" | "l1" | "l2") => {
                if n.is_some() {
                    return Err(FamilyError::UnexpectedParameter { family, which: "n" });
                }
                if k.is_some() {
                    return Err(FamilyError::UnexpectedParameter { family, which: "k" });
                }
                match fixed {
                    "lspider" => FamilySpec::Lspider,
                    "l1" => FamilySpec::L1,
                    _ => FamilySpec::L2,
                }
            }
            _ => return Err(FamilyError::UnknownFamily(family)),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parameter ranges for the parameterized families.
    pub fn validate(&self) -> Result<(), FamilyError> {
        let fail = |n, k, requirement| {
            Err(FamilyError::OutOfRange {
                family: self.to_string(),
                n,
                k,
                requirement,
            })
        };
        match *self {
            FamilySpec::B { n, k } | FamilySpec::R { n, k } => {
                if k < 1 || 2 * k > n {
                    return fail(n, k, "1 <= k <= n/2");
                }
            }
            FamilySpec::Q { n, k } => {
                if 2 * k + 1 > n {
                    return fail(n, k, "0 <= k <= (n-1)/2");
                }
            }
            FamilySpec::S { n, k } => {
                if k < 1 || 2 * k + 1 > n {
                    return fail(n, k, "1 <= k <= (n-1)/2");
                }
            }
            FamilySpec::T { n, k } => {
                if 2 * k + 2 > n {
                    return fail(n, k, "0 <= k <= n/2 - 1");
                }
            }
            FamilySpec::Gamma0 { n } => {
                if n < 3 {
                    return fail(n, 0, "n >= 3");
                }
            }
            FamilySpec::Lspider | FamilySpec::L1 | FamilySpec::L2 => {}
        }
        Ok(())
    }
}

/// Spider with a degree-3 center in `X` and three legs of length two;
/// 7 vertices, 6 edges, parts (4, 3).
const LSPIDER_EDGES: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 0), (2, 1), (3, 2)];

/// Parts (4, 4): `x0` adjacent to `y1..y3`, `y0` adjacent to `x1..x3`, plus
/// the matching `x_i y_i` for `i = 1..3`; 9 edges.
const L1_EDGES: [(usize, usize); 9] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 0),
    (2, 0),
    (3, 0),
    (1, 1),
    (2, 2),
    (3, 3),
];

/// `L1` plus the edge `x0 y0`; 10 edges.
const L2_EDGES: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 0),
    (2, 0),
    (3, 0),
    (1, 1),
    (2, 2),
    (3, 3),
];

/// Materializes the family member with the deterministic block layout.
pub fn build(spec: FamilySpec) -> Result<BipartiteGraph, FamilyError> {
    spec.validate()?;
    let g =
        match spec {
            FamilySpec::B { n, k } => {
                BipartiteGraph::complete(k, n - k).join(&BipartiteGraph::empty(n - k, k))
            }
            FamilySpec::Q { n, k } => {
                BipartiteGraph::complete(k, n - k - 1).join(&BipartiteGraph::empty(n - k, k + 1))
            }
            FamilySpec::R { n, k } => BipartiteGraph::complete(k, k)
                .disjoint_union(&BipartiteGraph::complete(n - k, n - k)),
            FamilySpec::S { n, k } => {
                BipartiteGraph::complete(k, n - k - 1).join(&BipartiteGraph::empty(n - k, k))
            }
            FamilySpec::T { n, k } => BipartiteGraph::complete(k, n - k - 1)
                .join(&BipartiteGraph::empty(n - k - 1, k + 1)),
            FamilySpec::Gamma0 { n } => {
                BipartiteGraph::complete(n - 2, n).disjoint_union(&BipartiteGraph::empty(1, 0))
            }
            FamilySpec::Lspider => BipartiteGraph::new(4, 3, &LSPIDER_EDGES)?,
            FamilySpec::L1 => BipartiteGraph::new(4, 4, &L1_EDGES)?,
            FamilySpec::L2 => BipartiteGraph::new(4, 4, &L2_EDGES)?,
        };
    Ok(g)
}

/// Closed-form edge count, derived once from the block sizes; audited against
/// the built graphs in tests.
pub fn expected_edge_count(spec: FamilySpec) -> Result<usize, FamilyError> {
    spec.validate()?;
    Ok(match spec {
        FamilySpec::B { n, k } => n * (n - k) + k * k,
        FamilySpec::Q { n, k } => n * (n - k - 1) + k * (k + 1),
        FamilySpec::R { n, k } => k * k + (n - k) * (n - k),
        FamilySpec::S { n, k } => n * (n - k - 1) + k * k,
        FamilySpec::T { n, k } => (n - 1) * (n - k - 1) + k * (k + 1),
        FamilySpec::Gamma0 { n } => n * (n - 2),
        FamilySpec::Lspider => 6,
        FamilySpec::L1 => 9,
        FamilySpec::L2 => 10,
    })
}

/// One of the three block-structured classes generated by an arbitrary `H`
/// block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphClass {
    B,
    S,
    T,
}

impl std::fmt::Display for GraphClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphClass::B => write!(f, "B-class"),
            GraphClass::S => write!(f, "S-class"),
            GraphClass::T => write!(f, "T-class"),
        }
    }
}

/// Block sizes `(h_m, h_n, phi_m, phi_n)` of `H ⊔ Φ` in the class's own
/// orientation, plus the resulting partition sizes.
fn class_blocks(
    class: GraphClass,
    n: usize,
    k: usize,
) -> Result<(usize, usize, usize, usize), FamilyError> {
    let ok = |t| Ok(t);
    match class {
        GraphClass::B => {
            FamilySpec::B { n, k }.validate()?;
            ok((k, n - k, n - k, k))
        }
        GraphClass::S => {
            FamilySpec::S { n, k }.validate()?;
            ok((n - k - 1, k, k, n - k))
        }
        GraphClass::T => {
            FamilySpec::T { n, k }.validate()?;
            ok((n - k - 1, k, k + 1, n - k - 1))
        }
    }
}

/// A labeling of a graph exhibiting a class's block structure. The `H` block
/// spans `h_x × h_y` (arbitrary edges); `h_x × phi_y` and `h_y × phi_x` are
/// complete; `phi_x × phi_y` is empty. When the witness was found on the
/// transposed orientation, the `VertexId` sides record that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassWitness {
    pub class: GraphClass,
    pub n: usize,
    pub k: usize,
    pub h_x: Vec<VertexId>,
    pub h_y: Vec<VertexId>,
    pub phi_x: Vec<VertexId>,
    pub phi_y: Vec<VertexId>,
}

impl ClassWitness {
    /// Re-checks the forced blocks against the graph.
    pub fn validate(&self, g: &BipartiteGraph) -> bool {
        let edge = |a: VertexId, b: VertexId| match (a.side, b.side) {
            (Side::X, Side::Y) => g.has_edge(a.index, b.index),
            (Side::Y, Side::X) => g.has_edge(b.index, a.index),
            _ => unreachable!("witness blocks always pair opposite sides"),
        };
        let complete =
            |us: &[VertexId], vs: &[VertexId]| us.iter().all(|&u| vs.iter().all(|&v| edge(u, v)));
        let empty =
            |us: &[VertexId], vs: &[VertexId]| us.iter().all(|&u| vs.iter().all(|&v| !edge(u, v)));
        complete(&self.h_x, &self.phi_y)
            && complete(&self.h_y, &self.phi_x)
            && empty(&self.phi_x, &self.phi_y)
    }
}

/// Decides membership of `g` in the class with parameters `(n, k)`.
///
/// The graph may be presented in the class's own orientation or transposed;
/// anything else is a size error. The search enumerates the `H`-block rows
/// and classifies columns by the forced complete/empty blocks.
pub fn member_of_class(
    g: &BipartiteGraph,
    class: GraphClass,
    n: usize,
    k: usize,
) -> Result<Option<ClassWitness>, FamilyError> {
    let (h_m, h_n, phi_m, phi_n) = class_blocks(class, n, k)?;
    let (cm, cn) = (h_m + phi_m, h_n + phi_n);
    if (g.x_count(), g.y_count()) == (cm, cn) {
        Ok(find_blocks(g, h_m, h_n, phi_n).map(|b| b.into_witness(class, n, k, false)))
    } else if (g.x_count(), g.y_count()) == (cn, cm) {
        Ok(find_blocks(&g.transpose(), h_m, h_n, phi_n).map(|b| b.into_witness(class, n, k, true)))
    } else {
        Err(FamilyError::ClassSizeMismatch(
            g.x_count(),
            g.y_count(),
            cm,
            cn,
        ))
    }
}

struct Blocks {
    h_x: Vec<usize>,
    h_y: Vec<usize>,
    phi_x: Vec<usize>,
    phi_y: Vec<usize>,
}

impl Blocks {
    fn into_witness(self, class: GraphClass, n: usize, k: usize, transposed: bool) -> ClassWitness {
        let tag = |side: Side, v: Vec<usize>| -> Vec<VertexId> {
            let side = if transposed { side.opposite() } else { side };
            v.into_iter()
                .map(|index| VertexId { side, index })
                .collect()
        };
        ClassWitness {
            class,
            n,
            k,
            h_x: tag(Side::X, self.h_x),
            h_y: tag(Side::Y, self.h_y),
            phi_x: tag(Side::X, self.phi_x),
            phi_y: tag(Side::Y, self.phi_y),
        }
    }
}

/// Enumerates `X1` candidates of size `h_m`; a column belongs to `Y1` iff it
/// dominates `X2`, and to `Y2` iff it dominates `X1` and avoids `X2`.
/// Columns eligible for both (possible only when `X2` is empty) are assigned
/// to whichever side still has room.
fn find_blocks(g: &BipartiteGraph, h_m: usize, h_n: usize, phi_n: usize) -> Option<Blocks> {
    let m = g.x_count();
    let n = g.y_count();
    debug_assert!(m <= 64 && n <= 64);
    let cols: Vec<u64> = (0..n)
        .map(|y| {
            (0..m)
                .filter(|&x| g.has_edge(x, y))
                .fold(0u64, |acc, x| acc | 1 << x)
        })
        .collect();
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };

    let mut x1_mask = if h_m == 0 { 0 } else { (1u64 << h_m) - 1 };
    loop {
        let x2_mask = full & !x1_mask;
        let mut y1 = Vec::new();
        let mut y2 = Vec::new();
        let mut flexible = Vec::new();
        let mut feasible = true;
        for (y, &col) in cols.iter().enumerate() {
            let y1_ok = col & x2_mask == x2_mask;
            let y2_ok = col & x1_mask == x1_mask && col & x2_mask == 0;
            match (y1_ok, y2_ok) {
                (true, true) => flexible.push(y),
                (true, false) => y1.push(y),
                (false, true) => y2.push(y),
                (false, false) => {
                    feasible = false;
                    break;
                }
            }
        }
        if feasible && y1.len() <= h_n && y2.len() <= phi_n {
            let need_y1 = h_n - y1.len();
            if flexible.len() >= need_y1 && y2.len() + (flexible.len() - need_y1) == phi_n {
                y1.extend(flexible.drain(..need_y1));
                y2.extend(flexible);
                let x1: Vec<usize> = (0..m).filter(|&x| x1_mask >> x & 1 == 1).collect();
                let x2: Vec<usize> = (0..m).filter(|&x| x2_mask >> x & 1 == 1).collect();
                return Some(Blocks {
                    h_x: x1,
                    h_y: y1,
                    phi_x: x2,
                    phi_y: y2,
                });
            }
        }
        x1_mask = next_subset_same_popcount(x1_mask, full)?;
    }
}

/// Gosper's hack, bounded to subsets of `full`; the `h_m = 0` case has the
/// single subset `0`.
fn next_subset_same_popcount(mask: u64, full: u64) -> Option<u64> {
    if mask == 0 {
        return None;
    }
    let c = mask & mask.wrapping_neg();
    let r = mask + c;
    let next = (((r ^ mask) >> 2) / c) | r;
    if next & !full != 0 || next < mask {
        None
    } else {
        Some(next)
    }
}

/// Up-to-isomorphism equality that tolerates the two possible orientations of
/// the nearly balanced families.
pub fn same_family_graph(g: &BipartiteGraph, family: &BipartiteGraph) -> Result<bool, FamilyError> {
    Ok(canon::isomorphic_upto_transpose(g, family)?)
}
