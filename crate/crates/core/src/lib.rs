//! Bipartite graph toolkit built around Hamiltonicity of balanced and nearly
//! balanced bipartite graphs.
//!
//! The crate provides:
//!
//! - [`BipartiteGraph`]: a fixed-bipartition graph stored as bit rows, with the
//!   constructors needed here (quasi-complement, block join, disjoint union,
//!   universal-vertex augmentation).
//! - [`families`]: the named extremal graphs `B`, `Q`, `R`, `S`, `T`, `Gamma0`,
//!   `Lspider`, `L1`, `L2` and membership tests for the block-structured
//!   classes they generate.
//! - [`spectral`]: adjacency and signless-Laplacian spectral radii by power
//!   iteration, closed-form reference values, and inequality checks. The
//!   numeric kernels are generic over the scalar type (see [`Real`]).
//! - [`hamiltonian`]: the bipartite closure, exact Hamilton path/cycle
//!   decision by subset dynamic programming, and maximum biclique search.
//! - [`search`]: graph enumeration (exhaustive, complement-bounded, random)
//!   and verification campaigns that scan theorems for counterexamples.
//!
//! Graphs are immutable after construction; every operation here is a pure
//! function, so values can be shared freely across worker threads.

pub mod canon;
pub mod codec;
pub mod families;
pub mod graph;
pub mod hamiltonian;
pub mod search;
pub mod spectral;

pub use graph::{BipartiteGraph, GraphError, Side, VertexId};

/// Scalar trait for the spectral kernels: any IEEE float works, `f32` and
/// `f64` are the supported instantiations.
pub trait Real:
    num_traits::Float + num_traits::FromPrimitive + std::fmt::Debug + std::fmt::Display + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Default scalar used by the CLI, the search campaigns, and the reports.
pub type Scalar = f64;

/// [`spectral::SpectralReport`] at the default scalar.
pub type SpectralReport = spectral::SpectralReport<Scalar>;

/// [`spectral::BoundCheck`] at the default scalar.
pub type BoundCheck = spectral::BoundCheck<Scalar>;
