//! Spectral radii of bipartite graphs and the inequality checks built on
//! them.
//!
//! `rho` is the largest adjacency eigenvalue. Bipartite adjacency spectra are
//! symmetric about zero, so plain power iteration on the adjacency operator
//! oscillates; instead we iterate on the `m x m` product of the biadjacency
//! block with its transpose and take the square root of its dominant
//! eigenvalue. `q` is the largest eigenvalue of the signless Laplacian
//! (degree diagonal plus adjacency), which is entrywise nonnegative, so plain
//! power iteration applies directly.
//!
//! Both solvers start from the all-ones vector (which has positive overlap
//! with the Perron vector of a nonnegative operator), declare convergence
//! when the eigenvector residual `|A v - lambda v| / |v|` drops below the
//! tolerance, and retry once from a fixed perturbed start if the iteration
//! cap is hit. Everything is generic over the scalar (`f32` or `f64`).

use crate::families::{build, FamilyError, FamilySpec};
use crate::graph::BipartiteGraph;
use crate::Real;
use serde::Serialize;
use thiserror::Error;

/// Default eigenvector residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default slack for comparing two computed spectral values; strict
/// inequalities must clear this margin, ties within it are indeterminate.
pub const COMPARISON_SLACK: f64 = 1e-7;

/// Iteration cap per power-iteration attempt.
pub const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError<T: Real> {
    #[error("power iteration did not converge: residual {residual} after {iterations} iterations")]
    NotConverged { residual: T, iterations: usize },
    #[error("operation requires a balanced graph, got partition sizes ({0}, {1})")]
    Unbalanced(usize, usize),
    #[error("minimum over edges is undefined for an empty edge set")]
    EmptyEdgeSet,
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("family error: {0}")]
    Family(String),
}

impl<T: Real> From<FamilyError> for SpectralError<T> {
    fn from(e: FamilyError) -> Self {
        SpectralError::Family(e.to_string())
    }
}

/// Spectral radius and signless Laplacian spectral radius with solver
/// diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport<T: Real> {
    pub rho: T,
    pub q: T,
    pub rho_iterations: usize,
    pub q_iterations: usize,
    pub rho_residual: T,
    pub q_residual: T,
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
}

fn normalize<T: Real>(v: &mut [T]) {
    let n = norm(v);
    if n > T::zero() {
        for x in v.iter_mut() {
            *x = *x / n;
        }
    }
}

struct Converged<T> {
    value: T,
    iterations: usize,
    residual: T,
}

/// Power iteration on a symmetric nonnegative operator given by `apply`.
/// Residual is measured against `apply` itself.
fn power_iteration<T: Real>(
    dim: usize,
    apply: impl Fn(&[T], &mut [T]),
    tol: T,
) -> Result<Converged<T>, SpectralError<T>> {
    let mut total_iterations = 0;
    for attempt in 0..2 {
        let mut v: Vec<T> = (0..dim)
            .map(|i| {
                if attempt == 0 {
                    T::one()
                } else {
                    // Fixed perturbation so reruns stay reproducible.
                    T::one() + T::from_usize(i % 7 + 1).unwrap() / T::from_usize(8).unwrap()
                }
            })
            .collect();
        normalize(&mut v);
        let mut image = vec![T::zero(); dim];
        let mut last_residual = T::infinity();
        for _ in 0..MAX_ITERATIONS {
            total_iterations += 1;
            apply(&v, &mut image);
            let lambda = v
                .iter()
                .zip(&image)
                .fold(T::zero(), |acc, (&a, &b)| acc + a * b);
            let mut residual = T::zero();
            for (x, y) in v.iter().zip(&image) {
                let d = *y - lambda * *x;
                residual = residual + d * d;
            }
            let residual = residual.sqrt();
            last_residual = residual;
            if residual < tol {
                return Ok(Converged {
                    value: lambda,
                    iterations: total_iterations,
                    residual,
                });
            }
            std::mem::swap(&mut v, &mut image);
            normalize(&mut v);
        }
        if attempt == 1 {
            return Err(SpectralError::NotConverged {
                residual: last_residual,
                iterations: total_iterations,
            });
        }
    }
    unreachable!()
}

/// Applies the row-product operator `B B^T` through the bit rows, without
/// materializing the matrix.
fn apply_row_product<T: Real>(g: &BipartiteGraph, v: &[T], out: &mut [T]) {
    let mut t = vec![T::zero(); g.y_count()];
    for (x, &vx) in v.iter().enumerate() {
        if vx != T::zero() {
            for y in g.neighbors_of_x(x) {
                t[y] = t[y] + vx;
            }
        }
    }
    for (x, o) in out.iter_mut().enumerate() {
        let mut acc = T::zero();
        for y in g.neighbors_of_x(x) {
            acc = acc + t[y];
        }
        *o = acc;
    }
}

struct RhoSolution<T> {
    rho: T,
    x_vector: Vec<T>,
    iterations: usize,
    residual: T,
}

fn rho_solver<T: Real>(g: &BipartiteGraph, tol: T) -> Result<RhoSolution<T>, SpectralError<T>> {
    if g.edge_count() == 0 {
        return Ok(RhoSolution {
            rho: T::zero(),
            x_vector: vec![T::zero(); g.x_count()],
            iterations: 0,
            residual: T::zero(),
        });
    }
    // A residual r on the product operator corresponds to a residual
    // r / (rho * sqrt(2)) on the adjacency operator, over the lifted
    // eigenvector (v, B^T v / rho); convergence is tested on the latter.
    let sqrt2 = (T::one() + T::one()).sqrt();
    let dim = g.x_count();
    let mut total_iterations = 0;
    let mut last_residual = T::infinity();
    for attempt in 0..2 {
        let mut v: Vec<T> = (0..dim)
            .map(|i| {
                if attempt == 0 {
                    T::one()
                } else {
                    T::one() + T::from_usize(i % 7 + 1).unwrap() / T::from_usize(8).unwrap()
                }
            })
            .collect();
        normalize(&mut v);
        let mut image = vec![T::zero(); dim];
        for _ in 0..MAX_ITERATIONS {
            total_iterations += 1;
            apply_row_product(g, &v, &mut image);
            let lambda = v
                .iter()
                .zip(&image)
                .fold(T::zero(), |acc, (&a, &b)| acc + a * b);
            if lambda > T::zero() {
                let rho = lambda.sqrt();
                let mut m_residual = T::zero();
                for (x, y) in v.iter().zip(&image) {
                    let d = *y - lambda * *x;
                    m_residual = m_residual + d * d;
                }
                let residual = m_residual.sqrt() / (rho * sqrt2);
                last_residual = residual;
                if residual < tol {
                    return Ok(RhoSolution {
                        rho,
                        x_vector: v,
                        iterations: total_iterations,
                        residual,
                    });
                }
            }
            std::mem::swap(&mut v, &mut image);
            normalize(&mut v);
        }
    }
    Err(SpectralError::NotConverged {
        residual: last_residual,
        iterations: total_iterations,
    })
}

/// Largest adjacency eigenvalue; exact zero for an edgeless graph.
pub fn rho<T: Real>(g: &BipartiteGraph, tol: T) -> Result<T, SpectralError<T>> {
    Ok(rho_solver(g, tol)?.rho)
}

/// Like [`rho`], also returning the unit dominant eigenvector of the
/// adjacency operator, `X`-entries first.
pub fn adjacency_dominant_vector<T: Real>(
    g: &BipartiteGraph,
    tol: T,
) -> Result<(T, Vec<T>), SpectralError<T>> {
    let sol = rho_solver(g, tol)?;
    let mut full = vec![T::zero(); g.vertex_count()];
    if sol.rho > T::zero() {
        for (x, &vx) in sol.x_vector.iter().enumerate() {
            full[x] = vx;
            if vx != T::zero() {
                for y in g.neighbors_of_x(x) {
                    full[g.x_count() + y] = full[g.x_count() + y] + vx / sol.rho;
                }
            }
        }
        normalize(&mut full);
    }
    Ok((sol.rho, full))
}

fn apply_signless_laplacian<T: Real>(
    g: &BipartiteGraph,
    dx: &[usize],
    dy: &[usize],
    v: &[T],
    out: &mut [T],
) {
    let m = g.x_count();
    for (x, o) in out.iter_mut().take(m).enumerate() {
        let mut acc = T::from_usize(dx[x]).unwrap() * v[x];
        for y in g.neighbors_of_x(x) {
            acc = acc + v[m + y];
        }
        *o = acc;
    }
    for o in out.iter_mut().skip(m) {
        *o = T::zero();
    }
    for (x, &vx) in v.iter().enumerate().take(m) {
        if vx != T::zero() {
            for y in g.neighbors_of_x(x) {
                out[m + y] = out[m + y] + vx;
            }
        }
    }
    for (y, &d) in dy.iter().enumerate() {
        out[m + y] = out[m + y] + T::from_usize(d).unwrap() * v[m + y];
    }
}

struct QSolution<T> {
    q: T,
    iterations: usize,
    residual: T,
}

fn q_solver<T: Real>(g: &BipartiteGraph, tol: T) -> Result<QSolution<T>, SpectralError<T>> {
    if g.edge_count() == 0 {
        return Ok(QSolution {
            q: T::zero(),
            iterations: 0,
            residual: T::zero(),
        });
    }
    let dx: Vec<usize> = (0..g.x_count()).map(|x| g.x_degree(x)).collect();
    let dy: Vec<usize> = (0..g.y_count()).map(|y| g.y_degree(y)).collect();
    let sol = power_iteration(
        g.vertex_count(),
        |v, out| apply_signless_laplacian(g, &dx, &dy, v, out),
        tol,
    )?;
    Ok(QSolution {
        q: sol.value,
        iterations: sol.iterations,
        residual: sol.residual,
    })
}

/// Largest signless Laplacian eigenvalue; exact zero for an edgeless graph.
pub fn q_radius<T: Real>(g: &BipartiteGraph, tol: T) -> Result<T, SpectralError<T>> {
    Ok(q_solver(g, tol)?.q)
}

/// Runs both solvers and packages the diagnostics.
pub fn spectral_report<T: Real>(
    g: &BipartiteGraph,
    tol: T,
) -> Result<SpectralReport<T>, SpectralError<T>> {
    let r = rho_solver(g, tol)?;
    let q = q_solver(g, tol)?;
    Ok(SpectralReport {
        rho: r.rho,
        q: q.q,
        rho_iterations: r.iterations,
        q_iterations: q.iterations,
        rho_residual: r.residual,
        q_residual: q.residual,
    })
}

/// Closed form for the spectral radius of `Q(n,1)`: the positive root of
/// `rho^4 - (n^2-2n+2) rho^2 + 2(n-1)(n-2) = 0`, taking the larger branch.
pub fn rho_q1_closed_form<T: Real>(n: usize) -> Result<T, SpectralError<T>> {
    if n < 3 {
        return Err(SpectralError::Parameter(format!(
            "rho_q1_closed_form requires n >= 3, got {n}"
        )));
    }
    let nf = T::from_usize(n).unwrap();
    let one = T::one();
    let two = one + one;
    let a = nf * nf - two * nf + two;
    let b = two * two * two * (nf - one) * (nf - two);
    let rho_sq = (a + (a * a - b).sqrt()) / two;
    Ok(rho_sq.sqrt())
}

/// Comparison direction of a [`BoundCheck`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Ge,
    Lt,
    Gt,
    Eq,
}

/// Tri-state outcome: strict comparisons within the comparison slack are
/// reported as indeterminate rather than silently passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

/// A single evaluated inequality; `slack` is the signed margin in the
/// favorable direction.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck<T: Real> {
    pub name: String,
    pub relation: Relation,
    pub left: T,
    pub right: T,
    pub verdict: Verdict,
    pub slack: T,
}

impl<T: Real> BoundCheck<T> {
    pub fn new(
        name: impl Into<String>,
        relation: Relation,
        left: T,
        right: T,
        comparison_slack: T,
    ) -> Self {
        let margin = match relation {
            Relation::Le | Relation::Lt => right - left,
            Relation::Ge | Relation::Gt => left - right,
            Relation::Eq => -(left - right).abs(),
        };
        let verdict = match relation {
            Relation::Le | Relation::Ge => {
                if margin >= -comparison_slack {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                }
            }
            Relation::Lt | Relation::Gt => {
                if margin > comparison_slack {
                    Verdict::Pass
                } else if margin >= -comparison_slack {
                    Verdict::Indeterminate
                } else {
                    Verdict::Fail
                }
            }
            Relation::Eq => {
                if -margin <= comparison_slack {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                }
            }
        };
        BoundCheck {
            name: name.into(),
            relation,
            left,
            right,
            verdict,
            slack: margin,
        }
    }

    pub fn satisfied(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// CSV row in the `bound,left,right,satisfied,slack` schema.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.name,
            self.left,
            self.right,
            self.satisfied(),
            self.slack
        )
    }
}

/// `rho(G) <= sqrt(e(G))`.
pub fn check_nosal<T: Real>(
    g: &BipartiteGraph,
    tol: T,
    slack: T,
) -> Result<BoundCheck<T>, SpectralError<T>> {
    let left = rho(g, tol)?;
    let right = T::from_usize(g.edge_count()).unwrap().sqrt();
    Ok(BoundCheck::new("nosal", Relation::Le, left, right, slack))
}

/// `q(G) <= e(G)/n + n` for a balanced graph on `(n, n)`. Nearly balanced
/// callers pad with an isolated vertex first (see
/// [`BipartiteGraph::pad_to_balanced`]).
pub fn check_q_upper<T: Real>(
    g: &BipartiteGraph,
    tol: T,
    slack: T,
) -> Result<BoundCheck<T>, SpectralError<T>> {
    if !g.is_balanced() {
        return Err(SpectralError::Unbalanced(g.x_count(), g.y_count()));
    }
    let n = T::from_usize(g.x_count()).unwrap();
    let left = q_radius(g, tol)?;
    let right = T::from_usize(g.edge_count()).unwrap() / n + n;
    Ok(BoundCheck::new("q_upper", Relation::Le, left, right, slack))
}

fn min_over_edges<T: Real>(
    g: &BipartiteGraph,
    f: impl Fn(usize, usize) -> T,
) -> Result<T, SpectralError<T>> {
    if g.edge_count() == 0 {
        return Err(SpectralError::EmptyEdgeSet);
    }
    let dx: Vec<usize> = (0..g.x_count()).map(|x| g.x_degree(x)).collect();
    let dy: Vec<usize> = (0..g.y_count()).map(|y| g.y_degree(y)).collect();
    let mut best = T::infinity();
    for (x, y) in g.edges() {
        best = best.min(f(dx[x], dy[y]));
    }
    Ok(best)
}

/// `min over edges of sqrt(d(u) d(v)) <= rho(G)`; equality characterizes
/// regular and semi-regular graphs.
pub fn check_rho_lower<T: Real>(
    g: &BipartiteGraph,
    tol: T,
    slack: T,
) -> Result<BoundCheck<T>, SpectralError<T>> {
    let left = min_over_edges(g, |du, dv| T::from_usize(du * dv).unwrap().sqrt())?;
    let right = rho(g, tol)?;
    Ok(BoundCheck::new(
        "rho_lower",
        Relation::Le,
        left,
        right,
        slack,
    ))
}

/// `min over edges of d(u) + d(v) <= q(G)`.
pub fn check_q_lower<T: Real>(
    g: &BipartiteGraph,
    tol: T,
    slack: T,
) -> Result<BoundCheck<T>, SpectralError<T>> {
    let left = min_over_edges(g, |du, dv| T::from_usize(du + dv).unwrap())?;
    let right = q_radius(g, tol)?;
    Ok(BoundCheck::new("q_lower", Relation::Le, left, right, slack))
}

/// Evaluates the closed-form identities and strict dominations relating the
/// `Q`, `S`, `R`, `T` families at `(n, k)` to complete-graph values:
/// `rho` and `q` of `Q` and `S` strictly dominate the complete subgraph they
/// contain, and the quasi-complements hit `sqrt(k(n-k))` and `n` exactly.
/// Requires `k >= 1` and `n >= 2k+1`; the `T` checks are included when `T` is
/// in range (`n >= 2k+2`).
pub fn family_bound_table<T: Real>(
    n: usize,
    k: usize,
    tol: T,
    slack: T,
) -> Result<Vec<BoundCheck<T>>, SpectralError<T>> {
    if k < 1 || n < 2 * k + 1 {
        return Err(SpectralError::Parameter(format!(
            "family_bound_table requires k >= 1 and n >= 2k+1, got (n={n}, k={k})"
        )));
    }
    let q_g = build(FamilySpec::Q { n, k })?;
    let s_g = build(FamilySpec::S { n, k })?;
    let r_g = build(FamilySpec::R { n, k })?;
    let sqrt_nk1 = T::from_usize(n * (n - k - 1)).unwrap().sqrt();
    let q_threshold = T::from_usize(2 * n - k - 1).unwrap();
    let sqrt_knk = T::from_usize(k * (n - k)).unwrap().sqrt();
    let nf = T::from_usize(n).unwrap();

    let mut checks = vec![
        BoundCheck::new(
            "rho(Q) > sqrt(n(n-k-1))",
            Relation::Gt,
            rho(&q_g, tol)?,
            sqrt_nk1,
            slack,
        ),
        BoundCheck::new(
            "rho(S) > sqrt(n(n-k-1))",
            Relation::Gt,
            rho(&s_g, tol)?,
            sqrt_nk1,
            slack,
        ),
        BoundCheck::new(
            "q(Q) > 2n-k-1",
            Relation::Gt,
            q_radius(&q_g, tol)?,
            q_threshold,
            slack,
        ),
        BoundCheck::new(
            "q(S) > 2n-k-1",
            Relation::Gt,
            q_radius(&s_g, tol)?,
            q_threshold,
            slack,
        ),
        BoundCheck::new(
            "rho(~R) = sqrt(k(n-k))",
            Relation::Eq,
            rho(&r_g.quasi_complement(), tol)?,
            sqrt_knk,
            slack,
        ),
        BoundCheck::new(
            "rho(~S) = sqrt(k(n-k))",
            Relation::Eq,
            rho(&s_g.quasi_complement(), tol)?,
            sqrt_knk,
            slack,
        ),
        BoundCheck::new(
            "q(~R) = n",
            Relation::Eq,
            q_radius(&r_g.quasi_complement(), tol)?,
            nf,
            slack,
        ),
        BoundCheck::new(
            "q(~S) = n",
            Relation::Eq,
            q_radius(&s_g.quasi_complement(), tol)?,
            nf,
            slack,
        ),
    ];
    if n >= 2 * k + 2 {
        let t_g = build(FamilySpec::T { n, k })?;
        checks.push(BoundCheck::new(
            "q(~T) = n",
            Relation::Eq,
            q_radius(&t_g.quasi_complement(), tol)?,
            nf,
            slack,
        ));
    }
    Ok(checks)
}

/// Evaluates the ordering chain among the order-`n` families:
/// `rho(S(n,1)) < rho(Q(n,1)) <= rho(R(n,1)) = rho(T(n,0)) = n-1` (the middle
/// comparison is an equality exactly at `n = 3`) and
/// `2n-1 = q(Q(n,0)) > q(Q(n,1)) > q(R(n,1)) = 2n-2`.
pub fn family_chain_checks<T: Real>(
    n: usize,
    tol: T,
    slack: T,
) -> Result<Vec<BoundCheck<T>>, SpectralError<T>> {
    if n < 3 {
        return Err(SpectralError::Parameter(format!(
            "family_chain_checks requires n >= 3, got {n}"
        )));
    }
    let rho_s1 = rho(&build(FamilySpec::S { n, k: 1 })?, tol)?;
    let rho_q1 = rho(&build(FamilySpec::Q { n, k: 1 })?, tol)?;
    let rho_r1 = rho(&build(FamilySpec::R { n, k: 1 })?, tol)?;
    let rho_t0 = rho(&build(FamilySpec::T { n, k: 0 })?, tol)?;
    let q_q0 = q_radius(&build(FamilySpec::Q { n, k: 0 })?, tol)?;
    let q_q1 = q_radius(&build(FamilySpec::Q { n, k: 1 })?, tol)?;
    let q_r1 = q_radius(&build(FamilySpec::R { n, k: 1 })?, tol)?;
    let n_minus_1 = T::from_usize(n - 1).unwrap();
    let two_n_1 = T::from_usize(2 * n - 1).unwrap();
    let two_n_2 = T::from_usize(2 * n - 2).unwrap();

    let middle = if n == 3 {
        BoundCheck::new(
            "rho(Q(n,1)) = rho(R(n,1))",
            Relation::Eq,
            rho_q1,
            rho_r1,
            slack,
        )
    } else {
        BoundCheck::new(
            "rho(Q(n,1)) < rho(R(n,1))",
            Relation::Lt,
            rho_q1,
            rho_r1,
            slack,
        )
    };
    Ok(vec![
        BoundCheck::new(
            "rho(S(n,1)) < rho(Q(n,1))",
            Relation::Lt,
            rho_s1,
            rho_q1,
            slack,
        ),
        middle,
        BoundCheck::new("rho(R(n,1)) = n-1", Relation::Eq, rho_r1, n_minus_1, slack),
        BoundCheck::new("rho(T(n,0)) = n-1", Relation::Eq, rho_t0, n_minus_1, slack),
        BoundCheck::new("q(Q(n,0)) = 2n-1", Relation::Eq, q_q0, two_n_1, slack),
        BoundCheck::new("q(Q(n,0)) > q(Q(n,1))", Relation::Gt, q_q0, q_q1, slack),
        BoundCheck::new("q(Q(n,1)) > q(R(n,1))", Relation::Gt, q_q1, q_r1, slack),
        BoundCheck::new("q(R(n,1)) = 2n-2", Relation::Eq, q_r1, two_n_2, slack),
    ])
}
