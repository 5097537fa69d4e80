//! Brute-force ground truth: dense walks, exhaustive conductance
//! minimization, and restricted-walk products.
//!
//! Shares only the graph types with the main path; the walk arithmetic
//! here is written independently so it can act as an oracle for the
//! sparse implementation.

use crate::error::OracleError;
use crate::graph::{conductance, Frac, Graph, GraphRef, Vertex, VertexSet};

pub const DENSE_LIMIT: usize = 2048;
pub const ENUM_LIMIT: usize = 14;

/// Full-length mass vector indexed by vertex id.
pub type DenseMass = Vec<f64>;

fn guard(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    Ok(())
}

/// One dense application of the lazy walk matrix over the view.
fn dense_step(g: &impl GraphRef, p: &DenseMass) -> DenseMass {
    let n = g.base().vertex_count();
    let mut next = vec![0.0f64; n];
    for u in 0..n as Vertex {
        let mass = p[u as usize];
        if mass == 0.0 || !g.is_active(u) {
            continue;
        }
        let d = g.degree(u) as f64;
        let per_slot = mass / (2.0 * d);
        let mut stay = mass / 2.0 + g.base().self_loops(u) as f64 * per_slot;
        for &w in g.neighbors(u) {
            if g.is_active(w) {
                next[w as usize] += per_slot;
            } else {
                stay += per_slot;
            }
        }
        next[u as usize] += stay;
    }
    next
}

/// p_t = M^t chi_v, computed densely.
pub fn exact_walk(g: &impl GraphRef, v: Vertex, t: u64) -> Result<DenseMass, OracleError> {
    let n = g.base().vertex_count();
    guard(n, DENSE_LIMIT)?;
    let mut p = vec![0.0f64; n];
    p[v as usize] = 1.0;
    for _ in 0..t {
        p = dense_step(g, &p);
    }
    Ok(p)
}

/// Global minimum conductance over all nonempty proper subsets, by
/// enumeration. Ties resolve to the lexicographically smallest member
/// list.
pub fn min_conductance_exhaustive(g: &Graph) -> Result<(VertexSet, Frac), OracleError> {
    let n = g.vertex_count();
    guard(n, ENUM_LIMIT)?;
    let mut best: Option<(VertexSet, Frac)> = None;
    for mask in 1u32..(1u32 << n) - 1 {
        let members: Vec<Vertex> = (0..n as Vertex).filter(|&v| mask >> v & 1 == 1).collect();
        let s = VertexSet::new(g, members).expect("mask subset is valid");
        let phi = conductance(g, &s).expect("subset is in range");
        let better = match &best {
            None => true,
            Some((_, current)) => phi < *current,
        };
        if better {
            best = Some((s, phi));
        }
    }
    Ok(best.expect("n >= 2 leaves at least one proper subset"))
}

/// (D_S M)^t psi_S: the walk from a degree-random vertex of S, masked
/// to S after every step.
pub fn restricted_walk(g: &impl GraphRef, s: &VertexSet, t: u64) -> Result<DenseMass, OracleError> {
    let n = g.base().vertex_count();
    guard(n, DENSE_LIMIT)?;
    let mut p = vec![0.0f64; n];
    for &u in s.members() {
        p[u as usize] = g.degree(u) as f64 / s.volume() as f64;
    }
    for _ in 0..t {
        p = dense_step(g, &p);
        for u in 0..n {
            if !s.contains(u as Vertex) {
                p[u] = 0.0;
            }
        }
    }
    Ok(p)
}

/// Verifies p^T (D_S M)^t q <= p^T M^t q within 1e-12.
pub fn check_ds_product_bound(
    g: &impl GraphRef,
    s: &VertexSet,
    p: &DenseMass,
    q: &DenseMass,
    t: u64,
) -> Result<bool, OracleError> {
    let n = g.base().vertex_count();
    guard(n, DENSE_LIMIT)?;
    let mut masked = q.clone();
    let mut plain = q.clone();
    for _ in 0..t {
        masked = dense_step(g, &masked);
        for u in 0..n {
            if !s.contains(u as Vertex) {
                masked[u] = 0.0;
            }
        }
        plain = dense_step(g, &plain);
    }
    let dot = |a: &DenseMass, b: &DenseMass| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    Ok(dot(p, &masked) <= dot(p, &plain) + 1e-12)
}
