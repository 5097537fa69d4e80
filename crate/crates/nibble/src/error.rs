use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("duplicate simple edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("self-edge ({0}, {0}) in edge list; use the self-loop list instead")]
    SelfEdge(Vertex),
    #[error("vertex {0} has degree 0; give it a self-loop or drop it")]
    IsolatedVertex(Vertex),
    #[error("vertex {vertex} outside graph with {count} vertices")]
    VertexOutOfRange { vertex: Vertex, count: usize },
    #[error("active set must be nonempty")]
    EmptyActiveSet,
    #[error("vertex set members must be strictly increasing (saw {0} after {1})")]
    UnsortedMembers(Vertex, Vertex),
}

#[derive(Debug, Error, PartialEq)]
pub enum WalkError {
    #[error("negative mass {mass} at vertex {vertex}")]
    NegativeMass { vertex: Vertex, mass: f64 },
    #[error("negative truncation threshold {0}")]
    NegativeThreshold(f64),
    #[error("vertex {0} is not active in this view")]
    InactiveVertex(Vertex),
}

#[derive(Debug, Error, PartialEq)]
pub enum CurveError {
    #[error("volume coordinate {x} outside [0, {max}]")]
    OutOfRange { x: f64, max: u64 },
    #[error("left derivative undefined at x = {0} (need x > 0)")]
    NonPositive(f64),
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("phi must lie in (0, 1), got {0}")]
    PhiOutOfRange(f64),
    #[error("theta must lie in (0, 1), got {0}")]
    ThetaOutOfRange(f64),
    #[error("failure probability must lie in (0, 1), got {0}")]
    PFailOutOfRange(f64),
    #[error("graph volume must be at least 2, got {0}")]
    VolumeTooSmall(u64),
    #[error("b = {b} exceeds ceil(log2 vol) = {max}")]
    ScaleTooLarge { b: u32, max: u32 },
    #[error("parameter derivation overflowed a 64-bit count")]
    Overflow,
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("graph has {n} vertices; oracle limit is {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Raised when a returned cut fails one of the unconditional guarantees.
/// This indicates a bug, never bad input.
#[derive(Debug, Error, PartialEq)]
pub enum GuaranteeViolation {
    #[error("nibble output violates conductance bound: phi(C) = {conductance} > phi = {phi}")]
    NibbleConductance { conductance: String, phi: f64 },
    #[error("nibble output violates volume bound: vol C = {vol} > (5/6) * {total}")]
    NibbleVolume { vol: u64, total: u64 },
    #[error("partition output violates volume bound: vol D = {vol} > (7/8) * {total}")]
    PartitionVolume { vol: u64, total: u64 },
    #[error("partition output violates conductance bound: phi(D) = {conductance} > theta = {theta}")]
    PartitionConductance { conductance: String, theta: f64 },
    #[error("piece boundary {boundary} exceeds phi * vol = {phi} * {vol}")]
    PieceBoundary { boundary: u64, phi: f64, vol: u64 },
}

#[derive(Debug, Error)]
pub enum NibbleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Guarantee(#[from] GuaranteeViolation),
}
