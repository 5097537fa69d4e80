//! Randomized wrapper around the cluster search and the repeated
//! nibbling loop that peels off low-conductance pieces.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{GuaranteeViolation, NibbleError, ParamError};
use crate::exact::ExactThreshold;
use crate::graph::{boundary_size, induce_subgraph, Frac, Graph, GraphRef, Vertex, VertexSet};
use crate::nibble::{nibble, CutReport};
use crate::params::{derive_params, ConstantsProfile};

/// Deterministic generator with its seed kept for provenance. Each
/// randomized call consumes draws in a fixed order: first the seed
/// vertex, then the size scale b.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn from_seed(seed: u64) -> RngState {
        RngState { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Degree-proportional draw over the active set (base degrees).
    pub fn draw_vertex(&mut self, g: &impl GraphRef) -> Vertex {
        let target = self.rng.gen_range(0..g.active_volume());
        let mut acc = 0u64;
        for v in g.active_vertices() {
            acc += g.degree(v);
            if target < acc {
                return v;
            }
        }
        unreachable!("active volume exhausted");
    }

    /// Truncated geometric over 1..=b_max with Pr[b=i] proportional to
    /// 2^-i.
    pub fn draw_scale(&mut self, b_max: u32) -> u32 {
        debug_assert!(b_max >= 1);
        let norm = 1.0 - 0.5f64.powi(b_max as i32);
        let u: f64 = self.rng.gen_range(0.0..1.0) * norm;
        let mut cumulative = 0.0;
        for i in 1..b_max {
            cumulative += 0.5f64.powi(i as i32);
            if u < cumulative {
                return i;
            }
        }
        b_max
    }
}

/// Edge count used for scale ranges on views: vol/2 rounded up when
/// self-loops make the volume odd.
pub fn edge_scale(g: &impl GraphRef) -> u64 {
    (g.active_volume() + 1) / 2
}

/// ceil(log2 x) for x >= 1.
pub fn ceil_log2(x: u64) -> u32 {
    let mut e = 0u32;
    while (1u128 << e) < x as u128 {
        e += 1;
    }
    e
}

/// One randomized cluster attempt: seed vertex drawn degree
/// proportionally, scale b drawn from the truncated geometric over
/// 1..=ceil(log2 m).
pub fn random_nibble(
    g: &impl GraphRef,
    phi: f64,
    profile: &ConstantsProfile,
    rng: &mut RngState,
) -> Result<Option<CutReport>, NibbleError> {
    if g.active_volume() < 2 || g.active_count() < 2 {
        return Ok(None);
    }
    let m = edge_scale(g);
    let b_max = ceil_log2(m);
    if b_max == 0 {
        return Ok(None);
    }
    let v = rng.draw_vertex(g);
    let b = rng.draw_scale(b_max);
    let out = nibble(g, v, phi, b, profile)?;
    Ok(out.cut.map(|mut c| {
        c.algorithm = "random-nibble";
        c.seed = Some(rng.seed());
        c
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    VolumeThreshold,
    IterationCap,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::VolumeThreshold => "volume-threshold",
            StopReason::IterationCap => "iteration-cap",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PartitionTrace {
    /// The removed pieces D_j, in removal order.
    pub pieces: Vec<CutReport>,
    /// Boundary of each piece inside the view it was cut from.
    pub piece_boundaries: Vec<u64>,
    /// W after the loop: vertices never removed.
    pub final_active: VertexSet,
    pub iterations: u64,
    pub stop_reason: StopReason,
}

/// Repeatedly nibbles off pieces until at least a quarter of the volume
/// is gone or the iteration cap is reached. The returned cut is the
/// union of all pieces; its volume and conductance bounds are
/// re-asserted exactly.
pub fn partition(
    g: &Graph,
    theta: f64,
    p_fail: f64,
    profile: &ConstantsProfile,
    rng: &mut RngState,
) -> Result<(CutReport, PartitionTrace), NibbleError> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(ParamError::ThetaOutOfRange(theta).into());
    }
    if !(p_fail > 0.0 && p_fail < 1.0) {
        return Err(ParamError::PFailOutOfRange(p_fail).into());
    }
    if g.total_volume() < 2 {
        return Err(ParamError::VolumeTooSmall(g.total_volume()).into());
    }
    let phi = theta / 7.0;
    let phi_exact = ExactThreshold::new(phi);
    let m = edge_scale(g);
    let cap = 12u64
        .checked_mul(m)
        .and_then(|x| x.checked_mul(ceil_log2_inverse(p_fail) as u64))
        .ok_or(ParamError::Overflow)?;
    let total = g.total_volume();

    let mut active: Vec<Vertex> = g.vertices().collect();
    let mut active_vol = total;
    let mut pieces: Vec<CutReport> = Vec::new();
    let mut piece_boundaries: Vec<u64> = Vec::new();
    let mut iterations = 0u64;
    let mut stop_reason = StopReason::IterationCap;

    while iterations < cap {
        if 4 * active_vol < 3 * total {
            stop_reason = StopReason::VolumeThreshold;
            break;
        }
        iterations += 1;
        let active_set = VertexSet::new(g, active.clone())?;
        let view = induce_subgraph(g, active_set)?;
        if let Some(mut piece) = random_nibble(&view, phi, profile, rng)? {
            // boundary inside the current view; the union-conductance
            // argument needs |E(D_j, W_{j-1} - D_j)| <= phi * vol(D_j)
            let piece_boundary = boundary_size(&view, &piece.members)?;
            if !phi_exact.admits_scaled(piece_boundary, piece.volume) {
                return Err(GuaranteeViolation::PieceBoundary {
                    boundary: piece_boundary,
                    phi,
                    vol: piece.volume,
                }
                .into());
            }
            piece.found_at_step = iterations;
            active.retain(|v| !piece.members.contains(*v));
            active_vol -= piece.volume;
            piece_boundaries.push(piece_boundary);
            pieces.push(piece);
        }
    }
    if iterations >= cap && 4 * active_vol >= 3 * total {
        stop_reason = StopReason::IterationCap;
    }

    let mut union: Vec<Vertex> = pieces.iter().flat_map(|p| p.members.members().iter().copied()).collect();
    union.sort_unstable();
    let union_set = VertexSet::new(g, union)?;
    let final_active = VertexSet::new(g, active)?;

    let report = if union_set.is_empty() {
        CutReport {
            members: union_set,
            conductance: Frac::from_integer(1),
            volume: 0,
            balance: Frac::new(0, 1),
            found_at_step: iterations,
            sweep_index: 0,
            algorithm: "partition",
            seed: Some(rng.seed()),
        }
    } else {
        let theta_exact = ExactThreshold::new(theta);
        finish_partition_cut(g, union_set, iterations, rng.seed(), &theta_exact)?
    };
    Ok((report, PartitionTrace { pieces, piece_boundaries, final_active, iterations, stop_reason }))
}

fn finish_partition_cut(
    g: &Graph,
    members: VertexSet,
    iterations: u64,
    seed: u64,
    theta: &ExactThreshold,
) -> Result<CutReport, NibbleError> {
    let volume = members.volume();
    if 8 * volume > 7 * g.total_volume() {
        return Err(GuaranteeViolation::PartitionVolume { vol: volume, total: g.total_volume() }.into());
    }
    let conductance = crate::graph::conductance(g, &members)?;
    if !theta.admits(*conductance.numer(), *conductance.denom()) {
        return Err(GuaranteeViolation::PartitionConductance {
            conductance: format!("{}/{}", conductance.numer(), conductance.denom()),
            theta: theta.value(),
        }
        .into());
    }
    let balance = crate::graph::balance(g, &members)?;
    Ok(CutReport {
        members,
        conductance,
        volume,
        balance,
        found_at_step: iterations,
        sweep_index: 0,
        algorithm: "partition",
        seed: Some(seed),
    })
}

/// ceil(log2(1/p)) for p in (0,1).
pub fn ceil_log2_inverse(p: f64) -> u32 {
    // smallest k with 2^-k <= p
    let mut k = 0u32;
    let mut v = 1.0f64;
    while v > p && k < 1074 {
        v /= 2.0;
        k += 1;
    }
    k
}

/// f2(theta) = f1(theta/7) / 2, evaluated against the given graph's
/// volume.
pub fn f2(g: &impl GraphRef, theta: f64, profile: &ConstantsProfile) -> Result<Frac, NibbleError> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(ParamError::ThetaOutOfRange(theta).into());
    }
    let params = derive_params(g, theta / 7.0, 1, profile)?;
    Ok(params.f1 / Frac::from_integer(2))
}
