//! The local clustering loop: truncated walk from a seed vertex, sweep
//! scan of each step's mass vector, first satisfying prefix returned.

use crate::error::{GuaranteeViolation, NibbleError};
use crate::exact::ExactThreshold;
use crate::graph::{Frac, GraphRef, Vertex, VertexSet};
use crate::params::{derive_params, ConstantsProfile, NibbleParams};
use crate::sweep::{scan_conditions, sweep, ScanHit};
use crate::walk::{evolve_truncated, WalkStats};

/// A cluster together with its exact quality measures and provenance.
#[derive(Debug, Clone)]
pub struct CutReport {
    pub members: VertexSet,
    pub conductance: Frac,
    pub volume: u64,
    pub balance: Frac,
    /// Walk step at which the sweep succeeded (iteration count for the
    /// partitioner).
    pub found_at_step: u64,
    /// 1-based sweep prefix length (0 when not applicable).
    pub sweep_index: usize,
    pub algorithm: &'static str,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct NibbleOutcome {
    pub cut: Option<CutReport>,
    pub stats: WalkStats,
    pub params: NibbleParams,
}

/// Runs the cluster search from `v`. A non-empty result is guaranteed
/// to have conductance at most `phi` and volume at most 5/6 of the
/// view; both bounds are re-asserted exactly before returning.
pub fn nibble(
    g: &impl GraphRef,
    v: Vertex,
    phi: f64,
    b: u32,
    profile: &ConstantsProfile,
) -> Result<NibbleOutcome, NibbleError> {
    let params = derive_params(g, phi, b, profile)?;
    nibble_with_params(g, v, &params)
}

pub fn nibble_with_params(
    g: &impl GraphRef,
    v: Vertex,
    params: &NibbleParams,
) -> Result<NibbleOutcome, NibbleError> {
    if !g.is_active(v) {
        return Err(crate::error::WalkError::InactiveVertex(v).into());
    }
    let phi_exact = ExactThreshold::new(params.phi);
    let mut hit: Option<(u64, ScanHit)> = None;
    let mut scan_error = None;
    let outcome = evolve_truncated(g, v, params.eps, params.t_last, |t, q| {
        let order = sweep(g, q);
        match scan_conditions(g, &order, params, &phi_exact) {
            Ok(Some(found)) => {
                hit = Some((t, found));
                true
            }
            Ok(None) => false,
            Err(e) => {
                scan_error = Some(e);
                true
            }
        }
    })?;
    if let Some(e) = scan_error {
        return Err(e.into());
    }
    let cut = match hit {
        None => None,
        Some((t, found)) => {
            let members = VertexSet::from_unsorted(g.base(), found.members)?;
            let report = finish_cut(g, members, t, found.j, "nibble", None, &phi_exact)?;
            Some(report)
        }
    };
    Ok(NibbleOutcome { cut, stats: outcome.stats, params: params.clone() })
}

/// Computes the exact quality measures for a returned vertex set and
/// re-asserts the unconditional output guarantees.
pub(crate) fn finish_cut(
    g: &impl GraphRef,
    members: VertexSet,
    found_at_step: u64,
    sweep_index: usize,
    algorithm: &'static str,
    seed: Option<u64>,
    phi: &ExactThreshold,
) -> Result<CutReport, NibbleError> {
    let conductance = crate::graph::conductance(g, &members)?;
    let volume = members.volume();
    let balance = crate::graph::balance(g, &members)?;
    if !phi.admits(*conductance.numer(), *conductance.denom()) {
        return Err(GuaranteeViolation::NibbleConductance {
            conductance: format!("{}/{}", conductance.numer(), conductance.denom()),
            phi: phi.value(),
        }
        .into());
    }
    if 6 * volume > 5 * g.active_volume() {
        return Err(GuaranteeViolation::NibbleVolume { vol: volume, total: g.active_volume() }.into());
    }
    Ok(CutReport { members, conductance, volume, balance, found_at_step, sweep_index, algorithm, seed })
}
