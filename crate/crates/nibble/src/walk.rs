//! Sparse lazy random-walk steps and the truncated evolution
//! q_t = M r_{t-1}, r_t = [q_t]_eps.
//!
//! The walk stays put with probability 1/2 and otherwise follows a
//! uniformly random edge slot; self-loops (including the boundary loops
//! of a subgraph view) return mass to the vertex. Summation order is
//! fixed (ascending source id, then ascending neighbor id) so runs are
//! bit-reproducible.

use std::collections::HashMap;

use crate::error::WalkError;
use crate::graph::{GraphRef, Vertex, VertexSet};

/// Nonnegative mass vector over a small support, iterated in ascending
/// vertex id. Zero entries are absent.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMass {
    entries: Vec<(Vertex, f64)>,
}

impl SparseMass {
    pub fn empty() -> SparseMass {
        SparseMass { entries: Vec::new() }
    }

    /// Builds from (vertex, mass) pairs; must be strictly positive and
    /// carry distinct ids.
    pub fn from_entries(mut entries: Vec<(Vertex, f64)>) -> Result<SparseMass, WalkError> {
        for &(v, m) in &entries {
            if m < 0.0 {
                return Err(WalkError::NegativeMass { vertex: v, mass: m });
            }
        }
        entries.retain(|&(_, m)| m > 0.0);
        entries.sort_unstable_by_key(|&(v, _)| v);
        Ok(SparseMass { entries })
    }

    pub fn get(&self, v: Vertex) -> f64 {
        match self.entries.binary_search_by_key(&v, |&(u, _)| u) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0.0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    pub fn support_volume(&self, g: &impl GraphRef) -> u64 {
        self.entries.iter().map(|&(v, _)| g.degree(v)).sum()
    }
}

/// Unit mass at a single vertex.
pub fn indicator(g: &impl GraphRef, v: Vertex) -> Result<SparseMass, WalkError> {
    if !g.is_active(v) {
        return Err(WalkError::InactiveVertex(v));
    }
    Ok(SparseMass { entries: vec![(v, 1.0)] })
}

/// The degree-proportional distribution psi_S: d(u)/vol(S) on each
/// member of `s`.
pub fn degree_profile(g: &impl GraphRef, s: &VertexSet) -> Result<SparseMass, WalkError> {
    if s.volume() == 0 {
        return Err(WalkError::InactiveVertex(s.members().first().copied().unwrap_or(0)));
    }
    let vol = s.volume() as f64;
    let entries = s.members().iter().map(|&u| (u, g.degree(u) as f64 / vol)).collect();
    Ok(SparseMass { entries })
}

/// One application of M = (A D^-1 + I)/2 restricted to the view.
pub fn lazy_step(g: &impl GraphRef, p: &SparseMass) -> Result<SparseMass, WalkError> {
    for &(v, m) in &p.entries {
        if m < 0.0 {
            return Err(WalkError::NegativeMass { vertex: v, mass: m });
        }
    }
    let mut acc: HashMap<Vertex, f64> = HashMap::with_capacity(p.entries.len() * 4);
    for &(u, m) in &p.entries {
        let d = g.degree(u) as f64;
        let per_slot = m / (2.0 * d);
        let mut stay = m / 2.0 + g.base().self_loops(u) as f64 * per_slot;
        for &w in g.neighbors(u) {
            if g.is_active(w) {
                *acc.entry(w).or_insert(0.0) += per_slot;
            } else {
                stay += per_slot;
            }
        }
        *acc.entry(u).or_insert(0.0) += stay;
    }
    let mut entries: Vec<(Vertex, f64)> = acc.into_iter().filter(|&(_, m)| m > 0.0).collect();
    entries.sort_unstable_by_key(|&(v, _)| v);
    Ok(SparseMass { entries })
}

/// Truncation [p]_eps: keep p(u) iff p(u) >= d(u) * eps (equality kept).
pub fn truncate(g: &impl GraphRef, p: &SparseMass, eps: f64) -> Result<SparseMass, WalkError> {
    if eps < 0.0 {
        return Err(WalkError::NegativeThreshold(eps));
    }
    let entries = p
        .entries
        .iter()
        .copied()
        .filter(|&(v, m)| m >= g.degree(v) as f64 * eps)
        .collect();
    Ok(SparseMass { entries })
}

#[derive(Debug, Clone, Default)]
pub struct WalkStats {
    pub steps_taken: u64,
    /// Sum over executed steps of vol(support(r_{t-1})).
    pub work_units: u64,
    pub max_support: usize,
    /// vol(support(r_{t-1})) for each executed step, in order.
    pub step_support_volumes: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct EvolveOutcome {
    pub final_mass: SparseMass,
    pub stats: WalkStats,
    /// True when some r_t emptied out before t_max (including r_0).
    pub died_out: bool,
    /// True when the observer requested a stop.
    pub stopped_by_observer: bool,
}

/// Runs the truncated evolution from chi_v for up to `t_max` steps.
///
/// The observer sees each q_t (t >= 1) before truncation and returns
/// true to stop the walk; this is how the cluster search inspects each
/// step's sweep exactly once.
pub fn evolve_truncated(
    g: &impl GraphRef,
    v: Vertex,
    eps: f64,
    t_max: u64,
    mut observer: impl FnMut(u64, &SparseMass) -> bool,
) -> Result<EvolveOutcome, WalkError> {
    if eps < 0.0 {
        return Err(WalkError::NegativeThreshold(eps));
    }
    let q0 = indicator(g, v)?;
    let mut r = truncate(g, &q0, eps)?;
    let mut stats = WalkStats::default();
    stats.max_support = r.support_len();
    if r.is_empty() {
        // 1 < d(v) * eps: the seed itself is below threshold.
        return Ok(EvolveOutcome { final_mass: r, stats, died_out: true, stopped_by_observer: false });
    }
    for t in 1..=t_max {
        let support_vol = r.support_volume(g);
        stats.step_support_volumes.push(support_vol);
        stats.work_units += support_vol;
        let q = lazy_step(g, &r)?;
        stats.steps_taken = t;
        stats.max_support = stats.max_support.max(q.support_len());
        let stop = observer(t, &q);
        r = truncate(g, &q, eps)?;
        if stop {
            return Ok(EvolveOutcome {
                final_mass: r,
                stats,
                died_out: false,
                stopped_by_observer: true,
            });
        }
        if r.is_empty() {
            return Ok(EvolveOutcome { final_mass: r, stats, died_out: true, stopped_by_observer: false });
        }
    }
    Ok(EvolveOutcome { final_mass: r, stats, died_out: false, stopped_by_observer: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::barbell;
    use crate::graph::Graph;

    fn k2() -> Graph {
        Graph::build(&[(0, 1)], &[]).unwrap()
    }

    #[test]
    fn indicator_is_unit_mass() {
        let g = k2();
        let chi = indicator(&g, 0).unwrap();
        assert_eq!(chi.get(0), 1.0);
        assert_eq!(chi.total(), 1.0);
        let g = barbell(3);
        let chi = indicator(&g, 5).unwrap();
        assert_eq!(chi.get(5), 1.0);
    }

    #[test]
    fn degree_profile_sums_to_one() {
        let g = k2();
        let psi = degree_profile(&g, &VertexSet::all(&g)).unwrap();
        assert_eq!(psi.get(0), 0.5);
        assert_eq!(psi.get(1), 0.5);

        let g = barbell(3);
        let psi = degree_profile(&g, &VertexSet::all(&g)).unwrap();
        let expect = [2.0, 2.0, 3.0, 3.0, 2.0, 2.0];
        for (v, d) in expect.iter().enumerate() {
            assert!((psi.get(v as Vertex) - d / 14.0).abs() < 1e-15);
        }
        assert!((psi.total() - 1.0).abs() < 1e-12);

        let single = VertexSet::new(&g, vec![2]).unwrap();
        let psi = degree_profile(&g, &single).unwrap();
        assert_eq!(psi.get(2), 1.0);
    }

    #[test]
    fn lazy_step_on_edge() {
        let g = k2();
        let q = lazy_step(&g, &indicator(&g, 0).unwrap()).unwrap();
        assert_eq!(q.get(0), 0.5);
        assert_eq!(q.get(1), 0.5);
    }

    #[test]
    fn lazy_step_with_self_loop_stays_five_eighths() {
        let g = Graph::build(&[(0, 1), (0, 2), (0, 3)], &[(0, 1)]).unwrap();
        let q = lazy_step(&g, &indicator(&g, 0).unwrap()).unwrap();
        assert_eq!(q.get(0), 0.625);
        assert_eq!(q.get(1), 0.125);
        assert_eq!(q.get(2), 0.125);
        assert_eq!(q.get(3), 0.125);
    }

    #[test]
    fn lazy_step_on_triangle() {
        let g = Graph::build(&[(0, 1), (1, 2), (0, 2)], &[]).unwrap();
        let q = lazy_step(&g, &indicator(&g, 0).unwrap()).unwrap();
        assert_eq!(q.get(0), 0.5);
        assert_eq!(q.get(1), 0.25);
        assert_eq!(q.get(2), 0.25);
    }

    #[test]
    fn truncate_thresholds() {
        let g = k2();
        let loops = Graph::build(&[], &[(0, 2)]).unwrap();
        let _ = g;
        let p = SparseMass::from_entries(vec![(0, 0.5)]).unwrap();
        assert!(truncate(&loops, &p, 0.3).unwrap().is_empty());
        let p = SparseMass::from_entries(vec![(0, 0.6)]).unwrap();
        let kept = truncate(&loops, &p, 0.3).unwrap();
        assert_eq!(kept.get(0), 0.6);
        let untouched = truncate(&loops, &p, 0.0).unwrap();
        assert_eq!(untouched, p);
    }

    #[test]
    fn evolve_one_step() {
        let g = k2();
        let mut seen = Vec::new();
        let out = evolve_truncated(&g, 0, 0.0, 1, |t, q| {
            seen.push((t, q.get(0), q.get(1)));
            false
        })
        .unwrap();
        assert_eq!(seen, vec![(1, 0.5, 0.5)]);
        assert!(!out.died_out);
        assert_eq!(out.stats.steps_taken, 1);
    }

    #[test]
    fn evolve_dies_out_under_heavy_truncation() {
        let g = k2();
        let out = evolve_truncated(&g, 0, 0.6, 1, |_, _| false).unwrap();
        assert!(out.died_out);
        assert!(out.final_mass.is_empty());
        // r_0 = {0: 1} survived, one step was taken, then r_1 emptied.
        assert_eq!(out.stats.steps_taken, 1);
    }

    #[test]
    fn evolve_zero_steps_returns_truncated_indicator() {
        let g = k2();
        let out = evolve_truncated(&g, 0, 0.0, 0, |_, _| false).unwrap();
        assert_eq!(out.final_mass.get(0), 1.0);
        assert_eq!(out.stats.steps_taken, 0);
    }

    #[test]
    fn negative_mass_rejected() {
        let err = SparseMass::from_entries(vec![(0, -0.25)]).unwrap_err();
        assert!(matches!(err, WalkError::NegativeMass { vertex: 0, .. }));
    }

    #[test]
    fn mass_conserved_on_view() {
        let g = barbell(3);
        let active = VertexSet::new(&g, vec![0, 1, 2]).unwrap();
        let view = crate::graph::induce_subgraph(&g, active).unwrap();
        let mut p = indicator(&view, 2).unwrap();
        for _ in 0..20 {
            p = lazy_step(&view, &p).unwrap();
            assert!((p.total() - 1.0).abs() < 1e-12);
        }
        // stays inside the view
        assert!(p.iter().all(|(v, _)| v <= 2));
    }
}
