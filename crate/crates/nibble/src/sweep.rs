//! Sweep orders over a mass vector, the concave mass-vs-volume curve
//! I(p, x), and the per-step condition scan used by the cluster search.

use std::collections::HashSet;

use crate::error::CurveError;
use crate::exact::ExactThreshold;
use crate::graph::{GraphRef, Vertex};
use crate::params::NibbleParams;
use crate::walk::SparseMass;

/// Support vertices ordered by decreasing p(u)/d(u), ties broken by
/// ascending id, with prefix volumes and prefix masses at each
/// breakpoint.
#[derive(Debug, Clone)]
pub struct SweepOrder {
    order: Vec<Vertex>,
    lambdas: Vec<u64>,
    prefix_mass: Vec<f64>,
    total_volume: u64,
    total_mass: f64,
}

impl SweepOrder {
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn lambdas(&self) -> &[u64] {
        &self.lambdas
    }

    pub fn prefix_mass(&self) -> &[f64] {
        &self.prefix_mass
    }

    pub fn total_volume(&self) -> u64 {
        self.total_volume
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Builds the sweep order of `p` over its support. Zero-mass vertices
/// sort after every support vertex and are never materialized.
pub fn sweep(g: &impl GraphRef, p: &SparseMass) -> SweepOrder {
    let mut items: Vec<(Vertex, f64, u64, f64)> =
        p.iter().map(|(v, m)| (v, m, g.degree(v), m / g.degree(v) as f64)).collect();
    // sort by the precomputed m/d key descending, ties by ascending id;
    // a cached key keeps the comparator a total order
    items.sort_by(|a, b| b.3.total_cmp(&a.3).then(a.0.cmp(&b.0)));
    let mut order = Vec::with_capacity(items.len());
    let mut lambdas = Vec::with_capacity(items.len());
    let mut prefix_mass = Vec::with_capacity(items.len());
    let mut vol = 0u64;
    let mut mass = 0.0f64;
    for (v, m, d, _) in items {
        vol += d;
        mass += m;
        order.push(v);
        lambdas.push(vol);
        prefix_mass.push(mass);
    }
    SweepOrder { order, lambdas, prefix_mass, total_volume: g.active_volume(), total_mass: mass }
}

/// I(p, x): piecewise-linear interpolation through (0, 0), the sweep
/// breakpoints, and (vol V, total mass).
pub fn curve_value(order: &SweepOrder, x: f64) -> Result<f64, CurveError> {
    let vol = order.total_volume;
    if !(0.0..=vol as f64).contains(&x) {
        return Err(CurveError::OutOfRange { x, max: vol });
    }
    let k = order.lambdas.partition_point(|&l| (l as f64) < x);
    let (x0, y0) = if k == 0 { (0.0, 0.0) } else { (order.lambdas[k - 1] as f64, order.prefix_mass[k - 1]) };
    let (x1, y1) = if k < order.lambdas.len() {
        (order.lambdas[k] as f64, order.prefix_mass[k])
    } else {
        (vol as f64, order.total_mass)
    };
    if x1 <= x0 {
        // x sits exactly on the final breakpoint (or vol on an empty tail)
        return Ok(y1);
    }
    Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
}

/// Left derivative of I(p, .) at x; at a breakpoint lambda_j it equals
/// p(pi(j))/d(pi(j)).
pub fn curve_left_derivative(order: &SweepOrder, x: f64) -> Result<f64, CurveError> {
    if x <= 0.0 {
        return Err(CurveError::NonPositive(x));
    }
    let vol = order.total_volume;
    if x > vol as f64 {
        return Err(CurveError::OutOfRange { x, max: vol });
    }
    // segment whose right endpoint is the first breakpoint >= x
    let k = order.lambdas.partition_point(|&l| (l as f64) < x);
    let (x0, y0) = if k == 0 { (0.0, 0.0) } else { (order.lambdas[k - 1] as f64, order.prefix_mass[k - 1]) };
    let (x1, y1) = if k < order.lambdas.len() {
        (order.lambdas[k] as f64, order.prefix_mass[k])
    } else {
        (vol as f64, order.total_mass)
    };
    if x1 <= x0 {
        // x beyond all breakpoints with zero-width tail: slope 0
        return Ok(0.0);
    }
    Ok((y1 - y0) / (x1 - x0))
}

/// A sweep prefix that satisfied every condition.
#[derive(Debug, Clone)]
pub struct ScanHit {
    /// 1-based prefix length.
    pub j: usize,
    pub members: Vec<Vertex>,
    pub boundary: u64,
    pub volume: u64,
}

/// Scans sweep prefixes of q_t for the smallest j satisfying the three
/// per-prefix conditions, after the j-independent curve-slope condition
/// has passed. Conductance is maintained incrementally so a full scan
/// costs O(vol(support)).
pub fn scan_conditions(
    g: &impl GraphRef,
    order: &SweepOrder,
    params: &NibbleParams,
    phi: &ExactThreshold,
) -> Result<Option<ScanHit>, CurveError> {
    let vol_total = g.active_volume();
    let scale = 1u64.checked_shl(params.b).unwrap_or(u64::MAX);
    if scale > vol_total || order.is_empty() {
        return Ok(None);
    }
    // condition on the curve slope at x = 2^b, independent of j
    if curve_left_derivative(order, scale as f64)? < params.slope_threshold {
        return Ok(None);
    }
    let mut in_prefix: HashSet<Vertex> = HashSet::with_capacity(order.order.len());
    let mut boundary = 0u64;
    for (idx, &v) in order.order.iter().enumerate() {
        let mut external = 0u64;
        let mut internal = 0u64;
        for &w in g.neighbors(v) {
            if !g.is_active(w) {
                continue;
            }
            if in_prefix.contains(&w) {
                internal += 1;
            } else {
                external += 1;
            }
        }
        boundary = boundary + external - internal;
        in_prefix.insert(v);
        let vol_prefix = order.lambdas[idx];
        let vol_rest = vol_total - vol_prefix;
        // C.2: not too large
        if 6 * vol_prefix > 5 * vol_total {
            continue;
        }
        // C.3: not too small
        if scale > vol_prefix {
            continue;
        }
        // C.1: conductance at most phi (exact)
        let denom = vol_prefix.min(vol_rest);
        let conductance_ok = if idx + 1 == g.active_count() || denom == 0 {
            phi.admits(1, 1)
        } else {
            phi.admits(boundary, denom)
        };
        if conductance_ok {
            return Ok(Some(ScanHit {
                j: idx + 1,
                members: order.order[..=idx].to_vec(),
                boundary,
                volume: vol_prefix,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::barbell;
    use crate::graph::Graph;
    use crate::params::{derive_params, practical_constants};
    use crate::walk::{degree_profile, indicator, SparseMass};
    use crate::graph::VertexSet;

    fn k2() -> Graph {
        Graph::build(&[(0, 1)], &[]).unwrap()
    }

    #[test]
    fn ties_break_lexicographically() {
        let g = k2();
        let p = SparseMass::from_entries(vec![(1, 0.5), (0, 0.5)]).unwrap();
        let order = sweep(&g, &p);
        assert_eq!(order.order(), &[0, 1]);
        assert_eq!(order.lambdas(), &[1, 2]);
    }

    #[test]
    fn prefix_masses_accumulate() {
        let g = k2();
        let p = SparseMass::from_entries(vec![(0, 0.75), (1, 0.25)]).unwrap();
        let order = sweep(&g, &p);
        assert_eq!(order.order(), &[0, 1]);
        assert_eq!(order.prefix_mass(), &[0.75, 1.0]);
    }

    #[test]
    fn sweep_of_indicator_is_single_breakpoint() {
        let g = barbell(3);
        let order = sweep(&g, &indicator(&g, 2).unwrap());
        assert_eq!(order.order(), &[2]);
        assert_eq!(order.lambdas(), &[3]);
    }

    #[test]
    fn curve_interpolates() {
        let g = k2();
        let order = sweep(&g, &indicator(&g, 0).unwrap());
        assert_eq!(curve_value(&order, 0.5).unwrap(), 0.5);

        let p = SparseMass::from_entries(vec![(0, 0.75), (1, 0.25)]).unwrap();
        let order = sweep(&g, &p);
        assert_eq!(curve_value(&order, 1.0).unwrap(), 0.75);
        assert_eq!(curve_value(&order, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn steady_state_curve_is_straight() {
        let g = barbell(3);
        let psi = degree_profile(&g, &VertexSet::all(&g)).unwrap();
        let order = sweep(&g, &psi);
        for x in [1.0, 3.5, 7.0, 10.0, 14.0] {
            assert!((curve_value(&order, x).unwrap() - x / 14.0).abs() < 1e-12);
        }
        for x in [0.5, 7.0, 13.0] {
            assert!((curve_left_derivative(&order, x).unwrap() - 1.0 / 14.0).abs() < 1e-12);
        }
    }

    #[test]
    fn left_derivative_at_breakpoint() {
        let g = k2();
        let p = SparseMass::from_entries(vec![(0, 0.75), (1, 0.25)]).unwrap();
        let order = sweep(&g, &p);
        assert_eq!(curve_left_derivative(&order, 1.0).unwrap(), 0.75);
        // inside the open interval (lambda_1, lambda_2): slope of the
        // second vertex
        assert_eq!(curve_left_derivative(&order, 1.5).unwrap(), 0.25);
    }

    #[test]
    fn curve_rejects_out_of_range() {
        let g = k2();
        let order = sweep(&g, &indicator(&g, 0).unwrap());
        assert!(curve_value(&order, -0.5).is_err());
        assert!(curve_value(&order, 2.5).is_err());
        assert!(curve_left_derivative(&order, 0.0).is_err());
    }

    #[test]
    fn scan_returns_smallest_satisfying_prefix() {
        let g = barbell(3);
        // mass concentrated on the left triangle, heaviest first
        let q = SparseMass::from_entries(vec![(0, 0.5), (1, 0.3), (2, 0.2)]).unwrap();
        let order = sweep(&g, &q);
        let params = derive_params(&g, 0.2, 1, &practical_constants()).unwrap();
        let phi = ExactThreshold::new(0.2);
        let hit = scan_conditions(&g, &order, &params, &phi).unwrap().unwrap();
        // prefixes {0} and {0,1} have conductance 1 and 1/2; {0,1,2} has 1/7
        assert_eq!(hit.j, 3);
        assert_eq!(hit.members, vec![0, 1, 2]);
        assert_eq!(hit.boundary, 1);
        assert_eq!(hit.volume, 7);
    }

    #[test]
    fn scan_empty_when_conductance_high_everywhere() {
        let g = k2();
        let q = SparseMass::from_entries(vec![(0, 0.6), (1, 0.4)]).unwrap();
        let order = sweep(&g, &q);
        let params = derive_params(&g, 0.2, 1, &practical_constants()).unwrap();
        let phi = ExactThreshold::new(0.2);
        // {0} has conductance 1; {0,1} fails the volume cap (C.2)
        assert!(scan_conditions(&g, &order, &params, &phi).unwrap().is_none());
    }

    #[test]
    fn scan_respects_volume_cap() {
        // whole-graph prefix always violates 6*vol <= 5*total
        let g = Graph::build(&[(0, 1), (1, 2), (0, 2)], &[]).unwrap();
        let q = degree_profile(&g, &VertexSet::all(&g)).unwrap();
        let order = sweep(&g, &q);
        let params = derive_params(&g, 0.9, 1, &practical_constants()).unwrap();
        let phi = ExactThreshold::new(0.9);
        assert!(scan_conditions(&g, &order, &params, &phi).unwrap().is_none());
    }

    #[test]
    fn sweep_is_deterministic() {
        let g = barbell(4);
        let p = SparseMass::from_entries(
            (0..8).map(|v| (v, 1.0 / ((v + 2) as f64))).collect(),
        )
        .unwrap();
        let a = sweep(&g, &p);
        let b = sweep(&g, &p);
        assert_eq!(a.order(), b.order());
        assert_eq!(a.prefix_mass(), b.prefix_mass());
    }
}
