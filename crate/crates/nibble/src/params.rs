//! Constants profiles and derived walk parameters.

use num_rational::Ratio;

use crate::error::ParamError;
use crate::graph::{Frac, GraphRef};

type Q = Ratio<i128>;

fn q(n: i128, d: i128) -> Q {
    Ratio::new(n, d)
}

/// The six positive constants governing thresholds and step counts,
/// tied together by seven inequalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantsProfile {
    pub name: &'static str,
    pub c1: u64,
    pub c2: u64,
    pub c3: u64,
    pub c4: u64,
    pub c5: u64,
    pub c6: u64,
    /// Set when a profile deliberately ships despite violations.
    pub waived: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintViolation {
    pub index: usize,
    pub description: String,
}

/// The conservative values used throughout the correctness analysis.
pub fn paper_constants() -> ConstantsProfile {
    ConstantsProfile { name: "paper", c1: 200, c2: 280, c3: 1800, c4: 140, c5: 20, c6: 60, waived: false }
}

/// Smaller constants that still satisfy every inequality; they shrink
/// step counts and raise the truncation threshold, which is what makes
/// desk-scale runs return non-empty clusters quickly.
pub fn practical_constants() -> ConstantsProfile {
    ConstantsProfile { name: "practical", c1: 100, c2: 150, c3: 600, c4: 75, c5: 10, c6: 30, waived: false }
}

pub fn profile_by_name(name: &str) -> Option<ConstantsProfile> {
    match name {
        "paper" => Some(paper_constants()),
        "practical" => Some(practical_constants()),
        _ => None,
    }
}

/// Checks all seven inequalities in exact rational arithmetic. An empty
/// result means the profile is valid.
pub fn validate_constants(p: &ConstantsProfile) -> Vec<ConstraintViolation> {
    let (c1, c2, c3, c4, c5, c6) =
        (p.c1 as i128, p.c2 as i128, p.c3 as i128, p.c4 as i128, p.c5 as i128, p.c6 as i128);
    let mut violations = Vec::new();
    let mut check = |index: usize, ok: bool, description: String| {
        if !ok {
            violations.push(ConstraintViolation { index, description });
        }
    };
    check(1, c2 >= 2 * c4, format!("c2 >= 2*c4 fails: {} < {}", c2, 2 * c4));
    check(2, c6 >= 2 * c5, format!("c6 >= 2*c5 fails: {} < {}", c6, 2 * c5));
    check(3, c3 >= 8 * c5, format!("c3 >= 8*c5 fails: {} < {}", c3, 8 * c5));
    check(4, c4 >= 4 * c5, format!("c4 >= 4*c5 fails: {} < {}", c4, 4 * c5));
    check(
        5,
        q(1, 2 * c6) - q(1, c3) - q(1, 2 * c5 * c6) >= q(1, c4),
        "1/(2*c6) - 1/c3 - 1/(2*c5*c6) >= 1/c4 fails".to_string(),
    );
    check(
        6,
        q(1, 2 * c5) >= q(6, 5 * c6) + q(1, c1),
        "1/(2*c5) >= 6/(5*c6) + 1/c1 fails".to_string(),
    );
    check(
        7,
        q(1, 5) >= q(1, c5) + q(4 * c6, 3 * c3) + q(1, 2 * c1) + q(1, 2 * c2),
        "1/5 >= 1/c5 + 4*c6/(3*c3) + 1/(2*c1) + 1/(2*c2) fails".to_string(),
    );
    violations
}

/// Target conductance, size scale and every quantity derived from them.
#[derive(Debug, Clone)]
pub struct NibbleParams {
    pub phi: f64,
    pub b: u32,
    pub profile: ConstantsProfile,
    /// ceil(log2(vol/2)).
    pub ell: u32,
    pub t1: u64,
    pub t_last: u64,
    pub f1: Frac,
    /// Truncation threshold 1 / (c3 * (ell+2) * t_last * 2^b).
    pub eps: f64,
    /// Exact value of 1/eps, also the per-step work cap ceil(1/eps).
    pub eps_inv: u64,
    /// Threshold for the curve-slope condition: 1 / (c4 * (ell+2) * 2^b).
    pub slope_threshold: f64,
    pub graph_volume: u64,
}

/// Smallest e with 2^(e+1) >= vol; equals ceil(log2(vol/2)) for both
/// even and odd vol.
pub fn ell_for_volume(vol: u64) -> u32 {
    debug_assert!(vol >= 2);
    let mut e = 0u32;
    while (2u128 << (e + 1)) < 2 * vol as u128 {
        e += 1;
    }
    e
}

pub fn derive_params(
    g: &impl GraphRef,
    phi: f64,
    b: u32,
    profile: &ConstantsProfile,
) -> Result<NibbleParams, ParamError> {
    if !(phi > 0.0 && phi < 1.0) {
        return Err(ParamError::PhiOutOfRange(phi));
    }
    let vol = g.active_volume();
    if vol < 2 {
        return Err(ParamError::VolumeTooSmall(vol));
    }
    let ell = ell_for_volume(vol);
    let b_max = {
        // ceil(log2 vol)
        let mut e = 0u32;
        while (1u128 << e) < vol as u128 {
            e += 1;
        }
        e
    };
    if b > b_max {
        return Err(ParamError::ScaleTooLarge { b, max: b_max });
    }
    let half_vol = vol as f64 / 2.0;
    let t1 = ((2.0 / (phi * phi)) * (profile.c1 as f64 * (ell as f64 + 2.0) * half_vol.sqrt()).ln())
        .ceil() as u64;
    let t_last = (ell as u64 + 1).checked_mul(t1).ok_or(ParamError::Overflow)?;
    let f1_den = profile
        .c2
        .checked_mul(ell as u64 + 2)
        .and_then(|x| x.checked_mul(t_last))
        .ok_or(ParamError::Overflow)?;
    let eps_inv = profile
        .c3
        .checked_mul(ell as u64 + 2)
        .and_then(|x| x.checked_mul(t_last))
        .and_then(|x| x.checked_shl(b).map_or(None, |y| if y >> b == x { Some(y) } else { None }))
        .ok_or(ParamError::Overflow)?;
    let slope_den = profile
        .c4
        .checked_mul(ell as u64 + 2)
        .and_then(|x| x.checked_shl(b).map_or(None, |y| if y >> b == x { Some(y) } else { None }))
        .ok_or(ParamError::Overflow)?;
    Ok(NibbleParams {
        phi,
        b,
        profile: profile.clone(),
        ell,
        t1,
        t_last,
        f1: Frac::new(1, f1_den),
        eps: 1.0 / eps_inv as f64,
        eps_inv,
        slope_threshold: 1.0 / slope_den as f64,
        graph_volume: vol,
    })
}
