//! Machine-readable run reports and their re-verification.
//!
//! A report is a line-based "key = value" document with a fixed key
//! order, so identical runs serialize to identical bytes. Quality
//! numbers are exact fraction strings; floats appear only for the
//! requested thresholds.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::edgelist::IdMap;
use crate::exact::ExactThreshold;
use crate::graph::{balance, conductance, Frac, Graph, VertexSet};
use crate::nibble::CutReport;

pub const FORMAT_TAG: &str = "cut-report v1";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunReport {
    /// "sha256:<hex>" for file inputs, "gen:<spec>" for generated ones.
    pub input: String,
    pub algorithm: String,
    pub profile: String,
    pub phi: Option<f64>,
    pub theta: Option<f64>,
    pub b: Option<u32>,
    pub p_fail: Option<f64>,
    pub seed: Option<u64>,
    /// Seed vertex in original ids, for deterministic runs.
    pub start: Option<u64>,
    /// Cut members in original ids, ascending.
    pub members: Vec<u64>,
    /// Exact fraction "a/b".
    pub conductance: String,
    pub volume: u64,
    pub balance: String,
    pub work_units: Option<u64>,
    pub found_at_step: u64,
    pub sweep_index: u64,
    pub stop_reason: Option<String>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("line {line}: expected 'key = value', got '{text}'")]
    Malformed { line: usize, text: String },
    #[error("missing required key '{0}'")]
    MissingKey(&'static str),
    #[error("bad value for '{key}': {reason}")]
    BadValue { key: String, reason: String },
    #[error("unsupported format tag '{0}'")]
    BadFormat(String),
    #[error("verification failed: {0}")]
    Mismatch(String),
}

pub fn input_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{}", hex::encode(hasher.finalize()))
}

pub fn frac_string(f: &Frac) -> String {
    format!("{}/{}", f.numer(), f.denom())
}

impl RunReport {
    pub fn from_cut(cut: &CutReport, map: &IdMap, input: String, profile: &str) -> RunReport {
        let members: Vec<u64> = cut.members.members().iter().map(|&v| map.original(v)).collect();
        RunReport {
            input,
            algorithm: cut.algorithm.to_string(),
            profile: profile.to_string(),
            seed: cut.seed,
            members,
            conductance: frac_string(&cut.conductance),
            volume: cut.volume,
            balance: frac_string(&cut.balance),
            found_at_step: cut.found_at_step,
            sweep_index: cut.sweep_index as u64,
            ..RunReport::default()
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("format", FORMAT_TAG.to_string());
        put("input", self.input.clone());
        put("algorithm", self.algorithm.clone());
        put("profile", self.profile.clone());
        if let Some(phi) = self.phi {
            put("phi", format!("{phi}"));
        }
        if let Some(theta) = self.theta {
            put("theta", format!("{theta}"));
        }
        if let Some(b) = self.b {
            put("b", format!("{b}"));
        }
        if let Some(p) = self.p_fail {
            put("p-fail", format!("{p}"));
        }
        if let Some(seed) = self.seed {
            put("seed", format!("{seed}"));
        }
        if let Some(start) = self.start {
            put("start", format!("{start}"));
        }
        put(
            "members",
            self.members.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
        );
        put("conductance", self.conductance.clone());
        put("volume", self.volume.to_string());
        put("balance", self.balance.clone());
        if let Some(w) = self.work_units {
            put("work-units", w.to_string());
        }
        put("found-at-step", self.found_at_step.to_string());
        put("sweep-index", self.sweep_index.to_string());
        if let Some(reason) = &self.stop_reason {
            put("stop-reason", reason.clone());
        }
        out
    }

    pub fn parse(text: &str) -> Result<RunReport, ReportError> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (k, v) = trimmed
                .split_once(" = ")
                .ok_or_else(|| ReportError::Malformed { line: idx + 1, text: trimmed.to_string() })?;
            map.insert(k.to_string(), v.to_string());
        }
        let format = map.remove("format").ok_or(ReportError::MissingKey("format"))?;
        if format != FORMAT_TAG {
            return Err(ReportError::BadFormat(format));
        }
        let required = |map: &mut BTreeMap<String, String>, key: &'static str| {
            map.remove(key).ok_or(ReportError::MissingKey(key))
        };
        let bad = |key: &str, reason: String| ReportError::BadValue { key: key.to_string(), reason };
        let mut report = RunReport {
            input: required(&mut map, "input")?,
            algorithm: required(&mut map, "algorithm")?,
            profile: required(&mut map, "profile")?,
            conductance: required(&mut map, "conductance")?,
            balance: required(&mut map, "balance")?,
            ..RunReport::default()
        };
        let members_text = required(&mut map, "members")?;
        for token in members_text.split_whitespace() {
            report.members.push(token.parse().map_err(|e| bad("members", format!("{e}")))?);
        }
        report.volume = required(&mut map, "volume")?.parse().map_err(|e| bad("volume", format!("{e}")))?;
        report.found_at_step =
            required(&mut map, "found-at-step")?.parse().map_err(|e| bad("found-at-step", format!("{e}")))?;
        report.sweep_index =
            required(&mut map, "sweep-index")?.parse().map_err(|e| bad("sweep-index", format!("{e}")))?;
        if let Some(v) = map.remove("phi") {
            report.phi = Some(v.parse().map_err(|e| bad("phi", format!("{e}")))?);
        }
        if let Some(v) = map.remove("theta") {
            report.theta = Some(v.parse().map_err(|e| bad("theta", format!("{e}")))?);
        }
        if let Some(v) = map.remove("b") {
            report.b = Some(v.parse().map_err(|e| bad("b", format!("{e}")))?);
        }
        if let Some(v) = map.remove("p-fail") {
            report.p_fail = Some(v.parse().map_err(|e| bad("p-fail", format!("{e}")))?);
        }
        if let Some(v) = map.remove("seed") {
            report.seed = Some(v.parse().map_err(|e| bad("seed", format!("{e}")))?);
        }
        if let Some(v) = map.remove("start") {
            report.start = Some(v.parse().map_err(|e| bad("start", format!("{e}")))?);
        }
        if let Some(v) = map.remove("work-units") {
            report.work_units = Some(v.parse().map_err(|e| bad("work-units", format!("{e}")))?);
        }
        report.stop_reason = map.remove("stop-reason");
        Ok(report)
    }
}

/// Recomputes every claimed quantity from the graph and re-asserts the
/// guarantee appropriate to the algorithm that produced the report.
pub fn verify_report(report: &RunReport, g: &Graph, map: &IdMap) -> Result<(), ReportError> {
    let mismatch = |what: String| ReportError::Mismatch(what);
    let mut compact: Vec<u32> = Vec::with_capacity(report.members.len());
    for &orig in &report.members {
        let v = map
            .compact(orig)
            .ok_or_else(|| mismatch(format!("member {orig} does not occur in the input graph")))?;
        compact.push(v);
    }
    let set = VertexSet::from_unsorted(g, compact)
        .map_err(|e| mismatch(format!("member set invalid: {e}")))?;
    if set.len() != report.members.len() {
        return Err(mismatch("member list contains duplicates".to_string()));
    }
    let phi = conductance(g, &set).map_err(|e| mismatch(format!("{e}")))?;
    if frac_string(&phi) != report.conductance {
        return Err(mismatch(format!(
            "conductance mismatch: recomputed {} vs reported {}",
            frac_string(&phi),
            report.conductance
        )));
    }
    if set.volume() != report.volume {
        return Err(mismatch(format!(
            "volume mismatch: recomputed {} vs reported {}",
            set.volume(),
            report.volume
        )));
    }
    let bal = balance(g, &set).map_err(|e| mismatch(format!("{e}")))?;
    if frac_string(&bal) != report.balance {
        return Err(mismatch(format!(
            "balance mismatch: recomputed {} vs reported {}",
            frac_string(&bal),
            report.balance
        )));
    }
    match report.algorithm.as_str() {
        "nibble" | "random-nibble" => {
            let target = report.phi.ok_or(ReportError::MissingKey("phi"))?;
            if !set.is_empty() {
                let t = ExactThreshold::new(target);
                if !t.admits(*phi.numer(), *phi.denom()) {
                    return Err(mismatch(format!("conductance {} exceeds phi {target}", report.conductance)));
                }
                if 6 * set.volume() > 5 * g.total_volume() {
                    return Err(mismatch(format!("volume {} exceeds (5/6) * {}", set.volume(), g.total_volume())));
                }
            }
        }
        "partition" => {
            let target = report.theta.ok_or(ReportError::MissingKey("theta"))?;
            if 8 * set.volume() > 7 * g.total_volume() {
                return Err(mismatch(format!("volume {} exceeds (7/8) * {}", set.volume(), g.total_volume())));
            }
            if !set.is_empty() {
                let t = ExactThreshold::new(target);
                if !t.admits(*phi.numer(), *phi.denom()) {
                    return Err(mismatch(format!("conductance {} exceeds theta {target}", report.conductance)));
                }
            }
        }
        other => {
            return Err(ReportError::BadValue {
                key: "algorithm".to_string(),
                reason: format!("unknown algorithm '{other}'"),
            })
        }
    }
    Ok(())
}
