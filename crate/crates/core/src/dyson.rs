//! Dyson e-transform on pairs of finite sets and the violation certificates
//! it produces for unmatchable instances.
//!
//! A step replaces `(S, R)` by `(S ∪ (e + R), R ∩ (S - e))` for some `e ∈ S`,
//! `r ∈ R` with `e + r ∉ S`. Every step is audited: `|S| + |R|` is
//! preserved, the identity stays in `R`, `R` shrinks, `S` strictly grows, and
//! `S + R` stays inside the ambient set.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{Element, ElementSet, GroupSpec};
use crate::matching::{find_matching, stabilizing_columns, MatchInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransformState {
    #[serde(rename = "S")]
    pub s: ElementSet,
    #[serde(rename = "R")]
    pub r: ElementSet,
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransformTrace {
    pub states: Vec<TransformState>,
    /// The `(e, r)` used to go from `states[t]` to `states[t + 1]`.
    pub chosen_pairs: Vec<(Element, Element)>,
}

impl TransformTrace {
    pub fn last(&self) -> &TransformState {
        self.states.last().expect("trace starts with the initial state")
    }

    pub fn steps(&self) -> usize {
        self.chosen_pairs.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationCertificate {
    #[serde(rename = "S_m")]
    pub s_m: ElementSet,
    #[serde(rename = "R_m")]
    pub r_m: ElementSet,
    pub instance_hash: String,
}

fn audit(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Audit(what()))
    }
}

/// One e-transform step. The identity must already lie in `R` unless this is
/// the first step of a trace started without it.
pub fn e_transform_step(g: &GroupSpec, state: &TransformState, e: &Element, r: &Element) -> Result<TransformState> {
    if !state.s.contains(e) || !state.r.contains(r) {
        return Err(Error::Precondition("e must lie in S and r in R".into()));
    }
    if state.s.contains(&g.add(e, r)) {
        return Err(Error::Precondition(format!("{e} + {r} already lies in S")));
    }
    let mut s1 = state.s.clone();
    s1.extend(state.r.iter().map(|x| g.add(e, x)));
    let r1: ElementSet = state.r.iter().filter(|x| state.s.contains(&g.add(x, e))).cloned().collect();

    audit(s1.len() + r1.len() == state.s.len() + state.r.len(), || {
        format!("|S|+|R| changed from {} to {}", state.s.len() + state.r.len(), s1.len() + r1.len())
    })?;
    // x -> x + e maps R1 onto S ∩ (e + R)
    let overlap = state.r.iter().map(|x| g.add(e, x)).filter(|y| state.s.contains(y)).count();
    audit(overlap == r1.len(), || "R1 is not in bijection with S ∩ (e + R)".into())?;
    audit(r1.is_subset(&state.r), || "R1 is not contained in R".into())?;
    if state.r.contains(&g.identity()) {
        audit(r1.contains(&g.identity()), || "identity left R".into())?;
    }
    audit(s1.len() > state.s.len(), || "S did not grow".into())?;
    Ok(TransformState { s: s1, r: r1, step: state.step + 1 })
}

/// Smallest `(e, r)` in element order with `e + r ∉ S`.
pub fn first_open_pair(g: &GroupSpec, s: &ElementSet, r: &ElementSet) -> Option<(Element, Element)> {
    s.iter().find_map(|e| r.iter().find(|x| !s.contains(&g.add(e, x))).map(|x| (e.clone(), x.clone())))
}

/// Iterates the transform from `(s0, r0)` until `S + R = S`.
///
/// `ambient` is the set `A` that must contain `S0 + R0` and every later
/// `S_t + R_t`; the audit checks this at each step.
pub fn stabilize(g: &GroupSpec, ambient: &ElementSet, s0: ElementSet, r0: ElementSet) -> Result<TransformTrace> {
    if s0.is_empty() || r0.is_empty() {
        return Err(Error::Precondition("S0 and R0 must be nonempty".into()));
    }
    let prod0 = g.set_product(&s0, &r0)?;
    audit(s0.is_subset(ambient) && prod0.is_subset(ambient), || "S0 + R0 is not inside A".into())?;
    let initial_sum = s0.len() + r0.len();
    let mut trace = TransformTrace { states: vec![TransformState { s: s0, r: r0, step: 0 }], chosen_pairs: Vec::new() };
    loop {
        let cur = trace.last();
        let Some((e, r)) = first_open_pair(g, &cur.s, &cur.r) else {
            break;
        };
        let prev_prod = g.set_product(&cur.s, &cur.r)?;
        let next = e_transform_step(g, cur, &e, &r)?;
        let prod = g.set_product(&next.s, &next.r)?;
        audit(prod.is_subset(&prev_prod), || "S1 + R1 escaped S + R".into())?;
        audit(next.s.is_subset(ambient), || "S left A".into())?;
        audit(next.s.len() + next.r.len() == initial_sum, || "cardinality sum drifted".into())?;
        audit(trace.steps() < ambient.len(), || "transform failed to terminate".into())?;
        trace.chosen_pairs.push((e, r));
        trace.states.push(next);
    }
    Ok(trace)
}

/// Hex SHA-256 digest of the instance's canonical JSON.
pub fn instance_hash(inst: &MatchInstance) -> String {
    let bytes = serde_json::to_vec(inst).expect("instances serialize");
    hex::encode(Sha256::digest(&bytes))
}

/// Builds a stabilized pair `(S_m, R_m)` with `|S_m| > |B \ R_m|` for an
/// unmatchable instance, starting from the Hall violator `S` and
/// `R = { b : S + b ⊆ A } ∪ {1}`.
pub fn certificate_for_unmatched(inst: &MatchInstance) -> Result<(ViolationCertificate, TransformTrace)> {
    if !inst.one_not_in_b() {
        return Err(Error::Precondition("the identity belongs to B".into()));
    }
    let res = find_matching(inst);
    let Some(witness) = res.witness else {
        return Err(Error::Matchable);
    };
    let g = inst.group();
    let s0: ElementSet = witness.s.iter().map(|&i| inst.a()[i].clone()).collect();
    let mut r0: ElementSet = stabilizing_columns(inst, &witness.s).into_iter().map(|j| inst.b()[j].clone()).collect();
    r0.insert(g.identity());
    let trace = stabilize(g, &inst.a_set(), s0, r0)?;
    let last = trace.last();
    let cert = ViolationCertificate { s_m: last.s.clone(), r_m: last.r.clone(), instance_hash: instance_hash(inst) };
    audit(verify_certificate(inst, &cert), || "stabilized pair does not violate the bound".into())?;
    Ok((cert, trace))
}

/// Rechecks a certificate with set arithmetic only.
pub fn verify_certificate(inst: &MatchInstance, cert: &ViolationCertificate) -> bool {
    let g = inst.group();
    if cert.instance_hash != instance_hash(inst) || cert.s_m.is_empty() || cert.r_m.is_empty() {
        return false;
    }
    if cert.s_m.iter().chain(&cert.r_m).any(|x| g.check(x).is_err()) {
        return false;
    }
    let a_set = inst.a_set();
    let mut b_one = inst.b_set();
    b_one.insert(g.identity());
    let Ok(prod) = g.set_product(&cert.s_m, &cert.r_m) else {
        return false;
    };
    let outside = inst.b().iter().filter(|b| !cert.r_m.contains(b)).count();
    prod == cert.s_m && cert.s_m.is_subset(&a_set) && cert.r_m.is_subset(&b_one) && cert.s_m.len() > outside
}
