//! Browser bindings. Every export takes JSON text and returns JSON text; a
//! failure comes back as `{"error": "..."}`.

use matchable::dyson::certificate_for_unmatched;
use matchable::linear_matching::{
    construct_matched_basis, has_linear_matching_property, is_matched_characterization, violation_from_rado,
};
use matchable::matching::{build_edges, count_matchings, find_matching};
use matchable::{Element, ElementSet, FieldSpec, FieldTower, Limits, LinearInstance, LinearStrategy, MatchInstance};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn respond(result: Result<Value, String>) -> String {
    result.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

fn parse<T: serde::de::DeserializeOwned>(input: &str) -> Result<T, String> {
    serde_json::from_str(input).map_err(|e| e.to_string())
}

fn pick(v: &[Element], idx: &[usize]) -> ElementSet {
    idx.iter().map(|&i| v[i].clone()).collect()
}

fn group_report(inst: &MatchInstance) -> Result<Value, String> {
    let edges = build_edges(inst);
    let res = find_matching(inst);
    let count = count_matchings(inst, &Limits::default()).map(|c| c.to_string()).ok();
    let mut out = json!({
        "A": inst.a(),
        "B": inst.b(),
        "adjacency": edges.adjacency,
        "exists": res.exists,
        "count": count,
    });
    if let Some(m) = &res.matching {
        out["matching"] = json!(m);
    }
    if let Some(w) = &res.witness {
        out["witness"] = json!({ "S": pick(inst.a(), &w.s), "neighborhood": pick(inst.b(), &w.neighborhood) });
        if inst.one_not_in_b() {
            let (cert, trace) = certificate_for_unmatched(inst).map_err(|e| e.to_string())?;
            out["certificate"] = json!(cert);
            out["trace"] = json!(trace);
        }
    }
    Ok(out)
}

/// Bipartite graph, matching or Hall witness, matching count and, for an
/// unmatchable instance, the Dyson transform trace ending in a certificate.
#[wasm_bindgen]
pub fn analyze_group(instance: &str) -> String {
    respond(parse::<MatchInstance>(instance).and_then(|inst| group_report(&inst)))
}

fn subspace_report(inst: &LinearInstance) -> Result<Value, String> {
    let limits = Limits::default();
    let mut verdicts = serde_json::Map::new();
    for (name, s) in
        [("subfield", LinearStrategy::Subfield), ("frame", LinearStrategy::Frame), ("exhaustive", LinearStrategy::Exhaustive)]
    {
        let v = match is_matched_characterization(inst, s, &limits) {
            Ok(c) => json!({ "matched": c.matched, "violation": c.violation }),
            Err(e) => json!({ "error": e.to_string() }),
        };
        verdicts.insert(name.into(), v);
    }
    let a_basis = inst.a().basis();
    let built = construct_matched_basis(inst, &a_basis).map_err(|e| e.to_string())?;
    let mut out = json!({ "strategies": verdicts, "construction": built });
    if let Some(j) = &built.rado_witness {
        let (v, trace) = violation_from_rado(inst, &a_basis, j).map_err(|e| e.to_string())?;
        out["rado_violation"] = json!(v);
        out["rado_trace"] = json!(trace);
    }
    Ok(out)
}

/// All three characterization strategies plus the matched-basis
/// construction for a pair of subspaces.
#[wasm_bindgen]
pub fn analyze_subspaces(instance: &str) -> String {
    respond(parse::<LinearInstance>(instance).and_then(|inst| subspace_report(&inst)))
}

/// Whether the extension has the linear matching property, with an
/// unmatched pair when it does not.
#[wasm_bindgen]
pub fn field_property(spec: &str) -> String {
    respond(parse::<FieldSpec>(spec).and_then(|spec| {
        let tower = FieldTower::from_spec(&spec).map_err(|e| e.to_string())?;
        let report = has_linear_matching_property(&tower, &Limits::default()).map_err(|e| e.to_string())?;
        let mut out = json!(report);
        out["modulus"] = json!(tower.modulus());
        out["subfield_degrees"] = json!(tower.intermediate_fields().into_iter().map(|(d, _)| d).collect::<Vec<_>>());
        Ok(out)
    }))
}
