//! JSON documents for every command. The text format is rendered from the
//! same values.

use plumb_core::oracle::AuditCheck;
use plumb_core::rational::{format_rat, Rat};
use plumb_core::series::SeriesTruncation;
use plumb_core::{Classification, Cycle, H1Result, HClass, Lattice, PlumbingGraph, RatCycle};
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

pub fn document(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m
}

pub fn rat(x: &Rat) -> Value {
    Value::String(format_rat(x))
}

pub fn rat_cycle(x: &RatCycle) -> Value {
    Value::Array(x.0.iter().map(rat).collect())
}

pub fn cycle(x: &Cycle) -> Value {
    json!(x.0)
}

pub fn opt_cycle(x: Option<&Cycle>) -> Value {
    x.map_or(Value::Null, cycle)
}

pub fn class(h: &HClass) -> Value {
    json!(h.0)
}

pub fn graph(g: &PlumbingGraph) -> Value {
    let vertices: Vec<Value> = g.vertices().iter().map(|v| json!({"id": v.id, "euler": v.euler})).collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|&(a, b)| json!([g.vertices()[a].id, g.vertices()[b].id]))
        .collect();
    json!({"vertices": vertices, "edges": edges})
}

pub fn classification(c: &Classification) -> Value {
    json!({
        "rational": c.rational,
        "elliptic": c.elliptic,
        "minimally_elliptic": c.minimally_elliptic,
        "numerically_gorenstein": c.numerically_gorenstein,
        "qgorenstein_generic_admissible": c.qgorenstein_generic_admissible,
    })
}

pub fn discriminant_group(lat: &Lattice) -> Value {
    let group = lat.discriminant_group();
    let reps: Vec<Value> = group
        .representatives()
        .map(|(h, r)| json!({"class": class(h), "representative": rat_cycle(r)}))
        .collect();
    json!({
        "invariant_factors": group.invariant_factors(),
        "order": group.order(),
        "representatives": reps,
    })
}

pub fn h1_on_cycle(chern: &RatCycle, z: &Cycle, result: &H1Result, generic: i64) -> Value {
    json!({
        "chern": rat_cycle(chern),
        "cycle": cycle(z),
        "value": result.value,
        "certified": result.certified,
        "hypothesis": result.hypothesis.tag(),
        "generic_bundle": generic,
    })
}

/// `h^1(X~, O(l'))`, which needs no hypothesis beyond genericity.
pub fn h1_global(chern: &RatCycle, value: i64) -> Value {
    json!({
        "chern": rat_cycle(chern),
        "cycle": null,
        "value": value,
        "certified": true,
        "hypothesis": null,
        "generic_bundle": null,
    })
}

pub fn truncation(lat: &Lattice, t: &SeriesTruncation) -> Value {
    let entries: Vec<Value> = t
        .entries(lat)
        .map(|(h, exponent, coeff)| json!({"class": class(h), "exponent": rat_cycle(&exponent), "coeff": coeff}))
        .collect();
    json!({"kind": t.kind.to_string(), "bound": cycle(&t.bound), "entries": entries})
}

pub fn audit(checks: &[AuditCheck]) -> Value {
    let failed = checks.iter().filter(|c| !c.passed).count();
    let list: Vec<Value> = checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
        .collect();
    let summary = if failed == 0 {
        "all checks passed".to_string()
    } else {
        format!("{failed} of {} checks failed", checks.len())
    };
    json!({"checks": list, "all_passed": failed == 0, "summary": summary})
}
