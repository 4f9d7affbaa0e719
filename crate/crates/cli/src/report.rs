//! JSON documents emitted by the subcommands. Object keys are sorted, so
//! identical inputs give byte-identical output.

use groupcut::closure::ClosureResult;
use groupcut::complex2d::MinimalityReport;
use groupcut::gridoracle::GridReport;
use groupcut::moves::Move;
use groupcut::perturbation::{ExtremalityReport, RefinementData, UncoveredComponent, Verdict};
use groupcut::PwlFunction;
use serde_json::{json, Value};

fn function(pi: &PwlFunction) -> Value {
    serde_json::to_value(pi.to_json()).expect("serializable")
}

fn verdict(v: &Verdict) -> (Value, Value) {
    match v {
        Verdict::Extreme => (json!("Extreme"), Value::Null),
        Verdict::NotExtreme => (json!("NotExtreme"), Value::Null),
        Verdict::NotMinimal(r) => (json!("NotMinimal"), json!(r)),
        Verdict::Unsupported(r) => (json!("Unsupported"), json!(r)),
    }
}

pub fn minimality(pi: &PwlFunction, rep: &MinimalityReport) -> Value {
    json!({
        "function": function(pi),
        "minimal": rep.minimal,
        "violation": rep.violation.as_ref().map(|v| json!({
            "detail": serde_json::to_value(v).expect("serializable"),
            "message": v.to_string(),
        })),
    })
}

pub fn closure(res: &ClosureResult) -> Value {
    json!({
        "presentation": serde_json::to_value(res.presentation.to_json()).expect("serializable"),
        "rounds": res.rounds,
        "steps": res.steps,
        "budget_exhausted": res.budget_exhausted,
        "off_grid": res.off_grid,
    })
}

fn moves(ms: &[Move]) -> Value {
    Value::Array(ms.iter().map(|m| serde_json::to_value(m.to_json()).expect("serializable")).collect())
}

pub fn component(c: &UncoveredComponent) -> Value {
    json!({
        "intervals": c.intervals,
        "fundamental_domain": c.fundamental_domain,
        "connecting_moves": moves(&c.connecting_moves),
    })
}

fn refinement(d: &RefinementData) -> Value {
    serde_json::to_value(d).expect("serializable")
}

pub fn extremality(rep: &ExtremalityReport) -> Value {
    let (v, reason) = verdict(&rep.verdict);
    json!({
        "verdict": v,
        "reason": reason,
        "function": function(&rep.function),
        "witness": rep.witness.as_ref().map(function),
        "epsilon": rep.epsilon,
        "bprime": rep.refinement.as_ref().map(|d| json!(d.bprime)),
        "refinement": rep.refinement.as_ref().map(refinement),
        "components": rep.components.iter().map(component).collect::<Vec<_>>(),
        "finite_dimension": rep.finite_dim.as_ref().map(|s| s.basis.len()),
        "presentation": rep.presentation.as_ref().map(|p| serde_json::to_value(p.to_json()).expect("serializable")),
    })
}

/// One entry per basis function or equivariant sample, with its `epsilon`.
pub struct Perturbation<'a> {
    pub kind: &'static str,
    pub component: Option<usize>,
    pub function: &'a PwlFunction,
    pub epsilon: groupcut::Rat,
}

pub fn perturbations(rep: &ExtremalityReport, items: &[Perturbation<'_>]) -> Value {
    let (v, reason) = verdict(&rep.verdict);
    json!({
        "verdict": v,
        "reason": reason,
        "bprime": rep.refinement.as_ref().map(|d| json!(d.bprime)),
        "variables": rep.finite_dim.as_ref().map(|s| json!(s.variables)),
        "basis": items.iter().filter(|p| p.kind == "finite").map(|p| json!({
            "function": function(p.function),
            "epsilon": p.epsilon,
        })).collect::<Vec<_>>(),
        "equivariant_samples": items.iter().filter(|p| p.kind == "equivariant").map(|p| json!({
            "component": p.component,
            "function": function(p.function),
            "epsilon": p.epsilon,
        })).collect::<Vec<_>>(),
        "components": rep.components.iter().map(component).collect::<Vec<_>>(),
    })
}

pub fn grid_check(grid: &GridReport, oversample: u64, grid_free: &Verdict) -> Value {
    let (v, reason) = verdict(grid_free);
    json!({
        "q": grid.q,
        "oversample": oversample,
        "grid_verdict": grid.verdict,
        "grid_dimension": grid.dimension,
        "grid_free_verdict": v,
        "grid_free_reason": reason,
    })
}

pub fn corpus(functions: &[PwlFunction]) -> Value {
    Value::Array(functions.iter().map(function).collect())
}
