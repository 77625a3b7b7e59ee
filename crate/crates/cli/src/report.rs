use mstl::conditions::ConditionReport;
use serde_json::{json, Value};

/// Non-finite numbers become `null`.
pub fn condition_json(label: &str, rep: &ConditionReport) -> Value {
    json!({
        "label": label,
        "condition": rep.kind.name(),
        "passed": rep.passed(),
        "items": rep.items.iter().map(|i| json!({
            "name": i.name,
            "passed": i.passed,
            "gating": i.gating,
            "measured": i.measured,
            "tolerance": i.tolerance,
        })).collect::<Vec<_>>(),
    })
}

pub fn failed_labels(conditions: &[Value]) -> Vec<String> {
    conditions
        .iter()
        .filter(|c| c["passed"] == Value::Bool(false))
        .map(|c| format!("{} {}", c["label"].as_str().unwrap_or(""), c["condition"].as_str().unwrap_or("")))
        .collect()
}
