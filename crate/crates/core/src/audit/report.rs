//! JSON rendering of [`AuditReport`].

use serde_json::{json, Map, Value};

use super::{AuditConfig, AuditReport, CaseReport};
use crate::format::{json_exponent, json_number};

fn opt_number(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_number)
}

fn exponents(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|&x| json_exponent(x)).collect())
}

fn config_json(c: &AuditConfig) -> Value {
    json!({
        "base_seed": c.base_seed,
        "trials_per_case": c.trials_per_case,
        "dims": c.dims.iter().map(|(m, n)| format!("{m}x{n}")).collect::<Vec<_>>(),
        "grid": {
            "norm_p": exponents(&c.grid.norm_p),
            "anti_p": exponents(&c.grid.anti_p),
            "negative_p": exponents(&c.grid.negative_p),
            "alpha": exponents(&c.grid.alpha),
            "s": exponents(&c.grid.s),
        },
        "tolerance": json_number(c.tolerance),
        "env_dim_source": c.env_dim_source.name(),
        "cases": c.cases,
    })
}

fn case_json(c: &CaseReport) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), c.id.into());
    m.insert("paper_eq".into(), c.formula.into());
    m.insert("description".into(), c.description.into());
    m.insert("trials".into(), c.trials.into());
    m.insert("evaluations".into(), c.evaluations.into());
    m.insert("violations".into(), c.violations.into());
    m.insert("failures".into(), c.failures.into());
    m.insert("first_failure".into(), c.first_failure.clone().into());
    m.insert("worst_margin".into(), opt_number(c.worst_margin));
    m.insert("worst_at".into(), c.worst_at.clone().into());
    m.insert(
        "saturation_residual".into(),
        opt_number(c.saturation_residual),
    );
    if let Some(n) = c.strict_count {
        m.insert("strict_count".into(), n.into());
    }
    Value::Object(m)
}

/// Pretty-printed report with a trailing newline. Keys are sorted and no
/// timestamps are written, so equal reports serialize to equal bytes.
pub fn report_to_json(report: &AuditReport) -> String {
    let doc = json!({
        "config": config_json(&report.config),
        "cases": report.cases.iter().map(case_json).collect::<Vec<_>>(),
        "version": report.version,
        "prng": report.prng,
        "gaussian": report.gaussian,
        "total_violations": report.total_violations(),
        "total_failures": report.total_failures(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report is serializable");
    s.push('\n');
    s
}
