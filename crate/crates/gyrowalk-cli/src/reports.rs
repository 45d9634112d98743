//! JSON renderings of reports that are not plain serde structs.

use gyrowalk::analysis::{Moments, RateReport};
use gyrowalk::verify::VerifyReport;

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

pub fn verify_json(report: &VerifyReport) -> String {
    let checks: Vec<serde_json::Value> = report
        .checks
        .iter()
        .map(|c| {
            serde_json::json!({
                "name": c.name,
                "cases": c.cases,
                "failures": c.failures,
                "worst": c.worst,
            })
        })
        .collect();
    serde_json::json!({
        "trials": report.trials,
        "seed": report.seed,
        "passed": report.passed(),
        "total_cases": report.total_cases(),
        "total_failures": report.total_failures(),
        "checks": checks,
    })
    .to_string()
}

pub fn rates_json(
    report: &RateReport,
    moments: &Moments,
    uniform_rate: Option<f64>,
) -> CliResult<String> {
    let mut value = serde_json::to_value(report)?;
    let obj = value.as_object_mut().expect("report serializes to an object");
    obj.insert(
        "quadrature_mean".into(),
        serde_json::json!(moments.mean_gamma),
    );
    obj.insert(
        "quadrature_error_bound".into(),
        serde_json::json!(moments.error_bound),
    );
    if let Some(u) = uniform_rate {
        obj.insert("uniform_escape_rate".into(), serde_json::json!(u));
    }
    Ok(serde_json::to_string_pretty(&value)?)
}
