use serde_json::{json, Map, Value};
use tetrablock::verify::{run_suite, Suite, SuiteReport};

use crate::args::VerifyArgs;
use crate::report::{raw, sig17, CliError, CliResult, Outcome, EXIT_VERIFICATION};

fn selected(name: &str) -> CliResult<Vec<Suite>> {
    if name == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    name.parse::<Suite>()
        .map(|s| vec![s])
        .map_err(|_| {
            let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
            CliError::Usage(format!("unknown suite {name:?}; expected all or one of {}", names.join(", ")))
        })
}

/// Metric keys ending in a scale suffix carry that scale; everything else is raw.
fn labelled_metrics(r: &SuiteReport) -> Value {
    let mut out = Map::new();
    for (k, &v) in &r.metrics {
        let (key, scale) = if let Some(stem) = k.strip_suffix("_m_scale") {
            (stem, "m_scale")
        } else if let Some(stem) = k.strip_suffix("_p_scale") {
            (stem, "p_scale")
        } else {
            (k.as_str(), "raw")
        };
        out.insert(key.to_string(), json!({ scale: v }));
    }
    Value::Object(out)
}

pub fn run(args: &VerifyArgs) -> CliResult<Outcome> {
    let suites = selected(&args.suite)?;
    let mut reports = Vec::with_capacity(suites.len());
    let mut text = String::new();
    let mut failed = Vec::new();
    for suite in suites {
        let r = run_suite(suite, args.seed)?;
        text += &format!(
            "{} {:<12} samples {:>6}  worst {}  threshold {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.suite.name(),
            r.samples,
            sig17(r.worst),
            sig17(r.threshold)
        );
        if !r.passed {
            failed.push(r.suite.name());
        }
        reports.push(json!({
            "suite": r.suite.name(),
            "claim": r.claim,
            "samples": r.samples,
            "worst": raw(r.worst),
            "threshold": raw(r.threshold),
            "passed": r.passed,
            "metrics": labelled_metrics(&r),
        }));
    }
    let outcome = Outcome::new(
        "verify-paper",
        json!({ "suite": args.suite, "seed": args.seed }),
        json!({ "suites": reports, "all_passed": failed.is_empty(), "failed": failed }),
        json!({}),
        text.trim_end().to_string(),
    );
    if failed.is_empty() {
        Ok(outcome)
    } else {
        eprintln!("failed suites: {}", failed.join(", "));
        Ok(outcome.with_exit(EXIT_VERIFICATION))
    }
}
