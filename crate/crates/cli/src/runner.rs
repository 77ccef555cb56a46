//! Parallel execution of a batch and the merge of its results.

use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::report::RunReport;
use crate::scenarios;

/// Runs every experiment on a pool of `jobs` threads and returns the reports
/// sorted by run name. The first error, in name order, wins.
pub fn run_all(configs: &[ExperimentConfig], jobs: Option<usize>) -> CliResult<Vec<RunReport>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start workers: {e}")))?;
    let mut results: Vec<(String, CliResult<RunReport>)> = pool.install(|| {
        configs
            .par_iter()
            .map(|c| (c.name(), scenarios::run(c)))
            .collect()
    });
    results.sort_by(|a, b| a.0.cmp(&b.0));
    results
        .into_iter()
        .map(|(name, r)| r.map_err(|e| prefix(&name, e)))
        .collect()
}

fn prefix(name: &str, e: CliError) -> CliError {
    match e {
        CliError::Config(msg) => CliError::Config(msg),
        other => CliError::InRun {
            run: name.to_string(),
            source: Box::new(other),
        },
    }
}

/// A single run writes straight into `out`; a batch gets one directory per
/// run plus an index `summary.json`.
pub fn write_all(reports: &[RunReport], out: &Path) -> CliResult<()> {
    if let [only] = reports {
        return only.write(out);
    }
    for r in reports {
        r.write(&out.join(&r.name))?;
    }
    let index: Vec<_> = reports
        .iter()
        .map(|r| json!({ "name": r.name, "scenario": r.scenario, "passed": r.passed }))
        .collect();
    let passed = reports.iter().all(|r| r.passed);
    let mut text = serde_json::to_string_pretty(&json!({ "passed": passed, "runs": index }))?;
    text.push('\n');
    std::fs::create_dir_all(out)?;
    std::fs::write(out.join("summary.json"), text)?;
    Ok(())
}
