//! Verification campaigns for the Ising form-factor library: configuration,
//! suite orchestration, reports and plot data.

pub mod config;
pub mod report;
pub mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use config::RunConfig;
use report::{sha256_hex, EnvironmentStamp, Report, SuiteOutcome};

/// Hash of the effective configuration, recorded with every verdict.
pub fn config_hash(cfg: &RunConfig) -> String {
    sha256_hex(&serde_json::to_vec(cfg).expect("config serializes"))
}

/// Runs `suites` in the given order with at most `jobs` worker threads.
pub fn run_campaign(cfg: &RunConfig, suites: &[String], jobs: usize) -> anyhow::Result<Report> {
    for s in suites {
        config::check_suite(s)?;
    }
    let hash = config_hash(cfg);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let results: Vec<(SuiteOutcome, f64)> = pool.install(|| {
        suites
            .par_iter()
            .map(|name| {
                let start = Instant::now();
                log::info!("suite {name} started");
                let outcome = match suites::run_suite(name, cfg) {
                    Ok(r) => SuiteOutcome {
                        suite: name.clone(),
                        config_hash: hash.clone(),
                        pass: r.pass,
                        summary: r.summary,
                        records: r.records,
                        plots: r.plots,
                        error: None,
                    },
                    Err(e) => SuiteOutcome {
                        suite: name.clone(),
                        config_hash: hash.clone(),
                        pass: false,
                        summary: format!("aborted: {e:#}"),
                        records: serde_json::Value::Null,
                        plots: vec![],
                        error: Some(format!("{e:#}")),
                    },
                };
                let secs = start.elapsed().as_secs_f64();
                log::info!("suite {name} finished in {secs:.1}s: pass={}", outcome.pass);
                (outcome, secs)
            })
            .collect()
    });
    let runtimes: BTreeMap<String, f64> = results.iter().map(|(o, t)| (o.suite.clone(), *t)).collect();
    let suites: Vec<SuiteOutcome> = results.into_iter().map(|(o, _)| o).collect();
    Ok(Report {
        config_hash: hash,
        seed: cfg.seed,
        pass: suites.iter().all(|s| s.pass),
        suites,
        environment: EnvironmentStamp::capture(jobs.max(1), runtimes),
    })
}
