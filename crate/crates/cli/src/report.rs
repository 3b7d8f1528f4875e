//! Campaign reports: deterministic JSON plus a separate environment stamp.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Plot data in column order; `None` becomes an empty cell.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PlotTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl PlotTable {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, path: &Path) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SuiteOutcome {
    pub suite: String,
    pub config_hash: String,
    pub pass: bool,
    pub summary: String,
    pub records: serde_json::Value,
    pub plots: Vec<PlotTable>,
    /// Set when the suite aborted instead of producing a verdict.
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EnvironmentStamp {
    pub tool_version: String,
    pub os: String,
    pub arch: String,
    pub jobs: usize,
    pub unix_time: u64,
    pub runtimes: BTreeMap<String, f64>,
}

impl EnvironmentStamp {
    pub fn capture(jobs: usize, runtimes: BTreeMap<String, f64>) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            jobs,
            unix_time: std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            runtimes,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub config_hash: String,
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteOutcome>,
    pub environment: EnvironmentStamp,
}

/// Report without its environment stamp; identical inputs give identical bytes.
#[derive(Serialize)]
struct Deterministic<'a> {
    config_hash: &'a str,
    seed: u64,
    pass: bool,
    suites: &'a [SuiteOutcome],
}

impl Report {
    pub fn deterministic_json(&self) -> String {
        serde_json::to_string_pretty(&Deterministic { config_hash: &self.config_hash, seed: self.seed, pass: self.pass, suites: &self.suites })
            .expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteOutcome> {
        self.suites.iter().find(|s| s.suite == name)
    }

    /// Suites of all reports in order; later duplicates replace earlier ones.
    pub fn merge(reports: &[Report]) -> Report {
        let mut suites: Vec<SuiteOutcome> = Vec::new();
        let mut runtimes = BTreeMap::new();
        for r in reports {
            for s in &r.suites {
                suites.retain(|x| x.suite != s.suite);
                suites.push(s.clone());
            }
            runtimes.extend(r.environment.runtimes.clone());
        }
        let hashes: Vec<&str> = reports.iter().map(|r| r.config_hash.as_str()).collect();
        let config_hash = if hashes.windows(2).all(|w| w[0] == w[1]) { hashes.first().copied().unwrap_or_default().to_string() } else { "mixed".into() };
        let seed = reports.first().map(|r| r.seed).unwrap_or_default();
        let pass = suites.iter().all(|s| s.pass);
        let jobs = reports.iter().map(|r| r.environment.jobs).max().unwrap_or(1);
        Report { config_hash, seed, pass, suites, environment: EnvironmentStamp::capture(jobs, runtimes) }
    }

    /// Writes one CSV per plot table; a table without rows gives a header-only file.
    pub fn write_plotdata(&self, dir: &Path) -> anyhow::Result<Vec<std::path::PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut out = Vec::new();
        for s in &self.suites {
            for t in &s.plots {
                let path = dir.join(format!("{}.csv", t.name));
                t.write_csv(&path)?;
                out.push(path);
            }
        }
        Ok(out)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(name: &str, pass: bool) -> SuiteOutcome {
        SuiteOutcome {
            suite: name.into(),
            config_hash: "h".into(),
            pass,
            summary: String::new(),
            records: serde_json::Value::Null,
            plots: vec![],
            error: None,
        }
    }

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn merge_replaces_duplicates_and_recomputes_pass() {
        let env = EnvironmentStamp::capture(1, BTreeMap::new());
        let a = Report { config_hash: "h".into(), seed: 1, pass: false, suites: vec![outcome("car", false)], environment: env.clone() };
        let b = Report { config_hash: "h".into(), seed: 1, pass: true, suites: vec![outcome("car", true), outcome("pfaffian", true)], environment: env };
        let m = Report::merge(&[a, b]);
        assert!(m.pass);
        assert_eq!(m.suites.len(), 2);
        assert_eq!(m.config_hash, "h");
    }

    #[test]
    fn deterministic_json_excludes_stamp() {
        let env = EnvironmentStamp::capture(1, BTreeMap::new());
        let r = Report { config_hash: "h".into(), seed: 1, pass: true, suites: vec![], environment: env };
        assert!(!r.deterministic_json().contains("unix_time"));
        assert!(r.to_json().contains("unix_time"));
    }
}
