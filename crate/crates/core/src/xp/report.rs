use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pairs::SchemeKind;

use super::config::{Exponent, SuiteConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Column order of `trials.csv`; bumped together with [`SCHEMA_VERSION`].
pub const CSV_COLUMNS: &str = "suite,trial,seed,check,dim,degree,scheme,p,alpha,eps,lhs,rhs,ratio,degenerate";

/// One measured quantity of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub suite: String,
    pub trial: u64,
    pub seed: u64,
    pub check: String,
    pub dim: Option<usize>,
    pub degree: Option<usize>,
    pub scheme: Option<SchemeKind>,
    pub p: Option<Exponent>,
    pub alpha: Option<f64>,
    pub eps: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub degenerate: bool,
}

/// Aggregate over every record of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: String,
    pub cap: f64,
    pub count: usize,
    pub degenerate: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub pass: bool,
    pub max_by_scheme: BTreeMap<String, f64>,
    pub max_by_degree: BTreeMap<usize, f64>,
    pub witness: Record,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub instruments: String,
    pub config: SuiteConfig,
    pub pass: bool,
    pub checks: Vec<CheckSummary>,
    #[serde(skip)]
    pub records: Vec<Record>,
}

impl SuiteReport {
    /// Groups records by check label in first-seen order; `cap_of` maps a
    /// label to its acceptance cap.
    pub fn assemble(
        config: SuiteConfig,
        instruments: &str,
        records: Vec<Record>,
        cap_of: impl Fn(&str) -> f64,
    ) -> Self {
        let mut order: Vec<String> = Vec::new();
        let mut groups: BTreeMap<String, Vec<&Record>> = BTreeMap::new();
        for r in &records {
            if !groups.contains_key(&r.check) {
                order.push(r.check.clone());
            }
            groups.entry(r.check.clone()).or_default().push(r);
        }
        let checks: Vec<CheckSummary> =
            order.iter().map(|name| summarize(name, &groups[name], cap_of(name))).collect();
        Self {
            suite: config.suite.clone(),
            instruments: instruments.to_string(),
            pass: checks.iter().all(|c| c.pass),
            config,
            checks,
            records,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.check == name)
    }

    pub fn max_ratio(&self) -> f64 {
        self.checks.iter().map(|c| c.max_ratio).fold(f64::NEG_INFINITY, f64::max)
    }
}

fn summarize(name: &str, group: &[&Record], cap: f64) -> CheckSummary {
    let mut witness = group[0];
    let mut has_nan = false;
    let mut sum = 0.0;
    let mut max_by_scheme = BTreeMap::new();
    let mut max_by_degree = BTreeMap::new();
    for &r in group {
        if r.ratio.is_nan() {
            has_nan = true;
            continue;
        }
        sum += r.ratio;
        if r.ratio > witness.ratio || witness.ratio.is_nan() {
            witness = r;
        }
        if let Some(s) = r.scheme {
            let e = max_by_scheme.entry(s.name().to_string()).or_insert(f64::NEG_INFINITY);
            *e = f64::max(*e, r.ratio);
        }
        if let Some(d) = r.degree {
            let e = max_by_degree.entry(d).or_insert(f64::NEG_INFINITY);
            *e = f64::max(*e, r.ratio);
        }
    }
    let max_ratio = if has_nan { f64::NAN } else { witness.ratio };
    CheckSummary {
        check: name.to_string(),
        cap,
        count: group.len(),
        degenerate: group.iter().filter(|r| r.degenerate).count(),
        max_ratio,
        mean_ratio: sum / group.len() as f64,
        pass: !has_nan && max_ratio <= cap,
        max_by_scheme,
        max_by_degree,
        witness: witness.clone(),
    }
}

/// Everything written to `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub csv_columns: String,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn new(suites: Vec<SuiteReport>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            csv_columns: CSV_COLUMNS.to_string(),
            pass: suites.iter().all(|s| s.pass),
            suites,
        }
    }

    /// Writes `report.json` and `trials.csv` into `dir`, creating it.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), serde_json::to_string_pretty(self)?)?;
        let mut w = csv::Writer::from_path(dir.join("trials.csv"))?;
        for s in &self.suites {
            for r in &s.records {
                w.serialize(r)?;
            }
        }
        if self.suites.iter().all(|s| s.records.is_empty()) {
            w.write_record(CSV_COLUMNS.split(','))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

pub fn read_trials_csv(path: &Path) -> Result<Vec<Record>> {
    let mut rd = csv::Reader::from_path(path)?;
    Ok(rd.deserialize().collect::<std::result::Result<Vec<Record>, _>>()?)
}
