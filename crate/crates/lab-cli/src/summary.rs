use std::fmt::Write as _;
use std::time::Instant;

use conclab::suites::{run_suite, InstanceRecord, SuiteConfig, SuiteRun};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub instances: usize,
    pub checks: usize,
    pub failures: usize,
    /// `null` in JSON when the suite produced no reports.
    pub min_margin: f64,
    pub probes: usize,
    pub probe_failures: usize,
    pub records: Vec<InstanceRecord>,
    pub probe_records: Vec<InstanceRecord>,
}

impl From<SuiteRun> for SuiteSummary {
    fn from(run: SuiteRun) -> Self {
        Self {
            suite: run.suite.name().to_string(),
            instances: run.instances.len(),
            checks: run.report_count(),
            failures: run.failures(),
            min_margin: run.min_margin(),
            probes: run.probes.len(),
            probe_failures: run.probe_failures(),
            records: run.instances,
            probe_records: run.probes,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub schema: u32,
    pub suite: String,
    pub config: SuiteConfig,
    pub instances: usize,
    pub checks: usize,
    pub failures: usize,
    pub min_margin: f64,
    pub suites: Vec<SuiteSummary>,
}

/// Runs every suite of the target in order. Timings go to `log`, never into
/// the summary, so identical configurations give identical output.
pub fn execute(cfg: &RunConfig, log: &mut dyn FnMut(&str)) -> Result<RunSummary, CliError> {
    let mut suites = Vec::new();
    for s in cfg.target.suites() {
        let start = Instant::now();
        let run = run_suite(s, &cfg.params)?;
        let summary = SuiteSummary::from(run);
        log(&format!(
            "{}: {} instances, {} checks, {} failures, {:.2} s",
            summary.suite,
            summary.instances,
            summary.checks,
            summary.failures,
            start.elapsed().as_secs_f64()
        ));
        suites.push(summary);
    }
    Ok(RunSummary {
        schema: SCHEMA_VERSION,
        suite: cfg.target.name().to_string(),
        config: cfg.params.clone(),
        instances: suites.iter().map(|s| s.instances).sum(),
        checks: suites.iter().map(|s| s.checks).sum(),
        failures: suites.iter().map(|s| s.failures).sum(),
        min_margin: suites.iter().map(|s| s.min_margin).fold(f64::INFINITY, f64::min),
        suites,
    })
}

fn csv(summary: &RunSummary) -> String {
    let mut out = String::from("suite,instance_id,name,lhs,rhs,margin,pass\n");
    for s in &summary.suites {
        for rec in &s.records {
            for r in &rec.reports {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    s.suite, rec.id, r.name, r.lhs, r.rhs, r.margin, r.pass
                );
            }
        }
    }
    out
}

pub fn render(summary: &RunSummary, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => serde_json::to_string_pretty(summary)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| CliError::Config(format!("cannot serialise summary: {e}"))),
        Format::Csv => Ok(csv(summary)),
    }
}
