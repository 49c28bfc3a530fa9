//! A harness sweep over small fields, emitted as CSV and summarized from the JSON report.

use std::fmt::Write;

use ffgeom::harness::{emit_report, run_suite, ExperimentConfig, Format, Kind, SweepGrid};
use ffgeom::Result;

pub fn run() -> Result<String> {
    let mut out = String::new();
    let mut cfg = ExperimentConfig::new(3, 1, 2, Kind::Sweep);
    cfg.grid = Some(SweepGrid { fields: vec![(3, 1), (5, 1), (3, 2)], dims: vec![2, 3], kind: Kind::VerifyIncidence });
    cfg.size = Some(8);
    cfg.trials = 2;
    cfg.seed = 42;
    let report = run_suite(&cfg)?;
    let a = &report.aggregates;
    let _ = writeln!(
        out,
        "{} subreports, {} bounds, {} passed, {} failed, exit code {}",
        report.subreports.len(),
        a.bounds,
        a.passed,
        a.failed,
        report.exit_code()
    );
    let csv = emit_report(&report, Format::Csv)?;
    let text = String::from_utf8_lossy(&csv);
    for line in text.lines().take(4) {
        let _ = writeln!(out, "{line}");
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    print!("{}", run()?);
    Ok(())
}
