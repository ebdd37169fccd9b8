use std::fmt;
use std::path::Path;

use crate::closure::prandtl_number;
use crate::error::Result;
use crate::harness::record::{read_csv, RunRecord};
use crate::oracles::{extract_prandtl, PrandtlEstimate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisReport {
    pub estimate: PrandtlEstimate,
    pub component: usize,
    pub final_nu: f64,
    /// `3/(2(1−ν))` at the final `ν`.
    pub theoretical_pr: f64,
}

pub fn analyze_records(
    records: &[RunRecord],
    window: Option<(f64, f64)>,
    component: usize,
) -> Result<AnalysisReport> {
    let estimate = extract_prandtl(records, window, component)?;
    let final_nu = records.last().map_or(f64::NAN, |r| r.nu);
    Ok(AnalysisReport {
        estimate,
        component,
        final_nu,
        theoretical_pr: prandtl_number(final_nu),
    })
}

pub fn analyze(
    path: impl AsRef<Path>,
    window: Option<(f64, f64)>,
    component: usize,
) -> Result<AnalysisReport> {
    analyze_records(&read_csv(path)?, window, component)
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.estimate;
        let k = self.component;
        writeln!(
            f,
            "fit window       : [{}, {}] ({} records)",
            e.fit_q.window.0, e.fit_q.window.1, e.fit_q.samples
        )?;
        writeln!(
            f,
            "ln|q|            : slope {:+.6}  intercept {:.6}  r^2 {:.6}",
            e.fit_q.slope, e.fit_q.intercept, e.fit_q.r_squared
        )?;
        writeln!(
            f,
            "ln|T{k}{k} - T|      : slope {:+.6}  intercept {:.6}  r^2 {:.6}",
            e.fit_theta.slope, e.fit_theta.intercept, e.fit_theta.r_squared
        )?;
        writeln!(
            f,
            "Pr_n             : {:.6} = {:.6} / {:.6}",
            e.pr_n, e.slope_q, e.slope_theta
        )?;
        write!(
            f,
            "Pr(final nu)     : {:.6} (nu = {})",
            self.theoretical_pr, self.final_nu
        )
    }
}
