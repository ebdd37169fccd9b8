//! Closed-form relaxation laws of the homogeneous model, least-squares
//! fitting, and recovery of the Prandtl number from a run.
//!
//! With constant `ν` the heat flux decays as `q(t) = q(0)·e^{−3t/τ}` and
//! each diagonal entry of `Θ − T·I` as `e^{−2(1−ν)t/τ}`. The ratio of the two
//! log-slopes is `3/(2(1−ν)) = Pr`.

use crate::closure::{prandtl_number, transport_coefficients};
use crate::error::{Error, Result};
use crate::harness::record::RunRecord;
use crate::moments::gaussian_surrogate_anisotropy;
use crate::tensor3::{SymTensor3, Vector3};

pub fn analytic_heat_flux(t: f64, q0: Vector3, tau: f64) -> Vector3 {
    q0 * (-3.0 * t / tau).exp()
}

/// `Θ(t) = e^{−2(1−ν)(t−s)/τ}·Θ(s) + (1 − e^{−2(1−ν)(t−s)/τ})·T·I`.
pub fn analytic_theta(
    t: f64,
    s: f64,
    theta_s: &SymTensor3,
    nu: f64,
    temperature: f64,
    tau: f64,
) -> SymTensor3 {
    let decay = (-2.0 * (1.0 - nu) * (t - s) / tau).exp();
    theta_s.lerp_with(decay, &SymTensor3::isotropic(temperature), 1.0 - decay)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linfit(points: &[(f64, f64)]) -> Result<FitResult> {
    let n = points.len();
    if n < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 points, got {n}"
        )));
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::DegenerateFit("non-finite sample".into()));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy > 0.0 {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.0), hi.max(p.0))
        });
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        window: (lo, hi),
        samples: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrandtlEstimate {
    /// `slope_q / slope_theta`.
    pub pr_n: f64,
    /// `|d ln|q| / dt|`.
    pub slope_q: f64,
    /// `|d ln|Θ_kk − T| / dt|`.
    pub slope_theta: f64,
    pub fit_q: FitResult,
    pub fit_theta: FitResult,
}

/// Fit the log-decay of `|q|` and of `|Θ_kk − T|` over the records whose
/// time lies in `window` (all records when `None`), with `component` the
/// one-based diagonal index `k`.
pub fn extract_prandtl(
    series: &[RunRecord],
    window: Option<(f64, f64)>,
    component: usize,
) -> Result<PrandtlEstimate> {
    if !(1..=3).contains(&component) {
        return Err(Error::InvalidConfig(format!(
            "component {component} not in 1..=3"
        )));
    }
    let selected: Vec<&RunRecord> = series
        .iter()
        .filter(|r| window.is_none_or(|(t0, t1)| r.t >= t0 && r.t <= t1))
        .collect();
    if selected.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "window holds {} records, need at least 3",
            selected.len()
        )));
    }

    let mut q_points = Vec::with_capacity(selected.len());
    let mut theta_points = Vec::with_capacity(selected.len());
    let first_sign = (selected[0].theta_diag.get(component - 1) - selected[0].temperature).signum();
    for r in &selected {
        let q = r.q.norm();
        if !(q > 0.0) {
            return Err(Error::DegenerateFit(format!("|q| vanishes at t = {}", r.t)));
        }
        let gap = r.theta_diag.get(component - 1) - r.temperature;
        if gap == 0.0 || gap.signum() != first_sign {
            return Err(Error::SignChange { component, t: r.t });
        }
        q_points.push((r.t, q.ln()));
        theta_points.push((r.t, gap.abs().ln()));
    }
    let fit_q = linfit(&q_points)?;
    let fit_theta = linfit(&theta_points)?;
    if fit_theta.slope == 0.0 {
        return Err(Error::DegenerateFit("flat temperature-gap curve".into()));
    }
    let slope_q = fit_q.slope.abs();
    let slope_theta = fit_theta.slope.abs();
    Ok(PrandtlEstimate {
        pr_n: slope_q / slope_theta,
        slope_q,
        slope_theta,
        fit_q,
        fit_theta,
    })
}

/// Records sampled from the closed-form laws at constant `ν`.
pub fn synthetic_records(
    times: &[f64],
    theta0: &SymTensor3,
    q0: Vector3,
    nu: f64,
    tau: f64,
) -> Vec<RunRecord> {
    let temperature = theta0.trace() / 3.0;
    times
        .iter()
        .map(|&t| {
            let theta = analytic_theta(t, 0.0, theta0, nu, temperature, tau);
            RunRecord {
                t,
                theta_diag: theta.diag(),
                theta_offdiag: theta.off_diag(),
                temperature,
                q: analytic_heat_flux(t, q0, tau),
                nu,
                pr: transport_coefficients(tau, temperature, nu).prandtl,
                anisotropy: gaussian_surrogate_anisotropy(&theta, temperature),
            }
        })
        .collect()
}

/// Prandtl number predicted for constant `ν`; what [`extract_prandtl`]
/// should recover on exact data.
pub fn expected_prandtl(nu: f64) -> f64 {
    prandtl_number(nu)
}
