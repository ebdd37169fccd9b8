//! The ES-FP diffusion tensor `Π = (1−ν)·T·I + ν·Θ` and the choice of `ν`.
//!
//! All quantities are non-dimensional with gas constant `R = 1`.

use crate::error::{Error, Result};
use crate::tensor3::{cholesky, eigenvalues_cardan, LowerTriangular3, SymTensor3};

/// The value of `ν` that yields the monatomic Prandtl number 2/3.
pub const NU_MONATOMIC: f64 = -1.25;

/// Relative pull towards zero applied when `ν` sits on the open lower bound
/// of the admissible interval.
pub const NU_SAFETY: f64 = 1e-9;

/// Relative slack on the `λ_max ≤ 3T` check.
const SPECTRUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NuMode {
    /// `ν = max(−5/4, −T/(λ_max − T))`, re-evaluated every step.
    Variable,
    /// Constant `ν < 1`.
    Fixed(f64),
}

impl NuMode {
    pub fn nu(self, temperature: f64, lambda_max: f64) -> f64 {
        match self {
            NuMode::Variable => select_nu(temperature, lambda_max),
            NuMode::Fixed(nu) => nu,
        }
    }
}

/// Everything the particle update needs for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureState {
    pub nu: f64,
    pub pi: SymTensor3,
    pub chol: LowerTriangular3,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub temperature: f64,
}

impl ClosureState {
    /// Eigenvalues of `theta`, then `ν`, then `Π` and its Cholesky factor.
    pub fn new(theta: &SymTensor3, temperature: f64, mode: NuMode) -> Result<Self> {
        let [lambda_min, _, lambda_max] = eigenvalues_cardan(theta);
        let nu = mode.nu(temperature, lambda_max);
        if !(nu < 1.0) {
            return Err(Error::InvalidConfig(format!("nu = {nu} must be below 1")));
        }
        let pi = build_pi(nu, temperature, theta);
        let chol = cholesky(&pi)?;
        Ok(Self {
            nu,
            pi,
            chol,
            lambda_min,
            lambda_max,
            temperature,
        })
    }
}

/// Open interval of `ν` for which `Π` is positive definite, capped at 1.
///
/// Bounds that do not exist are returned as infinities.
pub fn admissible_nu_interval(
    temperature: f64,
    lambda_min: f64,
    lambda_max: f64,
) -> Result<(f64, f64)> {
    if !(lambda_min > 0.0) {
        return Err(Error::InvalidSpectrum(format!(
            "smallest eigenvalue {lambda_min:e} is not positive"
        )));
    }
    if lambda_max > 3.0 * temperature * (1.0 + SPECTRUM_TOL) {
        return Err(Error::InvalidSpectrum(format!(
            "largest eigenvalue {lambda_max:e} exceeds the trace 3T = {:e}",
            3.0 * temperature
        )));
    }
    let lo = if lambda_max > temperature {
        -temperature / (lambda_max - temperature)
    } else {
        f64::NEG_INFINITY
    };
    let hi = if lambda_min < temperature {
        temperature / (temperature - lambda_min)
    } else {
        f64::INFINITY
    };
    Ok((lo, hi.min(1.0)))
}

/// The smallest `ν ≥ −5/4` keeping `Π` strictly positive definite.
///
/// When the floor is not reachable the lower bound `−T/(λ_max − T)` is
/// returned, pulled towards zero by [`NU_SAFETY`] so that `Π` stays
/// invertible. For `λ_max ≤ T` the lower bound does not exist and the floor
/// is returned.
pub fn select_nu(temperature: f64, lambda_max: f64) -> f64 {
    if lambda_max <= temperature {
        return NU_MONATOMIC;
    }
    let bound = -temperature / (lambda_max - temperature);
    if bound >= NU_MONATOMIC {
        bound * (1.0 - NU_SAFETY)
    } else {
        NU_MONATOMIC
    }
}

/// `Π = (1−ν)·T·I + ν·Θ`.
pub fn build_pi(nu: f64, temperature: f64, theta: &SymTensor3) -> SymTensor3 {
    SymTensor3::isotropic((1.0 - nu) * temperature).lerp_with(1.0, theta, nu)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportCoefficients {
    pub viscosity: f64,
    pub conductivity: f64,
    pub prandtl: f64,
}

/// Navier–Stokes limit of the model: `μ = τp/(2(1−ν))`, `κ = (5/6)τp` and
/// `Pr = 3/(2(1−ν))`.
pub fn transport_coefficients(tau: f64, pressure: f64, nu: f64) -> TransportCoefficients {
    TransportCoefficients {
        viscosity: tau * pressure / (2.0 * (1.0 - nu)),
        conductivity: 5.0 / 6.0 * tau * pressure,
        prandtl: prandtl_number(nu),
    }
}

pub fn prandtl_number(nu: f64) -> f64 {
    3.0 / (2.0 * (1.0 - nu))
}
