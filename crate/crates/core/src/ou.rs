//! Ornstein–Uhlenbeck particle update and post-step renormalization.
//!
//! Each particle follows `dV = −(V − u)/τ dt + √(2/τ)·A dW` with
//! `A·Aᵀ = Π`. Two discretizations are provided:
//!
//! * [`Scheme::Explicit`]: `V ← u + (1 − Δt/τ)(V − u) + √(2Δt/τ)·A·B`.
//!   First-order; the relaxation rate of `Θ` is overestimated by a factor
//!   of about `1 + Δt/τ` per unit of `2(1−ν)Δt/τ`.
//! * [`Scheme::Exponential`]: the exact transition law of the linear SDE
//!   over one step, with `Π(s)` following its own closed-form relaxation at
//!   frozen `ν`. The drift is `e^{−Δt/τ}`, the noise scale
//!   `√(1 − e^{−2Δt/τ})`, and the noise covariance uses `Π` evaluated at the
//!   effective parameter `ν' = (e^{2νΔt/τ} − 1)/(e^{2Δt/τ} − 1)`, which
//!   lies between `ν` and 0 and is therefore admissible whenever `ν` is. The
//!   first three central moments then follow their exact relaxation laws
//!   for any step size.

use crate::closure::build_pi;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::moments::{deviation_square_sum, velocity_sum, ParticleEnsemble};
use crate::noise::NoiseStream;
use crate::tensor3::{cholesky, LowerTriangular3, SymTensor3, Vector3};

/// Largest admissible `Δt/τ`.
pub const MAX_DT_OVER_TAU: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    Explicit,
    #[default]
    Exponential,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Explicit => "explicit",
            Scheme::Exponential => "exponential",
        }
    }

    /// `(drift, noise scale, effective ν for the noise covariance)`.
    pub fn coefficients(self, dt_over_tau: f64, nu: f64) -> StepCoefficients {
        let h = dt_over_tau;
        match self {
            Scheme::Explicit => StepCoefficients {
                drift: 1.0 - h,
                noise_scale: (2.0 * h).sqrt(),
                noise_nu: nu,
            },
            Scheme::Exponential => StepCoefficients {
                drift: (-h).exp(),
                noise_scale: (-(-2.0 * h).exp_m1()).sqrt(),
                noise_nu: if h > 0.0 {
                    (2.0 * nu * h).exp_m1() / (2.0 * h).exp_m1()
                } else {
                    nu
                },
            },
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "explicit" => Ok(Scheme::Explicit),
            "exponential" => Ok(Scheme::Exponential),
            other => Err(format!(
                "unknown scheme `{other}` (expected explicit|exponential)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepCoefficients {
    pub drift: f64,
    pub noise_scale: f64,
    pub noise_nu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub dt: f64,
    pub tau: f64,
    pub noise: NoiseStream,
}

impl StepParams {
    pub fn new(dt: f64, tau: f64, noise: NoiseStream) -> Result<Self> {
        let params = Self { dt, tau, noise };
        params.validate()?;
        Ok(params)
    }

    pub fn dt_over_tau(&self) -> f64 {
        self.dt / self.tau
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) || !(self.dt >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "need tau > 0 and dt >= 0, got tau = {}, dt = {}",
                self.tau, self.dt
            )));
        }
        let ratio = self.dt_over_tau();
        // admit 0.1 written as e.g. 0.3/3
        if ratio > MAX_DT_OVER_TAU * (1.0 + 1e-12) {
            return Err(Error::StabilityViolation {
                ratio,
                limit: MAX_DT_OVER_TAU,
            });
        }
        Ok(())
    }
}

/// `V ← u + drift·(V − u) + noise_scale·A·B` with `B` drawn from
/// `(seed, step, particle)`.
#[allow(clippy::too_many_arguments)]
pub fn advance(
    ens: &mut ParticleEnsemble,
    u: Vector3,
    chol: &LowerTriangular3,
    drift: f64,
    noise_scale: f64,
    noise: &NoiseStream,
    step: u64,
    exec: Execution,
) {
    let chol = *chol;
    exec.for_each_indexed(&mut ens.velocities, |i, v| {
        let b = noise.normal_triple(step, i as u64);
        *v = u + (*v - u) * drift + chol.apply(b) * noise_scale;
    });
}

/// One explicit Euler–Maruyama step with noise factor `chol`.
pub fn ou_step(
    ens: &mut ParticleEnsemble,
    u: Vector3,
    chol: &LowerTriangular3,
    params: &StepParams,
    step: u64,
    exec: Execution,
) -> Result<()> {
    params.validate()?;
    let c = Scheme::Explicit.coefficients(params.dt_over_tau(), 0.0);
    advance(
        ens,
        u,
        chol,
        c.drift,
        c.noise_scale,
        &params.noise,
        step,
        exec,
    );
    Ok(())
}

/// One exact-in-law step at frozen `ν`. Returns the factor used for the
/// noise covariance.
#[allow(clippy::too_many_arguments)]
pub fn ou_step_exponential(
    ens: &mut ParticleEnsemble,
    u: Vector3,
    theta: &SymTensor3,
    temperature: f64,
    nu: f64,
    params: &StepParams,
    step: u64,
    exec: Execution,
) -> Result<LowerTriangular3> {
    params.validate()?;
    let c = Scheme::Exponential.coefficients(params.dt_over_tau(), nu);
    let chol = cholesky(&build_pi(c.noise_nu, temperature, theta))?;
    advance(
        ens,
        u,
        &chol,
        c.drift,
        c.noise_scale,
        &params.noise,
        step,
        exec,
    );
    Ok(chol)
}

/// Affine map restoring the mean velocity and the temperature:
/// `V ← target_u + c·(V − ū)` with `c = √(3·target_T / tr Θ)`.
pub fn renormalize(
    ens: &mut ParticleEnsemble,
    target_u: Vector3,
    target_temperature: f64,
    exec: Execution,
) -> Result<()> {
    let n = ens.len();
    if n < 2 {
        return Err(Error::DegenerateEnsemble("fewer than two particles"));
    }
    let mean = velocity_sum(&ens.velocities, exec) / n as f64;
    let trace = deviation_square_sum(&ens.velocities, mean, exec) / n as f64;
    if !(trace > 0.0) {
        return Err(Error::DegenerateEnsemble("zero spread, cannot rescale"));
    }
    let c = (3.0 * target_temperature / trace).sqrt();
    exec.for_each_indexed(&mut ens.velocities, |_, v| {
        *v = target_u + (*v - mean) * c;
    });
    Ok(())
}
