//! Monte Carlo particle solver for the space-homogeneous ellipsoidal
//! statistical Fokker–Planck (ES-FP) model of a monatomic gas.
//!
//! The collision operator `(1/τ)∇ᵥ·((v−u)f + Π∇ᵥf)` is simulated with an
//! Ornstein–Uhlenbeck process per particle, where the diffusion tensor
//! `Π = (1−ν)·T·I + ν·Θ` mixes the temperature tensor `Θ` with its
//! isotropic value. Choosing `ν` per step as the most negative admissible
//! value above `−5/4` recovers the monatomic Prandtl number 2/3 near
//! equilibrium while keeping `Π` positive definite far from it.
//!
//! Per-particle work runs on rayon when the `parallel` feature is on; all
//! reductions use a fixed chunk order and the noise is counter-based, so
//! results are bit-identical for any thread count.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closure;
pub mod error;
pub mod exec;
pub mod harness;
pub mod moments;
pub mod noise;
pub mod oracles;
pub mod ou;
pub mod tensor3;

pub use closure::{
    admissible_nu_interval, build_pi, select_nu, transport_coefficients, ClosureState, NuMode,
    TransportCoefficients, NU_MONATOMIC,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use moments::{compute_moments, gaussian_surrogate_anisotropy, MomentSet, ParticleEnsemble};
pub use noise::{standard_normal_triple, NoiseStream};
pub use oracles::{
    analytic_heat_flux, analytic_theta, extract_prandtl, linfit, FitResult, PrandtlEstimate,
};
pub use ou::{ou_step, ou_step_exponential, renormalize, Scheme, StepParams, MAX_DT_OVER_TAU};
pub use tensor3::{cholesky, eigenvalues_cardan, is_spd, LowerTriangular3, SymTensor3, Vector3};
