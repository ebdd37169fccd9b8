//! Macroscopic moments of an equal-weight particle ensemble.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::tensor3::{eigenvalues_cardan, SymTensor3, Vector3};

/// `N` equal-weight velocity samples representing a spatially homogeneous
/// distribution with mass density `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleEnsemble {
    pub velocities: Vec<Vector3>,
    pub rho: f64,
    /// Numerical weight shared by every particle. Moments only depend on
    /// `rho`; the weight is carried for bookkeeping.
    pub weight: f64,
}

impl ParticleEnsemble {
    pub fn new(velocities: Vec<Vector3>, rho: f64) -> Self {
        Self {
            velocities,
            rho,
            weight: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.velocities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.velocities.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub rho: f64,
    pub u: Vector3,
    /// Total energy density `½ρ|u|² + (3/2)ρT`.
    pub energy: f64,
    pub temperature: f64,
    pub pressure: f64,
    pub theta: SymTensor3,
    pub heat_flux: Vector3,
}

#[derive(Clone, Copy, Default)]
struct Central {
    second: SymTensor3,
    third: Vector3,
}

/// Sum of velocities, chunk-ordered.
pub(crate) fn velocity_sum(v: &[Vector3], exec: Execution) -> Vector3 {
    exec.reduce_chunks(
        v,
        |chunk| chunk.iter().fold(Vector3::ZERO, |a, &b| a + b),
        Vector3::ZERO,
        |a, b| a + b,
    )
}

/// Sum of squared deviations `|v − u|²`.
pub(crate) fn deviation_square_sum(v: &[Vector3], u: Vector3, exec: Execution) -> f64 {
    exec.reduce_chunks(
        v,
        |chunk| chunk.iter().map(|&w| (w - u).norm_squared()).sum::<f64>(),
        0.0,
        |a, b| a + b,
    )
}

/// Two passes: the mean, then the second and third central moments fused
/// into one sweep over the centred velocities.
pub fn compute_moments(ens: &ParticleEnsemble, exec: Execution) -> Result<MomentSet> {
    let n = ens.len();
    if n < 2 {
        return Err(Error::DegenerateEnsemble("fewer than two particles"));
    }
    let inv_n = 1.0 / n as f64;
    let u = velocity_sum(&ens.velocities, exec) * inv_n;

    let sums = exec.reduce_chunks(
        &ens.velocities,
        |chunk| {
            let mut acc = Central::default();
            for &v in chunk {
                let d = v - u;
                acc.second += d.outer_self();
                acc.third += d * d.norm_squared();
            }
            acc
        },
        Central::default(),
        |a, b| Central {
            second: a.second + b.second,
            third: a.third + b.third,
        },
    );

    let theta = sums.second * inv_n;
    let trace = theta.trace();
    if !(trace > 0.0) {
        return Err(Error::DegenerateEnsemble("all velocities coincide"));
    }
    let rho = ens.rho;
    let temperature = trace / 3.0;
    Ok(MomentSet {
        rho,
        u,
        energy: 0.5 * rho * u.norm_squared() + 1.5 * rho * temperature,
        temperature,
        pressure: rho * temperature,
        theta,
        heat_flux: sums.third * (0.5 * rho * inv_n),
    })
}

/// Largest distance between an eigenvalue of `theta` and `temperature`.
///
/// Zero exactly at isotropy; it shrinks monotonically along the relaxation
/// of `theta` towards `temperature·I`, so it serves as a cheap stand-in for
/// the entropy dissipation of the Gaussian with covariance `theta`.
pub fn gaussian_surrogate_anisotropy(theta: &SymTensor3, temperature: f64) -> f64 {
    let [lo, _, hi] = eigenvalues_cardan(theta);
    (hi - temperature).abs().max((lo - temperature).abs())
}
