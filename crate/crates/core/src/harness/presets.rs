//! Initial particle ensembles.

use crate::error::Result;
use crate::exec::Execution;
use crate::harness::config::Preset;
use crate::moments::ParticleEnsemble;
use crate::noise::NoiseStream;
use crate::tensor3::{cholesky, SymTensor3, Vector3};

fn quartic_then_uniform(
    n: usize,
    stream: &NoiseStream,
    scale: f64,
    exec: Execution,
) -> ParticleEnsemble {
    // E[s⁴] = 1/5, so subtracting scale/5 centres the first component.
    let shift = scale / 5.0;
    let velocities = exec.generate(n, |i| {
        let [s, a, b] = stream.initial_uniforms(i as u64);
        Vector3::new(
            scale * s.powi(4) - shift,
            100.0 * a - 50.0,
            100.0 * b - 50.0,
        )
    });
    ParticleEnsemble::new(velocities, 1.0)
}

/// `v₁ = 100·s⁴ − 20` with `s ~ U[0, 1]`, `v₂, v₃ ~ U[−50, 50]`, `ρ = 1`.
pub fn sample_case1(n: usize, stream: &NoiseStream, exec: Execution) -> ParticleEnsemble {
    quartic_then_uniform(n, stream, 100.0, exec)
}

/// `v₁ = 10⁴·s⁴ − 2000`, otherwise as [`sample_case1`].
pub fn sample_case2(n: usize, stream: &NoiseStream, exec: Execution) -> ParticleEnsemble {
    quartic_then_uniform(n, stream, 10_000.0, exec)
}

/// Gaussian with mean `u` and covariance `theta`, `ρ = 1`.
pub fn sample_gaussian(
    n: usize,
    stream: &NoiseStream,
    u: Vector3,
    theta: &SymTensor3,
    exec: Execution,
) -> Result<ParticleEnsemble> {
    let factor = cholesky(theta)?;
    let velocities = exec.generate(n, |i| u + factor.apply(stream.initial_normals(i as u64)));
    Ok(ParticleEnsemble::new(velocities, 1.0))
}

impl Preset {
    pub fn sample(
        &self,
        n: usize,
        stream: &NoiseStream,
        exec: Execution,
    ) -> Result<ParticleEnsemble> {
        match self {
            Preset::Case1 => Ok(sample_case1(n, stream, exec)),
            Preset::Case2 => Ok(sample_case2(n, stream, exec)),
            Preset::Custom { u, theta } => sample_gaussian(n, stream, *u, theta, exec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let e = sample_case1(5000, &NoiseStream::new(3), Execution::Sequential);
        assert_eq!(e.len(), 5000);
        assert_eq!(e.rho, 1.0);
        for v in &e.velocities {
            assert!((-20.0..80.0).contains(&v.x));
            assert!((-50.0..50.0).contains(&v.y) && (-50.0..50.0).contains(&v.z));
        }
        let e = sample_case2(5000, &NoiseStream::new(3), Execution::Sequential);
        assert!(e
            .velocities
            .iter()
            .all(|v| (-2000.0..8000.0).contains(&v.x)));
    }

    #[test]
    fn parallel_sampling_matches_sequential() {
        let s = NoiseStream::new(11);
        assert_eq!(
            sample_case2(20_000, &s, Execution::Sequential),
            sample_case2(20_000, &s, Execution::Parallel)
        );
    }
}
