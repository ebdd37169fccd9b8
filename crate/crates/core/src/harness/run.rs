//! The time loop.
//!
//! Each step: moments of the ensemble, Cardan eigenvalues of `Θ`, `ν`, `Π`
//! and its Cholesky factor, one particle update, then (optionally) the
//! renormalization back to the initial mean velocity and temperature.

use crate::closure::{transport_coefficients, ClosureState};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::harness::config::SimConfig;
use crate::harness::record::RunRecord;
use crate::moments::{compute_moments, gaussian_surrogate_anisotropy, MomentSet, ParticleEnsemble};
use crate::noise::NoiseStream;
use crate::ou::{ou_step, ou_step_exponential, renormalize, Scheme, StepParams};
use crate::tensor3::Vector3;

/// State of the ensemble at one instant, with the closure that the next
/// update will use.
#[derive(Debug, Clone, Copy)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub moments: MomentSet,
    pub closure: ClosureState,
    pub record: RunRecord,
}

#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    ensemble: ParticleEnsemble,
    params: StepParams,
    exec: Execution,
    step: usize,
    target_u: Vector3,
    target_temperature: f64,
}

impl Simulation {
    /// Sample the preset's initial ensemble.
    pub fn new(config: &SimConfig, exec: Execution) -> Result<Self> {
        config.validate()?;
        let stream = NoiseStream::new(config.seed);
        let ensemble = config.preset.sample(config.particles, &stream, exec)?;
        Self::from_ensemble(config, ensemble, exec)
    }

    /// Start from a caller-supplied ensemble; `config.preset` and
    /// `config.particles` are ignored.
    pub fn from_ensemble(
        config: &SimConfig,
        ensemble: ParticleEnsemble,
        exec: Execution,
    ) -> Result<Self> {
        config.validate()?;
        let params = StepParams::new(config.dt(), config.tau, NoiseStream::new(config.seed))?;
        let initial = compute_moments(&ensemble, exec).map_err(|e| e.at_step(0))?;
        Ok(Self {
            config: config.clone(),
            ensemble,
            params,
            exec,
            step: 0,
            target_u: initial.u,
            target_temperature: initial.temperature,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn ensemble(&self) -> &ParticleEnsemble {
        &self.ensemble
    }

    pub fn into_ensemble(self) -> ParticleEnsemble {
        self.ensemble
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.config.dt()
    }

    /// Renormalization targets: the moments of the initial ensemble.
    pub fn targets(&self) -> (Vector3, f64) {
        (self.target_u, self.target_temperature)
    }

    pub fn snapshot(&self) -> Result<Snapshot> {
        let step = self.step;
        let wrap = |e: Error| e.at_step(step);
        let moments = compute_moments(&self.ensemble, self.exec).map_err(wrap)?;
        let closure = ClosureState::new(&moments.theta, moments.temperature, self.config.nu_mode)
            .map_err(wrap)?;
        let t = self.time();
        let record = RunRecord {
            t,
            theta_diag: moments.theta.diag(),
            theta_offdiag: moments.theta.off_diag(),
            temperature: moments.temperature,
            q: moments.heat_flux,
            nu: closure.nu,
            pr: transport_coefficients(self.config.tau, moments.pressure, closure.nu).prandtl,
            anisotropy: gaussian_surrogate_anisotropy(&moments.theta, moments.temperature),
        };
        Ok(Snapshot {
            step,
            t,
            moments,
            closure,
            record,
        })
    }

    /// Advance one step using the closure of `snap`, which must be the
    /// snapshot of the current state.
    pub fn advance(&mut self, snap: &Snapshot) -> Result<()> {
        debug_assert_eq!(snap.step, self.step);
        let step = self.step;
        let wrap = |e: Error| e.at_step(step);
        let u = snap.moments.u;
        match self.config.scheme {
            Scheme::Explicit => {
                ou_step(
                    &mut self.ensemble,
                    u,
                    &snap.closure.chol,
                    &self.params,
                    step as u64,
                    self.exec,
                )
                .map_err(wrap)?;
            }
            Scheme::Exponential => {
                ou_step_exponential(
                    &mut self.ensemble,
                    u,
                    &snap.moments.theta,
                    snap.moments.temperature,
                    snap.closure.nu,
                    &self.params,
                    step as u64,
                    self.exec,
                )
                .map_err(wrap)?;
            }
        }
        if self.config.renormalize {
            renormalize(
                &mut self.ensemble,
                self.target_u,
                self.target_temperature,
                self.exec,
            )
            .map_err(wrap)?;
        }
        self.step += 1;
        Ok(())
    }

    /// Run to `t_final`, handing every snapshot to `observe` (recorded or
    /// not) and collecting the records selected by `record_every`. The final
    /// state is always recorded.
    pub fn run_observed<F>(&mut self, mut observe: F) -> Result<Vec<RunRecord>>
    where
        F: FnMut(&Snapshot, &ParticleEnsemble),
    {
        let steps = self.config.steps();
        let mut records = Vec::with_capacity(steps / self.config.record_every + 2);
        loop {
            let snap = self.snapshot()?;
            observe(&snap, &self.ensemble);
            if self.step.is_multiple_of(self.config.record_every) || self.step == steps {
                records.push(snap.record);
            }
            if self.step >= steps {
                return Ok(records);
            }
            self.advance(&snap)?;
        }
    }
}

/// Records and final state of a finished run.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<RunRecord>,
    pub final_ensemble: ParticleEnsemble,
}

pub fn run(config: &SimConfig) -> Result<Vec<RunRecord>> {
    run_with(config, Execution::default()).map(|o| o.records)
}

pub fn run_with(config: &SimConfig, exec: Execution) -> Result<RunOutput> {
    let mut sim = Simulation::new(config, exec)?;
    let records = sim.run_observed(|_, _| {})?;
    Ok(RunOutput {
        records,
        final_ensemble: sim.into_ensemble(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::NuMode;
    use crate::harness::config::Preset;
    use crate::tensor3::SymTensor3;

    fn small(preset: Preset) -> SimConfig {
        let mut cfg = SimConfig::for_preset(preset);
        cfg.particles = 4000;
        cfg
    }

    #[test]
    fn record_count_and_times() {
        let cfg = small(Preset::Case1);
        let recs = run_with(&cfg, Execution::Sequential).unwrap().records;
        assert_eq!(recs.len(), 11);
        for (i, r) in recs.iter().enumerate() {
            assert_eq!(r.t, i as f64 * 0.1);
        }

        let mut cfg = small(Preset::Case1);
        cfg.record_every = 3;
        let times: Vec<f64> = run_with(&cfg, Execution::Sequential)
            .unwrap()
            .records
            .iter()
            .map(|r| (r.t * 10.0).round())
            .collect();
        assert_eq!(times, [0.0, 3.0, 6.0, 9.0, 10.0]);
    }

    #[test]
    fn renormalized_run_keeps_temperature() {
        for scheme in [Scheme::Explicit, Scheme::Exponential] {
            let mut cfg = small(Preset::Case2);
            cfg.scheme = scheme;
            let recs = run(&cfg).unwrap();
            let t0 = recs[0].temperature;
            for r in &recs {
                assert!(((r.temperature - t0) / t0).abs() < 1e-12);
                let tr = r.theta_diag.x + r.theta_diag.y + r.theta_diag.z;
                assert!((tr / 3.0 - r.temperature).abs() <= 1e-12 * r.temperature);
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let cfg = small(Preset::Case2);
        let a = run_with(&cfg, Execution::Sequential).unwrap();
        let b = run_with(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.final_ensemble, b.final_ensemble);
    }

    #[test]
    fn bad_fixed_nu_reports_step() {
        let mut cfg = small(Preset::Custom {
            u: Vector3::ZERO,
            theta: SymTensor3::diagonal(2.5, 0.25, 0.25),
        });
        // ν = −0.9 with λ_max ≈ 2.5T leaves Π indefinite
        cfg.nu_mode = NuMode::Fixed(-0.9);
        let err = run(&cfg).unwrap_err();
        assert!(matches!(err, Error::Step { step: 0, .. }), "{err}");
        assert!(err.to_string().starts_with("step 0:"));
    }
}
