//! Run configuration in a plain `key = value` format.
//!
//! ```text
//! # case 2 with a custom seed
//! preset = case2
//! seed = 7
//! nu_mode = variable
//! ```
//!
//! Blank lines and `#` comments are ignored. Unknown or repeated keys are
//! errors. Keys left out take the defaults of the chosen preset.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::closure::NuMode;
use crate::error::{Error, Result};
use crate::ou::{Scheme, MAX_DT_OVER_TAU};
use crate::tensor3::{is_spd, SymTensor3, Vector3};

const KEYS: &[&str] = &[
    "particles",
    "tau",
    "dt_over_tau",
    "t_final",
    "seed",
    "preset",
    "nu_mode",
    "renormalize",
    "output_path",
    "record_every",
    "fit_window",
    "tracked_component",
    "scheme",
    "custom_u",
    "custom_theta",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// First component `100·s⁴ − 20`, others `U[−50, 50]`.
    Case1,
    /// First component `10⁴·s⁴ − 2000`, others `U[−50, 50]`.
    Case2,
    /// Gaussian with mean `u` and covariance `theta`.
    Custom { u: Vector3, theta: SymTensor3 },
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Case1 => "case1",
            Preset::Case2 => "case2",
            Preset::Custom { .. } => "custom",
        }
    }

    pub fn default_particles(&self) -> usize {
        match self {
            Preset::Case1 => 1_000_000,
            Preset::Case2 | Preset::Custom { .. } => 100_000,
        }
    }

    pub fn default_t_final(&self) -> f64 {
        match self {
            Preset::Case2 => 0.5,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub particles: usize,
    pub tau: f64,
    pub dt_over_tau: f64,
    pub t_final: f64,
    pub seed: u64,
    pub preset: Preset,
    pub nu_mode: NuMode,
    pub renormalize: bool,
    pub output_path: PathBuf,
    pub record_every: usize,
    pub fit_window: Option<(f64, f64)>,
    /// One-based index of the diagonal entry of `Θ` used for fitting.
    pub tracked_component: usize,
    pub scheme: Scheme,
}

impl SimConfig {
    pub fn for_preset(preset: Preset) -> Self {
        Self {
            particles: preset.default_particles(),
            tau: 1.0,
            dt_over_tau: MAX_DT_OVER_TAU,
            t_final: preset.default_t_final(),
            seed: 1,
            preset,
            nu_mode: NuMode::Variable,
            renormalize: true,
            output_path: PathBuf::from("esfp_run.csv"),
            record_every: 1,
            fit_window: None,
            tracked_component: 1,
            scheme: Scheme::default(),
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt_over_tau * self.tau
    }

    /// `⌈t_final / dt⌉`, ignoring rounding noise in the quotient.
    pub fn steps(&self) -> usize {
        let q = self.t_final / self.dt();
        let nearest = q.round();
        if (q - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest as usize
        } else {
            q.ceil() as usize
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidConfig(m));
        if self.particles < 2 {
            return fail(format!("particles = {} (need at least 2)", self.particles));
        }
        if !(self.tau > 0.0) {
            return fail(format!("tau = {} must be positive", self.tau));
        }
        if !(self.dt_over_tau > 0.0) {
            return fail(format!(
                "dt_over_tau = {} must be positive",
                self.dt_over_tau
            ));
        }
        if self.dt_over_tau > MAX_DT_OVER_TAU * (1.0 + 1e-12) {
            return Err(Error::StabilityViolation {
                ratio: self.dt_over_tau,
                limit: MAX_DT_OVER_TAU,
            });
        }
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return fail(format!("t_final = {} must be positive", self.t_final));
        }
        if self.record_every == 0 {
            return fail("record_every must be at least 1".into());
        }
        if !(1..=3).contains(&self.tracked_component) {
            return fail(format!(
                "tracked_component = {} not in 1..=3",
                self.tracked_component
            ));
        }
        if let Some((t0, t1)) = self.fit_window {
            if !(t0 < t1) {
                return fail(format!("fit_window {t0}:{t1} is empty"));
            }
        }
        if let NuMode::Fixed(nu) = self.nu_mode {
            if !(nu < 1.0) {
                return fail(format!("fixed nu = {nu} must be below 1"));
            }
        }
        if let Preset::Custom { theta, .. } = &self.preset {
            if !is_spd(theta) {
                return fail("custom_theta is not positive definite".into());
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("unknown key `{key}`"),
                });
            }
            if entries.insert(key, (line_no, value)).is_some() {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }

        let get = |key: &str| entries.get(key).copied();
        let custom_u = get("custom_u")
            .map(|(l, v)| parse_vector(l, v))
            .transpose()?;
        let custom_theta = get("custom_theta")
            .map(|(l, v)| parse_tensor(l, v))
            .transpose()?;
        let preset = match get("preset") {
            None | Some((_, "case1")) => Preset::Case1,
            Some((_, "case2")) => Preset::Case2,
            Some((l, "custom")) => Preset::Custom {
                u: custom_u.unwrap_or(Vector3::ZERO),
                theta: custom_theta.ok_or_else(|| Error::Config {
                    line: l,
                    message: "preset = custom requires custom_theta".into(),
                })?,
            },
            Some((l, other)) => {
                return Err(Error::Config {
                    line: l,
                    message: format!("unknown preset `{other}` (expected case1|case2|custom)"),
                })
            }
        };
        if !matches!(preset, Preset::Custom { .. }) {
            if let Some((l, _)) = get("custom_u").or(get("custom_theta")) {
                return Err(Error::Config {
                    line: l,
                    message: "custom_u/custom_theta only apply to preset = custom".into(),
                });
            }
        }

        let mut cfg = SimConfig::for_preset(preset);
        for (&key, &(line, value)) in &entries {
            let err = |message: String| Error::Config { line, message };
            match key {
                "particles" => cfg.particles = parse_num(line, key, value)?,
                "tau" => cfg.tau = parse_num(line, key, value)?,
                "dt_over_tau" => cfg.dt_over_tau = parse_num(line, key, value)?,
                "t_final" => cfg.t_final = parse_num(line, key, value)?,
                "seed" => cfg.seed = parse_num(line, key, value)?,
                "nu_mode" => cfg.nu_mode = parse_nu_mode(value).map_err(err)?,
                "renormalize" => cfg.renormalize = parse_num(line, key, value)?,
                "output_path" => cfg.output_path = PathBuf::from(value),
                "record_every" => cfg.record_every = parse_num(line, key, value)?,
                "fit_window" => cfg.fit_window = Some(parse_window(value).map_err(err)?),
                "tracked_component" => cfg.tracked_component = parse_num(line, key, value)?,
                "scheme" => cfg.scheme = value.parse().map_err(err)?,
                _ => {}
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for SimConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "preset = {}", self.preset.name())?;
        if let Preset::Custom { u, theta } = &self.preset {
            writeln!(f, "custom_u = {:?},{:?},{:?}", u.x, u.y, u.z)?;
            writeln!(
                f,
                "custom_theta = {:?},{:?},{:?},{:?},{:?},{:?}",
                theta.xx, theta.yy, theta.zz, theta.xy, theta.xz, theta.yz
            )?;
        }
        writeln!(f, "particles = {}", self.particles)?;
        writeln!(f, "tau = {:?}", self.tau)?;
        writeln!(f, "dt_over_tau = {:?}", self.dt_over_tau)?;
        writeln!(f, "t_final = {:?}", self.t_final)?;
        writeln!(f, "seed = {}", self.seed)?;
        match self.nu_mode {
            NuMode::Variable => writeln!(f, "nu_mode = variable")?,
            NuMode::Fixed(nu) => writeln!(f, "nu_mode = fixed({nu:?})")?,
        }
        writeln!(f, "renormalize = {}", self.renormalize)?;
        writeln!(f, "scheme = {}", self.scheme.name())?;
        writeln!(f, "output_path = {}", self.output_path.display())?;
        writeln!(f, "record_every = {}", self.record_every)?;
        if let Some((t0, t1)) = self.fit_window {
            writeln!(f, "fit_window = {t0:?}:{t1:?}")?;
        }
        writeln!(f, "tracked_component = {}", self.tracked_component)
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| Error::Config {
        line,
        message: format!("{key}: cannot parse `{value}`: {e}"),
    })
}

fn parse_list(line: usize, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|v| parse_num(line, "value", v.trim()))
        .collect()
}

fn parse_vector(line: usize, value: &str) -> Result<Vector3> {
    match parse_list(line, value)?.as_slice() {
        &[x, y, z] => Ok(Vector3::new(x, y, z)),
        other => Err(Error::Config {
            line,
            message: format!("expected 3 components, got {}", other.len()),
        }),
    }
}

/// Three diagonal entries, or all six as `xx,yy,zz,xy,xz,yz`.
fn parse_tensor(line: usize, value: &str) -> Result<SymTensor3> {
    match parse_list(line, value)?.as_slice() {
        &[xx, yy, zz] => Ok(SymTensor3::diagonal(xx, yy, zz)),
        &[xx, yy, zz, xy, xz, yz] => Ok(SymTensor3::new(xx, yy, zz, xy, xz, yz)),
        other => Err(Error::Config {
            line,
            message: format!("expected 3 or 6 components, got {}", other.len()),
        }),
    }
}

/// `variable` or `fixed(<nu>)`.
pub fn parse_nu_mode(value: &str) -> std::result::Result<NuMode, String> {
    if value == "variable" {
        return Ok(NuMode::Variable);
    }
    let inner = value
        .strip_prefix("fixed(")
        .and_then(|v| v.strip_suffix(')'))
        .ok_or_else(|| format!("nu_mode `{value}`: expected variable or fixed(<value>)"))?;
    inner
        .trim()
        .parse()
        .map(NuMode::Fixed)
        .map_err(|e| format!("nu_mode `{value}`: {e}"))
}

/// `t0:t1`.
pub fn parse_window(value: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = value
        .split_once(':')
        .ok_or_else(|| format!("window `{value}`: expected t0:t1"))?;
    let t0: f64 = a
        .trim()
        .parse()
        .map_err(|e| format!("window start `{a}`: {e}"))?;
    let t1: f64 = b
        .trim()
        .parse()
        .map_err(|e| format!("window end `{b}`: {e}"))?;
    if !(t0 < t1) {
        return Err(format!("window `{value}` is empty"));
    }
    Ok((t0, t1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_case1_defaults() {
        let cfg = SimConfig::parse("# nothing\n\n").unwrap();
        assert_eq!(cfg, SimConfig::for_preset(Preset::Case1));
        assert_eq!(cfg.particles, 1_000_000);
        assert_eq!(cfg.steps(), 10);
    }

    #[test]
    fn case2_defaults_and_overrides() {
        let cfg = SimConfig::parse(
            "preset = case2   # second test\nseed = 99\nnu_mode = fixed(-0.5)\nfit_window = 0.2:0.5\nscheme = explicit\nrenormalize = false\n",
        )
        .unwrap();
        assert_eq!(cfg.preset, Preset::Case2);
        assert_eq!(cfg.particles, 100_000);
        assert_eq!(cfg.t_final, 0.5);
        assert_eq!(cfg.steps(), 5);
        assert_eq!(cfg.seed, 99);
        assert_eq!(cfg.nu_mode, NuMode::Fixed(-0.5));
        assert_eq!(cfg.fit_window, Some((0.2, 0.5)));
        assert_eq!(cfg.scheme, Scheme::Explicit);
        assert!(!cfg.renormalize);
    }

    #[test]
    fn custom_preset() {
        let cfg =
            SimConfig::parse("preset = custom\ncustom_theta = 2, 0.5, 0.5\ncustom_u = 1,0,0\n")
                .unwrap();
        assert_eq!(
            cfg.preset,
            Preset::Custom {
                u: Vector3::new(1.0, 0.0, 0.0),
                theta: SymTensor3::diagonal(2.0, 0.5, 0.5)
            }
        );
        assert!(SimConfig::parse("preset = custom\n").is_err());
        assert!(SimConfig::parse("preset = custom\ncustom_theta = 1,1,-1\n").is_err());
        assert!(SimConfig::parse("custom_theta = 1,1,1\n").is_err());
    }

    #[test]
    fn rejects_bad_input() {
        for (text, needle) in [
            ("colour = red", "unknown key"),
            ("seed = 1\nseed = 2", "duplicate"),
            ("seed", "key = value"),
            ("particles = many", "particles"),
            ("particles = 1", "at least 2"),
            ("dt_over_tau = 0.2", "stability"),
            ("nu_mode = fixed(1.5)", "below 1"),
            ("nu_mode = sometimes", "nu_mode"),
            ("fit_window = 0.5:0.1", "empty"),
            ("tracked_component = 4", "tracked_component"),
            ("preset = case3", "unknown preset"),
            ("scheme = rk4", "unknown scheme"),
        ] {
            let err = SimConfig::parse(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?} -> {err}");
        }
    }

    #[test]
    fn display_round_trips() {
        let mut cfg = SimConfig::for_preset(Preset::Custom {
            u: Vector3::new(0.1, 0.2, 0.3),
            theta: SymTensor3::new(2.0, 1.0, 0.5, 0.1, 0.0, -0.2),
        });
        cfg.nu_mode = NuMode::Fixed(-1.25);
        cfg.fit_window = Some((0.25, 1.0));
        cfg.scheme = Scheme::Explicit;
        assert_eq!(SimConfig::parse(&cfg.to_string()).unwrap(), cfg);
    }

    #[test]
    fn step_count_rounding() {
        let mut cfg = SimConfig::for_preset(Preset::Case1);
        cfg.dt_over_tau = 0.01;
        assert_eq!(cfg.steps(), 100);
        cfg.t_final = 10.0;
        cfg.dt_over_tau = 0.1;
        assert_eq!(cfg.steps(), 100);
        cfg.t_final = 0.95;
        assert_eq!(cfg.steps(), 10);
    }
}
