//! Run-configuration files: a flat `key = value` text format.
//!
//! A configuration names one medium and the particle it surrounds, in SI
//! units throughout (kg, m, s, Pa, J), plus optional simulation keys for
//! trajectory runs. Setting `normalized = true` switches to the
//! dimensionless description, where a medium is identified only by its
//! shape parameters (`omegaRtau`, `xi`, `alpha`, `gamma`); in that mode
//! every dimensional key is rejected, so a file cannot half-specify a
//! physical system.
//!
//! Grammar: one `key = value` pair per line, `#` starts a comment, blank
//! lines are ignored, keys may not repeat. Unknown keys are errors, not
//! warnings, because a misspelled key would otherwise silently fall back
//! to a default.
//!
//! Keys by medium (dimensional mode):
//!
//! | medium        | required                                   |
//! |---------------|--------------------------------------------|
//! | viscous       | kT radius mass eta                         |
//! | trap          | kT radius mass eta g                       |
//! | maxwell       | kT radius mass eta g                       |
//! | jeffreys      | kT radius mass eta g eta_inf               |
//! | subdiffusive  | kT radius mass mu_alpha alpha              |
//! | hydrodynamic  | kT radius eta rho_p rho_f (mass derived)   |
//!
//! `n_dim` (independent one-dimensional degrees of freedom sharing the
//! record, default 1) is optional everywhere. Simulation keys `dt`,
//! `n_steps`, `n_traj`, `seed` come as a block, all present or all
//! absent; `burn_in`, `override_stability`, and `max_history` refine it.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::rheology::{PhysicalContext, RheoError};
use crate::spectra::{Medium, MediumSpec, NormalizedMedium, SpectraError};

/// Violations of the configuration grammar or of a parameter domain.
#[derive(Debug, Error)]
pub enum ConfigError {
    /// A line is neither blank, comment, nor `key = value`.
    #[error("config line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    /// The key is not part of the grammar.
    #[error("config key `{0}` is not recognized")]
    UnknownKey(String),
    /// The same key appears twice.
    #[error("config key `{0}` appears more than once")]
    DuplicateKey(String),
    /// The value does not parse as the key's type.
    #[error("config key `{key}` has unparsable value `{value}`")]
    BadValue { key: String, value: String },
    /// A key required by the chosen medium or mode is absent.
    #[error("config is missing required key `{0}`")]
    MissingKey(&'static str),
    /// The key is meaningless for the chosen medium or mode.
    #[error("config key `{key}` does not apply to medium `{medium}`")]
    ForeignKey { key: String, medium: String },
    /// A dimensional key inside a `normalized = true` file.
    #[error("normalized = true forbids dimensional key `{0}`")]
    NormalizedConflict(String),
    /// The medium tag is not one of the six supported media.
    #[error(
        "unknown medium `{0}` (expected viscous, trap, maxwell, jeffreys, \
         subdiffusive, or hydrodynamic)"
    )]
    UnknownMedium(String),
    /// The medium parameters violate a physical domain bound.
    #[error(transparent)]
    Domain(#[from] SpectraError),
    /// The particle parameters violate a physical domain bound.
    #[error(transparent)]
    Particle(#[from] RheoError),
}

/// The simulation block of a configuration, if present.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimKeys {
    /// Time step (s).
    pub dt: f64,
    /// Recorded samples per trajectory.
    pub n_steps: usize,
    /// Trajectories in the ensemble.
    pub n_traj: usize,
    /// Base RNG seed.
    pub seed: u64,
    /// Burn-in steps before recording; None takes the stationary default.
    pub burn_in: Option<usize>,
    /// Run even when the stability products are in the warning band.
    pub override_stability: bool,
    /// Truncate convolution memory to this many steps.
    pub max_history: Option<usize>,
}

/// A parsed configuration: either a full physical system or a pure shape.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedConfig {
    Dimensional {
        spec: MediumSpec,
        sim: Option<SimKeys>,
    },
    Normalized {
        shape: NormalizedMedium,
    },
}

/// Stable lower-case tag of a normalized medium, matching
/// [`Medium::name`] on the dimensional side.
pub fn normalized_name(shape: &NormalizedMedium) -> &'static str {
    match shape {
        NormalizedMedium::Viscous => "viscous",
        NormalizedMedium::HarmonicTrap { .. } => "trap",
        NormalizedMedium::Maxwell { .. } => "maxwell",
        NormalizedMedium::Jeffreys { .. } => "jeffreys",
        NormalizedMedium::Subdiffusive { .. } => "subdiffusive",
        NormalizedMedium::Hydrodynamic { .. } => "hydrodynamic",
    }
}

const DIMENSIONAL_KEYS: &[&str] = &[
    "kT",
    "n_dim",
    "radius",
    "mass",
    "eta",
    "g",
    "eta_inf",
    "mu_alpha",
    "rho_p",
    "rho_f",
    "dt",
    "n_steps",
    "n_traj",
    "seed",
    "burn_in",
    "override_stability",
    "max_history",
];

const SHAPE_KEYS: &[&str] = &["omegaRtau", "xi", "alpha", "gamma"];

const MEDIUM_NAMES: &[&str] = &[
    "viscous",
    "trap",
    "maxwell",
    "jeffreys",
    "subdiffusive",
    "hydrodynamic",
];

struct KeyMap {
    entries: BTreeMap<String, String>,
}

impl KeyMap {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(cut) => &raw[..cut],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Malformed {
                line: idx + 1,
                text: raw.trim().to_string(),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Malformed {
                    line: idx + 1,
                    text: raw.trim().to_string(),
                });
            }
            let known = key == "medium"
                || key == "normalized"
                || DIMENSIONAL_KEYS.contains(&key.as_str())
                || SHAPE_KEYS.contains(&key.as_str());
            if !known {
                return Err(ConfigError::UnknownKey(key));
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(ConfigError::DuplicateKey(key));
            }
        }
        Ok(Self { entries })
    }

    fn take_f64(&mut self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| ConfigError::BadValue {
                    key: key.to_string(),
                    value: v,
                }),
        }
    }

    fn need_f64(&mut self, key: &'static str) -> Result<f64, ConfigError> {
        self.take_f64(key)?.ok_or(ConfigError::MissingKey(key))
    }

    fn take_usize(&mut self, key: &'static str) -> Result<Option<usize>, ConfigError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| ConfigError::BadValue {
                    key: key.to_string(),
                    value: v,
                }),
        }
    }

    fn take_u64(&mut self, key: &'static str) -> Result<Option<u64>, ConfigError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<u64>()
                .map(Some)
                .map_err(|_| ConfigError::BadValue {
                    key: key.to_string(),
                    value: v,
                }),
        }
    }

    fn take_bool(&mut self, key: &'static str) -> Result<Option<bool>, ConfigError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some(v) => match v.as_str() {
                "true" => Ok(Some(true)),
                "false" => Ok(Some(false)),
                _ => Err(ConfigError::BadValue {
                    key: key.to_string(),
                    value: v,
                }),
            },
        }
    }
}

/// Parse a configuration file body.
pub fn parse_config(text: &str) -> Result<ParsedConfig, ConfigError> {
    let mut map = KeyMap::parse(text)?;

    let normalized = map.take_bool("normalized")?.unwrap_or(false);
    let medium_tag = map
        .entries
        .remove("medium")
        .ok_or(ConfigError::MissingKey("medium"))?;

    if normalized {
        // A normalized file may carry nothing dimensional: shapes are
        // fixed by their dimensionless groups alone.
        if let Some(key) = DIMENSIONAL_KEYS
            .iter()
            .find(|k| map.entries.contains_key(**k))
        {
            return Err(ConfigError::NormalizedConflict(key.to_string()));
        }
        let shape = build_shape(&medium_tag, &mut map)?;
        reject_leftovers(&map, &medium_tag)?;
        shape.validate()?;
        return Ok(ParsedConfig::Normalized { shape });
    }

    // Dimensional mode: shape keys are forbidden, groups follow from the
    // SI parameters instead of being set directly.
    if let Some(key) = SHAPE_KEYS.iter().find(|k| map.entries.contains_key(**k)) {
        if !(*key == "alpha" && medium_tag == "subdiffusive") {
            return Err(ConfigError::ForeignKey {
                key: key.to_string(),
                medium: medium_tag.clone(),
            });
        }
    }

    if !MEDIUM_NAMES.contains(&medium_tag.as_str()) {
        return Err(ConfigError::UnknownMedium(medium_tag));
    }
    let kt = map.need_f64("kT")?;
    let n_dim = map.take_usize("n_dim")?.unwrap_or(1) as u32;
    let radius = map.need_f64("radius")?;

    let (medium, ctx) = match medium_tag.as_str() {
        "viscous" => {
            let eta = map.need_f64("eta")?;
            let mass = map.need_f64("mass")?;
            (
                Medium::Viscous { eta },
                PhysicalContext::new(kt, n_dim, radius, mass)?,
            )
        }
        "trap" => {
            let eta = map.need_f64("eta")?;
            let g = map.need_f64("g")?;
            let mass = map.need_f64("mass")?;
            (
                Medium::HarmonicTrap { g, eta },
                PhysicalContext::new(kt, n_dim, radius, mass)?,
            )
        }
        "maxwell" => {
            let eta = map.need_f64("eta")?;
            let g = map.need_f64("g")?;
            let mass = map.need_f64("mass")?;
            (
                Medium::Maxwell { g, eta },
                PhysicalContext::new(kt, n_dim, radius, mass)?,
            )
        }
        "jeffreys" => {
            let eta = map.need_f64("eta")?;
            let g = map.need_f64("g")?;
            let eta_inf = map.need_f64("eta_inf")?;
            let mass = map.need_f64("mass")?;
            (
                Medium::Jeffreys { g, eta, eta_inf },
                PhysicalContext::new(kt, n_dim, radius, mass)?,
            )
        }
        "subdiffusive" => {
            let mu_alpha = map.need_f64("mu_alpha")?;
            let alpha = map.need_f64("alpha")?;
            let mass = map.need_f64("mass")?;
            (
                Medium::Subdiffusive { mu_alpha, alpha },
                PhysicalContext::new(kt, n_dim, radius, mass)?,
            )
        }
        "hydrodynamic" => {
            let eta = map.need_f64("eta")?;
            let rho_p = map.need_f64("rho_p")?;
            let rho_f = map.need_f64("rho_f")?;
            (
                Medium::Hydrodynamic { eta, rho_f, rho_p },
                PhysicalContext::from_densities(kt, n_dim, radius, rho_p, rho_f)?,
            )
        }
        other => return Err(ConfigError::UnknownMedium(other.to_string())),
    };

    let dt = map.take_f64("dt")?;
    let n_steps = map.take_usize("n_steps")?;
    let n_traj = map.take_usize("n_traj")?;
    let seed = map.take_u64("seed")?;
    let burn_in = map.take_usize("burn_in")?;
    let override_stability = map.take_bool("override_stability")?.unwrap_or(false);
    let max_history = map.take_usize("max_history")?;

    reject_leftovers(&map, &medium_tag)?;

    let sim = match (dt, n_steps, n_traj, seed) {
        (None, None, None, None) => None,
        (Some(dt), Some(n_steps), Some(n_traj), Some(seed)) => Some(SimKeys {
            dt,
            n_steps,
            n_traj,
            seed,
            burn_in,
            override_stability,
            max_history,
        }),
        (dt, n_steps, n_traj, seed) => {
            // Name the first absent member so the error is actionable.
            let missing = if dt.is_none() {
                "dt"
            } else if n_steps.is_none() {
                "n_steps"
            } else if n_traj.is_none() {
                "n_traj"
            } else {
                debug_assert!(seed.is_none());
                "seed"
            };
            return Err(ConfigError::MissingKey(missing));
        }
    };

    let spec = MediumSpec::new(medium, ctx)?;
    Ok(ParsedConfig::Dimensional { spec, sim })
}

fn build_shape(tag: &str, map: &mut KeyMap) -> Result<NormalizedMedium, ConfigError> {
    Ok(match tag {
        "viscous" => NormalizedMedium::Viscous,
        "trap" => NormalizedMedium::HarmonicTrap {
            omega_r_tau: map.need_f64("omegaRtau")?,
        },
        "maxwell" => NormalizedMedium::Maxwell {
            omega_r_tau: map.need_f64("omegaRtau")?,
        },
        "jeffreys" => NormalizedMedium::Jeffreys {
            omega_r_tau: map.need_f64("omegaRtau")?,
            xi: map.need_f64("xi")?,
        },
        "subdiffusive" => NormalizedMedium::Subdiffusive {
            alpha: map.need_f64("alpha")?,
        },
        "hydrodynamic" => NormalizedMedium::Hydrodynamic {
            gamma: map.need_f64("gamma")?,
        },
        other => return Err(ConfigError::UnknownMedium(other.to_string())),
    })
}

fn reject_leftovers(map: &KeyMap, medium: &str) -> Result<(), ConfigError> {
    if let Some(key) = map.entries.keys().next() {
        return Err(ConfigError::ForeignKey {
            key: key.clone(),
            medium: medium.to_string(),
        });
    }
    Ok(())
}

/// Canonical `key = value` echo of a parsed configuration, used verbatim
/// in run manifests so that reruns of identical inputs produce identical
/// manifest bytes. Floats print in Rust's shortest round-trip form.
pub fn echo_lines(cfg: &ParsedConfig) -> Vec<String> {
    let mut out = Vec::new();
    match cfg {
        ParsedConfig::Normalized { shape } => {
            out.push("normalized = true".to_string());
            out.push(format!("medium = {}", normalized_name(shape)));
            match *shape {
                NormalizedMedium::Viscous => {}
                NormalizedMedium::HarmonicTrap { omega_r_tau }
                | NormalizedMedium::Maxwell { omega_r_tau } => {
                    out.push(format!("omegaRtau = {omega_r_tau}"));
                }
                NormalizedMedium::Jeffreys { omega_r_tau, xi } => {
                    out.push(format!("omegaRtau = {omega_r_tau}"));
                    out.push(format!("xi = {xi}"));
                }
                NormalizedMedium::Subdiffusive { alpha } => {
                    out.push(format!("alpha = {alpha}"));
                }
                NormalizedMedium::Hydrodynamic { gamma } => {
                    out.push(format!("gamma = {gamma}"));
                }
            }
        }
        ParsedConfig::Dimensional { spec, sim } => {
            out.push(format!("medium = {}", spec.medium.name()));
            let ctx = &spec.ctx;
            out.push(format!("kT = {}", ctx.kt));
            out.push(format!("n_dim = {}", ctx.n_dim));
            out.push(format!("radius = {}", ctx.radius));
            match spec.medium {
                Medium::Viscous { eta } => {
                    out.push(format!("mass = {}", ctx.mass));
                    out.push(format!("eta = {eta}"));
                }
                Medium::HarmonicTrap { g, eta } | Medium::Maxwell { g, eta } => {
                    out.push(format!("mass = {}", ctx.mass));
                    out.push(format!("eta = {eta}"));
                    out.push(format!("g = {g}"));
                }
                Medium::Jeffreys { g, eta, eta_inf } => {
                    out.push(format!("mass = {}", ctx.mass));
                    out.push(format!("eta = {eta}"));
                    out.push(format!("g = {g}"));
                    out.push(format!("eta_inf = {eta_inf}"));
                }
                Medium::Subdiffusive { mu_alpha, alpha } => {
                    out.push(format!("mass = {}", ctx.mass));
                    out.push(format!("mu_alpha = {mu_alpha}"));
                    out.push(format!("alpha = {alpha}"));
                }
                Medium::Hydrodynamic { eta, rho_f, rho_p } => {
                    out.push(format!("eta = {eta}"));
                    out.push(format!("rho_p = {rho_p}"));
                    out.push(format!("rho_f = {rho_f}"));
                }
            }
            if let Some(sim) = sim {
                out.push(format!("dt = {}", sim.dt));
                out.push(format!("n_steps = {}", sim.n_steps));
                out.push(format!("n_traj = {}", sim.n_traj));
                out.push(format!("seed = {}", sim.seed));
                if let Some(b) = sim.burn_in {
                    out.push(format!("burn_in = {b}"));
                }
                out.push(format!("override_stability = {}", sim.override_stability));
                if let Some(h) = sim.max_history {
                    out.push(format!("max_history = {h}"));
                }
            }
        }
    }
    out
}

/// Derived dimensionless groups of a configuration, as `name = value`
/// lines for the manifest's `derived` block. Normalized configurations
/// already state their groups, so only dimensional ones report here.
pub fn derived_lines(cfg: &ParsedConfig) -> Vec<String> {
    let mut out = Vec::new();
    if let ParsedConfig::Dimensional { spec, .. } = cfg {
        let groups = spec.groups();
        if let Some(tau) = groups.tau {
            out.push(format!("tau = {tau}"));
        }
        if let Some(a) = groups.omega_r_tau {
            out.push(format!("omegaRtau = {a}"));
        }
        if let Some(xi) = groups.xi {
            out.push(format!("xi = {xi}"));
        }
        if let Some(lambda) = groups.lambda {
            out.push(format!("lambda = {lambda}"));
        }
        if let Some(gamma) = groups.gamma_ratio {
            out.push(format!("gamma = {gamma}"));
        }
    }
    out
}
