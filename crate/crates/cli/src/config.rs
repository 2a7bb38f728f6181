//! Scenario configuration: a JSON document plus flat command-line overrides.

use std::fmt;
use std::str::FromStr;

use hybrid_tls::model::reduce;
use hybrid_tls::{BlochState4, EvolveConfig, NormalizedBloch, PhysicalParams, ReducedParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Closed-form branch picked from the parameters.
    Analytic,
    /// Matrix exponential of the linear 4x4 flow.
    Expm,
    /// RK4 on the density matrix (the only path with thermal photons).
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Output {
    Trajectory,
    Steady,
    SpectrumDecay,
    SpectrumPeriodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    #[default]
    Interaction,
    Schrodinger,
}

macro_rules! string_enum {
    ($ty:ty, $($name:literal => $variant:path),+ $(,)?) => {
        impl FromStr for $ty {
            type Err = CliError;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($name => Ok($variant),)+
                    other => Err(CliError::Config(format!(
                        "unknown {} '{other}' (expected one of: {})",
                        stringify!($ty),
                        [$($name),+].join(", "),
                    ))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let name = match self { $($variant => $name,)+ };
                f.write_str(name)
            }
        }
    };
}

string_enum!(Method, "analytic" => Method::Analytic, "expm" => Method::Expm, "rk4" => Method::Rk4);
string_enum!(
    Output,
    "trajectory" => Output::Trajectory,
    "steady" => Output::Steady,
    "spectrum-decay" => Output::SpectrumDecay,
    "spectrum-periodic" => Output::SpectrumPeriodic,
);
string_enum!(Picture, "interaction" => Picture::Interaction, "schrodinger" => Picture::Schrodinger);

/// Reduced parameters as they appear in the JSON document.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsSpec {
    pub g0t: f64,
    pub at: f64,
    pub gt: f64,
    pub tt: f64,
    pub n_thermal: f64,
}

impl From<ParamsSpec> for ReducedParams {
    fn from(p: ParamsSpec) -> Self {
        ReducedParams::new(p.g0t, p.at, p.gt, p.tt).with_thermal(p.n_thermal)
    }
}

/// Physical-unit parameters, reduced by the Rabi frequency on load.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalSpec {
    pub omega: f64,
    pub omega0: f64,
    pub gamma0: f64,
    pub n_thermal: f64,
    pub alpha: f64,
    pub gamma_cap: f64,
    pub gauge_t: f64,
}

impl From<PhysicalSpec> for PhysicalParams {
    fn from(p: PhysicalSpec) -> Self {
        PhysicalParams {
            omega: p.omega,
            omega0: p.omega0,
            gamma0: p.gamma0,
            n_thermal: p.n_thermal,
            alpha: p.alpha,
            gamma_cap: p.gamma_cap,
            gauge_t: p.gauge_t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveSpec {
    pub tau_max: f64,
    pub dt: f64,
    pub rk_substeps: usize,
}

impl Default for EvolveSpec {
    fn default() -> Self {
        Self { tau_max: 30.0, dt: 0.01, rk_substeps: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectrumSpec {
    pub omega_max: f64,
    pub omega_step: f64,
    pub tail_eps: f64,
    pub n_max: usize,
}

impl Default for SpectrumSpec {
    fn default() -> Self {
        Self { omega_max: 50.0, omega_step: 0.05, tail_eps: 1e-10, n_max: 16 }
    }
}

impl SpectrumSpec {
    /// `0, step, 2 step, ...` up to `omega_max` inclusive.
    pub fn omegas(&self) -> Result<Vec<f64>> {
        if !(self.omega_step > 0.0 && self.omega_max >= 0.0 && self.omega_max.is_finite()) {
            return Err(CliError::Config("spectrum needs omega_step > 0 and omega_max >= 0".into()));
        }
        let n = (self.omega_max / self.omega_step + 1e-9).floor() as usize;
        Ok((0..=n).map(|k| k as f64 * self.omega_step).collect())
    }
}

/// JSON document layout. Exactly one of `params` / `physical` may be given.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub params: Option<ParamsSpec>,
    pub physical: Option<PhysicalSpec>,
    pub init: Option<[f64; 3]>,
    pub method: Option<Method>,
    pub evolve: EvolveSpec,
    pub outputs: Option<Vec<Output>>,
    pub spectrum: SpectrumSpec,
    pub picture: Picture,
    /// Transition-to-Rabi frequency ratio used for the Schrodinger picture.
    pub omega0_ratio: Option<f64>,
}

/// Flat overrides; every `Some` replaces the corresponding file value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub g0t: Option<f64>,
    pub at: Option<f64>,
    pub gt: Option<f64>,
    pub tt: Option<f64>,
    pub n_thermal: Option<f64>,
    pub init: Option<[f64; 3]>,
    pub tau_max: Option<f64>,
    pub dt: Option<f64>,
    pub rk_substeps: Option<usize>,
    pub method: Option<Method>,
    pub outputs: Option<Vec<Output>>,
    pub picture: Option<Picture>,
    pub omega0_ratio: Option<f64>,
}

/// A fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: ReducedParams,
    pub init: NormalizedBloch,
    pub method: Method,
    pub evolve: EvolveConfig,
    pub outputs: Vec<Output>,
    pub spectrum: SpectrumSpec,
    pub picture: Picture,
    pub omega0_ratio: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let e = EvolveSpec::default();
        Self {
            params: ReducedParams::default(),
            init: NormalizedBloch::ground(),
            method: Method::Expm,
            evolve: EvolveConfig::new(e.tau_max, e.dt, e.rk_substeps),
            outputs: vec![Output::Trajectory],
            spectrum: SpectrumSpec::default(),
            picture: Picture::Interaction,
            omega0_ratio: 0.0,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Self::resolve(serde_json::from_str(text)?, &Overrides::default())
    }

    /// Merge a parsed file with overrides and check the result.
    pub fn resolve(file: ConfigFile, ov: &Overrides) -> Result<Self> {
        let mut params = match (file.params, file.physical) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("give either 'params' or 'physical', not both".into()))
            }
            (Some(p), None) => ReducedParams::from(p),
            (None, Some(p)) => reduce(&p.into())?,
            (None, None) => ReducedParams::default(),
        };
        let ratio_from_physical = file.physical.map(|p| p.omega0 / p.omega);
        macro_rules! take {
            ($($field:ident),+) => { $(if let Some(v) = ov.$field { params.$field = v; })+ };
        }
        take!(g0t, at, gt, tt, n_thermal);
        params.validate()?;

        let init = ov.init.or(file.init).unwrap_or([0.0, 0.0, -1.0]);
        let norm_sq: f64 = init.iter().map(|v| v * v).sum();
        if init.iter().any(|v| !v.is_finite()) || norm_sq > 1.0 + 1e-12 {
            return Err(CliError::Config(format!("init {init:?} lies outside the Bloch ball")));
        }

        let evolve = EvolveConfig::new(
            ov.tau_max.unwrap_or(file.evolve.tau_max),
            ov.dt.unwrap_or(file.evolve.dt),
            ov.rk_substeps.unwrap_or(file.evolve.rk_substeps),
        );
        evolve.validate()?;

        let outputs = ov.outputs.clone().or(file.outputs).unwrap_or_else(|| vec![Output::Trajectory]);
        if outputs.is_empty() {
            return Err(CliError::Config("no outputs requested".into()));
        }
        let omega0_ratio = ov.omega0_ratio.or(file.omega0_ratio).or(ratio_from_physical).unwrap_or(0.0);
        if !omega0_ratio.is_finite() {
            return Err(CliError::Config("omega0_ratio must be finite".into()));
        }
        Ok(Self {
            params,
            init: NormalizedBloch::new(init[0], init[1], init[2]),
            method: ov.method.or(file.method).unwrap_or(Method::Expm),
            evolve,
            outputs,
            spectrum: file.spectrum,
            picture: ov.picture.unwrap_or(file.picture),
            omega0_ratio,
        })
    }

    pub fn initial_state(&self) -> BlochState4 {
        BlochState4::from_normalized(self.init)
    }
}

/// Parse `"x,y,z"`.
pub fn parse_triple(s: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!("expected x,y,z (got '{s}')")));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| CliError::Config(format!("not a number: '{p}'")))?;
    }
    Ok(out)
}

/// Parse a comma-separated output list.
pub fn parse_outputs(s: &str) -> Result<Vec<Output>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(Output::from_str).collect()
}
