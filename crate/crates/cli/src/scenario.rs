//! Running a resolved scenario: trajectories, steady states, spectra.

use std::fs;
use std::path::{Path, PathBuf};

use hybrid_tls::analytic::{
    ah_eigenvalues, ah_oscillatory_state, ah_solution, ah_steady, lindblad_solution, lindblad_steady,
    oscillation_period, sd_solution, sd_steady, LindbladAux, SDAux, ALPHA_EPS, LAMBDA4_EPS,
};
use hybrid_tls::observables::upper_population;
use hybrid_tls::pauli::reconstruct;
use hybrid_tls::propagator::{evolve_linear, evolve_rk4, steady_state};
use hybrid_tls::spectral::{
    fourier_coefficients_periodic, regular_ft_decaying, DecaySpectrum, ExcitedPopulation, PeriodicSpectrum,
};
use hybrid_tls::{BlochState4, Error, NormalizedBloch, ReducedParams, Trajectory};

use crate::config::{Method, Output, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::output::{decay_csv, periodic_csv, steady_csv, trajectory_csv};

/// Closed-form solution family covering a parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch {
    /// `at = gt = 0`.
    Lindblad,
    /// `g0t = 0`, `at != 0`.
    AntiHermitian,
    /// `g0t = at = 0`, `|gt| < 1`.
    Oscillatory,
    /// Every small parameter below the strong-driving threshold.
    StrongDriving(SDAux),
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Lindblad => "Lindblad branch",
            Branch::AntiHermitian => "exponential AH branch",
            Branch::Oscillatory => "oscillatory AH branch",
            Branch::StrongDriving(_) => "strong-driving expansion",
        }
    }
}

pub fn select_branch(rp: &ReducedParams) -> Result<Branch> {
    rp.validate()?;
    if rp.n_thermal != 0.0 {
        return Err(Error::ThermalUnsupported(rp.n_thermal).into());
    }
    if rp.at == 0.0 && rp.gt == 0.0 {
        return Ok(Branch::Lindblad);
    }
    if rp.g0t == 0.0 {
        let aux = ah_eigenvalues(rp.at, rp.gt);
        if aux.lambda4().norm() >= LAMBDA4_EPS {
            if rp.at.abs() < ALPHA_EPS {
                return Err(Error::SingularAlpha.into());
            }
            return Ok(Branch::AntiHermitian);
        }
        if rp.at == 0.0 && rp.gt.abs() < 1.0 {
            return Ok(Branch::Oscillatory);
        }
        return Err(CliError::Domain(format!(
            "no closed form at at = {}, gt = {} (need at != 0, or |gt| < 1)",
            rp.at, rp.gt
        )));
    }
    let sd = SDAux::from_reduced(rp.g0t, rp.at, rp.gt)?;
    if sd.is_small() {
        return Ok(Branch::StrongDriving(sd));
    }
    Err(CliError::Domain(format!(
        "hybrid damping (g0t > 0 with at or gt nonzero) has a closed form only in the \
         strong-driving regime: {}",
        sd.regime_warnings().join("; ")
    )))
}

fn analytic_state(branch: &Branch, rp: &ReducedParams, b0: &BlochState4, tau: f64) -> Result<BlochState4> {
    let s = match branch {
        Branch::Lindblad => lindblad_solution(rp.g0t, b0, tau)?,
        Branch::AntiHermitian => ah_solution(rp.at, rp.gt, b0, tau)?,
        Branch::Oscillatory => ah_oscillatory_state(rp.gt, b0, tau)?,
        Branch::StrongDriving(sd) => sd_solution(sd.g0t, sd.alpha_bar, sd.gamma_bar, b0, tau)?.0,
    };
    // the gauge term only rescales the trace
    Ok(s.scale((-rp.tt * tau).exp()))
}

pub fn trajectory(cfg: &ScenarioConfig) -> Result<Trajectory> {
    let b0 = cfg.initial_state();
    let rp = &cfg.params;
    Ok(match cfg.method {
        Method::Expm => evolve_linear(rp, &b0, &cfg.evolve)?,
        Method::Rk4 => evolve_rk4(rp, &reconstruct(&b0), &cfg.evolve)?,
        Method::Analytic => {
            let branch = select_branch(rp)?;
            let mut traj = Trajectory::with_capacity(cfg.evolve.steps() + 1);
            for tau in cfg.evolve.taus() {
                traj.push(tau, analytic_state(&branch, rp, &b0, tau)?)?;
            }
            traj
        }
    })
}

/// Long-time normalized state. Closed forms are used for `analytic`.
pub fn steady(cfg: &ScenarioConfig) -> Result<NormalizedBloch> {
    let rp = &cfg.params;
    if cfg.method == Method::Analytic {
        return Ok(match select_branch(rp)? {
            Branch::Lindblad => lindblad_steady(rp.g0t)?,
            Branch::AntiHermitian => ah_steady(rp.at, rp.gt)?,
            Branch::Oscillatory => return Err(Error::OscillatoryRegime.into()),
            Branch::StrongDriving(sd) => sd_steady(sd.g0t, sd.alpha_bar, sd.gamma_bar),
        });
    }
    Ok(steady_state(rp)?)
}

pub fn decay_spectrum(cfg: &ScenarioConfig) -> Result<DecaySpectrum> {
    let f_inf = upper_population(&steady(cfg)?);
    let signal = ExcitedPopulation::new(cfg.params, cfg.initial_state());
    let s = &cfg.spectrum;
    Ok(regular_ft_decaying(&signal, f_inf, &s.omegas()?, s.tail_eps)?)
}

pub fn periodic_spectrum(cfg: &ScenarioConfig) -> Result<PeriodicSpectrum> {
    let rp = &cfg.params;
    if !(rp.g0t == 0.0 && rp.at == 0.0) {
        return Err(CliError::Domain("periodic spectrum needs g0t = at = 0 and |gt| < 1".into()));
    }
    let period = oscillation_period(rp.gt)?;
    let signal = ExcitedPopulation::new(*rp, cfg.initial_state());
    Ok(fourier_coefficients_periodic(&signal, period, cfg.spectrum.n_max)?)
}

fn file_name(output: Output) -> &'static str {
    match output {
        Output::Trajectory => "trajectory.csv",
        Output::Steady => "steady.csv",
        Output::SpectrumDecay => "spectrum_decay.csv",
        Output::SpectrumPeriodic => "spectrum_periodic.csv",
    }
}

pub fn render(cfg: &ScenarioConfig, output: Output) -> Result<String> {
    Ok(match output {
        Output::Trajectory => trajectory_csv(&trajectory(cfg)?, cfg.picture, cfg.omega0_ratio),
        Output::Steady => steady_csv(&steady(cfg)?),
        Output::SpectrumDecay => decay_csv(&decay_spectrum(cfg)?),
        Output::SpectrumPeriodic => periodic_csv(&periodic_spectrum(cfg)?),
    })
}

/// Compute every requested output and write it under `out_dir`.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    // compute everything first so a failure leaves no partial output set
    let rendered: Vec<(Output, String)> =
        cfg.outputs.iter().map(|&o| Ok((o, render(cfg, o)?))).collect::<Result<_>>()?;
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for (output, text) in rendered {
        let path = out_dir.join(file_name(output));
        fs::write(&path, text)?;
        written.push(path);
    }
    Ok(written)
}

/// Human-readable summary of which solution paths apply.
pub fn validate(cfg: &ScenarioConfig) -> Vec<String> {
    let rp = &cfg.params;
    let mut lines = vec![format!(
        "params: g0t = {}, at = {}, gt = {}, tt = {}, n_thermal = {}",
        rp.g0t, rp.at, rp.gt, rp.tt, rp.n_thermal
    )];
    if rp.n_thermal != 0.0 {
        lines.push("thermal occupation > 0: rk4 is the only propagation path".into());
    }
    if rp.at == 0.0 && rp.gt == 0.0 {
        if rp.g0t == 1.0 {
            lines.push("kappa degenerate (critical damping); Lindblad closed form evaluated as its regular limit".into());
        } else if rp.g0t > 1.0 {
            let k = LindbladAux::new(rp.g0t).kappa;
            lines.push(format!("overdamped Lindblad branch; kappa = {}i", k.im));
        } else if rp.g0t == 0.0 {
            lines.push("undamped Rabi oscillation; period 6.2832".into());
        } else {
            lines.push("Lindblad branch".into());
        }
    }
    if rp.g0t == 0.0 && !(rp.at == 0.0 && rp.gt == 0.0) {
        let aux = ah_eigenvalues(rp.at, rp.gt);
        let l4 = aux.lambda4().re;
        if l4 >= LAMBDA4_EPS {
            lines.push(format!("exponential AH branch; lambda_4 = {l4:.6}"));
        } else if rp.at == 0.0 && rp.gt.abs() < 1.0 {
            let period = oscillation_period(rp.gt).unwrap_or(f64::NAN);
            lines.push(format!("oscillatory AH branch; period {period:.4}"));
        } else {
            lines.push("no closed form (at = 0, |gt| >= 1); use expm or rk4".into());
        }
    }
    if rp.g0t > 0.0 && (rp.at != 0.0 || rp.gt != 0.0) {
        match SDAux::from_reduced(rp.g0t, rp.at, rp.gt) {
            Ok(sd) if sd.is_small() => lines.push(format!(
                "strong-driving expansion applicable (alpha_bar = {}, gamma_bar = {})",
                sd.alpha_bar, sd.gamma_bar
            )),
            Ok(sd) => {
                lines.push("strong-driving expansion not applicable".into());
                lines.extend(sd.regime_warnings().into_iter().map(|w| format!("  warning: {w}")));
            }
            Err(e) => lines.push(format!("strong-driving expansion not applicable: {e}")),
        }
    }
    let analytic = match select_branch(rp) {
        Ok(b) => format!("available ({})", b.name()),
        Err(e) => format!("unavailable: {e}"),
    };
    lines.push(format!("method analytic: {analytic}"));
    let linear = if rp.n_thermal == 0.0 { "available" } else { "unavailable (thermal)" };
    lines.push(format!("method expm: {linear}"));
    lines.push("method rk4: available".into());
    lines.push(format!("selected method: {}", cfg.method));
    lines
}
