//! Parameter sets of the nine built-in figure presets.
//!
//! Every curve starts in the ground state (all curves begin at `p_e = 0`).
//! Time-domain figures cover `tau` in `[0, 30]` with output every 0.01;
//! phase figures use `omega` in `[0, 50]` with step 0.05.

use std::fs;
use std::path::{Path, PathBuf};

use hybrid_tls::{EvolveConfig, ReducedParams};

use crate::config::{Method, Output, Picture, ScenarioConfig, SpectrumSpec};
use crate::error::{CliError, Result};
use crate::output::num;
use crate::scenario::render;

pub const FIGURE_TAU_MAX: f64 = 30.0;
pub const FIGURE_DT: f64 = 0.01;
pub const FIGURE_N_MAX: usize = 128;

/// What a figure plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    /// `p_e(tau)`.
    Population,
    /// `Im <sigma_+>(tau)`.
    Coherence,
    /// Phase of the regular Fourier transform of `p_e`.
    DecayPhase,
    /// Moduli of the periodic Fourier coefficients of `p_e`.
    PeriodicModulus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curve {
    pub style: &'static str,
    pub params: ReducedParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: u8,
    pub kind: FigureKind,
    pub curves: Vec<Curve>,
}

const LINE_STYLES: [&str; 4] = ["solid", "dashed", "dashdot", "dotted"];

fn curves(styles: &[&'static str], params: impl Fn(f64) -> ReducedParams, values: &[f64]) -> Vec<Curve> {
    styles.iter().zip(values).map(|(&style, &v)| Curve { style, params: params(v) }).collect()
}

impl FigurePreset {
    pub fn get(id: u8) -> Result<Self> {
        let lindblad = |g| ReducedParams::lindblad(g);
        let alpha = |a| ReducedParams::anti_hermitian(a, 0.0);
        let gamma = |g| ReducedParams::anti_hermitian(0.0, g);
        let (kind, curves) = match id {
            1 => (FigureKind::Population, curves(&LINE_STYLES, lindblad, &[1.0, 0.25, 0.125, 0.025])),
            2 => (FigureKind::Coherence, curves(&LINE_STYLES, lindblad, &[1.0, 0.25, 0.125, 0.025])),
            3 => (FigureKind::Population, curves(&LINE_STYLES, alpha, &[4.0, 1.0, 0.5, 0.05])),
            4 => (FigureKind::Coherence, curves(&LINE_STYLES, alpha, &[4.0, 1.0, 0.5, 0.05])),
            5 => (FigureKind::Population, curves(&LINE_STYLES, gamma, &[2.0, 1.0, 0.9, 0.5])),
            6 => (FigureKind::Coherence, curves(&LINE_STYLES, gamma, &[2.0, 1.0, 0.9, 0.5])),
            7 => (FigureKind::DecayPhase, curves(&LINE_STYLES, lindblad, &[0.5, 0.25, 0.125, 0.01])),
            8 => (FigureKind::DecayPhase, curves(&LINE_STYLES, alpha, &[2.0, 1.0, 0.5, 0.2])),
            9 => (
                FigureKind::PeriodicModulus,
                curves(&["dots", "squares", "diamonds"], gamma, &[0.999, 0.9, 0.5]),
            ),
            _ => return Err(CliError::Config(format!("figure must be 1..=9 (got {id})"))),
        };
        Ok(Self { id, kind, curves })
    }

    pub fn all() -> Vec<Self> {
        (1..=9).map(|id| Self::get(id).expect("ids 1..=9 exist")).collect()
    }

    /// Scenario for one curve, computed with the matrix exponential (the
    /// only path that covers every curve, including `gt = 1`).
    pub fn scenario(&self, curve: &Curve) -> ScenarioConfig {
        let output = match self.kind {
            FigureKind::Population | FigureKind::Coherence => Output::Trajectory,
            FigureKind::DecayPhase => Output::SpectrumDecay,
            FigureKind::PeriodicModulus => Output::SpectrumPeriodic,
        };
        ScenarioConfig {
            params: curve.params,
            method: Method::Expm,
            evolve: EvolveConfig::new(FIGURE_TAU_MAX, FIGURE_DT, 1),
            outputs: vec![output],
            spectrum: SpectrumSpec { n_max: FIGURE_N_MAX, ..SpectrumSpec::default() },
            picture: Picture::Interaction,
            ..ScenarioConfig::default()
        }
    }

    pub fn file_name(&self, curve: &Curve) -> String {
        format!("fig{}_{}.csv", self.id, curve.style)
    }

    /// Curve CSVs plus `figN_index.csv` listing the parameters per file.
    pub fn render(&self) -> Result<Vec<(String, String)>> {
        let mut files = Vec::with_capacity(self.curves.len() + 1);
        let mut index = String::from("style,g0t,at,gt,tt,file\n");
        for curve in &self.curves {
            let cfg = self.scenario(curve);
            let name = self.file_name(curve);
            let p = &curve.params;
            index.push_str(&format!(
                "{},{},{},{},{},{}\n",
                curve.style,
                num(p.g0t),
                num(p.at),
                num(p.gt),
                num(p.tt),
                name
            ));
            files.push((name, render(&cfg, cfg.outputs[0])?));
        }
        files.push((format!("fig{}_index.csv", self.id), index));
        Ok(files)
    }

    pub fn run(&self, out_dir: &Path) -> Result<Vec<PathBuf>> {
        let files = self.render()?;
        fs::create_dir_all(out_dir)?;
        files
            .into_iter()
            .map(|(name, text)| {
                let path = out_dir.join(name);
                fs::write(&path, text)?;
                Ok(path)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_parameters() {
        let f1 = FigurePreset::get(1).unwrap();
        let g: Vec<f64> = f1.curves.iter().map(|c| c.params.g0t).collect();
        assert_eq!(g, vec![1.0, 0.25, 0.125, 0.025]);
        assert_eq!(f1.curves[0].style, "solid");
        let f5 = FigurePreset::get(5).unwrap();
        let gt: Vec<f64> = f5.curves.iter().map(|c| c.params.gt).collect();
        assert_eq!(gt, vec![2.0, 1.0, 0.9, 0.5]);
        assert!(f5.curves.iter().all(|c| c.params.g0t == 0.0 && c.params.at == 0.0));
        let f9 = FigurePreset::get(9).unwrap();
        assert_eq!(f9.kind, FigureKind::PeriodicModulus);
        assert_eq!(f9.curves.len(), 3);
        assert_eq!(f9.file_name(&f9.curves[2]), "fig9_diamonds.csv");
        assert_eq!(FigurePreset::all().len(), 9);
    }

    #[test]
    fn unknown_figure_is_config_error() {
        assert_eq!(FigurePreset::get(0).unwrap_err().exit_code(), 2);
        assert_eq!(FigurePreset::get(10).unwrap_err().exit_code(), 2);
    }
}
