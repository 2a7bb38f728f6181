//! CSV emission. Every number is written with 17 significant digits in
//! scientific notation, so reruns are byte-identical.

use std::f64::consts::PI;
use std::fmt::Write as _;

use hybrid_tls::observables::{coherence_interaction, to_schrodinger_coherence, upper_population};
use hybrid_tls::spectral::{phase_series, DecaySpectrum, PeriodicSpectrum};
use hybrid_tls::{NormalizedBloch, Trajectory};

use crate::config::Picture;

pub const TRAJECTORY_HEADER: &str = "tau,s1,s2,s3,trace,x,y,z,pe,re_coh,im_coh";
pub const DECAY_HEADER: &str = "omega,re,im,modulus,phase";
pub const PERIODIC_HEADER: &str = "n,re,im,modulus,phase";
pub const STEADY_HEADER: &str = "x,y,z,pe";

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn row(out: &mut String, values: &[f64]) {
    let line: Vec<String> = values.iter().map(|v| num(*v)).collect();
    out.push_str(&line.join(","));
    out.push('\n');
}

/// `omega0_ratio` only matters in the Schrodinger picture, where the
/// coherence picks up the phase `omega0_ratio * tau`.
pub fn trajectory_csv(traj: &Trajectory, picture: Picture, omega0_ratio: f64) -> String {
    let mut out = String::with_capacity(256 * (traj.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for ((tau, s), nb) in traj.taus.iter().zip(&traj.states).zip(&traj.normalized) {
        let coh = match picture {
            Picture::Interaction => coherence_interaction(nb),
            Picture::Schrodinger => to_schrodinger_coherence(nb, omega0_ratio * tau),
        };
        row(
            &mut out,
            &[*tau, s.s1, s.s2, s.s3, s.tr, nb.x, nb.y, nb.z, upper_population(nb), coh.value.re, coh.value.im],
        );
    }
    out
}

pub fn decay_csv(spectrum: &DecaySpectrum) -> String {
    let mut out = String::from(DECAY_HEADER);
    out.push('\n');
    for ((w, v), p) in spectrum.omegas.iter().zip(&spectrum.values).zip(phase_series(spectrum)) {
        row(&mut out, &[*w, v.re, v.im, v.norm(), p.phase]);
    }
    out
}

pub fn periodic_csv(spectrum: &PeriodicSpectrum) -> String {
    let mut out = String::from(PERIODIC_HEADER);
    out.push('\n');
    for (n, c) in spectrum.wavenumbers.iter().zip(&spectrum.coefficients) {
        let phase = if c.norm() == 0.0 { 0.0 } else { c.arg() };
        let phase = if phase == -PI { PI } else { phase };
        let _ = write!(out, "{n},");
        row(&mut out, &[c.re, c.im, c.norm(), phase]);
    }
    out
}

pub fn steady_csv(nb: &NormalizedBloch) -> String {
    let mut out = String::from(STEADY_HEADER);
    out.push('\n');
    row(&mut out, &[nb.x, nb.y, nb.z, upper_population(nb)]);
    out
}
