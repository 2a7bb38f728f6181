//! Fourier diagnostics of observables.
//!
//! Decaying signals get the regular part of their one-sided transform,
//! `(1/sqrt(2 pi)) * int_0^inf (f - f_inf) e^{i w tau} dtau`; periodic ones get
//! the coefficients `(1/T) int_0^T f e^{2 pi i n tau / T} dtau`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{build_m, ReducedParams};
use crate::observables::upper_population;
use crate::pauli::{normalize, BlochState4};
use crate::propagator::{expm4, normalized_samples};

/// Longest horizon the decaying transform will integrate to.
pub const MAX_HORIZON: f64 = 1e5;
const START_HORIZON: f64 = 50.0;
const MAX_STEP: f64 = 0.01;
const MIN_PERIODIC_SAMPLES: usize = 2048;
// rotation recurrence is reseeded this often to stop phase drift
const RESEED: usize = 512;

/// A real signal of the rescaled time.
pub trait Signal {
    fn value(&self, tau: f64) -> Result<f64>;

    /// Values at `k * step` for `k = 0..count`.
    fn samples(&self, step: f64, count: usize) -> Result<Vec<f64>> {
        (0..count).map(|k| self.value(k as f64 * step)).collect()
    }
}

/// Adapter turning a closure into a [`Signal`].
pub struct FnSignal<F>(pub F);

impl<F: Fn(f64) -> f64> Signal for FnSignal<F> {
    fn value(&self, tau: f64) -> Result<f64> {
        Ok((self.0)(tau))
    }
}

/// Excited-state population `p_e(tau)` of the linear flow started at `b0`.
#[derive(Debug, Clone, Copy)]
pub struct ExcitedPopulation {
    pub params: ReducedParams,
    pub b0: BlochState4,
}

impl ExcitedPopulation {
    pub fn new(params: ReducedParams, b0: BlochState4) -> Self {
        Self { params, b0 }
    }
}

impl Signal for ExcitedPopulation {
    fn value(&self, tau: f64) -> Result<f64> {
        let m = build_m(&self.params)?;
        let state = expm4(&m, tau)?.apply_state(&self.b0);
        Ok(upper_population(&normalize(&state)?))
    }

    fn samples(&self, step: f64, count: usize) -> Result<Vec<f64>> {
        let nbs = normalized_samples(&self.params, &self.b0, step, count)?;
        Ok(nbs.iter().map(upper_population).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DecaySpectrum {
    pub omegas: Vec<f64>,
    pub values: Vec<Complex64>,
    /// Integration horizon actually used.
    pub horizon: f64,
    pub step: f64,
}

impl DecaySpectrum {
    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeriodicSpectrum {
    pub wavenumbers: Vec<usize>,
    pub coefficients: Vec<Complex64>,
    pub period: f64,
}

impl PeriodicSpectrum {
    pub fn moduli(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm()).collect()
    }

    /// Number of harmonics `n >= 1` with `|c_n| > rel * |c_0|`.
    pub fn significant_count(&self, rel: f64) -> usize {
        let Some(c0) = self.coefficients.first() else { return 0 };
        let cut = rel * c0.norm();
        self.coefficients.iter().skip(1).filter(|c| c.norm() > cut).count()
    }
}

fn check_omegas(omegas: &[f64]) -> Result<()> {
    if omegas.is_empty() {
        return Err(Error::InvalidParameter("omega grid is empty".into()));
    }
    if omegas.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidParameter("omegas must be finite and >= 0".into()));
    }
    if omegas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("omegas must be strictly increasing".into()));
    }
    Ok(())
}

/// Trapezoid sum of `d_k e^{i w k h}` plus the leading endpoint correction
/// at `tau = 0`. The far end is negligible once the tail has died out.
fn transform_one(d: &[f64], h: f64, omega: f64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, omega * h);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, &v) in d.iter().enumerate() {
        if k % RESEED == 0 {
            phase = Complex64::from_polar(1.0, omega * h * k as f64);
        }
        sum += phase * v;
        phase *= rot;
    }
    let last = d.len() - 1;
    sum -= 0.5 * (d[0] + d[last] * Complex64::from_polar(1.0, omega * h * last as f64));
    let mut integral = sum * h;
    if d.len() >= 3 {
        let slope = (-3.0 * d[0] + 4.0 * d[1] - d[2]) / (2.0 * h);
        let g_prime = Complex64::new(slope, omega * d[0]);
        integral += g_prime * (h * h / 12.0);
    }
    integral
}

/// Regular part of the Fourier transform of a signal relaxing to `f_inf`.
///
/// The horizon doubles from 50 until everything beyond half of it stays
/// below `tail_eps` times the peak deviation.
pub fn regular_ft_decaying(
    signal: &dyn Signal,
    f_inf: f64,
    omegas: &[f64],
    tail_eps: f64,
) -> Result<DecaySpectrum> {
    check_omegas(omegas)?;
    if !(tail_eps > 0.0) {
        return Err(Error::InvalidParameter(format!("tail_eps must be > 0 (got {tail_eps})")));
    }
    let omega_max = omegas[omegas.len() - 1];
    let h = if omega_max > 0.0 { MAX_STEP.min(PI / (10.0 * omega_max)) } else { MAX_STEP };
    let mut horizon = START_HORIZON;
    let d = loop {
        let count = (horizon / h).ceil() as usize + 1;
        let d: Vec<f64> = signal.samples(h, count)?.into_iter().map(|f| f - f_inf).collect();
        if d.iter().any(|v| !v.is_finite()) {
            return Err(Error::SignalNotDecaying);
        }
        let peak = d.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let cut = tail_eps * peak;
        let last_big = d.iter().rposition(|v| v.abs() > cut).unwrap_or(0);
        if (last_big as f64) * h <= 0.5 * horizon {
            break d;
        }
        horizon *= 2.0;
        if horizon > MAX_HORIZON {
            return Err(Error::SignalNotDecaying);
        }
    };
    let norm = 1.0 / (2.0 * PI).sqrt();
    let values = omegas.iter().map(|&w| transform_one(&d, h, w) * norm).collect();
    Ok(DecaySpectrum { omegas: omegas.to_vec(), values, horizon, step: h })
}

/// Fourier coefficients `c_0..=c_{n_max}` over one period, from the
/// periodic trapezoid rule on `max(2048, 16 n_max)` equispaced samples.
pub fn fourier_coefficients_periodic(
    signal: &dyn Signal,
    period: f64,
    n_max: usize,
) -> Result<PeriodicSpectrum> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidParameter(format!("period must be > 0 (got {period})")));
    }
    let n = MIN_PERIODIC_SAMPLES.max(16 * n_max);
    let f = signal.samples(period / n as f64, n)?;
    let coefficients = (0..=n_max)
        .map(|m| {
            let sum: Complex64 = f
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    // reduce the angle exactly before the trig call
                    let j = (m * k) % n;
                    Complex64::from_polar(v, 2.0 * PI * j as f64 / n as f64)
                })
                .sum();
            sum / n as f64
        })
        .collect();
    Ok(PeriodicSpectrum { wavenumbers: (0..=n_max).collect(), coefficients, period })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSample {
    /// Principal argument in `(-pi, pi]`.
    pub phase: f64,
    /// Set when the value was exactly zero and the phase is a placeholder 0.
    pub zero_modulus: bool,
}

pub fn phase_series(spectrum: &DecaySpectrum) -> Vec<PhaseSample> {
    spectrum.values
        .iter()
        .map(|v| {
            if v.norm() == 0.0 {
                PhaseSample { phase: 0.0, zero_modulus: true }
            } else {
                // atan2 returns -pi for (-x, -0.0); fold onto +pi
                let p = v.arg();
                PhaseSample { phase: if p == -PI { PI } else { p }, zero_modulus: false }
            }
        })
        .collect()
}
