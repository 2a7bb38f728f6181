//! Time evolution: the 4x4 matrix exponential, fixed-step RK4 on the
//! density matrix, and steady-state extraction.

use crate::error::{Error, Result};
use crate::model::{build_m, master_rhs, Matrix4R, ReducedParams};
use crate::pauli::{
    decompose, normalize, BlochState4, DensityMatrix2, NormalizedBloch, TRACE_FLOOR,
};

/// Entries beyond this magnitude are reported as overflow.
pub const OVERFLOW_LIMIT: f64 = 1e300;

/// Maximum number of RK4 steps a single run may request.
pub const MAX_RK_STEPS: f64 = 1e8;

/// Sampling grid for a trajectory: output every `dt` up to `tau_max`,
/// with `rk_substeps` RK4 steps per output interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub tau_max: f64,
    pub dt: f64,
    pub rk_substeps: usize,
}

impl EvolveConfig {
    pub fn new(tau_max: f64, dt: f64, rk_substeps: usize) -> Self {
        Self { tau_max, dt, rk_substeps }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_max > 0.0 && self.tau_max.is_finite()) {
            return Err(Error::InvalidConfig(format!("tau_max must be > 0 (got {})", self.tau_max)));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt must be > 0 (got {})", self.dt)));
        }
        if self.dt > self.tau_max {
            return Err(Error::InvalidConfig("dt must not exceed tau_max".into()));
        }
        if self.rk_substeps == 0 {
            return Err(Error::InvalidConfig("rk_substeps must be >= 1".into()));
        }
        if self.rk_substeps as f64 * (self.tau_max / self.dt) > MAX_RK_STEPS {
            return Err(Error::InvalidConfig("requested step count exceeds 1e8".into()));
        }
        Ok(())
    }

    /// Number of output intervals; samples are `k * dt` for `k = 0..=steps()`.
    pub fn steps(&self) -> usize {
        (self.tau_max / self.dt + 1e-9).floor() as usize
    }

    pub fn taus(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps()).map(move |k| k as f64 * self.dt)
    }
}

/// Sampled evolution. `normalized[k]` is always `normalize(states[k])`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub taus: Vec<f64>,
    pub states: Vec<BlochState4>,
    pub normalized: Vec<NormalizedBloch>,
}

impl Trajectory {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            taus: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            normalized: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, tau: f64, state: BlochState4) -> Result<()> {
        let nb = normalize(&state)?;
        self.taus.push(tau);
        self.states.push(state);
        self.normalized.push(nb);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    /// Largest componentwise difference of the normalized series.
    pub fn max_normalized_diff(&self, other: &Trajectory) -> f64 {
        self.normalized
            .iter()
            .zip(&other.normalized)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

// Padé(13) numerator coefficients (the denominator uses alternating signs).
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

#[allow(clippy::needless_range_loop)]
fn solve4(a: &Matrix4R, b: &Matrix4R) -> Matrix4R {
    // Gaussian elimination with partial pivoting on [a | b].
    let mut a = a.0;
    let mut x = b.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        a.swap(col, pivot);
        x.swap(col, pivot);
        let d = a[col][col];
        for row in col + 1..4 {
            let f = a[row][col] / d;
            if f == 0.0 {
                continue;
            }
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            for k in 0..4 {
                x[row][k] -= f * x[col][k];
            }
        }
    }
    for col in (0..4).rev() {
        for k in 0..4 {
            let mut s = x[col][k];
            for j in col + 1..4 {
                s -= a[col][j] * x[j][k];
            }
            x[col][k] = s / a[col][col];
        }
    }
    Matrix4R(x)
}

fn pade13(a: &Matrix4R) -> Matrix4R {
    let b = &PADE13;
    let id = Matrix4R::identity();
    let a2 = *a * *a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let u_inner = a6 * (a6.scale(b[13]) + a4.scale(b[11]) + a2.scale(b[9]))
        + a6.scale(b[7])
        + a4.scale(b[5])
        + a2.scale(b[3])
        + id.scale(b[1]);
    let u = *a * u_inner;
    let v = a6 * (a6.scale(b[12]) + a4.scale(b[10]) + a2.scale(b[8]))
        + a6.scale(b[6])
        + a4.scale(b[4])
        + a2.scale(b[2])
        + id.scale(b[0]);
    solve4(&(v - u), &(v + u))
}

/// `exp(m * tau)` by scaling and squaring around a Padé(13) core.
pub fn expm4(m: &Matrix4R, tau: f64) -> Result<Matrix4R> {
    if !m.is_finite() || !tau.is_finite() {
        return Err(Error::InvalidParameter("expm4 input must be finite".into()));
    }
    let a = m.scale(tau);
    let norm = a.norm1();
    let squarings = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    if squarings > 1000 {
        return Err(Error::PropagatorOverflow);
    }
    let mut r = pade13(&a.scale(0.5f64.powi(squarings)));
    for _ in 0..squarings {
        r = r * r;
        if !r.is_finite() || r.max_abs() > OVERFLOW_LIMIT {
            return Err(Error::PropagatorOverflow);
        }
    }
    if !r.is_finite() || r.max_abs() > OVERFLOW_LIMIT {
        return Err(Error::PropagatorOverflow);
    }
    Ok(r)
}

/// Exact linear propagation `states[k] = exp(M tau_k) b0`.
pub fn evolve_linear(rp: &ReducedParams, b0: &BlochState4, cfg: &EvolveConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let m = build_m(rp)?;
    let mut traj = Trajectory::with_capacity(cfg.steps() + 1);
    for tau in cfg.taus() {
        let state = expm4(&m, tau)?.apply_state(b0);
        traj.push(tau, state)?;
    }
    Ok(traj)
}

fn rk4_step(rho: &DensityMatrix2, rp: &ReducedParams, h: f64) -> DensityMatrix2 {
    let k1 = master_rhs(rho, rp);
    let k2 = master_rhs(&(*rho + k1.scale_real(0.5 * h)), rp);
    let k3 = master_rhs(&(*rho + k2.scale_real(0.5 * h)), rp);
    let k4 = master_rhs(&(*rho + k3.scale_real(h)), rp);
    *rho + (k1 + k2.scale_real(2.0) + k3.scale_real(2.0) + k4).scale_real(h / 6.0)
}

/// Classic RK4 on the density-matrix equation. Works at any thermal
/// occupation.
pub fn evolve_rk4(rp: &ReducedParams, rho0: &DensityMatrix2, cfg: &EvolveConfig) -> Result<Trajectory> {
    cfg.validate()?;
    rp.validate()?;
    let first = decompose(rho0)?;
    if !(first.tr > TRACE_FLOOR) {
        return Err(Error::TraceCollapse { trace: first.tr });
    }
    let h = cfg.dt / cfg.rk_substeps as f64;
    let mut rho = *rho0;
    let mut traj = Trajectory::with_capacity(cfg.steps() + 1);
    traj.push(0.0, first)?;
    for k in 1..=cfg.steps() {
        for _ in 0..cfg.rk_substeps {
            rho = rk4_step(&rho, rp, h).hermitized();
        }
        let tau = k as f64 * cfg.dt;
        if !rho.is_finite() {
            return Err(Error::Diverged { tau });
        }
        let state = decompose(&rho)?;
        if !(state.tr > TRACE_FLOOR) {
            return Err(Error::TraceCollapse { trace: state.tr });
        }
        traj.push(tau, state)?;
    }
    Ok(traj)
}

/// Normalized states on the uniform grid `k * step`, `k = 0..count`.
///
/// Propagates with one fixed step matrix and rescales after every step,
/// so arbitrarily long horizons never overflow.
pub fn normalized_samples(
    rp: &ReducedParams,
    b0: &BlochState4,
    step: f64,
    count: usize,
) -> Result<Vec<NormalizedBloch>> {
    let p = expm4(&build_m(rp)?, step)?;
    let mut v = *b0;
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        out.push(normalize(&v)?);
        if k + 1 < count {
            v = p.apply_state(&v);
            v = v.scale(1.0 / v.tr);
            if !v.is_finite() {
                return Err(Error::Diverged { tau: (k + 1) as f64 * step });
            }
        }
    }
    Ok(out)
}

const STEADY_START_TAU: f64 = 1e3;
const STEADY_MAX_TAU: f64 = 1e6;
const STEADY_TOL: f64 = 1e-10;

/// Normalized long-time limit, found by propagating a generic initial state
/// until the normalized averages stop changing between `tau` and `2 tau`.
pub fn steady_state(rp: &ReducedParams) -> Result<NormalizedBloch> {
    let m = build_m(rp)?;
    // chunk length keeps each step matrix well inside f64 range
    let chunk = (8.0 / m.norm1().max(1e-3)).min(10.0);
    let p = expm4(&m, chunk)?;
    let mut v = [0.13, -0.21, -0.37, 1.0];
    let mut tau = 0.0;
    let mut target = STEADY_START_TAU;
    let mut previous: Option<NormalizedBloch> = None;
    loop {
        while tau < target {
            v = p.apply(v);
            let scale = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            if !(scale.is_finite() && scale > 0.0) {
                return Err(Error::Diverged { tau });
            }
            v.iter_mut().for_each(|x| *x /= scale);
            tau += chunk;
        }
        let current = normalize(&BlochState4::from_array(v))?;
        if let Some(prev) = previous {
            if prev.max_abs_diff(&current) < STEADY_TOL {
                return Ok(current);
            }
        }
        if target >= STEADY_MAX_TAU {
            return Err(Error::NoSteadyState);
        }
        previous = Some(current);
        target *= 2.0;
    }
}
