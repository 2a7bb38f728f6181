//! Closed-form solutions of the 4-vector flow in its limiting regimes.
//!
//! - Lindblad-only damping (`at = gt = 0`).
//! - Anti-Hermitian-only damping (`g0t = 0`), exponential branch `lambda_4 > 0`.
//! - Anti-Hermitian undamped anharmonic branch (`at = 0`, `|gt| < 1`).
//! - Leading-order strong-driving expansion around the Lindblad limit.
//!
//! Every function here is checked against [`crate::propagator::expm4`] in the
//! tests; the matrix exponential is the reference wherever they disagree.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::Matrix4R;
use crate::pauli::{normalize, BlochState4, NormalizedBloch, TRACE_FLOOR};

/// Below this `|lambda_4|` the anti-Hermitian flow has no exponential mode.
pub const LAMBDA4_EPS: f64 = 1e-10;
/// Below this `|at|` the printed anti-Hermitian matrix is singular.
pub const ALPHA_EPS: f64 = 1e-12;
/// Largest imaginary residue tolerated when collapsing complex arithmetic.
pub const IMAG_TOL: f64 = 1e-10;
/// Small-parameter threshold for the strong-driving expansion.
pub const SD_SMALL: f64 = 0.3;

/// Four eigenvalues of the 4x4 generator, in units of the Rabi frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenQuad(pub [Complex64; 4]);

impl EigenQuad {
    /// Smallest achievable max-distance over all pairings with `other`.
    pub fn distance_to(&self, other: &[Complex64; 4]) -> f64 {
        let mut best = f64::INFINITY;
        let mut perm = [0usize, 1, 2, 3];
        permute(&mut perm, 0, &mut |p| {
            let d = (0..4).map(|i| (self.0[i] - other[p[i]]).norm()).fold(0.0, f64::max);
            best = best.min(d);
        });
        best
    }

    /// True when the multiset is closed under conjugation within `tol`.
    pub fn is_conjugate_closed(&self, tol: f64) -> bool {
        let conj = self.0.map(|z| z.conj());
        self.distance_to(&conj) <= tol
    }
}

fn permute(p: &mut [usize; 4], k: usize, f: &mut impl FnMut(&[usize; 4])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

fn dot(row: &[Complex64; 4], b: &BlochState4) -> Complex64 {
    row.iter().zip(b.to_array()).map(|(r, v)| r * v).sum()
}

fn collapse(z: Complex64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * z.re.abs().max(1.0) {
        return Err(Error::ComplexResidue(z.im));
    }
    Ok(z.re)
}

/// `sin(k tau) / k` together with `cos(k tau)` for `k^2 = q`, real for either
/// sign of `q` (hyperbolic when `q < 0`) and finite at `q = 0`.
fn cos_and_sinc(q: f64, tau: f64) -> (f64, f64) {
    let x2 = q * tau * tau;
    if x2.abs() < 1e-4 {
        // series in x2 = (k tau)^2; truncation ~ x2^4 / 9!
        let c = 1.0 - x2 / 2.0 + x2 * x2 / 24.0 - x2 * x2 * x2 / 720.0;
        let s = tau * (1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0);
        (c, s)
    } else if q > 0.0 {
        let k = q.sqrt();
        ((k * tau).cos(), (k * tau).sin() / k)
    } else {
        let k = (-q).sqrt();
        ((k * tau).cosh(), (k * tau).sinh() / k)
    }
}

/// `kappa = sqrt(1 - g0t^2)` (imaginary above critical damping) and
/// `nu^2 = 1 + 1/(2 g0t^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladAux {
    pub kappa: Complex64,
    pub nu_sq: f64,
}

impl LindbladAux {
    pub fn new(g0t: f64) -> Self {
        Self {
            kappa: Complex64::new(1.0 - g0t * g0t, 0.0).sqrt(),
            nu_sq: 1.0 + 1.0 / (2.0 * g0t * g0t),
        }
    }
}

fn check_g0t(g0t: f64) -> Result<()> {
    if !(g0t >= 0.0 && g0t.is_finite()) {
        return Err(Error::InvalidParameter(format!("g0t must be >= 0 (got {g0t})")));
    }
    Ok(())
}

pub fn lindblad_eigenvalues(g0t: f64) -> Result<EigenQuad> {
    check_g0t(g0t)?;
    let kappa = LindbladAux::new(g0t).kappa;
    let i = Complex64::i();
    let d = Complex64::new(-3.0 * g0t, 0.0);
    Ok(EigenQuad([
        Complex64::new(-2.0 * g0t, 0.0),
        d - i * kappa,
        d + i * kappa,
        Complex64::new(0.0, 0.0),
    ]))
}

/// Solution matrix of the Lindblad-only flow at time `tau`.
///
/// The `sin(kappa tau)/kappa` factors are evaluated as a sinc, so critical
/// damping `g0t = 1` is covered as the regular limit.
pub fn lindblad_matrix(g0t: f64, tau: f64) -> Result<Matrix4R> {
    check_g0t(g0t)?;
    let g = g0t;
    let (c, s) = cos_and_sinc(1.0 - g * g, tau);
    let e2 = (-2.0 * g * tau).exp();
    let e3 = (-3.0 * g * tau).exp();
    let f = |k: f64| c + k * g * s;
    let denom = 8.0 * g * g + 1.0;
    // 8g^2 f_{-nu^2} with the 1/g^2 inside nu^2 cancelled by hand
    let z_from_tr = (8.0 * g * g * (c * e3 - 1.0) - (8.0 * g * g * g + 4.0 * g) * s * e3) / denom;
    Ok(Matrix4R([
        [e2, 0.0, 0.0, 0.0],
        [0.0, f(1.0) * e3, s * e3, 4.0 * g / denom * (f(3.0) * e3 - 1.0)],
        [0.0, -s * e3, f(-1.0) * e3, z_from_tr],
        [0.0, 0.0, 0.0, 1.0],
    ]))
}

pub fn lindblad_solution(g0t: f64, b0: &BlochState4, tau: f64) -> Result<BlochState4> {
    Ok(lindblad_matrix(g0t, tau)?.apply_state(b0))
}

/// `-(4 g0t / (8 g0t^2 + 1)) (0, 1, 2 g0t)`
pub fn lindblad_steady(g0t: f64) -> Result<NormalizedBloch> {
    check_g0t(g0t)?;
    if g0t == 0.0 {
        return Err(Error::Undamped);
    }
    let k = -4.0 * g0t / (8.0 * g0t * g0t + 1.0);
    Ok(NormalizedBloch::new(0.0, k, 2.0 * g0t * k))
}

/// Auxiliary quantities of the anti-Hermitian-only flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AHAux {
    pub at: f64,
    pub gt: f64,
    pub r_plus: f64,
    pub r_minus: f64,
    pub r1: f64,
    pub k_plus: f64,
    pub k_minus: f64,
    /// `(lambda_1, lambda_2, lambda_3, lambda_4) = (-l2, l2, -l4, l4)`;
    /// `lambda_2` is imaginary, `lambda_4` real and non-negative.
    pub lambdas: EigenQuad,
    /// `lambda_bar_k = lambda_k + 1/lambda_k` for `k = 2, 4`.
    pub lambda_bars: [Complex64; 2],
}

impl AHAux {
    pub fn lambda2(&self) -> Complex64 {
        self.lambdas.0[1]
    }

    pub fn lambda4(&self) -> Complex64 {
        self.lambdas.0[3]
    }
}

pub fn ah_eigenvalues(at: f64, gt: f64) -> AHAux {
    let a2 = at * at;
    let r_plus = a2 + (gt * gt - 1.0);
    let r_minus = a2 - (gt * gt - 1.0);
    let r1 = (r_plus * r_plus + 4.0 * a2).sqrt();
    // l2^2 * l4^2 = -at^2 fixes whichever root suffers cancellation
    let (l2_sq_abs, l4_sq) = if r_plus >= 0.0 {
        let l4_sq = (r_plus + r1) / 2.0;
        let l2 = if l4_sq > 0.0 { a2 / l4_sq } else { (r1 - r_plus) / 2.0 };
        (l2, l4_sq)
    } else {
        let l2 = (r1 - r_plus) / 2.0;
        (l2, if l2 > 0.0 { a2 / l2 } else { 0.0 })
    };
    let l2 = Complex64::new(0.0, l2_sq_abs.sqrt());
    let l4 = Complex64::new(l4_sq.sqrt(), 0.0);
    // K+ K- = 4 at^2 gt^2
    let kk = 4.0 * a2 * gt * gt;
    let (k_plus, k_minus) = if r_minus >= 0.0 {
        let kp = r1 + r_minus;
        (kp, if kp > 0.0 { kk / kp } else { 0.0 })
    } else {
        let km = r1 - r_minus;
        (if km > 0.0 { kk / km } else { 0.0 }, km)
    };
    AHAux {
        at,
        gt,
        r_plus,
        r_minus,
        r1,
        k_plus,
        k_minus,
        lambdas: EigenQuad([-l2, l2, -l4, l4]),
        lambda_bars: [l2 + l2.inv(), l4 + l4.inv()],
    }
}

fn check_exponential_branch(aux: &AHAux) -> Result<()> {
    if aux.lambda4().norm() < LAMBDA4_EPS {
        return Err(Error::OscillatoryRegime);
    }
    if aux.at.abs() < ALPHA_EPS {
        return Err(Error::SingularAlpha);
    }
    Ok(())
}

/// `R_1 S_(A)(tau)` as complex rows (the overall `1/R_1` is left out).
fn ah_rows(aux: &AHAux, tau: f64) -> [[Complex64; 4]; 4] {
    let (a, g) = (aux.at, aux.gt);
    let l2 = aux.lambda2();
    let l4 = aux.lambda4();
    let [lb2, lb4] = aux.lambda_bars;
    let (ch2, ch4) = ((l2 * tau).cosh(), (l4 * tau).cosh());
    let (sh2, sh4) = ((l2 * tau).sinh(), (l4 * tau).sinh());
    let cc = |k1: Complex64, k2: Complex64| k1 * ch2 + k2 * ch4;
    let ss = |k1: Complex64, k2: Complex64| k1 * sh2 + k2 * sh4;
    let r = |x: f64| Complex64::new(x, 0.0);
    let one = r(1.0);
    let c_1m1 = cc(one, -one);
    let s_g = ss(-l2, l4);
    let l24 = l2 * l4;
    let s_bar = ss(lb4, -lb2);
    [
        [
            cc(r(aux.k_minus), r(aux.k_plus)) * 0.5,
            ss(-l2.inv(), l4.inv()) * (a * g),
            c_1m1 * (a * g),
            ss(lb2, -lb4) * a,
        ],
        [
            ss(-l4, l2) * l24 * (g / a),
            cc(l4 * lb4, -l2 * lb2),
            -l24 * s_bar,
            -c_1m1 * g,
        ],
        [c_1m1 * (a * g), l24 * s_bar, cc(r(aux.k_plus), r(aux.k_minus)) * 0.5, s_g * g],
        [
            ss(l2 * aux.k_minus, l4 * aux.k_plus) * (-0.5 / a),
            c_1m1 * g,
            s_g * g,
            cc(-l2 * lb2, l4 * lb4),
        ],
    ]
}

/// Solution matrix of the anti-Hermitian-only flow (exponential branch).
pub fn ah_matrix(at: f64, gt: f64, tau: f64) -> Result<Matrix4R> {
    let aux = ah_eigenvalues(at, gt);
    check_exponential_branch(&aux)?;
    let rows = ah_rows(&aux, tau);
    let mut out = Matrix4R::zero();
    for (o, row) in out.0.iter_mut().zip(rows) {
        for (v, z) in o.iter_mut().zip(row) {
            *v = collapse(z / aux.r1)?;
        }
    }
    Ok(out)
}

pub fn ah_solution(at: f64, gt: f64, b0: &BlochState4, tau: f64) -> Result<BlochState4> {
    let aux = ah_eigenvalues(at, gt);
    check_exponential_branch(&aux)?;
    let rows = ah_rows(&aux, tau);
    let mut out = [0.0; 4];
    for (o, row) in out.iter_mut().zip(&rows) {
        *o = collapse(dot(row, b0) / aux.r1)?;
    }
    Ok(BlochState4::from_array(out))
}

/// Observable averages, the first three rows divided by the trace row.
pub fn ah_normalized(at: f64, gt: f64, b0: &BlochState4, tau: f64) -> Result<NormalizedBloch> {
    let aux = ah_eigenvalues(at, gt);
    check_exponential_branch(&aux)?;
    let rows = ah_rows(&aux, tau);
    let trace = collapse(dot(&rows[3], b0))?;
    if !(trace / aux.r1 > TRACE_FLOOR) {
        return Err(Error::TraceCollapse { trace: trace / aux.r1 });
    }
    let x = collapse(dot(&rows[0], b0))?;
    let y = collapse(dot(&rows[1], b0))?;
    let z = collapse(dot(&rows[2], b0))?;
    Ok(NormalizedBloch::new(x / trace, y / trace, z / trace))
}

/// `(1/(l4 lb4)) (-at lb4, gt, l4 gt)`, independent of the initial state.
pub fn ah_steady(at: f64, gt: f64) -> Result<NormalizedBloch> {
    let aux = ah_eigenvalues(at, gt);
    let l4 = aux.lambda4().re;
    if l4 < LAMBDA4_EPS {
        return Err(Error::OscillatoryRegime);
    }
    let lb4 = aux.lambda_bars[1].re;
    let d = l4 * lb4;
    Ok(NormalizedBloch::new(-at * lb4 / d, gt / d, l4 * gt / d))
}

/// `omega_Gamma = sqrt(1 - gt^2)` of the undamped branch.
pub fn oscillation_frequency(gt: f64) -> Result<f64> {
    if !(gt.abs() < 1.0) {
        return Err(Error::NotOscillatory(gt.abs()));
    }
    Ok((1.0 - gt * gt).sqrt())
}

/// Period `2 pi / omega_Gamma` of the undamped branch.
pub fn oscillation_period(gt: f64) -> Result<f64> {
    Ok(2.0 * std::f64::consts::PI / oscillation_frequency(gt)?)
}

/// Non-normalized state of the undamped branch (`at = g0t = 0`), scaled by
/// `omega_Gamma^2`. `s1` is frozen; `(s2, s3, tr)` oscillate.
pub fn ah_oscillatory_scaled(gt: f64, b0: &BlochState4, tau: f64) -> Result<BlochState4> {
    let w = oscillation_frequency(gt)?;
    let w2 = w * w;
    let (c, s) = ((w * tau).cos(), (w * tau).sin());
    let drive = gt * b0.tr - b0.s2;
    Ok(BlochState4::new(
        w2 * b0.s1,
        gt * b0.tr - gt * gt * b0.s2 - drive * c + w * b0.s3 * s,
        w2 * b0.s3 * c + w * drive * s,
        b0.tr - gt * b0.s2 - gt * drive * c + gt * w * b0.s3 * s,
    ))
}

/// Non-normalized state of the undamped branch.
pub fn ah_oscillatory_state(gt: f64, b0: &BlochState4, tau: f64) -> Result<BlochState4> {
    let w2 = 1.0 - gt * gt;
    Ok(ah_oscillatory_scaled(gt, b0, tau)?.scale(1.0 / w2))
}

/// Observable averages of the undamped anharmonic branch.
pub fn ah_oscillatory(gt: f64, b0: &BlochState4, tau: f64) -> Result<NormalizedBloch> {
    normalize(&ah_oscillatory_scaled(gt, b0, tau)?)
}

/// Strong-driving auxiliaries. The small ratios are taken relative to the
/// reduced emission rate: `at = g0t * alpha_bar`, `gt = g0t * gamma_bar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SDAux {
    pub g0t: f64,
    pub alpha_bar: f64,
    pub gamma_bar: f64,
    pub at: f64,
    pub gt: f64,
    pub chi1: f64,
    pub chi2: f64,
}

impl SDAux {
    pub fn new(g0t: f64, alpha_bar: f64, gamma_bar: f64) -> Self {
        Self {
            g0t,
            alpha_bar,
            gamma_bar,
            at: g0t * alpha_bar,
            gt: g0t * gamma_bar,
            chi1: 1.0 + (2.0 * gamma_bar - 0.5) * g0t * g0t,
            chi2: alpha_bar * alpha_bar / 4.0,
        }
    }

    /// Parameters from reduced rates; requires `g0t > 0`.
    pub fn from_reduced(g0t: f64, at: f64, gt: f64) -> Result<Self> {
        if !(g0t > 0.0) {
            return Err(Error::InvalidParameter("strong-driving expansion needs g0t > 0".into()));
        }
        Ok(Self::new(g0t, at / g0t, gt / g0t))
    }

    /// Names of the small parameters exceeding [`SD_SMALL`].
    pub fn regime_warnings(&self) -> Vec<String> {
        [
            ("g0t", self.g0t),
            ("at", self.at),
            ("gt", self.gt),
            ("alpha_bar", self.alpha_bar),
            ("gamma_bar", self.gamma_bar),
        ]
        .iter()
        .filter(|(_, v)| v.abs() > SD_SMALL)
        .map(|(name, v)| format!("{name} = {v} is not small (> {SD_SMALL})"))
        .collect()
    }

    pub fn is_small(&self) -> bool {
        self.regime_warnings().is_empty()
    }
}

pub fn sd_eigenvalues(g0t: f64, alpha_bar: f64, gamma_bar: f64) -> EigenQuad {
    let aux = SDAux::new(g0t, alpha_bar, gamma_bar);
    let g = g0t;
    EigenQuad([
        Complex64::new(-2.0 * g - 2.0 * g * aux.chi2, 0.0),
        Complex64::new(-3.0 * g, -aux.chi1),
        Complex64::new(-3.0 * g, aux.chi1),
        Complex64::new(2.0 * g * aux.chi2, 0.0),
    ])
}

/// Leading-order solution matrix, the sum of the unperturbed, `alpha` and
/// `Gamma` blocks.
pub fn sd_matrix(g0t: f64, alpha_bar: f64, gamma_bar: f64, tau: f64) -> Matrix4R {
    let aux = SDAux::new(g0t, alpha_bar, gamma_bar);
    let (g, ab, at, gt) = (g0t, alpha_bar, aux.at, aux.gt);
    let e3 = (-3.0 * g * tau).exp();
    let grow = (2.0 * g * aux.chi2 * tau).exp();
    let damp = (-2.0 * g * (1.0 + aux.chi2) * tau).exp();
    let (c, s) = ((aux.chi1 * tau).cos(), (aux.chi1 * tau).sin());
    let h1 = 0.5 * (damp - grow);
    let h2 = c * e3 - grow;
    let (hp, hm) = (c + g * s, c - g * s);
    let se = s * e3;

    let base = Matrix4R([
        [damp, 0.0, 0.0, 0.0],
        [0.0, hp * e3, se, 4.0 * g * h2],
        [0.0, -se, hm * e3, -4.0 * g * se],
        [0.0, 0.0, 0.0, grow],
    ]);
    let alpha = Matrix4R([
        [0.0, 0.0, 0.0, h1],
        [-4.0 * g * h1, 0.0, 0.0, 0.0],
        [-4.0 * g * g * h2, 0.0, 0.0, 0.0],
        [h1, 0.0, 0.0, 0.0],
    ])
    .scale(ab);
    let gamma = Matrix4R([
        [0.0, -ab * h1, at * h2, 0.0],
        [ab * h1, 0.0, 0.0, -h2],
        [at * h2, 0.0, 0.0, se],
        [0.0, h2, se, 0.0],
    ])
    .scale(gt);
    base + alpha + gamma
}

pub fn sd_solution(
    g0t: f64,
    alpha_bar: f64,
    gamma_bar: f64,
    b0: &BlochState4,
    tau: f64,
) -> Result<(BlochState4, NormalizedBloch)> {
    check_g0t(g0t)?;
    let state = sd_matrix(g0t, alpha_bar, gamma_bar, tau).apply_state(b0);
    if !(state.tr > 0.0) {
        return Err(Error::TraceCollapse { trace: state.tr });
    }
    Ok((state, normalize(&state)?))
}

/// `(-alpha_bar/2 - 2 at gt, gt - 4 g0t, 2 g0t (gt - 4 g0t))`
pub fn sd_steady(g0t: f64, alpha_bar: f64, gamma_bar: f64) -> NormalizedBloch {
    let aux = SDAux::new(g0t, alpha_bar, gamma_bar);
    let y = aux.gt - 4.0 * g0t;
    NormalizedBloch::new(-0.5 * alpha_bar - 2.0 * aux.at * aux.gt, y, 2.0 * g0t * y)
}
