//! Model parameters and the right-hand sides of the hybrid evolution.
//!
//! Three equivalent views of the same dynamics are provided:
//! - [`master_rhs`]: the density-matrix equation in the interaction picture,
//!   including the thermal absorption channel;
//! - [`build_m`]: the linear 4x4 generator acting on [`BlochState4`];
//! - [`normalized_rhs`]: the nonlinear equation for the observable averages.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{BlochState4, DensityMatrix2, NormalizedBloch};

/// Parameters in physical units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhysicalParams {
    /// Rabi frequency, rad/time.
    pub omega: f64,
    /// Transition frequency, rad/time.
    pub omega0: f64,
    /// Spontaneous emission rate, 1/time.
    pub gamma0: f64,
    /// Planck occupation at the transition frequency.
    pub n_thermal: f64,
    /// Anti-Hermitian drive strength, 1/time.
    pub alpha: f64,
    /// Anti-Hermitian rate on `sigma_3`, 1/time.
    pub gamma_cap: f64,
    /// Imaginary gauge shift, 1/time.
    pub gauge_t: f64,
}

/// Dimensionless parameters, all rates in units of the Rabi frequency.
///
/// Note the factor four in `g0t = gamma0 / (4 Omega)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReducedParams {
    pub g0t: f64,
    pub at: f64,
    pub gt: f64,
    pub tt: f64,
    pub n_thermal: f64,
}

impl ReducedParams {
    pub fn new(g0t: f64, at: f64, gt: f64, tt: f64) -> Self {
        Self { g0t, at, gt, tt, n_thermal: 0.0 }
    }

    pub fn lindblad(g0t: f64) -> Self {
        Self::new(g0t, 0.0, 0.0, 0.0)
    }

    pub fn anti_hermitian(at: f64, gt: f64) -> Self {
        Self::new(0.0, at, gt, 0.0)
    }

    pub fn with_gauge(self, tt: f64) -> Self {
        Self { tt, ..self }
    }

    pub fn with_thermal(self, n_thermal: f64) -> Self {
        Self { n_thermal, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.g0t, self.at, self.gt, self.tt, self.n_thermal];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        if self.g0t < 0.0 {
            return Err(Error::InvalidParameter(format!("g0t must be >= 0 (got {})", self.g0t)));
        }
        if self.n_thermal < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "n_thermal must be >= 0 (got {})",
                self.n_thermal
            )));
        }
        Ok(())
    }
}

pub fn reduce(p: &PhysicalParams) -> Result<ReducedParams> {
    if !(p.omega > 0.0) {
        return Err(Error::NonPositiveRabi(p.omega));
    }
    let rp = ReducedParams {
        g0t: p.gamma0 / (4.0 * p.omega),
        at: p.alpha / p.omega,
        gt: p.gamma_cap / p.omega,
        tt: p.gauge_t / p.omega,
        n_thermal: p.n_thermal,
    };
    rp.validate()?;
    Ok(rp)
}

/// Real 4x4 matrix in the `(sigma_1, sigma_2, sigma_3, tr)` basis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Matrix4R(pub [[f64; 4]; 4]);

impl Matrix4R {
    pub const fn zero() -> Self {
        Self([[0.0; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::diag([1.0; 4])
    }

    pub fn diag(d: [f64; 4]) -> Self {
        let mut m = Self::zero();
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|v| *v *= k);
        out
    }

    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(&self.0) {
            *o = row.iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn apply_state(&self, b: &BlochState4) -> BlochState4 {
        BlochState4::from_array(self.apply(b.to_array()))
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..4)
            .map(|j| (0..4).map(|i| self.0[i][j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

impl Add for Matrix4R {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        self.0.iter_mut().flatten().zip(o.0.iter().flatten()).for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for Matrix4R {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        self.0.iter_mut().flatten().zip(o.0.iter().flatten()).for_each(|(a, b)| *a -= b);
        self
    }
}

impl Mul for Matrix4R {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * o.0[k][j];
                }
            }
        }
        out
    }
}

/// Generator of the linear 4-vector flow, including the gauge shift
/// `-tt` on the diagonal. Only defined at zero temperature.
pub fn build_m(rp: &ReducedParams) -> Result<Matrix4R> {
    rp.validate()?;
    if rp.n_thermal != 0.0 {
        return Err(Error::ThermalUnsupported(rp.n_thermal));
    }
    let g = rp.g0t;
    let m = Matrix4R([
        [-2.0 * g, 0.0, 0.0, -rp.at],
        [0.0, -2.0 * g, 1.0, 0.0],
        [0.0, -1.0, -4.0 * g, rp.gt - 4.0 * g],
        [-rp.at, 0.0, rp.gt, 0.0],
    ]);
    Ok(m - Matrix4R::identity().scale(rp.tt))
}

/// Hamiltonian drive `(i/2)[sigma_+ + sigma_-, rho]`.
pub fn drive_term(rho: &DensityMatrix2) -> DensityMatrix2 {
    DensityMatrix2::sigma_x().commutator(rho).scale(Complex64::new(0.0, 0.5))
}

/// Anti-Hermitian drive `-(at/2){sigma_+ + sigma_-, rho}`.
pub fn nh_drive_term(rho: &DensityMatrix2, at: f64) -> DensityMatrix2 {
    DensityMatrix2::sigma_x().anticommutator(rho).scale_real(-0.5 * at)
}

/// Emission channel `sigma_- rho sigma_+ - {sigma_+ sigma_-, rho}/2`, unit rate.
pub fn emission_term(rho: &DensityMatrix2) -> DensityMatrix2 {
    let sp = DensityMatrix2::sigma_plus();
    let sm = DensityMatrix2::sigma_minus();
    sm * *rho * sp - (sp * sm).anticommutator(rho).scale_real(0.5)
}

/// Absorption channel `sigma_+ rho sigma_- - {sigma_- sigma_+, rho}/2`, unit rate.
pub fn absorption_term(rho: &DensityMatrix2) -> DensityMatrix2 {
    let sp = DensityMatrix2::sigma_plus();
    let sm = DensityMatrix2::sigma_minus();
    sp * *rho * sm - (sm * sp).anticommutator(rho).scale_real(0.5)
}

/// Anti-Hermitian level term `(gt/2){sigma_3, rho}`.
pub fn level_term(rho: &DensityMatrix2, gt: f64) -> DensityMatrix2 {
    DensityMatrix2::sigma_z().anticommutator(rho).scale_real(0.5 * gt)
}

/// `d rho / d tau` of the hybrid master equation in the interaction picture.
pub fn master_rhs(rho: &DensityMatrix2, rp: &ReducedParams) -> DensityMatrix2 {
    let rate = 4.0 * rp.g0t;
    let mut out = drive_term(rho) + nh_drive_term(rho, rp.at);
    if rate != 0.0 {
        out = out + emission_term(rho).scale_real(rate * (rp.n_thermal + 1.0));
        if rp.n_thermal != 0.0 {
            out = out + absorption_term(rho).scale_real(rate * rp.n_thermal);
        }
    }
    out + level_term(rho, rp.gt) - rho.scale_real(rp.tt)
}

/// Time derivative of the observable averages,
/// `G_eff (x, y, z) + b` with `G_eff = G + F` and `F = at x - gt z`.
///
/// The gauge parameter cancels and is ignored.
pub fn normalized_rhs(nb: &NormalizedBloch, rp: &ReducedParams) -> Result<[f64; 3]> {
    rp.validate()?;
    if rp.n_thermal != 0.0 {
        return Err(Error::ThermalUnsupported(rp.n_thermal));
    }
    let g = rp.g0t;
    let f = rp.at * nb.x - rp.gt * nb.z;
    Ok([
        (f - 2.0 * g) * nb.x - rp.at,
        (f - 2.0 * g) * nb.y + nb.z,
        -nb.y + (f - 4.0 * g) * nb.z + rp.gt - 4.0 * g,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{decompose, reconstruct};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reduce_examples() {
        let p = PhysicalParams {
            omega: 1e6,
            gamma0: 1e5,
            alpha: 2e5,
            gamma_cap: 5e5,
            ..Default::default()
        };
        let rp = reduce(&p).unwrap();
        assert_abs_diff_eq!(rp.g0t, 0.025, epsilon = 1e-15);
        assert_abs_diff_eq!(rp.at, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(rp.gt, 0.5, epsilon = 1e-15);
        assert_eq!(rp.tt, 0.0);

        let rp = reduce(&PhysicalParams { omega: 1.0, ..Default::default() }).unwrap();
        assert_eq!(rp, ReducedParams::default());

        let rp = reduce(&PhysicalParams { omega: 2.0, gamma0: 8.0, ..Default::default() }).unwrap();
        assert_eq!(rp.g0t, 1.0);
    }

    #[test]
    fn reduce_rejects_bad_rabi() {
        for omega in [0.0, -1.0, f64::NAN] {
            let err = reduce(&PhysicalParams { omega, ..Default::default() }).unwrap_err();
            assert!(matches!(err, Error::NonPositiveRabi(_)));
        }
    }

    #[test]
    fn build_m_examples() {
        let m = build_m(&ReducedParams::default()).unwrap();
        assert_eq!(
            m.0,
            [[0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, -1.0, 0.0, 0.0], [0.0; 4]]
        );
        let m = build_m(&ReducedParams::lindblad(0.25)).unwrap();
        assert_eq!(
            m.0,
            [
                [-0.5, 0.0, 0.0, 0.0],
                [0.0, -0.5, 1.0, 0.0],
                [0.0, -1.0, -1.0, -1.0],
                [0.0, 0.0, 0.0, 0.0]
            ]
        );
        let m = build_m(&ReducedParams::anti_hermitian(1.0, 0.0)).unwrap();
        assert_eq!(
            m.0,
            [
                [0.0, 0.0, 0.0, -1.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0, 0.0]
            ]
        );
    }

    #[test]
    fn build_m_refuses_thermal() {
        let rp = ReducedParams::lindblad(0.1).with_thermal(0.5);
        assert!(matches!(build_m(&rp), Err(Error::ThermalUnsupported(_))));
        assert!(normalized_rhs(&NormalizedBloch::ground(), &rp).is_err());
    }

    #[test]
    fn master_rhs_examples() {
        let excited = DensityMatrix2::excited();
        let drive = DensityMatrix2::new([[c(0.0, 0.0), c(0.0, -0.5)], [c(0.0, 0.5), c(0.0, 0.0)]]);
        let out = master_rhs(&excited, &ReducedParams::default());
        assert!(out.max_abs_diff(&drive) < 1e-15);

        let mixed = DensityMatrix2::from_real([[0.5, 0.0], [0.0, 0.5]]);
        let out = master_rhs(&mixed, &ReducedParams::default());
        assert!(out.max_abs_diff(&DensityMatrix2::zero()) < 1e-15);

        let out = master_rhs(&excited, &ReducedParams::lindblad(0.25));
        let expected = DensityMatrix2::from_real([[-1.0, 0.0], [0.0, 1.0]]) + drive;
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn individual_terms() {
        let ground = DensityMatrix2::ground();
        // absorption pumps |g> -> |e>
        let out = absorption_term(&ground);
        assert!(out.max_abs_diff(&DensityMatrix2::from_real([[1.0, 0.0], [0.0, -1.0]])) < 1e-15);
        assert!(emission_term(&ground).max_abs_diff(&DensityMatrix2::zero()) < 1e-15);
        // {sigma_3, |g><g|} = -2 |g><g|
        let out = level_term(&ground, 1.0);
        assert!(out.max_abs_diff(&DensityMatrix2::from_real([[0.0, 0.0], [0.0, -1.0]])) < 1e-15);
        // {sigma_1, |g><g|} = sigma_1
        let out = nh_drive_term(&ground, 2.0);
        assert!(out.max_abs_diff(&DensityMatrix2::sigma_x().scale_real(-1.0)) < 1e-15);
    }

    #[test]
    fn thermal_rhs_is_trace_preserving_and_hermitian() {
        let rp = ReducedParams::lindblad(0.3).with_thermal(0.7);
        let rho = reconstruct(&BlochState4::new(0.2, -0.1, 0.4, 1.0));
        let d = master_rhs(&rho, &rp);
        assert!(d.trace().norm() < 1e-15);
        assert!(d.hermiticity_deviation() < 1e-15);
        // thermal steady z: -1/(2N+1)
        let n = 0.7;
        let z = -1.0 / (2.0 * n + 1.0);
        let ss = reconstruct(&BlochState4::new(0.0, 0.0, z, 1.0));
        let d = emission_term(&ss).scale_real(n + 1.0) + absorption_term(&ss).scale_real(n);
        assert!(d.max_abs_diff(&DensityMatrix2::zero()) < 1e-15);
    }

    #[test]
    fn normalized_rhs_examples() {
        let d = normalized_rhs(&NormalizedBloch::ground(), &ReducedParams::default()).unwrap();
        assert_eq!(d, [0.0, -1.0, 0.0]);
        let rp = ReducedParams::new(0.25, 0.0, 0.5, 0.0);
        let d = normalized_rhs(&NormalizedBloch::default(), &rp).unwrap();
        assert_eq!(d, [0.0, 0.0, -0.5]);
        let nb = NormalizedBloch::new(0.3, -0.2, 0.5);
        let base = normalized_rhs(&nb, &ReducedParams::new(0.1, 0.4, 0.7, 0.0)).unwrap();
        for tt in [0.0, 1.0, -3.0] {
            let d = normalized_rhs(&nb, &ReducedParams::new(0.1, 0.4, 0.7, tt)).unwrap();
            assert_eq!(d, base);
        }
    }

    fn arb_params() -> impl Strategy<Value = ReducedParams> {
        (0.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -1.0..1.0f64)
            .prop_map(|(g, a, gt, tt)| ReducedParams::new(g, a, gt, tt))
    }

    fn arb_state() -> impl Strategy<Value = BlochState4> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, 0.1..3.0f64)
            .prop_map(|(a, b, c, t)| BlochState4::new(a, b, c, t))
    }

    proptest! {
        #[test]
        fn density_and_vector_paths_agree(rp in arb_params(), v in arb_state()) {
            let m = build_m(&rp).unwrap();
            let via_m = m.apply(v.to_array());
            let via_rho = decompose(&master_rhs(&reconstruct(&v), &rp)).unwrap().to_array();
            for (a, b) in via_m.iter().zip(via_rho) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            // trace-rate law
            prop_assert_eq!(via_m[3], -rp.at * v.s1 + rp.gt * v.s3 - rp.tt * v.tr);
        }

        #[test]
        fn gauge_shift_is_diagonal(rp in arb_params(), shift in -3.0..3.0f64) {
            let base = build_m(&rp.with_gauge(0.0)).unwrap();
            let shifted = build_m(&rp.with_gauge(shift)).unwrap();
            prop_assert!(shifted.max_abs_diff(&(base - Matrix4R::identity().scale(shift))) < 1e-15);
        }

        #[test]
        fn normalized_rhs_is_quotient_rule(rp in arb_params(), v in arb_state()) {
            // d(s/tr) = (M v)_s / tr - s (M v)_tr / tr^2
            let mv = build_m(&rp).unwrap().apply(v.to_array());
            let nb = NormalizedBloch::new(v.s1 / v.tr, v.s2 / v.tr, v.s3 / v.tr);
            let got = normalized_rhs(&nb, &rp).unwrap();
            let s = [v.s1, v.s2, v.s3];
            for i in 0..3 {
                let want = mv[i] / v.tr - s[i] * mv[3] / (v.tr * v.tr);
                prop_assert!((got[i] - want).abs() < 1e-11);
            }
        }
    }
}
