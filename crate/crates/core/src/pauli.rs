//! 2x2 complex algebra and the Pauli-basis decomposition of density matrices.
//!
//! Index convention: row/column 0 is the excited state |e>, row/column 1 the
//! ground state |g>. With this ordering `<sigma_3> = +1` means fully excited.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Input tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-9;

/// Traces at or below this are treated as a collapsed state.
pub const TRACE_FLOOR: f64 = 1e-300;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 2x2 complex matrix, used for density matrices and operators alike.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    pub m: [[Complex64; 2]; 2],
}

impl DensityMatrix2 {
    pub const fn new(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub const fn zero() -> Self {
        Self::new([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Self::new([[ONE, ZERO], [ZERO, ONE]])
    }

    /// Build from real entries.
    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Self::new([
            [Complex64::new(m[0][0], 0.0), Complex64::new(m[0][1], 0.0)],
            [Complex64::new(m[1][0], 0.0), Complex64::new(m[1][1], 0.0)],
        ])
    }

    /// `sigma_1`
    pub const fn sigma_x() -> Self {
        Self::new([[ZERO, ONE], [ONE, ZERO]])
    }

    /// `sigma_2`
    pub fn sigma_y() -> Self {
        Self::new([[ZERO, -I], [I, ZERO]])
    }

    /// `sigma_3 = |e><e| - |g><g|`
    pub fn sigma_z() -> Self {
        Self::new([[ONE, ZERO], [ZERO, -ONE]])
    }

    /// Raising operator `|e><g|`.
    pub const fn sigma_plus() -> Self {
        Self::new([[ZERO, ONE], [ZERO, ZERO]])
    }

    /// Lowering operator `|g><e|`.
    pub const fn sigma_minus() -> Self {
        Self::new([[ZERO, ZERO], [ONE, ZERO]])
    }

    /// Excited-state projector.
    pub const fn excited() -> Self {
        Self::new([[ONE, ZERO], [ZERO, ZERO]])
    }

    /// Ground-state projector.
    pub const fn ground() -> Self {
        Self::new([[ZERO, ZERO], [ZERO, ONE]])
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::new([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.m;
        Self::new([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_deviation(&self) -> f64 {
        let m = &self.m;
        let off = (m[1][0] - m[0][1].conj()).norm();
        off.max(m[0][0].im.abs()).max(m[1][1].im.abs())
    }

    /// `(rho + rho^dagger) / 2`
    pub fn hermitized(&self) -> Self {
        (*self + self.adjoint()).scale_real(0.5)
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for DensityMatrix2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for DensityMatrix2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

impl Mul for DensityMatrix2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// Pauli coordinates `(<sigma_1>, <sigma_2>, <sigma_3>, tr rho)` of a
/// possibly non-normalized density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochState4 {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub tr: f64,
}

impl BlochState4 {
    pub const fn new(s1: f64, s2: f64, s3: f64, tr: f64) -> Self {
        Self { s1, s2, s3, tr }
    }

    /// Unit-trace state with the given normalized Bloch vector.
    pub fn from_normalized(nb: NormalizedBloch) -> Self {
        Self::new(nb.x, nb.y, nb.z, 1.0)
    }

    /// The ground state `(0, 0, -1, 1)`.
    pub const fn ground() -> Self {
        Self::new(0.0, 0.0, -1.0, 1.0)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.s1, self.s2, self.s3, self.tr]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.s1 * k, self.s2 * k, self.s3 * k, self.tr * k)
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Observable averages `<sigma_i'>` of the trace-normalized state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NormalizedBloch {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl NormalizedBloch {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub const fn ground() -> Self {
        Self::new(0.0, 0.0, -1.0)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        (self.x - o.x).abs().max((self.y - o.y).abs()).max((self.z - o.z).abs())
    }
}

/// `s_i = tr(sigma_i rho)`, `tr = rho_11 + rho_22`.
///
/// Fails if `rho` is not Hermitian within [`HERMITICITY_TOL`]; the input is
/// never symmetrized silently.
pub fn decompose(rho: &DensityMatrix2) -> Result<BlochState4> {
    let deviation = rho.hermiticity_deviation();
    if deviation > HERMITICITY_TOL || deviation.is_nan() {
        return Err(Error::HermiticityViolated { deviation });
    }
    let m = &rho.m;
    Ok(BlochState4 {
        s1: (m[0][1] + m[1][0]).re,
        s2: (I * (m[0][1] - m[1][0])).re,
        s3: (m[0][0] - m[1][1]).re,
        tr: (m[0][0] + m[1][1]).re,
    })
}

/// `rho = (I tr + sum_i sigma_i s_i) / 2`
pub fn reconstruct(b: &BlochState4) -> DensityMatrix2 {
    DensityMatrix2::new([
        [
            Complex64::new(0.5 * (b.tr + b.s3), 0.0),
            Complex64::new(0.5 * b.s1, -0.5 * b.s2),
        ],
        [
            Complex64::new(0.5 * b.s1, 0.5 * b.s2),
            Complex64::new(0.5 * (b.tr - b.s3), 0.0),
        ],
    ])
}

pub fn normalize(b: &BlochState4) -> Result<NormalizedBloch> {
    if !(b.tr > TRACE_FLOOR) {
        return Err(Error::TraceCollapse { trace: b.tr });
    }
    Ok(NormalizedBloch::new(b.s1 / b.tr, b.s2 / b.tr, b.s3 / b.tr))
}

/// `x^2 + y^2 + z^2`, which equals `1 - 4 det(rho / tr rho)`.
pub fn bloch_norm_sq(nb: &NormalizedBloch) -> f64 {
    nb.x * nb.x + nb.y * nb.y + nb.z * nb.z
}
