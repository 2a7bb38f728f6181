//! Populations and coherences read off the normalized Bloch vector.

use num_complex::Complex64;

use crate::pauli::NormalizedBloch;

/// Expectation value of the raising operator `sigma_+ = (sigma_1 + i sigma_2)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceValue {
    pub value: Complex64,
}

impl CoherenceValue {
    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

/// `p_e = (1 + z)/2`
pub fn upper_population(nb: &NormalizedBloch) -> f64 {
    0.5 * (1.0 + nb.z)
}

/// `p_g = 1 - p_e`
pub fn lower_population(nb: &NormalizedBloch) -> f64 {
    1.0 - upper_population(nb)
}

/// Coherence in the interaction picture, `(x + i y)/2`.
pub fn coherence_interaction(nb: &NormalizedBloch) -> CoherenceValue {
    CoherenceValue { value: Complex64::new(nb.x, nb.y) * 0.5 }
}

/// Schrodinger-picture coherence. `phase = omega_0 t` in radians; the raising
/// operator picks up `e^{+i phase}` while populations are unchanged.
pub fn to_schrodinger_coherence(nb: &NormalizedBloch, phase: f64) -> CoherenceValue {
    CoherenceValue { value: Complex64::from_polar(1.0, phase) * coherence_interaction(nb).value }
}
