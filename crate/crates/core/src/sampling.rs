//! Random valid X states for property checks and verification runs.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::xstate::XState;

/// Populations from four normalized `−ln U` weights; ρ₂₃ uniform in the
/// disk of radius `√(p22 p33)`.
pub fn random_xstate<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let weights: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.gen::<f64>()).ln());
    let total: f64 = weights.iter().sum();
    let [p11, p22, p33, p44] = weights.map(|w| w / total);
    let radius = (p22 * p33).sqrt() * rng.gen::<f64>().sqrt();
    let angle = rng.gen::<f64>() * TAU;
    XState::new(p11, p22, p33, p44, Complex64::from_polar(radius, angle)).expect("sampled state is valid")
}
