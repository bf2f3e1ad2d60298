//! Two-qubit X-form density matrices.
//!
//! Basis order is |11⟩, |10⟩, |01⟩, |00⟩ with atom A in the first slot and
//! `1` the excited level. Only ρ₁₁…ρ₄₄ and ρ₂₃ are stored; ρ₃₂ is always
//! `conj(ρ₂₃)` and the outer anti-diagonal (ρ₁₄) is zero.

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for trace, positivity and population clamping.
pub const STATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum XStateError {
    #[error("non-finite matrix element")]
    NonFinite,
    #[error("trace = {0}, expected 1")]
    Trace(f64),
    #[error("negative population p{index} = {value}")]
    NegativePopulation { index: usize, value: f64 },
    #[error("coherence violates positivity: |c23|^2 = {coherence_sq} > p22*p33 = {bound}")]
    Positivity { coherence_sq: f64, bound: f64 },
    #[error("Werner parameter r = {0} outside [0, 1]")]
    WernerDomain(f64),
}

/// Validated X state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    p11: f64,
    p22: f64,
    p33: f64,
    p44: f64,
    c23: Complex64,
}

impl XState {
    /// Validates the five independent elements at the default tolerance.
    ///
    /// Populations in `[-1e-12, 0)` are clamped to zero. The trace is not
    /// renormalized.
    pub fn new(p11: f64, p22: f64, p33: f64, p44: f64, c23: Complex64) -> Result<Self, XStateError> {
        Self::with_tolerance(p11, p22, p33, p44, c23, STATE_TOL)
    }

    /// Same as [`XState::new`] with a caller-chosen tolerance.
    pub fn with_tolerance(
        p11: f64,
        p22: f64,
        p33: f64,
        p44: f64,
        c23: Complex64,
        tol: f64,
    ) -> Result<Self, XStateError> {
        let mut pops = [p11, p22, p33, p44];
        if pops.iter().any(|p| !p.is_finite()) || !c23.re.is_finite() || !c23.im.is_finite() {
            return Err(XStateError::NonFinite);
        }
        for (i, p) in pops.iter_mut().enumerate() {
            if *p < 0.0 {
                if *p < -tol {
                    return Err(XStateError::NegativePopulation {
                        index: 11 * (i + 1),
                        value: *p,
                    });
                }
                *p = 0.0;
            }
        }
        let trace: f64 = pops.iter().sum();
        if (trace - 1.0).abs() > tol {
            return Err(XStateError::Trace(trace));
        }
        let coherence_sq = c23.norm_sqr();
        let bound = pops[1] * pops[2];
        if coherence_sq > bound + tol {
            return Err(XStateError::Positivity { coherence_sq, bound });
        }
        let [p11, p22, p33, p44] = pops;
        Ok(Self {
            p11,
            p22,
            p33,
            p44,
            c23,
        })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            p11: 0.25,
            p22: 0.25,
            p33: 0.25,
            p44: 0.25,
            c23: Complex64::new(0.0, 0.0),
        }
    }

    /// |ψ⁺⟩ = (|10⟩ + |01⟩)/√2.
    pub fn bell_psi_plus() -> Self {
        Self {
            p11: 0.0,
            p22: 0.5,
            p33: 0.5,
            p44: 0.0,
            c23: Complex64::new(0.5, 0.0),
        }
    }

    pub fn p11(&self) -> f64 {
        self.p11
    }
    pub fn p22(&self) -> f64 {
        self.p22
    }
    pub fn p33(&self) -> f64 {
        self.p33
    }
    pub fn p44(&self) -> f64 {
        self.p44
    }
    pub fn c23(&self) -> Complex64 {
        self.c23
    }
    /// ρ₃₂, always the conjugate of ρ₂₃.
    pub fn c32(&self) -> Complex64 {
        self.c23.conj()
    }

    pub fn populations(&self) -> [f64; 4] {
        [self.p11, self.p22, self.p33, self.p44]
    }

    pub fn trace(&self) -> f64 {
        self.p11 + self.p22 + self.p33 + self.p44
    }

    /// Same state with ρ₂₃ replaced by its conjugate (local rephasing of one qubit).
    pub fn conjugated(&self) -> Self {
        Self {
            c23: self.c23.conj(),
            ..*self
        }
    }

    /// Full 4×4 matrix, row-major in the |11⟩, |10⟩, |01⟩, |00⟩ basis.
    pub fn to_matrix(&self) -> [[Complex64; 4]; 4] {
        let z = Complex64::new(0.0, 0.0);
        let mut m = [[z; 4]; 4];
        m[0][0] = self.p11.into();
        m[1][1] = self.p22.into();
        m[2][2] = self.p33.into();
        m[3][3] = self.p44.into();
        m[1][2] = self.c23;
        m[2][1] = self.c23.conj();
        m
    }

    /// Eigenvalues `[λ₀, λ₁, λ₂, λ₃]`: the outer block pair then the inner block pair,
    /// each ordered `+` before `−`.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let outer_sum = self.p11 + self.p44;
        let outer_diff = (self.p11 - self.p44).abs();
        let inner_sum = self.p22 + self.p33;
        let inner_disc = ((self.p22 - self.p33).powi(2) + 4.0 * self.c23.norm_sqr()).sqrt();
        [
            0.5 * (outer_sum + outer_diff),
            0.5 * (outer_sum - outer_diff),
            0.5 * (inner_sum + inner_disc),
            0.5 * (inner_sum - inner_disc),
        ]
    }
}

/// Werner mixing parameter `r ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WernerParam(f64);

impl WernerParam {
    pub fn new(r: f64) -> Result<Self, XStateError> {
        if !(0.0..=1.0).contains(&r) {
            return Err(XStateError::WernerDomain(r));
        }
        Ok(Self(r))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Validating constructor, see [`XState::new`].
pub fn make_xstate(p11: f64, p22: f64, p33: f64, p44: f64, c23: Complex64) -> Result<XState, XStateError> {
    XState::new(p11, p22, p33, p44, c23)
}

/// `r |ψ⁺⟩⟨ψ⁺| + (1 − r) I₄ / 4`.
pub fn werner_state(r: WernerParam) -> XState {
    let r = r.value();
    let outer = (1.0 - r) / 4.0;
    let inner = (1.0 + r) / 4.0;
    XState {
        p11: outer,
        p22: inner,
        p33: inner,
        p44: outer,
        c23: Complex64::new(r / 2.0, 0.0),
    }
}

pub fn xstate_eigenvalues(s: &XState) -> [f64; 4] {
    s.eigenvalues()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn construct_maximally_mixed_and_bell() {
        let mm = make_xstate(0.25, 0.25, 0.25, 0.25, c(0.0)).unwrap();
        assert_eq!(mm, XState::maximally_mixed());
        let bell = make_xstate(0.0, 0.5, 0.5, 0.0, c(0.5)).unwrap();
        assert_eq!(bell, XState::bell_psi_plus());
    }

    #[test]
    fn trace_violation_is_named() {
        let err = make_xstate(0.3, 0.3, 0.3, 0.3, c(0.0)).unwrap_err();
        match err {
            XStateError::Trace(t) => assert!((t - 1.2).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn small_negative_population_is_clamped() {
        let s = make_xstate(-5e-13, 0.5, 0.5 + 5e-13, 0.0, c(0.0)).unwrap();
        assert_eq!(s.p11(), 0.0);
        assert!(matches!(
            make_xstate(-1e-9, 0.5, 0.5 + 1e-9, 0.0, c(0.0)),
            Err(XStateError::NegativePopulation { index: 11, .. })
        ));
    }

    #[test]
    fn positivity_and_finiteness() {
        assert!(matches!(
            make_xstate(0.0, 0.5, 0.5, 0.0, Complex64::new(0.4, 0.4)),
            Err(XStateError::Positivity { .. })
        ));
        assert_eq!(
            make_xstate(f64::NAN, 0.5, 0.5, 0.0, c(0.0)),
            Err(XStateError::NonFinite)
        );
    }

    #[test]
    fn werner_limits_and_midpoint() {
        let w = |r| werner_state(WernerParam::new(r).unwrap());
        assert_eq!(w(0.0), XState::maximally_mixed());
        assert_eq!(w(1.0), XState::bell_psi_plus());
        let s = w(0.2);
        assert_close(&s.populations(), &[0.2, 0.3, 0.3, 0.2], 1e-15);
        assert!((s.c23().re - 0.1).abs() < 1e-15);
        assert!(WernerParam::new(1.5).is_err());
        assert!(WernerParam::new(-0.1).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        assert_close(&XState::maximally_mixed().eigenvalues(), &[0.25; 4], 1e-15);
        let mut bell = XState::bell_psi_plus().eigenvalues();
        bell.sort_by(f64::total_cmp);
        assert_close(&bell, &[0.0, 0.0, 0.0, 1.0], 1e-15);
        let mut w = werner_state(WernerParam::new(0.2).unwrap()).eigenvalues();
        w.sort_by(f64::total_cmp);
        assert_close(&w, &[0.2, 0.2, 0.2, 0.4], 1e-15);
    }

    #[test]
    fn werner_is_affine_in_r() {
        let w0 = werner_state(WernerParam::new(0.0).unwrap());
        let w1 = werner_state(WernerParam::new(1.0).unwrap());
        for k in 0..=20 {
            let r = k as f64 / 20.0;
            let w = werner_state(WernerParam::new(r).unwrap());
            let mix: Vec<f64> = w1
                .populations()
                .iter()
                .zip(w0.populations())
                .map(|(a, b)| r * a + (1.0 - r) * b)
                .collect();
            assert_close(&w.populations(), &mix, 1e-16);
            assert!((w.c23().re - (r * w1.c23().re + (1.0 - r) * w0.c23().re)).abs() <= 1e-16);
        }
    }
}
