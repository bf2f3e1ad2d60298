//! Closed-form two-atom dynamics after both atoms have crossed a cavity
//! prepared in the Fock state |n⟩.
//!
//! Atom A crosses first, then atom B, each for the same Rabi angle `gt`.
//! Every output element is a trigonometric polynomial in
//! `c_m = cos(√m gt)` and `s_m = sin(√m gt)` for `m ∈ {n−1, n, n+1, n+2}`.
//!
//! Two coefficient sets are provided. [`EvolutionMode::Corrected`] is the
//! exact result of the sequential Jaynes–Cummings passes (see
//! `docs/evolution-coefficients.md` for the table and how it was fixed
//! against the Fock-space oracle). [`EvolutionMode::PaperLiteral`] keeps the
//! published coefficients, which differ in two places:
//!
//! * the coherence-feedback term of ρ₄₄ carries `s_n²` instead of `s_{n+1}²`,
//!   so the trace drifts by `2 Re(ρ₂₃) c_{n+1} c_n (s_n² − s_{n+1}²)`;
//! * the ρ₂₂ term of ρ₃₂ carries `s_{n+2}²` instead of `s_{n+1}²`, so the
//!   printed ρ₃₂ is not the conjugate of the printed ρ₂₃.

use num_complex::Complex64;
use thiserror::Error;

use crate::xstate::{XState, XStateError};

/// Threshold above which a paper-literal result is flagged.
pub const DIAGNOSTIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolutionError {
    #[error("trig index {0} < -1")]
    TrigIndex(i64),
    #[error("Rabi angle gt = {0} is not finite")]
    NonFiniteAngle(f64),
    #[error("evolved state is not a valid X state: {0}")]
    InvalidOutput(#[from] XStateError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionParams {
    pub n: u32,
    pub gt: f64,
}

impl EvolutionParams {
    pub fn new(n: u32, gt: f64) -> Result<Self, EvolutionError> {
        if !gt.is_finite() {
            return Err(EvolutionError::NonFiniteAngle(gt));
        }
        Ok(Self { n, gt })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EvolutionMode {
    PaperLiteral,
    #[default]
    Corrected,
}

/// `(cos(√m gt), sin(√m gt))`, with `(1, 0)` for `m = −1`.
pub fn trig_coeffs(m: i64, gt: f64) -> Result<(f64, f64), EvolutionError> {
    match m {
        m if m < -1 => Err(EvolutionError::TrigIndex(m)),
        -1 => Ok((1.0, 0.0)),
        m => {
            let (s, c) = ((m as f64).sqrt() * gt).sin_cos();
            Ok((c, s))
        }
    }
}

/// Unvalidated X-form elements, with ρ₃₂ kept separately so that
/// non-Hermitian paper-literal output can be represented.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawElements {
    pub p11: f64,
    pub p22: f64,
    pub p33: f64,
    pub p44: f64,
    pub rho23: Complex64,
    pub rho32: Complex64,
}

impl RawElements {
    pub fn trace(&self) -> f64 {
        self.p11 + self.p22 + self.p33 + self.p44
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (self.rho32 - self.rho23.conj()).norm()
    }
}

impl From<&XState> for RawElements {
    fn from(s: &XState) -> Self {
        Self {
            p11: s.p11(),
            p22: s.p22(),
            p33: s.p33(),
            p44: s.p44(),
            rho23: s.c23(),
            rho32: s.c32(),
        }
    }
}

/// Consistency report attached to a flagged paper-literal evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub trace_drift: f64,
    pub hermiticity_defect: f64,
    pub validation: Option<XStateError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolved {
    pub raw: RawElements,
    /// Present whenever `raw` passes X-state validation.
    pub state: Option<XState>,
    /// Present only for flagged paper-literal output.
    pub diagnostic: Option<Diagnostic>,
}

/// `c_m, s_m` for `m = n−1 ..= n+2`.
#[derive(Debug, Clone, Copy)]
struct Trig {
    cm: f64,
    c0: f64,
    c1: f64,
    c2: f64,
    sm: f64,
    s0: f64,
    s1: f64,
    s2: f64,
}

impl Trig {
    fn new(params: EvolutionParams) -> Self {
        let n = i64::from(params.n);
        // indices are >= -1 by construction
        let at = |k: i64| trig_coeffs(n + k, params.gt).expect("index >= -1");
        let (cm, sm) = at(-1);
        let (c0, s0) = at(0);
        let (c1, s1) = at(1);
        let (c2, s2) = at(2);
        Self {
            cm,
            c0,
            c1,
            c2,
            sm,
            s0,
            s1,
            s2,
        }
    }
}

fn sq(x: f64) -> f64 {
    x * x
}

/// Evolves any X-form element set (linear, no validation).
pub fn evolve_raw(rho: &RawElements, params: EvolutionParams, mode: EvolutionMode) -> RawElements {
    let t = Trig::new(params);
    let RawElements {
        p11,
        p22,
        p33,
        p44,
        rho23,
        rho32,
    } = *rho;
    let coh = rho23 + rho32;
    let cc = t.c1 * t.c0;

    let out11 = p11 * sq(sq(t.c1)) + p22 * sq(t.s0) * sq(t.c1) + p33 * sq(t.s0) * sq(t.c0) + p44 * sq(t.s0) * sq(t.sm);
    let out22 = p11 * sq(t.s1) * sq(t.c1) + p22 * sq(t.c0) * sq(t.c1) + p33 * sq(sq(t.s0)) + p44 * sq(t.s0) * sq(t.cm);
    let out33 = p11 * sq(t.s1) * sq(t.c2) + p22 * sq(sq(t.s1)) + p33 * sq(t.c1) * sq(t.c0) + p44 * sq(t.s0) * sq(t.c0);
    let out44 = p11 * sq(t.s1) * sq(t.s2) + p22 * sq(t.s1) * sq(t.c1) + p33 * sq(t.s1) * sq(t.c0) + p44 * sq(sq(t.c0));

    // population feed into ρ₂₃ / ρ₃₂ shared by both modes (ρ₂₂ term excluded)
    let coherence_base =
        Complex64::from(p11 * sq(t.s1) * t.c1 * t.c2 - p33 * sq(t.s0) * cc + p44 * sq(t.s0) * t.c0 * t.cm);
    let out23 = coherence_base - p22 * sq(t.s1) * cc + rho23 * sq(cc) + rho32 * sq(t.s1) * sq(t.s0);

    match mode {
        EvolutionMode::Corrected => {
            let feed = coh * cc;
            RawElements {
                p11: out11 + (feed * sq(t.s0)).re,
                p22: out22 - (feed * sq(t.s0)).re,
                p33: out33 - (feed * sq(t.s1)).re,
                p44: out44 + (feed * sq(t.s1)).re,
                rho23: out23,
                rho32: coherence_base - p22 * sq(t.s1) * cc + rho23 * sq(t.s1) * sq(t.s0) + rho32 * sq(cc),
            }
        }
        EvolutionMode::PaperLiteral => {
            let feed = coh * cc;
            RawElements {
                p11: out11 + (feed * sq(t.s0)).re,
                p22: out22 - (feed * sq(t.s0)).re,
                p33: out33 - (feed * sq(t.s1)).re,
                p44: out44 + (feed * sq(t.s0)).re,
                rho23: out23,
                rho32: coherence_base - p22 * sq(t.s2) * cc + rho23 * sq(t.s1) * sq(t.s0) + rho32 * sq(cc),
            }
        }
    }
}

/// Evolves a validated X state.
///
/// Corrected output that fails validation is an error. Paper-literal output
/// is always returned, with a [`Diagnostic`] when its trace drifts, its ρ₃₂
/// is not `conj(ρ₂₃)`, or it fails validation, all beyond [`DIAGNOSTIC_TOL`].
pub fn evolve(s0: &XState, params: EvolutionParams, mode: EvolutionMode) -> Result<Evolved, EvolutionError> {
    let raw = evolve_raw(&RawElements::from(s0), params, mode);
    let validated = XState::new(raw.p11, raw.p22, raw.p33, raw.p44, raw.rho23);
    match mode {
        EvolutionMode::Corrected => Ok(Evolved {
            raw,
            state: Some(validated?),
            diagnostic: None,
        }),
        EvolutionMode::PaperLiteral => {
            let trace_drift = (raw.trace() - 1.0).abs();
            let hermiticity_defect = raw.hermiticity_defect();
            let loose = XState::with_tolerance(raw.p11, raw.p22, raw.p33, raw.p44, raw.rho23, DIAGNOSTIC_TOL);
            let flagged = trace_drift > DIAGNOSTIC_TOL || hermiticity_defect > DIAGNOSTIC_TOL || loose.is_err();
            let diagnostic = flagged.then(|| Diagnostic {
                trace_drift,
                hermiticity_defect,
                validation: loose.err(),
            });
            Ok(Evolved {
                raw,
                state: validated.ok(),
                diagnostic,
            })
        }
    }
}

/// Corrected-mode evolution of a valid state.
pub fn evolve_corrected(s0: &XState, params: EvolutionParams) -> Result<XState, EvolutionError> {
    let evolved = evolve(s0, params, EvolutionMode::Corrected)?;
    Ok(evolved.state.expect("corrected output is validated"))
}
