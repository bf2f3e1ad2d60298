//! Entanglement and discord of X states.
//!
//! All logarithms are base 2 and `0 · log 0 = 0`. Discord is one-sided:
//! the projective measurement acts on atom B and the conditional states
//! belong to atom A.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use thiserror::Error;

use crate::xstate::XState;

/// Outcome probabilities below this contribute nothing to conditional entropy.
const PROB_FLOOR: f64 = 1e-14;
/// Angular tolerance of the brute-force refinement.
const ANGLE_TOL: f64 = 1e-6;
/// Objective differences below this count as ties.
const TIE_EPS: f64 = 1e-14;
/// Smallest accepted brute-force grid resolution per angle.
pub const MIN_GRID_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("binary entropy argument {0} outside [0, 1]")]
    EntropyDomain(f64),
    #[error("measurement angle theta = {0} outside [0, pi/2]")]
    Theta(f64),
    #[error("grid resolution {0} below {MIN_GRID_POINTS} points per angle")]
    Grid(usize),
}

/// `h(x) = −x log₂ x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> Result<f64, MeasureError> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(MeasureError::EntropyDomain(x));
    }
    Ok(h(x))
}

/// Binary entropy with the argument clamped to [0, 1].
fn h(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    xlog(x) + xlog(1.0 - x)
}

fn xlog(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

pub fn concurrence(s: &XState) -> f64 {
    (2.0 * (s.c23().norm() - (s.p11() * s.p44()).sqrt())).max(0.0)
}

/// von Neumann entropy of the two-atom state.
pub fn entropy_joint(s: &XState) -> f64 {
    s.eigenvalues().into_iter().map(xlog).sum()
}

pub fn entropy_a(s: &XState) -> f64 {
    h(s.p11() + s.p22())
}

pub fn entropy_b(s: &XState) -> f64 {
    h(s.p11() + s.p33())
}

pub fn mutual_information(s: &XState) -> f64 {
    entropy_a(s) + entropy_b(s) - entropy_joint(s)
}

/// Rank-1 projective measurement on atom B onto
/// `cos θ |0⟩ + e^{iφ} sin θ |1⟩` and its orthocomplement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    phi: f64,
}

impl MeasurementBasis {
    /// `φ` is wrapped into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self, MeasureError> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(MeasureError::Theta(theta));
        }
        Ok(Self {
            theta,
            phi: wrap_phi(phi),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

fn wrap_phi(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// `Σ_k p_k S(ρ_k)` for a measurement on B.
pub fn conditional_entropy_measured(s: &XState, basis: &MeasurementBasis) -> f64 {
    conditional_entropy_at(&s.to_matrix(), basis.theta, basis.phi)
}

/// Level index 0 is excited (`|1⟩`), index 1 is ground (`|0⟩`).
fn conditional_entropy_at(rho: &[[Complex64; 4]; 4], theta: f64, phi: f64) -> f64 {
    let (st, ct) = theta.sin_cos();
    let phase = Complex64::from_polar(1.0, phi);
    let m0 = [phase * st, Complex64::from(ct)];
    let m1 = [Complex64::from(ct), -phase.conj() * st];
    [m0, m1].iter().map(|m| branch_entropy(rho, m)).sum()
}

/// `p_k S(ρ_k)` for one outcome vector `m` on B.
fn branch_entropy(rho: &[[Complex64; 4]; 4], m: &[Complex64; 2]) -> f64 {
    let mut block = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (a, row) in block.iter_mut().enumerate() {
        for (a2, cell) in row.iter_mut().enumerate() {
            for b in 0..2 {
                for b2 in 0..2 {
                    *cell += m[b].conj() * rho[a * 2 + b][a2 * 2 + b2] * m[b2];
                }
            }
        }
    }
    let p = block[0][0].re + block[1][1].re;
    if p < PROB_FLOOR {
        return 0.0;
    }
    let bloch = ((block[0][0].re - block[1][1].re).powi(2) + 4.0 * block[0][1].norm_sqr()).sqrt() / p;
    p * h(0.5 * (1.0 + bloch.min(1.0)))
}

/// Brute-force search resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    theta_points: usize,
    phi_points: usize,
}

impl Grid {
    pub fn new(theta_points: usize, phi_points: usize) -> Result<Self, MeasureError> {
        for points in [theta_points, phi_points] {
            if points < MIN_GRID_POINTS {
                return Err(MeasureError::Grid(points));
            }
        }
        Ok(Self {
            theta_points,
            phi_points,
        })
    }

    pub fn square(points: usize) -> Result<Self, MeasureError> {
        Self::new(points, points)
    }

    pub fn theta_points(&self) -> usize {
        self.theta_points
    }

    pub fn phi_points(&self) -> usize {
        self.phi_points
    }

    fn theta_step(&self) -> f64 {
        FRAC_PI_2 / (self.theta_points - 1) as f64
    }

    fn phi_step(&self) -> f64 {
        TAU / self.phi_points as f64
    }
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            theta_points: 128,
            phi_points: 128,
        }
    }
}

/// Golden-section minimum of `f` on `[lo, hi]`.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimum measured conditional entropy: uniform grid scan, then alternating
/// golden-section refinement in θ and φ. Ties keep the smallest θ, then φ.
pub fn min_conditional_entropy(s: &XState, grid: &Grid) -> (f64, MeasurementBasis) {
    let rho = s.to_matrix();
    let f = |theta: f64, phi: f64| conditional_entropy_at(&rho, theta, phi);

    let (mut theta, mut phi, mut best) = (0.0, 0.0, f64::INFINITY);
    for i in 0..grid.theta_points {
        let t = i as f64 * grid.theta_step();
        for j in 0..grid.phi_points {
            let p = j as f64 * grid.phi_step();
            let v = f(t, p);
            if v < best - TIE_EPS {
                (theta, phi, best) = (t, p, v);
            }
        }
    }

    let (dt, dp) = (grid.theta_step(), grid.phi_step());
    for _ in 0..50 {
        let (t_new, v_t) = golden_section(
            |t| f(t, phi),
            (theta - dt).max(0.0),
            (theta + dt).min(FRAC_PI_2),
            ANGLE_TOL / 4.0,
        );
        let moved_t = if v_t < best - TIE_EPS {
            let d = (t_new - theta).abs();
            (theta, best) = (t_new, v_t);
            d
        } else {
            0.0
        };
        let (p_new, v_p) = golden_section(|p| f(theta, p), phi - dp, phi + dp, ANGLE_TOL / 4.0);
        let moved_p = if v_p < best - TIE_EPS {
            let d = (p_new - phi).abs();
            (phi, best) = (wrap_phi(p_new), v_p);
            d
        } else {
            0.0
        };
        if moved_t < ANGLE_TOL && moved_p < ANGLE_TOL {
            break;
        }
    }
    (best, MeasurementBasis { theta, phi })
}

/// `C′ = S(ρ_A) − min S(ρ_AB | Π)` and the minimizing basis.
pub fn classical_correlation_bruteforce(s: &XState, grid: &Grid) -> (f64, MeasurementBasis) {
    let (min_cond, basis) = min_conditional_entropy(s, grid);
    (clamp_small_negative(entropy_a(s) - min_cond), basis)
}

/// `S(ρ_B) − S(ρ_AB) + min S(ρ_AB | Π)`.
pub fn discord_bruteforce(s: &XState, grid: &Grid) -> f64 {
    let (min_cond, _) = min_conditional_entropy(s, grid);
    clamp_small_negative(entropy_b(s) - entropy_joint(s) + min_cond)
}

fn clamp_small_negative(x: f64) -> f64 {
    if (-1e-9..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

/// The smaller of the two closed-form candidate conditional entropies
/// (equatorial and σ_z measurement on B).
fn closed_min_conditional_entropy(s: &XState) -> f64 {
    let theta1 = ((2.0 * s.p11() + 2.0 * s.p22() - 1.0).powi(2) + 4.0 * s.c23().norm_sqr()).sqrt();
    let equatorial = h(0.5 * (1.0 + theta1));

    let weighted = |num: f64, weight: f64| {
        if weight < PROB_FLOOR {
            0.0
        } else {
            weight * h(0.5 * (1.0 + num.abs() / weight))
        }
    };
    let axial = weighted(s.p22() - s.p44(), s.p22() + s.p44()) + weighted(s.p11() - s.p33(), s.p11() + s.p33());
    equatorial.min(axial)
}

/// Closed-form X-state discord.
pub fn discord_closed(s: &XState) -> f64 {
    let d = entropy_b(s) - entropy_joint(s) + closed_min_conditional_entropy(s);
    d.clamp(0.0, 1.0 + 1e-9)
}

/// Classical correlation paired with [`discord_closed`].
pub fn classical_correlation_closed(s: &XState) -> f64 {
    clamp_small_negative(entropy_a(s) - closed_min_conditional_entropy(s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DiscordMethod {
    #[default]
    ClosedForm,
    BruteForce,
}

/// All correlation quantities of one state at one Rabi angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationRecord {
    pub gt: f64,
    pub state: XState,
    pub concurrence: f64,
    pub discord: f64,
    pub classical_correlation: f64,
    pub mutual_information: f64,
    pub discord_method: DiscordMethod,
}

impl CorrelationRecord {
    /// Brute-force records use [`Grid::default`].
    pub fn compute(gt: f64, state: XState, method: DiscordMethod) -> Self {
        let (discord, classical_correlation) = match method {
            DiscordMethod::ClosedForm => (discord_closed(&state), classical_correlation_closed(&state)),
            DiscordMethod::BruteForce => {
                let (min_cond, _) = min_conditional_entropy(&state, &Grid::default());
                (
                    clamp_small_negative(entropy_b(&state) - entropy_joint(&state) + min_cond),
                    clamp_small_negative(entropy_a(&state) - min_cond),
                )
            }
        };
        Self {
            gt,
            state,
            concurrence: concurrence(&state),
            discord,
            classical_correlation,
            mutual_information: clamp_small_negative(mutual_information(&state)),
            discord_method: method,
        }
    }

    /// Range and ordering invariants of the record.
    pub fn check(&self) -> Result<(), String> {
        let tol = 1e-9;
        let named = [
            ("concurrence", self.concurrence),
            ("discord", self.discord),
            ("classical_correlation", self.classical_correlation),
            ("mutual_information", self.mutual_information),
        ];
        for (name, v) in named {
            if !v.is_finite() || v < -tol {
                return Err(format!("{name} = {v} out of range"));
            }
        }
        if self.concurrence > 1.0 + tol || self.discord > 1.0 + tol {
            return Err(format!(
                "concurrence {} or discord {} above 1",
                self.concurrence, self.discord
            ));
        }
        if self.discord > self.mutual_information + tol {
            return Err(format!(
                "discord {} exceeds mutual information {}",
                self.discord, self.mutual_information
            ));
        }
        Ok(())
    }
}
