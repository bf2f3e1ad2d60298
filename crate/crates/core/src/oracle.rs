//! Exact atoms ⊗ field simulation on a finite photon-number window.
//!
//! Layout is atomA ⊗ atomB ⊗ field. Atomic level index 0 is the excited
//! state and 1 the ground state, so the four atomic blocks follow the
//! |11⟩, |10⟩, |01⟩, |00⟩ order used by [`XState`].
//!
//! The resonant JC unitary is applied analytically: it mixes only the pairs
//! `{|e,m⟩, |g,m+1⟩}` with the 2×2 block
//! `[[cos(√(m+1) gt), −i sin(√(m+1) gt)], [−i sin(√(m+1) gt), cos(√(m+1) gt)]]`
//! and leaves |g,0⟩ fixed. The top rung |e,d−1⟩ has its partner outside the
//! window and is left invariant, which keeps the operator unitary on the
//! window; the default window `0..=n+2` never populates it for two passes
//! starting from |n⟩.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::evolution::{EvolutionParams, RawElements};
use crate::xstate::{XState, XStateError};

/// Largest off-X element magnitude tolerated after the partial trace.
pub const LEAK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("off-X element ({row}, {col}) has magnitude {magnitude:e}")]
    OffXLeak { row: usize, col: usize, magnitude: f64 },
    #[error("photon window 0..={max_photon} does not contain n = {n}")]
    Window { n: u32, max_photon: u32 },
    #[error("oracle output is not a valid X state: {0}")]
    InvalidOutput(#[from] XStateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PassOrder {
    #[default]
    AFirst,
    BFirst,
}

impl PassOrder {
    fn atoms(self) -> [Atom; 2] {
        match self {
            PassOrder::AFirst => [Atom::A, Atom::B],
            PassOrder::BFirst => [Atom::B, Atom::A],
        }
    }
}

/// Dense joint density matrix of dimension `4 · d`, `d = max_photon + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointFieldState {
    rho: DMatrix<Complex64>,
    levels: usize,
}

impl JointFieldState {
    /// Number of field levels `d`.
    pub fn field_levels(&self) -> usize {
        self.levels
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn index(&self, atom_a: usize, atom_b: usize, photons: usize) -> usize {
        (atom_a * 2 + atom_b) * self.levels + photons
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let dim = self.rho.nrows();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.rho + self.rho.adjoint()) * Complex64::from(0.5);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Traces out the field, returning the atomic 4×4 block.
    pub fn atoms(&self) -> [[Complex64; 4]; 4] {
        let d = self.levels;
        let mut out = [[Complex64::new(0.0, 0.0); 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..d).map(|k| self.rho[(i * d + k, j * d + k)]).sum();
            }
        }
        out
    }
}

/// ρ_AB ⊗ |n⟩⟨n| on the window `0..=n+2`.
pub fn embed(s0: &XState, n: u32) -> JointFieldState {
    embed_matrix(&s0.to_matrix(), n, n + 2).expect("default window contains n")
}

/// ρ_AB ⊗ |n⟩⟨n| on the window `0..=max_photon`.
pub fn embed_with_window(s0: &XState, n: u32, max_photon: u32) -> Result<JointFieldState, OracleError> {
    embed_matrix(&s0.to_matrix(), n, max_photon)
}

fn embed_matrix(atoms: &[[Complex64; 4]; 4], n: u32, max_photon: u32) -> Result<JointFieldState, OracleError> {
    if n > max_photon {
        return Err(OracleError::Window { n, max_photon });
    }
    let levels = max_photon as usize + 1;
    let mut rho = DMatrix::zeros(4 * levels, 4 * levels);
    let k = n as usize;
    for (i, row) in atoms.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            rho[(i * levels + k, j * levels + k)] = value;
        }
    }
    Ok(JointFieldState { rho, levels })
}

/// Left-multiplies every column of `m` by the JC unitary on `atom` ⊗ field.
fn apply_unitary_left(m: &mut DMatrix<Complex64>, levels: usize, atom: Atom, gt: f64) {
    let neg_i = Complex64::new(0.0, -1.0);
    // (cos, −i sin) of each rung m ↔ m+1, coupling √(m+1)
    let rungs: Vec<(f64, Complex64)> = (0..levels.saturating_sub(1))
        .map(|k| {
            let (s, c) = (((k + 1) as f64).sqrt() * gt).sin_cos();
            (c, neg_i * s)
        })
        .collect();
    // atomic block (a*2 + b) of the excited/ground level of `atom`, other atom at `other`
    let blocks = |other: usize| match atom {
        Atom::A => (other, 2 + other),
        Atom::B => (other * 2, other * 2 + 1),
    };
    for mut col in m.column_iter_mut() {
        for other in 0..2 {
            let (excited_block, ground_block) = blocks(other);
            let excited = excited_block * levels;
            let ground = ground_block * levels;
            for (k, &(c, mis)) in rungs.iter().enumerate() {
                let e = col[excited + k];
                let g = col[ground + k + 1];
                col[excited + k] = e * c + g * mis;
                col[ground + k + 1] = e * mis + g * c;
            }
        }
    }
}

/// `U ρ U†` for the JC unitary acting on `atom` and the field.
pub fn jc_unitary_apply(state: &JointFieldState, atom: Atom, gt: f64) -> JointFieldState {
    let levels = state.levels;
    let mut half = state.rho.clone();
    apply_unitary_left(&mut half, levels, atom, gt);
    let mut full = half.adjoint();
    apply_unitary_left(&mut full, levels, atom, gt);
    JointFieldState {
        rho: full.adjoint(),
        levels,
    }
}

fn project_x(atoms: &[[Complex64; 4]; 4]) -> Result<RawElements, OracleError> {
    const ON_X: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1)];
    for (row, line) in atoms.iter().enumerate() {
        for (col, value) in line.iter().enumerate() {
            if !ON_X.contains(&(row, col)) && value.norm() >= LEAK_TOL {
                return Err(OracleError::OffXLeak {
                    row,
                    col,
                    magnitude: value.norm(),
                });
            }
        }
    }
    Ok(RawElements {
        p11: atoms[0][0].re,
        p22: atoms[1][1].re,
        p33: atoms[2][2].re,
        p44: atoms[3][3].re,
        rho23: atoms[1][2],
        rho32: atoms[2][1],
    })
}

fn run_passes(
    atoms: &[[Complex64; 4]; 4],
    params: EvolutionParams,
    order: PassOrder,
    max_photon: u32,
) -> Result<RawElements, OracleError> {
    let mut state = embed_matrix(atoms, params.n, max_photon)?;
    for atom in order.atoms() {
        state = jc_unitary_apply(&state, atom, params.gt);
    }
    project_x(&state.atoms())
}

/// Embed, let both atoms cross in `order`, trace out the field.
pub fn sequential_pass(s0: &XState, params: EvolutionParams, order: PassOrder) -> Result<XState, OracleError> {
    sequential_pass_with_window(s0, params, order, params.n + 2)
}

pub fn sequential_pass_with_window(
    s0: &XState,
    params: EvolutionParams,
    order: PassOrder,
    max_photon: u32,
) -> Result<XState, OracleError> {
    let raw = run_passes(&s0.to_matrix(), params, order, max_photon)?;
    Ok(XState::new(raw.p11, raw.p22, raw.p33, raw.p44, raw.rho23)?)
}

/// Linear two-pass map on arbitrary X-form elements (no positivity or trace
/// requirement). Used to read off the coefficient of each input element.
pub fn sequential_pass_raw(
    rho: &RawElements,
    params: EvolutionParams,
    order: PassOrder,
) -> Result<RawElements, OracleError> {
    let z = Complex64::new(0.0, 0.0);
    let mut atoms = [[z; 4]; 4];
    atoms[0][0] = rho.p11.into();
    atoms[1][1] = rho.p22.into();
    atoms[2][2] = rho.p33.into();
    atoms[3][3] = rho.p44.into();
    atoms[1][2] = rho.rho23;
    atoms[2][1] = rho.rho32;
    run_passes(&atoms, params, order, params.n + 2)
}
