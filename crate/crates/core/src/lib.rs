//! Correlation dynamics of two two-level atoms crossing, one after the
//! other, a lossless resonant cavity prepared in a Fock state.
//!
//! * [`xstate`]: X-form two-qubit states and the Werner family.
//! * [`evolution`]: closed-form two-pass dynamics.
//! * [`oracle`]: exact atoms ⊗ field simulation used as ground truth.
//! * [`measures`]: concurrence, entropies, classical correlation and discord.
//! * [`sweep`]: time series over Rabi-angle grids and collapse-revival detection.
//! * [`sampling`]: seeded random X states.

pub mod evolution;
pub mod measures;
pub mod oracle;
pub mod sampling;
pub mod sweep;
pub mod xstate;

pub use evolution::{evolve, evolve_corrected, trig_coeffs, EvolutionMode, EvolutionParams, Evolved};
pub use measures::{
    binary_entropy, classical_correlation_bruteforce, concurrence, conditional_entropy_measured, discord_bruteforce,
    discord_closed, entropy_a, entropy_b, entropy_joint, mutual_information, CorrelationRecord, DiscordMethod, Grid,
    MeasurementBasis,
};
pub use oracle::{embed, jc_unitary_apply, sequential_pass, Atom, JointFieldState, PassOrder};
pub use sweep::{detect_collapse_revival, envelope, first_onset, time_series, RevivalEvent, SweepConfig};
pub use xstate::{make_xstate, werner_state, xstate_eigenvalues, WernerParam, XState, XStateError};
