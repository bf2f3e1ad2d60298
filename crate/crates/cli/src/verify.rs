//! Seeded cross-checks: closed-form evolution against the Fock-space
//! oracle and closed-form discord against the brute-force minimizer.

use std::fmt::Write as _;

use qcorr_core::evolution::{evolve, EvolutionMode, EvolutionParams};
use qcorr_core::measures::{
    classical_correlation_bruteforce, discord_bruteforce, discord_closed, mutual_information, Grid,
};
use qcorr_core::oracle::{sequential_pass, PassOrder};
use qcorr_core::sampling::random_xstate;
use qcorr_core::xstate::XState;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub n_max: u32,
    pub gt_max: f64,
    pub tol_evolve: f64,
    pub tol_discord: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 42,
            n_max: 12,
            gt_max: 20.0,
            tol_evolve: 1e-10,
            tol_discord: 0.0026,
        }
    }
}

#[derive(Debug, Clone)]
struct Sample {
    state: XState,
    n: u32,
    gt: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct Outcome {
    evolve_dev: f64,
    discord_dev: f64,
    closed: f64,
    brute: f64,
    /// |D + C′ − I| at brute-force level.
    decomposition_dev: f64,
    invariant_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub max_evolve_dev: f64,
    pub max_discord_dev: f64,
    pub max_decomposition_dev: f64,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "samples: {}  seed: {}  n_max: {}  gt_max: {}",
            c.samples, c.seed, c.n_max, c.gt_max
        );
        let _ = writeln!(
            out,
            "max |evolve - oracle|: {:.6e} (tol {:e})",
            self.max_evolve_dev, c.tol_evolve
        );
        let _ = writeln!(
            out,
            "max |discord_closed - discord_brute|: {:.6e} (tol {:e})",
            self.max_discord_dev, c.tol_discord
        );
        let _ = writeln!(out, "max |D + C' - I|: {:.6e}", self.max_decomposition_dev);
        for f in &self.failures {
            let _ = writeln!(out, "FAIL {f}");
        }
        let _ = writeln!(out, "{}", if self.passed() { "PASS" } else { "FAILED" });
        out
    }
}

fn check_sample(s: &Sample, grid: &Grid) -> Outcome {
    let mut invariant_error = None;
    let mut evolve_dev = f64::INFINITY;
    match EvolutionParams::new(s.n, s.gt) {
        Ok(params) => {
            let closed = evolve(&s.state, params, EvolutionMode::Corrected);
            let exact = sequential_pass(&s.state, params, PassOrder::AFirst);
            match (closed, exact) {
                (Ok(closed), Ok(exact)) => {
                    let closed = closed.state.expect("validated");
                    evolve_dev = closed
                        .populations()
                        .iter()
                        .zip(exact.populations())
                        .map(|(a, b)| (a - b).abs())
                        .fold((closed.c23() - exact.c23()).norm(), f64::max);
                }
                (Err(e), _) => invariant_error = Some(format!("closed-form evolution: {e}")),
                (_, Err(e)) => invariant_error = Some(format!("oracle: {e}")),
            }
        }
        Err(e) => invariant_error = Some(e.to_string()),
    }

    let closed = discord_closed(&s.state);
    let brute = discord_bruteforce(&s.state, grid);
    let classical = classical_correlation_bruteforce(&s.state, grid).0;
    Outcome {
        evolve_dev,
        discord_dev: (closed - brute).abs(),
        closed,
        brute,
        decomposition_dev: (brute + classical - mutual_information(&s.state)).abs(),
        invariant_error,
    }
}

/// Samples are drawn sequentially from the seed, then checked in parallel;
/// the report depends only on the configuration.
pub fn run_verify(cfg: &VerifyConfig) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<Sample> = (0..cfg.samples)
        .map(|_| {
            let state = random_xstate(&mut rng);
            let n = rng.gen_range(0..=cfg.n_max);
            let gt = rng.gen_range(0.0..=cfg.gt_max);
            Sample { state, n, gt }
        })
        .collect();
    let grid = Grid::default();
    let outcomes: Vec<Outcome> = samples.par_iter().map(|s| check_sample(s, &grid)).collect();

    let mut report = VerifyReport {
        config: *cfg,
        max_evolve_dev: 0.0,
        max_discord_dev: 0.0,
        max_decomposition_dev: 0.0,
        failures: Vec::new(),
    };
    for (i, (s, o)) in samples.iter().zip(&outcomes).enumerate() {
        report.max_evolve_dev = report.max_evolve_dev.max(o.evolve_dev);
        report.max_discord_dev = report.max_discord_dev.max(o.discord_dev);
        report.max_decomposition_dev = report.max_decomposition_dev.max(o.decomposition_dev);
        let state = format!(
            "p=({:.12}, {:.12}, {:.12}, {:.12}) c23=({:.12}, {:.12}) n={} gt={:.12}",
            s.state.p11(),
            s.state.p22(),
            s.state.p33(),
            s.state.p44(),
            s.state.c23().re,
            s.state.c23().im,
            s.n,
            s.gt
        );
        if let Some(e) = &o.invariant_error {
            report
                .failures
                .push(format!("sample {i}: invariant violation ({e}) at {state}"));
        } else if o.evolve_dev.is_nan() || o.evolve_dev > cfg.tol_evolve {
            report
                .failures
                .push(format!("sample {i}: evolve deviation {:e} at {state}", o.evolve_dev));
        }
        if o.discord_dev.is_nan() || o.discord_dev > cfg.tol_discord {
            report.failures.push(format!(
                "sample {i}: discord closed {:.9} vs brute {:.9} at {state}",
                o.closed, o.brute
            ));
        }
    }
    report
}
