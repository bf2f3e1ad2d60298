//! Rabi-angle sweeps and collapse-revival analysis of the resulting series.

use rayon::prelude::*;
use thiserror::Error;

use crate::evolution::{evolve, EvolutionError, EvolutionMode, EvolutionParams};
use crate::measures::{CorrelationRecord, DiscordMethod};
use crate::xstate::{werner_state, WernerParam};

pub const DEFAULT_WINDOW: f64 = 2.0;
pub const DEFAULT_THRESHOLD: f64 = 0.02;
pub const DEFAULT_MIN_DURATION: f64 = 1.0;
pub const DEFAULT_ONSET_EPS: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("steps must be at least 1")]
    ZeroSteps,
    #[error("gt_max = {0} must be finite and positive")]
    GtMax(f64),
    #[error("empty series")]
    EmptySeries,
    #[error("{name} = {value} must be finite and positive")]
    NonPositive { name: &'static str, value: f64 },
    #[error("evolution failed at gt = {gt}: {source}")]
    Evolution { gt: f64, source: EvolutionError },
    #[error("paper-literal evolution left the X-state domain at gt = {0}")]
    InvalidPaperLiteral(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub n: u32,
    pub r: WernerParam,
    pub gt_max: f64,
    pub steps: usize,
    pub discord_method: DiscordMethod,
    pub mode: EvolutionMode,
}

impl SweepConfig {
    /// Closed-form discord, corrected evolution.
    pub fn new(n: u32, r: WernerParam, gt_max: f64, steps: usize) -> Self {
        Self {
            n,
            r,
            gt_max,
            steps,
            discord_method: DiscordMethod::ClosedForm,
            mode: EvolutionMode::Corrected,
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        if self.steps == 0 {
            return Err(SweepError::ZeroSteps);
        }
        if !self.gt_max.is_finite() || self.gt_max <= 0.0 {
            return Err(SweepError::GtMax(self.gt_max));
        }
        Ok(())
    }

    /// `gt_i = i · gt_max / steps`.
    pub fn grid_point(&self, i: usize) -> f64 {
        i as f64 * self.gt_max / self.steps as f64
    }
}

/// One record per grid point, in grid order. Grid points are evaluated in
/// parallel.
pub fn time_series(cfg: &SweepConfig) -> Result<Vec<CorrelationRecord>, SweepError> {
    cfg.validate()?;
    let initial = werner_state(cfg.r);
    (0..=cfg.steps)
        .into_par_iter()
        .map(|i| {
            let gt = cfg.grid_point(i);
            let params = EvolutionParams::new(cfg.n, gt).map_err(|source| SweepError::Evolution { gt, source })?;
            let evolved = evolve(&initial, params, cfg.mode).map_err(|source| SweepError::Evolution { gt, source })?;
            let state = evolved.state.ok_or(SweepError::InvalidPaperLiteral(gt))?;
            Ok(CorrelationRecord::compute(gt, state, cfg.discord_method))
        })
        .collect()
}

/// Centered sliding-window maximum; the window spans `window / 2` on either
/// side and is truncated at the ends.
pub fn envelope(series: &[(f64, f64)], window: f64) -> Result<Vec<(f64, f64)>, SweepError> {
    if series.is_empty() {
        return Err(SweepError::EmptySeries);
    }
    if !window.is_finite() || window <= 0.0 {
        return Err(SweepError::NonPositive {
            name: "window",
            value: window,
        });
    }
    let half = window / 2.0;
    let mut out = Vec::with_capacity(series.len());
    // indices with decreasing values
    let mut deque = std::collections::VecDeque::<usize>::new();
    let mut next = 0;
    for &(gt, _) in series {
        while next < series.len() && series[next].0 <= gt + half {
            while deque.back().is_some_and(|&b| series[b].1 <= series[next].1) {
                deque.pop_back();
            }
            deque.push_back(next);
            next += 1;
        }
        while deque.front().is_some_and(|&f| series[f].0 < gt - half) {
            deque.pop_front();
        }
        let front = *deque.front().expect("window contains its center");
        out.push((gt, series[front].1));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Collapse,
    Revival,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Collapse => "Collapse",
            EventKind::Revival => "Revival",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalEvent {
    pub kind: EventKind,
    pub gt_start: f64,
    pub gt_end: f64,
    pub peak_value: f64,
}

/// Collapses are maximal runs with `env < threshold` lasting at least
/// `min_duration`. Each is followed by a Revival running from the end of the
/// collapse to the start of the next collapse (or the end of the series);
/// shorter sub-threshold dips stay inside the revival.
pub fn detect_collapse_revival(
    env: &[(f64, f64)],
    collapse_threshold: f64,
    min_duration: f64,
) -> Result<Vec<RevivalEvent>, SweepError> {
    for (name, value) in [
        ("collapse_threshold", collapse_threshold),
        ("min_duration", min_duration),
    ] {
        if !value.is_finite() || value <= 0.0 {
            return Err(SweepError::NonPositive { name, value });
        }
    }

    let mut collapses = Vec::new();
    let mut i = 0;
    while i < env.len() {
        if env[i].1 < collapse_threshold {
            let start = i;
            while i + 1 < env.len() && env[i + 1].1 < collapse_threshold {
                i += 1;
            }
            if env[i].0 - env[start].0 >= min_duration {
                collapses.push((start, i));
            }
        }
        i += 1;
    }

    let peak =
        |range: std::ops::RangeInclusive<usize>| env[range].iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let mut events = Vec::with_capacity(2 * collapses.len());
    for (k, &(start, end)) in collapses.iter().enumerate() {
        events.push(RevivalEvent {
            kind: EventKind::Collapse,
            gt_start: env[start].0,
            gt_end: env[end].0,
            peak_value: peak(start..=end),
        });
        let revival_end = collapses
            .get(k + 1)
            .map_or(env.len() - 1, |&(next_start, _)| next_start);
        if revival_end > end {
            let interior = if revival_end - end > 1 {
                end + 1..=revival_end - 1
            } else {
                revival_end..=revival_end
            };
            events.push(RevivalEvent {
                kind: EventKind::Revival,
                gt_start: env[end].0,
                gt_end: env[revival_end].0,
                peak_value: peak(interior),
            });
        }
    }
    Ok(events)
}

/// First grid point with value strictly above `eps`.
pub fn first_onset(series: &[(f64, f64)], eps: f64) -> Option<f64> {
    series.iter().find(|p| p.1 > eps).map(|p| p.0)
}

/// `(gt, concurrence)` pairs.
pub fn concurrence_series(records: &[CorrelationRecord]) -> Vec<(f64, f64)> {
    records.iter().map(|r| (r.gt, r.concurrence)).collect()
}

/// `(gt, discord)` pairs.
pub fn discord_series(records: &[CorrelationRecord]) -> Vec<(f64, f64)> {
    records.iter().map(|r| (r.gt, r.discord)).collect()
}

/// Start points of the Revival events.
pub fn revival_starts(events: &[RevivalEvent]) -> Vec<f64> {
    events
        .iter()
        .filter(|e| e.kind == EventKind::Revival)
        .map(|e| e.gt_start)
        .collect()
}

/// Mean spacing between consecutive Revival starts, if there are at least two.
pub fn mean_revival_spacing(events: &[RevivalEvent]) -> Option<f64> {
    let starts = revival_starts(events);
    (starts.len() >= 2).then(|| (starts[starts.len() - 1] - starts[0]) / (starts.len() - 1) as f64)
}
