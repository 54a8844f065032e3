//! Seeded random restarts on the simplex followed by derivative-free
//! coordinate descent.
//!
//! Samples are drawn in rounds of `batch_size`. A round is evaluated as a
//! whole; if no raw sample satisfies every constraint, the lowest-penalty
//! samples of the round are refined. Within a round the winner is always the
//! lowest sample index, so the outcome is the same whichever order workers
//! finish in.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::constraint::{ConstraintKind, ConstraintSet, Targets, DEFAULT_UNDEFINED_PENALTY};
use super::grid::{grid_enumerate, GRID_MAX_RESOLUTION, GRID_MAX_WORLDS};
use super::sampler::{simplex_point, stream_rng};
use crate::exec::Execution;
use crate::prob::{JointDistribution, SpaceRef, WorldSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    /// Total random restarts drawn before giving up.
    pub max_samples: u64,
    /// Coordinate-descent sweeps per refined candidate.
    pub refine_steps: usize,
    pub penalty_tolerance: f64,
    /// When set, satisfying grid points are tried before random restarts.
    pub grid_resolution: Option<u32>,
    pub batch_size: u64,
    pub refine_per_batch: usize,
    /// Strict constraints are searched for with this much extra slack.
    pub strict_slack: f64,
    pub undefined_penalty: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 1,
            max_samples: 100_000,
            refine_steps: 2_000,
            penalty_tolerance: 1e-12,
            grid_resolution: None,
            batch_size: 256,
            refine_per_batch: 4,
            strict_slack: 1e-9,
            undefined_penalty: DEFAULT_UNDEFINED_PENALTY,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        SearchConfig {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::InvalidConfig(m.to_string()));
        if self.max_samples < 1 {
            return bad("max_samples must be at least 1");
        }
        if self.penalty_tolerance.is_nan() || self.penalty_tolerance <= 0.0 {
            return bad("penalty_tolerance must be positive");
        }
        if self.batch_size < 1 {
            return bad("batch_size must be at least 1");
        }
        if self.strict_slack.is_nan()
            || self.strict_slack < 0.0
            || self.undefined_penalty.is_nan()
            || self.undefined_penalty <= 0.0
        {
            return bad("strict_slack must be nonnegative and undefined_penalty positive");
        }
        Ok(())
    }

    fn targets(&self) -> Targets {
        Targets {
            strict_extra: self.strict_slack,
            equality_fraction: 0.5,
            undefined_penalty: self.undefined_penalty,
        }
    }
}

/// How one constraint fares on a distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintOutcome {
    pub label: Option<String>,
    pub statement: String,
    pub kind: ConstraintKind,
    pub margin: f64,
    /// `lhs - rhs`; absent when a conditional is undefined.
    pub difference: Option<f64>,
    pub slack: Option<f64>,
    pub satisfied: bool,
}

pub fn constraint_outcomes(dist: &JointDistribution, cs: &ConstraintSet) -> Vec<ConstraintOutcome> {
    cs.constraints()
        .iter()
        .map(|c| ConstraintOutcome {
            label: c.label().map(str::to_string),
            statement: c.to_string(),
            kind: c.kind(),
            margin: c.margin(),
            difference: c.difference(dist).ok(),
            slack: c.slack(dist).ok(),
            satisfied: c.is_satisfied(dist),
        })
        .collect()
}

/// A distribution satisfying every constraint.
#[derive(Clone, Debug)]
pub struct Model {
    pub distribution: JointDistribution,
    pub outcomes: Vec<ConstraintOutcome>,
    pub penalty: f64,
    pub samples_used: u64,
    /// Index of the restart that produced the model; `None` for a grid point.
    pub winning_sample: Option<u64>,
    pub refined: bool,
    /// Best penalty seen after each round; never increases.
    pub best_penalty_history: Vec<f64>,
}

/// Budget exhausted without a model. Not a proof of infeasibility.
#[derive(Clone, Debug, Error)]
#[error("no satisfying distribution within {samples_used} samples (best penalty {best_penalty:e})")]
pub struct Infeasible {
    pub best_penalty: f64,
    pub best: Option<JointDistribution>,
    pub samples_used: u64,
    pub best_penalty_history: Vec<f64>,
}

#[derive(Clone, Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Infeasible(Box<Infeasible>),
}

impl SearchError {
    pub fn infeasible(&self) -> Option<&Infeasible> {
        match self {
            SearchError::Infeasible(i) => Some(i),
            SearchError::InvalidConfig(_) => None,
        }
    }
}

/// Maps a point on a search simplex to world weights.
pub(crate) trait Chart: Sync {
    fn dim(&self) -> usize;
    fn weights(&self, state: &[f64]) -> Vec<f64>;
    fn is_identity(&self) -> bool {
        false
    }
}

/// The search simplex is the probability simplex itself.
pub(crate) struct Identity(pub usize);

impl Chart for Identity {
    fn dim(&self) -> usize {
        self.0
    }
    fn weights(&self, state: &[f64]) -> Vec<f64> {
        state.to_vec()
    }
    fn is_identity(&self) -> bool {
        true
    }
}

/// Jeffrey-rescales every point so that the mass of `set` equals `value`.
pub(crate) struct PinnedMass {
    pub set: WorldSet,
    pub value: f64,
}

impl Chart for PinnedMass {
    fn dim(&self) -> usize {
        self.set.universe()
    }
    fn weights(&self, state: &[f64]) -> Vec<f64> {
        let n = state.len();
        let inside = self.set.mass(state);
        let inside_count = self.set.count();
        let outside = 1.0 - inside;
        (0..n)
            .map(|w| {
                if self.set.contains(w) {
                    if inside > 0.0 {
                        state[w] * self.value / inside
                    } else {
                        self.value / inside_count as f64
                    }
                } else if outside > 0.0 {
                    state[w] * (1.0 - self.value) / outside
                } else {
                    (1.0 - self.value) / (n - inside_count) as f64
                }
            })
            .collect()
    }
}

fn renormalize(state: &mut [f64]) -> bool {
    let total: f64 = state.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return false;
    }
    for x in state.iter_mut() {
        *x /= total;
    }
    true
}

struct Candidate {
    index: u64,
    state: Vec<f64>,
    /// Penalty against the tightened targets; the descent objective.
    score: f64,
    /// Penalty against the constraints as stated.
    penalty: f64,
    satisfied: bool,
}

impl Candidate {
    fn new(
        chart: &dyn Chart,
        cs: &ConstraintSet,
        targets: Targets,
        index: u64,
        state: Vec<f64>,
    ) -> Self {
        let w = chart.weights(&state);
        Candidate {
            index,
            score: cs.penalty_on(&w, targets),
            penalty: cs.penalty_on(&w, Targets::EXACT),
            satisfied: cs.satisfied_on(&w),
            state,
        }
    }

    fn accepted(&self, tolerance: f64) -> bool {
        self.satisfied && self.penalty <= tolerance
    }
}

/// Coordinate descent on the tightened score: nudge one weight up or down,
/// renormalize, keep the move if the score drops. The step grows after a
/// productive sweep and halves after an unproductive one.
fn refine(
    chart: &dyn Chart,
    cs: &ConstraintSet,
    targets: Targets,
    start: Candidate,
    steps: usize,
) -> Candidate {
    let mut cur = start;
    let dim = cur.state.len();
    let mut step = 0.05;
    let mut trial = vec![0.0; dim];
    for _ in 0..steps {
        if cur.score == 0.0 {
            break;
        }
        let mut improved = false;
        for i in 0..dim {
            for dir in [1.0, -1.0] {
                trial.copy_from_slice(&cur.state);
                trial[i] = (trial[i] + dir * step).max(0.0);
                if !renormalize(&mut trial) {
                    continue;
                }
                let w = chart.weights(&trial);
                let score = cs.penalty_on(&w, targets);
                if score < cur.score {
                    cur.state.copy_from_slice(&trial);
                    cur.score = score;
                    improved = true;
                    break;
                }
            }
        }
        if improved {
            step = (step * 1.5).min(0.25);
        } else {
            step *= 0.5;
            if step < 1e-15 {
                break;
            }
        }
    }
    let w = chart.weights(&cur.state);
    cur.penalty = cs.penalty_on(&w, Targets::EXACT);
    cur.satisfied = cs.satisfied_on(&w);
    cur
}

/// Find a distribution satisfying `cs`, using all available workers.
pub fn find_model(cs: &ConstraintSet, config: &SearchConfig) -> Result<Model, SearchError> {
    find_model_with(cs, config, Execution::Parallel)
}

pub fn find_model_with(
    cs: &ConstraintSet,
    config: &SearchConfig,
    exec: Execution,
) -> Result<Model, SearchError> {
    find_model_in(cs, config, exec, &Identity(cs.space().world_count()))
}

/// Like [`find_model_with`], but every candidate is rescaled so the mass of
/// `pinned` is exactly `value`.
pub fn find_model_pinned(
    cs: &ConstraintSet,
    config: &SearchConfig,
    exec: Execution,
    pinned: &crate::prob::Proposition,
    value: f64,
) -> Result<Model, SearchError> {
    if !(0.0..=1.0).contains(&value) {
        return Err(SearchError::InvalidConfig(format!(
            "pinned mass {value} outside [0, 1]"
        )));
    }
    if !crate::prob::same_space(pinned.space(), cs.space()) {
        return Err(SearchError::InvalidConfig(
            "pinned proposition is over another space".into(),
        ));
    }
    let chart = PinnedMass {
        set: pinned.extension().clone(),
        value,
    };
    find_model_in(cs, config, exec, &chart)
}

pub(crate) fn find_model_in(
    cs: &ConstraintSet,
    config: &SearchConfig,
    exec: Execution,
    chart: &dyn Chart,
) -> Result<Model, SearchError> {
    config.validate()?;
    let space = cs.space();
    let targets = config.targets();

    if let Some(res) = config.grid_resolution {
        if chart.is_identity()
            && space.world_count() <= GRID_MAX_WORLDS
            && res <= GRID_MAX_RESOLUTION
        {
            if let Ok(points) = grid_enumerate(cs, res) {
                if let Some(p) = points.iter().find(|p| cs.satisfied_on(&p.to_weights())) {
                    let w = p.to_weights();
                    return Ok(finish(space, cs, w, 0, None, false, vec![0.0]));
                }
            }
        }
    }

    let dim = chart.dim();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut history = Vec::new();
    let mut drawn = 0u64;

    while drawn < config.max_samples {
        let n = config.batch_size.min(config.max_samples - drawn);
        let start = drawn;
        drawn += n;
        let mut round = exec.map(start..start + n, |i| {
            let state = simplex_point(&mut stream_rng(config.seed, i), dim);
            Candidate::new(chart, cs, targets, i, state)
        });

        let winner = round
            .iter()
            .filter(|c| c.accepted(config.penalty_tolerance))
            .min_by_key(|c| c.index);
        if let Some(c) = winner {
            let w = chart.weights(&c.state);
            history.push(best_penalty(&best).min(c.penalty));
            return Ok(finish(space, cs, w, drawn, Some(c.index), false, history));
        }

        round.sort_by(|a, b| a.score.total_cmp(&b.score).then(a.index.cmp(&b.index)));
        round.truncate(config.refine_per_batch.max(1));
        let refined: Vec<Candidate> = exec.map(0..round.len() as u64, |k| {
            let c = &round[k as usize];
            let start = Candidate {
                index: c.index,
                state: c.state.clone(),
                score: c.score,
                penalty: c.penalty,
                satisfied: c.satisfied,
            };
            refine(chart, cs, targets, start, config.refine_steps)
        });

        for c in refined.iter().chain(round.iter()) {
            if c.penalty < best_penalty(&best) {
                best = Some((c.penalty, chart.weights(&c.state)));
            }
        }
        history.push(best_penalty(&best));

        let winner = refined
            .iter()
            .filter(|c| c.accepted(config.penalty_tolerance))
            .min_by_key(|c| c.index);
        if let Some(c) = winner {
            let w = chart.weights(&c.state);
            return Ok(finish(space, cs, w, drawn, Some(c.index), true, history));
        }
    }

    let (best_penalty, best_dist) = match best {
        Some((p, w)) => (p, JointDistribution::from_unnormalized(space, w).ok()),
        None => (f64::INFINITY, None),
    };
    Err(SearchError::Infeasible(Box::new(Infeasible {
        best_penalty,
        best: best_dist,
        samples_used: drawn,
        best_penalty_history: history,
    })))
}

fn best_penalty(best: &Option<(f64, Vec<f64>)>) -> f64 {
    best.as_ref().map_or(f64::INFINITY, |(p, _)| *p)
}

fn finish(
    space: &SpaceRef,
    cs: &ConstraintSet,
    weights: Vec<f64>,
    samples_used: u64,
    winning_sample: Option<u64>,
    refined: bool,
    history: Vec<f64>,
) -> Model {
    let distribution = JointDistribution::from_unnormalized(space, weights)
        .expect("chart output is a distribution");
    let outcomes = constraint_outcomes(&distribution, cs);
    let penalty = super::constraint::penalty(&distribution, cs);
    Model {
        distribution,
        outcomes,
        penalty,
        samples_used,
        winning_sample,
        refined,
        best_penalty_history: history,
    }
}
