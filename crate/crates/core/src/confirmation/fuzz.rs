use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_transitivity_with, Strictness, TransitivityReport};
use crate::exec::Execution;
use crate::model::{simplex_point, stream_rng};
use crate::prob::{JointDistribution, Proposition, SpaceRef, WorldSet, WorldSpace};

/// How the propositions X, Y, Z are chosen for each sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventMode {
    /// X, Y, Z are the three atoms.
    #[default]
    Atoms,
    /// X, Y, Z are random nonempty proper subsets of the eight worlds.
    Events,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub samples: u64,
    pub seed: u64,
    /// Strict conditions must exceed this margin; weak conditions must be `>= 0`.
    pub margin: f64,
    pub events: EventMode,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            samples: 100_000,
            seed: 1,
            margin: 1e-6,
            events: EventMode::Atoms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub samples: u64,
    /// Samples whose antecedent held.
    pub filtered: u64,
    /// Filtered samples whose conclusion failed.
    pub violations: u64,
    /// Filtered samples with a weak condition at exact equality.
    pub boundary_cases: u64,
    pub min_conclusion_margin: Option<f64>,
    pub first_violation: Option<u64>,
}

impl FuzzSummary {
    fn empty() -> Self {
        FuzzSummary {
            samples: 0,
            filtered: 0,
            violations: 0,
            boundary_cases: 0,
            min_conclusion_margin: None,
            first_violation: None,
        }
    }

    fn merge(mut self, other: FuzzSummary) -> FuzzSummary {
        self.samples += other.samples;
        self.filtered += other.filtered;
        self.violations += other.violations;
        self.boundary_cases += other.boundary_cases;
        self.min_conclusion_margin = match (self.min_conclusion_margin, other.min_conclusion_margin)
        {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.first_violation = match (self.first_violation, other.first_violation) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

fn fuzz_space() -> SpaceRef {
    WorldSpace::new(["X", "Y", "Z"]).expect("static atoms")
}

fn random_event<R: Rng>(rng: &mut R, accept: impl Fn(u32) -> bool) -> u32 {
    loop {
        let m = rng.random_range(1u32..255);
        if accept(m) {
            return m;
        }
    }
}

fn mask_prop(space: &SpaceRef, mask: u32) -> Proposition {
    let set = WorldSet::from_fn(8, |w| (mask >> w) & 1 == 1);
    Proposition::from_worlds(space, &set).expect("eight-world mask")
}

fn tally(index: u64, report: &TransitivityReport, margin: f64, corollary: bool) -> FuzzSummary {
    let mut s = FuzzSummary::empty();
    s.samples = 1;
    let m = |c: &super::ConditionCheck| c.margin;
    let strict_ok = |c: &super::ConditionCheck| m(c).is_some_and(|v| v > margin);
    let weak_ok = |c: &super::ConditionCheck| m(c).is_some_and(|v| v >= 0.0);
    let antecedent = if corollary {
        strict_ok(&report.cond_ii) && weak_ok(&report.cond_iv)
    } else {
        strict_ok(&report.cond_i)
            && strict_ok(&report.cond_ii)
            && weak_ok(&report.cond_iii)
            && weak_ok(&report.cond_iv)
    };
    if !antecedent {
        return s;
    }
    s.filtered = 1;
    if !report.boundary_conditions().is_empty() {
        s.boundary_cases = 1;
    }
    match report.conclusion.margin {
        Some(c) if c > 0.0 => s.min_conclusion_margin = Some(c),
        other => {
            s.min_conclusion_margin = other;
            s.violations = 1;
            s.first_violation = Some(index);
        }
    }
    s
}

/// Sample 3-atom distributions, keep those where (i)–(iv) hold, and count how
/// many of them fail the conclusion `P(Z|X) > P(Z)`.
pub fn fuzz_theorem(config: &FuzzConfig, exec: Execution) -> FuzzSummary {
    let space = fuzz_space();
    let (ax, ay, az) = (
        Proposition::atom(&space, "X").expect("atom"),
        Proposition::atom(&space, "Y").expect("atom"),
        Proposition::atom(&space, "Z").expect("atom"),
    );
    let strictness = Strictness::with_margin(config.margin);
    exec.map_reduce(
        0..config.samples,
        FuzzSummary::empty(),
        |i| {
            let mut rng = stream_rng(config.seed, i);
            let d =
                JointDistribution::new(&space, simplex_point(&mut rng, 8)).expect("simplex sample");
            let (x, y, z) = match config.events {
                EventMode::Atoms => (ax.clone(), ay.clone(), az.clone()),
                EventMode::Events => {
                    let mx = random_event(&mut rng, |_| true);
                    let my = random_event(&mut rng, |_| true);
                    let mz = random_event(&mut rng, |_| true);
                    (
                        mask_prop(&space, mx),
                        mask_prop(&space, my),
                        mask_prop(&space, mz),
                    )
                }
            };
            let r = check_transitivity_with(&d, &x, &y, &z, strictness).expect("shared space");
            tally(i, &r, config.margin, false)
        },
        FuzzSummary::merge,
    )
}

/// Sample distributions with random events where Y's extension is a strict
/// subset of Z's; keep those where (ii) holds strictly and (iv) weakly.
pub fn fuzz_corollary(config: &FuzzConfig, exec: Execution) -> FuzzSummary {
    let space = fuzz_space();
    let space = Arc::clone(&space);
    exec.map_reduce(
        0..config.samples,
        FuzzSummary::empty(),
        |i| {
            let mut rng = stream_rng(config.seed, i);
            let d =
                JointDistribution::new(&space, simplex_point(&mut rng, 8)).expect("simplex sample");
            let mz = random_event(&mut rng, |m| m.count_ones() >= 2);
            let my = random_event(&mut rng, |m| m & !mz == 0 && m != mz);
            let mx = random_event(&mut rng, |_| true);
            let (x, y, z) = (
                mask_prop(&space, mx),
                mask_prop(&space, my),
                mask_prop(&space, mz),
            );
            let r = super::check_corollary(&d, &x, &y, &z, config.margin).expect("y entails z");
            tally(i, &r, config.margin, true)
        },
        FuzzSummary::merge,
    )
}
