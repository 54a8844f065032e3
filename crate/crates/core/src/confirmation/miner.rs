use serde::{Deserialize, Serialize};

use super::{
    check_transitivity, confirm, ConfirmationError, ConfirmationVerdict, TransitivityReport,
};
use crate::exec::Execution;
use crate::model::{simplex_point, stream_rng};
use crate::prob::{JointDistribution, Proposition, WorldSpace};

/// How clearly each link must hold for a sample to count as a counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinerThresholds {
    /// `P(B|A) > P(B) + first_link`
    pub first_link: f64,
    /// `P(C|B) > P(C) + second_link`
    pub second_link: f64,
    /// `P(C|A) < P(C) - reversal`
    pub reversal: f64,
}

impl Default for MinerThresholds {
    fn default() -> Self {
        MinerThresholds {
            first_link: 0.01,
            second_link: 0.01,
            reversal: 0.001,
        }
    }
}

/// A distribution over atoms A, B, C where A confirms B and B confirms C but
/// A disconfirms C.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub sample_index: u64,
    pub distribution: JointDistribution,
    pub a: Proposition,
    pub b: Proposition,
    pub c: Proposition,
    pub a_confirms_b: ConfirmationVerdict,
    pub b_confirms_c: ConfirmationVerdict,
    pub a_confirms_c: ConfirmationVerdict,
    /// The transitivity conditions with X = A, Y = B, Z = C.
    pub report: TransitivityReport,
}

/// Mines with default thresholds using all available workers.
pub fn mine_naive_transitivity_counterexample(
    seed: u64,
    budget: u64,
) -> Result<Counterexample, ConfirmationError> {
    mine_with(
        seed,
        budget,
        &MinerThresholds::default(),
        Execution::Parallel,
    )
}

/// Scans samples `0..budget` of the seeded stream and returns the
/// lowest-index counterexample, so the result does not depend on `exec`.
pub fn mine_with(
    seed: u64,
    budget: u64,
    thresholds: &MinerThresholds,
    exec: Execution,
) -> Result<Counterexample, ConfirmationError> {
    let space = WorldSpace::new(["A", "B", "C"]).expect("static atoms");
    let a = Proposition::atom(&space, "A").expect("atom");
    let b = Proposition::atom(&space, "B").expect("atom");
    let c = Proposition::atom(&space, "C").expect("atom");

    exec.find_first(0..budget, |i| {
        let d = JointDistribution::new(&space, simplex_point(&mut stream_rng(seed, i), 8)).ok()?;
        let ab = confirm(&d, &a, &b, thresholds.first_link).ok()?;
        if !ab.confirms {
            return None;
        }
        let bc = confirm(&d, &b, &c, thresholds.second_link).ok()?;
        if !bc.confirms {
            return None;
        }
        let ac = confirm(&d, &a, &c, 0.0).ok()?;
        if ac.degree >= -thresholds.reversal {
            return None;
        }
        let report = check_transitivity(&d, &a, &b, &c, 0.0).ok()?;
        Some(Counterexample {
            sample_index: i,
            distribution: d,
            a: a.clone(),
            b: b.clone(),
            c: c.clone(),
            a_confirms_b: ab,
            b_confirms_c: bc,
            a_confirms_c: ac,
            report,
        })
    })
    .ok_or(ConfirmationError::NotFound { budget })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_and_verifies_counterexample() {
        let cx = mine_naive_transitivity_counterexample(1, 100_000).unwrap();
        let d = &cx.distribution;
        // Independent recomputation straight from the weights.
        let w = d.weights();
        let mass = |f: &dyn Fn(usize) -> bool| (0..8).filter(|&i| f(i)).map(|i| w[i]).sum::<f64>();
        let (pa, pb, pc) = (
            mass(&|i| i & 1 != 0),
            mass(&|i| i & 2 != 0),
            mass(&|i| i & 4 != 0),
        );
        let p_b_a = mass(&|i| i & 3 == 3) / pa;
        let p_c_b = mass(&|i| i & 6 == 6) / pb;
        let p_c_a = mass(&|i| i & 5 == 5) / pa;
        assert!(p_b_a > pb + 0.01);
        assert!(p_c_b > pc + 0.01);
        assert!(p_c_a < pc - 0.001);
        assert!(!cx.report.failing_conditions().is_empty());
    }

    #[test]
    fn zero_budget_finds_nothing() {
        assert_eq!(
            mine_naive_transitivity_counterexample(1, 0).unwrap_err(),
            ConfirmationError::NotFound { budget: 0 }
        );
    }

    #[test]
    fn deterministic_across_modes() {
        let t = MinerThresholds::default();
        let s = mine_with(4, 50_000, &t, Execution::Sequential).unwrap();
        let p = mine_with(4, 50_000, &t, Execution::Parallel).unwrap();
        assert_eq!(s.sample_index, p.sample_index);
        assert_eq!(s.distribution, p.distribution);
        let bigger = mine_with(4, 80_000, &t, Execution::Parallel).unwrap();
        assert_eq!(bigger.sample_index, s.sample_index);
    }
}
