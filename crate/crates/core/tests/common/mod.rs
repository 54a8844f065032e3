#![allow(dead_code)]

use analogic_core::prob::{JointDistribution, Proposition, SpaceRef, WorldSet, WorldSpace};
use proptest::prelude::*;

pub fn space(n: usize) -> SpaceRef {
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    WorldSpace::new(names).unwrap()
}

/// Nonnegative weights with at least one positive entry, normalized.
pub fn weights(worlds: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 6 => 0.0..1.0f64], worlds)
        .prop_filter("some mass", |w| w.iter().sum::<f64>() > 1e-6)
        .prop_map(|w| {
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect()
        })
}

pub fn dist(space: &SpaceRef, w: Vec<f64>) -> JointDistribution {
    JointDistribution::from_unnormalized(space, w).unwrap()
}

pub fn mask_prop(space: &SpaceRef, mask: u32) -> Proposition {
    let set = WorldSet::from_fn(space.world_count(), |w| (mask >> w) & 1 == 1);
    Proposition::from_worlds(space, &set).unwrap()
}

/// Mass of the worlds selected by `mask`, summed directly.
pub fn mass(w: &[f64], mask: u32) -> f64 {
    w.iter()
        .enumerate()
        .filter(|(i, _)| (mask >> i) & 1 == 1)
        .map(|(_, x)| x)
        .sum()
}
