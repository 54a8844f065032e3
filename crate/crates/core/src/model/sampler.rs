use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::prob::{JointDistribution, SpaceRef};

/// Generator for sample `index` of a run seeded with `seed`.
///
/// Each index gets its own ChaCha stream, so a sample depends only on
/// `(seed, index)` and batches can be split across workers freely.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A point drawn uniformly from the `n`-simplex: one standard exponential per
/// coordinate, normalized by their sum.
pub fn simplex_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let mut draws: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 && total.is_finite() {
            for d in &mut draws {
                *d /= total;
            }
            return draws;
        }
    }
}

/// A distribution drawn uniformly from the probability simplex of `space`.
pub fn sample_simplex(space: &SpaceRef, seed: u64) -> JointDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_simplex_with(space, &mut rng)
}

pub fn sample_simplex_with<R: Rng + ?Sized>(space: &SpaceRef, rng: &mut R) -> JointDistribution {
    let weights = simplex_point(rng, space.world_count());
    JointDistribution::from_unnormalized(space, weights)
        .expect("exponential draws are positive and finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::WorldSpace;

    #[test]
    fn one_atom_sample_is_interior() {
        let s = WorldSpace::new(["a"]).unwrap();
        let d = sample_simplex(&s, 3);
        let w = d.weights();
        assert!(w[0] > 0.0 && w[0] < 1.0 && w[1] > 0.0 && w[1] < 1.0);
        assert!((w[0] + w[1] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let s = WorldSpace::new(["a", "b", "c"]).unwrap();
        assert_eq!(sample_simplex(&s, 42), sample_simplex(&s, 42));
        assert_ne!(sample_simplex(&s, 42), sample_simplex(&s, 43));
        let a = simplex_point(&mut stream_rng(9, 17), 8);
        let b = simplex_point(&mut stream_rng(9, 17), 8);
        assert_eq!(a, b);
        assert_ne!(a, simplex_point(&mut stream_rng(9, 18), 8));
    }

    #[test]
    fn coordinate_means_are_uniform() {
        // Every coordinate of a uniform simplex draw has mean 1/n by symmetry.
        let n = 4;
        let draws = 100_000u64;
        let mut sums = vec![0.0; n];
        for i in 0..draws {
            let p = simplex_point(&mut stream_rng(1, i), n);
            for (s, x) in sums.iter_mut().zip(&p) {
                *s += x;
            }
        }
        for s in sums {
            let mean = s / draws as f64;
            assert!((mean - 0.25).abs() < 0.01, "mean {mean}");
        }
    }
}
