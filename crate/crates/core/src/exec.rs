//! Data-parallel helpers with a sequential fallback.
//!
//! Every batch operation in the crate goes through these helpers. Results are
//! merged in index order, so `Sequential` and `Parallel` produce identical
//! output. Without the `parallel` feature, `Parallel` runs sequentially.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// `f` applied to every index, collected in index order.
    pub fn map<T, F>(self, range: Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// `f` applied to every item of a slice, collected in order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// The result for the lowest index at which `f` returns `Some`.
    pub fn find_first<T, F>(self, range: Range<u64>, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(u64) -> Option<T> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().find_map_first(f);
        }
        range.into_iter().find_map(f)
    }

    /// Map then fold with an associative, commutative `combine`.
    pub fn map_reduce<T, F, C>(self, range: Range<u64>, identity: T, f: F, combine: C) -> T
    where
        T: Send + Sync + Clone,
        F: Fn(u64) -> T + Sync + Send,
        C: Fn(T, T) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range
                .into_par_iter()
                .map(f)
                .reduce(|| identity.clone(), &combine);
        }
        range.map(f).fold(identity, combine)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(exec.map(0..5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(
                exec.find_first(0..1000, |i| (i % 97 == 96).then_some(i)),
                Some(96)
            );
            assert_eq!(exec.map_reduce(0..101, 0u64, |i| i, |a, b| a + b), 5050);
            assert_eq!(exec.map_slice(&[1, 2, 3], |x| x + 1), vec![2, 3, 4]);
        }
    }
}
