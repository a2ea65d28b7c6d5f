//! Evolutionary engines: simulated annealing, (1+1)-ES and a generational GA.
//!
//! Generations are numbered from 1. Generation 1 is the random initial
//! genotype (or population); each later generation applies one variation
//! step. Trial `i` draws only from `seeded_rng(master_seed, i)`, and
//! per-generation statistics are reduced in an order-independent way, so
//! results do not depend on whether trials run in parallel.

use alloc::vec::Vec;

mod es;
mod ga;
mod sa;

pub use es::{run_es, EsConfig, EsReport};
pub use ga::{run_ga, run_ga_with, GaConfig};
pub use sa::{run_sa, SaConfig};

/// Aggregate over all trials for one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub generation: u32,
    /// Mean fitness of the current individuals across trials.
    pub mean_fitness: f64,
    /// Mean across trials of each trial's best individual this generation.
    /// For the single-organism engines this equals `mean_fitness`.
    pub best_fitness: f64,
    /// Share of trials holding an optimal individual.
    pub fraction_at_optimum: f64,
    /// Mean of every fitness evaluation made up to and including this generation.
    pub online_performance: f64,
}

/// Exact integer per-generation sums for the single-organism engines.
#[derive(Debug, Clone)]
pub(crate) struct IntegerTally {
    current: Vec<u64>,
    at_optimum: Vec<u64>,
    evaluated: Vec<u64>,
}

impl IntegerTally {
    pub(crate) fn new(generations: usize) -> Self {
        Self {
            current: alloc::vec![0; generations],
            at_optimum: alloc::vec![0; generations],
            evaluated: alloc::vec![0; generations],
        }
    }

    /// Records generation `index` (0-based) of one trial.
    #[inline]
    pub(crate) fn record(&mut self, index: usize, current: u32, at_optimum: bool, evaluated: u32) {
        self.current[index] += current as u64;
        self.at_optimum[index] += at_optimum as u64;
        self.evaluated[index] += evaluated as u64;
    }

    pub(crate) fn merge(mut self, other: Self) -> Self {
        for (a, b) in [
            (&mut self.current, &other.current),
            (&mut self.at_optimum, &other.at_optimum),
            (&mut self.evaluated, &other.evaluated),
        ] {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        self
    }

    pub(crate) fn into_stats(self, trials: u64) -> Vec<GenerationStats> {
        let t = trials as f64;
        let mut evaluated_so_far = 0u64;
        (0..self.current.len())
            .map(|k| {
                evaluated_so_far += self.evaluated[k];
                let mean = self.current[k] as f64 / t;
                GenerationStats {
                    generation: k as u32 + 1,
                    mean_fitness: mean,
                    best_fitness: mean,
                    fraction_at_optimum: self.at_optimum[k] as f64 / t,
                    online_performance: evaluated_so_far as f64 / ((k as u64 + 1) as f64 * t),
                }
            })
            .collect()
    }
}

/// Folds `run(trial, &mut acc)` over `0..trials`, merging partial
/// accumulators with `merge`. `merge` must be associative and commutative.
pub(crate) fn fold_trials<A, I, R, M>(trials: u64, init: I, run: R, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    R: Fn(u64, &mut A) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials)
            .into_par_iter()
            .fold(&init, |mut acc, i| {
                run(i, &mut acc);
                acc
            })
            .reduce(&init, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &merge;
        let mut acc = init();
        for i in 0..trials {
            run(i, &mut acc);
        }
        acc
    }
}

/// Runs every trial and returns the outputs in trial-index order.
pub(crate) fn map_trials<T, F>(trials: u64, run: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..trials).map(run).collect()
    }
}
