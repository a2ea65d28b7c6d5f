use alloc::vec::Vec;

use rand::Rng;

use super::{fold_trials, GenerationStats, IntegerTally};
use crate::error::{Error, Result};
use crate::fitness::OneMaxTarget;
use crate::representation::Representation;
use crate::seeded_rng;

/// Single-organism simulated annealing on generalized ONEMAX.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaConfig {
    pub ell: u32,
    pub target: u32,
    pub initial_temperature: f64,
    pub cooling_factor: f64,
    pub max_generations: u32,
    pub trials: u64,
    pub master_seed: u64,
}

impl SaConfig {
    pub fn new(ell: u32, target: u32) -> Self {
        Self {
            ell,
            target,
            initial_temperature: 50.0,
            cooling_factor: 0.995,
            max_generations: 2000,
            trials: 10_000,
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return Err(Error::Config("cooling factor must lie in (0, 1)"));
        }
        if !(self.initial_temperature > 0.0) {
            return Err(Error::Config("initial temperature must be positive"));
        }
        if self.max_generations == 0 || self.trials == 0 {
            return Err(Error::Config("need at least one generation and one trial"));
        }
        OneMaxTarget::new(self.ell, self.target).map(|_| ())
    }
}

/// Metropolis acceptance: never reject an offspring at least as fit as the
/// parent, otherwise accept with probability `exp(-(parent - offspring) / T)`.
#[inline]
pub(crate) fn metropolis_accepts<R: Rng + ?Sized>(
    parent: u32,
    offspring: u32,
    temperature: f64,
    rng: &mut R,
) -> bool {
    offspring >= parent
        || rng.random::<f64>() < libm::exp(-((parent - offspring) as f64) / temperature)
}

/// Each generation flips one uniformly chosen bit, applies the Metropolis
/// rule at the current temperature, then cools.
pub fn run_sa(cfg: &SaConfig, repr: &Representation) -> Result<Vec<GenerationStats>> {
    cfg.validate()?;
    if repr.ell() != cfg.ell {
        return Err(Error::Shape {
            expected: cfg.ell as usize,
            got: repr.ell() as usize,
        });
    }
    let target = OneMaxTarget::new(cfg.ell, cfg.target)?;
    let generations = cfg.max_generations as usize;
    let n = repr.size() as u32;

    let tally = fold_trials(
        cfg.trials,
        || IntegerTally::new(generations),
        |trial, tally| {
            let mut rng = seeded_rng(cfg.master_seed, trial);
            let mut g = rng.random_range(0..n);
            let mut f = target.eval_genotype(repr, g);
            tally.record(0, f, repr.phenotype(g) == cfg.target, f);
            let mut temperature = cfg.initial_temperature;
            for k in 1..generations {
                let child = g ^ (1 << rng.random_range(0..cfg.ell));
                let fc = target.eval_genotype(repr, child);
                if metropolis_accepts(f, fc, temperature, &mut rng) {
                    g = child;
                    f = fc;
                }
                temperature *= cfg.cooling_factor;
                tally.record(k, f, repr.phenotype(g) == cfg.target, fc);
            }
        },
        IntegerTally::merge,
    );
    Ok(tally.into_stats(cfg.trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::*;

    #[test]
    fn deterministic_under_seed() {
        let mut cfg = SaConfig::new(5, 15);
        cfg.trials = 200;
        cfg.max_generations = 300;
        cfg.master_seed = 9;
        let sb = make_sb(5).unwrap();
        let a = run_sa(&cfg, &sb).unwrap();
        assert_eq!(a, run_sa(&cfg, &sb).unwrap());
        cfg.master_seed = 10;
        assert_ne!(a, run_sa(&cfg, &sb).unwrap());
    }

    #[test]
    fn acceptance_rule() {
        let mut rng = seeded_rng(0, 0);
        for _ in 0..100 {
            assert!(metropolis_accepts(10, 11, 1e-9, &mut rng));
            assert!(metropolis_accepts(10, 10, 1e-9, &mut rng));
            assert!(!metropolis_accepts(10, 9, 1e-9, &mut rng));
        }
        let accepted = (0..20_000).filter(|_| metropolis_accepts(10, 8, 2.0, &mut rng)).count();
        let p = libm::exp(-1.0);
        assert!((accepted as f64 / 20_000.0 - p).abs() < 0.02);
    }

    #[test]
    fn config_validation() {
        let sb = make_sb(5).unwrap();
        let mut cfg = SaConfig::new(5, 15);
        cfg.cooling_factor = 1.0;
        assert!(run_sa(&cfg, &sb).is_err());
        let cfg = SaConfig::new(4, 15);
        assert!(matches!(run_sa(&cfg, &sb), Err(Error::Shape { .. })));
    }

    #[test]
    fn stats_shape() {
        let mut cfg = SaConfig::new(5, 31);
        cfg.trials = 50;
        cfg.max_generations = 40;
        let stats = run_sa(&cfg, &make_brg(5).unwrap()).unwrap();
        assert_eq!(stats.len(), 40);
        assert_eq!(stats[0].generation, 1);
        assert_eq!(stats[0].online_performance, stats[0].mean_fitness);
        assert!(stats.iter().all(|s| (0.0..=1.0).contains(&s.fraction_at_optimum)));
    }
}
