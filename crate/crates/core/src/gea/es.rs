use alloc::vec::Vec;

use rand::Rng;

use super::{fold_trials, GenerationStats, IntegerTally};
use crate::error::{Error, Result};
use crate::fitness::OneMaxTarget;
use crate::representation::Representation;
use crate::seeded_rng;

/// (1+1)-ES with independent per-bit mutation and strict elitism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EsConfig {
    pub ell: u32,
    pub target: u32,
    pub mutation_rate: f64,
    pub max_generations: u32,
    pub trials: u64,
    pub master_seed: u64,
    /// Start every trial from this genotype instead of a random one.
    pub start: Option<u32>,
}

impl EsConfig {
    pub fn new(ell: u32, target: u32) -> Self {
        Self {
            ell,
            target,
            mutation_rate: 0.2,
            max_generations: 1000,
            trials: 10_000,
            master_seed: 0,
            start: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mutation_rate > 0.0 && self.mutation_rate <= 1.0) {
            return Err(Error::Config("mutation rate must lie in (0, 1]"));
        }
        if self.max_generations == 0 || self.trials == 0 {
            return Err(Error::Config("need at least one generation and one trial"));
        }
        if self.start.is_some_and(|s| s >> self.ell != 0) {
            return Err(Error::Config("start genotype wider than ell"));
        }
        OneMaxTarget::new(self.ell, self.target).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EsReport {
    pub stats: Vec<GenerationStats>,
    /// Mean generation at which the optimum was first held, over converged
    /// trials only. The initial genotype is generation 1.
    pub mean_generations_to_optimum: Option<f64>,
    pub converged_fraction: f64,
}

#[derive(Clone)]
struct EsTally {
    per_generation: IntegerTally,
    converged: u64,
    hit_generation_sum: u64,
}

pub fn run_es(cfg: &EsConfig, repr: &Representation) -> Result<EsReport> {
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
        || EsTally {
            per_generation: IntegerTally::new(generations),
            converged: 0,
            hit_generation_sum: 0,
        },
        |trial, tally| {
            let mut rng = seeded_rng(cfg.master_seed, trial);
            let mut g = cfg.start.unwrap_or_else(|| rng.random_range(0..n));
            let mut f = target.eval_genotype(repr, g);
            let mut hit = (repr.phenotype(g) == cfg.target).then_some(1u64);
            tally.per_generation.record(0, f, hit.is_some(), f);
            for k in 1..generations {
                let mask = (0..cfg.ell).fold(0u32, |m, bit| {
                    m | ((rng.random_bool(cfg.mutation_rate) as u32) << bit)
                });
                let child = g ^ mask;
                let fc = target.eval_genotype(repr, child);
                if fc > f {
                    g = child;
                    f = fc;
                }
                let at_optimum = repr.phenotype(g) == cfg.target;
                if at_optimum && hit.is_none() {
                    hit = Some(k as u64 + 1);
                }
                tally.per_generation.record(k, f, at_optimum, fc);
            }
            if let Some(h) = hit {
                tally.converged += 1;
                tally.hit_generation_sum += h;
            }
        },
        |a, b| EsTally {
            per_generation: a.per_generation.merge(b.per_generation),
            converged: a.converged + b.converged,
            hit_generation_sum: a.hit_generation_sum + b.hit_generation_sum,
        },
    );
    Ok(EsReport {
        stats: tally.per_generation.into_stats(cfg.trials),
        mean_generations_to_optimum: (tally.converged > 0)
            .then(|| tally.hit_generation_sum as f64 / tally.converged as f64),
        converged_fraction: tally.converged as f64 / cfg.trials as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::*;

    #[test]
    fn forced_flip_converges_in_one_step() {
        let mut cfg = EsConfig::new(1, 1);
        cfg.mutation_rate = 1.0;
        cfg.start = Some(0);
        cfg.trials = 10;
        cfg.max_generations = 5;
        let report = run_es(&cfg, &make_sb(1).unwrap()).unwrap();
        // Initial genotype is generation 1; the first mutation lands on the optimum.
        assert_eq!(report.mean_generations_to_optimum, Some(2.0));
        assert_eq!(report.stats[0].fraction_at_optimum, 0.0);
        assert_eq!(report.stats[1].fraction_at_optimum, 1.0);
        assert_eq!(report.converged_fraction, 1.0);
    }

    #[test]
    fn parent_fitness_never_decreases() {
        let mut cfg = EsConfig::new(5, 15);
        cfg.trials = 1;
        cfg.max_generations = 400;
        for seed in 0..20 {
            cfg.master_seed = seed;
            let report = run_es(&cfg, &make_ubl32()).unwrap();
            assert!(report.stats.windows(2).all(|w| w[1].mean_fitness >= w[0].mean_fitness));
        }
    }

    #[test]
    fn deterministic_and_validated() {
        let mut cfg = EsConfig::new(5, 31);
        cfg.trials = 300;
        cfg.max_generations = 100;
        let sb = make_sb(5).unwrap();
        assert_eq!(run_es(&cfg, &sb).unwrap(), run_es(&cfg, &sb).unwrap());
        cfg.mutation_rate = 0.0;
        assert!(run_es(&cfg, &sb).is_err());
    }
}
