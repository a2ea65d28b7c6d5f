use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::{Geometric, StandardNormal};

use super::{map_trials, GenerationStats};
use crate::error::{Error, Result};
use crate::fitness::DeJongSpec;
use crate::representation::{Representation, RepresentationKind};
use crate::seeded_rng;

/// Offset added to every roulette weight so the worst individual keeps a
/// nonzero share.
const ROULETTE_EPSILON: f64 = 1e-9;

/// Generational GA minimizing a De Jong function: roulette-wheel selection,
/// single-point crossover, per-bit mutation, full replacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaConfig {
    pub spec: DeJongSpec,
    pub representation: RepresentationKind,
    /// Seed for randomized representation constructions.
    pub representation_seed: u64,
    pub population_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub generations: u32,
    pub trials: u64,
    pub master_seed: u64,
    /// A trial counts as at the optimum when its best individual's
    /// noise-free fitness is within this distance of the known minimum.
    pub optimum_tolerance: f64,
}

impl GaConfig {
    pub fn new(spec: DeJongSpec, representation: RepresentationKind) -> Self {
        Self {
            spec,
            representation,
            representation_seed: 0,
            population_size: 30,
            crossover_rate: 0.95,
            mutation_rate: 0.01,
            generations: 30,
            trials: 3000,
            master_seed: 0,
            optimum_tolerance: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 || self.population_size % 2 != 0 {
            return Err(Error::Config("population size must be even and at least 2"));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::Config("rates must lie in [0, 1]"));
        }
        if self.generations == 0 || self.trials == 0 {
            return Err(Error::Config("need at least one generation and one trial"));
        }
        if self.spec.dims == 0 || self.spec.bits_per_dim == 0 || self.spec.bits_per_dim > 20 {
            return Err(Error::Config("De Jong spec needs dims >= 1 and 1..=20 bits per dimension"));
        }
        if self.spec.genotype_bits() < 2 && self.crossover_rate > 0.0 {
            return Err(Error::Config("crossover needs a genotype of at least 2 bits"));
        }
        Ok(())
    }

    /// The representation applied to every slice.
    pub fn build_representation(&self) -> Result<Representation> {
        self.representation
            .build_generalized(self.spec.bits_per_dim, self.representation_seed)
    }
}

pub fn run_ga(cfg: &GaConfig) -> Result<Vec<GenerationStats>> {
    run_ga_with(cfg, &cfg.build_representation()?)
}

/// Runs with an explicit representation in place of `cfg.representation`.
pub fn run_ga_with(cfg: &GaConfig, repr: &Representation) -> Result<Vec<GenerationStats>> {
    cfg.validate()?;
    if repr.ell() != cfg.spec.bits_per_dim {
        return Err(Error::Shape {
            expected: cfg.spec.bits_per_dim as usize,
            got: repr.ell() as usize,
        });
    }
    let mutation = match cfg.mutation_rate {
        m if m > 0.0 => Some(Geometric::new(m).map_err(|_| Error::Config("bad mutation rate"))?),
        _ => None,
    };
    let trials = map_trials(cfg.trials, |trial| {
        Population::run_trial(cfg, repr, mutation.as_ref(), trial)
    });

    // Sum in trial order so floating-point totals are reproducible.
    let generations = cfg.generations as usize;
    let pop = cfg.population_size as f64;
    let t = cfg.trials as f64;
    let mut out = Vec::with_capacity(generations);
    let mut evaluated = 0.0;
    for k in 0..generations {
        let (mut mean, mut best, mut hits, mut sum) = (0.0, 0.0, 0u64, 0.0);
        for series in &trials {
            let g = &series[k];
            mean += g.sum / pop;
            best += g.best;
            hits += g.at_optimum as u64;
            sum += g.sum;
        }
        evaluated += sum;
        out.push(GenerationStats {
            generation: k as u32 + 1,
            mean_fitness: mean / t,
            best_fitness: best / t,
            fraction_at_optimum: hits as f64 / t,
            online_performance: evaluated / ((k + 1) as f64 * pop * t),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
struct TrialGeneration {
    sum: f64,
    best: f64,
    at_optimum: bool,
}

/// Flat population: `population_size` genotypes of `dims` words each.
struct Population<'a> {
    cfg: &'a GaConfig,
    repr: &'a Representation,
    words: Vec<u32>,
    fitness: Vec<f64>,
    clean: Vec<f64>,
    point: Vec<f64>,
}

impl<'a> Population<'a> {
    fn run_trial(
        cfg: &'a GaConfig,
        repr: &'a Representation,
        mutation: Option<&Geometric>,
        trial: u64,
    ) -> Vec<TrialGeneration> {
        let mut rng = seeded_rng(cfg.master_seed, trial);
        let dims = cfg.spec.dims;
        let size = cfg.population_size;
        let top = repr.size() as u32;
        let mut pop = Population {
            cfg,
            repr,
            words: (0..size * dims).map(|_| rng.random_range(0..top)).collect(),
            fitness: alloc::vec![0.0; size],
            clean: alloc::vec![0.0; size],
            point: Vec::with_capacity(dims),
        };
        let mut next = alloc::vec![0u32; size * dims];
        let mut series = Vec::with_capacity(cfg.generations as usize);
        series.push(pop.evaluate(&mut rng));
        for _ in 1..cfg.generations {
            pop.breed(&mut next, mutation, &mut rng);
            core::mem::swap(&mut pop.words, &mut next);
            series.push(pop.evaluate(&mut rng));
        }
        series
    }

    fn evaluate<R: Rng>(&mut self, rng: &mut R) -> TrialGeneration {
        let spec = &self.cfg.spec;
        for (i, genotype) in self.words.chunks_exact(spec.dims).enumerate() {
            spec.decode_into(genotype, self.repr, &mut self.point);
            let clean = spec.function.eval(&self.point);
            self.clean[i] = clean;
            self.fitness[i] = if spec.noisy {
                clean + rng.sample::<f64, _>(StandardNormal)
            } else {
                clean
            };
        }
        let best = self
            .fitness
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        TrialGeneration {
            sum: self.fitness.iter().sum(),
            best: self.fitness[best],
            at_optimum: (self.clean[best] - spec.function.optimum()).abs() <= self.cfg.optimum_tolerance,
        }
    }

    fn breed<R: Rng>(&self, next: &mut [u32], mutation: Option<&Geometric>, rng: &mut R) {
        let dims = self.cfg.spec.dims;
        let bits = self.cfg.spec.bits_per_dim;
        let total_bits = self.cfg.spec.genotype_bits();
        let worst = self.fitness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let wheel = WeightedIndex::new(self.fitness.iter().map(|f| (worst - f) + ROULETTE_EPSILON))
            .expect("roulette weights are positive and finite");

        for pair in next.chunks_exact_mut(2 * dims) {
            let (a, b) = pair.split_at_mut(dims);
            let p1 = wheel.sample(rng);
            let p2 = wheel.sample(rng);
            a.copy_from_slice(&self.words[p1 * dims..(p1 + 1) * dims]);
            b.copy_from_slice(&self.words[p2 * dims..(p2 + 1) * dims]);
            if rng.random_bool(self.cfg.crossover_rate) {
                let cut = rng.random_range(1..total_bits);
                crossover(a, b, cut, bits);
            }
            if let Some(m) = mutation {
                mutate(a, bits, total_bits, m, rng);
                mutate(b, bits, total_bits, m, rng);
            }
        }
    }
}

/// Swaps the tails of two bit strings after position `cut` (0 < cut < L).
/// Bit strings read each word most significant bit first.
fn crossover(a: &mut [u32], b: &mut [u32], cut: usize, bits: u32) {
    let dim = cut / bits as usize;
    let offset = (cut % bits as usize) as u32;
    let low = (1u32 << (bits - offset)) - 1;
    let (wa, wb) = (a[dim], b[dim]);
    a[dim] = (wa & !low) | (wb & low);
    b[dim] = (wb & !low) | (wa & low);
    a[dim + 1..].swap_with_slice(&mut b[dim + 1..]);
}

/// Flips each bit independently with the geometric distribution's success
/// probability by jumping straight to the next flipped position.
fn mutate<R: Rng>(genotype: &mut [u32], bits: u32, total_bits: usize, gaps: &Geometric, rng: &mut R) {
    let mut pos = gaps.sample(rng);
    while pos < total_bits as u64 {
        let p = pos as usize;
        let dim = p / bits as usize;
        let offset = (p % bits as usize) as u32;
        genotype[dim] ^= 1 << (bits - 1 - offset);
        pos = pos.saturating_add(1).saturating_add(gaps.sample(rng));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::DeJongFunction;

    fn to_bits(words: &[u32], bits: u32) -> Vec<bool> {
        words
            .iter()
            .flat_map(|&w| (0..bits).rev().map(move |i| (w >> i) & 1 == 1))
            .collect()
    }

    #[test]
    fn crossover_matches_bitstring_splice() {
        let bits = 5;
        let a0 = [0b10110u32, 0b00111, 0b11001];
        let b0 = [0b01001u32, 0b11100, 0b00110];
        for cut in 1..15 {
            let (mut a, mut b) = (a0, b0);
            crossover(&mut a, &mut b, cut, bits);
            let (sa, sb) = (to_bits(&a0, bits), to_bits(&b0, bits));
            let mut ea = sa[..cut].to_vec();
            ea.extend_from_slice(&sb[cut..]);
            let mut eb = sb[..cut].to_vec();
            eb.extend_from_slice(&sa[cut..]);
            assert_eq!(to_bits(&a, bits), ea, "cut {cut}");
            assert_eq!(to_bits(&b, bits), eb, "cut {cut}");
        }
    }

    #[test]
    fn geometric_mutation_rate() {
        let mut rng = seeded_rng(3, 0);
        let gaps = Geometric::new(0.01).unwrap();
        let mut flips = 0u32;
        let rounds = 20_000;
        for _ in 0..rounds {
            let mut g = [0u32; 30];
            mutate(&mut g, 8, 240, &gaps, &mut rng);
            flips += g.iter().map(|w| w.count_ones()).sum::<u32>();
        }
        let rate = flips as f64 / (rounds as f64 * 240.0);
        assert!((rate - 0.01).abs() < 0.0005, "{rate}");
    }

    fn small(function: DeJongFunction, kind: RepresentationKind) -> GaConfig {
        let mut cfg = GaConfig::new(DeJongSpec::classical(function), kind);
        cfg.trials = 20;
        cfg.generations = 10;
        cfg
    }

    #[test]
    fn online_performance_is_mean_of_all_evaluations() {
        let cfg = small(DeJongFunction::F1, RepresentationKind::Brg);
        let stats = run_ga(&cfg).unwrap();
        let mut running = 0.0;
        for (k, s) in stats.iter().enumerate() {
            running += s.mean_fitness;
            let streaming = running / (k + 1) as f64;
            assert!((s.online_performance - streaming).abs() < 1e-9 * streaming.abs().max(1.0));
        }
    }

    #[test]
    fn without_variation_no_new_genotypes_appear() {
        // Selection only resamples, so the best individual can never improve.
        let mut cfg = small(DeJongFunction::F1, RepresentationKind::Sb);
        cfg.crossover_rate = 0.0;
        cfg.mutation_rate = 0.0;
        cfg.trials = 1;
        for seed in 0..10 {
            cfg.master_seed = seed;
            let stats = run_ga(&cfg).unwrap();
            assert!(stats.windows(2).all(|w| w[1].best_fitness >= w[0].best_fitness));
        }
    }

    #[test]
    fn deterministic_and_validated() {
        let cfg = small(DeJongFunction::F4, RepresentationKind::Ngg32);
        assert_eq!(run_ga(&cfg).unwrap(), run_ga(&cfg).unwrap());
        let mut bad = cfg;
        bad.population_size = 31;
        assert!(run_ga(&bad).is_err());
        assert!(matches!(
            run_ga_with(&cfg, &crate::representation::make_sb(5).unwrap()),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn every_function_runs() {
        for f in DeJongFunction::ALL {
            for kind in [RepresentationKind::Sb, RepresentationKind::Ubl32] {
                let stats = run_ga(&small(f, kind)).unwrap();
                assert_eq!(stats.len(), 10);
                assert!(stats.iter().all(|s| s.online_performance.is_finite()));
            }
        }
    }
}
