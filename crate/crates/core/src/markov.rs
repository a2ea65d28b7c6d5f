//! Exact Markov-chain model of single-bit-flip simulated annealing.
//!
//! States are genotypes; phenotype masses are read out through the
//! representation. From genotype `s` each of the `ell` flips is proposed with
//! probability `1/ell` and accepted by the Metropolis rule, so the chain only
//! ever moves along hypercube edges.

use alloc::vec::Vec;

use crate::error::{check_ell, Error, Result};
use crate::fitness::{count_local_maxima, LocalMaximum, OneMaxTarget};
use crate::representation::Representation;

pub const MARKOV_MAX_ELL: u32 = 12;

/// Absorption iteration stops once the distribution moves less than this
/// (L1) in one step.
const ABSORPTION_TOLERANCE: f64 = 1e-15;
const ABSORPTION_MAX_STEPS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    Fixed(f64),
    /// Step `k` (0-based) runs at `initial * factor^k`, cooled by repeated
    /// multiplication exactly as the annealer does.
    Cooling { initial: f64, factor: f64 },
}

#[derive(Debug, Clone)]
pub struct MarkovModel {
    repr: Representation,
    target: OneMaxTarget,
    schedule: Schedule,
    /// Fitness per genotype.
    fitness: Vec<u32>,
}

impl MarkovModel {
    pub fn new(repr: Representation, target: u32, schedule: Schedule) -> Result<Self> {
        check_ell(repr.ell(), 1, MARKOV_MAX_ELL)?;
        let target = OneMaxTarget::new(repr.ell(), target)?;
        match schedule {
            Schedule::Fixed(t) if !(t > 0.0) => {
                return Err(Error::Domain("temperature must be positive"))
            }
            Schedule::Cooling { initial, factor } if !(initial > 0.0 && factor > 0.0 && factor <= 1.0) => {
                return Err(Error::Domain("cooling needs a positive start and a factor in (0, 1]"))
            }
            _ => {}
        }
        let fitness = (0..repr.size() as u32).map(|g| target.eval_genotype(&repr, g)).collect();
        Ok(Self {
            repr,
            target,
            schedule,
            fitness,
        })
    }

    pub fn ell(&self) -> u32 {
        self.repr.ell()
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn target(&self) -> u32 {
        self.target.target()
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    /// Acceptance probability of moving from fitness `from` to `to`.
    #[inline]
    fn accept(from: u32, to: u32, temperature: f64) -> f64 {
        if to >= from {
            1.0
        } else if temperature == 0.0 {
            0.0
        } else {
            libm::exp(-((from - to) as f64) / temperature)
        }
    }

    /// One step of the chain at `temperature`, pushing `p` into `out`.
    fn step(&self, p: &[f64], out: &mut [f64], temperature: f64) {
        let ell = self.ell();
        let inv = 1.0 / ell as f64;
        out.iter_mut().for_each(|x| *x = 0.0);
        for (s, &mass) in p.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let f = self.fitness[s];
            let mut leave = 0.0;
            for i in 0..ell {
                let t = s ^ (1 << i);
                let move_p = inv * Self::accept(f, self.fitness[t], temperature);
                out[t] += mass * move_p;
                leave += move_p;
            }
            out[s] += mass * (1.0 - leave);
        }
    }

    fn project(&self, genotype_mass: &[f64]) -> Vec<f64> {
        let mut out = alloc::vec![0.0; genotype_mass.len()];
        for (g, &m) in genotype_mass.iter().enumerate() {
            out[self.repr.phenotype(g as u32) as usize] += m;
        }
        out
    }
}

/// Dense row-stochastic matrix over genotypes.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    size: usize,
    data: Vec<f64>,
}

impl TransitionMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.data[from * self.size + to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        &self.data[from * self.size..(from + 1) * self.size]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data.chunks_exact(self.size).map(|r| r.iter().sum()).collect()
    }

    /// States that keep all of their mass.
    pub fn absorbing_states(&self) -> Vec<usize> {
        (0..self.size).filter(|&s| self.get(s, s) == 1.0).collect()
    }
}

fn dense(model: &MarkovModel, temperature: f64) -> TransitionMatrix {
    let n = model.repr.size();
    let ell = model.ell();
    let inv = 1.0 / ell as f64;
    let mut data = alloc::vec![0.0; n * n];
    for s in 0..n {
        let f = model.fitness[s];
        let mut leave = 0.0;
        for i in 0..ell {
            let t = s ^ (1 << i);
            let p = inv * MarkovModel::accept(f, model.fitness[t], temperature);
            data[s * n + t] = p;
            leave += p;
        }
        data[s * n + s] = 1.0 - leave;
    }
    TransitionMatrix { size: n, data }
}

pub fn build_transition_matrix(model: &MarkovModel, temperature: f64) -> Result<TransitionMatrix> {
    if !(temperature > 0.0) {
        return Err(Error::Domain("temperature must be positive"));
    }
    Ok(dense(model, temperature))
}

/// The `T -> 0` limit: only moves to fitter-or-equal neighbors survive.
pub fn zero_temperature_matrix(model: &MarkovModel) -> TransitionMatrix {
    dense(model, 0.0)
}

/// Runs the chain `steps` times from the uniform distribution over genotypes,
/// calling `observe(k, genotype_mass)` after every step `k` (0 is the start).
pub fn evolve_with<F: FnMut(usize, &[f64])>(model: &MarkovModel, steps: usize, mut observe: F) {
    let n = model.repr.size();
    let mut p = alloc::vec![1.0 / n as f64; n];
    let mut next = alloc::vec![0.0; n];
    observe(0, &p);
    let (mut temperature, factor) = match model.schedule {
        Schedule::Fixed(t) => (t, 1.0),
        Schedule::Cooling { initial, factor } => (initial, factor),
    };
    for k in 1..=steps {
        model.step(&p, &mut next, temperature);
        core::mem::swap(&mut p, &mut next);
        temperature *= factor;
        observe(k, &p);
    }
}

/// Phenotype masses after `steps` steps. Annealer generation `g` corresponds
/// to `g - 1` steps.
pub fn evolve_distribution(model: &MarkovModel, steps: usize) -> Vec<f64> {
    let mut last = Vec::new();
    evolve_with(model, steps, |k, p| {
        if k == steps {
            last = model.project(p);
        }
    });
    last
}

/// Phenotype mass at the target after every step `0..=steps`.
pub fn mass_at_optimum_trajectory(model: &MarkovModel, steps: usize) -> Vec<f64> {
    let target = model.target();
    let mut out = Vec::with_capacity(steps + 1);
    evolve_with(model, steps, |_, p| {
        out.push(
            p.iter()
                .enumerate()
                .filter(|&(g, _)| model.repr.phenotype(g as u32) == target)
                .map(|(_, m)| m)
                .sum(),
        )
    });
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Absorption {
    /// Every local maximum with the probability that the zero-temperature
    /// chain, started uniformly, ends there.
    pub maxima: Vec<(LocalMaximum, f64)>,
    pub steps: usize,
}

impl Absorption {
    pub fn total(&self) -> f64 {
        self.maxima.iter().map(|(_, p)| p).sum()
    }

    pub fn at_phenotype(&self, phenotype: u32) -> f64 {
        self.maxima
            .iter()
            .filter(|(m, _)| m.phenotype == phenotype)
            .map(|(_, p)| p)
            .sum()
    }
}

/// Iterates the zero-temperature chain from the uniform start until it stops
/// moving. Every closed class of that chain consists of local maxima, so the
/// limit mass lives entirely on them.
pub fn absorption_probabilities(model: &MarkovModel) -> Result<Absorption> {
    let maxima = count_local_maxima(&model.target, &model.repr)?.maxima;
    if maxima.is_empty() {
        return Err(Error::Invariant("landscape without a local maximum"));
    }
    let n = model.repr.size();
    let mut p = alloc::vec![1.0 / n as f64; n];
    let mut next = alloc::vec![0.0; n];
    let mut steps = 0;
    loop {
        model.step(&p, &mut next, 0.0);
        steps += 1;
        let moved: f64 = p.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        core::mem::swap(&mut p, &mut next);
        if moved < ABSORPTION_TOLERANCE {
            break;
        }
        if steps >= ABSORPTION_MAX_STEPS {
            return Err(Error::Invariant("zero-temperature chain did not settle"));
        }
    }
    let maxima: Vec<(LocalMaximum, f64)> =
        maxima.into_iter().map(|m| (m, p[m.genotype as usize])).collect();
    let total: f64 = maxima.iter().map(|(_, q)| q).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::Invariant("absorbed mass does not sum to one"));
    }
    Ok(Absorption { maxima, steps })
}
