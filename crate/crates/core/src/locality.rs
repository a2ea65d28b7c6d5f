//! Point locality, Rothlauf's `d_m`, general locality / distance distortion,
//! and the closed forms they are checked against.
//!
//! Every metric accumulates an exact integer numerator and divides last, so
//! the bound and identity checks are exact rational comparisons.

use alloc::vec::Vec;

use itertools::Itertools;
use num_rational::Ratio;
use rand::seq::SliceRandom;

use crate::error::{check_ell, Error, Result};
use crate::representation::{Representation, MAX_ELL, MAX_ELL_RANDOM};
use crate::seeded_rng;

/// Default ceiling for the quadratic pair loop of [`general_locality`].
pub const GENERAL_LOCALITY_MAX_ELL: u32 = 14;
/// Hard ceiling accepted by [`general_locality_capped`].
pub const GENERAL_LOCALITY_HARD_MAX_ELL: u32 = 16;

/// Sum over all genotypes and all single-bit flips of the phenotype change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointLocality {
    pub ell: u32,
    /// `sum_s sum_i |r(s ^ 2^i) - r(s)|`; each neighbor pair is counted twice.
    pub numerator: u64,
}

impl PointLocality {
    /// `ell * 2^ell`, the number of (genotype, flip) pairs.
    pub fn denominator(&self) -> u64 {
        self.ell as u64 * (1u64 << self.ell)
    }

    pub fn value(&self) -> Ratio<u64> {
        Ratio::new(self.numerator, self.denominator())
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator() as f64
    }
}

pub fn point_locality(r: &Representation) -> PointLocality {
    let ell = r.ell();
    let perm = r.perm();
    let numerator = perm
        .iter()
        .enumerate()
        .map(|(s, &x)| {
            (0..ell)
                .map(|i| perm[s ^ (1 << i)].abs_diff(x) as u64)
                .sum::<u64>()
        })
        .sum();
    PointLocality { ell, numerator }
}

/// Rothlauf's locality: over unordered neighbor pairs, `sum |d_p - 1|`.
pub fn rothlauf_dm(r: &Representation) -> u64 {
    let ell = r.ell();
    let perm = r.perm();
    let mut dm = 0u64;
    for s in 0..perm.len() {
        for i in 0..ell {
            let t = s | (1 << i);
            if t != s {
                dm += (perm[t].abs_diff(perm[s]) - 1) as u64;
            }
        }
    }
    dm
}

/// Mean of `|d_p - d_g|` over all unordered genotype pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneralLocality {
    pub ell: u32,
    pub numerator: u64,
    /// `C(2^ell, 2)`.
    pub pairs: u64,
}

impl GeneralLocality {
    pub fn value(&self) -> Ratio<u64> {
        if self.pairs == 0 {
            return Ratio::from(0);
        }
        Ratio::new(self.numerator, self.pairs)
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.pairs as f64
    }
}

/// General locality with the default cap of 14 bits.
pub fn general_locality(r: &Representation) -> Result<GeneralLocality> {
    general_locality_capped(r, GENERAL_LOCALITY_MAX_ELL)
}

/// General locality, refusing inputs wider than `cap` (at most 16 bits;
/// 16 bits is about 2*10^9 pairs).
pub fn general_locality_capped(r: &Representation, cap: u32) -> Result<GeneralLocality> {
    let cap = cap.min(GENERAL_LOCALITY_HARD_MAX_ELL);
    check_ell(r.ell(), 1, cap)?;
    let perm = r.perm();
    let n = perm.len() as u64;

    let row = |i: usize| -> u64 {
        let xi = perm[i] as i64;
        perm[i + 1..]
            .iter()
            .enumerate()
            .map(|(k, &xj)| {
                let j = i + 1 + k;
                let dp = (xj as i64 - xi).abs();
                let dg = (i ^ j).count_ones() as i64;
                (dp - dg).unsigned_abs()
            })
            .sum()
    };

    #[cfg(feature = "parallel")]
    let numerator = {
        use rayon::prelude::*;
        (0..perm.len()).into_par_iter().map(row).sum()
    };
    #[cfg(not(feature = "parallel"))]
    let numerator = (0..perm.len()).map(row).sum();

    Ok(GeneralLocality {
        ell: r.ell(),
        numerator,
        pairs: n * (n - 1) / 2,
    })
}

/// Rothlauf's distance distortion `d_c`. Identical to general locality in
/// this domain; computed through the same pair sum.
pub fn distance_distortion(r: &Representation) -> Result<f64> {
    general_locality(r).map(|g| g.as_f64())
}

/// Lower bound on general locality, `(P - G) / C(2^ell, 2)` where `P` sums
/// all phenotype distances and `G` all Hamming distances.
pub fn general_locality_lower_bound_exact(ell: u32) -> Result<Ratio<i128>> {
    check_ell(ell, 1, MAX_ELL)?;
    let n = 1i128 << ell;
    let phenotypic = (n - 1) * n * (n + 1) / 6;
    let genotypic = ell as i128 * (1i128 << (2 * (ell - 1)));
    Ok(Ratio::new(phenotypic - genotypic, n * (n - 1) / 2))
}

pub fn general_locality_lower_bound(ell: u32) -> Result<f64> {
    let r = general_locality_lower_bound_exact(ell)?;
    Ok(*r.numer() as f64 / *r.denom() as f64)
}

/// Mean point locality over all `(2^ell)!` representations: `(2^ell + 1) / 3`.
pub fn expected_point_locality(ell: u32) -> Result<Ratio<u64>> {
    check_ell(ell, 1, 62)?;
    Ok(Ratio::new((1u64 << ell) + 1, 3))
}

/// `(2^ell - 1) / ell`.
pub fn point_locality_lower_bound(ell: u32) -> Ratio<u64> {
    Ratio::new((1u64 << ell) - 1, ell as u64)
}

/// `2^(ell - 1)`.
pub fn point_locality_upper_bound(ell: u32) -> Ratio<u64> {
    Ratio::from(1u64 << (ell - 1))
}

/// Extremes and mean of point locality over every permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveReport {
    pub ell: u32,
    pub permutations: u64,
    pub min: Ratio<u64>,
    pub max: Ratio<u64>,
    pub mean: Ratio<u64>,
    /// A permutation attaining `min`, and one attaining `max`.
    pub argmin: Vec<u32>,
    pub argmax: Vec<u32>,
}

impl ExhaustiveReport {
    pub fn min_matches_bound(&self) -> bool {
        self.min == point_locality_lower_bound(self.ell)
    }

    pub fn max_matches_bound(&self) -> bool {
        self.max == point_locality_upper_bound(self.ell)
    }

    pub fn mean_matches_expectation(&self) -> bool {
        expected_point_locality(self.ell).is_ok_and(|e| e == self.mean)
    }

    pub fn all_hold(&self) -> bool {
        self.min_matches_bound() && self.max_matches_bound() && self.mean_matches_expectation()
    }
}

/// Enumerates all `(2^ell)!` permutations; only feasible for `ell <= 3`.
pub fn verify_bounds_exhaustive(ell: u32) -> Result<ExhaustiveReport> {
    check_ell(ell, 1, 3)?;
    let n = 1u32 << ell;
    let mut total = 0u64;
    let mut count = 0u64;
    let mut lo: Option<(u64, Vec<u32>)> = None;
    let mut hi: Option<(u64, Vec<u32>)> = None;
    for perm in (0..n).permutations(n as usize) {
        let numerator = point_locality(&Representation::from_perm_unchecked(ell, perm.clone())).numerator;
        total += numerator;
        count += 1;
        if lo.as_ref().is_none_or(|(v, _)| numerator < *v) {
            lo = Some((numerator, perm.clone()));
        }
        if hi.as_ref().is_none_or(|(v, _)| numerator > *v) {
            hi = Some((numerator, perm));
        }
    }
    let (lo, argmin) = lo.ok_or(Error::Invariant("no permutations enumerated"))?;
    let (hi, argmax) = hi.ok_or(Error::Invariant("no permutations enumerated"))?;
    let den = ell as u64 * n as u64;
    Ok(ExhaustiveReport {
        ell,
        permutations: count,
        min: Ratio::new(lo, den),
        max: Ratio::new(hi, den),
        mean: Ratio::new(total, den * count),
        argmin,
        argmax,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub samples: u64,
    pub mean: f64,
    /// Standard error of the mean; `None` for a single sample.
    pub stderr: Option<f64>,
}

impl MonteCarloEstimate {
    /// Whether `target` lies within `k` standard errors of the mean.
    pub fn covers(&self, target: f64, k: f64) -> bool {
        match self.stderr {
            Some(se) => libm::fabs(self.mean - target) <= k * se,
            None => self.mean == target,
        }
    }
}

/// Sample mean of point locality over uniformly random representations.
pub fn monte_carlo_expected_locality(ell: u32, trials: u64, seed: u64) -> Result<MonteCarloEstimate> {
    check_ell(ell, 1, MAX_ELL_RANDOM)?;
    if trials == 0 {
        return Err(Error::Config("at least one trial is required"));
    }
    let mut rng = seeded_rng(seed, 0);
    let mut perm: Vec<u32> = (0..1u32 << ell).collect();
    // Welford keeps the variance stable over 10^5+ samples.
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for k in 1..=trials {
        perm.shuffle(&mut rng);
        let r = Representation::from_perm_unchecked(ell, perm);
        let x = point_locality(&r).as_f64();
        perm = r.into_perm();
        let delta = x - mean;
        mean += delta / k as f64;
        m2 += delta * (x - mean);
    }
    let stderr = (trials > 1).then(|| libm::sqrt(m2 / (trials - 1) as f64 / trials as f64));
    Ok(MonteCarloEstimate {
        samples: trials,
        mean,
        stderr,
    })
}

/// All metrics for one representation.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalityReport {
    pub ell: u32,
    pub point: PointLocality,
    pub dm: u64,
    /// `None` unless requested (the pair loop is quadratic in `2^ell`).
    pub general: Option<GeneralLocality>,
}

impl LocalityReport {
    pub fn point_locality(&self) -> Ratio<u64> {
        self.point.value()
    }

    /// Distance distortion; the same quantity as general locality.
    pub fn dc(&self) -> Option<f64> {
        self.general.map(|g| g.as_f64())
    }
}

pub fn locality_report(r: &Representation, with_general: bool) -> Result<LocalityReport> {
    let general = if with_general {
        Some(general_locality(r)?)
    } else {
        None
    };
    Ok(LocalityReport {
        ell: r.ell(),
        point: point_locality(r),
        dm: rothlauf_dm(r),
        general,
    })
}
