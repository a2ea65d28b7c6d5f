//! Generalized ONEMAX, the De Jong suite over fixed-point genotypes, and
//! local-maximum enumeration.

use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::representation::Representation;

/// Generalized ONEMAX: `x_max - |x - a|`, maximal only at phenotype `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneMaxTarget {
    ell: u32,
    a: u32,
}

impl OneMaxTarget {
    pub fn new(ell: u32, a: u32) -> Result<Self> {
        crate::error::check_ell(ell, 1, crate::representation::MAX_ELL)?;
        if a > (1u32 << ell) - 1 {
            return Err(Error::Domain("target phenotype outside [0, 2^ell)"));
        }
        Ok(Self { ell, a })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn target(&self) -> u32 {
        self.a
    }

    pub fn x_max(&self) -> u32 {
        (1u32 << self.ell) - 1
    }

    /// Unchecked evaluation for the engines' inner loops.
    #[inline]
    pub fn eval(&self, phenotype: u32) -> u32 {
        self.x_max() - phenotype.abs_diff(self.a)
    }

    #[inline]
    pub fn eval_genotype(&self, repr: &Representation, genotype: u32) -> u32 {
        self.eval(repr.phenotype(genotype))
    }
}

pub fn onemax_fitness(t: &OneMaxTarget, phenotype: u32) -> Result<u32> {
    if phenotype > t.x_max() {
        return Err(Error::Domain("phenotype outside [0, 2^ell)"));
    }
    Ok(t.eval(phenotype))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalMaximum {
    pub genotype: u32,
    pub phenotype: u32,
    pub fitness: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalMaxReport {
    pub count: usize,
    pub maxima: Vec<LocalMaximum>,
}

/// Genotypes with no strictly fitter single-bit neighbor, in genotype order.
pub fn count_local_maxima(t: &OneMaxTarget, repr: &Representation) -> Result<LocalMaxReport> {
    if repr.ell() != t.ell() {
        return Err(Error::Shape {
            expected: t.ell() as usize,
            got: repr.ell() as usize,
        });
    }
    crate::error::check_ell(repr.ell(), 1, crate::representation::MAX_ELL_RANDOM)?;
    let maxima: Vec<LocalMaximum> = (0..repr.size() as u32)
        .filter_map(|g| {
            let f = t.eval_genotype(repr, g);
            let dominated = (0..repr.ell()).any(|i| t.eval_genotype(repr, g ^ (1 << i)) > f);
            (!dominated).then(|| LocalMaximum {
                genotype: g,
                phenotype: repr.phenotype(g),
                fitness: f,
            })
        })
        .collect();
    Ok(LocalMaxReport {
        count: maxima.len(),
        maxima,
    })
}

/// The five De Jong test functions (all minimized).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeJongFunction {
    /// Parabola.
    F1,
    /// Rosenbrock's saddle.
    F2,
    /// Step function.
    F3,
    /// Quartic with Gaussian noise.
    F4,
    /// Shekel's foxholes.
    F5,
}

impl DeJongFunction {
    pub const ALL: [DeJongFunction; 5] = [Self::F1, Self::F2, Self::F3, Self::F4, Self::F5];

    pub fn name(self) -> &'static str {
        match self {
            Self::F1 => "f1",
            Self::F2 => "f2",
            Self::F3 => "f3",
            Self::F4 => "f4",
            Self::F5 => "f5",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Known global minimum of the noise-free function.
    pub fn optimum(self) -> f64 {
        match self {
            Self::F1 | Self::F2 | Self::F4 => 0.0,
            Self::F3 => -30.0,
            Self::F5 => 0.998_003_837_794_449_3,
        }
    }

    /// Noise-free value at a real point.
    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            Self::F1 => x.iter().map(|v| v * v).sum(),
            Self::F2 => {
                let (a, b) = (x[0], x[1]);
                let t = a * a - b;
                100.0 * t * t + (1.0 - a) * (1.0 - a)
            }
            Self::F3 => x.iter().map(|&v| libm::floor(v)).sum(),
            Self::F4 => x
                .iter()
                .enumerate()
                .map(|(i, &v)| (i + 1) as f64 * (v * v) * (v * v))
                .sum(),
            Self::F5 => {
                let holes: f64 = (0..25)
                    .map(|j| {
                        let (a1, a2) = foxhole(j);
                        let d1 = x[0] - a1;
                        let d2 = x[1] - a2;
                        1.0 / ((j + 1) as f64 + libm::pow(d1, 6.0) + libm::pow(d2, 6.0))
                    })
                    .sum();
                1.0 / (1.0 / 500.0 + holes)
            }
        }
    }
}

/// Foxhole centers on the 5x5 grid over `{-32, -16, 0, 16, 32}`.
fn foxhole(j: usize) -> (f64, f64) {
    const GRID: [f64; 5] = [-32.0, -16.0, 0.0, 16.0, 32.0];
    (GRID[j % 5], GRID[j / 5])
}

/// Fixed-point encoding of a De Jong function: `dims` slices of
/// `bits_per_dim` bits, each decoded through a representation and rescaled
/// linearly onto `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeJongSpec {
    pub function: DeJongFunction,
    pub dims: usize,
    pub bits_per_dim: u32,
    pub lo: f64,
    pub hi: f64,
    /// Adds standard normal noise to every evaluation (f4 only by default).
    pub noisy: bool,
}

impl DeJongSpec {
    /// The classical widths and ranges of the suite.
    pub fn classical(function: DeJongFunction) -> Self {
        let (dims, bits_per_dim, bound, noisy) = match function {
            DeJongFunction::F1 => (3, 10, 5.12, false),
            DeJongFunction::F2 => (2, 12, 2.048, false),
            DeJongFunction::F3 => (5, 10, 5.12, false),
            DeJongFunction::F4 => (30, 8, 1.28, true),
            DeJongFunction::F5 => (2, 17, 65.536, false),
        };
        Self {
            function,
            dims,
            bits_per_dim,
            lo: -bound,
            hi: bound,
            noisy,
        }
    }

    pub fn genotype_bits(&self) -> usize {
        self.dims * self.bits_per_dim as usize
    }

    /// Phenotype `0` maps to `lo` and `2^bits - 1` to `hi`, both exactly.
    pub fn rescale(&self, phenotype: u32) -> f64 {
        let top = (1u64 << self.bits_per_dim) - 1;
        match phenotype as u64 {
            0 => self.lo,
            p if p == top => self.hi,
            p => self.lo + p as f64 * ((self.hi - self.lo) / top as f64),
        }
    }

    fn check(&self, genotype: &[u32], repr: &Representation) -> Result<()> {
        if repr.ell() != self.bits_per_dim {
            return Err(Error::Shape {
                expected: self.bits_per_dim as usize,
                got: repr.ell() as usize,
            });
        }
        if genotype.len() != self.dims {
            return Err(Error::Shape {
                expected: self.dims,
                got: genotype.len(),
            });
        }
        if genotype.iter().any(|&w| w as usize >= repr.size()) {
            return Err(Error::Domain("genotype slice wider than bits_per_dim"));
        }
        Ok(())
    }

    /// Decodes one word per dimension into the real point.
    pub fn decode_into(&self, genotype: &[u32], repr: &Representation, out: &mut Vec<f64>) {
        out.clear();
        out.extend(genotype.iter().map(|&w| self.rescale(repr.phenotype(w))));
    }

    pub fn decode(&self, genotype: &[u32], repr: &Representation) -> Result<Vec<f64>> {
        self.check(genotype, repr)?;
        let mut out = Vec::with_capacity(self.dims);
        self.decode_into(genotype, repr, &mut out);
        Ok(out)
    }

    /// Packs a flat bit string (most significant bit of each slice first)
    /// into one word per dimension.
    pub fn pack_bits(&self, bits: &[bool]) -> Result<Vec<u32>> {
        if bits.len() != self.genotype_bits() {
            return Err(Error::Shape {
                expected: self.genotype_bits(),
                got: bits.len(),
            });
        }
        Ok(bits
            .chunks(self.bits_per_dim as usize)
            .map(|slice| slice.iter().fold(0u32, |w, &b| (w << 1) | b as u32))
            .collect())
    }
}

/// Fitness of a genotype given as one word per dimension. Noise, when the
/// spec asks for it, is drawn from `noise`.
pub fn dejong_fitness<R: Rng + ?Sized>(
    spec: &DeJongSpec,
    genotype: &[u32],
    repr: &Representation,
    noise: &mut R,
) -> Result<f64> {
    let x = spec.decode(genotype, repr)?;
    let mut f = spec.function.eval(&x);
    if spec.noisy {
        f += noise.sample::<f64, _>(StandardNormal);
    }
    Ok(f)
}

/// Same as [`dejong_fitness`] for a flat bit string.
pub fn dejong_fitness_bits<R: Rng + ?Sized>(
    spec: &DeJongSpec,
    bits: &[bool],
    repr: &Representation,
    noise: &mut R,
) -> Result<f64> {
    dejong_fitness(spec, &spec.pack_bits(bits)?, repr, noise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::*;
    use crate::seeded_rng;

    #[test]
    fn onemax_values() {
        let t = OneMaxTarget::new(5, 15).unwrap();
        assert_eq!(onemax_fitness(&t, 15), Ok(31));
        assert_eq!(onemax_fitness(&t, 16), Ok(30));
        assert!(onemax_fitness(&t, 32).is_err());
        let t = OneMaxTarget::new(5, 31).unwrap();
        assert_eq!(onemax_fitness(&t, 0), Ok(0));
        assert!(OneMaxTarget::new(5, 32).is_err());
    }

    #[test]
    fn onemax_unique_maximum() {
        for a in 0..32 {
            let t = OneMaxTarget::new(5, a).unwrap();
            let best: Vec<u32> = (0..32).filter(|&x| t.eval(x) == t.x_max()).collect();
            assert_eq!(best, [a]);
        }
    }

    #[test]
    fn local_maxima_counts() {
        let sb = make_sb(5).unwrap();
        let count = |r: &Representation, a| count_local_maxima(&OneMaxTarget::new(5, a).unwrap(), r).unwrap().count;
        assert_eq!(count(&sb, 15), 2);
        assert_eq!(count(&make_ubl32(), 15), 4);
        assert_eq!(count(&sb, 29), 3);
        assert_eq!(count(&sb, 31), 1);
        let report = count_local_maxima(&OneMaxTarget::new(5, 15).unwrap(), &sb).unwrap();
        let phenotypes: Vec<u32> = report.maxima.iter().map(|m| m.phenotype).collect();
        assert_eq!(phenotypes, [15, 16]);
    }

    #[test]
    fn gray_codes_have_one_local_maximum() {
        for ell in 1..=8 {
            let mut grays = alloc::vec![make_brg(ell).unwrap()];
            if ell >= 3 {
                grays.push(make_suboptimal_gray(ell, 0).unwrap());
                grays.push(make_suboptimal_gray(ell, 4).unwrap());
            }
            if ell == 5 {
                grays.push(make_ngg32());
            }
            for r in &grays {
                for a in 0..1u32 << ell {
                    let t = OneMaxTarget::new(ell, a).unwrap();
                    assert_eq!(count_local_maxima(&t, r).unwrap().count, 1);
                }
            }
        }
    }

    #[test]
    fn local_maxima_shape_error() {
        let t = OneMaxTarget::new(4, 3).unwrap();
        assert!(count_local_maxima(&t, &make_sb(5).unwrap()).is_err());
    }

    #[test]
    fn dejong_reference_points() {
        assert_eq!(DeJongFunction::F1.eval(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!(DeJongFunction::F2.eval(&[1.0, 1.0]), 0.0);
        assert_eq!(DeJongFunction::F3.eval(&[-5.12; 5]), -30.0);
        assert_eq!(DeJongFunction::F4.eval(&[0.0; 30]), 0.0);
        // The true minimizer sits a hair inside the first foxhole.
        let f5 = DeJongFunction::F5.eval(&[-32.0, -32.0]);
        assert!(f5 > DeJongFunction::F5.optimum());
        assert!(f5 - DeJongFunction::F5.optimum() < 1e-8, "{f5}");
    }

    #[test]
    fn decode_hits_endpoints() {
        for f in DeJongFunction::ALL {
            let spec = DeJongSpec::classical(f);
            let sb = make_sb(spec.bits_per_dim).unwrap();
            let top = (1u32 << spec.bits_per_dim) - 1;
            let zeros = alloc::vec![0u32; spec.dims];
            let ones = alloc::vec![top; spec.dims];
            assert!(spec.decode(&zeros, &sb).unwrap().iter().all(|&x| x == spec.lo));
            assert!(spec.decode(&ones, &sb).unwrap().iter().all(|&x| x == spec.hi));
            // Under another representation the phenotype extremes still map to the range ends.
            let brg = make_brg(spec.bits_per_dim).unwrap();
            let inv = brg.inverse();
            let g_hi = alloc::vec![inv[top as usize]; spec.dims];
            assert!(spec.decode(&g_hi, &brg).unwrap().iter().all(|&x| x == spec.hi));
        }
    }

    #[test]
    fn dejong_f3_minimum_through_genotype() {
        let spec = DeJongSpec::classical(DeJongFunction::F3);
        let sb = make_sb(10).unwrap();
        let mut rng = seeded_rng(0, 0);
        let f = dejong_fitness(&spec, &[0; 5], &sb, &mut rng).unwrap();
        assert_eq!(f, -30.0);
    }

    #[test]
    fn dejong_shape_errors() {
        let spec = DeJongSpec::classical(DeJongFunction::F1);
        let mut rng = seeded_rng(0, 0);
        assert!(dejong_fitness(&spec, &[0; 2], &make_sb(10).unwrap(), &mut rng).is_err());
        assert!(dejong_fitness(&spec, &[0; 3], &make_sb(9).unwrap(), &mut rng).is_err());
        assert!(dejong_fitness_bits(&spec, &[false; 29], &make_sb(10).unwrap(), &mut rng).is_err());
    }

    #[test]
    fn pack_bits_is_msb_first() {
        let spec = DeJongSpec::classical(DeJongFunction::F2);
        let mut bits = alloc::vec![false; 24];
        bits[11] = true; // lowest bit of slice 0
        bits[12] = true; // highest bit of slice 1
        assert_eq!(spec.pack_bits(&bits).unwrap(), [1, 1 << 11]);
    }

    #[test]
    fn f4_noise_free_is_deterministic() {
        let mut spec = DeJongSpec::classical(DeJongFunction::F4);
        spec.noisy = false;
        let sb = make_sb(8).unwrap();
        let g: Vec<u32> = (0..30).map(|i| (i * 7) % 256).collect();
        let mut r1 = seeded_rng(1, 0);
        let mut r2 = seeded_rng(2, 0);
        assert_eq!(
            dejong_fitness(&spec, &g, &sb, &mut r1).unwrap(),
            dejong_fitness(&spec, &g, &sb, &mut r2).unwrap()
        );
        spec.noisy = true;
        let mut r1 = seeded_rng(1, 0);
        let mut r2 = seeded_rng(1, 0);
        assert_eq!(
            dejong_fitness(&spec, &g, &sb, &mut r1).unwrap(),
            dejong_fitness(&spec, &g, &sb, &mut r2).unwrap()
        );
    }
}
