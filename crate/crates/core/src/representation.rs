//! Nonredundant `ell`-bit representations and their constructors.
//!
//! A [`Representation`] stores `perm[g]`, the phenotype of the genotype whose
//! standard-binary value is `g`. Bit `i` of a genotype is the coefficient of
//! `2^i`, so flipping bit `i` of `g` is `g ^ (1 << i)`.

use alloc::vec::Vec;
use core::fmt;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::error::{check_ell, Error, Result};
use crate::{hamming, seeded_rng};

/// Largest bit length for the deterministic constructors (phenotypes fit in `u32`).
pub const MAX_ELL: u32 = 30;
/// Largest bit length for the randomized constructors.
pub const MAX_ELL_RANDOM: u32 = 20;
/// Largest bit length for the Hamiltonian-path Gray construction.
pub const MAX_ELL_PATH: u32 = 20;

pub const NGG32: [u32; 32] = [
    0, 1, 19, 2, 31, 28, 20, 3, 23, 26, 24, 25, 22, 27, 21, 4, 13, 14, 18, 15, 30, 29, 17, 16, 12,
    9, 11, 10, 7, 8, 6, 5,
];

pub const UBL32: [u32; 32] = [
    24, 1, 4, 19, 15, 16, 21, 13, 9, 26, 18, 0, 23, 12, 6, 22, 3, 28, 20, 14, 30, 7, 5, 27, 29, 10,
    8, 31, 2, 17, 25, 11,
];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Representation {
    ell: u32,
    perm: Vec<u32>,
}

impl Representation {
    /// Validates `perm` as a bijection of `[0, 2^ell)`.
    pub fn from_perm(ell: u32, perm: Vec<u32>) -> Result<Self> {
        check_ell(ell, 1, MAX_ELL)?;
        let expected = 1usize << ell;
        if perm.len() != expected {
            return Err(Error::Length {
                ell,
                len: perm.len(),
                expected,
            });
        }
        let mut seen = alloc::vec![false; expected];
        for (index, &value) in perm.iter().enumerate() {
            if value as usize >= expected {
                return Err(Error::NotPermutation {
                    index,
                    value,
                    reason: "is out of range",
                });
            }
            if core::mem::replace(&mut seen[value as usize], true) {
                return Err(Error::NotPermutation {
                    index,
                    value,
                    reason: "is repeated",
                });
            }
        }
        Ok(Self { ell, perm })
    }

    /// Skips validation; callers guarantee the bijection.
    pub(crate) fn from_perm_unchecked(ell: u32, perm: Vec<u32>) -> Self {
        debug_assert_eq!(perm.len(), 1usize << ell);
        Self { ell, perm }
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Number of genotypes, `2^ell`.
    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    pub fn into_perm(self) -> Vec<u32> {
        self.perm
    }

    #[inline]
    pub fn phenotype(&self, genotype: u32) -> u32 {
        self.perm[genotype as usize]
    }

    /// `inverse()[x]` is the genotype mapping to phenotype `x`.
    pub fn inverse(&self) -> Vec<u32> {
        let mut inv = alloc::vec![0u32; self.perm.len()];
        for (g, &x) in self.perm.iter().enumerate() {
            inv[x as usize] = g as u32;
        }
        inv
    }

    /// True iff consecutive phenotypes sit on genotypes one bit flip apart.
    pub fn is_gray(&self) -> bool {
        self.inverse().windows(2).all(|w| hamming(w[0], w[1]) == 1)
    }
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("ell", &self.ell)
            .field("perm", &self.perm)
            .finish()
    }
}

/// Standard binary: the identity permutation.
pub fn make_sb(ell: u32) -> Result<Representation> {
    check_ell(ell, 1, MAX_ELL)?;
    Ok(Representation::from_perm_unchecked(ell, (0..1u32 << ell).collect()))
}

/// Inverse of the reflected Gray code `x ^ (x >> 1)`.
#[inline]
pub fn brg_decode(mut g: u32) -> u32 {
    g ^= g >> 1;
    g ^= g >> 2;
    g ^= g >> 4;
    g ^= g >> 8;
    g ^= g >> 16;
    g
}

#[inline]
pub fn brg_encode(x: u32) -> u32 {
    x ^ (x >> 1)
}

/// Binary-reflected Gray: `perm[g]` is the rank of `g` in the reflected Gray order.
pub fn make_brg(ell: u32) -> Result<Representation> {
    check_ell(ell, 1, MAX_ELL)?;
    Ok(Representation::from_perm_unchecked(
        ell,
        (0..1u32 << ell).map(brg_decode).collect(),
    ))
}

/// The 5-bit non-greedy Gray constant.
pub fn make_ngg32() -> Representation {
    Representation::from_perm_unchecked(5, NGG32.to_vec())
}

/// The 5-bit upper-bound-locality constant.
pub fn make_ubl32() -> Representation {
    Representation::from_perm_unchecked(5, UBL32.to_vec())
}

/// Uniformly random permutation (Fisher-Yates), a pure function of `(ell, seed)`.
pub fn make_random(ell: u32, seed: u64) -> Result<Representation> {
    check_ell(ell, 1, MAX_ELL_RANDOM)?;
    let mut rng = seeded_rng(seed, 0);
    let mut perm: Vec<u32> = (0..1u32 << ell).collect();
    perm.shuffle(&mut rng);
    Ok(Representation::from_perm_unchecked(ell, perm))
}

/// Labeling that attains the largest possible sum of neighbor differences.
///
/// A random start vertex gets 0. Vertices with the start's parity get a
/// shuffled `[1, 2^(ell-1))`, the others a shuffled `[2^(ell-1), 2^ell)`.
/// Every hypercube edge joins opposite parities, so every edge spans the
/// low and high halves.
pub fn make_harper_max(ell: u32, seed: u64) -> Result<Representation> {
    check_ell(ell, 1, MAX_ELL_RANDOM)?;
    let mut rng = seeded_rng(seed, 0);
    let n = 1u32 << ell;
    let half = n >> 1;
    let start = rng.random_range(0..n);
    let parity = start.count_ones() & 1;
    let mut low: Vec<u32> = (1..half).collect();
    let mut high: Vec<u32> = (half..n).collect();
    low.shuffle(&mut rng);
    high.shuffle(&mut rng);
    let (mut low, mut high) = (low.into_iter(), high.into_iter());

    let mut perm = alloc::vec![0u32; n as usize];
    for v in (0..n).filter(|&v| v != start) {
        perm[v as usize] = if v.count_ones() & 1 == parity {
            low.next()
        } else {
            high.next()
        }
        .expect("parity classes have the sizes of the label pools");
    }
    Ok(Representation::from_perm_unchecked(ell, perm))
}

/// Greedy labeling that attains the smallest sum of neighbor differences.
///
/// Labels `0, 1, 2, ...` are handed out in turn to an unlabeled vertex with
/// the most labeled neighbors; ties are broken uniformly at random.
pub fn make_harper_min(ell: u32, seed: u64) -> Result<Representation> {
    check_ell(ell, 1, MAX_ELL_RANDOM)?;
    let mut rng = seeded_rng(seed, 0);
    let n = 1usize << ell;
    let mut buckets = LabelBuckets::new(ell as usize, n);
    let mut perm = alloc::vec![0u32; n];
    let mut assigned = alloc::vec![false; n];

    let mut next = rng.random_range(0..n as u32);
    for label in 0..n as u32 {
        if label > 0 {
            next = buckets.pick_best(&mut rng);
        }
        buckets.remove(next);
        assigned[next as usize] = true;
        perm[next as usize] = label;
        for bit in 0..ell {
            let w = next ^ (1 << bit);
            if !assigned[w as usize] {
                buckets.promote(w);
            }
        }
    }
    Ok(Representation::from_perm_unchecked(ell, perm))
}

/// Unlabeled vertices bucketed by their number of labeled neighbors, with O(1)
/// removal and promotion.
struct LabelBuckets {
    buckets: Vec<Vec<u32>>,
    count: Vec<u8>,
    slot: Vec<u32>,
}

impl LabelBuckets {
    fn new(ell: usize, n: usize) -> Self {
        let mut buckets = alloc::vec![Vec::new(); ell + 1];
        buckets[0] = (0..n as u32).collect();
        Self {
            buckets,
            count: alloc::vec![0; n],
            slot: (0..n as u32).collect(),
        }
    }

    fn remove(&mut self, v: u32) {
        let bucket = &mut self.buckets[self.count[v as usize] as usize];
        let slot = self.slot[v as usize] as usize;
        bucket.swap_remove(slot);
        if let Some(&moved) = bucket.get(slot) {
            self.slot[moved as usize] = slot as u32;
        }
    }

    fn insert(&mut self, v: u32) {
        let bucket = &mut self.buckets[self.count[v as usize] as usize];
        self.slot[v as usize] = bucket.len() as u32;
        bucket.push(v);
    }

    fn promote(&mut self, v: u32) {
        self.remove(v);
        self.count[v as usize] += 1;
        self.insert(v);
    }

    fn pick_best<R: Rng>(&self, rng: &mut R) -> u32 {
        let best = self
            .buckets
            .iter()
            .rev()
            .find(|b| !b.is_empty())
            .expect("an unlabeled vertex remains");
        *best.choose(rng).expect("bucket is non-empty")
    }
}

/// A Gray code whose path starts `0, 1, 3, 7` (in genotype values), which no
/// run of the greedy minimizer can produce; its point locality is therefore
/// strictly above the lower bound.
///
/// The rest of the Hamiltonian path is found by depth-first backtracking.
/// With `seed == 0` candidates are tried in ascending bit order. Any other
/// seed orders candidates by fewest unvisited onward neighbors, breaking ties
/// at random, which keeps the search from wandering into dead regions.
pub fn make_suboptimal_gray(ell: u32, seed: u64) -> Result<Representation> {
    if ell < 3 {
        return Err(Error::Domain(
            "suboptimal Gray construction needs at least 3 bits",
        ));
    }
    check_ell(ell, 3, MAX_ELL_PATH)?;
    let path = hamiltonian_path_from(ell, &[0, 1, 3, 7], seed)
        .ok_or(Error::Invariant("no Hamiltonian path extends the prefix"))?;
    let mut perm = alloc::vec![0u32; path.len()];
    for (label, &g) in path.iter().enumerate() {
        perm[g as usize] = label as u32;
    }
    Ok(Representation::from_perm_unchecked(ell, perm))
}

/// Extends `prefix` to a Hamiltonian path on the `ell`-cube, if one exists.
pub fn hamiltonian_path_from(ell: u32, prefix: &[u32], seed: u64) -> Option<Vec<u32>> {
    let n = 1usize << ell;
    let mut rng = (seed != 0).then(|| seeded_rng(seed, 0));
    let mut visited = alloc::vec![false; n];
    // Unvisited-neighbor counts, kept current for the ordering heuristic.
    let mut free = alloc::vec![ell as u8; n];

    let visit = |v: u32, visited: &mut [bool], free: &mut [u8]| {
        visited[v as usize] = true;
        for bit in 0..ell {
            free[(v ^ (1 << bit)) as usize] -= 1;
        }
    };
    let unvisit = |v: u32, visited: &mut [bool], free: &mut [u8]| {
        visited[v as usize] = false;
        for bit in 0..ell {
            free[(v ^ (1 << bit)) as usize] += 1;
        }
    };

    let mut path: Vec<u32> = Vec::with_capacity(n);
    for (k, &v) in prefix.iter().enumerate() {
        if visited[v as usize] || (k > 0 && hamming(v, path[k - 1]) != 1) {
            return None;
        }
        visit(v, &mut visited, &mut free);
        path.push(v);
    }
    if path.len() == n {
        return Some(path);
    }
    let last = *path.last()?;

    let mut candidates = |v: u32, visited: &[bool], free: &[u8]| -> Vec<u32> {
        let mut next: Vec<u32> = (0..ell)
            .map(|bit| v ^ (1 << bit))
            .filter(|&w| !visited[w as usize])
            .collect();
        if let Some(rng) = rng.as_mut() {
            next.shuffle(rng);
            next.sort_by_key(|&w| free[w as usize]);
        }
        // Popped from the back.
        next.reverse();
        next
    };

    let mut frames: Vec<Vec<u32>> = alloc::vec![candidates(last, &visited, &free)];
    while path.len() < n {
        let frame = frames.last_mut()?;
        match frame.pop() {
            Some(w) => {
                visit(w, &mut visited, &mut free);
                path.push(w);
                let next = candidates(w, &visited, &free);
                frames.push(next);
            }
            None => {
                frames.pop();
                if path.len() <= prefix.len() {
                    return None;
                }
                let v = path.pop()?;
                unvisit(v, &mut visited, &mut free);
            }
        }
    }
    Some(path)
}

/// The named representation families used by the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepresentationKind {
    Sb,
    Brg,
    Ngg32,
    Ubl32,
    RandomUniform,
    HarperMin,
    HarperMax,
    SuboptimalGray,
}

impl RepresentationKind {
    pub const ALL: [RepresentationKind; 8] = [
        Self::Sb,
        Self::Brg,
        Self::Ngg32,
        Self::Ubl32,
        Self::RandomUniform,
        Self::HarperMin,
        Self::HarperMax,
        Self::SuboptimalGray,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Sb => "sb",
            Self::Brg => "brg",
            Self::Ngg32 => "ngg",
            Self::Ubl32 => "ubl",
            Self::RandomUniform => "random",
            Self::HarperMin => "harper-min",
            Self::HarperMax => "harper-max",
            Self::SuboptimalGray => "suboptimal-gray",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Builds the representation at `ell` bits. `seed` is ignored by the
    /// deterministic kinds.
    pub fn build(self, ell: u32, seed: u64) -> Result<Representation> {
        match self {
            Self::Sb => make_sb(ell),
            Self::Brg => make_brg(ell),
            Self::Ngg32 | Self::Ubl32 if ell != 5 => {
                Err(Error::Domain("the NGG and UBL constants exist only at 5 bits"))
            }
            Self::Ngg32 => Ok(make_ngg32()),
            Self::Ubl32 => Ok(make_ubl32()),
            Self::RandomUniform => make_random(ell, seed),
            Self::HarperMin => make_harper_min(ell, seed),
            Self::HarperMax => make_harper_max(ell, seed),
            Self::SuboptimalGray => make_suboptimal_gray(ell, seed),
        }
    }

    /// Like [`build`](Self::build), but at widths other than 5 the NGG and
    /// UBL kinds fall back to their generating constructions (suboptimal Gray
    /// and the maximizing labeling) with the given seed.
    pub fn build_generalized(self, ell: u32, seed: u64) -> Result<Representation> {
        match self {
            Self::Ngg32 if ell != 5 => make_suboptimal_gray(ell, seed),
            Self::Ubl32 if ell != 5 => make_harper_max(ell, seed),
            other => other.build(ell, seed),
        }
    }
}
