//! Braid cost of parity operators on periodic cubic lattices of islands, and how rarely it is small.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::bits::BitSet;
use crate::rng::substream;

/// Largest number of odd islands matched exactly.
pub const EXACT_MATCHING_LIMIT: usize = 12;
/// Largest MZM count for exhaustive enumeration.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("lattice parameters must be positive with even c (m={m}, d={d}, c={c}, r={r})")]
    BadLattice { m: usize, d: usize, c: usize, r: usize },
    #[error("sample has {found} bits, lattice has {expected} MZMs")]
    SampleSize { expected: usize, found: usize },
    #[error("sample has odd weight")]
    OddSample,
    #[error("division side rR = {side} does not divide m = {m}")]
    Indivisible { side: usize, m: usize },
    #[error("{mzms} MZMs is too many for exhaustive enumeration (limit {limit})")]
    TooLarge { mzms: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubicLattice {
    pub m: usize,
    pub d: usize,
    /// MZMs per island.
    pub c: usize,
    /// Braid radius.
    pub r: usize,
}

impl CubicLattice {
    pub fn new(m: usize, d: usize, c: usize, r: usize) -> Result<Self, CostError> {
        if m == 0 || d == 0 || c == 0 || c % 2 == 1 || r == 0 || m.checked_pow(d as u32).is_none() {
            return Err(CostError::BadLattice { m, d, c, r });
        }
        Ok(Self { m, d, c, r })
    }

    pub fn islands(&self) -> usize {
        self.m.pow(self.d as u32)
    }

    pub fn mzms(&self) -> usize {
        self.islands() * self.c
    }

    pub fn coords(&self, island: usize) -> Vec<usize> {
        let mut x = island;
        (0..self.d)
            .map(|_| {
                let v = x % self.m;
                x /= self.m;
                v
            })
            .collect()
    }

    /// Periodic L1 distance between islands.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let (mut x, mut y) = (a, b);
        let mut total = 0;
        for _ in 0..self.d {
            let diff = (x % self.m).abs_diff(y % self.m);
            total += diff.min(self.m - diff);
            x /= self.m;
            y /= self.m;
        }
        total
    }

    /// Braids needed to bring two islands' MZMs together.
    pub fn pair_cost(&self, a: usize, b: usize) -> usize {
        self.distance(a, b).div_ceil(self.r)
    }

    fn check(&self, sample: &BitSet) -> Result<(), CostError> {
        if sample.len() != self.mzms() {
            return Err(CostError::SampleSize {
                expected: self.mzms(),
                found: sample.len(),
            });
        }
        if sample.count() % 2 == 1 {
            return Err(CostError::OddSample);
        }
        Ok(())
    }

    /// Islands holding an odd number of the sample's MZMs.
    pub fn odd_islands(&self, sample: &BitSet) -> Vec<usize> {
        let mut odd = vec![false; self.islands()];
        for k in sample.iter() {
            odd[k / self.c] ^= true;
        }
        (0..odd.len()).filter(|&i| odd[i]).collect()
    }
}

/// Uniform even-weight sample.
pub fn random_sample<R: Rng + ?Sized>(lattice: &CubicLattice, rng: &mut R) -> BitSet {
    let n = lattice.mzms();
    let mut s = BitSet::new(n);
    for k in 0..n - 1 {
        if rng.random::<bool>() {
            s.insert(k);
        }
    }
    if s.count() % 2 == 1 {
        s.insert(n - 1);
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BraidCost {
    pub cost: usize,
    /// Set when a greedy matching was used, so `cost` is only an upper bound.
    pub approximate: bool,
}

fn exact_matching(lattice: &CubicLattice, odd: &[usize]) -> usize {
    let k = odd.len();
    let full = (1usize << k) - 1;
    let mut dp = vec![usize::MAX; 1 << k];
    dp[0] = 0;
    for mask in 0..full {
        if dp[mask] == usize::MAX {
            continue;
        }
        let i = (!mask).trailing_zeros() as usize;
        for j in i + 1..k {
            if mask >> j & 1 == 0 {
                let next = mask | 1 << i | 1 << j;
                let v = dp[mask] + lattice.pair_cost(odd[i], odd[j]);
                if v < dp[next] {
                    dp[next] = v;
                }
            }
        }
    }
    dp[full]
}

fn greedy_matching(lattice: &CubicLattice, odd: &[usize]) -> usize {
    let mut left: Vec<usize> = odd.to_vec();
    let mut total = 0;
    while let Some(a) = left.pop() {
        let (k, cost) = left
            .iter()
            .enumerate()
            .map(|(k, &b)| (k, lattice.pair_cost(a, b)))
            .min_by_key(|&(_, c)| c)
            .expect("odd islands come in pairs");
        left.swap_remove(k);
        total += cost;
    }
    total
}

/// Minimum total braids over perfect matchings of the odd islands.
pub fn braid_cost_of(sample: &BitSet, lattice: &CubicLattice) -> Result<BraidCost, CostError> {
    lattice.check(sample)?;
    let odd = lattice.odd_islands(sample);
    assert!(
        odd.len().is_multiple_of(2),
        "an even sample has an even number of odd islands"
    );
    Ok(if odd.len() <= EXACT_MATCHING_LIMIT {
        BraidCost {
            cost: exact_matching(lattice, &odd),
            approximate: false,
        }
    } else {
        BraidCost {
            cost: greedy_matching(lattice, &odd),
            approximate: true,
        }
    })
}

/// Braid cost strictly below `big_r`.
///
/// Exact whenever there are at most [`EXACT_MATCHING_LIMIT`] odd islands or so many that
/// one braid per pair already reaches `big_r`.
pub fn is_r_measurable(sample: &BitSet, lattice: &CubicLattice, big_r: usize) -> Result<bool, CostError> {
    lattice.check(sample)?;
    let odd = lattice.odd_islands(sample);
    if odd.len() / 2 >= big_r && !odd.is_empty() {
        return Ok(false);
    }
    Ok(braid_cost_of(sample, lattice)?.cost < big_r)
}

/// Some translate of the division into cubes of side `rR` has even weight in every cube.
pub fn even_division_exists(sample: &BitSet, lattice: &CubicLattice, big_r: usize) -> Result<bool, CostError> {
    lattice.check(sample)?;
    let side = lattice.r * big_r;
    if side == 0 || !lattice.m.is_multiple_of(side) {
        return Err(CostError::Indivisible { side, m: lattice.m });
    }
    let per_axis = lattice.m / side;
    let cubes = per_axis.pow(lattice.d as u32);
    let odd = lattice.odd_islands(sample);
    let coords: Vec<Vec<usize>> = odd.iter().map(|&i| lattice.coords(i)).collect();
    let mut parity = vec![false; cubes];
    for t in 0..side.pow(lattice.d as u32) {
        let mut offset = Vec::with_capacity(lattice.d);
        let mut x = t;
        for _ in 0..lattice.d {
            offset.push(x % side);
            x /= side;
        }
        parity.iter_mut().for_each(|p| *p = false);
        for c in &coords {
            let cube = c.iter().zip(&offset).rev().fold(0, |acc, (&x, &o)| {
                acc * per_axis + ((x + lattice.m - o) % lattice.m) / side
            });
            parity[cube] ^= true;
        }
        if parity.iter().all(|p| !p) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `(rR)^d · 2^{1 − (m/rR)^d}`.
pub fn analytic_bound(m: usize, d: usize, r: usize, big_r: usize) -> f64 {
    let side = (r * big_r) as f64;
    let dd = d as i32;
    libm::pow(side, dd as f64) * libm::exp2(1.0 - libm::pow(m as f64 / side, dd as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exhaustive {
    pub samples: u64,
    pub measurable: u64,
    pub divisible: u64,
    /// Samples that are measurable yet admit no even division.
    pub counterexamples: u64,
}

impl Exhaustive {
    pub fn fraction(&self) -> f64 {
        self.measurable as f64 / self.samples as f64
    }
}

/// Every even-weight sample on a tiny lattice. The division test runs only when `rR | m`.
pub fn exhaustive_fraction(lattice: &CubicLattice, big_r: usize) -> Result<Exhaustive, CostError> {
    let n = lattice.mzms();
    if n > EXHAUSTIVE_LIMIT {
        return Err(CostError::TooLarge {
            mzms: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let divides = lattice.m.is_multiple_of(lattice.r * big_r);
    let mut out = Exhaustive {
        samples: 0,
        measurable: 0,
        divisible: 0,
        counterexamples: 0,
    };
    for mask in 0u64..1 << n {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let s = BitSet::from_indices(n, (0..n).filter(|k| mask >> k & 1 == 1));
        out.samples += 1;
        let meas = is_r_measurable(&s, lattice, big_r)?;
        out.measurable += meas as u64;
        if divides {
            let div = even_division_exists(&s, lattice, big_r)?;
            out.divisible += div as u64;
            out.counterexamples += (meas && !div) as u64;
        }
    }
    Ok(out)
}

/// Tallies from a batch of random samples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub trials: u64,
    pub measurable: u64,
    pub approximate: u64,
    pub counterexamples: u64,
}

impl Tally {
    pub fn merge(self, o: Tally) -> Tally {
        Tally {
            trials: self.trials + o.trials,
            measurable: self.measurable + o.measurable,
            approximate: self.approximate + o.approximate,
            counterexamples: self.counterexamples + o.counterexamples,
        }
    }

    /// `(p̂, √(p̂(1−p̂)/n))`.
    pub fn estimate(&self) -> (f64, f64) {
        let n = self.trials as f64;
        let p = self.measurable as f64 / n;
        (p, libm::sqrt(p * (1.0 - p) / n))
    }
}

/// Trials per independently seeded chunk.
pub const CHUNK: u64 = 4096;

/// Chunk `index` of a Monte Carlo run: trials `[index·CHUNK, min((index+1)·CHUNK, total))`.
pub fn estimate_chunk(
    lattice: &CubicLattice,
    big_r: usize,
    seed: u64,
    index: u64,
    total: u64,
) -> Result<Tally, CostError> {
    let start = index * CHUNK;
    let count = total.saturating_sub(start).min(CHUNK);
    let mut rng = substream(seed, "braid_cost", index);
    let divides = lattice.m.is_multiple_of(lattice.r * big_r);
    let mut t = Tally::default();
    for _ in 0..count {
        let s = random_sample(lattice, &mut rng);
        let odd = lattice.odd_islands(&s).len();
        let meas = is_r_measurable(&s, lattice, big_r)?;
        t.trials += 1;
        t.measurable += meas as u64;
        if meas && odd > EXACT_MATCHING_LIMIT {
            t.approximate += 1;
        }
        if meas && divides && !even_division_exists(&s, lattice, big_r)? {
            t.counterexamples += 1;
        }
    }
    Ok(t)
}

pub fn chunk_count(trials: u64) -> u64 {
    trials.div_ceil(CHUNK)
}

/// Sequential Monte Carlo estimate; chunks are seeded independently, so any
/// parallel schedule that merges the same chunks gives the same tally.
pub fn estimate_fraction(lattice: &CubicLattice, big_r: usize, trials: u64, seed: u64) -> Result<Tally, CostError> {
    (0..chunk_count(trials)).try_fold(Tally::default(), |acc, k| {
        Ok(acc.merge(estimate_chunk(lattice, big_r, seed, k, trials)?))
    })
}
