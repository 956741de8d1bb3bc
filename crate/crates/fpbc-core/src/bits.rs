//! Fixed-length bit sets backed by `u64` words.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const WORD: usize = 64;

/// A fixed-length set of indices `0..len`, stored as packed words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::new(len);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// All of `0..len`.
    pub fn full(len: usize) -> Self {
        let mut set = Self::new(len);
        for w in set.words.iter_mut() {
            *w = !0;
        }
        set.trim();
        set
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_with(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_with(other);
        out
    }

    /// `|self ∩ other|`.
    pub fn intersection_count(&self, other: &Self) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Lowest set index, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * WORD + w.trailing_zeros() as usize)
    }

    /// Highest set index, if any.
    pub fn last(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(k, &w)| k * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Parity of the number of pairs `(x, y)` with `x ∈ self`, `y ∈ other`, `x > y`.
    pub fn crossing_parity(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut parity = 0u32;
        let mut above = 0u32;
        for k in (0..self.words.len()).rev() {
            let a = self.words[k];
            let mut b = other.words[k];
            while b != 0 {
                let y = b.trailing_zeros();
                let mask = if y == 63 { 0 } else { !0u64 << (y + 1) };
                parity ^= ((a & mask).count_ones() + above) & 1;
                b &= b - 1;
            }
            above += a.count_ones();
        }
        parity == 1
    }

    /// Copy of the bits `start..start + len` as a new set of length `len`.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.len);
        Self::from_indices(
            len,
            self.iter()
                .filter(|&i| i >= start && i < start + len)
                .map(|i| i - start),
        )
    }

    /// Same bits in a set of a different length (bits past the new length are dropped).
    pub fn resized(&self, len: usize) -> Self {
        let mut out = Self::new(len);
        for (dst, src) in out.words.iter_mut().zip(&self.words) {
            *dst = *src;
        }
        out.trim();
        out
    }

    fn trim(&mut self) {
        let extra = self.words.len() * WORD - self.len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !0u64 >> extra;
            }
        }
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_parity_matches_brute_force() {
        let a = BitSet::from_indices(130, [0, 5, 64, 70, 129]);
        let b = BitSet::from_indices(130, [1, 63, 64, 100]);
        let brute = a
            .iter()
            .flat_map(|x| b.iter().map(move |y| (x > y) as u32))
            .sum::<u32>();
        assert_eq!(a.crossing_parity(&b), brute % 2 == 1);
    }

    #[test]
    fn full_is_trimmed() {
        let f = BitSet::full(70);
        assert_eq!(f.count(), 70);
        assert_eq!(f.last(), Some(69));
    }
}
