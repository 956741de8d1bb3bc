//! Phase-tracked Majorana strings.
//!
//! A string is `i^p γ_{a_1} γ_{a_2} ⋯ γ_{a_w}` with `a_1 < a_2 < ⋯ < a_w`. The
//! ascending order together with `p mod 4` is a unique normal form, so equality
//! of strings is equality of operators. Modes are 0-based internally and
//! 1-based in the text form (`i^2 g1 g3` is `-γ_1 γ_3`).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use thiserror::Error;

use crate::bits::BitSet;

/// Default upper bound on the number of modes accepted by text parsing.
pub const DEFAULT_MODE_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },
    #[error("mode index {index} out of range for {num_modes} modes")]
    ModeOutOfRange { index: usize, num_modes: usize },
    #[error("cannot parse Majorana string {text:?}: {reason}")]
    Parse { text: String, reason: &'static str },
    #[error("strings {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("string {0} is not a Hermitian parity-even operator")]
    NotParity(usize),
}

/// Element of the Majorana group: `i^phase · ∏_{j ∈ support} γ_j` in ascending order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MajoranaString {
    support: BitSet,
    phase: u8,
}

impl MajoranaString {
    pub fn identity(num_modes: usize) -> Self {
        Self {
            support: BitSet::new(num_modes),
            phase: 0,
        }
    }

    /// A single Majorana operator `γ_index` (0-based).
    pub fn gamma(num_modes: usize, index: usize) -> Self {
        Self::from_modes(num_modes, [index])
    }

    /// `γ_{a_1} ⋯ γ_{a_w}` for ascending modes with no phase; panics on unsorted input.
    pub fn from_modes(num_modes: usize, modes: impl IntoIterator<Item = usize>) -> Self {
        let mut support = BitSet::new(num_modes);
        let mut prev = None;
        for m in modes {
            assert!(prev.is_none_or(|p| p < m), "modes must be strictly ascending");
            support.insert(m);
            prev = Some(m);
        }
        Self { support, phase: 0 }
    }

    pub fn from_parts(support: BitSet, phase: u8) -> Self {
        Self {
            support,
            phase: phase % 4,
        }
    }

    /// The Hermitian string with the given support (phase chosen so that `S† = S`).
    pub fn hermitian(support: BitSet) -> Self {
        let phase = hermitian_phase(support.count());
        Self { support, phase }
    }

    /// `i s_k = i γ_{2k} γ_{2k+1}` style pair parity on modes `(a, b)`, `a < b`.
    pub fn pair_parity(num_modes: usize, a: usize, b: usize) -> Self {
        assert!(a < b);
        Self::from_modes(num_modes, [a, b]).with_phase(1)
    }

    /// Total parity `Γ = i^{N} γ_1 ⋯ γ_{2N}` over all modes.
    pub fn total_parity(num_modes: usize) -> Self {
        assert!(num_modes.is_multiple_of(2), "total parity needs an even mode count");
        Self {
            support: BitSet::full(num_modes),
            phase: ((num_modes / 2) % 4) as u8,
        }
    }

    pub fn num_modes(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &BitSet {
        &self.support
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn weight(&self) -> usize {
        self.support.count()
    }

    pub fn modes(&self) -> impl Iterator<Item = usize> + '_ {
        self.support.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.support.is_empty()
    }

    /// True when the string equals `±𝟙` or `±i𝟙` only up to phase.
    pub fn same_support(&self, other: &Self) -> bool {
        self.support == other.support
    }

    pub fn is_even(&self) -> bool {
        self.weight().is_multiple_of(2)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == hermitian_phase(self.weight()) % 2
    }

    pub fn is_anti_hermitian(&self) -> bool {
        !self.is_hermitian()
    }

    /// `+1` if the string squares to `𝟙`, `-1` if it squares to `-𝟙`.
    pub fn square_sign(&self) -> i8 {
        if self.is_hermitian() {
            1
        } else {
            -1
        }
    }

    /// Hermitian, parity-even and therefore a valid two-outcome parity measurement.
    pub fn is_parity_operator(&self) -> bool {
        self.is_even() && self.is_hermitian()
    }

    pub fn with_phase(mut self, extra: u8) -> Self {
        self.phase = (self.phase + extra) % 4;
        self
    }

    pub fn negate(&self) -> Self {
        self.clone().with_phase(2)
    }

    /// Multiply by a real sign `±1`.
    pub fn signed(self, sign: i8) -> Self {
        if sign < 0 {
            self.with_phase(2)
        } else {
            self
        }
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> Self {
        let w = self.weight();
        let reversal = if (w * w.saturating_sub(1) / 2) % 2 == 1 { 2 } else { 0 };
        Self {
            support: self.support.clone(),
            phase: ((4 - self.phase) + reversal) % 4,
        }
    }

    /// Phase-free comparison: `Some(k)` when `self = i^k · other`.
    pub fn phase_relative_to(&self, other: &Self) -> Option<u8> {
        (self.support == other.support).then(|| (self.phase + 4 - other.phase) % 4)
    }

    pub fn check_modes(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.num_modes() == other.num_modes() {
            Ok(())
        } else {
            Err(AlgebraError::ModeMismatch {
                left: self.num_modes(),
                right: other.num_modes(),
            })
        }
    }

    /// Canonical product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_modes(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let swaps = if self.support.crossing_parity(&other.support) {
            2
        } else {
            0
        };
        Self {
            support: self.support.xor(&other.support),
            phase: (self.phase + other.phase + swaps) % 4,
        }
    }

    /// `[self, other] = 0`; otherwise the two anticommute.
    pub fn commutes(&self, other: &Self) -> Result<bool, AlgebraError> {
        self.check_modes(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        let exponent = self.weight() * other.weight() + self.support.intersection_count(&other.support);
        exponent.is_multiple_of(2)
    }

    /// The anti-Hermitian member of `{s, i s}`: the generator `G` of the unitary `exp(π/4 · G)`.
    pub fn anti_hermitian_normalization(&self) -> Self {
        if self.is_hermitian() {
            self.clone().with_phase(1)
        } else {
            self.clone()
        }
    }

    /// Heisenberg conjugation `U† c U` with `U = exp(q·π/4·G)`, `G² = -𝟙`, `q = ±1`.
    ///
    /// When `c` anticommutes with `G` the image is `q·c·G`; otherwise `c` is unchanged.
    pub fn heisenberg(&self, generator: &Self, quarter_turns: i8) -> Result<Self, AlgebraError> {
        self.check_modes(generator)?;
        Ok(self.heisenberg_unchecked(generator, quarter_turns))
    }

    pub(crate) fn heisenberg_unchecked(&self, generator: &Self, quarter_turns: i8) -> Self {
        debug_assert!(generator.is_anti_hermitian());
        if self.commutes_unchecked(generator) {
            return self.clone();
        }
        self.mul_unchecked(generator).signed(quarter_turns.signum())
    }

    /// Schrödinger conjugation `U c U†` with `U = exp(q·π/4·G)`: the image is `q·G·c`.
    pub fn schrodinger(&self, generator: &Self, quarter_turns: i8) -> Result<Self, AlgebraError> {
        self.check_modes(generator)?;
        Ok(self.schrodinger_unchecked(generator, quarter_turns))
    }

    pub(crate) fn schrodinger_unchecked(&self, generator: &Self, quarter_turns: i8) -> Self {
        debug_assert!(generator.is_anti_hermitian());
        if self.commutes_unchecked(generator) {
            return self.clone();
        }
        generator.mul_unchecked(self).signed(quarter_turns.signum())
    }

    /// Restrict to the modes `start..start + len` (the phase is kept as-is).
    pub fn slice(&self, start: usize, len: usize) -> Self {
        Self {
            support: self.support.slice(start, len),
            phase: self.phase,
        }
    }

    /// Place this string into a larger register at mode offset `offset`.
    pub fn embed(&self, num_modes: usize, offset: usize) -> Self {
        assert!(offset + self.num_modes() <= num_modes);
        Self {
            support: BitSet::from_indices(num_modes, self.support.iter().map(|m| m + offset)),
            phase: self.phase,
        }
    }

    /// Parse the text form (`i^p g3 g1 …`, 1-based, any order) into canonical form.
    pub fn parse(text: &str, num_modes: usize) -> Result<Self, AlgebraError> {
        let err = |reason| AlgebraError::Parse {
            text: text.into(),
            reason,
        };
        let mut out = Self::identity(num_modes);
        let mut seen_mode = false;
        for token in text.split_whitespace() {
            if let Some(rest) = token.strip_prefix('g') {
                let index: usize = rest.parse().map_err(|_| err("bad mode token"))?;
                if index == 0 || index > num_modes {
                    return Err(err("mode index out of range"));
                }
                out = out.mul_unchecked(&Self::gamma(num_modes, index - 1));
                seen_mode = true;
                continue;
            }
            if seen_mode {
                return Err(err("phase must precede modes"));
            }
            let extra = match token {
                "+" | "1" => 0,
                "-" | "-1" => 2,
                "i" => 1,
                "-i" => 3,
                _ => {
                    let (neg, body) = match token.strip_prefix('-') {
                        Some(b) => (true, b),
                        None => (false, token),
                    };
                    let power: i64 = body
                        .strip_prefix("i^")
                        .ok_or_else(|| err("unknown token"))?
                        .parse()
                        .map_err(|_| err("bad phase exponent"))?;
                    (power.rem_euclid(4) as u8 + if neg { 2 } else { 0 }) % 4
                }
            };
            out.phase = (out.phase + extra) % 4;
        }
        Ok(out)
    }
}

/// Phase power (mod 4, either 0 or 1) that makes a weight-`w` string Hermitian.
pub fn hermitian_phase(weight: usize) -> u8 {
    ((weight * weight.saturating_sub(1) / 2) % 2) as u8
}

impl fmt::Display for MajoranaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i^{}", self.phase)?;
        for m in self.support.iter() {
            write!(f, " g{}", m + 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MajoranaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('[')?;
        fmt::Display::fmt(self, f)?;
        write!(f, " /{}]", self.num_modes())
    }
}

/// Braid conjugation: returns `c` when `[c, s] = 0`, else `c·G` with
/// `G = i^{1-a} s` the anti-Hermitian normalization of `s` (`a` = 1 iff `s` is
/// already anti-Hermitian). This is `U† c U` for `U = exp(π/4 · G)`.
pub fn conjugate_by_braid(c: &MajoranaString, s: &MajoranaString) -> Result<MajoranaString, AlgebraError> {
    c.check_modes(s)?;
    if c.commutes_unchecked(s) {
        return Ok(c.clone());
    }
    Ok(c.mul_unchecked(&s.anti_hermitian_normalization()))
}

/// Product of a sequence of strings in the listed order.
pub fn product<'a>(num_modes: usize, items: impl IntoIterator<Item = &'a MajoranaString>) -> MajoranaString {
    items
        .into_iter()
        .fold(MajoranaString::identity(num_modes), |acc, s| acc.mul_unchecked(s))
}

/// Collect `(index, string)` pairs that fail to commute, if any.
pub fn first_noncommuting_pair(strings: &[MajoranaString]) -> Option<(usize, usize)> {
    for i in 0..strings.len() {
        for j in 0..i {
            if !strings[i].commutes_unchecked(&strings[j]) {
                return Some((j, i));
            }
        }
    }
    None
}

/// Modes as a vector (ascending, 0-based).
pub fn modes_of(s: &MajoranaString) -> Vec<usize> {
    s.modes().collect()
}
