//! Logical braids: tableaux, synthesis into elementary exponentials, and reduction to `W₂`/`W₄` factors.
//!
//! A [`BraidWord`] is an operator product `F_0 F_1 ⋯ F_{k-1}` (the rightmost factor
//! acts first) with `F = exp(q·π/4·G)`, `G` an anti-Hermitian even string and `q = ±1`.
//! A [`BraidTableau`] stores the images `U γ_i U†`; global phases are not represented.

use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::bits::BitSet;
use crate::majorana::{AlgebraError, MajoranaString};

/// Upper bound on the length of words produced by [`reduce_to_w4`].
pub const DEFAULT_LENGTH_CEILING: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("factor {index}: exp(π/4·S) is not unitary for Hermitian S = {string}")]
    NonUnitary {
        index: usize,
        string: alloc::string::String,
    },
    #[error("factor {index}: generator must have even nonzero weight")]
    BadWeight { index: usize },
    #[error("factor {index}: angle must be ±1 quarter turn, got {value}")]
    BadAngle { index: usize, value: i64 },
    #[error("invalid tableau: {0}")]
    InvalidTableau(&'static str),
    #[error("reduced word exceeds the length ceiling {0}")]
    TooLong(usize),
}

/// `exp(quarter_turns · π/4 · generator)` with an anti-Hermitian generator of phase power 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidFactor {
    generator: MajoranaString,
    quarter_turns: i8,
}

impl BraidFactor {
    /// Build a factor from an anti-Hermitian even string; the sign of the string is folded into the angle.
    pub fn new(generator: MajoranaString, quarter_turns: i8) -> Result<Self, BraidError> {
        Self::checked(generator, quarter_turns as i64, 0)
    }

    fn checked(generator: MajoranaString, quarter_turns: i64, index: usize) -> Result<Self, BraidError> {
        if quarter_turns != 1 && quarter_turns != -1 {
            return Err(BraidError::BadAngle {
                index,
                value: quarter_turns,
            });
        }
        if generator.is_identity() || !generator.is_even() {
            return Err(BraidError::BadWeight { index });
        }
        if generator.is_hermitian() {
            return Err(BraidError::NonUnitary {
                index,
                string: alloc::format!("{generator}"),
            });
        }
        let mut q = quarter_turns as i8;
        let mut g = generator;
        if g.phase() >= 2 {
            g = g.negate();
            q = -q;
        }
        Ok(Self {
            generator: g,
            quarter_turns: q,
        })
    }

    /// Accept either a Hermitian or anti-Hermitian string, using `G = i^{1-a}·S`.
    pub fn normalized(string: &MajoranaString, quarter_turns: i8) -> Result<Self, BraidError> {
        Self::new(string.anti_hermitian_normalization(), quarter_turns)
    }

    pub fn generator(&self) -> &MajoranaString {
        &self.generator
    }

    pub fn quarter_turns(&self) -> i8 {
        self.quarter_turns
    }

    pub fn weight(&self) -> usize {
        self.generator.weight()
    }

    /// `q·G`, the exponent divided by `π/4`.
    pub fn signed_generator(&self) -> MajoranaString {
        self.generator.clone().signed(self.quarter_turns)
    }

    pub fn inverse(&self) -> Self {
        Self {
            generator: self.generator.clone(),
            quarter_turns: -self.quarter_turns,
        }
    }

    /// `F X F†`.
    pub fn conjugate(&self, x: &MajoranaString) -> MajoranaString {
        x.schrodinger_unchecked(&self.generator, self.quarter_turns)
    }

    /// `F† X F`.
    pub fn conjugate_inverse(&self, x: &MajoranaString) -> MajoranaString {
        x.heisenberg_unchecked(&self.generator, self.quarter_turns)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BraidWord {
    pub factors: Vec<BraidFactor>,
}

impl BraidWord {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validate raw `(string, angle)` records.
    pub fn from_records(records: impl IntoIterator<Item = (MajoranaString, i64)>) -> Result<Self, BraidError> {
        let factors = records
            .into_iter()
            .enumerate()
            .map(|(i, (s, q))| BraidFactor::checked(s, q, i))
            .collect::<Result<_, _>>()?;
        Ok(Self { factors })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn push(&mut self, f: BraidFactor) {
        self.factors.push(f);
    }

    pub fn inverse(&self) -> Self {
        Self {
            factors: self.factors.iter().rev().map(BraidFactor::inverse).collect(),
        }
    }

    /// `self · other` as operators.
    pub fn then_right(mut self, other: &BraidWord) -> Self {
        self.factors.extend(other.factors.iter().cloned());
        self
    }

    pub fn max_weight(&self) -> usize {
        self.factors.iter().map(BraidFactor::weight).max().unwrap_or(0)
    }

    /// `U X U†`.
    pub fn conjugate(&self, x: &MajoranaString) -> MajoranaString {
        self.factors.iter().rev().fold(x.clone(), |acc, f| f.conjugate(&acc))
    }

    /// `U† X U`.
    pub fn conjugate_inverse(&self, x: &MajoranaString) -> MajoranaString {
        self.factors.iter().fold(x.clone(), |acc, f| f.conjugate_inverse(&acc))
    }

    /// Greedily remove adjacent `F F⁻¹` pairs.
    pub fn cancel_inverses(&mut self) {
        let mut out: Vec<BraidFactor> = Vec::with_capacity(self.factors.len());
        for f in self.factors.drain(..) {
            if out
                .last()
                .is_some_and(|l| l.generator == f.generator && l.quarter_turns == -f.quarter_turns)
            {
                out.pop();
            } else {
                out.push(f);
            }
        }
        self.factors = out;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidTableau {
    num_modes: usize,
    images: Vec<MajoranaString>,
}

impl BraidTableau {
    pub fn identity(num_modes: usize) -> Self {
        Self {
            num_modes,
            images: (0..num_modes).map(|i| MajoranaString::gamma(num_modes, i)).collect(),
        }
    }

    /// Build from explicit images, checking all invariants.
    pub fn from_images(images: Vec<MajoranaString>) -> Result<Self, BraidError> {
        let t = Self {
            num_modes: images.len(),
            images,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn images(&self) -> &[MajoranaString] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.num_modes)
    }

    /// Images must be Hermitian, odd, pairwise anticommuting and multiply to `+Γ`.
    pub fn validate(&self) -> Result<(), BraidError> {
        let n = self.num_modes;
        if n == 0 || !n.is_multiple_of(2) {
            return Err(BraidError::InvalidTableau("mode count must be positive and even"));
        }
        let mut prod = MajoranaString::identity(n);
        for (i, a) in self.images.iter().enumerate() {
            if a.num_modes() != n {
                return Err(AlgebraError::ModeMismatch {
                    left: n,
                    right: a.num_modes(),
                }
                .into());
            }
            if !a.is_hermitian() || a.is_even() {
                return Err(BraidError::InvalidTableau("image is not a Hermitian odd string"));
            }
            if self.images[..i].iter().any(|b| b.commutes_unchecked(a)) {
                return Err(BraidError::InvalidTableau("images do not pairwise anticommute"));
            }
            prod = prod.mul_unchecked(a);
        }
        if prod.with_phase(((n / 2) % 4) as u8) != MajoranaString::total_parity(n) {
            return Err(BraidError::InvalidTableau("images do not preserve the total parity"));
        }
        Ok(())
    }

    /// Replace the tableau of `U` by that of `F U`.
    pub fn left_multiply(&mut self, f: &BraidFactor) {
        for img in &mut self.images {
            *img = f.conjugate(img);
        }
    }

    /// Replace the tableau of `U` by that of `F† U`.
    pub fn left_multiply_inverse(&mut self, f: &BraidFactor) {
        for img in &mut self.images {
            *img = f.conjugate_inverse(img);
        }
    }

    /// `U s U†` for an arbitrary string.
    pub fn apply(&self, s: &MajoranaString) -> MajoranaString {
        let mut out = MajoranaString::identity(self.num_modes).with_phase(s.phase());
        for m in s.modes() {
            out = out.mul_unchecked(&self.images[m]);
        }
        out
    }
}

/// Tableau of a word over `num_modes` Majoranas.
pub fn tableau_of(word: &BraidWord, num_modes: usize) -> Result<BraidTableau, BraidError> {
    for (index, f) in word.factors.iter().enumerate() {
        if f.generator.num_modes() != num_modes {
            return Err(AlgebraError::ModeMismatch {
                left: num_modes,
                right: f.generator.num_modes(),
            }
            .into());
        }
        if f.generator.is_hermitian() || !f.generator.is_even() {
            return Err(BraidError::NonUnitary {
                index,
                string: alloc::format!("{}", f.generator),
            });
        }
    }
    let mut t = BraidTableau::identity(num_modes);
    for f in word.factors.iter().rev() {
        t.left_multiply(f);
    }
    Ok(t)
}

fn emit_and_strip(tableau: &mut BraidTableau, out: &mut BraidWord, w: BraidFactor) {
    tableau.left_multiply_inverse(&w);
    out.push(w);
}

/// Factor a tableau level by level, from the highest mode down.
///
/// At level `m` with `Υ` the current image of `γ_m`: if `γ_m ∉ Υ` emit
/// `exp(π/4 Υ γ_m)`; otherwise rotate `Υ` with the lowest absent `γ_j` first.
pub fn synthesize(tableau: &BraidTableau) -> Result<BraidWord, BraidError> {
    tableau.validate()?;
    let n = tableau.num_modes;
    let mut t = tableau.clone();
    let mut out = BraidWord::new();
    for m in (1..n).rev() {
        let gm = MajoranaString::gamma(n, m);
        let upsilon = t.images[m].clone();
        if upsilon == gm {
            continue;
        }
        if !upsilon.support().contains(m) {
            let w = BraidFactor::new(upsilon.mul_unchecked(&gm), 1)?;
            emit_and_strip(&mut t, &mut out, w);
        } else {
            let j = (0..m)
                .find(|&j| !upsilon.support().contains(j))
                .ok_or(BraidError::InvalidTableau("no free mode below the current level"))?;
            let pair = MajoranaString::gamma(n, m).mul_unchecked(&MajoranaString::gamma(n, j));
            let rotate = BraidFactor::new(pair.clone(), 1)?;
            let rotated = rotate.conjugate(&upsilon);
            emit_and_strip(&mut t, &mut out, rotate.inverse());
            emit_and_strip(&mut t, &mut out, BraidFactor::new(rotated.mul_unchecked(&gm), 1)?);
        }
        debug_assert_eq!(t.images[m], gm);
    }
    if t.images[0] != MajoranaString::gamma(n, 0) {
        return Err(BraidError::InvalidTableau("residual sign on the lowest mode"));
    }
    out.cancel_inverses();
    Ok(out)
}

/// Factor a tableau using only weight-2 and weight-4 generators.
pub fn synthesize_w4(tableau: &BraidTableau) -> Result<BraidWord, BraidError> {
    tableau.validate()?;
    let n = tableau.num_modes;
    let mut t = tableau.clone();
    let mut out = BraidWord::new();
    for m in (1..n).rev() {
        let gm = MajoranaString::gamma(n, m);
        loop {
            let upsilon = t.images[m].clone();
            if upsilon == gm {
                break;
            }
            let step = if upsilon.weight() >= 3 {
                let inside = upsilon.modes().take(3);
                let outside = (0..=m)
                    .find(|&k| !upsilon.support().contains(k))
                    .ok_or(BraidError::InvalidTableau("image fills every free mode"))?;
                let support = BitSet::from_indices(n, inside.chain([outside]));
                MajoranaString::hermitian(support).with_phase(1)
            } else {
                let k = upsilon.modes().next().unwrap();
                let other = if k != m { k } else { (0..m).next().unwrap() };
                let (a, b) = (other.min(m), other.max(m));
                if k != m {
                    MajoranaString::from_modes(n, [a, b])
                } else {
                    // Υ = -γ_m: a half-turn about γ_a γ_m flips its sign
                    let f = BraidFactor::new(MajoranaString::from_modes(n, [a, b]), 1)?;
                    t.left_multiply(&f);
                    t.left_multiply(&f);
                    out.push(f.inverse());
                    out.push(f.inverse());
                    continue;
                }
            };
            let f = BraidFactor::new(step, 1)?;
            t.left_multiply(&f);
            out.push(f.inverse());
        }
    }
    if t.images[0] != MajoranaString::gamma(n, 0) {
        return Err(BraidError::InvalidTableau("residual sign on the lowest mode"));
    }
    out.cancel_inverses();
    Ok(out)
}

/// Conjugator `U = exp(π/4 γ_a Υ') exp(π/4 Υ' γ_b)` sending `γ_b ↦ γ_a` for a Hermitian 3-Majorana `Υ'`.
pub fn string_change(
    num_modes: usize,
    a: usize,
    b: usize,
    upsilon_prime: &MajoranaString,
) -> Result<BraidWord, BraidError> {
    let ga = MajoranaString::gamma(num_modes, a);
    let gb = MajoranaString::gamma(num_modes, b);
    let up = MajoranaString::hermitian(upsilon_prime.support().clone());
    Ok(BraidWord {
        factors: alloc::vec![
            BraidFactor::new(ga.mul_unchecked(&up), 1)?,
            BraidFactor::new(up.mul_unchecked(&gb), 1)?,
        ],
    })
}

/// Rewrite every factor of weight six or more into weight-2/4 factors with the same tableau.
pub fn reduce_to_w4(word: &BraidWord, length_ceiling: usize) -> Result<BraidWord, BraidError> {
    let mut out = BraidWord::new();
    for (index, f) in word.factors.iter().enumerate() {
        let n = f.generator.num_modes();
        if !f.generator.is_even() {
            return Err(BraidError::BadWeight { index });
        }
        if f.weight() <= 4 {
            out.push(f.clone());
        } else if f.weight() == n {
            // Γ-proportional factors are fixed by every conjugation, so re-synthesize their tableau
            let t = tableau_of(
                &BraidWord {
                    factors: alloc::vec![f.clone()],
                },
                n,
            )?;
            out.factors.extend(synthesize_w4(&t)?.factors);
        } else {
            weight_step(f, &mut out)?;
        }
        if out.len() > length_ceiling {
            return Err(BraidError::TooLong(length_ceiling));
        }
    }
    out.cancel_inverses();
    Ok(out)
}

/// `exp(θS) = V exp(θS') V†` with `V` a weight-4 braid overlapping `S` in three modes.
fn weight_step(f: &BraidFactor, out: &mut BraidWord) -> Result<(), BraidError> {
    if f.weight() <= 4 {
        out.push(f.clone());
        return Ok(());
    }
    let n = f.generator.num_modes();
    let s = &f.generator;
    let outside = (0..n).find(|&k| !s.support().contains(k)).expect("support is not full");
    let support = BitSet::from_indices(n, s.modes().take(3).chain([outside]));
    let v = BraidFactor::new(MajoranaString::hermitian(support).with_phase(1), 1)?;
    let reduced = BraidFactor::new(v.conjugate_inverse(s), f.quarter_turns)?;
    out.push(v.clone());
    weight_step(&reduced, out)?;
    out.push(v.inverse());
    Ok(())
}

/// A random even-weight anti-Hermitian generator on `num_modes` modes.
pub fn random_generator<R: Rng + ?Sized>(num_modes: usize, max_weight: usize, rng: &mut R) -> MajoranaString {
    let max_pairs = (max_weight.min(num_modes) / 2).max(1);
    let weight = 2 * rng.random_range(1..=max_pairs);
    let mut modes: Vec<usize> = (0..num_modes).collect();
    for i in 0..weight {
        let j = rng.random_range(i..num_modes);
        modes.swap(i, j);
    }
    let support = BitSet::from_indices(num_modes, modes[..weight].iter().copied());
    MajoranaString::hermitian(support).with_phase(1)
}

/// A random word of `len` factors with generators of weight at most `max_weight`.
pub fn random_word<R: Rng + ?Sized>(num_modes: usize, len: usize, max_weight: usize, rng: &mut R) -> BraidWord {
    let factors = (0..len)
        .map(|_| {
            let g = random_generator(num_modes, max_weight, rng);
            let q = if rng.random::<bool>() { 1 } else { -1 };
            BraidFactor::new(g, q).expect("generator is anti-Hermitian and even")
        })
        .collect();
    BraidWord { factors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{dense_of, exp_string, identity, unitary_overlap, Mat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(text: &str, n: usize) -> MajoranaString {
        MajoranaString::parse(text, n).unwrap()
    }

    fn unitary(word: &BraidWord, n: usize) -> Mat {
        let mut u = identity(1 << (n / 2));
        for f in &word.factors {
            u *= exp_string(&f.signed_generator(), core::f64::consts::FRAC_PI_4);
        }
        u
    }

    fn single(text: &str, n: usize, q: i8) -> BraidWord {
        BraidWord {
            factors: alloc::vec![BraidFactor::new(p(text, n), q).unwrap()],
        }
    }

    #[test]
    fn empty_word_is_identity() {
        assert!(tableau_of(&BraidWord::new(), 6).unwrap().is_identity());
        assert!(synthesize(&BraidTableau::identity(6)).unwrap().is_empty());
    }

    #[test]
    fn w2_exchanges_modes() {
        let t = tableau_of(&single("g1 g2", 4, 1), 4).unwrap();
        assert_eq!(t.images()[0], p("- g2", 4));
        assert_eq!(t.images()[1], p("g1", 4));
        assert_eq!(t.images()[2], p("g3", 4));
        let u = unitary(&single("g1 g2", 4, 1), 4);
        for (k, img) in t.images().iter().enumerate() {
            let g = dense_of(&MajoranaString::gamma(4, k));
            assert!(crate::testutil::approx_eq_mat(
                &(&u * g * u.adjoint()),
                &dense_of(img),
                1e-12
            ));
        }
    }

    #[test]
    fn w4_makes_logical_majorana() {
        let t = tableau_of(&single("i g1 g2 g3 g4", 6, 1), 6).unwrap();
        let img = &t.images()[0];
        assert_eq!(img.support(), p("g2 g3 g4", 6).support());
        let u = unitary(&single("i g1 g2 g3 g4", 6, 1), 6);
        let g = dense_of(&MajoranaString::gamma(6, 0));
        assert!(crate::testutil::approx_eq_mat(
            &(&u * g * u.adjoint()),
            &dense_of(img),
            1e-12
        ));
    }

    #[test]
    fn hermitian_generators_are_rejected() {
        assert!(matches!(
            BraidFactor::new(p("i g1 g2", 4), 1),
            Err(BraidError::NonUnitary { .. })
        ));
        assert!(matches!(
            BraidFactor::new(p("g1", 4), 1),
            Err(BraidError::BadWeight { .. })
        ));
        assert!(BraidFactor::normalized(&p("i g1 g2", 4), 1).is_ok());
    }

    #[test]
    fn first_factor_moves_top_mode() {
        let n = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let t = tableau_of(&random_word(n, 6, n, &mut rng), n).unwrap();
            let upsilon = t.images()[n - 1].clone();
            if upsilon.support().contains(n - 1) {
                continue;
            }
            let w = synthesize(&t).unwrap();
            let expected = upsilon.mul_unchecked(&MajoranaString::gamma(n, n - 1));
            assert_eq!(w.factors[0].signed_generator(), expected);
            return;
        }
        panic!("no sample with γ_2N outside Υ");
    }

    #[test]
    fn synthesis_round_trip_with_matrix_overlap() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [4usize, 6, 8] {
            for _ in 0..20 {
                let word = random_word(n, 5, n, &mut rng);
                let t = tableau_of(&word, n).unwrap();
                let synth = synthesize(&t).unwrap();
                assert_eq!(tableau_of(&synth, n).unwrap(), t);
                let overlap = unitary_overlap(&unitary(&word, n), &unitary(&synth, n));
                assert!((overlap - 1.0).abs() < 1e-10, "overlap {overlap}");
            }
        }
    }

    #[test]
    fn w4_synthesis_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [4usize, 6, 8, 12] {
            for _ in 0..10 {
                let t = tableau_of(&random_word(n, 7, n, &mut rng), n).unwrap();
                let w = synthesize_w4(&t).unwrap();
                assert!(w.max_weight() <= 4);
                assert_eq!(tableau_of(&w, n).unwrap(), t);
            }
        }
    }

    #[test]
    fn w6_reduces_to_w4() {
        for n in [6usize, 8] {
            let word = single("g1 g2 g3 g4 g5 g6", n, -1);
            let reduced = reduce_to_w4(&word, DEFAULT_LENGTH_CEILING).unwrap();
            assert!(reduced.max_weight() <= 4);
            assert_eq!(tableau_of(&reduced, n).unwrap(), tableau_of(&word, n).unwrap());
            let overlap = unitary_overlap(&unitary(&word, n), &unitary(&reduced, n));
            assert!((overlap - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn short_words_are_unchanged_by_reduction() {
        let word = single("g1 g2", 6, 1).then_right(&single("i g1 g3 g4 g6", 6, -1));
        assert_eq!(reduce_to_w4(&word, DEFAULT_LENGTH_CEILING).unwrap(), word);
    }

    #[test]
    fn string_change_conjugates_w4_into_w4() {
        // exp(π/4 γ_a Υ) = U exp(π/4 γ_b Υ) U† with Υ = γ4γ5γ6 and Υ' = γ3γ4γ5 (even overlap)
        let n = 8;
        let (a, b) = (0, 1);
        let upsilon = MajoranaString::hermitian(p("g4 g5 g6", n).support().clone());
        let upsilon_prime = p("g3 g4 g5", n);
        let u = string_change(n, a, b, &upsilon_prime).unwrap();
        assert_eq!(u.conjugate(&MajoranaString::gamma(n, b)), MajoranaString::gamma(n, a));
        let lhs = BraidWord {
            factors: alloc::vec![BraidFactor::new(MajoranaString::gamma(n, a).mul_unchecked(&upsilon), 1).unwrap()],
        };
        let inner = BraidWord {
            factors: alloc::vec![BraidFactor::new(MajoranaString::gamma(n, b).mul_unchecked(&upsilon), 1).unwrap()],
        };
        let rhs = u.clone().then_right(&inner).then_right(&u.inverse());
        assert_eq!(tableau_of(&lhs, n).unwrap(), tableau_of(&rhs, n).unwrap());
        assert!((unitary_overlap(&unitary(&lhs, n), &unitary(&rhs, n)) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn weight_four_images_are_single_strings() {
        // conjugating γ_k through weight-4 braids never produces a sum of strings
        let n = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let word = random_word(n, 6, 4, &mut rng);
        let u = unitary(&word, n);
        let t = tableau_of(&word, n).unwrap();
        for (k, img) in t.images().iter().enumerate() {
            let g = dense_of(&MajoranaString::gamma(n, k));
            assert!(crate::testutil::approx_eq_mat(
                &(&u * g * u.adjoint()),
                &dense_of(img),
                1e-10
            ));
        }
    }

    #[test]
    fn cancellation_removes_inverse_pairs() {
        let f = BraidFactor::new(p("g1 g2", 4), 1).unwrap();
        let mut w = BraidWord {
            factors: alloc::vec![f.clone(), f.inverse(), f.clone()],
        };
        w.cancel_inverses();
        assert_eq!(w.factors, alloc::vec![f]);
    }

    #[test]
    fn invalid_tableaux_are_rejected() {
        let mut images = BraidTableau::identity(4).images().to_vec();
        images[0] = images[0].negate();
        assert!(BraidTableau::from_images(images).is_err());
        let mut images = BraidTableau::identity(4).images().to_vec();
        images.swap(0, 1);
        assert!(BraidTableau::from_images(images).is_err());
    }
}
