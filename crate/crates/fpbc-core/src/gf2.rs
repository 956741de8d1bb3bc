//! Linear dependencies among commuting parity strings over GF(2), with sign recovery.

use alloc::vec::Vec;

use crate::bits::BitSet;
use crate::majorana::{AlgebraError, MajoranaString};

/// `candidate = sign · ∏_{i ∈ members} history[i] · Γ^{includes_total_parity}`.
///
/// Moving the candidate to the other side, `sign · candidate · ∏ members · Γ^k = 𝟙`
/// for commuting Hermitian strings, which is the usual "signed product is the identity" form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedRelation {
    pub members: Vec<usize>,
    pub includes_total_parity: bool,
    pub sign: i8,
}

impl SignedRelation {
    /// Outcome of the candidate given the outcomes of the history and of `Γ`.
    pub fn evaluate(&self, outcomes: &[i8], total_parity_value: i8) -> i8 {
        let mut v = self.sign;
        for &m in &self.members {
            v *= outcomes[m];
        }
        if self.includes_total_parity {
            v *= total_parity_value;
        }
        v
    }

    /// Check the relation by multiplying out the strings.
    pub fn holds(&self, history: &[MajoranaString], candidate: &MajoranaString) -> bool {
        let n = candidate.num_modes();
        let mut prod = MajoranaString::identity(n);
        for &m in &self.members {
            prod = prod.mul_unchecked(&history[m]);
        }
        if self.includes_total_parity {
            prod = prod.mul_unchecked(&MajoranaString::total_parity(n));
        }
        prod.signed(self.sign) == *candidate
    }
}

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    support: BitSet,
    combination: BitSet,
}

/// Incremental row-reduced basis over the supports of pushed strings.
///
/// Generator 0 is `Γ` when the tracker was built with the total parity; user
/// indices are shifted accordingly in reported relations.
#[derive(Clone, Debug)]
pub struct DependencyTracker {
    num_modes: usize,
    with_total_parity: bool,
    generators: Vec<MajoranaString>,
    rows: Vec<Row>,
}

impl DependencyTracker {
    pub fn new(num_modes: usize, with_total_parity: bool) -> Self {
        let mut tracker = Self {
            num_modes,
            with_total_parity,
            generators: Vec::new(),
            rows: Vec::new(),
        };
        if with_total_parity {
            tracker.insert_generator(MajoranaString::total_parity(num_modes));
        }
        tracker
    }

    fn offset(&self) -> usize {
        self.with_total_parity as usize
    }

    /// Number of strings pushed by the caller.
    pub fn len(&self) -> usize {
        self.generators.len() - self.offset()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of independent directions spanned (including `Γ` if tracked).
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn strings(&self) -> &[MajoranaString] {
        &self.generators[self.offset()..]
    }

    fn reduce(&self, support: &BitSet) -> (BitSet, BitSet) {
        let cap = self.generators.len().max(1);
        let mut rem = support.clone();
        let mut combo = BitSet::new(cap);
        for row in &self.rows {
            if rem.contains(row.pivot) {
                rem.xor_with(&row.support);
                combo.xor_with(&row.combination.resized(cap));
            }
        }
        (rem, combo)
    }

    /// The relation expressing `candidate` through previously pushed strings, if any.
    pub fn classify(&self, candidate: &MajoranaString) -> Result<Option<SignedRelation>, AlgebraError> {
        if candidate.num_modes() != self.num_modes {
            return Err(AlgebraError::ModeMismatch {
                left: self.num_modes,
                right: candidate.num_modes(),
            });
        }
        let (rem, combo) = self.reduce(candidate.support());
        if !rem.is_empty() {
            return Ok(None);
        }
        let mut prod = MajoranaString::identity(self.num_modes);
        for g in combo.iter() {
            prod = prod.mul_unchecked(&self.generators[g]);
        }
        let sign = match candidate.phase_relative_to(&prod) {
            Some(0) => 1,
            Some(2) => -1,
            _ => unreachable!("commuting Hermitian strings have real relative phase"),
        };
        let off = self.offset();
        Ok(Some(SignedRelation {
            members: combo.iter().filter(|&g| g >= off).map(|g| g - off).collect(),
            includes_total_parity: self.with_total_parity && combo.contains(0),
            sign,
        }))
    }

    /// Record a string; returns its caller-facing index.
    pub fn push(&mut self, s: MajoranaString) -> Result<usize, AlgebraError> {
        if s.num_modes() != self.num_modes {
            return Err(AlgebraError::ModeMismatch {
                left: self.num_modes,
                right: s.num_modes(),
            });
        }
        let index = self.generators.len();
        if !s.is_parity_operator() {
            return Err(AlgebraError::NotParity(index - self.offset()));
        }
        if let Some(j) = self.generators.iter().position(|g| !g.commutes_unchecked(&s)) {
            return Err(AlgebraError::NotCommuting(
                j.saturating_sub(self.offset()),
                index - self.offset(),
            ));
        }
        self.insert_generator(s);
        Ok(index - self.offset())
    }

    fn insert_generator(&mut self, s: MajoranaString) {
        let index = self.generators.len();
        let cap = index + 1;
        let (rem, combo) = self.reduce(s.support());
        self.generators.push(s);
        if rem.is_empty() {
            return;
        }
        let mut combination = combo.resized(cap);
        combination.insert(index);
        // keep rows fully reduced on their pivots so later reductions are one pass
        let pivot = rem.first().unwrap();
        for row in &mut self.rows {
            if row.support.contains(pivot) {
                row.support.xor_with(&rem);
                let mut c = row.combination.resized(cap);
                c.xor_with(&combination);
                row.combination = c;
            }
        }
        self.rows.push(Row {
            pivot,
            support: rem,
            combination,
        });
    }
}

/// One-shot dependency query: is `candidate` ± a product of `history` (and optionally `Γ`)?
pub fn find_dependency(
    history: &[MajoranaString],
    candidate: &MajoranaString,
    allow_total_parity: bool,
) -> Result<Option<SignedRelation>, AlgebraError> {
    let mut tracker = DependencyTracker::new(candidate.num_modes(), allow_total_parity);
    for s in history {
        tracker.push(s.clone())?;
    }
    if !candidate.is_parity_operator() {
        return Err(AlgebraError::NotParity(history.len()));
    }
    if let Some(j) = history.iter().position(|h| !h.commutes_unchecked(candidate)) {
        return Err(AlgebraError::NotCommuting(j, history.len()));
    }
    tracker.classify(candidate)
}
