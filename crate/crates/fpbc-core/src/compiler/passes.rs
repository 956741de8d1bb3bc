//! Braid elimination, the anticommuting sweep, restriction to `R_t` and dependency resolution.
//!
//! The passes run for one assignment of gadget outcomes `m_j`: the conditional
//! correction braid of a gadget changes the supports of later measurements, so
//! each assignment gives its own straight-line program. Within an assignment every
//! remaining unknown (coin flips and measured outcomes) enters only as a sign,
//! tracked as a set of outcome variables.

use alloc::vec::Vec;

use crate::bits::BitSet;
use crate::gf2::{DependencyTracker, SignedRelation};
use crate::majorana::{hermitian_phase, MajoranaString};

use super::sequence::{Event, MeasurementOp, Origin, Registers, Sequence};
use super::CompileError;

/// `(∏_{k ∈ vars} λ_k) · string`, where `λ_k` is the outcome of measurement `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicString {
    pub string: MajoranaString,
    pub vars: BitSet,
}

impl SymbolicString {
    pub fn constant(string: MajoranaString, op_count: usize) -> Self {
        Self {
            string,
            vars: BitSet::new(op_count),
        }
    }

    /// `V† X V` for `V = exp(π/4 · generator)`.
    fn conjugate_inverse(&mut self, generator: &SymbolicString) {
        if !self.string.commutes_unchecked(&generator.string) {
            self.string = self.string.mul_unchecked(&generator.string);
            self.vars.xor_with(&generator.vars);
        }
    }
}

/// Every measurement conjugated through all earlier braids, for the given gadget outcomes.
///
/// Braids after the last measurement drop out. `assignment[j]` selects whether the
/// correction braid of gadget `j` is present.
pub fn eliminate_braids(seq: &Sequence, assignment: &[i8]) -> Result<Vec<MeasurementOp>, CompileError> {
    if assignment.len() != seq.registers.t {
        return Err(CompileError::Assignment {
            expected: seq.registers.t,
            found: assignment.len(),
        });
    }
    let mut braids = Vec::new();
    let mut out = Vec::new();
    for e in &seq.events {
        match e {
            Event::Braid { factor, condition } => {
                if condition.is_none_or(|j| assignment[j] > 0) {
                    braids.push(factor);
                }
            }
            Event::Measure(m) => {
                let string = braids
                    .iter()
                    .rev()
                    .fold(m.string.clone(), |acc, f| f.conjugate_inverse(&acc));
                out.push(MeasurementOp {
                    string,
                    origin: m.origin,
                    output_slot: m.output_slot,
                });
            }
        }
    }
    Ok(out)
}

/// The earlier measurement that made an operator redundant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Partner {
    Dummy(usize),
    Op(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepEntry {
    /// Kept as a measurement, in its updated form.
    Survivor(SymbolicString),
    /// Replaced by `V = exp(π/4 · generator)`; the outcome becomes a coin flip.
    Replaced {
        partner: Partner,
        generator: SymbolicString,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Swept {
    pub dummies: Vec<MajoranaString>,
    /// One entry per non-dummy measurement, in order.
    pub entries: Vec<SweepEntry>,
}

impl Swept {
    pub fn coin_count(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e, SweepEntry::Replaced { .. }))
            .count()
    }

    pub fn survivors(&self) -> impl Iterator<Item = (usize, &SymbolicString)> {
        self.entries.iter().enumerate().filter_map(|(i, e)| match e {
            SweepEntry::Survivor(s) => Some((i, s)),
            _ => None,
        })
    }
}

/// Scan the measurements in order; the first one anticommuting with an earlier
/// survivor (earliest partner wins, dummies first) is replaced by
/// `V(λ_i, λ_j) = exp(π/4 λ_i λ_j M_i M_j)`, which is then pushed through every later measurement.
pub fn sweep_anticommuting(ops: &[MeasurementOp]) -> Swept {
    let dummies: Vec<MajoranaString> = ops
        .iter()
        .filter(|m| matches!(m.origin, Origin::Dummy(_)))
        .map(|m| m.string.clone())
        .collect();
    let rest: Vec<&MeasurementOp> = ops.iter().filter(|m| !matches!(m.origin, Origin::Dummy(_))).collect();
    let count = rest.len();
    let mut entries: Vec<SweepEntry> = Vec::with_capacity(count);
    let mut vs: Vec<SymbolicString> = Vec::new();
    for (i, m) in rest.iter().enumerate() {
        let mut x = SymbolicString::constant(m.string.clone(), count);
        for v in &vs {
            x.conjugate_inverse(v);
        }
        let partner = dummies
            .iter()
            .position(|d| !d.commutes_unchecked(&x.string))
            .map(|k| (Partner::Dummy(k), SymbolicString::constant(dummies[k].clone(), count)))
            .or_else(|| {
                entries.iter().enumerate().find_map(|(j, e)| match e {
                    SweepEntry::Survivor(s) if !s.string.commutes_unchecked(&x.string) => {
                        Some((Partner::Op(j), s.clone()))
                    }
                    _ => None,
                })
            });
        match partner {
            None => entries.push(SweepEntry::Survivor(x)),
            Some((partner, mj)) => {
                let mut vars = x.vars.xor(&mj.vars);
                vars.toggle(i);
                if let Partner::Op(j) = partner {
                    vars.toggle(j);
                }
                let generator = SymbolicString {
                    string: x.string.mul_unchecked(&mj.string),
                    vars,
                };
                debug_assert!(generator.string.is_anti_hermitian());
                vs.push(generator.clone());
                entries.push(SweepEntry::Replaced { partner, generator });
            }
        }
    }
    Swept { dummies, entries }
}

/// A surviving measurement after its `R_n` factor is replaced by its known eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restricted {
    pub string: MajoranaString,
    pub vars: BitSet,
}

/// Checks `R_n` factors against `⟨s_1^(c), …, s_n^(c), Γ_{2n+2}⟩`.
#[derive(Debug, Clone)]
pub struct Restrictor {
    regs: Registers,
    tracker: DependencyTracker,
}

impl Restrictor {
    pub fn new(regs: Registers) -> Self {
        let rn = regs.rn_modes();
        let mut tracker = DependencyTracker::new(rn, true);
        for j in 0..regs.n {
            tracker
                .push(MajoranaString::pair_parity(rn, 2 * j, 2 * j + 1))
                .expect("pair parities commute");
        }
        Self { regs, tracker }
    }

    /// Split `M = i^p H_n H_t` and substitute the eigenvalue of `H_n` on the initial `R_n` state.
    pub fn restrict(&self, op: usize, m: &SymbolicString) -> Result<Restricted, CompileError> {
        let rn = self.regs.rn_modes();
        let rt = self.regs.rt_modes();
        let hn = m.string.slice(0, rn);
        let ht = m.string.slice(rn, rt);
        let hn_zero = MajoranaString::from_parts(hn.support().clone(), 0);
        let hn_herm = MajoranaString::hermitian(hn.support().clone());
        if !hn.is_even() {
            return Err(CompileError::Restriction { op });
        }
        let relation = self
            .tracker
            .classify(&hn_herm)?
            .ok_or(CompileError::Restriction { op })?;
        let value = relation.evaluate(&alloc::vec![1i8; self.regs.n], self.regs.parity_sector);
        // M = i^p · (i^{-h} H_n^herm) · H_t^0 with H_n^herm ↦ value
        let h = hermitian_phase(hn_zero.weight());
        let phase = (m.string.phase() + 4 - h + if value < 0 { 2 } else { 0 }) % 4;
        let string = MajoranaString::from_parts(ht.support().clone(), phase);
        if !string.is_hermitian() {
            return Err(CompileError::Restriction { op });
        }
        Ok(Restricted {
            string,
            vars: m.vars.clone(),
        })
    }
}

/// Sugar for restricting every survivor of a sweep.
pub fn restrict_to_rt(swept: &Swept, regs: Registers) -> Result<Vec<(usize, Restricted)>, CompileError> {
    let r = Restrictor::new(regs);
    for (k, d) in swept.dummies.iter().enumerate() {
        for (i, s) in swept.survivors() {
            if !d.commutes_unchecked(&s.string) {
                return Err(CompileError::NotCommuting { op: i, dummy: k });
            }
        }
    }
    swept.survivors().map(|(i, s)| Ok((i, r.restrict(i, s)?))).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Measure `string` on `R_t`; the outcome `μ` gives `λ_op = μ · ∏ λ_vars`.
    Quantum {
        op: usize,
        string: MajoranaString,
        vars: Vec<usize>,
    },
    /// `λ_op` is uniformly random.
    Coin { op: usize },
    /// `μ = sign · ∏ μ_members · Γ^k` with members given as measurement indices, and `λ_op = μ · ∏ λ_vars`.
    Derived {
        op: usize,
        relation: SignedRelation,
        vars: Vec<usize>,
    },
}

impl Step {
    pub fn op(&self) -> usize {
        match self {
            Step::Quantum { op, .. } | Step::Coin { op } | Step::Derived { op, .. } => *op,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub quantum: usize,
    pub coin: usize,
    pub derived: usize,
}

/// The straight-line program for one assignment of gadget outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticProgram {
    pub registers: Registers,
    pub assignment: Vec<i8>,
    pub steps: Vec<Step>,
}

impl StaticProgram {
    pub fn stats(&self) -> StepStats {
        let mut s = StepStats::default();
        for step in &self.steps {
            match step {
                Step::Quantum { .. } => s.quantum += 1,
                Step::Coin { .. } => s.coin += 1,
                Step::Derived { .. } => s.derived += 1,
            }
        }
        s
    }

    pub fn quantum_strings(&self) -> impl Iterator<Item = &MajoranaString> {
        self.steps.iter().filter_map(|s| match s {
            Step::Quantum { string, .. } => Some(string),
            _ => None,
        })
    }
}

/// Turn restricted survivors into quantum or derived steps, and replaced ones into coins.
pub fn resolve_dependencies(
    regs: Registers,
    op_count: usize,
    restricted: &[(usize, Restricted)],
) -> Result<Vec<Step>, CompileError> {
    let mut tracker = DependencyTracker::new(regs.rt_modes(), true);
    let mut measured: Vec<usize> = Vec::new();
    let mut steps: Vec<Step> = (0..op_count).map(|op| Step::Coin { op }).collect();
    for (op, r) in restricted {
        let vars: Vec<usize> = r.vars.iter().collect();
        match tracker.classify(&r.string)? {
            Some(mut relation) => {
                relation.members = relation.members.iter().map(|&k| measured[k]).collect();
                steps[*op] = Step::Derived {
                    op: *op,
                    relation,
                    vars,
                };
            }
            None => {
                tracker.push(r.string.clone())?;
                measured.push(*op);
                steps[*op] = Step::Quantum {
                    op: *op,
                    string: r.string.clone(),
                    vars,
                };
            }
        }
    }
    Ok(steps)
}

/// All passes for one gadget-outcome assignment.
pub fn compile_branch(seq: &Sequence, assignment: &[i8]) -> Result<StaticProgram, CompileError> {
    let regs = seq.registers;
    let ops = if seq.has_dummies() {
        eliminate_braids(seq, assignment)?
    } else {
        eliminate_braids(&super::sequence::prepend_dummies(seq.clone()), assignment)?
    };
    let swept = sweep_anticommuting(&ops);
    let restricted = restrict_to_rt(&swept, regs)?;
    let steps = resolve_dependencies(regs, regs.op_count(), &restricted)?;
    Ok(StaticProgram {
        registers: regs,
        assignment: assignment.to_vec(),
        steps,
    })
}
