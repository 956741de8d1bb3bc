//! Gadget-expanded event sequences over the combined register (`R_n` modes first, then `R_t`).

use alloc::vec::Vec;

use crate::braid::BraidFactor;
use crate::circuit::{FermionicCircuit, Gate};
use crate::dense::{magic_stabilizer, t2_generator};
use crate::majorana::MajoranaString;

use super::CompileError;

/// Where a measurement came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// Leading `s_j^(c)` with known outcome `+1`.
    Dummy(usize),
    /// `i s_j γ_a γ_b` of the `j`-th magic state gadget.
    Gadget(usize),
    /// Terminal `s_j^(c)`, filling `b_j`.
    Final(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementOp {
    pub string: MajoranaString,
    pub origin: Origin,
    pub output_slot: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Measure(MeasurementOp),
    /// Applied unconditionally, or only when gadget `condition`'s outcome is `+1`.
    Braid {
        factor: BraidFactor,
        condition: Option<usize>,
    },
}

/// The register geometry shared by every pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Registers {
    pub n: usize,
    pub t: usize,
    pub parity_sector: i8,
}

impl Registers {
    pub fn of(circuit: &FermionicCircuit) -> Self {
        Self {
            n: circuit.n,
            t: circuit.t,
            parity_sector: circuit.parity_sector,
        }
    }

    pub fn rn_modes(&self) -> usize {
        2 * self.n + 2
    }

    pub fn rt_modes(&self) -> usize {
        2 * self.t + 2
    }

    pub fn total_modes(&self) -> usize {
        self.rn_modes() + self.rt_modes()
    }

    /// First `R_t` mode in the combined register.
    pub fn rt_offset(&self) -> usize {
        self.rn_modes()
    }

    /// `s_j^(c)` embedded in the combined register.
    pub fn computational_parity(&self, j: usize) -> MajoranaString {
        MajoranaString::pair_parity(self.total_modes(), 2 * j, 2 * j + 1)
    }

    /// `s_j = i γ_{2j-1} γ_{2j}` of `R_t`, embedded.
    pub fn magic_parity(&self, j: usize) -> MajoranaString {
        let o = self.rt_offset();
        MajoranaString::pair_parity(self.total_modes(), o + 2 * j, o + 2 * j + 1)
    }

    /// `X_j` of `R_t`, embedded.
    pub fn magic_stabilizer(&self, j: usize) -> MajoranaString {
        magic_stabilizer(self.t, j).embed(self.total_modes(), self.rt_offset())
    }

    /// Number of measurements other than dummies.
    pub fn op_count(&self) -> usize {
        self.t + self.n
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub registers: Registers,
    pub events: Vec<Event>,
}

impl Sequence {
    pub fn measurements(&self) -> impl Iterator<Item = &MeasurementOp> {
        self.events.iter().filter_map(|e| match e {
            Event::Measure(m) => Some(m),
            _ => None,
        })
    }

    pub fn braid_count(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, Event::Braid { .. })).count()
    }

    pub fn has_dummies(&self) -> bool {
        self.measurements().any(|m| matches!(m.origin, Origin::Dummy(_)))
    }
}

/// The measurement, unconditional braid and conditional braid of one gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetExpansion {
    pub measurement: MeasurementOp,
    /// `exp(π/4 γ_a γ_b X_j)`, always applied.
    pub entangler: BraidFactor,
    /// `exp(π/4 γ_b γ_a)`, applied only for outcome `+1`.
    pub correction: BraidFactor,
}

/// Expansion of `T_{2,ab}` consuming magic state `j`.
pub fn gadget(regs: &Registers, j: usize, a: usize, b: usize) -> Result<GadgetExpansion, CompileError> {
    let total = regs.total_modes();
    let ab = t2_generator(total, a, b);
    let string = regs.magic_parity(j).mul_unchecked(&ab).with_phase(1);
    debug_assert!(string.is_parity_operator());
    let entangler = BraidFactor::new(ab.mul_unchecked(&regs.magic_stabilizer(j)), 1)?;
    let correction = BraidFactor::new(t2_generator(total, b, a), 1)?;
    Ok(GadgetExpansion {
        measurement: MeasurementOp {
            string,
            origin: Origin::Gadget(j),
            output_slot: None,
        },
        entangler,
        correction,
    })
}

/// Replace every `T₂` by its gadget (magic states used in order) and append the final measurements.
pub fn insert_gadgets(circuit: &FermionicCircuit) -> Result<Sequence, CompileError> {
    let diags = circuit.validate();
    if !diags.is_empty() {
        return Err(CompileError::InvalidCircuit(diags));
    }
    let regs = Registers::of(circuit);
    let total = regs.total_modes();
    let mut events = Vec::new();
    let mut j = 0;
    for g in &circuit.gates {
        match g {
            Gate::Braid { string, quarter_turns } => events.push(Event::Braid {
                factor: BraidFactor::new(string.embed(total, 0), *quarter_turns)?,
                condition: None,
            }),
            Gate::T2 { a, b } => {
                let x = gadget(&regs, j, *a, *b)?;
                events.push(Event::Measure(x.measurement));
                events.push(Event::Braid {
                    factor: x.entangler,
                    condition: None,
                });
                events.push(Event::Braid {
                    factor: x.correction,
                    condition: Some(j),
                });
                j += 1;
            }
        }
    }
    for k in 0..regs.n {
        events.push(Event::Measure(MeasurementOp {
            string: regs.computational_parity(k),
            origin: Origin::Final(k),
            output_slot: Some(k),
        }));
    }
    Ok(Sequence {
        registers: regs,
        events,
    })
}

/// Put the `n` dummy `s_j^(c)` measurements in front (idempotent).
pub fn prepend_dummies(seq: Sequence) -> Sequence {
    if seq.has_dummies() {
        return seq;
    }
    let regs = seq.registers;
    let mut events: Vec<Event> = (0..regs.n)
        .map(|k| {
            Event::Measure(MeasurementOp {
                string: regs.computational_parity(k),
                origin: Origin::Dummy(k),
                output_slot: None,
            })
        })
        .collect();
    events.extend(seq.events);
    Sequence {
        registers: regs,
        events,
    }
}
