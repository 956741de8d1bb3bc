//! Dense reference runs of the gadget circuit on the joint `R_n ⊗ R_t` state.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::braid::BraidFactor;
use crate::dense::{bit_char, prepare_computational_register, prepare_magic_register, Distribution, StateVector};
use crate::majorana::MajoranaString;

use super::passes::eliminate_braids;
use super::sequence::{gadget, Event, MeasurementOp, Origin, Registers, Sequence};
use super::CompileError;

/// `R_n` in its initial all-`+1` state tensored with the magic register.
pub fn joint_initial_state(regs: &Registers) -> Result<StateVector, CompileError> {
    let rn = prepare_computational_register(regs.n, regs.parity_sector)?;
    let rt = prepare_magic_register(regs.t, regs.parity_sector)?;
    Ok(rn.tensor(&rt)?)
}

/// Exact output distribution of the gadget-expanded circuit, simulated event by event.
pub fn gadget_circuit_distribution(seq: &Sequence) -> Result<Distribution, CompileError> {
    let state = joint_initial_state(&seq.registers)?;
    let mut dist = Distribution::default();
    let mut outcomes = vec![0i8; seq.registers.t];
    let mut bits = vec!['0'; seq.registers.n];
    walk_events(&seq.events, state, 1.0, &mut outcomes, &mut bits, &mut dist)?;
    Ok(dist)
}

fn walk_events(
    events: &[Event],
    mut state: StateVector,
    p: f64,
    outcomes: &mut [i8],
    bits: &mut [char],
    dist: &mut Distribution,
) -> Result<(), CompileError> {
    let mut rest = events;
    while let Some((e, tail)) = rest.split_first() {
        rest = tail;
        match e {
            Event::Braid { factor, condition } => {
                if condition.is_none_or(|j| outcomes[j] > 0) {
                    apply_factor(&mut state, factor)?;
                }
            }
            Event::Measure(m) if matches!(m.origin, Origin::Dummy(_)) => {
                let (_, post) = state.project(&m.string, 1)?;
                state = post.ok_or(crate::dense::DenseError::ImpossibleOutcome(1))?;
            }
            Event::Measure(m) => {
                for outcome in [1i8, -1] {
                    let (q, post) = state.project(&m.string, outcome)?;
                    let Some(post) = post else { continue };
                    match m.origin {
                        Origin::Gadget(j) => outcomes[j] = outcome,
                        Origin::Final(k) => bits[k] = bit_char(outcome),
                        Origin::Dummy(_) => unreachable!(),
                    }
                    walk_events(rest, post, p * q, outcomes, bits, dist)?;
                }
                return Ok(());
            }
        }
    }
    dist.add(bits.iter().collect(), p);
    Ok(())
}

/// Exact output distribution when every braid-eliminated measurement is performed
/// directly on the initial joint state, including the ones the sweep turns into coins.
pub fn eliminated_distribution(seq: &Sequence) -> Result<Distribution, CompileError> {
    let regs = seq.registers;
    let state = joint_initial_state(&regs)?;
    let mut cache = BTreeMap::new();
    let mut dist = Distribution::default();
    let mut assignment = vec![1i8; regs.t];
    walk_eliminated(
        seq,
        &mut cache,
        0,
        state,
        1.0,
        &mut assignment,
        &mut String::new(),
        &mut dist,
    )?;
    Ok(dist)
}

#[allow(clippy::too_many_arguments)]
fn walk_eliminated(
    seq: &Sequence,
    cache: &mut BTreeMap<Vec<i8>, Vec<MeasurementOp>>,
    index: usize,
    state: StateVector,
    p: f64,
    assignment: &mut Vec<i8>,
    bits: &mut String,
    dist: &mut Distribution,
) -> Result<(), CompileError> {
    if !cache.contains_key(assignment.as_slice()) {
        let ops = eliminate_braids(seq, assignment)?;
        cache.insert(assignment.clone(), ops);
    }
    let ops = &cache[assignment.as_slice()];
    let Some(m) = ops.get(index).cloned() else {
        dist.add(bits.clone(), p);
        return Ok(());
    };
    let outcomes: &[i8] = if matches!(m.origin, Origin::Dummy(_)) {
        &[1]
    } else {
        &[1, -1]
    };
    for &outcome in outcomes {
        let (q, post) = state.project(&m.string, outcome)?;
        let Some(post) = post else { continue };
        let saved = assignment.clone();
        match m.origin {
            Origin::Gadget(j) => {
                // later gadgets have not happened yet; their slots stay at the default
                assignment[j] = outcome;
            }
            Origin::Final(_) => bits.push(bit_char(outcome)),
            Origin::Dummy(_) => {}
        }
        walk_eliminated(seq, cache, index + 1, post, p * q, assignment, bits, dist)?;
        if matches!(m.origin, Origin::Final(_)) {
            bits.pop();
        }
        *assignment = saved;
    }
    Ok(())
}

/// Run gadget `j` for `T₂(a, b)` on `ψ ⊗ |magic⟩` with the measurement forced to `outcome`,
/// and return the fidelity of the reduced `R_n` state with `T₂|ψ⟩`.
///
/// Returns `None` when the outcome has zero probability.
pub fn gadget_fidelity(
    psi: &StateVector,
    t: usize,
    parity_sector: i8,
    j: usize,
    a: usize,
    b: usize,
) -> Result<[Option<f64>; 2], CompileError> {
    let n = psi.num_modes() / 2 - 1;
    let regs = Registers { n, t, parity_sector };
    let joint = psi.tensor(&prepare_magic_register(t, parity_sector)?)?;
    let g = gadget(&regs, j, a, b)?;
    let mut target = psi.clone();
    target.apply_exponential(
        &crate::dense::t2_generator(psi.num_modes(), a, b),
        core::f64::consts::FRAC_PI_8,
    )?;
    let mut out = [None, None];
    for (slot, outcome) in [1i8, -1].into_iter().enumerate() {
        let (_, post) = joint.project(&g.measurement.string, outcome)?;
        let Some(mut s) = post else { continue };
        apply_factor(&mut s, &g.entangler)?;
        if outcome > 0 {
            apply_factor(&mut s, &g.correction)?;
        }
        out[slot] = Some(reduced_fidelity(&s, &target));
    }
    Ok(out)
}

fn apply_factor(state: &mut StateVector, f: &BraidFactor) -> Result<(), CompileError> {
    let theta = f.quarter_turns() as f64 * core::f64::consts::FRAC_PI_4;
    Ok(state.apply_exponential(f.generator(), theta)?)
}

/// `⟨φ| Tr_high(|Ψ⟩⟨Ψ|) |φ⟩` with `φ` on the low qubits of `Ψ`.
pub fn reduced_fidelity(joint: &StateVector, phi: &StateVector) -> f64 {
    let low = phi.amplitudes().len();
    joint
        .amplitudes()
        .chunks(low)
        .map(|block| {
            let c: Complex64 = phi.amplitudes().iter().zip(block).map(|(x, y)| x.conj() * y).sum();
            c.norm_sqr()
        })
        .sum()
}

/// Sanity helper: the string measured by gadget `j`, for display.
pub fn gadget_measurement(regs: &Registers, j: usize, a: usize, b: usize) -> Result<MajoranaString, CompileError> {
    Ok(gadget(regs, j, a, b)?.measurement.string)
}
