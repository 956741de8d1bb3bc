//! Compiled programs and their adaptive execution on the magic register.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::circuit::FermionicCircuit;
use crate::dense::{bit_char, prepare_magic_register, Distribution, StateVector};
use crate::majorana::MajoranaString;

use super::passes::{compile_branch, StaticProgram, Step, StepStats};
use super::sequence::{insert_gadgets, prepend_dummies, Registers, Sequence};
use super::CompileError;

/// A compiled circuit: the gadget-expanded sequence plus the program for the all-`+1` gadget branch.
///
/// Programs for other gadget outcomes share every step up to the first gadget that
/// came out differently; they are derived on demand during execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpbcProgram {
    pub sequence: Sequence,
    pub default_branch: StaticProgram,
}

pub fn compile(circuit: &FermionicCircuit) -> Result<FpbcProgram, CompileError> {
    let sequence = prepend_dummies(insert_gadgets(circuit)?);
    let default_branch = compile_branch(&sequence, &vec![1; circuit.t])?;
    Ok(FpbcProgram {
        sequence,
        default_branch,
    })
}

impl FpbcProgram {
    pub fn registers(&self) -> Registers {
        self.sequence.registers
    }

    pub fn branch(&self, assignment: &[i8]) -> Result<StaticProgram, CompileError> {
        compile_branch(&self.sequence, assignment)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Quantum,
    Coin,
    Derived,
}

/// What happened at one step of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub op: usize,
    pub kind: StepKind,
    pub measured: Option<MajoranaString>,
    pub outcome: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shot {
    pub bits: String,
    pub trace: Vec<TraceEntry>,
}

impl Shot {
    pub fn stats(&self) -> StepStats {
        let mut s = StepStats::default();
        for e in &self.trace {
            match e.kind {
                StepKind::Quantum => s.quantum += 1,
                StepKind::Coin => s.coin += 1,
                StepKind::Derived => s.derived += 1,
            }
        }
        s
    }
}

/// Runs a program, caching the branch programs it needs.
#[derive(Debug, Clone)]
pub struct Executor<'p> {
    program: &'p FpbcProgram,
    cache: BTreeMap<Vec<i8>, StaticProgram>,
}

/// Outcome bookkeeping shared by sampling and exact enumeration.
#[derive(Debug, Clone)]
struct Walk {
    lambda: Vec<i8>,
    mu: Vec<i8>,
    assignment: Vec<i8>,
}

fn sign_of(vars: &[usize], lambda: &[i8]) -> i8 {
    vars.iter().map(|&k| lambda[k]).product()
}

impl<'p> Executor<'p> {
    pub fn new(program: &'p FpbcProgram) -> Self {
        let mut cache = BTreeMap::new();
        cache.insert(
            program.default_branch.assignment.clone(),
            program.default_branch.clone(),
        );
        Self { program, cache }
    }

    pub fn program(&self) -> &FpbcProgram {
        self.program
    }

    /// Number of branch programs derived so far.
    pub fn branches_seen(&self) -> usize {
        self.cache.len()
    }

    fn step(&mut self, assignment: &[i8], op: usize) -> Result<Step, CompileError> {
        if !self.cache.contains_key(assignment) {
            let b = self.program.branch(assignment)?;
            self.cache.insert(assignment.to_vec(), b);
        }
        Ok(self.cache[assignment].steps[op].clone())
    }

    fn record(&self, walk: &mut Walk, op: usize, lambda: i8) {
        walk.lambda[op] = lambda;
        let t = self.program.registers().t;
        if op < t && walk.assignment[op] != lambda {
            walk.assignment[op] = lambda;
            for a in &mut walk.assignment[op + 1..] {
                *a = 1;
            }
        }
    }

    fn new_walk(&self) -> Walk {
        let regs = self.program.registers();
        Walk {
            lambda: vec![0; regs.op_count()],
            mu: vec![0; regs.op_count()],
            assignment: vec![1; regs.t],
        }
    }

    fn bits(&self, walk: &Walk) -> String {
        let t = self.program.registers().t;
        walk.lambda[t..].iter().map(|&l| bit_char(l)).collect()
    }

    /// One sample of the output bit string, with its step trace.
    pub fn run_shot<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Shot, CompileError> {
        let regs = self.program.registers();
        let mut state = prepare_magic_register(regs.t, regs.parity_sector)?;
        let mut walk = self.new_walk();
        let mut trace = Vec::with_capacity(regs.op_count());
        for op in 0..regs.op_count() {
            let step = self.step(&walk.assignment.clone(), op)?;
            let (kind, measured, lambda) = match &step {
                Step::Quantum { string, vars, .. } => {
                    let mu = state.measure_parity(string, rng)?;
                    walk.mu[op] = mu;
                    (
                        StepKind::Quantum,
                        Some(string.clone()),
                        mu * sign_of(vars, &walk.lambda),
                    )
                }
                Step::Coin { .. } => (StepKind::Coin, None, if rng.random::<bool>() { 1 } else { -1 }),
                Step::Derived { relation, vars, .. } => {
                    let mu = relation.evaluate(&walk.mu, regs.parity_sector);
                    walk.mu[op] = mu;
                    (StepKind::Derived, None, mu * sign_of(vars, &walk.lambda))
                }
            };
            self.record(&mut walk, op, lambda);
            trace.push(TraceEntry {
                op,
                kind,
                measured,
                outcome: lambda,
            });
        }
        Ok(Shot {
            bits: self.bits(&walk),
            trace,
        })
    }

    /// Exact output distribution, enumerating every measurement branch and coin.
    pub fn exact_distribution(&mut self) -> Result<Distribution, CompileError> {
        let regs = self.program.registers();
        let state = prepare_magic_register(regs.t, regs.parity_sector)?;
        let mut dist = Distribution::default();
        let walk = self.new_walk();
        self.enumerate(0, state, walk, 1.0, &mut dist)?;
        Ok(dist)
    }

    fn enumerate(
        &mut self,
        op: usize,
        state: StateVector,
        walk: Walk,
        p: f64,
        dist: &mut Distribution,
    ) -> Result<(), CompileError> {
        let regs = self.program.registers();
        if op == regs.op_count() {
            dist.add(self.bits(&walk), p);
            return Ok(());
        }
        match self.step(&walk.assignment, op)? {
            Step::Quantum { string, vars, .. } => {
                for mu in [1i8, -1] {
                    let (q, post) = state.project(&string, mu)?;
                    if let Some(post) = post {
                        let mut w = walk.clone();
                        w.mu[op] = mu;
                        let lambda = mu * sign_of(&vars, &w.lambda);
                        self.record(&mut w, op, lambda);
                        self.enumerate(op + 1, post, w, p * q, dist)?;
                    }
                }
            }
            Step::Coin { .. } => {
                for lambda in [1i8, -1] {
                    let mut w = walk.clone();
                    self.record(&mut w, op, lambda);
                    self.enumerate(op + 1, state.clone(), w, p * 0.5, dist)?;
                }
            }
            Step::Derived { relation, vars, .. } => {
                let mut w = walk;
                let mu = relation.evaluate(&w.mu, regs.parity_sector);
                w.mu[op] = mu;
                let lambda = mu * sign_of(&vars, &w.lambda);
                self.record(&mut w, op, lambda);
                self.enumerate(op + 1, state, w, p, dist)?;
            }
        }
        Ok(())
    }

    /// Largest quantum-measurement count over every branch program reachable so far.
    pub fn max_quantum_steps(&self) -> usize {
        self.cache.values().map(|b| b.stats().quantum).max().unwrap_or(0)
    }

    pub fn cached_branches(&self) -> impl Iterator<Item = &StaticProgram> {
        self.cache.values()
    }
}

/// Every branch program of a compiled circuit (`2^t` of them).
pub fn all_branches(program: &FpbcProgram) -> Result<Vec<StaticProgram>, CompileError> {
    let t = program.registers().t;
    (0u64..1 << t)
        .map(|mask| {
            let a: Vec<i8> = (0..t).map(|j| if mask >> j & 1 == 0 { 1 } else { -1 }).collect();
            program.branch(&a)
        })
        .collect()
}

/// Sample `shots` outputs sequentially from one generator.
pub fn execute<R: Rng + ?Sized>(program: &FpbcProgram, shots: usize, rng: &mut R) -> Result<Vec<String>, CompileError> {
    let mut ex = Executor::new(program);
    (0..shots).map(|_| ex.run_shot(rng).map(|s| s.bits)).collect()
}
