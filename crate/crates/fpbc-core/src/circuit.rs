//! Fermionic circuits on the computational register `R_n` with `T₂` gates served by `R_t`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::braid::{random_generator, BraidFactor};
use crate::majorana::MajoranaString;
use crate::rng::substream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    /// `exp(quarter_turns · π/4 · string)`; the string must be anti-Hermitian and even.
    Braid { string: MajoranaString, quarter_turns: i8 },
    /// `exp(π/8 γ_a γ_b)` on `R_n`, 0-based mode indices.
    T2 { a: usize, b: usize },
}

impl Gate {
    pub fn braid(factor: &BraidFactor) -> Self {
        Gate::Braid {
            string: factor.generator().clone(),
            quarter_turns: factor.quarter_turns(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermionicCircuit {
    pub n: usize,
    pub t: usize,
    /// Eigenvalue of both `Γ_{2n+2}` and `Γ_{2t+2}`.
    pub parity_sector: i8,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    EmptyRegister,
    BadSector(i8),
    BraidModes { expected: usize, found: usize },
    BraidOdd,
    BraidIdentity,
    BraidHermitian,
    BadAngle(i8),
    T2Duplicate(usize),
    T2OutOfRange(usize),
    T2Count { declared: usize, found: usize },
}

/// A validation finding, tied to a gate index when it concerns one gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub gate: Option<usize>,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = self.gate {
            write!(f, "gate {g}: ")?;
        }
        match &self.kind {
            DiagnosticKind::EmptyRegister => write!(f, "n must be at least 1"),
            DiagnosticKind::BadSector(s) => write!(f, "parity_sector must be +1 or -1, got {s}"),
            DiagnosticKind::BraidModes { expected, found } => {
                write!(f, "braid acts on {found} modes, register has {expected}")
            }
            DiagnosticKind::BraidOdd => write!(f, "braid generator has odd weight (not parity-preserving)"),
            DiagnosticKind::BraidIdentity => write!(f, "braid generator is the identity"),
            DiagnosticKind::BraidHermitian => {
                write!(f, "braid generator is Hermitian, so the exponential is not unitary")
            }
            DiagnosticKind::BadAngle(q) => write!(f, "braid angle must be +1 or -1 quarter turns, got {q}"),
            DiagnosticKind::T2Duplicate(a) => write!(f, "T2 uses mode {} twice", a + 1),
            DiagnosticKind::T2OutOfRange(a) => write!(f, "T2 mode {} is outside R_n", a + 1),
            DiagnosticKind::T2Count { declared, found } => {
                write!(f, "t = {declared} but the circuit has {found} T2 gates")
            }
        }
    }
}

impl FermionicCircuit {
    /// Majoranas in `R_n`.
    pub fn rn_modes(&self) -> usize {
        2 * self.n + 2
    }

    /// Majoranas in `R_t`.
    pub fn rt_modes(&self) -> usize {
        2 * self.t + 2
    }

    /// Majoranas in the combined register, `R_n` first.
    pub fn total_modes(&self) -> usize {
        self.rn_modes() + self.rt_modes()
    }

    pub fn t2_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::T2 { .. })).count()
    }

    /// The `T₂` gates in order, as `(a, b)`.
    pub fn t2_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.gates.iter().filter_map(|g| match g {
            Gate::T2 { a, b } => Some((*a, *b)),
            _ => None,
        })
    }

    /// All invariant violations; empty iff the circuit is well formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut push = |gate, kind| out.push(Diagnostic { gate, kind });
        if self.n == 0 {
            push(None, DiagnosticKind::EmptyRegister);
        }
        if self.parity_sector != 1 && self.parity_sector != -1 {
            push(None, DiagnosticKind::BadSector(self.parity_sector));
        }
        let modes = self.rn_modes();
        for (i, g) in self.gates.iter().enumerate() {
            match g {
                Gate::Braid { string, quarter_turns } => {
                    if string.num_modes() != modes {
                        push(
                            Some(i),
                            DiagnosticKind::BraidModes {
                                expected: modes,
                                found: string.num_modes(),
                            },
                        );
                        continue;
                    }
                    if string.is_identity() {
                        push(Some(i), DiagnosticKind::BraidIdentity);
                    } else if !string.is_even() {
                        push(Some(i), DiagnosticKind::BraidOdd);
                    } else if string.is_hermitian() {
                        push(Some(i), DiagnosticKind::BraidHermitian);
                    }
                    if *quarter_turns != 1 && *quarter_turns != -1 {
                        push(Some(i), DiagnosticKind::BadAngle(*quarter_turns));
                    }
                }
                Gate::T2 { a, b } => {
                    for x in [a, b] {
                        if *x >= modes {
                            push(Some(i), DiagnosticKind::T2OutOfRange(*x));
                        }
                    }
                    if a == b {
                        push(Some(i), DiagnosticKind::T2Duplicate(*a));
                    }
                }
            }
        }
        let found = self.t2_count();
        if found != self.t {
            push(
                None,
                DiagnosticKind::T2Count {
                    declared: self.t,
                    found,
                },
            );
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Final measurement `s_j^(c) = i γ_{2j-1} γ_{2j}` on `R_n` (0-based `j`).
    pub fn computational_parity(&self, j: usize) -> MajoranaString {
        MajoranaString::pair_parity(self.rn_modes(), 2 * j, 2 * j + 1)
    }
}

/// Deterministic random circuit: `braid_count` braids on `R_n` and `t` `T₂` gates at random positions.
pub fn random_circuit(n: usize, t: usize, braid_count: usize, seed: u64) -> FermionicCircuit {
    assert!(n >= 1, "n must be at least 1");
    let mut rng = substream(seed, "random_circuit", ((n as u64) << 32) | t as u64);
    let modes = 2 * n + 2;
    let mut kinds: Vec<bool> = (0..braid_count).map(|_| true).chain((0..t).map(|_| false)).collect();
    for i in (1..kinds.len()).rev() {
        let j = rng.random_range(0..=i);
        kinds.swap(i, j);
    }
    let gates = kinds
        .into_iter()
        .map(|is_braid| {
            if is_braid {
                Gate::Braid {
                    string: random_generator(modes, modes, &mut rng),
                    quarter_turns: if rng.random::<bool>() { 1 } else { -1 },
                }
            } else {
                let a = rng.random_range(0..modes);
                let mut b = rng.random_range(0..modes - 1);
                if b >= a {
                    b += 1;
                }
                Gate::T2 { a, b }
            }
        })
        .collect();
    FermionicCircuit {
        n,
        t,
        parity_sector: 1,
        gates,
    }
}

/// Human-readable one-line-per-gate listing.
pub fn describe(circuit: &FermionicCircuit) -> String {
    let mut s = alloc::format!("n={} t={} sector={:+}\n", circuit.n, circuit.t, circuit.parity_sector);
    for g in &circuit.gates {
        match g {
            Gate::Braid { string, quarter_turns } => {
                s += &alloc::format!("braid {string} {quarter_turns:+}\n");
            }
            Gate::T2 { a, b } => s += &alloc::format!("t2 {} {}\n", a + 1, b + 1),
        }
    }
    s
}
