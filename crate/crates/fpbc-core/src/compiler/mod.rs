//! Compilation of fermionic circuits into adaptive parity measurements on the magic register.

pub mod execute;
pub mod oracle;
pub mod passes;
pub mod sequence;

use alloc::vec::Vec;

use thiserror::Error;

use crate::braid::BraidError;
use crate::circuit::Diagnostic;
use crate::dense::DenseError;
use crate::majorana::AlgebraError;

pub use execute::{all_branches, compile, execute, Executor, FpbcProgram, Shot, StepKind, TraceEntry};
pub use passes::{compile_branch, StaticProgram, Step, StepStats};
pub use sequence::{insert_gadgets, prepend_dummies, Event, MeasurementOp, Origin, Registers, Sequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("invalid circuit ({} problem(s))", .0.len())]
    InvalidCircuit(Vec<Diagnostic>),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Dense(#[from] DenseError),
    #[error("assignment has {found} gadget outcomes, expected {expected}")]
    Assignment { expected: usize, found: usize },
    #[error("measurement {op}: R_n factor is not fixed by the initial computational state")]
    Restriction { op: usize },
    #[error("measurement {op} anticommutes with dummy {dummy} after the sweep")]
    NotCommuting { op: usize, dummy: usize },
}
