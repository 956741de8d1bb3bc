//! Fermion-parity-based computation: algebra, synthesis, compilation and device models.
#![no_std]

extern crate alloc;

pub mod bits;
pub mod braid;
pub mod braid_cost;
pub mod circuit;
pub mod compiler;
pub mod dense;
pub mod device;
pub mod gf2;
pub mod layout;
pub mod majorana;
pub mod rng;

#[cfg(test)]
mod testutil;

pub use bits::BitSet;
pub use gf2::{find_dependency, DependencyTracker, SignedRelation};
pub use majorana::{conjugate_by_braid, AlgebraError, MajoranaString};
