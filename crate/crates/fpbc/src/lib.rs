//! File formats, manifests, parallel drivers and the command-line front end over `fpbc-core`.

pub mod cli;
pub mod formats;
pub mod manifest;
pub mod parallel;
pub mod selftest;

pub use fpbc_core as core;
