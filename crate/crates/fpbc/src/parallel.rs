//! Thread-pool setup and order-independent parallel drivers.

use rayon::prelude::*;

use fpbc_core::braid_cost::{chunk_count, estimate_chunk, CostError, CubicLattice, Tally};
use fpbc_core::circuit::FermionicCircuit;
use fpbc_core::compiler::{CompileError, Executor, FpbcProgram};
use fpbc_core::dense::{sample_circuit, DenseError};
use fpbc_core::rng::substream;

/// Shots per independently seeded chunk.
pub const SHOT_CHUNK: usize = 1024;

/// Cap the global pool at `FPBC_THREADS` when set. Safe to call more than once.
pub fn init_threads() {
    if let Some(n) = std::env::var("FPBC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second initialization fails harmlessly
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn chunks(shots: usize) -> impl IndexedParallelIterator<Item = (u64, usize)> {
    (0..shots.div_ceil(SHOT_CHUNK))
        .into_par_iter()
        .map(move |k| (k as u64, SHOT_CHUNK.min(shots - k * SHOT_CHUNK)))
}

/// Run a compiled program; chunk `k` draws from substream `("run", k)`.
pub fn run_program(program: &FpbcProgram, shots: usize, seed: u64) -> Result<Vec<String>, CompileError> {
    let parts: Vec<Vec<String>> = chunks(shots)
        .map(|(k, count)| {
            let mut rng = substream(seed, "run", k);
            let mut ex = Executor::new(program);
            (0..count).map(|_| ex.run_shot(&mut rng).map(|s| s.bits)).collect()
        })
        .collect::<Result<_, _>>()?;
    Ok(parts.concat())
}

/// Sample the circuit directly on the dense simulator; chunk `k` uses substream `("oracle", k)`.
pub fn sample_dense(circuit: &FermionicCircuit, shots: usize, seed: u64) -> Result<Vec<String>, DenseError> {
    let parts: Vec<Vec<String>> = chunks(shots)
        .map(|(k, count)| {
            let mut rng = substream(seed, "oracle", k);
            (0..count).map(|_| sample_circuit(circuit, &mut rng)).collect()
        })
        .collect::<Result<_, _>>()?;
    Ok(parts.concat())
}

pub fn estimate_fraction_parallel(
    lattice: &CubicLattice,
    big_r: usize,
    trials: u64,
    seed: u64,
) -> Result<Tally, CostError> {
    (0..chunk_count(trials))
        .into_par_iter()
        .map(|k| estimate_chunk(lattice, big_r, seed, k, trials))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}
