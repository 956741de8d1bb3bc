//! Exact state vectors over Majorana registers via a fixed Jordan–Wigner encoding.
//!
//! Qubit `k` (bit `k` of a basis index) carries `γ_{2k} = Z_{<k} X_k` and
//! `γ_{2k+1} = Z_{<k} Y_k` (0-based modes). With this choice the pair parity
//! `i γ_{2k} γ_{2k+1}` is `-Z_k`, so its `+1` eigenstate is `|1⟩`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::circuit::{FermionicCircuit, Gate};
use crate::majorana::{AlgebraError, MajoranaString};

/// Largest qubit count a dense state may use.
pub const MAX_QUBITS: usize = 26;

/// Probabilities within this distance of 0 or 1 are treated as certain.
pub const DETERMINISTIC_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DenseError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{qubits} qubits exceed the dense limit of {max}")]
    TooLarge { qubits: usize, max: usize },
    #[error("measured operator {0} is not a Hermitian parity-even string")]
    NotParity(String),
    #[error("outcome {0} has zero probability")]
    ImpossibleOutcome(i8),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
}

/// `i^phase X^x Z^z` on up to 64 qubits (`Z` acts first).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pauli {
    pub x: u64,
    pub z: u64,
    pub phase: u8,
}

impl Pauli {
    fn mul(self, o: Pauli) -> Pauli {
        let swap = if (self.z & o.x).count_ones() % 2 == 1 { 2 } else { 0 };
        Pauli {
            x: self.x ^ o.x,
            z: self.z ^ o.z,
            phase: (self.phase + o.phase + swap) % 4,
        }
    }

    /// Jordan–Wigner image of a Majorana string.
    pub fn of_string(s: &MajoranaString) -> Pauli {
        let mut acc = Pauli {
            x: 0,
            z: 0,
            phase: s.phase(),
        };
        for m in s.modes() {
            let k = m / 2;
            let chain = (1u64 << k) - 1;
            let g = if m % 2 == 0 {
                Pauli {
                    x: 1 << k,
                    z: chain,
                    phase: 0,
                }
            } else {
                Pauli {
                    x: 1 << k,
                    z: chain | (1 << k),
                    phase: 1,
                }
            };
            acc = acc.mul(g);
        }
        acc
    }
}

fn i_pow(p: u8) -> Complex64 {
    match p % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_modes: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Basis state `|bits⟩` on `num_modes / 2` qubits.
    pub fn basis(num_modes: usize, bits: u64) -> Result<Self, DenseError> {
        let qubits = num_modes / 2;
        if qubits > MAX_QUBITS {
            return Err(DenseError::TooLarge {
                qubits,
                max: MAX_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[bits as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { num_modes, amps })
    }

    /// Wrap raw amplitudes (normalized by the caller).
    pub fn from_amplitudes(num_modes: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), 1 << (num_modes / 2));
        Self { num_modes, amps }
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let n = libm::sqrt(self.norm_sqr());
        for a in &mut self.amps {
            *a /= n;
        }
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|²` for normalized states.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// `self ⊗ other`, with `self` on the low qubits.
    pub fn tensor(&self, other: &Self) -> Result<Self, DenseError> {
        let qubits = (self.num_modes + other.num_modes) / 2;
        if qubits > MAX_QUBITS {
            return Err(DenseError::TooLarge {
                qubits,
                max: MAX_QUBITS,
            });
        }
        let dim = self.amps.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); dim * other.amps.len()];
        for (j, b) in other.amps.iter().enumerate() {
            for (i, a) in self.amps.iter().enumerate() {
                amps[i + j * dim] = a * b;
            }
        }
        Ok(Self {
            num_modes: self.num_modes + other.num_modes,
            amps,
        })
    }

    fn check(&self, s: &MajoranaString) -> Result<(), DenseError> {
        if s.num_modes() != self.num_modes {
            return Err(AlgebraError::ModeMismatch {
                left: self.num_modes,
                right: s.num_modes(),
            }
            .into());
        }
        Ok(())
    }

    fn string_image(&self, s: &MajoranaString) -> Vec<Complex64> {
        let p = Pauli::of_string(s);
        let ph = i_pow(p.phase);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let sign = if (p.z & b as u64).count_ones() % 2 == 1 {
                -ph
            } else {
                ph
            };
            out[b ^ p.x as usize] = a * sign;
        }
        out
    }

    /// `s|ψ⟩`.
    pub fn apply_string(&mut self, s: &MajoranaString) -> Result<(), DenseError> {
        self.check(s)?;
        self.amps = self.string_image(s);
        Ok(())
    }

    /// `exp(θ·s)|ψ⟩` for `s² = ±𝟙`.
    pub fn apply_exponential(&mut self, s: &MajoranaString, theta: f64) -> Result<(), DenseError> {
        self.check(s)?;
        let (c, d) = if s.is_hermitian() {
            (libm::cosh(theta), libm::sinh(theta))
        } else {
            (libm::cos(theta), libm::sin(theta))
        };
        let image = self.string_image(s);
        for (a, b) in self.amps.iter_mut().zip(image) {
            *a = *a * c + b * d;
        }
        Ok(())
    }

    /// `⟨ψ|s|ψ⟩` (real for Hermitian `s`).
    pub fn expectation(&self, s: &MajoranaString) -> Result<Complex64, DenseError> {
        self.check(s)?;
        let image = self.string_image(s);
        Ok(self.amps.iter().zip(&image).map(|(a, b)| a.conj() * b).sum())
    }

    fn check_parity(&self, m: &MajoranaString) -> Result<(), DenseError> {
        self.check(m)?;
        if !m.is_parity_operator() {
            return Err(DenseError::NotParity(alloc::format!("{m}")));
        }
        Ok(())
    }

    /// Probability of `outcome` and the normalized post-measurement state (if the probability is nonzero).
    pub fn project(&self, m: &MajoranaString, outcome: i8) -> Result<(f64, Option<Self>), DenseError> {
        self.check_parity(m)?;
        let image = self.string_image(m);
        let sign = outcome as f64;
        let amps: Vec<Complex64> = self
            .amps
            .iter()
            .zip(&image)
            .map(|(a, b)| (a + b * sign) * 0.5)
            .collect();
        let mut post = Self {
            num_modes: self.num_modes,
            amps,
        };
        let p = post.norm_sqr();
        if p <= DETERMINISTIC_THRESHOLD {
            return Ok((0.0, None));
        }
        post.normalize();
        Ok((p.min(1.0), Some(post)))
    }

    /// Born-rule measurement; no randomness is drawn when the outcome is certain.
    pub fn measure_parity<R: Rng + ?Sized>(&mut self, m: &MajoranaString, rng: &mut R) -> Result<i8, DenseError> {
        let (p_plus, plus) = self.project(m, 1)?;
        let outcome = if p_plus >= 1.0 - DETERMINISTIC_THRESHOLD {
            1
        } else if p_plus <= DETERMINISTIC_THRESHOLD {
            -1
        } else if rng.random::<f64>() < p_plus {
            1
        } else {
            -1
        };
        let post = if outcome == 1 { plus } else { self.project(m, -1)?.1 };
        *self = post.ok_or(DenseError::ImpossibleOutcome(outcome))?;
        Ok(outcome)
    }
}

/// `X_j = X^{(qubit)}_j X^{(qubit)}_t` on `R_t` (0-based `j < t`) written as a Majorana string.
pub fn magic_stabilizer(t: usize, j: usize) -> MajoranaString {
    let modes = 2 * t + 2;
    let qubit_x = |k: usize| {
        let mut s = MajoranaString::gamma(modes, 2 * k);
        for r in (0..k).rev() {
            // Z_r = -i γ_{2r} γ_{2r+1}
            s = MajoranaString::pair_parity(modes, 2 * r, 2 * r + 1)
                .negate()
                .mul_unchecked(&s);
        }
        s
    };
    qubit_x(j).mul_unchecked(&qubit_x(t))
}

/// `exp(π/8 γ_a γ_b)` generator for 0-based modes in the given order.
pub fn t2_generator(num_modes: usize, a: usize, b: usize) -> MajoranaString {
    MajoranaString::gamma(num_modes, a).mul_unchecked(&MajoranaString::gamma(num_modes, b))
}

/// `|ψ^X⟩`: the joint `+1` eigenstate of every `X_j` with total parity `parity_sector`.
pub fn prepare_stabilizer_register(t: usize, parity_sector: i8) -> Result<StateVector, DenseError> {
    let modes = 2 * t + 2;
    let qubits = t + 1;
    if qubits > MAX_QUBITS {
        return Err(DenseError::TooLarge {
            qubits,
            max: MAX_QUBITS,
        });
    }
    let amp = Complex64::new(libm::pow(2.0, -(qubits as f64) / 2.0), 0.0);
    let plus = StateVector {
        num_modes: modes,
        amps: vec![amp; 1 << qubits],
    };
    let (_, state) = plus.project(&MajoranaString::total_parity(modes), parity_sector)?;
    Ok(state.expect("both parity sectors overlap |+…+⟩"))
}

/// `|ψ^(t)⟩ = T_{2,12} T_{2,34} ⋯ T_{2,2t-1 2t} |ψ^X⟩` on `2t + 2` modes.
pub fn prepare_magic_register(t: usize, parity_sector: i8) -> Result<StateVector, DenseError> {
    let mut state = prepare_stabilizer_register(t, parity_sector)?;
    for j in 0..t {
        state.apply_exponential(&t2_generator(2 * t + 2, 2 * j, 2 * j + 1), core::f64::consts::FRAC_PI_8)?;
    }
    Ok(state)
}

/// `R_n` in the `+1` eigenstate of every `s_j^(c)` with `Γ_{2n+2} = parity_sector`.
pub fn prepare_computational_register(n: usize, parity_sector: i8) -> Result<StateVector, DenseError> {
    let modes = 2 * n + 2;
    let mut bits = (1u64 << n) - 1;
    if parity_sector > 0 {
        bits |= 1 << n;
    }
    let state = StateVector::basis(modes, bits)?;
    debug_assert!(
        (state.expectation(&MajoranaString::total_parity(modes)).unwrap().re - parity_sector as f64).abs() < 1e-12
    );
    Ok(state)
}

/// Output distribution keyed by bit strings, character `j` holding `b_{j+1}` (`1` ↔ outcome `+1`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Distribution {
    pub probs: BTreeMap<String, f64>,
}

impl Distribution {
    pub fn add(&mut self, key: String, p: f64) {
        *self.probs.entry(key).or_insert(0.0) += p;
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn get(&self, key: &str) -> f64 {
        self.probs.get(key).copied().unwrap_or(0.0)
    }

    /// `½ Σ |p - q|` over the union of supports.
    pub fn total_variation(&self, other: &Self) -> f64 {
        let mut tv = 0.0;
        for (k, p) in &self.probs {
            tv += libm::fabs(p - other.get(k));
        }
        for (k, q) in &other.probs {
            if !self.probs.contains_key(k) {
                tv += libm::fabs(*q);
            }
        }
        tv / 2.0
    }

    /// Empirical distribution of sampled bit strings.
    pub fn from_counts<'a>(samples: impl IntoIterator<Item = &'a str>) -> Self {
        let mut d = Self::default();
        let mut total = 0usize;
        for s in samples {
            d.add(s.into(), 1.0);
            total += 1;
        }
        for v in d.probs.values_mut() {
            *v /= total as f64;
        }
        d
    }
}

pub fn bit_char(outcome: i8) -> char {
    if outcome > 0 {
        '1'
    } else {
        '0'
    }
}

/// Enumerate the outcomes of commuting parity measurements on `state`, accumulating into `dist`.
pub fn enumerate_outcomes(
    state: &StateVector,
    measurements: &[MajoranaString],
    prefix: &mut String,
    weight: f64,
    dist: &mut Distribution,
) -> Result<(), DenseError> {
    let Some((m, rest)) = measurements.split_first() else {
        dist.add(prefix.clone(), weight);
        return Ok(());
    };
    for outcome in [1i8, -1] {
        let (p, post) = state.project(m, outcome)?;
        if let Some(post) = post {
            prefix.push(bit_char(outcome));
            enumerate_outcomes(&post, rest, prefix, weight * p, dist)?;
            prefix.pop();
        }
    }
    Ok(())
}

/// Apply the circuit's gates to `R_n` directly (`T₂` as unitaries).
pub fn evolve_circuit(circuit: &FermionicCircuit) -> Result<StateVector, DenseError> {
    let diags = circuit.validate();
    if let Some(d) = diags.first() {
        return Err(DenseError::InvalidCircuit(alloc::format!("{d}")));
    }
    let modes = circuit.rn_modes();
    let mut state = prepare_computational_register(circuit.n, circuit.parity_sector)?;
    for g in &circuit.gates {
        match g {
            Gate::Braid { string, quarter_turns } => {
                state.apply_exponential(string, *quarter_turns as f64 * core::f64::consts::FRAC_PI_4)?
            }
            Gate::T2 { a, b } => state.apply_exponential(&t2_generator(modes, *a, *b), core::f64::consts::FRAC_PI_8)?,
        }
    }
    Ok(state)
}

/// Exact output distribution of the gadget-free circuit.
pub fn simulate_circuit_exact(circuit: &FermionicCircuit) -> Result<Distribution, DenseError> {
    let state = evolve_circuit(circuit)?;
    let finals: Vec<MajoranaString> = (0..circuit.n).map(|j| circuit.computational_parity(j)).collect();
    let mut dist = Distribution::default();
    enumerate_outcomes(&state, &finals, &mut String::new(), 1.0, &mut dist)?;
    Ok(dist)
}

/// Draw `shots` samples of the circuit's output by direct simulation.
pub fn sample_circuit<R: Rng + ?Sized>(circuit: &FermionicCircuit, rng: &mut R) -> Result<String, DenseError> {
    let mut state = evolve_circuit(circuit)?;
    let mut out = String::new();
    for j in 0..circuit.n {
        out.push(bit_char(state.measure_parity(&circuit.computational_parity(j), rng)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::random_circuit;
    use crate::testutil::{dense_of, jw_gamma};
    use nalgebra::DVector;
    use proptest::prelude::{any, prop_assert, proptest};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(text: &str, n: usize) -> MajoranaString {
        MajoranaString::parse(text, n).unwrap()
    }

    fn random_state(modes: usize, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..1 << (modes / 2))
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let mut s = StateVector::from_amplitudes(modes, amps);
        s.normalize();
        s
    }

    #[test]
    fn string_action_matches_kron_oracle() {
        for modes in [2usize, 4, 6, 8] {
            for k in 0..modes {
                let state = random_state(modes, k as u64);
                let mut out = state.clone();
                out.apply_string(&MajoranaString::gamma(modes, k)).unwrap();
                let v = DVector::from_vec(state.amplitudes().to_vec());
                let want = jw_gamma(modes, k) * v;
                for (a, b) in out.amplitudes().iter().zip(want.iter()) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn pauli_form_matches_dense(bits in proptest::collection::vec(any::<bool>(), 8), phase in 0u8..4) {
            let s = MajoranaString::from_parts(
                crate::bits::BitSet::from_indices(8, bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)),
                phase,
            );
            let state = random_state(8, 3);
            let mut out = state.clone();
            out.apply_string(&s).unwrap();
            let want = dense_of(&s) * DVector::from_vec(state.amplitudes().to_vec());
            for (a, b) in out.amplitudes().iter().zip(want.iter()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_and_parity_actions() {
        let mut s = random_state(6, 1);
        let before = s.clone();
        s.apply_string(&MajoranaString::identity(6)).unwrap();
        assert_eq!(s, before);
        let mut m = prepare_magic_register(2, -1).unwrap();
        let before = m.clone();
        m.apply_string(&MajoranaString::total_parity(6)).unwrap();
        assert!((m.inner(&before).re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn stabilizers_have_the_required_relations() {
        let t = 3;
        let modes = 2 * t + 2;
        let x: Vec<_> = (0..t).map(|j| magic_stabilizer(t, j)).collect();
        for j in 0..t {
            assert!(x[j].is_parity_operator());
            for k in 0..t {
                let s = MajoranaString::pair_parity(modes, 2 * k, 2 * k + 1);
                assert_eq!(s.commutes(&x[j]).unwrap(), j != k);
                assert!(x[j].commutes(&x[k]).unwrap());
            }
            let pauli = Pauli::of_string(&x[j]);
            assert_eq!((pauli.x, pauli.z, pauli.phase), ((1 << j) | (1 << t), 0, 0));
        }
        let state = prepare_stabilizer_register(t, 1).unwrap();
        for xj in &x {
            assert!((state.expectation(xj).unwrap().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn magic_register_single_mode_values() {
        let state = prepare_magic_register(1, 1).unwrap();
        let s1 = p("i g1 g2", 4);
        assert!(state.expectation(&s1).unwrap().norm() < 1e-12);
        let (prob, _) = state.project(&s1, 1).unwrap();
        assert!((prob - 0.5).abs() < 1e-12);
        let x1 = state.expectation(&magic_stabilizer(1, 0)).unwrap().re;
        assert!((x1 - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        for sector in [1i8, -1] {
            let g = prepare_magic_register(1, sector)
                .unwrap()
                .expectation(&MajoranaString::total_parity(4))
                .unwrap();
            assert!((g.re - sector as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn exponential_angles_add() {
        let g = p("g1 g3", 6);
        let mut a = random_state(6, 4);
        let mut b = a.clone();
        a.apply_exponential(&g, core::f64::consts::FRAC_PI_8).unwrap();
        a.apply_exponential(&g, core::f64::consts::FRAC_PI_8).unwrap();
        b.apply_exponential(&g, core::f64::consts::FRAC_PI_4).unwrap();
        assert!((a.fidelity(&b) - 1.0).abs() < 1e-12);
        let mut c = a.clone();
        c.apply_exponential(&g, core::f64::consts::FRAC_PI_4).unwrap();
        let mut d = random_state(6, 4);
        d.apply_string(&g).unwrap();
        assert!((c.fidelity(&d) - 1.0).abs() < 1e-12);
        assert!((c.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_collapses_and_repeats() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = prepare_magic_register(1, 1).unwrap();
        let m = p("i g1 g2", 4);
        let first = s.measure_parity(&m, &mut rng).unwrap();
        let snapshot = s.clone();
        for _ in 0..5 {
            assert_eq!(s.measure_parity(&m, &mut rng).unwrap(), first);
        }
        assert!((s.fidelity(&snapshot) - 1.0).abs() < 1e-12);
        assert!(matches!(
            s.measure_parity(&p("g1 g2", 4), &mut rng),
            Err(DenseError::NotParity(_))
        ));
        assert!(matches!(
            s.measure_parity(&p("g1", 4), &mut rng),
            Err(DenseError::NotParity(_))
        ));
    }

    #[test]
    fn deterministic_measurement_draws_no_randomness() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut reference = rng.clone();
        let mut s = prepare_computational_register(2, 1).unwrap();
        assert_eq!(s.measure_parity(&p("i g1 g2", 6), &mut rng).unwrap(), 1);
        assert_eq!(rng.random::<u64>(), reference.random::<u64>());
    }

    #[test]
    fn born_frequencies_match_exact_probability() {
        let state = prepare_magic_register(1, 1).unwrap();
        let m = magic_stabilizer(1, 0);
        let (p_plus, _) = state.project(&m, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let shots = 10_000;
        let hits = (0..shots)
            .filter(|_| state.clone().measure_parity(&m, &mut rng).unwrap() == 1)
            .count() as f64;
        let sigma = libm::sqrt(p_plus * (1.0 - p_plus) / shots as f64);
        assert!((hits / shots as f64 - p_plus).abs() < 3.0 * sigma);
    }

    #[test]
    fn empty_circuit_outputs_all_ones() {
        let c = FermionicCircuit {
            n: 3,
            t: 0,
            parity_sector: 1,
            gates: Vec::new(),
        };
        let d = simulate_circuit_exact(&c).unwrap();
        assert_eq!(d.probs.len(), 1);
        assert!((d.get("111") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_t2_inside_one_mode() {
        let c = FermionicCircuit {
            n: 1,
            t: 1,
            parity_sector: 1,
            gates: alloc::vec![Gate::T2 { a: 0, b: 1 }],
        };
        // exp(π/8 γ1γ2) commutes with s1 so nothing changes; a cross-pair T2 rotates instead
        assert!((simulate_circuit_exact(&c).unwrap().get("1") - 1.0).abs() < 1e-12);
        let c = FermionicCircuit {
            gates: alloc::vec![Gate::T2 { a: 1, b: 2 }],
            ..c
        };
        let d = simulate_circuit_exact(&c).unwrap();
        let want = libm::cos(core::f64::consts::FRAC_PI_8).powi(2);
        assert!((d.get("1") - want).abs() < 1e-12);
    }

    #[test]
    fn exact_distributions_are_normalized() {
        for seed in 0..10 {
            let d = simulate_circuit_exact(&random_circuit(3, 2, 6, seed)).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-10);
        }
    }
}
