//! Tri-junction algebra, low-energy projection and dispersive readout of the top-transmon.
//!
//! Energies and frequencies share one unit with `ħ = 1`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

use crate::majorana::MajoranaString;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeviceError {
    #[error("coupling vector has zero length")]
    ZeroCoupling,
    #[error("string acts on {found} modes, expected {expected} (three per tri-junction)")]
    Modes { expected: usize, found: usize },
    #[error("transmon frequency equals the resonator frequency; the dispersive expansion is undefined")]
    Resonant,
    #[error("{0} must be positive and finite")]
    Parameter(&'static str),
}

pub type Mat = DMatrix<Complex64>;
pub type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn norm(a: &Vec3) -> f64 {
    libm::sqrt(dot(a, a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriJunctionCouplings {
    pub e_m: f64,
    pub a: Vec3,
}

impl TriJunctionCouplings {
    pub fn new(e_m: f64, a: Vec3) -> Self {
        Self { e_m, a }
    }

    pub fn norm(&self) -> f64 {
        norm(&self.a)
    }
}

/// `(Â, Â₊, Â₋)`, orthonormal with `Â₊ × Â₋ = Â`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub a_hat: Vec3,
    pub plus: Vec3,
    pub minus: Vec3,
}

pub fn frame_decomposition(a: &Vec3) -> Result<Frame, DeviceError> {
    let n = norm(a);
    if n == 0.0 || !n.is_finite() {
        return Err(DeviceError::ZeroCoupling);
    }
    let a_hat = scale(a, 1.0 / n);
    // least aligned axis gives the best-conditioned completion
    let k = (0..3)
        .min_by(|&i, &j| libm::fabs(a_hat[i]).total_cmp(&libm::fabs(a_hat[j])))
        .unwrap();
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let p = dot(&e, &a_hat);
    let plus = [e[0] - p * a_hat[0], e[1] - p * a_hat[1], e[2] - p * a_hat[2]];
    let plus = scale(&plus, 1.0 / norm(&plus));
    let minus = cross(&a_hat, &plus);
    Ok(Frame { a_hat, plus, minus })
}

fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// Jordan–Wigner Majorana matrices on `num_modes / 2` qubits, qubit `k` being bit `k` of the basis index.
pub fn majorana_matrices(num_modes: usize) -> Vec<Mat> {
    assert!(num_modes.is_multiple_of(2), "Jordan-Wigner needs an even mode count");
    let q = num_modes / 2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let id = Mat::identity(2, 2);
    let x = Mat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
    let y = Mat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
    let z = Mat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
    let mut out = Vec::with_capacity(num_modes);
    for k in 0..q {
        for p in [&x, &y] {
            // highest qubit is the leftmost kron factor
            let mut m = Mat::identity(1, 1);
            for j in (0..q).rev() {
                let f = if j < k {
                    &z
                } else if j == k {
                    p
                } else {
                    &id
                };
                m = kron(&m, f);
            }
            out.push(m);
        }
    }
    out
}

/// Dense matrix of a Majorana string given the mode matrices.
pub fn string_matrix(s: &MajoranaString, gammas: &[Mat]) -> Mat {
    let dim = gammas[0].nrows();
    let mut m = Mat::identity(dim, dim);
    for k in s.modes() {
        m *= &gammas[k];
    }
    m * Complex64::i().powi(s.phase() as i32)
}

/// `(E_M/2) Σ ε_abc A_a (i γ_b γ_c)` for the three junction modes given.
pub fn trijunction_hamiltonian(c: &TriJunctionCouplings, g: [&Mat; 3]) -> Mat {
    let dim = g[0].nrows();
    let mut h = Mat::zeros(dim, dim);
    for (a, b, cc, sign) in [
        (0, 1, 2, 1.0),
        (1, 2, 0, 1.0),
        (2, 0, 1, 1.0),
        (0, 2, 1, -1.0),
        (2, 1, 0, -1.0),
        (1, 0, 2, -1.0),
    ] {
        let term = g[b] * g[cc] * Complex64::new(0.0, sign * c.a[a] * c.e_m / 2.0);
        h += term;
    }
    h
}

fn combine(g: [&Mat; 3], v: &Vec3) -> Mat {
    g[0] * Complex64::from(v[0]) + g[1] * Complex64::from(v[1]) + g[2] * Complex64::from(v[2])
}

/// Eigenvalues of one tri-junction, built on its three modes plus a spectator, ascending.
pub fn trijunction_spectrum(c: &TriJunctionCouplings) -> Vec<f64> {
    let g = majorana_matrices(4);
    let h = trijunction_hamiltonian(c, [&g[0], &g[1], &g[2]]);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `γ_{j,0}`, `γ_{j,+}`, `γ_{j,-}` as matrices.
pub fn frame_modes(c: &TriJunctionCouplings, g: [&Mat; 3]) -> Result<[Mat; 3], DeviceError> {
    let f = frame_decomposition(&c.a)?;
    Ok([combine(g, &f.a_hat), combine(g, &f.plus), combine(g, &f.minus)])
}

/// `P₋ = ∏_j (1 − i γ_{j,+} γ_{j,-})/2` on `3J` junction modes (plus a spectator when `J` is odd).
pub fn projector_matrix(couplings: &[TriJunctionCouplings]) -> Result<(Mat, Vec<Mat>), DeviceError> {
    let modes = junction_register_modes(couplings.len());
    let g = majorana_matrices(modes);
    let dim = g[0].nrows();
    let mut p = Mat::identity(dim, dim);
    for (j, c) in couplings.iter().enumerate() {
        let [_, plus, minus] = frame_modes(c, [&g[3 * j], &g[3 * j + 1], &g[3 * j + 2]])?;
        let pj = (Mat::identity(dim, dim) - plus * minus * Complex64::i()) * Complex64::from(0.5);
        p *= pj;
    }
    Ok((p, g))
}

/// Majorana count used to hold `junctions` tri-junctions on whole qubits.
pub fn junction_register_modes(junctions: usize) -> usize {
    let m = 3 * junctions;
    m + m % 2
}

/// `P₋ s P₋†` written as `scalar · string`, `string` over the `γ_{j,0}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projected {
    pub string: MajoranaString,
    pub scalar: f64,
}

/// Project a string on the junction modes (mode `3j + a` is `γ_{j,a+1}`) to the zero modes.
pub fn project_low_energy(s: &MajoranaString, couplings: &[TriJunctionCouplings]) -> Result<Projected, DeviceError> {
    let j_count = couplings.len();
    if s.num_modes() != 3 * j_count {
        return Err(DeviceError::Modes {
            expected: 3 * j_count,
            found: s.num_modes(),
        });
    }
    let mut phase = s.phase() as u32;
    let mut scalar = 1.0;
    let mut zero_modes = Vec::new();
    for (j, c) in couplings.iter().enumerate() {
        let legs: Vec<usize> = (0..3).filter(|&a| s.support().contains(3 * j + a)).collect();
        let n = c.norm();
        if n == 0.0 {
            return Err(DeviceError::ZeroCoupling);
        }
        match legs.as_slice() {
            [] => {}
            [a] => {
                scalar *= c.a[*a] / n;
                zero_modes.push(j);
            }
            // γ_a γ_b = −i (i γ_a γ_b)
            [a, b] => {
                let cc = 3 - a - b;
                let eps = if (*a, *b) == (0, 2) { -1.0 } else { 1.0 };
                scalar *= -eps * c.a[cc] / n;
                phase += 3;
            }
            // γ_1 γ_2 γ_3 = −i (i γ_1 γ_2 γ_3) ↦ −i (−γ_{j,0})
            _ => {
                phase += 1;
                zero_modes.push(j);
            }
        }
    }
    let string = MajoranaString::from_modes(j_count, zero_modes).with_phase((phase % 4) as u8);
    Ok(Projected { string, scalar })
}

/// Matrix of a projected result, with `γ_{j,0}` built from the frame.
pub fn projected_matrix(p: &Projected, couplings: &[TriJunctionCouplings], g: &[Mat]) -> Result<Mat, DeviceError> {
    let dim = g[0].nrows();
    let mut m = Mat::identity(dim, dim);
    for k in p.string.modes() {
        let [zero, _, _] = frame_modes(&couplings[k], [&g[3 * k], &g[3 * k + 1], &g[3 * k + 2]])?;
        m *= zero;
    }
    Ok(m * Complex64::i().powi(p.string.phase() as i32) * Complex64::from(p.scalar))
}

/// `δε_m` in the large-`E_J/E_C` limit: `E_C 2^{4m+5}/m! √(2/π) (E_J/2E_C)^{m/2+3/4} e^{−√(8E_J/E_C)}`.
pub fn charge_dispersion(e_j: f64, e_c: f64, m: usize) -> f64 {
    let fact: f64 = (1..=m).map(|k| k as f64).product();
    let mf = m as f64;
    e_c * libm::pow(2.0, 4.0 * mf + 5.0) / fact
        * libm::sqrt(2.0 / core::f64::consts::PI)
        * libm::pow(e_j / (2.0 * e_c), mf / 2.0 + 0.75)
        * libm::exp(-libm::sqrt(8.0 * e_j / e_c))
}

pub type DispersionFn = fn(f64, f64, usize) -> f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaEps {
    Given([f64; 2]),
    /// From `E_J`, `E_C` through [`charge_dispersion`].
    Derive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    pub e_j: f64,
    pub e_c: f64,
    pub omega0: f64,
    pub g: f64,
    pub delta_eps: DeltaEps,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeviceWarning {
    /// `E_J/E_C` below 20.
    LowJosephsonRatio(f64),
    /// `δω² / (g²(n+1))` below 10.
    WeakDispersion(f64),
}

pub const MIN_JOSEPHSON_RATIO: f64 = 20.0;
pub const MIN_DISPERSIVE_RATIO: f64 = 10.0;

impl DeviceParams {
    pub fn validate(&self) -> Result<(), DeviceError> {
        for (name, v) in [
            ("E_J", self.e_j),
            ("E_C", self.e_c),
            ("omega0", self.omega0),
            ("g", self.g),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DeviceError::Parameter(name));
            }
        }
        if self.delta_omega() == 0.0 {
            return Err(DeviceError::Resonant);
        }
        Ok(())
    }

    /// `Ω₀ = √(8 E_J E_C)`.
    pub fn omega_transmon(&self) -> f64 {
        libm::sqrt(8.0 * self.e_j * self.e_c)
    }

    pub fn delta_omega(&self) -> f64 {
        self.omega_transmon() - self.omega0
    }

    pub fn delta_eps(&self) -> [f64; 2] {
        match self.delta_eps {
            DeltaEps::Given(d) => d,
            DeltaEps::Derive => [
                charge_dispersion(self.e_j, self.e_c, 0),
                charge_dispersion(self.e_j, self.e_c, 1),
            ],
        }
    }

    /// `δ₊ = (δε₁ + δε₀)/2`.
    pub fn delta_plus(&self) -> f64 {
        let [e0, e1] = self.delta_eps();
        (e1 + e0) / 2.0
    }

    /// `C = 4g²/δω²`.
    pub fn dispersive_constant(&self) -> f64 {
        let d = self.delta_omega();
        4.0 * self.g * self.g / (d * d)
    }

    pub fn warnings(&self, photons: usize) -> Vec<DeviceWarning> {
        let mut w = Vec::new();
        let r = self.e_j / self.e_c;
        if r < MIN_JOSEPHSON_RATIO {
            w.push(DeviceWarning::LowJosephsonRatio(r));
        }
        let d = self.delta_omega();
        let q = d * d / (self.g * self.g * (photons as f64 + 1.0));
        if q < MIN_DISPERSIVE_RATIO {
            w.push(DeviceWarning::WeakDispersion(q));
        }
        w
    }
}

/// Second-order resonance frequency `ω₀ − g²/(δω + 2δ₊Q)`.
pub fn dispersive_shift(device: &DeviceParams, q: f64) -> f64 {
    device.omega0 - device.g * device.g / (device.delta_omega() + 2.0 * device.delta_plus() * q)
}

/// Energy of the dressed state adiabatically connected to `|k, m=0⟩`, minus the `Q`-independent `(k − ½)ω₀`.
///
/// For `k ≥ 1` this diagonalizes the block spanned by `|k−1, 1⟩` and `|k, 0⟩`. Working relative to
/// `(k − ½)ω₀` keeps shifts far below `ω₀` resolvable.
fn dressed_offset(device: &DeviceParams, q: f64, k: usize) -> f64 {
    let detuning = device.delta_omega() + 2.0 * device.delta_plus() * q;
    if k == 0 {
        return -detuning / 2.0;
    }
    let c = device.g * libm::sqrt(k as f64);
    let block = Matrix2::new(detuning / 2.0, c, c, -detuning / 2.0);
    let ev = SymmetricEigen::new(block).eigenvalues;
    let (lo, hi) = if ev[0] < ev[1] { (ev[0], ev[1]) } else { (ev[1], ev[0]) };
    if detuning > 0.0 {
        lo
    } else {
        hi
    }
}

fn resonance_offset(device: &DeviceParams, q: f64, n: usize) -> f64 {
    dressed_offset(device, q, n + 1) - dressed_offset(device, q, n)
}

/// Resonance frequency for photon number `n → n+1` with the transmon in its lowest level,
/// from exact diagonalization of the Jaynes–Cummings blocks.
pub fn exact_resonance(device: &DeviceParams, q: f64, n: usize) -> f64 {
    device.omega0 + resonance_offset(device, q, n)
}

/// `e_k(Δ₊) − e_k(Δ₋)` for detunings `Δ± = δω ± 2δ₊·factor`, where `e_k` is the adiabatic block
/// eigenvalue `∓√(Δ²/4 + k g²)`. Written as a ratio so that shifts many orders below `δω` survive.
fn dressed_difference(device: &DeviceParams, factor: f64, k: usize) -> f64 {
    let dw = device.delta_omega();
    let step = 4.0 * device.delta_plus() * factor;
    if k == 0 {
        return -step / 2.0;
    }
    let kg2 = k as f64 * device.g * device.g;
    let (p, m) = (dw + step / 2.0, dw - step / 2.0);
    let s = |d: f64| libm::sqrt(d * d / 4.0 + kg2);
    -dw.signum() * step * (p + m) / (4.0 * (s(p) + s(m)))
}

/// Exact frequency change on flipping a `Q` whose eigenvalues are `±factor`.
pub fn exact_shift(device: &DeviceParams, factor: f64, n: usize) -> f64 {
    dressed_difference(device, factor, n + 1) - dressed_difference(device, factor, n)
}

/// Single-island parameters for the length-`L` scaling `E_J = L E_J⁽¹⁾`, `E_C = E_C⁽¹⁾/L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuppressionBase {
    pub e_j1: f64,
    pub e_c1: f64,
    pub level: usize,
}

impl Default for SuppressionBase {
    fn default() -> Self {
        Self {
            e_j1: 50.0,
            e_c1: 1.0,
            level: 0,
        }
    }
}

pub fn suppression_scaling(l: f64, base: &SuppressionBase, dispersion: DispersionFn) -> f64 {
    dispersion(l * base.e_j1, base.e_c1 / l, base.level)
}

/// `d/dL` of `−√(8 E_J(L)/E_C(L))`, which is `L`-independent.
pub fn analytic_log_slope(base: &SuppressionBase) -> f64 {
    -libm::sqrt(8.0 * base.e_j1 / base.e_c1)
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Fitted slope of `ln δε(L)` over integer `L` in `range`.
pub fn fitted_log_slope(
    range: core::ops::RangeInclusive<u32>,
    base: &SuppressionBase,
    dispersion: DispersionFn,
) -> f64 {
    let (x, y): (Vec<f64>, Vec<f64>) = range
        .map(|l| {
            let l = l as f64;
            (l, libm::log(suppression_scaling(l, base, dispersion)))
        })
        .unzip();
    fit_slope(&x, &y)
}

/// All weight-1, 2 and 3 strings on one tri-junction's modes, with every phase making them Hermitian.
pub fn junction_strings(junctions: usize, j: usize) -> Vec<MajoranaString> {
    let mut out = vec![];
    for mask in 1u8..8 {
        let modes: Vec<usize> = (0..3).filter(|a| mask >> a & 1 == 1).map(|a| 3 * j + a).collect();
        let s = MajoranaString::from_modes(3 * junctions, modes);
        out.push(MajoranaString::hermitian(s.support().clone()));
    }
    out
}
