//! Kronecker-product Jordan–Wigner matrices used as an independent oracle in tests.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::majorana::MajoranaString;

pub type Mat = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(dim: usize) -> Mat {
    Mat::identity(dim, dim)
}

fn pauli(which: char) -> Mat {
    match which {
        'I' => Mat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        'X' => Mat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        'Y' => Mat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        'Z' => Mat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => unreachable!(),
    }
}

/// Qubit `q` is bit `q` of the basis index, so the Kronecker product runs from the top qubit down.
fn kron_chain(letters: &[char]) -> Mat {
    let mut out = identity(1);
    for &c in letters.iter().rev() {
        out = out.kronecker(&pauli(c));
    }
    out
}

/// Matrix of `γ_k` (0-based) on `num_modes / 2` qubits.
pub fn jw_gamma(num_modes: usize, k: usize) -> Mat {
    let qubits = num_modes / 2;
    let q = k / 2;
    let mut letters = alloc::vec!['I'; qubits];
    for l in letters.iter_mut().take(q) {
        *l = 'Z';
    }
    letters[q] = if k.is_multiple_of(2) { 'X' } else { 'Y' };
    kron_chain(&letters)
}

pub fn dense_of(s: &MajoranaString) -> Mat {
    let n = s.num_modes();
    let mut out = identity(1 << (n / 2));
    for m in s.modes() {
        out *= jw_gamma(n, m);
    }
    out * I.powu(s.phase() as u32)
}

pub fn approx_eq_mat(a: &Mat, b: &Mat, tol: f64) -> bool {
    a.shape() == b.shape() && (a - b).iter().all(|z| z.norm() <= tol)
}

/// `exp(θ·s)` for a string with `s² = ±𝟙`.
pub fn exp_string(s: &MajoranaString, theta: f64) -> Mat {
    let m = dense_of(s);
    let id = identity(m.nrows());
    if s.is_hermitian() {
        id * Complex64::new(libm::cosh(theta), 0.0) + m * Complex64::new(libm::sinh(theta), 0.0)
    } else {
        id * Complex64::new(libm::cos(theta), 0.0) + m * Complex64::new(libm::sin(theta), 0.0)
    }
}

/// `|tr(A† B)| / dim`: equals 1 iff `A` and `B` agree up to a global phase (for unitaries).
pub fn unitary_overlap(a: &Mat, b: &Mat) -> f64 {
    (a.adjoint() * b).trace().norm() / a.nrows() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jw_gammas_satisfy_clifford_relations() {
        for n in [2usize, 4, 6, 8, 10] {
            for j in 0..n {
                for k in 0..n {
                    let a = jw_gamma(n, j);
                    let b = jw_gamma(n, k);
                    let anti = &a * &b + &b * &a;
                    let want = if j == k {
                        identity(a.nrows()) * Complex64::new(2.0, 0.0)
                    } else {
                        Mat::zeros(a.nrows(), a.nrows())
                    };
                    assert!(approx_eq_mat(&anti, &want, 1e-12));
                }
            }
        }
    }
}
