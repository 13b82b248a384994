//! Dense-matrix oracles for cross-checking the bit-indexed kernels.
//!
//! Everything in this module materializes explicit 2^n x 2^n matrices via
//! Kronecker products, written against the textbook definitions and
//! sharing no index arithmetic with `qstate`. Test instrument, not a
//! production path; the qubit cap keeps the matrices small.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::{PauliString, StateVector};

/// Largest qubit count for which dense matrices are materialized.
pub const DENSE_MAX_QUBITS: usize = 8;

fn check_cap(num_qubits: usize) -> Result<()> {
    if num_qubits > DENSE_MAX_QUBITS {
        return Err(Error::DenseOracleCap {
            requested: num_qubits,
            max: DENSE_MAX_QUBITS,
        });
    }
    Ok(())
}

/// Full 2^n x 2^n matrix of a Pauli string, row-major, built by iterated
/// Kronecker products with party 0 as the leftmost factor.
pub fn pauli_matrix(p: &PauliString) -> Result<Vec<Complex64>> {
    check_cap(p.len())?;
    let mut acc = vec![Complex64::new(1.0, 0.0)];
    let mut dim = 1usize;
    for axis in p.axes() {
        let m = axis.matrix();
        let new_dim = dim * 2;
        let mut next = vec![Complex64::new(0.0, 0.0); new_dim * new_dim];
        for row in 0..new_dim {
            for col in 0..new_dim {
                next[row * new_dim + col] =
                    acc[(row / 2) * dim + (col / 2)] * m[row % 2][col % 2];
            }
        }
        acc = next;
        dim = new_dim;
    }
    Ok(acc)
}

/// Expectation value computed by explicit matrix-vector contraction.
pub fn expectation_dense(state: &StateVector, p: &PauliString) -> Result<f64> {
    if p.len() != state.num_qubits() {
        return Err(Error::QubitCountMismatch {
            operator: p.len(),
            state: state.num_qubits(),
        });
    }
    let matrix = pauli_matrix(p)?;
    let dim = state.dim();
    let amps = state.amplitudes();
    let mut value = Complex64::new(0.0, 0.0);
    for row in 0..dim {
        let mut applied = Complex64::new(0.0, 0.0);
        for col in 0..dim {
            applied += matrix[row * dim + col] * amps[col];
        }
        value += amps[row].conj() * applied;
    }
    if value.im.abs() > crate::qstate::INTERNAL_TOL {
        return Err(Error::Internal(format!(
            "dense expectation of {p} has imaginary part {:e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// Reduced density matrix over `kept_qubits`, computed by building the full
/// density matrix and summing the entries whose traced-out bits agree.
pub fn reduced_density_dense(state: &StateVector, kept_qubits: &[usize]) -> Result<Vec<Complex64>> {
    let n = state.num_qubits();
    check_cap(n)?;
    let mut kept: Vec<usize> = kept_qubits.to_vec();
    kept.sort_unstable();
    kept.dedup();
    for &q in &kept {
        if q >= n {
            return Err(Error::QubitIndex {
                index: q,
                num_qubits: n,
            });
        }
    }
    if kept.is_empty() || kept.len() == n {
        return Err(Error::BadSubsystem {
            kept: kept.len(),
            total: n,
        });
    }

    let dim = state.dim();
    let amps = state.amplitudes();
    let mut rho_full = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            rho_full[i * dim + j] = amps[i] * amps[j].conj();
        }
    }

    let bit_of = |index: usize, qubit: usize| (index >> (n - 1 - qubit)) & 1;
    let kept_index = |index: usize| -> usize {
        let mut out = 0usize;
        for &q in &kept {
            out = (out << 1) | bit_of(index, q);
        }
        out
    };
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();

    let kept_dim = 1usize << kept.len();
    let mut rho = vec![Complex64::new(0.0, 0.0); kept_dim * kept_dim];
    for i in 0..dim {
        for j in 0..dim {
            if traced.iter().all(|&q| bit_of(i, q) == bit_of(j, q)) {
                rho[kept_index(i) * kept_dim + kept_index(j)] += rho_full[i * dim + j];
            }
        }
    }
    Ok(rho)
}

/// Purity `Tr(ρ²)` of a reduced state, via the dense partial trace.
pub fn purity_dense(state: &StateVector, kept_qubits: &[usize]) -> Result<f64> {
    let rho = reduced_density_dense(state, kept_qubits)?;
    let dim = (rho.len() as f64).sqrt() as usize;
    let mut trace = Complex64::new(0.0, 0.0);
    for r in 0..dim {
        for s in 0..dim {
            trace += rho[r * dim + s] * rho[s * dim + r];
        }
    }
    if trace.im.abs() > 1e-10 {
        return Err(Error::Internal(format!(
            "dense purity has imaginary part {:e}",
            trace.im
        )));
    }
    Ok(trace.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn dense_expectation_on_basis_state() {
        let zero = StateVector::basis_state(1, 0).unwrap();
        let value = expectation_dense(&zero, &"Z".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let p = PauliString::identity(9);
        assert!(matches!(
            pauli_matrix(&p),
            Err(Error::DenseOracleCap { requested: 9, max: 8 })
        ));
    }

    #[test]
    fn dense_purity_of_bell_pair() {
        let h = 1.0 / 2.0_f64.sqrt();
        let bell = StateVector::new(
            2,
            vec![
                Complex64::new(h, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(h, 0.0),
            ],
        )
        .unwrap();
        assert_abs_diff_eq!(purity_dense(&bell, &[1]).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn kron_order_puts_party_zero_on_the_msb() {
        // Z on party 0 of two qubits: diagonal (+1, +1, -1, -1).
        let m = pauli_matrix(&"ZI".parse().unwrap()).unwrap();
        let diag: Vec<f64> = (0..4).map(|k| m[k * 4 + k].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
    }
}
