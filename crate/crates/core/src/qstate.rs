//! Dense statevector representation of n-qubit pure states with
//! Pauli-string application, expectation values and reduced-state purity.
//!
//! Conventions, pinned once and for all:
//!
//! * Basis index `i` is read as the bitstring of the ket with qubit 0 as
//!   the **most significant** bit. For five parties A..E that makes
//!   `|01011⟩` index 11 and party A the leftmost letter of a Pauli string.
//! * Pauli action on the computational basis: `X|b⟩ = |1-b⟩`,
//!   `Z|b⟩ = (-1)^b |b⟩`, `Y|0⟩ = i|1⟩`, `Y|1⟩ = -i|0⟩`.
//!
//! Everything here is immutable after construction and every operation is
//! a pure function, so values can be shared freely across threads.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest qubit count the dense representation accepts (2^12 amplitudes).
pub const MAX_QUBITS: usize = 12;

/// Tolerance for internal identities (norms, Hermiticity of expectations).
pub const INTERNAL_TOL: f64 = 1e-12;

/// One single-qubit operator from {I, X, Y, Z}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    /// The three non-identity axes in canonical order.
    pub const MEASUREMENT_AXES: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' | '1' => Ok(PauliAxis::I),
            'X' => Ok(PauliAxis::X),
            'Y' => Ok(PauliAxis::Y),
            'Z' => Ok(PauliAxis::Z),
            other => Err(Error::InvalidAxis(other)),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    /// Lowercase letter used for hidden-variable names (`x`, `y`, `z`).
    pub fn to_lower(self) -> char {
        self.to_char().to_ascii_lowercase()
    }

    pub fn is_identity(self) -> bool {
        self == PauliAxis::I
    }

    /// 2x2 matrix in row-major order.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            PauliAxis::I => [[one, zero], [zero, one]],
            PauliAxis::X => [[zero, one], [one, zero]],
            PauliAxis::Y => [[zero, -i], [i, zero]],
            PauliAxis::Z => [[one, zero], [zero, -one]],
        }
    }

    /// Eigenprojector `(I + sign * P) / 2` onto the `sign` eigenspace.
    pub fn projector(self, sign: f64) -> [[Complex64; 2]; 2] {
        let p = self.matrix();
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in p.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                let id = if r == c { 1.0 } else { 0.0 };
                out[r][c] = (Complex64::new(id, 0.0) + sign * v) * 0.5;
            }
        }
        out
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A tensor product of single-qubit Pauli operators, one per party.
///
/// The text form is one character per party from `{I, X, Y, Z}` with party
/// A (qubit 0) first, e.g. `"ZXXII"`. On input `'1'` is accepted as an
/// alias for `'I'`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    axes: Vec<PauliAxis>,
}

impl PauliString {
    pub fn new(axes: Vec<PauliAxis>) -> Self {
        PauliString { axes }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let axes = text
            .chars()
            .map(PauliAxis::from_char)
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString { axes })
    }

    /// All-identity string on `len` parties.
    pub fn identity(len: usize) -> Self {
        PauliString {
            axes: vec![PauliAxis::I; len],
        }
    }

    pub fn len(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }

    pub fn axes(&self) -> &[PauliAxis] {
        &self.axes
    }

    pub fn axis(&self, party: usize) -> PauliAxis {
        self.axes[party]
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> usize {
        self.axes.iter().filter(|a| !a.is_identity()).count()
    }

    /// Indices of the parties with a non-identity factor.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.axes
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_identity())
            .map(|(p, _)| p)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for axis in &self.axes {
            write!(f, "{}", axis.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliString::parse(s)
    }
}

/// Dense complex amplitude vector of an n-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a normalized state from raw amplitudes.
    ///
    /// Rejects length mismatches and the all-zero vector; anything else is
    /// scaled to unit norm.
    pub fn new(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut state = Self::new_unnormalized(num_qubits, amplitudes)?;
        let norm_sqr = state.norm_sqr();
        if norm_sqr <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let scale = 1.0 / norm_sqr.sqrt();
        for amp in &mut state.amplitudes {
            *amp *= scale;
        }
        Ok(state)
    }

    /// Builds a state without normalizing.
    ///
    /// Only the shape is checked. Exists for oracle computations and fault
    /// injection in tests; everything downstream assumes unit norm.
    pub fn new_unnormalized(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitCountUnsupported {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let expected = 1usize << num_qubits;
        if amplitudes.len() != expected {
            return Err(Error::AmplitudeLength {
                expected,
                actual: amplitudes.len(),
            });
        }
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitCountUnsupported {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::QubitIndex {
                index,
                num_qubits,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::QubitCountMismatch {
                operator: other.num_qubits,
                state: self.num_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Bit mask of `qubit` in a basis index (qubit 0 is the MSB).
    #[inline]
    fn qubit_mask(&self, qubit: usize) -> usize {
        1usize << (self.num_qubits - 1 - qubit)
    }

    /// Applies a Pauli string by bit-indexed traversal.
    ///
    /// One pass over the amplitudes: the X and Y factors accumulate into a
    /// bit-flip mask, the Z and Y factors into a phase mask, and each Y
    /// contributes a global factor of i. The result is not renormalized
    /// (Pauli strings are unitary).
    pub fn apply_pauli_string(&self, p: &PauliString) -> Result<StateVector> {
        if p.len() != self.num_qubits {
            return Err(Error::QubitCountMismatch {
                operator: p.len(),
                state: self.num_qubits,
            });
        }
        let mut flip_mask = 0usize;
        let mut phase_mask = 0usize;
        let mut y_count = 0u32;
        for (qubit, axis) in p.axes().iter().enumerate() {
            let mask = self.qubit_mask(qubit);
            match axis {
                PauliAxis::I => {}
                PauliAxis::X => flip_mask |= mask,
                PauliAxis::Y => {
                    flip_mask |= mask;
                    phase_mask |= mask;
                    y_count += 1;
                }
                PauliAxis::Z => phase_mask |= mask,
            }
        }
        // i^y_count
        let global = match y_count % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (index, amp) in self.amplitudes.iter().enumerate() {
            let negate = (index & phase_mask).count_ones() % 2 == 1;
            let coeff = if negate { -global } else { global };
            out[index ^ flip_mask] = coeff * amp;
        }
        Ok(StateVector {
            num_qubits: self.num_qubits,
            amplitudes: out,
        })
    }

    /// Real expectation value `⟨ψ|P|ψ⟩`.
    ///
    /// The imaginary part must vanish by Hermiticity; if it exceeds the
    /// internal tolerance the kernel is broken and an internal-consistency
    /// error is raised instead of returning a number.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        let applied = self.apply_pauli_string(p)?;
        let value = self.inner(&applied)?;
        if value.im.abs() > INTERNAL_TOL {
            return Err(Error::Internal(format!(
                "expectation of {p} has imaginary part {:e}",
                value.im
            )));
        }
        if value.re.abs() > 1.0 + INTERNAL_TOL {
            return Err(Error::Internal(format!(
                "expectation of {p} is {} (outside [-1, 1])",
                value.re
            )));
        }
        Ok(value.re)
    }

    /// Applies an arbitrary 2x2 operator to one qubit (no renormalization).
    pub fn apply_one_qubit(&self, qubit: usize, m: &[[Complex64; 2]; 2]) -> Result<StateVector> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        let mask = self.qubit_mask(qubit);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for index in 0..self.dim() {
            if index & mask != 0 {
                continue;
            }
            let a0 = self.amplitudes[index];
            let a1 = self.amplitudes[index | mask];
            out[index] = m[0][0] * a0 + m[0][1] * a1;
            out[index | mask] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(StateVector {
            num_qubits: self.num_qubits,
            amplitudes: out,
        })
    }

    /// Purity `Tr(ρ²)` of the reduced state over `kept_qubits`.
    ///
    /// The reduced density matrix is accumulated directly by index
    /// arithmetic over the (kept, traced) bit partition; the full 2^n x 2^n
    /// density matrix is never materialized.
    pub fn subsystem_purity(&self, kept_qubits: &[usize]) -> Result<f64> {
        let n = self.num_qubits;
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
        let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
        let rho = self.reduced_density(&kept, &traced);
        Ok(rho.iter().map(|e| e.norm_sqr()).sum())
    }

    /// Reduced density matrix over `kept` (sorted), tracing out `traced`.
    fn reduced_density(&self, kept: &[usize], traced: &[usize]) -> Vec<Complex64> {
        let scatter = |value: usize, qubits: &[usize]| -> usize {
            let mut full = 0usize;
            for (j, &q) in qubits.iter().enumerate() {
                let bit = (value >> (qubits.len() - 1 - j)) & 1;
                full |= bit << (self.num_qubits - 1 - q);
            }
            full
        };
        let kept_dim = 1usize << kept.len();
        let traced_dim = 1usize << traced.len();
        let kept_base: Vec<usize> = (0..kept_dim).map(|r| scatter(r, kept)).collect();
        let traced_base: Vec<usize> = (0..traced_dim).map(|t| scatter(t, traced)).collect();
        let mut rho = vec![Complex64::new(0.0, 0.0); kept_dim * kept_dim];
        for r in 0..kept_dim {
            for s in 0..kept_dim {
                let mut sum = Complex64::new(0.0, 0.0);
                for &off in &traced_base {
                    sum += self.amplitudes[kept_base[r] | off]
                        * self.amplitudes[kept_base[s] | off].conj();
                }
                rho[r * kept_dim + s] = sum;
            }
        }
        rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn make_state_normalizes() {
        let s = StateVector::new(1, vec![c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 1.0, epsilon = INTERNAL_TOL);
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = INTERNAL_TOL);
    }

    #[test]
    fn make_state_rejects_bad_shapes() {
        assert!(matches!(
            StateVector::new(2, vec![c(1.0, 0.0)]),
            Err(Error::AmplitudeLength { expected: 4, actual: 1 })
        ));
        assert!(matches!(
            StateVector::new(1, vec![c(0.0, 0.0), c(0.0, 0.0)]),
            Err(Error::ZeroNorm)
        ));
        assert!(matches!(
            StateVector::new(13, vec![c(1.0, 0.0)]),
            Err(Error::QubitCountUnsupported { .. })
        ));
    }

    #[test]
    fn pauli_on_basis_states() {
        let zero = StateVector::basis_state(1, 0).unwrap();
        let one = StateVector::basis_state(1, 1).unwrap();

        let z = zero.apply_pauli_string(&"Z".parse().unwrap()).unwrap();
        assert_eq!(z.amplitudes(), zero.amplitudes());

        let x = zero.apply_pauli_string(&"X".parse().unwrap()).unwrap();
        assert_eq!(x.amplitudes(), one.amplitudes());

        // Y|0> = i|1>, Y|1> = -i|0>
        let y0 = zero.apply_pauli_string(&"Y".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(y0.amplitudes()[1].im, 1.0, epsilon = INTERNAL_TOL);
        let y1 = one.apply_pauli_string(&"Y".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(y1.amplitudes()[0].im, -1.0, epsilon = INTERNAL_TOL);
    }

    #[test]
    fn msb_convention() {
        // |01011> is index 11: flipping party A via X reaches |11011> = 27.
        let s = StateVector::basis_state(5, 0b01011).unwrap();
        let flipped = s.apply_pauli_string(&"XIIII".parse().unwrap()).unwrap();
        assert_abs_diff_eq!(flipped.amplitudes()[0b11011].re, 1.0, epsilon = INTERNAL_TOL);
    }

    #[test]
    fn expectation_of_z_on_zero() {
        let zero = StateVector::basis_state(1, 0).unwrap();
        assert_abs_diff_eq!(
            zero.expectation(&"Z".parse().unwrap()).unwrap(),
            1.0,
            epsilon = INTERNAL_TOL
        );
    }

    #[test]
    fn expectation_rejects_length_mismatch() {
        let zero = StateVector::basis_state(1, 0).unwrap();
        assert!(matches!(
            zero.expectation(&"ZZ".parse().unwrap()),
            Err(Error::QubitCountMismatch { .. })
        ));
    }

    #[test]
    fn pauli_string_text_form() {
        let p: PauliString = "ZXX11".parse().unwrap();
        assert_eq!(p.to_string(), "ZXXII");
        assert_eq!(p.weight(), 3);
        assert!(PauliString::parse("ZQ").is_err());
    }

    #[test]
    fn purity_of_product_state() {
        let s = StateVector::basis_state(2, 0).unwrap();
        assert_abs_diff_eq!(s.subsystem_purity(&[0]).unwrap(), 1.0, epsilon = INTERNAL_TOL);
    }

    #[test]
    fn purity_of_bell_pair() {
        let h = 1.0 / 2.0_f64.sqrt();
        let bell =
            StateVector::new(2, vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
        assert_abs_diff_eq!(bell.subsystem_purity(&[0]).unwrap(), 0.5, epsilon = INTERNAL_TOL);
        assert_abs_diff_eq!(bell.subsystem_purity(&[1]).unwrap(), 0.5, epsilon = INTERNAL_TOL);
    }

    #[test]
    fn purity_rejects_empty_and_full_sets() {
        let s = StateVector::basis_state(2, 0).unwrap();
        assert!(matches!(
            s.subsystem_purity(&[]),
            Err(Error::BadSubsystem { kept: 0, total: 2 })
        ));
        assert!(matches!(
            s.subsystem_purity(&[0, 1]),
            Err(Error::BadSubsystem { kept: 2, total: 2 })
        ));
        // Duplicates collapse to a set.
        assert!(s.subsystem_purity(&[0, 0]).is_ok());
    }

    #[test]
    fn projector_sums_to_identity() {
        for axis in PauliAxis::MEASUREMENT_AXES {
            let plus = axis.projector(1.0);
            let minus = axis.projector(-1.0);
            for r in 0..2 {
                for col in 0..2 {
                    let sum = plus[r][col] + minus[r][col];
                    let expected = if r == col { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(sum.re, expected, epsilon = INTERNAL_TOL);
                    assert_abs_diff_eq!(sum.im, 0.0, epsilon = INTERNAL_TOL);
                }
            }
        }
    }
}
