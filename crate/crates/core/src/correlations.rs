//! The canonical physics content: the five-qubit target state, the sixteen
//! Pauli correlations it satisfies, table verification, and the
//! measurement-compatibility analysis.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::{PauliAxis, PauliString, StateVector};

/// Number of parties in the canonical setting.
pub const PARTY_COUNT: usize = 5;

/// Tolerance used for the maximally-mixed purity checks.
pub const PURITY_TOL: f64 = 1e-9;

/// A dichotomic value, +1 or -1.
///
/// `Plus` maps to bit 0 and `Minus` to bit 1 under the `v = (-1)^b`
/// convention used by the parity-system encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    pub fn from_value(v: i32) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::Internal(format!("{other} is not a sign"))),
        }
    }

    /// Bit under `v = (-1)^b`.
    pub fn bit(self) -> bool {
        self == Sign::Minus
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    // Sign multiplication is bit XOR under v = (-1)^b.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bit(self.bit() ^ rhs.bit())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// One correlation: a Pauli string and the sign its expectation must take.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CorrelationRow {
    pub operators: PauliString,
    pub expected_sign: Sign,
}

impl CorrelationRow {
    pub fn new(operators: PauliString, expected_sign: Sign) -> Self {
        CorrelationRow {
            operators,
            expected_sign,
        }
    }
}

impl fmt::Display for CorrelationRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.operators, self.expected_sign)
    }
}

/// An ordered list of correlation rows over a fixed set of parties.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTable {
    rows: Vec<CorrelationRow>,
    party_names: Vec<String>,
}

/// Default single-letter party labels A, B, C, ...
pub fn default_party_names(count: usize) -> Vec<String> {
    (0..count)
        .map(|i| {
            char::from(b'A' + (i % 26) as u8).to_string()
        })
        .collect()
}

impl CorrelationTable {
    /// Builds a table, enforcing uniform row length and no duplicate rows.
    pub fn new(rows: Vec<CorrelationRow>, party_names: Vec<String>) -> Result<Self> {
        let party_count = party_names.len();
        for (i, row) in rows.iter().enumerate() {
            if row.operators.len() != party_count {
                return Err(Error::RowLength {
                    row: i,
                    expected: party_count,
                    actual: row.operators.len(),
                });
            }
            for (j, other) in rows.iter().enumerate().take(i) {
                if row == other {
                    return Err(Error::DuplicateRow { first: j, second: i });
                }
            }
        }
        Ok(CorrelationTable { rows, party_names })
    }

    pub fn rows(&self) -> &[CorrelationRow] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> &CorrelationRow {
        &self.rows[index]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn party_count(&self) -> usize {
        self.party_names.len()
    }

    pub fn party_names(&self) -> &[String] {
        &self.party_names
    }

    pub fn party_name(&self, party: usize) -> &str {
        &self.party_names[party]
    }

    /// Index of the party with the given label, if any.
    pub fn party_index(&self, label: &str) -> Option<usize> {
        self.party_names.iter().position(|name| name == label)
    }

    /// Parses the table text format: one `<PauliString>:<+1|-1>` row per
    /// line, `#` starts a comment, blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut party_count: Option<usize> = None;
        for (line_index, raw_line) in text.lines().enumerate() {
            let line_no = line_index + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (ops_text, sign_text) = line.split_once(':').ok_or_else(|| Error::Parse {
                line: line_no,
                message: "expected `<PauliString>:<+1|-1>`".to_string(),
            })?;
            let operators =
                PauliString::parse(ops_text.trim()).map_err(|e| Error::Parse {
                    line: line_no,
                    message: e.to_string(),
                })?;
            let expected_sign = match sign_text.trim() {
                "+1" => Sign::Plus,
                "-1" => Sign::Minus,
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected sign `+1` or `-1`, got {other:?}"),
                    })
                }
            };
            if let Some(count) = party_count {
                if operators.len() != count {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!(
                            "row has {} parties, expected {count}",
                            operators.len()
                        ),
                    });
                }
            } else {
                if operators.is_empty() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "empty Pauli string".to_string(),
                    });
                }
                party_count = Some(operators.len());
            }
            let row = CorrelationRow::new(operators, expected_sign);
            if rows.contains(&row) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("duplicate row {row}"),
                });
            }
            rows.push(row);
        }
        let count = party_count.unwrap_or(PARTY_COUNT);
        CorrelationTable::new(rows, default_party_names(count))
    }

    /// Serializes in the text format accepted by [`CorrelationTable::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }
}

/// Amplitude signs of the five-qubit target state, one per basis ket in
/// index order |00000⟩, |00001⟩, ..., |11111⟩ (party A is the most
/// significant bit).
const MMES5_SIGNS: [i8; 32] = [
    1, 1, 1, 1, //    |00000⟩  |00001⟩  |00010⟩  |00011⟩
    1, -1, -1, 1, //  |00100⟩ -|00101⟩ -|00110⟩  |00111⟩
    1, -1, -1, 1, //  |01000⟩ -|01001⟩ -|01010⟩  |01011⟩
    1, 1, 1, 1, //    |01100⟩  |01101⟩  |01110⟩  |01111⟩
    1, 1, -1, -1, //  |10000⟩  |10001⟩ -|10010⟩ -|10011⟩
    1, -1, 1, -1, //  |10100⟩ -|10101⟩  |10110⟩ -|10111⟩
    -1, 1, -1, 1, // -|11000⟩  |11001⟩ -|11010⟩  |11011⟩
    -1, -1, 1, 1, // -|11100⟩ -|11101⟩  |11110⟩  |11111⟩
];

/// Builds the five-qubit maximally multipartite entangled state: all 32
/// amplitudes have modulus 1/√32 with the fixed sign pattern above.
pub fn build_mmes5() -> StateVector {
    let amplitudes: Vec<Complex64> = MMES5_SIGNS
        .iter()
        .map(|&s| Complex64::new(f64::from(s), 0.0))
        .collect();
    StateVector::new(PARTY_COUNT, amplitudes).expect("fixed amplitude pattern is valid")
}

/// The sixteen canonical correlations satisfied by [`build_mmes5`], in
/// fixed order. These rows are frozen fixtures; the verification suite
/// fails if any entry changes.
const CANONICAL_ROWS: [(&str, i32); 16] = [
    ("ZXXII", 1),
    ("XZIZI", 1),
    ("YYIIZ", 1),
    ("YIZYI", 1),
    ("XIYIY", 1),
    ("ZIIXX", 1),
    ("IYYXI", -1),
    ("IZZIX", 1),
    ("IXIYY", -1),
    ("IIXZZ", 1),
    ("XXZXZ", -1),
    ("XYXYX", -1),
    ("YXYZX", 1),
    ("YZXXY", 1),
    ("ZYZZY", 1),
    ("ZZYYZ", 1),
];

/// The canonical sixteen-row correlation table over parties A..E.
pub fn canonical_table() -> CorrelationTable {
    let rows = CANONICAL_ROWS
        .iter()
        .map(|&(ops, sign)| {
            CorrelationRow::new(
                PauliString::parse(ops).expect("fixed table entry is valid"),
                Sign::from_value(sign).expect("fixed table entry is valid"),
            )
        })
        .collect();
    CorrelationTable::new(rows, default_party_names(PARTY_COUNT))
        .expect("fixed table is well formed")
}

/// Report label for a row of the canonical table: rows map to reference
/// equation numbers 2..=17. Returns `None` for any other table.
pub fn reference_equation(table: &CorrelationTable, row_index: usize) -> Option<usize> {
    if *table == canonical_table() && row_index < table.len() {
        Some(row_index + 2)
    } else {
        None
    }
}

/// Verification result for one table row.
#[derive(Debug, Clone, Serialize)]
pub struct RowCheck {
    pub index: usize,
    pub operators: String,
    pub expected: i32,
    pub computed: f64,
    pub pass: bool,
}

/// Verification result for a whole table against a state.
#[derive(Debug, Clone, Serialize)]
pub struct TableVerification {
    pub tolerance: f64,
    pub rows: Vec<RowCheck>,
    pub pass: bool,
}

/// Computes every row's expectation on `state` and compares with the
/// expected sign at the given tolerance. An empty table passes vacuously.
pub fn verify_table(
    state: &StateVector,
    table: &CorrelationTable,
    tolerance: f64,
) -> Result<TableVerification> {
    if !table.is_empty() && table.party_count() != state.num_qubits() {
        return Err(Error::QubitCountMismatch {
            operator: table.party_count(),
            state: state.num_qubits(),
        });
    }
    let mut rows = Vec::with_capacity(table.len());
    let mut pass = true;
    for (index, row) in table.rows().iter().enumerate() {
        let computed = state.expectation(&row.operators)?;
        let expected = row.expected_sign.value();
        let row_pass = (computed - f64::from(expected)).abs() <= tolerance;
        pass &= row_pass;
        rows.push(RowCheck {
            index,
            operators: row.operators.to_string(),
            expected,
            computed,
            pass: row_pass,
        });
    }
    Ok(TableVerification {
        tolerance,
        rows,
        pass,
    })
}

/// True when one joint setting measures both rows: at every party the two
/// axes are equal or at least one of them is the identity.
pub fn rows_compatible(r1: &CorrelationRow, r2: &CorrelationRow) -> bool {
    assert_eq!(
        r1.operators.len(),
        r2.operators.len(),
        "rows must have the same party count"
    );
    r1.operators
        .axes()
        .iter()
        .zip(r2.operators.axes())
        .all(|(&a, &b)| a == b || a.is_identity() || b.is_identity())
}

/// True when the two rows can be checked in the same experimental run.
///
/// This is stricter than [`rows_compatible`]: besides sharing a joint
/// setting, no party other than the last (the reference party whose
/// outcome supplies the right-hand sides) may contribute an outcome to
/// both rows' products. Row products must come from disjoint particles,
/// so their supports over the non-reference parties must not overlap.
/// [`minimum_context_cover`] groups rows under this predicate.
pub fn rows_schedulable(r1: &CorrelationRow, r2: &CorrelationRow) -> bool {
    let n = r1.operators.len();
    debug_assert_eq!(n, r2.operators.len());
    if r1 == r2 {
        return true;
    }
    for party in 0..n.saturating_sub(1) {
        if !r1.operators.axis(party).is_identity() && !r2.operators.axis(party).is_identity() {
            return false;
        }
    }
    if n == 0 {
        return true;
    }
    let a = r1.operators.axis(n - 1);
    let b = r2.operators.axis(n - 1);
    a == b || a.is_identity() || b.is_identity()
}

/// A set of rows measured together in one run, with the joint setting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityGroup {
    /// Sorted indices into the table.
    pub row_indices: Vec<usize>,
    /// Per party, the common non-identity axis of the group, or I when the
    /// party is unconstrained.
    pub joint_context: PauliString,
}

/// Partitions the table into the minimum number of groups whose rows can
/// share an experimental run (see [`rows_compatible`] and the stricter
/// per-run scheduling rule above).
///
/// Minimality is established by exact branch-and-bound search; among
/// minimum partitions the result is deterministic: rows are assigned in
/// order and the lexicographically smallest group-assignment sequence
/// wins (groups numbered by first appearance).
pub fn minimum_context_cover(table: &CorrelationTable) -> Vec<CompatibilityGroup> {
    let rows = table.rows();
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows.len();
    let schedulable: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rows_schedulable(&rows[i], &rows[j]))
                .collect()
        })
        .collect();

    // Phase 1: exact minimum group count by branch and bound.
    fn min_group_count(
        row: usize,
        groups: &mut Vec<Vec<usize>>,
        schedulable: &[Vec<bool>],
        best: &mut usize,
    ) {
        let n = schedulable.len();
        if row == n {
            *best = (*best).min(groups.len());
            return;
        }
        if groups.len() >= *best {
            return;
        }
        for g in 0..groups.len() {
            if groups[g].iter().all(|&m| schedulable[m][row]) {
                groups[g].push(row);
                min_group_count(row + 1, groups, schedulable, best);
                groups[g].pop();
            }
        }
        groups.push(vec![row]);
        min_group_count(row + 1, groups, schedulable, best);
        groups.pop();
    }

    // Phase 2: first complete partition within the optimum bound. Rows are
    // assigned in order and groups tried in creation order, so the first
    // hit carries the lexicographically smallest assignment sequence.
    fn first_within_bound(
        row: usize,
        groups: &mut Vec<Vec<usize>>,
        schedulable: &[Vec<bool>],
        bound: usize,
    ) -> Option<Vec<Vec<usize>>> {
        let n = schedulable.len();
        if row == n {
            return Some(groups.clone());
        }
        for g in 0..groups.len() {
            if groups[g].iter().all(|&m| schedulable[m][row]) {
                groups[g].push(row);
                if let Some(found) = first_within_bound(row + 1, groups, schedulable, bound) {
                    return Some(found);
                }
                groups[g].pop();
            }
        }
        if groups.len() < bound {
            groups.push(vec![row]);
            if let Some(found) = first_within_bound(row + 1, groups, schedulable, bound) {
                return Some(found);
            }
            groups.pop();
        }
        None
    }

    let mut best = n + 1;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    min_group_count(0, &mut groups, &schedulable, &mut best);

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let partition = first_within_bound(0, &mut groups, &schedulable, best)
        .expect("a partition within the optimum always exists");

    partition
        .into_iter()
        .map(|row_indices| {
            let party_count = table.party_count();
            let mut axes = vec![PauliAxis::I; party_count];
            for &r in &row_indices {
                for (party, &axis) in rows[r].operators.axes().iter().enumerate() {
                    if !axis.is_identity() {
                        debug_assert!(
                            axes[party].is_identity() || axes[party] == axis,
                            "scheduled rows cannot disagree on a party"
                        );
                        axes[party] = axis;
                    }
                }
            }
            CompatibilityGroup {
                row_indices,
                joint_context: PauliString::new(axes),
            }
        })
        .collect()
}

/// Purity of one subsystem next to its maximally-mixed target value.
#[derive(Debug, Clone, Serialize)]
pub struct SubsystemPurity {
    pub qubits: Vec<usize>,
    pub purity: f64,
    pub expected: f64,
    pub pass: bool,
}

/// Purities of all single-qubit and two-qubit subsystems of a five-qubit
/// state, compared with the maximally mixed values 1/2 and 1/4.
#[derive(Debug, Clone, Serialize)]
pub struct PurityReport {
    pub tolerance: f64,
    pub singles: Vec<SubsystemPurity>,
    pub pairs: Vec<SubsystemPurity>,
    /// True when every bipartition of size at most two is exactly
    /// maximally mixed within tolerance.
    pub pass: bool,
}

/// Computes the purity report for a five-qubit state.
pub fn mmes_purity_report(state: &StateVector) -> Result<PurityReport> {
    if state.num_qubits() != PARTY_COUNT {
        return Err(Error::QubitCountMismatch {
            operator: PARTY_COUNT,
            state: state.num_qubits(),
        });
    }
    let mut singles = Vec::new();
    let mut pairs = Vec::new();
    let mut pass = true;
    for q in 0..PARTY_COUNT {
        let purity = state.subsystem_purity(&[q])?;
        let ok = (purity - 0.5).abs() <= PURITY_TOL;
        pass &= ok;
        singles.push(SubsystemPurity {
            qubits: vec![q],
            purity,
            expected: 0.5,
            pass: ok,
        });
    }
    for a in 0..PARTY_COUNT {
        for b in (a + 1)..PARTY_COUNT {
            let purity = state.subsystem_purity(&[a, b])?;
            let ok = (purity - 0.25).abs() <= PURITY_TOL;
            pass &= ok;
            pairs.push(SubsystemPurity {
                qubits: vec![a, b],
                purity,
                expected: 0.25,
                pass: ok,
            });
        }
    }
    Ok(PurityReport {
        tolerance: PURITY_TOL,
        singles,
        pairs,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mmes5_amplitudes() {
        let state = build_mmes5();
        let a = 1.0 / 32.0_f64.sqrt();
        assert_abs_diff_eq!(state.amplitudes()[0].re, a, epsilon = 1e-12);
        assert_abs_diff_eq!(state.amplitudes()[0b00101].re, -a, epsilon = 1e-12);
        assert_abs_diff_eq!(state.norm_sqr(), 1.0, epsilon = 1e-12);
        for amp in state.amplitudes() {
            assert_abs_diff_eq!(amp.norm(), a, epsilon = 1e-12);
        }
    }

    #[test]
    fn canonical_table_is_frozen() {
        let table = canonical_table();
        assert_eq!(table.len(), 16);
        assert_eq!(table.row(0).to_string(), "ZXXII:+1");
        assert_eq!(table.row(6).to_string(), "IYYXI:-1");
        assert_eq!(table.row(10).to_string(), "XXZXZ:-1");
        assert_eq!(table.row(15).to_string(), "ZZYYZ:+1");
        for (i, &(ops, sign)) in CANONICAL_ROWS.iter().enumerate() {
            assert_eq!(table.row(i).operators.to_string(), ops);
            assert_eq!(table.row(i).expected_sign.value(), sign);
        }
    }

    #[test]
    fn canonical_rows_hold_on_the_state() {
        let report = verify_table(&build_mmes5(), &canonical_table(), 1e-9).unwrap();
        assert!(report.pass);
        assert_eq!(report.rows.len(), 16);
    }

    #[test]
    fn applying_a_canonical_row_reproduces_the_state() {
        // ZXXII stabilizes the state: ⟨ψ|Pψ⟩ = 1.
        let state = build_mmes5();
        let applied = state
            .apply_pauli_string(&"ZXXII".parse().unwrap())
            .unwrap();
        let overlap = state.inner(&applied).unwrap();
        assert_abs_diff_eq!(overlap.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(overlap.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn kernel_matches_dense_oracle_on_xxxxx() {
        let state = build_mmes5();
        let operators: PauliString = "XXXXX".parse().unwrap();
        let fast = state.expectation(&operators).unwrap();
        let dense = crate::dense::expectation_dense(&state, &operators).unwrap();
        assert_abs_diff_eq!(fast, dense, epsilon = 1e-10);
    }

    #[test]
    fn any_sign_flip_fails_verification() {
        let state = build_mmes5();
        let canonical = canonical_table();
        for flip in 0..canonical.len() {
            let rows = canonical
                .rows()
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let sign = if i == flip {
                        row.expected_sign * Sign::Minus
                    } else {
                        row.expected_sign
                    };
                    CorrelationRow::new(row.operators.clone(), sign)
                })
                .collect();
            let mutated =
                CorrelationTable::new(rows, default_party_names(PARTY_COUNT)).unwrap();
            let report = verify_table(&state, &mutated, 1e-9).unwrap();
            assert!(!report.pass, "flipping row {flip} must break verification");
            assert!(!report.rows[flip].pass);
        }
    }

    #[test]
    fn product_state_fails_verification() {
        let product = StateVector::basis_state(5, 0).unwrap();
        let report = verify_table(&product, &canonical_table(), 1e-9).unwrap();
        assert!(!report.pass);
        // IYYXI computes to 0 on |00000⟩.
        assert_abs_diff_eq!(report.rows[6].computed, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_table_passes_vacuously() {
        let empty = CorrelationTable::new(Vec::new(), default_party_names(5)).unwrap();
        let report = verify_table(&build_mmes5(), &empty, 1e-9).unwrap();
        assert!(report.pass);
        assert!(report.rows.is_empty());
    }

    #[test]
    fn compatibility_examples() {
        let table = canonical_table();
        // YYIIZ with IIXZZ share the setting YYXZZ.
        assert!(rows_compatible(table.row(2), table.row(9)));
        // ZXXII with XZIZI clash at party A.
        assert!(!rows_compatible(table.row(0), table.row(1)));
        for row in table.rows() {
            assert!(rows_compatible(row, row));
        }
    }

    #[test]
    fn compatibility_is_symmetric() {
        let table = canonical_table();
        for r1 in table.rows() {
            for r2 in table.rows() {
                assert_eq!(rows_compatible(r1, r2), rows_compatible(r2, r1));
            }
        }
    }

    #[test]
    fn canonical_cover_has_thirteen_groups() {
        let table = canonical_table();
        let cover = minimum_context_cover(&table);
        assert_eq!(cover.len(), 13);

        let pairs: Vec<&CompatibilityGroup> =
            cover.iter().filter(|g| g.row_indices.len() == 2).collect();
        assert_eq!(pairs.len(), 3);
        let pair_sets: Vec<Vec<usize>> = pairs.iter().map(|g| g.row_indices.clone()).collect();
        assert!(pair_sets.contains(&vec![2, 9]));
        assert!(pair_sets.contains(&vec![4, 8]));
        assert!(pair_sets.contains(&vec![5, 7]));

        // Partition sanity: disjoint, complete, pairwise compatible.
        let mut seen = vec![false; table.len()];
        for group in &cover {
            for &r in &group.row_indices {
                assert!(!seen[r]);
                seen[r] = true;
            }
            for &a in &group.row_indices {
                for &b in &group.row_indices {
                    assert!(rows_compatible(table.row(a), table.row(b)));
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn joint_context_of_two_row_groups() {
        let cover = minimum_context_cover(&canonical_table());
        let pair = cover
            .iter()
            .find(|g| g.row_indices == vec![2, 9])
            .expect("pair {2, 9} present");
        assert_eq!(pair.joint_context.to_string(), "YYXZZ");
    }

    #[test]
    fn singleton_cover() {
        let table = CorrelationTable::parse("ZXXII:+1").unwrap();
        let cover = minimum_context_cover(&table);
        assert_eq!(cover.len(), 1);
        assert_eq!(cover[0].row_indices, vec![0]);
        assert_eq!(cover[0].joint_context.to_string(), "ZXXII");
    }

    #[test]
    fn empty_cover() {
        let table = CorrelationTable::new(Vec::new(), default_party_names(5)).unwrap();
        assert!(minimum_context_cover(&table).is_empty());
    }

    #[test]
    fn purity_report_on_target_state() {
        let report = mmes_purity_report(&build_mmes5()).unwrap();
        assert!(report.pass);
        for s in &report.singles {
            assert_abs_diff_eq!(s.purity, 0.5, epsilon = PURITY_TOL);
        }
        for p in &report.pairs {
            assert_abs_diff_eq!(p.purity, 0.25, epsilon = PURITY_TOL);
        }
        assert_eq!(report.singles.len(), 5);
        assert_eq!(report.pairs.len(), 10);
    }

    #[test]
    fn purity_report_on_product_state() {
        let report = mmes_purity_report(&StateVector::basis_state(5, 0).unwrap()).unwrap();
        assert!(!report.pass);
        for s in report.singles.iter().chain(&report.pairs) {
            assert_abs_diff_eq!(s.purity, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn table_text_round_trip() {
        let table = canonical_table();
        let parsed = CorrelationTable::parse(&table.to_text()).unwrap();
        assert_eq!(parsed, table);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = CorrelationTable::parse("ZXXII:+1\n\n# comment\nZXQII:+1\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        let err = CorrelationTable::parse("ZXXII:+2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = CorrelationTable::parse("ZXXII:+1\nZXXII:+1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn reference_equations_only_for_the_canonical_table() {
        let table = canonical_table();
        assert_eq!(reference_equation(&table, 0), Some(2));
        assert_eq!(reference_equation(&table, 15), Some(17));
        let other = CorrelationTable::parse("ZXXII:+1").unwrap();
        assert_eq!(reference_equation(&other, 0), None);
    }
}
