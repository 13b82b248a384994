//! Hidden-variable models compiled to parity-constraint systems over GF(2).
//!
//! A correlation table plus a locality structure turns into one linear
//! equation over dichotomic (±1) variables per row, under the mapping
//! `v = (-1)^b`: a product equation `Πv = s` becomes the XOR constraint
//! `⊕b = (1-s)/2`. Satisfiability is decided twice, by Gaussian
//! elimination with row-operation logging (which yields either a witness
//! or an inconsistency certificate) and by exhaustive enumeration, and the
//! two verdicts must agree.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::correlations::{CorrelationTable, Sign};
use crate::error::{Error, Result};
use crate::qstate::PauliAxis;

/// Hard cap for the exhaustive enumeration solver.
pub const BRUTE_FORCE_MAX_VARS: usize = 24;

/// Which parties' hidden variables may co-depend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalityModel {
    /// One context-free variable per (party, axis): nobody depends on
    /// anybody else's setting.
    Local,
    /// All parties except one share information; the isolated party's
    /// outcomes are fixed ahead of time by an [`OutcomeAssignment`].
    BlockNonlocal { isolated_party: usize },
    /// Fresh variables per (party, axis, row): every equation stands alone.
    FullyNonlocal,
}

/// One dichotomic hidden variable.
///
/// `context` 0 marks a context-independent variable; the fully nonlocal
/// model stamps each row's copies with `context = row index + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct HVVariable {
    pub party: usize,
    pub axis: PauliAxis,
    pub context: usize,
}

impl HVVariable {
    /// Report name, e.g. `y_B`, or `y_B#4` for the per-row copy of row 3.
    pub fn name(&self, party_names: &[String]) -> String {
        let base = format!("{}_{}", self.axis.to_lower(), party_names[self.party]);
        if self.context == 0 {
            base
        } else {
            format!("{base}#{}", self.context)
        }
    }
}

/// Pre-determined ±1 outcomes for the isolated party, one per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeAssignment {
    values: BTreeMap<PauliAxis, Sign>,
}

impl OutcomeAssignment {
    pub fn from_pairs(pairs: &[(PauliAxis, Sign)]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for &(axis, sign) in pairs {
            if axis.is_identity() {
                return Err(Error::AssignmentMismatch(
                    "the identity axis cannot carry an outcome".to_string(),
                ));
            }
            if values.insert(axis, sign).is_some() {
                return Err(Error::AssignmentMismatch(format!(
                    "axis {axis} assigned twice"
                )));
            }
        }
        Ok(OutcomeAssignment { values })
    }

    pub fn get(&self, axis: PauliAxis) -> Option<Sign> {
        self.values.get(&axis).copied()
    }

    pub fn axes(&self) -> Vec<PauliAxis> {
        self.values.keys().copied().collect()
    }

    /// All 2^k assignments over the given axes, enumerated with the first
    /// axis as the most significant digit and +1 before -1, so the all-plus
    /// assignment comes first.
    pub fn enumerate_for(axes: &[PauliAxis]) -> Vec<OutcomeAssignment> {
        let k = axes.len();
        (0..(1usize << k))
            .map(|mask| {
                let values = axes
                    .iter()
                    .enumerate()
                    .map(|(j, &axis)| {
                        let bit = (mask >> (k - 1 - j)) & 1 == 1;
                        (axis, Sign::from_bit(bit))
                    })
                    .collect();
                OutcomeAssignment { values }
            })
            .collect()
    }

    /// Map keyed by lowercase axis letter, for reports.
    pub fn to_display_map(&self) -> BTreeMap<String, i32> {
        self.values
            .iter()
            .map(|(axis, sign)| (axis.to_lower().to_string(), sign.value()))
            .collect()
    }
}

impl fmt::Display for OutcomeAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (axis, sign) in &self.values {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}={sign}", axis.to_lower())?;
            first = false;
        }
        Ok(())
    }
}

/// One XOR constraint: the variables' bits must sum to `target_bit` mod 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityEquation {
    /// Strictly increasing variable indices.
    pub variables: Vec<usize>,
    /// `(1 - s) / 2` for the ±1 target `s`.
    pub target_bit: bool,
}

impl ParityEquation {
    pub fn target_sign(&self) -> Sign {
        Sign::from_bit(self.target_bit)
    }
}

/// A linear system over GF(2), one equation per table row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParitySystem {
    pub num_vars: usize,
    pub equations: Vec<ParityEquation>,
    pub var_names: Vec<HVVariable>,
    pub party_names: Vec<String>,
}

impl ParitySystem {
    /// Bare system without variable metadata, for tests and benchmarks.
    pub fn anonymous(num_vars: usize, equations: Vec<ParityEquation>) -> Self {
        let var_names = (0..num_vars)
            .map(|v| HVVariable {
                party: v,
                axis: PauliAxis::X,
                context: 0,
            })
            .collect();
        let party_names = (0..num_vars).map(|v| format!("v{v}")).collect();
        ParitySystem {
            num_vars,
            equations,
            var_names,
            party_names,
        }
    }

    pub fn variable_name(&self, var: usize) -> String {
        self.var_names[var].name(&self.party_names)
    }
}

/// Satisfiability decision with its machine-checkable evidence.
///
/// A satisfiable verdict always carries a witness. The Gaussian-elimination
/// solver attaches a certificate to unsatisfiable verdicts (a subset of
/// equations whose XOR is the contradiction 0 = 1); the enumeration solver
/// leaves the certificate out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub satisfiable: bool,
    pub witness: Option<Vec<Sign>>,
    pub certificate: Option<Vec<usize>>,
}

impl Verdict {
    fn sat(witness: Vec<Sign>) -> Self {
        Verdict {
            satisfiable: true,
            witness: Some(witness),
            certificate: None,
        }
    }

    fn unsat(certificate: Option<Vec<usize>>) -> Self {
        Verdict {
            satisfiable: false,
            witness: None,
            certificate,
        }
    }
}

/// Compiles a table and a locality structure into a parity system.
///
/// Variable creation, in first-appearance order scanning rows left to
/// right: `Local` makes one variable per (party, axis); `BlockNonlocal`
/// does the same for the non-isolated parties and folds the isolated
/// party's assigned outcomes into each row's target sign; `FullyNonlocal`
/// mints fresh variables per row. `assignment` must be present exactly for
/// the block-nonlocal model and must cover exactly the isolated party's
/// axes appearing in the table.
pub fn compile(
    table: &CorrelationTable,
    model: LocalityModel,
    assignment: Option<&OutcomeAssignment>,
) -> Result<ParitySystem> {
    match model {
        LocalityModel::Local | LocalityModel::FullyNonlocal => {
            if assignment.is_some() {
                return Err(Error::AssignmentMismatch(
                    "an outcome assignment only applies to the block-nonlocal model".to_string(),
                ));
            }
        }
        LocalityModel::BlockNonlocal { isolated_party } => {
            if isolated_party >= table.party_count() {
                return Err(Error::PartyIndex {
                    index: isolated_party,
                    parties: table.party_count(),
                });
            }
            let assignment = assignment.ok_or_else(|| {
                Error::AssignmentMismatch(
                    "the block-nonlocal model needs an outcome assignment".to_string(),
                )
            })?;
            let mut needed: Vec<PauliAxis> = table
                .rows()
                .iter()
                .map(|row| row.operators.axis(isolated_party))
                .filter(|axis| !axis.is_identity())
                .collect();
            needed.sort_unstable();
            needed.dedup();
            for axis in &needed {
                if assignment.get(*axis).is_none() {
                    return Err(Error::AssignmentMismatch(format!(
                        "missing outcome for axis {}",
                        axis.to_lower()
                    )));
                }
            }
            for axis in assignment.axes() {
                if !needed.contains(&axis) {
                    return Err(Error::AssignmentMismatch(format!(
                        "axis {} does not appear for the isolated party",
                        axis.to_lower()
                    )));
                }
            }
        }
    }

    let mut var_names: Vec<HVVariable> = Vec::new();
    let mut var_index: BTreeMap<(usize, PauliAxis, usize), usize> = BTreeMap::new();
    let mut equations = Vec::with_capacity(table.len());

    for (row_index, row) in table.rows().iter().enumerate() {
        let mut variables = Vec::new();
        let mut target = row.expected_sign;
        for (party, &axis) in row.operators.axes().iter().enumerate() {
            if axis.is_identity() {
                continue;
            }
            match model {
                LocalityModel::BlockNonlocal { isolated_party } if party == isolated_party => {
                    let value = assignment
                        .expect("validated above")
                        .get(axis)
                        .expect("validated above");
                    target = target * value;
                }
                _ => {
                    let context = match model {
                        LocalityModel::FullyNonlocal => row_index + 1,
                        _ => 0,
                    };
                    let key = (party, axis, context);
                    let index = *var_index.entry(key).or_insert_with(|| {
                        var_names.push(HVVariable {
                            party,
                            axis,
                            context,
                        });
                        var_names.len() - 1
                    });
                    variables.push(index);
                }
            }
        }
        variables.sort_unstable();
        equations.push(ParityEquation {
            variables,
            target_bit: target.bit(),
        });
    }

    Ok(ParitySystem {
        num_vars: var_names.len(),
        equations,
        var_names,
        party_names: table.party_names().to_vec(),
    })
}

/// Checks a ±1 assignment against every equation of the original system.
pub fn verify_witness(system: &ParitySystem, witness: &[Sign]) -> bool {
    if witness.len() != system.num_vars {
        return false;
    }
    system.equations.iter().all(|eq| {
        let mut product = Sign::Plus;
        for &v in &eq.variables {
            product = product * witness[v];
        }
        product == eq.target_sign()
    })
}

/// Checks that a subset of equations really is a contradiction: the XOR of
/// their variable sets is empty while their target bits XOR to 1.
pub fn verify_certificate(system: &ParitySystem, certificate: &[usize]) -> bool {
    let mut seen = vec![false; system.equations.len()];
    for &e in certificate {
        if e >= system.equations.len() || seen[e] {
            return false;
        }
        seen[e] = true;
    }
    let mut vars = Bits::new(system.num_vars);
    let mut target = false;
    for &e in certificate {
        let eq = &system.equations[e];
        for &v in &eq.variables {
            vars.flip(v);
        }
        target ^= eq.target_bit;
    }
    vars.is_empty() && target
}

/// Decides satisfiability by Gaussian elimination over GF(2).
///
/// Row operations are logged against the original equation indices, so an
/// inconsistent system yields the exact subset of equations whose XOR is
/// 0 = 1. Free variables default to +1. Witnesses and certificates are
/// re-verified against the original system before being returned.
pub fn solve_gf2(system: &ParitySystem) -> Verdict {
    let num_vars = system.num_vars;
    let num_eqs = system.equations.len();

    struct GfRow {
        vars: Bits,
        target: bool,
        history: Bits,
    }

    // Pivot rows keep their pivot variable as the lowest set bit, so
    // reducing an incoming row strictly raises its lowest set bit and the
    // loop terminates.
    let mut pivot_of_var: Vec<Option<usize>> = vec![None; num_vars];
    let mut pivots: Vec<(usize, GfRow)> = Vec::new();

    for (eq_index, eq) in system.equations.iter().enumerate() {
        let mut row = GfRow {
            vars: Bits::from_indices(num_vars, &eq.variables),
            target: eq.target_bit,
            history: Bits::from_indices(num_eqs, &[eq_index]),
        };
        let pivot_var = loop {
            match row.vars.lowest_set() {
                None => break None,
                Some(v) => match pivot_of_var[v] {
                    Some(p) => {
                        let pivot_row = &pivots[p].1;
                        row.vars.xor_with(&pivot_row.vars);
                        row.target ^= pivot_row.target;
                        row.history.xor_with(&pivot_row.history);
                    }
                    None => break Some(v),
                },
            }
        };
        match pivot_var {
            Some(v) => {
                pivot_of_var[v] = Some(pivots.len());
                pivots.push((v, row));
            }
            None => {
                if row.target {
                    let certificate = row.history.indices();
                    assert!(
                        verify_certificate(system, &certificate),
                        "elimination produced an invalid certificate"
                    );
                    return Verdict::unsat(Some(certificate));
                }
                // 0 = 0: redundant row.
            }
        }
    }

    // Back-substitution in decreasing pivot-variable order: every non-pivot
    // variable of a pivot row is either a later pivot (already assigned) or
    // free (+1, bit 0).
    let mut bits = vec![false; num_vars];
    pivots.sort_unstable_by_key(|&(var, _)| std::cmp::Reverse(var));
    for (var, row) in &pivots {
        let mut parity = row.target;
        for u in row.vars.indices() {
            if u != *var {
                parity ^= bits[u];
            }
        }
        bits[*var] = parity;
    }
    let witness: Vec<Sign> = bits.into_iter().map(Sign::from_bit).collect();
    assert!(
        verify_witness(system, &witness),
        "elimination produced an invalid witness"
    );
    Verdict::sat(witness)
}

/// Decides satisfiability by exhausting all 2^n assignments.
///
/// Assignments are visited in lexicographic order over (v0, v1, ...) with
/// +1 before -1, and the first satisfying one is returned as the witness.
/// The walk is incremental: a Gray-style violation mask is updated per
/// counter increment, so each step costs amortized O(1) mask operations.
/// Unsatisfiable systems come back without a certificate; producing one is
/// the elimination solver's job.
pub fn solve_bruteforce(system: &ParitySystem) -> Result<Verdict> {
    let num_vars = system.num_vars;
    if num_vars > BRUTE_FORCE_MAX_VARS {
        return Err(Error::EnumerationCap {
            requested: num_vars,
            max: BRUTE_FORCE_MAX_VARS,
        });
    }
    let num_eqs = system.equations.len();
    let mut violations = Bits::new(num_eqs);
    let mut var_masks: Vec<Bits> = vec![Bits::new(num_eqs); num_vars];
    for (eq_index, eq) in system.equations.iter().enumerate() {
        if eq.target_bit {
            violations.flip(eq_index);
        }
        for &v in &eq.variables {
            var_masks[v].flip(eq_index);
        }
    }

    let total: u64 = 1u64 << num_vars;
    let mut counter: u64 = 0;
    loop {
        if violations.is_empty() {
            let witness: Vec<Sign> = (0..num_vars)
                .map(|j| Sign::from_bit((counter >> (num_vars - 1 - j)) & 1 == 1))
                .collect();
            debug_assert!(verify_witness(system, &witness));
            return Ok(Verdict::sat(witness));
        }
        if counter + 1 == total {
            return Ok(Verdict::unsat(None));
        }
        // Counter bit p carries variable num_vars - 1 - p.
        let mut changed = counter ^ (counter + 1);
        while changed != 0 {
            let p = changed.trailing_zeros() as usize;
            violations.xor_with(&var_masks[num_vars - 1 - p]);
            changed &= changed - 1;
        }
        counter += 1;
    }
}

/// Verdict for one outcome assignment of a block-nonlocal scan.
#[derive(Debug, Clone, Serialize)]
pub struct AssignmentOutcome {
    /// Lowercase axis letter to ±1.
    pub assignment: BTreeMap<String, i32>,
    pub satisfiable: bool,
    /// Named witness values, present when satisfiable.
    pub witness: Option<Vec<WitnessEntry>>,
    /// Row indices whose XOR is 0 = 1, present when unsatisfiable.
    pub certificate: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessEntry {
    pub variable: String,
    pub value: i32,
}

/// Full scan over the isolated party's 2^k outcome assignments.
#[derive(Debug, Clone, Serialize)]
pub struct BlockScanReport {
    pub isolated_party: String,
    pub axes: Vec<String>,
    pub assignments: Vec<AssignmentOutcome>,
    /// True when every assignment is unsatisfiable by both solvers.
    pub no_go_holds: bool,
}

/// Enumerates every outcome assignment for the isolated party, solves each
/// system with both solvers, and reports per-assignment verdicts. A
/// disagreement between the solvers aborts with an internal-consistency
/// error.
pub fn scan_block_nonlocal(table: &CorrelationTable, isolated_party: usize) -> Result<BlockScanReport> {
    if isolated_party >= table.party_count() {
        return Err(Error::PartyIndex {
            index: isolated_party,
            parties: table.party_count(),
        });
    }
    let mut axes: Vec<PauliAxis> = table
        .rows()
        .iter()
        .map(|row| row.operators.axis(isolated_party))
        .filter(|axis| !axis.is_identity())
        .collect();
    axes.sort_unstable();
    axes.dedup();

    let mut assignments = Vec::new();
    let mut no_go_holds = true;
    for assignment in OutcomeAssignment::enumerate_for(&axes) {
        let model = LocalityModel::BlockNonlocal { isolated_party };
        let system = compile(table, model, Some(&assignment))?;
        let by_elimination = solve_gf2(&system);
        let by_enumeration = solve_bruteforce(&system)?;
        if by_elimination.satisfiable != by_enumeration.satisfiable {
            return Err(Error::Internal(format!(
                "solver disagreement for assignment {assignment}: \
                 elimination says {}, enumeration says {}",
                by_elimination.satisfiable, by_enumeration.satisfiable
            )));
        }
        no_go_holds &= !by_elimination.satisfiable;
        let witness = by_elimination.witness.as_ref().map(|w| {
            w.iter()
                .enumerate()
                .map(|(v, sign)| WitnessEntry {
                    variable: system.variable_name(v),
                    value: sign.value(),
                })
                .collect()
        });
        assignments.push(AssignmentOutcome {
            assignment: assignment.to_display_map(),
            satisfiable: by_elimination.satisfiable,
            witness,
            certificate: by_elimination.certificate,
        });
    }
    Ok(BlockScanReport {
        isolated_party: table.party_name(isolated_party).to_string(),
        axes: axes.iter().map(|a| a.to_lower().to_string()).collect(),
        assignments,
        no_go_holds,
    })
}

/// Witness values keyed by (party, axis), as needed to explain one row.
pub type WitnessValues = BTreeMap<(usize, PauliAxis), Sign>;

/// Extracts the (party, axis) → value map for the variables of one row's
/// equation from a solved system.
pub fn row_witness_values(
    system: &ParitySystem,
    witness: &[Sign],
    row_index: usize,
) -> WitnessValues {
    system.equations[row_index]
        .variables
        .iter()
        .map(|&v| {
            let var = system.var_names[v];
            ((var.party, var.axis), witness[v])
        })
        .collect()
}

/// One party's variable expressed through the other factors of a row.
#[derive(Debug, Clone, Serialize)]
pub struct Explanation {
    pub row_index: usize,
    pub subject: String,
    pub factors: Vec<String>,
    pub value: i32,
    pub rendered: String,
}

/// Expresses the first non-identity party's variable in a row as the
/// product of the row sign and the remaining factors' witness values,
/// e.g. `y_B = -(y_C·x_D) = -1`.
pub fn nonlocal_explanation(
    table: &CorrelationTable,
    row_index: usize,
    values: &WitnessValues,
) -> Result<Explanation> {
    let row = table.row(row_index);
    let support: Vec<(usize, PauliAxis)> = row
        .operators
        .axes()
        .iter()
        .enumerate()
        .filter(|(_, axis)| !axis.is_identity())
        .map(|(party, &axis)| (party, axis))
        .collect();
    if support.len() < 2 {
        return Err(Error::RowNotExplainable {
            row: row_index,
            factors: support.len(),
        });
    }
    let subject = support[0];
    let factors = &support[1..];

    let mut value = row.expected_sign;
    let mut factor_names = Vec::with_capacity(factors.len());
    for &(party, axis) in factors {
        let sign = values
            .get(&(party, axis))
            .copied()
            .ok_or(Error::MissingWitnessValue {
                row: row_index,
                party,
                axis: axis.to_lower(),
            })?;
        value = value * sign;
        factor_names.push(format!("{}_{}", axis.to_lower(), table.party_name(party)));
    }
    if let Some(&subject_value) = values.get(&subject) {
        if subject_value != value {
            return Err(Error::WitnessViolatesRow { row: row_index });
        }
    }

    let subject_name = format!("{}_{}", subject.1.to_lower(), table.party_name(subject.0));
    let sign_char = match row.expected_sign {
        Sign::Plus => '+',
        Sign::Minus => '-',
    };
    let rendered = format!(
        "{subject_name} = {sign_char}({}) = {value}",
        factor_names.join("·")
    );
    Ok(Explanation {
        row_index,
        subject: subject_name,
        factors: factor_names,
        value: value.value(),
        rendered,
    })
}

/// Growable bitset over `u64` limbs.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits {
    len: usize,
    limbs: Vec<u64>,
}

impl Bits {
    fn new(len: usize) -> Self {
        Bits {
            len,
            limbs: vec![0; len.div_ceil(64)],
        }
    }

    fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut bits = Bits::new(len);
        for &i in indices {
            bits.flip(i);
        }
        bits
    }

    #[inline]
    fn flip(&mut self, index: usize) {
        debug_assert!(index < self.len);
        self.limbs[index / 64] ^= 1u64 << (index % 64);
    }

    #[inline]
    fn xor_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
    }

    fn is_empty(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    fn lowest_set(&self) -> Option<usize> {
        for (i, &limb) in self.limbs.iter().enumerate() {
            if limb != 0 {
                return Some(i * 64 + limb.trailing_zeros() as usize);
            }
        }
        None
    }

    fn indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &limb) in self.limbs.iter().enumerate() {
            let mut rest = limb;
            while rest != 0 {
                out.push(i * 64 + rest.trailing_zeros() as usize);
                rest &= rest - 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::canonical_table;

    fn all_plus(axes: &[(PauliAxis, Sign)]) -> OutcomeAssignment {
        OutcomeAssignment::from_pairs(axes).unwrap()
    }

    fn xyz_assignment(x: Sign, y: Sign, z: Sign) -> OutcomeAssignment {
        all_plus(&[(PauliAxis::X, x), (PauliAxis::Y, y), (PauliAxis::Z, z)])
    }

    #[test]
    fn block_compile_shape() {
        let table = canonical_table();
        let assignment = xyz_assignment(Sign::Plus, Sign::Plus, Sign::Plus);
        let system = compile(
            &table,
            LocalityModel::BlockNonlocal { isolated_party: 4 },
            Some(&assignment),
        )
        .unwrap();
        assert_eq!(system.equations.len(), 16);
        assert_eq!(system.num_vars, 12);

        // Row 2 (YYIIZ, +1) with ε = +1 becomes y_A ⊕ y_B = 0.
        let eq = &system.equations[2];
        assert_eq!(eq.variables.len(), 2);
        assert!(!eq.target_bit);
        let names: Vec<String> = eq
            .variables
            .iter()
            .map(|&v| system.variable_name(v))
            .collect();
        assert_eq!(names, vec!["y_A", "y_B"]);
    }

    #[test]
    fn block_compile_flips_targets_with_the_assignment() {
        let table = canonical_table();
        let minus_z = xyz_assignment(Sign::Plus, Sign::Plus, Sign::Minus);
        let system = compile(
            &table,
            LocalityModel::BlockNonlocal { isolated_party: 4 },
            Some(&minus_z),
        )
        .unwrap();
        // Row 2 (YYIIZ, +1) with ε = -1 becomes y_A ⊕ y_B = 1.
        assert!(system.equations[2].target_bit);
        // Row 0 (ZXXII, +1) has no isolated factor: target stays 0.
        assert!(!system.equations[0].target_bit);
    }

    #[test]
    fn local_compile_shape() {
        let system = compile(&canonical_table(), LocalityModel::Local, None).unwrap();
        assert_eq!(system.equations.len(), 16);
        assert_eq!(system.num_vars, 15);
    }

    #[test]
    fn fully_nonlocal_compile_is_row_disjoint() {
        let system = compile(&canonical_table(), LocalityModel::FullyNonlocal, None).unwrap();
        assert_eq!(system.equations.len(), 16);
        let mut seen: Vec<usize> = Vec::new();
        for eq in &system.equations {
            for &v in &eq.variables {
                assert!(!seen.contains(&v), "variable {v} shared between rows");
                seen.push(v);
            }
        }
        assert_eq!(seen.len(), system.num_vars);
        assert!(system.var_names.iter().all(|v| v.context > 0));
    }

    #[test]
    fn compile_validates_assignments() {
        let table = canonical_table();
        let model = LocalityModel::BlockNonlocal { isolated_party: 4 };
        assert!(matches!(
            compile(&table, model, None),
            Err(Error::AssignmentMismatch(_))
        ));
        let partial = all_plus(&[(PauliAxis::X, Sign::Plus)]);
        assert!(matches!(
            compile(&table, model, Some(&partial)),
            Err(Error::AssignmentMismatch(_))
        ));
        let assignment = xyz_assignment(Sign::Plus, Sign::Plus, Sign::Plus);
        assert!(matches!(
            compile(&table, LocalityModel::Local, Some(&assignment)),
            Err(Error::AssignmentMismatch(_))
        ));
        assert!(matches!(
            compile(
                &table,
                LocalityModel::BlockNonlocal { isolated_party: 9 },
                Some(&assignment)
            ),
            Err(Error::PartyIndex { index: 9, parties: 5 })
        ));
    }

    #[test]
    fn gf2_empty_system() {
        let verdict = solve_gf2(&ParitySystem::anonymous(0, Vec::new()));
        assert!(verdict.satisfiable);
        assert_eq!(verdict.witness, Some(Vec::new()));
    }

    #[test]
    fn gf2_single_equation_witness() {
        let system = ParitySystem::anonymous(
            2,
            vec![ParityEquation {
                variables: vec![0, 1],
                target_bit: true,
            }],
        );
        let verdict = solve_gf2(&system);
        assert!(verdict.satisfiable);
        let witness = verdict.witness.unwrap();
        assert!(verify_witness(&system, &witness));
        // Free variable defaults to +1; the pivot picks up the parity.
        assert_eq!(witness, vec![Sign::Minus, Sign::Plus]);
    }

    #[test]
    fn bruteforce_single_equation_is_lexicographically_first() {
        let system = ParitySystem::anonymous(
            2,
            vec![ParityEquation {
                variables: vec![0, 1],
                target_bit: true,
            }],
        );
        let verdict = solve_bruteforce(&system).unwrap();
        assert_eq!(verdict.witness.unwrap(), vec![Sign::Plus, Sign::Minus]);
    }

    #[test]
    fn bruteforce_unconstrained_system() {
        let verdict = solve_bruteforce(&ParitySystem::anonymous(3, Vec::new())).unwrap();
        assert_eq!(
            verdict.witness.unwrap(),
            vec![Sign::Plus, Sign::Plus, Sign::Plus]
        );
    }

    #[test]
    fn bruteforce_honors_the_variable_cap() {
        let system = ParitySystem::anonymous(25, Vec::new());
        assert!(matches!(
            solve_bruteforce(&system),
            Err(Error::EnumerationCap { requested: 25, max: 24 })
        ));
    }

    #[test]
    fn local_model_is_unsatisfiable() {
        let system = compile(&canonical_table(), LocalityModel::Local, None).unwrap();
        let by_elimination = solve_gf2(&system);
        assert!(!by_elimination.satisfiable);
        let certificate = by_elimination.certificate.unwrap();
        assert!(verify_certificate(&system, &certificate));
        let by_enumeration = solve_bruteforce(&system).unwrap();
        assert!(!by_enumeration.satisfiable);
    }

    #[test]
    fn fully_nonlocal_model_is_satisfiable() {
        let system = compile(&canonical_table(), LocalityModel::FullyNonlocal, None).unwrap();
        let verdict = solve_gf2(&system);
        assert!(verdict.satisfiable);
        assert!(verify_witness(&system, &verdict.witness.unwrap()));
    }

    #[test]
    fn block_scan_isolating_each_party() {
        let table = canonical_table();
        for party in 0..5 {
            let report = scan_block_nonlocal(&table, party).unwrap();
            assert_eq!(report.assignments.len(), 8);
            assert!(report.no_go_holds, "party {party}");
            for outcome in &report.assignments {
                assert!(!outcome.satisfiable);
                assert!(outcome.certificate.is_some());
            }
        }
    }

    #[test]
    fn block_scan_on_a_single_factor_row() {
        let table = CorrelationTable::parse("IIIIZ:+1").unwrap();
        let report = scan_block_nonlocal(&table, 4).unwrap();
        assert_eq!(report.assignments.len(), 2);
        assert!(report.assignments[0].satisfiable); // z = +1
        assert!(!report.assignments[1].satisfiable); // z = -1
        assert!(!report.no_go_holds);
    }

    #[test]
    fn certificates_are_minimal_contradictions() {
        // Dropping any single equation from a certificate must break it.
        let table = canonical_table();
        let report = scan_block_nonlocal(&table, 4).unwrap();
        let assignment = xyz_assignment(Sign::Plus, Sign::Plus, Sign::Plus);
        let system = compile(
            &table,
            LocalityModel::BlockNonlocal { isolated_party: 4 },
            Some(&assignment),
        )
        .unwrap();
        let certificate = report.assignments[0].certificate.as_ref().unwrap();
        assert!(verify_certificate(&system, certificate));
        for drop in 0..certificate.len() {
            let rest: Vec<usize> = certificate
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, &e)| e)
                .collect();
            assert!(!verify_certificate(&system, &rest));
        }
    }

    #[test]
    fn explanation_of_a_three_factor_row() {
        let table = canonical_table();
        // Row 6 is IYYXI with sign -1.
        let mut values = WitnessValues::new();
        values.insert((2, PauliAxis::Y), Sign::Plus);
        values.insert((3, PauliAxis::X), Sign::Plus);
        let explanation = nonlocal_explanation(&table, 6, &values).unwrap();
        assert_eq!(explanation.rendered, "y_B = -(y_C·x_D) = -1");
        assert_eq!(explanation.value, -1);
    }

    #[test]
    fn explanation_of_a_two_factor_row() {
        let table = CorrelationTable::parse("XXIII:+1").unwrap();
        let mut values = WitnessValues::new();
        values.insert((1, PauliAxis::X), Sign::Plus);
        let explanation = nonlocal_explanation(&table, 0, &values).unwrap();
        assert_eq!(explanation.rendered, "x_A = +(x_B) = +1");
    }

    #[test]
    fn explanation_needs_two_factors() {
        let table = CorrelationTable::parse("ZIIII:+1").unwrap();
        let err = nonlocal_explanation(&table, 0, &WitnessValues::new()).unwrap_err();
        assert!(matches!(
            err,
            Error::RowNotExplainable { row: 0, factors: 1 }
        ));
    }

    #[test]
    fn explanation_rejects_a_violating_witness() {
        let table = canonical_table();
        let mut values = WitnessValues::new();
        values.insert((1, PauliAxis::Y), Sign::Plus); // claims y_B = +1
        values.insert((2, PauliAxis::Y), Sign::Plus);
        values.insert((3, PauliAxis::X), Sign::Plus); // product forces y_B = -1
        assert!(matches!(
            nonlocal_explanation(&table, 6, &values),
            Err(Error::WitnessViolatesRow { row: 6 })
        ));
    }

    #[test]
    fn row_witness_values_extracts_the_row_variables() {
        let table = canonical_table();
        let system = compile(&table, LocalityModel::FullyNonlocal, None).unwrap();
        let verdict = solve_gf2(&system);
        let witness = verdict.witness.unwrap();
        let values = row_witness_values(&system, &witness, 6);
        assert_eq!(values.len(), 3);
        let explanation = nonlocal_explanation(&table, 6, &values).unwrap();
        assert!(explanation.rendered.starts_with("y_B = -("));
    }
}
