//! Command handlers. Each one assembles a typed result payload, wraps it in
//! the report envelope, and renders both the JSON and the text form from
//! the same data.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use mmes_core::correlations::{canonical_table, mmes_purity_report, verify_table};
use mmes_core::experiment::{expected_match_rate, run_protocol, ProtocolReport};
use mmes_core::hvmodel::{
    compile, nonlocal_explanation, row_witness_values, scan_block_nonlocal, solve_bruteforce,
    solve_gf2, AssignmentOutcome, Explanation, LocalityModel, WitnessEntry, BRUTE_FORCE_MAX_VARS,
};
use mmes_core::qstate::StateVector;
use mmes_core::{build_mmes5, CorrelationTable, Error as CoreError, PurityReport};

use crate::report::{tag, Envelope, InputsEcho, EMBEDDED_TABLE};

/// Exit codes promised by the command-line contract.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INPUT_ERROR: u8 = 2;
pub const EXIT_INTERNAL_ERROR: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Core(CoreError),
    Io { path: PathBuf, source: std::io::Error },
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Usage(message) => write!(f, "{message}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_internal() => EXIT_INTERNAL_ERROR,
            _ => EXIT_INPUT_ERROR,
        }
    }
}

/// Rendered command outcome: both output forms plus the pass verdict.
pub struct CommandOutput {
    pub text: String,
    pub json: String,
    pub pass: bool,
}

fn finish<T: Serialize>(envelope: Envelope<T>, body: String) -> CommandOutput {
    let text = format!("{}{body}{}", envelope.text_header(), envelope.text_footer());
    CommandOutput {
        json: envelope.to_json(),
        text,
        pass: envelope.pass,
    }
}

/// Loads a table file, or falls back to the embedded canonical one.
fn load_table(path: Option<&Path>) -> Result<(CorrelationTable, String), CliError> {
    match path {
        None => Ok((canonical_table(), EMBEDDED_TABLE.to_string())),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            let table = CorrelationTable::parse(&text)?;
            Ok((table, path.display().to_string()))
        }
    }
}

/// Reference equation numbers (2..=17) when the table is the canonical one.
fn reference_equations(table: &CorrelationTable) -> Option<Vec<usize>> {
    if *table == canonical_table() {
        Some((0..table.len()).map(|i| i + 2).collect())
    } else {
        None
    }
}

fn eq_suffix(eqs: &Option<Vec<usize>>, row: usize) -> String {
    match eqs {
        Some(eqs) => format!(" (eq {:2})", eqs[row]),
        None => String::new(),
    }
}

// ---------------------------------------------------------------------------
// verify-state

#[derive(Debug, Serialize)]
struct StateResults {
    norm_squared: f64,
    norm_ok: bool,
    /// All 32 amplitude moduli equal 1/√32 within 1e-12.
    amplitude_moduli_ok: bool,
    purity: PurityReport,
}

pub fn verify_state(
    table: Option<&Path>,
    corrupt_amplitude: Option<usize>,
) -> Result<CommandOutput, CliError> {
    // Accepted but unused by this command.
    let table_echo = match table {
        None => EMBEDDED_TABLE.to_string(),
        Some(path) => path.display().to_string(),
    };

    let state = match corrupt_amplitude {
        None => build_mmes5(),
        Some(index) => {
            let reference = build_mmes5();
            if index >= reference.dim() {
                return Err(CliError::Usage(format!(
                    "amplitude index {index} out of range (state has {} amplitudes)",
                    reference.dim()
                )));
            }
            let mut amplitudes = reference.amplitudes().to_vec();
            amplitudes[index] *= 1.25;
            StateVector::new_unnormalized(reference.num_qubits(), amplitudes)?
        }
    };

    let norm_squared = state.norm_sqr();
    let norm_ok = (norm_squared - 1.0).abs() <= 1e-12;
    let target_modulus = 1.0 / 32.0_f64.sqrt();
    let amplitude_moduli_ok = state
        .amplitudes()
        .iter()
        .all(|a| (a.norm() - target_modulus).abs() <= 1e-12);
    let purity = mmes_purity_report(&state)?;
    let pass = norm_ok && amplitude_moduli_ok && purity.pass;

    let names = canonical_table().party_names().to_vec();
    let mut body = String::new();
    let _ = writeln!(
        body,
        "norm²: {norm_squared:.15}  (|norm²-1| ≤ 1e-12: {})",
        tag(norm_ok)
    );
    let _ = writeln!(
        body,
        "amplitude moduli equal 1/√32 within 1e-12: {}",
        tag(amplitude_moduli_ok)
    );
    for s in purity.singles.iter().chain(&purity.pairs) {
        let label: String = s.qubits.iter().map(|&q| names[q].as_str()).collect();
        let _ = writeln!(
            body,
            "purity {label:<2}: {:.12}  (target {}): {}",
            s.purity,
            s.expected,
            tag(s.pass)
        );
    }

    let results = StateResults {
        norm_squared,
        norm_ok,
        amplitude_moduli_ok,
        purity,
    };
    let inputs = InputsEcho {
        table: Some(table_echo),
        ..Default::default()
    };
    Ok(finish(Envelope::new("verify-state", inputs, results, pass), body))
}

// ---------------------------------------------------------------------------
// verify-correlations

pub fn verify_correlations(
    table_path: Option<&Path>,
    tolerance: f64,
) -> Result<CommandOutput, CliError> {
    let (table, table_echo) = load_table(table_path)?;
    let verification = verify_table(&build_mmes5(), &table, tolerance)?;
    let eqs = reference_equations(&table);

    let mut body = String::new();
    if verification.rows.is_empty() {
        body.push_str("warning: empty table, verification passes vacuously\n");
    }
    for row in &verification.rows {
        let _ = writeln!(
            body,
            "row {:2}{}  {}:{:+}  computed {:+.12}  {}",
            row.index,
            eq_suffix(&eqs, row.index),
            row.operators,
            row.expected,
            row.computed,
            tag(row.pass)
        );
    }
    let passed = verification.rows.iter().filter(|r| r.pass).count();
    let _ = writeln!(body, "rows passing: {passed}/{}", verification.rows.len());

    let pass = verification.pass;
    let inputs = InputsEcho {
        table: Some(table_echo),
        tolerance: Some(tolerance),
        ..Default::default()
    };
    Ok(finish(
        Envelope::new("verify-correlations", inputs, verification, pass),
        body,
    ))
}

// ---------------------------------------------------------------------------
// nogo

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModelArg {
    Local,
    Block,
    Full,
}

impl ModelArg {
    fn as_str(self) -> &'static str {
        match self {
            ModelArg::Local => "local",
            ModelArg::Block => "block",
            ModelArg::Full => "full",
        }
    }
}

#[derive(Debug, Serialize)]
struct SolveResults {
    model: String,
    variables: usize,
    equations: usize,
    satisfiable: bool,
    /// Cross-check by exhaustive enumeration: "agrees" or "skipped (...)".
    enumeration: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<WitnessEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_rows: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_equations: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    explanations: Option<Vec<Explanation>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

/// Solves one compiled system with both solvers and packages the verdict.
fn solve_both(
    table: &CorrelationTable,
    model: LocalityModel,
    model_name: &str,
    explain: bool,
) -> Result<SolveResults, CliError> {
    let system = compile(table, model, None)?;
    let by_elimination = solve_gf2(&system);
    let enumeration = if system.num_vars <= BRUTE_FORCE_MAX_VARS {
        let by_enumeration = solve_bruteforce(&system)?;
        if by_elimination.satisfiable != by_enumeration.satisfiable {
            return Err(CoreError::Internal(format!(
                "solver disagreement on the {model_name} system: elimination says {}, \
                 enumeration says {}",
                by_elimination.satisfiable, by_enumeration.satisfiable
            ))
            .into());
        }
        "agrees".to_string()
    } else {
        format!(
            "skipped ({} variables exceed the {BRUTE_FORCE_MAX_VARS}-variable cap)",
            system.num_vars
        )
    };

    let eqs = reference_equations(table);
    let witness_entries = by_elimination.witness.as_ref().map(|witness| {
        witness
            .iter()
            .enumerate()
            .map(|(v, sign)| WitnessEntry {
                variable: system.variable_name(v),
                value: sign.value(),
            })
            .collect::<Vec<_>>()
    });
    let certificate_equations = by_elimination
        .certificate
        .as_ref()
        .and_then(|rows| eqs.as_ref().map(|eqs| rows.iter().map(|&r| eqs[r]).collect()));

    let explanations = match (&by_elimination.witness, explain) {
        (Some(witness), true) => {
            let mut out = Vec::new();
            for (row_index, row) in table.rows().iter().enumerate() {
                if row.operators.weight() < 2 {
                    continue;
                }
                let values = row_witness_values(&system, witness, row_index);
                out.push(nonlocal_explanation(table, row_index, &values)?);
            }
            Some(out)
        }
        _ => None,
    };

    Ok(SolveResults {
        model: model_name.to_string(),
        variables: system.num_vars,
        equations: system.equations.len(),
        satisfiable: by_elimination.satisfiable,
        enumeration,
        witness: witness_entries,
        certificate_rows: by_elimination.certificate,
        certificate_equations,
        explanations,
        note: None,
    })
}

fn render_solve(results: &SolveResults, eqs: &Option<Vec<usize>>) -> String {
    let mut body = String::new();
    let _ = writeln!(
        body,
        "system: {} equations over {} variables",
        results.equations, results.variables
    );
    let _ = writeln!(
        body,
        "verdict: {}  (enumeration cross-check: {})",
        if results.satisfiable { "SAT" } else { "UNSAT" },
        results.enumeration
    );
    if let Some(rows) = &results.certificate_rows {
        let _ = writeln!(body, "certificate rows: {rows:?}");
        if let Some(cert_eqs) = &results.certificate_equations {
            let _ = writeln!(body, "certificate equations: {cert_eqs:?}");
        }
    }
    if let Some(witness) = &results.witness {
        let rendered: Vec<String> = witness
            .iter()
            .map(|w| format!("{}={:+}", w.variable, w.value))
            .collect();
        let _ = writeln!(body, "witness: {}", rendered.join(" "));
    }
    if let Some(explanations) = &results.explanations {
        for e in explanations {
            let _ = writeln!(
                body,
                "row {:2}{}: {}",
                e.row_index,
                eq_suffix(eqs, e.row_index),
                e.rendered
            );
        }
    }
    if let Some(note) = &results.note {
        let _ = writeln!(body, "note: {note}");
    }
    body
}

/// Per-assignment verdict with reference-equation labels attached.
#[derive(Debug, Serialize)]
struct AssignmentOut {
    assignment: std::collections::BTreeMap<String, i32>,
    satisfiable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<WitnessEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_rows: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_equations: Option<Vec<usize>>,
}

impl AssignmentOut {
    fn from_core(outcome: AssignmentOutcome, eqs: &Option<Vec<usize>>) -> Self {
        let certificate_equations = outcome
            .certificate
            .as_ref()
            .and_then(|rows| eqs.as_ref().map(|eqs| rows.iter().map(|&r| eqs[r]).collect()));
        AssignmentOut {
            assignment: outcome.assignment,
            satisfiable: outcome.satisfiable,
            witness: outcome.witness,
            certificate_rows: outcome.certificate,
            certificate_equations,
        }
    }

    fn render(&self) -> String {
        let assignment: Vec<String> = self
            .assignment
            .iter()
            .map(|(axis, value)| format!("{axis}={value:+}"))
            .collect();
        let mut line = format!(
            "assignment {}: {}",
            assignment.join(" "),
            if self.satisfiable { "SAT" } else { "UNSAT" }
        );
        if let Some(rows) = &self.certificate_rows {
            let _ = write!(line, "  certificate rows {rows:?}");
        }
        if let Some(eqs) = &self.certificate_equations {
            let _ = write!(line, " (eqs {eqs:?})");
        }
        if let Some(witness) = &self.witness {
            let rendered: Vec<String> = witness
                .iter()
                .map(|w| format!("{}={:+}", w.variable, w.value))
                .collect();
            let _ = write!(line, "  witness {}", rendered.join(" "));
        }
        line
    }
}

#[derive(Debug, Serialize)]
struct BlockScanOut {
    isolated_party: String,
    axes: Vec<String>,
    assignments: Vec<AssignmentOut>,
    no_go_holds: bool,
}

impl BlockScanOut {
    fn build(
        table: &CorrelationTable,
        isolated: usize,
        eqs: &Option<Vec<usize>>,
    ) -> Result<Self, CliError> {
        let report = scan_block_nonlocal(table, isolated)?;
        Ok(BlockScanOut {
            isolated_party: report.isolated_party,
            axes: report.axes,
            assignments: report
                .assignments
                .into_iter()
                .map(|outcome| AssignmentOut::from_core(outcome, eqs))
                .collect(),
            no_go_holds: report.no_go_holds,
        })
    }

    fn render(&self, body: &mut String) {
        for assignment in &self.assignments {
            let _ = writeln!(body, "{}", assignment.render());
        }
        let unsat = self.assignments.iter().filter(|a| !a.satisfiable).count();
        let _ = writeln!(
            body,
            "isolated {}: {unsat}/{} unsatisfiable — no-go {}",
            self.isolated_party,
            self.assignments.len(),
            if self.no_go_holds { "holds" } else { "fails" }
        );
    }
}

pub fn nogo(
    model: ModelArg,
    isolated: Option<&str>,
    table_path: Option<&Path>,
) -> Result<CommandOutput, CliError> {
    let (table, table_echo) = load_table(table_path)?;
    let eqs = reference_equations(&table);
    let inputs = InputsEcho {
        table: Some(table_echo),
        model: Some(model.as_str().to_string()),
        isolated: isolated.map(str::to_string),
        ..Default::default()
    };

    match model {
        ModelArg::Block => {
            let label = isolated.ok_or_else(|| {
                CliError::Usage("--isolated is required for --model block".to_string())
            })?;
            let party = table.party_index(label).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown party {label:?}; table parties are {}",
                    table.party_names().join(", ")
                ))
            })?;
            let scan = BlockScanOut::build(&table, party, &eqs)?;
            let mut body = String::new();
            scan.render(&mut body);
            let pass = scan.no_go_holds;
            Ok(finish(Envelope::new("nogo", inputs, scan, pass), body))
        }
        ModelArg::Local | ModelArg::Full => {
            if isolated.is_some() {
                return Err(CliError::Usage(
                    "--isolated only applies to --model block".to_string(),
                ));
            }
            let (locality, explain) = match model {
                ModelArg::Local => (LocalityModel::Local, false),
                _ => (LocalityModel::FullyNonlocal, true),
            };
            let mut results = solve_both(&table, locality, model.as_str(), explain)?;
            // The local no-go holds when the system is unsatisfiable; the
            // fully nonlocal model is expected to succeed.
            let pass = match model {
                ModelArg::Local => !results.satisfiable,
                _ => results.satisfiable,
            };
            if model == ModelArg::Full && results.satisfiable {
                results.note = Some(
                    "fully nonlocal variables reproduce every row; the model is \
                     indistinguishable from the quantum predictions"
                        .to_string(),
                );
            }
            let body = render_solve(&results, &eqs);
            Ok(finish(Envelope::new("nogo", inputs, results, pass), body))
        }
    }
}

// ---------------------------------------------------------------------------
// scan-all

#[derive(Debug, Serialize)]
struct ScanAllResults {
    scans: Vec<BlockScanOut>,
    systems_total: usize,
    systems_unsatisfiable: usize,
}

pub fn scan_all(table_path: Option<&Path>) -> Result<CommandOutput, CliError> {
    let (table, table_echo) = load_table(table_path)?;
    let eqs = reference_equations(&table);
    let mut scans = Vec::new();
    for party in 0..table.party_count() {
        scans.push(BlockScanOut::build(&table, party, &eqs)?);
    }
    let systems_total: usize = scans.iter().map(|s| s.assignments.len()).sum();
    let systems_unsatisfiable: usize = scans
        .iter()
        .map(|s| s.assignments.iter().filter(|a| !a.satisfiable).count())
        .sum();
    let pass = scans.iter().all(|s| s.no_go_holds);

    let mut body = String::new();
    for scan in &scans {
        scan.render(&mut body);
    }
    let _ = writeln!(body, "systems: {systems_unsatisfiable}/{systems_total} unsatisfiable");

    let results = ScanAllResults {
        scans,
        systems_total,
        systems_unsatisfiable,
    };
    let inputs = InputsEcho {
        table: Some(table_echo),
        ..Default::default()
    };
    Ok(finish(Envelope::new("scan-all", inputs, results, pass), body))
}

// ---------------------------------------------------------------------------
// compat

#[derive(Debug, Serialize)]
struct GroupOut {
    rows: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference_equations: Option<Vec<usize>>,
    joint_context: String,
}

#[derive(Debug, Serialize)]
struct CompatResults {
    groups: Vec<GroupOut>,
    group_count: usize,
    multi_row_groups: usize,
}

pub fn compat(table_path: Option<&Path>) -> Result<CommandOutput, CliError> {
    let (table, table_echo) = load_table(table_path)?;
    let eqs = reference_equations(&table);
    let cover = mmes_core::minimum_context_cover(&table);
    let groups: Vec<GroupOut> = cover
        .iter()
        .map(|group| GroupOut {
            rows: group.row_indices.clone(),
            reference_equations: eqs
                .as_ref()
                .map(|eqs| group.row_indices.iter().map(|&r| eqs[r]).collect()),
            joint_context: group.joint_context.to_string(),
        })
        .collect();
    let multi_row_groups = groups.iter().filter(|g| g.rows.len() > 1).count();

    let mut body = String::new();
    for (index, group) in groups.iter().enumerate() {
        let eq_part = match &group.reference_equations {
            Some(eqs) => format!(" (eqs {eqs:?})"),
            None => String::new(),
        };
        let _ = writeln!(
            body,
            "group {:2}: rows {:?}{eq_part}  setting {}",
            index + 1,
            group.rows,
            group.joint_context
        );
    }
    let _ = writeln!(
        body,
        "groups: {} ({} with more than one row)",
        groups.len(),
        multi_row_groups
    );

    let results = CompatResults {
        group_count: groups.len(),
        multi_row_groups,
        groups,
    };
    let inputs = InputsEcho {
        table: Some(table_echo),
        ..Default::default()
    };
    Ok(finish(Envelope::new("compat", inputs, results, true), body))
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StateArg {
    /// The embedded five-qubit entangled state.
    Mmes,
    /// The product state |00000⟩ (a control that must fail).
    Product,
}

impl StateArg {
    fn as_str(self) -> &'static str {
        match self {
            StateArg::Mmes => "mmes",
            StateArg::Product => "product",
        }
    }
}

#[derive(Debug, Serialize)]
struct SimulateResults {
    state: String,
    #[serde(flatten)]
    report: ProtocolReport,
}

pub fn simulate(
    runs: u64,
    seed: u64,
    table_path: Option<&Path>,
    state_arg: StateArg,
) -> Result<CommandOutput, CliError> {
    let (table, table_echo) = load_table(table_path)?;
    let state = match state_arg {
        StateArg::Mmes => build_mmes5(),
        StateArg::Product => StateVector::basis_state(5, 0)?,
    };
    let report = run_protocol(&state, &table, runs, seed)?;
    let eqs = reference_equations(&table);
    let rates = expected_match_rate(&table);

    let mut body = String::new();
    for row in &report.rows {
        let rate = match row.agreement_rate {
            Some(rate) => format!("{:.2}%", rate * 100.0),
            None => "n/a".to_string(),
        };
        let _ = writeln!(
            body,
            "row {:2}{}  {}:{:+}  samples {:6} (expected match rate {:.5})  \
             products +1:{} -1:{}  agreement {rate}  {}",
            row.index,
            eq_suffix(&eqs, row.index),
            row.operators,
            row.expected,
            row.samples,
            rates[row.index],
            row.product_plus,
            row.product_minus,
            tag(row.pass)
        );
    }
    if let Some(min) = report.rows.iter().map(|r| r.samples).min() {
        let _ = writeln!(body, "least-sampled row: {min} samples");
    }

    let pass = report.pass;
    let results = SimulateResults {
        state: state_arg.as_str().to_string(),
        report,
    };
    let inputs = InputsEcho {
        table: Some(table_echo),
        runs: Some(runs),
        seed: Some(seed),
        state: Some(state_arg.as_str().to_string()),
        ..Default::default()
    };
    Ok(finish(Envelope::new("simulate", inputs, results, pass), body))
}
