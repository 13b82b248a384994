//! Verification toolkit for a five-qubit maximally multipartite entangled
//! state and the hidden-variable models that try to imitate it.
//!
//! The crate has four layers:
//!
//! * [`qstate`] — dense statevector kernels: Pauli-string application,
//!   expectation values and reduced-state purity, plus the independent
//!   dense-matrix oracles in [`dense`] used to cross-check them.
//! * [`correlations`] — the canonical five-qubit state, the sixteen
//!   Pauli correlations it satisfies, table verification and the
//!   measurement-compatibility analysis.
//! * [`hvmodel`] — compilation of correlation tables under a locality
//!   structure into parity systems over GF(2), decided independently by
//!   Gaussian elimination (with machine-checkable certificates) and by
//!   exhaustive enumeration.
//! * [`experiment`] — Born-rule simulation of the measurement protocol
//!   with reproducible, order-independent runs.

pub mod correlations;
pub mod dense;
pub mod error;
pub mod experiment;
pub mod hvmodel;
pub mod qstate;
pub mod rng;

pub use correlations::{
    build_mmes5, canonical_table, minimum_context_cover, mmes_purity_report, reference_equation,
    rows_compatible, rows_schedulable, verify_table, CompatibilityGroup, CorrelationRow,
    CorrelationTable, PurityReport, Sign, TableVerification,
};
pub use error::{Error, Result};
pub use experiment::{
    expected_match_rate, outcome_distribution, run_protocol, sample_outcomes, simulate_run,
    MeasurementContext, ProtocolReport, RunRecord,
};
pub use hvmodel::{
    compile, nonlocal_explanation, scan_block_nonlocal, solve_bruteforce, solve_gf2,
    verify_certificate, verify_witness, BlockScanReport, HVVariable, LocalityModel,
    OutcomeAssignment, ParityEquation, ParitySystem, Verdict,
};
pub use qstate::{PauliAxis, PauliString, StateVector};
