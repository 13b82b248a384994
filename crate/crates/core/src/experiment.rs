//! Simulation of the proposed measurement protocol: Born-rule sampling of
//! joint outcomes, independent uniform setting choices per run,
//! post-selection of runs matching table rows, and outcome-product
//! statistics.
//!
//! Reproducibility contract: run k draws from `rng::substream(seed, k)`,
//! first one axis per party (parties in order, `next_u64() % 3` mapping
//! 0→X, 1→Y, 2→Z), then one `next_f64()` that picks the outcome tuple by
//! inverse CDF over the 32-entry joint distribution in basis order.
//! Identical (seed, runs, state, table) inputs therefore produce identical
//! reports bit for bit, and runs may be computed in any order.

use std::fmt;

use serde::Serialize;

use crate::correlations::{CorrelationTable, Sign, PARTY_COUNT};
use crate::error::{Error, Result};
use crate::qstate::{PauliAxis, StateVector};
use crate::rng::{substream, SplitMix64};

/// Tolerance for the joint distribution summing to one.
pub const DISTRIBUTION_TOL: f64 = 1e-10;

/// A full measurement setting: one non-identity axis per party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeasurementContext {
    axes: [PauliAxis; PARTY_COUNT],
}

impl MeasurementContext {
    pub fn new(axes: [PauliAxis; PARTY_COUNT]) -> Result<Self> {
        if axes.iter().any(|a| a.is_identity()) {
            return Err(Error::AssignmentMismatch(
                "a measurement context needs a real axis for every party".to_string(),
            ));
        }
        Ok(MeasurementContext { axes })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let axes: Vec<PauliAxis> = text
            .chars()
            .map(PauliAxis::from_char)
            .collect::<Result<Vec<_>>>()?;
        let axes: [PauliAxis; PARTY_COUNT] =
            axes.try_into().map_err(|v: Vec<PauliAxis>| Error::QubitCountMismatch {
                operator: v.len(),
                state: PARTY_COUNT,
            })?;
        MeasurementContext::new(axes)
    }

    pub fn axes(&self) -> &[PauliAxis; PARTY_COUNT] {
        &self.axes
    }

    pub fn axis(&self, party: usize) -> PauliAxis {
        self.axes[party]
    }

    /// True when this setting measures the row: every non-identity factor
    /// of the row agrees with the context's axis for that party.
    pub fn matches_row(&self, operators: &crate::qstate::PauliString) -> bool {
        operators
            .axes()
            .iter()
            .enumerate()
            .all(|(party, &axis)| axis.is_identity() || axis == self.axes[party])
    }

    /// Base-3 code of the context (party 0 most significant; X=0, Y=1, Z=2).
    fn code(&self) -> usize {
        self.axes.iter().fold(0, |acc, axis| {
            let digit = match axis {
                PauliAxis::X => 0,
                PauliAxis::Y => 1,
                PauliAxis::Z => 2,
                PauliAxis::I => unreachable!("contexts have no identity"),
            };
            acc * 3 + digit
        })
    }
}

impl fmt::Display for MeasurementContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for axis in &self.axes {
            write!(f, "{axis}")?;
        }
        Ok(())
    }
}

/// Joint probability of every outcome tuple under the context.
///
/// Outcome tuples are indexed like basis states: bit of party q set means
/// outcome -1. Each probability is the squared norm of the state projected
/// by the per-party eigenprojectors `(1 ± P)/2`; the 32 values must sum to
/// one within [`DISTRIBUTION_TOL`] and tiny negatives are clamped to zero.
pub fn outcome_distribution(state: &StateVector, context: &MeasurementContext) -> Result<Vec<f64>> {
    if state.num_qubits() != PARTY_COUNT {
        return Err(Error::QubitCountMismatch {
            operator: PARTY_COUNT,
            state: state.num_qubits(),
        });
    }
    let dim = state.dim();
    let mut probabilities = Vec::with_capacity(dim);
    for outcome in 0..dim {
        let mut projected = state.clone();
        for party in 0..PARTY_COUNT {
            let sign = if (outcome >> (PARTY_COUNT - 1 - party)) & 1 == 0 {
                1.0
            } else {
                -1.0
            };
            let projector = context.axis(party).projector(sign);
            projected = projected.apply_one_qubit(party, &projector)?;
        }
        let mut p = projected.norm_sqr();
        if p < -1e-12 {
            return Err(Error::Internal(format!(
                "negative outcome probability {p:e} in context {context}"
            )));
        }
        if p < 0.0 {
            p = 0.0;
        }
        probabilities.push(p);
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::Internal(format!(
            "outcome distribution sums to {total} in context {context}"
        )));
    }
    Ok(probabilities)
}

/// Memo table for per-context outcome distributions (3^5 settings).
#[derive(Debug, Default)]
pub struct DistributionCache {
    slots: Vec<Option<Vec<f64>>>,
}

impl DistributionCache {
    pub fn new() -> Self {
        DistributionCache {
            slots: vec![None; 243],
        }
    }

    fn get(&mut self, state: &StateVector, context: &MeasurementContext) -> Result<&[f64]> {
        let code = context.code();
        if self.slots[code].is_none() {
            self.slots[code] = Some(outcome_distribution(state, context)?);
        }
        Ok(self.slots[code].as_ref().expect("just filled").as_slice())
    }
}

/// Draws one outcome tuple (±1 per party) in the given context.
pub fn sample_outcomes(
    state: &StateVector,
    context: &MeasurementContext,
    rng: &mut SplitMix64,
) -> Result<[Sign; PARTY_COUNT]> {
    let distribution = outcome_distribution(state, context)?;
    Ok(draw_from(&distribution, rng))
}

fn draw_from(distribution: &[f64], rng: &mut SplitMix64) -> [Sign; PARTY_COUNT] {
    let u = rng.next_f64();
    let mut cumulative = 0.0;
    let mut chosen = distribution.len() - 1;
    for (index, &p) in distribution.iter().enumerate() {
        cumulative += p;
        if u < cumulative {
            chosen = index;
            break;
        }
    }
    outcome_signs(chosen)
}

fn outcome_signs(outcome: usize) -> [Sign; PARTY_COUNT] {
    std::array::from_fn(|party| Sign::from_bit((outcome >> (PARTY_COUNT - 1 - party)) & 1 == 1))
}

/// One protocol run: the drawn setting, the sampled outcomes, and the
/// post-selected rows with their outcome products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRecord {
    pub run_index: u64,
    pub context: MeasurementContext,
    pub outcomes: [Sign; PARTY_COUNT],
    /// (row index, product of outcomes over the row's non-identity parties)
    pub products: Vec<(usize, Sign)>,
}

impl RunRecord {
    pub fn matched_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.products.iter().map(|&(row, _)| row)
    }
}

/// Simulates run `run_index` of the protocol, independently of any other
/// run: all randomness comes from `substream(seed, run_index)`.
pub fn simulate_run(
    state: &StateVector,
    table: &CorrelationTable,
    seed: u64,
    run_index: u64,
    cache: &mut DistributionCache,
) -> Result<RunRecord> {
    let mut rng = substream(seed, run_index);
    let axes: [PauliAxis; PARTY_COUNT] = std::array::from_fn(|_| {
        PauliAxis::MEASUREMENT_AXES[rng.next_below(3) as usize]
    });
    let context = MeasurementContext::new(axes).expect("drawn axes are never the identity");
    let distribution = cache.get(state, &context)?;
    let outcomes = draw_from(distribution, &mut rng);
    let products = table
        .rows()
        .iter()
        .enumerate()
        .filter(|(_, row)| context.matches_row(&row.operators))
        .map(|(index, row)| {
            let product = row
                .operators
                .support()
                .fold(Sign::Plus, |acc, party| acc * outcomes[party]);
            (index, product)
        })
        .collect();
    Ok(RunRecord {
        run_index,
        context,
        outcomes,
        products,
    })
}

/// Per-row tally of post-selected products.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowStatistics {
    pub index: usize,
    pub operators: String,
    pub expected: i32,
    pub samples: u64,
    pub product_plus: u64,
    pub product_minus: u64,
    pub agreements: u64,
    /// Fraction of sampled products matching the expected sign; absent for
    /// rows never sampled.
    pub agreement_rate: Option<f64>,
    pub pass: bool,
}

/// Aggregated protocol outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolReport {
    pub total_runs: u64,
    pub seed: u64,
    pub rows: Vec<RowStatistics>,
    /// True when every row with at least one sample agreed with its
    /// expected sign in every single sample.
    pub pass: bool,
}

/// Runs the full protocol: `num_runs` independent runs with uniform random
/// settings, Born-rule outcomes, post-selection and product tallies.
pub fn run_protocol(
    state: &StateVector,
    table: &CorrelationTable,
    num_runs: u64,
    seed: u64,
) -> Result<ProtocolReport> {
    if num_runs == 0 {
        return Err(Error::NoRuns);
    }
    if table.party_count() != PARTY_COUNT {
        return Err(Error::QubitCountMismatch {
            operator: table.party_count(),
            state: PARTY_COUNT,
        });
    }
    let mut cache = DistributionCache::new();
    let mut samples = vec![0u64; table.len()];
    let mut plus = vec![0u64; table.len()];
    let mut agreements = vec![0u64; table.len()];
    for run_index in 0..num_runs {
        let record = simulate_run(state, table, seed, run_index, &mut cache)?;
        for (row, product) in record.products {
            samples[row] += 1;
            if product == Sign::Plus {
                plus[row] += 1;
            }
            if product == table.row(row).expected_sign {
                agreements[row] += 1;
            }
        }
    }
    let rows: Vec<RowStatistics> = table
        .rows()
        .iter()
        .enumerate()
        .map(|(index, row)| {
            let sampled = samples[index];
            let agreement_rate = if sampled > 0 {
                Some(agreements[index] as f64 / sampled as f64)
            } else {
                None
            };
            RowStatistics {
                index,
                operators: row.operators.to_string(),
                expected: row.expected_sign.value(),
                samples: sampled,
                product_plus: plus[index],
                product_minus: sampled - plus[index],
                agreements: agreements[index],
                agreement_rate,
                pass: agreements[index] == sampled,
            }
        })
        .collect();
    let pass = rows.iter().all(|row| row.pass);
    Ok(ProtocolReport {
        total_runs: num_runs,
        seed,
        rows,
        pass,
    })
}

/// Probability that a uniformly random all-party context matches each row:
/// `(1/3)^w` for a row with `w` non-identity factors.
pub fn expected_match_rate(table: &CorrelationTable) -> Vec<f64> {
    table
        .rows()
        .iter()
        .map(|row| (1.0f64 / 3.0).powi(row.operators.weight() as i32))
        .collect()
}
