//! Shared state, tuning knobs and instrumentation for the refinement
//! pipeline.

use crate::estimators::OracleConfig;
use crate::graph::SplitGraph;

/// Explicit constants for the measured budget checks, plus estimator knobs.
/// Defaults are the reference values; tests may tighten or loosen them to
/// drive rarely-taken branches.
#[derive(Clone, Copy, Debug)]
pub struct Tuning {
    /// Multiplier in the explored-edge budget `|E(J)| <= c * n * N`.
    pub explored_edge_budget: f64,
    /// Multiplier in the support budget `|support| <= c * i * n^{2-4e} log^4 W`.
    pub support_budget: f64,
    /// Multiplier in `|E(H')| <= c * n^{2-4e} log n log^3 W`.
    pub sparsified_edge_budget: f64,
    /// Overrides the explored-out-copy cap (the parameter block value
    /// otherwise); lets tests force the random-shortcut branch.
    pub explore_cap_override: Option<u64>,
    /// Estimator configuration for the oracle and the in-pipeline samplers.
    pub oracle: OracleConfig,
}

impl Default for Tuning {
    fn default() -> Self {
        Tuning {
            explored_edge_budget: 64.0,
            support_budget: 64.0,
            sparsified_edge_budget: 4096.0,
            explore_cap_override: None,
            oracle: OracleConfig::default(),
        }
    }
}

/// Reasons the pipeline abandons a run; the caller maps these to the
/// sentinel estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailKind {
    /// Step 1 exhausted its iteration budget without settling.
    LocalAugmentBudget,
    /// A boundary-edge capacity class exceeded its per-class budget.
    EdgeClassBudget,
    /// Step 2 exceeded its refinement-iteration budget.
    PartitionBudget,
    /// A kept vertex exceeded its per-vertex edge budget in step 3.
    SparsifyDegreeBudget,
    /// The sparsified flow fell short of the recorded cut capacity.
    CutSlack,
}

/// Known optimal partition, used to audit randomized decisions in tests.
#[derive(Clone, Debug)]
pub struct PlantInfo {
    pub l: Vec<u32>,
    pub s: Vec<u32>,
    pub r: Vec<u32>,
}

impl PlantInfo {
    /// A shortcut arc into the sink is safe exactly when it leaves a copy of
    /// an `R` vertex or the out-copy of an `S` vertex.
    pub fn shortcut_is_valid(&self, node: u32) -> bool {
        let orig = SplitGraph::original_of(node);
        if self.r.contains(&orig) {
            return true;
        }
        SplitGraph::is_out_copy(node) && self.s.contains(&orig)
    }
}

/// Per-phase record of what the pipeline saw and checked.
#[derive(Clone, Debug, Default)]
pub struct PhaseSnapshot {
    pub phase: u32,
    /// Grain `M_i` in units.
    pub grain_units: u128,
    /// Flow value in units at the end of the phase.
    pub value_units: u128,
    pub support_len: usize,
    /// Heavy vertices (`w(v) >= M_i`) and the split by special-arc residual.
    pub heavy: usize,
    pub heavy_high: usize,
    pub heavy_low: usize,
    /// Explored subgraph statistics.
    pub explored_vertices: usize,
    pub explored_edges: usize,
    pub explored_out_copies: usize,
    pub step1_iterations: u32,
    pub step1_augmented_units: u128,
    /// Partition sizes: retained `Q`, sidelined `Q'`, staged exclusions.
    pub retained: usize,
    pub sidelined: usize,
    pub staged: [usize; 4],
    pub batch_excluded: usize,
    pub refinement_iterations: u32,
    /// Residual-flow figures: maximum flow estimate in the contracted
    /// graph, retained-bundle flow, and the problematic-path allowance.
    pub contracted_flow: u128,
    pub retained_flow: u128,
    pub leak_allowance_units: u128,
    pub deficit_exponent_low: i32,
    pub deficit_exponent_high: i32,
    pub cut_side_size: Option<usize>,
    pub cut_capacity_units: Option<u128>,
    pub sparsified_edges: usize,
    /// Invariant verdicts (true = held).
    pub grain_integral: bool,
    pub value_bound_ok: Option<bool>,
    pub special_slack_ok: bool,
    pub support_budget_ok: bool,
    pub sparsified_budget_ok: bool,
    pub explored_budget_ok: bool,
    pub crossing_edges_ok: Option<bool>,
}

/// Full run record for one terminal.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub phases: Vec<PhaseSnapshot>,
    pub fail: Option<FailKind>,
    /// Human-readable notes on every non-fatal irregularity.
    pub violations: Vec<String>,
    /// Ledger audit against the plant, when instrumented: one verdict per
    /// shortcut arc in insertion order.
    pub ledger_valid: Vec<bool>,
    /// Exact cut value of the sink-augmented split graph, when instrumented.
    pub opt_s: Option<u128>,
    /// Returned estimate (absolute weight scale).
    pub c_s: u128,
}

impl RunReport {
    pub fn ledger_all_valid(&self) -> bool {
        self.ledger_valid.iter().all(|&v| v)
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.violations.push(msg.into());
    }
}
