//! Per-terminal cut-value subroutine.
//!
//! Given a terminal set `T` and a terminal `s`, computes an upper estimate
//! `c_s` for the minimum cut separating `s` from the terminals outside its
//! neighborhood. [`Mode::Desk`] answers with one exact flow over the
//! sink-augmented split graph — the designated fallback whenever the
//! refinement pipeline's size assumptions fail, which they do for any
//! instance small enough to build. [`Mode::Forced`] runs the full pipeline
//! regardless: a preprocessing flow over an oracle-sparsified graph, then
//! one phase per grain halving (local augmentations, heavy-vertex
//! partitioning, sparsified reflow), and a finishing flow over the support.

mod explore;
mod preprocess;
mod state;
mod step1;
mod step2;
mod step3;

pub use state::{FailKind, PhaseSnapshot, PlantInfo, RunReport, Tuning};

use crate::cut::split_to_network;
use crate::error::Error;
use crate::estimators::{subgraph_oracle, OracleConfig, OracleResponse};
use crate::flow::{max_flow, CopyRef, FlowState};
use crate::graph::{EdgeKind, ParamBlock, SplitGraph, WeightedGraph};
use crate::rng::RngStream;
use crate::sampling::{is_good_terminal_set, sentinel_value};
use crate::Result;

/// Execution mode of the subroutine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exact fallback flow (the behavior whenever the pipeline's size
    /// assumptions fail; they always fail at buildable sizes).
    Desk,
    /// Full pipeline, for exercising and auditing its machinery.
    Forced,
}

/// A suspended oracle query: the pipeline stopped at a query that has no
/// recorded answer yet.
#[derive(Clone, Debug)]
pub struct OracleInterrupt {
    pub query: Vec<u32>,
}

/// Source of subgraph-oracle answers.
pub trait OracleSource {
    fn query(
        &mut self,
        g: &WeightedGraph,
        z: &[u32],
    ) -> std::result::Result<OracleResponse, OracleInterrupt>;
}

/// Answers every query on the spot.
pub struct ImmediateOracle {
    config: OracleConfig,
    delta: f64,
    stream: RngStream,
    counter: u64,
}

impl ImmediateOracle {
    pub fn new(config: OracleConfig, delta: f64, stream: RngStream) -> Self {
        ImmediateOracle {
            config,
            delta,
            stream,
            counter: 0,
        }
    }
}

impl OracleSource for ImmediateOracle {
    fn query(
        &mut self,
        g: &WeightedGraph,
        z: &[u32],
    ) -> std::result::Result<OracleResponse, OracleInterrupt> {
        let stream = self.stream.child(self.counter);
        self.counter += 1;
        Ok(subgraph_oracle(g, z, self.delta, &stream, &self.config))
    }
}

/// Replays pre-recorded answers and interrupts on the first unanswered
/// query; the bulk scheduler reruns the subroutine after answering it.
pub struct ScriptedOracle {
    answers: Vec<OracleResponse>,
    cursor: usize,
}

impl ScriptedOracle {
    pub fn new(answers: Vec<OracleResponse>) -> Self {
        ScriptedOracle { answers, cursor: 0 }
    }
}

impl OracleSource for ScriptedOracle {
    fn query(
        &mut self,
        _g: &WeightedGraph,
        z: &[u32],
    ) -> std::result::Result<OracleResponse, OracleInterrupt> {
        if self.cursor < self.answers.len() {
            let answer = self.answers[self.cursor].clone();
            self.cursor += 1;
            Ok(answer)
        } else {
            Err(OracleInterrupt { query: z.to_vec() })
        }
    }
}

/// Result of a completed run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    /// Estimate in absolute weight scale; never below the exact cut value.
    pub c_s: u128,
    pub report: RunReport,
}

/// A run either completes or suspends on an unanswered oracle query.
#[derive(Debug)]
pub enum RunOutcome {
    Done(RunOutput),
    NeedsOracle(OracleInterrupt),
}

impl RunOutcome {
    pub fn expect_done(self) -> RunOutput {
        match self {
            RunOutcome::Done(out) => out,
            RunOutcome::NeedsOracle(_) => {
                panic!("subroutine suspended on an oracle query")
            }
        }
    }
}

pub(crate) enum PipeErr {
    Error(Error),
    Interrupt(OracleInterrupt),
}

impl From<Error> for PipeErr {
    fn from(e: Error) -> Self {
        PipeErr::Error(e)
    }
}

pub(crate) type PResult<T> = std::result::Result<T, PipeErr>;

/// Estimates the minimum `s`-vs-`T_s` cut value of `g`, where
/// `T_s = T \ ({s} ∪ N(s))`. The estimate is never below the exact value;
/// degenerate inputs (empty `T_s`) yield the sentinel `w_max`.
pub fn estimate_terminal_cut(
    g: &WeightedGraph,
    terminals: &[u32],
    s: u32,
    mode: Mode,
    oracle: &mut dyn OracleSource,
    stream: &RngStream,
    tuning: &Tuning,
    instr: Option<&PlantInfo>,
) -> Result<RunOutcome> {
    debug_assert!(terminals.contains(&s));
    let mut t_s: Vec<u32> = terminals
        .iter()
        .copied()
        .filter(|&v| v != s && !g.has_edge(s, v))
        .collect();
    t_s.sort_unstable();
    t_s.dedup();
    if t_s.is_empty() {
        let mut report = RunReport::default();
        report.c_s = sentinel_value(g);
        report.note("no terminal outside the closed neighborhood of s");
        return Ok(RunOutcome::Done(RunOutput {
            c_s: report.c_s,
            report,
        }));
    }

    let params = ParamBlock::build(g)?;
    match mode {
        Mode::Desk => {
            let split = SplitGraph::build(g, &params, Some(&t_s));
            let net = split_to_network(&split);
            let value = max_flow(&net, SplitGraph::out_node_of(s), split.sink().unwrap()).value;
            let c_s = params.weight_of_units(value);
            let mut report = RunReport::default();
            report.c_s = c_s;
            report.opt_s = Some(c_s);
            Ok(RunOutcome::Done(RunOutput { c_s, report }))
        }
        Mode::Forced => {
            let split = SplitGraph::build(g, &params, Some(&t_s));
            let state = FlowState::new(split, SplitGraph::out_node_of(s))?;
            let pipeline = Pipeline {
                g,
                params,
                state,
                tuning: *tuning,
                oracle,
                stream: *stream,
                report: RunReport::default(),
                instr,
                terminals: terminals.to_vec(),
                s,
                opt_s_units: None,
            };
            pipeline.run()
        }
    }
}

pub(crate) struct Pipeline<'a> {
    pub(crate) g: &'a WeightedGraph,
    pub(crate) params: ParamBlock,
    pub(crate) state: FlowState,
    pub(crate) tuning: Tuning,
    pub(crate) oracle: &'a mut dyn OracleSource,
    pub(crate) stream: RngStream,
    pub(crate) report: RunReport,
    pub(crate) instr: Option<&'a PlantInfo>,
    pub(crate) terminals: Vec<u32>,
    pub(crate) s: u32,
    pub(crate) opt_s_units: Option<u128>,
}

impl Pipeline<'_> {
    fn run(mut self) -> Result<RunOutcome> {
        if self.instr.is_some() {
            let net = split_to_network(self.state.graph());
            let opt = max_flow(&net, self.state.source(), self.state.sink()).value;
            self.opt_s_units = Some(opt);
            self.report.opt_s = Some(self.params.weight_of_units(opt));
        }

        match self.drive() {
            Ok(()) => {}
            Err(PipeErr::Interrupt(int)) => return Ok(RunOutcome::NeedsOracle(int)),
            Err(PipeErr::Error(e)) => return Err(e),
        }

        let c_s = if self.report.fail.is_some() {
            self.params.w_max as u128
        } else {
            self.finish()
        };
        if let Some(opt_units) = self.opt_s_units {
            let opt_abs = self.params.weight_of_units(opt_units);
            if c_s < opt_abs {
                self.report
                    .note(format!("estimate {c_s} fell below the exact value {opt_abs}"));
                debug_assert!(false, "estimate below the exact cut value");
            }
        }
        self.report.c_s = c_s;
        Ok(RunOutcome::Done(RunOutput {
            c_s,
            report: self.report,
        }))
    }

    fn drive(&mut self) -> PResult<()> {
        self.preprocess()?;
        self.record_boundary(0, None, None, None);
        for phase in 1..=self.params.z {
            let step1 = self.step1(phase)?;
            if let Some(fail) = step1.fail {
                self.report.fail = Some(fail);
                return Ok(());
            }
            let crossing_ok = self.check_crossing_arcs();
            let step2 = self.step2(phase, &step1.explored)?;
            if let Some(fail) = step2.fail {
                self.report.fail = Some(fail);
                return Ok(());
            }
            let step3 = self.step3(phase, &step1.explored, &step2)?;
            let idx = self.record_boundary(phase, Some(&step1), Some(&step2), Some(&step3));
            self.report.phases[idx].crossing_edges_ok = crossing_ok;
            if let Some(fail) = step3.fail {
                self.report.fail = Some(fail);
                return Ok(());
            }
        }
        Ok(())
    }

    /// Maximum flow over the support subgraph with original capacities;
    /// integral in the absolute weight scale.
    fn finish(&self) -> u128 {
        let graph = self.state.graph();
        let mut net = crate::flow::FlowNetwork::new(graph.node_count());
        for edge in self.state.support() {
            let e = graph.edge(edge);
            net.add_arc(e.from, e.to, e.cap);
        }
        let value = max_flow(&net, self.state.source(), self.state.sink()).value;
        self.params.weight_of_units(value)
    }

    pub(crate) fn query_oracle(&mut self, mut z: Vec<u32>) -> PResult<OracleResponse> {
        z.sort_unstable();
        z.dedup();
        self.oracle
            .query(self.g, &z)
            .map_err(PipeErr::Interrupt)
    }

    /// Adds a shortcut arc unless an equivalent sink arc already exists;
    /// audits it against the plant when instrumented.
    pub(crate) fn add_shortcut_audited(&mut self, node: u32, phase: u32, step: u8) -> Result<u32> {
        let sink = self.state.sink();
        if let Some(existing) = self
            .state
            .graph()
            .out_edge_ids(node)
            .into_iter()
            .find(|&id| self.state.graph().edge(id).to == sink)
        {
            return Ok(existing);
        }
        let id = self.state.add_shortcut(node, phase, step)?;
        if let Some(plant) = self.instr {
            let valid = plant.shortcut_is_valid(node);
            self.report.ledger_valid.push(valid);
            if !valid {
                self.report.note(format!(
                    "shortcut from node {node} (vertex {}) lies outside S_out ∪ R*",
                    SplitGraph::original_of(node)
                ));
            }
            if let Some(opt_units) = self.opt_s_units {
                // Shortcut arcs may only raise the attainable flow.
                let net = split_to_network(self.state.graph());
                let now = max_flow(&net, self.state.source(), self.state.sink()).value;
                if now < opt_units {
                    self.report
                        .note("sink-augmented flow dropped below the exact value".to_string());
                }
                if valid && self.report.ledger_all_valid() && now != opt_units {
                    self.report.note(format!(
                        "valid-ledger flow value {now} differs from exact {opt_units}"
                    ));
                }
            }
        }
        Ok(id)
    }

    /// Instrumented check: with a good pair and a valid ledger, the residual
    /// arcs crossing from `L* ∪ S_in` are exactly the separator-incident
    /// class.
    fn check_crossing_arcs(&mut self) -> Option<bool> {
        let plant = self.instr?;
        if !is_good_terminal_set(self.g, &self.terminals, &plant.l, &plant.s, &plant.r)
            || !plant.l.contains(&self.s)
            || !self.report.ledger_all_valid()
        {
            return None;
        }
        let n = self.g.n();
        let mut in_l = vec![false; n];
        let mut in_s = vec![false; n];
        let mut in_r = vec![false; n];
        for &v in &plant.l {
            in_l[v as usize] = true;
        }
        for &v in &plant.s {
            in_s[v as usize] = true;
        }
        for &v in &plant.r {
            in_r[v as usize] = true;
        }
        let mut source_side = vec![false; self.state.graph().node_count()];
        for v in 0..n as u32 {
            if in_l[v as usize] {
                source_side[SplitGraph::in_node_of(v) as usize] = true;
                source_side[SplitGraph::out_node_of(v) as usize] = true;
            }
            if in_s[v as usize] {
                source_side[SplitGraph::in_node_of(v) as usize] = true;
            }
        }

        let mut crossing: Vec<CopyRef> = Vec::new();
        for node in 0..self.state.graph().node_count() as u32 {
            if !source_side[node as usize] {
                continue;
            }
            for copy in self.state.out_copies(node) {
                if !source_side[self.state.copy_to(copy) as usize] {
                    crossing.push(copy);
                }
            }
        }
        crossing.sort_unstable();

        // Expected class: forward specials of S, plus backward regular arcs
        // (v_in, u_out) with v in L ∪ S, u in S (u != v), or v in S, u in R.
        let mut expected: Vec<CopyRef> = Vec::new();
        let graph = self.state.graph();
        for edge in 0..graph.edges().len() as u32 {
            let e = graph.edge(edge);
            let fwd = CopyRef::forward(edge);
            let bwd = CopyRef::backward(edge);
            if e.kind == EdgeKind::Special {
                let v = SplitGraph::original_of(e.from);
                if in_s[v as usize] && self.state.residual(fwd) > 0 {
                    expected.push(fwd);
                }
            } else if e.to != self.state.sink() && e.from != self.state.sink() {
                // Backward copy runs (to=v_in -> from=u_out).
                let u = SplitGraph::original_of(e.from);
                let v = SplitGraph::original_of(e.to);
                if self.state.residual(bwd) > 0 {
                    let in_class = ((in_l[v as usize] || in_s[v as usize])
                        && in_s[u as usize]
                        && u != v)
                        || (in_s[v as usize] && in_r[u as usize]);
                    if in_class {
                        expected.push(bwd);
                    }
                }
            }
        }
        expected.sort_unstable();
        let ok = crossing == expected;
        if !ok {
            self.report
                .note("crossing arcs differ from the separator-incident class".to_string());
        }
        Some(ok)
    }

    /// Invariant checks and bookkeeping at a phase boundary; `phase` is the
    /// grain index (0 after preprocessing). Returns the snapshot index.
    fn record_boundary(
        &mut self,
        phase: u32,
        step1: Option<&step1::Step1Result>,
        step2: Option<&step2::Step2Result>,
        step3: Option<&step3::Step3Result>,
    ) -> usize {
        let grain = self.params.grain_units(phase);
        let nf = self.params.n as f64;
        let eps = self.params.eps();
        let log_w = self.params.log2_w_max();

        let mut snap = PhaseSnapshot {
            phase,
            grain_units: grain,
            value_units: self.state.value(),
            support_len: self.state.support_len(),
            ..PhaseSnapshot::default()
        };

        snap.grain_integral = self.state.is_grain_integral(grain);
        if !snap.grain_integral {
            self.report
                .note(format!("flow not grain-integral at phase {phase}"));
        }
        if let Some(opt) = self.opt_s_units {
            let bound = opt.saturating_sub(4 * self.params.n as u128 * grain);
            let ok = self.state.value() >= bound;
            snap.value_bound_ok = Some(ok);
            if !ok {
                self.report.note(format!(
                    "flow value {} below bound {} at phase {phase}",
                    self.state.value(),
                    bound
                ));
            }
        }

        // Special-arc slack and the residual-based split of heavy vertices.
        let heavy_res_log = (self.params.z - phase) + self.params.gamma_log2;
        snap.special_slack_ok = true;
        for v in 0..self.state.graph().base_n() as u32 {
            let edge = self.state.graph().special_edge_of(v);
            let cap = self.state.graph().edge(edge).cap;
            if cap < grain {
                continue;
            }
            snap.heavy += 1;
            let residual = cap - self.state.flow_on(edge);
            if residual >= 1u128 << heavy_res_log {
                snap.heavy_high += 1;
            } else {
                snap.heavy_low += 1;
            }
            if self.state.flow_on(edge) > cap - grain {
                snap.special_slack_ok = false;
                self.report.note(format!(
                    "special arc of vertex {v} keeps less than one grain at phase {phase}"
                ));
            }
        }

        let support_budget =
            self.tuning.support_budget * (phase.max(1) as f64) * nf.powf(2.0 - 4.0 * eps)
                * log_w.powi(4);
        snap.support_budget_ok = (snap.support_len as f64) <= support_budget;
        if !snap.support_budget_ok {
            self.report.note(format!(
                "support size {} over budget {support_budget:.0} at phase {phase}",
                snap.support_len
            ));
        }

        if let Some(s1) = step1 {
            snap.explored_vertices = s1.explored.vertices.len();
            snap.explored_edges = s1.explored.edges.len();
            snap.explored_out_copies = s1.explored.out_copies.len();
            snap.step1_iterations = s1.iterations;
            snap.step1_augmented_units = s1.augmented_units;
            let budget = self.tuning.explored_edge_budget
                * nf
                * self
                    .tuning
                    .explore_cap_override
                    .unwrap_or(self.params.explore_cap) as f64;
            snap.explored_budget_ok = (snap.explored_edges as f64) <= budget;
            if !snap.explored_budget_ok {
                self.report.note(format!(
                    "explored edges {} over budget {budget:.0} at phase {phase}",
                    snap.explored_edges
                ));
            }
        } else {
            snap.explored_budget_ok = true;
        }

        if let Some(s2) = step2 {
            snap.retained = s2.retained.len();
            snap.sidelined = s2.sidelined.len();
            snap.staged = s2.staged;
            snap.batch_excluded = s2.batch_excluded;
            snap.refinement_iterations = s2.iterations;
            snap.contracted_flow = s2.contracted_flow;
            snap.retained_flow = s2.retained_flow;
            snap.cut_side_size = s2
                .cut_side
                .as_ref()
                .map(|side| side.iter().filter(|&&b| b).count());
            snap.cut_capacity_units = s2.cut_capacity_units;
            snap.deficit_exponent_low = s2.deficit_exponent_low;
            snap.deficit_exponent_high = s2.deficit_exponent_high;
            // Problematic-path allowance (diagnostic): 2^14 n^eps M' gamma
            // log^2 n log W, in units.
            let m_gamma_units = (1u128 << (self.params.z - phase)) * self.params.gamma as u128;
            snap.leak_allowance_units = (2f64.powi(14)
                * nf.powf(eps)
                * self.params.log2_n().powi(2)
                * log_w
                * m_gamma_units as f64)
                .ceil() as u128;
        }

        if let Some(s3) = step3 {
            snap.sparsified_edges = s3.sparsified_edges;
            let budget = self.tuning.sparsified_edge_budget
                * nf.powf(2.0 - 4.0 * eps)
                * self.params.log2_n()
                * log_w.powi(3);
            snap.sparsified_budget_ok = (snap.sparsified_edges as f64) <= budget;
            if !snap.sparsified_budget_ok {
                self.report.note(format!(
                    "sparsified graph has {} arcs over budget {budget:.0} at phase {phase}",
                    snap.sparsified_edges
                ));
            }
        } else {
            snap.sparsified_budget_ok = true;
        }

        self.report.phases.push(snap);
        self.report.phases.len() - 1
    }
}
