//! Step 2 of a phase: partitioning the heavy vertices.
//!
//! The residual network is contracted onto the explored subgraph with a
//! super-sink absorbing every boundary arc. Min-cost flows over the
//! contracted graph (unit cost on the retained vertices' boundary bundles)
//! expose vertices whose bundles keep large deficits under every maximum
//! flow; such batches are sidelined. If many vertices stay retained, one
//! extra cut against the non-retained boundary pins down the side `X*`
//! whose crossing capacity the sparsification step must preserve.

use super::explore::Explored;
use super::state::FailKind;
use super::Pipeline;
use crate::flow::{min_cost_max_flow, min_edge_cut, FlowNetwork};
use crate::graph::SplitGraph;
use crate::Result;

pub(super) struct Step2Result {
    /// Retained heavy vertices `Q` (original ids, ascending).
    pub retained: Vec<u32>,
    /// Sidelined heavy vertices `Q'` (original ids, ascending).
    pub sidelined: Vec<u32>,
    /// Sizes of the staged exclusions: unexplored in-copy, oversized
    /// boundary bundle, explored out-copy, final-cut move.
    pub staged: [usize; 4],
    /// Vertices sidelined through deficit batches.
    pub batch_excluded: usize,
    pub iterations: u32,
    /// Value of the contracted maximum flow.
    pub contracted_flow: u128,
    /// Flow carried by the retained vertices' bundles in the final
    /// min-cost flow.
    pub retained_flow: u128,
    /// `X*` as a node mask over the split graph, when computed.
    pub cut_side: Option<Vec<bool>>,
    /// Total residual capacity leaving `X*`, when computed.
    pub cut_capacity_units: Option<u128>,
    pub deficit_exponent_low: i32,
    pub deficit_exponent_high: i32,
    pub fail: Option<FailKind>,
}

impl Pipeline<'_> {
    pub(super) fn step2(&mut self, phase: u32, explored: &Explored) -> Result<Step2Result> {
        let grain_log = self.params.z - phase;
        let grain = 1u128 << grain_log;
        let unit_log2 = self.params.unit_log2;
        let nf = self.params.n as f64;
        let eps = self.params.eps();

        // Heavy vertices and the staged exclusions that need no flow.
        let heavy: Vec<u32> = (0..self.state.graph().base_n() as u32)
            .filter(|&v| self.state.graph().edge(self.state.graph().special_edge_of(v)).cap >= grain)
            .collect();
        let mut unexplored_in: Vec<u32> = Vec::new();
        let mut core: Vec<u32> = Vec::new();
        for &v in &heavy {
            if explored.contains(SplitGraph::in_node_of(v)) {
                core.push(v);
            } else {
                unexplored_in.push(v);
            }
        }
        let explored_out: Vec<u32> = core
            .iter()
            .copied()
            .filter(|&v| explored.contains(SplitGraph::out_node_of(v)))
            .collect();

        // Boundary bundle capacity of every core vertex.
        let mut bundle = vec![0u128; self.state.graph().base_n()];
        for &v in &core {
            let vin = SplitGraph::in_node_of(v);
            bundle[v as usize] = self
                .state
                .out_copies(vin)
                .into_iter()
                .filter(|&c| !explored.contains(self.state.copy_to(c)))
                .map(|c| self.state.residual(c))
                .sum();
        }

        // Deficit exponent range, in absolute scale.
        let j_low = 0i32.min(grain_log as i32 + unit_log2);
        let m_abs = 2f64.powi(grain_log as i32 + unit_log2);
        let j_high = (4.0 * nf.powf(9.0 * eps) * m_abs).log2().ceil() as i32;
        let units_of_exp = |j: i32| -> u128 { 1u128 << (j - unit_log2) as u32 };

        let oversized: Vec<u32> = core
            .iter()
            .copied()
            .filter(|&v| bundle[v as usize] >= units_of_exp(j_high))
            .collect();
        let mut retained: Vec<u32> = core
            .iter()
            .copied()
            .filter(|v| !oversized.contains(v) && !explored_out.contains(v))
            .collect();
        let mut sidelined: Vec<u32> = Vec::new();
        sidelined.extend(&unexplored_in);
        sidelined.extend(&oversized);
        sidelined.extend(&explored_out);
        sidelined.sort_unstable();
        sidelined.dedup();

        // Contracted network: explored vertices plus a super-sink bundling
        // every boundary arc per source node.
        let mut map = vec![u32::MAX; self.state.graph().node_count()];
        for (i, &v) in explored.vertices.iter().enumerate() {
            map[v as usize] = i as u32;
        }
        let contracted_sink = explored.vertices.len() as u32;
        let mut net = FlowNetwork::new(explored.vertices.len() + 1);
        let mut bundle_arc = vec![usize::MAX; self.state.graph().node_count()];
        for &x in &explored.vertices {
            let mut boundary = 0u128;
            for copy in self.state.out_copies(x) {
                let y = self.state.copy_to(copy);
                if explored.contains(y) {
                    net.add_arc(map[x as usize], map[y as usize], self.state.residual(copy));
                } else {
                    boundary += self.state.residual(copy);
                }
            }
            if boundary > 0 {
                bundle_arc[x as usize] = net.add_arc(map[x as usize], contracted_sink, boundary);
            }
        }
        let source = map[self.state.source() as usize];

        let iteration_budget = (256.0 * nf.powf(1.0 - 5.5 * eps) * self.params.log2_n()
            * self.params.log2_w_max()
            / self.params.gamma as f64)
            .ceil() as u32;
        let mut iterations = 0u32;
        let mut batch_excluded = 0usize;
        let mut contracted_flow;
        let mut retained_flow = 0u128;
        let mut fail = None;
        loop {
            iterations += 1;
            let mut costs = vec![0u64; net.arc_count()];
            for &v in &retained {
                let arc = bundle_arc[SplitGraph::in_node_of(v) as usize];
                debug_assert_ne!(arc, usize::MAX, "retained vertex keeps a bundle");
                costs[arc] = 1;
            }
            let flow = min_cost_max_flow(&net, source, contracted_sink, &costs);
            contracted_flow = flow.value;

            let mut moved: Vec<u32> = Vec::new();
            for j in j_low..j_high {
                let lo = units_of_exp(j);
                let hi = units_of_exp(j + 1);
                let batch: Vec<u32> = retained
                    .iter()
                    .copied()
                    .filter(|&v| {
                        let arc = bundle_arc[SplitGraph::in_node_of(v) as usize];
                        let deficit = bundle[v as usize] - flow.arc_flow[arc];
                        deficit >= lo && deficit < hi
                    })
                    .collect();
                let threshold =
                    nf.powf(5.5 * eps) * self.params.gamma as f64 * m_abs / 2f64.powi(j);
                if batch.len() as f64 >= threshold {
                    moved.extend(batch);
                }
            }
            if moved.is_empty() {
                retained_flow = retained
                    .iter()
                    .map(|&v| flow.arc_flow[bundle_arc[SplitGraph::in_node_of(v) as usize]])
                    .sum();
                break;
            }
            batch_excluded += moved.len();
            retained.retain(|v| !moved.contains(v));
            sidelined.extend(moved);
            if iterations > iteration_budget {
                self.report.note(format!(
                    "partition refinement exceeded its budget of {iteration_budget} iterations"
                ));
                fail = Some(FailKind::PartitionBudget);
                break;
            }
        }
        sidelined.sort_unstable();
        sidelined.dedup();

        // Final cut when many vertices stay retained: separate the source
        // from the non-retained boundary, then sideline the retained
        // vertices stranded on the far side.
        let retain_limit = nf.powf(1.0 - 4.0 * eps);
        let mut cut_side = None;
        let mut cut_capacity_units = None;
        let mut cut_moved = 0usize;
        if fail.is_none() && retained.len() as f64 > retain_limit {
            let mut in_retained_bundle = vec![false; self.state.graph().node_count()];
            for &v in &retained {
                in_retained_bundle[SplitGraph::in_node_of(v) as usize] = true;
            }
            // Rebuild with two sinks: retained bundles feed sink_a, all other
            // boundary arcs feed sink_b.
            let sink_a = explored.vertices.len() as u32;
            let sink_b = sink_a + 1;
            let mut net2 = FlowNetwork::new(explored.vertices.len() + 2);
            for &x in &explored.vertices {
                let mut boundary = 0u128;
                for copy in self.state.out_copies(x) {
                    let y = self.state.copy_to(copy);
                    if explored.contains(y) {
                        net2.add_arc(map[x as usize], map[y as usize], self.state.residual(copy));
                    } else {
                        boundary += self.state.residual(copy);
                    }
                }
                if boundary > 0 {
                    let sink = if in_retained_bundle[x as usize] {
                        sink_a
                    } else {
                        sink_b
                    };
                    net2.add_arc(map[x as usize], sink, boundary);
                }
            }
            let cut = min_edge_cut(&net2, source, sink_b);
            if self.instr.is_some() && !cut.source_side[sink_a as usize] {
                self.report
                    .note("retained-bundle sink fell outside the final cut side".to_string());
            }
            let stranded: Vec<u32> = retained
                .iter()
                .copied()
                .filter(|&v| !cut.source_side[map[SplitGraph::in_node_of(v) as usize] as usize])
                .collect();
            cut_moved = stranded.len();
            retained.retain(|v| !stranded.contains(v));
            sidelined.extend(stranded);
            sidelined.sort_unstable();
            sidelined.dedup();

            let mut side = vec![false; self.state.graph().node_count()];
            for (i, &v) in explored.vertices.iter().enumerate() {
                side[v as usize] = cut.source_side[i];
            }
            let mut crossing = 0u128;
            for &x in &explored.vertices {
                if !side[x as usize] {
                    continue;
                }
                for copy in self.state.out_copies(x) {
                    if !side[self.state.copy_to(copy) as usize] {
                        crossing += self.state.residual(copy);
                    }
                }
            }
            cut_side = Some(side);
            cut_capacity_units = Some(crossing);
        }
        retained.sort_unstable();

        Ok(Step2Result {
            staged: [
                unexplored_in.len(),
                oversized.len(),
                explored_out.len(),
                cut_moved,
            ],
            batch_excluded,
            retained,
            sidelined,
            iterations,
            contracted_flow,
            retained_flow,
            cut_side,
            cut_capacity_units,
            deficit_exponent_low: j_low,
            deficit_exponent_high: j_high,
            fail,
        })
    }
}
