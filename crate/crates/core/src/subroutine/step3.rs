//! Step 3 of a phase: sparsify the residual network, recompute the flow on
//! the sparsified graph and fold it into the running flow.
//!
//! Residual arcs split into six classes: arcs at light vertices carry no
//! flow and drop; special arcs and sink arcs always stay; arcs touching
//! the explored subgraph stay; arcs into sidelined in-copies stay unless
//! their tail earned a shortcut through the oracle; arcs into retained
//! in-copies stay exactly when the retained set is small (otherwise the
//! recorded cut certifies dropping them); the remaining backward arcs stay
//! per-vertex up to a budget, with heavy tails shortcut to the sink.

use super::explore::Explored;
use super::state::FailKind;
use super::step1::trim_to_grain;
use super::step2::Step2Result;
use super::{PResult, Pipeline};
use crate::flow::{max_flow, CopyRef, FlowNetwork};
use crate::graph::{EdgeKind, SplitGraph};

pub(super) struct Step3Result {
    pub sparsified_edges: usize,
    pub fail: Option<FailKind>,
}

impl Pipeline<'_> {
    pub(super) fn step3(
        &mut self,
        phase: u32,
        explored: &Explored,
        partition: &Step2Result,
    ) -> PResult<Step3Result> {
        let grain_log = self.params.z - phase;
        let grain = 1u128 << grain_log;
        let nf = self.params.n as f64;
        let eps = self.params.eps();
        let n = self.state.graph().base_n();
        let sink = self.state.sink();

        let heavy: Vec<bool> = (0..n as u32)
            .map(|v| self.state.graph().edge(self.state.graph().special_edge_of(v)).cap >= grain)
            .collect();
        let mut sidelined_in = vec![false; self.state.graph().node_count()];
        for &v in &partition.sidelined {
            sidelined_in[SplitGraph::in_node_of(v) as usize] = true;
        }
        let mut retained_in = vec![false; self.state.graph().node_count()];
        for &v in &partition.retained {
            retained_in[SplitGraph::in_node_of(v) as usize] = true;
        }
        let keep_retained_arcs = partition.retained.len() as f64 <= nf.powf(1.0 - 4.0 * eps);

        // Oracle pass over the sidelined vertices: tails with many sidelined
        // neighbors are shortcut to the sink and their class-4 arcs dropped.
        let response = self.query_oracle(partition.sidelined.clone())?;
        let mut shortcut_tail = vec![false; self.state.graph().node_count()];
        for &v in &response.y_high {
            let node = SplitGraph::out_node_of(v);
            self.add_shortcut_audited(node, phase, 3)?;
            shortcut_tail[node as usize] = true;
        }

        // Sampled heavy-degree pass over the leftover backward arcs: heavy
        // in-copy tails are shortcut, the rest stay under a per-vertex
        // budget.
        let leftover_sources: Vec<u32> = (0..n as u32)
            .map(SplitGraph::in_node_of)
            .filter(|&x| !explored.contains(x))
            .collect();
        let leftover_targets: Vec<u32> = (0..n as u32)
            .map(SplitGraph::out_node_of)
            .filter(|&x| !explored.contains(x))
            .collect();
        let tau = nf.powf(1.0 - 4.0 * eps);
        let heavy_tails = crate::estimators::directed_heavy_degree_estimation(
            &self.state,
            &leftover_sources,
            &leftover_targets,
            tau,
            grain,
            self.params.log2_w_max(),
            &self.stream.child2(phase as u64, 0x533),
            self.tuning.oracle.scale,
        );
        let mut shortcut_head = vec![false; self.state.graph().node_count()];
        for &node in &heavy_tails {
            self.add_shortcut_audited(node, phase, 3)?;
            shortcut_head[node as usize] = true;
        }
        let leftover_budget =
            (1000.0 * tau * self.params.log2_n() * self.params.log2_w_max()).ceil() as usize;
        let mut leftover_kept = vec![0usize; self.state.graph().node_count()];

        // Classify every residual arc.
        let mut kept: Vec<CopyRef> = Vec::new();
        let edge_count = self.state.graph().edges().len() as u32;
        for edge in 0..edge_count {
            for copy in [CopyRef::forward(edge), CopyRef::backward(edge)] {
                if self.state.residual(copy) == 0 {
                    continue;
                }
                let from = self.state.copy_from(copy);
                let to = self.state.copy_to(copy);
                let kind = self.state.copy_kind(copy);
                // Class 1: arcs at light-vertex copies carry no flow.
                let light_endpoint = (from != sink
                    && !heavy[SplitGraph::original_of(from) as usize])
                    || (to != sink && !heavy[SplitGraph::original_of(to) as usize]);
                if light_endpoint {
                    continue;
                }
                // Class 2: special arcs and sink-incident arcs.
                if kind == EdgeKind::Special || from == sink || to == sink {
                    kept.push(copy);
                    continue;
                }
                // Class 3: arcs leaving the explored subgraph or touching an
                // explored out-copy.
                let gamma_touch = (SplitGraph::is_out_copy(from) && explored.contains(from))
                    || (SplitGraph::is_out_copy(to) && explored.contains(to));
                if explored.contains(from) || gamma_touch {
                    kept.push(copy);
                    continue;
                }
                // Class 4: arcs into sidelined in-copies.
                if SplitGraph::is_out_copy(from) && sidelined_in[to as usize] {
                    if !shortcut_tail[from as usize] {
                        kept.push(copy);
                    }
                    continue;
                }
                // Class 5: arcs into retained in-copies.
                if SplitGraph::is_out_copy(from) && retained_in[to as usize] {
                    if keep_retained_arcs {
                        kept.push(copy);
                    }
                    continue;
                }
                // Class 6: backward arcs between unexplored copies.
                debug_assert!(!SplitGraph::is_out_copy(from) && SplitGraph::is_out_copy(to));
                if shortcut_head[from as usize] {
                    continue;
                }
                leftover_kept[from as usize] += 1;
                if leftover_kept[from as usize] > leftover_budget {
                    self.report.note(format!(
                        "vertex {} kept over {leftover_budget} leftover arcs",
                        SplitGraph::original_of(from)
                    ));
                    return Ok(Step3Result {
                        sparsified_edges: kept.len(),
                        fail: Some(FailKind::SparsifyDegreeBudget),
                    });
                }
                kept.push(copy);
            }
        }

        // Flow over the sparsified graph, special arcs trimmed by one grain.
        let mut net = FlowNetwork::new(self.state.graph().node_count());
        let mut arc_copies: Vec<CopyRef> = Vec::new();
        for &copy in &kept {
            let residual = self.state.residual(copy);
            let cap = if self.state.copy_kind(copy) == EdgeKind::Special && !copy.is_backward() {
                trim_to_grain(residual, grain_log)
            } else {
                residual
            };
            if cap > 0 {
                net.add_arc(self.state.copy_from(copy), self.state.copy_to(copy), cap);
                arc_copies.push(copy);
            }
        }
        let flow = max_flow(&net, self.state.source(), sink);

        // When arcs into retained in-copies were dropped, the recorded cut
        // must certify that little flow was lost.
        if let Some(cut_cap) = partition.cut_capacity_units {
            let slack =
                (4.0 * nf.powf(1.0 - 4.4 * eps) * 2f64.powi(grain_log as i32)).ceil() as u128;
            if flow.value < cut_cap.saturating_sub(slack) {
                self.report.note(format!(
                    "sparsified flow {} under cut capacity {} minus slack {}",
                    flow.value, cut_cap, slack
                ));
                return Ok(Step3Result {
                    sparsified_edges: arc_copies.len(),
                    fail: Some(FailKind::CutSlack),
                });
            }
        }

        let deltas: Vec<(CopyRef, u128)> = arc_copies
            .iter()
            .zip(flow.arc_flow.iter())
            .filter(|&(_, &f)| f > 0)
            .map(|(&c, &f)| (c, f))
            .collect();
        self.state.augment(&deltas)?;
        Ok(Step3Result {
            sparsified_edges: arc_copies.len(),
            fail: None,
        })
    }
}
