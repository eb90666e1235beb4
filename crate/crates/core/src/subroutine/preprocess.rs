//! Preprocessing: the initial coarse-grain flow.
//!
//! One oracle query over the heavy non-neighbors of the source classifies
//! vertices by their degree into that set; high-degree vertices get
//! shortcut arcs to the sink. The initial flow is then computed on a
//! sparse subgraph: copies of heavy vertices only, special arcs trimmed by
//! one coarse grain, and regular arcs limited to the source's and sink's
//! incidences plus the oracle's low-side edge list.

use super::{PResult, Pipeline};
use crate::flow::{max_flow, CopyRef};
use crate::graph::{EdgeKind, SplitGraph};
use std::collections::HashSet;

impl Pipeline<'_> {
    pub(super) fn preprocess(&mut self) -> PResult<()> {
        let n = self.g.n();
        let grain_log = self.params.z; // coarsest grain, 2^z units
        let grain = 1u128 << grain_log;

        let heavy: Vec<bool> = (0..n as u32)
            .map(|v| self.params.units_of_weight(self.g.weight(v)) >= grain)
            .collect();
        let mut in_core = heavy.clone();
        in_core[self.s as usize] = true;

        let query: Vec<u32> = (0..n as u32)
            .filter(|&v| {
                heavy[v as usize] && v != self.s && !self.g.has_edge(self.s, v)
            })
            .collect();
        let response = self.query_oracle(query)?;

        let mut shortcut = vec![false; n];
        for &v in &response.y_high {
            shortcut[v as usize] = true;
            self.add_shortcut_audited(SplitGraph::out_node_of(v), 0, 0)?;
        }
        let low_edges: HashSet<(u32, u32)> = response.e_prime.iter().copied().collect();

        // Initial network: filter the (shortcut-extended) split graph.
        let graph = self.state.graph();
        let mut net = crate::flow::FlowNetwork::new(graph.node_count());
        let mut arc_copies: Vec<CopyRef> = Vec::new();
        for id in 0..graph.edges().len() as u32 {
            let e = graph.edge(id);
            let cap = match e.kind {
                EdgeKind::Special => {
                    let v = SplitGraph::original_of(e.from);
                    if !in_core[v as usize] {
                        continue;
                    }
                    super::step1::trim_to_grain(e.cap, grain_log)
                }
                EdgeKind::Regular => {
                    if e.to == self.state.sink() {
                        // Sink arcs of core vertices (terminal or shortcut).
                        if !in_core[SplitGraph::original_of(e.from) as usize] {
                            continue;
                        }
                        e.cap
                    } else {
                        let u = SplitGraph::original_of(e.from);
                        let v = SplitGraph::original_of(e.to);
                        if !in_core[u as usize] || !in_core[v as usize] {
                            continue;
                        }
                        let from_source = u == self.s;
                        let through_oracle = !shortcut[u as usize]
                            && low_edges.contains(&(u.min(v), u.max(v)));
                        if !(from_source || through_oracle) {
                            continue;
                        }
                        e.cap
                    }
                }
            };
            if cap > 0 {
                net.add_arc(e.from, e.to, cap);
                arc_copies.push(CopyRef::forward(id));
            }
        }

        let flow = max_flow(&net, self.state.source(), self.state.sink());
        let deltas: Vec<(CopyRef, u128)> = arc_copies
            .iter()
            .zip(flow.arc_flow.iter())
            .filter(|&(_, &f)| f > 0)
            .map(|(&c, &f)| (c, f))
            .collect();
        self.state.augment(&deltas).map_err(super::PipeErr::Error)?;
        Ok(())
    }
}
