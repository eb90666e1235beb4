//! Step 1 of a phase: local flow augmentations.
//!
//! Each iteration explores the residual network around the source. If the
//! exploration pops a vertex with a sink arc, a grain-integral flow of
//! value `M' * gamma / 2` is routed to it inside the explored subgraph and
//! pushed on to the sink. If the exploration instead fills its out-copy
//! budget, a random explored out-copy gets a shortcut arc and the same
//! augmentation targets it. Once the exploration exhausts, the boundary
//! capacity classes are audited and the step ends.

use super::explore::{explore, ExploreOutcome, Explored};
use super::state::FailKind;
use super::Pipeline;
use crate::flow::{max_flow, CopyRef, FlowNetwork};
use crate::graph::{bucket_of, EdgeKind, SplitGraph};
use crate::Result;
use rand::Rng;

pub(super) struct Step1Result {
    pub explored: Explored,
    pub iterations: u32,
    pub augmented_units: u128,
    pub fail: Option<FailKind>,
}

/// Trims a capacity to a multiple of `2^grain_log` within
/// `[cap - 2 grain, cap - grain]`; zero when below one grain.
pub(super) fn trim_to_grain(cap: u128, grain_log: u32) -> u128 {
    let grain = 1u128 << grain_log;
    if cap < grain {
        0
    } else {
        ((cap - grain) >> grain_log) << grain_log
    }
}

impl Pipeline<'_> {
    pub(super) fn step1(&mut self, phase: u32) -> Result<Step1Result> {
        let cap = self
            .tuning
            .explore_cap_override
            .unwrap_or(self.params.explore_cap);
        let grain_log = self.params.z - phase;
        let chunk = 1u128 << (grain_log + self.params.gamma_log2 - 1);
        let mut augmented = 0u128;

        for iteration in 0..=self.params.z_prime {
            let stream = self.stream.child2(phase as u64, iteration as u64);
            let (explored, outcome) = explore(
                &self.state,
                &self.params,
                phase,
                cap,
                &self.tuning,
                &stream.child(1),
            );
            if iteration == self.params.z_prime
                && !matches!(outcome, ExploreOutcome::Exhausted)
            {
                return Ok(Step1Result {
                    explored,
                    iterations: iteration,
                    augmented_units: augmented,
                    fail: Some(FailKind::LocalAugmentBudget),
                });
            }
            match outcome {
                ExploreOutcome::ReachedSink(x) => {
                    augmented += self.local_augment(&explored, x, None, grain_log, chunk)?;
                }
                ExploreOutcome::CapReached => {
                    let idx = stream
                        .child(2)
                        .rng()
                        .gen_range(0..explored.out_copies.len());
                    let target = explored.out_copies[idx];
                    let edge = self.add_shortcut_audited(target, phase, 1)?;
                    augmented +=
                        self.local_augment(&explored, target, Some(edge), grain_log, chunk)?;
                }
                ExploreOutcome::Exhausted => {
                    let fail = self.verify_boundary_classes(&explored, grain_log);
                    return Ok(Step1Result {
                        explored,
                        iterations: iteration,
                        augmented_units: augmented,
                        fail,
                    });
                }
            }
        }
        unreachable!("loop covers the budget case");
    }

    /// Routes `chunk` units from the source to `target` inside the explored
    /// subgraph (special arcs trimmed by one grain) and extends the flow to
    /// the sink through `sink_edge` or any residual sink arc of `target`.
    fn local_augment(
        &mut self,
        explored: &Explored,
        target: u32,
        sink_edge: Option<u32>,
        grain_log: u32,
        chunk: u128,
    ) -> Result<u128> {
        let mut deltas: Vec<(CopyRef, u128)> = Vec::new();
        let mut routed = chunk;
        if target != self.state.source() {
            let mut map = vec![u32::MAX; self.state.graph().node_count()];
            for (i, &v) in explored.vertices.iter().enumerate() {
                map[v as usize] = i as u32;
            }
            let virtual_sink = explored.vertices.len() as u32;
            let mut net = FlowNetwork::new(explored.vertices.len() + 1);
            let mut arc_copies: Vec<CopyRef> = Vec::new();
            for &copy in &explored.edges {
                let from = map[self.state.copy_from(copy) as usize];
                let to = map[self.state.copy_to(copy) as usize];
                debug_assert!(from != u32::MAX && to != u32::MAX);
                let residual = self.state.residual(copy);
                let cap = if self.state.copy_kind(copy) == EdgeKind::Special {
                    trim_to_grain(residual, grain_log)
                } else {
                    residual
                };
                if cap > 0 {
                    net.add_arc(from, to, cap);
                    arc_copies.push(copy);
                }
            }
            net.add_arc(map[target as usize], virtual_sink, chunk);
            let flow = max_flow(&net, map[self.state.source() as usize], virtual_sink);
            if flow.value < chunk {
                self.report.note(format!(
                    "local augmentation produced {} of {} units",
                    flow.value, chunk
                ));
                debug_assert!(false, "explored subgraph must carry a full chunk");
            }
            routed = flow.value;
            for (arc, &copy) in arc_copies.iter().enumerate() {
                if flow.arc_flow[arc] > 0 {
                    deltas.push((copy, flow.arc_flow[arc]));
                }
            }
        }

        let sink_copy = match sink_edge {
            Some(edge) => CopyRef::forward(edge),
            None => self
                .state
                .out_copies(target)
                .into_iter()
                .find(|&c| {
                    self.state.copy_to(c) == self.state.sink()
                        && self.state.residual(c) >= routed
                })
                .expect("popped vertex keeps a sink arc with headroom"),
        };
        deltas.push((sink_copy, routed));
        self.state.augment(&deltas)?;
        Ok(routed)
    }

    /// Counts boundary arcs (explored in-copy to unexplored out-copy) per
    /// capacity class `[M' gamma / 2^j, M' gamma / 2^{j-1})` and fails when
    /// a class exceeds its budget.
    fn verify_boundary_classes(&mut self, explored: &Explored, grain_log: u32) -> Option<FailKind> {
        let heavy_log = grain_log + self.params.gamma_log2;
        let mut counts = vec![0u64; self.params.gamma_log2 as usize + 1];
        for &x in &explored.vertices {
            if x == self.state.sink() || SplitGraph::is_out_copy(x) {
                continue;
            }
            for copy in self.state.out_copies(x) {
                let y = self.state.copy_to(copy);
                if y == self.state.sink()
                    || !SplitGraph::is_out_copy(y)
                    || explored.contains(y)
                    || self.state.copy_kind(copy) != EdgeKind::Regular
                {
                    continue;
                }
                let residual = self.state.residual(copy);
                debug_assert!(
                    residual < 1u128 << heavy_log,
                    "boundary arc should have been explored"
                );
                debug_assert!(residual >= 1u128 << grain_log);
                let j = heavy_log - bucket_of(residual) as u32;
                if (1..=self.params.gamma_log2).contains(&j) {
                    counts[j as usize] += 1;
                }
            }
        }
        let outside = self
            .state
            .graph()
            .base_n()
            .saturating_sub(explored.out_copies.len() + 1) as f64;
        for j in 1..=self.params.gamma_log2 {
            let budget = outside
                * 2f64.powi(j as i32 + 11)
                * self.params.log2_n()
                * self.params.log2_w_max();
            if counts[j as usize] as f64 > budget {
                self.report.note(format!(
                    "boundary class {j} holds {} arcs over budget {budget:.0}",
                    counts[j as usize]
                ));
                return Some(FailKind::EdgeClassBudget);
            }
        }
        None
    }
}
