//! Flow over a split graph plus its residual network, maintained
//! incrementally. Forward and backward copies of every arc live in
//! capacity-bucketed adjacency lists so that scans by residual magnitude
//! stay cheap as the flow changes.

use crate::error::Error;
use crate::estimators::DirectedCapView;
use crate::graph::{bucket_of, DynamicBuckets, EdgeKind, SplitGraph};
use crate::Result;
use std::collections::BTreeMap;

/// One direction of an arc in the residual network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CopyRef(u32);

impl CopyRef {
    pub fn forward(edge: u32) -> CopyRef {
        CopyRef(edge << 1)
    }

    pub fn backward(edge: u32) -> CopyRef {
        CopyRef(edge << 1 | 1)
    }

    pub fn edge(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_backward(self) -> bool {
        self.0 & 1 == 1
    }

    fn raw(self) -> u32 {
        self.0
    }
}

/// Split graph, current flow, and the bucketed residual adjacency.
pub struct FlowState {
    graph: SplitGraph,
    source: u32,
    sink: u32,
    flow: Vec<u128>,
    value: u128,
    support: Vec<u32>,
    in_support: Vec<bool>,
    res_out: DynamicBuckets,
    res_in: DynamicBuckets,
}

impl FlowState {
    pub fn new(graph: SplitGraph, source: u32) -> Result<FlowState> {
        let sink = graph
            .sink()
            .ok_or_else(|| Error::invariant("flow state requires a sink"))?;
        let nodes = graph.node_count();
        let edge_count = graph.edges().len();
        let mut state = FlowState {
            graph,
            source,
            sink,
            flow: vec![0; edge_count],
            value: 0,
            support: Vec::new(),
            in_support: vec![false; edge_count],
            res_out: DynamicBuckets::new(nodes),
            res_in: DynamicBuckets::new(nodes),
        };
        for id in 0..edge_count as u32 {
            state.refresh_edge(id);
        }
        Ok(state)
    }

    pub fn graph(&self) -> &SplitGraph {
        &self.graph
    }

    pub fn source(&self) -> u32 {
        self.source
    }

    pub fn sink(&self) -> u32 {
        self.sink
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn flow_on(&self, edge: u32) -> u128 {
        self.flow[edge as usize]
    }

    /// Edge ids with positive flow, ascending.
    pub fn support(&self) -> Vec<u32> {
        let mut s = self.support.clone();
        s.sort_unstable();
        s
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    /// Residual capacity of a copy.
    pub fn residual(&self, copy: CopyRef) -> u128 {
        let e = self.graph.edge(copy.edge());
        if copy.is_backward() {
            self.flow[copy.edge() as usize]
        } else {
            e.cap - self.flow[copy.edge() as usize]
        }
    }

    pub fn copy_from(&self, copy: CopyRef) -> u32 {
        let e = self.graph.edge(copy.edge());
        if copy.is_backward() {
            e.to
        } else {
            e.from
        }
    }

    pub fn copy_to(&self, copy: CopyRef) -> u32 {
        let e = self.graph.edge(copy.edge());
        if copy.is_backward() {
            e.from
        } else {
            e.to
        }
    }

    pub fn copy_kind(&self, copy: CopyRef) -> EdgeKind {
        self.graph.edge(copy.edge()).kind
    }

    /// Present residual out-copies of `node` with residual `>= 2^min_bucket`,
    /// highest bucket first.
    pub fn out_copies_min_bucket(&self, node: u32, min_bucket: u8) -> Vec<CopyRef> {
        self.res_out
            .collect(node, min_bucket)
            .into_iter()
            .map(CopyRef)
            .collect()
    }

    pub fn out_copies(&self, node: u32) -> Vec<CopyRef> {
        self.out_copies_min_bucket(node, 0)
    }

    pub fn in_copies_min_bucket(&self, node: u32, min_bucket: u8) -> Vec<CopyRef> {
        self.res_in
            .collect(node, min_bucket)
            .into_iter()
            .map(CopyRef)
            .collect()
    }

    /// True if the residual network currently has an arc `(node, sink)`.
    pub fn reaches_sink_directly(&self, node: u32) -> bool {
        self.out_copies(node)
            .into_iter()
            .any(|c| self.copy_to(c) == self.sink)
    }

    fn refresh_edge(&mut self, edge: u32) {
        let e = *self.graph.edge(edge);
        let f = self.flow[edge as usize];
        let fwd = CopyRef::forward(edge);
        let bwd = CopyRef::backward(edge);
        let fwd_res = e.cap - f;
        let bwd_res = f;
        self.res_out
            .update(e.from, fwd.raw(), (fwd_res > 0).then(|| bucket_of(fwd_res)));
        self.res_in
            .update(e.to, fwd.raw(), (fwd_res > 0).then(|| bucket_of(fwd_res)));
        self.res_out
            .update(e.to, bwd.raw(), (bwd_res > 0).then(|| bucket_of(bwd_res)));
        self.res_in
            .update(e.from, bwd.raw(), (bwd_res > 0).then(|| bucket_of(bwd_res)));
    }

    fn set_flow(&mut self, edge: u32, new_flow: u128) {
        let old = self.flow[edge as usize];
        if old == new_flow {
            return;
        }
        self.flow[edge as usize] = new_flow;
        let idx = edge as usize;
        if old == 0 && new_flow > 0 && !self.in_support[idx] {
            self.in_support[idx] = true;
            self.support.push(edge);
        } else if new_flow == 0 && self.in_support[idx] {
            self.in_support[idx] = false;
            self.support.retain(|&e| e != edge);
        }
        self.refresh_edge(edge);
    }

    /// Augments the flow by a residual flow given as copy amounts. Validates
    /// residual capacities and flow bounds; updates value, support and the
    /// residual buckets incrementally.
    pub fn augment(&mut self, deltas: &[(CopyRef, u128)]) -> Result<()> {
        let mut per_edge: BTreeMap<u32, (u128, u128)> = BTreeMap::new();
        for &(copy, amt) in deltas {
            if amt == 0 {
                continue;
            }
            if self.residual(copy) < amt {
                return Err(Error::invariant(format!(
                    "augmentation exceeds residual capacity on edge {}",
                    copy.edge()
                )));
            }
            let entry = per_edge.entry(copy.edge()).or_insert((0, 0));
            if copy.is_backward() {
                entry.1 += amt;
            } else {
                entry.0 += amt;
            }
        }
        for (&edge, &(fwd, bwd)) in &per_edge {
            let e = self.graph.edge(edge);
            let f = self.flow[edge as usize];
            let new_flow = f
                .checked_add(fwd)
                .and_then(|x| x.checked_sub(bwd))
                .ok_or_else(|| Error::invariant("augmentation drives flow negative"))?;
            if new_flow > e.cap {
                return Err(Error::invariant("augmentation exceeds capacity"));
            }
            self.set_flow(edge, new_flow);
        }
        self.value = self.recompute_value();
        #[cfg(debug_assertions)]
        self.assert_conservation();
        Ok(())
    }

    fn recompute_value(&self) -> u128 {
        let mut v: u128 = 0;
        for &e in &self.support {
            let edge = self.graph.edge(e);
            if edge.from == self.source {
                v += self.flow[e as usize];
            }
            if edge.to == self.source {
                v -= self.flow[e as usize];
            }
        }
        v
    }

    /// Every flow value is an integer multiple of `grain`.
    pub fn is_grain_integral(&self, grain: u128) -> bool {
        self.support
            .iter()
            .all(|&e| self.flow[e as usize] % grain == 0)
    }

    /// Adds a shortcut arc and registers its residual copy.
    pub fn add_shortcut(&mut self, target: u32, phase: u32, step: u8) -> Result<u32> {
        let id = self.graph.add_shortcut(target, phase, step)?;
        self.flow.push(0);
        self.in_support.push(false);
        self.refresh_edge(id);
        Ok(id)
    }

    fn arcs_at_least(&self, copies: Vec<CopyRef>, min_cap: u128, inbound: bool) -> Vec<(u32, u128)> {
        copies
            .into_iter()
            .filter_map(|c| {
                let residual = self.residual(c);
                (residual >= min_cap).then(|| {
                    let other = if inbound {
                        self.copy_from(c)
                    } else {
                        self.copy_to(c)
                    };
                    (other, residual)
                })
            })
            .collect()
    }

    #[cfg(debug_assertions)]
    fn assert_conservation(&self) {
        let mut balance = vec![0i128; self.graph.node_count()];
        for &e in &self.support {
            let edge = self.graph.edge(e);
            balance[edge.from as usize] -= self.flow[e as usize] as i128;
            balance[edge.to as usize] += self.flow[e as usize] as i128;
        }
        for node in 0..self.graph.node_count() as u32 {
            if node == self.source || node == self.sink {
                continue;
            }
            assert_eq!(balance[node as usize], 0, "conservation at node {node}");
        }
    }
}

/// Residual view of the flow state as a directed capacitated graph, for the
/// sampled estimators.
impl DirectedCapView for FlowState {
    fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    fn out_arcs_at_least(&self, v: u32, min_cap: u128) -> Vec<(u32, u128)> {
        let min_bucket = if min_cap > 0 { bucket_of(min_cap) } else { 0 };
        self.arcs_at_least(self.out_copies_min_bucket(v, min_bucket), min_cap, false)
    }

    fn in_arcs_at_least(&self, v: u32, min_cap: u128) -> Vec<(u32, u128)> {
        let min_bucket = if min_cap > 0 { bucket_of(min_cap) } else { 0 };
        self.arcs_at_least(self.in_copies_min_bucket(v, min_bucket), min_cap, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ParamBlock, WeightedGraph};

    fn p3_state() -> FlowState {
        let g = WeightedGraph::new(3, vec![5, 3, 7], vec![(0, 1), (1, 2)]).unwrap();
        let p = ParamBlock::build(&g).unwrap();
        let sg = SplitGraph::build(&g, &p, Some(&[2]));
        FlowState::new(sg, SplitGraph::out_node_of(0)).unwrap()
    }

    fn path_copies(state: &FlowState) -> Vec<(CopyRef, u128)> {
        // s_out -> b_in -> b_out -> c_in -> t via forward copies.
        let mut copies = Vec::new();
        let route = [
            (SplitGraph::out_node_of(0), SplitGraph::in_node_of(1)),
            (SplitGraph::in_node_of(1), SplitGraph::out_node_of(1)),
            (SplitGraph::out_node_of(1), SplitGraph::in_node_of(2)),
            (SplitGraph::in_node_of(2), state.sink()),
        ];
        for (from, to) in route {
            let copy = state
                .out_copies(from)
                .into_iter()
                .find(|&c| state.copy_to(c) == to && !c.is_backward())
                .unwrap();
            copies.push((copy, 1u128));
        }
        copies
    }

    #[test]
    fn unit_path_then_cancel() {
        let mut st = p3_state();
        let fwd = path_copies(&st);
        st.augment(&fwd).unwrap();
        assert_eq!(st.value(), 1);
        assert_eq!(st.support().len(), 4);
        // Reverse the same flow through backward copies.
        let rev: Vec<(CopyRef, u128)> = fwd
            .iter()
            .map(|&(c, a)| (CopyRef::backward(c.edge()), a))
            .collect();
        st.augment(&rev).unwrap();
        assert_eq!(st.value(), 0);
        assert!(st.support().is_empty());
    }

    #[test]
    fn rejects_overfull_augmentation() {
        let mut st = p3_state();
        let special_b = st.graph().special_edge_of(1);
        let cap = st.graph().edge(special_b).cap;
        let err = st
            .augment(&[(CopyRef::forward(special_b), cap + 1)])
            .unwrap_err();
        assert!(matches!(err, Error::Invariant(_)));
    }

    #[test]
    fn buckets_track_residual_changes() {
        let mut st = p3_state();
        let special_b = st.graph().special_edge_of(1);
        let cap = st.graph().edge(special_b).cap;
        let before = st.out_copies_min_bucket(SplitGraph::in_node_of(1), bucket_of(cap));
        assert!(before.contains(&CopyRef::forward(special_b)));
        st.augment(&[
            (
                st.out_copies(SplitGraph::out_node_of(0))
                    .into_iter()
                    .find(|&c| st.copy_to(c) == SplitGraph::in_node_of(1))
                    .unwrap(),
                cap / 2,
            ),
            (CopyRef::forward(special_b), cap / 2),
            (
                st.out_copies(SplitGraph::out_node_of(1))
                    .into_iter()
                    .find(|&c| st.copy_to(c) == SplitGraph::in_node_of(2))
                    .unwrap(),
                cap / 2,
            ),
            (
                st.out_copies(SplitGraph::in_node_of(2))
                    .into_iter()
                    .find(|&c| st.copy_to(c) == st.sink())
                    .unwrap(),
                cap / 2,
            ),
        ])
        .unwrap();
        // The forward copy halved; a backward copy appeared.
        assert_eq!(st.residual(CopyRef::forward(special_b)), cap - cap / 2);
        assert_eq!(st.residual(CopyRef::backward(special_b)), cap / 2);
        let bwd = st.out_copies(SplitGraph::out_node_of(1));
        assert!(bwd.contains(&CopyRef::backward(special_b)));
    }
}
