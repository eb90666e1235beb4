use crate::error::Error;
use crate::graph::{ParamBlock, WeightedGraph};
use crate::Result;

/// Split-graph edges are either vertex gadgets or connectivity arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// In-copy to out-copy arc carrying the vertex weight.
    Special,
    /// High-capacity arc (original edge direction, sink arc, or shortcut).
    Regular,
}

#[derive(Clone, Copy, Debug)]
pub struct SplitEdge {
    pub from: u32,
    pub to: u32,
    /// Capacity in units of the parameter block's scaling unit.
    pub cap: u128,
    pub kind: EdgeKind,
}

/// One shortcut arc added towards the sink, with provenance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShortcutRecord {
    /// Split-graph node the arc leaves from.
    pub target: u32,
    /// Phase index (0 = preprocessing).
    pub phase: u32,
    /// Pipeline step within the phase that added it.
    pub step: u8,
    pub edge: u32,
}

pub const NO_SLOT: u32 = u32::MAX;

/// Bucket index of a positive capacity: `floor(log2 cap)`.
pub fn bucket_of(cap: u128) -> u8 {
    debug_assert!(cap > 0);
    (127 - cap.leading_zeros()) as u8
}

#[derive(Clone, Copy)]
struct Slot {
    node: u32,
    bucket: u8,
    pos: u32,
}

const ABSENT: Slot = Slot {
    node: NO_SLOT,
    bucket: 0,
    pos: 0,
};

/// Capacity-bucketed incidence lists with O(1) amortized insert, remove and
/// bucket moves (index-addressed swap-remove). One instance covers one
/// direction (out-lists or in-lists) for all nodes.
#[derive(Clone)]
pub struct DynamicBuckets {
    lists: Vec<Vec<Vec<u32>>>,
    slots: Vec<Slot>,
}

impl DynamicBuckets {
    pub fn new(nodes: usize) -> Self {
        DynamicBuckets {
            lists: vec![Vec::new(); nodes],
            slots: Vec::new(),
        }
    }

    pub fn add_node(&mut self) {
        self.lists.push(Vec::new());
    }

    fn slot(&mut self, id: u32) -> &mut Slot {
        if self.slots.len() <= id as usize {
            self.slots.resize(id as usize + 1, ABSENT);
        }
        &mut self.slots[id as usize]
    }

    pub fn contains(&self, id: u32) -> bool {
        (id as usize) < self.slots.len() && self.slots[id as usize].node != NO_SLOT
    }

    pub fn insert(&mut self, node: u32, id: u32, bucket: u8) {
        debug_assert!(!self.contains(id));
        let lists = &mut self.lists[node as usize];
        if lists.len() <= bucket as usize {
            lists.resize(bucket as usize + 1, Vec::new());
        }
        let pos = lists[bucket as usize].len() as u32;
        lists[bucket as usize].push(id);
        *self.slot(id) = Slot { node, bucket, pos };
    }

    pub fn remove(&mut self, id: u32) {
        let slot = self.slots[id as usize];
        debug_assert!(slot.node != NO_SLOT);
        let list = &mut self.lists[slot.node as usize][slot.bucket as usize];
        let last = *list.last().unwrap();
        list.swap_remove(slot.pos as usize);
        if last != id {
            self.slots[last as usize].pos = slot.pos;
        }
        self.slots[id as usize] = ABSENT;
    }

    /// Moves `id` to a new bucket (or inserts/removes on absent/zero sides).
    pub fn update(&mut self, node: u32, id: u32, bucket: Option<u8>) {
        let present = self.contains(id);
        match (present, bucket) {
            (false, Some(b)) => self.insert(node, id, b),
            (true, None) => self.remove(id),
            (true, Some(b)) => {
                if self.slots[id as usize].bucket != b {
                    self.remove(id);
                    self.insert(node, id, b);
                }
            }
            (false, None) => {}
        }
    }

    pub fn ids_at(&self, node: u32, bucket: u8) -> &[u32] {
        self.lists[node as usize]
            .get(bucket as usize)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn max_bucket(&self, node: u32) -> Option<u8> {
        let lists = &self.lists[node as usize];
        (0..lists.len()).rev().find(|&b| !lists[b].is_empty()).map(|b| b as u8)
    }

    /// All ids incident to `node`, highest bucket first; order within a
    /// bucket is the list order (deterministic given the operation history).
    pub fn collect(&self, node: u32, min_bucket: u8) -> Vec<u32> {
        let lists = &self.lists[node as usize];
        let mut out = Vec::new();
        for b in (min_bucket as usize..lists.len()).rev() {
            out.extend_from_slice(&lists[b]);
        }
        out
    }
}

/// Directed capacitated companion of a weighted graph.
///
/// Every original vertex `v` becomes an in-copy (node `2v`) and an out-copy
/// (node `2v+1`) joined by a special arc of capacity `w(v)`; every original
/// edge becomes two regular arcs of capacity `w_max`. An optional sink node
/// `2n` receives regular arcs from the in-copies of a chosen target set, and
/// shortcut arcs may be appended later (recorded in the ledger). Capacities
/// are stored in units of `M_z` so that grain arithmetic stays integral.
pub struct SplitGraph {
    base_n: usize,
    nodes: usize,
    sink: Option<u32>,
    edges: Vec<SplitEdge>,
    out_buckets: DynamicBuckets,
    in_buckets: DynamicBuckets,
    ledger: Vec<ShortcutRecord>,
    unit_log2: i32,
    w_max_units: u128,
}

impl SplitGraph {
    /// Builds the split graph of `g`. If `sink_targets` is given, a sink node
    /// is added with a regular arc from each target's in-copy.
    pub fn build(
        g: &WeightedGraph,
        params: &ParamBlock,
        sink_targets: Option<&[u32]>,
    ) -> SplitGraph {
        let n = g.n();
        let nodes = 2 * n + usize::from(sink_targets.is_some());
        let mut sg = SplitGraph {
            base_n: n,
            nodes,
            sink: sink_targets.map(|_| 2 * n as u32),
            edges: Vec::with_capacity(n + 2 * g.m()),
            out_buckets: DynamicBuckets::new(nodes),
            in_buckets: DynamicBuckets::new(nodes),
            ledger: Vec::new(),
            unit_log2: params.unit_log2,
            w_max_units: params.w_max_units(),
        };
        for v in 0..n as u32 {
            sg.push_edge(
                Self::in_node_of(v),
                Self::out_node_of(v),
                params.units_of_weight(g.weight(v)),
                EdgeKind::Special,
            );
        }
        for &(u, v) in g.edges() {
            sg.push_edge(
                Self::out_node_of(u),
                Self::in_node_of(v),
                sg.w_max_units,
                EdgeKind::Regular,
            );
            sg.push_edge(
                Self::out_node_of(v),
                Self::in_node_of(u),
                sg.w_max_units,
                EdgeKind::Regular,
            );
        }
        if let Some(targets) = sink_targets {
            let sink = sg.sink.unwrap();
            let mut sorted: Vec<u32> = targets.to_vec();
            sorted.sort_unstable();
            for v in sorted {
                sg.push_edge(
                    Self::in_node_of(v),
                    sink,
                    sg.w_max_units,
                    EdgeKind::Regular,
                );
            }
        }
        sg
    }

    fn push_edge(&mut self, from: u32, to: u32, cap: u128, kind: EdgeKind) -> u32 {
        let id = self.edges.len() as u32;
        self.edges.push(SplitEdge {
            from,
            to,
            cap,
            kind,
        });
        if cap > 0 {
            let b = bucket_of(cap);
            self.out_buckets.insert(from, id, b);
            self.in_buckets.insert(to, id, b);
        }
        id
    }

    pub fn in_node_of(v: u32) -> u32 {
        2 * v
    }

    pub fn out_node_of(v: u32) -> u32 {
        2 * v + 1
    }

    pub fn is_out_copy(node: u32) -> bool {
        node % 2 == 1
    }

    /// Original vertex of a copy node (not the sink).
    pub fn original_of(node: u32) -> u32 {
        node / 2
    }

    pub fn base_n(&self) -> usize {
        self.base_n
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn sink(&self) -> Option<u32> {
        self.sink
    }

    pub fn edges(&self) -> &[SplitEdge] {
        &self.edges
    }

    pub fn edge(&self, id: u32) -> &SplitEdge {
        &self.edges[id as usize]
    }

    /// Special arc id of vertex `v` (edge ids 0..n are the special arcs).
    pub fn special_edge_of(&self, v: u32) -> u32 {
        v
    }

    pub fn w_max_units(&self) -> u128 {
        self.w_max_units
    }

    pub fn unit_log2(&self) -> i32 {
        self.unit_log2
    }

    pub fn ledger(&self) -> &[ShortcutRecord] {
        &self.ledger
    }

    /// Adds a shortcut arc `(target, sink)` of capacity `w_max` and records
    /// it in the ledger.
    pub fn add_shortcut(&mut self, target: u32, phase: u32, step: u8) -> Result<u32> {
        let sink = self
            .sink
            .ok_or_else(|| Error::invariant("shortcut requires a sink"))?;
        let id = self.push_edge(target, sink, self.w_max_units, EdgeKind::Regular);
        self.ledger.push(ShortcutRecord {
            target,
            phase,
            step,
            edge: id,
        });
        Ok(id)
    }

    /// Bucket of an edge in absolute weight scale: `floor(log2 cap_abs)`.
    pub fn absolute_bucket(&self, id: u32) -> i32 {
        bucket_of(self.edges[id as usize].cap) as i32 + self.unit_log2
    }

    /// Out-edge ids of a node, highest capacity bucket first.
    pub fn out_edge_ids(&self, node: u32) -> Vec<u32> {
        self.out_buckets.collect(node, 0)
    }

    pub fn in_edge_ids(&self, node: u32) -> Vec<u32> {
        self.in_buckets.collect(node, 0)
    }

    pub fn out_edge_ids_min_bucket(&self, node: u32, min_bucket: u8) -> Vec<u32> {
        self.out_buckets.collect(node, min_bucket)
    }
}
