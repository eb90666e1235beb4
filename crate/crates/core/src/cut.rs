//! Minimum s-t and S-T vertex cuts via the split graph, recovery of vertex
//! cuts from edge cuts, and the exhaustive oracle used throughout testing.

use crate::error::Error;
use crate::flow::{min_edge_cut, FlowNetwork};
use crate::graph::{SplitGraph, WeightedGraph};
use crate::Result;
use serde::Serialize;

/// Default vertex-count ceiling for the exhaustive oracle.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// A global vertex cut: a partition `(L, S, R)` with no `L`-`R` edge.
/// Canonical orientation: `w(L) <= w(R)`; all member lists sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCut {
    pub l: Vec<u32>,
    pub s: Vec<u32>,
    pub r: Vec<u32>,
    pub value: u128,
}

impl VertexCut {
    /// Builds and normalizes a cut; checks the partition invariants.
    pub fn new(g: &WeightedGraph, mut l: Vec<u32>, mut s: Vec<u32>, mut r: Vec<u32>) -> Result<Self> {
        l.sort_unstable();
        s.sort_unstable();
        r.sort_unstable();
        if l.is_empty() || r.is_empty() {
            return Err(Error::invariant("cut sides must be non-empty"));
        }
        let mut seen = vec![false; g.n()];
        for &v in l.iter().chain(&s).chain(&r) {
            if (v as usize) >= g.n() || seen[v as usize] {
                return Err(Error::invariant("cut is not a partition"));
            }
            seen[v as usize] = true;
        }
        if !seen.iter().all(|&x| x) {
            return Err(Error::invariant("cut is not a partition"));
        }
        if g.weight_of(&l) > g.weight_of(&r) {
            std::mem::swap(&mut l, &mut r);
        }
        let value = g.weight_of(&s);
        let cut = VertexCut { l, s, r, value };
        if !cut.separates(g) {
            return Err(Error::invariant("an edge crosses between L and R"));
        }
        Ok(cut)
    }

    /// No edge connects `L` to `R`.
    pub fn separates(&self, g: &WeightedGraph) -> bool {
        let mut side = vec![0u8; g.n()];
        for &v in &self.l {
            side[v as usize] = 1;
        }
        for &v in &self.r {
            side[v as usize] = 2;
        }
        g.edges()
            .iter()
            .all(|&(u, v)| side[u as usize] == 0 || side[v as usize] == 0 || side[u as usize] == side[v as usize])
    }
}

/// Directed s-t vertex cut `(X, Y, Z)` with `s` in `X` and `t` in `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StVertexCut {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub z: Vec<u32>,
    pub value: u128,
}

/// Outcome of a minimum S-T vertex-cut computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StCutOutcome {
    /// The sets touch or are joined by an edge; no separating cut exists.
    Undefined,
    Cut(StVertexCut),
}

/// Builds the plain flow network of a split graph (all arcs, stored caps).
pub fn split_to_network(split: &SplitGraph) -> FlowNetwork {
    let mut net = FlowNetwork::new(split.node_count());
    for e in split.edges() {
        net.add_arc(e.from, e.to, e.cap);
    }
    net
}

/// Recovers a minimum s-t vertex cut of `g` from a minimum
/// `s_out`-`t_in` edge cut of its split graph, given as the source-side
/// node set. Applies the two normalization moves: the in-copy of `s` joins
/// the source side, and any out-copy whose in-copy is on the sink side moves
/// to the sink side. Neither move increases the cut capacity.
pub fn recover_vertex_cut(
    g: &WeightedGraph,
    split: &SplitGraph,
    source_side: &[bool],
    s: u32,
    t: u32,
) -> Result<StVertexCut> {
    let mut side = source_side.to_vec();
    side[SplitGraph::in_node_of(s) as usize] = true;
    for v in 0..g.n() as u32 {
        let vin = SplitGraph::in_node_of(v) as usize;
        let vout = SplitGraph::out_node_of(v) as usize;
        if !side[vin] && side[vout] {
            side[vout] = false;
        }
    }
    let (mut x, mut y, mut z) = (Vec::new(), Vec::new(), Vec::new());
    for v in 0..g.n() as u32 {
        let vin = side[SplitGraph::in_node_of(v) as usize];
        let vout = side[SplitGraph::out_node_of(v) as usize];
        match (vin, vout) {
            (true, true) => x.push(v),
            (true, false) => y.push(v),
            (false, false) => z.push(v),
            (false, true) => unreachable!("normalization removed this case"),
        }
    }
    // All crossing edges must now be special; a crossing regular edge means
    // the provided cut was not a minimum cut below the regular capacity.
    for e in split.edges() {
        if side[e.from as usize] && !side[e.to as usize] && e.kind == crate::graph::EdgeKind::Regular
        {
            return Err(Error::invariant(
                "a regular edge crosses the provided edge cut",
            ));
        }
    }
    if !x.contains(&s) || !z.contains(&t) {
        return Err(Error::invariant("cut does not separate s from t"));
    }
    let value = g.weight_of(&y);
    Ok(StVertexCut { x, y, z, value })
}

/// Minimum S-T vertex cut in `g` via the auxiliary-graph construction:
/// weights on `S ∪ T` are raised above any proper cut, super-vertices `s`
/// and `t` join the sets, and the split network of the result is solved
/// exactly. The network is assembled directly (vertex `v` becomes nodes
/// `2v` and `2v+1`), since this runs in every oracle and sampler loop.
pub fn min_st_vertex_cut(g: &WeightedGraph, s_set: &[u32], t_set: &[u32]) -> Result<StCutOutcome> {
    if s_set.is_empty() || t_set.is_empty() {
        return Err(Error::invariant("terminal sets must be non-empty"));
    }
    let n = g.n();
    let mut in_s = vec![false; n];
    let mut in_t = vec![false; n];
    for &v in s_set {
        in_s[v as usize] = true;
    }
    for &v in t_set {
        if in_s[v as usize] {
            return Ok(StCutOutcome::Undefined);
        }
        in_t[v as usize] = true;
    }
    for &(u, v) in g.edges() {
        if (in_s[u as usize] && in_t[v as usize]) || (in_t[u as usize] && in_s[v as usize]) {
            return Ok(StCutOutcome::Undefined);
        }
    }

    // Capacities: plain weights on inner vertices, `inf` (above any proper
    // cut) on the terminal sets and super vertices, and a still larger
    // capacity on connectivity arcs so that minimum cuts cross only
    // vertex arcs.
    let total: u128 = (0..n as u32).map(|v| g.weight(v) as u128).sum();
    let inf = total + 1;
    let reg = 2 * total + 2;
    let sv = n as u32;
    let tv = n as u32 + 1;
    let aux_n = n + 2;
    let node_in = |v: u32| 2 * v;
    let node_out = |v: u32| 2 * v + 1;

    let mut net = FlowNetwork::new(2 * aux_n);
    for v in 0..aux_n as u32 {
        let cap = if v >= sv || in_s[v as usize] || in_t[v as usize] {
            inf
        } else {
            g.weight(v) as u128
        };
        net.add_arc(node_in(v), node_out(v), cap);
    }
    let connect = |a: u32, b: u32, net: &mut FlowNetwork| {
        net.add_arc(node_out(a), node_in(b), reg);
        net.add_arc(node_out(b), node_in(a), reg);
    };
    for &(u, v) in g.edges() {
        connect(u, v, &mut net);
    }
    for &v in s_set {
        connect(sv, v, &mut net);
    }
    for &v in t_set {
        connect(tv, v, &mut net);
    }

    let cut = min_edge_cut(&net, node_out(sv), node_in(tv));
    let mut side = cut.source_side;
    // Normalization moves: the source's in-copy joins the source side, and
    // an out-copy strands on the source side only through its vertex arc.
    side[node_in(sv) as usize] = true;
    for v in 0..aux_n as u32 {
        if !side[node_in(v) as usize] && side[node_out(v) as usize] {
            side[node_out(v) as usize] = false;
        }
    }
    let (mut x, mut y, mut z) = (Vec::new(), Vec::new(), Vec::new());
    for v in 0..n as u32 {
        match (side[node_in(v) as usize], side[node_out(v) as usize]) {
            (true, true) => x.push(v),
            (true, false) => y.push(v),
            (false, false) => z.push(v),
            (false, true) => unreachable!("normalization removed this case"),
        }
    }
    let value = g.weight_of(&y);
    debug_assert_eq!(cut.value, value, "edge cut equals separator weight");
    debug_assert!(y.iter().all(|&v| !in_s[v as usize] && !in_t[v as usize]));
    Ok(StCutOutcome::Cut(StVertexCut { x, y, z, value }))
}

/// Result of the exhaustive oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlobalCut {
    /// Complete graphs have no vertex cut.
    Complete,
    Cut(VertexCut),
}

/// Exhaustive global minimum vertex cut: the minimum over all non-adjacent
/// vertex pairs `(x, y)` of the exact minimum x-y vertex cut. Ties are
/// broken towards the lexicographically smallest separator set.
pub fn brute_force_global_min_cut(g: &WeightedGraph, limit: usize) -> Result<GlobalCut> {
    if g.n() > limit {
        return Err(Error::SizeLimit { n: g.n(), limit });
    }
    if g.is_complete() {
        return Ok(GlobalCut::Complete);
    }
    let mut best: Option<VertexCut> = None;
    for x in 0..g.n() as u32 {
        for y in (x + 1)..g.n() as u32 {
            if g.has_edge(x, y) {
                continue;
            }
            let StCutOutcome::Cut(st) = min_st_vertex_cut(g, &[x], &[y])? else {
                continue;
            };
            let cut = VertexCut::new(g, st.x, st.y, st.z)?;
            let better = match &best {
                None => true,
                Some(b) => (cut.value, &cut.s) < (b.value, &b.s),
            };
            if better {
                best = Some(cut);
            }
        }
    }
    best.map(GlobalCut::Cut)
        .ok_or_else(|| Error::invariant("non-complete graph without candidate pair"))
}

/// Exact minimum s-t vertex-cut value for two single vertices; `None` when
/// adjacent or equal (undefined).
pub fn min_pair_cut_value(g: &WeightedGraph, x: u32, y: u32) -> Result<Option<u128>> {
    if x == y || g.has_edge(x, y) {
        return Ok(None);
    }
    match min_st_vertex_cut(g, &[x], &[y])? {
        StCutOutcome::Cut(c) => Ok(Some(c.value)),
        StCutOutcome::Undefined => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ParamBlock, WeightedGraph};
    use crate::rng::RngStream;
    use rand::Rng;

    fn p3() -> WeightedGraph {
        WeightedGraph::new(3, vec![5, 3, 7], vec![(0, 1), (1, 2)]).unwrap()
    }

    /// Exhaustive subset oracle: minimum weight of `Y ⊆ V \ (S ∪ T)` whose
    /// removal disconnects every S-vertex from every T-vertex.
    fn subset_oracle(g: &WeightedGraph, s_set: &[u32], t_set: &[u32]) -> Option<u128> {
        let n = g.n();
        let mut blocked = vec![false; n];
        let free: Vec<u32> = (0..n as u32)
            .filter(|v| !s_set.contains(v) && !t_set.contains(v))
            .collect();
        let mut best: Option<u128> = None;
        for mask in 0..(1u32 << free.len()) {
            blocked.iter_mut().for_each(|b| *b = false);
            let mut weight: u128 = 0;
            for (i, &v) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    blocked[v as usize] = true;
                    weight += g.weight(v) as u128;
                }
            }
            if best.is_some_and(|b| weight >= b) {
                continue;
            }
            // BFS from S avoiding blocked vertices.
            let mut seen = vec![false; n];
            let mut queue: Vec<u32> = s_set.to_vec();
            for &v in s_set {
                seen[v as usize] = true;
            }
            while let Some(u) = queue.pop() {
                for &v in g.neighbors(u) {
                    if !seen[v as usize] && !blocked[v as usize] {
                        seen[v as usize] = true;
                        queue.push(v);
                    }
                }
            }
            if t_set.iter().all(|&v| !seen[v as usize]) {
                best = Some(weight);
            }
        }
        best
    }

    fn random_graph(stream: &RngStream, n: usize, density: f64, wmax: u64) -> WeightedGraph {
        let mut rng = stream.rng();
        loop {
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if rng.gen::<f64>() < density {
                        edges.push((u, v));
                    }
                }
            }
            let weights = (0..n).map(|_| rng.gen_range(1..=wmax)).collect();
            let g = WeightedGraph::new(n, weights, edges).unwrap();
            if !g.is_complete() {
                return g;
            }
        }
    }

    #[test]
    fn p3_recover_isolates_first_vertex() {
        let g = p3();
        let params = ParamBlock::build(&g).unwrap();
        let split = SplitGraph::build(&g, &params, None);
        // Source side {a_out, a_in, b_in}: crossing edge is b's special edge.
        let mut side = vec![false; split.node_count()];
        side[SplitGraph::out_node_of(0) as usize] = true;
        side[SplitGraph::in_node_of(0) as usize] = true;
        side[SplitGraph::in_node_of(1) as usize] = true;
        let st = recover_vertex_cut(&g, &split, &side, 0, 2).unwrap();
        assert_eq!((st.x.as_slice(), st.y.as_slice(), st.z.as_slice()), (&[0][..], &[1][..], &[2][..]));
        assert_eq!(st.value, 3);
    }

    #[test]
    fn four_cycle_cut_value() {
        // Cycle a-b-c-d with weights (1,2,3,4); min a-c cut removes {b, d}.
        let g = WeightedGraph::new(4, vec![1, 2, 3, 4], vec![(0, 1), (1, 2), (2, 3), (0, 3)])
            .unwrap();
        let StCutOutcome::Cut(st) = min_st_vertex_cut(&g, &[0], &[2]).unwrap() else {
            panic!("cut should exist");
        };
        assert_eq!(st.y, vec![1, 3]);
        assert_eq!(st.value, 6);
    }

    #[test]
    fn p3_single_pair_and_adjacent() {
        let g = p3();
        let StCutOutcome::Cut(st) = min_st_vertex_cut(&g, &[0], &[2]).unwrap() else {
            panic!()
        };
        assert_eq!(st.value, 3);
        assert_eq!(st.y, vec![1]);
        assert_eq!(
            min_st_vertex_cut(&g, &[0], &[1]).unwrap(),
            StCutOutcome::Undefined
        );
    }

    #[test]
    fn brute_force_examples() {
        let k3 = WeightedGraph::new(3, vec![1, 2, 3], vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            brute_force_global_min_cut(&k3, BRUTE_FORCE_LIMIT).unwrap(),
            GlobalCut::Complete
        );

        let star =
            WeightedGraph::new(4, vec![2, 1, 1, 1], vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let GlobalCut::Cut(c) = brute_force_global_min_cut(&star, BRUTE_FORCE_LIMIT).unwrap()
        else {
            panic!()
        };
        assert_eq!(c.value, 2);
        assert_eq!(c.s, vec![0]);

        let GlobalCut::Cut(c) = brute_force_global_min_cut(&p3(), BRUTE_FORCE_LIMIT).unwrap()
        else {
            panic!()
        };
        assert_eq!((c.l.as_slice(), c.s.as_slice(), c.r.as_slice()), (&[0][..], &[1][..], &[2][..]));
        assert_eq!(c.value, 3);
    }

    #[test]
    fn size_limit_is_enforced() {
        let g = random_graph(&RngStream::new(5), 8, 0.4, 9);
        assert!(matches!(
            brute_force_global_min_cut(&g, 4),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn pair_cuts_match_subset_oracle() {
        let root = RngStream::new(0xC0FFEE);
        for trial in 0..40u64 {
            let stream = root.child(trial);
            let mut rng = stream.child(99).rng();
            let n = rng.gen_range(4..=9);
            let g = random_graph(&stream, n, 0.45, 12);
            for _ in 0..4 {
                let x = rng.gen_range(0..n as u32);
                let y = rng.gen_range(0..n as u32);
                if x == y || g.has_edge(x, y) {
                    continue;
                }
                let got = min_pair_cut_value(&g, x, y).unwrap();
                let want = subset_oracle(&g, &[x], &[y]);
                assert_eq!(got, want, "pair ({x},{y}) trial {trial}");
            }
        }
    }

    #[test]
    fn set_cuts_match_subset_oracle() {
        let root = RngStream::new(0xBEEF);
        for trial in 0..25u64 {
            let stream = root.child(trial);
            let mut rng = stream.child(7).rng();
            let n = rng.gen_range(5..=9);
            let g = random_graph(&stream, n, 0.4, 10);
            let a = rng.gen_range(0..n as u32);
            let b = rng.gen_range(0..n as u32);
            let c = rng.gen_range(0..n as u32);
            if a == b || a == c || b == c {
                continue;
            }
            let s_set = vec![a];
            let t_set = vec![b, c];
            let got = min_st_vertex_cut(&g, &s_set, &t_set).unwrap();
            let want = if g.has_edge(a, b) || g.has_edge(a, c) {
                None
            } else {
                subset_oracle(&g, &s_set, &t_set)
            };
            match (got, want) {
                (StCutOutcome::Undefined, None) => {}
                (StCutOutcome::Cut(cut), Some(v)) => assert_eq!(cut.value, v, "trial {trial}"),
                (got, want) => panic!("mismatch on trial {trial}: {got:?} vs {want:?}"),
            }
        }
    }

    #[test]
    fn brute_force_matches_pairwise_minimum() {
        let root = RngStream::new(42);
        for trial in 0..20u64 {
            let g = random_graph(&root.child(trial), 7, 0.5, 8);
            let GlobalCut::Cut(cut) = brute_force_global_min_cut(&g, 12).unwrap() else {
                continue;
            };
            let mut best: Option<u128> = None;
            for x in 0..g.n() as u32 {
                for y in (x + 1)..g.n() as u32 {
                    if let Some(v) = min_pair_cut_value(&g, x, y).unwrap() {
                        best = Some(best.map_or(v, |b: u128| b.min(v)));
                    }
                }
            }
            assert_eq!(Some(cut.value), best, "trial {trial}");
        }
    }

    #[test]
    fn recovered_cuts_satisfy_invariants() {
        let root = RngStream::new(77);
        for trial in 0..30u64 {
            let g = random_graph(&root.child(trial), 8, 0.4, 15);
            let Some((x, y)) = g.first_non_adjacent_pair() else {
                continue;
            };
            let StCutOutcome::Cut(st) = min_st_vertex_cut(&g, &[x], &[y]).unwrap() else {
                continue;
            };
            let cut = VertexCut::new(&g, st.x, st.y, st.z).unwrap();
            assert!(cut.separates(&g));
            assert!(g.weight_of(&cut.l) <= g.weight_of(&cut.r));
        }
    }
}
