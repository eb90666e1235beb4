//! Isolating cuts: for a terminal set `T`, the minimum cut value separating
//! each terminal from the rest, using one cut computation per label bit plus
//! one small flow per terminal component.

use crate::cut::{min_st_vertex_cut, StCutOutcome};
use crate::error::Error;
use crate::graph::WeightedGraph;
use crate::Result;

/// Per-terminal minimum-cut values and witness components.
#[derive(Clone, Debug)]
pub struct IsolatingResult {
    /// `(terminal, cut value)` in input order of the sorted terminal set.
    pub values: Vec<(u32, u128)>,
    /// Witness component of each terminal, restricted to original vertices.
    pub components: Vec<Vec<u32>>,
}

impl IsolatingResult {
    pub fn value_of(&self, v: u32) -> Option<u128> {
        self.values.iter().find(|&&(t, _)| t == v).map(|&(_, c)| c)
    }
}

/// Computes, for every `v` in `T`, the value of the minimum vertex cut
/// separating `v` from `T \ {v}`.
///
/// Every edge is first subdivided by a vertex of weight `2nW`, which makes
/// the terminal set independent without changing any terminal cut value.
/// Terminals then receive distinct bit labels; one minimum cut per bit
/// position splits the graph into per-terminal components, and a local flow
/// in each component yields the final value.
///
/// A terminal adjacent to another terminal has no proper separating cut;
/// its reported value is the subdivided-graph value, at least `2nW` and
/// larger than every proper cut of the input.
pub fn isolating_cuts(g: &WeightedGraph, terminals: &[u32]) -> Result<IsolatingResult> {
    let mut term: Vec<u32> = terminals.to_vec();
    term.sort_unstable();
    term.dedup();
    if term.len() < 2 {
        return Err(Error::invariant("isolating cuts need at least 2 terminals"));
    }

    let n = g.n();
    let heavy = 2 * (n as u64) * g.max_weight().max(1);
    // Subdivided graph: original vertices keep their ids; edge k gains
    // vertex n + k.
    let mut weights: Vec<u64> = g.weights().to_vec();
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(2 * g.m());
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        let mid = (n + k) as u32;
        weights.push(heavy);
        edges.push((u, mid));
        edges.push((mid, v));
    }
    let sub = WeightedGraph::new(n + g.m(), weights, edges)?;

    let bits = usize::BITS - (term.len() - 1).leading_zeros();
    let mut removed = vec![false; sub.n()];
    for bit in 0..bits {
        let side_a: Vec<u32> = term
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx >> bit & 1 == 0)
            .map(|(_, &v)| v)
            .collect();
        let side_b: Vec<u32> = term
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx >> bit & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        match min_st_vertex_cut(&sub, &side_a, &side_b)? {
            StCutOutcome::Cut(cut) => {
                for &v in &cut.y {
                    removed[v as usize] = true;
                }
            }
            StCutOutcome::Undefined => {
                return Err(Error::invariant(
                    "terminal sides joined after subdivision",
                ));
            }
        }
    }

    // Connected components of the subdivided graph minus the removed
    // separators; each terminal sits in its own component.
    let mut comp = vec![u32::MAX; sub.n()];
    let mut next = 0u32;
    for start in 0..sub.n() as u32 {
        if removed[start as usize] || comp[start as usize] != u32::MAX {
            continue;
        }
        comp[start as usize] = next;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in sub.neighbors(u) {
                if !removed[v as usize] && comp[v as usize] == u32::MAX {
                    comp[v as usize] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    for window in term.windows(2) {
        if comp[window[0] as usize] == comp[window[1] as usize]
            && comp[window[0] as usize] != u32::MAX
        {
            return Err(Error::invariant(
                "two terminals share a component after separator removal",
            ));
        }
    }

    let mut values = Vec::with_capacity(term.len());
    let mut components = Vec::with_capacity(term.len());
    for &v in &term {
        let cid = comp[v as usize];
        debug_assert_ne!(cid, u32::MAX, "terminal removed by separator");
        let member: Vec<u32> = (0..sub.n() as u32)
            .filter(|&u| comp[u as usize] == cid)
            .collect();
        values.push((v, local_cut_value(&sub, &member, v)?));
        components.push(
            member
                .iter()
                .copied()
                .filter(|&u| (u as usize) < n)
                .collect(),
        );
    }
    Ok(IsolatingResult { values, components })
}

/// Minimum cut between `v` and the neighborhood boundary of its component:
/// the induced graph on `members ∪ N(members)` minus boundary-internal
/// edges, with a super-sink attached to the boundary.
fn local_cut_value(sub: &WeightedGraph, members: &[u32], v: u32) -> Result<u128> {
    let mut in_member = vec![false; sub.n()];
    for &u in members {
        in_member[u as usize] = true;
    }
    let mut boundary: Vec<u32> = Vec::new();
    let mut in_boundary = vec![false; sub.n()];
    for &u in members {
        for &w in sub.neighbors(u) {
            if !in_member[w as usize] && !in_boundary[w as usize] {
                in_boundary[w as usize] = true;
                boundary.push(w);
            }
        }
    }
    if boundary.is_empty() {
        // The component is a whole connected piece; the empty set separates.
        return Ok(0);
    }
    boundary.sort_unstable();

    // Local graph: members, boundary, super-sink.
    let mut map = vec![u32::MAX; sub.n()];
    let mut weights = Vec::new();
    for (i, &u) in members.iter().chain(boundary.iter()).enumerate() {
        map[u as usize] = i as u32;
        weights.push(sub.weight(u));
    }
    let sink = weights.len() as u32;
    weights.push(1);
    let mut edges = Vec::new();
    for &u in members {
        for &w in sub.neighbors(u) {
            if u < w || !in_member[w as usize] {
                let a = map[u as usize];
                let b = map[w as usize];
                if a != u32::MAX && b != u32::MAX {
                    edges.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    for &b in &boundary {
        edges.push((map[b as usize], sink));
    }
    edges.sort_unstable();
    edges.dedup();
    let local = WeightedGraph::new(weights.len(), weights, edges)?;
    match min_st_vertex_cut(&local, &[map[v as usize]], &[sink])? {
        StCutOutcome::Cut(cut) => Ok(cut.value),
        StCutOutcome::Undefined => Err(Error::invariant("terminal adjacent to super-sink")),
    }
}
