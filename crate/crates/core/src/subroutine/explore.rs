//! Growth of the explored residual subgraph around the source.
//!
//! Starting from the source out-copy, the procedure absorbs (i) any arc of
//! residual capacity at least `M' * gamma`, and (ii) any out-copy that
//! collects `2^j` parallel in-copy arcs of capacity at least
//! `M' * gamma / 2^j` — counted exactly for small `j`, and located through
//! the sampled heavy-vertex search for large `j`. It halts when it pops a
//! vertex with a residual arc into the sink, when the explored out-copy
//! budget is reached, or when no growth rule applies.

use super::state::Tuning;
use crate::estimators::heavy_vertex;
use crate::flow::{CopyRef, FlowState};
use crate::graph::{bucket_of, EdgeKind, ParamBlock, SplitGraph};
use crate::rng::RngStream;

/// The explored subgraph: vertices and arcs in discovery order.
pub struct Explored {
    pub vertices: Vec<u32>,
    pub in_explored: Vec<bool>,
    pub edges: Vec<CopyRef>,
    /// Explored out-copies other than the source, in discovery order.
    pub out_copies: Vec<u32>,
}

impl Explored {
    pub fn contains(&self, node: u32) -> bool {
        self.in_explored[node as usize]
    }
}

pub enum ExploreOutcome {
    /// Popped a vertex with a residual arc into the sink.
    ReachedSink(u32),
    /// The explored out-copy budget was hit.
    CapReached,
    /// No growth rule applies any more.
    Exhausted,
}

pub fn explore(
    state: &FlowState,
    params: &ParamBlock,
    phase: u32,
    cap: u64,
    tuning: &Tuning,
    stream: &RngStream,
) -> (Explored, ExploreOutcome) {
    let nodes = state.graph().node_count();
    let source = state.source();
    let grain_log = params.z - phase;
    let heavy_log = grain_log + params.gamma_log2;
    let j_star = params.j_dfs_star.min(params.gamma_log2);

    let mut explored = Explored {
        vertices: vec![source],
        in_explored: vec![false; nodes],
        edges: Vec::new(),
        out_copies: Vec::new(),
    };
    explored.in_explored[source as usize] = true;
    let mut stack = vec![source];
    // Per out-copy, per class j: arcs of capacity >= M' gamma / 2^j seen so
    // far from explored in-copies.
    let mut pending: Vec<Vec<Vec<CopyRef>>> = vec![Vec::new(); nodes];
    let mut heavy_calls = 0u64;

    macro_rules! admit {
        ($y:expr, $arcs:expr) => {{
            let y: u32 = $y;
            explored.in_explored[y as usize] = true;
            explored.vertices.push(y);
            explored.edges.extend($arcs);
            stack.push(y);
            if SplitGraph::is_out_copy(y) {
                explored.out_copies.push(y);
                if explored.out_copies.len() as u64 >= cap {
                    return (explored, ExploreOutcome::CapReached);
                }
            }
        }};
    }

    loop {
        while let Some(x) = stack.pop() {
            if state.reaches_sink_directly(x) {
                return (explored, ExploreOutcome::ReachedSink(x));
            }
            let x_is_in_copy = x != state.sink() && !SplitGraph::is_out_copy(x);
            let min_bucket = if x_is_in_copy {
                heavy_log.saturating_sub(j_star) as u8
            } else {
                heavy_log as u8
            };
            for copy in state.out_copies_min_bucket(x, min_bucket) {
                let y = state.copy_to(copy);
                if explored.contains(y) {
                    continue;
                }
                let residual = state.residual(copy);
                if residual >= 1u128 << heavy_log {
                    admit!(y, [copy]);
                    continue;
                }
                if !x_is_in_copy
                    || y == state.sink()
                    || !SplitGraph::is_out_copy(y)
                    || state.copy_kind(copy) != EdgeKind::Regular
                {
                    continue;
                }
                // Arc qualifies for classes j with cap >= M' gamma / 2^j.
                let j_lo = (heavy_log as i32 - bucket_of(residual) as i32).max(1) as u32;
                if j_lo > j_star {
                    continue;
                }
                let slots = &mut pending[y as usize];
                if slots.is_empty() {
                    slots.resize(j_star as usize + 1, Vec::new());
                }
                let mut admitted = false;
                for j in j_lo..=j_star {
                    slots[j as usize].push(copy);
                    if slots[j as usize].len() == 1usize << j {
                        let arcs = std::mem::take(&mut slots[j as usize]);
                        admit!(y, arcs);
                        admitted = true;
                        break;
                    }
                }
                if admitted {
                    continue;
                }
            }
        }

        // Sampled search for out-copies with many parallel arcs in the
        // classes too large to count directly.
        let sources: Vec<u32> = explored
            .vertices
            .iter()
            .copied()
            .filter(|&v| v != state.sink() && !SplitGraph::is_out_copy(v))
            .collect();
        let targets: Vec<u32> = (0..state.graph().base_n() as u32)
            .map(SplitGraph::out_node_of)
            .filter(|&v| !explored.contains(v))
            .collect();
        let mut found = false;
        for j in (j_star + 1)..=params.gamma_log2 {
            let c_star = 1u128 << (heavy_log - j);
            let witness = heavy_vertex(
                state,
                &sources,
                &targets,
                (1u64 << j) + 1,
                c_star,
                params.log2_w_max(),
                &stream.child2(42, heavy_calls),
                tuning.oracle.scale,
            );
            heavy_calls += 1;
            let Some(witness) = witness else { continue };
            let mut arcs: Vec<CopyRef> = Vec::new();
            for &u in &witness.sources {
                if arcs.len() == 1usize << j {
                    break;
                }
                let copy = state
                    .out_copies_min_bucket(u, bucket_of(c_star))
                    .into_iter()
                    .find(|&c| {
                        state.copy_to(c) == witness.vertex
                            && state.copy_kind(c) == EdgeKind::Regular
                            && state.residual(c) >= c_star
                    });
                if let Some(c) = copy {
                    arcs.push(c);
                }
            }
            if arcs.len() < 1usize << j {
                continue;
            }
            admit!(witness.vertex, arcs);
            found = true;
            break;
        }
        if !found {
            return (explored, ExploreOutcome::Exhausted);
        }
    }
}
