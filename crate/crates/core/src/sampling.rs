//! Randomized cut-estimate drivers: isolating-cut sampling over weight
//! classes, high-degree probing, their combination for non-dense graphs,
//! and terminal-set sampling for the refinement pipeline.

use crate::cut::min_pair_cut_value;
use crate::error::Error;
use crate::graph::WeightedGraph;
use crate::isolating::isolating_cuts;
use crate::rng::RngStream;
use crate::Result;
use rand::Rng;
use std::collections::HashMap;

/// An upper estimate `c` for the minimum x-y vertex cut of a concrete
/// non-adjacent pair. `c >= mincut(x, y)` always holds; the drivers aim for
/// `c = OPT` with good probability.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutEstimate {
    pub c: u128,
    pub x: u32,
    pub y: u32,
}

/// `w_max` of the graph (least power of two `>= 2n * next_pow2(max_w + 1)`),
/// used as the sentinel estimate value.
pub fn sentinel_value(g: &WeightedGraph) -> u128 {
    let wp = (g.max_weight().max(1) + 1).next_power_of_two() as u128;
    (2 * g.n() as u128 * wp).next_power_of_two()
}

fn degenerate_fallback(g: &WeightedGraph) -> Result<CutEstimate> {
    let (x, y) = g.first_non_adjacent_pair().ok_or(Error::CompleteGraph)?;
    Ok(CutEstimate {
        c: sentinel_value(g),
        x,
        y,
    })
}

/// Vertices whose weight lies in `[2^i, 2^{i+1})`.
pub fn weight_class(g: &WeightedGraph, i: u32) -> Vec<u32> {
    (0..g.n() as u32)
        .filter(|&v| {
            let w = g.weight(v);
            w >= 1 && w.ilog2() == i
        })
        .collect()
}

fn repetitions_alg1(n: usize, eps: f64) -> usize {
    (8.0 * (n as f64).powf(1.0 - eps) * (n as f64).ln()).ceil() as usize
}

/// Cache of exact pair-cut values; the samplers revisit pairs constantly.
type PairMemo = HashMap<(u32, u32), u128>;

fn pair_cut_memoized(g: &WeightedGraph, x: u32, y: u32, memo: &mut PairMemo) -> Result<u128> {
    let key = (x.min(y), x.max(y));
    if let Some(&c) = memo.get(&key) {
        return Ok(c);
    }
    let c = min_pair_cut_value(g, x, y)?.expect("memoized pairs are non-adjacent");
    memo.insert(key, c);
    Ok(c)
}

/// One draw of the probe primitive: picks a candidate outside `N[x]` with
/// probability proportional to weight and resolves the exact pair cut.
/// `None` when `x` dominates the graph.
fn weighted_probe(
    g: &WeightedGraph,
    x: u32,
    rng: &mut impl Rng,
    memo: &mut PairMemo,
) -> Result<Option<(u128, u32)>> {
    let candidates: Vec<u32> = (0..g.n() as u32)
        .filter(|&v| v != x && !g.has_edge(x, v))
        .collect();
    if candidates.is_empty() {
        return Ok(None);
    }
    let total: u128 = candidates.iter().map(|&v| g.weight(v) as u128).sum();
    let mut target = rng.gen_range(0..total.max(1));
    let mut y = *candidates.last().unwrap();
    for &v in &candidates {
        let w = g.weight(v) as u128;
        if target < w {
            y = v;
            break;
        }
        target -= w;
    }
    let c = pair_cut_memoized(g, x, y, memo)?;
    Ok(Some((c, y)))
}

/// One weight-class round: repeatedly samples a terminal set from class `i`
/// with keep probability `1/(2 lambda)` and runs isolating cuts, keeping
/// the smallest per-terminal value seen.
///
/// A singleton draw cannot feed the isolating procedure, yet it is exactly
/// the outcome the success event produces when the class holds no vertex
/// beyond the cut's near side; such draws fall back to one probe draw,
/// which succeeds with constant probability whenever the singleton lies on
/// the light side of an optimal cut.
pub fn weight_class_round(
    g: &WeightedGraph,
    class: u32,
    lambda: u64,
    eps: f64,
    stream: &RngStream,
) -> Result<CutEstimate> {
    if g.is_complete() {
        return Err(Error::CompleteGraph);
    }
    let mut memo = ClassMemo::default();
    match class_round(g, class, lambda, eps, stream, &mut memo)? {
        Some((c, false, x, y)) => Ok(CutEstimate { c, x, y }),
        _ => degenerate_fallback(g),
    }
}

/// Memoized per-sample results: the repetition loop redraws small samples
/// constantly, and the underlying computations are pure.
#[derive(Default)]
struct ClassMemo {
    pairs: PairMemo,
    isolating: HashMap<Vec<u32>, (u128, u32, u32)>,
}

fn class_round(
    g: &WeightedGraph,
    class: u32,
    lambda: u64,
    eps: f64,
    stream: &RngStream,
    memo: &mut ClassMemo,
) -> Result<Option<(u128, bool, u32, u32)>> {
    let members = weight_class(g, class);
    // Smallest estimate wins; on ties a separable pair beats an adjacent
    // one, so a tie against a degenerate triple cannot void a good round.
    let mut best: Option<(u128, bool, u32, u32)> = None;
    if members.is_empty() {
        return Ok(None);
    }
    let reps = repetitions_alg1(g.n(), eps);
    let p = 1.0 / (2.0 * lambda as f64);
    for rep in 0..reps {
        let mut rng = stream.child(rep as u64).rng();
        let sample: Vec<u32> = members
            .iter()
            .copied()
            .filter(|_| rng.gen::<f64>() < p)
            .collect();
        let (c, x, y) = match sample.len() {
            0 => continue,
            1 => {
                let Some((c, y)) = weighted_probe(g, sample[0], &mut rng, &mut memo.pairs)?
                else {
                    continue;
                };
                (c, sample[0], y)
            }
            _ => {
                if let Some(&(c, x, y)) = memo.isolating.get(&sample) {
                    (c, x, y)
                } else {
                    let iso = isolating_cuts(g, &sample)?;
                    let &(x, c) = iso
                        .values
                        .iter()
                        .min_by_key(|&&(v, c)| (c, v))
                        .expect("terminal set non-empty");
                    let y = *sample.iter().find(|&&u| u != x).expect("two terminals");
                    memo.isolating.insert(sample, (c, x, y));
                    (c, x, y)
                }
            }
        };
        let degenerate = g.has_edge(x, y);
        if best.is_none_or(|(bc, bd, _, _)| (c, degenerate) < (bc, bd)) {
            best = Some((c, degenerate, x, y));
        }
    }
    Ok(best)
}

/// Weight-class sampling driver: loops every class `i` and every dyadic
/// size guess `lambda = 2^j`, returning the smallest estimate found
/// (first occurrence wins ties).
pub fn weight_class_estimate(g: &WeightedGraph, eps: f64, stream: &RngStream) -> Result<CutEstimate> {
    if g.is_complete() {
        return Err(Error::CompleteGraph);
    }
    let max_class = 64 - g.max_weight().max(1).leading_zeros();
    let max_j = usize::BITS - (g.n() - 1).leading_zeros();
    let mut best: Option<CutEstimate> = None;
    let mut memo = ClassMemo::default();
    for class in 0..=max_class {
        memo.isolating.clear();
        for j in 0..=max_j {
            let round = class_round(
                g,
                class,
                1u64 << j,
                eps,
                &stream.child2(class as u64, j as u64),
                &mut memo,
            )?;
            // A round whose best triple is degenerate resolves to the
            // sentinel fallback, exactly as the standalone round does.
            let est = match round {
                Some((c, false, x, y)) => CutEstimate { c, x, y },
                _ => degenerate_fallback(g)?,
            };
            if best.is_none_or(|b| est.c < b.c) {
                best = Some(est);
            }
        }
    }
    Ok(best.expect("at least one class round ran"))
}

fn repetitions_alg2(n: usize) -> usize {
    (12.0 * (n as f64).ln()).ceil().max(1.0) as usize
}

/// Probes one vertex: samples candidates outside `N[x]` with probability
/// proportional to weight and takes the best exact x-candidate cut.
pub fn probe_vertex(g: &WeightedGraph, x: u32, stream: &RngStream) -> Result<(u128, u32)> {
    let mut best: Option<(u128, u32)> = None;
    let mut memo = PairMemo::default();
    for rep in 0..repetitions_alg2(g.n()) {
        let mut rng = stream.child(rep as u64).rng();
        let Some((c, y)) = weighted_probe(g, x, &mut rng, &mut memo)? else {
            return Err(Error::NoCandidate(format!(
                "vertex {x} is adjacent to every other vertex"
            )));
        };
        if best.is_none_or(|b| c < b.0) {
            best = Some((c, y));
        }
    }
    best.ok_or_else(|| Error::NoCandidate("no probe repetitions ran".to_string()))
}

/// High-degree probing driver: probes every vertex of degree at least
/// `n^{1-eps}`; falls back to the sentinel estimate when no vertex
/// qualifies or every qualifying vertex dominates the graph.
pub fn degree_probe_estimate(g: &WeightedGraph, eps: f64, stream: &RngStream) -> Result<CutEstimate> {
    if g.is_complete() {
        return Err(Error::CompleteGraph);
    }
    let threshold = (g.n() as f64).powf(1.0 - eps);
    let mut best: Option<CutEstimate> = None;
    for x in 0..g.n() as u32 {
        if (g.degree(x) as f64) < threshold {
            continue;
        }
        match probe_vertex(g, x, &stream.child(x as u64)) {
            Ok((c, y)) => {
                if best.is_none_or(|b| c < b.c) {
                    best = Some(CutEstimate { c, x, y });
                }
            }
            Err(Error::NoCandidate(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    match best {
        Some(est) => Ok(est),
        None => degenerate_fallback(g),
    }
}

/// Combined driver for graphs with `m <= n^{2-2 eps}`: the better of the
/// two samplers, preferring the probe branch on ties.
pub fn sparse_graph_estimate(g: &WeightedGraph, eps: f64, stream: &RngStream) -> Result<CutEstimate> {
    let class_est = weight_class_estimate(g, eps, &stream.child(1))?;
    let probe_est = degree_probe_estimate(g, eps, &stream.child(2))?;
    Ok(if probe_est.c <= class_est.c {
        probe_est
    } else {
        class_est
    })
}

/// A sampled terminal set plus per-vertex non-neighbor views.
#[derive(Clone, Debug)]
pub struct TerminalSet {
    pub terminals: Vec<u32>,
}

impl TerminalSet {
    /// `T \ ({x} ∪ N(x))` for a terminal `x`.
    pub fn separable_from(&self, g: &WeightedGraph, x: u32) -> Vec<u32> {
        self.terminals
            .iter()
            .copied()
            .filter(|&v| v != x && !g.has_edge(x, v))
            .collect()
    }
}

/// Samples a terminal set: draws a dyadic weight scale uniformly, then keeps
/// every vertex with probability `w(v) / 2^{i+1}` (clamped to one).
pub fn select_terminals(g: &WeightedGraph, stream: &RngStream) -> TerminalSet {
    let mut rng = stream.rng();
    let max_scale = {
        let product = g.n() as u128 * g.max_weight().max(1) as u128;
        (128 - (product - 1).leading_zeros()).max(1)
    };
    let i = rng.gen_range(1..=max_scale);
    let denom = 2f64.powi(i as i32 + 1);
    let terminals: Vec<u32> = (0..g.n() as u32)
        .filter(|&v| rng.gen::<f64>() < (g.weight(v) as f64 / denom).min(1.0))
        .collect();
    TerminalSet { terminals }
}

/// Test predicate: `T` is good for the cut `(L, S, R)` when it has exactly
/// one vertex in `L`, at least one in `R`, and its `S`-vertices all neighbor
/// the unique `L`-vertex.
pub fn is_good_terminal_set(
    g: &WeightedGraph,
    terminals: &[u32],
    l: &[u32],
    s: &[u32],
    r: &[u32],
) -> bool {
    let in_l: Vec<u32> = terminals.iter().copied().filter(|v| l.contains(v)).collect();
    if in_l.len() != 1 {
        return false;
    }
    if !terminals.iter().any(|v| r.contains(v)) {
        return false;
    }
    let x = in_l[0];
    terminals
        .iter()
        .filter(|v| s.contains(v))
        .all(|&v| g.has_edge(x, v))
}
