//! Top-level drivers: the terminal-sampling estimator, the combined solver
//! strategies, instance generation and verification.

use crate::cut::{
    brute_force_global_min_cut, min_pair_cut_value, min_st_vertex_cut, GlobalCut, StCutOutcome,
    VertexCut, BRUTE_FORCE_LIMIT,
};
use crate::error::Error;
use crate::estimators::subgraph_oracle_bulk;
use crate::graph::{ParamBlock, WeightedGraph};
use crate::rng::RngStream;
use crate::sampling::{weight_class_estimate, sparse_graph_estimate, select_terminals, sentinel_value, CutEstimate};
use crate::subroutine::{
    estimate_terminal_cut, ImmediateOracle, Mode, ScriptedOracle, RunOutcome,
    Tuning,
};
use crate::Result;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

const TAG_TERMINALS: u64 = 0x7E51;
const TAG_SUBROUTINE: u64 = 0x5B;
const TAG_ORACLE: u64 = 0x0AC1;

/// Terminal-sampling estimator: draws a terminal set, runs the per-terminal
/// subroutine for each member, and turns the best estimate into an exact
/// pair cut.
pub fn sampled_terminal_estimate(
    g: &WeightedGraph,
    mode: Mode,
    stream: &RngStream,
    tuning: &Tuning,
) -> Result<CutEstimate> {
    let params = ParamBlock::build(g)?;
    let terminals = select_terminals(g, &stream.child(TAG_TERMINALS)).terminals;

    let fallback = |g: &WeightedGraph| -> Result<CutEstimate> {
        let (x, y) = g.first_non_adjacent_pair().ok_or(Error::CompleteGraph)?;
        Ok(CutEstimate {
            c: sentinel_value(g),
            x,
            y,
        })
    };
    if terminals.len() < 2 {
        return fallback(g);
    }

    let estimates: Vec<(u32, u128)> = match mode {
        Mode::Desk => {
            let mut out = Vec::new();
            for &x in &terminals {
                let mut oracle = ImmediateOracle::new(
                    tuning.oracle,
                    params.delta,
                    stream.child2(TAG_ORACLE, x as u64),
                );
                let res = estimate_terminal_cut(
                    g,
                    &terminals,
                    x,
                    Mode::Desk,
                    &mut oracle,
                    &stream.child2(TAG_SUBROUTINE, x as u64),
                    tuning,
                    None,
                )?
                .expect_done();
                out.push((x, res.c_s));
            }
            out
        }
        Mode::Forced => run_scheduled(g, &params, &terminals, stream, tuning)?,
    };

    // Smallest estimate wins, ties to the smallest terminal id; its pair is
    // resolved by one exact cut.
    let mut best: Option<(u32, u128)> = None;
    for &(x, c) in &estimates {
        let t_x: Vec<u32> = terminals
            .iter()
            .copied()
            .filter(|&v| v != x && !g.has_edge(x, v))
            .collect();
        if t_x.is_empty() {
            continue;
        }
        if best.is_none_or(|(_, bc)| c < bc) {
            best = Some((x, c));
        }
    }
    let Some((x, _)) = best else {
        return fallback(g);
    };
    let y = terminals
        .iter()
        .copied()
        .find(|&v| v != x && !g.has_edge(x, v))
        .expect("checked above");
    let c = min_pair_cut_value(g, x, y)?.expect("pair is non-adjacent");
    Ok(CutEstimate { c, x, y })
}

/// Phase-synchronized schedule: every terminal runs until its next oracle
/// query; all pending queries of a round are answered in bulk; terminals
/// then replay their recorded choices with one more answer available.
fn run_scheduled(
    g: &WeightedGraph,
    params: &ParamBlock,
    terminals: &[u32],
    stream: &RngStream,
    tuning: &Tuning,
) -> Result<Vec<(u32, u128)>> {
    let mut answers: BTreeMap<u32, Vec<crate::estimators::OracleResponse>> = BTreeMap::new();
    let mut done: BTreeMap<u32, u128> = BTreeMap::new();
    let mut round = 0u64;
    loop {
        let mut pending: Vec<(u32, Vec<u32>)> = Vec::new();
        for &x in terminals {
            if done.contains_key(&x) {
                continue;
            }
            let mut oracle = ScriptedOracle::new(answers.get(&x).cloned().unwrap_or_default());
            let outcome = estimate_terminal_cut(
                g,
                terminals,
                x,
                Mode::Forced,
                &mut oracle,
                &stream.child2(TAG_SUBROUTINE, x as u64),
                tuning,
                None,
            )?;
            match outcome {
                RunOutcome::Done(out) => {
                    done.insert(x, out.c_s);
                }
                RunOutcome::NeedsOracle(int) => pending.push((x, int.query)),
            }
        }
        if pending.is_empty() {
            break;
        }
        let queries: Vec<Vec<u32>> = pending.iter().map(|(_, q)| q.clone()).collect();
        // Queries may outnumber vertices on tiny instances; answer in chunks.
        let chunk = g.n().max(1);
        let mut responses = Vec::with_capacity(queries.len());
        for (ci, part) in queries.chunks(chunk).enumerate() {
            let bulk = subgraph_oracle_bulk(
                g,
                part,
                params.delta,
                &stream.child2(TAG_ORACLE ^ round, ci as u64),
                &tuning.oracle,
            );
            responses.extend(bulk.responses);
        }
        for ((x, _), resp) in pending.into_iter().zip(responses) {
            answers.entry(x).or_default().push(resp);
        }
        round += 1;
    }
    Ok(terminals
        .iter()
        .filter_map(|&x| done.get(&x).map(|&c| (x, c)))
        .collect())
}

/// Solver strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Density split: sampling drivers below `n^{1.98}` edges, the
    /// class sampler plus terminal estimator above.
    Auto,
    /// Density-matched accuracy exponent for sparse inputs.
    M32,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::M32 => "m32",
        }
    }
}

/// Options accepted by [`solve`].
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub strategy: Strategy,
    pub mode: Mode,
    pub seed: u64,
    pub max_alg3_reps: u32,
    pub verify: bool,
    pub brute_force_limit: usize,
    pub tuning: Tuning,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            strategy: Strategy::Auto,
            mode: Mode::Desk,
            seed: 0,
            max_alg3_reps: 64,
            verify: false,
            brute_force_limit: BRUTE_FORCE_LIMIT,
            tuning: Tuning::default(),
        }
    }
}

/// Verification verdict against the exhaustive oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Optimal,
    ValidButSuboptimal { gap: u128 },
    Invalid,
    Unknown,
}

/// Result of a solver run.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub cut: VertexCut,
    pub value: u128,
    pub algorithm: String,
    pub seed: u64,
    pub mode: String,
    pub verified: Verdict,
    /// Wall-clock stage timings; excluded from replay comparisons.
    pub timings_ms: BTreeMap<String, u128>,
}

/// Computes a global minimum vertex cut estimate with a certified cut.
///
/// The returned cut is always a valid vertex cut; its value is the exact
/// minimum over the returned pair, hence never below the true optimum of
/// the pair and equal to the global optimum whenever the sampled pair
/// crosses one.
pub fn solve(g: &WeightedGraph, options: &SolveOptions) -> Result<SolveReport> {
    if g.n() < 2 {
        return Err(Error::invariant("need at least two vertices"));
    }
    if g.is_complete() {
        return Err(Error::CompleteGraph);
    }
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let shifted = g.make_weights_positive()?;
    let stream = RngStream::new(options.seed);

    let (estimate, algorithm) = match options.strategy {
        Strategy::Auto => {
            let dense_threshold = (g.n() as f64).powf(1.98);
            if (g.m() as f64) <= dense_threshold {
                let est = sparse_graph_estimate(&shifted, 0.01, &stream.child(1))?;
                (est, "sparse-combined".to_string())
            } else {
                let eps = 1.0 / 45.0;
                let class_est = weight_class_estimate(&shifted, eps, &stream.child(1))?;
                let w_prime = shifted.max_weight().max(2) as f64;
                let requested = (2f64.powi(18)
                    * w_prime.log2()
                    * (shifted.n() as f64).log2().powi(4))
                .ceil();
                let reps = (requested as u128).min(options.max_alg3_reps as u128) as u32;
                let mut best: Option<CutEstimate> = None;
                for rep in 0..reps {
                    let est = sampled_terminal_estimate(
                        &shifted,
                        options.mode,
                        &stream.child2(3, rep as u64),
                        &options.tuning,
                    )?;
                    if best.is_none_or(|b| est.c < b.c) {
                        best = Some(est);
                    }
                }
                match best {
                    Some(b) if b.c <= class_est.c => (b, format!("terminal-sampler-x{reps}")),
                    _ => (class_est, format!("class-sampler+terminal-sampler-x{reps}")),
                }
            }
        }
        Strategy::M32 => {
            let x_exp = if g.m() >= 1 {
                (g.m() as f64).ln() / (g.n() as f64).ln()
            } else {
                1.0
            };
            let eps = (1.0 - x_exp / 2.0).clamp(0.01, 0.5);
            let est = sparse_graph_estimate(&shifted, eps, &stream.child(1))?;
            (est, format!("density-matched(eps={eps:.3})"))
        }
    };
    timings.insert("estimate_ms".to_string(), start.elapsed().as_millis());

    // Exact cut for the selected pair, reported in original weights.
    let recover_start = Instant::now();
    let StCutOutcome::Cut(st) = min_st_vertex_cut(&shifted, &[estimate.x], &[estimate.y])? else {
        return Err(Error::invariant("estimate pair is not separable"));
    };
    let cut = VertexCut::new(g, st.x, st.y, st.z)?;
    timings.insert(
        "recover_ms".to_string(),
        recover_start.elapsed().as_millis(),
    );

    let verified = if options.verify {
        let verify_start = Instant::now();
        let verdict = verify(g, &cut, options.brute_force_limit)?;
        timings.insert("verify_ms".to_string(), verify_start.elapsed().as_millis());
        verdict
    } else {
        Verdict::Unknown
    };

    Ok(SolveReport {
        value: cut.value,
        cut,
        algorithm,
        seed: options.seed,
        mode: match options.mode {
            Mode::Desk => "desk".to_string(),
            Mode::Forced => "forced".to_string(),
        },
        verified,
        timings_ms: timings,
    })
}

/// Checks a cut structurally and against the exhaustive oracle.
pub fn verify(g: &WeightedGraph, cut: &VertexCut, limit: usize) -> Result<Verdict> {
    // Structural validity, independent of the oracle.
    let rebuilt = VertexCut::new(g, cut.l.clone(), cut.s.clone(), cut.r.clone());
    let valid = match rebuilt {
        Ok(c) => c.value == cut.value && c.separates(g),
        Err(_) => false,
    };
    if !valid {
        return Ok(Verdict::Invalid);
    }
    match brute_force_global_min_cut(g, limit)? {
        GlobalCut::Complete => Ok(Verdict::Invalid),
        GlobalCut::Cut(opt) => {
            if cut.value == opt.value {
                Ok(Verdict::Optimal)
            } else {
                Ok(Verdict::ValidButSuboptimal {
                    gap: cut.value - opt.value,
                })
            }
        }
    }
}

/// Instance families for the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Uniform graph with exactly `m` edges.
    Gnm,
    /// Planted separator with the given side sizes.
    PlantedCut { l_size: usize, s_size: usize },
    /// A few hubs with attached leaves plus random filler edges.
    StarMix,
}

/// A generated instance, with the planted partition when one exists.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: WeightedGraph,
    pub plant: Option<(Vec<u32>, Vec<u32>, Vec<u32>)>,
}

/// Deterministic instance generator; `m` counts edges, weights are drawn
/// from `1..=w_max`. Complete graphs are rejected.
pub fn generate_instance(
    n: usize,
    m: usize,
    w_max: u64,
    family: Family,
    seed: u64,
) -> Result<Generated> {
    if n < 3 {
        return Err(Error::Infeasible("need at least 3 vertices".to_string()));
    }
    if w_max == 0 {
        return Err(Error::Infeasible("w_max must be positive".to_string()));
    }
    let max_edges = n * (n - 1) / 2;
    if m >= max_edges {
        return Err(Error::Infeasible(format!(
            "m={m} admits no non-complete graph on {n} vertices"
        )));
    }
    let stream = RngStream::new(seed);
    match family {
        Family::Gnm => {
            let mut rng = stream.rng();
            let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(max_edges);
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    pairs.push((u, v));
                }
            }
            // Partial Fisher-Yates: the first m entries become the edges.
            for i in 0..m {
                let j = rng.gen_range(i..pairs.len());
                pairs.swap(i, j);
            }
            pairs.truncate(m);
            let weights = (0..n).map(|_| rng.gen_range(1..=w_max)).collect();
            Ok(Generated {
                graph: WeightedGraph::new(n, weights, pairs)?,
                plant: None,
            })
        }
        Family::PlantedCut { l_size, s_size } => {
            generate_planted(n, m, w_max, l_size, s_size, &stream)
        }
        Family::StarMix => {
            let mut rng = stream.rng();
            let hubs = (n / 8).max(1);
            let mut edges: Vec<(u32, u32)> = Vec::new();
            for h in 1..hubs {
                edges.push((h as u32 - 1, h as u32));
            }
            for v in hubs..n {
                let hub = (v % hubs) as u32;
                edges.push((hub.min(v as u32), hub.max(v as u32)));
            }
            edges.sort_unstable();
            edges.dedup();
            if m < edges.len() {
                return Err(Error::Infeasible(format!(
                    "star family needs at least {} edges",
                    edges.len()
                )));
            }
            let mut pool: Vec<(u32, u32)> = Vec::new();
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if !edges.contains(&(u, v)) {
                        pool.push((u, v));
                    }
                }
            }
            let extra = m - edges.len();
            for i in 0..extra {
                let j = rng.gen_range(i..pool.len());
                pool.swap(i, j);
            }
            edges.extend(pool.into_iter().take(extra));
            let weights = (0..n).map(|_| rng.gen_range(1..=w_max)).collect();
            Ok(Generated {
                graph: WeightedGraph::new(n, weights, edges)?,
                plant: None,
            })
        }
    }
}

fn generate_planted(
    n: usize,
    m: usize,
    w_max: u64,
    l_size: usize,
    s_size: usize,
    stream: &RngStream,
) -> Result<Generated> {
    let r_size = n
        .checked_sub(l_size + s_size)
        .filter(|&r| r >= 1)
        .ok_or_else(|| Error::Infeasible("side sizes exceed n".to_string()))?;
    if l_size < 1 || s_size < 1 {
        return Err(Error::Infeasible("sides must be non-empty".to_string()));
    }
    // Separator weight must undercut any detour through the heavy sides.
    if (l_size + r_size) as u128 * w_max as u128 <= s_size as u128 {
        return Err(Error::Infeasible(
            "separator too large to stay optimal".to_string(),
        ));
    }
    let l: Vec<u32> = (0..l_size as u32).collect();
    let s: Vec<u32> = (l_size as u32..(l_size + s_size) as u32).collect();
    let r: Vec<u32> = ((l_size + s_size) as u32..n as u32).collect();

    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (i, &u) in l.iter().enumerate() {
        for &v in &l[i + 1..] {
            edges.push((u, v));
        }
    }
    for (i, &u) in r.iter().enumerate() {
        for &v in &r[i + 1..] {
            edges.push((u, v));
        }
    }
    for &u in &l {
        for &v in &s {
            edges.push((u, v));
        }
    }
    for &u in &s {
        for &v in &r {
            edges.push((u, v));
        }
    }
    let baseline = edges.len();
    if m < baseline {
        return Err(Error::Infeasible(format!(
            "planted family needs at least {baseline} edges"
        )));
    }
    let mut pool: Vec<(u32, u32)> = Vec::new();
    for (i, &u) in s.iter().enumerate() {
        for &v in &s[i + 1..] {
            pool.push((u, v));
        }
    }
    let extra = m - baseline;
    if extra > pool.len() {
        return Err(Error::Infeasible(format!(
            "planted family admits at most {} edges",
            baseline + pool.len()
        )));
    }
    let mut rng = stream.rng();
    for i in 0..extra {
        let j = rng.gen_range(i..pool.len());
        pool.swap(i, j);
    }
    edges.extend(pool.into_iter().take(extra));

    let mut weights = vec![w_max; n];
    for &v in &s {
        weights[v as usize] = 1;
    }
    let graph = WeightedGraph::new(n, weights, edges)?;
    let plant = if graph.weight_of(&l) <= graph.weight_of(&r) {
        (l, s, r)
    } else {
        (r, s, l)
    };
    Ok(Generated {
        graph,
        plant: Some(plant),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::OracleMode;

    fn p3() -> WeightedGraph {
        WeightedGraph::new(3, vec![5, 3, 7], vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn solve_p3_is_optimal() {
        let g = p3();
        let report = solve(
            &g,
            &SolveOptions {
                verify: true,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(report.value, 3);
        assert_eq!(report.cut.s, vec![1]);
        assert_eq!(report.verified, Verdict::Optimal);
    }

    #[test]
    fn solve_rejects_complete_graphs() {
        let k5 = WeightedGraph::new(
            5,
            vec![1; 5],
            (0..5u32)
                .flat_map(|u| ((u + 1)..5).map(move |v| (u, v)))
                .collect(),
        )
        .unwrap();
        assert!(matches!(
            solve(&k5, &SolveOptions::default()),
            Err(Error::CompleteGraph)
        ));
    }

    #[test]
    fn terminal_estimates_bound_below_by_pair_cut() {
        let g = p3().make_weights_positive().unwrap();
        let mut optimal = 0;
        let sentinel = sentinel_value(&g);
        for seed in 0..60 {
            let est = sampled_terminal_estimate(
                &g,
                Mode::Desk,
                &RngStream::new(seed),
                &Tuning::default(),
            )
            .unwrap();
            let exact = min_pair_cut_value(&g, est.x, est.y).unwrap().unwrap();
            // OPT of the shifted path graph is w'(middle) = 9*3+1 = 28.
            assert!(est.c >= 28);
            if est.c == sentinel {
                // Degenerate terminal draw: arbitrary non-adjacent pair.
                continue;
            }
            assert_eq!(est.c, exact, "sampled_terminal_estimate resolves its pair exactly");
            if est.c == 28 {
                optimal += 1;
            }
        }
        assert!(optimal > 10, "optimal draws: {optimal}");
    }

    #[test]
    fn bulk_and_immediate_scheduling_agree_with_exact_oracle() {
        let g = WeightedGraph::new(
            6,
            vec![19, 7, 13, 5, 11, 17],
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (1, 4)],
        )
        .unwrap()
        .make_weights_positive()
        .unwrap();
        let tuning = Tuning {
            oracle: crate::estimators::OracleConfig {
                mode: OracleMode::Exact,
                ..Default::default()
            },
            ..Tuning::default()
        };
        let params = ParamBlock::build(&g).unwrap();
        for seed in 0..6u64 {
            let stream = RngStream::new(seed);
            let terminals = select_terminals(&g, &stream.child(TAG_TERMINALS)).terminals;
            if terminals.len() < 2 {
                continue;
            }
            let scheduled = run_scheduled(&g, &params, &terminals, &stream, &tuning).unwrap();
            for &(x, c_scheduled) in &scheduled {
                let mut oracle = ImmediateOracle::new(
                    tuning.oracle,
                    params.delta,
                    stream.child2(TAG_ORACLE, x as u64),
                );
                let immediate = estimate_terminal_cut(
                    &g,
                    &terminals,
                    x,
                    Mode::Forced,
                    &mut oracle,
                    &stream.child2(TAG_SUBROUTINE, x as u64),
                    &tuning,
                    None,
                )
                .unwrap()
                .expect_done();
                assert_eq!(c_scheduled, immediate.c_s, "terminal {x} seed {seed}");
            }
        }
    }

    #[test]
    fn generator_is_deterministic_and_respects_family_limits() {
        let a = generate_instance(6, 7, 10, Family::Gnm, 1).unwrap();
        let b = generate_instance(6, 7, 10, Family::Gnm, 1).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.graph.m(), 7);
        assert!(matches!(
            generate_instance(5, 10, 4, Family::Gnm, 0),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn planted_cut_is_confirmed_by_brute_force() {
        let gen = generate_instance(
            10,
            29,
            6,
            Family::PlantedCut {
                l_size: 3,
                s_size: 2,
            },
            5,
        )
        .unwrap();
        let (l, s, r) = gen.plant.clone().unwrap();
        let GlobalCut::Cut(opt) =
            brute_force_global_min_cut(&gen.graph, BRUTE_FORCE_LIMIT).unwrap()
        else {
            panic!("planted graph must have a cut");
        };
        assert_eq!(opt.value, gen.graph.weight_of(&s));
        assert_eq!(opt.s, s);
        // The plant is itself a valid cut.
        let cut = VertexCut::new(&gen.graph, l, s, r).unwrap();
        assert!(cut.separates(&gen.graph));
    }

    #[test]
    fn verify_flags_tampered_reports() {
        let g = p3();
        let good = VertexCut::new(&g, vec![0], vec![1], vec![2]).unwrap();
        assert_eq!(verify(&g, &good, 24).unwrap(), Verdict::Optimal);
        // Suboptimal but valid: separate by the heavier endpoint set.
        let sub = VertexCut {
            l: vec![0],
            s: vec![1, 2],
            r: vec![],
            value: 10,
        };
        // Empty side: invalid.
        assert_eq!(verify(&g, &sub, 24).unwrap(), Verdict::Invalid);
        let crossing = VertexCut {
            l: vec![0, 1],
            s: vec![],
            r: vec![2],
            value: 0,
        };
        assert_eq!(verify(&g, &crossing, 24).unwrap(), Verdict::Invalid);
    }

    #[test]
    fn verify_reports_gap_for_valid_suboptimal_cuts() {
        // Path a-b-c-d: optimum cuts at the lighter middle vertex.
        let g = WeightedGraph::new(4, vec![9, 2, 5, 9], vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let sub = VertexCut::new(&g, vec![0, 1], vec![2], vec![3]).unwrap();
        assert_eq!(
            verify(&g, &sub, 24).unwrap(),
            Verdict::ValidButSuboptimal { gap: 3 }
        );
    }

    #[test]
    fn m32_strategy_matches_brute_force_on_sparse_graphs() {
        let mut hits = 0;
        let mut total = 0;
        for seed in 0..25u64 {
            let gen = generate_instance(9, 12, 8, Family::Gnm, seed).unwrap();
            let GlobalCut::Cut(opt) =
                brute_force_global_min_cut(&gen.graph, BRUTE_FORCE_LIMIT).unwrap()
            else {
                continue;
            };
            let report = solve(
                &gen.graph,
                &SolveOptions {
                    strategy: Strategy::M32,
                    seed,
                    ..SolveOptions::default()
                },
            )
            .unwrap();
            assert!(report.value >= opt.value);
            total += 1;
            if report.value == opt.value {
                hits += 1;
            }
        }
        assert!(total >= 20);
        assert!(hits * 100 >= total * 95, "hits={hits}/{total}");
    }

    #[test]
    fn replay_is_deterministic() {
        let gen = generate_instance(10, 20, 9, Family::Gnm, 77).unwrap();
        let options = SolveOptions {
            seed: 1234,
            verify: true,
            ..SolveOptions::default()
        };
        let a = solve(&gen.graph, &options).unwrap();
        let b = solve(&gen.graph, &options).unwrap();
        assert_eq!(a.cut, b.cut);
        assert_eq!(a.value, b.value);
        assert_eq!(a.algorithm, b.algorithm);
        assert_eq!(a.verified, b.verified);
    }
}
