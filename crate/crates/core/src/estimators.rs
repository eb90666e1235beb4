//! Randomized sampling subroutines: undirected degree estimation, directed
//! heavy-degree estimation, the heavy-vertex search, and the subgraph
//! oracle in single-query and bulk form.
//!
//! All estimators share one scheme: sample a probe set with probability
//! proportional to an oversampling factor `L = log2(n) * log2(W)`, then
//! threshold on probe hits. The guard, sampling, abort and membership
//! thresholds all carry `L`; the `scale` knob multiplies `L` so that tests
//! can engage the sampling machinery on instances far below the sizes the
//! thresholds were designed for (`scale = 1` is the reference behavior).

use crate::graph::WeightedGraph;
use crate::rng::RngStream;
use rand::Rng;

/// Oversampling factor `log2(n) * log2(W)`, floored at 1.
fn log_factor(n: usize, w_log2: f64) -> f64 {
    ((n.max(2) as f64).log2() * w_log2.max(1.0)).max(1.0)
}

/// `w_max(G)` exponent: log2 of the least power of two `>= 2n * w'_max`.
pub fn w_max_log2_of(g: &WeightedGraph) -> f64 {
    let wp = (g.max_weight().max(1) + 1).next_power_of_two();
    let target = 2 * g.n() as u128 * wp as u128;
    (128 - (target - 1).leading_zeros()) as f64
}

/// Vertices of `z_prime` with approximately `tau` or more neighbors in `z`.
///
/// Guarantees when the estimate engages: every returned vertex very likely
/// has at least `tau` neighbors in `z`, and every vertex with
/// `1000 * tau * L` neighbors in `z` is very likely returned. When `tau`
/// exceeds `|z| / (100 L)` the answer is trivially empty (no vertex can
/// clear the error threshold), and the sampler is skipped.
pub fn degree_estimation(
    g: &WeightedGraph,
    z: &[u32],
    z_prime: &[u32],
    tau: f64,
    w_log2: f64,
    stream: &RngStream,
    scale: f64,
) -> Vec<u32> {
    let l = log_factor(g.n(), w_log2) * scale;
    if tau > z.len() as f64 / (100.0 * l) {
        return Vec::new();
    }
    let p = (10.0 * l / tau).min(1.0);
    let mut rng = stream.rng();
    let probes: Vec<u32> = z.iter().copied().filter(|_| rng.gen::<f64>() < p).collect();
    if probes.len() as f64 > 100.0 * z.len() as f64 * l / tau {
        return Vec::new();
    }
    let mut hits = vec![0u32; g.n()];
    for &u in &probes {
        for &v in g.neighbors(u) {
            hits[v as usize] += 1;
        }
    }
    let threshold = (100.0 * l).max(1.0);
    z_prime
        .iter()
        .copied()
        .filter(|&v| hits[v as usize] as f64 >= threshold)
        .collect()
}

/// Exact counterpart used by the oracle's exact mode.
pub fn exact_high_degree(g: &WeightedGraph, z: &[u32], tau: f64) -> Vec<u32> {
    let mut in_z = vec![false; g.n()];
    for &v in z {
        in_z[v as usize] = true;
    }
    (0..g.n() as u32)
        .filter(|&v| {
            let count = g.neighbors(v).iter().filter(|&&u| in_z[u as usize]).count();
            count as f64 >= tau
        })
        .collect()
}

/// Read-only view of a directed capacitated graph, as needed by the
/// directed estimators. Arc iteration order must be deterministic.
pub trait DirectedCapView {
    fn node_count(&self) -> usize;
    /// Outgoing arcs `(to, cap)` of `v` with `cap >= min_cap`.
    fn out_arcs_at_least(&self, v: u32, min_cap: u128) -> Vec<(u32, u128)>;
    /// Incoming arcs `(from, cap)` of `v` with `cap >= min_cap`.
    fn in_arcs_at_least(&self, v: u32, min_cap: u128) -> Vec<(u32, u128)>;
}

/// Vertices of `z` with approximately `tau` or more outgoing arcs of
/// capacity at least `c_star` into `z_prime`. Mirror of
/// [`degree_estimation`] with the probe set drawn from `z_prime`.
pub fn directed_heavy_degree_estimation(
    net: &impl DirectedCapView,
    z: &[u32],
    z_prime: &[u32],
    tau: f64,
    c_star: u128,
    w_log2: f64,
    stream: &RngStream,
    scale: f64,
) -> Vec<u32> {
    let l = log_factor(net.node_count(), w_log2) * scale;
    if tau > z_prime.len() as f64 / (100.0 * l) {
        return Vec::new();
    }
    let p = (10.0 * l / tau).min(1.0);
    let mut rng = stream.rng();
    let probes: Vec<u32> = z_prime
        .iter()
        .copied()
        .filter(|_| rng.gen::<f64>() < p)
        .collect();
    if probes.len() as f64 > 100.0 * z_prime.len() as f64 * l / tau {
        return Vec::new();
    }
    let mut in_probe = vec![false; net.node_count()];
    for &u in &probes {
        in_probe[u as usize] = true;
    }
    let threshold = (100.0 * l).max(1.0);
    z.iter()
        .copied()
        .filter(|&v| {
            let hits = net
                .out_arcs_at_least(v, c_star)
                .iter()
                .filter(|&&(u, _)| in_probe[u as usize])
                .count();
            hits as f64 >= threshold
        })
        .collect()
}

/// Witness of a heavy vertex: a target in `z_prime` together with `tau`
/// distinct sources in `z`, each joined by an arc of capacity `>= c_star`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyWitness {
    pub vertex: u32,
    pub sources: Vec<u32>,
}

/// Searches for a vertex of `z_prime` with at least `tau` qualifying
/// incoming arcs from `z`. A returned witness is always valid (the final
/// scan is exact); `None` may miss vertices below `1000 * tau * L`
/// qualifying arcs, and errs on heavier ones only with small probability.
pub fn heavy_vertex(
    net: &impl DirectedCapView,
    z: &[u32],
    z_prime: &[u32],
    tau: u64,
    c_star: u128,
    w_log2: f64,
    stream: &RngStream,
    scale: f64,
) -> Option<HeavyWitness> {
    let l = log_factor(net.node_count(), w_log2) * scale;
    if tau as f64 > z.len() as f64 / (100.0 * l) {
        return None;
    }
    let p = (10.0 * l / tau as f64).min(1.0);
    let mut rng = stream.rng();
    let probes: Vec<u32> = z.iter().copied().filter(|_| rng.gen::<f64>() < p).collect();
    if probes.len() as f64 > 100.0 * z.len() as f64 * l / tau as f64 {
        return None;
    }
    let mut hits = vec![0u32; net.node_count()];
    for &u in &probes {
        for (v, _) in net.out_arcs_at_least(u, c_star) {
            hits[v as usize] += 1;
        }
    }
    let threshold = (100.0 * l).max(1.0);
    let candidate = z_prime
        .iter()
        .copied()
        .find(|&v| hits[v as usize] as f64 >= threshold)?;

    // Exact verification scan; sources come out deterministic and distinct.
    let mut in_z = vec![false; net.node_count()];
    for &u in z {
        in_z[u as usize] = true;
    }
    let mut sources: Vec<u32> = net
        .in_arcs_at_least(candidate, c_star)
        .into_iter()
        .map(|(u, _)| u)
        .filter(|&u| in_z[u as usize])
        .collect();
    sources.sort_unstable();
    sources.dedup();
    if (sources.len() as u64) < tau {
        return None;
    }
    sources.truncate(tau as usize);
    Some(HeavyWitness {
        vertex: candidate,
        sources,
    })
}

/// Oracle behavior: `Exact` never errs; `Compliant` uses the sampled
/// estimator with the reference thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    Exact,
    Compliant,
}

/// Configuration handed to the refinement pipeline.
#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub mode: OracleMode,
    /// Threshold-scale knob for the sampled estimators (1.0 = reference).
    pub scale: f64,
    /// Overrides the degree threshold `tau`; diagnostic/testing use.
    pub tau_override: Option<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            mode: OracleMode::Exact,
            scale: 1.0,
            tau_override: None,
        }
    }
}

/// Partition of the vertices by estimated degree into a query set, plus the
/// exact incident edge list of the low side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResponse {
    pub y_high: Vec<u32>,
    pub y_low: Vec<u32>,
    /// `E(Y_low, Z)` as normalized `(min, max)` pairs, sorted.
    pub e_prime: Vec<(u32, u32)>,
}

/// Degree threshold of the oracle: `n^{1-delta} / (1000 log n)`.
pub fn oracle_tau(n: usize, delta: f64) -> f64 {
    let nf = n as f64;
    nf.powf(1.0 - delta) / (1000.0 * nf.log2().max(1.0))
}

/// Single subgraph-oracle query against `z`.
pub fn subgraph_oracle(
    g: &WeightedGraph,
    z: &[u32],
    delta: f64,
    stream: &RngStream,
    config: &OracleConfig,
) -> OracleResponse {
    let tau = config.tau_override.unwrap_or_else(|| oracle_tau(g.n(), delta));
    let y_high = match config.mode {
        OracleMode::Exact => exact_high_degree(g, z, tau),
        OracleMode::Compliant => {
            let all: Vec<u32> = (0..g.n() as u32).collect();
            degree_estimation(g, z, &all, tau, w_max_log2_of(g), stream, config.scale)
        }
    };
    response_from_partition(g, z, y_high)
}

fn response_from_partition(g: &WeightedGraph, z: &[u32], y_high: Vec<u32>) -> OracleResponse {
    let mut high = vec![false; g.n()];
    for &v in &y_high {
        high[v as usize] = true;
    }
    let y_low: Vec<u32> = (0..g.n() as u32).filter(|&v| !high[v as usize]).collect();
    let mut in_z = vec![false; g.n()];
    for &v in z {
        in_z[v as usize] = true;
    }
    let mut e_prime: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| {
            (!high[u as usize] && in_z[v as usize]) || (!high[v as usize] && in_z[u as usize])
        })
        .collect();
    e_prime.sort_unstable();
    OracleResponse {
        y_high,
        y_low,
        e_prime,
    }
}

/// Result of a bulk oracle invocation, with the triangle count of the
/// tripartite recovery graph for diagnostics.
#[derive(Clone, Debug)]
pub struct BulkOracleResult {
    pub responses: Vec<OracleResponse>,
    /// Number of (query-vertex, low-vertex) incidences found, which equals
    /// the number of triangles of the tripartite graph.
    pub triangles: u64,
}

/// Answers several oracle queries at once.
///
/// Partitions are computed per query exactly as in [`subgraph_oracle`]; the
/// low-side edge lists of all queries are then recovered simultaneously by
/// listing the triangles of a tripartite graph with one part per adjacency
/// side and one vertex per query: `(a_v, b_u, c_i)` is a triangle exactly
/// when `v` is in query `i`, `u` is on the low side of query `i`, and
/// `(u, v)` is a graph edge.
pub fn subgraph_oracle_bulk(
    g: &WeightedGraph,
    queries: &[Vec<u32>],
    delta: f64,
    stream: &RngStream,
    config: &OracleConfig,
) -> BulkOracleResult {
    assert!(queries.len() <= g.n().max(1));
    let tau = config.tau_override.unwrap_or_else(|| oracle_tau(g.n(), delta));
    let mut partitions: Vec<Vec<u32>> = Vec::with_capacity(queries.len());
    for (i, z) in queries.iter().enumerate() {
        let y_high = match config.mode {
            OracleMode::Exact => exact_high_degree(g, z, tau),
            OracleMode::Compliant => {
                let all: Vec<u32> = (0..g.n() as u32).collect();
                degree_estimation(
                    g,
                    z,
                    &all,
                    tau,
                    w_max_log2_of(g),
                    &stream.child(i as u64),
                    config.scale,
                )
            }
        };
        partitions.push(y_high);
    }

    // Tripartite recovery: edges (a_v, c_i) for v in Z_i, (c_i, b_u) for u on
    // the low side of query i, (a_x, b_y) per graph edge in both roles. The
    // triangles through each c_i are exactly the ordered incidences of
    // E(Y_low_i, Z_i); intersecting the two neighborhoods of c_i lists them.
    let mut responses = Vec::with_capacity(queries.len());
    let mut triangles = 0u64;
    for (z, y_high) in queries.iter().zip(partitions.into_iter()) {
        let mut high = vec![false; g.n()];
        for &v in &y_high {
            high[v as usize] = true;
        }
        let mut in_z = vec![false; g.n()];
        for &v in z {
            in_z[v as usize] = true;
        }
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for &v in z {
            // a_v adjacent to b_u for every graph edge (v, u).
            for &u in g.neighbors(v) {
                if !high[u as usize] {
                    triangles += 1;
                    pairs.push((u.min(v), u.max(v)));
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let y_low: Vec<u32> = (0..g.n() as u32).filter(|&v| !high[v as usize]).collect();
        responses.push(OracleResponse {
            y_high,
            y_low,
            e_prime: pairs,
        });
    }
    BulkOracleResult {
        responses,
        triangles,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use rand::Rng;

    fn complete_bipartite(a: usize, b: usize) -> WeightedGraph {
        let mut edges = Vec::new();
        for u in 0..a as u32 {
            for v in 0..b as u32 {
                edges.push((u, a as u32 + v));
            }
        }
        WeightedGraph::new(a + b, vec![1; a + b], edges).unwrap()
    }

    #[test]
    fn empty_query_set_gives_empty_answer() {
        let g = complete_bipartite(4, 4);
        let a = degree_estimation(&g, &[], &[0, 1], 1.0, 8.0, &RngStream::new(1), 1.0);
        assert!(a.is_empty());
        let resp = subgraph_oracle(&g, &[], 0.2, &RngStream::new(1), &OracleConfig::default());
        assert!(resp.y_high.is_empty());
        assert!(resp.e_prime.is_empty());
    }

    #[test]
    fn reference_thresholds_guard_small_instances() {
        // At n=40 and tau=1 the guard tau > |Z|/(100 L) fires, so the
        // sampled estimator answers with the empty (always sound) set.
        let g = complete_bipartite(20, 20);
        let z: Vec<u32> = (0..20).collect();
        let z_prime: Vec<u32> = (20..40).collect();
        for seed in 0..100 {
            let a = degree_estimation(
                &g,
                &z,
                &z_prime,
                1.0,
                w_max_log2_of(&g),
                &RngStream::new(seed),
                1.0,
            );
            assert!(a.is_empty());
        }
        // The exact path answers the underlying question: every right-side
        // vertex has 20 >= tau neighbors in Z.
        assert_eq!(
            exact_high_degree(&g, &z, 1.0),
            (20..40).collect::<Vec<u32>>()
        );
    }

    #[test]
    fn scaled_estimator_finds_dense_side_and_stays_sound() {
        // Scale the oversampling factor to L = 0.18 so the machinery
        // engages at this size: the keep probability 10L/tau clamps to 1
        // (every Z-vertex becomes a probe), the membership threshold is
        // 100L = 18, and every Z'-vertex counts all 20 probes.
        let g = complete_bipartite(20, 20);
        let z: Vec<u32> = (0..20).collect();
        let z_prime: Vec<u32> = (20..40).collect();
        let w_log2 = w_max_log2_of(&g);
        let scale = 0.18 / (w_log2 * (40f64).log2());
        let mut found_all = 0;
        for seed in 0..100u64 {
            let a = degree_estimation(&g, &z, &z_prime, 1.0, w_log2, &RngStream::new(seed), scale);
            // Soundness: every reported vertex really has >= tau neighbors.
            for &v in &a {
                assert!(g.neighbors(v).iter().any(|&u| z.contains(&u)));
            }
            if a.len() == 20 {
                found_all += 1;
            }
        }
        assert!(found_all >= 99, "found_all={found_all}");
    }

    struct PlainDigraph {
        n: usize,
        arcs: Vec<(u32, u32, u128)>,
    }

    impl DirectedCapView for PlainDigraph {
        fn node_count(&self) -> usize {
            self.n
        }
        fn out_arcs_at_least(&self, v: u32, min_cap: u128) -> Vec<(u32, u128)> {
            self.arcs
                .iter()
                .filter(|&&(f, _, c)| f == v && c >= min_cap)
                .map(|&(_, t, c)| (t, c))
                .collect()
        }
        fn in_arcs_at_least(&self, v: u32, min_cap: u128) -> Vec<(u32, u128)> {
            self.arcs
                .iter()
                .filter(|&&(_, t, c)| t == v && c >= min_cap)
                .map(|&(f, _, c)| (f, c))
                .collect()
        }
    }

    #[test]
    fn directed_estimator_ignores_light_arcs() {
        let net = PlainDigraph {
            n: 6,
            arcs: vec![(0, 3, 1), (1, 3, 1), (2, 3, 1)],
        };
        for seed in 0..50 {
            let a = directed_heavy_degree_estimation(
                &net,
                &[0, 1, 2],
                &[3, 4, 5],
                1.0,
                10,
                4.0,
                &RngStream::new(seed),
                0.01,
            );
            assert!(a.is_empty());
        }
    }

    #[test]
    fn heavy_vertex_witness_is_always_valid() {
        // 30 sources all point at vertex 30 with heavy arcs. L = 0.25 makes
        // the probe probability clamp to 1 and the membership threshold 25,
        // which the target's 30 probe arcs clear every time.
        let mut arcs: Vec<(u32, u32, u128)> = (0..30).map(|u| (u, 30, 64u128)).collect();
        arcs.push((0, 31, 1));
        let net = PlainDigraph { n: 32, arcs };
        let z: Vec<u32> = (0..30).collect();
        let scale = 0.25 / (4.0 * (32f64).log2());
        let mut hit = 0;
        for seed in 0..100u64 {
            match heavy_vertex(&net, &z, &[30, 31], 1, 32, 4.0, &RngStream::new(seed), scale) {
                Some(w) => {
                    hit += 1;
                    assert_eq!(w.vertex, 30);
                    assert_eq!(w.sources.len(), 1);
                    for &u in &w.sources {
                        assert!(net
                            .out_arcs_at_least(u, 32)
                            .iter()
                            .any(|&(t, _)| t == 30));
                    }
                }
                None => {}
            }
        }
        assert!(hit >= 99, "hit={hit}");
    }

    #[test]
    fn heavy_vertex_reference_guard_returns_none() {
        let arcs: Vec<(u32, u32, u128)> = (0..10).map(|u| (u, 10, 64u128)).collect();
        let net = PlainDigraph { n: 12, arcs };
        let z: Vec<u32> = (0..10).collect();
        for seed in 0..20 {
            assert!(
                heavy_vertex(&net, &z, &[10, 11], 1, 1, 8.0, &RngStream::new(seed), 1.0).is_none()
            );
        }
    }

    fn random_graph(seed: u64, n: usize, density: f64) -> WeightedGraph {
        let mut rng = RngStream::new(seed).rng();
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                if rng.gen::<f64>() < density {
                    edges.push((u, v));
                }
            }
        }
        WeightedGraph::new(n, vec![3; n], edges).unwrap()
    }

    #[test]
    fn oracle_low_side_edges_are_exact_in_both_modes() {
        for seed in 0..20u64 {
            let g = random_graph(seed, 14, 0.4);
            let mut rng = RngStream::new(seed ^ 0xAB).rng();
            let z: Vec<u32> = (0..14u32).filter(|_| rng.gen::<bool>()).collect();
            for config in [
                OracleConfig::default(),
                OracleConfig {
                    mode: OracleMode::Compliant,
                    scale: 0.05,
                    tau_override: Some(2.0),
                },
            ] {
                let resp = subgraph_oracle(&g, &z, 0.2, &RngStream::new(seed), &config);
                // Partition property.
                let mut all: Vec<u32> = resp.y_high.iter().chain(&resp.y_low).copied().collect();
                all.sort_unstable();
                assert_eq!(all, (0..14u32).collect::<Vec<_>>());
                // E' equals E(Y_low, Z) by definition, recomputed here.
                let mut want: Vec<(u32, u32)> = g
                    .edges()
                    .iter()
                    .copied()
                    .filter(|&(u, v)| {
                        (resp.y_low.contains(&u) && z.contains(&v))
                            || (resp.y_low.contains(&v) && z.contains(&u))
                    })
                    .collect();
                want.sort_unstable();
                assert_eq!(resp.e_prime, want);
            }
        }
    }

    #[test]
    fn bulk_matches_single_queries_and_counts_triangles() {
        let g = random_graph(99, 12, 0.5);
        let queries: Vec<Vec<u32>> = vec![vec![0, 1, 2, 3], vec![4, 5, 6], vec![0, 7, 11]];
        let config = OracleConfig::default();
        let stream = RngStream::new(5);
        let bulk = subgraph_oracle_bulk(&g, &queries, 0.2, &stream, &config);
        let mut expected_triangles = 0u64;
        for (i, z) in queries.iter().enumerate() {
            let single = subgraph_oracle(&g, z, 0.2, &stream.child(i as u64), &config);
            assert_eq!(bulk.responses[i], single, "query {i}");
            // Ordered (z-vertex, low-vertex) incidences.
            for &v in z {
                for &u in g.neighbors(v) {
                    if single.y_low.contains(&u) {
                        expected_triangles += 1;
                    }
                }
            }
        }
        assert_eq!(bulk.triangles, expected_triangles);
    }

    #[test]
    fn disjoint_component_queries_are_independent() {
        // Two disjoint triangles-with-tails.
        let g = WeightedGraph::new(
            8,
            vec![1; 8],
            vec![(0, 1), (1, 2), (0, 2), (2, 3), (4, 5), (5, 6), (4, 6), (6, 7)],
        )
        .unwrap();
        let queries = vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]];
        let config = OracleConfig::default();
        let bulk = subgraph_oracle_bulk(&g, &queries, 0.2, &RngStream::new(3), &config);
        for (i, z) in queries.iter().enumerate() {
            let single = subgraph_oracle(&g, z, 0.2, &RngStream::new(3).child(i as u64), &config);
            assert_eq!(bulk.responses[i].e_prime, single.e_prime);
            // Queries only touch their own component's edges.
            for &(u, v) in &bulk.responses[i].e_prime {
                assert!(z.contains(&u) || z.contains(&v));
            }
        }
    }
}
