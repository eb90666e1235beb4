//! Cross-module property tests over seeded random suites.

use rand::Rng;
use vcut_core::cut::{
    brute_force_global_min_cut, min_pair_cut_value, GlobalCut, VertexCut, BRUTE_FORCE_LIMIT,
};
use vcut_core::driver::{generate_instance, solve, Family, SolveOptions};
use vcut_core::flow::{
    flow_path_decomposition, max_flow, min_cost_max_flow, min_edge_cut, FlowNetwork,
};
use vcut_core::graph::WeightedGraph;
use vcut_core::rng::RngStream;
use vcut_core::sampling::{is_good_terminal_set, select_terminals};

fn random_network(stream: &RngStream, n: usize, arcs: usize, max_cap: u128) -> FlowNetwork {
    let mut rng = stream.rng();
    let mut net = FlowNetwork::new(n);
    for _ in 0..arcs {
        let from = rng.gen_range(0..n as u32);
        let to = rng.gen_range(0..n as u32);
        if from != to {
            net.add_arc(from, to, rng.gen_range(1..=max_cap));
        }
    }
    net
}

#[test]
fn max_flow_equals_min_cut_on_random_networks() {
    let root = RngStream::new(0xF10);
    for trial in 0..60u64 {
        let net = random_network(&root.child(trial), 8, 20, 50);
        let flow = max_flow(&net, 0, 7);
        let cut = min_edge_cut(&net, 0, 7);
        assert_eq!(flow.value, cut.value, "trial {trial}");
        // The cut's crossing capacity equals the flow value.
        let crossing: u128 = (0..net.arc_count())
            .filter(|&a| {
                let (from, to) = net.arc_endpoints(a);
                cut.source_side[from as usize] && !cut.source_side[to as usize]
            })
            .map(|a| net.arc_cap(a))
            .sum();
        assert_eq!(crossing, flow.value, "trial {trial}");
    }
}

#[test]
fn grain_multiples_in_capacities_make_flows_grain_integral() {
    let root = RngStream::new(0x916);
    for trial in 0..40u64 {
        let grain = 1u128 << (trial % 7);
        let mut rng = root.child(trial).rng();
        let mut net = FlowNetwork::new(7);
        for _ in 0..16 {
            let from = rng.gen_range(0..7u32);
            let to = rng.gen_range(0..7u32);
            if from != to {
                net.add_arc(from, to, grain * rng.gen_range(1..=8u128));
            }
        }
        let flow = max_flow(&net, 0, 6);
        assert_eq!(flow.value % grain, 0);
        for f in &flow.arc_flow {
            assert_eq!(f % grain, 0, "trial {trial}");
        }
    }
}

#[test]
fn zero_cost_min_cost_flow_matches_max_flow() {
    let root = RngStream::new(0x0C0);
    for trial in 0..40u64 {
        let net = random_network(&root.child(trial), 7, 18, 30);
        let flow = max_flow(&net, 0, 6);
        let costs = vec![0u64; net.arc_count()];
        let mc = min_cost_max_flow(&net, 0, 6, &costs);
        assert_eq!(mc.value, flow.value, "trial {trial}");
        assert_eq!(mc.cost, 0);
    }
}

#[test]
fn augmenting_path_loop_reaches_max_flow() {
    // Repeated single-path augmentation over the residual network matches
    // the blocking-flow answer when it saturates.
    let root = RngStream::new(0xA06);
    for trial in 0..30u64 {
        let net = random_network(&root.child(trial), 8, 22, 40);
        let want = max_flow(&net, 0, 7).value;
        // Manual augmentation over residual capacities.
        let mut residual: Vec<u128> = (0..net.arc_count())
            .flat_map(|a| [net.arc_cap(a), 0])
            .collect();
        // adjacency as (arc_slot, to) pairs: even slots forward.
        let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); 8];
        for a in 0..net.arc_count() {
            let (from, to) = net.arc_endpoints(a);
            adj[from as usize].push((2 * a, to));
            adj[to as usize].push((2 * a + 1, from));
        }
        let mut total = 0u128;
        loop {
            // BFS for an augmenting path.
            let mut parent: Vec<Option<(usize, u32)>> = vec![None; 8];
            let mut queue = std::collections::VecDeque::from([0u32]);
            let mut seen = [false; 8];
            seen[0] = true;
            while let Some(u) = queue.pop_front() {
                for &(slot, v) in &adj[u as usize] {
                    if residual[slot] > 0 && !seen[v as usize] {
                        seen[v as usize] = true;
                        parent[v as usize] = Some((slot, u));
                        queue.push_back(v);
                    }
                }
            }
            if !seen[7] {
                break;
            }
            let mut bottleneck = u128::MAX;
            let mut v = 7u32;
            while v != 0 {
                let (slot, u) = parent[v as usize].unwrap();
                bottleneck = bottleneck.min(residual[slot]);
                v = u;
            }
            let mut v = 7u32;
            while v != 0 {
                let (slot, u) = parent[v as usize].unwrap();
                residual[slot] -= bottleneck;
                residual[slot ^ 1] += bottleneck;
                v = u;
            }
            total += bottleneck;
        }
        assert_eq!(total, want, "trial {trial}");
    }
}

#[test]
fn decomposition_recomposes_the_flow() {
    let root = RngStream::new(0xDEC);
    for trial in 0..40u64 {
        let net = random_network(&root.child(trial), 8, 20, 25);
        let flow = max_flow(&net, 0, 7);
        let paths = flow_path_decomposition(&net, &flow, 0, 7);
        let total: u128 = paths.iter().map(|(_, a)| a).sum();
        assert_eq!(total, flow.value, "trial {trial}");
        // Per-arc recomposition stays within the flow.
        let mut load = vec![0u128; net.arc_count()];
        for (nodes, amount) in &paths {
            assert_eq!(*nodes.first().unwrap(), 0);
            assert_eq!(*nodes.last().unwrap(), 7);
            for w in nodes.windows(2) {
                // Find the arc carrying this hop (first with remaining flow).
                let arc = (0..net.arc_count())
                    .find(|&a| {
                        let (f, t) = net.arc_endpoints(a);
                        f == w[0] && t == w[1] && load[a] + amount <= flow.arc_flow[a]
                    })
                    .expect("hop backed by arc flow");
                load[arc] += amount;
            }
        }
        for a in 0..net.arc_count() {
            assert!(load[a] <= flow.arc_flow[a]);
        }
    }
}

/// Exhaustive min-cost max-flow over tiny integral networks.
fn brute_force_min_cost(net: &FlowNetwork, s: u32, t: u32, costs: &[u64]) -> (u128, u128) {
    let arcs = net.arc_count();
    let caps: Vec<u128> = (0..arcs).map(|a| net.arc_cap(a)).collect();
    let mut best_value = 0u128;
    let mut best_cost = u128::MAX;
    let mut assignment = vec![0u128; arcs];
    fn recurse(
        idx: usize,
        net: &FlowNetwork,
        caps: &[u128],
        costs: &[u64],
        assignment: &mut Vec<u128>,
        s: u32,
        t: u32,
        best_value: &mut u128,
        best_cost: &mut u128,
    ) {
        if idx == caps.len() {
            // Conservation check.
            let n = net.node_count();
            let mut balance = vec![0i128; n];
            for a in 0..caps.len() {
                let (from, to) = net.arc_endpoints(a);
                balance[from as usize] -= assignment[a] as i128;
                balance[to as usize] += assignment[a] as i128;
            }
            for v in 0..n as u32 {
                if v != s && v != t && balance[v as usize] != 0 {
                    return;
                }
            }
            if balance[s as usize] > 0 {
                return;
            }
            let value = (-balance[s as usize]) as u128;
            let cost: u128 = (0..caps.len())
                .map(|a| assignment[a] * costs[a] as u128)
                .sum();
            if value > *best_value || (value == *best_value && cost < *best_cost) {
                *best_value = value;
                *best_cost = cost;
            }
            return;
        }
        for f in 0..=caps[idx] {
            assignment[idx] = f;
            recurse(
                idx + 1,
                net,
                caps,
                costs,
                assignment,
                s,
                t,
                best_value,
                best_cost,
            );
        }
        assignment[idx] = 0;
    }
    recurse(
        0,
        net,
        &caps,
        costs,
        &mut assignment,
        s,
        t,
        &mut best_value,
        &mut best_cost,
    );
    (best_value, best_cost)
}

#[test]
fn min_cost_flow_matches_exhaustive_enumeration() {
    let root = RngStream::new(0x91C0);
    let mut checked = 0;
    for trial in 0..40u64 {
        let mut rng = root.child(trial).rng();
        let mut net = FlowNetwork::new(5);
        let arcs = rng.gen_range(4..=7);
        for _ in 0..arcs {
            let from = rng.gen_range(0..5u32);
            let to = rng.gen_range(0..5u32);
            if from != to {
                net.add_arc(from, to, rng.gen_range(1..=2u128));
            }
        }
        if net.arc_count() > 7 || net.arc_count() == 0 {
            continue;
        }
        let costs: Vec<u64> = (0..net.arc_count()).map(|_| rng.gen_range(0..=2)).collect();
        let got = min_cost_max_flow(&net, 0, 4, &costs);
        let (want_value, want_cost) = brute_force_min_cost(&net, 0, 4, &costs);
        assert_eq!(got.value, want_value, "trial {trial}");
        if want_value > 0 {
            assert_eq!(got.cost, want_cost, "trial {trial}");
        }
        checked += 1;
    }
    assert!(checked >= 20);
}

#[test]
fn weight_shift_preserves_optimal_cuts() {
    let root = RngStream::new(0x3517);
    let mut checked = 0;
    for trial in 0..50u64 {
        let mut rng = root.child(trial).rng();
        let n = rng.gen_range(4..=12usize);
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                if rng.gen::<f64>() < 0.45 {
                    edges.push((u, v));
                }
            }
        }
        // Weight zero allowed: the shift exists to remove it.
        let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=9)).collect();
        let g = WeightedGraph::new(n, weights, edges).unwrap();
        if g.is_complete() {
            continue;
        }
        let shifted = g.make_weights_positive().unwrap();
        let GlobalCut::Cut(opt) = brute_force_global_min_cut(&g, BRUTE_FORCE_LIMIT).unwrap()
        else {
            continue;
        };
        let GlobalCut::Cut(opt_shifted) =
            brute_force_global_min_cut(&shifted, BRUTE_FORCE_LIMIT).unwrap()
        else {
            panic!("separability is weight-independent");
        };
        // The shifted optimum is optimal in the original graph, and the
        // values correspond through the transform.
        assert_eq!(
            g.weight_of(&opt_shifted.s),
            opt.value,
            "trial {trial}: shifted optimum is not optimal in the original"
        );
        let n2 = (n as u128) * (n as u128);
        assert_eq!(
            opt_shifted.value,
            n2 * opt.value + opt_shifted.s.len() as u128
        );
        checked += 1;
    }
    assert!(checked >= 30);
}

#[test]
fn solve_always_returns_structurally_valid_cuts() {
    for trial in 0..30u64 {
        let n = 6 + (trial as usize) % 12;
        let max_edges = n * (n - 1) / 2;
        let m = (max_edges * 2 / 3).max(n).min(max_edges - 1);
        let gen = generate_instance(n, m, 14, Family::StarMix, trial).unwrap();
        let report = solve(
            &gen.graph,
            &SolveOptions {
                seed: trial,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        let cut = VertexCut::new(
            &gen.graph,
            report.cut.l.clone(),
            report.cut.s.clone(),
            report.cut.r.clone(),
        )
        .expect("partition holds");
        assert!(cut.separates(&gen.graph));
        assert_eq!(cut.value, report.value);
        // The reported value is the exact cut value of some separable pair,
        // hence at least the global optimum.
        if let GlobalCut::Cut(opt) =
            brute_force_global_min_cut(&gen.graph, BRUTE_FORCE_LIMIT).unwrap()
        {
            assert!(report.value >= opt.value);
        }
    }
}

/// Frequency of good terminal draws on an instance whose optimal cut is
/// known by construction and acceptable for the dense regime.
#[test]
fn terminal_goodness_frequency_on_acceptable_instance() {
    // Star-of-cliques: x joins every separator vertex, the separator is a
    // clique, and r joins every separator vertex. The only non-adjacent
    // pair is (x, r), so ({x}, S, {r}) is the unique cut; all separator
    // vertices share x's weight class, making the cut acceptable.
    let n = 40usize;
    let x = 0u32;
    let r = 39u32;
    let mut edges = Vec::new();
    for v in 1..39u32 {
        edges.push((x, v));
        edges.push((v, r));
    }
    for u in 1..39u32 {
        for v in (u + 1)..39 {
            edges.push((u, v));
        }
    }
    let mut weights = vec![4u64; n];
    weights[x as usize] = 4;
    weights[r as usize] = 7;
    let g = WeightedGraph::new(n, weights, edges).unwrap();

    let l = vec![x];
    let s: Vec<u32> = (1..39).collect();
    let rr = vec![r];
    // The pair cut confirms the constructed optimum.
    let opt = min_pair_cut_value(&g, x, r).unwrap().unwrap();
    assert_eq!(opt, g.weight_of(&s));
    // Acceptability: the only class with L-vertices holds the whole
    // separator, clearing n^{44/45} * |L_i|.
    assert!(s.len() as f64 >= (n as f64).powf(44.0 / 45.0));

    let trials = 10_000u64;
    let mut good = 0u64;
    for seed in 0..trials {
        let t = select_terminals(&g, &RngStream::new(seed));
        if is_good_terminal_set(&g, &t.terminals, &l, &s, &rr) {
            good += 1;
        }
    }
    let w_prime = g.max_weight() as f64;
    let bound = 1.0 / (2f64.powi(11) * (n as f64).log2() * w_prime.log2());
    let frequency = good as f64 / trials as f64;
    assert!(
        frequency >= bound,
        "goodness frequency {frequency:.5} below bound {bound:.7}"
    );
}
