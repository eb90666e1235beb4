//! Exact flow algorithms over a plain directed capacitated network.
//!
//! Adjacency iteration order is insertion order, all tie-breaking is
//! positional, so results are bit-identical across runs for the same input.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

/// Directed capacitated network with paired residual arcs.
#[derive(Clone)]
pub struct FlowNetwork {
    n: usize,
    to: Vec<u32>,
    cap: Vec<u128>,
    adj: Vec<Vec<u32>>,
    arc_count: usize,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            n,
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); n],
            arc_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Adds a directed arc, returning its index.
    pub fn add_arc(&mut self, from: u32, to: u32, cap: u128) -> usize {
        debug_assert!((from as usize) < self.n && (to as usize) < self.n);
        let idx = self.arc_count;
        self.adj[from as usize].push(self.to.len() as u32);
        self.to.push(to);
        self.cap.push(cap);
        self.adj[to as usize].push(self.to.len() as u32);
        self.to.push(from);
        self.cap.push(0);
        self.arc_count += 1;
        idx
    }

    pub fn arc_endpoints(&self, arc: usize) -> (u32, u32) {
        (self.to[2 * arc + 1], self.to[2 * arc])
    }

    pub fn arc_cap(&self, arc: usize) -> u128 {
        self.cap[2 * arc]
    }
}

/// Result of a max-flow computation: total value and per-arc flow.
#[derive(Clone, Debug)]
pub struct FlowResult {
    pub value: u128,
    pub arc_flow: Vec<u128>,
}

struct Dinic<'a> {
    to: &'a [u32],
    cap: Vec<u128>,
    adj: &'a [Vec<u32>],
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl<'a> Dinic<'a> {
    fn bfs(&mut self, s: u32, t: u32, delta: u128) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = VecDeque::new();
        self.level[s as usize] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &h in &self.adj[u as usize] {
                let v = self.to[h as usize];
                if self.cap[h as usize] >= delta && self.level[v as usize] < 0 {
                    self.level[v as usize] = self.level[u as usize] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t as usize] >= 0
    }

    fn dfs(&mut self, u: u32, t: u32, pushed: u128, delta: u128) -> u128 {
        if u == t {
            return pushed;
        }
        while self.iter[u as usize] < self.adj[u as usize].len() {
            let h = self.adj[u as usize][self.iter[u as usize]];
            let v = self.to[h as usize];
            if self.cap[h as usize] >= delta && self.level[v as usize] == self.level[u as usize] + 1
            {
                let d = self.dfs(v, t, pushed.min(self.cap[h as usize]), delta);
                if d >= delta {
                    self.cap[h as usize] -= d;
                    self.cap[(h ^ 1) as usize] += d;
                    return d;
                }
            }
            self.iter[u as usize] += 1;
        }
        0
    }
}

/// Maximum `s`-`t` flow; exact, deterministic, integral in any common
/// divisor of the capacities (blocking-flow bottlenecks preserve it).
pub fn max_flow(net: &FlowNetwork, s: u32, t: u32) -> FlowResult {
    assert_ne!(s, t);
    let max_cap = net.cap.iter().copied().max().unwrap_or(0);
    let mut dinic = Dinic {
        to: &net.to,
        cap: net.cap.clone(),
        adj: &net.adj,
        level: vec![-1; net.n],
        iter: vec![0; net.n],
    };
    let mut value: u128 = 0;
    if max_cap > 0 {
        let mut delta = 1u128 << (127 - max_cap.leading_zeros());
        while delta >= 1 {
            while dinic.bfs(s, t, delta) {
                dinic.iter.iter_mut().for_each(|i| *i = 0);
                loop {
                    let f = dinic.dfs(s, t, u128::MAX, delta);
                    if f == 0 {
                        break;
                    }
                    value += f;
                }
            }
            delta /= 2;
        }
    }
    let arc_flow = (0..net.arc_count)
        .map(|i| net.cap[2 * i] - dinic.cap[2 * i])
        .collect();
    FlowResult { value, arc_flow }
}

/// Minimum `s`-`t` edge cut: cut value plus the source side (vertices
/// reachable from `s` in the residual network of a maximum flow).
pub struct CutResult {
    pub value: u128,
    pub source_side: Vec<bool>,
}

pub fn min_edge_cut(net: &FlowNetwork, s: u32, t: u32) -> CutResult {
    let flow = max_flow(net, s, t);
    let mut residual = net.cap.clone();
    for (i, &f) in flow.arc_flow.iter().enumerate() {
        residual[2 * i] -= f;
        residual[2 * i + 1] += f;
    }
    let mut seen = vec![false; net.n];
    let mut queue = VecDeque::new();
    seen[s as usize] = true;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for &h in &net.adj[u as usize] {
            let v = net.to[h as usize];
            if residual[h as usize] > 0 && !seen[v as usize] {
                seen[v as usize] = true;
                queue.push_back(v);
            }
        }
    }
    debug_assert!(!seen[t as usize]);
    CutResult {
        value: flow.value,
        source_side: seen,
    }
}

/// Result of a min-cost max-flow computation.
#[derive(Clone, Debug)]
pub struct MinCostResult {
    pub value: u128,
    pub cost: u128,
    pub arc_flow: Vec<u128>,
}

/// Minimum-cost maximum `s`-`t` flow via successive shortest paths with
/// vertex potentials. Costs may be zero; the flow is integral and, among
/// all maximum flows, minimizes the total `flow * cost` sum.
pub fn min_cost_max_flow(net: &FlowNetwork, s: u32, t: u32, arc_cost: &[u64]) -> MinCostResult {
    assert_eq!(arc_cost.len(), net.arc_count);
    let mut cap = net.cap.clone();
    let mut cost = vec![0i128; net.to.len()];
    for (i, &c) in arc_cost.iter().enumerate() {
        cost[2 * i] = c as i128;
        cost[2 * i + 1] = -(c as i128);
    }
    let n = net.n;
    let mut potential = vec![0i128; n];
    let mut value = 0u128;
    let mut total_cost = 0u128;
    const UNREACHED: i128 = i128::MAX;

    loop {
        // Dijkstra over reduced costs.
        let mut dist = vec![UNREACHED; n];
        let mut parent_arc = vec![u32::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[s as usize] = 0;
        heap.push(Reverse((0i128, s)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u as usize] {
                continue;
            }
            for &h in &net.adj[u as usize] {
                if cap[h as usize] == 0 {
                    continue;
                }
                let v = net.to[h as usize];
                let nd = d + cost[h as usize] + potential[u as usize] - potential[v as usize];
                if nd < dist[v as usize] {
                    dist[v as usize] = nd;
                    parent_arc[v as usize] = h;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        if dist[t as usize] == UNREACHED {
            break;
        }
        for v in 0..n {
            if dist[v] != UNREACHED {
                potential[v] += dist[v];
            }
        }
        // Bottleneck along the shortest path.
        let mut bottleneck = u128::MAX;
        let mut v = t;
        while v != s {
            let h = parent_arc[v as usize];
            bottleneck = bottleneck.min(cap[h as usize]);
            v = net.to[(h ^ 1) as usize];
        }
        let mut v = t;
        while v != s {
            let h = parent_arc[v as usize];
            cap[h as usize] -= bottleneck;
            cap[(h ^ 1) as usize] += bottleneck;
            if cost[h as usize] >= 0 {
                total_cost += bottleneck * cost[h as usize] as u128;
            } else {
                total_cost -= bottleneck * (-cost[h as usize]) as u128;
            }
            v = net.to[(h ^ 1) as usize];
        }
        value += bottleneck;
    }

    let arc_flow = (0..net.arc_count)
        .map(|i| net.cap[2 * i] - cap[2 * i])
        .collect();
    MinCostResult {
        value,
        cost: total_cost,
        arc_flow,
    }
}

/// Flow-path decomposition. Returns `(path, amount)` pairs whose amounts sum
/// to the flow value; per-arc path load never exceeds the arc flow. The walk
/// cancels any flow cycle it encounters, so cyclic inputs are handled too.
pub fn flow_path_decomposition(
    net: &FlowNetwork,
    result: &FlowResult,
    s: u32,
    t: u32,
) -> Vec<(Vec<u32>, u128)> {
    assert_ne!(s, t);
    let mut flow = result.arc_flow.clone();
    let mut out = Vec::new();
    'restart: loop {
        let mut pos = vec![usize::MAX; net.n];
        let mut nodes = vec![s];
        let mut arcs: Vec<usize> = Vec::new();
        pos[s as usize] = 0;
        let mut u = s;
        loop {
            if u == t {
                let amount = arcs.iter().map(|&a| flow[a]).min().unwrap();
                for &a in &arcs {
                    flow[a] -= amount;
                }
                out.push((nodes, amount));
                continue 'restart;
            }
            let mut next = None;
            for &h in &net.adj[u as usize] {
                if h % 2 == 0 && flow[(h / 2) as usize] > 0 {
                    next = Some((h / 2) as usize);
                    break;
                }
            }
            let Some(arc) = next else {
                // No outgoing flow left. At u == s the decomposition is
                // complete; elsewhere this would violate conservation.
                debug_assert_eq!(u, s, "flow conservation violated at {u}");
                break 'restart;
            };
            let v = net.to[2 * arc];
            if pos[v as usize] != usize::MAX {
                // Walked into a cycle: cancel it and restart the walk.
                let start = pos[v as usize];
                let cycle: Vec<usize> = arcs[start..].iter().copied().chain([arc]).collect();
                let amount = cycle.iter().map(|&a| flow[a]).min().unwrap();
                for &a in &cycle {
                    flow[a] -= amount;
                }
                continue 'restart;
            }
            arcs.push(arc);
            u = v;
            pos[u as usize] = nodes.len();
            nodes.push(u);
        }
    }
    out
}
