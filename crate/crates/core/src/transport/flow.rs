//! Exact min-cost flow for the transportation problem, via successive
//! shortest paths with node potentials on the bipartite supply/demand graph.
//!
//! Capacities and flows are plain `f64` masses: every augmentation subtracts
//! the exact bottleneck residual, so at least one boundary edge saturates to
//! exactly zero per augmentation and the loop ends after at most
//! `k + m + 2` rounds.

const RES_EPS: f64 = 1e-15;

struct Edge {
    to: usize,
    residual: f64,
    cost: f64,
}

struct Graph {
    // edges[e] and edges[e ^ 1] are twins.
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    fn new(nodes: usize) -> Self {
        Graph {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn link(&mut self, u: usize, v: usize, cap: f64, cost: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to: v, residual: cap, cost });
        self.edges.push(Edge { to: u, residual: 0.0, cost: -cost });
        self.adj[u].push(id);
        self.adj[v].push(id + 1);
        id
    }
}

/// Solves `min sum d(i,j) * s(i,j)` subject to row sums = `supply`, column
/// sums = `demand`, `s >= 0`. Returns `(optimal cost, row-major flow)`.
///
/// `supply` and `demand` must have (near-)equal totals; the residual
/// imbalance from floating point is left unshipped and is at most a few ulps.
pub(crate) fn min_cost_transport(supply: &[f64], demand: &[f64], cost: &[f64]) -> (f64, Vec<f64>) {
    let k = supply.len();
    let m = demand.len();
    debug_assert_eq!(cost.len(), k * m);

    let source = 0usize;
    let sink = k + m + 1;
    let nodes = k + m + 2;
    let mut g = Graph::new(nodes);

    let mut cell_edges = vec![usize::MAX; k * m];
    for (i, &s) in supply.iter().enumerate() {
        if s > 0.0 {
            g.link(source, 1 + i, s, 0.0);
        }
    }
    for (j, &d) in demand.iter().enumerate() {
        if d > 0.0 {
            g.link(1 + k + j, sink, d, 0.0);
        }
    }
    for i in 0..k {
        if supply[i] <= 0.0 {
            continue;
        }
        for j in 0..m {
            if demand[j] <= 0.0 {
                continue;
            }
            // Capacity 2.0 never binds: total mass is one.
            cell_edges[i * m + j] = g.link(1 + i, 1 + k + j, 2.0, cost[i * m + j]);
        }
    }

    let mut phi = vec![0.0f64; nodes];
    let mut dist = vec![f64::INFINITY; nodes];
    let mut parent = vec![usize::MAX; nodes];
    let mut heap = std::collections::BinaryHeap::new();

    // All original costs are nonnegative, so zero potentials are valid.
    let round_cap = 4 * (k + m) + 64;
    for _ in 0..round_cap {
        dist.fill(f64::INFINITY);
        parent.fill(usize::MAX);
        dist[source] = 0.0;
        heap.clear();
        heap.push(HeapItem { dist: 0.0, node: source });
        while let Some(HeapItem { dist: du, node: u }) = heap.pop() {
            if du > dist[u] {
                continue;
            }
            for &e in &g.adj[u] {
                let edge = &g.edges[e];
                if edge.residual <= RES_EPS {
                    continue;
                }
                // Reduced costs are nonnegative up to roundoff; clamp the dust.
                let w = (edge.cost + phi[u] - phi[edge.to]).max(0.0);
                let nd = du + w;
                if nd < dist[edge.to] {
                    dist[edge.to] = nd;
                    parent[edge.to] = e;
                    heap.push(HeapItem { dist: nd, node: edge.to });
                }
            }
        }
        if parent[sink] == usize::MAX {
            break;
        }
        for v in 0..nodes {
            if dist[v].is_finite() {
                phi[v] += dist[v];
            }
        }
        // Bottleneck along the path, then augment.
        let mut delta = f64::INFINITY;
        let mut v = sink;
        while v != source {
            let e = parent[v];
            delta = delta.min(g.edges[e].residual);
            v = g.edges[e ^ 1].to;
        }
        if delta <= RES_EPS {
            break;
        }
        let mut v = sink;
        while v != source {
            let e = parent[v];
            g.edges[e].residual -= delta;
            g.edges[e ^ 1].residual += delta;
            v = g.edges[e ^ 1].to;
        }
    }

    let mut flow = vec![0.0f64; k * m];
    let mut total_cost = 0.0;
    for (cell, &e) in cell_edges.iter().enumerate() {
        if e != usize::MAX {
            let f = g.edges[e ^ 1].residual;
            if f > 0.0 {
                flow[cell] = f;
                total_cost += f * cost[cell];
            }
        }
    }
    (total_cost, flow)
}

#[derive(PartialEq)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Min-heap on distance.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
