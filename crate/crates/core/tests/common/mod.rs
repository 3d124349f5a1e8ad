//! Shared helpers: seeded random graphs and an independent brute-force
//! transportation oracle for checking the exact solver.
//!
//! Each integration test target compiles this module separately and uses a
//! different subset of it.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ricciflow::curvature::ProbabilityMeasure;
use ricciflow::Graph;

/// Random connected graph: a random spanning tree plus extra edges, with
/// weights drawn uniformly from `[w_lo, w_hi]`.
pub fn random_connected_graph(
    rng: &mut ChaCha8Rng,
    max_vertices: usize,
    extra_edge_probability: f64,
    w_lo: f64,
    w_hi: f64,
) -> Graph {
    let n = rng.gen_range(2..=max_vertices);
    let names: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(extra_edge_probability) {
                edges.push((u, v));
            }
        }
    }
    Graph::build(
        edges
            .iter()
            .map(|&(u, v)| (names[u].as_str(), names[v].as_str(), rng.gen_range(w_lo..=w_hi))),
    )
    .unwrap()
}

/// Random probability measure on up to `max_support` distinct vertices of a
/// graph with `n` vertices. Masses are strictly positive and sum to 1
/// exactly (the last mass absorbs the rounding slack).
pub fn random_measure(rng: &mut ChaCha8Rng, n: usize, max_support: usize) -> ProbabilityMeasure {
    let k = rng.gen_range(1..=max_support.min(n));
    let mut vertices: Vec<usize> = (0..n).collect();
    vertices.shuffle(rng);
    vertices.truncate(k);
    vertices.sort_unstable();
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.5..1.5)).collect();
    let total: f64 = raw.iter().sum();
    let mut masses: Vec<f64> = raw.iter().map(|r| r / total).collect();
    let head: f64 = masses[..k - 1].iter().sum();
    masses[k - 1] = 1.0 - head;
    ProbabilityMeasure::new(vertices.into_iter().zip(masses).collect()).unwrap()
}

/// Exact minimum transportation cost by enumerating every basic feasible
/// solution: each spanning tree of the bipartite supply/demand graph fixes a
/// unique flow by leaf elimination, and the optimum is attained at one of
/// the feasible trees. Exponential, only for tiny instances.
pub fn oracle_transport_cost(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> f64 {
    let m = supply.len();
    let n = demand.len();
    assert!(m * n <= 16, "oracle is exponential; keep supports tiny");
    let cells: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .collect();
    let k = m + n - 1;
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << cells.len()) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let chosen: Vec<(usize, usize)> = cells
            .iter()
            .enumerate()
            .filter(|&(idx, _)| mask & (1 << idx) != 0)
            .map(|(_, &cell)| cell)
            .collect();
        if !is_spanning_tree(m, n, &chosen) {
            continue;
        }
        if let Some(total) = tree_flow_cost(m, n, &chosen, supply, demand, cost) {
            best = best.min(total);
        }
    }
    assert!(best.is_finite(), "no feasible basic solution found");
    best
}

/// `k = m + n - 1` acyclic edges over the bipartite node set span it.
fn is_spanning_tree(m: usize, n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..m + n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for &(i, j) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, m + j));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Unique flow carried by a spanning tree, found by repeatedly resolving a
/// supply or demand node incident to a single remaining tree edge. `None`
/// when the basic solution is infeasible (a negative flow).
fn tree_flow_cost(
    m: usize,
    n: usize,
    edges: &[(usize, usize)],
    supply: &[f64],
    demand: &[f64],
    cost: &[Vec<f64>],
) -> Option<f64> {
    let mut s = supply.to_vec();
    let mut d = demand.to_vec();
    let mut alive = vec![true; edges.len()];
    let mut total = 0.0;
    for _ in 0..edges.len() {
        let mut row_degree = vec![0usize; m];
        let mut col_degree = vec![0usize; n];
        for (idx, &(i, j)) in edges.iter().enumerate() {
            if alive[idx] {
                row_degree[i] += 1;
                col_degree[j] += 1;
            }
        }
        let leaf = edges.iter().enumerate().find(|&(idx, &(i, j))| {
            alive[idx] && (row_degree[i] == 1 || col_degree[j] == 1)
        });
        let (idx, &(i, j)) = leaf.expect("a tree always has a leaf");
        let flow = if row_degree[i] == 1 { s[i] } else { d[j] };
        if flow < -1e-9 {
            return None;
        }
        s[i] -= flow;
        d[j] -= flow;
        total += flow.max(0.0) * cost[i][j];
        alive[idx] = false;
    }
    Some(total)
}
