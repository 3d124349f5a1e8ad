//! Community-quality metrics: agreement with a reference labeling (NMI) and
//! structural quality of a partition (modularity).
//!
//! NMI is computed from the contingency table of the two labelings,
//!
//!   NMI = -2 sum_ij m_ij ln(m_ij n / (c_i d_j))
//!         / (sum_i c_i ln(c_i / n) + sum_j d_j ln(d_j / n)),
//!
//! with 0 ln 0 = 0. The value is undefined (None) exactly when both
//! labelings consist of a single block, which zeroes the denominator.
//!
//! Modularity uses unweighted edge counts: with C_k intra-community edges
//! and D_k the total degree of community k, Q = sum_k (C_k / |E| -
//! beta (D_k / (2 |E|))^2). Flow weights are geometric quantities, not
//! affinities, so they do not enter the count.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Partition};

/// Errors from metric evaluation.
#[derive(Debug, thiserror::Error)]
pub enum MetricError {
    #[error("labelings cover different vertex counts: {left} vs {right}")]
    VertexCountMismatch { left: usize, right: usize },
    #[error("labeling covers no vertices")]
    EmptyLabeling,
    #[error("modularity needs a graph with at least one edge")]
    EdgelessGraph,
}

/// Community assignment, one id per vertex in vertex-id order. Ids are
/// arbitrary integers; only equality between them matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<usize>,
}

impl Labeling {
    /// Wraps raw per-vertex community ids.
    pub fn new(labels: Vec<usize>) -> Labeling {
        Labeling { labels }
    }

    /// Labels each vertex with its block index in the partition.
    pub fn from_partition(p: &Partition) -> Labeling {
        Labeling {
            labels: (0..p.vertex_count()).map(|v| p.block_of(v)).collect(),
        }
    }

    /// Per-vertex ids.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Number of vertices covered.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True when no vertices are covered.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of distinct community ids.
    pub fn block_count(&self) -> usize {
        let mut ids: Vec<usize> = self.labels.clone();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }
}

/// Cross-tabulation of two labelings over the same vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    /// m_ij: vertices in block i of the first labeling and block j of the
    /// second. Blocks are indexed by ascending community id.
    pub counts: Vec<Vec<usize>>,
    /// Row sums c_i (block sizes of the first labeling).
    pub row_sums: Vec<usize>,
    /// Column sums d_j (block sizes of the second labeling).
    pub col_sums: Vec<usize>,
    /// Total vertex count.
    pub n: usize,
}

/// Tunable metric parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// Modularity resolution parameter.
    pub beta: f64,
}

impl Default for MetricConfig {
    fn default() -> MetricConfig {
        MetricConfig { beta: 1.0 }
    }
}

fn dense_index(labels: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut ids: Vec<usize> = labels.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let dense = labels
        .iter()
        .map(|l| ids.binary_search(l).expect("id came from the same slice"))
        .collect();
    (ids, dense)
}

/// Cross-tabulates two labelings: entry (i, j) counts the vertices that lie
/// in block i of `u` and block j of `w`.
pub fn contingency(u: &Labeling, w: &Labeling) -> Result<ContingencyTable, MetricError> {
    if u.len() != w.len() {
        return Err(MetricError::VertexCountMismatch {
            left: u.len(),
            right: w.len(),
        });
    }
    if u.is_empty() {
        return Err(MetricError::EmptyLabeling);
    }
    let (u_ids, u_dense) = dense_index(u.labels());
    let (w_ids, w_dense) = dense_index(w.labels());
    let mut counts = vec![vec![0usize; w_ids.len()]; u_ids.len()];
    for (&i, &j) in u_dense.iter().zip(&w_dense) {
        counts[i][j] += 1;
    }
    let row_sums: Vec<usize> = counts.iter().map(|row| row.iter().sum()).collect();
    let mut col_sums = vec![0usize; w_ids.len()];
    for row in &counts {
        for (j, &m) in row.iter().enumerate() {
            col_sums[j] += m;
        }
    }
    Ok(ContingencyTable {
        counts,
        row_sums,
        col_sums,
        n: u.len(),
    })
}

/// Normalized mutual information of a contingency table; `None` when both
/// labelings are a single block, which leaves the score undefined.
pub fn nmi(table: &ContingencyTable) -> Option<f64> {
    let n = table.n as f64;
    let mut numerator = 0.0;
    for (i, row) in table.counts.iter().enumerate() {
        let c = table.row_sums[i] as f64;
        for (j, &m) in row.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let d = table.col_sums[j] as f64;
            numerator += (m as f64) * ((m as f64) * n / (c * d)).ln();
        }
    }
    numerator *= -2.0;
    let mut denominator = 0.0;
    for &c in &table.row_sums {
        denominator += (c as f64) * ((c as f64) / n).ln();
    }
    for &d in &table.col_sums {
        denominator += (d as f64) * ((d as f64) / n).ln();
    }
    if denominator == 0.0 {
        return None;
    }
    Some(numerator / denominator)
}

/// Modularity of a labeling on a graph, with unweighted edge and degree
/// counts.
pub fn modularity(g: &Graph, labels: &Labeling, cfg: &MetricConfig) -> Result<f64, MetricError> {
    if g.edge_count() == 0 {
        return Err(MetricError::EdgelessGraph);
    }
    if labels.len() != g.vertex_count() {
        return Err(MetricError::VertexCountMismatch {
            left: labels.len(),
            right: g.vertex_count(),
        });
    }
    let (ids, dense) = dense_index(labels.labels());
    let mut intra = vec![0usize; ids.len()];
    let mut degree_total = vec![0usize; ids.len()];
    for edge in g.edges() {
        if dense[edge.u] == dense[edge.v] {
            intra[dense[edge.u]] += 1;
        }
    }
    for v in 0..g.vertex_count() {
        degree_total[dense[v]] += g.degree(v);
    }
    let m = g.edge_count() as f64;
    let mut q = 0.0;
    for k in 0..ids.len() {
        let share = intra[k] as f64 / m;
        let degree_share = degree_total[k] as f64 / (2.0 * m);
        q += share - cfg.beta * degree_share * degree_share;
    }
    Ok(q)
}
