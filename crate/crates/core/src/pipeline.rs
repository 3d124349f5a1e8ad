//! End-to-end community detection and post-hoc verification.
//!
//! Detection runs the curvature flow with surgery and labels each vertex by
//! the connected component it lands in. Verification inspects a completed
//! run: within every final component the log-weight ratio of two surviving
//! edges must change linearly with slope given by their frozen coefficient
//! difference, and the curvature recomputed on the final graph should be
//! near-constant per component. Both checks produce a report; neither can
//! fail a run by itself.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::curvature::{curvature_all, CurvatureError, CurvatureKind};
use crate::flow::{run_flow, FlowConfig, FlowError, FlowResult};
use crate::graph::Graph;
use crate::io::{self, IoError};
use crate::metrics::Labeling;

/// Output of one detection run.
#[derive(Debug)]
pub struct DetectionResult {
    /// Community id per vertex, ids contiguous starting at 1. Blocks equal
    /// the connected components of the final graph.
    pub labeling: Labeling,
    /// The completed flow run this labeling was read off from.
    pub flow: FlowResult,
    /// Echo of the configuration that produced the run.
    pub config: FlowConfig,
    /// Wall-clock seconds spent in the flow.
    pub seconds: f64,
}

impl DetectionResult {
    /// Number of detected communities.
    pub fn community_count(&self) -> usize {
        self.labeling.block_count()
    }

    /// Vertex-name-to-community map in name order.
    pub fn assignments(&self) -> BTreeMap<String, usize> {
        let g = &self.flow.final_graph;
        (0..g.vertex_count())
            .map(|v| (g.vertex_name(v).to_string(), self.labeling.labels()[v]))
            .collect()
    }

    /// Writes the result as a JSON document.
    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<(), IoError> {
        let path = path.as_ref();
        let doc = serde_json::json!({
            "schema_version": io::REPORT_SCHEMA_VERSION,
            "config": self.config,
            "communities": self.assignments(),
            "community_count": self.community_count(),
            "threshold": self.flow.threshold,
            "converged": self.flow.converged,
            "iterations": self.flow.state.iteration,
            "seconds": self.seconds,
        });
        let mut text =
            serde_json::to_string_pretty(&doc).map_err(|source| IoError::Json {
                path: path.display().to_string(),
                source,
            })?;
        text.push('\n');
        std::fs::write(path, &text).map_err(|source| IoError::File {
            path: path.display().to_string(),
            source,
        })
    }

    /// Writes the two-column vertex,community CSV.
    pub fn write_labels_csv(&self, path: impl AsRef<Path>) -> Result<(), IoError> {
        let g = &self.flow.final_graph;
        io::write_partition_csv(
            (0..g.vertex_count()).map(|v| (g.vertex_name(v), self.labeling.labels()[v])),
            path,
        )
    }
}

/// Runs the flow on `g0` and labels vertices by the final graph's connected
/// components. Deterministic: the same input and config give the same
/// labeling, trace, and weights.
pub fn detect_communities(g0: &Graph, cfg: &FlowConfig) -> Result<DetectionResult, FlowError> {
    let start = Instant::now();
    let flow = run_flow(g0, cfg)?;
    let components = flow.final_graph.connected_components();
    let labels = (0..g0.vertex_count())
        .map(|v| components.block_of(v) + 1)
        .collect();
    Ok(DetectionResult {
        labeling: Labeling::new(labels),
        flow,
        config: cfg.clone(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Per-component figures of a completed run.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    /// Community id, matching the detection labeling.
    pub community: usize,
    /// Surviving edges in the component.
    pub edges: usize,
    /// Frozen coefficients: max - min.
    pub coefficient_spread: f64,
    /// Frozen coefficients: population standard deviation.
    pub coefficient_std: f64,
    /// Curvature recomputed on the final graph: max - min.
    pub curvature_spread: f64,
    /// Curvature recomputed on the final graph: population standard deviation.
    pub curvature_std: f64,
    /// Mean recomputed curvature, the component's limiting-value estimate.
    pub mean_curvature: f64,
}

/// Consistency report over a completed run.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    /// Iteration of the last observed surgery; 0 when none happened.
    pub last_surgery: usize,
    /// Per-component figures, for components that kept at least one edge.
    pub components: Vec<ComponentReport>,
    /// Largest deviation from the linear ratio law across all components
    /// and recorded iterations after the last surgery. `None` when the run
    /// recorded no per-edge history.
    pub max_ratio_drift: Option<f64>,
    /// For scale-invariant curvature kinds: largest gap between an edge's
    /// frozen coefficient and its curvature recomputed on the final graph.
    /// `None` for kinds that scale with the weights.
    pub frozen_shift: Option<f64>,
}

fn spread_and_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
        sum += v;
    }
    if max == min {
        // All values equal; the mean would round and leak a spurious ulp
        // into the deviations.
        return (0.0, 0.0);
    }
    let mean = sum / values.len() as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
    (max - min, var.sqrt())
}

/// Checks a completed run against the flow's limiting laws.
///
/// After the last surgery the coefficients are frozen, so for surviving
/// edges e, f in one component the quantity ln w_e(t_k) - ln w_e(t_r) +
/// c_e (t_k - t_r) must not depend on e; the report records the largest
/// within-component deviation over all recorded iterations k past the
/// reference iteration r. Curvature is recomputed on the final graph and
/// summarized per component.
pub fn verify_theorems(result: &DetectionResult) -> Result<TheoremReport, CurvatureError> {
    let flow = &result.flow;
    let final_graph = &flow.final_graph;
    let components = final_graph.connected_components();
    let last_surgery = flow
        .trace
        .surgeries
        .last()
        .map(|s| s.iteration)
        .unwrap_or(0);

    // Final edges grouped by component, carrying original edge ids.
    let block_count = components.blocks().len();
    let mut by_component: Vec<Vec<(usize, usize)>> = vec![Vec::new(); block_count];
    for (final_id, e) in final_graph.edges().iter().enumerate() {
        by_component[components.block_of(e.u)].push((final_id, flow.edge_map[final_id]));
    }

    let recomputed = curvature_all(final_graph, &result.config.kind)?;

    let mut reports = Vec::new();
    for (block, members) in by_component.iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let coeffs: Vec<f64> = members
            .iter()
            .map(|&(_, orig)| flow.state.coefficients[orig])
            .collect();
        let kappas: Vec<f64> = members
            .iter()
            .map(|&(final_id, _)| recomputed.values[final_id])
            .collect();
        let (coefficient_spread, coefficient_std) = spread_and_std(&coeffs);
        let (curvature_spread, curvature_std) = spread_and_std(&kappas);
        reports.push(ComponentReport {
            community: block + 1,
            edges: members.len(),
            coefficient_spread,
            coefficient_std,
            curvature_spread,
            curvature_std,
            mean_curvature: kappas.iter().sum::<f64>() / kappas.len() as f64,
        });
    }

    let max_ratio_drift = ratio_drift(flow, &by_component, last_surgery);

    let frozen_shift = (result.config.kind.gamma() == 0.0).then(|| {
        final_graph
            .edges()
            .iter()
            .enumerate()
            .map(|(final_id, _)| {
                (recomputed.values[final_id] - flow.state.coefficients[flow.edge_map[final_id]])
                    .abs()
            })
            .fold(0.0, f64::max)
    });

    Ok(TheoremReport {
        last_surgery,
        components: reports,
        max_ratio_drift,
        frozen_shift,
    })
}

/// Largest deviation from the linear ratio law over the recorded rows at or
/// after the last surgery. For every component and iteration k the values
/// g_e = ln w_e(t_k) - ln w_e(t_r) + c_e (t_k - t_r) must coincide across
/// the component's edges e; the deviation is their max - min.
fn ratio_drift(
    flow: &FlowResult,
    by_component: &[Vec<(usize, usize)>],
    last_surgery: usize,
) -> Option<f64> {
    let rows: Vec<_> = flow
        .trace
        .rows
        .iter()
        .filter(|row| row.iteration >= last_surgery && row.weights.is_some())
        .collect();
    let (reference, later) = rows.split_first()?;
    let ref_weights = reference.weights.as_ref()?;
    let ref_coeffs = reference.coefficients.as_ref()?;

    let mut worst = 0.0f64;
    for row in later {
        let weights = row.weights.as_ref()?;
        let elapsed = row.time - reference.time;
        for members in by_component {
            if members.len() < 2 {
                continue;
            }
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for &(_, orig) in members {
                let g = weights[orig].ln() - ref_weights[orig].ln() + ref_coeffs[orig] * elapsed;
                min = min.min(g);
                max = max.max(g);
            }
            if members.len() >= 2 {
                worst = worst.max(max - min);
            }
        }
    }
    Some(worst)
}

/// One row of the scaling probe.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    /// Vertices of the probed graph.
    pub vertices: usize,
    /// Edges of the probed graph.
    pub edges: usize,
    /// Largest finite shortest-path distance.
    pub diameter: f64,
    /// Wall-clock seconds for one full curvature pass.
    pub seconds_per_iteration: f64,
}

/// Times one curvature pass per graph, the dominant cost of a flow
/// iteration, and reports it next to the graph's size and diameter.
pub fn complexity_probe(
    graphs: &[Graph],
    kind: &CurvatureKind,
) -> Result<Vec<ProbeRow>, CurvatureError> {
    graphs
        .iter()
        .map(|g| {
            let mut diameter = 0.0f64;
            for v in 0..g.vertex_count() {
                for d in g.single_source_distances(v).into_iter().flatten() {
                    diameter = diameter.max(d);
                }
            }
            let start = Instant::now();
            curvature_all(g, kind)?;
            let seconds_per_iteration = start.elapsed().as_secs_f64();
            Ok(ProbeRow {
                vertices: g.vertex_count(),
                edges: g.edge_count(),
                diameter,
                seconds_per_iteration,
            })
        })
        .collect()
}
