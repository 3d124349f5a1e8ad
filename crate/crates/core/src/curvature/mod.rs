//! Edge curvatures for weighted graphs.
//!
//! Five notions of edge curvature share one entry point, [`curvature_all`]:
//! transport-based Ollivier and Lin-Lu-Yau curvature, combinatorial Forman
//! curvature, and the metric Menger and Haantjes curvatures. Each kind scales
//! as a power of a uniform edge-weight rescaling; [`CurvatureKind::gamma`]
//! exposes that exponent so callers can reason about unit changes.
//!
//! Distances come from a shared all-pairs table computed once per graph, so
//! per-edge evaluations parallelize without repeating Dijkstra runs and every
//! edge sees bitwise-identical distance values regardless of thread count.

mod forman;
mod haantjes;
mod measure;
mod menger;
mod ollivier;
mod transport;

pub use forman::forman_curvature;
pub use haantjes::haantjes_curvature;
pub use measure::{lazy_walk_measure, ProbabilityMeasure};
pub use menger::menger_curvature;
pub use ollivier::{lly_curvature, ollivier_curvature, LlyResult};
pub use transport::{wasserstein, TransportPlan};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Graph, GraphError, VertexId};

/// Errors from measure construction, transport, and curvature evaluation.
#[derive(Debug, thiserror::Error)]
pub enum CurvatureError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("ollivier laziness must lie in [0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("lazy walk laziness must lie in [0, 1], got {0}")]
    InvalidLaziness(f64),
    #[error("vertex {0} has no incident edges to walk along")]
    IsolatedVertex(String),
    #[error("path hop budget must be at least {min}, got {got}")]
    BadMaxHops { min: usize, got: usize },
    #[error("measure lists vertex {vertex} more than once")]
    DuplicateSupport { vertex: VertexId },
    #[error("measure assigns vertex {vertex} the invalid mass {mass}")]
    InvalidMass { vertex: VertexId, mass: f64 },
    #[error("measure masses sum to {total} instead of 1")]
    NonUnitMass { total: f64 },
    #[error("no path to transport mass from {from} to {to}")]
    UnreachableMass { from: String, to: String },
    #[error("curvature of edge {u}-{v} failed: {source}")]
    Edge {
        u: String,
        v: String,
        #[source]
        source: Box<CurvatureError>,
    },
}

/// Vertex weighting used inside the Forman curvature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexWeightMode {
    /// Each vertex weighs the sum of its incident edge weights.
    SumIncident,
    /// Each vertex weighs 1 regardless of its edges.
    Unit,
}

/// Selects which curvature to evaluate, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CurvatureKind {
    /// Transport curvature of lazy random walks with laziness `alpha` in [0, 1).
    Ollivier { alpha: f64 },
    /// Limit of Ollivier curvature scaled by 1 / (1 - alpha) as alpha -> 1.
    LinLuYau,
    /// Combinatorial curvature from incident-edge weight ratios.
    Forman { vertex_weights: VertexWeightMode },
    /// Heron-formula curvature summed over metric vertex triples.
    Menger,
    /// Detour-excess curvature over simple paths of at most `max_hops` edges.
    Haantjes { max_hops: usize },
}

impl CurvatureKind {
    /// Degree of homogeneity under uniform edge-weight scaling: multiplying
    /// all weights by a > 0 multiplies every curvature value by a^gamma.
    pub fn gamma(&self) -> f64 {
        match self {
            CurvatureKind::Ollivier { .. } | CurvatureKind::LinLuYau => 0.0,
            CurvatureKind::Forman { vertex_weights } => match vertex_weights {
                VertexWeightMode::SumIncident => 1.0,
                VertexWeightMode::Unit => 0.0,
            },
            CurvatureKind::Menger | CurvatureKind::Haantjes { .. } => -1.0,
        }
    }

    /// Short lowercase label for reports and trace files.
    pub fn label(&self) -> String {
        match self {
            CurvatureKind::Ollivier { alpha } => format!("ollivier(alpha={alpha})"),
            CurvatureKind::LinLuYau => "lly".to_string(),
            CurvatureKind::Forman { vertex_weights } => match vertex_weights {
                VertexWeightMode::SumIncident => "forman(sum)".to_string(),
                VertexWeightMode::Unit => "forman(unit)".to_string(),
            },
            CurvatureKind::Menger => "menger".to_string(),
            CurvatureKind::Haantjes { max_hops } => format!("haantjes(max_hops={max_hops})"),
        }
    }

    /// Checks the kind's parameters without touching a graph.
    pub fn validate(&self) -> Result<(), CurvatureError> {
        match *self {
            CurvatureKind::Ollivier { alpha } if !(0.0..1.0).contains(&alpha) => {
                Err(CurvatureError::InvalidAlpha(alpha))
            }
            CurvatureKind::Haantjes { max_hops } if max_hops < 2 => {
                Err(CurvatureError::BadMaxHops { min: 2, got: max_hops })
            }
            _ => Ok(()),
        }
    }

    fn needs_distances(&self) -> bool {
        !matches!(self, CurvatureKind::Forman { .. })
    }
}

/// Curvature values for every edge of one graph, in edge-id order.
#[derive(Debug, Clone)]
pub struct CurvatureVector {
    /// Kind the values were computed with.
    pub kind: CurvatureKind,
    /// Homogeneity degree of that kind, copied here for convenience.
    pub gamma: f64,
    /// One value per edge, indexed by [`EdgeId`].
    pub values: Vec<f64>,
    /// Edges whose value carries a reliability warning (Lin-Lu-Yau limit
    /// evaluations whose cross-check disagreed).
    pub warnings: Vec<EdgeId>,
}

/// Dense all-pairs shortest-path distances; `None` marks unreachable pairs.
pub(crate) struct DistanceTable {
    rows: Vec<Vec<Option<f64>>>,
}

impl DistanceTable {
    pub(crate) fn build(g: &Graph) -> DistanceTable {
        let rows = (0..g.vertex_count())
            .into_par_iter()
            .map(|src| g.single_source_distances(src))
            .collect();
        DistanceTable { rows }
    }
}

/// Where per-edge computations obtain shortest-path distances.
///
/// `Table` reads a precomputed all-pairs table; `Local` runs a fresh Dijkstra
/// per query. Both produce bitwise-identical values, so results never depend
/// on which source a caller picked.
pub(crate) enum DistanceSource<'a> {
    Table(&'a DistanceTable),
    Local,
}

impl DistanceSource<'_> {
    /// Distance from `u` to `v`, or `None` when unreachable.
    pub(crate) fn pair(&self, g: &Graph, u: VertexId, v: VertexId) -> Option<f64> {
        match self {
            DistanceSource::Table(t) => t.rows[u][v],
            DistanceSource::Local => g.dijkstra(u, Some(&[v]))[v],
        }
    }

    /// Distances from `u` to each target, aligned with the target order.
    pub(crate) fn from(
        &self,
        g: &Graph,
        u: VertexId,
        targets: impl Iterator<Item = VertexId>,
    ) -> Vec<Option<f64>> {
        match self {
            DistanceSource::Table(t) => targets.map(|v| t.rows[u][v]).collect(),
            DistanceSource::Local => {
                let wanted: Vec<VertexId> = targets.collect();
                let d = g.dijkstra(u, Some(&wanted));
                wanted.into_iter().map(|v| d[v]).collect()
            }
        }
    }

    /// Full distance row from `u`, indexed by vertex id.
    pub(crate) fn row(&self, g: &Graph, u: VertexId) -> Vec<Option<f64>> {
        match self {
            DistanceSource::Table(t) => t.rows[u].clone(),
            DistanceSource::Local => g.single_source_distances(u),
        }
    }
}

/// Evaluates the chosen curvature on every edge of `g`.
///
/// Edges are processed in parallel with a canonical per-edge accumulation
/// order, so the result is deterministic across thread counts. Errors carry
/// the offending edge's endpoint names.
pub fn curvature_all(g: &Graph, kind: &CurvatureKind) -> Result<CurvatureVector, CurvatureError> {
    kind.validate()?;
    let table = if kind.needs_distances() && g.edge_count() > 0 {
        Some(DistanceTable::build(g))
    } else {
        None
    };
    let per_edge: Result<Vec<(f64, bool)>, CurvatureError> = (0..g.edge_count())
        .into_par_iter()
        .map(|e| {
            let dist = match &table {
                Some(t) => DistanceSource::Table(t),
                None => DistanceSource::Local,
            };
            evaluate_edge(g, e, kind, &dist).map_err(|err| attach_edge(g, e, err))
        })
        .collect();
    let per_edge = per_edge?;
    let values = per_edge.iter().map(|&(v, _)| v).collect();
    let warnings = per_edge
        .iter()
        .enumerate()
        .filter(|&(_, &(_, warn))| warn)
        .map(|(e, _)| e)
        .collect();
    Ok(CurvatureVector {
        kind: *kind,
        gamma: kind.gamma(),
        values,
        warnings,
    })
}

fn evaluate_edge(
    g: &Graph,
    e: EdgeId,
    kind: &CurvatureKind,
    dist: &DistanceSource,
) -> Result<(f64, bool), CurvatureError> {
    match *kind {
        CurvatureKind::Ollivier { alpha } => {
            Ok((ollivier::ollivier_with(g, e, alpha, dist)?, false))
        }
        CurvatureKind::LinLuYau => {
            let r = ollivier::lly_with(g, e, dist)?;
            Ok((r.value, r.warning))
        }
        CurvatureKind::Forman { vertex_weights } => {
            Ok((forman::forman_curvature(g, e, vertex_weights)?, false))
        }
        CurvatureKind::Menger => Ok((menger::menger_with(g, e, dist)?, false)),
        CurvatureKind::Haantjes { max_hops } => {
            Ok((haantjes::haantjes_with(g, e, max_hops, dist)?, false))
        }
    }
}

fn attach_edge(g: &Graph, e: EdgeId, source: CurvatureError) -> CurvatureError {
    match g.edge(e) {
        Ok(edge) => CurvatureError::Edge {
            u: g.vertex_name(edge.u).to_string(),
            v: g.vertex_name(edge.v).to_string(),
            source: Box::new(source),
        },
        Err(_) => source,
    }
}
