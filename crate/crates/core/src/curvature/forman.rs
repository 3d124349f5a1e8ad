//! Combinatorial Forman curvature for weighted edges.
//!
//! For an edge e = (x, y) with weight w_e the curvature is
//!
//!   F(e) = w_x (1 - sum_{e_x ~ x, e_x != e} sqrt(w_e / w_{e_x}))
//!        + w_y (1 - sum_{e_y ~ y, e_y != e} sqrt(w_e / w_{e_y}))
//!
//! where the vertex weight w_x is either the sum of all incident edge weights
//! (including e itself) or the constant 1, selectable by mode. The sums run
//! over the other edges incident to each endpoint.

use crate::curvature::{CurvatureError, VertexWeightMode};
use crate::graph::{EdgeId, Graph, VertexId};

/// Computes the Forman curvature of edge `e` under the given vertex-weight mode.
pub fn forman_curvature(
    g: &Graph,
    e: EdgeId,
    mode: VertexWeightMode,
) -> Result<f64, CurvatureError> {
    let edge = g.edge(e)?;
    let w_e = edge.weight;
    let endpoint_term = |x: VertexId| -> f64 {
        let w_x = match mode {
            VertexWeightMode::SumIncident => g
                .neighbors(x)
                .iter()
                .map(|&(_, ei)| g.edges()[ei].weight)
                .sum(),
            VertexWeightMode::Unit => 1.0,
        };
        let detour: f64 = g
            .neighbors(x)
            .iter()
            .filter(|&&(_, ei)| ei != e)
            .map(|&(_, ei)| (w_e / g.edges()[ei].weight).sqrt())
            .sum();
        w_x * (1.0 - detour)
    };
    Ok(endpoint_term(edge.u) + endpoint_term(edge.v))
}
