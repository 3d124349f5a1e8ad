//! Haantjes curvature from detour excess of simple alternative paths.
//!
//! For an edge e = (x, y) at graph distance d = d(x, y), every simple x-y path
//! of weighted length l > d that avoids e itself witnesses curvature
//! sqrt((l - d) / d) / d. The edge curvature sums this over all such paths of
//! at most `max_hops` edges. Paths whose length ties the distance (geodesic
//! alternatives) contribute zero, enforced with a relative tolerance so that
//! rounding in accumulated weights cannot produce spurious positive terms.

use crate::curvature::{CurvatureError, DistanceSource};
use crate::graph::{EdgeId, Graph};

/// Relative detour excess below which a path counts as an exact geodesic tie.
const TIE_TOL: f64 = 1e-12;

/// Computes the Haantjes curvature of edge `e` from simple paths of at most
/// `max_hops` edges.
pub fn haantjes_curvature(g: &Graph, e: EdgeId, max_hops: usize) -> Result<f64, CurvatureError> {
    haantjes_with(g, e, max_hops, &DistanceSource::Local)
}

pub(crate) fn haantjes_with(
    g: &Graph,
    e: EdgeId,
    max_hops: usize,
    dist: &DistanceSource,
) -> Result<f64, CurvatureError> {
    if max_hops < 2 {
        return Err(CurvatureError::BadMaxHops {
            min: 2,
            got: max_hops,
        });
    }
    let edge = g.edge(e)?;
    let d = dist
        .pair(g, edge.u, edge.v)
        .expect("edge endpoints are mutually reachable");
    let paths = g.simple_paths(edge.u, edge.v, max_hops, Some(e))?;
    let mut sum = 0.0;
    for path in &paths {
        let excess = (path.length - d) / d;
        if excess > TIE_TOL {
            sum += excess.sqrt() / d;
        }
    }
    Ok(sum)
}
