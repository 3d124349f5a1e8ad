//! Metric Menger curvature aggregated over vertex triples.
//!
//! Each third vertex z in the component of an edge e = (x, y) spans a metric
//! triangle with side lengths a = d(x, y), b = d(y, z), c = d(x, z) taken from
//! the weighted shortest-path metric. A non-degenerate triangle contributes
//! sqrt(p (p - a) (p - b) (p - c)) / (a b c) with p the semi-perimeter, and
//! the edge curvature is the sum of those contributions. Degenerate triples,
//! where z lies on a shortest x-y path (up to floating-point noise), are
//! skipped: geodesically collinear points carry no curvature.

use crate::curvature::{CurvatureError, DistanceSource};
use crate::graph::{EdgeId, Graph};

/// Relative slack below which a triple is treated as geodesically collinear.
///
/// The Heron factors p - a, p - b, p - c vanish on collinear triples; square
/// roots of near-zero products amplify rounding in the distances, so anything
/// within this relative margin of degenerate contributes exactly zero.
const COLLINEAR_TOL: f64 = 1e-12;

/// Computes the Menger curvature of edge `e` over all vertex triples.
pub fn menger_curvature(g: &Graph, e: EdgeId) -> Result<f64, CurvatureError> {
    menger_with(g, e, &DistanceSource::Local)
}

pub(crate) fn menger_with(
    g: &Graph,
    e: EdgeId,
    dist: &DistanceSource,
) -> Result<f64, CurvatureError> {
    let edge = g.edge(e)?;
    let dx = dist.row(g, edge.u);
    let dy = dist.row(g, edge.v);
    let a = dx[edge.v].expect("edge endpoints are mutually reachable");
    let mut sum = 0.0;
    for z in 0..g.vertex_count() {
        if z == edge.u || z == edge.v {
            continue;
        }
        let (Some(c), Some(b)) = (dx[z], dy[z]) else {
            continue;
        };
        let p = 0.5 * (a + b + c);
        let slack = (p - a).min(p - b).min(p - c);
        if slack <= COLLINEAR_TOL * p {
            continue;
        }
        let radicand = p * (p - a) * (p - b) * (p - c);
        if radicand <= 0.0 {
            continue;
        }
        sum += radicand.sqrt() / (a * b * c);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn triangle_edge_matches_heron() {
        // Unit triangle: one triple with a = b = c = 1, area sqrt(3) / 4.
        let g = Graph::unit(&[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        for e in 0..g.edge_count() {
            let k = menger_curvature(&g, e).unwrap();
            assert_abs_diff_eq!(k, 3f64.sqrt() / 4.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn tree_edges_are_flat() {
        // Every triple in a tree is geodesically collinear: the three
        // pairwise paths share a median vertex, so one Heron factor is zero.
        let g = Graph::unit(&[("a", "b"), ("b", "c"), ("b", "d"), ("d", "e")]).unwrap();
        for e in 0..g.edge_count() {
            assert_abs_diff_eq!(menger_curvature(&g, e).unwrap(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn four_clique_counts_both_triples() {
        // In unit K4 each edge sees two off-edge vertices, both forming unit
        // equilateral triangles.
        let g = Graph::unit(&[
            ("a", "b"),
            ("a", "c"),
            ("a", "d"),
            ("b", "c"),
            ("b", "d"),
            ("c", "d"),
        ])
        .unwrap();
        for e in 0..g.edge_count() {
            let k = menger_curvature(&g, e).unwrap();
            assert_abs_diff_eq!(k, 2.0 * 3f64.sqrt() / 4.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn other_components_do_not_contribute() {
        let g = Graph::unit(&[("a", "b"), ("b", "c"), ("a", "c"), ("u", "v"), ("v", "w"), ("u", "w")]).unwrap();
        let k = menger_curvature(&g, 0).unwrap();
        assert_abs_diff_eq!(k, 3f64.sqrt() / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn inverse_scaling_in_weights() {
        let g = Graph::build([
            ("a", "b", 1.0),
            ("b", "c", 2.0),
            ("a", "c", 2.5),
            ("c", "d", 1.0),
            ("b", "d", 2.0),
        ])
        .unwrap();
        let scaled = g.scale_weights(4.0).unwrap();
        for e in 0..g.edge_count() {
            let base = menger_curvature(&g, e).unwrap();
            let small = menger_curvature(&scaled, e).unwrap();
            assert_abs_diff_eq!(small, base / 4.0, epsilon = 1e-12 * base.abs().max(1.0));
        }
    }
}
