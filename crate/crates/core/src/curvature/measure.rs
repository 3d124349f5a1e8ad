//! Probability measures on graph vertices, including lazy walk measures.

use crate::curvature::CurvatureError;
use crate::graph::{Graph, VertexId};

/// A finitely supported probability measure on the vertex set. The support is
/// kept sorted by vertex, entries carry strictly positive mass (zero-mass
/// entries are dropped at construction), and the total mass is 1 within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMeasure {
    support: Vec<(VertexId, f64)>,
}

impl ProbabilityMeasure {
    pub fn new(mut support: Vec<(VertexId, f64)>) -> Result<ProbabilityMeasure, CurvatureError> {
        support.retain(|&(_, m)| m != 0.0);
        support.sort_unstable_by_key(|&(v, _)| v);
        let mut total = 0.0;
        for pair in support.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(CurvatureError::DuplicateSupport { vertex: pair[0].0 });
            }
        }
        for &(vertex, mass) in &support {
            if !(mass > 0.0 && mass.is_finite()) {
                return Err(CurvatureError::InvalidMass { vertex, mass });
            }
            total += mass;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(CurvatureError::NonUnitMass { total });
        }
        Ok(ProbabilityMeasure { support })
    }

    /// The measure concentrated on a single vertex.
    pub fn point_mass(v: VertexId) -> ProbabilityMeasure {
        ProbabilityMeasure {
            support: vec![(v, 1.0)],
        }
    }

    /// Support entries `(vertex, mass)`, ascending by vertex.
    pub fn support(&self) -> &[(VertexId, f64)] {
        &self.support
    }

    pub fn mass_at(&self, v: VertexId) -> f64 {
        self.support
            .binary_search_by_key(&v, |&(u, _)| u)
            .map(|i| self.support[i].1)
            .unwrap_or(0.0)
    }
}

/// The alpha-lazy one-step random walk measure at `x`: mass `alpha` stays
/// home, the remainder spreads over neighbors proportionally to edge weight.
pub fn lazy_walk_measure(
    g: &Graph,
    x: VertexId,
    alpha: f64,
) -> Result<ProbabilityMeasure, CurvatureError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(CurvatureError::InvalidLaziness(alpha));
    }
    let nbrs = g.neighbors(x);
    if nbrs.is_empty() {
        return Err(CurvatureError::IsolatedVertex(
            g.vertex_name(x).to_string(),
        ));
    }
    let total: f64 = nbrs.iter().map(|&(_, e)| g.edges()[e].weight).sum();
    let mut support = Vec::with_capacity(nbrs.len() + 1);
    support.push((x, alpha));
    for &(nbr, e) in nbrs {
        support.push((nbr, (1.0 - alpha) * g.edges()[e].weight / total));
    }
    ProbabilityMeasure::new(support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lazy_measure_on_triangle_is_uniform_over_neighbors() {
        let g = Graph::unit(&[("x", "y"), ("y", "z"), ("x", "z")]).unwrap();
        let x = g.vertex_index("x").unwrap();
        let mu = lazy_walk_measure(&g, x, 0.5).unwrap();
        assert_eq!(mu.mass_at(x), 0.5);
        for name in ["y", "z"] {
            assert_abs_diff_eq!(
                mu.mass_at(g.vertex_index(name).unwrap()),
                0.25,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn full_laziness_is_a_point_mass() {
        let g = Graph::unit(&[("x", "y")]).unwrap();
        let x = g.vertex_index("x").unwrap();
        let mu = lazy_walk_measure(&g, x, 1.0).unwrap();
        assert_eq!(mu.support(), &[(x, 1.0)]);
    }

    #[test]
    fn zero_laziness_spreads_by_weight() {
        let g = Graph::build([("c", "l1", 1.0), ("c", "l2", 3.0)]).unwrap();
        let c = g.vertex_index("c").unwrap();
        let mu = lazy_walk_measure(&g, c, 0.0).unwrap();
        assert_eq!(mu.mass_at(c), 0.0);
        assert_abs_diff_eq!(
            mu.mass_at(g.vertex_index("l1").unwrap()),
            0.25,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            mu.mass_at(g.vertex_index("l2").unwrap()),
            0.75,
            epsilon = 1e-15
        );
    }

    #[test]
    fn isolated_vertex_has_no_walk_measure() {
        let g = Graph::build_with_vertices(["lone", "a", "b"], [("a", "b", 1.0)]).unwrap();
        let lone = g.vertex_index("lone").unwrap();
        assert!(matches!(
            lazy_walk_measure(&g, lone, 0.5),
            Err(CurvatureError::IsolatedVertex(_))
        ));
    }

    #[test]
    fn measure_validation() {
        assert!(ProbabilityMeasure::new(vec![(0, 0.5), (1, 0.5)]).is_ok());
        assert!(matches!(
            ProbabilityMeasure::new(vec![(0, 0.5), (0, 0.5)]),
            Err(CurvatureError::DuplicateSupport { .. })
        ));
        assert!(matches!(
            ProbabilityMeasure::new(vec![(0, 1.5), (1, -0.5)]),
            Err(CurvatureError::InvalidMass { .. })
        ));
        assert!(matches!(
            ProbabilityMeasure::new(vec![(0, 0.4), (1, 0.4)]),
            Err(CurvatureError::NonUnitMass { .. })
        ));
        // Zero-mass entries are dropped, not rejected.
        let mu = ProbabilityMeasure::new(vec![(0, 1.0), (1, 0.0)]).unwrap();
        assert_eq!(mu.support().len(), 1);
    }
}
