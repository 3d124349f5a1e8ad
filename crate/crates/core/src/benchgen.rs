//! Deterministic planted-partition benchmark generator.
//!
//! Vertices are partitioned into communities with sizes drawn uniformly from
//! a configured range. Each vertex draws a Poisson degree target (clipped to
//! [1, max_degree]) and splits its edge stubs: each stub points outside the
//! community with probability mu, inside otherwise. Stubs are then matched
//! uniformly at random, inside each community for the internal ones and
//! across communities for the external ones; pairs that would create a
//! self-loop, a duplicate edge, or an internal external pair are dropped.
//! All randomness comes from one seeded generator, so a config reproduces
//! its graph byte for byte.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::graph::{Graph, GraphError};
use crate::metrics::Labeling;

/// Errors from benchmark configuration.
#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("mixing probability must lie in [0, 1], got {0}")]
    BadMixing(f64),
    #[error("community size bounds must satisfy 1 <= min <= max <= n, got [{min}, {max}] with n = {n}")]
    BadCommunitySizes { min: usize, max: usize, n: usize },
    #[error("degree targets must satisfy 0 < avg <= max < n, got avg {avg}, max {max}, n = {n}")]
    BadDegrees { avg: f64, max: usize, n: usize },
    #[error("no sequence of community sizes in [{min}, {max}] sums to {n}")]
    InfeasiblePartition { min: usize, max: usize, n: usize },
}

/// Parameters of one generated instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    /// Vertex count.
    pub n: usize,
    /// Mean of the Poisson degree-target distribution.
    pub avg_degree: f64,
    /// Hard cap on degree targets.
    pub max_degree: usize,
    /// Smallest allowed community size.
    pub min_community: usize,
    /// Largest allowed community size.
    pub max_community: usize,
    /// Probability that a stub points outside its community.
    pub mu: f64,
    /// Seed of the instance's random stream.
    pub seed: u64,
}

impl GenConfig {
    /// Checks the configuration without generating anything.
    pub fn validate(&self) -> Result<(), GenError> {
        if !(self.mu >= 0.0 && self.mu <= 1.0) {
            return Err(GenError::BadMixing(self.mu));
        }
        if self.min_community < 1
            || self.min_community > self.max_community
            || self.max_community > self.n
        {
            return Err(GenError::BadCommunitySizes {
                min: self.min_community,
                max: self.max_community,
                n: self.n,
            });
        }
        if !(self.avg_degree > 0.0)
            || self.avg_degree > self.max_degree as f64
            || self.max_degree >= self.n
        {
            return Err(GenError::BadDegrees {
                avg: self.avg_degree,
                max: self.max_degree,
                n: self.n,
            });
        }
        if !partition_feasible(self.n, self.min_community, self.max_community) {
            return Err(GenError::InfeasiblePartition {
                min: self.min_community,
                max: self.max_community,
                n: self.n,
            });
        }
        Ok(())
    }
}

/// One instance of a mixing-parameter sweep.
#[derive(Debug)]
pub struct GeneratedInstance {
    /// Mixing probability this instance was generated with.
    pub mu: f64,
    /// Repeat index within its mu cell.
    pub repeat: usize,
    /// Seed the instance used.
    pub seed: u64,
    /// Unit-weight graph.
    pub graph: Graph,
    /// Planted ground-truth communities.
    pub truth: Labeling,
}

/// True when some number of communities with sizes in [min, max] sums to n.
fn partition_feasible(n: usize, min: usize, max: usize) -> bool {
    if n == 0 {
        return false;
    }
    // m communities work iff m*min <= n <= m*max; such m exists iff
    // ceil(n/max) <= floor(n/min).
    n.div_ceil(max) <= n / min
}

fn draw_community_sizes(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let (min, max) = (cfg.min_community, cfg.max_community);
    let mut sizes = Vec::new();
    let mut remaining = cfg.n;
    while remaining > 0 {
        let cap = max.min(remaining);
        let mut tries = 0;
        let size = loop {
            let s = rng.gen_range(min..=cap);
            if partition_feasible(remaining - s, min, max) || remaining == s {
                break s;
            }
            tries += 1;
            if tries >= 1000 {
                // Smallest feasible size always exists because `remaining`
                // itself is feasible.
                break (min..=cap)
                    .find(|&s| remaining == s || partition_feasible(remaining - s, min, max))
                    .expect("feasible remainder");
            }
        };
        sizes.push(size);
        remaining -= size;
    }
    sizes
}

/// Matches stubs into simple edges: consecutive entries of the shuffled stub
/// list are paired; a pair is dropped when it would form a self-loop, repeat
/// an existing edge, or (given community labels) stay inside one community.
fn match_stubs(
    stubs: &mut Vec<usize>,
    rng: &mut ChaCha8Rng,
    edges: &mut BTreeSet<(usize, usize)>,
    cross_communities: Option<&[usize]>,
) {
    stubs.shuffle(rng);
    for pair in stubs.chunks_exact(2) {
        let (a, b) = (pair[0], pair[1]);
        if a == b {
            continue;
        }
        if let Some(community) = cross_communities {
            if community[a] == community[b] {
                continue;
            }
        }
        let key = (a.min(b), a.max(b));
        edges.insert(key);
    }
}

/// Generates one planted-partition instance. Every vertex ends up with at
/// least one incident edge, so the instance survives an edge-list round trip
/// with its label file intact.
pub fn generate(cfg: &GenConfig) -> Result<(Graph, Labeling), GenError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let sizes = draw_community_sizes(cfg, &mut rng);
    let mut community = Vec::with_capacity(cfg.n);
    for (c, &size) in sizes.iter().enumerate() {
        community.extend(std::iter::repeat(c).take(size));
    }

    let poisson = Poisson::new(cfg.avg_degree).expect("validated positive mean");
    let mut internal_stubs: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    let mut external_stubs: Vec<usize> = Vec::new();
    for v in 0..cfg.n {
        let target = (poisson.sample(&mut rng) as usize).clamp(1, cfg.max_degree);
        let outside = Binomial::new(target as u64, cfg.mu)
            .expect("validated probability")
            .sample(&mut rng) as usize;
        for _ in 0..outside {
            external_stubs.push(v);
        }
        for _ in 0..(target - outside) {
            internal_stubs[community[v]].push(v);
        }
    }

    let mut edges = BTreeSet::new();
    for stubs in &mut internal_stubs {
        match_stubs(stubs, &mut rng, &mut edges, None);
    }
    match_stubs(&mut external_stubs, &mut rng, &mut edges, Some(&community));

    // A vertex can lose every stub to the pairing rules. Left isolated it
    // would vanish from an edge-list file and be unscorable, so anchor it to
    // one partner, drawn inside or outside its community per the mixing
    // probability.
    let mut touched = vec![false; cfg.n];
    for &(u, v) in &edges {
        touched[u] = true;
        touched[v] = true;
    }
    for v in 0..cfg.n {
        if touched[v] {
            continue;
        }
        let internal = rng.gen_bool(1.0 - cfg.mu);
        let candidates = |same: bool| -> Vec<usize> {
            (0..cfg.n)
                .filter(|&u| u != v && (community[u] == community[v]) == same)
                .collect()
        };
        let mut pool = candidates(internal);
        if pool.is_empty() {
            pool = candidates(!internal);
        }
        let u = pool[rng.gen_range(0..pool.len())];
        edges.insert((u.min(v), u.max(v)));
        touched[u] = true;
        touched[v] = true;
    }

    let names: Vec<String> = (0..cfg.n).map(|v| v.to_string()).collect();
    let graph = Graph::build_with_vertices(
        names.iter().map(|s| s.as_str()),
        edges
            .iter()
            .map(|&(u, v)| (names[u].as_str(), names[v].as_str(), 1.0)),
    )?;
    Ok((graph, Labeling::new(community)))
}

/// Generates `repeats` instances per mu value. Repeat r of every mu cell
/// uses seed `cfg_base.seed + r`, so cells are paired across mu.
pub fn sweep(
    cfg_base: &GenConfig,
    mu_values: &[f64],
    repeats: usize,
) -> Result<Vec<GeneratedInstance>, GenError> {
    let mut out = Vec::with_capacity(mu_values.len() * repeats);
    for &mu in mu_values {
        for repeat in 0..repeats {
            let seed = cfg_base.seed + repeat as u64;
            let cfg = GenConfig {
                mu,
                seed,
                ..*cfg_base
            };
            let (graph, truth) = generate(&cfg)?;
            out.push(GeneratedInstance {
                mu,
                repeat,
                seed,
                graph,
                truth,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lfr500(mu: f64, seed: u64) -> GenConfig {
        GenConfig {
            n: 500,
            avg_degree: 20.0,
            max_degree: 50,
            min_community: 10,
            max_community: 50,
            mu,
            seed,
        }
    }

    fn external_fraction(g: &Graph, truth: &Labeling) -> f64 {
        let labels = truth.labels();
        let external = g
            .edges()
            .iter()
            .filter(|e| labels[e.u] != labels[e.v])
            .count();
        external as f64 / g.edge_count() as f64
    }

    #[test]
    fn same_seed_reproduces_the_instance() {
        let cfg = lfr500(0.3, 42);
        let (g1, t1) = generate(&cfg).unwrap();
        let (g2, t2) = generate(&cfg).unwrap();
        assert_eq!(t1.labels(), t2.labels());
        assert_eq!(g1.edge_count(), g2.edge_count());
        for (a, b) in g1.edges().iter().zip(g2.edges()) {
            assert_eq!((a.u, a.v), (b.u, b.v));
            assert_eq!(a.weight.to_bits(), b.weight.to_bits());
        }
    }

    #[test]
    fn different_seeds_differ() {
        let (g1, _) = generate(&lfr500(0.3, 1)).unwrap();
        let (g2, _) = generate(&lfr500(0.3, 2)).unwrap();
        let e1: Vec<(usize, usize)> = g1.edges().iter().map(|e| (e.u, e.v)).collect();
        let e2: Vec<(usize, usize)> = g2.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_ne!(e1, e2);
    }

    #[test]
    fn zero_mixing_keeps_every_edge_inside_its_community() {
        let (g, truth) = generate(&lfr500(0.0, 7)).unwrap();
        assert_eq!(external_fraction(&g, &truth), 0.0);
    }

    #[test]
    fn full_mixing_puts_every_edge_between_communities() {
        let (g, truth) = generate(&lfr500(1.0, 7)).unwrap();
        assert_eq!(external_fraction(&g, &truth), 1.0);
    }

    #[test]
    fn no_vertex_is_left_isolated() {
        for seed in 0..10 {
            let cfg = GenConfig {
                n: 60,
                avg_degree: 6.0,
                max_degree: 12,
                min_community: 5,
                max_community: 20,
                mu: 0.1,
                seed,
            };
            let (g, _) = generate(&cfg).unwrap();
            for v in 0..g.vertex_count() {
                assert!(g.degree(v) > 0, "seed {seed}: vertex {v} isolated");
            }
        }
    }

    #[test]
    fn community_sizes_respect_bounds_and_cover_all_vertices() {
        let (_, truth) = generate(&lfr500(0.2, 11)).unwrap();
        let labels = truth.labels();
        assert_eq!(labels.len(), 500);
        let mut counts = vec![0usize; truth.block_count()];
        for &l in labels {
            counts[l] += 1;
        }
        for &c in &counts {
            assert!((10..=50).contains(&c), "community size {c} out of bounds");
        }
        assert_eq!(counts.iter().sum::<usize>(), 500);
    }

    #[test]
    fn realized_degree_and_mixing_track_targets() {
        let (g, truth) = generate(&lfr500(0.3, 5)).unwrap();
        let mean_degree = 2.0 * g.edge_count() as f64 / g.vertex_count() as f64;
        assert!(
            (mean_degree - 20.0).abs() <= 3.0,
            "mean degree {mean_degree}"
        );
        let ext = external_fraction(&g, &truth);
        assert!((ext - 0.3).abs() <= 0.05, "external fraction {ext}");
        for v in 0..g.vertex_count() {
            assert!(g.degree(v) <= 50);
        }
    }

    #[test]
    fn rejects_invalid_configs() {
        let mut cfg = lfr500(0.2, 1);
        cfg.mu = 1.5;
        assert!(matches!(generate(&cfg), Err(GenError::BadMixing(_))));

        let mut cfg = lfr500(0.2, 1);
        cfg.min_community = 60;
        cfg.max_community = 50;
        assert!(matches!(
            generate(&cfg),
            Err(GenError::BadCommunitySizes { .. })
        ));

        let mut cfg = lfr500(0.2, 1);
        cfg.max_degree = 500;
        assert!(matches!(generate(&cfg), Err(GenError::BadDegrees { .. })));

        let cfg = GenConfig {
            n: 10,
            avg_degree: 2.0,
            max_degree: 4,
            min_community: 3,
            max_community: 3,
            mu: 0.1,
            seed: 0,
        };
        assert!(matches!(
            generate(&cfg),
            Err(GenError::InfeasiblePartition { .. })
        ));
    }

    #[test]
    fn sweep_builds_the_full_grid_with_derived_seeds() {
        let base = GenConfig {
            n: 60,
            avg_degree: 6.0,
            max_degree: 12,
            min_community: 10,
            max_community: 20,
            mu: 0.0,
            seed: 100,
        };
        let batch = sweep(&base, &[0.1, 0.3, 0.5], 4).unwrap();
        assert_eq!(batch.len(), 12);
        for inst in &batch {
            assert_eq!(inst.seed, 100 + inst.repeat as u64);
            assert_eq!(inst.graph.vertex_count(), 60);
        }
        let empty = sweep(&base, &[], 4).unwrap();
        assert!(empty.is_empty());
    }
}
