//! Immutable weighted graphs with a shortest-path metric.
//!
//! A [`Graph`] is a finite undirected simple graph with strictly positive edge
//! weights. Weights double as lengths: the distance between two vertices is
//! the minimum total weight over connecting paths, so a heavy edge can be
//! bypassed by a lighter multi-hop route. Construction validates the
//! invariants once; afterwards every query is read-only, which makes a graph
//! safe to share across threads.

use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};

use thiserror::Error;

/// Dense vertex index, assigned in first-appearance order at construction.
pub type VertexId = usize;
/// Dense edge index, assigned in construction order.
pub type EdgeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("vertex index {0} out of range ({1} vertices)")]
    VertexOutOfRange(usize, usize),
    #[error("edge index {0} out of range ({1} edges)")]
    EdgeOutOfRange(usize, usize),
    #[error("self-loop at vertex {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge ({0:?}, {1:?})")]
    DuplicateEdge(String, String),
    #[error("edge ({u:?}, {v:?}) has nonpositive weight {weight}")]
    NonPositiveWeight { u: String, v: String, weight: f64 },
    #[error("scale factor must be positive and finite, got {0}")]
    NonPositiveScale(f64),
    #[error("max_hops must be at least {min}, got {got}")]
    BadMaxHops { min: usize, got: usize },
    #[error("{got} weights supplied for {expected} edges")]
    WeightCountMismatch { got: usize, expected: usize },
}

/// An undirected edge; `u < v` always holds after construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: f64,
}

impl Edge {
    /// The endpoint that is not `x`. Panics if `x` is not an endpoint.
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            assert_eq!(x, self.v, "vertex {x} is not an endpoint");
            self.u
        }
    }
}

/// Shortest-path distance; disconnected pairs are marked explicitly rather
/// than carried as an infinite float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distance {
    Finite(f64),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<f64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    pub fn is_unreachable(self) -> bool {
        matches!(self, Distance::Unreachable)
    }
}

/// A partition of the vertex set into disjoint blocks covering every vertex.
///
/// Blocks are ordered by their smallest member and each block lists its
/// vertices in ascending order, so the representation is canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    blocks: Vec<Vec<VertexId>>,
    block_of: Vec<usize>,
}

impl Partition {
    fn from_block_ids(raw: &[usize]) -> Partition {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<Vec<VertexId>> = Vec::new();
        let mut block_of = vec![0usize; raw.len()];
        for (v, &b) in raw.iter().enumerate() {
            let next = blocks.len();
            let id = match remap.entry(b) {
                Entry::Occupied(o) => *o.get(),
                Entry::Vacant(slot) => {
                    slot.insert(next);
                    blocks.push(Vec::new());
                    next
                }
            };
            blocks[id].push(v);
            block_of[v] = id;
        }
        Partition { blocks, block_of }
    }

    pub fn blocks(&self) -> &[Vec<VertexId>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block containing `v`.
    pub fn block_of(&self, v: VertexId) -> usize {
        self.block_of[v]
    }

    /// Total number of vertices covered.
    pub fn vertex_count(&self) -> usize {
        self.block_of.len()
    }
}

/// A simple path reported by [`Graph::simple_paths`], with its total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePath {
    /// Vertex sequence from source to target inclusive.
    pub vertices: Vec<VertexId>,
    /// Sum of edge weights along the path.
    pub length: f64,
}

impl SimplePath {
    /// Number of edges traversed.
    pub fn hops(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Finite undirected simple graph with positive edge weights.
#[derive(Debug, Clone)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

impl Graph {
    /// Builds a graph from `(u, v, weight)` triples. Vertices are interned in
    /// first-appearance order. Self-loops, duplicate edges, and nonpositive
    /// weights are rejected.
    pub fn build<I, S>(edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (S, S, f64)>,
        S: Into<String>,
    {
        Self::build_with_vertices(Vec::<String>::new(), edges)
    }

    /// Like [`Graph::build`], but seeds the vertex set first so that isolated
    /// vertices (members of no edge) are representable.
    pub fn build_with_vertices<I, S, V, T>(vertices: V, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (S, S, f64)>,
        S: Into<String>,
        V: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let mut g = Graph {
            names: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            adj: Vec::new(),
        };
        for name in vertices {
            g.intern(name.into());
        }
        let mut seen: HashMap<(VertexId, VertexId), ()> = HashMap::new();
        for (a, b, weight) in edges {
            let (a, b) = (a.into(), b.into());
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(GraphError::NonPositiveWeight { u: a, v: b, weight });
            }
            let ua = g.intern(a);
            let ub = g.intern(b);
            let (u, v) = if ua < ub { (ua, ub) } else { (ub, ua) };
            if seen.insert((u, v), ()).is_some() {
                return Err(GraphError::DuplicateEdge(
                    g.names[u].clone(),
                    g.names[v].clone(),
                ));
            }
            let id = g.edges.len();
            g.edges.push(Edge { u, v, weight });
            g.adj[u].push((v, id));
            g.adj[v].push((u, id));
        }
        for list in &mut g.adj {
            list.sort_unstable_by_key(|&(nbr, _)| nbr);
        }
        Ok(g)
    }

    /// Unit-weight convenience constructor for small fixtures.
    pub fn unit(pairs: &[(&str, &str)]) -> Result<Graph, GraphError> {
        Self::build(pairs.iter().map(|&(a, b)| (a, b, 1.0)))
    }

    fn intern(&mut self, name: String) -> VertexId {
        match self.index.entry(name) {
            Entry::Occupied(o) => *o.get(),
            Entry::Vacant(slot) => {
                let id = self.names.len();
                self.names.push(slot.key().clone());
                slot.insert(id);
                self.adj.push(Vec::new());
                id
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge, GraphError> {
        self.edges
            .get(e)
            .ok_or(GraphError::EdgeOutOfRange(e, self.edges.len()))
    }

    /// Dense index for a vertex name.
    pub fn vertex_index(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    /// Like [`Graph::vertex_index`] but failing loudly, for input validation.
    pub fn require_vertex(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_index(name)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    /// Neighbors of `v` as `(neighbor, edge id)` pairs, ascending by neighbor.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    /// Edge id joining `u` and `v`, if present.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (probe, other) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[probe]
            .binary_search_by_key(&other, |&(nbr, _)| nbr)
            .ok()
            .map(|i| self.adj[probe][i].1)
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.names.len() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange(v, self.names.len()))
        }
    }

    /// Copy of the graph with every weight multiplied by `a` (topology and
    /// vertex numbering unchanged).
    pub fn scale_weights(&self, a: f64) -> Result<Graph, GraphError> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(GraphError::NonPositiveScale(a));
        }
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight *= a;
        }
        Ok(g)
    }

    /// Copy of the graph with weights replaced wholesale, indexed by edge id.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Graph, GraphError> {
        if weights.len() != self.edges.len() {
            return Err(GraphError::WeightCountMismatch {
                got: weights.len(),
                expected: self.edges.len(),
            });
        }
        let mut g = self.clone();
        for (e, &w) in g.edges.iter_mut().zip(weights) {
            if !(w > 0.0 && w.is_finite()) {
                return Err(GraphError::NonPositiveWeight {
                    u: self.names[e.u].clone(),
                    v: self.names[e.v].clone(),
                    weight: w,
                });
            }
            e.weight = w;
        }
        Ok(g)
    }

    /// Subgraph keeping the edges where `keep` is true, with the given new
    /// weights (both indexed by this graph's edge ids). The vertex set is
    /// retained in full, so removed edges leave isolated vertices behind.
    /// Returns the subgraph and the map from its edge ids to this graph's.
    pub fn edge_subgraph(
        &self,
        keep: &[bool],
        weights: &[f64],
    ) -> Result<(Graph, Vec<EdgeId>), GraphError> {
        if keep.len() != self.edges.len() {
            return Err(GraphError::WeightCountMismatch {
                got: keep.len(),
                expected: self.edges.len(),
            });
        }
        if weights.len() != self.edges.len() {
            return Err(GraphError::WeightCountMismatch {
                got: weights.len(),
                expected: self.edges.len(),
            });
        }
        let kept = (0..self.edges.len()).filter(|&e| keep[e]);
        let g = Graph::build_with_vertices(
            self.names.iter().map(|s| s.as_str()),
            kept.clone().map(|e| {
                let edge = &self.edges[e];
                (
                    self.names[edge.u].as_str(),
                    self.names[edge.v].as_str(),
                    weights[e],
                )
            }),
        )?;
        Ok((g, kept.collect()))
    }

    /// Single-source shortest-path distances by Dijkstra; `None` marks
    /// unreachable vertices.
    pub fn single_source_distances(&self, src: VertexId) -> Vec<Option<f64>> {
        self.dijkstra(src, None)
    }

    /// Dijkstra that may stop once all `targets` are settled. Settled
    /// distances are identical to the full run; only the cutoff differs.
    pub(crate) fn dijkstra(&self, src: VertexId, targets: Option<&[VertexId]>) -> Vec<Option<f64>> {
        let n = self.names.len();
        let mut dist: Vec<Option<f64>> = vec![None; n];
        let mut settled = vec![false; n];
        let mut pending = targets.map(|t| {
            let mut want = vec![false; n];
            let mut count = 0usize;
            for &v in t {
                if !want[v] {
                    want[v] = true;
                    count += 1;
                }
            }
            (want, count)
        });
        let mut heap = BinaryHeap::new();
        dist[src] = Some(0.0);
        heap.push(HeapEntry { dist: 0.0, v: src });
        while let Some(HeapEntry { dist: d, v }) = heap.pop() {
            if settled[v] {
                continue;
            }
            settled[v] = true;
            if let Some((want, count)) = &mut pending {
                if want[v] {
                    want[v] = false;
                    *count -= 1;
                    if *count == 0 {
                        break;
                    }
                }
            }
            for &(nbr, e) in &self.adj[v] {
                if settled[nbr] {
                    continue;
                }
                let cand = d + self.edges[e].weight;
                if dist[nbr].map_or(true, |cur| cand < cur) {
                    dist[nbr] = Some(cand);
                    heap.push(HeapEntry { dist: cand, v: nbr });
                }
            }
        }
        dist
    }

    /// Shortest-path distance between two vertices.
    pub fn shortest_path_distance(&self, u: VertexId, v: VertexId) -> Result<Distance, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(Distance::Finite(0.0));
        }
        let dist = self.dijkstra(u, Some(&[v]));
        Ok(match dist[v] {
            Some(d) => Distance::Finite(d),
            None => Distance::Unreachable,
        })
    }

    /// Connected components; isolated vertices form singleton blocks.
    pub fn connected_components(&self) -> Partition {
        let n = self.names.len();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0usize;
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &(nbr, _) in &self.adj[v] {
                    if comp[nbr] == usize::MAX {
                        comp[nbr] = next;
                        stack.push(nbr);
                    }
                }
            }
            next += 1;
        }
        Partition::from_block_ids(&comp)
    }

    /// All edges in the connected component containing `e`, including `e`
    /// itself, ascending by edge id.
    pub fn component_edges(&self, e: EdgeId) -> Result<Vec<EdgeId>, GraphError> {
        let edge = *self.edge(e)?;
        let comps = self.connected_components();
        let block = comps.block_of(edge.u);
        Ok((0..self.edges.len())
            .filter(|&id| comps.block_of(self.edges[id].u) == block)
            .collect())
    }

    /// Triangles `{x, y, z}` containing the edge `e = (x, y)`, i.e. vertices
    /// `z` adjacent to both endpoints. Reported as `[x, y, z]` with `z`
    /// ascending.
    pub fn triangles_containing(&self, e: EdgeId) -> Result<Vec<[VertexId; 3]>, GraphError> {
        let edge = *self.edge(e)?;
        let (xs, ys) = (&self.adj[edge.u], &self.adj[edge.v]);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < xs.len() && j < ys.len() {
            let (a, b) = (xs[i].0, ys[j].0);
            match a.cmp(&b) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push([edge.u, edge.v, a]);
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(out)
    }

    /// All simple paths from `u` to `v` with 1 to `max_hops` edges, skipping
    /// `excluded` if given. Paths are produced in depth-first order with
    /// neighbors visited ascending, so the output order is deterministic.
    pub fn simple_paths(
        &self,
        u: VertexId,
        v: VertexId,
        max_hops: usize,
        excluded: Option<EdgeId>,
    ) -> Result<Vec<SimplePath>, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if max_hops < 1 {
            return Err(GraphError::BadMaxHops {
                min: 1,
                got: max_hops,
            });
        }
        if let Some(e) = excluded {
            self.edge(e)?;
        }
        let mut out = Vec::new();
        let mut on_path = vec![false; self.names.len()];
        let mut path = vec![u];
        on_path[u] = true;
        self.path_dfs(u, v, max_hops, excluded, 0.0, &mut path, &mut on_path, &mut out);
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn path_dfs(
        &self,
        at: VertexId,
        target: VertexId,
        hops_left: usize,
        excluded: Option<EdgeId>,
        length: f64,
        path: &mut Vec<VertexId>,
        on_path: &mut [bool],
        out: &mut Vec<SimplePath>,
    ) {
        if hops_left == 0 {
            return;
        }
        for &(nbr, e) in &self.adj[at] {
            if Some(e) == excluded || on_path[nbr] {
                continue;
            }
            let len = length + self.edges[e].weight;
            path.push(nbr);
            if nbr == target {
                out.push(SimplePath {
                    vertices: path.clone(),
                    length: len,
                });
            } else {
                on_path[nbr] = true;
                self.path_dfs(nbr, target, hops_left - 1, excluded, len, path, on_path, out);
                on_path[nbr] = false;
            }
            path.pop();
        }
    }
}

/// Min-heap entry ordered by distance; `BinaryHeap` is a max-heap, so the
/// ordering is reversed here.
#[derive(Copy, Clone)]
struct HeapEntry {
    dist: f64,
    v: VertexId,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.v.cmp(&self.v))
    }
}
