//! Compact metric graphs: points, refinements, genus, cuts and the
//! combinatorial type of genus-3 trivalent graphs.

mod skeleton;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, serde_q, Q};

pub use skeleton::{skeleton, ChainStep, SkeletalCurve, Skeleton};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphEdge {
    pub u: usize,
    pub v: usize,
    #[serde(with = "serde_q")]
    pub length: Q,
}

impl GraphEdge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn other(&self, w: usize) -> usize {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Loops and parallel edges are allowed; lengths are positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MetricGraph {
    pub num_vertices: usize,
    pub edges: Vec<GraphEdge>,
}

/// A point of a metric graph. Edge offsets are measured from `edges[e].u`
/// and lie strictly between 0 and the edge length; endpoints are vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphPoint {
    Vertex(usize),
    Edge {
        edge: usize,
        #[serde(with = "serde_q")]
        offset: Q,
    },
}

impl fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphPoint::Vertex(v) => write!(f, "v{v}"),
            GraphPoint::Edge { edge, offset } => write!(f, "e{edge}@{}", fmt_q(offset)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CombinatorialType {
    Honeycomb,
    MickeyMouse,
    OneBridge,
    TwoBridge,
    Lollipop,
    Other,
}

impl CombinatorialType {
    pub const QUARTIC: [CombinatorialType; 4] = [
        CombinatorialType::Honeycomb,
        CombinatorialType::MickeyMouse,
        CombinatorialType::OneBridge,
        CombinatorialType::TwoBridge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CombinatorialType::Honeycomb => "honeycomb",
            CombinatorialType::MickeyMouse => "mickey-mouse",
            CombinatorialType::OneBridge => "one-bridge",
            CombinatorialType::TwoBridge => "two-bridge",
            CombinatorialType::Lollipop => "lollipop",
            CombinatorialType::Other => "other",
        }
    }
}

impl fmt::Display for CombinatorialType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of suppressing degree-2 vertices.
#[derive(Clone, Debug)]
pub struct Minimized {
    pub graph: MetricGraph,
    /// Original index of each kept vertex.
    pub vertex_map: Vec<usize>,
    /// Original edges traversed by each new edge, from its `u` to its `v`,
    /// with the direction of traversal.
    pub chains: Vec<Vec<(usize, bool)>>,
}

impl MetricGraph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize, Q)>) -> Result<Self> {
        let g = Self {
            num_vertices,
            edges: edges
                .into_iter()
                .map(|(u, v, length)| GraphEdge { u, v, length })
                .collect(),
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= self.num_vertices || e.v >= self.num_vertices {
                return Err(Error::Internal(format!("edge {i} has an endpoint out of range")));
            }
            if e.length <= Q::zero() {
                return Err(Error::Internal(format!("edge {i} has non-positive length")));
            }
        }
        if !self.is_connected() {
            return Err(Error::Internal("metric graph is not connected".into()));
        }
        Ok(())
    }

    /// A single vertex, no edges.
    pub fn point() -> Self {
        Self {
            num_vertices: 1,
            edges: Vec::new(),
        }
    }

    /// First Betti number (graph assumed connected).
    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.num_vertices
    }

    pub fn total_length(&self) -> Q {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Number of edge ends at `v`; a loop counts twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.u == v) as usize + (e.v == v) as usize)
            .sum()
    }

    /// `(edge, end)` pairs at `v`, where `end` is true when `v` is the edge's `u`.
    pub fn incidences(&self, v: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.u == v {
                out.push((i, true));
            }
            if e.v == v {
                out.push((i, false));
            }
        }
        out
    }

    /// Canonical point at distance `offset` from `edges[edge].u`.
    pub fn point_on(&self, edge: usize, offset: Q) -> GraphPoint {
        let e = &self.edges[edge];
        if offset.is_zero() {
            GraphPoint::Vertex(e.u)
        } else if offset == e.length {
            GraphPoint::Vertex(e.v)
        } else {
            debug_assert!(offset > Q::zero() && offset < e.length);
            GraphPoint::Edge { edge, offset }
        }
    }

    pub fn contains_point(&self, p: &GraphPoint) -> bool {
        match *p {
            GraphPoint::Vertex(v) => v < self.num_vertices,
            GraphPoint::Edge { edge, offset } => {
                edge < self.edges.len() && offset > Q::zero() && offset < self.edges[edge].length
            }
        }
    }

    pub fn midpoint(&self, edge: usize) -> GraphPoint {
        self.point_on(edge, self.edges[edge].length / qi(2))
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].is_loop()).collect()
    }

    /// Number of connected components after deleting the given edges.
    pub fn components_without(&self, removed: &[usize]) -> usize {
        let mut parent: Vec<usize> = (0..self.num_vertices).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let mut count = self.num_vertices;
        for (i, e) in self.edges.iter().enumerate() {
            if removed.contains(&i) {
                continue;
            }
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices > 0 && self.components_without(&[]) == 1
    }

    pub fn bridges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.components_without(&[i]) > 1)
            .collect()
    }

    /// Pairs of non-bridge edges whose joint removal disconnects the graph.
    pub fn two_edge_cuts(&self) -> Vec<(usize, usize)> {
        let bridges = self.bridges();
        let n = self.edges.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if bridges.contains(&i) || bridges.contains(&j) {
                    continue;
                }
                if self.components_without(&[i, j]) > 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Edges parallel to some other edge (same endpoints, not loops), grouped.
    pub fn parallel_classes(&self) -> Vec<Vec<usize>> {
        let mut by_ends: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                by_ends.entry((e.u.min(e.v), e.u.max(e.v))).or_default().push(i);
            }
        }
        by_ends.into_values().filter(|c| c.len() > 1).collect()
    }

    /// Suppress vertices of valence 2. A graph that is a single cycle keeps
    /// its smallest vertex.
    pub fn minimize(&self) -> Minimized {
        let mut keep: Vec<usize> = (0..self.num_vertices)
            .filter(|&v| self.valence(v) != 2)
            .collect();
        if keep.is_empty() {
            keep.push(0);
        }
        let index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut used = vec![false; self.edges.len()];
        let mut edges = Vec::new();
        let mut chains = Vec::new();
        for &start in &keep {
            for (e0, at_u) in self.incidences(start) {
                if used[e0] {
                    // a loop is listed twice at its vertex
                    continue;
                }
                let mut chain = Vec::new();
                let mut length = Q::zero();
                let (mut e, mut fwd) = (e0, at_u);
                let end = loop {
                    used[e] = true;
                    chain.push((e, fwd));
                    length += self.edges[e].length;
                    let w = if fwd { self.edges[e].v } else { self.edges[e].u };
                    if index.contains_key(&w) {
                        break w;
                    }
                    // valence-2 vertex: continue along its other edge
                    let (ne, nfwd) = self
                        .incidences(w)
                        .into_iter()
                        .find(|&(x, _)| !used[x])
                        .expect("valence-2 vertex has a second edge");
                    e = ne;
                    fwd = nfwd;
                };
                edges.push(GraphEdge {
                    u: index[&start],
                    v: index[&end],
                    length,
                });
                chains.push(chain);
            }
        }
        Minimized {
            graph: MetricGraph {
                num_vertices: keep.len(),
                edges,
            },
            vertex_map: keep,
            chains,
        }
    }

    /// Type of a genus-3 trivalent graph, read off its minimal model.
    pub fn classify_type(&self) -> CombinatorialType {
        let g = self.minimize().graph;
        if g.num_vertices != 4
            || g.edges.len() != 6
            || !g.is_connected()
            || (0..4).any(|v| g.valence(v) != 3)
        {
            return CombinatorialType::Other;
        }
        let loops = g.loops().len();
        let bridges = g.bridges().len();
        let digons = g.parallel_classes().iter().filter(|c| c.len() == 2).count();
        let triple = g.parallel_classes().iter().any(|c| c.len() > 2);
        match (loops, bridges, digons, triple) {
            (0, 0, 0, false) => CombinatorialType::Honeycomb,
            (0, 0, 2, false) => CombinatorialType::MickeyMouse,
            (1, 1, _, false) => CombinatorialType::OneBridge,
            (2, 2, _, false) => CombinatorialType::TwoBridge,
            (3, 3, _, false) => CombinatorialType::Lollipop,
            _ => CombinatorialType::Other,
        }
    }

    /// Whether removing two distinct points disconnects the graph.
    pub fn disconnects_without_points(&self, p: &GraphPoint, q: &GraphPoint) -> bool {
        let r = self.refine([*p, *q]);
        let (a, b) = (r.vertex_of(p), r.vertex_of(q));
        let h = &r.graph;
        let mut parent: Vec<usize> = (0..h.num_vertices).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        // open segments with both ends removed are components on their own
        let mut pieces = 0usize;
        for e in &h.edges {
            let (eu, ev) = (e.u == a || e.u == b, e.v == a || e.v == b);
            if eu && ev {
                pieces += 1;
            } else if !eu && !ev {
                let (x, y) = (find(&mut parent, e.u), find(&mut parent, e.v));
                parent[x] = y;
            }
        }
        let roots: BTreeSet<usize> = (0..h.num_vertices)
            .filter(|&v| v != a && v != b)
            .map(|v| find(&mut parent, v))
            .collect();
        roots.len() + pieces > 1
    }

    /// Subdivide at the given points.
    pub fn refine(&self, points: impl IntoIterator<Item = GraphPoint>) -> Refinement {
        let mut cuts: Vec<BTreeSet<Q>> = vec![BTreeSet::new(); self.edges.len()];
        for p in points {
            if let GraphPoint::Edge { edge, offset } = p {
                cuts[edge].insert(offset);
            }
        }
        let mut num_vertices = self.num_vertices;
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        let mut new_vertices = Vec::new();
        let mut segments = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            let mut segs = Vec::new();
            let mut prev_v = e.u;
            let mut prev_off = Q::zero();
            for &c in &cuts[i] {
                let w = num_vertices;
                num_vertices += 1;
                new_vertices.push(GraphPoint::Edge { edge: i, offset: c });
                segs.push((edges.len(), prev_off));
                origin.push((i, prev_off));
                edges.push(GraphEdge {
                    u: prev_v,
                    v: w,
                    length: c - prev_off,
                });
                prev_v = w;
                prev_off = c;
            }
            segs.push((edges.len(), prev_off));
            origin.push((i, prev_off));
            edges.push(GraphEdge {
                u: prev_v,
                v: e.v,
                length: e.length - prev_off,
            });
            segments.push(segs);
        }
        Refinement {
            graph: MetricGraph {
                num_vertices,
                edges,
            },
            base_vertices: self.num_vertices,
            new_vertices,
            origin,
            segments,
            base: self.clone(),
        }
    }
}

/// A subdivision of a metric graph, with point maps in both directions.
/// Original vertices keep their indices.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub graph: MetricGraph,
    base: MetricGraph,
    base_vertices: usize,
    new_vertices: Vec<GraphPoint>,
    /// For each refined edge: original edge and offset of its start.
    origin: Vec<(usize, Q)>,
    /// For each original edge: refined edges in order, with start offsets.
    segments: Vec<Vec<(usize, Q)>>,
}

impl Refinement {
    pub fn to_refined(&self, p: &GraphPoint) -> GraphPoint {
        match *p {
            GraphPoint::Vertex(v) => GraphPoint::Vertex(v),
            GraphPoint::Edge { edge, offset } => {
                let segs = &self.segments[edge];
                let k = segs.partition_point(|&(_, s)| s <= offset) - 1;
                let (re, start) = segs[k];
                self.graph.point_on(re, offset - start)
            }
        }
    }

    pub fn to_original(&self, p: &GraphPoint) -> GraphPoint {
        match *p {
            GraphPoint::Vertex(v) if v < self.base_vertices => GraphPoint::Vertex(v),
            GraphPoint::Vertex(v) => self.new_vertices[v - self.base_vertices],
            GraphPoint::Edge { edge, offset } => {
                let (oe, start) = self.origin[edge];
                self.base.point_on(oe, start + offset)
            }
        }
    }

    /// Refined vertex at an original point that was used as a cut.
    pub fn vertex_of(&self, p: &GraphPoint) -> usize {
        match self.to_refined(p) {
            GraphPoint::Vertex(v) => v,
            other => panic!("{other} is not a vertex of the refinement"),
        }
    }

    pub fn original_edge(&self, refined_edge: usize) -> usize {
        self.origin[refined_edge].0
    }

    /// Original edge and start offset of a refined edge.
    pub fn origin(&self, refined_edge: usize) -> (usize, Q) {
        self.origin[refined_edge]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn theta(a: i64, b: i64, c: i64) -> MetricGraph {
        MetricGraph::new(2, vec![(0, 1, qi(a)), (0, 1, qi(b)), (0, 1, qi(c))]).unwrap()
    }

    fn k4() -> MetricGraph {
        let e = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        MetricGraph::new(4, e.iter().map(|&(u, v)| (u, v, qi(1))).collect()).unwrap()
    }

    fn mickey() -> MetricGraph {
        // two digons 0=1 and 2=3 joined by 0-2 and 1-3
        MetricGraph::new(
            4,
            vec![
                (0, 1, qi(1)),
                (0, 1, qi(2)),
                (2, 3, qi(1)),
                (2, 3, qi(3)),
                (0, 2, qi(2)),
                (1, 3, qi(5)),
            ],
        )
        .unwrap()
    }

    fn two_bridge() -> MetricGraph {
        // loop at 0, bridge 0-1, digon 1=2, bridge 2-3, loop at 3
        MetricGraph::new(
            4,
            vec![
                (0, 0, qi(3)),
                (0, 1, qi(1)),
                (1, 2, qi(2)),
                (1, 2, qi(2)),
                (2, 3, qi(1)),
                (3, 3, qi(4)),
            ],
        )
        .unwrap()
    }

    fn one_bridge() -> MetricGraph {
        // loop at 0, bridge 0-1, then 1 joined to the digon 2=3 and 2-3 via 1-2, 1-3
        MetricGraph::new(
            4,
            vec![
                (0, 0, qi(3)),
                (0, 1, qi(1)),
                (1, 2, qi(1)),
                (1, 3, qi(1)),
                (2, 3, qi(1)),
                (2, 3, qi(2)),
            ],
        )
        .unwrap()
    }

    fn lollipop() -> MetricGraph {
        MetricGraph::new(
            4,
            vec![
                (0, 1, qi(1)),
                (0, 2, qi(1)),
                (0, 3, qi(1)),
                (1, 1, qi(1)),
                (2, 2, qi(1)),
                (3, 3, qi(1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn genus_and_types() {
        assert_eq!(theta(1, 2, 3).genus(), 2);
        assert_eq!(MetricGraph::new(3, vec![(0, 1, qi(1)), (1, 2, qi(1))]).unwrap().genus(), 0);
        assert_eq!(theta(1, 2, 3).classify_type(), CombinatorialType::Other);
        assert_eq!(k4().classify_type(), CombinatorialType::Honeycomb);
        assert_eq!(mickey().classify_type(), CombinatorialType::MickeyMouse);
        assert_eq!(one_bridge().classify_type(), CombinatorialType::OneBridge);
        assert_eq!(two_bridge().classify_type(), CombinatorialType::TwoBridge);
        assert_eq!(lollipop().classify_type(), CombinatorialType::Lollipop);
        for g in [k4(), mickey(), one_bridge(), two_bridge(), lollipop()] {
            assert_eq!(g.genus(), 3);
        }
    }

    #[test]
    fn classification_survives_subdivision() {
        for g in [k4(), mickey(), one_bridge(), two_bridge()] {
            let t = g.classify_type();
            let pts: Vec<_> = (0..g.edges.len()).map(|e| g.midpoint(e)).collect();
            let r = g.refine(pts);
            assert_eq!(r.graph.num_vertices, 10);
            assert_eq!(r.graph.classify_type(), t);
            let m = r.graph.minimize();
            assert_eq!(m.graph.total_length(), g.total_length());
        }
    }

    #[test]
    fn cuts_and_bridges() {
        assert!(k4().bridges().is_empty());
        assert!(k4().two_edge_cuts().is_empty());
        assert_eq!(two_bridge().bridges(), vec![1, 4]);
        assert_eq!(two_bridge().two_edge_cuts(), vec![(2, 3)]);
        assert_eq!(mickey().two_edge_cuts(), vec![(4, 5)]);
        assert!(mickey().bridges().is_empty());
    }

    #[test]
    fn removing_points() {
        let g = two_bridge();
        let p = g.point_on(1, q(1, 3));
        let r = g.point_on(1, q(2, 3));
        assert!(g.disconnects_without_points(&p, &r));
        let m = mickey();
        let a = m.point_on(4, qi(1));
        let b = m.point_on(5, qi(2));
        assert!(m.disconnects_without_points(&a, &b));
        let h = k4();
        let x = h.midpoint(0);
        let y = h.midpoint(3);
        assert!(!h.disconnects_without_points(&x, &y));
        assert!(!h.disconnects_without_points(&GraphPoint::Vertex(0), &h.midpoint(5)));
        // the open edge between two removed vertices is its own component
        assert!(h.disconnects_without_points(&GraphPoint::Vertex(0), &GraphPoint::Vertex(1)));
    }

    #[test]
    fn refinement_round_trip() {
        let g = theta(1, 2, 3);
        let pts = [g.point_on(2, q(3, 2)), g.point_on(2, qi(1)), g.point_on(1, q(1, 2))];
        let r = g.refine(pts);
        assert_eq!(r.graph.edges.len(), 6);
        assert_eq!(r.graph.total_length(), qi(6));
        for p in pts.iter().chain([GraphPoint::Vertex(1), g.point_on(2, q(1, 4))].iter()) {
            assert_eq!(r.to_original(&r.to_refined(p)), *p);
        }
    }

    use crate::rational::q;
}
