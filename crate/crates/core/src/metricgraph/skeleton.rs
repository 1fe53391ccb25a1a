use std::collections::VecDeque;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{GraphPoint, MetricGraph};
use crate::error::{Error, Result};
use crate::rational::{serde_q, Q};
use crate::tropcurve::{CurveLocation, PlanePoint, TropicalCurve};

/// One curve edge traversed by a skeleton edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub curve_edge: usize,
    /// Traversed from `ends.0` to `ends.1`.
    pub forward: bool,
    /// Offset along the skeleton edge where this step begins.
    #[serde(with = "serde_q")]
    pub start: Q,
    #[serde(with = "serde_q")]
    pub len: Q,
}

/// Minimal model of the skeleton of a curve together with its embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skeleton {
    pub graph: MetricGraph,
    /// Curve vertex at each skeleton vertex.
    pub vertex_curve: Vec<usize>,
    pub chains: Vec<Vec<ChainStep>>,
    /// Skeleton point each curve vertex retracts to.
    pub retraction: Vec<GraphPoint>,
    /// `(skeleton edge, step)` for curve edges lying on the skeleton.
    pub edge_steps: Vec<Option<(usize, usize)>>,
}

/// Remove rays, prune leaves, and suppress valence-2 vertices.
/// A tree contracts to the one-point graph.
pub fn skeleton(c: &TropicalCurve) -> Skeleton {
    let nv = c.vertices.len();
    let mut deg = vec![0usize; nv];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (i, e) in c.edges.iter().enumerate() {
        deg[e.ends.0] += 1;
        deg[e.ends.1] += 1;
        adj[e.ends.0].push((i, e.ends.1));
        adj[e.ends.1].push((i, e.ends.0));
    }
    let mut alive = vec![true; nv];
    let mut queue: VecDeque<usize> = (0..nv).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &(_, w) in &adj[v] {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    let core: Vec<usize> = (0..nv).filter(|&v| alive[v]).collect();
    if core.is_empty() {
        return Skeleton {
            graph: MetricGraph::point(),
            vertex_curve: vec![0],
            chains: Vec::new(),
            retraction: vec![GraphPoint::Vertex(0); nv],
            edge_steps: vec![None; c.edges.len()],
        };
    }
    let mut core_index = vec![usize::MAX; nv];
    for (i, &v) in core.iter().enumerate() {
        core_index[v] = i;
    }
    let core_edges: Vec<usize> = (0..c.edges.len())
        .filter(|&i| alive[c.edges[i].ends.0] && alive[c.edges[i].ends.1])
        .collect();
    let core_graph = MetricGraph {
        num_vertices: core.len(),
        edges: core_edges
            .iter()
            .map(|&i| super::GraphEdge {
                u: core_index[c.edges[i].ends.0],
                v: core_index[c.edges[i].ends.1],
                length: c.edges[i].lattice_length,
            })
            .collect(),
    };
    let m = core_graph.minimize();
    let vertex_curve: Vec<usize> = m.vertex_map.iter().map(|&i| core[i]).collect();
    let mut retraction = vec![GraphPoint::Vertex(usize::MAX); nv];
    for (k, &v) in vertex_curve.iter().enumerate() {
        retraction[v] = GraphPoint::Vertex(k);
    }
    let mut edge_steps = vec![None; c.edges.len()];
    let mut chains = Vec::with_capacity(m.chains.len());
    for (se, chain) in m.chains.iter().enumerate() {
        let mut steps = Vec::with_capacity(chain.len());
        let mut start = Q::zero();
        for (k, &(ce, fwd)) in chain.iter().enumerate() {
            let curve_edge = core_edges[ce];
            let e = &c.edges[curve_edge];
            let from = if fwd { e.ends.0 } else { e.ends.1 };
            if k > 0 {
                retraction[from] = GraphPoint::Edge {
                    edge: se,
                    offset: start,
                };
            }
            steps.push(ChainStep {
                curve_edge,
                forward: fwd,
                start,
                len: e.lattice_length,
            });
            edge_steps[curve_edge] = Some((se, k));
            start += e.lattice_length;
        }
        chains.push(steps);
    }
    // trees hanging off the core retract to their attachment point
    let mut queue: VecDeque<usize> = core.iter().copied().collect();
    let mut seen = alive.clone();
    while let Some(v) = queue.pop_front() {
        for &(_, w) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                retraction[w] = retraction[v];
                queue.push_back(w);
            }
        }
    }
    Skeleton {
        graph: m.graph,
        vertex_curve,
        chains,
        retraction,
        edge_steps,
    }
}

/// A curve with its skeleton, the metric graph shared by divisors on it.
#[derive(Clone, Debug)]
pub struct SkeletalCurve {
    pub curve: TropicalCurve,
    pub skeleton: Skeleton,
    pub graph: Arc<MetricGraph>,
}

impl SkeletalCurve {
    pub fn new(curve: TropicalCurve) -> Self {
        let skeleton = skeleton(&curve);
        let graph = Arc::new(skeleton.graph.clone());
        Self {
            curve,
            skeleton,
            graph,
        }
    }

    pub fn embed(&self, p: &GraphPoint) -> PlanePoint {
        self.skeleton.embed(&self.curve, p)
    }

    pub fn retract_point(&self, p: PlanePoint) -> Result<GraphPoint> {
        self.skeleton.retract_point(&self.curve, p)
    }
}

impl Skeleton {
    pub fn is_trivial(&self) -> bool {
        self.graph.edges.is_empty() && self.graph.num_vertices == 1
    }

    /// Plane position of a skeleton point.
    pub fn embed(&self, c: &TropicalCurve, p: &GraphPoint) -> PlanePoint {
        match *p {
            GraphPoint::Vertex(v) => c.vertices[self.vertex_curve[v]].pos,
            GraphPoint::Edge { edge, offset } => {
                let chain = &self.chains[edge];
                let k = chain.partition_point(|s| s.start <= offset) - 1;
                let s = &chain[k];
                let e = &c.edges[s.curve_edge];
                let t = offset - s.start;
                if s.forward {
                    c.vertices[e.ends.0].pos.offset(e.direction, t)
                } else {
                    c.vertices[e.ends.1]
                        .pos
                        .offset((-e.direction.0, -e.direction.1), t)
                }
            }
        }
    }

    /// Skeleton point of a curve location, retracting along trees and rays.
    pub fn retract(&self, c: &TropicalCurve, loc: &CurveLocation) -> GraphPoint {
        match *loc {
            CurveLocation::Vertex(v) => self.retraction[v],
            CurveLocation::Ray { ray, .. } => self.retraction[c.rays[ray].vertex],
            CurveLocation::Edge { edge, t } => match self.edge_steps[edge] {
                Some((se, k)) => {
                    let s = &self.chains[se][k];
                    let along = if s.forward { t } else { s.len - t };
                    self.graph.point_on(se, s.start + along)
                }
                None => self.retraction[c.edges[edge].ends.0],
            },
        }
    }

    pub fn retract_point(&self, c: &TropicalCurve, p: PlanePoint) -> Result<GraphPoint> {
        let loc = c
            .locate(p)
            .ok_or_else(|| Error::NotOnCurve(format!("{p} is not on the curve")))?;
        Ok(self.retract(c, &loc))
    }

    /// Whether a point of the curve lies on the embedded skeleton.
    pub fn on_skeleton(&self, c: &TropicalCurve, p: PlanePoint) -> bool {
        match c.locate(p) {
            Some(CurveLocation::Vertex(v)) => {
                let r = self.retraction[v];
                !self.is_trivial() && self.embed(c, &r) == p
            }
            Some(CurveLocation::Edge { edge, .. }) => self.edge_steps[edge].is_some(),
            _ => false,
        }
    }

    /// Curve edges on the skeleton, as plane segments.
    pub fn segments(&self, c: &TropicalCurve) -> Vec<(PlanePoint, PlanePoint)> {
        self.chains
            .iter()
            .flatten()
            .map(|s| {
                let e = &c.edges[s.curve_edge];
                (c.vertices[e.ends.0].pos, c.vertices[e.ends.1].pos)
            })
            .collect()
    }
}
