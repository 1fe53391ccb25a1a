//! Hyperellipticity of genus-3 metric graphs, and the cut-length argument
//! showing smooth plane quartic skeletons are never hyperelliptic.
//!
//! A metric graph is hyperelliptic when it carries a divisor of degree 2
//! and rank 1. Such a divisor moves as `p + ι(p)` for an involutive isometry
//! `ι`, which maps vertices of the minimal model to vertices. Fixing `p` at
//! a vertex, the partner `q` is therefore a vertex as well; edge midpoints
//! are also tried.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::divisor::{canonical_divisor, rank, Divisor};
use crate::error::{Error, Result};
use crate::lattice::{LatticeEdge, LatticePoint};
use crate::metricgraph::{CombinatorialType, GraphPoint, MetricGraph, Minimized, SkeletalCurve};
use crate::rational::serde_q;
use crate::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    GenusTwo,
    HoneycombType,
    /// A 2-edge-cut of the minimal model with unequal lengths.
    UnequalCut {
        #[serde(with = "serde_q")]
        first: Q,
        #[serde(with = "serde_q")]
        second: Q,
    },
    RankOneDivisor,
    NoRankOneDivisor,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub hyperelliptic: bool,
    pub reason: Reason,
    /// A degree-2 rank-1 divisor when one was found.
    pub witness: Option<Divisor>,
}

/// Point at distance `t` along a chain of original edges.
fn chain_point(g: &MetricGraph, chain: &[(usize, bool)], mut t: Q) -> GraphPoint {
    for &(e, fwd) in chain {
        let len = g.edges[e].length;
        if t < len {
            return g.point_on(e, if fwd { t } else { len - t });
        }
        t -= len;
        if t == Q::from_integer(0) {
            let edge = &g.edges[e];
            return GraphPoint::Vertex(if fwd { edge.v } else { edge.u });
        }
    }
    unreachable!("offset beyond chain")
}

fn candidates(g: &MetricGraph, m: &Minimized) -> Vec<GraphPoint> {
    let mut out: Vec<GraphPoint> = m.vertex_map.iter().map(|&v| GraphPoint::Vertex(v)).collect();
    for (i, chain) in m.chains.iter().enumerate() {
        out.push(chain_point(g, chain, m.graph.edges[i].length / 2));
    }
    out
}

pub fn decide(g: &Arc<MetricGraph>) -> Result<Verdict> {
    let genus = g.genus();
    if genus < 2 {
        return Err(Error::OutOfScope(format!("hyperellipticity of a genus {genus} graph")));
    }
    if genus == 2 {
        return Ok(Verdict {
            hyperelliptic: true,
            reason: Reason::GenusTwo,
            witness: Some(canonical_divisor(g)),
        });
    }
    if genus == 3 && g.classify_type() == CombinatorialType::Honeycomb {
        return Ok(Verdict {
            hyperelliptic: false,
            reason: Reason::HoneycombType,
            witness: None,
        });
    }
    let m = g.minimize();
    for (a, b) in m.graph.two_edge_cuts() {
        let (la, lb) = (m.graph.edges[a].length, m.graph.edges[b].length);
        if la != lb {
            return Ok(Verdict {
                hyperelliptic: false,
                reason: Reason::UnequalCut { first: la, second: lb },
                witness: None,
            });
        }
    }
    let p = GraphPoint::Vertex(m.vertex_map[0]);
    for q in candidates(g, &m) {
        let d = Divisor::from_points(g.clone(), [(p, 1), (q, 1)]);
        if rank(&d)? >= 1 {
            return Ok(Verdict {
                hyperelliptic: true,
                reason: Reason::RankOneDivisor,
                witness: Some(d),
            });
        }
    }
    Ok(Verdict {
        hyperelliptic: false,
        reason: Reason::NoRankOneDivisor,
        witness: None,
    })
}

pub fn is_hyperelliptic(g: &MetricGraph) -> Result<bool> {
    Ok(decide(&Arc::new(g.clone()))?.hyperelliptic)
}

/// The two edges of the skeleton's 2-edge-cut on the middle cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutWitness {
    /// Interior lattice point whose cycle carries the cut.
    pub interior: LatticePoint,
    /// Skeleton edge through the curve edge dual to the inner diagonal.
    pub short_edge: usize,
    pub long_edge: usize,
    #[serde(with = "serde_q")]
    pub short_length: Q,
    #[serde(with = "serde_q")]
    pub long_length: Q,
}

impl CutWitness {
    pub fn holds(&self) -> bool {
        self.long_length > self.short_length
    }
}

/// Inner diagonals from each interior point, related by the symmetries of
/// the triangle.
const DIAGONALS: [((i64, i64), (i64, i64)); 3] = [((1, 1), (2, 2)), ((2, 1), (0, 2)), ((1, 2), (2, 0))];

/// Lengths of the 2-edge-cut on the cycle of an interior point: the edge
/// through the diagonal's dual and its partner in the cut.
pub fn cut_length_witness(c: &SkeletalCurve) -> Result<CutWitness> {
    let ty = c.graph.classify_type();
    if !matches!(
        ty,
        CombinatorialType::MickeyMouse | CombinatorialType::OneBridge | CombinatorialType::TwoBridge
    ) {
        return Err(Error::NotApplicable(format!("no cut-length witness for type {ty}")));
    }
    let cuts = c.graph.two_edge_cuts();
    for (a, b) in DIAGONALS {
        let e = LatticeEdge::new(LatticePoint::new(a.0, a.1), LatticePoint::new(b.0, b.1));
        let Some(ce) = c.curve.edge_dual_to(e) else { continue };
        let Some((se, _)) = c.skeleton.edge_steps[ce] else { continue };
        let Some(&(x, y)) = cuts.iter().find(|&&(x, y)| x == se || y == se) else { continue };
        let other = if x == se { y } else { x };
        return Ok(CutWitness {
            interior: LatticePoint::new(a.0, a.1),
            short_edge: se,
            long_edge: other,
            short_length: c.graph.edges[se].length,
            long_length: c.graph.edges[other].length,
        });
    }
    Err(Error::Internal("no inner diagonal dual to a cut edge".into()))
}

/// Checks that the skeleton of a smooth quartic is not hyperelliptic.
pub fn verify_nonhyperelliptic(c: &SkeletalCurve) -> Result<bool> {
    let v = decide(&c.graph)?;
    if v.hyperelliptic {
        return Err(Error::TheoremViolation(format!(
            "skeleton is hyperelliptic ({:?})",
            v.witness.map(|d| d.to_string())
        )));
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
