//! Embedded tropical plane curves dual to lifted triangulations.
//!
//! Convention: min-plus with `F(x) = min_p h(p) - <p, x>`. The curve is the
//! corner locus of `F`; with this sign the unbounded rays of a degree-`d`
//! curve point in the directions `(-1,0)`, `(0,-1)` and `(1,1)`, and the
//! regular subdivision dual to the curve is the lower hull of the lift.

pub mod geometry;
mod lines;
mod stable;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    induces, HeightFunction, LatticeEdge, LatticeTriangle, Triangulation,
};
use crate::rational::{qi, serde_q, Q};

pub use geometry::{Dir, Piece, PlanePoint};
pub use lines::{tropical_lines_through, LinesThrough, TropicalLine, VertexInterval};
pub use stable::{
    intersection_components, stable_intersection, stable_intersection_with, IntersectionComponent,
    IntersectionDivisor, PERTURBATIONS,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveVertex {
    pub pos: PlanePoint,
    pub dual: LatticeTriangle,
}

/// A bounded edge from `ends.0` to `ends.1` along the primitive `direction`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedEdge {
    pub ends: (usize, usize),
    pub dual: LatticeEdge,
    pub weight: u32,
    pub direction: Dir,
    #[serde(with = "serde_q")]
    pub lattice_length: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    pub vertex: usize,
    pub direction: Dir,
    pub weight: u32,
    pub dual: LatticeEdge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropicalCurve {
    pub degree: u32,
    pub vertices: Vec<CurveVertex>,
    pub edges: Vec<BoundedEdge>,
    pub rays: Vec<Ray>,
}

/// Where a point sits on a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveLocation {
    Vertex(usize),
    /// Interior of a bounded edge, at lattice distance `t` from `ends.0`.
    Edge { edge: usize, t: Q },
    /// Interior of a ray, at lattice distance `t` from its vertex.
    Ray { ray: usize, t: Q },
}

/// Outward ray direction dual to a boundary lattice edge.
pub fn ray_direction(e: &LatticeEdge, d: i64) -> Dir {
    let (a, b) = (e.0, e.1);
    if a.y == 0 && b.y == 0 {
        (0, -1)
    } else if a.x == 0 && b.x == 0 {
        (-1, 0)
    } else {
        debug_assert!(a.x + a.y == d && b.x + b.y == d);
        (1, 1)
    }
}

/// The tropical curve dual to `t` under the lift `h`.
pub fn dual_curve(t: &Triangulation, h: &HeightFunction) -> Result<TropicalCurve> {
    if !induces(h, t) {
        return Err(Error::InconsistentLift(
            "some interior edge is not strictly convex under the heights".into(),
        ));
    }
    let d = t.d();
    let vertices: Vec<CurveVertex> = t
        .triangles
        .iter()
        .map(|tri| {
            let [a, b, c] = tri.vertices;
            // (b-a).x = h(b)-h(a), (c-a).x = h(c)-h(a); determinant is 1
            let (u, v) = (b.sub(a), c.sub(a));
            let (r1, r2) = (h.get(b) - h.get(a), h.get(c) - h.get(a));
            let den = qi(u.0 * v.1 - u.1 * v.0);
            let x = (r1 * v.1 - r2 * u.1) / den;
            let y = (r2 * u.0 - r1 * v.0) / den;
            CurveVertex {
                pos: PlanePoint::new(x, y),
                dual: *tri,
            }
        })
        .collect();
    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for (e, ts) in t.edges() {
        if e.is_boundary(d) {
            rays.push(Ray {
                vertex: ts[0],
                direction: ray_direction(&e, d),
                weight: 1,
                dual: e,
            });
        } else {
            let (i, j) = (ts[0], ts[1]);
            let (dir, len) = geometry::split_vector(vertices[i].pos, vertices[j].pos)
                .ok_or_else(|| Error::Internal(format!("edge dual to {e:?} has length 0")))?;
            edges.push(BoundedEdge {
                ends: (i, j),
                dual: e,
                weight: 1,
                direction: dir,
                lattice_length: len,
            });
        }
    }
    Ok(TropicalCurve {
        degree: t.degree,
        vertices,
        edges,
        rays,
    })
}

impl TropicalCurve {
    /// Outgoing `(direction, weight)` pairs at each vertex.
    pub fn stars(&self) -> Vec<Vec<(Dir, u32)>> {
        let mut star = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            star[e.ends.0].push((e.direction, e.weight));
            star[e.ends.1].push(((-e.direction.0, -e.direction.1), e.weight));
        }
        for r in &self.rays {
            star[r.vertex].push((r.direction, r.weight));
        }
        star
    }

    /// Trivalent, all weights one, `d` rays in each standard direction.
    pub fn is_smooth(&self) -> bool {
        let d = self.degree as usize;
        let count = |dir: Dir| self.rays.iter().filter(|r| r.direction == dir).count();
        self.stars().iter().all(|s| s.len() == 3)
            && self.edges.iter().all(|e| e.weight == 1)
            && self.rays.iter().all(|r| r.weight == 1)
            && count((-1, 0)) == d
            && count((0, -1)) == d
            && count((1, 1)) == d
            && self.rays.len() == 3 * d
    }

    /// All edges and rays as weighted pieces: bounded edges first, then rays.
    pub fn pieces(&self) -> Vec<(Piece, u32)> {
        let mut out: Vec<(Piece, u32)> = self
            .edges
            .iter()
            .map(|e| {
                (
                    Piece {
                        start: self.vertices[e.ends.0].pos,
                        dir: e.direction,
                        len: Some(e.lattice_length),
                    },
                    e.weight,
                )
            })
            .collect();
        out.extend(
            self.rays
                .iter()
                .map(|r| (Piece::ray(self.vertices[r.vertex].pos, r.direction), r.weight)),
        );
        out
    }

    pub fn locate(&self, p: PlanePoint) -> Option<CurveLocation> {
        if let Some(v) = self.vertices.iter().position(|v| v.pos == p) {
            return Some(CurveLocation::Vertex(v));
        }
        let ne = self.edges.len();
        for (i, (piece, _)) in self.pieces().iter().enumerate() {
            if let Some(t) = piece.param_of(p) {
                return Some(if i < ne {
                    CurveLocation::Edge { edge: i, t }
                } else {
                    CurveLocation::Ray { ray: i - ne, t }
                });
            }
        }
        None
    }

    pub fn edge_dual_to(&self, e: LatticeEdge) -> Option<usize> {
        self.edges.iter().position(|x| x.dual == e)
    }
}

/// A stable-intersection divisor as a divisor on the skeleton; points off
/// the skeleton retract along the trees and rays carrying them.
pub fn push_to_metric(
    c: &crate::metricgraph::SkeletalCurve,
    div: &IntersectionDivisor,
) -> Result<crate::divisor::Divisor> {
    let mut d = crate::divisor::Divisor::zero(c.graph.clone());
    for &(p, m) in &div.points {
        d.add(c.retract_point(p)?, m as i64);
    }
    Ok(d)
}

/// Weighted primitive directions sum to zero at every vertex.
pub fn check_balancing(c: &TropicalCurve) -> bool {
    c.stars().iter().all(|s| {
        let (sx, sy) = s.iter().fold((0i64, 0i64), |(x, y), (d, w)| {
            (x + d.0 * *w as i64, y + d.1 * *w as i64)
        });
        sx == 0 && sy == 0
    })
}
