use serde::{Deserialize, Serialize};

use super::geometry::{intersect, Meet, Piece, PlanePoint};
use super::{BoundedEdge, CurveVertex, Dir, Ray, TropicalCurve};
use crate::error::{Error, Result};
use crate::lattice::{LatticeEdge, LatticePoint, LatticeTriangle};

/// Ray directions of a tropical line.
pub const LINE_RAYS: [Dir; 3] = [(-1, 0), (0, -1), (1, 1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TropicalLine {
    pub vertex: PlanePoint,
}

impl TropicalLine {
    pub fn new(vertex: PlanePoint) -> Self {
        Self { vertex }
    }

    pub fn rays(&self) -> [Piece; 3] {
        LINE_RAYS.map(|d| Piece::ray(self.vertex, d))
    }

    pub fn contains(&self, p: PlanePoint) -> bool {
        self.rays().iter().any(|r| r.contains(p))
    }

    /// The line as a smooth degree-1 curve.
    pub fn to_curve(&self) -> TropicalCurve {
        let o = LatticePoint::new(0, 0);
        let ex = LatticePoint::new(1, 0);
        let ey = LatticePoint::new(0, 1);
        TropicalCurve {
            degree: 1,
            vertices: vec![CurveVertex {
                pos: self.vertex,
                dual: LatticeTriangle::new(o, ex, ey).unwrap(),
            }],
            edges: Vec::<BoundedEdge>::new(),
            rays: vec![
                Ray {
                    vertex: 0,
                    direction: (-1, 0),
                    weight: 1,
                    dual: LatticeEdge::new(o, ey),
                },
                Ray {
                    vertex: 0,
                    direction: (0, -1),
                    weight: 1,
                    dual: LatticeEdge::new(o, ex),
                },
                Ray {
                    vertex: 0,
                    direction: (1, 1),
                    weight: 1,
                    dual: LatticeEdge::new(ex, ey),
                },
            ],
        }
    }
}

/// A closed interval of line-vertex positions `start + t * direction`,
/// `t in [0, length]` (unbounded when `length` is `None`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexInterval {
    pub start: PlanePoint,
    pub direction: Dir,
    #[serde(with = "crate::rational::serde_opt_q")]
    pub length: Option<crate::Q>,
}

impl VertexInterval {
    pub fn from_piece(p: &Piece) -> Self {
        Self {
            start: p.start,
            direction: p.dir,
            length: p.len,
        }
    }

    pub fn piece(&self) -> Piece {
        Piece {
            start: self.start,
            dir: self.direction,
            len: self.length,
        }
    }

    pub fn end(&self) -> Option<PlanePoint> {
        self.piece().end()
    }

    /// Lexicographically smallest endpoint.
    pub fn canonical_vertex(&self) -> PlanePoint {
        match self.end() {
            Some(e) if e < self.start => e,
            _ => self.start,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinesThrough {
    Unique(TropicalLine),
    Family(VertexInterval),
}

impl LinesThrough {
    pub fn representative(&self) -> TropicalLine {
        match self {
            LinesThrough::Unique(l) => *l,
            LinesThrough::Family(f) => TropicalLine::new(f.canonical_vertex()),
        }
    }
}

/// Possible vertex positions of lines through `p`: the reflected line with
/// rays `(1,0)`, `(0,1)`, `(-1,-1)` from `p`.
fn vertex_locus(p: PlanePoint) -> [Piece; 3] {
    LINE_RAYS.map(|d| Piece::ray(p, (-d.0, -d.1)))
}

/// Tropical lines through two distinct points.
///
/// The vertex of such a line lies on both reflected loci; their intersection
/// is a single point, or a segment/ray when `p - q` is parallel to a ray
/// direction of the line.
pub fn tropical_lines_through(p: PlanePoint, q: PlanePoint) -> Result<LinesThrough> {
    if p == q {
        return Err(Error::Degenerate(format!(
            "lines through the single point {p} form a two-parameter family"
        )));
    }
    let mut points = Vec::new();
    let mut overlaps = Vec::new();
    for a in vertex_locus(p) {
        for b in vertex_locus(q) {
            match intersect(&a, &b) {
                Some(Meet::Point(x)) => points.push(x),
                Some(Meet::Overlap(o)) => overlaps.push(o),
                None => {}
            }
        }
    }
    match overlaps.as_slice() {
        [] => {
            points.sort();
            points.dedup();
            match points.as_slice() {
                [v] => Ok(LinesThrough::Unique(TropicalLine::new(*v))),
                _ => Err(Error::Internal(format!(
                    "lines through {p} and {q}: {} isolated vertices",
                    points.len()
                ))),
            }
        }
        [o] => {
            if points.iter().any(|x| !o.contains(*x)) {
                return Err(Error::Internal(format!(
                    "lines through {p} and {q}: disconnected vertex locus"
                )));
            }
            Ok(LinesThrough::Family(VertexInterval::from_piece(o)))
        }
        _ => Err(Error::Internal(format!(
            "lines through {p} and {q}: several overlapping loci"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> PlanePoint {
        PlanePoint::int(x, y)
    }

    /// Exhaustive ray-pair case analysis: for each assignment of p and q to
    /// rays of the line, solve for the vertex directly.
    fn oracle(p: PlanePoint, q: PlanePoint) -> Vec<PlanePoint> {
        let mut out = Vec::new();
        // candidate vertex coordinates come from the coordinates of p and q
        // and the diagonal offsets between them
        let xs = [p.x, q.x, p.x - p.y + q.y, q.x - q.y + p.y];
        let ys = [p.y, q.y, p.y - p.x + q.x, q.y - q.x + p.x];
        for &x in &xs {
            for &y in &ys {
                let l = TropicalLine::new(PlanePoint::new(x, y));
                if l.contains(p) && l.contains(q) {
                    out.push(l.vertex);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn unique_line() {
        let r = tropical_lines_through(pt(0, 0), pt(2, 1)).unwrap();
        assert_eq!(r, LinesThrough::Unique(TropicalLine::new(pt(1, 0))));
        assert_eq!(oracle(pt(0, 0), pt(2, 1)), vec![pt(1, 0)]);
        for (p, q) in [((0, 0), (-1, 3)), ((2, 5), (-3, 1)), ((0, 0), (3, -2))] {
            let (p, q) = (pt(p.0, p.1), pt(q.0, q.1));
            let LinesThrough::Unique(l) = tropical_lines_through(p, q).unwrap() else {
                panic!("expected a unique line");
            };
            assert_eq!(oracle(p, q), vec![l.vertex]);
            assert!(l.contains(p) && l.contains(q));
        }
    }

    #[test]
    fn families() {
        match tropical_lines_through(pt(0, 0), pt(1, 1)).unwrap() {
            LinesThrough::Family(f) => {
                assert_eq!(f.start, pt(0, 0));
                assert_eq!(f.direction, (-1, -1));
                assert_eq!(f.length, None);
            }
            other => panic!("{other:?}"),
        }
        match tropical_lines_through(pt(0, 0), pt(0, -3)).unwrap() {
            LinesThrough::Family(f) => {
                for t in [0, 1, 5] {
                    let v = f.piece().at(crate::rational::qi(t));
                    let l = TropicalLine::new(v);
                    assert!(l.contains(pt(0, 0)) && l.contains(pt(0, -3)));
                }
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            tropical_lines_through(pt(1, 1), pt(1, 1)),
            Err(Error::Degenerate(_))
        ));
    }
}
