//! Lattice points, unimodular triangulations of the dilated standard triangle
//! and the S3 symmetry acting on them.

mod enumerate;
pub mod io;
pub mod lp;
mod regular;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::{enumerate_unimodular_triangulations, EnumerationConfig};
pub use regular::{
    edge_folds, induced_subdivision, induces, regular_heights, HeightFunction, InducedSubdivision,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    pub fn sub(self, o: Self) -> (i64, i64) {
        (self.x - o.x, self.y - o.y)
    }

    /// Inside the closed degree-`d` triangle.
    pub fn in_triangle(self, d: i64) -> bool {
        self.x >= 0 && self.y >= 0 && self.x + self.y <= d
    }

    pub fn is_interior(self, d: i64) -> bool {
        self.x > 0 && self.y > 0 && self.x + self.y < d
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

#[inline]
pub(crate) fn det(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Twice the signed area of `abc`.
#[inline]
pub fn signed_area2(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    det(b.sub(a), c.sub(a))
}

/// A lattice triangle with counterclockwise vertices, starting at the
/// lexicographically smallest one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeTriangle {
    pub vertices: [LatticePoint; 3],
}

impl LatticeTriangle {
    /// Normalizes orientation and rotation. Fails on collinear input.
    pub fn new(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> Result<Self> {
        let area = signed_area2(a, b, c);
        if area == 0 {
            return Err(Error::Degenerate(format!("collinear triangle {a} {b} {c}")));
        }
        let mut v = if area > 0 { [a, b, c] } else { [a, c, b] };
        let m = (0..3).min_by_key(|&i| v[i]).unwrap();
        v.rotate_left(m);
        Ok(Self { vertices: v })
    }

    pub fn area2(&self) -> i64 {
        let [a, b, c] = self.vertices;
        signed_area2(a, b, c)
    }

    pub fn is_unimodular(&self) -> bool {
        self.area2() == 1
    }

    /// Directed edges, each with the triangle on its left.
    pub fn edges(&self) -> [(LatticePoint, LatticePoint); 3] {
        let [a, b, c] = self.vertices;
        [(a, b), (b, c), (c, a)]
    }

    pub fn contains_vertex(&self, p: LatticePoint) -> bool {
        self.vertices.contains(&p)
    }

    /// Interiors intersect. Separating-axis test over the six edge normals.
    pub fn overlaps(&self, other: &LatticeTriangle) -> bool {
        for tri in [self, other] {
            for (a, b) in tri.edges() {
                let n = (-(b.y - a.y), b.x - a.x);
                let proj = |p: &LatticePoint| n.0 * p.x + n.1 * p.y;
                let (lo1, hi1) = min_max(self.vertices.iter().map(proj));
                let (lo2, hi2) = min_max(other.vertices.iter().map(proj));
                if hi1 <= lo2 || hi2 <= lo1 {
                    return false;
                }
            }
        }
        true
    }
}

fn min_max(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

impl fmt::Display for LatticeTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.vertices;
        write!(f, "{a} {b} {c}")
    }
}

/// An undirected lattice segment with endpoints in sorted order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeEdge(pub LatticePoint, pub LatticePoint);

impl LatticeEdge {
    pub fn new(a: LatticePoint, b: LatticePoint) -> Self {
        if a <= b {
            Self(a, b)
        } else {
            Self(b, a)
        }
    }

    /// On the boundary of the degree-`d` triangle.
    pub fn is_boundary(&self, d: i64) -> bool {
        let (a, b) = (self.0, self.1);
        (a.y == 0 && b.y == 0) || (a.x == 0 && b.x == 0) || (a.x + a.y == d && b.x + b.y == d)
    }
}

/// A set of lattice triangles in the degree-`d` triangle, kept sorted so
/// equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangulation {
    pub degree: u32,
    pub triangles: Vec<LatticeTriangle>,
}

impl Triangulation {
    pub fn new(degree: u32, mut triangles: Vec<LatticeTriangle>) -> Self {
        triangles.sort();
        triangles.dedup();
        Self { degree, triangles }
    }

    pub fn d(&self) -> i64 {
        self.degree as i64
    }

    /// Every edge with the indices of the triangles bordering it.
    pub fn edges(&self) -> BTreeMap<LatticeEdge, Vec<usize>> {
        let mut map: BTreeMap<LatticeEdge, Vec<usize>> = BTreeMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            for (a, b) in t.edges() {
                map.entry(LatticeEdge::new(a, b)).or_default().push(i);
            }
        }
        map
    }

    pub fn interior_edges(&self) -> Vec<(LatticeEdge, usize, usize)> {
        let d = self.d();
        self.edges()
            .into_iter()
            .filter(|(e, ts)| !e.is_boundary(d) && ts.len() == 2)
            .map(|(e, ts)| (e, ts[0], ts[1]))
            .collect()
    }

    pub fn has_edge(&self, a: LatticePoint, b: LatticePoint) -> bool {
        let e = LatticeEdge::new(a, b);
        self.triangles
            .iter()
            .any(|t| t.edges().iter().any(|&(p, q)| LatticeEdge::new(p, q) == e))
    }

    pub fn apply(&self, g: SymmetryElement) -> Triangulation {
        let d = self.d();
        let tris = self
            .triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.vertices;
                LatticeTriangle::new(g.apply(a, d), g.apply(b, d), g.apply(c, d))
                    .expect("symmetries preserve non-degeneracy")
            })
            .collect();
        Triangulation::new(self.degree, tris)
    }

    /// Lexicographically minimal image under the S3 action.
    pub fn canonical_form(&self) -> Triangulation {
        SymmetryElement::all()
            .into_iter()
            .map(|g| self.apply(g))
            .min()
            .unwrap()
    }
}

/// Result of [`is_unimodular_triangulation`]: the verdict plus, when it is
/// negative, the first problem found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularCheck {
    pub ok: bool,
    pub diagnostic: Option<String>,
}

impl UnimodularCheck {
    fn fail(msg: String) -> Self {
        Self {
            ok: false,
            diagnostic: Some(msg),
        }
    }
}

/// Tiles the degree-`d` triangle with exactly `d^2` area-1/2 triangles.
pub fn is_unimodular_triangulation(t: &Triangulation) -> UnimodularCheck {
    let d = t.d();
    if d < 1 {
        return UnimodularCheck::fail(format!("invalid degree {d}"));
    }
    for tri in &t.triangles {
        if let Some(p) = tri.vertices.iter().find(|p| !p.in_triangle(d)) {
            return UnimodularCheck::fail(format!("vertex {p} outside the degree-{d} triangle"));
        }
        if !tri.is_unimodular() {
            return UnimodularCheck::fail(format!("triangle {tri} has area {}/2", tri.area2()));
        }
    }
    if t.triangles.len() as i64 != d * d {
        return UnimodularCheck::fail(format!(
            "{} triangles, expected {}",
            t.triangles.len(),
            d * d
        ));
    }
    for (i, a) in t.triangles.iter().enumerate() {
        for b in &t.triangles[i + 1..] {
            if a.overlaps(b) {
                return UnimodularCheck::fail(format!("triangles {a} and {b} overlap"));
            }
        }
    }
    // Area d^2/2 with disjoint interiors inside the big triangle is a tiling.
    UnimodularCheck { ok: true, diagnostic: None }
}

/// All lattice points of the degree-`d` triangle, ordered by `y` then `x`.
pub fn newton_points(d: i64) -> Result<Vec<LatticePoint>> {
    if d < 1 {
        return Err(Error::InvalidDegree(d));
    }
    Ok((0..=d)
        .flat_map(|y| (0..=d - y).map(move |x| LatticePoint::new(x, y)))
        .collect())
}

/// Position of `p` in the [`newton_points`] order.
pub fn point_index(p: LatticePoint, d: i64) -> usize {
    // rows 0..y contribute (d+1) + d + ... + (d-y+2) points
    let y = p.y;
    (y * (d + 1) - y * (y - 1) / 2 + p.x) as usize
}

/// One of the six affine lattice automorphisms of the degree-`d` triangle,
/// acting as a permutation of barycentric coordinates `(d-x-y, x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymmetryElement {
    pub perm: [usize; 3],
}

impl SymmetryElement {
    pub const IDENTITY: Self = Self { perm: [0, 1, 2] };

    pub fn all() -> [Self; 6] {
        [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
        .map(|perm| Self { perm })
    }

    pub fn apply(self, p: LatticePoint, d: i64) -> LatticePoint {
        let bary = [d - p.x - p.y, p.x, p.y];
        LatticePoint::new(bary[self.perm[1]], bary[self.perm[2]])
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0; 3];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        Self { perm: inv }
    }

    /// The linear part `A` of `p -> A p + b`.
    pub fn linear_part(self) -> [[i64; 2]; 2] {
        let col = |k: usize| -> (i64, i64) {
            // image of e_x, e_y as difference vectors
            let o = self.apply(LatticePoint::new(0, 0), 1);
            let e = if k == 0 {
                self.apply(LatticePoint::new(1, 0), 1)
            } else {
                self.apply(LatticePoint::new(0, 1), 1)
            };
            e.sub(o)
        };
        let (c0, c1) = (col(0), col(1));
        [[c0.0, c1.0], [c0.1, c1.1]]
    }
}

/// An S3-orbit of triangulations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: Triangulation,
    /// Indices into the input list.
    pub members: Vec<usize>,
}

/// Partitions `ts` into S3-orbits, ordered by canonical representative.
pub fn s3_orbits(ts: &[Triangulation]) -> Vec<Orbit> {
    let mut by_rep: BTreeMap<Triangulation, Vec<usize>> = BTreeMap::new();
    for (i, t) in ts.iter().enumerate() {
        by_rep.entry(t.canonical_form()).or_default().push(i);
    }
    by_rep
        .into_iter()
        .map(|(representative, members)| Orbit {
            representative,
            members,
        })
        .collect()
}
