//! Height lifts: regularity via exact LP, and the subdivision a height
//! function induces (projection of the lower convex hull).

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lp::{self, bq, BigQ, LpOutcome};
use super::{
    det, is_unimodular_triangulation, newton_points, point_index, LatticeEdge, LatticePoint,
    LatticeTriangle, Triangulation,
};
use crate::error::{Error, Result};
use crate::rational::{qi, serde_q_vec, Q};

/// Heights on the lattice points of the degree-`d` triangle, in
/// [`newton_points`] order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeightFunction {
    pub degree: u32,
    #[serde(with = "serde_q_vec")]
    pub heights: Vec<Q>,
}

impl HeightFunction {
    pub fn from_fn(degree: u32, f: impl Fn(LatticePoint) -> Q) -> Self {
        let heights = newton_points(degree as i64)
            .expect("degree >= 1")
            .into_iter()
            .map(f)
            .collect();
        Self { degree, heights }
    }

    pub fn zero(degree: u32) -> Self {
        Self::from_fn(degree, |_| Q::zero())
    }

    /// `x^2 + xy + y^2`, strictly convex.
    pub fn quadratic(degree: u32) -> Self {
        Self::from_fn(degree, |p| qi(p.x * p.x + p.x * p.y + p.y * p.y))
    }

    pub fn get(&self, p: LatticePoint) -> Q {
        self.heights[point_index(p, self.degree as i64)]
    }

    pub fn set(&mut self, p: LatticePoint, v: Q) {
        let i = point_index(p, self.degree as i64);
        self.heights[i] = v;
    }
}

/// Integer barycentric coordinates of `p` in the unimodular triangle `abc`.
fn barycentric(a: LatticePoint, b: LatticePoint, c: LatticePoint, p: LatticePoint) -> [i64; 3] {
    let den = det(a.sub(c), b.sub(c));
    debug_assert_eq!(den.abs(), 1);
    let l = det(p.sub(c), b.sub(c)) * den;
    let m = det(a.sub(c), p.sub(c)) * den;
    [l, m, 1 - l - m]
}

/// One fold inequality per interior edge: the apex across the edge must sit
/// strictly above the plane of the triangle on this side. Returned as
/// `(apex, [(point, coefficient); 3])` with the fold equal to
/// `h(apex) - sum coefficient * h(point)`.
pub(crate) fn fold_constraints(t: &Triangulation) -> Vec<(LatticePoint, [(LatticePoint, i64); 3])> {
    t.interior_edges()
        .into_iter()
        .map(|(LatticeEdge(a, b), t1, t2)| {
            let apex = |ti: usize| {
                *t.triangles[ti]
                    .vertices
                    .iter()
                    .find(|&&v| v != a && v != b)
                    .unwrap()
            };
            let (c, d) = (apex(t1), apex(t2));
            let [l, m, n] = barycentric(a, b, c, d);
            (d, [(a, l), (b, m), (c, n)])
        })
        .collect()
}

/// Fold of `h` across every interior edge of `t`, in [`Triangulation::interior_edges`] order.
pub fn edge_folds(t: &Triangulation, h: &HeightFunction) -> Vec<Q> {
    fold_constraints(t)
        .into_iter()
        .map(|(d, terms)| h.get(d) - terms.iter().map(|&(p, k)| h.get(p) * k).sum::<Q>())
        .collect()
}

/// True iff the regular subdivision of `h` is exactly `t`: every fold is
/// strictly positive, which for a triangulation using all lattice points is
/// local, hence global, strict convexity.
pub fn induces(h: &HeightFunction, t: &Triangulation) -> bool {
    h.degree == t.degree
        && is_unimodular_triangulation(t).ok
        && edge_folds(t, h).iter().all(|f| *f > Q::zero())
}

/// Integer heights whose regular subdivision is `t`.
///
/// Solves `minimize sum h` over `h >= 0` with every fold at least 1 (strict
/// positivity is scale-invariant, so a unit margin loses nothing), then clears
/// denominators. Bland's rule makes the vertex found deterministic.
pub fn regular_heights(t: &Triangulation) -> Result<HeightFunction> {
    let chk = is_unimodular_triangulation(t);
    if !chk.ok {
        return Err(Error::Degenerate(format!(
            "not a unimodular triangulation: {}",
            chk.diagnostic.unwrap_or_default()
        )));
    }
    let d = t.d();
    let npts = ((d + 1) * (d + 2) / 2) as usize;
    let cons = fold_constraints(t);
    let nvars = npts + cons.len();
    let mut a = Vec::with_capacity(cons.len());
    for (k, (apex, terms)) in cons.iter().enumerate() {
        let mut row = vec![BigQ::zero(); nvars];
        row[point_index(*apex, d)] += bq(1);
        for &(p, coef) in terms {
            row[point_index(p, d)] -= bq(coef);
        }
        row[npts + k] = bq(-1);
        a.push(row);
    }
    let b = vec![bq(1); cons.len()];
    let mut c = vec![bq(1); npts];
    c.extend(std::iter::repeat_n(bq(0), cons.len()));
    let x = match lp::minimize(&c, &a, &b) {
        LpOutcome::Optimal { x, .. } => x,
        LpOutcome::Infeasible => {
            return Err(Error::NonRegular(format!(
                "fold system infeasible for {} triangles",
                t.triangles.len()
            )))
        }
        LpOutcome::Unbounded => unreachable!("objective bounded below by 0"),
    };
    let lcm = x[..npts]
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let heights = x[..npts]
        .iter()
        .map(|v| {
            let n = (v * BigQ::from_integer(lcm.clone())).to_integer();
            qi(n.to_i64().expect("heights fit in i64"))
        })
        .collect();
    let h = HeightFunction {
        degree: t.degree,
        heights,
    };
    if !induces(&h, t) {
        return Err(Error::Internal("LP heights fail the fold check".into()));
    }
    Ok(h)
}

/// The subdivision induced by a height function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubdivision {
    /// Each cell as the sorted set of lattice points on its lower facet.
    pub cells: Vec<Vec<LatticePoint>>,
    /// Present iff every cell is a unimodular triangle.
    pub triangulation: Option<Triangulation>,
}

impl InducedSubdivision {
    pub fn is_unimodular_triangulation(&self) -> bool {
        self.triangulation.is_some()
    }
}

/// Projects the lower convex hull of `{(p, h(p))}`.
pub fn induced_subdivision(h: &HeightFunction, d: i64) -> Result<InducedSubdivision> {
    let pts = newton_points(d)?;
    if h.heights.len() != pts.len() {
        return Err(Error::Degenerate(format!(
            "height function has {} values, the degree-{d} triangle has {} points",
            h.heights.len(),
            pts.len()
        )));
    }
    let z: Vec<Q> = pts.iter().map(|&p| h.get(p)).collect();
    let n = pts.len();
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let den = det(pts[j].sub(pts[i]), pts[k].sub(pts[i]));
                if den == 0 {
                    continue;
                }
                // plane z = alpha x + beta y + gamma through the three lifts
                let (u, v) = (pts[j].sub(pts[i]), pts[k].sub(pts[i]));
                let (dz1, dz2) = (z[j] - z[i], z[k] - z[i]);
                let alpha = (dz1 * v.1 - dz2 * u.1) / den;
                let beta = (dz2 * u.0 - dz1 * v.0) / den;
                let at = |p: LatticePoint| z[i] + alpha * (p.x - pts[i].x) + beta * (p.y - pts[i].y);
                let mut on = Vec::new();
                let mut ok = true;
                for (m, &p) in pts.iter().enumerate() {
                    let plane = at(p);
                    if z[m] < plane {
                        ok = false;
                        break;
                    }
                    if z[m] == plane {
                        on.push(m);
                    }
                }
                if ok {
                    facets.insert(on);
                }
            }
        }
    }
    let cells: Vec<Vec<LatticePoint>> = facets
        .iter()
        .map(|f| f.iter().map(|&m| pts[m]).collect())
        .collect();
    let triangulation = if cells.iter().all(|c| c.len() == 3) {
        let tris: Vec<LatticeTriangle> = cells
            .iter()
            .map(|c| LatticeTriangle::new(c[0], c[1], c[2]))
            .collect::<Result<_>>()?;
        let t = Triangulation::new(d as u32, tris);
        is_unimodular_triangulation(&t).ok.then_some(t)
    } else {
        None
    };
    Ok(InducedSubdivision {
        cells,
        triangulation,
    })
}
