//! Stable intersection of two plane tropical curves, and the connected
//! components of their set-theoretic intersection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::geometry::{det, intersect, parallel, Dir, Meet, Piece, PlanePoint};
use super::TropicalCurve;
use crate::error::{Error, Result};
use crate::Q;

/// Candidate translation directions for the perturbed curve; the first one
/// not parallel to any piece of either curve is used.
pub const PERTURBATIONS: [Dir; 6] = [(19, 7), (-13, 11), (23, -17), (29, 31), (-37, 41), (43, -5)];

/// Stable intersection points with multiplicities, sorted by point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionDivisor {
    pub points: Vec<(PlanePoint, u32)>,
}

impl IntersectionDivisor {
    pub fn degree(&self) -> u32 {
        self.points.iter().map(|(_, m)| m).sum()
    }
}

fn generic_direction(pieces: &[(Piece, u32)]) -> Result<Dir> {
    PERTURBATIONS
        .iter()
        .copied()
        .find(|&v| pieces.iter().all(|(p, _)| !parallel(v, p.dir)))
        .ok_or_else(|| Error::Internal("no generic perturbation direction".into()))
}

/// `x = x0 + x1 * eps` compared lexicographically.
type Perturbed = (Q, Q);

fn lex_pos(v: Perturbed) -> bool {
    v.0 > Q::from_integer(0) || (v.0 == Q::from_integer(0) && v.1 > Q::from_integer(0))
}

fn lex_below(v: Perturbed, bound: Option<Q>) -> bool {
    match bound {
        None => true,
        Some(l) => v.0 < l || (v.0 == l && v.1 < Q::from_integer(0)),
    }
}

/// Stable intersection, translating `b` by `eps * dir` and letting `eps -> 0+`.
pub fn stable_intersection_with(
    a: &TropicalCurve,
    b: &TropicalCurve,
    dir: Dir,
) -> Result<IntersectionDivisor> {
    let pa = a.pieces();
    let pb = b.pieces();
    if pa.iter().chain(&pb).any(|(p, _)| parallel(dir, p.dir)) {
        return Err(Error::Degenerate(format!(
            "perturbation ({}, {}) is parallel to a curve piece",
            dir.0, dir.1
        )));
    }
    let mut acc: BTreeMap<PlanePoint, u32> = BTreeMap::new();
    for (x, wx) in &pa {
        for (y, wy) in &pb {
            let dd = det(x.dir, y.dir);
            if dd == 0 {
                // parallel pieces separate under a non-parallel shift
                continue;
            }
            // x.start + s x.dir = y.start + eps dir + t y.dir
            let w = (y.start.x - x.start.x, y.start.y - x.start.y);
            let s0 = (w.0 * y.dir.1 - w.1 * y.dir.0) / dd;
            let t0 = (w.0 * x.dir.1 - w.1 * x.dir.0) / dd;
            let s1 = Q::from_integer(det(dir, y.dir)) / dd;
            let t1 = Q::from_integer(det(dir, x.dir)) / dd;
            if lex_pos((s0, s1))
                && lex_below((s0, s1), x.len)
                && lex_pos((t0, t1))
                && lex_below((t0, t1), y.len)
            {
                *acc.entry(x.at(s0)).or_default() += wx * wy * dd.unsigned_abs() as u32;
            }
        }
    }
    Ok(IntersectionDivisor {
        points: acc.into_iter().collect(),
    })
}

pub fn stable_intersection(a: &TropicalCurve, b: &TropicalCurve) -> Result<IntersectionDivisor> {
    let mut all = a.pieces();
    all.extend(b.pieces());
    stable_intersection_with(a, b, generic_direction(&all)?)
}

/// A connected component of the set-theoretic intersection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionComponent {
    /// Isolated points and overlap segments making up the component.
    pub points: Vec<PlanePoint>,
    pub segments: Vec<Piece>,
    /// Stable intersection points lying in this component.
    pub stable: Vec<(PlanePoint, u32)>,
    pub multiplicity: u32,
}

impl IntersectionComponent {
    pub fn contains(&self, p: PlanePoint) -> bool {
        self.points.contains(&p) || self.segments.iter().any(|s| s.contains(p))
    }

    pub fn is_bounded(&self) -> bool {
        self.segments.iter().all(|s| s.len.is_some())
    }

    /// Multiplicities of the stable points, largest first.
    pub fn profile(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.stable.iter().map(|(_, m)| *m).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

fn touches(a: &Meet, b: &Meet) -> bool {
    match (a, b) {
        (Meet::Point(p), Meet::Point(q)) => p == q,
        (Meet::Point(p), Meet::Overlap(s)) | (Meet::Overlap(s), Meet::Point(p)) => s.contains(*p),
        (Meet::Overlap(s), Meet::Overlap(t)) => intersect(s, t).is_some(),
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Connected components of `a ∩ b`, each with the stable intersection
/// points it carries. Components are ordered by their smallest point.
pub fn intersection_components(
    a: &TropicalCurve,
    b: &TropicalCurve,
) -> Result<Vec<IntersectionComponent>> {
    let stable = stable_intersection(a, b)?;
    let mut meets: Vec<Meet> = Vec::new();
    for (x, _) in a.pieces() {
        for (y, _) in b.pieces() {
            if let Some(m) = intersect(&x, &y) {
                meets.push(m);
            }
        }
    }
    let n = meets.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if touches(&meets[i], &meets[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut comps: Vec<IntersectionComponent> = groups
        .into_values()
        .map(|idx| {
            let mut points = Vec::new();
            let mut segments = Vec::new();
            for i in idx {
                match meets[i] {
                    Meet::Point(p) => points.push(p),
                    Meet::Overlap(s) => segments.push(s),
                }
            }
            points.sort();
            points.dedup();
            segments.sort();
            segments.dedup();
            // points already covered by a segment add nothing
            points.retain(|p| !segments.iter().any(|s| s.contains(*p)));
            IntersectionComponent {
                points,
                segments,
                stable: Vec::new(),
                multiplicity: 0,
            }
        })
        .collect();
    for &(p, m) in &stable.points {
        let c = comps
            .iter_mut()
            .find(|c| c.contains(p))
            .ok_or_else(|| Error::Internal(format!("stable point {p} outside the intersection")))?;
        c.stable.push((p, m));
        c.multiplicity += m;
    }
    let key = |c: &IntersectionComponent| {
        c.points
            .iter()
            .copied()
            .chain(c.segments.iter().map(|s| s.start))
            .min()
    };
    comps.sort_by_key(key);
    Ok(comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{enumerate_unimodular_triangulations, regular_heights, EnumerationConfig};
    use crate::tropcurve::{dual_curve, TropicalLine};

    fn line(x: i64, y: i64) -> TropicalCurve {
        TropicalLine::new(PlanePoint::int(x, y)).to_curve()
    }

    #[test]
    fn two_lines_meet_once() {
        let d = stable_intersection(&line(0, 0), &line(3, 1)).unwrap();
        assert_eq!(d.degree(), 1);
        assert_eq!(d.points, vec![(PlanePoint::int(1, 1), 1)]);
        // identical lines: stable intersection is the vertex
        let d = stable_intersection(&line(0, 0), &line(0, 0)).unwrap();
        assert_eq!(d.points, vec![(PlanePoint::int(0, 0), 1)]);
        // a shared ray is one component carrying the stable point
        let comps = intersection_components(&line(0, 0), &line(2, 0)).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].multiplicity, 1);
        assert!(!comps[0].is_bounded());
    }

    #[test]
    fn perturbation_independent_and_bezout() {
        let cfg = EnumerationConfig::default();
        let ts = enumerate_unimodular_triangulations(2, &cfg).unwrap();
        for t in &ts {
            let h = regular_heights(t).unwrap();
            let c = dual_curve(t, &h).unwrap();
            for l in [line(0, 0), line(1, 0), line(-1, 2), line(2, 2)] {
                let base = stable_intersection(&l, &c).unwrap();
                assert_eq!(base.degree(), 2);
                for dir in PERTURBATIONS {
                    if let Ok(o) = stable_intersection_with(&l, &c, dir) {
                        assert_eq!(o, base);
                    }
                }
                let comps = intersection_components(&l, &c).unwrap();
                assert_eq!(comps.iter().map(|c| c.multiplicity).sum::<u32>(), 2);
            }
        }
    }

    #[test]
    fn parallel_perturbation_rejected() {
        assert!(matches!(
            stable_intersection_with(&line(0, 0), &line(1, 0), (1, 1)),
            Err(Error::Degenerate(_))
        ));
    }
}
