//! One bitangent line per effective theta characteristic.

use serde::{Deserialize, Serialize};

use super::{tangency_with_hints, Arrangement, BitangentClass, BitangentLine, ThetaSet};
use crate::error::{Error, Result};
use crate::lattice::{LatticeEdge, LatticePoint};
use crate::metricgraph::{GraphPoint, SkeletalCurve};
use crate::theta::{on_closed_bridge, ThetaCategory};
use crate::tropcurve::geometry::{parallel, primitive};
use crate::tropcurve::{
    tropical_lines_through, Dir, LinesThrough, Piece, PlanePoint, TropicalLine, VertexInterval,
};
use crate::Q;

/// How the representative line was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Line through the two embedded chips.
    ThroughPoints,
    /// Vertex on the locus of a fixed chip, a ray tangent to a bridge.
    BridgeRay,
    /// Vertex where a slope line through an edge midpoint leaves the cycle.
    SlopeLine,
    /// Sweep over the critical arrangement.
    Search,
}

struct Ctx<'a> {
    c: &'a SkeletalCurve,
    set: &'a ThetaSet,
    arr: &'a Arrangement,
    /// Embedded theta chips, per theta.
    hints: Vec<Vec<PlanePoint>>,
}

impl<'a> Ctx<'a> {
    fn new(c: &'a SkeletalCurve, set: &'a ThetaSet, arr: &'a Arrangement) -> Self {
        let hints = set
            .thetas
            .iter()
            .map(|t| t.divisor.support().iter().map(|p| c.embed(p)).collect())
            .collect();
        Self { c, set, arr, hints }
    }

    fn line_in_class(&self, v: PlanePoint, theta: usize, method: Method) -> Result<Option<BitangentLine>> {
        let line = TropicalLine::new(v);
        let Some(t) = tangency_with_hints(&line, self.c, &self.hints[theta], Some(self.set))? else {
            return Ok(None);
        };
        let mut hit = None;
        for h in t.halvings {
            if self.set.class_of(&h)? == Some(theta) {
                hit = Some(h);
                break;
            }
        }
        let Some(tangency) = hit else {
            return Ok(None);
        };
        Ok(Some(BitangentLine {
            line,
            profile: t.profile,
            tangency,
            theta,
            method,
        }))
    }

    fn first(&self, cands: impl IntoIterator<Item = PlanePoint>, theta: usize, m: Method) -> Result<Option<BitangentLine>> {
        for v in cands {
            if let Some(b) = self.line_in_class(v, theta, m)? {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }

    fn piece_samples(&self, p: &Piece) -> Vec<PlanePoint> {
        self.arr.samples(p).into_iter().map(|t| p.at(t)).collect()
    }

    /// Vertices of lines through `p`.
    fn locus_samples(&self, p: PlanePoint) -> Vec<PlanePoint> {
        let mut out = vec![p];
        for d in [(1, 0), (0, 1), (-1, -1)] {
            out.extend(self.piece_samples(&Piece::ray(p, d)));
        }
        out
    }

    fn through_points(&self, p: PlanePoint, q: PlanePoint) -> Result<Vec<PlanePoint>> {
        if p == q {
            return Ok(self.locus_samples(p));
        }
        Ok(match tropical_lines_through(p, q)? {
            LinesThrough::Unique(l) => vec![l.vertex],
            LinesThrough::Family(f) => self.piece_samples(&f.piece()),
        })
    }

    fn bounding_box(&self) -> (PlanePoint, PlanePoint) {
        let vs = &self.c.curve.vertices;
        let mut lo = vs[0].pos;
        let mut hi = vs[0].pos;
        for v in vs {
            lo = PlanePoint::new(lo.x.min(v.pos.x), lo.y.min(v.pos.y));
            hi = PlanePoint::new(hi.x.max(v.pos.x), hi.y.max(v.pos.y));
        }
        let one = Q::from_integer(1);
        (
            PlanePoint::new(lo.x - one, lo.y - one),
            PlanePoint::new(hi.x + one, hi.y + one),
        )
    }

    fn search(&self, theta: usize) -> Result<Option<BitangentLine>> {
        let (lo, hi) = self.bounding_box();
        let verts = self.arr.vertices_within(lo, hi);
        if let Some(b) = self.first(verts.iter().copied(), theta, Method::Search)? {
            return Ok(Some(b));
        }
        // open edges of the arrangement
        for &v in &verts {
            for d in [(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)] {
                let cands = self.piece_samples(&Piece::ray(v, d));
                if let Some(b) = self.first(cands, theta, Method::Search)? {
                    return Ok(Some(b));
                }
            }
        }
        Ok(None)
    }

    /// The slope line of the two-cycle case: through the midpoint of the
    /// edge dual to an inner diagonal, vertex where it leaves the cycle.
    fn slope_line(&self) -> Vec<PlanePoint> {
        let curve = &self.c.curve;
        let variants: [(Dir, Dir, Dir); 3] = [
            ((1, 1), (2, 2), (1, 1)),
            ((2, 1), (0, 2), (-1, 0)),
            ((1, 2), (2, 0), (0, -1)),
        ];
        let pieces = curve.pieces();
        let mut out = Vec::new();
        for (a, b, r) in variants {
            let e = LatticeEdge::new(LatticePoint::new(a.0, a.1), LatticePoint::new(b.0, b.1));
            let Some(ei) = curve.edge_dual_to(e) else { continue };
            let edge = &curve.edges[ei];
            let m = curve.vertices[edge.ends.0].pos.midpoint(curve.vertices[edge.ends.1].pos);
            let back = Piece::ray(m, (-r.0, -r.1));
            let mut hits: Vec<(Q, PlanePoint)> = Vec::new();
            for (p, _) in &pieces {
                if parallel(p.dir, back.dir) {
                    continue;
                }
                if let Some(crate::tropcurve::geometry::Meet::Point(x)) = crate::tropcurve::geometry::intersect(&back, p) {
                    if x != m {
                        hits.push((back.param_of(x).expect("on ray"), x));
                    }
                }
            }
            hits.sort();
            out.extend(hits.into_iter().map(|(_, x)| x));
        }
        out
    }
}

/// A bitangent line whose tangency divisor is equivalent to theta `theta`.
pub fn bitangent_from_theta(c: &SkeletalCurve, set: &ThetaSet, theta: usize, arr: &Arrangement) -> Result<BitangentLine> {
    let ctx = Ctx::new(c, set, arr);
    let t = &set.thetas[theta];
    let chips = t.divisor.points();
    if chips.len() != 2 {
        return Err(Error::InvalidFlow(format!("theta divisor of degree {}", chips.len())));
    }
    let (p, q) = (c.embed(&chips[0]), c.embed(&chips[1]));
    let found = match t.category {
        Some(ThetaCategory::Rigid) | None => ctx.first(ctx.through_points(p, q)?, theta, Method::ThroughPoints)?,
        Some(ThetaCategory::Flexible) => {
            let bridges = c.graph.bridges();
            let fixed: Vec<&GraphPoint> = chips.iter().filter(|x| !on_closed_bridge(&c.graph, x, &bridges)).collect();
            let mut cands = Vec::new();
            for x in fixed {
                cands.extend(ctx.locus_samples(c.embed(x)));
            }
            ctx.first(cands, theta, Method::BridgeRay)?
        }
        Some(ThetaCategory::Tandem) => ctx.first(ctx.slope_line(), theta, Method::SlopeLine)?,
    };
    let found = match found {
        Some(b) => Some(b),
        None => {
            // loci of both chips, then the whole arrangement
            let mut cands = ctx.locus_samples(p);
            cands.extend(ctx.locus_samples(q));
            match ctx.first(cands, theta, Method::Search)? {
                Some(b) => Some(b),
                None => ctx.search(theta)?,
            }
        }
    };
    found.ok_or_else(|| Error::TheoremViolation(format!("no bitangent line found for theta {theta} ({})", t.divisor)))
}

fn probe_directions(c: &SkeletalCurve) -> Vec<Dir> {
    let mut ds: Vec<Dir> = vec![(1, 0), (0, 1), (1, 1)];
    for e in &c.curve.edges {
        ds.push(primitive(e.direction));
    }
    let mut out: Vec<Dir> = Vec::new();
    for d in ds {
        for s in [d, (-d.0, -d.1)] {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// Longest segment of same-class bitangent vertices through `b`'s vertex
/// along one of the probe directions, if any.
fn family_through(c: &SkeletalCurve, set: &ThetaSet, arr: &Arrangement, b: &BitangentLine) -> Result<Option<VertexInterval>> {
    let ctx = Ctx::new(c, set, arr);
    let v = b.line.vertex;
    let ok = |x: PlanePoint| -> Result<bool> { Ok(ctx.line_in_class(x, b.theta, b.method)?.is_some()) };
    let mut best: Option<(Option<Q>, VertexInterval)> = None;
    for d in probe_directions(c) {
        let Some(f) = arr.run_from_start(&Piece::ray(v, d), ok)? .map_or(Some(None), |t| (t > Q::from_integer(0)).then_some(Some(t))) else {
            continue;
        };
        let back = arr.run_from_start(&Piece::ray(v, (-d.0, -d.1)), ok)?;
        let iv = match (back, f) {
            (Some(a), Some(f)) => VertexInterval {
                start: v.offset(d, -a),
                direction: d,
                length: Some(a + f),
            },
            (Some(a), None) => VertexInterval {
                start: v.offset(d, -a),
                direction: d,
                length: None,
            },
            (None, Some(f)) => VertexInterval {
                start: v.offset(d, f),
                direction: (-d.0, -d.1),
                length: None,
            },
            (None, None) => VertexInterval {
                start: v,
                direction: d,
                length: None,
            },
        };
        let better = match &best {
            None => true,
            Some((l, _)) => match (l, iv.length) {
                (Some(_), None) => true,
                (Some(x), Some(y)) => y > *x,
                _ => false,
            },
        };
        if better {
            best = Some((iv.length, iv));
        }
    }
    Ok(best.map(|(_, iv)| iv))
}

/// The seven bitangent classes of a smooth tropical plane quartic.
pub fn bitangent_classes(c: &SkeletalCurve) -> Result<Vec<BitangentClass>> {
    let set = ThetaSet::new(c)?;
    if set.thetas.len() != 7 {
        return Err(Error::TheoremViolation(format!("{} effective theta characteristics", set.thetas.len())));
    }
    let arr = Arrangement::new(&c.curve);
    let mut out = Vec::with_capacity(7);
    for i in 0..set.thetas.len() {
        let b = bitangent_from_theta(c, &set, i, &arr)?;
        let family = family_through(c, &set, &arr, &b)?;
        let representative = match &family {
            Some(f) => {
                let v = f.canonical_vertex();
                let ctx = Ctx::new(c, &set, &arr);
                ctx.line_in_class(v, i, b.method)?
                    .ok_or_else(|| Error::Internal(format!("family endpoint {v} is not a bitangent")))?
            }
            None => b,
        };
        out.push(BitangentClass {
            representative,
            is_family: family.is_some(),
            family,
        });
    }
    Ok(out)
}
