//! Sampled checks: Riemann–Roch on random divisors and canonicity of line
//! sections.

use std::sync::Arc;

use rand::Rng;

use crate::divisor::{canonical_divisor, linearly_equivalent, rank, riemann_roch_residual, Divisor};
use crate::error::Result;
use crate::metricgraph::{GraphPoint, MetricGraph, SkeletalCurve};
use crate::tropcurve::{push_to_metric, stable_intersection, PlanePoint, TropicalLine};
use crate::Q;

pub fn random_point<R: Rng>(g: &MetricGraph, rng: &mut R) -> GraphPoint {
    if rng.gen_bool(0.3) {
        return GraphPoint::Vertex(rng.gen_range(0..g.num_vertices));
    }
    let e = rng.gen_range(0..g.edges.len());
    let den = rng.gen_range(2..9);
    let num = rng.gen_range(1..den);
    g.point_on(e, g.edges[e].length * Q::new(num, den))
}

/// Random divisor of the given degree on a few random points.
pub fn random_divisor<R: Rng>(g: &Arc<MetricGraph>, rng: &mut R, degree: i64) -> Divisor {
    let mut d = Divisor::zero(g.clone());
    for _ in 0..rng.gen_range(1..4) {
        d.add(random_point(g, rng), rng.gen_range(-2..3));
    }
    let rest = degree - d.degree();
    d.add(random_point(g, rng), rest);
    d
}

/// `n` random divisors of degree -2..=6 all have Riemann–Roch residual 0.
pub fn sample_riemann_roch<R: Rng>(g: &Arc<MetricGraph>, rng: &mut R, n: usize) -> Result<bool> {
    for _ in 0..n {
        let deg = rng.gen_range(-2..=6);
        if riemann_roch_residual(&random_divisor(g, rng, deg))? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A line with vertex at a random rational point near the curve.
pub fn random_line<R: Rng>(c: &SkeletalCurve, rng: &mut R) -> TropicalLine {
    let vs = &c.curve.vertices;
    let a = vs[rng.gen_range(0..vs.len())].pos;
    let jitter = |rng: &mut R| Q::new(rng.gen_range(-40..=40), rng.gen_range(5..12));
    TropicalLine::new(PlanePoint::new(a.x + jitter(rng), a.y + jitter(rng)))
}

/// Pushed section of `l`: degree 4, rank 2 and equivalent to `K`.
pub fn section_is_canonical(c: &SkeletalCurve, l: &TropicalLine) -> Result<bool> {
    let d = push_to_metric(c, &stable_intersection(&l.to_curve(), &c.curve)?)?;
    Ok(d.degree() == 4 && rank(&d)? == 2 && linearly_equivalent(&d, &canonical_divisor(&c.graph))?)
}

pub fn sample_sections<R: Rng>(c: &SkeletalCurve, rng: &mut R, n: usize) -> Result<bool> {
    for _ in 0..n {
        if !section_is_canonical(c, &random_line(c, rng))? {
            return Ok(false);
        }
    }
    Ok(true)
}
