use rand::{Rng, SeedableRng};

use super::*;
use crate::divisor::canonical_divisor;
use crate::lattice::{enumerate_unimodular_triangulations, induces, regular_heights, s3_orbits, EnumerationConfig, HeightFunction};
use crate::metricgraph::CombinatorialType;
use crate::tropcurve::dual_curve;
use crate::tropcurve::geometry::{intersect, Meet};

fn census(n: usize) -> Vec<SkeletalCurve> {
    let ts = enumerate_unimodular_triangulations(4, &EnumerationConfig::default()).unwrap();
    s3_orbits(&ts)
        .iter()
        .filter_map(|o| {
            let h = regular_heights(&o.representative).ok()?;
            Some(SkeletalCurve::new(dual_curve(&o.representative, &h).unwrap()))
        })
        .take(n)
        .collect()
}

fn quadratic() -> SkeletalCurve {
    let h = HeightFunction::quadratic(4);
    let t = enumerate_unimodular_triangulations(4, &EnumerationConfig::default())
        .unwrap()
        .into_iter()
        .find(|t| induces(&h, t))
        .unwrap();
    SkeletalCurve::new(dual_curve(&t, &h).unwrap())
}

/// Multiplicity near each component after moving the line off by a small
/// concrete offset, where all meetings are transverse points.
fn shifted_profile(l: &TropicalLine, c: &SkeletalCurve, comps: &[crate::tropcurve::IntersectionComponent]) -> Vec<u32> {
    let delta = Q::new(1, 100_003);
    let v = l.vertex.offset((7, 3), delta);
    let moved = TropicalLine::new(v);
    let mut per = vec![0u32; comps.len()];
    for a in moved.rays() {
        for (b, w) in c.curve.pieces() {
            if let Some(m) = intersect(&a, &b) {
                let Meet::Point(p) = m else { panic!("overlap after shift") };
                let mult = w * crate::tropcurve::geometry::det(a.dir, b.dir).unsigned_abs() as u32;
                // nearest component by sup distance to its nodes and segments
                let near = comps
                    .iter()
                    .position(|k| {
                        let close = |x: PlanePoint| {
                            crate::tropcurve::geometry::q_abs(x.x - p.x) <= delta * 20 && crate::tropcurve::geometry::q_abs(x.y - p.y) <= delta * 20
                        };
                        k.points.iter().any(|x| close(*x))
                            || k.stable.iter().any(|x| close(x.0))
                            || k.segments.iter().any(|s| {
                                [(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)]
                                    .iter()
                                    .any(|d| (1..=40).any(|i| s.contains(p.offset(*d, delta * i / 2))))
                            })
                    })
                    .expect("meeting point near a component");
                per[near] += mult;
            }
        }
    }
    per
}

#[test]
fn quadratic_honeycomb_has_seven_classes() {
    let c = quadratic();
    assert_eq!(c.graph.classify_type(), CombinatorialType::Honeycomb);
    let classes = bitangent_classes(&c).unwrap();
    assert_eq!(classes.len(), 7);
    let k = canonical_divisor(&c.graph);
    let mut thetas: Vec<usize> = classes.iter().map(|x| x.representative.theta).collect();
    thetas.sort();
    assert_eq!(thetas, (0..7).collect::<Vec<_>>());
    for (i, a) in classes.iter().enumerate() {
        let r = &a.representative;
        let t = is_bitangent(&r.line, &c).unwrap();
        assert!(t.is_some() || r.profile == [4]);
        assert!(is_bitangent_profile(&r.profile));
        assert!(linearly_equivalent(&r.tangency.scaled(2), &k).unwrap());
        assert!(equivalent_bitangents(r, r).unwrap());
        for b in &classes[i + 1..] {
            assert!(!equivalent_bitangents(r, &b.representative).unwrap());
        }
    }
}

#[test]
fn transverse_line_is_not_bitangent() {
    let c = quadratic();
    let mut seen = false;
    for i in -12..12 {
        for j in -12..12 {
            let l = TropicalLine::new(PlanePoint::new(Q::new(2 * i + 1, 3), Q::new(2 * j + 1, 5)));
            let (p, _) = intersection_profile(&l, &c).unwrap();
            if p == [1, 1, 1, 1] {
                assert!(is_bitangent(&l, &c).unwrap().is_none());
                seen = true;
            }
        }
    }
    assert!(seen);
}

#[test]
fn profiles_match_shifted_lines() {
    let c = quadratic();
    let mut checked = 0;
    for i in -10..10 {
        for j in -10..10 {
            for v in [PlanePoint::int(i, j), PlanePoint::new(Q::new(2 * i + 1, 2), Q::from_integer(j))] {
                let l = TropicalLine::new(v);
                let (_, comps) = intersection_profile(&l, &c).unwrap();
                let expect: Vec<u32> = comps.iter().map(|k| k.multiplicity).collect();
                assert_eq!(shifted_profile(&l, &c, &comps), expect, "line at {v}");
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn census_sample_has_seven_classes_and_a_family() {
    let mut family = None;
    for c in census(40) {
        let classes = bitangent_classes(&c).unwrap();
        assert_eq!(classes.len(), 7);
        for cl in &classes {
            assert!(is_bitangent_profile(&cl.representative.profile));
        }
        if family.is_none() {
            if let Some(cl) = classes.iter().find(|x| x.is_family) {
                family = Some((c, cl.clone()));
            }
        }
    }
    let (c, cl) = family.expect("a family in the sample");
    let set = ThetaSet::new(&c).unwrap();
    let iv = cl.family.unwrap();
    assert_eq!(cl.representative.line.vertex, iv.canonical_vertex());
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let len = iv.length.unwrap_or(Q::from_integer(3));
    let mut params = vec![Q::from_integer(0), len];
    for _ in 0..4 {
        let k: i64 = rng.gen_range(1..1000);
        params.push(len * Q::new(k, 1000));
    }
    for t in params {
        let l = TropicalLine::new(iv.start.offset(iv.direction, t));
        let hints: Vec<PlanePoint> = set.thetas[cl.representative.theta].divisor.support().iter().map(|p| c.embed(p)).collect();
        let tan = tangency_with_hints(&l, &c, &hints, None).unwrap().expect("family member is bitangent");
        let member = BitangentLine {
            line: l,
            profile: tan.profile.clone(),
            tangency: tan
                .halvings
                .iter()
                .find(|h| set.class_of(h).unwrap() == Some(cl.representative.theta))
                .expect("member in the class")
                .clone(),
            theta: cl.representative.theta,
            method: Method::Search,
        };
        assert!(equivalent_bitangents(&member, &cl.representative).unwrap());
    }
}
