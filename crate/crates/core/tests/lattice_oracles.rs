//! Independent routes to the triangulation census: a brute-force tiler over
//! subsets of unimodular triangles and a breadth-first walk of the flip graph.

use std::collections::{BTreeSet, VecDeque};

use quartic_core::lattice::{
    enumerate_unimodular_triangulations, induced_subdivision, is_unimodular_triangulation,
    newton_points, regular_heights, s3_orbits, signed_area2, EnumerationConfig, HeightFunction,
    LatticeEdge, LatticeTriangle, SymmetryElement, Triangulation,
};

fn all_unimodular_triangles(d: i64) -> Vec<LatticeTriangle> {
    let pts = newton_points(d).unwrap();
    let mut out = BTreeSet::new();
    for a in &pts {
        for b in &pts {
            for c in &pts {
                if signed_area2(*a, *b, *c) == 1 {
                    out.insert(LatticeTriangle::new(*a, *b, *c).unwrap());
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Include/exclude over all unimodular triangles, keeping pairwise disjoint
/// interiors; families of d^2 triangles are exactly the tilings.
fn brute_force_tilings(d: i64) -> BTreeSet<Triangulation> {
    fn rec(
        tris: &[LatticeTriangle],
        i: usize,
        chosen: &mut Vec<LatticeTriangle>,
        target: usize,
        out: &mut BTreeSet<Triangulation>,
        d: u32,
    ) {
        if chosen.len() == target {
            out.insert(Triangulation::new(d, chosen.clone()));
            return;
        }
        if i == tris.len() || chosen.len() + (tris.len() - i) < target {
            return;
        }
        if chosen.iter().all(|c| !c.overlaps(&tris[i])) {
            chosen.push(tris[i]);
            rec(tris, i + 1, chosen, target, out, d);
            chosen.pop();
        }
        rec(tris, i + 1, chosen, target, out, d);
    }
    let tris = all_unimodular_triangles(d);
    let mut out = BTreeSet::new();
    rec(&tris, 0, &mut Vec::new(), (d * d) as usize, &mut out, d as u32);
    out
}

fn flips(t: &Triangulation) -> Vec<Triangulation> {
    let mut out = Vec::new();
    for (LatticeEdge(a, b), i, j) in t.interior_edges() {
        let apex = |k: usize| {
            *t.triangles[k]
                .vertices
                .iter()
                .find(|&&v| v != a && v != b)
                .unwrap()
        };
        let (c, d) = (apex(i), apex(j));
        // a and b strictly on opposite sides of cd
        let sa = signed_area2(c, d, a);
        let sb = signed_area2(c, d, b);
        if sa == 0 || sb == 0 || (sa > 0) == (sb > 0) {
            continue;
        }
        let mut tris: Vec<LatticeTriangle> = t
            .triangles
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != j)
            .map(|(_, x)| *x)
            .collect();
        tris.push(LatticeTriangle::new(c, d, a).unwrap());
        tris.push(LatticeTriangle::new(c, d, b).unwrap());
        out.push(Triangulation::new(t.degree, tris));
    }
    out
}

fn flip_component(start: Triangulation) -> BTreeSet<Triangulation> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start);
    while let Some(t) = queue.pop_front() {
        for n in flips(&t) {
            if seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    seen
}

fn quadratic_triangulation(d: u32) -> Triangulation {
    induced_subdivision(&HeightFunction::quadratic(d), d as i64)
        .unwrap()
        .triangulation
        .unwrap()
}

#[test]
fn enumeration_matches_brute_force_tiler() {
    let cfg = EnumerationConfig::default();
    for d in 1..=3 {
        let ours = enumerate_unimodular_triangulations(d, &cfg).unwrap();
        for t in &ours {
            assert!(is_unimodular_triangulation(t).ok);
        }
        let brute = brute_force_tilings(d);
        let ours_set: BTreeSet<_> = ours.iter().cloned().collect();
        assert_eq!(ours_set.len(), ours.len(), "duplicates at d={d}");
        assert_eq!(ours_set, brute, "d={d}");
    }
}

#[test]
fn golden_counts_small_degrees() {
    // frozen from the tiler and flip-graph oracles above
    let cfg = EnumerationConfig::default();
    let counts: Vec<usize> = (1..=3)
        .map(|d| enumerate_unimodular_triangulations(d, &cfg).unwrap().len())
        .collect();
    assert_eq!(counts, vec![1, 4, 79]);
    for d in 1..=3u32 {
        assert_eq!(flip_component(quadratic_triangulation(d)).len(), counts[d as usize - 1]);
    }
}

#[test]
fn degree_four_flip_graph_agrees() {
    let ours = enumerate_unimodular_triangulations(4, &EnumerationConfig::default()).unwrap();
    let flip: Vec<_> = flip_component(quadratic_triangulation(4)).into_iter().collect();
    assert_eq!(flip, ours);
}

#[test]
fn orbits_small_degrees() {
    let cfg = EnumerationConfig::default();
    let t1 = enumerate_unimodular_triangulations(1, &cfg).unwrap();
    let o1 = s3_orbits(&t1);
    assert_eq!(o1.len(), 1);
    assert_eq!(o1[0].members.len(), 1);
    for d in 2..=3 {
        let ts = enumerate_unimodular_triangulations(d, &cfg).unwrap();
        let orbits = s3_orbits(&ts);
        let total: usize = orbits.iter().map(|o| o.members.len()).sum();
        assert_eq!(total, ts.len());
        for o in &orbits {
            assert_eq!(6 % o.members.len(), 0);
            // brute orbit: all images of the representative
            let images: BTreeSet<_> = SymmetryElement::all()
                .into_iter()
                .map(|g| o.representative.apply(g))
                .collect();
            assert_eq!(images.len(), o.members.len());
        }
    }
}

#[test]
fn small_degrees_all_regular_and_round_trip() {
    let cfg = EnumerationConfig::default();
    for d in 1..=3 {
        for t in enumerate_unimodular_triangulations(d, &cfg).unwrap() {
            let h = regular_heights(&t).unwrap();
            assert_eq!(
                induced_subdivision(&h, d).unwrap().triangulation.as_ref(),
                Some(&t)
            );
        }
    }
}
