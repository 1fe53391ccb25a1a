use proptest::prelude::*;

use super::*;
use crate::rational::qi;

fn graph(n: usize, edges: &[(usize, usize, i64)]) -> Arc<MetricGraph> {
    Arc::new(MetricGraph::new(n, edges.iter().map(|&(u, v, l)| (u, v, qi(l))).collect()).unwrap())
}

fn honeycomb(l: [i64; 6]) -> Arc<MetricGraph> {
    graph(4, &[(0, 1, l[0]), (0, 2, l[1]), (0, 3, l[2]), (1, 2, l[3]), (1, 3, l[4]), (2, 3, l[5])])
}

/// Ears 0-1 and 2-3, joined by 0-2 and 1-3.
fn mickey(l: [i64; 6]) -> Arc<MetricGraph> {
    graph(4, &[(0, 1, l[0]), (0, 1, l[1]), (2, 3, l[2]), (2, 3, l[3]), (0, 2, l[4]), (1, 3, l[5])])
}

fn one_bridge(l: [i64; 6]) -> Arc<MetricGraph> {
    graph(4, &[(0, 0, l[0]), (0, 1, l[1]), (1, 2, l[2]), (1, 3, l[3]), (2, 3, l[4]), (2, 3, l[5])])
}

fn two_bridge(l: [i64; 6]) -> Arc<MetricGraph> {
    graph(4, &[(0, 0, l[0]), (0, 1, l[1]), (1, 2, l[2]), (1, 2, l[3]), (2, 3, l[4]), (3, 3, l[5])])
}

fn lollipop(l: [i64; 6]) -> Arc<MetricGraph> {
    graph(4, &[(0, 1, l[0]), (0, 2, l[1]), (0, 3, l[2]), (1, 1, l[3]), (2, 2, l[4]), (3, 3, l[5])])
}

/// Brute force over every pair on the half-integer grid.
fn grid_hyperelliptic(g: &Arc<MetricGraph>) -> bool {
    let mut pts: Vec<GraphPoint> = (0..g.num_vertices).map(GraphPoint::Vertex).collect();
    for (i, e) in g.edges.iter().enumerate() {
        let steps = (e.length * 2).to_integer();
        for k in 1..steps {
            pts.push(g.point_on(i, Q::new(k, 2)));
        }
    }
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i..] {
            let d = Divisor::from_points(g.clone(), [(*p, 1), (*q, 1)]);
            if rank(&d).unwrap() >= 1 {
                return true;
            }
        }
    }
    false
}

#[test]
fn genus_two_is_hyperelliptic() {
    let theta = graph(2, &[(0, 1, 1), (0, 1, 2), (0, 1, 5)]);
    let dumbbell = graph(2, &[(0, 0, 3), (0, 1, 1), (1, 1, 2)]);
    for g in [theta, dumbbell] {
        let v = decide(&g).unwrap();
        assert!(v.hyperelliptic);
        assert_eq!(rank(v.witness.as_ref().unwrap()).unwrap(), 1);
    }
    let circle = graph(1, &[(0, 0, 2)]);
    assert!(matches!(decide(&circle), Err(Error::OutOfScope(_))));
}

#[test]
fn unequal_cut_is_not_hyperelliptic() {
    let v = decide(&two_bridge([1, 1, 2, 3, 1, 1])).unwrap();
    assert!(!v.hyperelliptic);
    assert_eq!(v.reason, Reason::UnequalCut { first: qi(2), second: qi(3) });
}

#[test]
fn equal_cuts_give_positive_controls() {
    for g in [
        mickey([1, 3, 2, 1, 2, 2]),
        one_bridge([2, 1, 3, 3, 1, 2]),
        two_bridge([1, 2, 2, 2, 1, 3]),
        lollipop([1, 2, 3, 1, 2, 3]),
    ] {
        let v = decide(&g).unwrap();
        assert!(v.hyperelliptic, "{:?}", g.edges);
        let w = v.witness.unwrap();
        assert_eq!((w.degree(), rank(&w).unwrap()), (2, 1));
    }
    assert!(!is_hyperelliptic(&honeycomb([1, 1, 1, 1, 1, 1])).unwrap());
}

#[test]
fn matches_grid_search_on_small_lengths() {
    let builders: [fn([i64; 6]) -> Arc<MetricGraph>; 5] = [honeycomb, mickey, one_bridge, two_bridge, lollipop];
    let lengths = [[1, 1, 1, 1, 1, 1], [1, 2, 1, 2, 1, 1], [2, 1, 1, 2, 2, 2], [1, 2, 3, 1, 2, 3], [1, 1, 2, 2, 1, 2]];
    for b in builders {
        for l in lengths {
            let g = b(l);
            let v = decide(&g).unwrap();
            assert_eq!(v.hyperelliptic, grid_hyperelliptic(&g), "{:?}", g.edges);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hyperelliptic_cuts_are_balanced(ty in 0usize..5, l in prop::array::uniform6(1i64..4)) {
        let builders: [fn([i64; 6]) -> Arc<MetricGraph>; 5] = [honeycomb, mickey, one_bridge, two_bridge, lollipop];
        let g = builders[ty](l);
        let v = decide(&g).unwrap();
        if v.hyperelliptic {
            for (a, b) in g.minimize().graph.two_edge_cuts() {
                prop_assert_eq!(g.edges[a].length, g.edges[b].length);
            }
        }
        prop_assert_eq!(v.hyperelliptic, grid_hyperelliptic(&g));
    }
}
