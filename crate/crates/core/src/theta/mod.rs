//! Effective theta characteristics from ℤ/2-flows, and their
//! rigid / flexible / tandem classification in genus three.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::divisor::{canonical_divisor, is_rigid, reduced_divisor, Divisor};
use crate::error::{Error, Result};
use crate::metricgraph::{GraphPoint, MetricGraph};
use crate::rational::{qi, Q};

/// An element of the cycle space over ℤ/2, given by its edge support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Z2Flow {
    pub edges: Vec<usize>,
}

impl Z2Flow {
    pub fn is_even(&self, g: &MetricGraph) -> bool {
        let mut deg = vec![0usize; g.num_vertices];
        for &e in &self.edges {
            deg[g.edges[e].u] += 1;
            deg[g.edges[e].v] += 1;
        }
        deg.iter().all(|d| d % 2 == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ThetaCategory {
    Rigid,
    Flexible,
    Tandem,
}

impl fmt::Display for ThetaCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThetaCategory::Rigid => "rigid",
            ThetaCategory::Flexible => "flexible",
            ThetaCategory::Tandem => "tandem",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaCharacteristic {
    pub flow: Z2Flow,
    pub divisor: Divisor,
    /// Set in genus three.
    pub category: Option<ThetaCategory>,
}

/// Fundamental cycles of a spanning tree, as edge sets.
fn cycle_basis(g: &MetricGraph) -> Vec<BTreeSet<usize>> {
    let n = g.num_vertices;
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut in_tree = vec![false; g.edges.len()];
    let mut order = vec![0usize];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for (e, _) in g.incidences(v) {
            let w = g.edges[e].other(v);
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, e));
                in_tree[e] = true;
                order.push(w);
            }
        }
    }
    let path_to_root = |mut v: usize| {
        let mut out = Vec::new();
        while let Some((p, e)) = parent[v] {
            out.push(e);
            v = p;
        }
        out
    };
    let mut basis = Vec::new();
    for (e, edge) in g.edges.iter().enumerate() {
        if in_tree[e] {
            continue;
        }
        let mut c: BTreeSet<usize> = BTreeSet::from([e]);
        for x in path_to_root(edge.u).into_iter().chain(path_to_root(edge.v)) {
            if !c.insert(x) {
                c.remove(&x);
            }
        }
        basis.push(c);
    }
    basis
}

/// All `2^g - 1` nonzero flows, ordered by their basis coordinates.
pub fn nonzero_flows(g: &MetricGraph) -> Vec<Z2Flow> {
    let basis = cycle_basis(g);
    (1u32..(1 << basis.len()))
        .map(|mask| {
            let mut s = BTreeSet::new();
            for (i, c) in basis.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for &e in c {
                        if !s.insert(e) {
                            s.remove(&e);
                        }
                    }
                }
            }
            Z2Flow {
                edges: s.into_iter().collect(),
            }
        })
        .collect()
}

/// Shortest-path distance from the vertices touched by `support`, along
/// edges outside it.
fn distance_from(g: &MetricGraph, support: &BTreeSet<usize>) -> Vec<Q> {
    let n = g.num_vertices;
    let mut dist: Vec<Option<Q>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    for &e in support {
        for v in [g.edges[e].u, g.edges[e].v] {
            if dist[v].is_none() {
                dist[v] = Some(Q::zero());
                heap.push(Reverse((Q::zero(), v)));
            }
        }
    }
    let mut done = vec![false; n];
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for (e, _) in g.incidences(v) {
            if support.contains(&e) {
                continue;
            }
            let w = g.edges[e].other(v);
            let nd = d + g.edges[e].length;
            if dist[w].is_none_or(|x| nd < x) {
                dist[w] = Some(nd);
                heap.push(Reverse((nd, w)));
            }
        }
    }
    dist.into_iter().map(|d| d.expect("connected graph")).collect()
}

/// Spread out from the flow's support; a chip sits where two fronts collide,
/// and a vertex reached along `k` edges at once takes `k - 1` chips.
pub fn zharkov_divisor(g: &Arc<MetricGraph>, flow: &Z2Flow) -> Result<Divisor> {
    if flow.edges.is_empty() {
        return Err(Error::InvalidFlow("zero flow".into()));
    }
    if flow.edges.iter().any(|&e| e >= g.edges.len()) || !flow.is_even(g) {
        return Err(Error::InvalidFlow(format!("{:?} is not a cycle", flow.edges)));
    }
    let support: BTreeSet<usize> = flow.edges.iter().copied().collect();
    let dist = distance_from(g, &support);
    let mut d = Divisor::zero(g.clone());
    let mut incoming = vec![0i64; g.num_vertices];
    for (i, e) in g.edges.iter().enumerate() {
        if support.contains(&i) {
            continue;
        }
        let (du, dv) = (dist[e.u], dist[e.v]);
        if du + e.length == dv {
            incoming[e.v] += 1;
        } else if dv + e.length == du {
            incoming[e.u] += 1;
        } else {
            let t = (dv + e.length - du) / qi(2);
            d.add(g.point_on(i, t), 1);
        }
    }
    for (v, &k) in incoming.iter().enumerate() {
        if k > 1 {
            d.add(GraphPoint::Vertex(v), k - 1);
        }
    }
    Ok(d)
}

/// Whether a point lies on a bridge, endpoints included.
pub fn on_closed_bridge(g: &MetricGraph, p: &GraphPoint, bridges: &[usize]) -> bool {
    match *p {
        GraphPoint::Edge { edge, .. } => bridges.contains(&edge),
        GraphPoint::Vertex(v) => bridges.iter().any(|&b| g.edges[b].u == v || g.edges[b].v == v),
    }
}

/// Category of a genus-3 theta characteristic `P + Q`.
pub fn classify_theta(d: &Divisor) -> Result<ThetaCategory> {
    let g = d.graph();
    if g.genus() != 3 || d.degree() != 2 || !d.is_effective() {
        return Err(Error::OutOfScope("classification needs P + Q on a genus-3 graph".into()));
    }
    let bridges = g.bridges();
    if d.support().iter().any(|p| on_closed_bridge(g, p, &bridges)) {
        return Ok(ThetaCategory::Flexible);
    }
    if is_rigid(d)? {
        return Ok(ThetaCategory::Rigid);
    }
    let pts = d.points();
    if pts[0] != pts[1] && g.disconnects_without_points(&pts[0], &pts[1]) {
        return Ok(ThetaCategory::Tandem);
    }
    Err(Error::Internal(format!("{d} moves but is neither on a bridge nor separating")))
}

/// Checks on a list of candidate theta characteristics.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaChecks {
    pub count: usize,
    pub degrees_ok: bool,
    pub doubles_to_canonical: bool,
    pub pairwise_distinct: bool,
}

impl ThetaChecks {
    pub fn all_ok(&self, genus: usize) -> bool {
        self.count == (1 << genus) - 1 && self.degrees_ok && self.doubles_to_canonical && self.pairwise_distinct
    }
}

pub fn check_thetas(g: &Arc<MetricGraph>, divisors: &[Divisor]) -> Result<ThetaChecks> {
    let genus = g.genus() as i64;
    let k = canonical_divisor(g);
    let base = GraphPoint::Vertex(0);
    let mut doubles = true;
    for d in divisors {
        let r = reduced_divisor(&d.scaled(2).minus(&k)?, &base)?;
        doubles &= r.is_zero();
    }
    let mut reps = Vec::with_capacity(divisors.len());
    for d in divisors {
        reps.push(reduced_divisor(d, &base)?);
    }
    let mut distinct = true;
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            distinct &= reps[i] != reps[j];
        }
    }
    Ok(ThetaChecks {
        count: divisors.len(),
        degrees_ok: divisors.iter().all(|d| d.degree() == genus - 1 && d.is_effective()),
        doubles_to_canonical: doubles,
        pairwise_distinct: distinct,
    })
}

/// One theta characteristic per nonzero flow, verified.
pub fn all_theta_characteristics(g: &Arc<MetricGraph>) -> Result<Vec<ThetaCharacteristic>> {
    let genus = g.genus();
    if genus == 0 {
        return Err(Error::OutOfScope("a tree has no effective theta characteristics".into()));
    }
    let flows = nonzero_flows(g);
    let divisors = flows
        .iter()
        .map(|f| zharkov_divisor(g, f))
        .collect::<Result<Vec<_>>>()?;
    let checks = check_thetas(g, &divisors)?;
    if !checks.all_ok(genus) {
        return Err(Error::Internal(format!("theta characteristic checks failed: {checks:?}")));
    }
    flows
        .into_iter()
        .zip(divisors)
        .map(|(flow, divisor)| {
            let category = if genus == 3 { Some(classify_theta(&divisor)?) } else { None };
            Ok(ThetaCharacteristic {
                flow,
                divisor,
                category,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn graph(n: usize, e: &[(usize, usize, i64)]) -> Arc<MetricGraph> {
        Arc::new(MetricGraph::new(n, e.iter().map(|&(u, v, l)| (u, v, qi(l))).collect()).unwrap())
    }

    /// Distances on a fine subdivision, by breadth-first search.
    fn fine_collisions(g: &MetricGraph, flow: &Z2Flow, step: Q) -> Vec<GraphPoint> {
        let f = g.refine(
            (0..g.edges.len())
                .flat_map(|e| {
                    let n = (g.edges[e].length / step).to_integer();
                    (1..n).map(move |k| (e, step * k))
                })
                .map(|(e, t)| g.point_on(e, t)),
        );
        let h = &f.graph;
        // unweighted BFS is exact when all pieces share one length
        assert!(h.edges.iter().all(|e| e.length == h.edges[0].length));
        let src: BTreeSet<usize> = (0..h.edges.len())
            .filter(|&e| flow.edges.contains(&f.original_edge(e)))
            .flat_map(|e| [h.edges[e].u, h.edges[e].v])
            .collect();
        let mut dist = vec![i64::MAX; h.num_vertices];
        let mut queue: std::collections::VecDeque<usize> = src.iter().copied().collect();
        for &s in &src {
            dist[s] = 0;
        }
        while let Some(v) = queue.pop_front() {
            for (e, _) in h.incidences(v) {
                if flow.edges.contains(&f.original_edge(e)) {
                    continue;
                }
                let w = h.edges[e].other(v);
                if dist[w] == i64::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        // local maxima of the distance are the collision points
        let mut out = Vec::new();
        for v in 0..h.num_vertices {
            if src.contains(&v) {
                continue;
            }
            let nbrs: Vec<usize> = h.incidences(v).into_iter().map(|(e, _)| h.edges[e].other(v)).collect();
            let lower = nbrs.iter().filter(|&&w| dist[w] < dist[v]).count();
            if lower >= 2 {
                for _ in 0..lower - 1 {
                    out.push(f.to_original(&GraphPoint::Vertex(v)));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn flows_counts() {
        let theta = graph(2, &[(0, 1, 1), (0, 1, 2), (0, 1, 3)]);
        let flows = nonzero_flows(&theta);
        assert_eq!(flows.len(), 3);
        for f in &flows {
            assert_eq!(f.edges.len(), 2);
            assert!(f.is_even(&theta));
        }
        let tree = graph(3, &[(0, 1, 1), (1, 2, 1)]);
        assert!(nonzero_flows(&tree).is_empty());
        let k4 = graph(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)]);
        assert_eq!(nonzero_flows(&k4).len(), 7);
    }

    #[test]
    fn zharkov_examples() {
        let circle = graph(1, &[(0, 0, 5)]);
        let flows = nonzero_flows(&circle);
        assert_eq!(flows.len(), 1);
        assert!(zharkov_divisor(&circle, &flows[0]).unwrap().is_zero());
        let theta = graph(2, &[(0, 1, 1), (0, 1, 2), (0, 1, 3)]);
        let d = zharkov_divisor(&theta, &Z2Flow { edges: vec![0, 1] }).unwrap();
        assert_eq!(d.points(), vec![theta.point_on(2, q(3, 2))]);
        assert!(matches!(
            zharkov_divisor(&theta, &Z2Flow { edges: vec![] }),
            Err(Error::InvalidFlow(_))
        ));
        assert!(matches!(
            zharkov_divisor(&theta, &Z2Flow { edges: vec![0] }),
            Err(Error::InvalidFlow(_))
        ));
        let thetas = all_theta_characteristics(&theta).unwrap();
        assert_eq!(thetas.len(), 3);
        assert!(thetas.iter().all(|t| t.divisor.degree() == 1));
    }

    #[test]
    fn collisions_match_fine_search() {
        let graphs = [
            graph(2, &[(0, 1, 1), (0, 1, 2), (0, 1, 3)]),
            graph(4, &[(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 2, 2), (1, 3, 5), (2, 3, 4)]),
            graph(4, &[(0, 0, 3), (0, 1, 1), (1, 2, 2), (1, 2, 4), (2, 3, 1), (3, 3, 2)]),
            graph(4, &[(0, 1, 1), (0, 1, 2), (2, 3, 1), (2, 3, 3), (0, 2, 2), (1, 3, 5)]),
        ];
        for g in graphs {
            for f in nonzero_flows(&g) {
                let d = zharkov_divisor(&g, &f).unwrap();
                assert_eq!(d.degree(), g.genus() as i64 - 1);
                // integer lengths: every collision lies on the half-unit grid
                assert_eq!(d.points(), fine_collisions(&g, &f, q(1, 2)), "flow {:?}", f.edges);
            }
        }
    }
}
