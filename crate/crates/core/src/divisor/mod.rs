//! Divisors on metric graphs: reduction, equivalence, rank and rigidity.
//!
//! Rigidity is decided by burning tests. Let `d` be effective and refine the
//! graph at the vertices and at `supp(d)`. If some other effective divisor is
//! equivalent to `d`, the complete linear system of `d` is connected, so there
//! is one arbitrarily close to `d`; it puts a chip at a point `x` in the
//! interior of some refined edge, where `d` has none. The `x`-reduced divisor
//! maximizes the coefficient at `x` among effective representatives, so `d`
//! is not `x`-reduced. Burning from any point of an open chip-free sub-edge
//! reaches both of its ends at once, so the outcome is the same for every
//! point of that sub-edge, and testing its midpoint suffices.

mod reduce;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metricgraph::{GraphPoint, MetricGraph};

pub use reduce::{
    is_reduced, reduce_with_log, reduced_divisor, replay, FiringMove, LoggedMove, Reduction,
    Region, Segment,
};

#[derive(Clone, Debug)]
pub struct Divisor {
    graph: Arc<MetricGraph>,
    chips: BTreeMap<GraphPoint, i64>,
}

impl PartialEq for Divisor {
    fn eq(&self, o: &Self) -> bool {
        self.chips == o.chips && (Arc::ptr_eq(&self.graph, &o.graph) || self.graph == o.graph)
    }
}

impl Eq for Divisor {}

/// One entry of the divisor JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chip {
    pub point: GraphPoint,
    pub coefficient: i64,
}

impl Divisor {
    pub fn zero(graph: Arc<MetricGraph>) -> Self {
        Self {
            graph,
            chips: BTreeMap::new(),
        }
    }

    pub fn from_points(graph: Arc<MetricGraph>, pts: impl IntoIterator<Item = (GraphPoint, i64)>) -> Self {
        let mut d = Self::zero(graph);
        for (p, c) in pts {
            d.add(p, c);
        }
        d
    }

    pub fn graph(&self) -> &MetricGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<MetricGraph> {
        &self.graph
    }

    pub fn chips(&self) -> &BTreeMap<GraphPoint, i64> {
        &self.chips
    }

    pub fn add(&mut self, p: GraphPoint, c: i64) {
        debug_assert!(self.graph.contains_point(&p), "{p} not on graph");
        let e = self.chips.entry(p).or_insert(0);
        *e += c;
        if *e == 0 {
            self.chips.remove(&p);
        }
    }

    pub fn get(&self, p: &GraphPoint) -> i64 {
        self.chips.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.chips.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.chips.values().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn support(&self) -> Vec<GraphPoint> {
        self.chips.keys().copied().collect()
    }

    /// Points with multiplicity, in order.
    pub fn points(&self) -> Vec<GraphPoint> {
        let mut out = Vec::new();
        for (p, &c) in &self.chips {
            for _ in 0..c.max(0) {
                out.push(*p);
            }
        }
        out
    }

    fn same_graph(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.graph, &o.graph) || self.graph == o.graph {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    pub fn plus(&self, o: &Self) -> Result<Self> {
        self.same_graph(o)?;
        let mut d = self.clone();
        for (p, c) in &o.chips {
            d.add(*p, *c);
        }
        Ok(d)
    }

    pub fn minus(&self, o: &Self) -> Result<Self> {
        self.plus(&o.scaled(-1))
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::from_points(self.graph.clone(), self.chips.iter().map(|(p, c)| (*p, c * k)))
    }

    pub fn to_json(&self) -> Vec<Chip> {
        self.chips
            .iter()
            .map(|(p, c)| Chip {
                point: *p,
                coefficient: *c,
            })
            .collect()
    }

    pub fn from_json(graph: Arc<MetricGraph>, chips: &[Chip]) -> Result<Self> {
        for c in chips {
            if !graph.contains_point(&c.point) {
                return Err(Error::Internal(format!("{} is not a point of the graph", c.point)));
            }
        }
        Ok(Self::from_points(graph, chips.iter().map(|c| (c.point, c.coefficient))))
    }

    pub fn class_at(&self, q: GraphPoint) -> Result<DivisorClass> {
        Ok(DivisorClass {
            base: q,
            representative: reduced_divisor(self, &q)?,
        })
    }
}

impl std::fmt::Display for Divisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.chips.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.chips.iter().map(|(p, c)| format!("{c}*{p}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A divisor class, represented by its reduced divisor at `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    pub base: GraphPoint,
    pub representative: Divisor,
}

/// `(valence - 2)` chips at every vertex.
pub fn canonical_divisor(g: &Arc<MetricGraph>) -> Divisor {
    Divisor::from_points(
        g.clone(),
        (0..g.num_vertices).map(|v| (GraphPoint::Vertex(v), g.valence(v) as i64 - 2)),
    )
}

pub fn linearly_equivalent(a: &Divisor, b: &Divisor) -> Result<bool> {
    a.same_graph(b)?;
    if a.degree() != b.degree() {
        return Ok(false);
    }
    Ok(reduced_divisor(&a.minus(b)?, &GraphPoint::Vertex(0))?.is_zero())
}

/// Vertices of a loopless model together with the support of `d`.
pub fn rank_determining_set(d: &Divisor) -> Vec<GraphPoint> {
    let g = d.graph();
    let mut out: Vec<GraphPoint> = (0..g.num_vertices).map(GraphPoint::Vertex).collect();
    out.extend(g.loops().into_iter().map(|e| g.midpoint(e)));
    out.extend(d.support());
    out.sort();
    out.dedup();
    out
}

/// Does the effective divisor `d` have rank at least `k`?
fn rank_at_least(d: &Divisor, k: i64, set: &[GraphPoint]) -> Result<bool> {
    if k <= 0 {
        return Ok(true);
    }
    if d.degree() < k {
        return Ok(false);
    }
    for a in set {
        let r = reduced_divisor(d, a)?;
        if r.get(a) < 1 {
            return Ok(false);
        }
        let mut rest = r;
        rest.add(*a, -1);
        if !rank_at_least(&rest, k - 1, set)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn rank(d: &Divisor) -> Result<i64> {
    let q = GraphPoint::Vertex(0);
    let r = reduced_divisor(d, &q)?;
    if r.get(&q) < 0 {
        return Ok(-1);
    }
    let set = rank_determining_set(d);
    let mut k = 0;
    while rank_at_least(&r, k + 1, &set)? {
        k += 1;
    }
    Ok(k)
}

/// `r(D) - r(K - D) - deg(D) - 1 + g`; zero by Riemann–Roch.
pub fn riemann_roch_residual(d: &Divisor) -> Result<i64> {
    let k = canonical_divisor(d.graph_arc());
    let g = d.graph().genus() as i64;
    Ok(rank(d)? - rank(&k.minus(d)?)? - d.degree() - 1 + g)
}

/// Points at which burning tests decide rigidity (see the module docs).
pub fn rigidity_test_points(d: &Divisor) -> Vec<GraphPoint> {
    let g = d.graph();
    let r = g.refine(d.support());
    let mut out: Vec<GraphPoint> = (0..r.graph.num_vertices)
        .map(|v| r.to_original(&GraphPoint::Vertex(v)))
        .collect();
    out.extend((0..r.graph.edges.len()).map(|e| r.to_original(&r.graph.midpoint(e))));
    out.sort();
    out.dedup();
    out
}

/// No other effective divisor is equivalent to `d`.
pub fn is_rigid(d: &Divisor) -> Result<bool> {
    if !d.is_effective() {
        return Err(Error::Internal("rigidity is defined for effective divisors".into()));
    }
    Ok(rigidity_test_points(d).iter().all(|q| is_reduced(d, q)))
}
