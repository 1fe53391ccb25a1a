//! Brute-force chip firing on finely subdivided unit graphs.

#![allow(dead_code)]

use std::sync::Arc;

use quartic_core::divisor::Divisor;
use quartic_core::metricgraph::{GraphPoint, MetricGraph};
use quartic_core::Q;
use rand::rngs::StdRng;
use rand::Rng;

/// Uniform subdivision of a metric graph into pieces of length `step`,
/// as a finite multigraph with the graph point of each vertex.
pub struct Finite {
    pub points: Vec<GraphPoint>,
    pub adj: Vec<Vec<usize>>,
}

impl Finite {
    pub fn new(g: &MetricGraph, step: Q) -> Self {
        let mut points: Vec<GraphPoint> = (0..g.num_vertices).map(GraphPoint::Vertex).collect();
        let mut adj = vec![Vec::new(); g.num_vertices];
        for (i, e) in g.edges.iter().enumerate() {
            let k = (e.length / step).to_integer();
            assert_eq!(step * k, e.length);
            let mut prev = e.u;
            for j in 1..k {
                let w = points.len();
                points.push(g.point_on(i, step * j));
                adj.push(Vec::new());
                adj[prev].push(w);
                adj[w].push(prev);
                prev = w;
            }
            if prev != e.v || k > 1 {
                adj[prev].push(e.v);
                adj[e.v].push(prev);
            }
        }
        Self { points, adj }
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn index(&self, p: &GraphPoint) -> usize {
        self.points.iter().position(|x| x == p).expect("point on the finite model")
    }

    pub fn vector(&self, d: &Divisor) -> Vec<i64> {
        let mut v = vec![0; self.n()];
        for (p, c) in d.chips() {
            v[self.index(p)] += c;
        }
        v
    }

    /// Greedy borrowing: equivalent to an effective divisor iff not every
    /// vertex is forced to borrow.
    pub fn equivalent_to_effective(&self, d: &[i64]) -> bool {
        let mut d = d.to_vec();
        let mut borrowed = vec![false; self.n()];
        while let Some(v) = (0..self.n()).find(|&v| d[v] < 0) {
            borrowed[v] = true;
            if borrowed.iter().all(|&b| b) {
                return false;
            }
            for &w in &self.adj[v] {
                if w != v {
                    d[v] += 1;
                    d[w] -= 1;
                }
            }
        }
        true
    }

    pub fn rank(&self, d: &[i64]) -> i64 {
        if !self.equivalent_to_effective(d) {
            return -1;
        }
        let deg: i64 = d.iter().sum();
        let mut k = 0;
        'grow: while k < deg {
            let mut e = vec![0i64; self.n()];
            if !self.all_removals(d, &mut e, 0, k + 1) {
                break 'grow;
            }
            k += 1;
        }
        k
    }

    pub fn all_removals(&self, d: &[i64], e: &mut Vec<i64>, from: usize, left: i64) -> bool {
        if left == 0 {
            let diff: Vec<i64> = d.iter().zip(e.iter()).map(|(a, b)| a - b).collect();
            return self.equivalent_to_effective(&diff);
        }
        for v in from..self.n() {
            e[v] += 1;
            let ok = self.all_removals(d, e, v, left - 1);
            e[v] -= 1;
            if !ok {
                return false;
            }
        }
        true
    }

    /// Every nonempty set avoiding `q` has a vertex with fewer chips than
    /// edges leaving the set.
    pub fn superstable(&self, d: &[i64], q: usize) -> bool {
        let others: Vec<usize> = (0..self.n()).filter(|&v| v != q).collect();
        for mask in 1u32..(1 << others.len()) {
            let set: Vec<usize> = (0..others.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| others[i])
                .collect();
            let ok = set.iter().any(|&v| {
                let out = self.adj[v].iter().filter(|w| !set.contains(w)).count() as i64;
                d[v] < out
            });
            if !ok {
                return false;
            }
        }
        true
    }

    /// Brute-force `q`-reduced divisor.
    pub fn reduced(&self, d: &[i64], q: usize) -> Vec<i64> {
        let deg: i64 = d.iter().sum();
        let caps: Vec<i64> = (0..self.n())
            .map(|v| if v == q { 0 } else { self.adj[v].len() as i64 })
            .collect();
        let mut cur = vec![0i64; self.n()];
        let mut found = Vec::new();
        self.scan(d, q, deg, &caps, 0, &mut cur, &mut found);
        assert_eq!(found.len(), 1, "reduced divisor is unique");
        found.pop().unwrap()
    }

    #[allow(clippy::too_many_arguments)]
    pub fn scan(&self, d: &[i64], q: usize, deg: i64, caps: &[i64], v: usize, cur: &mut Vec<i64>, found: &mut Vec<Vec<i64>>) {
        if v == self.n() {
            let rest: i64 = cur.iter().sum();
            let mut c = cur.clone();
            c[q] = deg - rest;
            let diff: Vec<i64> = c.iter().zip(d).map(|(a, b)| a - b).collect();
            if self.superstable(&c, q) && self.equivalent_to_effective(&diff) {
                found.push(c);
            }
            return;
        }
        for x in 0..caps[v].max(1) {
            cur[v] = if v == q { 0 } else { x };
            self.scan(d, q, deg, caps, v + 1, cur, found);
        }
    }
}

/// Connected graphs with at most three unit edges on at most four vertices.
pub fn small_graphs() -> Vec<Arc<MetricGraph>> {
    let mut out = Vec::new();
    for nv in 1..=4usize {
        let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|u| (u..nv).map(move |v| (u, v))).collect();
        for ne in 1..=3usize {
            let mut idx = vec![0usize; ne];
            loop {
                let edges: Vec<(usize, usize, Q)> = idx.iter().map(|&i| (pairs[i].0, pairs[i].1, Q::from_integer(1))).collect();
                if let Ok(g) = MetricGraph::new(nv, edges) {
                    out.push(Arc::new(g));
                }
                // next non-decreasing index tuple
                let mut k = ne;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    if idx[k] + 1 < pairs.len() {
                        idx[k] += 1;
                        for j in k + 1..ne {
                            idx[j] = idx[k];
                        }
                        break;
                    }
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX {
                    break;
                }
            }
        }
    }
    out
}

pub fn random_divisor(rng: &mut StdRng, f: &Finite, g: &Arc<MetricGraph>, deg: i64) -> Divisor {
    let mut d = Divisor::zero(g.clone());
    let n = f.n();
    // a few random signed chips, then balance the degree
    for _ in 0..rng.gen_range(0..3) {
        d.add(f.points[rng.gen_range(0..n)], rng.gen_range(-1..=1));
    }
    let diff = deg - d.degree();
    d.add(f.points[rng.gen_range(0..n)], diff.signum());
    for _ in 1..diff.abs() {
        d.add(f.points[rng.gen_range(0..n)], diff.signum());
    }
    d
}

