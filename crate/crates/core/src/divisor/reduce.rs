//! Metric Dhar burning on a working subdivision.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::Divisor;
use crate::error::{Error, Result};
use crate::metricgraph::{GraphPoint, MetricGraph};
use crate::rational::{serde_q, Q};

const MAX_FIRINGS: usize = 1_000_000;

/// A closed interval `[lo, hi]` of an edge, in offsets from its `u` end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub edge: usize,
    #[serde(with = "serde_q")]
    pub lo: Q,
    #[serde(with = "serde_q")]
    pub hi: Q,
}

/// Closed region: the listed points plus the listed segments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub points: Vec<GraphPoint>,
    pub segments: Vec<Segment>,
}

/// Fire `region` by `amount`: every boundary direction sends one chip that
/// distance outward. The change is the divisor of `-min(dist(., region), amount)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiringMove {
    pub region: Region,
    #[serde(with = "serde_q")]
    pub amount: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoggedMove {
    pub firing: FiringMove,
    pub times: i64,
}

/// A reduced divisor with the firing moves that produce it.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub divisor: Divisor,
    pub log: Vec<LoggedMove>,
}

impl Region {
    fn covers(&self, edge: usize, at: Q, forward: bool) -> bool {
        self.segments.iter().any(|s| {
            s.edge == edge && if forward { s.lo <= at && at < s.hi } else { s.lo < at && at <= s.hi }
        })
    }

    fn contains(&self, g: &MetricGraph, p: &GraphPoint) -> bool {
        if self.points.contains(p) {
            return true;
        }
        match *p {
            GraphPoint::Edge { edge, offset } => self
                .segments
                .iter()
                .any(|s| s.edge == edge && s.lo <= offset && offset <= s.hi),
            GraphPoint::Vertex(v) => self.segments.iter().any(|s| {
                let e = &g.edges[s.edge];
                (e.u == v && s.lo.is_zero()) || (e.v == v && s.hi == e.length)
            }),
        }
    }

    /// Directions leaving the region: `(point, edge, offset, forward)`.
    fn exits(&self, g: &MetricGraph) -> Vec<(GraphPoint, usize, Q, bool)> {
        let mut out = Vec::new();
        for p in &self.points {
            let dirs: Vec<(usize, Q, bool)> = match *p {
                GraphPoint::Vertex(v) => g
                    .incidences(v)
                    .into_iter()
                    .map(|(e, at_u)| {
                        if at_u {
                            (e, Q::zero(), true)
                        } else {
                            (e, g.edges[e].length, false)
                        }
                    })
                    .collect(),
                GraphPoint::Edge { edge, offset } => vec![(edge, offset, true), (edge, offset, false)],
            };
            for (e, at, fwd) in dirs {
                if !self.covers(e, at, fwd) {
                    out.push((*p, e, at, fwd));
                }
            }
        }
        out
    }
}

impl FiringMove {
    /// The principal divisor this move adds.
    pub fn principal(&self, graph: &Arc<MetricGraph>) -> Result<Divisor> {
        let g = graph.as_ref();
        let mut d = Divisor::zero(graph.clone());
        if self.amount <= Q::zero() {
            return Err(Error::Internal("firing amount must be positive".into()));
        }
        for (p, e, at, fwd) in self.region.exits(g) {
            let to = if fwd { at + self.amount } else { at - self.amount };
            if to < Q::zero() || to > g.edges[e].length {
                return Err(Error::Internal(format!("firing from {p} overruns edge {e}")));
            }
            let target = g.point_on(e, to);
            // the open outward segment must avoid the region
            let mid = g.point_on(e, (at + to) / Q::from_integer(2));
            if self.region.contains(g, &mid) {
                return Err(Error::Internal(format!("firing from {p} re-enters the region")));
            }
            d.add(p, -1);
            d.add(target, 1);
        }
        Ok(d)
    }
}

/// Apply a firing log to a divisor.
pub fn replay(d: &Divisor, log: &[LoggedMove]) -> Result<Divisor> {
    let mut out = d.clone();
    for m in log {
        let delta = m.firing.principal(d.graph_arc())?;
        out = out.plus(&delta.scaled(m.times))?;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct WorkEdge {
    u: usize,
    v: usize,
    orig: usize,
    lo: Q,
    len: Q,
    alive: bool,
}

/// A subdivision of the base graph carrying integer chips at its vertices.
struct Work {
    base: Arc<MetricGraph>,
    pos: Vec<GraphPoint>,
    chips: Vec<i64>,
    alive: Vec<bool>,
    fixed: Vec<bool>,
    edges: Vec<WorkEdge>,
    inc: Vec<Vec<usize>>,
    index: BTreeMap<GraphPoint, usize>,
}

impl Work {
    fn new(d: &Divisor, extra: &[GraphPoint]) -> Self {
        let base = d.graph_arc().clone();
        let mut pts: Vec<GraphPoint> = d.chips().keys().copied().collect();
        pts.extend_from_slice(extra);
        let r = base.refine(pts.iter().copied());
        let n = r.graph.num_vertices;
        let pos: Vec<GraphPoint> = (0..n).map(|v| r.to_original(&GraphPoint::Vertex(v))).collect();
        let mut inc = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(r.graph.edges.len());
        for (i, e) in r.graph.edges.iter().enumerate() {
            let (orig, lo) = r.origin(i);
            edges.push(WorkEdge {
                u: e.u,
                v: e.v,
                orig,
                lo,
                len: e.length,
                alive: true,
            });
            inc[e.u].push(i);
            inc[e.v].push(i);
        }
        let index: BTreeMap<GraphPoint, usize> = pos.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut chips = vec![0i64; n];
        for (p, c) in d.chips() {
            chips[index[p]] += c;
        }
        let mut fixed = vec![false; n];
        for f in fixed.iter_mut().take(base.num_vertices) {
            *f = true;
        }
        for p in extra {
            fixed[index[p]] = true;
        }
        Self {
            base,
            pos,
            chips,
            alive: vec![true; n],
            fixed,
            edges,
            inc,
            index,
        }
    }

    fn other(&self, e: usize, x: usize) -> usize {
        let w = &self.edges[e];
        if w.u == x {
            w.v
        } else {
            w.u
        }
    }

    /// Burn from `q`; returns the burnt flags.
    fn burn(&self, q: usize) -> Vec<bool> {
        let n = self.pos.len();
        let mut burnt = vec![false; n];
        let mut hits = vec![0i64; n];
        let mut stack = vec![q];
        burnt[q] = true;
        while let Some(x) = stack.pop() {
            for &e in &self.inc[x] {
                let w = &self.edges[e];
                if w.u == w.v {
                    continue;
                }
                let y = self.other(e, x);
                if burnt[y] {
                    continue;
                }
                hits[y] += 1;
                if hits[y] > self.chips[y] {
                    burnt[y] = true;
                    stack.push(y);
                }
            }
        }
        for (b, a) in burnt.iter_mut().zip(&self.alive) {
            if !a {
                *b = true;
            }
        }
        burnt
    }

    fn region(&self, burnt: &[bool]) -> Region {
        let mut points: Vec<GraphPoint> = (0..self.pos.len())
            .filter(|&v| !burnt[v])
            .map(|v| self.pos[v])
            .collect();
        points.sort();
        let mut segments: Vec<Segment> = self
            .edges
            .iter()
            .filter(|e| e.alive && !burnt[e.u] && !burnt[e.v])
            .map(|e| Segment {
                edge: e.orig,
                lo: e.lo,
                hi: e.lo + e.len,
            })
            .collect();
        segments.sort();
        Region { points, segments }
    }

    /// Split edge `e` at distance `t` from its end `x`; returns the new vertex.
    fn split(&mut self, e: usize, x: usize, t: Q) -> usize {
        let WorkEdge { u, v, orig, lo, len, .. } = self.edges[e].clone();
        let cut = if x == u { lo + t } else { lo + len - t };
        let p = self.base.point_on(orig, cut);
        let w = self.pos.len();
        self.pos.push(p);
        self.chips.push(0);
        self.alive.push(true);
        self.fixed.push(false);
        self.index.insert(p, w);
        let e2 = self.edges.len();
        self.edges[e].v = w;
        self.edges[e].len = cut - lo;
        self.edges.push(WorkEdge {
            u: w,
            v,
            orig,
            lo: cut,
            len: lo + len - cut,
            alive: true,
        });
        for slot in self.inc[v].iter_mut() {
            if *slot == e {
                *slot = e2;
                break;
            }
        }
        self.inc.push(vec![e, e2]);
        w
    }

    /// Drop chip-free subdivision vertices.
    fn merge(&mut self, w: usize) {
        if self.fixed[w] || !self.alive[w] || self.chips[w] != 0 || self.inc[w].len() != 2 {
            return;
        }
        let (a, b) = (self.inc[w][0], self.inc[w][1]);
        if a == b {
            return;
        }
        // orient: `a` ends at w, `b` starts at w
        let (a, b) = if self.edges[a].v == w { (a, b) } else { (b, a) };
        if self.edges[a].v != w || self.edges[b].u != w {
            return;
        }
        let end = self.edges[b].v;
        self.edges[a].v = end;
        let extra = self.edges[b].len;
        self.edges[a].len += extra;
        self.edges[b].alive = false;
        for slot in self.inc[end].iter_mut() {
            if *slot == b {
                *slot = a;
                break;
            }
        }
        self.inc[w].clear();
        self.alive[w] = false;
        self.index.remove(&self.pos[w]);
    }

    /// Dhar's algorithm; the divisor must be effective away from `q`.
    fn reduce(&mut self, q: usize, log: &mut Vec<FiringMove>) -> Result<()> {
        for round in 0.. {
            if round >= MAX_FIRINGS {
                return Err(Error::Internal(format!(
                    "reduction did not terminate after {MAX_FIRINGS} firings ({} working vertices)",
                    self.pos.len()
                )));
            }
            let burnt = self.burn(q);
            if burnt.iter().all(|&b| b) {
                return Ok(());
            }
            let mut exits = Vec::new();
            for x in 0..self.pos.len() {
                if burnt[x] {
                    continue;
                }
                for &e in &self.inc[x] {
                    let y = self.other(e, x);
                    if burnt[y] {
                        exits.push((x, e));
                    }
                }
            }
            let amount = exits
                .iter()
                .map(|&(_, e)| self.edges[e].len)
                .min()
                .expect("an unburnt region has exits");
            log.push(FiringMove {
                region: self.region(&burnt),
                amount,
            });
            let mut touched = Vec::new();
            for (x, e) in exits {
                self.chips[x] -= 1;
                debug_assert!(self.chips[x] >= 0);
                let target = if self.edges[e].len == amount {
                    self.other(e, x)
                } else {
                    self.split(e, x, amount)
                };
                self.chips[target] += 1;
                touched.push(x);
            }
            for x in touched {
                self.merge(x);
            }
        }
        unreachable!()
    }

    fn is_burnt_through(&self, q: usize) -> bool {
        self.burn(q).iter().all(|&b| b)
    }

    fn divisor(&self) -> Divisor {
        let mut d = Divisor::zero(self.base.clone());
        for v in 0..self.pos.len() {
            if self.alive[v] && self.chips[v] != 0 {
                d.add(self.pos[v], self.chips[v]);
            }
        }
        d
    }
}

fn check_point(g: &MetricGraph, q: &GraphPoint) -> Result<()> {
    if g.contains_point(q) {
        Ok(())
    } else {
        Err(Error::Internal(format!("{q} is not a point of the graph")))
    }
}

/// The `q`-reduced divisor equivalent to `d`, with its firing log.
pub fn reduce_with_log(d: &Divisor, q: &GraphPoint) -> Result<Reduction> {
    let g = d.graph_arc().clone();
    check_point(&g, q)?;
    let genus = g.genus() as i64;
    let mut cur = d.clone();
    let mut log = Vec::new();
    // make the divisor effective away from q: -p ~ E - (g+1) q
    let negatives: Vec<(GraphPoint, i64)> = d
        .chips()
        .iter()
        .filter(|&(p, &c)| c < 0 && p != q)
        .map(|(p, &c)| (*p, -c))
        .collect();
    for (p, k) in negatives {
        let mut seed = Divisor::zero(g.clone());
        seed.add(*q, genus + 1);
        seed.add(p, -1);
        let mut work = Work::new(&seed, &[p]);
        let mut moves = Vec::new();
        work.reduce(work.index[&p], &mut moves)?;
        let e = work.divisor();
        let delta = e.minus(&seed)?;
        cur = cur.plus(&delta.scaled(k))?;
        log.extend(moves.into_iter().map(|firing| LoggedMove { firing, times: k }));
    }
    let mut work = Work::new(&cur, &[*q]);
    let mut moves = Vec::new();
    work.reduce(work.index[q], &mut moves)?;
    log.extend(moves.into_iter().map(|firing| LoggedMove { firing, times: 1 }));
    Ok(Reduction {
        divisor: work.divisor(),
        log,
    })
}

pub fn reduced_divisor(d: &Divisor, q: &GraphPoint) -> Result<Divisor> {
    Ok(reduce_with_log(d, q)?.divisor)
}

/// Effective away from `q` and every region avoiding `q` burns.
pub fn is_reduced(d: &Divisor, q: &GraphPoint) -> bool {
    if d.chips().iter().any(|(p, &c)| c < 0 && p != q) {
        return false;
    }
    let work = Work::new(d, &[*q]);
    work.is_burnt_through(work.index[q])
}
