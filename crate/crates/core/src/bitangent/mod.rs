//! Bitangent tropical lines of smooth quartics and their classes.
//!
//! A line is bitangent when the set `L ∩ C` has two connected components of
//! stable multiplicity 2, or one of multiplicity 4. The tangency divisor `T`
//! halves the section: inside each component the stable points are paired
//! and replaced by the midpoint of the path joining them, then pushed to the
//! skeleton. Every tangency divisor is verified by `2T ~ L·C`.

mod arrangement;
mod construct;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::divisor::{linearly_equivalent, reduced_divisor, Divisor};
use crate::error::{Error, Result};
use crate::metricgraph::{GraphPoint, SkeletalCurve};
use crate::theta::{all_theta_characteristics, ThetaCharacteristic};
use crate::tropcurve::geometry::split_vector;
use crate::tropcurve::{
    intersection_components, push_to_metric, stable_intersection, IntersectionComponent, PlanePoint,
    TropicalLine, VertexInterval,
};
use crate::Q;

pub use arrangement::Arrangement;
pub use construct::Method;

/// Tangency structure of a bitangent line.
#[derive(Clone, Debug)]
pub struct Tangency {
    /// Stable multiplicity of each component, largest first.
    pub profile: Vec<u32>,
    pub components: Vec<IntersectionComponent>,
    /// The line section pushed to the skeleton.
    pub section: Divisor,
    /// Half of the section: `2 * divisor ~ section`.
    pub divisor: Divisor,
    /// Inequivalent halves supported on the components; more than one only
    /// for degenerate components of multiplicity 4.
    pub halvings: Vec<Divisor>,
}

#[derive(Clone, Debug)]
pub struct BitangentLine {
    pub line: TropicalLine,
    pub profile: Vec<u32>,
    pub tangency: Divisor,
    /// Index of the theta characteristic in the curve's list.
    pub theta: usize,
    pub method: Method,
}

#[derive(Clone, Debug)]
pub struct BitangentClass {
    pub representative: BitangentLine,
    pub is_family: bool,
    pub family: Option<VertexInterval>,
}

/// The seven effective theta characteristics with reduced representatives
/// for class lookups.
#[derive(Clone, Debug)]
pub struct ThetaSet {
    pub thetas: Vec<ThetaCharacteristic>,
    reps: Vec<Divisor>,
}

impl ThetaSet {
    pub fn new(c: &SkeletalCurve) -> Result<Self> {
        let thetas = all_theta_characteristics(&c.graph)?;
        Self::from_thetas(thetas)
    }

    pub fn from_thetas(thetas: Vec<ThetaCharacteristic>) -> Result<Self> {
        let reps = thetas
            .iter()
            .map(|t| reduced_divisor(&t.divisor, &GraphPoint::Vertex(0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { thetas, reps })
    }

    /// Index of the theta characteristic equivalent to `d`, if any.
    pub fn class_of(&self, d: &Divisor) -> Result<Option<usize>> {
        let r = reduced_divisor(d, &GraphPoint::Vertex(0))?;
        Ok(self.reps.iter().position(|x| *x == r))
    }
}

/// Components of `L ∩ C` with their stable multiplicities.
pub fn intersection_profile(l: &TropicalLine, c: &SkeletalCurve) -> Result<(Vec<u32>, Vec<IntersectionComponent>)> {
    let comps = intersection_components(&l.to_curve(), &c.curve)?;
    let mut profile: Vec<u32> = comps.iter().map(|k| k.multiplicity).collect();
    profile.sort_unstable_by(|a, b| b.cmp(a));
    Ok((profile, comps))
}

pub fn is_bitangent_profile(p: &[u32]) -> bool {
    p == [2, 2] || p == [4]
}

/// Path midpoint between two points of a component, measured in lattice length.
fn component_midpoint(comp: &IntersectionComponent, a: PlanePoint, b: PlanePoint) -> Result<PlanePoint> {
    if a == b {
        return Ok(a);
    }
    let nodes = component_nodes(comp);
    let index: BTreeMap<PlanePoint, usize> = nodes.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut adj: Vec<Vec<(usize, Q)>> = vec![Vec::new(); nodes.len()];
    for s in &comp.segments {
        let mut on: Vec<(Q, usize)> = nodes
            .iter()
            .enumerate()
            .filter_map(|(i, p)| s.param_of(*p).map(|t| (t, i)))
            .collect();
        on.sort();
        for w in on.windows(2) {
            let len = w[1].0 - w[0].0;
            adj[w[0].1].push((w[1].1, len));
            adj[w[1].1].push((w[0].1, len));
        }
    }
    // the component is a subset of a tropical line, hence a tree
    let (ia, ib) = (index[&a], index[&b]);
    let mut parent: Vec<Option<(usize, Q)>> = vec![None; nodes.len()];
    let mut seen = vec![false; nodes.len()];
    let mut stack = vec![ia];
    seen[ia] = true;
    while let Some(x) = stack.pop() {
        for &(y, len) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, len));
                stack.push(y);
            }
        }
    }
    if !seen[ib] {
        return Err(Error::Internal("stable points in one component are not connected".into()));
    }
    let mut path = vec![(ib, Q::from_integer(0))];
    let mut x = ib;
    while let Some((p, len)) = parent[x] {
        path.last_mut().unwrap().1 = len;
        path.push((p, Q::from_integer(0)));
        x = p;
    }
    // path runs b -> a; each entry carries the length to the next one
    let total: Q = path.iter().map(|(_, l)| *l).sum();
    let mut left = total / 2;
    for &(i, len) in &path {
        if left <= len {
            let from = nodes[i];
            if left == Q::from_integer(0) {
                return Ok(from);
            }
            let next = path.iter().position(|(j, _)| *j == i).unwrap() + 1;
            let to = nodes[path[next].0];
            let (dir, _) = split_vector(from, to).expect("distinct nodes");
            return Ok(from.offset(dir, left));
        }
        left -= len;
    }
    Err(Error::Internal("midpoint beyond the path".into()))
}

/// Nodes of a component: isolated points, stable points and segment ends.
fn component_nodes(comp: &IntersectionComponent) -> Vec<PlanePoint> {
    let mut nodes: Vec<PlanePoint> = comp.points.clone();
    nodes.extend(comp.stable.iter().map(|(p, _)| *p));
    for s in &comp.segments {
        nodes.push(s.start);
        if let Some(e) = s.end() {
            nodes.push(e);
        }
    }
    nodes.sort();
    nodes.dedup();
    nodes
}

/// Candidate halves of a component's stable points, as point lists.
///
/// Two stable points (or one double point) are replaced by the midpoint of
/// the path joining them. A component of multiplicity 4 may carry both
/// tangencies anywhere on it: every pair drawn from the nodes, the path
/// midpoints between nodes and `hints` lying on the component is offered.
fn halvings(comp: &IntersectionComponent, hints: &[PlanePoint]) -> Result<Vec<Vec<PlanePoint>>> {
    let mut pts = Vec::new();
    for &(p, m) in &comp.stable {
        for _ in 0..m {
            pts.push(p);
        }
    }
    let pairings: Vec<Vec<(usize, usize)>> = match pts.len() {
        2 => vec![vec![(0, 1)]],
        4 => vec![vec![(0, 1), (2, 3)], vec![(0, 2), (1, 3)], vec![(0, 3), (1, 2)]],
        n => return Err(Error::Internal(format!("cannot halve {n} stable points"))),
    };
    let mut out: Vec<Vec<PlanePoint>> = Vec::new();
    let mut push = |mut h: Vec<PlanePoint>| {
        h.sort();
        if !out.contains(&h) {
            out.push(h);
        }
    };
    for pairing in pairings {
        let mut h = Vec::new();
        for (i, j) in pairing {
            h.push(component_midpoint(comp, pts[i], pts[j])?);
        }
        push(h);
    }
    if pts.len() == 4 {
        let nodes = component_nodes(comp);
        let mut cand = nodes.clone();
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                cand.push(component_midpoint(comp, a, b)?);
            }
        }
        cand.extend(hints.iter().copied().filter(|h| comp.contains(*h)));
        cand.sort();
        cand.dedup();
        for (i, &a) in cand.iter().enumerate() {
            for &b in &cand[i..] {
                push(vec![a, b]);
            }
        }
    }
    Ok(out)
}

/// Tangency structure of `l`, if it is bitangent to `c`.
pub fn is_bitangent(l: &TropicalLine, c: &SkeletalCurve) -> Result<Option<Tangency>> {
    tangency_with_hints(l, c, &[], None)
}

/// As [`is_bitangent`], offering `hints` as tangency candidates on
/// components of multiplicity 4.
///
/// Two components of multiplicity 2 determine the tangency divisor; if it
/// does not halve the section that is a theorem violation. A single
/// component of multiplicity 4 counts only when some candidate pair on it
/// halves the section. All halvings found, one per class, are returned.
///
/// With `thetas` given, a candidate halves the section exactly when it is
/// equivalent to one of them, since line sections are canonical; that
/// lookup replaces the equivalence test.
pub fn tangency_with_hints(
    l: &TropicalLine,
    c: &SkeletalCurve,
    hints: &[PlanePoint],
    thetas: Option<&ThetaSet>,
) -> Result<Option<Tangency>> {
    let (profile, components) = intersection_profile(l, c)?;
    if !is_bitangent_profile(&profile) {
        return Ok(None);
    }
    let section = push_to_metric(c, &stable_intersection(&l.to_curve(), &c.curve)?)?;
    let options: Vec<Vec<Vec<PlanePoint>>> = components.iter().map(|k| halvings(k, hints)).collect::<Result<_>>()?;
    let base = GraphPoint::Vertex(0);
    let mut found: Vec<Divisor> = Vec::new();
    let mut seen: Vec<Divisor> = Vec::new();
    let mut tried: Vec<Divisor> = Vec::new();
    let mut choice = vec![0usize; options.len()];
    'outer: loop {
        let mut t = Divisor::zero(c.graph.clone());
        for (k, &i) in choice.iter().enumerate() {
            for p in &options[k][i] {
                t.add(c.retract_point(*p)?, 1);
            }
        }
        if !tried.contains(&t) {
            tried.push(t.clone());
            let r = reduced_divisor(&t, &base)?;
            let halves = match thetas {
                Some(set) => set.reps.contains(&r),
                None => linearly_equivalent(&t.scaled(2), &section)?,
            };
            if halves && !seen.contains(&r) {
                seen.push(r);
                found.push(t);
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                break 'outer;
            }
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
    if found.is_empty() {
        if profile == [4] {
            return Ok(None);
        }
        return Err(Error::TheoremViolation(format!(
            "line at {} has profile {:?} but no halving of its section",
            l.vertex, profile
        )));
    }
    Ok(Some(Tangency {
        profile,
        components,
        section,
        divisor: found[0].clone(),
        halvings: found,
    }))
}

pub fn equivalent_bitangents(a: &BitangentLine, b: &BitangentLine) -> Result<bool> {
    linearly_equivalent(&a.tangency, &b.tangency)
}

pub use construct::{bitangent_classes, bitangent_from_theta};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitangentReport {
    pub theta: usize,
    pub vertex: PlanePoint,
    pub profile: Vec<u32>,
    pub tangency: Vec<crate::divisor::Chip>,
    pub method: Method,
    pub is_family: bool,
    pub family: Option<VertexInterval>,
}

impl BitangentClass {
    pub fn report(&self) -> BitangentReport {
        let r = &self.representative;
        BitangentReport {
            theta: r.theta,
            vertex: r.line.vertex,
            profile: r.profile.clone(),
            tangency: r.tangency.to_json(),
            method: r.method,
            is_family: self.is_family,
            family: self.family,
        }
    }
}

#[cfg(test)]
mod tests;
