//! Lines along which the combinatorics of `L ∩ C` can change as the vertex
//! of `L` moves: the three ray directions through every curve vertex and
//! the supporting lines of the bounded edges.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::Result;
use crate::tropcurve::geometry::det;
use crate::tropcurve::{Dir, Piece, PlanePoint, TropicalCurve};
use crate::Q;

/// `{x : det(dir, x) = level}` with `dir` primitive and sign-normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Line {
    dir: Dir,
    level: Q,
}

fn det_q(d: Dir, p: PlanePoint) -> Q {
    p.y * d.0 - p.x * d.1
}

impl Line {
    fn through(p: PlanePoint, d: Dir) -> Self {
        let dir = if d.0 < 0 || (d.0 == 0 && d.1 < 0) { (-d.0, -d.1) } else { d };
        Line {
            dir,
            level: det_q(dir, p),
        }
    }

    fn meet(&self, o: &Line) -> Option<PlanePoint> {
        let dd = det(self.dir, o.dir);
        if dd == 0 {
            return None;
        }
        let (a, b) = (self.dir, o.dir);
        let x = (self.level * b.0 - o.level * a.0) / dd;
        let y = (self.level * b.1 - o.level * a.1) / dd;
        Some(PlanePoint::new(x, y))
    }
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    lines: Vec<Line>,
}

const SWEEP: [Dir; 3] = [(1, 0), (0, 1), (1, 1)];

impl Arrangement {
    pub fn new(c: &TropicalCurve) -> Self {
        let mut set = BTreeSet::new();
        for v in &c.vertices {
            for d in SWEEP {
                set.insert(Line::through(v.pos, d));
            }
        }
        for e in &c.edges {
            set.insert(Line::through(c.vertices[e.ends.0].pos, e.direction));
        }
        Self {
            lines: set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Parameters where `p` crosses a line of the arrangement, sorted.
    pub fn crossings(&self, p: &Piece) -> Vec<Q> {
        let mut out = Vec::new();
        for l in &self.lines {
            let dd = det(l.dir, p.dir);
            if dd == 0 {
                continue;
            }
            let t = (l.level - det_q(l.dir, p.start)) / dd;
            if t >= Q::zero() && p.len.is_none_or(|len| t <= len) {
                out.push(t);
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Sample parameters along `p`: its ends, every crossing, and a point
    /// inside every open cell between them.
    pub fn samples(&self, p: &Piece) -> Vec<Q> {
        let mut cuts = self.crossings(p);
        if cuts.first() != Some(&Q::zero()) {
            cuts.insert(0, Q::zero());
        }
        match p.len {
            Some(l) => {
                if cuts.last() != Some(&l) {
                    cuts.push(l);
                }
            }
            None => {
                let last = *cuts.last().unwrap();
                cuts.push(last + Q::from_integer(1));
            }
        }
        let mut out = vec![cuts[0]];
        for w in cuts.windows(2) {
            out.push((w[0] + w[1]) / 2);
            out.push(w[1]);
        }
        out
    }

    /// Follows `p` from its start, which is assumed to pass `ok`, while the
    /// samples keep passing; returns the last passing parameter, or `None`
    /// when a ray passes all the way.
    pub fn run_from_start<F>(&self, p: &Piece, mut ok: F) -> Result<Option<Q>>
    where
        F: FnMut(PlanePoint) -> Result<bool>,
    {
        let samples = self.samples(p);
        let mut last = None;
        for (i, &t) in samples.iter().enumerate() {
            if i > 0 && !ok(p.at(t))? {
                return Ok(last);
            }
            last = Some(t);
            if p.len.is_none() && i == samples.len() - 1 {
                return Ok(None);
            }
        }
        Ok(last)
    }

    /// Vertices of the arrangement inside the box spanned by `lo`, `hi`.
    pub fn vertices_within(&self, lo: PlanePoint, hi: PlanePoint) -> Vec<PlanePoint> {
        let mut set = BTreeSet::new();
        for (i, a) in self.lines.iter().enumerate() {
            for b in &self.lines[i + 1..] {
                if let Some(p) = a.meet(b) {
                    if p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y {
                        set.insert(p);
                    }
                }
            }
        }
        set.into_iter().collect()
    }
}
