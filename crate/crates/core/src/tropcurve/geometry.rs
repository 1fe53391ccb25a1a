//! Exact planar pieces (segments and rays with primitive integer directions)
//! and their set-theoretic intersections.

use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, qi, serde_q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanePoint {
    #[serde(with = "serde_q")]
    pub x: Q,
    #[serde(with = "serde_q")]
    pub y: Q,
}

impl PlanePoint {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Self::new(qi(x), qi(y))
    }

    pub fn offset(self, dir: Dir, t: Q) -> Self {
        Self::new(self.x + t * dir.0, self.y + t * dir.1)
    }

    pub fn midpoint(self, o: Self) -> Self {
        let two = qi(2);
        Self::new((self.x + o.x) / two, (self.y + o.y) / two)
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_q(&self.x), fmt_q(&self.y))
    }
}

/// An integer direction vector.
pub type Dir = (i64, i64);

pub fn primitive(d: Dir) -> Dir {
    let g = d.0.gcd(&d.1);
    assert!(g != 0, "zero direction");
    (d.0 / g, d.1 / g)
}

#[inline]
pub fn det(a: Dir, b: Dir) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

/// Writes `v = t * dir` for a primitive `dir`, returning `(dir, t)` with `t > 0`.
pub fn split_vector(from: PlanePoint, to: PlanePoint) -> Option<(Dir, Q)> {
    let (dx, dy) = (to.x - from.x, to.y - from.y);
    if dx.is_zero() && dy.is_zero() {
        return None;
    }
    // scale to an integer vector, then reduce
    let l = dx.denom().lcm(dy.denom());
    let ix = (dx * l).to_integer();
    let iy = (dy * l).to_integer();
    let g = ix.gcd(&iy);
    let dir = (ix / g, iy / g);
    Some((dir, Q::new(g, l)))
}

/// `start + t * dir` for `t` in `[0, len]`, or `[0, inf)` when `len` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Piece {
    pub start: PlanePoint,
    pub dir: Dir,
    #[serde(with = "crate::rational::serde_opt_q")]
    pub len: Option<Q>,
}

impl Piece {
    pub fn segment(a: PlanePoint, b: PlanePoint) -> Self {
        let (dir, len) = split_vector(a, b).expect("non-degenerate segment");
        Self {
            start: a,
            dir,
            len: Some(len),
        }
    }

    pub fn ray(start: PlanePoint, dir: Dir) -> Self {
        Self {
            start,
            dir: primitive(dir),
            len: None,
        }
    }

    pub fn at(&self, t: Q) -> PlanePoint {
        self.start.offset(self.dir, t)
    }

    pub fn end(&self) -> Option<PlanePoint> {
        self.len.map(|l| self.at(l))
    }

    fn in_range(&self, t: Q) -> bool {
        t >= Q::zero() && self.len.is_none_or(|l| t <= l)
    }

    /// Parameter of `p` if it lies on the piece.
    pub fn param_of(&self, p: PlanePoint) -> Option<Q> {
        let (dx, dy) = (p.x - self.start.x, p.y - self.start.y);
        // collinear: dx * dir.y == dy * dir.x
        if dx * self.dir.1 != dy * self.dir.0 {
            return None;
        }
        let t = if self.dir.0 != 0 {
            dx / self.dir.0
        } else {
            dy / self.dir.1
        };
        self.in_range(t).then_some(t)
    }

    pub fn contains(&self, p: PlanePoint) -> bool {
        self.param_of(p).is_some()
    }
}

/// Set-theoretic intersection of two pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Meet {
    Point(PlanePoint),
    Overlap(Piece),
}

pub fn intersect(a: &Piece, b: &Piece) -> Option<Meet> {
    let dd = det(a.dir, b.dir);
    let w = (b.start.x - a.start.x, b.start.y - a.start.y);
    if dd != 0 {
        // a.start + s a.dir = b.start + t b.dir
        let s = (w.0 * b.dir.1 - w.1 * b.dir.0) / dd;
        let t = (w.0 * a.dir.1 - w.1 * a.dir.0) / dd;
        return (a.in_range(s) && b.in_range(t)).then(|| Meet::Point(a.at(s)));
    }
    if w.0 * a.dir.1 != w.1 * a.dir.0 {
        return None;
    }
    // collinear; parametrize b along a
    let s0 = if a.dir.0 != 0 {
        w.0 / a.dir.0
    } else {
        w.1 / a.dir.1
    };
    let sign = if b.dir == a.dir { 1 } else { -1 };
    debug_assert!(b.dir == (-a.dir.0, -a.dir.1) || b.dir == a.dir);
    // b covers [s0, s0 + sign * len] along a
    let (blo, bhi): (Option<Q>, Option<Q>) = match (sign, b.len) {
        (1, Some(l)) => (Some(s0), Some(s0 + l)),
        (1, None) => (Some(s0), None),
        (_, Some(l)) => (Some(s0 - l), Some(s0)),
        (_, None) => (None, Some(s0)),
    };
    let lo = blo.map_or(Q::zero(), |v| v.max(Q::zero()));
    let hi = match (a.len, bhi) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) => Some(x),
        (None, y) => y,
    };
    match hi {
        Some(h) if h < lo => None,
        Some(h) if h == lo => Some(Meet::Point(a.at(lo))),
        Some(h) => Some(Meet::Overlap(Piece {
            start: a.at(lo),
            dir: a.dir,
            len: Some(h - lo),
        })),
        None => Some(Meet::Overlap(Piece {
            start: a.at(lo),
            dir: a.dir,
            len: None,
        })),
    }
}

/// Is `v` parallel to `d`?
pub fn parallel(v: Dir, d: Dir) -> bool {
    det(v, d) == 0
}

pub fn q_abs(v: Q) -> Q {
    v.abs()
}
