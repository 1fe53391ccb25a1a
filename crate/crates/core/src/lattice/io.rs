//! Line-oriented text formats.
//!
//! Triangulation: a `degree d` header followed by one triangle per line,
//! `x1,y1 x2,y2 x3,y3`. Several triangulations may follow one another; each
//! starts with its own header. Blank lines and `#` comments are ignored.
//!
//! Heights: one `x,y num/den` line per lattice point.

use std::fmt::Write;

use super::{newton_points, HeightFunction, LatticePoint, LatticeTriangle, Triangulation};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

/// Canonical serialization; the triangle order is the sorted order.
pub fn write_triangulation(t: &Triangulation) -> String {
    let mut s = format!("degree {}\n", t.degree);
    for tri in &t.triangles {
        writeln!(s, "{tri}").unwrap();
    }
    s
}

pub fn write_triangulations(ts: &[Triangulation]) -> String {
    ts.iter().map(write_triangulation).collect()
}

fn parse_point(tok: &str, line: usize) -> Result<LatticePoint> {
    let err = || Error::Parse {
        line,
        msg: format!("expected x,y but found {tok:?}"),
    };
    let (x, y) = tok.split_once(',').ok_or_else(err)?;
    Ok(LatticePoint::new(
        x.trim().parse().map_err(|_| err())?,
        y.trim().parse().map_err(|_| err())?,
    ))
}

pub fn parse_triangulations(text: &str) -> Result<Vec<Triangulation>> {
    let mut out = Vec::new();
    let mut current: Option<(u32, Vec<LatticeTriangle>)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("degree") {
            let d: u32 = rest.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad degree header {line:?}"),
            })?;
            if d == 0 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "degree must be positive".into(),
                });
            }
            if let Some((d0, tris)) = current.take() {
                out.push(Triangulation::new(d0, tris));
            }
            current = Some((d, Vec::new()));
            continue;
        }
        let Some((d, tris)) = current.as_mut() else {
            return Err(Error::Parse {
                line: line_no,
                msg: "triangle before the `degree` header".into(),
            });
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 3 points, found {}", toks.len()),
            });
        }
        let p: Vec<LatticePoint> = toks
            .iter()
            .map(|t| parse_point(t, line_no))
            .collect::<Result<_>>()?;
        if let Some(bad) = p.iter().find(|q| !q.in_triangle(*d as i64)) {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("point {bad} outside the degree-{d} triangle"),
            });
        }
        let tri = LatticeTriangle::new(p[0], p[1], p[2]).map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        tris.push(tri);
    }
    if let Some((d, tris)) = current {
        out.push(Triangulation::new(d, tris));
    }
    Ok(out)
}

pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    let mut ts = parse_triangulations(text)?;
    match ts.len() {
        1 => Ok(ts.pop().unwrap()),
        n => Err(Error::Parse {
            line: 0,
            msg: format!("expected one triangulation, found {n}"),
        }),
    }
}

pub fn write_heights(h: &HeightFunction) -> String {
    let mut s = String::new();
    for (p, v) in newton_points(h.degree as i64).unwrap().iter().zip(&h.heights) {
        let v = if v.is_integer() {
            format!("{}/1", v.numer())
        } else {
            fmt_q(v)
        };
        writeln!(s, "{p} {v}").unwrap();
    }
    s
}

pub fn parse_heights(text: &str) -> Result<HeightFunction> {
    let mut entries: Vec<(LatticePoint, Q)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (pt, val) = line.split_once(char::is_whitespace).ok_or(Error::Parse {
            line: line_no,
            msg: "expected `x,y value`".into(),
        })?;
        let p = parse_point(pt, line_no)?;
        let v = parse_q(val.trim()).map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("bad height {val:?}"),
        })?;
        entries.push((p, v));
    }
    let d = entries.iter().map(|(p, _)| p.x + p.y).max().ok_or(Error::Parse {
        line: 0,
        msg: "empty height file".into(),
    })?;
    if d < 1 {
        return Err(Error::Parse {
            line: 0,
            msg: "heights must cover a triangle of degree at least 1".into(),
        });
    }
    let mut h = HeightFunction::zero(d as u32);
    let mut seen = vec![false; h.heights.len()];
    for (p, v) in entries {
        if !p.in_triangle(d) {
            return Err(Error::Parse {
                line: 0,
                msg: format!("point {p} outside the degree-{d} triangle"),
            });
        }
        let idx = super::point_index(p, d);
        seen[idx] = true;
        h.set(p, v);
    }
    if let Some(miss) = seen.iter().position(|s| !s) {
        return Err(Error::Parse {
            line: 0,
            msg: format!("no height for {}", newton_points(d)?[miss]),
        });
    }
    Ok(h)
}
