use std::collections::HashMap;

use rayon::prelude::*;

use super::{newton_points, LatticePoint, LatticeTriangle, Triangulation};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct EnumerationConfig {
    /// Largest degree accepted.
    pub max_degree: u32,
    /// Split the search over first-level branches with rayon.
    pub parallel: bool,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self {
            max_degree: 4,
            parallel: true,
        }
    }
}

/// Search tables over the unimodular triangles of one degree-`d` triangle.
struct Tables {
    points: Vec<LatticePoint>,
    triangles: Vec<[usize; 3]>,
    /// For each triangle, a bitset of the triangles overlapping it.
    overlap: Vec<Vec<u64>>,
    /// Directed edge (a, b) -> triangles with (a, b) as a ccw edge.
    by_edge: HashMap<(usize, usize), Vec<usize>>,
    words: usize,
}

impl Tables {
    fn new(d: i64) -> Self {
        let points = newton_points(d).unwrap();
        let n = points.len();
        let mut triangles = Vec::new();
        let mut lattice_tris = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let t = LatticeTriangle::new(points[a], points[b], points[c]);
                    if let Ok(t) = t {
                        if t.is_unimodular() {
                            let idx = t.vertices.map(|v| points.iter().position(|&p| p == v).unwrap());
                            triangles.push(idx);
                            lattice_tris.push(t);
                        }
                    }
                }
            }
        }
        let m = triangles.len();
        let words = m.div_ceil(64);
        let mut overlap = vec![vec![0u64; words]; m];
        for i in 0..m {
            for j in 0..m {
                if lattice_tris[i].overlaps(&lattice_tris[j]) {
                    overlap[i][j / 64] |= 1 << (j % 64);
                }
            }
        }
        let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (ti, t) in triangles.iter().enumerate() {
            for k in 0..3 {
                by_edge.entry((t[k], t[(k + 1) % 3])).or_default().push(ti);
            }
        }
        Self {
            points,
            triangles,
            overlap,
            by_edge,
            words,
        }
    }

    /// Unit boundary edges, directed counterclockwise around the big triangle.
    fn boundary_edges(&self, d: i64) -> Vec<(usize, usize)> {
        let idx = |x: i64, y: i64| {
            self.points
                .iter()
                .position(|p| p.x == x && p.y == y)
                .unwrap()
        };
        let mut out = Vec::new();
        for i in 0..d {
            out.push((idx(i, 0), idx(i + 1, 0)));
            out.push((idx(d - i, i), idx(d - i - 1, i + 1)));
            out.push((idx(0, d - i), idx(0, d - i - 1)));
        }
        out
    }
}

#[derive(Clone)]
struct State {
    /// Directed edges still needing a triangle on their left.
    open: Vec<(usize, usize)>,
    placed: Vec<usize>,
    forbidden: Vec<u64>,
}

impl State {
    fn place(&self, tables: &Tables, ti: usize) -> Option<State> {
        if self.forbidden[ti / 64] >> (ti % 64) & 1 == 1 {
            return None;
        }
        let t = tables.triangles[ti];
        let mut open = self.open.clone();
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            if let Some(pos) = open.iter().position(|&e| e == (a, b)) {
                open.swap_remove(pos);
            } else {
                open.push((b, a));
            }
        }
        let mut forbidden = self.forbidden.clone();
        for (w, o) in forbidden.iter_mut().zip(&tables.overlap[ti]) {
            *w |= o;
        }
        let mut placed = self.placed.clone();
        placed.push(ti);
        Some(State {
            open,
            placed,
            forbidden,
        })
    }

    /// The smallest open edge; its covering triangle is forced in any
    /// completion, so every tiling is reached along exactly one path.
    fn branches(&self, tables: &Tables) -> Vec<State> {
        let e = *self.open.iter().min().unwrap();
        tables
            .by_edge
            .get(&e)
            .map(|cands| cands.iter().filter_map(|&ti| self.place(tables, ti)).collect())
            .unwrap_or_default()
    }
}

fn search(tables: &Tables, state: State, out: &mut Vec<Vec<usize>>) {
    if state.open.is_empty() {
        out.push(state.placed);
        return;
    }
    for next in state.branches(tables) {
        search(tables, next, out);
    }
}

/// Every unimodular triangulation of the degree-`d` triangle, sorted.
///
/// Backtracking: repeatedly take the smallest edge that still needs a triangle
/// on one side and try each unimodular triangle that fits there without
/// overlapping the ones already placed.
pub fn enumerate_unimodular_triangulations(
    d: i64,
    config: &EnumerationConfig,
) -> Result<Vec<Triangulation>> {
    if d < 1 {
        return Err(Error::InvalidDegree(d));
    }
    if d > config.max_degree as i64 {
        return Err(Error::ResourceLimit(format!(
            "degree {d} exceeds the configured limit {}",
            config.max_degree
        )));
    }
    let tables = Tables::new(d);
    let root = State {
        open: tables.boundary_edges(d),
        placed: Vec::new(),
        forbidden: vec![0; tables.words],
    };
    // Two levels of prefixes give enough work units for the thread pool.
    let prefixes: Vec<State> = root
        .branches(&tables)
        .into_iter()
        .flat_map(|s| {
            if s.open.is_empty() {
                vec![s]
            } else {
                s.branches(&tables)
            }
        })
        .collect();
    let run = |s: State| {
        let mut out = Vec::new();
        search(&tables, s, &mut out);
        out
    };
    let raw: Vec<Vec<usize>> = if config.parallel {
        prefixes.into_par_iter().flat_map_iter(run).collect()
    } else {
        prefixes.into_iter().flat_map(run).collect()
    };
    let mut result: Vec<Triangulation> = raw
        .into_iter()
        .map(|placed| {
            let tris = placed
                .into_iter()
                .map(|ti| {
                    let [a, b, c] = tables.triangles[ti];
                    LatticeTriangle::new(tables.points[a], tables.points[b], tables.points[c])
                        .unwrap()
                })
                .collect();
            Triangulation::new(d as u32, tris)
        })
        .collect();
    result.sort();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::is_unimodular_triangulation;

    #[test]
    fn small_degrees() {
        let cfg = EnumerationConfig::default();
        let t1 = enumerate_unimodular_triangulations(1, &cfg).unwrap();
        assert_eq!(t1.len(), 1);
        let t2 = enumerate_unimodular_triangulations(2, &cfg).unwrap();
        assert_eq!(t2.len(), 4);
        for t in &t2 {
            assert!(is_unimodular_triangulation(t).ok);
        }
    }

    #[test]
    fn limits() {
        let cfg = EnumerationConfig {
            max_degree: 3,
            parallel: false,
        };
        assert_eq!(
            enumerate_unimodular_triangulations(4, &cfg),
            Err(Error::ResourceLimit("degree 4 exceeds the configured limit 3".into()))
        );
        assert_eq!(
            enumerate_unimodular_triangulations(0, &cfg),
            Err(Error::InvalidDegree(0))
        );
    }
}
