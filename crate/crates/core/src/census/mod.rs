//! The census pipeline: per-curve analysis and the ordered run over all
//! S3-orbits of unimodular triangulations.

mod checks;

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitangent::{bitangent_classes, BitangentReport};
use crate::divisor::Chip;
use crate::error::{Error, Result};
use crate::hyperelliptic::{cut_length_witness, decide, CutWitness, Reason};
use crate::lattice::{
    enumerate_unimodular_triangulations, induces, regular_heights, s3_orbits, EnumerationConfig, HeightFunction,
    Triangulation,
};
use crate::metricgraph::{CombinatorialType, GraphPoint, SkeletalCurve};
use crate::rational::{fmt_q, qi};
use crate::theta::{all_theta_characteristics, ThetaCategory};
use crate::tropcurve::{check_balancing, dual_curve, TropicalCurve};

pub use checks::{random_divisor, random_line, random_point, sample_riemann_roch, sample_sections, section_is_canonical};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum HeightPolicy {
    /// Smallest integer heights from the regularity LP.
    Minimal,
    /// Minimal heights scaled by `8k + 1` plus seeded noise in `[0, k)`.
    Perturbed { seed: u64, spread: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Checks {
    /// Structure, thetas, bitangents and hyperellipticity.
    Fast,
    /// Also sampled Riemann–Roch and line-section checks.
    All,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub degree: u32,
    pub heights: HeightPolicy,
    /// Worker threads; 0 uses the rayon default. Not serialized, so output
    /// does not depend on it.
    #[serde(skip)]
    pub jobs: usize,
    pub checks: Checks,
    /// Refuse to run past this many triangulations.
    pub max_triangulations: usize,
    /// Seed for sampled checks.
    pub seed: u64,
    /// Analyze only the first this many orbits.
    pub max_orbits: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            degree: 4,
            heights: HeightPolicy::Minimal,
            jobs: 0,
            checks: Checks::All,
            max_triangulations: 100_000,
            seed: 0,
            max_orbits: None,
        }
    }
}

pub fn choose_heights(t: &Triangulation, policy: HeightPolicy, salt: u64) -> Result<HeightFunction> {
    let h0 = regular_heights(t)?;
    match policy {
        HeightPolicy::Minimal => Ok(h0),
        HeightPolicy::Perturbed { seed, spread } => {
            if spread < 1 {
                return Err(Error::Degenerate(format!("perturbation spread {spread}")));
            }
            let mut rng = StdRng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let mut h = h0;
            for x in h.heights.iter_mut() {
                *x = *x * qi(8 * spread + 1) + qi(rng.gen_range(0..spread));
            }
            if !induces(&h, t) {
                return Err(Error::InconsistentLift("perturbed heights change the subdivision".into()));
            }
            Ok(h)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonEdge {
    pub u: usize,
    pub v: usize,
    pub length: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaRecord {
    pub flow: Vec<usize>,
    pub divisor: Vec<Chip>,
    pub category: Option<ThetaCategory>,
}

/// Why a curve's theta categories differ from the type's usual counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Deviation {
    /// Equal lengths put a chip on a vertex.
    VertexTie,
    /// One-bridge curve whose bridge is no longer than the edges into the
    /// digon: both chips of the loop-and-digon flow sit next to the digon.
    LengthRegime,
    Unexplained,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub balanced: bool,
    pub smooth: bool,
    pub genus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hyperelliptic {
    pub verdict: bool,
    pub reason: Reason,
    pub cut: Option<CutWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    pub structure: Structure,
    pub combinatorial_type: CombinatorialType,
    pub skeleton: Vec<SkeletonEdge>,
    pub thetas: Vec<ThetaRecord>,
    /// Rigid, flexible, tandem.
    pub theta_counts: [usize; 3],
    pub deviation: Option<Deviation>,
    pub bitangents: Vec<BitangentReport>,
    pub hyperelliptic: Option<Hyperelliptic>,
    pub riemann_roch_ok: Option<bool>,
    pub sections_canonical: Option<bool>,
    /// Theorem violations and failures; empty on a clean curve.
    pub violations: Vec<String>,
}

/// Usual rigid/flexible/tandem counts per type.
pub fn expected_theta_counts(ty: CombinatorialType) -> Option<[usize; 3]> {
    match ty {
        CombinatorialType::Honeycomb => Some([7, 0, 0]),
        CombinatorialType::MickeyMouse => Some([6, 0, 1]),
        CombinatorialType::OneBridge => Some([4, 3, 0]),
        CombinatorialType::TwoBridge => Some([3, 3, 1]),
        _ => None,
    }
}

/// A one-bridge skeleton whose bridge is at most as long as both edges
/// leaving its inner end.
fn long_inner_edges(c: &SkeletalCurve) -> bool {
    let g = &c.graph;
    for b in g.bridges() {
        let e = &g.edges[b];
        for end in [e.u, e.v] {
            let others: Vec<usize> = g.incidences(end).into_iter().map(|(x, _)| x).filter(|&x| x != b).collect();
            if others.len() == 2 && others.iter().all(|&x| !g.edges[x].is_loop()) {
                return others.iter().all(|&x| g.edges[x].length >= e.length);
            }
        }
    }
    false
}

fn deviation(c: &SkeletalCurve, ty: CombinatorialType, counts: [usize; 3], thetas: &[ThetaRecord]) -> Option<Deviation> {
    let expected = expected_theta_counts(ty)?;
    if counts == expected {
        return None;
    }
    if ty == CombinatorialType::OneBridge && counts == [4, 2, 1] && long_inner_edges(c) {
        return Some(Deviation::LengthRegime);
    }
    let tie = thetas
        .iter()
        .any(|t| t.divisor.iter().any(|x| matches!(x.point, GraphPoint::Vertex(_))));
    Some(if tie { Deviation::VertexTie } else { Deviation::Unexplained })
}

fn note(violations: &mut Vec<String>, stage: &str, e: &Error) {
    violations.push(format!("{stage}: {e}"));
}

pub fn analyze_curve(curve: TropicalCurve, checks: Checks, seed: u64) -> CurveReport {
    let structure = Structure {
        balanced: check_balancing(&curve),
        smooth: curve.is_smooth(),
        genus: 0,
    };
    let c = SkeletalCurve::new(curve);
    let mut violations = Vec::new();
    let structure = Structure {
        genus: c.graph.genus(),
        ..structure
    };
    if !structure.balanced || !structure.smooth {
        violations.push("curve is not a smooth balanced quartic".into());
    }
    let ty = c.graph.classify_type();
    let skeleton = c
        .graph
        .edges
        .iter()
        .map(|e| SkeletonEdge {
            u: e.u,
            v: e.v,
            length: fmt_q(&e.length),
        })
        .collect();
    let mut thetas = Vec::new();
    let mut counts = [0usize; 3];
    match all_theta_characteristics(&c.graph) {
        Ok(ts) => {
            for t in ts {
                if let Some(k) = t.category {
                    counts[k as usize] += 1;
                }
                thetas.push(ThetaRecord {
                    flow: t.flow.edges.clone(),
                    divisor: t.divisor.to_json(),
                    category: t.category,
                });
            }
        }
        Err(e) => note(&mut violations, "thetas", &e),
    }
    let deviation = deviation(&c, ty, counts, &thetas);
    let mut bitangents = Vec::new();
    let mut hyperelliptic = None;
    let (mut riemann_roch_ok, mut sections_canonical) = (None, None);
    if structure.genus == 3 {
        match bitangent_classes(&c) {
            Ok(cl) => bitangents = cl.iter().map(|x| x.report()).collect(),
            Err(e) => note(&mut violations, "bitangents", &e),
        }
        match decide(&c.graph) {
            Ok(v) => {
                if v.hyperelliptic {
                    violations.push("skeleton is hyperelliptic".into());
                }
                let cut = match cut_length_witness(&c) {
                    Ok(w) => {
                        if !w.holds() {
                            violations.push(format!(
                                "cut edge {} is not longer than edge {}",
                                w.long_edge, w.short_edge
                            ));
                        }
                        Some(w)
                    }
                    Err(Error::NotApplicable(_)) => None,
                    Err(e) => {
                        note(&mut violations, "cut witness", &e);
                        None
                    }
                };
                hyperelliptic = Some(Hyperelliptic {
                    verdict: v.hyperelliptic,
                    reason: v.reason,
                    cut,
                });
            }
            Err(e) => note(&mut violations, "hyperellipticity", &e),
        }
        if checks == Checks::All {
            let mut rng = StdRng::seed_from_u64(seed);
            match sample_riemann_roch(&c.graph, &mut rng, 3) {
                Ok(ok) => riemann_roch_ok = Some(ok),
                Err(e) => note(&mut violations, "riemann-roch", &e),
            }
            match sample_sections(&c, &mut rng, 2) {
                Ok(ok) => sections_canonical = Some(ok),
                Err(e) => note(&mut violations, "line sections", &e),
            }
            if riemann_roch_ok == Some(false) {
                violations.push("riemann-roch residual is nonzero".into());
            }
            if sections_canonical == Some(false) {
                violations.push("line section is not canonical".into());
            }
        }
    } else {
        violations.push(format!("skeleton has genus {}", structure.genus));
    }
    if let Some(Deviation::Unexplained) = deviation {
        violations.push(format!("theta categories {counts:?} for type {ty}"));
    }
    CurveReport {
        structure,
        combinatorial_type: ty,
        skeleton,
        thetas,
        theta_counts: counts,
        deviation,
        bitangents,
        hyperelliptic,
        riemann_roch_ok,
        sections_canonical,
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    /// Index of the orbit's canonical representative among all sorted
    /// triangulations.
    pub triangulation_id: usize,
    pub orbit_id: usize,
    pub orbit_size: usize,
    pub regular: bool,
    pub heights: Option<Vec<String>>,
    pub report: Option<CurveReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub degree: u32,
    pub triangulations: usize,
    pub regular_triangulations: usize,
    pub orbits: usize,
    pub regular_orbits: usize,
    pub types: BTreeMap<String, usize>,
    /// Per type, the rigid/flexible/tandem counts and how many curves show them.
    pub theta_counts: BTreeMap<String, BTreeMap<String, usize>>,
    pub deviations: BTreeMap<String, usize>,
    pub seven_bitangent_classes: usize,
    pub family_classes: usize,
    pub curves_with_family: usize,
    pub hyperelliptic: usize,
    pub cut_witness_holds: usize,
    pub cut_witness_checked: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Census {
    pub config: RunConfig,
    pub records: Vec<CensusRecord>,
    pub summary: Summary,
}

fn summarize(degree: u32, triangulations: usize, records: &[CensusRecord]) -> Summary {
    let mut s = Summary {
        degree,
        triangulations,
        orbits: records.len(),
        ..Summary::default()
    };
    for r in records {
        if !r.regular {
            continue;
        }
        s.regular_triangulations += r.orbit_size;
        s.regular_orbits += 1;
        let Some(rep) = &r.report else { continue };
        let ty = rep.combinatorial_type.name().to_string();
        *s.types.entry(ty.clone()).or_default() += 1;
        let [a, b, c] = rep.theta_counts;
        *s.theta_counts.entry(ty).or_default().entry(format!("{a}/{b}/{c}")).or_default() += 1;
        if let Some(d) = rep.deviation {
            *s.deviations.entry(format!("{d:?}")).or_default() += 1;
        }
        if rep.bitangents.len() == 7 {
            s.seven_bitangent_classes += 1;
        }
        let fam = rep.bitangents.iter().filter(|b| b.is_family).count();
        s.family_classes += fam;
        s.curves_with_family += usize::from(fam > 0);
        if let Some(h) = &rep.hyperelliptic {
            s.hyperelliptic += usize::from(h.verdict);
            if let Some(w) = &h.cut {
                s.cut_witness_checked += 1;
                s.cut_witness_holds += usize::from(w.holds());
            }
        }
        s.violations += usize::from(!rep.violations.is_empty());
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub degree: u32,
    pub triangulations: usize,
    pub regular_triangulations: usize,
    pub orbits: usize,
    pub regular_orbits: usize,
    /// Indices of the non-regular triangulations.
    pub non_regular: Vec<usize>,
}

/// All unimodular triangulations of the degree-`d` triangle with orbit and
/// regularity counts.
pub fn enumerate_with_counts(degree: u32) -> Result<(Vec<Triangulation>, EnumerationSummary)> {
    let ts = enumerate_unimodular_triangulations(degree as i64, &EnumerationConfig::default())?;
    let orbits = s3_orbits(&ts);
    let regular: Vec<bool> = orbits
        .par_iter()
        .map(|o| match regular_heights(&o.representative) {
            Ok(_) => Ok(true),
            Err(Error::NonRegular(_)) => Ok(false),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;
    let mut non_regular: Vec<usize> = orbits
        .iter()
        .zip(&regular)
        .filter(|(_, r)| !**r)
        .flat_map(|(o, _)| o.members.iter().copied())
        .collect();
    non_regular.sort_unstable();
    let summary = EnumerationSummary {
        degree,
        triangulations: ts.len(),
        regular_triangulations: ts.len() - non_regular.len(),
        orbits: orbits.len(),
        regular_orbits: regular.iter().filter(|r| **r).count(),
        non_regular,
    };
    Ok((ts, summary))
}

/// Runs the census. Records come back in orbit order regardless of `jobs`.
pub fn run_census(cfg: &RunConfig) -> Result<Census> {
    let ts = enumerate_unimodular_triangulations(cfg.degree as i64, &EnumerationConfig::default())?;
    if ts.len() > cfg.max_triangulations {
        return Err(Error::ResourceLimit(format!(
            "{} triangulations exceed the limit of {}",
            ts.len(),
            cfg.max_triangulations
        )));
    }
    let mut orbits = s3_orbits(&ts);
    if let Some(n) = cfg.max_orbits {
        orbits.truncate(n);
    }
    let work = |(i, o): (usize, &crate::lattice::Orbit)| -> CensusRecord {
        let id = o.members.iter().copied().find(|&m| ts[m] == o.representative).unwrap_or(o.members[0]);
        let base = CensusRecord {
            triangulation_id: id,
            orbit_id: i,
            orbit_size: o.members.len(),
            regular: false,
            heights: None,
            report: None,
        };
        let h = match choose_heights(&o.representative, cfg.heights, id as u64) {
            Ok(h) => h,
            Err(Error::NonRegular(_)) => return base,
            Err(e) => {
                return CensusRecord {
                    regular: true,
                    report: Some(failed_report(format!("heights: {e}"))),
                    ..base
                }
            }
        };
        let heights = Some(h.heights.iter().map(fmt_q).collect());
        let report = if cfg.degree == 4 {
            match dual_curve(&o.representative, &h) {
                Ok(c) => Some(analyze_curve(c, cfg.checks, cfg.seed ^ id as u64)),
                Err(e) => Some(failed_report(format!("curve: {e}"))),
            }
        } else {
            None
        };
        CensusRecord {
            regular: true,
            heights,
            report,
            ..base
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::ResourceLimit(format!("thread pool: {e}")))?;
    let records: Vec<CensusRecord> = pool.install(|| orbits.par_iter().enumerate().map(work).collect());
    let summary = summarize(cfg.degree, ts.len(), &records);
    Ok(Census {
        config: cfg.clone(),
        records,
        summary,
    })
}

fn failed_report(msg: String) -> CurveReport {
    CurveReport {
        structure: Structure {
            balanced: false,
            smooth: false,
            genus: 0,
        },
        combinatorial_type: CombinatorialType::Other,
        skeleton: Vec::new(),
        thetas: Vec::new(),
        theta_counts: [0; 3],
        deviation: None,
        bitangents: Vec::new(),
        hyperelliptic: None,
        riemann_roch_ok: None,
        sections_canonical: None,
        violations: vec![msg],
    }
}
