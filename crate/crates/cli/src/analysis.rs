//! Single-curve analysis document shared by `analyze` and `render`.

use quartic_core::census::{analyze_curve, choose_heights, Checks, CurveReport, HeightPolicy};
use quartic_core::lattice::{HeightFunction, Triangulation};
use quartic_core::metricgraph::SkeletalCurve;
use quartic_core::tropcurve::{dual_curve, PlanePoint, TropicalCurve};
use quartic_core::Result;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Analysis {
    pub triangulation: Triangulation,
    pub heights: HeightFunction,
    pub curve: TropicalCurve,
    /// Curve edges on the skeleton.
    pub skeleton_segments: Vec<(PlanePoint, PlanePoint)>,
    /// Theta chips placed back on the curve, one list per theta.
    pub theta_points: Vec<Vec<PlanePoint>>,
    pub report: CurveReport,
}

pub fn analyze(t: Triangulation, heights: Option<HeightFunction>, policy: HeightPolicy, checks: Checks) -> Result<Analysis> {
    let heights = match heights {
        Some(h) => h,
        None => choose_heights(&t, policy, 0)?,
    };
    let curve = dual_curve(&t, &heights)?;
    let sc = SkeletalCurve::new(curve.clone());
    let report = analyze_curve(curve.clone(), checks, 0);
    let theta_points = report
        .thetas
        .iter()
        .map(|th| th.divisor.iter().map(|chip| sc.embed(&chip.point)).collect())
        .collect();
    Ok(Analysis {
        triangulation: t,
        heights,
        skeleton_segments: sc.skeleton.segments(&curve),
        curve,
        theta_points,
        report,
    })
}
