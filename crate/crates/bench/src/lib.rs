//! Shared fixtures for the benchmarks.

use quartic_core::lattice::{enumerate_unimodular_triangulations, induces, EnumerationConfig, HeightFunction};
use quartic_core::metricgraph::SkeletalCurve;
use quartic_core::tropcurve::dual_curve;

/// The honeycomb quartic cut out by the heights `x^2 + xy + y^2`.
pub fn honeycomb() -> SkeletalCurve {
    let h = HeightFunction::quadratic(4);
    let t = enumerate_unimodular_triangulations(4, &EnumerationConfig::default())
        .expect("degree 4 is within limits")
        .into_iter()
        .find(|t| induces(&h, t))
        .expect("quadratic heights are regular");
    SkeletalCurve::new(dual_curve(&t, &h).expect("smooth curve"))
}
