//! Cross-metric comparisons: crossover radii, sampled bound checks, ratio
//! diagnostics and map quasi-invariance.

mod inequalities;
mod maps;
mod ratios;
mod roots;
pub mod suites;

pub use inequalities::{geodesic_tolerance, metric_inequalities, Check, InequalityReport};
pub use maps::{
    bilipschitz_map_check, conformal_invariance_check, linear_image, map_ratio_report,
    map_ratio_report_pairs, mobius_invariance_check, ConformalMap, LinearMap, MobiusMap,
    POLYLINE_POINTS, RATIO_TOL,
};
pub use ratios::{
    john_ratio, john_ratio_pairs, uniformity_ratio, uniformity_ratio_pairs, verify_bilipschitz,
    verify_monotonicity, RatioReport,
};
pub use roots::{
    annulus_gap, bisect, crossover_annulus, crossover_punctured_disk, find_root,
    punctured_disk_gap, sign_changes, RootResult, SCAN_POINTS,
};
