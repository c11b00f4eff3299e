//! Closed plane curves and their discrete geometry.

mod curve;
mod curve_geometry;
pub mod diff;
mod resample;

pub use curve::{polygon_signed_area, ClosedCurve, DEGENERACY_REL, MIN_NODES};
pub use curve_geometry::{derivatives, is_star_shaped, CurveGeometry, ORIGIN_EPS};
pub use diff::DiffScheme;
pub use resample::{resample_uniform_arclength, PeriodicSpline};

/// Enclosed area; see [`ClosedCurve::enclosed_area`].
pub fn enclosed_area(curve: &ClosedCurve) -> f64 {
    curve.enclosed_area()
}

/// Total length; see [`ClosedCurve::total_length`].
pub fn total_length(curve: &ClosedCurve) -> f64 {
    curve.total_length()
}
