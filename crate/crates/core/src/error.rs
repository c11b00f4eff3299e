use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("curve needs at least {min} nodes, got {got}")]
    TooFewNodes { got: usize, min: usize },

    #[error("degenerate curve: spacing {spacing:.3e} at node {node} is below the threshold {threshold:.3e}")]
    DegenerateCurve { node: usize, spacing: f64, threshold: f64 },

    #[error("curve passes through the origin at node {node} (|v| = {radius:.3e})")]
    OriginCrossing { node: usize, radius: f64 },

    #[error("curve is not star-shaped: cos psi = {cos_psi:.6} at node {node} (margin {margin})")]
    NotStarShaped { node: usize, cos_psi: f64, margin: f64 },

    #[error("point lies outside the star cone: <xi, eta_nu> = {dot:.3e}")]
    ConeViolation { dot: f64 },

    #[error("angle {0} is too close to +-pi/2 for the star profile")]
    ProfileDomain(f64),

    #[error("operation requires the isotropic weight g = 1")]
    UnsupportedAnisotropy,

    #[error("time {t} is not before the blow-up time {blowup}")]
    BeyondBlowup { t: f64, blowup: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid too coarse: {got} points, need at least {min}")]
    GridTooCoarse { got: usize, min: usize },

    #[error("characteristic left the bounded region at s = {s:.6} (|state| = {norm:.3e})")]
    CharacteristicBlowup { s: f64, norm: f64 },

    #[error("field has no gradient at the requested point")]
    GradientUnavailable,

    #[error("malformed curve file: {0}")]
    MalformedCsv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numerical failures (as opposed to bad input) map to a distinct CLI exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateCurve { .. }
                | Error::OriginCrossing { .. }
                | Error::NotStarShaped { .. }
                | Error::ConeViolation { .. }
                | Error::ProfileDomain(_)
                | Error::CharacteristicBlowup { .. }
                | Error::BeyondBlowup { .. }
        )
    }
}
