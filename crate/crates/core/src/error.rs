//! Error type shared across the crate.

/// Errors surfaced by geometric oracles, map inversion and orbit evaluation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The query point lies outside the domain the operation requires.
    #[error("point ({re}, {im}) lies outside the domain")]
    OutsideDomain { re: f64, im: f64 },

    /// Green's function evaluated on its diagonal.
    #[error("Green's function singularity: the two points coincide")]
    GreenSingularity,

    /// The requested quantity has no exact evaluation for this domain;
    /// callers fall back to the Monte Carlo estimator where one applies.
    #[error("no exact evaluation for this domain: {0}")]
    UnsupportedExact(&'static str),

    /// Newton inversion of a conformal map did not converge.
    #[error("map inversion did not converge (residual {residual:.3e})")]
    NewtonDiverged { residual: f64 },

    /// A backward step of the flow would leave the Koenigs domain.
    #[error("backward step exits the Koenigs domain at t = {t}")]
    BackwardInadmissible { t: f64 },

    /// The point lies in no petal, so it has no regular backward orbit.
    #[error("point lies in no petal")]
    NoPetal,

    /// The domain is of the wrong dynamical type for the operation
    /// (e.g. a strip-type domain passed to the parabolic classifier).
    #[error("domain has the wrong dynamical type: {0}")]
    WrongType(&'static str),

    /// Construction-time or parse-time validation failure.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn outside<T: crate::real::Real>(z: num_complex::Complex<T>) -> Self {
        Error::OutsideDomain {
            re: z.re.to_f64().unwrap_or(f64::NAN),
            im: z.im.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
