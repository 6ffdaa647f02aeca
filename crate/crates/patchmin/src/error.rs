use thiserror::Error;

/// Errors raised by surface construction, evaluation and the variational loop.
#[derive(Debug, Error)]
pub enum Error {
    #[error("boundary curves disagree at a shared corner ({which}, gap {gap:.3e})")]
    CornerMismatch { which: &'static str, gap: f64 },

    #[error("blending functions violate partition of unity or endpoint conditions")]
    InvalidBlending,

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("parameter point ({u}, {v}) lies outside the surface domain")]
    DomainError { u: f64, v: f64 },

    #[error("surface is singular at the requested point (vanishing metric determinant)")]
    SingularPoint,

    #[error("quadrature grid does not cover the surface domain")]
    GridMismatch,

    #[error("quadrature order must be at least 1 (got {0})")]
    InvalidOrder(usize),

    #[error("integration interval [{a}, {b}] is empty or inverted")]
    InvalidInterval { a: f64, b: f64 },

    #[error("relative tolerance must be positive (got {0})")]
    InvalidTolerance(f64),

    #[error("integrand returned a non-finite value at ({u}, {v})")]
    NonFiniteSample { u: f64, v: f64 },

    #[error("interpolation nodes must be pairwise distinct")]
    DuplicateNodes,

    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,

    #[error(
        "polynomial is unbounded below; expected even degree with positive leading coefficient"
    )]
    Unbounded,

    #[error("surface normal averages to zero; no variation direction can be chosen")]
    DegenerateNormal,
}

pub type Result<T> = std::result::Result<T, Error>;
