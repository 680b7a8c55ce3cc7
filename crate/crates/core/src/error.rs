//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector has {got} components, expected {expected}")]
    ComponentCount { expected: usize, got: usize },

    #[error("state is not normalized: ||psi|| = {0}")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian: max |M - M^H| entry = {0:.3e}")]
    NotHermitian(f64),

    #[error("matrix is not a projector: max |P^2 - P| entry = {0:.3e}")]
    NotProjector(f64),

    #[error("vector is not unit norm: ||v|| = {0}")]
    NotUnit(f64),

    #[error("vector does not represent a pure state: purity defect = {0:.3e}")]
    NotPure(f64),

    #[error("star product is undefined at N = 2; use star_raw with the combined coefficient")]
    StarUndefinedForQubits,

    #[error("degeneracy k = {k} out of range 1..=N-1 for N = {n}")]
    DegeneracyOutOfRange { k: usize, n: usize },

    #[error("undefined weak value: pre- and post-selection are orthogonal (|<f|i>| = {overlap:.3e})")]
    OrthogonalSelection { overlap: f64 },

    #[error("argument of a vanishing complex number is undefined")]
    UndefinedArgument,

    #[error("weak value is 0 and the argument is undefined (A psi_i = 0)")]
    ZeroObservableAction,

    #[error("argument decomposition undefined: <A> = {0:.3e} vanishes")]
    VanishingMeanValue(f64),

    #[error("decomposition has a_L > 0 but no direction vector")]
    MissingAlpha,

    #[error("no finite critical gamma: i and r are perpendicular")]
    NoCriticalGamma,

    #[error("i' is undefined: 1 + 2 gamma (r.i) + gamma^2 = {0:.3e}")]
    UndefinedIPrime(f64),

    #[error("antipodal pre- and post-selection on the Bloch sphere")]
    AntipodalStates,

    #[error("gamma grid point {gamma} is within {dist:.3e} of the critical value")]
    GridAtCriticalGamma { gamma: f64, dist: f64 },

    #[error("pointer grid [{min}, {max}] does not cover every shifted center by 8 sigma")]
    GridCoverage { min: f64, max: f64 },

    #[error("pointer grid needs at least 256 points, got {0}")]
    GridTooCoarse(usize),

    #[error("post-selection probability {0:.3e} is too small to condition on")]
    PostSelectionTooUnlikely(f64),

    #[error("need at least {need} coupling strengths, got {got}")]
    TooFewCouplings { need: usize, got: usize },

    #[error("coupling strength must be positive, got {0}")]
    NonPositiveCoupling(f64),

    #[error("need at least 3 states for a Bargmann invariant, got {0}")]
    TooFewStates(usize),

    #[error("eigendecomposition did not converge")]
    EigenFailed,

    #[error("scenario error at `{path}`: {message}")]
    Scenario { path: String, message: String },

    #[error("scenario is missing field `{0}` required by this command")]
    MissingField(&'static str),

    #[error("tensor cache: {0}")]
    TensorCache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
