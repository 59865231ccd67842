use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. Variants mirror the failure contracts of the
/// individual modules; the experiment runner maps them onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// The outgoing ray is tangent to a boundary component within tolerance.
    #[error("grazing collision near arc length r = {r:.9}")]
    GrazingCollision { r: f64 },

    /// The collision point lands within tolerance of a corner of the table.
    #[error("corner hit near arc length r = {r:.9}")]
    CornerHit { r: f64 },

    /// The ray tracer failed to find the next boundary intersection.
    #[error("orbit escaped the table (numerical failure at r = {r:.9})")]
    RayEscaped { r: f64 },

    /// No return to the inducing set within the iteration cap.
    #[error("no return to the inducing set within {cap} base-map iterations")]
    Overflow { cap: u64 },

    /// The very first record of a harvested return series failed.
    #[error("empty return series: first record failed: {0}")]
    EmptySeries(Box<Error>),

    #[error("insufficient samples: {count} effective samples (need >= {min})")]
    InsufficientSamples { count: u64, min: u64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("degenerate variance {sigma_sq:.3e} (coboundary-like observable)")]
    DegenerateVariance { sigma_sq: f64 },

    #[error("ratio diagnostic needs mean(f)*mean(g) != 0")]
    ZeroMeanProduct,

    #[error("empty admissible index range for m = {m}")]
    EmptyRange { m: u64 },

    #[error("kernel row for m = {m} has {len} entries, over the materialization limit {limit}")]
    RowTooLarge { m: u64, len: u64, limit: u64 },

    #[error("power iteration did not converge within {0} sweeps")]
    NoConvergence(u64),

    #[error("series length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("distortion band eps_d = {0} must lie in [0, 1)")]
    InvalidBand(f64),

    #[error("config error at `{key}`: {constraint}")]
    Config { key: String, constraint: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(key: &str, constraint: &str) -> Self {
        Error::Config {
            key: key.to_string(),
            constraint: constraint.to_string(),
        }
    }

    /// True for the orbit-level errors that harvesting treats as "discard
    /// this orbit and keep going".
    pub fn is_orbit_loss(&self) -> bool {
        matches!(
            self,
            Error::GrazingCollision { .. }
                | Error::CornerHit { .. }
                | Error::RayEscaped { .. }
                | Error::Overflow { .. }
        )
    }
}
