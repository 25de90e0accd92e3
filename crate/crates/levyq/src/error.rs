use thiserror::Error;

/// Errors surfaced by the symbolic and simulation layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("series has a nonzero constant term; exp is only defined for series vanishing at the origin")]
    NonzeroConstantTerm,

    #[error("order {requested} exceeds the configured maximum {limit} (raise the bound to allow larger tables)")]
    OrderLimit { requested: usize, limit: usize },

    /// Requested degree is beyond the model's available moment data. For a
    /// model with moments known only up to order K, degrees up to K can at
    /// least be written down, but the martingale property is guaranteed only
    /// up to degree K/2 + 1.
    #[error("model provides moment data up to order {available}: degree {requested} cannot be built; note that for a model truncated at order {available} the martingale property is guaranteed only up to degree {guaranteed}")]
    Truncated {
        requested: usize,
        available: usize,
        guaranteed: usize,
    },

    #[error("index {j} out of range 1..={n}")]
    IndexOutOfRange { j: usize, n: usize },

    #[error("invalid model spec `{0}` (expected brownian | poisson:RATE | gamma | cp-lognormal | sum:A+B | a JSON config file)")]
    ModelSpec(String),

    #[error("invalid model config: {0}")]
    ModelConfig(String),

    #[error("model `{0}` has no sampling recipe; only the named process models can be simulated")]
    NoSampler(String),

    #[error("model `{0}` has jumps that cannot be enumerated path by path; variations need a finite-activity jump part")]
    VariationsUnsupported(String),

    #[error("invalid simulation config: {0}")]
    SimConfig(String),

    #[error("statistic `{0}` has zero sample variance; no standard-error gate can be formed")]
    DegenerateStatistic(String),

    #[error("variations of order {requested} requested but only {available} are available")]
    VariationOrder { requested: usize, available: usize },

    #[error("polynomial is not in the span of the harmonic family: {0}")]
    NotInSpan(String),

    #[error("invalid polynomial JSON: {0}")]
    PolyJson(String),

    #[error("invalid rational `{0}` (expected `p` or `p/q` with integer p, q and q != 0)")]
    Rational(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
