use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("query {q} out of range [1, {n} - 1] for modulus {n}")]
    QueryOutOfRange { q: u64, n: u64 },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("state is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("expected a {expected} state, found {found}")]
    LayoutMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("state mixes several x values, expected support only on x = {expected}")]
    MixedAnchor { expected: u64 },

    #[error("state carries squared amplitude {mass:.3e} on the excluded vertex {vertex}")]
    ExcludedVertexMass { vertex: u64, mass: f64 },

    #[error("post-measurement state is not a parity eigenstate on edge ({a}, {b})")]
    AmbiguousParity { a: u64, b: u64 },

    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("distribution is not normalized (sum {sum})")]
    Unnormalized { sum: f64 },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("cap exceeded: {what} = {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("input {input} puts no mass on valid answers, refinement undefined")]
    NoValidMass { input: usize },

    #[error("declared cost {m} is below the family mutual information {info}")]
    CostBelowInformation { m: f64, info: f64 },

    #[error("no protocol with at most {max_messages} messages reaches error {eps}")]
    Infeasible { max_messages: usize, eps: f64 },
}
