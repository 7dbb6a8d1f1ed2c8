use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("group elements belong to different groups: {0}")]
    DescriptorMismatch(String),
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("observable `{0}` is unbounded; this operation requires a bounded observable")]
    UnboundedObservable(String),
    #[error("element budget exceeded: {needed} elements needed, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("perturbation produced an empty set at index {0}")]
    DegeneratePerturbation(usize),
    #[error("orbit search exhausted: no suitable index within horizon {horizon} for n={n}")]
    SearchExhausted { n: usize, horizon: u64 },
    #[error("observable `{0}` is bounded; the divergence construction needs an unbounded one")]
    BoundedObservable(String),
    #[error("ker(I-T) and range(I-T) do not span the space (dims {ker_dim}+{range_dim} != {dim}); power-bound hypothesis likely violated")]
    DecompositionFailure {
        ker_dim: usize,
        range_dim: usize,
        dim: usize,
    },
    #[error("power bound violated: |T^{k}| = {norm} exceeds declared bound {bound}")]
    PowerBoundViolated { k: usize, norm: f64, bound: f64 },
    #[error("actions do not commute on probe points (max deviation {0})")]
    NonCommutingActions(f64),
    #[error("observable `{0}` is not indicator-valued")]
    NonIndicator(String),
    #[error("observable `{0}` must be nonnegative with positive mean")]
    NonpositiveMean(String),
    #[error("no metric available for this phase space")]
    MetricUnavailable,
    #[error("observable `{0}` has no declared compact support")]
    NoCompactSupport(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
