use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node {0} is isolated (zero degree)")]
    IsolatedNode(usize),

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("edge ({0}, {1}) has non-positive or non-finite weight {2}")]
    NegativeWeight(usize, usize, f64),

    #[error("conflicting duplicate edge ({0}, {1})")]
    ConflictingDuplicate(usize, usize),

    #[error("node index {idx} out of range for n = {n}")]
    NodeOutOfRange { idx: usize, n: usize },

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("node {0} has degree < 2, clustering coefficient undefined")]
    DegreeTooSmall(usize),

    #[error("clustering coefficient requires an unweighted graph")]
    WeightedGraph,

    #[error("partition is not a disjoint cover of V by nonempty sets")]
    InvalidPartition,

    #[error("eigensolver did not converge within the sweep cap")]
    ConvergenceFailure,

    #[error("graph is disconnected")]
    DisconnectedGraph,

    #[error("node set is empty")]
    EmptySet,

    #[error("set is trivial (empty or all of V), interface undefined")]
    TrivialSet,

    #[error("vol S = vol V / 2, trivial-dynamics time undefined")]
    HalfVolume,

    #[error("initial state has a zero component at node {0}")]
    ZeroInitialComponent(usize),

    #[error("ODE integrator failed: step size underflow at t = {0}")]
    IntegratorFailure(f64),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("invalid size for generator: {0}")]
    InvalidSize(String),

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
