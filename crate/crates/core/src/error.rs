use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} out of range: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("weight is not doubling: ratio ω(1-ε/2)/ω(1-ε) keeps growing, reaching {ratio} at ε = {eps:e}")]
    NotDoubling { eps: f64, ratio: f64 },

    #[error("weight is not non-decreasing near ε = {eps:e}")]
    NotMonotone { eps: f64 },

    #[error("weight is constant on the probe grid; an unbounded weight is required")]
    NotUnbounded,

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unknown weight spec `{0}`")]
    WeightSpec(String),

    #[error("no admissible growth exponent found below γ = {cap}")]
    GammaSearch { cap: f64 },

    #[error("cannot bracket t_{k}: weight does not reach the target inside its trusted range")]
    Bracket { k: usize },

    #[error("construction has {have} terms, at least {need} are required")]
    TooFewTerms { have: usize, need: usize },

    #[error("insufficient construction depth: points need ln ε ≥ {required_ln_eps:.6} (ε ≥ {required_eps})")]
    InsufficientDepth { required_ln_eps: f64, required_eps: String },

    #[error("index {index} outside the constructed range (1..={available})")]
    IndexOutOfRange { index: usize, available: usize },

    #[error("quadrature did not converge at q = {q}: last estimates {previous} and {last}")]
    NoConvergence { q: u64, previous: f64, last: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("construction file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
