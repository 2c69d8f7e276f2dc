use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("point violates the sphere constraint x²+y²+z²=1 (residual {residual:e})")]
    OffSphere { residual: f64 },
    #[error("(u,v,z,θ) chart is singular at z = {z}")]
    ChartSingularity { z: f64 },
    #[error("λ = {lambda} is not an eigenvalue of Ĵ at level n = {n} (λ/ħ + (n-1)/2 = {index})")]
    NotAnEigenvalue { lambda: f64, n: u32, index: f64 },
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("weighted polygon is not admissible: {reason}")]
    Inadmissible { reason: String },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invariant violated in {module}: {detail}")]
    Invariant {
        module: &'static str,
        detail: String,
    },
}

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
