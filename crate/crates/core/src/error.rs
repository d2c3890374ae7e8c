use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("operator is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("state norm² is {0}, expected 1")]
    NotNormalized(f64),

    #[error(
        "POM is invalid: completeness residual {completeness:e}, worst negative eigenvalue {psd:e}"
    )]
    InvalidPom { completeness: f64, psd: f64 },

    #[error("planar constraints violated: Σw − 1 = {weight:e}, Σw·cosθ = {balance:e}")]
    PlanarConstraint { weight: f64, balance: f64 },

    #[error("retransmission map has {got} states for a POM with {expected} elements")]
    LengthMismatch { expected: usize, got: usize },

    #[error("O operator is zero; no retransmission state is preferred")]
    NoPreferredState,

    #[error("η is undefined when p·sin²2θ = 0")]
    EtaUndefined,

    #[error("could not draw a feasible random POM after {0} attempts")]
    Infeasible(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
