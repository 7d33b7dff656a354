use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("matrix is not {0}")]
    Structure(&'static str),

    #[error("complex covariance matrix has imaginary residue {0:.3e} after conjugation")]
    ImaginaryResidue(f64),

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("degenerate steady-state system (condition {0:.3e}); damping balances amplification")]
    Degenerate(f64),

    #[error("no steady state: damping does not dominate amplification (max drift eigenvalue {0:.6})")]
    NotContractive(f64),

    #[error("no closed-form propagator applies and numeric fallback is disabled")]
    NoPropagator,

    #[error("unsupported regime: {0}")]
    Unsupported(String),

    #[error("quadrature order {order} too low: doubling changed the result by {change:.3e}")]
    QuadratureOrder { order: usize, change: f64 },

    #[error("Fock cutoff {cutoff} too small: truncation weight {weight:.3e}, try cutoff {suggested}")]
    CutoffTooSmall { cutoff: usize, weight: f64, suggested: usize },

    #[error("time step {dt} exceeds the RK4 stability bound {bound:.3e}")]
    StepTooLarge { dt: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
