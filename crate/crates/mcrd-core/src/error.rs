use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside admissible domain: {0}")]
    Domain(String),

    #[error("no sign change on [{lo}, {hi}] (f(lo)={flo:e}, f(hi)={fhi:e}): {context}")]
    NoBracket {
        lo: f64,
        hi: f64,
        flo: f64,
        fhi: f64,
        context: String,
    },

    #[error("root solve did not converge after {iters} iterations ({context})")]
    NoConvergence { iters: usize, context: String },

    #[error("quadrature failed to converge at order {order} (last change {change:e}, {context})")]
    Quadrature {
        order: usize,
        change: f64,
        context: String,
    },

    #[error("ell below minimal time-map length: requested {requested}, minimum {minimum}")]
    BelowMinimalLength { requested: f64, minimum: f64 },

    #[error("simulation diverged at t={t}: {what}")]
    Diverged { t: f64, what: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config: {0}")]
    Config(String),
}
