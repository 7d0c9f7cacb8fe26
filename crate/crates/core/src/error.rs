use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Shock with coincident states; the caller must treat this as no wave.
    #[error("degenerate shock: u_minus == u_plus == {0}")]
    DegenerateShock(f64),

    #[error("root finder failed to converge on bracket [{lo}, {hi}]: {context}")]
    RootNotConverged { lo: f64, hi: f64, context: String },

    #[error("no sign change on bracket [{lo}, {hi}]: {context}")]
    NoBracket { lo: f64, hi: f64, context: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid kinetic function: {0}")]
    InvalidKinetic(String),

    #[error("speed bisection exceeded {max_iter} iterations (bracket [{lo}, {hi}], u_minus = {u_minus})")]
    BisectionBudget {
        lo: f64,
        hi: f64,
        u_minus: f64,
        max_iter: usize,
    },

    #[error("classical threshold outside search range [{lo}, {hi}] for u_minus = {u_minus}")]
    ThresholdOutsideRange { lo: f64, hi: f64, u_minus: f64 },

    #[error("traveling wave at u_minus = {0} did not connect: {1:?}")]
    NotConnecting(f64, crate::traveling_wave::Terminal),

    #[error("interaction budget of {budget} exceeded at t = {time} with {n_fronts} fronts")]
    InteractionBudget {
        budget: usize,
        time: f64,
        n_fronts: usize,
    },

    #[error("front tracking interaction failed at t = {time}, x = {position} between u = {u_left} and u = {u_right}: {source}")]
    InteractionFailed {
        time: f64,
        position: f64,
        u_left: f64,
        u_right: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("generalized variation increased at t = {time}: {before} -> {after}")]
    FunctionalIncrease {
        before: f64,
        after: f64,
        time: f64,
    },

    #[error("time integration produced a non-finite state at t = {0}")]
    NonFiniteState(f64),

    #[error("kinetic table: {0}")]
    Table(String),

    #[error("kinetic extraction: {0}")]
    Extraction(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
