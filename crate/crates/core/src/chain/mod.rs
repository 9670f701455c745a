//! The stochastic Fibonacci adding machine as a Markov chain on the
//! nonnegative integers.

pub mod classify;
pub mod measures;
pub mod probseq;
pub mod simulate;
pub mod transition;

pub use classify::{classify, ChainClass, Classification};
pub use measures::{
    beta, beta_eigen_residual, construct_positive_recurrent, stationarity_residual,
    stationary_measure, xi, xi_table, PositiveRecurrentConstruction, StationaryMeasure,
};
pub use probseq::{ProbSeq, TailRule};
pub use simulate::{
    sample_step, seeded_rng, simulate, simulate_batch, simulate_path, SimulationSummary,
};
pub use transition::{
    transition_dist, transition_matrix, Distribution, Transition, TransitionTerm, TruncatedMatrix,
    STATE_BUDGET,
};
