//! Fibonacci-base adding machine, its stochastic Markov chain and the
//! associated fibered Julia sets.

pub mod chain;
pub mod config;
pub mod error;
pub mod figures;
pub mod format;
pub mod numeration;
pub mod odometer;
pub mod render;
pub mod spectrum;

pub use error::{Error, Result};
