//! Spectral side of the chain: the `q_{F_n}` recursion, the fibered Julia
//! set `E`, the point spectrum and approximate eigenvectors.

pub mod critical;
pub mod escape;
pub mod general;
pub mod orbit;
pub mod residual;

pub use critical::{
    non_connectedness_test, phi_orbit, phi_orbit_at, Connectivity, PhiOrbit, Polynomial,
};
pub use escape::{
    escape_radius, in_e, in_point_spectrum, subset_maxima, EscapeConfig, EscapeResult,
    PointSpectrumResult, Verdict, ESCAPE_SLACK,
};
pub use general::q_general_orbit;
pub use orbit::{fibered_pair, q_at_integer, q_fib_orbit, q_table, QOrbit, OVERFLOW_CAP};
pub use residual::{eigen_residual, EigenResidual};
