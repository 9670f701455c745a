use num_complex::Complex64;

use super::orbit::{q_fib_orbit, q_table};
use crate::chain::transition::{transition_dist, STATE_BUDGET};
use crate::chain::ProbSeq;
use crate::error::{Error, Result};
use crate::numeration::Numeration;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResidual {
    /// `||(S - lambda I) w||_inf / ||w||_inf`, rows past `F_{n+1}` bounded by `p_1`.
    pub residual: f64,
    /// `(|1 - p_1 - lambda| |q_{F_n}| + p_1 |q_{F_n}| + p_1) / ||w||_inf`.
    pub bound: f64,
    /// `||w||_inf` for `w = (1, q_1, ..., q_{F_n}, 0, ...)`.
    pub w_norm: f64,
    /// Largest row error among rows `0 .. F_n - 1`.
    pub head_residual: f64,
}

/// Normalized residual of the truncated approximate eigenvector at level `n`.
pub fn eigen_residual(lambda: Complex64, p: &ProbSeq, level: usize) -> Result<EigenResidual> {
    let fib = Numeration::fibonacci();
    let f_n = fib.term(level)?;
    let f_next = fib.term(level + 1)?;
    if f_next + 1 > STATE_BUDGET {
        return Err(Error::BudgetExceeded {
            requested: f_next + 1,
            limit: STATE_BUDGET,
        });
    }
    let orbit = q_fib_orbit(lambda, p, level);
    if let Some(k) = orbit.escaped_at {
        return Err(Error::Overflow(format!("q_F{k} at lambda = {lambda}")));
    }
    let support = f_n as usize + 1;
    let w = q_table(&orbit.values, support);
    let w_norm = w.iter().map(|z| z.norm()).fold(0.0, f64::max);

    let mut exact: f64 = 0.0;
    let mut head: f64 = 0.0;
    for i in 0..=f_next {
        let mut acc = -lambda * w.get(i as usize).copied().unwrap_or_default();
        for t in transition_dist(i, p)?.entries() {
            if let Some(&wj) = w.get(t.target as usize) {
                acc += t.prob * wj;
            }
        }
        exact = exact.max(acc.norm());
        if i < f_n {
            head = head.max(acc.norm());
        }
    }
    let p1 = p.p(1);
    let q_top = orbit.values[level].norm();
    Ok(EigenResidual {
        residual: exact.max(p1) / w_norm,
        bound: ((1.0 - p1 - lambda).norm() * q_top + p1 * q_top + p1) / w_norm,
        w_norm,
        head_residual: head / w_norm,
    })
}
