use num_complex::Complex64;

use super::orbit::{fiber_step, q_f0, QOrbit, OVERFLOW_CAP};
use crate::chain::ProbSeq;
use crate::error::{Error, Result};
use crate::numeration::BaseDef;

/// Seeds `q_{F_0} .. q_{F_{d-1}}` of the all-ones-coefficient case:
/// `q_{F_i} = q_{F_{i-1}}^2 / p_{i+1} - (1/p_{i+1} - 1)`.
pub fn default_seeds(lambda: Complex64, p: &ProbSeq, order: usize) -> Vec<Complex64> {
    let mut seeds = vec![q_f0(lambda, p)];
    for i in 1..order {
        let r = p.p(i + 1);
        let prev = seeds[i - 1];
        seeds.push(fiber_step(prev, prev, r));
    }
    seeds
}

/// Coefficient at level `m = d n + i` (`0 <= i < d`): `p_{n+1+i}`.
pub fn general_coefficient(m: usize, order: usize, p: &ProbSeq) -> f64 {
    p.p(m / order + 1 + m % order)
}

/// `q_{F_m} = prod_j q_{F_{m-j}}^{a_j} / c_m - (1/c_m - 1)` for `m >= d`.
pub fn q_general_orbit(
    lambda: Complex64,
    p: &ProbSeq,
    base: &BaseDef,
    seeds: Option<Vec<Complex64>>,
    levels: usize,
) -> Result<QOrbit> {
    let d = base.order();
    let seeds = match seeds {
        Some(s) => {
            if s.len() != d {
                return Err(Error::InvalidSeed(format!(
                    "expected {d} seed values, got {}",
                    s.len()
                )));
            }
            if s.iter().any(|z| !z.is_finite()) {
                return Err(Error::InvalidSeed("seed values must be finite".into()));
            }
            s
        }
        None => default_seeds(lambda, p, d),
    };
    let coefficients: Vec<f64> = (1..=levels)
        .map(|m| {
            if m < d {
                p.p(m + 1)
            } else {
                general_coefficient(m, d, p)
            }
        })
        .collect();
    let mut values: Vec<Complex64> = Vec::with_capacity(levels + 1);
    let mut escaped_at = None;
    for m in 0..=levels {
        let q = if m < d {
            seeds[m]
        } else {
            let c = coefficients[m - 1];
            let prod: Complex64 = base
                .coefficients()
                .iter()
                .enumerate()
                .map(|(j, &a)| values[m - 1 - j].powu(a as u32))
                .product();
            fiber_step(prod, Complex64::new(1.0, 0.0), c)
        };
        if !(q.norm() <= OVERFLOW_CAP) {
            escaped_at = Some(m);
            break;
        }
        values.push(q);
    }
    Ok(QOrbit {
        lambda,
        values,
        coefficients,
        escaped_at,
    })
}
