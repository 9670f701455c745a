use super::probseq::{ProbSeq, TailRule};
use super::transition::{transition_dist, truncation_size};
use crate::error::{Error, Result};
use crate::numeration::Numeration;

/// `Pi_r`: `Pi_0 = 1`, `Pi_{2m} = prod_{i=2}^{m+1} p_i^-2`, `Pi_{2m+1} = Pi_{2m} / p_{m+2}`.
pub fn pi_level(r: usize, p: &ProbSeq) -> f64 {
    let m = r / 2;
    let even: f64 = (2..=m + 1).map(|i| p.p(i).powi(-2)).product();
    if r % 2 == 1 {
        even / p.p(m + 2)
    } else {
        even
    }
}

/// `beta(n) = Pi_r` for `F_r <= n < F_{r+1}`.
pub fn beta(n: u64, p: &ProbSeq) -> f64 {
    assert!(n >= 1, "beta is defined for n >= 1");
    pi_level(Numeration::fibonacci().level_of(n), p)
}

/// `xi_{F_i}`: 1 for `i = 0`, else `p_{floor((i+1)/2)+1}`.
pub fn xi_fib(i: usize, p: &ProbSeq) -> f64 {
    if i == 0 {
        1.0
    } else {
        p.p((i + 1) / 2 + 1)
    }
}

/// `xi_n` as the product of `xi_{F_i}` over the Zeckendorf digits of `n`.
pub fn xi(n: u64, p: &ProbSeq) -> f64 {
    Numeration::fibonacci()
        .encode(n)
        .as_lsb()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 1)
        .map(|(i, _)| xi_fib(i, p))
        .product()
}

/// `xi_0 .. xi_{len-1}` via `xi_{F_r + k} = xi_{F_r} xi_k`.
pub fn xi_table(len: usize, p: &ProbSeq) -> Vec<f64> {
    let fib = Numeration::fibonacci().terms();
    let mut table = Vec::with_capacity(len);
    let mut r = 0;
    for n in 0..len {
        if n == 0 {
            table.push(1.0);
            continue;
        }
        while fib[r + 1] as usize <= n {
            r += 1;
        }
        let k = n - fib[r] as usize;
        table.push(xi_fib(r, p) * table[k]);
    }
    table
}

/// `max_{1 <= i < F_level - 1} |sum_{j >= 1} S_{i,j} beta(j) - beta(i)|`.
pub fn beta_eigen_residual(level: usize, p: &ProbSeq) -> Result<f64> {
    let size = truncation_size(level)?;
    let mut worst: f64 = 0.0;
    for i in 1..size.saturating_sub(1) {
        let row = transition_dist(i, p)?;
        let image: f64 = row
            .entries()
            .iter()
            .filter(|t| t.target >= 1)
            .map(|t| t.prob * beta(t.target, p))
            .sum();
        worst = worst.max((image - beta(i, p)).abs());
    }
    Ok(worst)
}

/// Share of the truncated mass in the top block above which the measure
/// is reported as unsummable.
pub const SUMMABILITY_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Clone)]
pub struct StationaryMeasure {
    pub level: usize,
    /// `mu_i = xi_i / sum_{k < F_level} xi_k`.
    pub weights: Vec<f64>,
    /// `sum_{i < F_level} xi_i`.
    pub partial_sum: f64,
    /// `alpha_r = sum_{F_r <= i < F_{r+1}} xi_i` for `r < level`, with `alpha_{-1} = xi_0` omitted.
    pub block_sums: Vec<f64>,
    /// The top block still carries more than the tolerated share of mass.
    pub unsummable: bool,
}

pub fn stationary_measure(level: usize, p: &ProbSeq) -> Result<StationaryMeasure> {
    stationary_measure_with(level, p, SUMMABILITY_TOLERANCE)
}

pub fn stationary_measure_with(
    level: usize,
    p: &ProbSeq,
    tolerance: f64,
) -> Result<StationaryMeasure> {
    let size = truncation_size(level)? as usize;
    let xi = xi_table(size, p);
    let partial_sum: f64 = xi.iter().sum();
    let fib = Numeration::fibonacci().terms();
    let block_sums: Vec<f64> = (0..level)
        .map(|r| xi[fib[r] as usize..fib[r + 1] as usize].iter().sum())
        .collect();
    let top = block_sums.last().copied().unwrap_or(partial_sum);
    Ok(StationaryMeasure {
        level,
        weights: xi.iter().map(|x| x / partial_sum).collect(),
        partial_sum,
        unsummable: top > tolerance * partial_sum,
        block_sums,
    })
}

/// `max_{1 <= j < F_level} |(mu S)_j - mu_j|` for `mu_i = xi_i` on the truncation.
pub fn stationarity_residual(level: usize, p: &ProbSeq) -> Result<f64> {
    let size = truncation_size(level)?;
    let mu = xi_table(size as usize, p);
    let mut image = vec![0.0; size as usize];
    for i in 0..size {
        for t in transition_dist(i, p)?.entries() {
            if t.target < size {
                image[t.target as usize] += mu[i as usize] * t.prob;
            }
        }
    }
    Ok((1..size as usize)
        .map(|j| (image[j] - mu[j]).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone)]
pub struct PositiveRecurrentConstruction {
    /// `p_1 .. p_count`, continued by a geometric tail of ratio 1/4.
    pub seq: ProbSeq,
    /// `a_0 .. a_{2 count - 2}`; `a_n` is the mass of block `n` under `xi`.
    pub a: Vec<f64>,
}

/// Ratio of the tail appended after the constructed prefix.
pub const CONSTRUCTION_TAIL_RATIO: f64 = 0.25;

/// Chooses `p_3, p_4, ...` so that consecutive block masses
/// `a_{2k-3} + a_{2k-2}` stay below `b_k`.
///
/// `a_0 = 1`, `a_1 = p_2`, `a_2 = 2 p_2`, and for `k >= 3`
/// `a_{2k-3} = p_k (sum_{i <= 2k-5} a_i + 1)`,
/// `a_{2k-2} = p_k (sum_{i <= 2k-4} a_i + 1)`.
pub fn construct_positive_recurrent(
    p1: f64,
    p2: f64,
    b: impl Fn(usize) -> f64,
    count: usize,
) -> Result<PositiveRecurrentConstruction> {
    if count < 3 {
        return Err(Error::InvalidSequence(format!(
            "construction needs count >= 3, got {count}"
        )));
    }
    let mut values = vec![p1, p2];
    let mut a = vec![1.0, p2, 2.0 * p2];
    for k in 3..=count {
        let bk = b(k);
        if !(bk.is_finite() && bk > 0.0) {
            return Err(Error::InvalidB {
                index: k,
                value: bk,
            });
        }
        let below: f64 = a[..=2 * k - 5].iter().sum();
        let pk = (bk / (2.0 * below + 2.0 + a[2 * k - 4])).min(1.0);
        let odd = pk * (below + 1.0);
        let even = pk * (below + a[2 * k - 4] + 1.0);
        values.push(pk);
        a.push(odd);
        a.push(even);
    }
    let seq = ProbSeq::explicit(
        values,
        TailRule::Geometric {
            ratio: CONSTRUCTION_TAIL_RATIO,
        },
    )?;
    Ok(PositiveRecurrentConstruction { seq, a })
}
