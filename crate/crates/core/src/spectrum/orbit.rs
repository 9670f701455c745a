use num_complex::Complex64;

use crate::chain::ProbSeq;
use crate::numeration::Numeration;

/// Moduli above this are treated as escaped instead of iterated further.
pub const OVERFLOW_CAP: f64 = 1e150;

/// `r_n = p_{floor((n+1)/2)+1}`, so `r_1 = r_2 = p_2`.
pub fn r_coefficient(n: usize, p: &ProbSeq) -> f64 {
    p.p((n + 1) / 2 + 1)
}

/// `(lambda - (1 - p_1)) / p_1`, evaluated as `1 + (lambda - 1) / p_1` so
/// that `lambda = 1` maps to exactly 1.
pub fn q_f0(lambda: Complex64, p: &ProbSeq) -> Complex64 {
    let p1 = p.p(1);
    if p1 == 1.0 {
        lambda
    } else {
        1.0 + (lambda - 1.0) / p1
    }
}

/// `x y / r - (1/r - 1)`, evaluated as `1 + (x y - 1) / r`; small `r` would
/// otherwise amplify rounding away from the fixed point 1. At `r = 1` the
/// product is returned as is, which keeps tiny moduli exact.
#[inline]
pub fn fiber_step(x: Complex64, y: Complex64, r: f64) -> Complex64 {
    if r == 1.0 {
        x * y
    } else {
        1.0 + (x * y - 1.0) / r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QOrbit {
    pub lambda: Complex64,
    /// `q_{F_0}, q_{F_1}, ...`, stopping before any value past the cap.
    pub values: Vec<Complex64>,
    /// `coefficients[n - 1]` is the coefficient used at level `n`.
    pub coefficients: Vec<f64>,
    /// First level whose modulus exceeded `OVERFLOW_CAP`.
    pub escaped_at: Option<usize>,
}

impl QOrbit {
    pub fn value(&self, n: usize) -> Option<Complex64> {
        self.values.get(n).copied()
    }

    pub fn r(&self, n: usize) -> f64 {
        self.coefficients[n - 1]
    }
}

fn overflowed(z: Complex64) -> bool {
    !(z.norm() <= OVERFLOW_CAP)
}

/// `q_{F_0} .. q_{F_levels}`; the level before `F_0` is taken as `q_{F_0}`.
pub fn q_fib_orbit(lambda: Complex64, p: &ProbSeq, levels: usize) -> QOrbit {
    let coefficients: Vec<f64> = (1..=levels).map(|n| r_coefficient(n, p)).collect();
    let mut values = Vec::with_capacity(levels + 1);
    let mut escaped_at = None;
    let (mut prev, mut cur) = (Complex64::default(), q_f0(lambda, p));
    for n in 0..=levels {
        if n >= 1 {
            let before = if n == 1 { cur } else { prev };
            let next = fiber_step(cur, before, coefficients[n - 1]);
            prev = cur;
            cur = next;
        }
        if overflowed(cur) {
            escaped_at = Some(n);
            break;
        }
        values.push(cur);
    }
    QOrbit {
        lambda,
        values,
        coefficients,
        escaped_at,
    }
}

/// `q_j` for `0 <= j < len` with `q_0 = 1`, from `q_{F_r + k} = q_{F_r} q_k`.
pub fn q_table(fib_values: &[Complex64], len: usize) -> Vec<Complex64> {
    let fib = Numeration::fibonacci().terms();
    let mut table = Vec::with_capacity(len);
    let mut r = 0;
    for j in 0..len {
        if j == 0 {
            table.push(Complex64::new(1.0, 0.0));
            continue;
        }
        while fib[r + 1] as usize <= j {
            r += 1;
        }
        table.push(fib_values[r] * table[j - fib[r] as usize]);
    }
    table
}

/// `q_n` as the product of `q_{F_i}` over the Zeckendorf digits of `n`.
pub fn q_at_integer(n: u64, lambda: Complex64, p: &ProbSeq) -> Complex64 {
    let digits = Numeration::fibonacci().encode(n);
    let orbit = q_fib_orbit(lambda, p, digits.len().saturating_sub(1));
    digits
        .as_lsb()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 1)
        .map(|(i, _)| orbit.value(i).unwrap_or(Complex64::new(f64::INFINITY, 0.0)))
        .product()
}

/// `g_0(x, y) = (l(x), l(y))` with `l(z) = (z - (1 - p_1)) / p_1`.
pub fn g0(pair: (Complex64, Complex64), p: &ProbSeq) -> (Complex64, Complex64) {
    (q_f0(pair.0, p), q_f0(pair.1, p))
}

/// `g_n(x, y) = (x y / r_n - (1/r_n - 1), x)` for `n >= 1`.
pub fn g(n: usize, pair: (Complex64, Complex64), p: &ProbSeq) -> (Complex64, Complex64) {
    (fiber_step(pair.0, pair.1, r_coefficient(n, p)), pair.0)
}

/// `psi_n(lambda, lambda) = g_n o ... o g_0 (lambda, lambda)` for `n = 0 ..= levels`.
pub fn fibered_pair(lambda: Complex64, p: &ProbSeq, levels: usize) -> Vec<(Complex64, Complex64)> {
    let mut pairs = Vec::with_capacity(levels + 1);
    let mut pair = g0((lambda, lambda), p);
    pairs.push(pair);
    for n in 1..=levels {
        pair = g(n, pair, p);
        pairs.push(pair);
    }
    pairs
}
