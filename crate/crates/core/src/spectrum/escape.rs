use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::orbit::{fiber_step, q_f0, q_fib_orbit, r_coefficient, OVERFLOW_CAP};
use crate::chain::ProbSeq;
use crate::error::{Error, Result};

/// Slack on the "modulus greater than 1" tests.
pub const ESCAPE_SLACK: f64 = 1e-6;

/// `max(1 + eps, 2/delta - 1) + margin` with `delta = inf p_i`.
pub fn escape_radius(p: &ProbSeq, margin: f64) -> Result<f64> {
    let delta = p.delta_lower_bound();
    if delta <= 0.0 {
        return Err(Error::ZeroDelta);
    }
    if !(margin.is_finite() && margin >= 0.0) {
        return Err(Error::InvalidEscape(format!(
            "margin {margin} must be >= 0"
        )));
    }
    Ok((1.0 + ESCAPE_SLACK).max(2.0 / delta - 1.0) + margin)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeConfig {
    pub radius: f64,
    pub max_level: usize,
    pub early_exit: bool,
    pub slack: f64,
}

impl EscapeConfig {
    /// Margin added to the minimal radius when none is given.
    pub const DEFAULT_MARGIN: f64 = 1.0;

    pub fn new(radius: f64, max_level: usize, early_exit: bool) -> Result<Self> {
        let cfg = Self {
            radius,
            max_level,
            early_exit,
            slack: ESCAPE_SLACK,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Radius from the sequence's infimum plus the default margin.
    pub fn for_seq(p: &ProbSeq, max_level: usize) -> Result<Self> {
        Self::new(escape_radius(p, Self::DEFAULT_MARGIN)?, max_level, true)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 1.0 && self.radius < OVERFLOW_CAP) {
            return Err(Error::InvalidEscape(format!(
                "radius {} must lie in (1, {OVERFLOW_CAP:e})",
                self.radius
            )));
        }
        if !(self.slack.is_finite() && self.slack >= 0.0) {
            return Err(Error::InvalidEscape(format!(
                "slack {} must be >= 0",
                self.slack
            )));
        }
        Ok(())
    }

    /// Errors when the radius does not certify escape for `p`.
    pub fn check_against(&self, p: &ProbSeq) -> Result<()> {
        self.validate()?;
        let minimal = escape_radius(p, 0.0)?;
        if self.radius < minimal {
            return Err(Error::InvalidEscape(format!(
                "radius {} is below 2/delta - 1 = {minimal}",
                self.radius
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EscapeResult {
    Inside,
    /// First level at which escape is certified; for the two-consecutive
    /// rule this is the lower index of the pair.
    Escaped(usize),
}

impl EscapeResult {
    pub fn is_inside(&self) -> bool {
        matches!(self, EscapeResult::Inside)
    }
}

/// Escape test for the fibered Julia set `E` up to `cfg.max_level`.
pub fn in_e(lambda: Complex64, p: &ProbSeq, cfg: &EscapeConfig) -> EscapeResult {
    let big = 1.0 + cfg.slack;
    let mut before = q_f0(lambda, p);
    let mut cur = before;
    let mut prev_big = false;
    for n in 0..=cfg.max_level {
        if n >= 1 {
            let next = fiber_step(cur, before, r_coefficient(n, p));
            before = cur;
            cur = next;
        }
        let modulus = cur.norm();
        let now_big = !(modulus <= big);
        if cfg.early_exit && prev_big && now_big {
            return EscapeResult::Escaped(n - 1);
        }
        if !(modulus <= cfg.radius) {
            return EscapeResult::Escaped(n);
        }
        prev_big = now_big;
    }
    EscapeResult::Inside
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Inside,
    Escaped,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSpectrumResult {
    pub verdict: Verdict,
    /// `B_0 .. B_N`, `B_n = max_{m < F_{n+1}} |q_m|`.
    pub b: Vec<f64>,
    pub escape: EscapeResult,
}

/// `B_n = max(B_{n-1}, B_{n-2} |q_{F_n}|)` with `B_{-1} = B_{-2} = 1`.
pub fn subset_maxima(moduli: &[f64]) -> Vec<f64> {
    let mut b = Vec::with_capacity(moduli.len());
    let (mut b2, mut b1) = (1.0f64, 1.0f64);
    for &m in moduli {
        let bn = b1.max(b2 * m);
        b.push(bn);
        b2 = b1;
        b1 = bn;
    }
    b
}

/// Boundedness of `(q_n)` probed through `B_n` up to `cfg.max_level`.
pub fn in_point_spectrum(
    lambda: Complex64,
    p: &ProbSeq,
    cfg: &EscapeConfig,
    bound: f64,
) -> PointSpectrumResult {
    let escape = in_e(lambda, p, cfg);
    let orbit = q_fib_orbit(lambda, p, cfg.max_level);
    let moduli: Vec<f64> = orbit.values.iter().map(|q| q.norm()).collect();
    let b = subset_maxima(&moduli);
    let overflowed = orbit.escaped_at.is_some();
    let verdict = if overflowed || !escape.is_inside() || b.iter().any(|&x| !(x <= bound)) {
        Verdict::Escaped
    } else if b.len() >= 2 && b[b.len() - 1] > b[b.len() - 2] {
        Verdict::Undetermined
    } else {
        Verdict::Inside
    };
    PointSpectrumResult { verdict, b, escape }
}
