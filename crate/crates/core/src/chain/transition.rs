use std::fmt;
use std::io::Write;

use super::probseq::ProbSeq;
use crate::error::{Error, Result};
use crate::format::significant;
use crate::numeration::Numeration;

/// Largest truncation handled by matrix-valued operations.
pub const STATE_BUDGET: u64 = 1 << 22;

/// A product `p_1 ... p_k`, optionally times `(1 - p_{k+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransitionTerm {
    pub successes: usize,
    pub failure: bool,
}

impl TransitionTerm {
    pub fn eval(&self, p: &ProbSeq) -> f64 {
        let mut prob: f64 = (1..=self.successes).map(|i| p.p(i)).product();
        if self.failure {
            prob *= 1.0 - p.p(self.successes + 1);
        }
        prob
    }
}

impl fmt::Display for TransitionTerm {
    /// `1-p1`, `p1(1-p2)`, `p1p2p3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.successes {
            write!(f, "p{i}")?;
        }
        match (self.successes, self.failure) {
            (0, true) => write!(f, "1-p1"),
            (k, true) => write!(f, "(1-p{})", k + 1),
            (0, false) => write!(f, "1"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub target: u64,
    pub term: TransitionTerm,
    pub prob: f64,
}

/// One row of the transition operator, sorted by target, positive entries only.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Distribution {
    entries: Vec<Transition>,
}

impl Distribution {
    fn from_entries(mut entries: Vec<Transition>) -> Self {
        entries.retain(|t| t.prob > 0.0);
        entries.sort_by_key(|t| t.target);
        Self { entries }
    }

    pub fn entries(&self) -> &[Transition] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn prob(&self, target: u64) -> f64 {
        self.entry(target).map_or(0.0, |t| t.prob)
    }

    pub fn entry(&self, target: u64) -> Option<&Transition> {
        self.entries
            .binary_search_by_key(&target, |t| t.target)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|t| t.prob).sum()
    }
}

/// Number of consecutive low digit pairs equal to `(0 at lo, 1 at hi)`,
/// starting with the pair whose low digit is at `offset`.
fn count_pairs(lsb: &[u8], offset: usize) -> usize {
    let digit = |i: usize| lsb.get(i).copied().unwrap_or(0);
    (0..)
        .take_while(|j| {
            let lo = offset + 2 * j;
            digit(lo) == 0 && digit(lo + 1) == 1
        })
        .count()
}

/// Transitions out of `state` for the stochastic adding machine.
///
/// Self-loop `1-p1`; the carry either completes (forward to `N+1`) or
/// stops after `m` successes, leaving the low digits reset to zero.
pub fn transition_dist(state: u64, p: &ProbSeq) -> Result<Distribution> {
    let next = state
        .checked_add(1)
        .ok_or_else(|| Error::Overflow(format!("{state} + 1")))?;
    let sys = Numeration::fibonacci();
    let lsb = sys.encode(state).as_lsb().to_vec();
    let term = |successes, failure| TransitionTerm { successes, failure };
    let mut entries = vec![Transition {
        target: state,
        term: term(0, true),
        prob: 0.0,
    }];

    let ends_in_zero = lsb.first().copied().unwrap_or(0) == 0;
    let (s, forward, fallback_index): (usize, usize, fn(usize) -> usize) = if ends_in_zero {
        let s = count_pairs(&lsb, 0);
        (s, s + 1, |m| 2 * m)
    } else {
        let s = count_pairs(&lsb, 1);
        (s + 1, s + 2, |m| 2 * m - 1)
    };
    entries.push(Transition {
        target: next,
        term: term(forward, false),
        prob: 0.0,
    });
    for m in 1..=s {
        // the fallback clears exactly digits below F_{2m} (resp. F_{2m-1})
        let f = sys.terms()[fallback_index(m)];
        entries.push(Transition {
            target: next - f,
            term: term(m, true),
            prob: 0.0,
        });
    }
    for t in &mut entries {
        t.prob = t.term.eval(p);
    }
    Ok(Distribution::from_entries(entries))
}

/// The operator restricted to states `0 .. F_level`.
#[derive(Debug, Clone)]
pub struct TruncatedMatrix {
    pub level: usize,
    pub size: u64,
    /// Row `i` keeps the transitions of state `i` that stay below `size`.
    pub rows: Vec<Distribution>,
    /// Mass leaving the truncation; all of it comes from the last row.
    pub leak: f64,
}

impl TruncatedMatrix {
    pub fn get(&self, from: u64, to: u64) -> f64 {
        self.rows[from as usize].prob(to)
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.size as usize;
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![0.0; n];
                for t in row.entries() {
                    dense[t.target as usize] = t.prob;
                }
                dense
            })
            .collect()
    }

    /// CSV with header `from,to,prob`, one line per nonzero entry.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "from,to,prob")?;
        for (from, row) in self.rows.iter().enumerate() {
            for t in row.entries() {
                writeln!(out, "{from},{},{}", t.target, significant(t.prob))?;
            }
        }
        Ok(())
    }
}

/// Checks `F_level` against the state budget.
pub(crate) fn truncation_size(level: usize) -> Result<u64> {
    let size = Numeration::fibonacci().term(level)?;
    if size > STATE_BUDGET {
        return Err(Error::BudgetExceeded {
            requested: size,
            limit: STATE_BUDGET,
        });
    }
    Ok(size)
}

pub fn transition_matrix(level: usize, p: &ProbSeq) -> Result<TruncatedMatrix> {
    let size = truncation_size(level)?;
    let mut rows = Vec::with_capacity(size as usize);
    let mut leak = 0.0;
    for state in 0..size {
        let dist = transition_dist(state, p)?;
        let (inside, outside): (Vec<_>, Vec<_>) =
            dist.entries.into_iter().partition(|t| t.target < size);
        leak += outside.iter().map(|t| t.prob).sum::<f64>();
        rows.push(Distribution { entries: inside });
    }
    Ok(TruncatedMatrix {
        level,
        size,
        rows,
        leak,
    })
}
