//! The Fibonacci adding machine `N -> N + 1`.
//!
//! Two independent routes compute the successor: the pairwise carry
//! recurrences (one for words ending in 0, one for words ending in 1) and
//! the two-state transducer reading digit blocks from the least significant
//! end. The carry route also accepts a per-step "success" oracle, which
//! gives the fallible machine used by the Markov chain.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeration::{Digits, Numeration};

/// Which carry recurrence was used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarryBranch {
    /// `e_0 = 0`: digit pairs `(e_{2i}, e_{2i+1})`.
    EvenPairs,
    /// `e_0 = 1`: digit 0 handled first, then pairs `(e_{2i-1}, e_{2i})`.
    OddPairs,
}

/// Carries `c_{-1}, c_0, c_1, ...` up to and including the first zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarryTrace {
    pub branch: CarryBranch,
    /// `carries[0]` is `c_{-1}`, `carries[i + 1]` is `c_i`.
    pub carries: Vec<u8>,
    /// Index `j >= 0` of the first zero carry `c_j`.
    pub halted_at: usize,
}

impl CarryTrace {
    /// Carry `c_i` for `i >= -1`; zero after the halt.
    pub fn carry(&self, i: isize) -> u8 {
        assert!(i >= -1);
        self.carries.get((i + 1) as usize).copied().unwrap_or(0)
    }

    /// First digit position guaranteed to be left unchanged.
    pub fn stable_from(&self) -> usize {
        match self.branch {
            CarryBranch::EvenPairs => 2 * self.halted_at + 2,
            CarryBranch::OddPairs => 2 * self.halted_at + 1,
        }
    }
}

fn check_fibonacci_word(w: &Digits) -> Result<()> {
    if Numeration::fibonacci().is_admissible(w.as_lsb()) {
        Ok(())
    } else {
        Err(Error::InvalidWord(format!(
            "{w} is not an admissible Fibonacci word"
        )))
    }
}

/// Fallible increment. `succeeds(i)` is the outcome `e_i` of carry step
/// `i`; the deterministic machine has every step succeed.
pub fn add_one_with(w: &Digits, mut succeeds: impl FnMut(usize) -> bool) -> (Digits, CarryTrace) {
    let pairs = w.len() / 2 + 2;
    let mut digits = w.as_lsb().to_vec();
    digits.resize(2 * pairs + 1, 0);
    let mut carries = vec![1u8];

    // (lower, upper) digit positions for pair i
    let (branch, first_pair, pair_at): (_, usize, fn(usize) -> (usize, usize)) = if digits[0] == 0 {
        (CarryBranch::EvenPairs, 0, |i| (2 * i, 2 * i + 1))
    } else {
        let e0 = succeeds(0) as u8;
        digits[0] = 1 / (e0 + 1);
        carries.push(e0);
        (CarryBranch::OddPairs, 1, |i| (2 * i - 1, 2 * i))
    };

    let mut carry = *carries.last().unwrap();
    let mut i = first_pair;
    while carry == 1 && i <= pairs {
        let x = succeeds(i) as u8 * carry;
        let (lo, hi) = pair_at(i);
        let (e_lo, e_hi) = (digits[lo], digits[hi]);
        digits[lo] = (e_lo + x) / (x * e_hi + 1);
        digits[hi] = e_hi / (x + 1);
        carry = x * e_hi;
        carries.push(carry);
        i += 1;
    }
    debug_assert_eq!(carry, 0, "carry must die within the padded word");
    let halted_at = carries.len() - 2;
    (
        Digits::from_lsb(digits),
        CarryTrace {
            branch,
            carries,
            halted_at,
        },
    )
}

/// Successor via the carry recurrences.
pub fn succ_carry(w: &Digits) -> Result<(Digits, CarryTrace)> {
    check_fibonacci_word(w)?;
    Ok(add_one_with(w, |_| true))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum State {
    Initial,
    Terminal,
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            State::Initial => "I",
            State::Terminal => "T",
        })
    }
}

/// Transducer edge; labels are written most significant digit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: State,
    pub to: State,
    pub input: &'static str,
    pub output: &'static str,
}

impl Edge {
    fn matches(&self, lsb: &[u8], pos: usize) -> bool {
        let k = self.input.len();
        pos + k <= lsb.len()
            && self
                .input
                .bytes()
                .rev()
                .enumerate()
                .all(|(j, c)| lsb[pos + j] == c - b'0')
    }
}

impl fmt::Display for Edge {
    /// `(target, in/out, source)`, the order used when a path is written
    /// most significant block first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{}/{},{})",
            self.to, self.input, self.output, self.from
        )
    }
}

#[derive(Debug, Clone)]
pub struct Transducer {
    edges: Vec<Edge>,
    start: State,
    accept: State,
}

impl Transducer {
    /// The two-state successor transducer of the Fibonacci base.
    pub fn fibonacci_successor() -> Self {
        use State::*;
        let e = |from, to, input, output| Edge {
            from,
            to,
            input,
            output,
        };
        Self {
            edges: vec![
                e(Initial, Initial, "10", "00"),
                e(Initial, Initial, "1", "0"),
                e(Initial, Terminal, "00", "01"),
                e(Terminal, Terminal, "0", "0"),
                e(Terminal, Terminal, "1", "1"),
            ],
            start: Initial,
            accept: Terminal,
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Reads `w` (padded by two zeros) from the least significant end.
    pub fn run(&self, w: &Digits) -> Result<TransducerRun> {
        let mut input = w.as_lsb().to_vec();
        let original_len = input.len();
        input.extend([0, 0]);
        let mut output = Vec::with_capacity(input.len());
        let mut steps = Vec::new();
        let mut state = self.start;
        let mut pos = 0;
        while pos < input.len() {
            let mut candidates = self
                .edges
                .iter()
                .filter(|e| e.from == state && e.matches(&input, pos));
            let edge = *candidates.next().ok_or_else(|| {
                Error::NoPath(format!("no edge from {state} at digit {pos} of {w}"))
            })?;
            if candidates.next().is_some() {
                return Err(Error::NoPath(format!(
                    "ambiguous edges from {state} at digit {pos}"
                )));
            }
            output.extend(edge.output.bytes().rev().map(|c| c - b'0'));
            steps.push(PathStep { edge, start: pos });
            pos += edge.input.len();
            state = edge.to;
        }
        if state != self.accept {
            return Err(Error::NoPath(format!("run on {w} ends in state {state}")));
        }
        Ok(TransducerRun {
            output: Digits::from_lsb(output),
            steps,
            input_len: original_len,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathStep {
    pub edge: Edge,
    /// Position of the lowest digit consumed.
    pub start: usize,
}

#[derive(Debug, Clone)]
pub struct TransducerRun {
    pub output: Digits,
    /// Steps in reading order (least significant first), padding included.
    pub steps: Vec<PathStep>,
    input_len: usize,
}

impl TransducerRun {
    /// Steps without the trailing terminal loops over padding zeros.
    pub fn significant_steps(&self) -> &[PathStep] {
        let keep = self
            .steps
            .iter()
            .rposition(|s| !(s.start >= self.input_len && s.edge.from == State::Terminal))
            .map_or(0, |i| i + 1);
        &self.steps[..keep]
    }

    /// Path written most significant block first, e.g. `(T,1/1,T)(T,00/01,I)...`.
    pub fn path_string(&self) -> String {
        self.significant_steps()
            .iter()
            .rev()
            .map(|s| s.edge.to_string())
            .collect()
    }
}

/// Successor via the transducer; inadmissible input has no path.
pub fn succ_transducer(w: &Digits) -> Result<TransducerRun> {
    if !Numeration::fibonacci().is_admissible(w.as_lsb()) {
        return Err(Error::NoPath(format!(
            "{w} is not an admissible Fibonacci word"
        )));
    }
    Transducer::fibonacci_successor().run(w)
}
