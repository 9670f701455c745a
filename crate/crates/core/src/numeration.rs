//! Linear-recurrence numeration systems.
//!
//! A base is given by coefficients `a_1 >= a_2 >= ... >= a_d >= 1` with
//! `F_0 = 1`, `F_n = a_1 F_{n-1} + ... + a_n F_0 + 1` for `1 <= n < d` and
//! `F_n = a_1 F_{n-1} + ... + a_d F_{n-d}` afterwards. The Fibonacci base is
//! `a = (1, 1)`, giving `1, 2, 3, 5, 8, 13, ...`.
//!
//! Digit words are stored least-significant digit first. Text I/O is
//! most-significant digit first.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Coefficients of a linear recurrence numeration base.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseDef {
    coefficients: Vec<u64>,
    name: String,
}

impl BaseDef {
    pub fn new(coefficients: Vec<u64>, name: impl Into<String>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidBase(format!(
                "order must be at least 2, got {}",
                coefficients.len()
            )));
        }
        if coefficients.contains(&0) {
            return Err(Error::InvalidBase("coefficients must be >= 1".into()));
        }
        if coefficients.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidBase(format!(
                "coefficients must be non-increasing, got {coefficients:?}"
            )));
        }
        Ok(Self {
            coefficients,
            name: name.into(),
        })
    }

    pub fn fibonacci() -> Self {
        Self {
            coefficients: vec![1, 1],
            name: "fibonacci".into(),
        }
    }

    /// Order `d` of the recurrence.
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_fibonacci(&self) -> bool {
        self.coefficients == [1, 1]
    }
}

/// Returns `F_0 .. F_{count-1}` for `base`, failing if a term leaves `u64`.
pub fn base_sequence(base: &BaseDef, count: usize) -> Result<Vec<u64>> {
    let a = base.coefficients();
    let d = a.len();
    let mut terms: Vec<u64> = Vec::with_capacity(count);
    for n in 0..count {
        let mut acc: u64 = if n < d { 1 } else { 0 };
        for (j, &aj) in a.iter().enumerate().take(n.min(d)) {
            let term = aj
                .checked_mul(terms[n - 1 - j])
                .ok_or_else(|| Error::Overflow(format!("F_{n}")))?;
            acc = acc
                .checked_add(term)
                .ok_or_else(|| Error::Overflow(format!("F_{n}")))?;
        }
        terms.push(acc);
    }
    Ok(terms)
}

fn all_terms(base: &BaseDef) -> Vec<u64> {
    let mut count = 1;
    while base_sequence(base, count + 1).is_ok() {
        count += 1;
    }
    base_sequence(base, count).expect("count was probed")
}

/// A base together with every term of its sequence that fits in `u64`.
#[derive(Debug, Clone)]
pub struct Numeration {
    base: BaseDef,
    terms: Vec<u64>,
}

impl Numeration {
    pub fn new(base: BaseDef) -> Self {
        let terms = all_terms(&base);
        Self { base, terms }
    }

    /// Shared Fibonacci system.
    pub fn fibonacci() -> &'static Numeration {
        static FIB: OnceLock<Numeration> = OnceLock::new();
        FIB.get_or_init(|| Numeration::new(BaseDef::fibonacci()))
    }

    pub fn base(&self) -> &BaseDef {
        &self.base
    }

    /// All terms `F_0, F_1, ...` representable in 64 bits.
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn term(&self, i: usize) -> Result<u64> {
        self.terms
            .get(i)
            .copied()
            .ok_or_else(|| Error::Overflow(format!("F_{i}")))
    }

    /// Index `r` with `F_r <= n < F_{r+1}`; `n` must be positive.
    pub fn level_of(&self, n: u64) -> usize {
        debug_assert!(n >= 1);
        self.terms.partition_point(|&f| f <= n) - 1
    }

    /// Greedy expansion of `n`.
    pub fn encode(&self, mut n: u64) -> Digits {
        if n == 0 {
            return Digits::zero();
        }
        let top = self.level_of(n);
        let mut digits = vec![0u8; top + 1];
        for i in (0..=top).rev() {
            let f = self.terms[i];
            let q = n / f;
            n -= q * f;
            digits[i] = q as u8;
        }
        Digits::from_lsb(digits)
    }

    /// Value of an admissible word.
    pub fn decode(&self, w: &Digits) -> Result<u64> {
        if !self.is_admissible(w.as_lsb()) {
            return Err(Error::InvalidWord(format!(
                "{w} is not admissible in base {}",
                self.base.name()
            )));
        }
        let mut total: u64 = 0;
        for (i, &e) in w.as_lsb().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let f = self.term(i)?;
            total = (e as u64)
                .checked_mul(f)
                .and_then(|t| total.checked_add(t))
                .ok_or_else(|| Error::Overflow(format!("value of {w}")))?;
        }
        Ok(total)
    }

    pub fn is_admissible(&self, lsb: &[u8]) -> bool {
        is_admissible(lsb, &self.base)
    }
}

/// Digit constraint of the base.
///
/// For `i >= d-1` the window `e_i e_{i-1} .. e_{i-d+1}` must be
/// lexicographically smaller than `a_1 .. a_d`. The lowest `d-1` positions
/// see a truncated window that may equal the matching prefix of `a`, since
/// `a_1 .. a_n` read as a word of length `n < d` is worth `F_n - 1`.
pub fn is_admissible(lsb: &[u8], base: &BaseDef) -> bool {
    let a = base.coefficients();
    let d = a.len();
    for i in 0..lsb.len() {
        let width = (i + 1).min(d);
        let window = (0..width).map(|k| lsb[i - k] as u64);
        let ord = window.cmp(a[..width].iter().copied());
        let ok = if i + 1 >= d {
            ord == Ordering::Less
        } else {
            ord != Ordering::Greater
        };
        if !ok {
            return false;
        }
    }
    true
}

pub fn encode(n: u64, base: &BaseDef) -> Digits {
    if base.is_fibonacci() {
        Numeration::fibonacci().encode(n)
    } else {
        Numeration::new(base.clone()).encode(n)
    }
}

pub fn decode(w: &Digits, base: &BaseDef) -> Result<u64> {
    if base.is_fibonacci() {
        Numeration::fibonacci().decode(w)
    } else {
        Numeration::new(base.clone()).decode(w)
    }
}

/// Fibonacci term `F_i` (with `F_0 = 1`, `F_1 = 2`).
pub fn fib(i: usize) -> Result<u64> {
    Numeration::fibonacci().term(i)
}

/// A digit word, least-significant digit first, without trailing zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Digits {
    lsb: Vec<u8>,
}

impl Digits {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a word from least-significant-first digits, dropping
    /// leading (most significant) zeros.
    pub fn from_lsb(mut lsb: Vec<u8>) -> Self {
        while lsb.last() == Some(&0) {
            lsb.pop();
        }
        Self { lsb }
    }

    pub fn as_lsb(&self) -> &[u8] {
        &self.lsb
    }

    /// Number of stored digits (`k(N) + 1`, or 0 for zero).
    pub fn len(&self) -> usize {
        self.lsb.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lsb.is_empty()
    }

    /// Digit at position `i`, zero beyond the top.
    pub fn digit(&self, i: usize) -> u8 {
        self.lsb.get(i).copied().unwrap_or(0)
    }

    pub fn to_msb_string(&self) -> String {
        self.lsb
            .iter()
            .rev()
            .map(|&d| char::from(b'0' + d))
            .collect()
    }
}

impl fmt::Display for Digits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lsb.is_empty() {
            // empty word; print nothing rather than a misleading "0"
            return Ok(());
        }
        f.write_str(&self.to_msb_string())
    }
}

impl FromStr for Digits {
    type Err = Error;

    /// Parses a most-significant-first word of characters `0..9`.
    fn from_str(s: &str) -> Result<Self> {
        let mut lsb = Vec::with_capacity(s.len());
        for c in s.trim().chars().rev() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in {s:?}")))?;
            lsb.push(d as u8);
        }
        Ok(Self::from_lsb(lsb))
    }
}

/// Radix order: longer canonical words are larger, equal lengths compare
/// most-significant digit first.
impl Ord for Digits {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lsb
            .len()
            .cmp(&other.lsb.len())
            .then_with(|| self.lsb.iter().rev().cmp(other.lsb.iter().rev()))
    }
}

impl PartialOrd for Digits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msb(s: &str) -> Digits {
        s.parse().unwrap()
    }

    fn tribonacci() -> BaseDef {
        BaseDef::new(vec![1, 1, 1], "tribonacci").unwrap()
    }

    #[test]
    fn fibonacci_sequence_prefix() {
        let fib = BaseDef::fibonacci();
        assert_eq!(base_sequence(&fib, 6).unwrap(), vec![1, 2, 3, 5, 8, 13]);
        assert_eq!(base_sequence(&fib, 1).unwrap(), vec![1]);
    }

    #[test]
    fn order_three_sequence_matches_direct_evaluation() {
        // F_0 = 1, F_1 = F_0 + 1, F_2 = F_1 + F_0 + 1, then the recurrence.
        let f0 = 1u64;
        let f1 = f0 + 1;
        let f2 = f1 + f0 + 1;
        let f3 = f2 + f1 + f0;
        let f4 = f3 + f2 + f1;
        assert_eq!(
            base_sequence(&tribonacci(), 5).unwrap(),
            vec![f0, f1, f2, f3, f4]
        );
        assert_eq!(vec![f0, f1, f2, f3, f4], vec![1, 2, 4, 7, 13]);
    }

    #[test]
    fn sequence_overflow_is_reported() {
        let fib = BaseDef::fibonacci();
        let n = Numeration::fibonacci().terms().len();
        assert!(base_sequence(&fib, n).is_ok());
        assert!(matches!(
            base_sequence(&fib, n + 1),
            Err(Error::Overflow(_))
        ));
        // F_n is the standard Fibonacci number Fib(n + 2); Fib(93) is the last in u64.
        assert_eq!(n, 92);
    }

    #[test]
    fn base_validation() {
        assert!(BaseDef::new(vec![1], "x").is_err());
        assert!(BaseDef::new(vec![1, 2], "x").is_err());
        assert!(BaseDef::new(vec![2, 0], "x").is_err());
        assert!(BaseDef::new(vec![3, 2, 2], "x").is_ok());
    }

    #[test]
    fn worked_encodings() {
        let fib = BaseDef::fibonacci();
        assert_eq!(encode(12, &fib).to_string(), "10101");
        assert_eq!(encode(17, &fib).to_string(), "100101");
        assert!(encode(0, &fib).is_empty());
        assert_eq!(encode(14, &fib).to_string(), "100001");
    }

    #[test]
    fn worked_decodings() {
        let fib = BaseDef::fibonacci();
        assert_eq!(decode(&msb("100101"), &fib).unwrap(), 17);
        assert_eq!(decode(&Digits::zero(), &fib).unwrap(), 0);
        assert_eq!(decode(&msb("101000"), &fib).unwrap(), 18);
        assert!(matches!(
            decode(&msb("0110"), &fib),
            Err(Error::InvalidWord(_))
        ));
    }

    #[test]
    fn admissibility_examples() {
        let fib = BaseDef::fibonacci();
        assert!(!is_admissible(msb("0110").as_lsb(), &fib));
        assert!(is_admissible(msb("10101").as_lsb(), &fib));
        assert!(!is_admissible(msb("2").as_lsb(), &fib));
        assert!(!is_admissible(msb("111").as_lsb(), &tribonacci()));
        assert!(is_admissible(msb("1101").as_lsb(), &tribonacci()));
    }

    #[test]
    fn msb_text_round_trip() {
        let w = msb("00101");
        assert_eq!(w.as_lsb(), &[1, 0, 1]);
        assert_eq!(w.to_string(), "101");
        assert!("12a".parse::<Digits>().is_err());
    }

    /// Every admissible word of length <= L decodes to a distinct value,
    /// and together they cover exactly `0 .. F_L`.
    fn check_uniqueness(base: &BaseDef, len: usize) {
        let sys = Numeration::new(base.clone());
        let max_digit = base.coefficients()[0] as u8;
        let total = (max_digit as usize + 1).pow(len as u32);
        let limit = sys.terms()[len];
        let mut seen = vec![false; limit as usize];
        let mut count = 0;
        let mut word = vec![0u8; len];
        for mut code in 0..total {
            for d in word.iter_mut() {
                *d = (code % (max_digit as usize + 1)) as u8;
                code /= max_digit as usize + 1;
            }
            if !is_admissible(&word, base) {
                continue;
            }
            let value: u64 = word
                .iter()
                .enumerate()
                .map(|(i, &d)| d as u64 * sys.terms()[i])
                .sum();
            assert!(value < limit, "{word:?} -> {value} >= {limit}");
            assert!(!seen[value as usize], "{value} represented twice");
            seen[value as usize] = true;
            count += 1;
            assert_eq!(sys.encode(value), Digits::from_lsb(word.clone()));
        }
        assert_eq!(count, limit as usize);
    }

    #[test]
    fn uniqueness_by_enumeration_fibonacci() {
        check_uniqueness(&BaseDef::fibonacci(), 15);
    }

    #[test]
    fn uniqueness_by_enumeration_other_bases() {
        check_uniqueness(&tribonacci(), 10);
        check_uniqueness(&BaseDef::new(vec![2, 1], "x").unwrap(), 8);
        check_uniqueness(&BaseDef::new(vec![2, 1, 1], "x").unwrap(), 7);
        check_uniqueness(&BaseDef::new(vec![2, 2, 1], "x").unwrap(), 6);
        check_uniqueness(&BaseDef::new(vec![3, 1], "x").unwrap(), 6);
    }

    #[test]
    fn round_trip_and_order() {
        for base in [BaseDef::fibonacci(), tribonacci()] {
            let sys = Numeration::new(base);
            let mut prev = sys.encode(0);
            assert_eq!(sys.decode(&prev).unwrap(), 0);
            for n in 1..=100_000u64 {
                let w = sys.encode(n);
                assert_eq!(sys.decode(&w).unwrap(), n);
                if n <= 10_000 {
                    assert!(prev < w);
                }
                prev = w;
            }
        }
    }

    #[test]
    fn largest_value_round_trips() {
        let sys = Numeration::fibonacci();
        let w = sys.encode(u64::MAX);
        assert_eq!(sys.decode(&w).unwrap(), u64::MAX);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn encode_is_admissible_and_inverts(n in any::<u64>()) {
                let sys = Numeration::fibonacci();
                let w = sys.encode(n);
                prop_assert!(sys.is_admissible(w.as_lsb()));
                prop_assert_eq!(sys.decode(&w).unwrap(), n);
            }

            #[test]
            fn radix_order_matches_integer_order(a in 0u64..1_000_000, b in 0u64..1_000_000) {
                let sys = Numeration::fibonacci();
                prop_assert_eq!(a.cmp(&b), sys.encode(a).cmp(&sys.encode(b)));
            }
        }
    }
}
