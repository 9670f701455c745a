use std::fmt;

use super::probseq::{ProbSeq, TailRule};

/// Golden ratio squared; `F_{2i}` grows like `phi^(2i)`.
const PHI_SQUARED: f64 = 2.618_033_988_749_895;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainClass {
    Transient,
    NullRecurrent,
    PositiveRecurrent,
    Unknown,
}

impl fmt::Display for ChainClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainClass::Transient => "Transient",
            ChainClass::NullRecurrent => "NullRecurrent",
            ChainClass::PositiveRecurrent => "PositiveRecurrent",
            ChainClass::Unknown => "Unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: ChainClass,
    pub reason: String,
}

/// Convergence facts about a sequence, decided from its closed-form tail.
struct TailFacts {
    product_positive: bool,
    sum_diverges: bool,
    /// `sum p_i F_{2(i-1)} < inf`; only meaningful when the sum of `p_i` converges.
    weighted_sum_converges: bool,
    detail: String,
}

fn geometric_facts(ratio: f64, what: &str) -> TailFacts {
    // ratio < 1 here: prod = 0, sum < inf, weighted terms ~ (ratio * phi^2)^i
    TailFacts {
        product_positive: false,
        sum_diverges: false,
        weighted_sum_converges: ratio * PHI_SQUARED < 1.0,
        detail: format!(
            "{what} ratio {ratio} (ratio * phi^2 = {})",
            ratio * PHI_SQUARED
        ),
    }
}

fn constant_facts(value: f64, what: &str) -> TailFacts {
    TailFacts {
        product_positive: value >= 1.0,
        sum_diverges: true,
        weighted_sum_converges: false,
        detail: format!("{what} {value}"),
    }
}

fn tail_facts(p: &ProbSeq) -> TailFacts {
    match p {
        ProbSeq::Explicit { values, tail } => match *tail {
            TailRule::Ones => {
                constant_facts(1.0, "tail of ones after an explicit prefix, constant")
            }
            TailRule::RepeatLast => constant_facts(*values.last().unwrap(), "repeated last value"),
            TailRule::Geometric { ratio } if ratio < 1.0 => {
                geometric_facts(ratio, "geometric tail")
            }
            TailRule::Geometric { ratio } if ratio > 1.0 => {
                constant_facts(1.0, "geometric tail saturating at 1, eventually")
            }
            TailRule::Geometric { .. } => {
                constant_facts(*values.last().unwrap(), "tail ratio 1, constant")
            }
        },
        ProbSeq::ConstantTail { tail, .. } => constant_facts(*tail, "constant tail"),
        ProbSeq::PowerLawComplement { c, alpha } => {
            let summable = *c == 0.0 || *alpha > 1.0;
            TailFacts {
                product_positive: summable,
                sum_diverges: true,
                weighted_sum_converges: false,
                detail: format!("1 - p_i = {c} * i^-{alpha}"),
            }
        }
        ProbSeq::GeometricDecay { c, rho } => {
            if *rho < 1.0 {
                geometric_facts(*rho, "geometric decay")
            } else if *rho > 1.0 {
                constant_facts(1.0, "geometric growth saturating at 1, eventually")
            } else {
                constant_facts(c.min(1.0), "constant")
            }
        }
    }
}

/// Transience / null recurrence / positive recurrence of the chain.
///
/// Transient iff `prod p_i > 0`. Otherwise null recurrent when
/// `sum p_i = inf`, positive recurrent when `sum p_i F_{2(i-1)} < inf`.
/// The remaining gap is reported as unknown.
pub fn classify(p: &ProbSeq) -> Classification {
    let facts = tail_facts(p);
    let (class, criterion) = if facts.product_positive {
        (ChainClass::Transient, "product of p_i is positive")
    } else if facts.sum_diverges {
        (
            ChainClass::NullRecurrent,
            "product of p_i is 0 and sum of p_i diverges",
        )
    } else if facts.weighted_sum_converges {
        (
            ChainClass::PositiveRecurrent,
            "sum of p_i F_{2(i-1)} converges",
        )
    } else {
        (
            ChainClass::Unknown,
            "product is 0 and sum of p_i converges, but sum of p_i F_{2(i-1)} diverges",
        )
    };
    Classification {
        class,
        reason: format!("{criterion} ({})", facts.detail),
    }
}
