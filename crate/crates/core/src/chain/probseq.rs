use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Continuation of an explicit prefix `p_1 .. p_m`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailRule {
    /// `p_i = 1` for `i > m`.
    #[default]
    Ones,
    /// `p_i = p_m` for `i > m`.
    RepeatLast,
    /// `p_{m+j} = min(1, p_m * ratio^j)`.
    Geometric { ratio: f64 },
}

/// A probability sequence `(p_i)_{i >= 1}` with values in `(0, 1]`.
///
/// Every variant has a closed-form tail so that products and series over
/// the whole sequence can be decided symbolically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "repr::ProbSeqRepr", into = "repr::ProbSeqRepr")]
pub enum ProbSeq {
    Explicit {
        values: Vec<f64>,
        tail: TailRule,
    },
    ConstantTail {
        prefix: Vec<f64>,
        tail: f64,
    },
    /// `p_i = 1 - c * i^(-alpha)`.
    PowerLawComplement {
        c: f64,
        alpha: f64,
    },
    /// `p_i = c * rho^i`.
    GeometricDecay {
        c: f64,
        rho: f64,
    },
}

fn clamp(x: f64) -> f64 {
    x.clamp(f64::MIN_POSITIVE, 1.0)
}

fn check_prob(what: &str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidSequence(format!(
            "{what} = {x} is not in (0, 1]"
        )))
    }
}

fn check_prefix(values: &[f64]) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        check_prob(&format!("p_{}", i + 1), v)?;
    }
    Ok(())
}

impl ProbSeq {
    pub fn explicit(values: Vec<f64>, tail: TailRule) -> Result<Self> {
        let s = ProbSeq::Explicit { values, tail };
        s.validate()?;
        Ok(s)
    }

    pub fn constant_tail(prefix: Vec<f64>, tail: f64) -> Result<Self> {
        let s = ProbSeq::ConstantTail { prefix, tail };
        s.validate()?;
        Ok(s)
    }

    pub fn constant(p: f64) -> Result<Self> {
        Self::constant_tail(Vec::new(), p)
    }

    pub fn all_ones() -> Self {
        ProbSeq::ConstantTail {
            prefix: Vec::new(),
            tail: 1.0,
        }
    }

    pub fn power_law_complement(c: f64, alpha: f64) -> Result<Self> {
        let s = ProbSeq::PowerLawComplement { c, alpha };
        s.validate()?;
        Ok(s)
    }

    pub fn geometric_decay(c: f64, rho: f64) -> Result<Self> {
        let s = ProbSeq::GeometricDecay { c, rho };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ProbSeq::Explicit { values, tail } => {
                check_prefix(values)?;
                match tail {
                    TailRule::Ones => Ok(()),
                    TailRule::RepeatLast if values.is_empty() => Err(Error::InvalidSequence(
                        "repeat_last tail needs a non-empty prefix".into(),
                    )),
                    TailRule::RepeatLast => Ok(()),
                    TailRule::Geometric { ratio } => {
                        if values.is_empty() {
                            Err(Error::InvalidSequence(
                                "geometric tail needs a non-empty prefix".into(),
                            ))
                        } else if !(ratio.is_finite() && *ratio > 0.0) {
                            Err(Error::InvalidSequence(format!(
                                "tail ratio {ratio} must be positive"
                            )))
                        } else {
                            Ok(())
                        }
                    }
                }
            }
            ProbSeq::ConstantTail { prefix, tail } => {
                check_prefix(prefix)?;
                check_prob("tail", *tail)
            }
            ProbSeq::PowerLawComplement { c, alpha } => {
                if !(c.is_finite() && *c >= 0.0) {
                    return Err(Error::InvalidSequence(format!("c = {c} must be >= 0")));
                }
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return Err(Error::InvalidSequence(format!(
                        "alpha = {alpha} must be > 0"
                    )));
                }
                Ok(())
            }
            ProbSeq::GeometricDecay { c, rho } => {
                if !(c.is_finite() && *c > 0.0) {
                    return Err(Error::InvalidSequence(format!("c = {c} must be > 0")));
                }
                if !(rho.is_finite() && *rho > 0.0) {
                    return Err(Error::InvalidSequence(format!("rho = {rho} must be > 0")));
                }
                Ok(())
            }
        }
    }

    /// `p_i` for `i >= 1`.
    pub fn p(&self, i: usize) -> f64 {
        assert!(i >= 1, "probability sequences are indexed from 1");
        match self {
            ProbSeq::Explicit { values, tail } => match values.get(i - 1) {
                Some(&v) => v,
                None => match tail {
                    TailRule::Ones => 1.0,
                    TailRule::RepeatLast => *values.last().unwrap(),
                    TailRule::Geometric { ratio } => {
                        let last = *values.last().unwrap();
                        clamp(last * ratio.powi((i - values.len()) as i32))
                    }
                },
            },
            ProbSeq::ConstantTail { prefix, tail } => prefix.get(i - 1).copied().unwrap_or(*tail),
            ProbSeq::PowerLawComplement { c, alpha } => clamp(1.0 - c * (i as f64).powf(-alpha)),
            ProbSeq::GeometricDecay { c, rho } => clamp(c * rho.powi(i as i32)),
        }
    }

    /// `p_1 .. p_count`.
    pub fn prefix(&self, count: usize) -> Vec<f64> {
        (1..=count).map(|i| self.p(i)).collect()
    }

    /// `inf_{i >= 1} p_i`; zero when the sequence accumulates at 0.
    pub fn delta_lower_bound(&self) -> f64 {
        let min_of = |xs: &[f64]| xs.iter().copied().fold(f64::INFINITY, f64::min);
        match self {
            ProbSeq::Explicit { values, tail } => match tail {
                TailRule::Ones => min_of(values).min(1.0),
                TailRule::RepeatLast => min_of(values),
                TailRule::Geometric { ratio } if *ratio < 1.0 => 0.0,
                TailRule::Geometric { .. } => min_of(values),
            },
            ProbSeq::ConstantTail { prefix, tail } => min_of(prefix).min(*tail),
            ProbSeq::PowerLawComplement { .. } => self.p(1),
            ProbSeq::GeometricDecay { rho, .. } if *rho < 1.0 => 0.0,
            ProbSeq::GeometricDecay { .. } => self.p(1),
        }
    }

    /// True when every `p_i` equals 1 (the deterministic machine).
    pub fn is_all_ones(&self) -> bool {
        match self {
            ProbSeq::Explicit { values, tail } => {
                values.iter().all(|&v| v == 1.0)
                    && match tail {
                        TailRule::Ones | TailRule::RepeatLast => true,
                        TailRule::Geometric { ratio } => *ratio >= 1.0,
                    }
            }
            ProbSeq::ConstantTail { prefix, tail } => {
                *tail == 1.0 && prefix.iter().all(|&v| v == 1.0)
            }
            ProbSeq::PowerLawComplement { c, .. } => *c == 0.0,
            ProbSeq::GeometricDecay { .. } => false,
        }
    }
}

mod repr {
    use super::*;

    #[derive(Debug, Clone, Copy, Serialize, Deserialize)]
    pub struct PowerLawParam {
        pub c: f64,
        pub alpha: f64,
    }

    #[derive(Debug, Clone, Copy, Serialize, Deserialize)]
    pub struct GeometricParam {
        pub c: f64,
        pub rho: f64,
    }

    /// JSON layout: `{"variant": "...", "prefix": [...], "param": ...}`.
    #[derive(Debug, Clone, Serialize, Deserialize)]
    #[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
    pub enum ProbSeqRepr {
        Explicit {
            prefix: Vec<f64>,
            #[serde(default)]
            tail: TailRule,
        },
        ConstantTail {
            #[serde(default)]
            prefix: Vec<f64>,
            param: f64,
        },
        PowerLawComplement {
            param: PowerLawParam,
        },
        GeometricDecay {
            param: GeometricParam,
        },
    }

    impl TryFrom<ProbSeqRepr> for ProbSeq {
        type Error = Error;

        fn try_from(r: ProbSeqRepr) -> Result<Self> {
            let s = match r {
                ProbSeqRepr::Explicit { prefix, tail } => ProbSeq::Explicit {
                    values: prefix,
                    tail,
                },
                ProbSeqRepr::ConstantTail { prefix, param } => ProbSeq::ConstantTail {
                    prefix,
                    tail: param,
                },
                ProbSeqRepr::PowerLawComplement { param } => ProbSeq::PowerLawComplement {
                    c: param.c,
                    alpha: param.alpha,
                },
                ProbSeqRepr::GeometricDecay { param } => ProbSeq::GeometricDecay {
                    c: param.c,
                    rho: param.rho,
                },
            };
            s.validate()?;
            Ok(s)
        }
    }

    impl From<ProbSeq> for ProbSeqRepr {
        fn from(s: ProbSeq) -> Self {
            match s {
                ProbSeq::Explicit { values, tail } => ProbSeqRepr::Explicit {
                    prefix: values,
                    tail,
                },
                ProbSeq::ConstantTail { prefix, tail } => ProbSeqRepr::ConstantTail {
                    prefix,
                    param: tail,
                },
                ProbSeq::PowerLawComplement { c, alpha } => ProbSeqRepr::PowerLawComplement {
                    param: PowerLawParam { c, alpha },
                },
                ProbSeq::GeometricDecay { c, rho } => ProbSeqRepr::GeometricDecay {
                    param: GeometricParam { c, rho },
                },
            }
        }
    }
}
