use num_complex::Complex64;

use super::escape::{escape_radius, ESCAPE_SLACK};
use super::orbit::{fiber_step, r_coefficient, OVERFLOW_CAP};
use crate::chain::ProbSeq;
use crate::error::{Error, Result};

/// Complex polynomial, `coefficients[k]` multiplying `z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coefficients: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        Self { coefficients }
    }

    /// `z^2`.
    pub fn square() -> Self {
        Self::new(vec![0.0.into(), 0.0.into(), 1.0.into()])
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, &c| acc * z + c)
    }

    /// `a_2 z^2 + ... + a_n z^n` with some `a_k != 0`.
    pub fn check_critical_form(&self) -> Result<()> {
        let zero = Complex64::default();
        if self.coefficients.iter().take(2).any(|&c| c != zero) {
            return Err(Error::InvalidPolynomial(
                "constant and linear coefficients must vanish".into(),
            ));
        }
        if self.coefficients.iter().skip(2).all(|&c| c == zero) {
            return Err(Error::InvalidPolynomial("polynomial is zero".into()));
        }
        if self.coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPolynomial("non-finite coefficient".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiOrbit {
    pub h: Polynomial,
    /// `phi_0(z), phi_1(z), ...`, stopping before any value past the cap.
    pub values: Vec<Complex64>,
}

/// `phi_0 = z`, `phi_1 = h(z)`, `phi_n = phi_{n-1} phi_{n-2} / r_n - (1/r_n - 1)`.
pub fn phi_orbit_at(h: &Polynomial, p: &ProbSeq, z: Complex64, levels: usize) -> PhiOrbit {
    let mut values = vec![z];
    if levels >= 1 {
        values.push(h.eval(z));
    }
    for n in 2..=levels {
        let next = fiber_step(values[n - 1], values[n - 2], r_coefficient(n, p));
        if !(next.norm() <= OVERFLOW_CAP) {
            break;
        }
        values.push(next);
    }
    PhiOrbit {
        h: h.clone(),
        values,
    }
}

/// Orbit of the critical point 0.
pub fn phi_orbit(h: &Polynomial, p: &ProbSeq, levels: usize) -> Result<PhiOrbit> {
    h.check_critical_form()?;
    Ok(phi_orbit_at(h, p, Complex64::default(), levels))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Connectivity {
    /// The critical orbit escapes from this level on.
    NonConnected {
        level: usize,
    },
    Inconclusive {
        reason: String,
    },
}

/// Sufficient test for non-connectedness of `E` via the critical orbit of
/// `h(z) = z^2 / p_2 - (1/p_2 - 1)`.
///
/// The critical-point argument needs `h(0) = 0`, i.e. `p_2 = 1`; other
/// sequences are reported as inconclusive.
pub fn non_connectedness_test(p: &ProbSeq, levels: usize) -> Result<Connectivity> {
    let radius = escape_radius(p, 0.0)?;
    let p2 = p.p(2);
    if p2 != 1.0 {
        return Ok(Connectivity::Inconclusive {
            reason: format!("p_2 = {p2} < 1, so h(0) != 0 and 0 is not a critical orbit of F_h"),
        });
    }
    let orbit = phi_orbit(&Polynomial::square(), p, levels)?;
    let big = 1.0 + ESCAPE_SLACK;
    for (n, z) in orbit.values.iter().enumerate() {
        if n >= 1 && orbit.values[n - 1].norm() > big && z.norm() > big {
            return Ok(Connectivity::NonConnected { level: n - 1 });
        }
        if z.norm() > radius {
            return Ok(Connectivity::NonConnected { level: n });
        }
    }
    if orbit.values.len() <= levels {
        return Ok(Connectivity::NonConnected {
            level: orbit.values.len(),
        });
    }
    Ok(Connectivity::Inconclusive {
        reason: format!("critical orbit stays bounded through level {levels}"),
    })
}
