//! Integer Laurent polynomials in one formal variable.
//!
//! The same type stores bracket polynomials (variable `A`) and Jones
//! polynomials (variable `T = t^{1/2}`, half-integer exponents doubled so
//! everything lives in one integer-exponent ring).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    // exponent -> nonzero coefficient
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coef: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coef != 0 {
            coeffs.insert(exp, coef);
        }
        LaurentPoly { coeffs }
    }

    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut p = LaurentPoly::zero();
        for &(e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, exp: i64, coef: i64) {
        if coef == 0 {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert(0);
        *entry = entry.checked_add(coef).expect("coefficient overflow");
        if *entry == 0 {
            self.coeffs.remove(&exp);
        }
    }

    /// Multiply by `coef * x^exp`.
    pub fn mul_monomial(&self, exp: i64, coef: i64) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in self.terms() {
            out.add_term(e + exp, c.checked_mul(coef).expect("coefficient overflow"));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = LaurentPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Substitute `x -> x^-1`.
    pub fn invert_variable(&self) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in self.terms() {
            out.add_term(-e, c);
        }
        out
    }

    /// Exponents all even? (Used when converting bracket output to the
    /// doubled-exponent Jones variable.)
    pub fn exponents_even(&self) -> bool {
        self.coeffs.keys().all(|e| e % 2 == 0)
    }

    /// Halve every exponent and negate it: `A^k -> T^{-k/2}`.
    pub fn halve_and_negate_exponents(&self) -> Self {
        let mut out = LaurentPoly::zero();
        for (e, c) in self.terms() {
            assert!(e % 2 == 0, "odd exponent {e}");
            out.add_term(-e / 2, c);
        }
        out
    }

    /// Evaluate at the imaginary unit, returning (real, imaginary).
    pub fn eval_at_i(&self) -> (i64, i64) {
        let mut re = 0i64;
        let mut im = 0i64;
        for (e, c) in self.terms() {
            match e.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                _ => im -= c,
            }
        }
        (re, im)
    }

    /// Deterministic total order for canonical comparisons.
    pub fn cmp_key(&self) -> Vec<(i64, i64)> {
        self.terms().collect()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1.checked_mul(c2).expect("coefficient overflow"));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.mul_monomial(0, -1)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match e {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "x")?,
                1 => write!(f, "{a}x")?,
                _ if a == 1 => write!(f, "x^{e}")?,
                _ => write!(f, "{a}x^{e}")?,
            }
        }
        Ok(())
    }
}

/// `delta = -A^2 - A^-2`, the bracket loop value.
pub fn loop_value() -> LaurentPoly {
    LaurentPoly::from_terms(&[(2, -1), (-2, -1)])
}

/// Jones polynomial of the n-component unlink in the doubled-exponent
/// variable: `(-T - T^-1)^(n-1)`.
pub fn unlink_jones(n: usize) -> LaurentPoly {
    assert!(n >= 1);
    LaurentPoly::from_terms(&[(1, -1), (-1, -1)]).pow((n - 1) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = LaurentPoly::from_terms(&[(0, 1), (1, 2)]);
        let q = LaurentPoly::from_terms(&[(0, 1), (1, -2)]);
        assert_eq!(&p + &q, LaurentPoly::monomial(0, 2));
        assert_eq!(&p * &q, LaurentPoly::from_terms(&[(0, 1), (2, -4)]));
        assert_eq!(p.mul_monomial(3, -1), LaurentPoly::from_terms(&[(3, -1), (4, -2)]));
    }

    #[test]
    fn eval_at_i() {
        // T + T^-1 at i is 0; T^2 at i is -1
        let p = LaurentPoly::from_terms(&[(1, 1), (-1, 1)]);
        assert_eq!(p.eval_at_i(), (0, 0));
        assert_eq!(LaurentPoly::monomial(2, 1).eval_at_i(), (-1, 0));
        assert_eq!(LaurentPoly::monomial(-3, 2).eval_at_i(), (0, 2));
    }

    #[test]
    fn unlink_values() {
        assert_eq!(unlink_jones(1), LaurentPoly::one());
        assert_eq!(unlink_jones(2), LaurentPoly::from_terms(&[(1, -1), (-1, -1)]));
        let (re, im) = unlink_jones(2).eval_at_i();
        assert_eq!((re, im), (0, 0));
    }
}
