//! Hirzebruch-Jung continued fractions.
//!
//! All arithmetic is arbitrary precision; there is no floating point in this
//! module. The expansion convention is the "minus" one:
//!
//! ```text
//! [a1, a2, ..., ak] = a1 - 1/(a2 - 1/(... - 1/ak))
//! ```
//!
//! For coprime `p > q >= 1` the expansion of `p/q` with every coefficient at
//! least 2 exists and is unique; `hj_expand` computes it by ceiling division.

use crate::error::{domain, Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// An exact rational with positive denominator, kept normalized.
///
/// Fractions fed to `hj_expand` additionally satisfy `num > den > 0`; that
/// precondition is checked at the call sites, not here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction {
    num: BigInt,
    den: BigInt,
}

impl Fraction {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(domain("zero denominator"));
        }
        let mut num = num;
        let mut den = den;
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_zero() {
            num /= &g;
            den /= &g;
        }
        Ok(Fraction { num, den })
    }

    pub fn from_u64(num: u64, den: u64) -> Result<Self> {
        Self::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    fn from_rational(r: &BigRational) -> Self {
        // BigRational is already normalized with positive denominator.
        Fraction {
            num: r.numer().clone(),
            den: r.denom().clone(),
        }
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A finite nonempty string of continued-fraction coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HjString {
    coeffs: Vec<BigInt>,
}

impl HjString {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(domain("empty continued-fraction string"));
        }
        Ok(HjString { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        HjString {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeff_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Coefficients as machine integers, if they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| i64::try_from(c).ok()).collect()
    }

    /// True when every coefficient is at least 2.
    pub fn all_at_least_two(&self) -> bool {
        let two = BigInt::from(2);
        self.coeffs.iter().all(|c| *c >= two)
    }
}

impl fmt::Display for HjString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

fn check_expand_input(p: &BigInt, q: &BigInt) -> Result<()> {
    if !q.is_positive() || p <= q {
        return Err(domain(format!("need p > q >= 1, got p={p}, q={q}")));
    }
    if !p.gcd(q).is_one() {
        return Err(domain(format!("p={p} and q={q} are not coprime")));
    }
    Ok(())
}

/// The unique expansion of `p/q` with all coefficients >= 2.
///
/// Uses the ceiling-division recursion `a = ceil(p/q)`, then recurses on
/// `q / (a*q - p)`.
pub fn hj_expand(p: &BigInt, q: &BigInt) -> Result<HjString> {
    check_expand_input(p, q)?;
    let mut p = p.clone();
    let mut q = q.clone();
    let mut coeffs = Vec::new();
    while !q.is_zero() {
        // ceil(p/q) for positive p, q
        let a = (&p + &q - BigInt::one()).div_floor(&q);
        let r = &a * &q - &p;
        coeffs.push(a);
        p = std::mem::replace(&mut q, r);
    }
    HjString::new(coeffs)
}

/// Convenience wrapper over machine integers.
pub fn hj_expand_u(p: u64, q: u64) -> Result<HjString> {
    hj_expand(&BigInt::from(p), &BigInt::from(q))
}

/// Exact evaluation of a coefficient string, folding from the right.
///
/// Fails with `NonAdmissible` if a nested tail evaluates to zero (division by
/// zero). Strings with all coefficients >= 2 never fail.
pub fn hj_eval(s: &HjString) -> Result<Fraction> {
    let mut acc: Option<BigRational> = None;
    for (idx, c) in s.coeffs.iter().enumerate().rev() {
        let c = BigRational::from(c.clone());
        let next = match acc {
            None => c,
            Some(tail) => {
                if tail.is_zero() {
                    return Err(Error::NonAdmissible(idx));
                }
                c - tail.recip()
            }
        };
        acc = Some(next);
    }
    Ok(Fraction::from_rational(&acc.expect("nonempty string")))
}

/// Modular inverse: the unique `n` with `q*n == 1 (mod p)` and `0 < n < p`.
pub fn mod_inverse(q: &BigInt, p: &BigInt) -> Result<BigInt> {
    if *p <= BigInt::one() {
        return Err(domain(format!("modulus must exceed 1, got {p}")));
    }
    let q = q.mod_floor(p);
    let ext = q.extended_gcd(p);
    if !ext.gcd.is_one() {
        return Err(domain(format!("{q} is not invertible mod {p}")));
    }
    Ok(ext.x.mod_floor(p))
}

pub fn mod_inverse_u(q: u64, p: u64) -> Result<u64> {
    let n = mod_inverse(&BigInt::from(q), &BigInt::from(p))?;
    Ok(u64::try_from(&n).expect("inverse fits"))
}

/// Riemenschneider point-rule rewrite of an all->=2 string: the expansion of
/// `p/(p-q)` computed directly from the expansion of `p/q`.
///
/// Row `i` carries `a_i - 1` dots, each new row starting in the column of the
/// previous row's last dot; the dual coefficients are column counts plus one.
pub fn riemenschneider_dual(s: &HjString) -> Result<HjString> {
    if !s.all_at_least_two() {
        return Err(domain("point rule needs all coefficients >= 2"));
    }
    let coeffs = s
        .to_i64s()
        .ok_or_else(|| domain("coefficients too large for point rule"))?;
    let mut col_counts: Vec<i64> = Vec::new();
    let mut col = 0usize;
    for (i, a) in coeffs.iter().enumerate() {
        let dots = (*a - 1) as usize;
        if i > 0 {
            // first dot shares the previous row's last column
            col = col_counts.len() - 1;
        }
        for j in 0..dots {
            let c = col + j;
            if c == col_counts.len() {
                col_counts.push(0);
            }
            col_counts[c] += 1;
        }
    }
    HjString::new(col_counts.into_iter().map(|h| BigInt::from(h + 1)).collect())
}

/// Expansion of `p/(p-q)`, the planar dual.
///
/// Computed by `hj_expand(p, p-q)` and cross-checked against the
/// Riemenschneider rewrite of `hj_expand(p, q)`.
pub fn dual(p: &BigInt, q: &BigInt) -> Result<HjString> {
    check_expand_input(p, q)?;
    let direct = hj_expand(p, &(p - q))?;
    let a = hj_expand(p, q)?;
    if let Ok(rewritten) = riemenschneider_dual(&a) {
        if rewritten != direct {
            return Err(Error::Verification(format!(
                "point rule disagreed with expansion for {p}/{q}: {rewritten} vs {direct}"
            )));
        }
    }
    Ok(direct)
}

pub fn dual_u(p: u64, q: u64) -> Result<HjString> {
    dual(&BigInt::from(p), &BigInt::from(q))
}

/// Reversed coefficient string. Evaluates to `p / (q^{-1} mod p)` when the
/// input expands `p/q`.
pub fn reverse(s: &HjString) -> HjString {
    let mut coeffs = s.coeffs.clone();
    coeffs.reverse();
    HjString { coeffs }
}

fn check_wahl_input(p: &BigInt, q: &BigInt) -> Result<()> {
    check_expand_input(p, q)?;
    if *p < BigInt::from(2) {
        return Err(domain("need p >= 2"));
    }
    Ok(())
}

/// The expansion of `p^2 / (pq - 1)` built by concatenation:
/// `[a1, ..., a(k-1), ak + bl, b(l-1), ..., b1]` where `p/q = [a...]` and
/// `p/(p-q) = [b...]`. Cross-checked against direct expansion.
pub fn wahl_minus(p: &BigInt, q: &BigInt) -> Result<HjString> {
    check_wahl_input(p, q)?;
    let a = hj_expand(p, q)?;
    let b = hj_expand(p, &(p - q))?;
    let mut coeffs = a.coeffs.clone();
    let center = coeffs.len() - 1;
    coeffs[center] += b.coeffs.last().expect("nonempty");
    coeffs.extend(b.coeffs.iter().rev().skip(1).cloned());
    let joined = HjString::new(coeffs)?;
    let direct = hj_expand(&(p * p), &(p * q - BigInt::one()))?;
    if joined != direct {
        return Err(Error::Verification(format!(
            "concatenation formula disagreed with expansion of {p}^2/({p}*{q}-1)"
        )));
    }
    Ok(joined)
}

/// The expansion of `p^2 / (pq + 1)`:
/// `[a1, ..., ak, 2, bl, b(l-1), ..., b1]`, cross-checked likewise.
pub fn wahl_plus(p: &BigInt, q: &BigInt) -> Result<HjString> {
    check_wahl_input(p, q)?;
    let a = hj_expand(p, q)?;
    let b = hj_expand(p, &(p - q))?;
    let mut coeffs = a.coeffs.clone();
    coeffs.push(BigInt::from(2));
    coeffs.extend(b.coeffs.iter().rev().cloned());
    let joined = HjString::new(coeffs)?;
    let direct = hj_expand(&(p * p), &(p * q + BigInt::one()))?;
    if joined != direct {
        return Err(Error::Verification(format!(
            "concatenation formula disagreed with expansion of {p}^2/({p}*{q}+1)"
        )));
    }
    Ok(joined)
}

pub fn wahl_minus_u(p: u64, q: u64) -> Result<HjString> {
    wahl_minus(&BigInt::from(p), &BigInt::from(q))
}

pub fn wahl_plus_u(p: u64, q: u64) -> Result<HjString> {
    wahl_plus(&BigInt::from(p), &BigInt::from(q))
}

/// Fibonacci numbers with `F(1) = F(2) = 1` (and `F(0) = 0`).
pub fn fib(n: u64) -> BigInt {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Builds `[3^m, mid..., 3^m, tail...]`-style patterns.
fn threes_pattern(prefix: u64, mid: &[i64], suffix: u64, tail: &[i64]) -> HjString {
    let mut coeffs = Vec::new();
    coeffs.extend(std::iter::repeat(BigInt::from(3)).take(prefix as usize));
    coeffs.extend(mid.iter().map(|&c| BigInt::from(c)));
    coeffs.extend(std::iter::repeat(BigInt::from(3)).take(suffix as usize));
    coeffs.extend(tail.iter().map(|&c| BigInt::from(c)));
    HjString { coeffs }
}

/// One line of a Fibonacci identity report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibCheck {
    pub name: &'static str,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

/// Checks the four displayed even-index Fibonacci identities exactly:
/// the three-term recurrence, the `[3^n]` expansion, its `[2,3^(n-1),2]`
/// dual, and the `[3^(n-1),5,3^(n-1),2]` expansion of the squared family.
pub fn fibonacci_identities(n: u64) -> Result<Vec<FibCheck>> {
    if n < 1 {
        return Err(domain("need n >= 1"));
    }
    let f2n2 = fib(2 * n + 2);
    let f2n = fib(2 * n);
    let f2nm2 = fib(2 * n - 2);
    let mut checks = Vec::new();

    let lhs = f2n2.clone();
    let rhs = BigInt::from(3) * &f2n - &f2nm2;
    checks.push(FibCheck {
        name: "recurrence F(2n+2) = 3F(2n) - F(2n-2)",
        expected: rhs.to_string(),
        computed: lhs.to_string(),
        pass: lhs == rhs,
    });

    let expansion = hj_expand(&f2n2, &f2n)?;
    let pattern = threes_pattern(n, &[], 0, &[]);
    checks.push(FibCheck {
        name: "F(2n+2)/F(2n) = [3^n]",
        expected: pattern.to_string(),
        computed: expansion.to_string(),
        pass: expansion == pattern,
    });

    let dual_exp = hj_expand(&f2n2, &(&f2n2 - &f2n))?;
    let dual_pattern = if n == 1 {
        HjString::from_ints(&[2, 2])
    } else {
        let mut c = vec![BigInt::from(2)];
        c.extend(std::iter::repeat(BigInt::from(3)).take((n - 1) as usize));
        c.push(BigInt::from(2));
        HjString { coeffs: c }
    };
    checks.push(FibCheck {
        name: "F(2n+2)/(F(2n+2)-F(2n)) = [2,3^(n-1),2]",
        expected: dual_pattern.to_string(),
        computed: dual_exp.to_string(),
        pass: dual_exp == dual_pattern,
    });

    let wahl = wahl_minus(&f2n2, &f2n)?;
    let wahl_pattern = threes_pattern(n - 1, &[5], n - 1, &[2]);
    checks.push(FibCheck {
        name: "F(2n+2)^2/(F(2n+2)F(2n)-1) = [3^(n-1),5,3^(n-1),2]",
        expected: wahl_pattern.to_string(),
        computed: wahl.to_string(),
        pass: wahl == wahl_pattern,
    });

    Ok(checks)
}

/// The four child-label identities behind the tree recursions: for
/// `p/q = [a1..ak]` and `p/(p-q) = [b1..bl]`,
/// `(p+q)/q = [a1+1,..,ak]`, `(2p-q)/p = [2,a1,..,ak]`,
/// `(p+q)/p = [2,b1,..,bl]`, `(2p-q)/(p-q) = [b1+1,..,bl]`.
pub fn eq_cf_holds(p: u64, q: u64) -> Result<bool> {
    let pb = BigInt::from(p);
    let qb = BigInt::from(q);
    let a = hj_expand(&pb, &qb)?;
    let b = hj_expand(&pb, &(&pb - &qb))?;

    let bump_first = |s: &HjString| {
        let mut c = s.coeffs.clone();
        c[0] += 1;
        HjString { coeffs: c }
    };
    let prepend_two = |s: &HjString| {
        let mut c = vec![BigInt::from(2)];
        c.extend(s.coeffs.iter().cloned());
        HjString { coeffs: c }
    };

    let ok1 = hj_expand(&(&pb + &qb), &qb)? == bump_first(&a);
    let ok2 = hj_expand(&(BigInt::from(2) * &pb - &qb), &pb)? == prepend_two(&a);
    let ok3 = hj_expand(&(&pb + &qb), &pb)? == prepend_two(&b);
    let ok4 = hj_expand(&(BigInt::from(2) * &pb - &qb), &(&pb - &qb))? == bump_first(&b);
    Ok(ok1 && ok2 && ok3 && ok4)
}

/// Iterator over coprime pairs `p > q >= 1` with `p <= bound`.
pub fn coprime_pairs(bound: u64) -> impl Iterator<Item = (u64, u64)> {
    (2..=bound).flat_map(|p| {
        (1..p)
            .filter(move |q| num_integer::gcd(p, *q) == 1)
            .map(move |q| (p, q))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(coeffs: &[i64]) -> HjString {
        HjString::from_ints(coeffs)
    }

    #[test]
    fn expand_anchors() {
        assert_eq!(hj_expand_u(18, 11).unwrap(), s(&[2, 3, 4]));
        assert_eq!(hj_expand_u(2, 1).unwrap(), s(&[2]));
        assert_eq!(hj_expand_u(7, 5).unwrap(), s(&[2, 2, 3]));
    }

    #[test]
    fn expand_rejects_bad_input() {
        assert!(hj_expand_u(6, 4).is_err());
        assert!(hj_expand_u(5, 5).is_err());
        assert!(hj_expand_u(3, 4).is_err());
        assert!(hj_expand_u(3, 0).is_err());
    }

    #[test]
    fn eval_anchors() {
        assert_eq!(hj_eval(&s(&[2, 3, 4])).unwrap(), Fraction::from_u64(18, 11).unwrap());
        assert_eq!(hj_eval(&s(&[4])).unwrap(), Fraction::from_u64(4, 1).unwrap());
        // independent right-fold oracle for [2,2,5,4]
        let oracle = {
            let mut num = BigRational::from(BigInt::from(4));
            for c in [5i64, 2, 2] {
                num = BigRational::from(BigInt::from(c)) - num.recip();
            }
            Fraction::new(num.numer().clone(), num.denom().clone()).unwrap()
        };
        assert_eq!(oracle, Fraction::from_u64(49, 34).unwrap());
        assert_eq!(hj_eval(&s(&[2, 2, 5, 4])).unwrap(), oracle);
    }

    #[test]
    fn eval_non_admissible() {
        // tail [1] evaluates the next step to 2 - 1/1 = 1, then 1 - 1/1 = 0
        match hj_eval(&s(&[3, 1, 1])) {
            Err(Error::NonAdmissible(_)) => {}
            other => panic!("expected non-admissible, got {other:?}"),
        }
    }

    #[test]
    fn eval_handles_negative_tails() {
        // [2,0,2] = 2 - 1/(0 - 1/2) = 4
        assert_eq!(hj_eval(&s(&[2, 0, 2])).unwrap(), Fraction::from_u64(4, 1).unwrap());
    }

    #[test]
    fn dual_anchors() {
        assert_eq!(dual_u(7, 5).unwrap(), s(&[4, 2]));
        assert_eq!(dual_u(8, 3).unwrap(), s(&[2, 3, 2]));
        assert_eq!(dual_u(2, 1).unwrap(), s(&[2]));
        // q = p-1 gives the length-1 string [p]
        assert_eq!(dual_u(9, 8).unwrap(), s(&[9]));
    }

    #[test]
    fn dual_rejects_equal() {
        assert!(dual_u(5, 5).is_err());
    }

    #[test]
    fn point_rule_matches_expansion_everywhere() {
        for (p, q) in coprime_pairs(80) {
            let a = hj_expand_u(p, q).unwrap();
            let d = riemenschneider_dual(&a).unwrap();
            assert_eq!(d, hj_expand_u(p, p - q).unwrap(), "p={p} q={q}");
        }
    }

    #[test]
    fn reverse_anchors() {
        let r = reverse(&hj_expand_u(18, 11).unwrap());
        assert_eq!(r, s(&[4, 3, 2]));
        // oracle: modular inverse + expansion
        assert_eq!(mod_inverse_u(11, 18).unwrap(), 5);
        assert_eq!(hj_eval(&r).unwrap(), Fraction::from_u64(18, 5).unwrap());

        assert_eq!(reverse(&s(&[4])), s(&[4]));

        let r2 = reverse(&hj_expand_u(7, 5).unwrap());
        assert_eq!(r2, s(&[3, 2, 2]));
        assert_eq!(mod_inverse_u(5, 7).unwrap(), 3);
        assert_eq!(hj_eval(&r2).unwrap(), Fraction::from_u64(7, 3).unwrap());
    }

    #[test]
    fn mod_inverse_anchors() {
        assert_eq!(mod_inverse_u(5, 7).unwrap(), 3);
        assert_eq!(mod_inverse_u(1, 11).unwrap(), 1);
        assert_eq!(mod_inverse_u(11, 18).unwrap(), 5);
        assert!(mod_inverse_u(6, 9).is_err());
    }

    #[test]
    fn wahl_anchors() {
        assert_eq!(wahl_minus_u(2, 1).unwrap(), s(&[4]));
        assert_eq!(wahl_minus_u(7, 5).unwrap(), hj_expand_u(49, 34).unwrap());
        assert_eq!(wahl_minus_u(3, 1).unwrap(), hj_expand_u(9, 2).unwrap());
        assert_eq!(wahl_minus_u(3, 1).unwrap(), s(&[5, 2]));

        assert_eq!(wahl_plus_u(2, 1).unwrap(), s(&[2, 2, 2]));
        assert_eq!(wahl_plus_u(3, 1).unwrap(), hj_expand_u(9, 4).unwrap());
        assert_eq!(wahl_plus_u(3, 1).unwrap(), s(&[3, 2, 2, 2]));
        assert_eq!(wahl_plus_u(7, 5).unwrap(), hj_expand_u(49, 36).unwrap());
        assert_eq!(wahl_plus_u(7, 5).unwrap(), s(&[2, 2, 3, 2, 2, 4]));

        assert!(wahl_minus_u(1, 1).is_err());
    }

    #[test]
    fn fib_values() {
        let f: Vec<u64> = (0..=10).map(|n| u64::try_from(&fib(n)).unwrap()).collect();
        assert_eq!(f, vec![0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]);
    }

    #[test]
    fn fibonacci_identity_anchors() {
        // n=1: F(4)/F(2) = 3/1 = [3]
        let checks = fibonacci_identities(1).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        assert_eq!(hj_expand_u(3, 1).unwrap(), s(&[3]));
        // n=2: F(6)/F(4) = 8/3 = [3,3] and 64/23 = [3,5,3,2]
        let checks = fibonacci_identities(2).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        assert_eq!(hj_expand_u(8, 3).unwrap(), s(&[3, 3]));
        assert_eq!(hj_expand_u(64, 23).unwrap(), s(&[3, 5, 3, 2]));
    }

    #[test]
    fn fibonacci_identities_to_20() {
        for n in 1..=20 {
            let checks = fibonacci_identities(n).unwrap();
            assert!(checks.iter().all(|c| c.pass), "n={n}: {checks:?}");
        }
    }

    #[test]
    fn round_trip_small() {
        for (p, q) in coprime_pairs(120) {
            let e = hj_expand_u(p, q).unwrap();
            assert!(e.all_at_least_two());
            assert_eq!(hj_eval(&e).unwrap(), Fraction::from_u64(p, q).unwrap());
        }
    }

    #[test]
    fn dual_is_involution_small() {
        for (p, q) in coprime_pairs(80) {
            let d = dual_u(p, q).unwrap();
            let val = hj_eval(&d).unwrap();
            let p2 = u64::try_from(val.num()).unwrap();
            let q2 = u64::try_from(val.den()).unwrap();
            assert_eq!(dual_u(p2, q2).unwrap(), hj_expand_u(p, q).unwrap());
        }
    }

    #[test]
    fn eq_cf_small() {
        for (p, q) in coprime_pairs(60) {
            assert!(eq_cf_holds(p, q).unwrap(), "p={p} q={q}");
        }
    }
}
