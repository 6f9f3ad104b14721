//! Regular and semi-regular continued fractions: expansion, evaluation,
//! convergents, the alternating order, and the symbolic action of the
//! Renyi map on regular digit strings.
//!
//! Semi-regular words list the pairs `(epsilon_k, d_k)` produced by the
//! orbit of `x`, and evaluate as the tower
//! `x = 1/(d_1 + epsilon_1/(d_2 + epsilon_2/(d_3 + ...)))`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{self, Alpha, SignedDigit};
use crate::numerics::{periodic_cf_value, ExactReal};

const MAX_PERIOD_SEARCH: usize = 1 << 16;

/// A regular continued fraction `[a_1, a_2, ...]` with value in `(0, 1]`:
/// a finite prefix followed by an optional repeating period. A word built
/// from an approximate real may be a truncated prefix of an infinite word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RcfWord {
    prefix: Vec<u64>,
    period: Vec<u64>,
    truncated: bool,
}

impl RcfWord {
    pub fn finite(digits: Vec<u64>) -> Result<Self> {
        check_digits(&digits)?;
        Ok(RcfWord { prefix: digits, period: Vec::new(), truncated: false })
    }

    pub fn periodic(prefix: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        check_digits(&prefix)?;
        check_digits(&period)?;
        if period.is_empty() {
            return Err(Error::domain("period must be non-empty"));
        }
        Ok(RcfWord { prefix, period, truncated: false }.reduce_period())
    }

    /// A known prefix of a longer (unknown) expansion.
    pub fn truncated(prefix: Vec<u64>) -> Result<Self> {
        check_digits(&prefix)?;
        Ok(RcfWord { prefix, period: Vec::new(), truncated: true })
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty() && !self.truncated
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Number of explicitly known digits (`None` for infinite words).
    pub fn len(&self) -> Option<usize> {
        if self.is_periodic() {
            None
        } else {
            Some(self.prefix.len())
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Digit `a_i` (1-based).
    pub fn get(&self, i: usize) -> Option<u64> {
        if i == 0 {
            return None;
        }
        let i = i - 1;
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(i - self.prefix.len()) % self.period.len()])
        }
    }

    /// Digit `a_i`, `None` past the end of a finite word, and an error past
    /// the end of a truncated one.
    pub fn digit_or_missing(&self, i: usize) -> Result<Option<u64>> {
        match self.get(i) {
            Some(a) => Ok(Some(a)),
            None if self.truncated => {
                Err(Error::InsufficientDigits { needed: i, available: self.prefix.len() })
            }
            None => Ok(None),
        }
    }

    /// The word `[a_i, a_{i+1}, ...]`.
    pub fn tail(&self, i: usize) -> RcfWord {
        let i = i.max(1) - 1;
        if i <= self.prefix.len() {
            return RcfWord {
                prefix: self.prefix[i..].to_vec(),
                period: self.period.clone(),
                truncated: self.truncated,
            };
        }
        if self.period.is_empty() {
            return RcfWord { prefix: Vec::new(), period: Vec::new(), truncated: self.truncated };
        }
        let shift = (i - self.prefix.len()) % self.period.len();
        let mut period = self.period[shift..].to_vec();
        period.extend_from_slice(&self.period[..shift]);
        RcfWord { prefix: Vec::new(), period, truncated: false }
    }

    fn reduce_period(mut self) -> Self {
        let n = self.period.len();
        if let Some(k) = (1..=n).find(|&k| n.is_multiple_of(k) && (k..n).all(|i| self.period[i] == self.period[i - k])) {
            self.period.truncate(k);
        }
        // fold a prefix that ends with a copy of the period's last digits
        while let (Some(&a), Some(&b)) = (self.prefix.last(), self.period.last()) {
            if a != b {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
        self
    }

    /// Finite words rewritten to end in a digit `>= 2` (except `[1]`).
    pub fn canonical(&self) -> RcfWord {
        let mut w = self.clone();
        if w.is_finite() && w.prefix.len() >= 2 && *w.prefix.last().unwrap() == 1 {
            w.prefix.pop();
            *w.prefix.last_mut().unwrap() += 1;
        }
        w
    }

    /// The other representation `[..., a_n - 1, 1]` of a finite word ending
    /// in `a_n >= 2`.
    pub fn long_form(&self) -> Result<RcfWord> {
        let c = self.canonical();
        match c.prefix.last() {
            Some(&a) if c.is_finite() && a >= 2 => {
                let mut p = c.prefix.clone();
                *p.last_mut().unwrap() -= 1;
                p.push(1);
                Ok(RcfWord { prefix: p, period: Vec::new(), truncated: false })
            }
            _ => Err(Error::domain("long form needs a finite word ending in a digit >= 2")),
        }
    }

    /// Exact value; finite words are rationals, periodic words surds.
    pub fn value(&self) -> Result<ExactReal> {
        if self.truncated {
            return Err(Error::InsufficientDigits { needed: self.prefix.len() + 1, available: self.prefix.len() });
        }
        if self.is_periodic() {
            return Ok(ExactReal::from_surd(periodic_cf_value(&self.prefix, &self.period)?));
        }
        Ok(ExactReal::Rational(finite_value(&self.prefix)))
    }
}

fn check_digits(d: &[u64]) -> Result<()> {
    if d.contains(&0) {
        return Err(Error::domain("continued fraction digits must be >= 1"));
    }
    Ok(())
}

/// `[a_1, ..., a_n]` as a rational (`0` for the empty word).
pub fn finite_value(digits: &[u64]) -> BigRational {
    let mut v = BigRational::zero();
    for &a in digits.iter().rev() {
        v = (BigRational::from_integer(a.into()) + v).recip();
    }
    v
}

impl fmt::Display for RcfWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.prefix.iter().map(|a| a.to_string()).collect();
        if !self.period.is_empty() {
            let p: Vec<String> = self.period.iter().map(|a| a.to_string()).collect();
            parts.push(format!("({})~", p.join(",")));
        }
        if self.truncated {
            parts.push("...".into());
        }
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for RcfWord {
    type Err = Error;

    /// Parses `[3,3]`, `[1,(2,3)~]` or a truncated `[1,2,...]`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::parse(format!("bad continued fraction word `{s}`"));
        let body = t.strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
        let num = |x: &str| x.parse::<u64>().map_err(|_| bad());
        let list = |x: &str| -> Result<Vec<u64>> {
            if x.is_empty() {
                Ok(Vec::new())
            } else {
                x.split(',').map(num).collect()
            }
        };
        if let Some(open) = body.find('(') {
            let close = body.find(")~").ok_or_else(bad)?;
            if close + 2 != body.len() {
                return Err(bad());
            }
            let head = body[..open].strip_suffix(',').unwrap_or(&body[..open]);
            return RcfWord::periodic(list(head)?, list(&body[open + 1..close])?);
        }
        if let Some(head) = body.strip_suffix("...") {
            return RcfWord::truncated(list(head.strip_suffix(',').unwrap_or(head))?);
        }
        RcfWord::finite(list(body)?)
    }
}

impl Serialize for RcfWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Regular continued fraction of `x` in `(0, 1]`: finite for rationals,
/// eventually periodic for quadratic surds, and a truncated prefix of
/// `prefix_len` digits for adaptive reals.
pub fn rcf_expand(x: &ExactReal, prefix_len: usize) -> Result<RcfWord> {
    if x.signum()? != Ordering::Greater || x.cmp(&ExactReal::one())? == Ordering::Greater {
        return Err(Error::domain(format!("x = {x} is not in (0, 1]")));
    }
    match x {
        ExactReal::Rational(q) => {
            let (mut n, mut d) = (q.denom().clone(), q.numer().clone());
            let mut digits = Vec::new();
            while !d.is_zero() {
                let a = &n / &d;
                digits.push(a.to_u64().ok_or_else(|| Error::domain("digit overflow"))?);
                let r = &n - &a * &d;
                n = d;
                d = r;
            }
            RcfWord::finite(digits)
        }
        ExactReal::Surd(_) => {
            // Lagrange: complete quotients eventually repeat.
            let mut y = x.recip()?;
            let mut seen: HashMap<_, usize> = HashMap::new();
            let mut digits = Vec::new();
            for i in 0..MAX_PERIOD_SEARCH {
                let key = y.key().expect("exact");
                if let Some(&j) = seen.get(&key) {
                    let period = digits[j..].to_vec();
                    digits.truncate(j);
                    return RcfWord::periodic(digits, period);
                }
                seen.insert(key, i);
                let a = y.floor()?;
                digits.push(a.to_u64().ok_or_else(|| Error::domain("digit overflow"))?);
                y = y.sub(&ExactReal::Rational(a.into())).recip()?;
            }
            Err(Error::Internal("period search exhausted".into()))
        }
        ExactReal::Adaptive(_) => {
            let mut y = x.recip()?;
            let mut digits = Vec::with_capacity(prefix_len);
            for _ in 0..prefix_len {
                let a = y.floor()?;
                digits.push(a.to_u64().ok_or_else(|| Error::domain("digit overflow"))?);
                y = y.sub(&ExactReal::Rational(a.into())).recip()?;
            }
            RcfWord::truncated(digits)
        }
    }
}

/// `1 - x = [1, a_1 - 1, a_2, ...]` for `x = [a_1, a_2, ...]` with `a_1 >= 2`.
pub fn one_minus(word: &RcfWord) -> Result<RcfWord> {
    let a1 = word.get(1).ok_or_else(|| Error::domain("empty word"))?;
    if a1 < 2 {
        return Err(Error::domain("one_minus needs a_1 >= 2 (value <= 1/2)"));
    }
    let tail = word.tail(2);
    let mut prefix = vec![1, a1 - 1];
    prefix.extend_from_slice(&tail.prefix);
    Ok(RcfWord { prefix, period: tail.period, truncated: tail.truncated })
}

/// Order of values via the alternating rule on canonical digit strings
/// (a terminated word continues with an infinite digit).
pub fn alternating_compare(u: &RcfWord, v: &RcfWord) -> Ordering {
    let (u, v) = (u.canonical(), v.canonical());
    let bound = u.prefix.len().max(v.prefix.len()) + 2 * u.period.len().max(1) * v.period.len().max(1) + 2;
    for m in 1..=bound {
        let (a, b) = (u.get(m), v.get(m));
        if a.is_none() && b.is_none() {
            return Ordering::Equal;
        }
        if a == b {
            continue;
        }
        let a = a.unwrap_or(u64::MAX);
        let b = b.unwrap_or(u64::MAX);
        // odd positions reverse the order of digits
        return if m % 2 == 1 { b.cmp(&a) } else { a.cmp(&b) };
    }
    Ordering::Equal
}

/// Semi-regular word: a sequence of signed digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemiRegularWord(pub Vec<SignedDigit>);

impl fmt::Display for SemiRegularWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl FromStr for SemiRegularWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let body = t
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::parse(format!("bad semi-regular word `{s}`")))?;
        if body.trim().is_empty() {
            return Ok(SemiRegularWord(Vec::new()));
        }
        body.split(',').map(str::parse).collect::<Result<Vec<_>>>().map(SemiRegularWord)
    }
}

/// The first `n` signed digits of the flipped expansion of `x`.
pub fn semiregular_expand(x: &ExactReal, alpha: &Alpha, n: usize) -> Result<SemiRegularWord> {
    Ok(SemiRegularWord(maps::orbit(x, alpha, n)?.digits()))
}

/// Evaluates `1/(d_1 + e_1/(d_2 + ... e_{n-1}/(d_n + e_n r)))`.
pub fn tower_value(word: &SemiRegularWord, remainder: &ExactReal) -> Result<ExactReal> {
    let Some(last) = word.0.last() else {
        return Ok(remainder.clone());
    };
    let eps = |d: &SignedDigit| ExactReal::int(d.epsilon() as i64);
    let mut v = ExactReal::int(last.d() as i64).add(&eps(last).mul(remainder));
    for d in word.0.iter().rev().skip(1) {
        v = ExactReal::int(d.d() as i64).add(&eps(d).div(&v)?);
    }
    v.recip()
}

/// Raw convergent `p_n / q_n` (not reduced).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergentPair {
    #[serde(serialize_with = "ser_display")]
    pub p: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub q: BigInt,
}

fn ser_display<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl ConvergentPair {
    pub fn value(&self) -> Option<BigRational> {
        (!self.q.is_zero()).then(|| BigRational::new(self.p.clone(), self.q.clone()))
    }
}

/// Convergents from `p_n = d_n p_{n-1} + e_{n-1} p_{n-2}` (same for `q`),
/// with `e_0 = 1` and seeds `p_{-1} = 1, p_0 = 0, q_{-1} = 0, q_0 = 1`.
pub fn convergents(word: &SemiRegularWord) -> Vec<ConvergentPair> {
    let (mut p2, mut p1) = (BigInt::one(), BigInt::zero());
    let (mut q2, mut q1) = (BigInt::zero(), BigInt::one());
    let mut prev_eps = BigInt::one();
    let mut out = Vec::with_capacity(word.0.len());
    for sd in &word.0 {
        let d = BigInt::from(sd.d());
        let p = &d * &p1 + &prev_eps * &p2;
        let q = &d * &q1 + &prev_eps * &q2;
        out.push(ConvergentPair { p: p.clone(), q: q.clone() });
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
        prev_eps = BigInt::from(sd.epsilon());
    }
    out
}

/// Regular continued fraction of `R^k(x)` computed from the digits of `x`.
///
/// With `S_j = x_2 + x_4 + ... + x_{2j}`: `R^{S_j}(x) = [x_{2j+1} + 1,
/// x_{2j+2}, ...]` and, for `S_{j-1} < k < S_j` with `l = k - S_{j-1}`,
/// `R^k(x) = [1, x_{2j} - l, x_{2j+1}, ...]`. When a finite word runs out
/// of digits the orbit has reached the fixed point and the result is `[1]`.
pub fn r_word(word: &RcfWord, k: u64) -> Result<RcfWord> {
    let w = word.canonical();
    if k == 0 {
        return Ok(w);
    }
    let mut s_prev: u64 = 0;
    let mut j = 1usize;
    loop {
        let Some(x2j) = w.digit_or_missing(2 * j)? else {
            return Ok(fixed_point_word());
        };
        let s_j = s_prev + x2j;
        if k < s_j {
            let l = k - s_prev;
            let mut prefix = vec![1, x2j - l];
            let tail = w.tail(2 * j + 1);
            prefix.extend_from_slice(&tail.prefix);
            let out = RcfWord { prefix, period: tail.period, truncated: tail.truncated };
            return Ok(out.canonical());
        }
        if k == s_j {
            let Some(x) = w.digit_or_missing(2 * j + 1)? else {
                return Ok(fixed_point_word());
            };
            let tail = w.tail(2 * j + 2);
            let mut prefix = vec![x + 1];
            prefix.extend_from_slice(&tail.prefix);
            return Ok(RcfWord { prefix, period: tail.period, truncated: tail.truncated });
        }
        s_prev = s_j;
        j += 1;
    }
}

fn fixed_point_word() -> RcfWord {
    RcfWord { prefix: vec![1], period: Vec::new(), truncated: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> RcfWord {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> ExactReal {
        ExactReal::frac(n, d)
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(rcf_expand(&q(3, 10), 0).unwrap(), w("[3,3]"));
        assert_eq!(rcf_expand(&q(16, 25), 0).unwrap(), w("[1,1,1,3,2]"));
        let g = rcf_expand(&ExactReal::golden(), 0).unwrap();
        assert_eq!(g.to_string(), "[(1)~]");
        let r2: ExactReal = "(0+1*sqrt(2))/2".parse().unwrap();
        assert_eq!(rcf_expand(&r2, 0).unwrap().to_string(), "[1,(2)~]");
        let d: ExactReal = "0.31".parse().unwrap();
        let t = rcf_expand(&d, 2).unwrap();
        assert!(t.is_truncated());
        assert_eq!(t.prefix(), &[3, 4]);
    }

    #[test]
    fn word_text_round_trip() {
        for s in ["[3,3]", "[1,(2,3)~]", "[(1)~]", "[]", "[2,5,...]"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert_eq!(w("[1, 2, (2)~]").to_string(), "[1,(2)~]");
        assert!("[0,1]".parse::<RcfWord>().is_err());
        assert!("[1,(2)]".parse::<RcfWord>().is_err());
    }

    #[test]
    fn one_minus_examples() {
        assert_eq!(one_minus(&w("[2,3]")).unwrap(), w("[1,1,3]"));
        assert_eq!(one_minus(&w("[2]")).unwrap(), w("[1,1]"));
        assert_eq!(one_minus(&w("[3,3]")).unwrap(), w("[1,2,3]"));
        assert_eq!(one_minus(&w("[3,3]")).unwrap().value().unwrap(), q(7, 10));
        assert!(one_minus(&w("[1,2]")).is_err());
    }

    #[test]
    fn alternating_examples() {
        assert_eq!(alternating_compare(&w("[1,2]"), &w("[1,3]")), Ordering::Less);
        assert_eq!(alternating_compare(&w("[2]"), &w("[3]")), Ordering::Greater);
        assert_eq!(alternating_compare(&w("[1,1]"), &w("[1,1]")), Ordering::Equal);
        assert_eq!(alternating_compare(&w("[2,1]"), &w("[3]")), Ordering::Equal);
        assert_eq!(alternating_compare(&w("[(1)~]"), &w("[1,(1,1)~]")), Ordering::Equal);
        assert_eq!(alternating_compare(&w("[2]"), &w("[2,5]")), Ordering::Greater);
    }

    #[test]
    fn semiregular_examples() {
        let a = Alpha::frac(3, 10).unwrap();
        let e = semiregular_expand(&q(7, 10), &a, 2).unwrap();
        assert_eq!(e.to_string(), "[+1/1, +1/2]");
        let e = semiregular_expand(&q(1, 1), &a, 3).unwrap();
        assert_eq!(e.0, vec![SignedDigit::FIXED; 3]);
        let b = Alpha::frac(11, 20).unwrap();
        assert_eq!(semiregular_expand(&q(11, 20), &b, 2).unwrap().to_string(), "[+1/1, -1/2]");
        assert_eq!("[+1/1, -1/2]".parse::<SemiRegularWord>().unwrap().0.len(), 2);
    }

    #[test]
    fn convergent_examples() {
        let c = convergents(&"[+1/2]".parse().unwrap());
        assert_eq!(c[0].value().unwrap(), crate::numerics::ratio(1, 2));
        let c = convergents(&"[+1/1, -1/2]".parse().unwrap());
        // 1/(1 + 1/2); the sign of the last digit only multiplies the remainder
        assert_eq!((c[1].p.clone(), c[1].q.clone()), (BigInt::from(2), BigInt::from(3)));
        let c = convergents(&"[+1/3, +1/3]".parse().unwrap());
        assert_eq!(c[1].value().unwrap(), crate::numerics::ratio(3, 10));
        // 1/(2 - 1/1)
        let c = convergents(&"[-1/2, +1/1]".parse().unwrap());
        assert_eq!(c[1].value().unwrap(), crate::numerics::ratio(1, 1));
    }

    #[test]
    fn r_word_examples() {
        assert_eq!(r_word(&w("[3,3]"), 3).unwrap(), w("[1]"));
        assert_eq!(r_word(&w("[3,3]"), 1).unwrap(), w("[1,2]"));
        assert_eq!(r_word(&w("[1,2,5]"), 1).unwrap(), w("[1,1,5]"));
        assert_eq!(r_word(&w("[1,2,5]"), 2).unwrap(), w("[6]"));
        assert_eq!(r_word(&w("[1,(2)~]"), 1).unwrap(), w("[1,1,(2)~]"));
        assert_eq!(r_word(&w("[4,7]"), 0).unwrap(), w("[4,7]"));
        assert!(matches!(
            r_word(&w("[1,2,...]"), 2),
            Err(Error::InsufficientDigits { needed: 3, .. })
        ));
    }
}
