//! Arithmetic substrate: exact rationals and quadratic surds, certified
//! adaptive-precision reals, and high-precision floats with `ln`, `pi` and
//! the dilogarithm.

mod adaptive;
mod ball;
mod dyadic;
mod float;
mod surd;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use adaptive::{AdaptiveReal, PrecisionPolicy};
pub use ball::Ball;
pub use dyadic::{ldexp, Dyadic, Round};
pub use float::{dilog_ext, Float};
pub use surd::QuadraticSurd;

use crate::error::{Error, Result};

/// `Li2(x)` for `x` in `[-1, 1]` at the precision carried by `x`.
pub fn dilog(x: &Float) -> Result<Float> {
    x.dilog()
}

/// `floor((p + q sqrt d) / r)`, exactly.
pub fn surd_floor(x: &QuadraticSurd) -> BigInt {
    x.floor()
}

/// `BigRational` from a numerator/denominator pair.
///
/// # Panics
/// If `d == 0`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Exact value of the eventually periodic continued fraction
/// `[preperiod, period, period, ...]` (value in `(0, 1)`).
pub fn periodic_cf_value(preperiod: &[u64], period: &[u64]) -> Result<QuadraticSurd> {
    if period.is_empty() {
        return Err(Error::domain("period must be non-empty"));
    }
    if preperiod.iter().chain(period).any(|&a| a == 0) {
        return Err(Error::domain("continued fraction digits must be >= 1"));
    }
    // x = (A x + B) / (C x + D) for the period's Moebius map.
    let [a, b, c, d] = moebius(period);
    let disc = (&d - &a) * (&d - &a) + BigInt::from(4) * &b * &c;
    let disc = disc.to_u64().ok_or_else(|| Error::Internal("period discriminant too large".into()))?;
    let x = QuadraticSurd::new(&a - &d, BigInt::one(), disc, BigInt::from(2) * &c)?;
    let zero = QuadraticSurd::from_rational(&BigRational::zero());
    let one = QuadraticSurd::from_rational(&BigRational::one());
    if x.cmp_exact(&zero) != Some(Ordering::Greater) || x.cmp_exact(&one) != Some(Ordering::Less) {
        return Err(Error::Internal("periodic fixed point outside (0, 1)".into()));
    }
    if preperiod.is_empty() {
        return Ok(x);
    }
    let [a, b, c, d] = moebius(preperiod);
    let lift = |n: &BigInt| QuadraticSurd::from_rational(&BigRational::from_integer(n.clone()));
    let num = lift(&a).mul(&x).and_then(|t| t.add(&lift(&b)));
    let den = lift(&c).mul(&x).and_then(|t| t.add(&lift(&d)));
    match (num, den) {
        (Some(n), Some(dd)) => Ok(n.div(&dd)?.expect("same field")),
        _ => Err(Error::Internal("surd field mismatch".into())),
    }
}

/// Matrix of `y -> [a_1, ..., a_k + y]` as `(A y + B) / (C y + D)`.
fn moebius(digits: &[u64]) -> [BigInt; 4] {
    let (mut a, mut b, mut c, mut d) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for &k in digits {
        // right-multiply by [[0, 1], [1, k]]
        let k = BigInt::from(k);
        let (na, nb) = (b.clone(), &a + &b * &k);
        let (nc, nd) = (d.clone(), &c + &d * &k);
        a = na;
        b = nb;
        c = nc;
        d = nd;
    }
    [a, b, c, d]
}

/// A real number: exact rational, exact quadratic surd, or certified
/// adaptive enclosure. Mixed arithmetic promotes Rational -> Surd -> Adaptive.
#[derive(Clone, Debug)]
pub enum ExactReal {
    Rational(BigRational),
    Surd(QuadraticSurd),
    Adaptive(AdaptiveReal),
}

impl ExactReal {
    pub fn int(n: i64) -> Self {
        ExactReal::Rational(BigRational::from_integer(n.into()))
    }

    /// `n / d`.
    ///
    /// # Panics
    /// If `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        ExactReal::Rational(ratio(n, d))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn from_rational(q: BigRational) -> Self {
        ExactReal::Rational(q)
    }

    /// Wraps a surd, demoting it to a rational when `q = 0`.
    pub fn from_surd(s: QuadraticSurd) -> Self {
        if s.is_rational() {
            ExactReal::Rational(s.rational_part())
        } else {
            ExactReal::Surd(s)
        }
    }

    pub fn golden() -> Self {
        ExactReal::Surd(QuadraticSurd::golden())
    }

    /// Exact value of a finite double as an adaptive real.
    pub fn from_f64(x: f64, policy: PrecisionPolicy) -> Result<Self> {
        Ok(ExactReal::Adaptive(AdaptiveReal::from_f64(x, policy)?))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, ExactReal::Adaptive(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactReal::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_surd(&self) -> Option<QuadraticSurd> {
        match self {
            ExactReal::Rational(q) => Some(QuadraticSurd::from_rational(q)),
            ExactReal::Surd(s) => Some(s.clone()),
            ExactReal::Adaptive(_) => None,
        }
    }

    /// Canonical hashable key of an exact value.
    pub fn key(&self) -> Option<QuadraticSurd> {
        self.as_surd()
    }

    fn policy(&self) -> Option<PrecisionPolicy> {
        match self {
            ExactReal::Adaptive(a) => Some(a.policy()),
            _ => None,
        }
    }

    /// Lifts any value to an adaptive real.
    pub fn to_adaptive(&self, policy: PrecisionPolicy) -> AdaptiveReal {
        match self {
            ExactReal::Rational(q) => AdaptiveReal::from_rational(q.clone(), policy),
            ExactReal::Surd(s) => AdaptiveReal::from_surd(s.clone(), policy),
            ExactReal::Adaptive(a) => a.clone(),
        }
    }

    fn binary(
        &self,
        o: &Self,
        rat: fn(&BigRational, &BigRational) -> BigRational,
        surd: fn(&QuadraticSurd, &QuadraticSurd) -> Option<QuadraticSurd>,
        adaptive: fn(&AdaptiveReal, &AdaptiveReal) -> AdaptiveReal,
    ) -> Self {
        use ExactReal::*;
        match (self, o) {
            (Rational(a), Rational(b)) => Rational(rat(a, b)),
            (Rational(_) | Surd(_), Rational(_) | Surd(_)) => {
                let (a, b) = (self.as_surd().unwrap(), o.as_surd().unwrap());
                match surd(&a, &b) {
                    Some(s) => Self::from_surd(s),
                    None => {
                        let p = PrecisionPolicy::default();
                        Adaptive(adaptive(&self.to_adaptive(p), &o.to_adaptive(p)))
                    }
                }
            }
            _ => {
                let p = self.policy().or(o.policy()).unwrap_or_default();
                Adaptive(adaptive(&self.to_adaptive(p), &o.to_adaptive(p)))
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.binary(o, |a, b| a + b, |a, b| a.add(b), |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.binary(o, |a, b| a - b, |a, b| a.sub(b), |a, b| a.sub(b))
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.binary(o, |a, b| a * b, |a, b| a.mul(b), |a, b| a.mul(b))
    }

    /// Exact divisors must be nonzero; adaptive zero divisors surface later
    /// as undecidable queries.
    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_exact_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.binary(
            o,
            |a, b| a / b,
            |a, b| a.div(b).expect("nonzero divisor"),
            |a, b| a.div(b),
        ))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().div(self)
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactReal::Rational(q) => ExactReal::Rational(-q),
            ExactReal::Surd(s) => ExactReal::Surd(s.neg()),
            ExactReal::Adaptive(a) => ExactReal::Adaptive(a.neg()),
        }
    }

    pub fn abs(&self) -> Result<Self> {
        Ok(if self.signum()? == Ordering::Less { self.neg() } else { self.clone() })
    }

    pub fn is_exact_zero(&self) -> bool {
        match self {
            ExactReal::Rational(q) => q.is_zero(),
            ExactReal::Surd(s) => s.is_zero(),
            ExactReal::Adaptive(_) => false,
        }
    }

    pub fn is_exact_one(&self) -> bool {
        matches!(self, ExactReal::Rational(q) if q.is_one())
    }

    pub fn signum(&self) -> Result<Ordering> {
        match self {
            ExactReal::Rational(q) => Ok(q.numer().sign().cmp(&num_bigint::Sign::NoSign)),
            ExactReal::Surd(s) => Ok(s.signum()),
            ExactReal::Adaptive(a) => a.signum(),
        }
    }

    /// Certified comparison; undecidable only for adaptive operands.
    #[allow(clippy::should_implement_trait)]
    pub fn cmp(&self, o: &Self) -> Result<Ordering> {
        if let (ExactReal::Rational(a), ExactReal::Rational(b)) = (self, o) {
            return Ok(a.cmp(b));
        }
        self.sub(o).signum()
    }

    pub fn lt(&self, o: &Self) -> Result<bool> {
        Ok(self.cmp(o)? == Ordering::Less)
    }

    pub fn le(&self, o: &Self) -> Result<bool> {
        Ok(self.cmp(o)? != Ordering::Greater)
    }

    pub fn floor(&self) -> Result<BigInt> {
        match self {
            ExactReal::Rational(q) => Ok(q.floor().to_integer()),
            ExactReal::Surd(s) => Ok(s.floor()),
            ExactReal::Adaptive(a) => a.floor(),
        }
    }

    /// Enclosure at `prec` bits.
    pub fn ball(&self, prec: u32) -> Option<Ball> {
        match self {
            ExactReal::Rational(q) => Some(Ball::from_rational(q, prec)),
            ExactReal::Surd(s) => Some(Ball::from_surd(s, prec)),
            ExactReal::Adaptive(a) => a.ball(prec),
        }
    }

    /// High-precision approximation (rounded to nearest at `prec` bits).
    pub fn to_float(&self, prec: u32) -> Result<Float> {
        match self {
            ExactReal::Rational(q) => Ok(Float::from_rational(q, prec)),
            ExactReal::Surd(s) => Ok(Float::from_dyadic(Ball::from_surd(s, prec + 32).mid, prec)),
            ExactReal::Adaptive(a) => {
                let mid = a.refine(|b| {
                    let m = b.mid.magnitude()?;
                    b.rad_is_below(prec as i64 - m).then(|| b.mid.clone())
                })?;
                Ok(Float::from_dyadic(mid, prec))
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactReal::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            ExactReal::Surd(s) => s.to_f64(),
            ExactReal::Adaptive(a) => a.to_f64(),
        }
    }

    /// Parses with an explicit precision policy for decimal literals.
    pub fn parse_with(s: &str, policy: PrecisionPolicy) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::parse("empty number literal"));
        }
        if t.contains("sqrt") {
            return Ok(Self::from_surd(t.parse()?));
        }
        if t.contains('/') {
            let (n, d) = t.split_once('/').expect("checked");
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::parse(format!("zero denominator in `{t}`")));
            }
            return Ok(ExactReal::Rational(BigRational::new(n, d)));
        }
        if t.chars().all(|c| c.is_ascii_digit() || c == '-' || c == '+') {
            return Ok(ExactReal::Rational(BigRational::from_integer(parse_int(t)?)));
        }
        Ok(ExactReal::Adaptive(AdaptiveReal::from_rational(parse_decimal(t)?, policy)))
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    BigInt::from_str(t).map_err(|_| Error::parse(format!("bad integer `{s}`")))
}

/// Exact value of a decimal literal such as `-0.45` or `1.5e-3`.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::parse(format!("bad decimal `{s}`"));
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let e = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if e >= 0 {
        BigRational::from_integer(digits * ten.pow(e as u32))
    } else {
        BigRational::new(digits, ten.pow((-e) as u32))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

impl FromStr for ExactReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_with(s, PrecisionPolicy::default())
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(q) => write!(f, "{q}"),
            ExactReal::Surd(s) => write!(f, "{s}"),
            ExactReal::Adaptive(a) => write!(f, "{}", a.to_decimal(20)),
        }
    }
}

impl serde::Serialize for ExactReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl serde::Serialize for QuadraticSurd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Structural equality: exact values compare by value, adaptive values by
/// identity only.
impl PartialEq for ExactReal {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (ExactReal::Adaptive(a), ExactReal::Adaptive(b)) => a.ptr_eq(b),
            (ExactReal::Adaptive(_), _) | (_, ExactReal::Adaptive(_)) => false,
            _ => self.as_surd() == o.as_surd(),
        }
    }
}

impl From<BigRational> for ExactReal {
    fn from(q: BigRational) -> Self {
        ExactReal::Rational(q)
    }
}

impl From<QuadraticSurd> for ExactReal {
    fn from(s: QuadraticSurd) -> Self {
        ExactReal::from_surd(s)
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        ExactReal::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_values() {
        assert_eq!(periodic_cf_value(&[], &[1]).unwrap(), QuadraticSurd::golden());
        let s2m1 = periodic_cf_value(&[], &[2]).unwrap();
        assert_eq!(s2m1.to_string(), "(-1+1*sqrt(2))/1");
        assert_eq!(periodic_cf_value(&[1], &[2]).unwrap().to_string(), "(0+1*sqrt(2))/2");
        assert!(periodic_cf_value(&[], &[]).is_err());
        assert!(periodic_cf_value(&[0], &[1]).is_err());
    }

    #[test]
    fn surd_floor_examples() {
        let phi = QuadraticSurd::new(1.into(), 1.into(), 5, 2.into()).unwrap();
        assert_eq!(surd_floor(&phi), BigInt::one());
        let zero = QuadraticSurd::new(0.into(), 0.into(), 0, 1.into()).unwrap();
        assert_eq!(surd_floor(&zero), BigInt::zero());
        assert_eq!(surd_floor(&QuadraticSurd::golden()), BigInt::zero());
    }

    #[test]
    fn promotions() {
        let g = ExactReal::golden();
        let h = ExactReal::frac(1, 2);
        assert!(matches!(g.add(&h), ExactReal::Surd(_)));
        assert!(matches!(g.sub(&g), ExactReal::Rational(_)));
        let r2 = ExactReal::from_surd(QuadraticSurd::sqrt(2));
        let mixed = g.add(&r2);
        assert!(matches!(mixed, ExactReal::Adaptive(_)));
        assert!((mixed.to_f64() - (0.6180339887498949 + std::f64::consts::SQRT_2)).abs() < 1e-14);
        assert_eq!(mixed.floor().unwrap(), BigInt::from(2));
        assert!(ExactReal::one().div(&ExactReal::zero()).is_err());
    }

    #[test]
    fn literal_parsing_round_trips() {
        for s in ["3/10", "-7/4", "5", "(-1+1*sqrt(5))/2", "(3-2*sqrt(2))/7"] {
            let x: ExactReal = s.parse().unwrap();
            let back: ExactReal = x.to_string().parse().unwrap();
            assert_eq!(x, back, "{s}");
        }
        assert_eq!("6/4".parse::<ExactReal>().unwrap().to_string(), "3/2");
        let d: ExactReal = "0.45".parse().unwrap();
        assert!(!d.is_exact());
        assert_eq!(d.cmp(&ExactReal::frac(9, 20)).ok(), None);
        assert_eq!(d.cmp(&ExactReal::frac(2, 5)).unwrap(), Ordering::Greater);
        assert_eq!(parse_decimal("1.5e-3").unwrap(), ratio(3, 2000));
        assert_eq!(parse_decimal("-.25").unwrap(), ratio(-1, 4));
        assert!("1/0".parse::<ExactReal>().is_err());
        assert!("abc".parse::<ExactReal>().is_err());
    }
}
