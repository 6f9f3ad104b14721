//! Exact real quadratic irrationals `(p + q sqrt(d)) / r`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ball::Ball;
use crate::error::{Error, Result};

/// Canonical form: `r > 0`, `gcd(p, q, r) = 1`, `d` square-free and `> 1`
/// whenever `q != 0`; rationals are stored with `q = 0, d = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    p: BigInt,
    q: BigInt,
    d: u64,
    r: BigInt,
}

fn square_free(d: u64) -> (u64, u64) {
    let mut rest = d;
    let mut factor = 1u64;
    let mut k = 2u64;
    while k * k <= rest {
        while rest.is_multiple_of(k * k) {
            rest /= k * k;
            factor *= k;
        }
        k += 1;
    }
    (factor, rest)
}

impl QuadraticSurd {
    pub fn new(p: BigInt, q: BigInt, d: u64, r: BigInt) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (f, d) = if d == 0 { (0, 0) } else { square_free(d) };
        let (mut p, mut q, mut r, mut d) = (p, q * f, r, d);
        if d == 1 {
            p += &q;
            q = BigInt::zero();
        }
        if q.is_zero() {
            d = 0;
        }
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        Ok(QuadraticSurd { p, q, d, r })
    }

    pub fn from_rational(x: &BigRational) -> Self {
        QuadraticSurd { p: x.numer().clone(), q: BigInt::zero(), d: 0, r: x.denom().clone() }
    }

    /// `sqrt(d)` for a non-negative integer `d`.
    pub fn sqrt(d: u64) -> Self {
        Self::new(BigInt::zero(), BigInt::one(), d, BigInt::one()).expect("r = 1")
    }

    /// The golden mean `(sqrt(5) - 1) / 2`.
    pub fn golden() -> Self {
        Self::new(BigInt::from(-1), BigInt::one(), 5, BigInt::from(2)).expect("r = 2")
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// `p / r`, which is the value itself when the surd is rational.
    pub fn rational_part(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.r.clone())
    }

    /// Whether two surds live in a common field `Q(sqrt(d))`.
    pub fn compatible(&self, o: &Self) -> bool {
        self.d == 0 || o.d == 0 || self.d == o.d
    }

    fn common_d(&self, o: &Self) -> u64 {
        self.d.max(o.d)
    }

    pub fn neg(&self) -> Self {
        QuadraticSurd { p: -&self.p, q: -&self.q, d: self.d, r: self.r.clone() }
    }

    pub fn conj(&self) -> Self {
        QuadraticSurd { p: self.p.clone(), q: -&self.q, d: self.d, r: self.r.clone() }
    }

    pub fn add(&self, o: &Self) -> Option<Self> {
        if !self.compatible(o) {
            return None;
        }
        let p = &self.p * &o.r + &o.p * &self.r;
        let q = &self.q * &o.r + &o.q * &self.r;
        Self::new(p, q, self.common_d(o), &self.r * &o.r).ok()
    }

    pub fn sub(&self, o: &Self) -> Option<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Option<Self> {
        if !self.compatible(o) {
            return None;
        }
        let d = self.common_d(o);
        let p = &self.p * &o.p + &self.q * &o.q * BigInt::from(d);
        let q = &self.p * &o.q + &self.q * &o.p;
        Self::new(p, q, d, &self.r * &o.r).ok()
    }

    pub fn recip(&self) -> Result<Self> {
        // r / (p + q sqrt d) = r (p - q sqrt d) / (p^2 - q^2 d)
        let norm = &self.p * &self.p - &self.q * &self.q * BigInt::from(self.d);
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.r * &self.p, -(&self.r * &self.q), self.d, norm)
    }

    pub fn div(&self, o: &Self) -> Result<Option<Self>> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        let sp = self.p.sign();
        let sq = self.q.sign();
        use num_bigint::Sign::*;
        match (sp, sq) {
            (NoSign, NoSign) => Ordering::Equal,
            (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
            (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
            _ => {
                // opposite signs: compare p^2 with q^2 d
                let a = &self.p * &self.p;
                let b = &self.q * &self.q * BigInt::from(self.d);
                let bigger_rational = a > b;
                match (sp == Plus, bigger_rational) {
                    (true, true) | (false, false) => Ordering::Greater,
                    _ => Ordering::Less,
                }
            }
        }
    }

    /// Exact comparison; `None` if the surds lie in different fields.
    pub fn cmp_exact(&self, o: &Self) -> Option<Ordering> {
        self.sub(o).map(|d| d.signum())
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.p.div_floor(&self.r);
        }
        // floor(q sqrt d) from the integer square root of q^2 d
        let s = (&self.q * &self.q * BigInt::from(self.d)).sqrt();
        let f = if self.q.is_positive() { s } else { -s - 1u32 };
        (&self.p + f).div_floor(&self.r)
    }

    pub fn ball(&self, prec: u32) -> Ball {
        Ball::from_surd(self, prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return self.rational_part().to_f64().unwrap_or(f64::NAN);
        }
        self.ball(64).to_f64()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.rational_part());
        }
        let sign = if self.q.is_negative() { '-' } else { '+' };
        write!(f, "({}{}{}*sqrt({}))/{}", self.p, sign, self.q.abs(), self.d, self.r)
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.strip_prefix('+').unwrap_or(s);
    BigInt::from_str(t).map_err(|_| Error::parse(format!("bad integer `{s}`")))
}

impl FromStr for QuadraticSurd {
    type Err = Error;

    /// Accepts `(p+q*sqrt(d))/r` and `(p+q*sqrt(d))`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::parse(format!("expected (p+q*sqrt(d))/r, got `{s}`"));
        let (body, r) = match s.rfind(")/") {
            Some(i) => (&s[..=i], parse_int(&s[i + 2..])?),
            None => (s.as_str(), BigInt::one()),
        };
        let inner = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
        let star = inner.find("*sqrt(").ok_or_else(bad)?;
        let d_str = inner[star + 6..].strip_suffix(')').ok_or_else(bad)?;
        let d: u64 = d_str.parse().map_err(|_| bad())?;
        let head = &inner[..star];
        let split = head
            .char_indices()
            .skip(1)
            .find(|&(i, c)| (c == '+' || c == '-') && !matches!(head.as_bytes()[i - 1], b'+' | b'-'))
            .map(|(i, _)| i)
            .ok_or_else(bad)?;
        let p = parse_int(&head[..split])?;
        let q = parse_int(&head[split..])?;
        Self::new(p, q, d, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64, d: u64, r: i64) -> QuadraticSurd {
        QuadraticSurd::new(p.into(), q.into(), d, r.into()).unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(s(2, 2, 5, 4), s(1, 1, 5, 2));
        assert_eq!(s(1, 1, 20, 2), s(1, 2, 5, 2));
        assert_eq!(s(1, 3, 4, 1), s(7, 0, 0, 1));
        assert_eq!(s(1, 1, 5, -2), s(-1, -1, 5, 2));
        assert!(s(3, 0, 7, 6).is_rational());
        assert!(QuadraticSurd::new(1.into(), 1.into(), 5, 0.into()).is_err());
    }

    #[test]
    fn golden_mean_identities() {
        let g = QuadraticSurd::golden();
        let one = s(1, 0, 0, 1);
        // g^2 + g = 1
        assert_eq!(g.mul(&g).unwrap().add(&g).unwrap(), one);
        // 1/g = g + 1
        assert_eq!(g.recip().unwrap(), g.add(&one).unwrap());
        assert_eq!(g.floor(), BigInt::zero());
        assert_eq!(g.recip().unwrap().floor(), BigInt::one());
        assert_eq!(g.neg().floor(), BigInt::from(-1));
    }

    #[test]
    fn sign_and_order() {
        assert_eq!(s(-1, 1, 2, 1).signum(), Ordering::Greater);
        assert_eq!(s(2, -1, 5, 1).signum(), Ordering::Less);
        let half = s(1, 0, 0, 2);
        assert_eq!(s(0, 1, 2, 2).cmp_exact(&half), Some(Ordering::Greater));
        assert_eq!(QuadraticSurd::sqrt(2).cmp_exact(&QuadraticSurd::sqrt(3)), None);
    }

    #[test]
    fn parse_and_display() {
        let g: QuadraticSurd = "(-1+1*sqrt(5))/2".parse().unwrap();
        assert_eq!(g, QuadraticSurd::golden());
        assert_eq!(g.to_string(), "(-1+1*sqrt(5))/2");
        let h: QuadraticSurd = "( 3 - 2 * sqrt(2) )".parse().unwrap();
        assert_eq!(h, s(3, -2, 2, 1));
        let k: QuadraticSurd = "(-3+-2*sqrt(2))/5".parse().unwrap();
        assert_eq!(k, s(-3, -2, 2, 5));
        assert!("sqrt(5)".parse::<QuadraticSurd>().is_err());
        assert!("(1+1*sqrt(x))/2".parse::<QuadraticSurd>().is_err());
    }

    #[test]
    fn floor_exact_near_integers() {
        // (1 + sqrt 2)^4 = 17 + 12 sqrt 2 ~ 33.97
        assert_eq!(s(17, 12, 2, 1).floor(), BigInt::from(33));
        assert_eq!(s(17, -12, 2, 1).floor(), BigInt::zero());
        assert_eq!(s(-17, 12, 2, 1).floor(), BigInt::from(-1));
    }
}
