//! Arbitrary-precision binary floating point values `mant * 2^exp`.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact dyadic operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
    Nearest,
}

/// `floor(m / 2^s)`.
pub(crate) fn shr_floor(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    if m.sign() != Sign::Minus {
        m >> s
    } else {
        let t: BigInt = (-m - 1u32) >> s;
        -t - 1u32
    }
}

/// `trunc(m / 2^s)`.
pub(crate) fn shr_trunc(m: &BigInt, s: u64) -> BigInt {
    if m.sign() == Sign::Minus {
        -((-m) >> s)
    } else {
        m >> s
    }
}

fn shr_round(m: &BigInt, s: u64, mode: Round) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    match mode {
        Round::Down => shr_floor(m, s),
        Round::Up => -shr_floor(&-m, s),
        Round::Nearest => {
            let half = BigInt::one() << (s - 1);
            shr_floor(&(m + half), s)
        }
    }
}

/// Exact value `mant * 2^exp`.
#[derive(Clone, Debug)]
pub struct Dyadic {
    pub(crate) mant: BigInt,
    pub(crate) exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        Dyadic { mant, exp }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic { mant: n.into(), exp: 0 }
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: e }
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic { mant: BigInt::from(m) * sign, exp: e })
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Exponent `e` with `2^e <= |x| < 2^(e+1)`; `None` for zero.
    pub fn magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.bits() as i64 - 1)
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        let ma = &a.mant << (a.exp - e) as u64;
        let mb = &b.mant << (b.exp - e) as u64;
        (ma, mb, e)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Self::align(self, other);
        Dyadic { mant: a + b, exp: e }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }
    }

    /// Rounds to at most `prec` significant bits.
    pub fn round(&self, prec: u32, mode: Round) -> Dyadic {
        let b = self.bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let s = b - prec as u64;
        Dyadic { mant: shr_round(&self.mant, s, mode), exp: self.exp + s as i64 }
    }

    /// Round to nearest; also returns an upper bound on the rounding error.
    pub fn round_err(&self, prec: u32) -> (Dyadic, Dyadic) {
        let b = self.bits();
        if b <= prec as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let s = b - prec as u64;
        let m = shr_round(&self.mant, s, Round::Nearest);
        (Dyadic { mant: m, exp: self.exp + s as i64 }, Dyadic::pow2(self.exp + s as i64 - 1))
    }

    /// Quotient rounded to `prec` bits; the flag is true when the result is exact.
    pub fn div(&self, other: &Dyadic, prec: u32, mode: Round) -> (Dyadic, bool) {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return (Dyadic::zero(), true);
        }
        let (mut num, mut den) = (self.mant.clone(), other.mant.clone());
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let k = (prec as i64 + den.bits() as i64 - num.bits() as i64 + 2).max(0);
        let num = num << k as u64;
        let (q, r) = num.div_mod_floor(&den);
        let exact = r.is_zero();
        let q = match mode {
            Round::Down => q,
            Round::Up => {
                if exact {
                    q
                } else {
                    q + 1u32
                }
            }
            Round::Nearest => {
                if (&r << 1u32) >= den {
                    q + 1u32
                } else {
                    q
                }
            }
        };
        (Dyadic { mant: q, exp: self.exp - other.exp - k }, exact)
    }

    /// Square root of a non-negative value rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32, mode: Round) -> Dyadic {
        assert!(!self.mant.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let b = self.bits() as i64;
        let mut t = (2 * prec as i64 + 4 - b).max(0);
        if (self.exp - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let n = &self.mant << t as u64;
        let e = self.exp - t;
        let mut s = n.sqrt();
        let exact = &s * &s == n;
        if mode == Round::Up && !exact {
            s += 1u32;
        } else if mode == Round::Nearest && !exact {
            // s <= sqrt(n) < s + 1; pick the closer end.
            let mid = &s * &s + &s;
            if n > mid {
                s += 1u32;
            }
        }
        Dyadic { mant: s, exp: e / 2 }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            shr_floor(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Rational `p/q` rounded to `prec` bits, plus exactness flag.
    pub fn from_rational(q: &BigRational, prec: u32, mode: Round) -> (Dyadic, bool) {
        let n = Dyadic::from_int(q.numer().clone());
        let d = Dyadic::from_int(q.denom().clone());
        n.div(&d, prec, mode)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.bits();
        let (m, e) = if b > 64 {
            let s = b - 64;
            (shr_round(&self.mant, s, Round::Nearest), self.exp + s as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        ldexp(m.to_f64().unwrap_or(0.0), e)
    }

    /// Decimal rendering with `digits` fractional digits (rounded to nearest).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = self.mul(&Dyadic::from_int(scale.clone()));
        let r = scaled.add(&Dyadic::pow2(-1)).floor();
        let neg = r.is_negative();
        let s = r.abs().to_string();
        let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

/// `m * 2^e` in double precision, saturating to 0 or infinity.
pub fn ldexp(m: f64, e: i64) -> f64 {
    let mut x = m;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl PartialEq for Dyadic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Dyadic {}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (a, b, _) = Self::align(self, other);
        a.cmp(&b)
    }
}
