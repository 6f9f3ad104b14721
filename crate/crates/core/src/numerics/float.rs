//! High-precision (non-certified) binary floats with the elementary
//! functions needed for closed-form measure computations.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::dyadic::{shr_floor, shr_trunc, Dyadic, Round};
use crate::error::{Error, Result};

const GUARD: u32 = 40;

/// Binary float carrying its working precision; every operation rounds to
/// nearest at the smaller precision of its operands.
#[derive(Clone, Debug)]
pub struct Float {
    v: Dyadic,
    prec: u32,
}

impl Float {
    pub fn from_dyadic(v: Dyadic, prec: u32) -> Self {
        Float { v: v.round(prec, Round::Nearest), prec }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_dyadic(Dyadic::from_int(n), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Float { v: Dyadic::from_rational(q, prec, Round::Nearest).0, prec }
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        Self::from_dyadic(Dyadic::from_f64(x).expect("finite float"), prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::from_dyadic(self.v.clone(), prec)
    }

    pub fn dyadic(&self) -> &Dyadic {
        &self.v
    }

    pub fn to_f64(&self) -> f64 {
        self.v.to_f64()
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        self.v.to_decimal(digits)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn signum(&self) -> i32 {
        self.v.signum()
    }

    pub fn abs(&self) -> Self {
        Float { v: self.v.abs(), prec: self.prec }
    }

    pub fn recip(&self) -> Self {
        &Float::from_i64(1, self.prec) / self
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.signum() < 0 {
            return Err(Error::domain("square root of a negative number"));
        }
        Ok(Float { v: self.v.sqrt(self.prec, Round::Nearest), prec: self.prec })
    }

    pub fn pi(prec: u32) -> Self {
        let w = prec + GUARD;
        let v = atan_inv(5, w) * 16u32 - atan_inv(239, w) * 4u32;
        Float::from_dyadic(Dyadic::new(v, -(w as i64)), prec)
    }

    pub fn ln2(prec: u32) -> Self {
        let w = prec + GUARD;
        Float::from_dyadic(Dyadic::new(ln2_fixed(w), -(w as i64)), prec)
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Result<Self> {
        if self.signum() <= 0 {
            return Err(Error::domain("logarithm of a non-positive number"));
        }
        let w = self.prec + GUARD;
        let b = self.v.bits() as i64;
        // x = m * 2^e with m in [1, 2), then m in [2/3, 4/3].
        let mut e = self.v.exp + b - 1;
        let mut m = to_fixed(&Dyadic::new(self.v.mant.clone(), 1 - b), w);
        let one = BigInt::one() << w;
        if &m * 3u32 > &one * 4u32 {
            m = shr_floor(&m, 1);
            e += 1;
        }
        let z = ((&m - &one) << w) / (&m + &one);
        let lnm = atanh_fixed(&z, w) * 2u32;
        let total = lnm + ln2_fixed(w) * e;
        Ok(Float::from_dyadic(Dyadic::new(total, -(w as i64)), self.prec))
    }

    /// Dilogarithm `Li2(x) = sum x^k / k^2` on `[-1, 1]`.
    pub fn dilog(&self) -> Result<Self> {
        let p = self.prec;
        let w = p + GUARD;
        let x = self.with_prec(w);
        let one = Float::from_i64(1, w);
        let half = Float::from_dyadic(Dyadic::pow2(-1), w);
        if x > one || x < -&one {
            return Err(Error::domain("dilogarithm argument outside [-1, 1]"));
        }
        let pi2_6 = {
            let pi = Float::pi(w);
            &(&pi * &pi) / &Float::from_i64(6, w)
        };
        let r = if x == one {
            pi2_6
        } else if x.abs() <= half {
            dilog_series(&x)
        } else if x > half {
            // Li2(x) = pi^2/6 - ln x ln(1-x) - Li2(1-x)
            let y = &one - &x;
            &(&pi2_6 - &(&x.ln()? * &y.ln()?)) - &dilog_series(&y)
        } else {
            // Li2(x) = -ln^2(1-x)/2 - Li2(-x/(1-x))
            let omx = &one - &x;
            let l = omx.ln()?;
            let y = &(-&x) / &omx;
            &(-&(&(&l * &l) * &half)) - &dilog_series(&y)
        };
        Ok(r.with_prec(p))
    }
}

/// Dilogarithm extended to all reals `<= 1` via the inversion formula.
pub fn dilog_ext(x: &Float) -> Result<Float> {
    let p = x.prec();
    let one = Float::from_i64(1, p + GUARD);
    let xw = x.with_prec(p + GUARD);
    if xw >= -&one {
        return x.dilog();
    }
    // Li2(z) = -pi^2/6 - ln^2(-z)/2 - Li2(1/z)  for z < -1
    let pi = Float::pi(p + GUARD);
    let l = (-&xw).ln()?;
    let inv = xw.recip().dilog()?;
    let half = Float::from_dyadic(Dyadic::pow2(-1), p + GUARD);
    let r = &(&(-&(&(&pi * &pi) / &Float::from_i64(6, p + GUARD))) - &(&(&l * &l) * &half)) - &inv;
    Ok(r.with_prec(p))
}

fn to_fixed(x: &Dyadic, w: u32) -> BigInt {
    let shift = x.exp + w as i64;
    if shift >= 0 {
        &x.mant << shift as u64
    } else {
        shr_floor(&x.mant, (-shift) as u64)
    }
}

fn atanh_fixed(z: &BigInt, w: u32) -> BigInt {
    let z2 = (z * z) >> w;
    let mut term = z.clone();
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !term.is_zero() {
        sum += &term / (2 * k + 1);
        term = shr_trunc(&(&term * &z2), w as u64);
        k += 1;
    }
    sum
}

fn ln2_fixed(w: u32) -> BigInt {
    let third = (BigInt::one() << w) / 3u32;
    atanh_fixed(&third, w) * 2u32
}

fn atan_inv(n: u32, w: u32) -> BigInt {
    let n2 = BigInt::from(n) * n;
    let mut term = (BigInt::one() << w) / n;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    loop {
        let t = &term / (2 * k + 1);
        if t.is_zero() {
            break;
        }
        if k.is_multiple_of(2) {
            sum += t;
        } else {
            sum -= t;
        }
        term = &term / &n2;
        k += 1;
    }
    sum
}

fn dilog_series(z: &Float) -> Float {
    let w = z.prec;
    let zf = to_fixed(&z.v, w);
    let mut term = zf.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !term.is_zero() {
        sum += &term / (k * k);
        term = shr_trunc(&(&term * &zf), w as u64);
        k += 1;
    }
    Float::from_dyadic(Dyadic::new(sum, -(w as i64)), w)
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Float> for &Float {
            type Output = Float;
            fn $method(self, rhs: &Float) -> Float {
                let prec = self.prec.min(rhs.prec);
                let f: fn(&Dyadic, &Dyadic, u32) -> Dyadic = $body;
                Float { v: f(&self.v, &rhs.v, prec), prec }
            }
        }
        impl $trait<Float> for Float {
            type Output = Float;
            fn $method(self, rhs: Float) -> Float {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b, p| a.add(b).round(p, Round::Nearest));
binop!(Sub, sub, |a, b, p| a.sub(b).round(p, Round::Nearest));
binop!(Mul, mul, |a, b, p| a.mul(b).round(p, Round::Nearest));
binop!(Div, div, |a, b, p| a.div(b, p, Round::Nearest).0);

impl Neg for &Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float { v: self.v.neg(), prec: self.prec }
    }
}

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        -&self
    }
}

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl PartialOrd for Float {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.v.cmp(&other.v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 200;

    fn close(a: &Float, b: &Float, bits: i64) -> bool {
        let d = a.v.sub(&b.v).abs();
        d <= Dyadic::pow2(-bits)
    }

    fn f(x: f64) -> Float {
        Float::from_f64(x, P)
    }

    fn q(n: i64, d: i64) -> Float {
        Float::from_rational(&BigRational::new(n.into(), d.into()), P)
    }

    #[test]
    fn pi_digits() {
        assert_eq!(
            Float::pi(P).to_decimal(40),
            "3.1415926535897932384626433832795028841972"
        );
    }

    #[test]
    fn ln_values() {
        assert_eq!(Float::ln2(P).to_decimal(30), "0.693147180559945309417232121458");
        assert_eq!(f(10.0).ln().unwrap().to_decimal(30), "2.302585092994045684017991454684");
        assert!(f(1.0).ln().unwrap().is_zero());
        let x = q(1, 3).ln().unwrap();
        let y = f(3.0).ln().unwrap();
        assert!(close(&x, &-&y, 190));
        assert!(f(0.0).ln().is_err());
    }

    #[test]
    fn dilog_special_values() {
        let pi = Float::pi(P);
        let pi2 = &pi * &pi;
        let li1 = f(1.0).dilog().unwrap();
        assert!(close(&li1, &(&pi2 / &Float::from_i64(6, P)), 190));
        let lim1 = f(-1.0).dilog().unwrap();
        assert!(close(&lim1, &-&(&pi2 / &Float::from_i64(12, P)), 190));
        assert!(f(0.0).dilog().unwrap().is_zero());
        // Li2(1/2) = pi^2/12 - ln^2(2)/2
        let l2 = Float::ln2(P);
        let expect = &(&pi2 / &Float::from_i64(12, P)) - &(&(&l2 * &l2) / &Float::from_i64(2, P));
        assert!(close(&q(1, 2).dilog().unwrap(), &expect, 190));
        assert!(f(1.5).dilog().is_err());
    }

    #[test]
    fn dilog_reflection_consistency() {
        // Li2(x) + Li2(1-x) = pi^2/6 - ln x ln(1-x) at x = 0.7 (both branches)
        let x = q(7, 10);
        let y = q(3, 10);
        let lhs = &x.dilog().unwrap() + &y.dilog().unwrap();
        let pi = Float::pi(P);
        let rhs = &(&(&pi * &pi) / &Float::from_i64(6, P)) - &(&x.ln().unwrap() * &y.ln().unwrap());
        assert!(close(&lhs, &rhs, 190));
        // Landen: Li2(x) + Li2(x/(x-1)) = -ln^2(1-x)/2 at x = -0.8
        let x = q(-4, 5);
        let z = &x / &(&x - &Float::from_i64(1, P));
        let l = (&Float::from_i64(1, P) - &x).ln().unwrap();
        let lhs = &x.dilog().unwrap() + &z.dilog().unwrap();
        let rhs = -&(&(&l * &l) / &Float::from_i64(2, P));
        assert!(close(&lhs, &rhs, 190));
    }

    #[test]
    fn dilog_inversion_branch() {
        // Li2(-2) = -1.43674636688368094636...
        let v = dilog_ext(&f(-2.0)).unwrap();
        assert_eq!(v.to_decimal(18), "-1.436746366883680946");
    }
}
