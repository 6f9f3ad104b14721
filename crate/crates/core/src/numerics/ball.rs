//! Midpoint-radius enclosures with dyadic endpoints.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dyadic::{Dyadic, Round};
use super::surd::QuadraticSurd;

const RAD_BITS: u32 = 30;

/// The closed interval `[mid - rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub mid: Dyadic,
    pub rad: Dyadic,
}

fn rad_up(r: Dyadic) -> Dyadic {
    r.round(RAD_BITS, Round::Up)
}

impl Ball {
    pub fn exact(mid: Dyadic) -> Self {
        Ball { mid, rad: Dyadic::zero() }
    }

    pub fn from_int(n: &BigInt) -> Self {
        Self::exact(Dyadic::from_int(n.clone()))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let (mid, exact) = Dyadic::from_rational(q, prec, Round::Nearest);
        if exact {
            return Self::exact(mid);
        }
        let ulp = mid.magnitude().map_or(Dyadic::zero(), |m| Dyadic::pow2(m - prec as i64 + 1));
        Ball { mid, rad: ulp }
    }

    pub fn from_surd(s: &QuadraticSurd, prec: u32) -> Self {
        if s.is_rational() {
            return Self::from_rational(&s.rational_part(), prec);
        }
        // sqrt(d) in [t, t + 1] * 2^-k
        let k = prec as u64 + 8;
        let t = (BigInt::from(s.d()) << (2 * k)).sqrt();
        let root = Ball {
            mid: Dyadic::new(2 * t + 1u32, -(k as i64) - 1),
            rad: Dyadic::pow2(-(k as i64) - 1),
        };
        let p = Self::from_int(s.p());
        let q = Self::from_int(s.q());
        let r = Self::from_int(s.r());
        let num = p.add(&q.mul(&root, prec + 8), prec + 8);
        num.div(&r, prec).expect("surd denominator is positive")
    }

    pub fn lo(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn hi(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad.clone() }
    }

    pub fn add(&self, o: &Ball, prec: u32) -> Ball {
        let (mid, err) = self.mid.add(&o.mid).round_err(prec);
        Ball { mid, rad: rad_up(self.rad.add(&o.rad).add(&err)) }
    }

    pub fn sub(&self, o: &Ball, prec: u32) -> Ball {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Ball, prec: u32) -> Ball {
        let (mid, err) = self.mid.mul(&o.mid).round_err(prec);
        let r = self
            .mid
            .abs()
            .mul(&o.rad)
            .add(&o.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&o.rad))
            .add(&err);
        Ball { mid, rad: rad_up(r) }
    }

    /// `None` when the divisor ball contains zero.
    pub fn div(&self, o: &Ball, prec: u32) -> Option<Ball> {
        let inv = o.recip(prec + 4)?;
        Some(self.mul(&inv, prec))
    }

    pub fn recip(&self, prec: u32) -> Option<Ball> {
        let m = self.mid.abs();
        if m <= self.rad {
            return None;
        }
        let (q, exact) = Dyadic::from_int(1).div(&self.mid, prec, Round::Nearest);
        let round_err = if exact {
            Dyadic::zero()
        } else {
            q.magnitude().map_or(Dyadic::zero(), |e| Dyadic::pow2(e - prec as i64 + 1))
        };
        let prop = if self.rad.is_zero() {
            Dyadic::zero()
        } else {
            // |1/x - 1/m| <= r / (|m| (|m| - r))
            let den = m.mul(&m.sub(&self.rad));
            self.rad.div(&den, RAD_BITS, Round::Up).0
        };
        Some(Ball { mid: q, rad: rad_up(prop.add(&round_err)) })
    }

    /// Sign if it is determined by the enclosure.
    pub fn sign(&self) -> Option<Ordering> {
        if self.rad.is_zero() {
            return Some(self.mid.signum().cmp(&0));
        }
        if self.lo().signum() > 0 {
            Some(Ordering::Greater)
        } else if self.hi().signum() < 0 {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Floor if both endpoints share it.
    pub fn floor(&self) -> Option<BigInt> {
        let lo = self.lo().floor();
        if lo == self.hi().floor() {
            Some(lo)
        } else {
            None
        }
    }

    /// Whether the whole enclosure lies within `tol` of zero.
    pub fn within(&self, tol: &Dyadic) -> bool {
        self.mid.abs().add(&self.rad) <= *tol
    }

    /// Whether the enclosure certainly exceeds `tol` in absolute value.
    pub fn outside(&self, tol: &Dyadic) -> bool {
        self.mid.abs().sub(&self.rad) > *tol
    }

    pub fn contains_zero(&self) -> bool {
        self.lo().signum() <= 0 && self.hi().signum() >= 0
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_is_below(&self, bits: i64) -> bool {
        self.rad.is_zero() || self.rad.magnitude().unwrap() < -bits
    }
}
