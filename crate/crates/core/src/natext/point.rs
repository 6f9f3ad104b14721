use std::fmt;

use crate::error::{Error, Result};
use crate::maps::{self, Alpha, SignedDigit};
use crate::numerics::ExactReal;

use super::region::{explicit_domain, Region, YValue};

/// A point `(x, y)` of the natural extension, `y` in `[-1, inf]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanePoint {
    pub x: ExactReal,
    pub y: YValue,
}

impl PlanePoint {
    pub fn new(x: ExactReal, y: ExactReal) -> Self {
        PlanePoint { x, y: YValue::Finite(y) }
    }

    pub fn at_infinity(x: ExactReal) -> Self {
        PlanePoint { x, y: YValue::Inf }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// `eps / (d + y)`, with `1/(d + inf) = 0`.
fn fiber_image(digit: SignedDigit, y: &YValue) -> Result<ExactReal> {
    match y {
        YValue::Inf => Ok(ExactReal::zero()),
        YValue::Finite(y) => {
            let v = ExactReal::int(digit.d() as i64).add(y).recip()?;
            Ok(if digit.is_flip() { v.neg() } else { v })
        }
    }
}

/// `(x, y) -> (T_alpha(x), eps_1(x) / (d_1(x) + y))`.
pub fn ne_map(p: &PlanePoint, alpha: &Alpha) -> Result<PlanePoint> {
    if let YValue::Finite(y) = &p.y {
        if y.lt(&ExactReal::int(-1))? {
            return Err(Error::domain(format!("y = {y} is below -1")));
        }
    }
    let (digit, tx) = maps::step(&p.x, alpha)?;
    Ok(PlanePoint { x: tx, y: YValue::Finite(fiber_image(digit, &p.y)?) })
}

/// Candidate preimages of `p`: for each digit `(eps, d)`, the point
/// `(1/(d + eps x), eps/y - d)` when the first coordinate lies in the
/// cylinder of that digit and the second in `[-1, inf]`.
fn candidates(p: &PlanePoint, alpha: &Alpha) -> Result<Vec<PlanePoint>> {
    let YValue::Finite(y) = &p.y else {
        return Err(Error::domain("points with y = inf have no preimage"));
    };
    let mut out = Vec::new();
    let (eps_list, q): (Vec<i8>, Option<ExactReal>) = match y.signum()? {
        std::cmp::Ordering::Greater => (vec![1], Some(y.recip()?)),
        std::cmp::Ordering::Less => (vec![-1], Some(y.recip()?.neg())),
        // y = 0 is the image of y = inf under either sign
        std::cmp::Ordering::Equal => (vec![1, -1], None),
    };
    for eps in eps_list {
        for d in 1..=alpha.branch_bound() {
            if eps < 0 && d < 2 {
                continue;
            }
            let dd = ExactReal::int(d as i64);
            let prev_y = match &q {
                Some(q) => {
                    let v = q.sub(&dd);
                    if v.lt(&ExactReal::int(-1))? {
                        break;
                    }
                    YValue::Finite(v)
                }
                None => YValue::Inf,
            };
            let prev_x = if eps < 0 { dd.sub(&p.x) } else { dd.add(&p.x) }.recip()?;
            if !alpha.contains(&prev_x)? {
                continue;
            }
            if maps::digit(&prev_x, alpha)? == SignedDigit::new(eps, d)? {
                out.push(PlanePoint { x: prev_x, y: prev_y });
            }
        }
    }
    Ok(out)
}

/// Inverse of [`ne_map`]. The digit is read from the sign of `y` and the
/// fiber of the domain the preimage must lie in; on the measure-zero set
/// where two preimages lie in the domain the one with the smaller digit is
/// returned. Without an explicit domain (`alpha >= sqrt(2)/2`) such ties
/// are reported as [`Error::FiberAmbiguous`].
pub fn ne_inverse(p: &PlanePoint, alpha: &Alpha) -> Result<PlanePoint> {
    let domain = match explicit_domain(alpha) {
        Ok(r) => Some(r),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    ne_inverse_in(p, alpha, domain.as_ref())
}

/// [`ne_inverse`] with a precomputed domain.
pub fn ne_inverse_in(p: &PlanePoint, alpha: &Alpha, domain: Option<&Region>) -> Result<PlanePoint> {
    let mut cands = candidates(p, alpha)?;
    if let Some(r) = domain {
        let mut kept = Vec::new();
        for c in cands {
            if r.contains(&c.x, &c.y)? {
                kept.push(c);
            }
        }
        cands = kept;
    } else if cands.len() > 1 {
        return Err(Error::FiberAmbiguous);
    }
    cands.into_iter().next().ok_or_else(|| Error::domain(format!("{p} has no preimage in the domain")))
}
