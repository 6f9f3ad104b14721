use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::Alpha;
use crate::measure::{regime, Regime};
use crate::numerics::ExactReal;

/// A closed box `[x_lo, x_hi] x [y_lo, y_hi]`; `y_hi = None` is `+inf`.
#[derive(Clone, Debug)]
pub struct RegionBox {
    pub x_lo: ExactReal,
    pub x_hi: ExactReal,
    pub y_lo: ExactReal,
    pub y_hi: Option<ExactReal>,
}

impl RegionBox {
    fn new(x_lo: &ExactReal, x_hi: &ExactReal, y_lo: ExactReal, y_hi: Option<ExactReal>) -> Self {
        RegionBox { x_lo: x_lo.clone(), x_hi: x_hi.clone(), y_lo, y_hi }
    }

    pub fn contains(&self, x: &ExactReal, y: &YValue) -> Result<bool> {
        if x.lt(&self.x_lo)? || self.x_hi.lt(x)? {
            return Ok(false);
        }
        match y {
            YValue::Inf => Ok(self.y_hi.is_none()),
            YValue::Finite(y) => {
                if y.lt(&self.y_lo)? {
                    return Ok(false);
                }
                match &self.y_hi {
                    None => Ok(true),
                    Some(h) => y.le(h),
                }
            }
        }
    }

    /// Double-precision bounds `(x_lo, x_hi, y_lo, y_hi)`.
    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.x_lo.to_f64(),
            self.x_hi.to_f64(),
            self.y_lo.to_f64(),
            self.y_hi.as_ref().map_or(f64::INFINITY, |h| h.to_f64()),
        ]
    }

    /// `int dy / (1 + x y)^2` over the box's y-range.
    fn fiber_integral(&self, x: &ExactReal) -> Result<ExactReal> {
        let one = ExactReal::one();
        let lo = one.add(&self.y_lo.mul(x)).recip()?;
        let hi = match &self.y_hi {
            None => ExactReal::zero(),
            Some(h) => one.add(&h.mul(x)).recip()?,
        };
        lo.sub(&hi).div(x)
    }
}

impl Serialize for RegionBox {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RegionBox", 4)?;
        st.serialize_field("x_lo", &self.x_lo)?;
        st.serialize_field("x_hi", &self.x_hi)?;
        st.serialize_field("y_lo", &self.y_lo)?;
        st.serialize_field("y_hi", &self.y_hi.as_ref().map_or("inf".to_string(), |h| h.to_string()))?;
        st.end()
    }
}

/// A second coordinate, possibly `+inf`.
#[derive(Clone, Debug, PartialEq)]
pub enum YValue {
    Finite(ExactReal),
    Inf,
}

impl YValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            YValue::Finite(y) => y.to_f64(),
            YValue::Inf => f64::INFINITY,
        }
    }
}

impl fmt::Display for YValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YValue::Finite(y) => write!(f, "{y}"),
            YValue::Inf => f.write_str("inf"),
        }
    }
}

/// A finite union of closed boxes with disjoint interiors.
#[derive(Clone, Debug, Serialize)]
pub struct Region {
    pub boxes: Vec<RegionBox>,
}

impl Region {
    pub fn contains(&self, x: &ExactReal, y: &YValue) -> Result<bool> {
        for b in &self.boxes {
            if b.contains(x, y)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Membership with every box enlarged by `tol`.
    pub fn contains_f64(&self, x: f64, y: f64, tol: f64) -> bool {
        self.boxes.iter().any(|b| {
            let [xl, xh, yl, yh] = b.to_f64();
            x >= xl - tol && x <= xh + tol && y >= yl - tol && y <= yh + tol
        })
    }

    /// `int dy / (1 + x y)^2` over the vertical section at `x`. Boxes whose
    /// x-range has `x` as an endpoint are skipped, so `x` must not be an
    /// x-breakpoint of the region.
    pub fn fiber_integral(&self, x: &ExactReal) -> Result<ExactReal> {
        let mut s = ExactReal::zero();
        for b in &self.boxes {
            if b.x_lo.lt(x)? && x.lt(&b.x_hi)? {
                s = s.add(&b.fiber_integral(x)?);
            }
        }
        Ok(s)
    }
}

/// The domain `D_alpha` of the natural extension for `0 < alpha < sqrt(2)/2`.
///
/// Below `1/2` it is `[alpha, alpha/(1-alpha)] x [0, inf]` together with
/// `[alpha/(1-alpha), 1] x [0, 1]` and `[1-alpha, 1] x [-1, 0]`. Above `1/2`
/// the vertical sections are unions of `[-1, 0]`, `[-1, g-1]`, `[-1, inf]`,
/// `[g, 1]`, `[g, inf]`, `[1, inf]` and `[g+1, inf]`, arranged per regime.
pub fn explicit_domain(alpha: &Alpha) -> Result<Region> {
    let r = regime(alpha)?;
    let a = alpha.value();
    let b = alpha.one_minus();
    let one = ExactReal::one();
    let neg1 = ExactReal::int(-1);
    let zero = ExactReal::zero();
    let g = ExactReal::golden();
    let two_a_minus_1 = a.add(a).sub(&one);
    let mut boxes = Vec::new();
    match r {
        Regime::Small => {
            let q = a.div(b)?;
            boxes.push(RegionBox::new(a, &q, zero.clone(), None));
            boxes.push(RegionBox::new(&q, &one, zero.clone(), Some(one.clone())));
            boxes.push(RegionBox::new(b, &one, neg1, Some(zero)));
        }
        Regime::HalfToGolden => {
            let q = b.div(a)?;
            boxes.push(RegionBox::new(b, a, neg1.clone(), Some(zero.clone())));
            boxes.push(RegionBox::new(a, &q, neg1.clone(), None));
            boxes.push(RegionBox::new(&q, &one, neg1, Some(zero)));
            boxes.push(RegionBox::new(&q, &one, one.clone(), None));
        }
        Regime::GoldenToTwoThirds | Regime::TwoThirdsToRootHalf => {
            let p1 = two_a_minus_1.div(a)?;
            boxes.push(RegionBox::new(b, &p1, neg1.clone(), Some(g.sub(&one))));
            boxes.push(RegionBox::new(&p1, a, neg1.clone(), Some(zero.clone())));
            if r == Regime::GoldenToTwoThirds {
                let p3 = two_a_minus_1.div(b)?;
                boxes.push(RegionBox::new(a, &p3, neg1.clone(), Some(zero.clone())));
                boxes.push(RegionBox::new(a, &p3, g.clone(), None));
                boxes.push(RegionBox::new(&p3, &one, neg1, Some(zero)));
                boxes.push(RegionBox::new(&p3, &one, one.clone(), None));
            } else {
                let p3 = b.div(&two_a_minus_1)?;
                boxes.push(RegionBox::new(a, &p3, neg1.clone(), Some(zero.clone())));
                boxes.push(RegionBox::new(a, &p3, g.clone(), None));
                boxes.push(RegionBox::new(&p3, &one, neg1, Some(zero)));
                boxes.push(RegionBox::new(&p3, &one, g.clone(), Some(one.clone())));
                boxes.push(RegionBox::new(&p3, &one, g.add(&one), None));
            }
        }
    }
    // drop degenerate boxes at the regime boundaries
    let mut kept = Vec::with_capacity(boxes.len());
    for bx in boxes {
        if bx.x_lo.lt(&bx.x_hi)? {
            kept.push(bx);
        }
    }
    if kept.is_empty() {
        return Err(Error::Internal("empty natural extension domain".into()));
    }
    Ok(Region { boxes: kept })
}
