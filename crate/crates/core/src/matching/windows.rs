use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::cf::{finite_value, rcf_expand, RcfWord};
use crate::error::{Error, Result};
use crate::numerics::{periodic_cf_value, ExactReal, QuadraticSurd};

/// Left or right half of `1/(1 + I_a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    L,
    R,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::L => "L",
            Side::R => "R",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" => Ok(Side::L),
            "R" | "r" => Ok(Side::R),
            _ => Err(Error::parse(format!("side must be L or R, got `{s}`"))),
        }
    }
}

/// A rational `a` in `(0, 1]` with both of its regular expansions:
/// the short one ending in `a_n >= 2` and the long one ending in
/// `a_n - 1, 1`. For `a = 1` both words are `[1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PseudoCenter {
    a: BigRational,
    word_short: RcfWord,
    word_long: RcfWord,
}

impl PseudoCenter {
    pub fn new(a: BigRational) -> Result<Self> {
        if !a.is_positive() || a > BigRational::one() {
            return Err(Error::domain(format!("pseudocenter {a} is not in (0, 1]")));
        }
        if a.is_one() {
            let one = RcfWord::finite(vec![1])?;
            return Ok(PseudoCenter { a, word_short: one.clone(), word_long: one });
        }
        let word_short = rcf_expand(&ExactReal::Rational(a.clone()), 0)?.canonical();
        let word_long = word_short.long_form()?;
        Ok(PseudoCenter { a, word_short, word_long })
    }

    pub fn frac(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Self::new(BigRational::new(n.into(), d.into()))
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn word_short(&self) -> &RcfWord {
        &self.word_short
    }

    pub fn word_long(&self) -> &RcfWord {
        &self.word_long
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one()
    }

    fn short_digits(&self) -> &[u64] {
        self.word_short.prefix()
    }
}

impl fmt::Display for PseudoCenter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a)
    }
}

impl Serialize for PseudoCenter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PseudoCenter", 3)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("word_short", &self.word_short)?;
        st.serialize_field("word_long", &self.word_long)?;
        st.end()
    }
}

/// `I_a` is maximal iff for every split `a_1 ... a_{n-1} 1 = u v` with
/// both parts non-empty the value of `v` exceeds the value of `u v`.
pub fn is_maximal(center: &PseudoCenter) -> bool {
    if center.is_one() {
        return true;
    }
    let w = center.word_long.prefix();
    let whole = finite_value(w);
    (1..w.len()).all(|i| finite_value(&w[i..]) > whole)
}

fn surd_one() -> QuadraticSurd {
    QuadraticSurd::from_rational(&BigRational::one())
}

/// `1 / (1 + x)`.
fn shift_recip(x: &QuadraticSurd) -> Result<QuadraticSurd> {
    x.add(&surd_one()).ok_or_else(|| Error::Internal("surd field mismatch".into()))?.recip()
}

fn periodic(w: &RcfWord) -> Result<QuadraticSurd> {
    periodic_cf_value(&[], w.prefix())
}

fn ordered(x: QuadraticSurd, y: QuadraticSurd) -> Result<(QuadraticSurd, QuadraticSurd)> {
    let ord = match x.cmp_exact(&y) {
        Some(o) => o,
        None => ExactReal::from_surd(x.clone()).cmp(&ExactReal::from_surd(y.clone()))?,
    };
    match ord {
        Ordering::Less => Ok((x, y)),
        Ordering::Greater => Ok((y, x)),
        Ordering::Equal => Err(Error::Internal(format!("degenerate interval ({x}, {y})"))),
    }
}

/// The interval `I_a` with endpoints `[overline(a_1..a_n)]` and
/// `[overline(a_1..a_{n-1}, 1)]`, and `I_1 = (g, 1)`.
pub fn quadratic_interval(center: &PseudoCenter) -> Result<(QuadraticSurd, QuadraticSurd)> {
    if center.is_one() {
        return Ok((QuadraticSurd::golden(), surd_one()));
    }
    ordered(periodic(&center.word_short)?, periodic(&center.word_long)?)
}

/// Exponents `(M, N)` of the left window `J_a^L`.
fn left_exponents(digits: &[u64]) -> (usize, usize) {
    let n = digits.len();
    let odd: u64 = digits.iter().step_by(2).sum();
    let even: u64 = digits.iter().skip(1).step_by(2).sum();
    if n % 2 == 1 {
        (odd as usize, even as usize + 2)
    } else {
        (odd as usize + 1, even as usize + 1)
    }
}

/// A matching window: on `(left, right)` every `alpha` satisfies
/// `T^M(alpha) = T^N(1 - alpha)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingWindow {
    pub center: PseudoCenter,
    pub side: Side,
    pub left: QuadraticSurd,
    pub right: QuadraticSurd,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
}

impl MatchingWindow {
    /// Whether `alpha` lies strictly inside the window.
    pub fn contains(&self, alpha: &ExactReal) -> Result<bool> {
        let l = ExactReal::from_surd(self.left.clone());
        let r = ExactReal::from_surd(self.right.clone());
        Ok(l.lt(alpha)? && alpha.lt(&r)?)
    }

    /// `k` rationals of small height strictly inside the window, one in
    /// each of `k` equal parts.
    pub fn interior_samples(&self, k: usize) -> Result<Vec<BigRational>> {
        let width = self.right.sub(&self.left).ok_or_else(|| Error::Internal("surd field mismatch".into()))?;
        let at = |i: usize| -> Result<QuadraticSurd> {
            let f = QuadraticSurd::from_rational(&BigRational::new(i.into(), k.into()));
            let off = width.mul(&f).ok_or_else(|| Error::Internal("surd field mismatch".into()))?;
            self.left.add(&off).ok_or_else(|| Error::Internal("surd field mismatch".into()))
        };
        (0..k).map(|i| simplest_between(&at(i)?, &at(i + 1)?)).collect()
    }

    pub fn left_f64(&self) -> f64 {
        self.left.to_f64()
    }

    pub fn right_f64(&self) -> f64 {
        self.right.to_f64()
    }
}

/// The window `J_a^L` or `J_a^R` of a maximal pseudocenter with its
/// exponents: `(M, N)` on the left and `(M + 1, N - 1)` on the right.
pub fn matching_window(center: &PseudoCenter, side: Side) -> Result<MatchingWindow> {
    if !is_maximal(center) {
        return Err(Error::domain(format!("I_a is not maximal for a = {center}")));
    }
    if center.is_one() {
        return match side {
            Side::L => Err(Error::EmptyWindow),
            Side::R => Ok(MatchingWindow {
                center: center.clone(),
                side,
                left: QuadraticSurd::from_rational(&BigRational::new(1.into(), 2.into())),
                right: QuadraticSurd::golden(),
                m: 2,
                n: 1,
            }),
        };
    }
    let digits = center.short_digits();
    let mid = QuadraticSurd::from_rational(&(BigRational::one() / (BigRational::one() + &center.a)));
    let outer_short = shift_recip(&periodic(&center.word_short)?)?;
    let outer_long = shift_recip(&periodic(&center.word_long)?)?;
    let odd = digits.len() % 2 == 1;
    let (left, right) = match (side, odd) {
        (Side::L, true) => (outer_long, mid),
        (Side::R, true) => (mid, outer_short),
        (Side::L, false) => (outer_short, mid),
        (Side::R, false) => (mid, outer_long),
    };
    if ExactReal::from_surd(left.clone()).cmp(&ExactReal::from_surd(right.clone()))? != Ordering::Less {
        return Err(Error::Internal(format!("window endpoints out of order for a = {center}")));
    }
    let (m, n) = left_exponents(digits);
    let (m, n) = match side {
        Side::L => (m, n),
        Side::R => (m + 1, n - 1),
    };
    Ok(MatchingWindow { center: center.clone(), side, left, right, m, n })
}

/// All windows of maximal pseudocenters with denominator at most
/// `max_denominator`, sorted by left endpoint.
pub fn enumerate_windows(max_denominator: u64) -> Result<Vec<MatchingWindow>> {
    if max_denominator == 0 {
        return Err(Error::domain("max_denominator must be at least 1"));
    }
    let mut out = Vec::new();
    for q in 1..=max_denominator {
        for p in 1..=q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let c = PseudoCenter::new(BigRational::new(p.into(), q.into()))?;
            if !is_maximal(&c) {
                continue;
            }
            for side in [Side::L, Side::R] {
                match matching_window(&c, side) {
                    Ok(w) => out.push(w),
                    Err(Error::EmptyWindow) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    out.sort_by(|x, y| x.left.cmp_exact(&y.left).unwrap_or_else(|| x.left_f64().total_cmp(&y.left_f64())));
    Ok(out)
}

/// CSV with one row per window.
pub fn windows_csv(windows: &[MatchingWindow]) -> String {
    let mut s = String::from("center,side,left,right,M,N\n");
    for w in windows {
        s.push_str(&format!("{},{},{},{},{},{}\n", w.center, w.side, w.left, w.right, w.m, w.n));
    }
    s
}

fn surd_int(n: &BigInt) -> QuadraticSurd {
    QuadraticSurd::from_rational(&BigRational::from_integer(n.clone()))
}

/// The rational of smallest denominator strictly between `lo` and `hi`,
/// for `0 <= lo < hi` in a common quadratic field.
pub fn simplest_between(lo: &QuadraticSurd, hi: &QuadraticSurd) -> Result<BigRational> {
    if lo.signum() == Ordering::Less || lo.cmp_exact(hi) != Some(Ordering::Less) {
        return Err(Error::domain(format!("need 0 <= lo < hi, got ({lo}, {hi})")));
    }
    // Continued fraction descent. `hi = None` stands for +infinity.
    let mut lo = lo.clone();
    let mut hi: Option<QuadraticSurd> = Some(hi.clone());
    let mut digits: Vec<BigInt> = Vec::new();
    loop {
        let n = lo.floor();
        let next = &n + 1u32;
        let fits = match &hi {
            None => true,
            Some(h) => surd_int(&next).cmp_exact(h) == Some(Ordering::Less),
        };
        if fits {
            digits.push(next);
            break;
        }
        // both endpoints lie in [n, n + 1]
        let h = hi.take().expect("finite");
        let base = surd_int(&n);
        let hl = h.sub(&base).ok_or_else(|| Error::Internal("surd field mismatch".into()))?;
        let ll = lo.sub(&base).ok_or_else(|| Error::Internal("surd field mismatch".into()))?;
        digits.push(n);
        hi = if ll.is_zero() { None } else { Some(ll.recip()?) };
        lo = hl.recip()?;
        if digits.len() > 10_000 {
            return Err(Error::Internal("simplest rational search did not terminate".into()));
        }
    }
    let mut v = BigRational::from_integer(digits.pop().expect("non-empty"));
    while let Some(d) = digits.pop() {
        v = BigRational::from_integer(d) + v.recip();
    }
    Ok(v)
}
