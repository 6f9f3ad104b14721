//! The one-dimensional maps: Gauss `G`, Renyi `R = 1 - G`, the flipped
//! map `T_alpha`, and the folded and Nakada maps used as cross-checks.
//!
//! `T_alpha` acts on `I_alpha = [min(alpha, 1 - alpha), 1]` as `G` off the
//! flip region `D_alpha = U_n [1/(n + alpha), 1/n]` and as `R` on it. The
//! intervals of `D_alpha` are taken closed, so the points `1/n` and
//! `1/(n + alpha)` use the flipped branch. Equivalently `x` lies in
//! `D_alpha` iff `G(x) <= alpha`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ExactReal, PrecisionPolicy};

/// The parameter `alpha` in `(0, 1)` with its derived quantities.
#[derive(Clone, Debug)]
pub struct Alpha {
    value: ExactReal,
    one_minus: ExactReal,
    lower: ExactReal,
    branch_bound: u64,
}

impl Alpha {
    pub fn new(value: ExactReal) -> Result<Self> {
        if value.signum()? != Ordering::Greater || value.cmp(&ExactReal::one())? != Ordering::Less {
            return Err(Error::domain(format!("alpha = {value} is not in (0, 1)")));
        }
        let one_minus = ExactReal::one().sub(&value);
        let lower = if value.le(&one_minus)? { value.clone() } else { one_minus.clone() };
        // ceil(1/lower) + 1 <= floor(1/lower) + 2
        let inv = lower.recip()?.floor()?;
        let branch_bound = inv.to_u64().ok_or_else(|| Error::domain("alpha too close to 0"))? + 2;
        Ok(Alpha { value, one_minus, lower, branch_bound })
    }

    /// `n / d` as a parameter.
    pub fn frac(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        Self::new(ExactReal::frac(n, d))
    }

    pub fn parse_with(s: &str, policy: PrecisionPolicy) -> Result<Self> {
        Self::new(ExactReal::parse_with(s, policy)?)
    }

    pub fn value(&self) -> &ExactReal {
        &self.value
    }

    pub fn one_minus(&self) -> &ExactReal {
        &self.one_minus
    }

    /// Left endpoint `min(alpha, 1 - alpha)` of `I_alpha`.
    pub fn lower(&self) -> &ExactReal {
        &self.lower
    }

    /// Upper bound on the digits `d` that occur on `I_alpha`.
    pub fn branch_bound(&self) -> u64 {
        self.branch_bound
    }

    pub fn is_exact(&self) -> bool {
        self.value.is_exact()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Whether `x` lies in `I_alpha`.
    pub fn contains(&self, x: &ExactReal) -> Result<bool> {
        if x == &self.lower || x == &self.value || x == &self.one_minus {
            return Ok(true);
        }
        Ok(self.lower.le(x)? && x.le(&ExactReal::one())?)
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.parse()?)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// One semi-regular step `(epsilon, d)` with `d + epsilon >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SignedDigit {
    epsilon: i8,
    d: u64,
}

impl SignedDigit {
    /// The digit of the fixed point 1.
    pub const FIXED: SignedDigit = SignedDigit { epsilon: -1, d: 2 };

    pub fn new(epsilon: i8, d: u64) -> Result<Self> {
        match epsilon {
            1 if d >= 1 => Ok(SignedDigit { epsilon, d }),
            -1 if d >= 2 => Ok(SignedDigit { epsilon, d }),
            _ => Err(Error::domain(format!("illegal signed digit ({epsilon:+}, {d})"))),
        }
    }

    pub fn plus(d: u64) -> Self {
        Self::new(1, d).expect("d >= 1")
    }

    pub fn minus(d: u64) -> Self {
        Self::new(-1, d).expect("d >= 2")
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_flip(&self) -> bool {
        self.epsilon < 0
    }
}

impl fmt::Display for SignedDigit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}/{}", self.epsilon, self.d)
    }
}

impl FromStr for SignedDigit {
    type Err = Error;

    /// Parses `+1/3` or `-1/2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(format!("expected signed digit like +1/3, got `{s}`"));
        let (e, d) = s.trim().split_once('/').ok_or_else(bad)?;
        let epsilon = match e.trim() {
            "+1" | "1" => 1,
            "-1" => -1,
            _ => return Err(bad()),
        };
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        Self::new(epsilon, d)
    }
}

impl From<SignedDigit> for String {
    fn from(d: SignedDigit) -> String {
        d.to_string()
    }
}

impl TryFrom<String> for SignedDigit {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// A branch of `T_alpha` with its cylinder `Delta(epsilon, d)` in `I_alpha`.
#[derive(Clone, Debug)]
pub struct BranchInfo {
    pub digit: SignedDigit,
    pub left: ExactReal,
    pub right: ExactReal,
    pub left_closed: bool,
    pub right_closed: bool,
}

/// Non-empty cylinders of `T_alpha`, in order of increasing digit `d`.
pub fn branches(alpha: &Alpha) -> Result<Vec<BranchInfo>> {
    let mut out = Vec::new();
    let lower = alpha.lower();
    let one = ExactReal::one();
    for d in 1..=alpha.branch_bound() {
        let dd = ExactReal::int(d as i64);
        // flipped cylinder [1/(d - 1 + alpha), 1/(d - 1)] for d >= 2
        if d >= 2 {
            let n = ExactReal::int(d as i64 - 1);
            let l = n.add(alpha.value()).recip()?;
            let r = n.recip()?;
            push_clipped(&mut out, SignedDigit::minus(d), l, true, r, true, lower, &one)?;
        }
        // regular cylinder (1/(d + 1), 1/(d + alpha))
        let l = dd.add(&one).recip()?;
        let r = dd.add(alpha.value()).recip()?;
        push_clipped(&mut out, SignedDigit::plus(d), l, false, r, false, lower, &one)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn push_clipped(
    out: &mut Vec<BranchInfo>,
    digit: SignedDigit,
    l: ExactReal,
    lc: bool,
    r: ExactReal,
    rc: bool,
    lower: &ExactReal,
    one: &ExactReal,
) -> Result<()> {
    let (l, lc) = if l.lt(lower)? { (lower.clone(), true) } else { (l, lc) };
    let (r, rc) = if r.cmp(one)? == Ordering::Greater { (one.clone(), true) } else { (r, rc) };
    let non_empty = match l.cmp(&r)? {
        Ordering::Less => true,
        Ordering::Equal => lc && rc,
        Ordering::Greater => false,
    };
    if non_empty {
        out.push(BranchInfo { digit, left: l, right: r, left_closed: lc, right_closed: rc });
    }
    Ok(())
}

fn check_unit(x: &ExactReal) -> Result<()> {
    if x.signum()? != Ordering::Greater || x.cmp(&ExactReal::one())? == Ordering::Greater {
        return Err(Error::domain(format!("x = {x} is not in (0, 1]")));
    }
    Ok(())
}

/// `(1/x, floor(1/x), G(x))` for `x` in `(0, 1]`.
fn gauss_parts(x: &ExactReal) -> Result<(ExactReal, BigInt, ExactReal)> {
    let y = x.recip()?;
    let n = y.floor()?;
    let g = y.sub(&ExactReal::Rational(n.clone().into()));
    Ok((y, n, g))
}

/// Gauss map `G(x) = 1/x - floor(1/x)` on `[0, 1]`, with `G(0) = 0`.
pub fn gauss(x: &ExactReal) -> Result<ExactReal> {
    if x.is_exact_zero() {
        return Ok(ExactReal::zero());
    }
    check_unit(x)?;
    Ok(gauss_parts(x)?.2)
}

/// Renyi map `R(x) = 1 - G(x)` on `(0, 1]`.
pub fn renyi(x: &ExactReal) -> Result<ExactReal> {
    check_unit(x)?;
    Ok(ExactReal::one().sub(&gauss_parts(x)?.2))
}

/// Whether `x` lies in the closed flip region `D_alpha`.
pub fn in_flip_region(x: &ExactReal, alpha: &Alpha) -> Result<bool> {
    check_unit(x)?;
    gauss_parts(x)?.2.le(alpha.value())
}

fn check_interval(x: &ExactReal, alpha: &Alpha) -> Result<()> {
    if !alpha.contains(x)? {
        return Err(Error::domain(format!("x = {x} is not in I_alpha = [{}, 1]", alpha.lower())));
    }
    Ok(())
}

/// One application of `T_alpha` without the domain check.
pub(crate) fn step_unchecked(x: &ExactReal, alpha: &Alpha) -> Result<(SignedDigit, ExactReal)> {
    if x.is_exact_one() {
        return Ok((SignedDigit::FIXED, ExactReal::one()));
    }
    let (_, n, g) = gauss_parts(x)?;
    let n = n.to_u64().ok_or_else(|| Error::domain("digit overflow"))?;
    if g.le(alpha.value())? {
        Ok((SignedDigit::minus(n + 1), ExactReal::one().sub(&g)))
    } else {
        Ok((SignedDigit::plus(n), g))
    }
}

/// Digit and image `(digit(x), T_alpha(x))` in one evaluation.
pub fn step(x: &ExactReal, alpha: &Alpha) -> Result<(SignedDigit, ExactReal)> {
    check_interval(x, alpha)?;
    step_unchecked(x, alpha)
}

/// First signed digit `(epsilon_1(x), d_1(x))`.
pub fn digit(x: &ExactReal, alpha: &Alpha) -> Result<SignedDigit> {
    Ok(step(x, alpha)?.0)
}

/// `T_alpha(x) = epsilon_1(x) (1/x - d_1(x))`.
pub fn t_alpha(x: &ExactReal, alpha: &Alpha) -> Result<ExactReal> {
    Ok(step(x, alpha)?.1)
}

/// Double-precision `T_alpha` for simulation: returns `(epsilon, d, T x)`.
/// Points at or above 1 stay at the fixed point.
pub fn step_f64(x: f64, alpha: f64) -> (i8, u64, f64) {
    if x >= 1.0 {
        return (-1, 2, 1.0);
    }
    let y = 1.0 / x;
    let n = y.floor();
    let g = y - n;
    if g <= alpha {
        (-1, n as u64 + 1, 1.0 - g)
    } else {
        (1, n as u64, g)
    }
}

/// Folded map `|1/x - floor(1/x + 1 - alpha)|` on `[0, max(alpha, 1 - alpha)]`.
pub fn folded(x: &ExactReal, alpha: &Alpha) -> Result<ExactReal> {
    if x.is_exact_zero() {
        return Ok(ExactReal::zero());
    }
    let upper = if alpha.value().le(alpha.one_minus())? { alpha.one_minus() } else { alpha.value() };
    if x.signum()? != Ordering::Greater || x.cmp(upper)? == Ordering::Greater {
        return Err(Error::domain(format!("x = {x} is not in [0, {upper}]")));
    }
    let y = x.recip()?;
    let k = y.add(alpha.one_minus()).floor()?;
    y.sub(&ExactReal::Rational(k.into())).abs()
}

/// Nakada map `|1/x| - floor(|1/x| + 1 - alpha)` on `[alpha - 1, alpha]`.
pub fn nakada(x: &ExactReal, alpha: &Alpha) -> Result<ExactReal> {
    if x.is_exact_zero() {
        return Ok(ExactReal::zero());
    }
    let lo = alpha.value().sub(&ExactReal::one());
    if x.lt(&lo)? || x.cmp(alpha.value())? == Ordering::Greater {
        return Err(Error::domain(format!("x = {x} is not in [{lo}, {}]", alpha.value())));
    }
    let y = x.recip()?.abs()?;
    let k = y.add(alpha.one_minus()).floor()?;
    Ok(y.sub(&ExactReal::Rational(k.into())))
}

/// One entry of an orbit trace: the digit used and the resulting point.
#[derive(Clone, Debug)]
pub struct OrbitStep {
    pub digit: SignedDigit,
    pub point: ExactReal,
}

/// `n` iterates of `T_alpha` starting at `start`.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub start: ExactReal,
    pub steps: Vec<OrbitStep>,
    /// Number of steps after which the orbit sits exactly at 1
    /// (`Some(0)` if it starts there). Later entries are the fixed point.
    pub hit_one: Option<usize>,
}

impl Orbit {
    /// `x_k = T^k(start)` for `k` in `0..=steps.len()`.
    pub fn point(&self, k: usize) -> &ExactReal {
        if k == 0 {
            &self.start
        } else {
            &self.steps[k - 1].point
        }
    }

    pub fn digits(&self) -> Vec<SignedDigit> {
        self.steps.iter().map(|s| s.digit).collect()
    }
}

/// Iterates `T_alpha`; once the orbit reaches 1 exactly, the remaining
/// entries are filled with the fixed point without further arithmetic.
/// Precision failures report the step at which they occurred.
pub fn orbit(x: &ExactReal, alpha: &Alpha, n: usize) -> Result<Orbit> {
    check_interval(x, alpha)?;
    let mut steps = Vec::with_capacity(n);
    let mut hit_one = x.is_exact_one().then_some(0);
    let mut cur = x.clone();
    for k in 0..n {
        if hit_one.is_some() {
            steps.push(OrbitStep { digit: SignedDigit::FIXED, point: ExactReal::one() });
            continue;
        }
        let (digit, next) = step_unchecked(&cur, alpha).map_err(|e| e.at_step(k))?;
        if next.is_exact_one() {
            hit_one = Some(k + 1);
        }
        steps.push(OrbitStep { digit, point: next.clone() });
        cur = next;
    }
    Ok(Orbit { start: x.clone(), steps, hit_one })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactReal {
        ExactReal::frac(n, d)
    }

    fn a(n: i64, d: i64) -> Alpha {
        Alpha::frac(n, d).unwrap()
    }

    #[test]
    fn flip_region_examples() {
        let x: ExactReal = "0.45".parse().unwrap();
        assert!(in_flip_region(&x, &a(3, 10)).unwrap());
        assert!(!in_flip_region(&q(3, 7), &a(3, 10)).unwrap());
        assert!(in_flip_region(&q(1, 1), &a(1, 7)).unwrap());
        // closed endpoints
        assert!(in_flip_region(&q(10, 23), &a(3, 10)).unwrap());
        assert!(in_flip_region(&q(1, 2), &a(3, 10)).unwrap());
        assert!(in_flip_region(&q(0, 1), &a(3, 10)).is_err());
    }

    #[test]
    fn digit_examples() {
        assert_eq!(digit(&q(3, 10), &a(3, 10)).unwrap(), SignedDigit::plus(3));
        let x: ExactReal = "0.45".parse().unwrap();
        assert_eq!(digit(&x, &a(3, 10)).unwrap(), SignedDigit::minus(3));
        assert_eq!(digit(&q(1, 1), &a(2, 5)).unwrap(), SignedDigit::FIXED);
        assert!(digit(&q(1, 5), &a(3, 10)).is_err());
    }

    #[test]
    fn map_examples() {
        assert_eq!(t_alpha(&q(7, 10), &a(3, 10)).unwrap(), q(3, 7));
        assert_eq!(t_alpha(&q(11, 20), &a(11, 20)).unwrap(), q(9, 11));
        assert_eq!(t_alpha(&q(1, 1), &a(1, 3)).unwrap(), q(1, 1));
        assert_eq!(gauss(&q(2, 5)).unwrap(), q(1, 2));
        assert_eq!(gauss(&q(0, 1)).unwrap(), q(0, 1));
        assert_eq!(renyi(&q(2, 3)).unwrap(), q(1, 2));
        assert_eq!(nakada(&q(2, 5), &a(1, 2)).unwrap(), q(-1, 2));
        assert_eq!(nakada(&q(-1, 3), &a(1, 2)).unwrap(), q(0, 1));
        assert_eq!(folded(&q(2, 5), &a(1, 2)).unwrap(), q(1, 2));
        assert!(nakada(&q(3, 5), &a(1, 2)).is_err());
    }

    #[test]
    fn orbit_examples() {
        let o = orbit(&q(3, 10), &a(3, 10), 3).unwrap();
        assert_eq!(o.steps[0].digit, SignedDigit::plus(3));
        assert_eq!(o.steps[0].point, q(1, 3));
        let o = orbit(&q(1, 1), &a(3, 10), 5).unwrap();
        assert_eq!(o.steps.len(), 5);
        assert!(o.steps.iter().all(|s| s.point == q(1, 1) && s.digit == SignedDigit::FIXED));
        assert_eq!(o.hit_one, Some(0));
        let o = orbit(&q(1, 2), &a(1, 2), 2).unwrap();
        assert_eq!(o.hit_one, Some(1));
        assert_eq!(o.point(2), &q(1, 1));
    }

    #[test]
    fn alpha_derived_quantities() {
        let al = a(7, 10);
        assert_eq!(al.lower(), &q(3, 10));
        assert_eq!(al.branch_bound(), 5);
        assert!(Alpha::frac(0, 1).is_err());
        assert!(Alpha::frac(1, 1).is_err());
        let g = Alpha::new(ExactReal::golden()).unwrap();
        assert_eq!(g.lower().to_string(), "(3-1*sqrt(5))/2");
    }

    #[test]
    fn cylinders_partition_interval() {
        let al = a(3, 10);
        let bs = branches(&al).unwrap();
        assert_eq!(bs[0].digit, SignedDigit::plus(1));
        assert_eq!(bs[0].left, q(1, 2));
        assert!(bs.iter().any(|b| b.digit == SignedDigit::FIXED));
        let total: f64 = bs.iter().map(|b| b.right.to_f64() - b.left.to_f64()).sum();
        assert!((total - 0.7).abs() < 1e-12);
    }

    #[test]
    fn signed_digit_text() {
        assert_eq!(SignedDigit::plus(3).to_string(), "+1/3");
        assert_eq!("-1/2".parse::<SignedDigit>().unwrap(), SignedDigit::FIXED);
        assert!("-1/1".parse::<SignedDigit>().is_err());
        assert!("+2/3".parse::<SignedDigit>().is_err());
    }
}
