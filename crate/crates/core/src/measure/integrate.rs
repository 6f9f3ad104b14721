use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::Alpha;
use crate::numerics::{dilog_ext, ExactReal, Float};

use super::density::{density, golden, BasisTerm, PiecewiseDensity, TermKind};

/// A measure value: finite, or the marker for infinite mass near 1.
#[derive(Clone, Debug, PartialEq)]
pub enum IntegralValue {
    Finite(Float),
    Infinite,
}

impl IntegralValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            IntegralValue::Finite(v) => v.to_f64(),
            IntegralValue::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, IntegralValue::Infinite)
    }

    pub fn finite(&self) -> Option<&Float> {
        match self {
            IntegralValue::Finite(v) => Some(v),
            IntegralValue::Infinite => None,
        }
    }
}

impl fmt::Display for IntegralValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegralValue::Finite(v) => f.write_str(&v.to_decimal(30)),
            IntegralValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for IntegralValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn max(a: &ExactReal, b: &ExactReal) -> Result<ExactReal> {
    Ok(if a.lt(b)? { b.clone() } else { a.clone() })
}

fn min(a: &ExactReal, b: &ExactReal) -> Result<ExactReal> {
    Ok(if a.lt(b)? { a.clone() } else { b.clone() })
}

/// Calls `visit(term, lo, hi)` for every term on every piece overlapping
/// `[a, b]`.
fn for_each_overlap(
    f: &PiecewiseDensity,
    a: &ExactReal,
    b: &ExactReal,
    mut visit: impl FnMut(&BasisTerm, &ExactReal, &ExactReal) -> Result<()>,
) -> Result<()> {
    let lower = f.alpha().lower();
    if a.lt(lower)? || b.lt(a)? || ExactReal::one().lt(b)? {
        return Err(Error::domain(format!("need {lower} <= a <= b <= 1, got [{a}, {b}]")));
    }
    for p in f.pieces() {
        let lo = max(&p.left, a)?;
        let hi = min(&p.right, b)?;
        if !lo.lt(&hi)? {
            continue;
        }
        for t in &p.terms {
            visit(t, &lo, &hi)?;
        }
    }
    Ok(())
}

/// `int_a^b f(x) dx` from the logarithmic antiderivatives of the basis
/// terms, evaluated to about `prec` bits. Returns
/// [`IntegralValue::Infinite`] when `b = 1` meets a `1/(1-x)` term.
pub fn integrate(f: &PiecewiseDensity, a: &ExactReal, b: &ExactReal, prec: u32) -> Result<IntegralValue> {
    let one = ExactReal::one();
    let mut sum = Float::from_i64(0, prec);
    let mut infinite = false;
    for_each_overlap(f, a, b, |t, lo, hi| {
        // each antiderivative difference is the log of a positive ratio
        let ratio = match &t.kind {
            TermKind::Recip => hi.div(lo)?,
            TermKind::RecipOnePlus => one.add(hi).div(&one.add(lo))?,
            TermKind::RecipOneMinus => {
                if hi.is_exact_one() || hi.cmp(&one)?.is_eq() {
                    infinite = true;
                    return Ok(());
                }
                one.sub(lo).div(&one.sub(hi))?
            }
            TermKind::RecipShift(c) => hi.add(c).div(&lo.add(c))?,
        };
        let v = ratio.to_float(prec)?.ln()?;
        sum = &sum + &(&t.coeff.to_float(prec)? * &v);
        Ok(())
    })?;
    Ok(if infinite { IntegralValue::Infinite } else { IntegralValue::Finite(sum) })
}

/// Antiderivative of `log(x) * kind(x)`.
fn log_moment(kind: &TermKind, x: &Float) -> Result<Float> {
    let p = x.prec();
    let one = Float::from_i64(1, p);
    let lx = x.ln()?;
    Ok(match kind {
        TermKind::Recip => &(&lx * &lx) / &Float::from_i64(2, p),
        TermKind::RecipOnePlus => &(&lx * &(&one + x).ln()?) + &dilog_ext(&-x)?,
        TermKind::RecipOneMinus => (&one - x).dilog()?,
        TermKind::RecipShift(c) => {
            let c = c.to_float(p)?;
            let r = x / &c;
            &(&lx * &(&one + &r).ln()?) + &dilog_ext(&-&r)?
        }
    })
}

/// Krengel entropy `-2 int log(x) f_alpha(x) dx` over `I_alpha` in closed
/// form (logarithms and dilogarithms), to about `prec` bits.
pub fn krengel_entropy(alpha: &Alpha, prec: u32) -> Result<Float> {
    let f = density(alpha)?;
    let w = prec + 32;
    let mut sum = Float::from_i64(0, w);
    let lower = alpha.lower().clone();
    for_each_overlap(&f, &lower, &ExactReal::one(), |t, lo, hi| {
        let (lo, hi) = (lo.to_float(w)?, hi.to_float(w)?);
        let d = &log_moment(&t.kind, &hi)? - &log_moment(&t.kind, &lo)?;
        sum = &sum + &(&t.coeff.to_float(w)? * &d);
        Ok(())
    })?;
    Ok((&sum * &Float::from_i64(-2, w)).with_prec(prec))
}

// 15-point Kronrod nodes on [0, 1] (symmetric) with Kronrod and embedded
// 7-point Gauss weights.
#[allow(clippy::excessive_precision)]
const XK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XK[i];
        let s = f(c - dx) + f(c + dx);
        k += WK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) quadrature of `f` on `[a, b]` to absolute
/// tolerance `tol`. Returns the value and the summed error estimate. The
/// nodes are interior, so integrable endpoint singularities are tolerated.
pub fn gauss_kronrod(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let mut stack = vec![(a, b, tol, 0u32)];
    let (mut total, mut err) = (0.0, 0.0);
    while let Some((l, r, t, depth)) = stack.pop() {
        let (v, e) = gk15(&f, l, r);
        if e <= t || depth >= 48 || r - l <= f64::EPSILON * l.abs().max(1.0) {
            total += v;
            err += e;
        } else {
            let m = 0.5 * (l + r);
            stack.push((m, r, 0.5 * t, depth + 1));
            stack.push((l, m, 0.5 * t, depth + 1));
        }
    }
    (total, err)
}

/// Krengel entropy by quadrature of `-2 log(x) f_alpha(x)`, piece by piece.
/// Near `x = 1` the `1/(1-x)` pole is cancelled by `log x`.
pub fn entropy_quadrature(alpha: &Alpha, tol: f64) -> Result<(f64, f64)> {
    let f = density(alpha)?;
    let (mut v, mut e) = (0.0, 0.0);
    for p in f.pieces() {
        let terms: Vec<(f64, TermKind)> = p.terms.iter().map(|t| (t.coeff.to_f64(), t.kind.clone())).collect();
        let shifts: Vec<f64> = terms
            .iter()
            .map(|(_, k)| if let TermKind::RecipShift(c) = k { c.to_f64() } else { 0.0 })
            .collect();
        let integrand = |x: f64| {
            let lx = x.ln();
            let mut s = 0.0;
            for ((c, k), sh) in terms.iter().zip(&shifts) {
                s += c * match k {
                    TermKind::Recip => lx / x,
                    TermKind::RecipOnePlus => lx / (1.0 + x),
                    // log(x)/(1-x) -> -1 as x -> 1
                    TermKind::RecipOneMinus => {
                        let u = 1.0 - x;
                        if u < 1e-8 {
                            -1.0 - u / 2.0
                        } else {
                            (-u).ln_1p() / u
                        }
                    }
                    TermKind::RecipShift(_) => lx / (x + sh),
                };
            }
            -2.0 * s
        };
        let (pv, pe) = gauss_kronrod(integrand, p.left.to_f64(), p.right.to_f64(), tol / f.pieces().len() as f64);
        v += pv;
        e += pe;
    }
    Ok((v, e))
}

/// Entropy by both routes, with the expected value `pi^2/6`.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyReport {
    pub alpha: String,
    pub closed_form: String,
    pub quadrature: f64,
    pub quadrature_error: f64,
    pub pi_squared_over_6: String,
    /// `alpha` lies above `g`, where `pi^2/6` is conjectured but not proved.
    pub conjectural: bool,
}

pub fn entropy_report(alpha: &Alpha, prec: u32) -> Result<EntropyReport> {
    let closed = krengel_entropy(alpha, prec)?;
    let (q, qe) = entropy_quadrature(alpha, 1e-12)?;
    let pi = Float::pi(prec);
    let target = &(&pi * &pi) / &Float::from_i64(6, prec);
    let digits = (prec as f64 * std::f64::consts::LOG10_2) as usize;
    Ok(EntropyReport {
        alpha: alpha.to_string(),
        closed_form: closed.to_decimal(digits.saturating_sub(8).max(10)),
        quadrature: q,
        quadrature_error: qe,
        pi_squared_over_6: target.to_decimal(digits.saturating_sub(8).max(10)),
        conjectural: golden().lt(alpha.value())?,
    })
}
