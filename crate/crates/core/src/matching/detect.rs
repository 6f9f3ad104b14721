use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{self, Alpha};
use crate::numerics::{Dyadic, ExactReal, QuadraticSurd};

/// How orbit points are compared.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatchMode {
    /// Equality of exact values (rational or surd `alpha` only).
    Exact,
    /// `|x - y| <= tolerance`, certified by interval arithmetic.
    Numerical { tolerance: f64 },
}

/// Outcome of [`detect_matching`].
#[derive(Clone, Debug, Serialize)]
pub struct MatchingResult {
    pub matched: bool,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub common_value: Option<ExactReal>,
    /// Largest orbit index computed on either side.
    pub steps_used: usize,
    pub mode: MatchMode,
    /// Both orbits first meet at the fixed point 1.
    pub at_fixed_point: bool,
}

impl MatchingResult {
    pub fn exponents(&self) -> Option<(usize, usize)> {
        self.matched.then_some((self.m, self.n))
    }

    /// Recomputes `T^M(alpha)` and `T^N(1 - alpha)` and checks them against
    /// each other and the stored common value. Exact mode only.
    pub fn verify(&self, alpha: &Alpha) -> Result<bool> {
        if !self.matched {
            return Ok(false);
        }
        if self.mode != MatchMode::Exact {
            return Err(Error::domain("only exact results can be re-verified"));
        }
        let a = maps::orbit(alpha.value(), alpha, self.m)?;
        let b = maps::orbit(alpha.one_minus(), alpha, self.n)?;
        let (x, y) = (a.point(self.m), b.point(self.n));
        Ok(x == y && self.common_value.as_ref() == Some(x))
    }
}

fn better(cand: (usize, usize), best: Option<(usize, usize)>) -> bool {
    match best {
        None => true,
        Some((m, n)) => (cand.0 + cand.1, cand.0) < (m + n, m),
    }
}

struct Side {
    points: Vec<ExactReal>,
    approx: Vec<f64>,
    keys: HashMap<QuadraticSurd, usize>,
    cur: ExactReal,
}

impl Side {
    fn new(x: &ExactReal) -> Self {
        Side { points: Vec::new(), approx: Vec::new(), keys: HashMap::new(), cur: x.clone() }
    }

    fn push(&mut self, x: ExactReal, exact: bool) {
        if exact {
            if let Some(k) = x.key() {
                let idx = self.points.len();
                self.keys.entry(k).or_insert(idx);
            }
        }
        self.approx.push(x.to_f64());
        self.points.push(x);
    }
}

/// Searches for `T^M(alpha) = T^N(1 - alpha)`.
///
/// Both orbits are extended one step at a time; after each extension every
/// new cross pair is tested. The reported pair minimises `M + N`, then `M`.
/// Once a pair with sum `s` is known the orbits are still extended to index
/// `s`, which is enough to rule out any smaller pair. A `max_steps` budget
/// bounds the largest index on either side.
pub fn detect_matching(alpha: &Alpha, max_steps: usize, mode: MatchMode) -> Result<MatchingResult> {
    if max_steps == 0 {
        return Err(Error::domain("max_steps must be at least 1"));
    }
    let exact = match mode {
        MatchMode::Exact => {
            if !alpha.is_exact() {
                return Err(Error::domain("exact matching needs a rational or quadratic alpha"));
            }
            true
        }
        MatchMode::Numerical { tolerance } => {
            if !(tolerance >= 0.0 && tolerance.is_finite()) {
                return Err(Error::domain("tolerance must be finite and non-negative"));
            }
            false
        }
    };
    let (tol_real, tol_f64) = match mode {
        MatchMode::Numerical { tolerance } => {
            (Some(Dyadic::from_f64(tolerance).ok_or_else(|| Error::domain("bad tolerance"))?), tolerance)
        }
        MatchMode::Exact => (None, 0.0),
    };
    let equal = |x: &ExactReal, y: &ExactReal| -> Result<bool> {
        match &tol_real {
            None => Ok(x == y),
            Some(t) => within(&x.sub(y), t),
        }
    };
    // the f64 prefilter only has to be loose enough not to drop true matches
    let slack = 2.0 * tol_f64 + 1e-9;

    let mut a = Side::new(alpha.value());
    let mut b = Side::new(alpha.one_minus());
    let mut best: Option<(usize, usize)> = None;
    let mut steps_used = 0;
    for k in 0..=max_steps {
        if let Some((m, n)) = best {
            if k > m + n {
                break;
            }
        }
        steps_used = k;
        for side in [&mut a, &mut b] {
            let x = if k == 0 {
                side.cur.clone()
            } else {
                let (_, next) = maps::step_unchecked(&side.cur, alpha).map_err(|e| e.at_step(k - 1))?;
                snap_to_one(next, &tol_real, tol_f64)?
            };
            side.cur = x.clone();
            side.push(x, exact);
        }
        let mut cands: Vec<(usize, usize)> = Vec::new();
        if exact {
            if let Some(&j) = a.points[k].key().and_then(|key| b.keys.get(&key)) {
                cands.push((k, j));
            }
            if let Some(&i) = b.points[k].key().and_then(|key| a.keys.get(&key)) {
                cands.push((i, k));
            }
        } else {
            let (xa, xb) = (a.approx[k], b.approx[k]);
            if let Some(j) = first_close(&b, xa, slack, |y| equal(&a.points[k], y))? {
                cands.push((k, j));
            }
            if let Some(i) = first_close(&a, xb, slack, |y| equal(y, &b.points[k]))? {
                cands.push((i, k));
            }
        }
        for c in cands {
            if better(c, best) {
                best = Some(c);
            }
        }
    }
    Ok(match best {
        Some((m, n)) => {
            let v = a.points[m].clone();
            let at_fixed_point = match &tol_real {
                None => v.is_exact_one(),
                Some(_) => v.is_exact_one() || b.points[n].is_exact_one(),
            };
            MatchingResult { matched: true, m, n, common_value: Some(v), steps_used, mode, at_fixed_point }
        }
        None => MatchingResult {
            matched: false,
            m: 0,
            n: 0,
            common_value: None,
            steps_used,
            mode,
            at_fixed_point: false,
        },
    })
}

fn first_close(
    side: &Side,
    x: f64,
    slack: f64,
    mut equal: impl FnMut(&ExactReal) -> Result<bool>,
) -> Result<Option<usize>> {
    for (j, &y) in side.approx.iter().enumerate() {
        if (x - y).abs() <= slack && equal(&side.points[j])? {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// `|x| <= tol`; adaptive values are decided from enclosures, so an exact
/// zero needs no sign query.
fn within(x: &ExactReal, tol: &Dyadic) -> Result<bool> {
    match x {
        ExactReal::Adaptive(a) => a.within(tol),
        _ => x.to_adaptive(Default::default()).within(tol),
    }
}

/// In numerical mode an approximate point within the tolerance of 1 is
/// replaced by the fixed point itself.
fn snap_to_one(x: ExactReal, tol: &Option<Dyadic>, tol_f64: f64) -> Result<ExactReal> {
    let (Some(t), ExactReal::Adaptive(_)) = (tol, &x) else {
        return Ok(x);
    };
    if x.to_f64() < 1.0 - 2.0 * tol_f64 - 1e-9 {
        return Ok(x);
    }
    if within(&ExactReal::one().sub(&x), t)? {
        Ok(ExactReal::one())
    } else {
        Ok(x)
    }
}
