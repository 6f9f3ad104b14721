use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{step_f64, Alpha};
use crate::numerics::ExactReal;

use super::density::{PiecewiseDensity, TermKind};
use super::integrate::integrate;

/// Coefficient of the `1/(1-x)` singularity of `f` at `x = 1`.
///
/// Every other basis term is bounded near 1, so this is `lim H(x)` for
/// `f(x) = ((x - 2)/(x - 1)) H(x)`.
pub fn singular_coefficient(f: &PiecewiseDensity) -> Result<ExactReal> {
    let last = f.pieces().last().ok_or_else(|| Error::Internal("empty density".into()))?;
    if !last.right.is_exact_one() {
        return Err(Error::Internal("last piece does not end at 1".into()));
    }
    let mut c = ExactReal::zero();
    for t in &last.terms {
        match &t.kind {
            TermKind::RecipOneMinus => c = c.add(&t.coeff),
            TermKind::RecipShift(s) if s.add(&ExactReal::one()).is_exact_zero() => {
                // 1/(x - 1) = -1/(1 - x)
                c = c.sub(&t.coeff);
            }
            _ => {}
        }
    }
    Ok(c)
}

/// The constant `c_alpha` in `w_n ~ c_alpha log n`.
pub fn wandering_constant(alpha: &Alpha) -> Result<ExactReal> {
    singular_coefficient(&super::density::density(alpha)?)
}

/// Growth of the wandering rate and of the return sequence.
#[derive(Clone, Debug, Serialize)]
pub struct Asymptotics {
    pub constant: ExactReal,
    pub wandering: String,
    pub return_sequence: String,
}

pub fn asymptotics_of(f: &PiecewiseDensity) -> Result<Asymptotics> {
    let c = singular_coefficient(f)?;
    let (w, r) = if c.is_exact_one() {
        ("log n".to_string(), "n/log n".to_string())
    } else {
        (format!("{c}*log n"), format!("n/({c}*log n)"))
    };
    Ok(Asymptotics { constant: c, wandering: w, return_sequence: r })
}

pub fn asymptotics(alpha: &Alpha) -> Result<Asymptotics> {
    asymptotics_of(&super::density::density(alpha)?)
}

/// Normalised Birkhoff sums `(log n / n) sum_{k<n} 1_Y(T^k x)` over random
/// starts, for a window `Y = [a, b]` bounded away from 1.
#[derive(Clone, Debug, Serialize)]
pub struct BirkhoffStats {
    pub n: usize,
    pub samples: usize,
    pub window: (f64, f64),
    pub mean: f64,
    pub std_dev: f64,
    pub median: f64,
    /// `mu_alpha(Y)`, when a closed-form density is available.
    pub target: Option<f64>,
}

/// Default window `Y = [m, 1/(1 + m)]` with `m = min(alpha, 1 - alpha)`.
pub fn default_window(alpha: &Alpha) -> Result<(ExactReal, ExactReal)> {
    let m = alpha.lower().clone();
    let r = ExactReal::one().add(&m).recip()?;
    Ok((m, r))
}

pub fn birkhoff_demo(alpha: &Alpha, n: usize, samples: usize, seed: u64) -> Result<BirkhoffStats> {
    if n < 10 {
        return Err(Error::domain("birkhoff_demo needs n >= 10"));
    }
    if samples == 0 {
        return Err(Error::domain("samples must be at least 1"));
    }
    let (ya, yb) = default_window(alpha)?;
    let target = match super::density::density(alpha) {
        Ok(f) => Some(integrate(&f, &ya, &yb, 64)?.to_f64()),
        Err(Error::Domain(_)) => None,
        Err(e) => return Err(e),
    };
    let (a, lo) = (alpha.to_f64(), alpha.lower().to_f64());
    let (ya, yb) = (ya.to_f64(), yb.to_f64());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm = (n as f64).ln() / n as f64;
    let mut vals: Vec<f64> = (0..samples)
        .map(|_| {
            let mut x = lo + (1.0 - lo) * rng.random::<f64>();
            let mut hits = 0usize;
            for _ in 0..n {
                if (ya..=yb).contains(&x) {
                    hits += 1;
                }
                x = step_f64(x, a).2;
            }
            hits as f64 * norm
        })
        .collect();
    let mean = vals.iter().sum::<f64>() / samples as f64;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / samples as f64;
    vals.sort_by(f64::total_cmp);
    let median = vals[samples / 2];
    Ok(BirkhoffStats { n, samples, window: (ya, yb), mean, std_dev: var.sqrt(), median, target })
}
