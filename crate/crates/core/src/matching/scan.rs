use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::detect::{detect_matching, MatchMode};
use crate::error::{Error, Result};
use crate::maps::Alpha;

/// Number of `alpha` with a given exponent pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HistogramEntry {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub samples: usize,
    pub max_steps: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub matched: usize,
    pub matched_fraction: f64,
    /// Matches whose common value is the fixed point 1.
    pub fixed_point_matches: usize,
    /// Samples where a comparison could not be decided.
    pub undecidable: usize,
    pub histogram: Vec<HistogramEntry>,
    pub unmatched: Vec<f64>,
}

const SAMPLE_BITS: u32 = 53;

/// `n` seeded parameters, uniform on the dyadic grid `k / 2^53` in `(0, 1)`.
pub fn sample_alphas(n: usize, seed: u64) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = BigInt::from(1u64) << SAMPLE_BITS;
    (0..n)
        .map(|_| loop {
            let k = rng.random::<u64>() >> (64 - SAMPLE_BITS);
            if k != 0 {
                break BigRational::new(k.into(), den.clone());
            }
        })
        .collect()
}

enum Outcome {
    Matched { m: usize, n: usize, fixed: bool },
    Unmatched(f64),
    Undecidable(f64),
}

/// Runs numerical matching detection on seeded uniform samples.
pub fn scan_parameters(n_samples: usize, max_steps: usize, tolerance: f64, seed: u64) -> Result<ScanReport> {
    if n_samples == 0 {
        return Err(Error::domain("n_samples must be at least 1"));
    }
    let alphas = sample_alphas(n_samples, seed);
    let mode = MatchMode::Numerical { tolerance };
    let outcomes: Vec<Outcome> = alphas
        .into_par_iter()
        .map(|a| -> Result<Outcome> {
            let alpha = Alpha::new(a.into())?;
            match detect_matching(&alpha, max_steps, mode) {
                Ok(r) if r.matched => Ok(Outcome::Matched { m: r.m, n: r.n, fixed: r.at_fixed_point }),
                Ok(_) => Ok(Outcome::Unmatched(alpha.to_f64())),
                Err(e) if e.is_undecidable() => Ok(Outcome::Undecidable(alpha.to_f64())),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut hist: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let (mut matched, mut fixed_point_matches, mut undecidable) = (0, 0, 0);
    let mut unmatched = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Matched { m, n, fixed } => {
                matched += 1;
                fixed_point_matches += fixed as usize;
                *hist.entry((m, n)).or_default() += 1;
            }
            Outcome::Unmatched(a) => unmatched.push(a),
            Outcome::Undecidable(a) => {
                undecidable += 1;
                unmatched.push(a);
            }
        }
    }
    let mut histogram: Vec<HistogramEntry> =
        hist.into_iter().map(|((m, n), count)| HistogramEntry { m, n, count }).collect();
    histogram.sort_by(|x, y| y.count.cmp(&x.count).then((x.m, x.n).cmp(&(y.m, y.n))));
    Ok(ScanReport {
        samples: n_samples,
        max_steps,
        tolerance,
        seed,
        matched,
        matched_fraction: matched as f64 / n_samples as f64,
        fixed_point_matches,
        undecidable,
        histogram,
        unmatched,
    })
}
