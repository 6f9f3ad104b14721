use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::Alpha;

use super::region::Region;

/// A finite axis-parallel rectangle `[x0, x1] x [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.x0..=self.x1).contains(&x) && (self.y0..=self.y1).contains(&y)
    }

    /// `nu(A) = int int dx dy / (1 + x y)^2` in closed form.
    pub fn nu(&self) -> f64 {
        let f = |x: f64| ((1.0 + self.y1 * x) / (1.0 + self.y0 * x)).ln();
        f(self.x1) - f(self.x0)
    }
}

/// One rectangle's Monte Carlo estimates.
#[derive(Clone, Debug, Serialize)]
pub struct RectCheck {
    pub rect: Rect,
    pub nu_exact: f64,
    pub nu_mc: f64,
    pub nu_preimage_mc: f64,
    /// Standard error of the paired difference `nu(A) - nu(T^-1 A)`.
    pub std_error: f64,
    pub z: f64,
    pub within_3_sigma: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureCheckReport {
    pub alpha: String,
    pub samples: usize,
    pub seed: u64,
    pub rectangles: Vec<RectCheck>,
    pub all_within_3_sigma: bool,
}

/// `(x, y) -> (T x, eps/(d + y))` in double precision.
pub fn ne_map_f64(x: f64, y: f64, alpha: f64) -> (f64, f64) {
    let (eps, d, tx) = crate::maps::step_f64(x, alpha);
    let ty = if y.is_infinite() { 0.0 } else { eps as f64 / (d as f64 + y) };
    (tx, ty)
}

/// Monte Carlo test of `nu(A) = nu(T^-1 A)` for rectangles `A` inside the
/// domain. Proposal: `x` uniform on `I_alpha` and `y = -1 + u/(1-u)` with
/// `u` uniform, importance-weighted to `dx dy / (1 + x y)^2`. Both
/// indicators are evaluated on the same samples.
pub fn measure_check(
    alpha: &Alpha,
    domain: &Region,
    rects: &[Rect],
    mc_samples: usize,
    seed: u64,
) -> Result<MeasureCheckReport> {
    if mc_samples < 2 {
        return Err(Error::domain("mc_samples must be at least 2"));
    }
    let a = alpha.to_f64();
    let lo = alpha.lower().to_f64();
    let k = rects.len();
    let mut sum_a = vec![0.0; k];
    let mut sum_p = vec![0.0; k];
    let mut sum_d = vec![0.0; k];
    let mut sum_d2 = vec![0.0; k];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..mc_samples {
        let x = lo + (1.0 - lo) * rng.random::<f64>();
        let u: f64 = rng.random();
        let t = u / (1.0 - u);
        let y = t - 1.0;
        if !domain.contains_f64(x, y, 0.0) {
            continue;
        }
        let w = (1.0 - lo) * (1.0 + t) * (1.0 + t) / ((1.0 + x * y) * (1.0 + x * y));
        let (tx, ty) = ne_map_f64(x, y, a);
        for (i, r) in rects.iter().enumerate() {
            let ia = if r.contains(x, y) { w } else { 0.0 };
            let ip = if r.contains(tx, ty) { w } else { 0.0 };
            sum_a[i] += ia;
            sum_p[i] += ip;
            sum_d[i] += ia - ip;
            sum_d2[i] += (ia - ip) * (ia - ip);
        }
    }
    let n = mc_samples as f64;
    let rectangles: Vec<RectCheck> = rects
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mean_d = sum_d[i] / n;
            let var = (sum_d2[i] / n - mean_d * mean_d).max(0.0);
            let se = (var / (n - 1.0)).sqrt();
            let z = if se > 0.0 { mean_d / se } else if mean_d == 0.0 { 0.0 } else { f64::INFINITY };
            RectCheck {
                rect: *r,
                nu_exact: r.nu(),
                nu_mc: sum_a[i] / n,
                nu_preimage_mc: sum_p[i] / n,
                std_error: se,
                z,
                within_3_sigma: z.abs() <= 3.0,
            }
        })
        .collect();
    let all = rectangles.iter().all(|r| r.within_3_sigma);
    Ok(MeasureCheckReport { alpha: alpha.to_string(), samples: mc_samples, seed, rectangles, all_within_3_sigma: all })
}

/// `k` random rectangles inside boxes of the region, with heights capped so
/// that unbounded boxes give finite rectangles.
pub fn random_rectangles(domain: &Region, k: usize, seed: u64) -> Vec<Rect> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let boxes: Vec<[f64; 4]> = domain.boxes.iter().map(|b| b.to_f64()).collect();
    (0..k)
        .map(|_| {
            let [xl, xh, yl, yh] = boxes[rng.random_range(0..boxes.len())];
            let yh = yh.min(yl + 3.0);
            let mut pick = |l: f64, h: f64| {
                let (p, q) = (rng.random::<f64>(), rng.random::<f64>());
                let (p, q) = if p < q { (p, q) } else { (q, p) };
                (l + (h - l) * p, l + (h - l) * q)
            };
            let (x0, x1) = pick(xl, xh);
            let (y0, y1) = pick(yl, yh);
            Rect { x0, x1, y0, y1 }
        })
        .collect()
}
