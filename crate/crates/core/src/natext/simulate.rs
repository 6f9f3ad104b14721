use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Points per independently seeded chunk.
pub const CHUNK: usize = 1 << 16;

/// Simulated orbit points of the natural extension in double precision.
#[derive(Clone, Debug, Serialize)]
pub struct PointCloud {
    pub alpha: f64,
    pub burn_in: usize,
    pub seed: u64,
    pub chunk_size: usize,
    /// Orbits restarted after landing exactly on `x = 1`.
    pub restarts: usize,
    #[serde(skip)]
    pub points: Vec<(f64, f64)>,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn write_csv(&self, mut w: impl Write) -> io::Result<()> {
        writeln!(w, "# alpha={} seed={} burn_in={} chunk_size={}", self.alpha, self.seed, self.burn_in, self.chunk_size)?;
        writeln!(w, "x,y")?;
        for (x, y) in &self.points {
            writeln!(w, "{x},{y}")?;
        }
        Ok(())
    }

    /// Binary PPM (`P6`) raster of the cloud on `[x_min, 1] x [y_min, y_max]`:
    /// linear binning, grey level proportional to count / max count, dark on
    /// white. Points outside the window are dropped.
    pub fn write_ppm(&self, mut w: impl Write, size: usize, y_min: f64, y_max: f64) -> io::Result<()> {
        let x_min = self.points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min).min(1.0);
        let x_min = if x_min.is_finite() { x_min } else { 0.0 };
        let mut counts = vec![0u32; size * size];
        for &(x, y) in &self.points {
            if !(x_min..=1.0).contains(&x) || !(y_min..=y_max).contains(&y) {
                continue;
            }
            let i = (((x - x_min) / (1.0 - x_min).max(f64::MIN_POSITIVE)) * size as f64) as usize;
            let j = (((y_max - y) / (y_max - y_min)) * size as f64) as usize;
            counts[j.min(size - 1) * size + i.min(size - 1)] += 1;
        }
        let max = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
        write!(w, "P6\n{size} {size}\n255\n")?;
        let mut buf = Vec::with_capacity(size * size * 3);
        for c in counts {
            let v = 255 - ((c as f64 / max) * 255.0).round() as u8;
            buf.extend_from_slice(&[v, v, v]);
        }
        w.write_all(&buf)
    }
}

/// State near the fixed point is carried as `c = 1 - x` and `v = 1 + y`,
/// which the branch `(-1, 2)` maps as `c -> c/(1-c)`, `v -> v/(1+v)` without
/// cancellation.
#[derive(Clone, Copy)]
struct State {
    x: f64,
    c: f64,
    y: f64,
    v: f64,
}

impl State {
    fn new(x: f64, y: f64) -> Self {
        State { x, c: 1.0 - x, y, v: 1.0 + y }
    }

    fn step(&mut self, alpha: f64) {
        if self.x >= 1.0 / (1.0 + alpha) {
            self.c /= 1.0 - self.c;
            self.x = 1.0 - self.c;
            self.v = if self.v.is_infinite() { 1.0 } else { self.v / (1.0 + self.v) };
            self.y = self.v - 1.0;
            return;
        }
        let r = 1.0 / self.x;
        let n = r.floor();
        let g = r - n;
        let (eps, d) = if g <= alpha {
            self.x = 1.0 - g;
            self.c = g;
            (-1.0, n + 1.0)
        } else {
            self.x = g;
            self.c = 1.0 - g;
            (1.0, n)
        };
        self.y = if self.y.is_infinite() { 0.0 } else { eps / (d + self.y) };
        self.v = 1.0 + self.y;
    }
}

fn random_start(rng: &mut ChaCha8Rng, lower: f64) -> State {
    let x = lower + (1.0 - lower) * rng.random::<f64>();
    let y = -1.0 + 2.0 * rng.random::<f64>();
    State::new(x, y)
}

fn run_chunk(alpha: f64, count: usize, burn_in: usize, seed: u64, chunk: u64, start: Option<(f64, f64)>) -> (Vec<(f64, f64)>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let lower = alpha.min(1.0 - alpha);
    let mut s = match start {
        Some((x, y)) if chunk == 0 => State::new(x, y),
        _ => random_start(&mut rng, lower),
    };
    let mut restarts = 0;
    let mut out = Vec::with_capacity(count);
    let mut left_burn = burn_in;
    while out.len() < count {
        s.step(alpha);
        if s.c <= 0.0 || !s.x.is_finite() || !s.y.is_finite() {
            restarts += 1;
            s = random_start(&mut rng, lower);
            left_burn = burn_in;
            continue;
        }
        if left_burn > 0 {
            left_burn -= 1;
        } else {
            out.push((s.x, s.y));
        }
    }
    (out, restarts)
}

/// Iterates the natural extension map in double precision for any
/// `alpha` in `(0, 1)`. The work is split into chunks of [`CHUNK`] points,
/// each with its own random start (or `start` for the first chunk), stream
/// of the seeded generator, and burn-in; the merged cloud does not depend on
/// the number of threads.
pub fn simulate(alpha: f64, n_points: usize, burn_in: usize, seed: u64, start: Option<(f64, f64)>) -> Result<PointCloud> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha = {alpha} is not in (0, 1)")));
    }
    let chunks = n_points.div_ceil(CHUNK);
    let parts: Vec<(Vec<(f64, f64)>, usize)> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let count = CHUNK.min(n_points - i * CHUNK);
            run_chunk(alpha, count, burn_in, seed, i as u64, start)
        })
        .collect();
    let mut points = Vec::with_capacity(n_points);
    let mut restarts = 0;
    for (p, r) in parts {
        points.extend(p);
        restarts += r;
    }
    if restarts > 0 {
        log::warn!("natural extension simulation: {restarts} orbit(s) hit x = 1 and were restarted");
    }
    Ok(PointCloud { alpha, burn_in, seed, chunk_size: CHUNK, restarts, points })
}
