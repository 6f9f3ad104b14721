//! Acceptance suite. Each test prints one `PASS`/`FAIL` line and asserts it.
//! Run with `cargo test -p cfdyn-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use cfdyn_core::cf::{convergents, r_word, rcf_expand, semiregular_expand, tower_value, SemiRegularWord};
use cfdyn_core::maps::{self, Alpha};
use cfdyn_core::matching::{
    check_entry_times, detect_matching, enumerate_windows, entry_times, matching_window, scan_parameters, MatchMode,
    PseudoCenter, Side,
};
use cfdyn_core::measure::{
    asymptotics, density, entropy_quadrature, integrate, interior_grid, krengel_entropy, transfer_apply,
    wandering_constant,
};
use cfdyn_core::natext::{explicit_domain, measure_check, membership_fraction, random_rectangles, simulate};
use cfdyn_core::numerics::{ExactReal, Float, PrecisionPolicy, QuadraticSurd};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    println!("[{}] criterion {id:>2}: {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn rat(n: i64, d: i64) -> ExactReal {
    ExactReal::frac(n, d)
}

fn alpha(n: i64, d: i64) -> Alpha {
    Alpha::frac(n, d).unwrap()
}

fn pi2_6() -> f64 {
    std::f64::consts::PI * std::f64::consts::PI / 6.0
}

fn golden() -> ExactReal {
    ExactReal::golden()
}

#[test]
fn c01_matching_below_one_half() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for k in 1..=25 {
        let a = alpha(k, 52);
        let r = detect_matching(&a, 50, MatchMode::Exact).unwrap();
        if r.exponents() != Some((1, 2)) || !r.verify(&a).unwrap() {
            bad.push(format!("{k}/52 -> ({}, {})", r.m, r.n));
        }
    }
    let dt = t.elapsed();
    let ok = bad.is_empty() && dt < Duration::from_secs(1);
    report(1, "matching (1,2) below 1/2", ok, &format!("25 alphas k/52, mismatches {bad:?}, {dt:.2?} (< 1 s)"));
}

#[test]
fn c02_window_exponents() {
    let t = Instant::now();
    let windows = enumerate_windows(20).unwrap();
    let mut checked = 0;
    let mut bad = Vec::new();
    for w in &windows {
        for s in w.interior_samples(3).unwrap() {
            let a = Alpha::new(ExactReal::from_rational(s.clone())).unwrap();
            let r = detect_matching(&a, 200, MatchMode::Exact).unwrap();
            checked += 1;
            if r.exponents() != Some((w.m, w.n)) {
                bad.push(format!("{s} in J_{}^{}: ({}, {}) vs ({}, {})", w.center, w.side, r.m, r.n, w.m, w.n));
            }
        }
    }
    let one = matching_window(&PseudoCenter::frac(1, 1).unwrap(), Side::R).unwrap();
    let half_l = matching_window(&PseudoCenter::frac(1, 2).unwrap(), Side::L).unwrap();
    let half_r = matching_window(&PseudoCenter::frac(1, 2).unwrap(), Side::R).unwrap();
    let s = |x: &QuadraticSurd| x.to_string();
    let g = QuadraticSurd::golden();
    let half = QuadraticSurd::from_rational(&num_rational::BigRational::new(1.into(), 2.into()));
    let two_thirds = QuadraticSurd::from_rational(&num_rational::BigRational::new(2.into(), 3.into()));
    let inv_root2 = QuadraticSurd::new(0.into(), 1.into(), 2, 2.into()).unwrap();
    let anchors = (s(&one.left), s(&one.right), one.m, one.n) == (s(&half), s(&g), 2, 1)
        && (s(&half_l.left), s(&half_l.right), half_l.m, half_l.n) == (s(&g), s(&two_thirds), 2, 2)
        && (s(&half_r.left), s(&half_r.right), half_r.m, half_r.n) == (s(&two_thirds), s(&inv_root2), 3, 1);
    let dt = t.elapsed();
    let ok = bad.is_empty() && anchors && dt < Duration::from_secs(30);
    report(
        2,
        "window exponents",
        ok,
        &format!(
            "{} windows, {checked} samples, mismatches {:?}, anchors {}, {dt:.2?} (< 30 s)",
            windows.len(),
            bad,
            if anchors { "ok" } else { "WRONG" }
        ),
    );
}

#[test]
fn c03_almost_everywhere_matching() {
    let t = Instant::now();
    let r = scan_parameters(10_000, 200, 1e-12, 2024).unwrap();
    let dt = t.elapsed();
    let ok = r.matched_fraction >= 0.99 && dt < Duration::from_secs(60);
    report(
        3,
        "matched fraction of uniform scan",
        ok,
        &format!(
            "{} / {} matched = {:.4} (>= 0.99), {} via the fixed point, {} undecidable, {dt:.2?} (< 60 s)",
            r.matched, r.samples, r.matched_fraction, r.fixed_point_matches, r.undecidable
        ),
    );
}

#[test]
fn c04_density_fixed_point() {
    let t = Instant::now();
    let mut worst = 0.0f64;
    let mut points = 0;
    for (n, d) in [(1, 5), (3, 10), (9, 20), (11, 20), (16, 25), (7, 10)] {
        let a = alpha(n, d);
        let f = density(&a).unwrap();
        for x in interior_grid(&f, 200).unwrap() {
            let fx = f.eval(&x).unwrap();
            let px = transfer_apply(&f, &a, &x).unwrap();
            let err = if fx == px { 0.0 } else { ((px.to_f64() - fx.to_f64()) / fx.to_f64()).abs() };
            worst = worst.max(err);
            points += 1;
        }
    }
    let dt = t.elapsed();
    let ok = worst <= 1e-10 && dt < Duration::from_secs(60);
    report(4, "transfer operator fixed point", ok, &format!("{points} points, max rel err {worst:e} (<= 1e-10), {dt:.2?} (< 60 s)"));
}

#[test]
fn c05_krengel_entropy() {
    let t = Instant::now();
    let target = pi2_6();
    let g_minus = golden().sub(&rat(1, 100));
    let alphas = [rat(1, 10), rat(1, 4), rat(2, 5), rat(1, 2), rat(11, 20), g_minus];
    let (mut worst_closed, mut worst_agree) = (0.0f64, 0.0f64);
    for a in alphas {
        let a = Alpha::new(a).unwrap();
        let h = krengel_entropy(&a, 128).unwrap().to_f64();
        let (q, _) = entropy_quadrature(&a, 1e-12).unwrap();
        worst_closed = worst_closed.max((h - target).abs());
        worst_agree = worst_agree.max((h - q).abs());
    }
    // conjectural range (g, sqrt(2)/2): reported, not gating
    let (q7, _) = entropy_quadrature(&alpha(7, 10), 1e-12).unwrap();
    let conj = (q7 - target).abs();
    let dt = t.elapsed();
    let ok = worst_closed <= 1e-8 && worst_agree <= 1e-8 && dt < Duration::from_secs(60);
    report(
        5,
        "Krengel entropy pi^2/6",
        ok,
        &format!(
            "closed form err {worst_closed:e} (<= 1e-8), quadrature agreement {worst_agree:e} (<= 1e-8), \
             alpha = 7/10 quadrature err {conj:e} ({} 1e-6, non-blocking), {dt:.2?} (< 60 s)",
            if conj <= 1e-6 { "<=" } else { ">" }
        ),
    );
}

#[test]
fn c06_finite_window_mass() {
    let mut lines = Vec::new();
    let mut ok = true;
    for (n, d) in [(1, 10), (3, 10), (9, 20)] {
        let a = alpha(n, d);
        let f = density(&a).unwrap();
        let hi = rat(d, d + n);
        let v = integrate(&f, a.value(), &hi, 128).unwrap();
        let expect = Float::from_rational(&num_rational::BigRational::new((2 * d + n).into(), d.into()), 128).ln().unwrap();
        let err = (v.finite().unwrap() - &expect).to_f64().abs();
        ok &= err <= 1e-10;
        lines.push(format!("{n}/{d}: {:.12} vs log(2+alpha) {:.12}, err {err:e}", v.to_f64(), expect.to_f64()));
    }
    report(6, "mass of [alpha, 1/(1+alpha)] equals log(2+alpha)", ok, &format!("{} (<= 1e-10)", lines.join("; ")));
}

#[test]
fn c07_wandering_constant() {
    let mut bad = Vec::new();
    for k in 1..=20 {
        // k/29 <= 20/29 < sqrt(2)/2
        let a = alpha(k, 29);
        let c = wandering_constant(&a).unwrap();
        if !c.is_exact_one() {
            bad.push(format!("{k}/29 -> {c}"));
        }
    }
    let asy = asymptotics(&alpha(16, 25)).unwrap();
    let strings = asy.wandering == "log n" && asy.return_sequence == "n/log n";
    report(
        7,
        "wandering constant",
        bad.is_empty() && strings,
        &format!("20 alphas k/29, c != 1 at {bad:?}, w_n ~ {}, a_n ~ {}", asy.wandering, asy.return_sequence),
    );
}

#[test]
fn c08_natural_extension() {
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for (i, (n, d)) in [(3, 10), (11, 20), (16, 25), (69, 100)].into_iter().enumerate() {
        let a = alpha(n, d);
        let region = explicit_domain(&a).unwrap();
        let cloud = simulate(n as f64 / d as f64, 1_000_000, 1000, 17 + i as u64, None).unwrap();
        let member = membership_fraction(&region, &cloud, 1e-12);

        let f = density(&a).unwrap();
        let mut fiber_err = 0.0f64;
        for x in interior_grid(&f, 100).unwrap() {
            let (u, v) = (region.fiber_integral(&x).unwrap(), f.eval(&x).unwrap());
            if u != v {
                fiber_err = fiber_err.max((u.to_f64() - v.to_f64()).abs());
            }
        }

        let rects = random_rectangles(&region, 20, 99 + i as u64);
        let mc = measure_check(&a, &region, &rects, 1_000_000, 5 + i as u64).unwrap();
        let worst_z = mc.rectangles.iter().map(|r| r.z.abs()).fold(0.0, f64::max);

        ok &= member >= 0.999 && fiber_err <= 1e-12 && mc.all_within_3_sigma;
        lines.push(format!("{n}/{d}: membership {member:.5}, fiber err {fiber_err:e}, max |z| {worst_z:.2}"));
    }
    let dt = t.elapsed();
    ok &= dt < Duration::from_secs(300);
    report(
        8,
        "natural extension",
        ok,
        &format!("{} (membership >= 0.999, fiber <= 1e-12, |z| <= 3), {dt:.2?} (< 5 min)", lines.join("; ")),
    );
}

#[test]
fn c09_rational_termination() {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut count = 0;
    for (n, d) in [(1, 5), (3, 10), (11, 20), (16, 25), (7, 10)] {
        let a = alpha(n, d);
        for q in 1..=60i64 {
            for p in 1..=q {
                if num_integer::Integer::gcd(&p, &q) != 1 {
                    continue;
                }
                let x = rat(p, q);
                if !a.contains(&x).unwrap() {
                    continue;
                }
                count += 1;
                let o = maps::orbit(&x, &a, q as usize).unwrap();
                if o.hit_one.is_none() {
                    bad.push(format!("{p}/{q} under {n}/{d}"));
                }
            }
        }
    }
    let dt = t.elapsed();
    let ok = bad.is_empty() && dt < Duration::from_secs(30);
    report(9, "rationals reach 1 within q steps", ok, &format!("{count} orbits, failures {bad:?}, {dt:.2?} (< 30 s)"));
}

#[test]
fn c10_renyi_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut checks = 0;
    let mut bad = Vec::new();
    for _ in 0..500 {
        let q: i64 = rng.random_range(2..=10_000);
        let p: i64 = rng.random_range(1..q);
        let x = rat(p, q);
        let word = rcf_expand(&x, 0).unwrap();
        // the Renyi orbit of a rational reaches 1; check every k up to there and one beyond
        let mut y = x.clone();
        let mut k = 0u64;
        loop {
            checks += 1;
            if r_word(&word, k).unwrap().value().unwrap() != y {
                bad.push(format!("{x}, k = {k}"));
            }
            if y.is_exact_one() {
                break;
            }
            y = maps::renyi(&y).unwrap();
            k += 1;
        }
    }
    report(10, "symbolic Renyi action", bad.is_empty(), &format!("500 rationals, {checks} (x, k) pairs, mismatches {bad:?}"));
}

fn random_surd_above_half(rng: &mut ChaCha8Rng) -> ExactReal {
    loop {
        let d = [2u64, 3, 5, 6, 7, 10, 11, 13][rng.random_range(0..8)];
        let r: i64 = rng.random_range(2..200);
        let q: i64 = rng.random_range(1..60) * if rng.random::<bool>() { 1 } else { -1 };
        let target: f64 = rng.random_range(0.5..1.0);
        let p = (target * r as f64 - q as f64 * (d as f64).sqrt()).round() as i64;
        let s = QuadraticSurd::new(BigInt::from(p), BigInt::from(q), d, BigInt::from(r)).unwrap();
        if s.is_rational() {
            continue;
        }
        let v = s.to_f64();
        if v > 0.5 && v < 1.0 {
            return ExactReal::from_surd(s);
        }
    }
}

#[test]
fn c11_entry_times() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut found_m, mut found_k) = (0, 0);
    let mut bad = Vec::new();
    for _ in 0..200 {
        let a = Alpha::new(random_surd_above_half(&mut rng)).unwrap();
        let times = entry_times(&a, 500).unwrap();
        found_m += times.m.is_some() as usize;
        found_k += times.k.is_some() as usize;
        if let Err(e) = check_entry_times(&a, &times) {
            bad.push(format!("{a}: {e}"));
        }
    }
    report(
        11,
        "entry times in the arithmetic sets",
        bad.is_empty(),
        &format!("200 quadratic alphas, m found {found_m}, k found {found_k}, violations {bad:?}"),
    );
}

#[test]
fn c12_expansion_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut bad = Vec::new();
    let mut identities = 0;
    for _ in 0..200 {
        let ad: i64 = rng.random_range(3..200);
        let a = alpha(rng.random_range(1..ad), ad);
        let lower = a.lower().to_f64();
        let q: i64 = rng.random_range(2..2000);
        let p = ((lower + (1.0 - lower) * rng.random::<f64>()) * q as f64).ceil().min(q as f64) as i64;
        let x = rat(p, q);
        let n = 12;
        let orbit = maps::orbit(&x, &a, n).unwrap();
        let word = semiregular_expand(&x, &a, n).unwrap();
        for k in 1..=n {
            identities += 1;
            let prefix = SemiRegularWord(word.0[..k].to_vec());
            if tower_value(&prefix, orbit.point(k)).unwrap() != x {
                bad.push(format!("x = {x}, alpha = {a}, k = {k}"));
            }
        }
    }

    let budget = 500;
    let policy = PrecisionPolicy::default();
    let mut slow = Vec::new();
    for _ in 0..100 {
        let a = alpha(rng.random_range(1..100), 100);
        let lower = a.lower().to_f64();
        let xf = lower + (1.0 - lower) * rng.random_range(0.001..0.999);
        let x = ExactReal::from_f64(xf, policy).unwrap();
        // a double is a dyadic rational; its orbit can land exactly on a
        // digit boundary, past which no further digit is decidable
        let word = match semiregular_expand(&x, &a, budget) {
            Err(cfdyn_core::Error::UndecidableAt { step, .. }) => semiregular_expand(&x, &a, step).unwrap(),
            w => w.unwrap(),
        };
        let hit = convergents(&word).iter().any(|c| {
            c.value().is_some_and(|v| (ExactReal::from_rational(v).to_f64() - xf).abs() < 1e-6)
        });
        if !hit {
            slow.push(format!("{xf} under {a}"));
        }
    }
    report(
        12,
        "expansion identities and convergence",
        bad.is_empty() && slow.is_empty(),
        &format!(
            "{identities} exact truncation identities, failures {bad:?}; 100 double x, \
             not within 1e-6 after {budget} convergents: {slow:?}"
        ),
    );
}
