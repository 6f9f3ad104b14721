//! Invariant densities of `T_alpha`, the transfer operator, closed-form
//! integrals, Krengel entropy and the wandering-rate constant.
//!
//! Densities are kept unnormalised: the measure is infinite because of the
//! indifferent fixed point at 1, where every density has a `1/(1-x)` pole.

mod asymptotics;
mod density;
mod integrate;
mod transfer;

pub use asymptotics::{
    asymptotics, asymptotics_of, birkhoff_demo, default_window, singular_coefficient, wandering_constant,
    Asymptotics, BirkhoffStats,
};
pub use density::{density, regime, BasisTerm, Piece, PiecewiseDensity, Regime, TermKind};
pub use integrate::{
    entropy_quadrature, entropy_report, gauss_kronrod, integrate, krengel_entropy, EntropyReport, IntegralValue,
};
pub use transfer::{preimages, transfer_apply, transfer_apply_with};

/// `n` points strictly inside `I_alpha`, evenly spaced with a small
/// irrational-looking offset; points that land on a breakpoint are moved to
/// the midpoint between their neighbours.
pub fn interior_grid(f: &PiecewiseDensity, n: usize) -> crate::Result<Vec<crate::ExactReal>> {
    use crate::numerics::ExactReal;
    let lo = f.alpha().lower().clone();
    let width = ExactReal::one().sub(&lo);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // (i + 1/2 + 1/997) / n keeps clear of simple rationals
        let t = ExactReal::frac((997 * 2 * i as i64) + 997 + 2, 2 * 997 * n as i64);
        let mut x = lo.add(&width.mul(&t));
        if matches!(f.locate(&x), Err(crate::Error::BreakpointHit)) {
            let h = ExactReal::frac(1, 4 * 997 * n as i64);
            x = x.add(&width.mul(&h));
        }
        out.push(x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::Alpha;
    use crate::numerics::ExactReal;

    fn a(n: i64, d: i64) -> Alpha {
        Alpha::frac(n, d).unwrap()
    }

    #[test]
    fn density_examples() {
        let f = density(&a(1, 4)).unwrap();
        assert_eq!(f.eval(&ExactReal::frac(4, 5)).unwrap(), ExactReal::frac(50, 9));
        assert_eq!(f.eval(&ExactReal::frac(3, 10)).unwrap(), ExactReal::frac(10, 3));
        let f = density(&a(11, 20)).unwrap();
        let x = ExactReal::frac(7, 10);
        assert_eq!(f.eval(&x).unwrap(), ExactReal::frac(100, 21));
        assert!(density(&a(3, 4)).is_err());
        assert_eq!(f.eval(&ExactReal::frac(11, 20)), Err(crate::Error::BreakpointHit));
    }

    #[test]
    fn transfer_fixed_point_exact() {
        for (n, d) in [(3, 10), (9, 20), (11, 20), (16, 25), (7, 10)] {
            let al = a(n, d);
            let f = density(&al).unwrap();
            for x in interior_grid(&f, 12).unwrap() {
                let p = transfer_apply(&f, &al, &x).unwrap();
                assert_eq!(p, f.eval(&x).unwrap(), "alpha = {n}/{d}, x = {x}");
            }
        }
    }

    #[test]
    fn near_one_branches() {
        let al = a(3, 10);
        // every branch whose cylinder reaches above 1 - alpha is onto near 1
        let pre = preimages(&al, &ExactReal::frac(19, 20)).unwrap();
        let ys: Vec<ExactReal> = pre.into_iter().map(|(y, _)| y).collect();
        let expect = [(1, 1, 39), (1, 2, 59), (-1, 2, 21), (-1, 3, 41), (-1, 4, 61)];
        assert_eq!(ys.len(), expect.len());
        for (_, _, den) in expect {
            assert!(ys.contains(&ExactReal::frac(20, den)));
        }
    }

    #[test]
    fn log_two_plus_alpha() {
        let al = a(3, 10);
        let f = density(&al).unwrap();
        let y = ExactReal::one().add(al.value()).recip().unwrap();
        let v = integrate(&f, al.value(), &y, 128).unwrap();
        assert!((v.to_f64() - 2.3f64.ln()).abs() < 1e-15);
        assert!(integrate(&f, &ExactReal::frac(7, 10), &ExactReal::one(), 64).unwrap().is_infinite());
        assert_eq!(integrate(&f, &y, &y, 64).unwrap().to_f64(), 0.0);
    }

    #[test]
    fn entropy_small_alpha() {
        let h = krengel_entropy(&a(3, 10), 96).unwrap().to_f64();
        let target = std::f64::consts::PI.powi(2) / 6.0;
        assert!((h - target).abs() < 1e-12, "{h}");
        let (q, _) = entropy_quadrature(&a(3, 10), 1e-12).unwrap();
        assert!((q - target).abs() < 1e-9, "{q}");
    }

    #[test]
    fn wandering() {
        assert!(wandering_constant(&a(3, 10)).unwrap().is_exact_one());
        assert!(wandering_constant(&a(16, 25)).unwrap().is_exact_one());
        let f = density(&a(1, 4)).unwrap().scale(&ExactReal::int(2));
        assert_eq!(singular_coefficient(&f).unwrap(), ExactReal::int(2));
        let s = asymptotics(&a(3, 5)).unwrap();
        assert_eq!((s.wandering.as_str(), s.return_sequence.as_str()), ("log n", "n/log n"));
    }

    #[test]
    fn birkhoff_smoke() {
        let s = birkhoff_demo(&a(3, 10), 10, 50, 1).unwrap();
        assert!(s.mean.is_finite() && s.median.is_finite());
        assert!((s.target.unwrap() - 2.3f64.ln()).abs() < 1e-12);
    }
}
