//! Matching: the orbits of `alpha` and `1 - alpha` meeting after finitely
//! many steps, `T^M(alpha) = T^N(1 - alpha)`.
//!
//! Below `1/2` every parameter matches with `(M, N) = (1, 2)`. Above it the
//! parameter line is tiled, up to a null set, by windows `J_a^L`, `J_a^R`
//! attached to rationals `a` whose quadratic interval `I_a` is maximal.

mod detect;
mod entry;
mod scan;
mod windows;

pub use detect::{detect_matching, MatchMode, MatchingResult};
pub use entry::{check_entry_times, entry_time_sets, entry_times, EntryTimes};
pub use scan::{sample_alphas, scan_parameters, HistogramEntry, ScanReport};
pub use windows::{
    enumerate_windows, is_maximal, matching_window, quadratic_interval, simplest_between, windows_csv,
    MatchingWindow, PseudoCenter, Side,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::Alpha;
    use crate::numerics::ExactReal;

    fn exact(n: i64, d: i64) -> MatchingResult {
        detect_matching(&Alpha::frac(n, d).unwrap(), 100, MatchMode::Exact).unwrap()
    }

    #[test]
    fn detection_examples() {
        let r = exact(3, 10);
        assert_eq!(r.exponents(), Some((1, 2)));
        assert_eq!(r.common_value, Some(ExactReal::frac(1, 3)));
        let r = exact(11, 20);
        assert_eq!(r.exponents(), Some((2, 1)));
        assert_eq!(r.common_value, Some(ExactReal::frac(7, 9)));
        let r = exact(16, 25);
        assert_eq!(r.exponents(), Some((2, 2)));
        assert_eq!(r.common_value, Some(ExactReal::frac(5, 7)));
        assert!(r.verify(&Alpha::frac(16, 25).unwrap()).unwrap());
        assert!(!r.at_fixed_point);
    }

    #[test]
    fn numerical_agrees_with_exact() {
        let alpha = Alpha::frac(16, 25).unwrap();
        let r = detect_matching(&alpha, 100, MatchMode::Numerical { tolerance: 1e-12 }).unwrap();
        assert_eq!(r.exponents(), Some((2, 2)));
        let a: Alpha = "0.64".parse().unwrap();
        let r = detect_matching(&a, 100, MatchMode::Numerical { tolerance: 1e-12 }).unwrap();
        assert_eq!(r.exponents(), Some((2, 2)));
        assert!(detect_matching(&a, 100, MatchMode::Exact).is_err());
    }

    #[test]
    fn surd_parameter_in_window() {
        // (sqrt 2)/2 - 1/50 lies in J_{1/2}^R = (2/3, 1/sqrt 2)
        let a: Alpha = "(-1+25*sqrt(2))/50".parse().unwrap();
        let r = detect_matching(&a, 100, MatchMode::Exact).unwrap();
        assert_eq!(r.exponents(), Some((3, 1)));
        assert!(r.verify(&a).unwrap());
    }

    #[test]
    fn entry_time_examples() {
        let t = entry_times(&Alpha::frac(11, 20).unwrap(), 50).unwrap();
        assert_eq!(t.m, Some(0));
        check_entry_times(&Alpha::frac(11, 20).unwrap(), &t).unwrap();
        // 16/25 -> 7/16 -> 5/7 -> 3/5 and G(3/5) = 2/3 > 16/25
        let a = Alpha::frac(16, 25).unwrap();
        let t = entry_times(&a, 500).unwrap();
        assert_eq!(t.m, Some(3));
        check_entry_times(&a, &t).unwrap();
        assert!(entry_times(&Alpha::frac(3, 10).unwrap(), 50).is_err());
    }

    #[test]
    fn maximality_examples() {
        assert!(is_maximal(&PseudoCenter::frac(1, 2).unwrap()));
        assert!(is_maximal(&PseudoCenter::frac(1, 1).unwrap()));
    }

    #[test]
    fn scan_small() {
        let r = scan_parameters(200, 200, 1e-12, 7).unwrap();
        assert_eq!(r.samples, 200);
        assert!(r.matched_fraction > 0.9);
        let below: Vec<_> = sample_alphas(200, 7).into_iter().filter(|a| a < &crate::numerics::ratio(1, 2)).collect();
        assert!(!below.is_empty());
    }
}
