//! The natural extension `(x, y) -> (T_alpha(x), eps_1(x)/(d_1(x) + y))`,
//! which preserves `dx dy / (1 + x y)^2` on its domain `D_alpha`.
//!
//! Projecting that measure to the first coordinate integrates each vertical
//! section, `int dy / (1 + x y)^2 = (1/x)(1/(1 + a x) - 1/(1 + b x))` on
//! `[a, b]`, and gives the invariant density of `T_alpha`.

mod check;
mod point;
mod region;
mod simulate;

pub use check::{measure_check, ne_map_f64, random_rectangles, MeasureCheckReport, Rect, RectCheck};
pub use point::{ne_inverse, ne_inverse_in, ne_map, PlanePoint};
pub use region::{explicit_domain, Region, RegionBox, YValue};
pub use simulate::{simulate, PointCloud, CHUNK};

/// Fraction of cloud points inside the region, with boxes enlarged by `tol`.
pub fn membership_fraction(region: &Region, cloud: &PointCloud, tol: f64) -> f64 {
    if cloud.is_empty() {
        return 1.0;
    }
    let inside = cloud.points.iter().filter(|&&(x, y)| region.contains_f64(x, y, tol)).count();
    inside as f64 / cloud.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::Alpha;
    use crate::measure::{density, interior_grid};
    use crate::numerics::ExactReal;

    fn q(n: i64, d: i64) -> ExactReal {
        ExactReal::frac(n, d)
    }

    #[test]
    fn map_examples() {
        let a = Alpha::frac(3, 10).unwrap();
        let p = ne_map(&PlanePoint::new(q(7, 10), q(0, 1)), &a).unwrap();
        assert_eq!(p, PlanePoint::new(q(3, 7), q(1, 1)));
        assert_eq!(ne_inverse(&p, &a).unwrap(), PlanePoint::new(q(7, 10), q(0, 1)));
        let p = ne_map(&PlanePoint::new(q(9, 20), q(0, 1)), &a).unwrap();
        assert_eq!(p.y, YValue::Finite(q(-1, 3)));
        let p = ne_map(&PlanePoint::new(q(1, 1), q(1, 2)), &a).unwrap();
        assert_eq!(p, PlanePoint::new(q(1, 1), q(-2, 5)));
        assert_eq!(ne_inverse(&PlanePoint::new(q(1, 1), q(-1, 3)), &a).unwrap(), PlanePoint::new(q(1, 1), q(1, 1)));
        let p = ne_map(&PlanePoint::at_infinity(q(1, 3)), &a).unwrap();
        assert_eq!(p.y, YValue::Finite(q(0, 1)));
    }

    #[test]
    fn domain_examples() {
        let a = Alpha::frac(1, 4).unwrap();
        let r = explicit_domain(&a).unwrap();
        assert_eq!(r.boxes.len(), 3);
        assert_eq!(r.fiber_integral(&q(9, 10)).unwrap(), q(200, 19));
        assert!(r.contains(&q(3, 10), &YValue::Inf).unwrap());
        assert!(!r.contains(&q(1, 2), &YValue::Finite(q(-1, 2))).unwrap());
    }

    #[test]
    fn fibers_reproduce_density() {
        for (n, d) in [(1, 5), (3, 10), (9, 20), (11, 20), (16, 25), (69, 100)] {
            let a = Alpha::frac(n, d).unwrap();
            let f = density(&a).unwrap();
            let r = explicit_domain(&a).unwrap();
            for x in interior_grid(&f, 25).unwrap() {
                assert_eq!(r.fiber_integral(&x).unwrap(), f.eval(&x).unwrap(), "alpha = {n}/{d}, x = {x}");
            }
        }
    }

    #[test]
    fn simulation_small() {
        let c = simulate(0.3, 5000, 100, 3, None).unwrap();
        assert_eq!(c.len(), 5000);
        let r = explicit_domain(&Alpha::frac(3, 10).unwrap()).unwrap();
        assert!(membership_fraction(&r, &c, 1e-12) > 0.999);
        assert!(simulate(0.3, 0, 10, 3, None).unwrap().is_empty());
        let again = simulate(0.3, 5000, 100, 3, None).unwrap();
        assert_eq!(c.points, again.points);
    }
}
