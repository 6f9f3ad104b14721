use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::maps::{branches, Alpha, BranchInfo};
use crate::numerics::ExactReal;

use super::density::PiecewiseDensity;

fn in_cylinder(y: &ExactReal, b: &BranchInfo) -> Result<bool> {
    let l = y.cmp(&b.left)?;
    let r = y.cmp(&b.right)?;
    let left_ok = l == Ordering::Greater || (l == Ordering::Equal && b.left_closed);
    let right_ok = r == Ordering::Less || (r == Ordering::Equal && b.right_closed);
    Ok(left_ok && right_ok)
}

/// Preimages `y` of `x` under `T_alpha` with weights `|1/T'(y)| = y^2`.
pub fn preimages(alpha: &Alpha, x: &ExactReal) -> Result<Vec<(ExactReal, ExactReal)>> {
    if !alpha.contains(x)? {
        return Err(Error::domain(format!("x = {x} is outside I_alpha")));
    }
    let mut out = Vec::new();
    for b in branches(alpha)? {
        // T(y) = eps (1/y - d) = x  <=>  y = 1/(d + eps x)
        let d = ExactReal::int(b.digit.d() as i64);
        let y = if b.digit.is_flip() { d.sub(x) } else { d.add(x) }.recip()?;
        if in_cylinder(&y, &b)? {
            let w = y.mul(&y);
            out.push((y, w));
        }
    }
    Ok(out)
}

/// `(P f)(x) = sum over preimages y of f(y) y^2` for an arbitrary `f`.
pub fn transfer_apply_with(
    alpha: &Alpha,
    x: &ExactReal,
    mut f: impl FnMut(&ExactReal) -> Result<ExactReal>,
) -> Result<ExactReal> {
    let mut s = ExactReal::zero();
    for (y, w) in preimages(alpha, x)? {
        s = s.add(&f(&y)?.mul(&w));
    }
    Ok(s)
}

/// Transfer operator of `T_alpha` applied to a piecewise density at `x`.
/// Exact for rational and quadratic inputs. A preimage on a breakpoint of
/// `f` reports [`Error::BreakpointHit`].
pub fn transfer_apply(f: &PiecewiseDensity, alpha: &Alpha, x: &ExactReal) -> Result<ExactReal> {
    f.locate(x)?;
    transfer_apply_with(alpha, x, |y| f.eval(y))
}
