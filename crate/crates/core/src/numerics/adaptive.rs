//! Lazily refined reals: an expression DAG over exact leaves whose
//! enclosures are recomputed at doubled precision until a query resolves.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::ball::Ball;
use super::dyadic::Dyadic;
use super::surd::QuadraticSurd;
use crate::error::{Error, Result};

/// Starting precision and escalation cap (bits) for adaptive queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    pub cap_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { initial_bits: 128, cap_bits: 4096 }
    }
}

impl PrecisionPolicy {
    pub const DEFAULT_CAP: u32 = 4096;

    /// Policy starting at `bits`; the cap is raised to `bits` if needed.
    pub fn with_initial(bits: u32) -> Self {
        let bits = bits.max(16);
        PrecisionPolicy { initial_bits: bits, cap_bits: Self::DEFAULT_CAP.max(bits) }
    }

    /// Successive precisions tried by a query.
    pub fn ladder(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap_bits;
        let mut next = Some(self.initial_bits.min(cap));
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= cap { None } else { Some((cur * 2).min(cap)) };
            Some(cur)
        })
    }
}

#[derive(Debug)]
enum Leaf {
    Rational(BigRational),
    Surd(QuadraticSurd),
    Dyadic(Dyadic),
}

#[derive(Debug)]
enum Op {
    Leaf(Leaf),
    Add(Arc<Node>, Arc<Node>),
    Sub(Arc<Node>, Arc<Node>),
    Mul(Arc<Node>, Arc<Node>),
    Div(Arc<Node>, Arc<Node>),
    Neg(Arc<Node>),
}

#[derive(Debug)]
struct Node {
    op: Op,
    cache: Mutex<Option<(u32, Ball)>>,
}

impl Node {
    fn new(op: Op) -> Arc<Node> {
        Arc::new(Node { op, cache: Mutex::new(None) })
    }

    fn cached(&self, prec: u32) -> Option<Ball> {
        let c = self.cache.lock().expect("cache lock");
        match &*c {
            Some((p, b)) if *p >= prec => Some(b.clone()),
            _ => None,
        }
    }

    fn store(&self, prec: u32, ball: Ball) {
        let mut c = self.cache.lock().expect("cache lock");
        if c.as_ref().is_none_or(|(p, _)| *p < prec) {
            *c = Some((prec, ball));
        }
    }

    fn children(&self) -> Vec<&Arc<Node>> {
        match &self.op {
            Op::Leaf(_) => vec![],
            Op::Neg(a) => vec![a],
            Op::Add(a, b) | Op::Sub(a, b) | Op::Mul(a, b) | Op::Div(a, b) => vec![a, b],
        }
    }
}

impl Drop for Node {
    // Long orbit chains would otherwise be dropped recursively.
    fn drop(&mut self) {
        let mut stack = Vec::new();
        take_children(&mut self.op, &mut stack);
        while let Some(child) = stack.pop() {
            if let Some(mut inner) = Arc::into_inner(child) {
                take_children(&mut inner.op, &mut stack);
            }
        }
    }
}

fn take_children(op: &mut Op, out: &mut Vec<Arc<Node>>) {
    match std::mem::replace(op, Op::Leaf(Leaf::Dyadic(Dyadic::zero()))) {
        Op::Leaf(_) => {}
        Op::Neg(a) => out.push(a),
        Op::Add(a, b) | Op::Sub(a, b) | Op::Mul(a, b) | Op::Div(a, b) => {
            out.push(a);
            out.push(b);
        }
    }
}

/// Evaluates `root` at `prec` without recursion; `None` if some divisor
/// enclosure still contains zero at this precision.
fn evaluate(root: &Arc<Node>, prec: u32) -> Option<Ball> {
    if let Some(b) = root.cached(prec) {
        return Some(b);
    }
    let mut stack: Vec<(&Arc<Node>, bool)> = vec![(root, false)];
    while let Some((node, expanded)) = stack.pop() {
        if node.cached(prec).is_some() {
            continue;
        }
        if !expanded {
            stack.push((node, true));
            for c in node.children() {
                if c.cached(prec).is_none() {
                    stack.push((c, false));
                }
            }
            continue;
        }
        let get = |n: &Arc<Node>| n.cached(prec).expect("child evaluated first");
        let w = prec + 16;
        let ball = match &node.op {
            Op::Leaf(Leaf::Rational(q)) => Ball::from_rational(q, w),
            Op::Leaf(Leaf::Surd(s)) => Ball::from_surd(s, w),
            Op::Leaf(Leaf::Dyadic(d)) => Ball::exact(d.clone()),
            Op::Add(a, b) => get(a).add(&get(b), w),
            Op::Sub(a, b) => get(a).sub(&get(b), w),
            Op::Mul(a, b) => get(a).mul(&get(b), w),
            Op::Neg(a) => get(a).neg(),
            Op::Div(a, b) => get(a).div(&get(b), w)?,
        };
        node.store(prec, ball);
    }
    root.cached(prec)
}

/// A real number known through certified enclosures of any requested width.
#[derive(Clone)]
pub struct AdaptiveReal {
    node: Arc<Node>,
    policy: PrecisionPolicy,
}

impl fmt::Debug for AdaptiveReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdaptiveReal(~{})", self.to_f64())
    }
}

impl AdaptiveReal {
    pub fn from_rational(q: BigRational, policy: PrecisionPolicy) -> Self {
        AdaptiveReal { node: Node::new(Op::Leaf(Leaf::Rational(q))), policy }
    }

    pub fn from_surd(s: QuadraticSurd, policy: PrecisionPolicy) -> Self {
        AdaptiveReal { node: Node::new(Op::Leaf(Leaf::Surd(s))), policy }
    }

    pub fn from_dyadic(d: Dyadic, policy: PrecisionPolicy) -> Self {
        AdaptiveReal { node: Node::new(Op::Leaf(Leaf::Dyadic(d))), policy }
    }

    pub fn from_f64(x: f64, policy: PrecisionPolicy) -> Result<Self> {
        let d = Dyadic::from_f64(x).ok_or_else(|| Error::domain("non-finite double"))?;
        Ok(Self::from_dyadic(d, policy))
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    pub fn with_policy(&self, policy: PrecisionPolicy) -> Self {
        AdaptiveReal { node: self.node.clone(), policy }
    }

    fn combine(&self, o: &Self, f: fn(Arc<Node>, Arc<Node>) -> Op) -> Self {
        let policy = PrecisionPolicy {
            initial_bits: self.policy.initial_bits.max(o.policy.initial_bits),
            cap_bits: self.policy.cap_bits.max(o.policy.cap_bits),
        };
        AdaptiveReal { node: Node::new(f(self.node.clone(), o.node.clone())), policy }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, Op::Add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, Op::Sub)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.combine(o, Op::Mul)
    }

    /// Division is lazy; a zero divisor surfaces as an undecidable query.
    pub fn div(&self, o: &Self) -> Self {
        self.combine(o, Op::Div)
    }

    pub fn neg(&self) -> Self {
        AdaptiveReal { node: Node::new(Op::Neg(self.node.clone())), policy: self.policy }
    }

    pub fn ptr_eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.node, &o.node)
    }

    /// Enclosure at `prec` bits, if every divisor is bounded away from zero.
    pub fn ball(&self, prec: u32) -> Option<Ball> {
        evaluate(&self.node, prec)
    }

    /// Runs `decide` on enclosures of increasing precision until it answers.
    pub fn refine<T>(&self, mut decide: impl FnMut(&Ball) -> Option<T>) -> Result<T> {
        let mut last = self.policy.initial_bits;
        for prec in self.policy.ladder() {
            last = prec;
            if let Some(b) = self.ball(prec) {
                if let Some(t) = decide(&b) {
                    return Ok(t);
                }
            }
            if prec < self.policy.cap_bits {
                log::debug!("adaptive real: escalating precision beyond {prec} bits");
            }
        }
        Err(Error::Undecidable { bits: last })
    }

    pub fn signum(&self) -> Result<Ordering> {
        self.refine(|b| b.sign())
    }

    pub fn floor(&self) -> Result<BigInt> {
        self.refine(|b| b.floor())
    }

    /// `Ok(true)` if `|self| <= tol`, `Ok(false)` if `|self| > tol`.
    pub fn within(&self, tol: &Dyadic) -> Result<bool> {
        self.refine(|b| {
            if b.within(tol) {
                Some(true)
            } else if b.outside(tol) {
                Some(false)
            } else {
                None
            }
        })
    }

    pub fn to_f64(&self) -> f64 {
        for prec in self.policy.ladder() {
            if let Some(b) = self.ball(prec) {
                if b.rad_is_below(60) || b.mid.magnitude().zip(b.rad.magnitude()).is_some_and(|(m, r)| m - r > 60) {
                    return b.to_f64();
                }
            }
        }
        self.ball(self.policy.cap_bits).map_or(f64::NAN, |b| b.to_f64())
    }

    /// Decimal approximation with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let bits = ((digits as f64) * 3.33) as u32 + 16;
        let prec = bits.max(self.policy.initial_bits).min(self.policy.cap_bits);
        match self.ball(prec) {
            Some(b) => b.mid.to_decimal(digits),
            None => "nan".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> AdaptiveReal {
        AdaptiveReal::from_rational(BigRational::new(n.into(), d.into()), PrecisionPolicy::default())
    }

    #[test]
    fn ladder_doubles_to_cap() {
        let p = PrecisionPolicy { initial_bits: 128, cap_bits: 600 };
        assert_eq!(p.ladder().collect::<Vec<_>>(), vec![128, 256, 512, 600]);
    }

    #[test]
    fn decides_sign_and_floor() {
        let x = rat(1, 3).add(&rat(1, 3)).add(&rat(1, 3));
        assert_eq!(x.floor(), Err(Error::Undecidable { bits: 4096 }));
        let y = rat(7, 3).div(&rat(1, 2));
        assert_eq!(y.floor().unwrap(), BigInt::from(4));
        assert_eq!(rat(-1, 7).signum().unwrap(), Ordering::Less);
        let zero = rat(1, 3).sub(&rat(1, 3));
        assert!(zero.signum().is_err());
    }

    #[test]
    fn division_by_zero_is_undecidable() {
        let z = rat(1, 3).sub(&rat(1, 3));
        assert!(rat(1, 1).div(&z).floor().unwrap_err().is_undecidable());
    }

    #[test]
    fn deep_chains_do_not_overflow_the_stack() {
        let mut x = rat(1, 2);
        for _ in 0..100_000 {
            x = x.add(&rat(1, 1_000_000));
        }
        assert_eq!(x.floor().unwrap(), BigInt::from(0));
        assert!((x.to_f64() - 0.6).abs() < 1e-9);
    }

    #[test]
    fn surd_leaf_close_to_rational_needs_escalation() {
        // (1 + sqrt 2)^20 is within 2^-50 of an integer
        let s = QuadraticSurd::new(22619537.into(), 15994428.into(), 2, 1.into()).unwrap();
        let x = AdaptiveReal::from_surd(s, PrecisionPolicy { initial_bits: 32, cap_bits: 4096 });
        assert_eq!(x.floor().unwrap(), BigInt::from(45239073));
    }
}
