use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::Alpha;
use crate::numerics::{ExactReal, QuadraticSurd};

/// The four shapes of summands in the invariant densities.
#[derive(Clone, Debug, PartialEq)]
pub enum TermKind {
    /// `1/x`
    Recip,
    /// `1/(1 + x)`
    RecipOnePlus,
    /// `1/(1 - x)`
    RecipOneMinus,
    /// `1/(x + c)`
    RecipShift(ExactReal),
}

impl TermKind {
    fn name(&self) -> &'static str {
        match self {
            TermKind::Recip => "recip",
            TermKind::RecipOnePlus => "recip_one_plus",
            TermKind::RecipOneMinus => "recip_one_minus",
            TermKind::RecipShift(_) => "recip_shift",
        }
    }

    pub fn eval(&self, x: &ExactReal) -> Result<ExactReal> {
        let one = ExactReal::one();
        match self {
            TermKind::Recip => x.recip(),
            TermKind::RecipOnePlus => one.add(x).recip(),
            TermKind::RecipOneMinus => one.sub(x).recip(),
            TermKind::RecipShift(c) => x.add(c).recip(),
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            TermKind::Recip => 1.0 / x,
            TermKind::RecipOnePlus => 1.0 / (1.0 + x),
            TermKind::RecipOneMinus => 1.0 / (1.0 - x),
            TermKind::RecipShift(c) => 1.0 / (x + c.to_f64()),
        }
    }
}

/// `coeff * kind(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisTerm {
    pub kind: TermKind,
    pub coeff: ExactReal,
}

impl BasisTerm {
    pub fn new(kind: TermKind, coeff: ExactReal) -> Self {
        BasisTerm { kind, coeff }
    }

    fn unit(kind: TermKind) -> Self {
        BasisTerm { kind, coeff: ExactReal::one() }
    }

    pub fn eval(&self, x: &ExactReal) -> Result<ExactReal> {
        Ok(self.coeff.mul(&self.kind.eval(x)?))
    }
}

impl fmt::Display for BasisTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TermKind::Recip => write!(f, "{}/x", self.coeff),
            TermKind::RecipOnePlus => write!(f, "{}/(1+x)", self.coeff),
            TermKind::RecipOneMinus => write!(f, "{}/(1-x)", self.coeff),
            TermKind::RecipShift(c) => write!(f, "{}/(x+{})", self.coeff, c),
        }
    }
}

impl Serialize for BasisTerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BasisTerm", 3)?;
        st.serialize_field("kind", self.kind.name())?;
        match &self.kind {
            TermKind::RecipShift(c) => st.serialize_field("c", c)?,
            _ => st.serialize_field("c", &None::<String>)?,
        }
        st.serialize_field("coeff", &self.coeff)?;
        st.end()
    }
}

/// The density on `[left, right]`.
#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    pub left: ExactReal,
    pub right: ExactReal,
    pub terms: Vec<BasisTerm>,
}

impl Piece {
    pub fn eval(&self, x: &ExactReal) -> Result<ExactReal> {
        let mut v = ExactReal::zero();
        for t in &self.terms {
            v = v.add(&t.eval(x)?);
        }
        Ok(v)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.coeff.to_f64() * t.kind.eval_f64(x)).sum()
    }
}

/// Which closed form applies to a parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `0 < alpha < 1/2`
    Small,
    /// `1/2 <= alpha < g`
    HalfToGolden,
    /// `g <= alpha < 2/3`
    GoldenToTwoThirds,
    /// `2/3 <= alpha < sqrt(2)/2`
    TwoThirdsToRootHalf,
}

/// Unnormalised invariant density of `T_alpha`: breakpoint-delimited
/// pieces, each a sum of basis terms. Its total mass is infinite.
#[derive(Clone, Debug, Serialize)]
pub struct PiecewiseDensity {
    #[serde(skip)]
    alpha: Alpha,
    regime: Regime,
    pieces: Vec<Piece>,
}

impl PiecewiseDensity {
    pub fn alpha(&self) -> &Alpha {
        &self.alpha
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn breakpoints(&self) -> Vec<ExactReal> {
        let mut b: Vec<ExactReal> = self.pieces.iter().map(|p| p.left.clone()).collect();
        if let Some(p) = self.pieces.last() {
            b.push(p.right.clone());
        }
        b
    }

    /// `lambda * f`.
    pub fn scale(&self, lambda: &ExactReal) -> Self {
        let mut out = self.clone();
        for p in &mut out.pieces {
            for t in &mut p.terms {
                t.coeff = t.coeff.mul(lambda);
            }
        }
        out
    }

    /// Index of the piece whose open interior contains `x`.
    pub fn locate(&self, x: &ExactReal) -> Result<usize> {
        let first = &self.pieces[0].left;
        if x.lt(first)? || ExactReal::one().lt(x)? {
            return Err(Error::domain(format!("x = {x} is outside I_alpha")));
        }
        for (i, p) in self.pieces.iter().enumerate() {
            match x.cmp(&p.right)? {
                Ordering::Less => {
                    return if x.cmp(&p.left)? == Ordering::Greater { Ok(i) } else { Err(Error::BreakpointHit) };
                }
                Ordering::Equal => return Err(Error::BreakpointHit),
                Ordering::Greater => {}
            }
        }
        Err(Error::BreakpointHit)
    }

    /// `f_alpha(x)` for `x` interior to `I_alpha` and off the breakpoints.
    pub fn eval(&self, x: &ExactReal) -> Result<ExactReal> {
        self.pieces[self.locate(x)?].eval(x)
    }

    /// Double-precision evaluation; breakpoints take the left piece.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let i = self.pieces.iter().position(|p| x <= p.right.to_f64()).unwrap_or(self.pieces.len() - 1);
        self.pieces[i].eval_f64(x)
    }
}

pub(crate) fn golden() -> ExactReal {
    ExactReal::golden()
}

fn root_half() -> ExactReal {
    ExactReal::from_surd(QuadraticSurd::new(0.into(), 1.into(), 2, 2.into()).expect("r = 2"))
}

pub fn regime(alpha: &Alpha) -> Result<Regime> {
    let a = alpha.value();
    if !a.lt(&root_half())? {
        return Err(Error::domain(format!("no closed-form density for alpha = {a} >= sqrt(2)/2")));
    }
    Ok(if a.lt(&ExactReal::frac(1, 2))? {
        Regime::Small
    } else if a.lt(&golden())? {
        Regime::HalfToGolden
    } else if a.lt(&ExactReal::frac(2, 3))? {
        Regime::GoldenToTwoThirds
    } else {
        Regime::TwoThirdsToRootHalf
    })
}

/// Fiber `[-1, 0]`: `1/(1 - x)`.
fn fib_neg() -> Vec<BasisTerm> {
    vec![BasisTerm::unit(TermKind::RecipOneMinus)]
}

/// Fiber `[c, inf)` for `c > 0`: `1/x - 1/(x + 1/c)`.
fn fib_tail(inv_c: ExactReal) -> Vec<BasisTerm> {
    vec![
        BasisTerm::unit(TermKind::Recip),
        BasisTerm::new(TermKind::RecipShift(inv_c), ExactReal::int(-1)),
    ]
}

/// The invariant density of `T_alpha` for `0 < alpha < sqrt(2)/2`.
///
/// For `alpha < 1/2` it is `1/x` on `[alpha, alpha/(1-alpha)]` plus
/// `1/(1+x)` on `[alpha/(1-alpha), 1]` plus `1/(1-x)` on `[1-alpha, 1]`;
/// the overlapping indicators are merged into disjoint pieces. Above `1/2`
/// each piece is the fiber integral of `dy/(1+xy)^2` over the vertical
/// section of the natural extension domain.
pub fn density(alpha: &Alpha) -> Result<PiecewiseDensity> {
    let regime = regime(alpha)?;
    let a = alpha.value();
    let b = alpha.one_minus();
    let one = ExactReal::one();
    let g = golden();
    let recip = || BasisTerm::unit(TermKind::Recip);
    let plus = || BasisTerm::unit(TermKind::RecipOnePlus);
    let minus = || BasisTerm::unit(TermKind::RecipOneMinus);
    let two_a_minus_1 = a.add(a).sub(&one);

    let indicators: Vec<(ExactReal, ExactReal, Vec<BasisTerm>)> = match regime {
        Regime::Small => {
            let q = a.div(b)?;
            vec![
                (a.clone(), q.clone(), vec![recip()]),
                (q, one.clone(), vec![plus()]),
                (b.clone(), one.clone(), vec![minus()]),
            ]
        }
        Regime::HalfToGolden => {
            let q = b.div(a)?;
            let mut last = fib_neg();
            // [1, inf): 1/x - 1/(x + 1)
            last.extend(fib_tail(one.clone()));
            vec![
                (b.clone(), a.clone(), fib_neg()),
                (a.clone(), q.clone(), vec![recip(), minus()]),
                (q, one.clone(), last),
            ]
        }
        Regime::GoldenToTwoThirds | Regime::TwoThirdsToRootHalf => {
            let p1 = two_a_minus_1.div(a)?;
            // [-1, g - 1]: 1/(1 - x) + 1/(x + 1/(g - 1))
            let low = vec![
                minus(),
                BasisTerm::unit(TermKind::RecipShift(g.sub(&one).recip()?)),
            ];
            let mut mid = fib_neg();
            mid.extend(fib_tail(g.recip()?));
            let (p3, last) = if regime == Regime::GoldenToTwoThirds {
                let mut last = fib_neg();
                last.extend(fib_tail(one.clone()));
                (two_a_minus_1.div(b)?, last)
            } else {
                // [-1, 0] u [g, 1] u [g + 1, inf)
                let mut last = fib_neg();
                last.push(plus());
                last.push(BasisTerm::new(TermKind::RecipShift(g.recip()?), ExactReal::int(-1)));
                last.extend(fib_tail(g.add(&one).recip()?));
                (b.div(&two_a_minus_1)?, last)
            };
            vec![
                (b.clone(), p1.clone(), low),
                (p1, a.clone(), fib_neg()),
                (a.clone(), p3.clone(), mid),
                (p3, one.clone(), last),
            ]
        }
    };
    Ok(PiecewiseDensity { alpha: alpha.clone(), regime, pieces: merge(indicators)? })
}

/// Splits overlapping indicator intervals at every endpoint and sums the
/// terms active on each elementary interval. Empty intervals are dropped.
fn merge(indicators: Vec<(ExactReal, ExactReal, Vec<BasisTerm>)>) -> Result<Vec<Piece>> {
    let mut points: Vec<ExactReal> = Vec::new();
    for (l, r, _) in &indicators {
        for p in [l, r] {
            let mut found = false;
            for q in &points {
                if p.cmp(q)? == Ordering::Equal {
                    found = true;
                    break;
                }
            }
            if !found {
                points.push(p.clone());
            }
        }
    }
    let mut err = None;
    points.sort_by(|x, y| {
        x.cmp(y).unwrap_or_else(|e| {
            err = Some(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    let mut pieces = Vec::new();
    for w in points.windows(2) {
        let (l, r) = (&w[0], &w[1]);
        let mut terms: Vec<BasisTerm> = Vec::new();
        for (il, ir, ts) in &indicators {
            if il.le(l)? && r.le(ir)? {
                for t in ts {
                    add_term(&mut terms, t);
                }
            }
        }
        terms.retain(|t| !t.coeff.is_exact_zero());
        if !terms.is_empty() {
            pieces.push(Piece { left: l.clone(), right: r.clone(), terms });
        }
    }
    Ok(pieces)
}

fn add_term(terms: &mut Vec<BasisTerm>, t: &BasisTerm) {
    for s in terms.iter_mut() {
        if s.kind == t.kind {
            s.coeff = s.coeff.add(&t.coeff);
            return;
        }
    }
    terms.push(t.clone());
}
