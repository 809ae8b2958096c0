use super::factor::irreducible_factors;
use super::poly::{resultant, IntPoly, QPoly, SturmSequence};
use super::{fmt_rat, parse_rat, rat_to_f64, ExactError, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

pub const DEFAULT_DEGREE_CEILING: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A real algebraic number.
///
/// Rational values are stored exactly. Irrational values carry their
/// irreducible primitive minimal polynomial (degree ≥ 2) and an open
/// interval `(lo, hi)` with rational endpoints containing exactly one of its
/// roots; the polynomial has opposite nonzero signs at the endpoints.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "RealAlgJson", into = "RealAlgJson")]
pub struct RealAlg {
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    Rational(Rat),
    Irrational { poly: IntPoly, lo: Rat, hi: Rat },
}

/// Closed rational interval used for enclosures.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn point(r: Rat) -> Self {
        Self { lo: r.clone(), hi: r }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn neg(&self) -> Self {
        Self { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self { lo, hi }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        self.mul(&Self::point(r.clone()))
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    /// `Some(sign)` if the interval excludes zero (or is the point zero).
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Horner enclosure of a rational polynomial over this interval.
    pub fn eval_qpoly(&self, p: &QPoly) -> Self {
        let mut acc = Self::point(Rat::zero());
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Self::point(c.clone()));
        }
        acc
    }

    pub fn abs_max(&self) -> Rat {
        self.lo.abs().max(self.hi.abs())
    }
}

impl RealAlg {
    pub fn from_rat(r: Rat) -> Self {
        Self { repr: Repr::Rational(r) }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    /// Builds the root of `poly` isolated by `[lo, hi]`. The polynomial need
    /// not be irreducible, but must have exactly one real root in the closed
    /// interval.
    pub fn from_root(poly: &IntPoly, lo: Rat, hi: Rat) -> Result<Self, ExactError> {
        if poly.is_zero() || lo > hi {
            return Err(ExactError::InvalidAlgebraic("empty interval or zero polynomial".into()));
        }
        let factors = irreducible_factors(poly);
        let mut found = None;
        for f in factors {
            let n = SturmSequence::new(&f).count_closed(&lo, &hi);
            if n > 1 || (n == 1 && found.is_some()) {
                return Err(ExactError::InvalidAlgebraic("interval does not isolate a root".into()));
            }
            if n == 1 {
                found = Some(f);
            }
        }
        let f = found.ok_or_else(|| ExactError::InvalidAlgebraic("no root in interval".into()))?;
        Ok(Self::from_irreducible_in(f, lo, hi))
    }

    /// `f` irreducible primitive with exactly one root in `[lo, hi]`.
    fn from_irreducible_in(f: IntPoly, lo: Rat, hi: Rat) -> Self {
        if f.degree() == 1 {
            let c = f.coeffs();
            return Self::from_rat(Rat::new(-c[0].clone(), c[1].clone()));
        }
        debug_assert!(lo < hi);
        Self { repr: Repr::Irrational { poly: f, lo, hi } }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.repr, Repr::Rational(_))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match &self.repr {
            Repr::Rational(r) => Some(r),
            Repr::Irrational { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_rat().is_some_and(|r| r.is_zero())
    }

    /// Primitive minimal polynomial with positive leading coefficient.
    pub fn minpoly(&self) -> IntPoly {
        match &self.repr {
            Repr::Rational(r) => IntPoly::linear_with_root(r),
            Repr::Irrational { poly, .. } => poly.clone(),
        }
    }

    pub fn degree(&self) -> usize {
        match &self.repr {
            Repr::Rational(_) => 1,
            Repr::Irrational { poly, .. } => poly.degree(),
        }
    }

    /// Current isolating interval (a point for rationals).
    pub fn interval(&self) -> Interval {
        match &self.repr {
            Repr::Rational(r) => Interval::point(r.clone()),
            Repr::Irrational { lo, hi, .. } => Interval { lo: lo.clone(), hi: hi.clone() },
        }
    }

    /// Halves the isolating interval.
    pub fn refine(&self) -> Self {
        match &self.repr {
            Repr::Rational(_) => self.clone(),
            Repr::Irrational { poly, lo, hi } => {
                let mid = (lo + hi) / Rat::from_integer(BigInt::from(2));
                let (lo, hi) = if poly.sign_at(&mid) == poly.sign_at(lo) {
                    (mid, hi.clone())
                } else {
                    (lo.clone(), mid)
                };
                Self { repr: Repr::Irrational { poly: poly.clone(), lo, hi } }
            }
        }
    }

    /// Refines until the interval width is at most `w`.
    pub fn refine_to(&self, w: &Rat) -> Self {
        let mut a = self.clone();
        while a.interval().width() > *w {
            a = a.refine();
        }
        a
    }

    pub fn to_f64(&self) -> f64 {
        match &self.repr {
            Repr::Rational(r) => rat_to_f64(r),
            Repr::Irrational { .. } => {
                let iv = self.interval();
                let mag = iv.abs_max().max(Rat::one());
                let a = self.refine_to(&(mag * Rat::new(BigInt::one(), BigInt::one() << 60)));
                let iv = a.interval();
                rat_to_f64(&((iv.lo + iv.hi) / Rat::from_integer(BigInt::from(2))))
            }
        }
    }

    pub fn sign(&self) -> Ordering {
        match &self.repr {
            Repr::Rational(r) => r.cmp(&Rat::zero()),
            Repr::Irrational { poly, lo, hi } => {
                if !lo.is_negative() {
                    Ordering::Greater
                } else if !hi.is_positive() {
                    Ordering::Less
                } else if poly.sign_at(lo) != poly.sign_at(&Rat::zero()) {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    /// Exact comparison with a rational.
    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        match &self.repr {
            Repr::Rational(a) => a.cmp(r),
            Repr::Irrational { poly, lo, hi } => {
                if r <= lo {
                    Ordering::Greater
                } else if r >= hi {
                    Ordering::Less
                } else if poly.sign_at(r) == poly.sign_at(lo) {
                    // root lies in (r, hi)
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn cmp_alg(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (_, Repr::Rational(b)) => self.cmp_rat(b),
            (Repr::Rational(a), _) => other.cmp_rat(a).reverse(),
            (Repr::Irrational { poly: p, .. }, Repr::Irrational { poly: q, .. }) => {
                let (mut a, mut b) = (self.clone(), other.clone());
                if p == q {
                    let (ia, ib) = (a.interval(), b.interval());
                    let lo = ia.lo.clone().max(ib.lo.clone());
                    let hi = ia.hi.clone().min(ib.hi.clone());
                    if lo <= hi && SturmSequence::new(p).count_closed(&lo, &hi) > 0 {
                        return Ordering::Equal;
                    }
                }
                loop {
                    let (ia, ib) = (a.interval(), b.interval());
                    if ia.hi <= ib.lo {
                        return Ordering::Less;
                    }
                    if ib.hi <= ia.lo {
                        return Ordering::Greater;
                    }
                    a = a.refine();
                    b = b.refine();
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Rational(r) => Self::from_rat(-r),
            Repr::Irrational { poly, lo, hi } => Self {
                repr: Repr::Irrational { poly: poly.negate_var(), lo: -hi, hi: -lo },
            },
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        match &self.repr {
            Repr::Rational(r) => {
                if r.is_zero() {
                    Err(ExactError::DivisionByZero)
                } else {
                    Ok(Self::from_rat(r.recip()))
                }
            }
            Repr::Irrational { .. } => {
                let mut a = self.clone();
                while a.interval().sign().is_none() {
                    a = a.refine();
                }
                let Repr::Irrational { poly, lo, hi } = &a.repr else { unreachable!() };
                Ok(Self {
                    repr: Repr::Irrational { poly: poly.reverse(), lo: hi.recip(), hi: lo.recip() },
                })
            }
        }
    }

    pub fn add_rat(&self, r: &Rat) -> Self {
        match &self.repr {
            Repr::Rational(a) => Self::from_rat(a + r),
            Repr::Irrational { poly, lo, hi } => Self {
                repr: Repr::Irrational { poly: poly.shift_roots(r), lo: lo + r, hi: hi + r },
            },
        }
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        match &self.repr {
            Repr::Rational(a) => Self::from_rat(a * r),
            Repr::Irrational { .. } if r.is_zero() => Self::zero(),
            Repr::Irrational { poly, lo, hi } => {
                let (l, h) = if r.is_positive() { (lo * r, hi * r) } else { (hi * r, lo * r) };
                Self { repr: Repr::Irrational { poly: poly.scale_roots(r), lo: l, hi: h } }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, ExactError> {
        alg_arith(self, o, AlgOp::Add)
    }

    pub fn sub(&self, o: &Self) -> Result<Self, ExactError> {
        alg_arith(self, o, AlgOp::Sub)
    }

    pub fn mul(&self, o: &Self) -> Result<Self, ExactError> {
        alg_arith(self, o, AlgOp::Mul)
    }

    pub fn div(&self, o: &Self) -> Result<Self, ExactError> {
        alg_arith(self, o, AlgOp::Div)
    }

    pub fn pow(&self, e: u32) -> Result<Self, ExactError> {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }
}

impl PartialEq for RealAlg {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_alg(other) == Ordering::Equal
    }
}

impl Eq for RealAlg {}

impl PartialOrd for RealAlg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealAlg {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_alg(other)
    }
}

impl From<Rat> for RealAlg {
    fn from(r: Rat) -> Self {
        Self::from_rat(r)
    }
}

impl fmt::Debug for RealAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(r) => write!(f, "{}", fmt_rat(r)),
            Repr::Irrational { poly, lo, hi } => {
                write!(f, "root of {poly} in ({}, {}) ≈ {}", fmt_rat(lo), fmt_rat(hi), self.to_f64())
            }
        }
    }
}

impl fmt::Display for RealAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(r) => write!(f, "{}", fmt_rat(r)),
            Repr::Irrational { poly, .. } => write!(f, "{} [root of {poly}]", self.to_f64()),
        }
    }
}

/// Wire form: minimal polynomial coefficients (lowest degree first) and the
/// isolating interval, all as decimal-free rational strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RealAlgJson {
    pub minpoly: Vec<String>,
    pub lo: String,
    pub hi: String,
}

impl From<RealAlg> for RealAlgJson {
    fn from(a: RealAlg) -> Self {
        let iv = a.interval();
        Self {
            minpoly: a.minpoly().coeffs().iter().map(|c| c.to_string()).collect(),
            lo: fmt_rat(&iv.lo),
            hi: fmt_rat(&iv.hi),
        }
    }
}

impl TryFrom<RealAlgJson> for RealAlg {
    type Error = ExactError;

    fn try_from(j: RealAlgJson) -> Result<Self, ExactError> {
        let coeffs = j
            .minpoly
            .iter()
            .map(|s| {
                let r = parse_rat(s)?;
                if r.denom().is_one() {
                    Ok(r.numer().clone())
                } else {
                    Err(ExactError::ParseRational(s.clone()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let poly = IntPoly::new(coeffs);
        let (lo, hi) = (parse_rat(&j.lo)?, parse_rat(&j.hi)?);
        if poly.degree() == 0 {
            return Err(ExactError::InvalidAlgebraic("constant minimal polynomial".into()));
        }
        let a = RealAlg::from_root(&poly, lo, hi)?;
        if a.degree() != poly.degree() {
            return Err(ExactError::InvalidAlgebraic("polynomial is not irreducible".into()));
        }
        Ok(a)
    }
}

/// All distinct real roots of `p`, ascending.
pub fn sturm_isolate_real_roots(p: &IntPoly) -> Vec<RealAlg> {
    assert!(!p.is_zero(), "root isolation of the zero polynomial");
    let mut out = Vec::new();
    for f in irreducible_factors(p) {
        if f.degree() == 1 {
            out.push(RealAlg::from_irreducible_in(f.clone(), Rat::zero(), Rat::zero()));
            continue;
        }
        for (lo, hi) in isolate_irreducible(&f) {
            out.push(RealAlg::from_irreducible_in(f.clone(), lo, hi));
        }
    }
    out.sort();
    out
}

/// Isolating intervals for the real roots of an irreducible polynomial of
/// degree ≥ 2 (which has no rational roots, so bisection points are never roots).
fn isolate_irreducible(f: &IntPoly) -> Vec<(Rat, Rat)> {
    let s = SturmSequence::new(f);
    let b = f.root_bound();
    let two = Rat::from_integer(BigInt::from(2));
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = s.count_half_open(&lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / &two;
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out
}

/// Picks the unique root among `factors` (irreducible polynomials) lying in
/// the enclosures produced by `enclose`, which must shrink to the target
/// value as its argument grows.
pub(crate) fn pin_root<F>(factors: Vec<IntPoly>, mut enclose: F) -> RealAlg
where
    F: FnMut(usize) -> Interval,
{
    let seqs: Vec<SturmSequence> = factors.iter().map(SturmSequence::new).collect();
    let mut k = 0;
    loop {
        let iv = enclose(k);
        let counts: Vec<usize> = seqs.iter().map(|s| s.count_closed(&iv.lo, &iv.hi)).collect();
        let total: usize = counts.iter().sum();
        if total == 1 {
            let i = counts.iter().position(|&c| c == 1).unwrap();
            return RealAlg::from_irreducible_in(factors[i].clone(), iv.lo, iv.hi);
        }
        assert!(total > 0, "target value escaped all candidate factors");
        k += 1;
    }
}

pub fn alg_arith(a: &RealAlg, b: &RealAlg, op: AlgOp) -> Result<RealAlg, ExactError> {
    alg_arith_with_ceiling(a, b, op, DEFAULT_DEGREE_CEILING)
}

pub fn alg_arith_with_ceiling(
    a: &RealAlg,
    b: &RealAlg,
    op: AlgOp,
    ceiling: usize,
) -> Result<RealAlg, ExactError> {
    match op {
        AlgOp::Sub => return alg_arith_with_ceiling(a, &b.neg(), AlgOp::Add, ceiling),
        AlgOp::Div => return alg_arith_with_ceiling(a, &b.inv()?, AlgOp::Mul, ceiling),
        _ => {}
    }
    match (&a.repr, &b.repr) {
        (Repr::Rational(x), Repr::Rational(y)) => {
            return Ok(RealAlg::from_rat(if op == AlgOp::Add { x + y } else { x * y }));
        }
        (_, Repr::Rational(y)) => return Ok(if op == AlgOp::Add { a.add_rat(y) } else { a.mul_rat(y) }),
        (Repr::Rational(x), _) => return Ok(if op == AlgOp::Add { b.add_rat(x) } else { b.mul_rat(x) }),
        _ => {}
    }
    let (f, g) = (a.minpoly(), b.minpoly());
    if f == g && a == b {
        return Ok(match op {
            AlgOp::Add => a.mul_rat(&Rat::from_integer(BigInt::from(2))),
            _ => square(a, ceiling)?,
        });
    }
    if f == g.negate_var() && op == AlgOp::Add && *a == b.neg() {
        return Ok(RealAlg::zero());
    }
    let needed = f.degree() * g.degree();
    if needed > ceiling {
        return Err(ExactError::DegreeCeiling { needed, ceiling });
    }
    let r = combined_poly(&f, &g, op);
    let factors = irreducible_factors(&r);
    let (mut x, mut y) = (a.clone(), b.clone());
    Ok(pin_root(factors, |k| {
        if k > 0 {
            x = x.refine();
            y = y.refine();
        }
        match op {
            AlgOp::Add => x.interval().add(&y.interval()),
            _ => x.interval().mul(&y.interval()),
        }
    }))
}

fn square(a: &RealAlg, ceiling: usize) -> Result<RealAlg, ExactError> {
    // Roots of f(y) with x = y^2: Res_y(f(y), x - y^2).
    let f = a.minpoly();
    let needed = f.degree() * 2;
    if needed > ceiling {
        return Err(ExactError::DegreeCeiling { needed, ceiling });
    }
    let fq = f.to_qpoly();
    let n = f.degree();
    let samples: Vec<Rat> = (0..=n)
        .map(|i| {
            let x0 = Rat::from_integer(BigInt::from(i));
            resultant(&fq, &QPoly::new(vec![x0, Rat::zero(), -Rat::one()]))
        })
        .collect();
    let r = IntPoly::from_qpoly(&interpolate(&samples));
    let factors = irreducible_factors(&r);
    let mut x = a.clone();
    Ok(pin_root(factors, |k| {
        if k > 0 {
            x = x.refine();
        }
        let iv = x.interval();
        let sq = iv.mul(&iv);
        // x*x on an interval straddling 0 yields a negative lower end; clamp.
        if sq.lo.is_negative() {
            Interval { lo: Rat::zero(), hi: sq.hi }
        } else {
            sq
        }
    }))
}

/// Resultant-defined polynomial vanishing at α+β (Add) or α·β (Mul) for all
/// roots α of `f` and β of `g`.
fn combined_poly(f: &IntPoly, g: &IntPoly, op: AlgOp) -> IntPoly {
    let (m, n) = (f.degree(), g.degree());
    let fq = f.to_qpoly();
    let gq = g.to_qpoly();
    let samples: Vec<Rat> = (0..=m * n)
        .map(|i| {
            let x0 = Rat::from_integer(BigInt::from(i));
            let gy = match op {
                AlgOp::Add => gq.compose_linear(&-Rat::one(), &x0),
                _ => {
                    // y^n g(x0 / y) = Σ g_k x0^k y^(n-k)
                    let mut c = vec![Rat::zero(); n + 1];
                    let mut pw = Rat::one();
                    for (k, gk) in gq.coeffs().iter().enumerate() {
                        c[n - k] = gk * &pw;
                        pw *= &x0;
                    }
                    QPoly::new(c)
                }
            };
            resultant(&fq, &gy)
        })
        .collect();
    IntPoly::from_qpoly(&interpolate(&samples))
}

/// Newton interpolation through `(i, values[i])` for `i = 0..len`.
pub(crate) fn interpolate(values: &[Rat]) -> QPoly {
    let n = values.len();
    let mut c = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            c[i] = (&c[i] - &c[i - 1]) / Rat::from_integer(BigInt::from(j));
        }
    }
    let mut p = QPoly::constant(c[n - 1].clone());
    for k in (0..n - 1).rev() {
        p = p
            .mul(&QPoly::x_minus(&Rat::from_integer(BigInt::from(k))))
            .add(&QPoly::constant(c[k].clone()));
    }
    p
}
