use super::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Univariate polynomial with integer coefficients, lowest degree first.
///
/// The coefficient vector never has trailing zeros; the zero polynomial is
/// the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

/// Univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// `x - r` scaled to integers: `den * x - num`.
    pub fn linear_with_root(r: &Rat) -> Self {
        Self::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Largest coefficient magnitude.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    /// The primitive integer polynomial that is a positive-leading multiple of `p`.
    pub fn from_qpoly(p: &QPoly) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        let l = p.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        Self::new(p.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect()).primitive()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + Rat::from_integer(c.clone()))
    }

    /// Sign of `p(x)` computed with integer arithmetic only.
    pub fn sign_at(&self, x: &Rat) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let (a, b) = (x.numer(), x.denom());
        let n = self.degree();
        let mut h = self.coeffs[n].clone();
        let mut bpow = BigInt::one();
        for k in (0..n).rev() {
            bpow *= b;
            h = h * a + &self.coeffs[k] * &bpow;
        }
        h.sign_ordering()
    }

    pub fn sign_at_pos_inf(&self) -> Ordering {
        self.lc().sign_ordering()
    }

    pub fn sign_at_neg_inf(&self) -> Ordering {
        let s = self.lc().sign_ordering();
        if self.degree() % 2 == 1 {
            s.reverse()
        } else {
            s
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `p(-x)`.
    pub fn negate_var(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
        .primitive()
    }

    /// `x^n p(1/x)`.
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c).primitive()
    }

    /// Primitive integer form of `p(x - r)`; its roots are the roots of `p` shifted by `r`.
    pub fn shift_roots(&self, r: &Rat) -> Self {
        Self::from_qpoly(&self.to_qpoly().compose_linear(&Rat::one(), &-r))
    }

    /// Primitive integer form whose roots are the roots of `p` multiplied by `r != 0`.
    pub fn scale_roots(&self, r: &Rat) -> Self {
        debug_assert!(!r.is_zero());
        let inv = r.recip();
        Self::from_qpoly(&self.to_qpoly().compose_linear(&inv, &Rat::zero()))
    }

    /// Squarefree part as a primitive integer polynomial.
    pub fn squarefree_part(&self) -> Self {
        if self.degree() == 0 {
            return self.primitive();
        }
        let q = self.to_qpoly();
        let g = q.gcd(&q.derivative());
        Self::from_qpoly(&q.div_rem(&g).0)
    }

    /// Yun's squarefree decomposition: returns `(s_k, k)` pairs with
    /// `p = c * prod s_k^k`, each `s_k` primitive and squarefree.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.to_qpoly().monic();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.div_rem(&a).0;
        let c = fp.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        while b.degree() > 0 {
            let a_k = b.gcd(&d);
            if a_k.degree() > 0 {
                out.push((Self::from_qpoly(&a_k), k));
            }
            b = b.div_rem(&a_k).0;
            let c = d.div_rem(&a_k).0;
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    /// Exact quotient over the integers, if `other` divides `self` in `Z[x]`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let (q, r) = self.to_qpoly().div_rem(&other.to_qpoly());
        if !r.is_zero() {
            return None;
        }
        if q.coeffs().iter().any(|c| !c.denom().is_one()) {
            return None;
        }
        Some(Self::new(q.coeffs().iter().map(|c| c.numer().clone()).collect()))
    }

    /// Cauchy bound: every real root lies strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Rat {
        let lc = Rat::from_integer(self.lc().abs());
        let m = self
            .coeffs
            .iter()
            .take(self.degree())
            .map(|c| Rat::from_integer(c.abs()))
            .max()
            .unwrap_or_default();
        Rat::one() + m / lc
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear polynomial `x - r`.
    pub fn x_minus(r: &Rat) -> Self {
        Self::new(vec![-r, Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lc();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rat::zero();
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) + other.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rat::zero();
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&z) - other.coeffs.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::constant(Rat::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Euclidean division. Panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if self.degree() < divisor.degree() || self.is_zero() {
            return (Self::zero(), self.clone());
        }
        let dl = divisor.lc();
        let dd = divisor.degree();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::constant(Rat::one()), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::constant(Rat::one()));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let l = r0.lc().recip();
        (r0.scale(&l), s0.scale(&l), t0.scale(&l))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// `p(a*x + b)`.
    pub fn compose_linear(&self, a: &Rat, b: &Rat) -> Self {
        let lin = Self::new(vec![b.clone(), a.clone()]);
        let mut out = Self::zero();
        for c in self.coeffs.iter().rev() {
            out = out.mul(&lin).add(&Self::constant(c.clone()));
        }
        out
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(super::fmt_rat).collect();
        write!(f, "QPoly[{}]", parts.join(", "))
    }
}

/// Resultant of two rational polynomials, via the Euclidean remainder sequence.
pub fn resultant(a: &QPoly, b: &QPoly) -> Rat {
    if a.is_zero() || b.is_zero() {
        return Rat::zero();
    }
    let (m, n) = (a.degree(), b.degree());
    if n == 0 {
        return num_traits::pow(b.lc(), m);
    }
    if m == 0 {
        return num_traits::pow(a.lc(), n);
    }
    let r = a.rem(b);
    if r.is_zero() {
        return Rat::zero();
    }
    let sign = if (m * n) % 2 == 1 { -Rat::one() } else { Rat::one() };
    sign * num_traits::pow(b.lc(), m - r.degree()) * resultant(b, &r)
}

/// Sturm sequence of a squarefree polynomial, stored as primitive integer
/// polynomials (positive rescaling does not change sign variations).
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<IntPoly>,
}

impl SturmSequence {
    pub fn new(p: &IntPoly) -> Self {
        let mut seq = vec![p.clone()];
        if p.degree() == 0 {
            return Self { seq };
        }
        let mut prev = p.to_qpoly();
        let mut cur = p.derivative().to_qpoly();
        seq.push(IntPoly::from_qpoly_keep_sign(&cur));
        loop {
            let r = prev.rem(&cur);
            if r.is_zero() {
                break;
            }
            let next = r.scale(&-Rat::one());
            seq.push(IntPoly::from_qpoly_keep_sign(&next));
            prev = cur;
            cur = next;
        }
        Self { seq }
    }

    pub fn poly(&self) -> &IntPoly {
        &self.seq[0]
    }

    fn variations<I: Iterator<Item = Ordering>>(signs: I) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for s in signs {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rat) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at_pos_inf()))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| p.sign_at_neg_inf()))
    }

    /// Number of distinct real roots.
    pub fn count_all(&self) -> usize {
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }

    /// Number of distinct roots in the half-open interval `(lo, hi]`.
    pub fn count_half_open(&self, lo: &Rat, hi: &Rat) -> usize {
        if lo >= hi {
            return 0;
        }
        self.variations_at(lo) - self.variations_at(hi)
    }

    /// Number of distinct roots in the closed interval `[lo, hi]`.
    pub fn count_closed(&self, lo: &Rat, hi: &Rat) -> usize {
        if lo > hi {
            return 0;
        }
        let at_lo = usize::from(self.poly().sign_at(lo) == Ordering::Equal);
        if lo == hi {
            return at_lo;
        }
        self.count_half_open(lo, hi) + at_lo
    }

    /// Number of distinct roots in `[lo, +inf)`.
    pub fn count_from(&self, lo: &Rat) -> usize {
        let at_lo = usize::from(self.poly().sign_at(lo) == Ordering::Equal);
        self.variations_at(lo) - self.variations_at_pos_inf() + at_lo
    }
}

impl IntPoly {
    /// Integer polynomial with the same sign pattern as the rational `p`
    /// (positive rescaling only).
    fn from_qpoly_keep_sign(p: &QPoly) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        let l = p.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints = Self::new(p.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect());
        let g = ints.content();
        Self::new(ints.coeffs.iter().map(|c| c / &g).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn sylvester_resultant(a: &QPoly, b: &QPoly) -> Rat {
        // Determinant of the Sylvester matrix by fraction-based elimination.
        let (m, n) = (a.degree(), b.degree());
        let size = m + n;
        let mut mat = vec![vec![Rat::zero(); size]; size];
        for r in 0..n {
            for (k, c) in a.coeffs().iter().rev().enumerate() {
                mat[r][r + k] = c.clone();
            }
        }
        for r in 0..m {
            for (k, c) in b.coeffs().iter().rev().enumerate() {
                mat[n + r][r + k] = c.clone();
            }
        }
        let mut det = Rat::one();
        for col in 0..size {
            let Some(p) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return Rat::zero();
            };
            if p != col {
                mat.swap(p, col);
                det = -det;
            }
            det *= &mat[col][col];
            for r in col + 1..size {
                let f = &mat[r][col] / &mat[col][col];
                for c in col..size {
                    let v = &f * &mat[col][c];
                    mat[r][c] -= v;
                }
            }
        }
        det
    }

    #[test]
    fn resultant_matches_sylvester_determinant() {
        let cases = [
            (vec![-2, 0, 1], vec![-3, 0, 1]),
            (vec![1, 2, 3, 4], vec![5, -1, 2]),
            (vec![0, 1], vec![7, 0, 0, 1]),
            (vec![-1, 0, 0, 2], vec![3, 1]),
            (vec![1, 1], vec![1, 1]),
        ];
        for (a, b) in cases {
            let pa = IntPoly::from_i64(&a).to_qpoly();
            let pb = IntPoly::from_i64(&b).to_qpoly();
            assert_eq!(resultant(&pa, &pb), sylvester_resultant(&pa, &pb), "{a:?} {b:?}");
        }
    }

    #[test]
    fn sturm_counts_roots() {
        // (x-1)(x-2)(x+3)
        let p = IntPoly::from_i64(&[6, -7, 0, 1]);
        let s = SturmSequence::new(&p);
        assert_eq!(s.count_all(), 3);
        assert_eq!(s.count_half_open(&int(0), &int(2)), 2);
        assert_eq!(s.count_half_open(&int(1), &int(2)), 1);
        assert_eq!(s.count_closed(&int(1), &int(2)), 2);
        assert_eq!(s.count_from(&int(0)), 2);
        let q = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(SturmSequence::new(&q).count_all(), 0);
    }

    #[test]
    fn sign_at_matches_eval() {
        let p = IntPoly::from_i64(&[-5, 3, 0, 2]);
        for x in [rat(1, 3), rat(-7, 2), int(0), rat(5, 4)] {
            let v = p.eval(&x);
            assert_eq!(p.sign_at(&x), v.cmp(&Rat::zero()));
        }
    }

    #[test]
    fn squarefree_decomposition_of_repeated_factors() {
        // (x-1)^2 (x+2)^3 x
        let a = IntPoly::from_i64(&[-1, 1]);
        let b = IntPoly::from_i64(&[2, 1]);
        let x = IntPoly::from_i64(&[0, 1]);
        let p = a.mul(&a).mul(&b).mul(&b).mul(&b).mul(&x);
        let dec = p.squarefree_decomposition();
        let mut got: Vec<(usize, usize)> = dec.iter().map(|(q, k)| (q.degree(), *k)).collect();
        got.sort();
        assert_eq!(got, vec![(1, 1), (1, 2), (1, 3)]);
        assert_eq!(p.squarefree_part().degree(), 3);
    }

    #[test]
    fn root_transforms() {
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        let shifted = p.shift_roots(&int(1)); // roots 1 ± sqrt2: x^2 - 2x - 1
        assert_eq!(shifted, IntPoly::from_i64(&[-1, -2, 1]));
        let scaled = p.scale_roots(&rat(1, 2)); // roots ±sqrt2/2: 2x^2 - 1
        assert_eq!(scaled, IntPoly::from_i64(&[-1, 0, 2]));
        assert_eq!(IntPoly::from_i64(&[1, 2, 3]).reverse(), IntPoly::from_i64(&[3, 2, 1]));
    }
}
