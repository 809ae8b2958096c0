//! Real number fields `Q(θ)` with a fixed real embedding, used to keep
//! spectral data (projectors, bilinear-form matrices) in a single simple
//! extension instead of towers of algebraic numbers.

use super::factor::irreducible_factors;
use super::poly::{resultant, IntPoly, QPoly};
use super::realalg::{interpolate, pin_root, Interval, RealAlg};
use super::{ExactError, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// `Q(θ)` where θ is a real root of an irreducible polynomial.
#[derive(Clone)]
pub struct NumberField {
    modulus: QPoly,
    root: RealAlg,
}

impl NumberField {
    pub fn new(root: RealAlg) -> Arc<Self> {
        Arc::new(Self { modulus: root.minpoly().to_qpoly().monic(), root })
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree()
    }

    pub fn root(&self) -> &RealAlg {
        &self.root
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.root == other.root
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({:?})", self.root)
    }
}

/// Element of a [`NumberField`], stored as a polynomial in θ of degree
/// below the field degree.
#[derive(Clone)]
pub struct NfElem {
    field: Arc<NumberField>,
    p: QPoly,
}

impl NfElem {
    pub fn from_rat(field: &Arc<NumberField>, r: Rat) -> Self {
        Self { field: field.clone(), p: QPoly::constant(r) }
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self { field: field.clone(), p: QPoly::zero() }
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rat(field, Rat::one())
    }

    /// The generator θ.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, QPoly::new(vec![Rat::zero(), Rat::one()]))
    }

    pub fn from_poly(field: &Arc<NumberField>, p: QPoly) -> Self {
        let p = p.rem(&field.modulus);
        Self { field: field.clone(), p }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn poly(&self) -> &QPoly {
        &self.p
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        if self.p.is_constant() {
            Some(self.p.coeffs().first().cloned().unwrap_or_default())
        } else {
            None
        }
    }

    fn check(&self, o: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.field, &o.field) || self.field.same_as(&o.field),
            "mixing elements of different number fields"
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        Self { field: self.field.clone(), p: self.p.add(&o.p) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.check(o);
        Self { field: self.field.clone(), p: self.p.sub(&o.p) }
    }

    pub fn neg(&self) -> Self {
        Self { field: self.field.clone(), p: self.p.scale(&-Rat::one()) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        Self::from_poly(&self.field, self.p.mul(&o.p))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self { field: self.field.clone(), p: self.p.scale(r) }
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let (g, s, _) = self.p.ext_gcd(&self.field.modulus);
        debug_assert_eq!(g.degree(), 0);
        Ok(Self::from_poly(&self.field, s))
    }

    pub fn div(&self, o: &Self) -> Result<Self, ExactError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut out = Self::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Enclosure of the real value after `k` refinements of the root interval.
    pub fn enclosure(&self, k: usize) -> Interval {
        let mut r = self.field.root.clone();
        for _ in 0..k {
            r = r.refine();
        }
        r.interval().eval_qpoly(&self.p)
    }

    pub fn sign(&self) -> Ordering {
        if let Some(r) = self.as_rat() {
            return r.cmp(&Rat::zero());
        }
        let mut root = self.field.root.clone();
        loop {
            if let Some(s) = root.interval().eval_qpoly(&self.p).sign() {
                return s;
            }
            root = root.refine();
        }
    }

    pub fn cmp_elem(&self, o: &Self) -> Ordering {
        self.sub(o).sign()
    }

    /// Exact real value as a standalone algebraic number.
    pub fn to_realalg(&self) -> RealAlg {
        if let Some(r) = self.as_rat() {
            return RealAlg::from_rat(r);
        }
        // Res_y(f(y), x - p(y)) is (up to a constant) the characteristic
        // polynomial of multiplication by p, a power of its minimal polynomial.
        let n = self.field.degree();
        let f = &self.field.modulus;
        let samples: Vec<Rat> = (0..=n)
            .map(|i| {
                let x0 = Rat::from_integer(BigInt::from(i));
                resultant(f, &QPoly::constant(x0).sub(&self.p))
            })
            .collect();
        let min = IntPoly::from_qpoly(&interpolate(&samples)).squarefree_part();
        let factors = irreducible_factors(&min);
        let mut root = self.field.root.clone();
        pin_root(factors, |k| {
            if k > 0 {
                root = root.refine();
            }
            root.interval().eval_qpoly(&self.p)
        })
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(r) = self.as_rat() {
            return super::rat_to_f64(&r);
        }
        let w = Rat::new(BigInt::one(), BigInt::one() << 60);
        let mut root = self.field.root.clone();
        loop {
            let iv = root.interval().eval_qpoly(&self.p);
            if iv.width() <= &w * iv.abs_max().max(Rat::one()) {
                return super::rat_to_f64(&((iv.lo + iv.hi) / Rat::from_integer(BigInt::from(2))));
            }
            root = root.refine();
        }
    }
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rat() {
            Some(r) => write!(f, "{}", super::fmt_rat(&r)),
            None => write!(f, "{:?}(θ) ≈ {}", self.p, self.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn sqrt2_field() -> Arc<NumberField> {
        NumberField::new(RealAlg::from_root(&IntPoly::from_i64(&[-2, 0, 1]), int(1), int(2)).unwrap())
    }

    #[test]
    fn arithmetic_in_q_sqrt2() {
        let k = sqrt2_field();
        let t = NfElem::generator(&k);
        assert_eq!(t.mul(&t).as_rat(), Some(int(2)));
        let a = t.add(&NfElem::from_rat(&k, int(1))); // 1 + √2
        let b = a.inv().unwrap(); // √2 - 1
        assert_eq!(a.mul(&b).as_rat(), Some(int(1)));
        assert_eq!(b.sign(), Ordering::Greater);
        assert_eq!(b.sub(&NfElem::from_rat(&k, rat(1, 2))).sign(), Ordering::Less);
    }

    #[test]
    fn conversion_to_realalg() {
        let k = sqrt2_field();
        let t = NfElem::generator(&k);
        let a = t.scale(&int(3)).add(&NfElem::from_rat(&k, int(1))); // 1 + 3√2
        let r = a.to_realalg();
        // (x - 1)^2 = 18
        assert_eq!(r.minpoly(), IntPoly::from_i64(&[-17, -2, 1]));
        assert_eq!(r.cmp_rat(&int(5)), Ordering::Greater);
        assert_eq!(r.cmp_rat(&rat(53, 10)), Ordering::Less);
    }
}
