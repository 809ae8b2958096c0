use crate::exactnum::{primitive_direction, ExactError, Interval, NfElem, NumberField, RealAlg, Rat};
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::sync::Arc;

/// A real algebraic scalar kept in the cheapest exact representation available.
#[derive(Clone, Debug)]
pub enum AlgScalar {
    Rat(Rat),
    Nf(NfElem),
    Real(RealAlg),
}

fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
    Arc::ptr_eq(a, b) || a.same_as(b)
}

impl AlgScalar {
    pub fn zero() -> Self {
        AlgScalar::Rat(Rat::zero())
    }

    fn normalize(self) -> Self {
        match self {
            AlgScalar::Nf(e) => match e.as_rat() {
                Some(r) => AlgScalar::Rat(r),
                None => AlgScalar::Nf(e),
            },
            AlgScalar::Real(a) => match a.as_rat() {
                Some(r) => AlgScalar::Rat(r.clone()),
                None => AlgScalar::Real(a),
            },
            s => s,
        }
    }

    pub fn sign(&self) -> Ordering {
        match self {
            AlgScalar::Rat(r) => r.cmp(&Rat::zero()),
            AlgScalar::Nf(e) => e.sign(),
            AlgScalar::Real(a) => a.sign(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }

    pub fn to_realalg(&self) -> RealAlg {
        match self {
            AlgScalar::Rat(r) => RealAlg::from_rat(r.clone()),
            AlgScalar::Nf(e) => e.to_realalg(),
            AlgScalar::Real(a) => a.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            AlgScalar::Rat(r) => crate::exactnum::rat_to_f64(r),
            AlgScalar::Nf(e) => e.to_f64(),
            AlgScalar::Real(a) => a.to_f64(),
        }
    }

    /// Rational enclosure that tightens as `k` grows.
    pub fn enclosure(&self, k: usize) -> Interval {
        match self {
            AlgScalar::Rat(r) => Interval::point(r.clone()),
            AlgScalar::Nf(e) => e.enclosure(k),
            AlgScalar::Real(a) => {
                let mut a = a.clone();
                for _ in 0..k {
                    a = a.refine();
                }
                a.interval()
            }
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            AlgScalar::Rat(r) => AlgScalar::Rat(-r),
            AlgScalar::Nf(e) => AlgScalar::Nf(e.neg()),
            AlgScalar::Real(a) => AlgScalar::Real(a.neg()),
        }
    }

    pub fn mul_rat(&self, s: &Rat) -> Self {
        match self {
            AlgScalar::Rat(r) => AlgScalar::Rat(r * s),
            AlgScalar::Nf(e) => AlgScalar::Nf(e.scale(s)).normalize(),
            AlgScalar::Real(a) => AlgScalar::Real(a.mul_rat(s)).normalize(),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, ExactError> {
        Ok(match (self, o) {
            (AlgScalar::Rat(a), AlgScalar::Rat(b)) => AlgScalar::Rat(a + b),
            (AlgScalar::Nf(a), AlgScalar::Rat(b)) | (AlgScalar::Rat(b), AlgScalar::Nf(a)) => {
                AlgScalar::Nf(a.add(&NfElem::from_rat(a.field(), b.clone())))
            }
            (AlgScalar::Nf(a), AlgScalar::Nf(b)) if same_field(a.field(), b.field()) => {
                AlgScalar::Nf(a.add(b)).normalize()
            }
            _ => AlgScalar::Real(self.to_realalg().add(&o.to_realalg())?).normalize(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, ExactError> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, ExactError> {
        Ok(match (self, o) {
            (AlgScalar::Rat(a), b) | (b, AlgScalar::Rat(a)) => b.mul_rat(a),
            (AlgScalar::Nf(a), AlgScalar::Nf(b)) if same_field(a.field(), b.field()) => {
                AlgScalar::Nf(a.mul(b)).normalize()
            }
            _ => AlgScalar::Real(self.to_realalg().mul(&o.to_realalg())?).normalize(),
        })
    }

    pub fn cmp_scalar(&self, o: &Self) -> Result<Ordering, ExactError> {
        Ok(self.sub(o)?.sign())
    }
}

/// A vector with real algebraic entries, specialised for the common cases
/// of rational entries and entries from a single number field.
#[derive(Clone, Debug)]
pub enum AlgVector {
    Rational(Vec<Rat>),
    Field(Arc<NumberField>, Vec<NfElem>),
    General(Vec<RealAlg>),
}

impl AlgVector {
    /// Builds the most specific representation for the given entries.
    pub fn from_scalars(entries: Vec<AlgScalar>) -> Self {
        let entries: Vec<AlgScalar> = entries.into_iter().map(AlgScalar::normalize).collect();
        if entries.iter().all(|e| matches!(e, AlgScalar::Rat(_))) {
            return AlgVector::Rational(
                entries
                    .into_iter()
                    .map(|e| match e {
                        AlgScalar::Rat(r) => r,
                        _ => unreachable!(),
                    })
                    .collect(),
            );
        }
        let field = entries.iter().find_map(|e| match e {
            AlgScalar::Nf(x) => Some(x.field().clone()),
            _ => None,
        });
        if let Some(k) = field {
            let all_in_k = entries.iter().all(|e| match e {
                AlgScalar::Rat(_) => true,
                AlgScalar::Nf(x) => same_field(x.field(), &k),
                AlgScalar::Real(_) => false,
            });
            if all_in_k {
                let elems = entries
                    .into_iter()
                    .map(|e| match e {
                        AlgScalar::Rat(r) => NfElem::from_rat(&k, r),
                        AlgScalar::Nf(x) => x,
                        AlgScalar::Real(_) => unreachable!(),
                    })
                    .collect();
                return AlgVector::Field(k, elems);
            }
        }
        AlgVector::General(entries.iter().map(AlgScalar::to_realalg).collect())
    }

    pub fn from_realalg(entries: Vec<RealAlg>) -> Self {
        Self::from_scalars(entries.into_iter().map(AlgScalar::Real).collect())
    }

    pub fn dim(&self) -> usize {
        match self {
            AlgVector::Rational(v) => v.len(),
            AlgVector::Field(_, v) => v.len(),
            AlgVector::General(v) => v.len(),
        }
    }

    pub fn get(&self, i: usize) -> AlgScalar {
        match self {
            AlgVector::Rational(v) => AlgScalar::Rat(v[i].clone()),
            AlgVector::Field(_, v) => AlgScalar::Nf(v[i].clone()).normalize(),
            AlgVector::General(v) => AlgScalar::Real(v[i].clone()).normalize(),
        }
    }

    pub fn entries(&self) -> Vec<AlgScalar> {
        (0..self.dim()).map(|i| self.get(i)).collect()
    }

    pub fn as_rational(&self) -> Option<&[Rat]> {
        match self {
            AlgVector::Rational(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AlgVector::Rational(v) => v.iter().all(Zero::is_zero),
            AlgVector::Field(_, v) => v.iter().all(NfElem::is_zero),
            AlgVector::General(v) => v.iter().all(RealAlg::is_zero),
        }
    }

    pub fn to_realalg_vec(&self) -> Vec<RealAlg> {
        self.entries().iter().map(AlgScalar::to_realalg).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries().iter().map(AlgScalar::to_f64).collect()
    }

    pub fn neg(&self) -> Self {
        match self {
            AlgVector::Rational(v) => AlgVector::Rational(v.iter().map(|x| -x).collect()),
            AlgVector::Field(k, v) => AlgVector::Field(k.clone(), v.iter().map(NfElem::neg).collect()),
            AlgVector::General(v) => AlgVector::General(v.iter().map(RealAlg::neg).collect()),
        }
    }

    /// `⟨self, v⟩` for a rational vector `v`.
    pub fn dot_rat(&self, v: &[Rat]) -> Result<AlgScalar, ExactError> {
        assert_eq!(self.dim(), v.len(), "dimension mismatch in inner product");
        Ok(match self {
            AlgVector::Rational(t) => AlgScalar::Rat(crate::exactnum::dot(t, v)),
            AlgVector::Field(k, t) => {
                let mut acc = NfElem::zero(k);
                for (a, b) in t.iter().zip(v) {
                    if !b.is_zero() {
                        acc = acc.add(&a.scale(b));
                    }
                }
                AlgScalar::Nf(acc).normalize()
            }
            AlgVector::General(t) => {
                let mut acc = AlgScalar::zero();
                for (a, b) in t.iter().zip(v) {
                    if !b.is_zero() {
                        acc = acc.add(&AlgScalar::Real(a.mul_rat(b)).normalize())?;
                    }
                }
                acc
            }
        })
    }

    /// `⟨self, v⟩` for a vector over a number field.
    pub fn dot_nf(&self, v: &[NfElem]) -> Result<AlgScalar, ExactError> {
        assert_eq!(self.dim(), v.len(), "dimension mismatch in inner product");
        if v.is_empty() {
            return Ok(AlgScalar::zero());
        }
        let k = v[0].field();
        match self {
            AlgVector::Rational(t) => {
                let mut acc = NfElem::zero(k);
                for (a, b) in t.iter().zip(v) {
                    if !a.is_zero() {
                        acc = acc.add(&b.scale(a));
                    }
                }
                Ok(AlgScalar::Nf(acc).normalize())
            }
            AlgVector::Field(k2, t) if same_field(k, k2) => {
                let mut acc = NfElem::zero(k);
                for (a, b) in t.iter().zip(v) {
                    acc = acc.add(&a.mul(b));
                }
                Ok(AlgScalar::Nf(acc).normalize())
            }
            _ => {
                let mut acc = AlgScalar::zero();
                for (a, b) in self.entries().iter().zip(v) {
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(&AlgScalar::Nf(b.clone()).normalize())?)?;
                }
                Ok(acc)
            }
        }
    }

    /// Exact test for `self = c · other` with `c > 0`.
    pub fn is_positive_multiple_of(&self, other: &Self) -> Result<bool, ExactError> {
        if self.dim() != other.dim() {
            return Ok(false);
        }
        if let (AlgVector::Rational(a), AlgVector::Rational(b)) = (self, other) {
            return Ok(primitive_direction(a) == primitive_direction(b));
        }
        let (a, b) = (self.entries(), other.entries());
        let mut pivot: Option<usize> = None;
        for i in 0..a.len() {
            let (za, zb) = (a[i].is_zero(), b[i].is_zero());
            if za != zb {
                return Ok(false);
            }
            if !za && pivot.is_none() {
                if a[i].sign() != b[i].sign() {
                    return Ok(false);
                }
                pivot = Some(i);
            }
        }
        let Some(p) = pivot else { return Ok(true) };
        // a_i b_p == b_i a_p for all i
        for i in 0..a.len() {
            if i == p || a[i].is_zero() {
                continue;
            }
            if !a[i].mul(&b[p])?.sub(&b[i].mul(&a[p])?)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Scales a rational vector to a primitive integer vector; other kinds
    /// are returned unchanged.
    pub fn canonical(&self) -> Self {
        match self {
            AlgVector::Rational(v) => AlgVector::Rational(primitive_direction(v)),
            other => other.clone(),
        }
    }

    /// Largest absolute entry bound, used for float prefilters.
    pub fn max_abs_f64(&self) -> f64 {
        self.to_f64().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn has_negative_entry(&self) -> bool {
        self.entries().iter().any(|e| e.sign() == Ordering::Less)
    }
}

impl From<Vec<Rat>> for AlgVector {
    fn from(v: Vec<Rat>) -> Self {
        AlgVector::Rational(v)
    }
}

impl Serialize for AlgVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_realalg_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<RealAlg>::deserialize(d)?;
        Ok(AlgVector::from_realalg(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, IntPoly};

    #[test]
    fn dot_products_and_multiples() {
        let s2 = RealAlg::from_root(&IntPoly::from_i64(&[-2, 0, 1]), int(1), int(2)).unwrap();
        let k = NumberField::new(s2.clone());
        let t = NfElem::generator(&k);
        let v = AlgVector::Field(k.clone(), vec![t.clone(), NfElem::one(&k)]);
        // ⟨(√2, 1), (√2, -1)⟩ via General path
        let g = AlgVector::General(vec![s2.clone(), RealAlg::from_i64(-1)]);
        let d = g.dot_nf(&[t.clone(), NfElem::one(&k)]).unwrap();
        assert_eq!(d.to_realalg(), RealAlg::from_i64(1));
        assert_eq!(v.dot_rat(&[int(1), int(0)]).unwrap().sign(), Ordering::Greater);
        let w = AlgVector::Field(k.clone(), vec![t.scale(&int(3)), NfElem::from_rat(&k, int(3))]);
        assert!(w.is_positive_multiple_of(&v).unwrap());
        assert!(!w.neg().is_positive_multiple_of(&v).unwrap());
        assert!(AlgVector::Rational(vec![int(2), int(4)])
            .is_positive_multiple_of(&AlgVector::Rational(vec![int(1), int(2)]))
            .unwrap());
    }
}
