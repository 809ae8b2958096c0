//! Exact numeric substrate: arbitrary-precision rationals, integer
//! polynomials, real algebraic numbers and simple real number fields.
//!
//! Every other module builds on these types. Nothing in here ever rounds;
//! floating point appears only in `approx_f64` helpers used for rendering
//! and diagnostics.

mod factor;
mod field;
mod poly;
mod realalg;

pub use factor::{factor_squarefree, irreducible_factors};
pub use field::{NfElem, NumberField};
pub use poly::{resultant, IntPoly, QPoly, SturmSequence};
pub use realalg::{
    alg_arith, alg_arith_with_ceiling, sturm_isolate_real_roots, AlgOp, Interval, RealAlg, RealAlgJson,
    DEFAULT_DEGREE_CEILING,
};

pub fn alg_sign(a: &RealAlg) -> std::cmp::Ordering {
    a.sign()
}

pub fn alg_compare(a: &RealAlg, b: &RealAlg) -> std::cmp::Ordering {
    a.cmp_alg(b)
}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;
use thiserror::Error;

/// Exact rational scalar. Always in lowest terms with a positive denominator.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("algebraic degree {needed} exceeds the configured ceiling {ceiling}")]
    DegreeCeiling { needed: usize, ceiling: usize },
    #[error("invalid algebraic number: {0}")]
    InvalidAlgebraic(String),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` (integers only, no decimal point).
pub fn parse_rat(text: &str) -> Result<Rat, ExactError> {
    let t = text.trim();
    let bad = || ExactError::ParseRational(t.to_string());
    let valid_int = |s: &str| {
        let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    match t.split_once('/') {
        Some((n, d)) => {
            if !valid_int(n) || !valid_int(d) {
                return Err(bad());
            }
            let n = BigInt::from_str(n).map_err(|_| bad())?;
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => {
            if !valid_int(t) {
                return Err(bad());
            }
            Ok(Rat::from_integer(BigInt::from_str(t).map_err(|_| bad())?))
        }
    }
}

/// Formats a rational as `"p"` or `"p/q"`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Very large numerators/denominators: scale through logarithms.
        let n = r.numer().abs();
        let d = r.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(900);
        let n = (&n >> shift).to_f64().unwrap_or(f64::MAX);
        let d = (d >> shift).to_f64().unwrap_or(f64::MAX);
        let v = n / d;
        if r.is_negative() {
            -v
        } else {
            v
        }
    })
}

/// Dot product of two rational vectors of equal length.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Scales a nonzero rational vector to the primitive integer vector with the
/// same direction. The zero vector is returned unchanged.
pub fn primitive_direction(v: &[Rat]) -> Vec<Rat> {
    use num_integer::Integer;
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rat::from_integer(x / &g)).collect()
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod ser {
    use super::{fmt_rat, parse_rat, Rat};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub mod rat {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&fmt_rat(r))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
            let t = String::deserialize(d)?;
            parse_rat(&t).map_err(D::Error::custom)
        }
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(fmt_rat))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
            let t = Vec::<String>::deserialize(d)?;
            t.iter().map(|x| parse_rat(x).map_err(D::Error::custom)).collect()
        }
    }

    pub mod vecs {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(|r| r.iter().map(fmt_rat).collect::<Vec<_>>()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
            let t = Vec::<Vec<String>>::deserialize(d)?;
            t.iter()
                .map(|r| r.iter().map(|x| parse_rat(x).map_err(D::Error::custom)).collect())
                .collect()
        }
    }
}
