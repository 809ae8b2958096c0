//! Non-reachability certificates for simple systems: separating directions
//! τ with `sup ⟨A^∞(U), τ⟩ ≤ min ⟨Q, τ⟩`, checked exactly.

mod candidates;
mod classify;
mod enumerate;

pub use candidates::{dom_space, extremal_candidates, CandidateStream, DomSpace};
pub use classify::{classify_sequence, eventual_maximizer, tail_dominates, SeqClass, SeqKind};
pub use enumerate::{enumerate_algebraic_vectors, AlgebraicVectors};

use crate::exactnum::{ser, ExactError, RealAlg, Rat};
use crate::geometry::GenPolyhedron;
use crate::linalg::{AlgScalar, AlgVector, SpectralData};
use classify::transition_matrix;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeparatorCertificate {
    pub tau: AlgVector,
    pub bound: RealAlg,
    #[serde(with = "ser::vec")]
    pub maximizer: Vec<Rat>,
    pub threshold: usize,
    pub sup_value: RealAlg,
    pub min_over_q: RealAlg,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("certificate direction is zero")]
    ZeroDirection,
    #[error("direction has dimension {found}, system has {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("maximizer is not a vertex of the control polytope")]
    NotAVertex,
    #[error("maximizer is eventually beaten by vertex {0:?}")]
    NotMaximal(Vec<String>),
    #[error("vertex {vertex:?} needs threshold {needed}, certificate states {stated}")]
    ThresholdTooSmall { vertex: Vec<String>, needed: usize, stated: usize },
    #[error("recomputed supremum differs from the stated value")]
    SupMismatch,
    #[error("recomputed target minimum differs from the stated value")]
    MinMismatch,
    #[error("stated bound does not equal the supremum")]
    BoundMismatch,
    #[error("supremum exceeds the target minimum")]
    NotSeparating,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn max_scalar(xs: impl IntoIterator<Item = AlgScalar>) -> Result<AlgScalar, ExactError> {
    let mut best: Option<AlgScalar> = None;
    for x in xs {
        best = Some(match best {
            Some(b) if b.cmp_scalar(&x)? != Ordering::Less => b,
            _ => x,
        });
    }
    Ok(best.unwrap_or_else(AlgScalar::zero))
}

/// `Σ_{i<N} max_v ⟨A^i v, τ⟩ + ⟨A^N (I−A)^{-1} u, τ⟩`.
fn sup_with(
    s: &SpectralData,
    u: &GenPolyhedron,
    tau: &AlgVector,
    maximizer: &[Rat],
    n: usize,
) -> Result<AlgScalar, ExactError> {
    let a = transition_matrix(s);
    let d = a.rows();
    let resolvent = crate::linalg::RatMatrix::identity(d)
        .sub(&a)
        .inverse()
        .ok_or(ExactError::DivisionByZero)?;
    let mut total = AlgScalar::zero();
    let mut images: Vec<Vec<Rat>> = u.vertices().to_vec();
    for _ in 0..n {
        let vals = images.iter().map(|v| tau.dot_rat(v)).collect::<Result<Vec<_>, _>>()?;
        total = total.add(&max_scalar(vals)?)?;
        images = images.iter().map(|v| a.mul_vec(v)).collect();
    }
    let tail = a.pow(n).mul_vec(&resolvent.mul_vec(maximizer));
    total.add(&tau.dot_rat(&tail)?)
}

fn min_over(q: &GenPolyhedron, tau: &AlgVector) -> Result<AlgScalar, ExactError> {
    let vals = q.vertices().iter().map(|v| tau.dot_rat(v).map(|x| x.neg())).collect::<Result<Vec<_>, _>>()?;
    Ok(max_scalar(vals)?.neg())
}

/// Exact supremum of `⟨x, τ⟩` over the closure of the reachable set from 0.
pub fn sup_in_direction(s: &SpectralData, u: &GenPolyhedron, tau: &AlgVector) -> Result<RealAlg, ExactError> {
    let (m, n) = eventual_maximizer(s, u, tau)?;
    Ok(sup_with(s, u, tau, &m, n)?.to_realalg())
}

/// A certificate iff `sup ⟨A^∞(U), τ⟩ ≤ min ⟨Q, τ⟩`; the reachable set is
/// open, so equality still separates.
pub fn verify_separator(
    s: &SpectralData,
    u: &GenPolyhedron,
    q: &GenPolyhedron,
    tau: &AlgVector,
) -> Result<Option<SeparatorCertificate>, ExactError> {
    if tau.is_zero() {
        return Ok(None);
    }
    let (maximizer, threshold) = eventual_maximizer(s, u, tau)?;
    let sup = sup_with(s, u, tau, &maximizer, threshold)?;
    let min = min_over(q, tau)?;
    if sup.cmp_scalar(&min)? == Ordering::Greater {
        return Ok(None);
    }
    let sup_value = sup.to_realalg();
    Ok(Some(SeparatorCertificate {
        tau: tau.clone(),
        bound: sup_value.clone(),
        maximizer,
        threshold,
        sup_value,
        min_over_q: min.to_realalg(),
    }))
}

fn show(v: &[Rat]) -> Vec<String> {
    v.iter().map(crate::exactnum::fmt_rat).collect()
}

/// Re-derives every claim of a certificate from `(τ, maximizer, threshold)`.
pub fn audit_certificate(
    s: &SpectralData,
    u: &GenPolyhedron,
    q: &GenPolyhedron,
    cert: &SeparatorCertificate,
) -> Result<(), AuditError> {
    let tau = &cert.tau;
    if tau.dim() != s.dim {
        return Err(AuditError::Dimension { expected: s.dim, found: tau.dim() });
    }
    if tau.is_zero() {
        return Err(AuditError::ZeroDirection);
    }
    if !u.vertices().iter().any(|v| *v == cert.maximizer) {
        return Err(AuditError::NotAVertex);
    }
    for v in u.vertices() {
        let c = classify_sequence(s, &cert.maximizer, v, tau)?;
        match c.kind {
            SeqKind::UltimatelyNegative => return Err(AuditError::NotMaximal(show(v))),
            SeqKind::UltimatelyPositive => {
                let needed = c.threshold.unwrap_or(0);
                if needed > cert.threshold {
                    return Err(AuditError::ThresholdTooSmall { vertex: show(v), needed, stated: cert.threshold });
                }
            }
            SeqKind::IdenticallyZero => {}
        }
    }
    let sup = sup_with(s, u, tau, &cert.maximizer, cert.threshold)?.to_realalg();
    if sup.cmp_alg(&cert.sup_value) != Ordering::Equal {
        return Err(AuditError::SupMismatch);
    }
    if cert.bound.cmp_alg(&sup) != Ordering::Equal {
        return Err(AuditError::BoundMismatch);
    }
    let min = min_over(q, tau)?.to_realalg();
    if min.cmp_alg(&cert.min_over_q) != Ordering::Equal {
        return Err(AuditError::MinMismatch);
    }
    if sup.cmp_alg(&min) == Ordering::Greater {
        return Err(AuditError::NotSeparating);
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::forward::partial_sum_max;
    use crate::linalg::{spectral_decompose, RatMatrix};

    pub(crate) fn fig() -> (RatMatrix, SpectralData, GenPolyhedron) {
        let a = RatMatrix::diag(&[rat(1, 3), rat(2, 3)]);
        let s = spectral_decompose(&a).unwrap();
        let u = GenPolyhedron::polytope(
            [[-2, -1], [0, -1], [0, 1], [2, 1]].iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect(),
        );
        (a, s, u)
    }

    fn dir(x: i64, y: i64) -> AlgVector {
        AlgVector::Rational(vec![int(x), int(y)])
    }

    #[test]
    fn suprema_match_partial_sums() {
        let (a, s, u) = fig();
        for t in [dir(1, 0), dir(0, 1)] {
            let sup = sup_in_direction(&s, &u, &t).unwrap();
            assert_eq!(sup.as_rat(), Some(&int(3)));
            let tr = t.as_rational().unwrap();
            let mut prev = None;
            for n in 0..=12 {
                let m = partial_sum_max(&a, &u, n, tr).unwrap();
                assert!(m < int(3));
                assert!(prev.is_none_or(|p| p <= m));
                prev = Some(m);
            }
        }
        assert!(sup_in_direction(&s, &u, &dir(0, 0)).unwrap().is_zero());
        // (1,1): maxima 2(1/3)^i + (2/3)^i at vertex (2,1)
        assert_eq!(sup_in_direction(&s, &u, &dir(1, 1)).unwrap().as_rat(), Some(&int(6)));
    }

    #[test]
    fn separators() {
        let (_, s, u) = fig();
        let pts = |v: &[[i64; 2]]| v.iter().map(|p| vec![int(p[0]), int(p[1])]).collect::<Vec<_>>();
        let sq = GenPolyhedron::polytope(pts(&[[-1, 4], [1, 4], [1, 5], [-1, 5]]));
        let c = verify_separator(&s, &u, &sq, &dir(0, 1)).unwrap().unwrap();
        assert_eq!(c.sup_value.as_rat(), Some(&int(3)));
        assert_eq!(c.min_over_q.as_rat(), Some(&int(4)));
        audit_certificate(&s, &u, &sq, &c).unwrap();

        let pt = GenPolyhedron::point(vec![int(0), int(3)]);
        let c = verify_separator(&s, &u, &pt, &dir(0, 1)).unwrap().unwrap();
        assert_eq!(c.sup_value.as_rat(), Some(&int(3)));
        assert_eq!(c.min_over_q.as_rat(), Some(&int(3)));
        audit_certificate(&s, &u, &pt, &c).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: SeparatorCertificate = serde_json::from_str(&json).unwrap();
        audit_certificate(&s, &u, &pt, &back).unwrap();

        assert!(verify_separator(&s, &u, &GenPolyhedron::origin(2), &dir(0, 1)).unwrap().is_none());
        assert!(verify_separator(&s, &u, &pt, &dir(0, 0)).unwrap().is_none());
    }

    #[test]
    fn audit_rejects_tampering() {
        let (_, s, u) = fig();
        let pt = GenPolyhedron::point(vec![int(0), int(3)]);
        let c = verify_separator(&s, &u, &pt, &dir(0, 1)).unwrap().unwrap();
        let mut bad = c.clone();
        bad.maximizer = vec![int(0), int(-1)];
        assert!(matches!(audit_certificate(&s, &u, &pt, &bad), Err(AuditError::NotMaximal(_))));
        let mut bad = c.clone();
        bad.maximizer = vec![int(1), int(1)];
        assert_eq!(audit_certificate(&s, &u, &pt, &bad), Err(AuditError::NotAVertex));
        let mut bad = c.clone();
        bad.sup_value = RealAlg::from_rat(rat(5, 2));
        assert_eq!(audit_certificate(&s, &u, &pt, &bad), Err(AuditError::SupMismatch));
        let lower = GenPolyhedron::point(vec![int(0), rat(29, 10)]);
        let mut bad = c.clone();
        bad.min_over_q = RealAlg::from_rat(rat(29, 10));
        assert_eq!(audit_certificate(&s, &u, &lower, &bad), Err(AuditError::NotSeparating));
    }

    #[test]
    fn irrational_direction_certificate() {
        let (_, s, u) = fig();
        // τ = (1, √2): sup = 3 + 3√2 at vertex (2,1); target on the level set
        let r2 = RealAlg::from_root(&crate::exactnum::IntPoly::from_i64(&[-2, 0, 1]), int(1), int(2)).unwrap();
        let tau = AlgVector::from_realalg(vec![RealAlg::one(), r2.clone()]);
        let q = GenPolyhedron::point(vec![int(3), int(3)]);
        let c = verify_separator(&s, &u, &q, &tau).unwrap().unwrap();
        let expect = r2.mul_rat(&int(3)).add_rat(&int(3));
        assert_eq!(c.sup_value.cmp_alg(&expect), Ordering::Equal);
        audit_certificate(&s, &u, &q, &c).unwrap();
    }
}
