//! Sign classification of `s_n = ⟨A^n (v − w), τ⟩` from its exponential-
//! polynomial expansion, and eventual τ-maximizing vertices.

use crate::exactnum::{ExactError, Interval, Rat};
use crate::geometry::GenPolyhedron;
use crate::linalg::{binomial, expand_inner_product, AlgScalar, AlgVector, RatMatrix, SpectralData};
use num_traits::{One, Signed};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqKind {
    IdenticallyZero,
    UltimatelyPositive,
    UltimatelyNegative,
}

#[derive(Clone, Debug)]
pub struct SeqClass {
    pub kind: SeqKind,
    /// Least `N` with `sign(s_n)` equal to the eventual sign for all `n ≥ N`.
    pub threshold: Option<usize>,
    /// `N` from which the dominant term outweighs the sum of all others.
    pub dominance_threshold: Option<usize>,
    /// `(i, j)`: eigenvalue index and binomial degree of the dominant term.
    pub dominant: Option<(usize, usize)>,
    pub coefficients: Vec<Vec<AlgScalar>>,
}

impl SeqClass {
    pub fn is_nonnegative_eventually(&self) -> bool {
        self.kind != SeqKind::UltimatelyNegative
    }
}

pub(crate) fn transition_matrix(s: &SpectralData) -> RatMatrix {
    s.semisimple.add(&s.nilpotent)
}

fn sub(v: &[Rat], w: &[Rat]) -> Vec<Rat> {
    v.iter().zip(w).map(|(a, b)| a - b).collect()
}

/// `(lo, hi)` with `0 < lo ≤ |x| ≤ hi`; `x` must be nonzero.
fn abs_bounds(x: &AlgScalar) -> (Rat, Rat) {
    let mut k = 0;
    loop {
        let iv = x.enclosure(k);
        let (lo, hi) = if iv.lo.is_positive() {
            (iv.lo.clone(), iv.hi.clone())
        } else if iv.hi.is_negative() {
            (-iv.hi.clone(), -iv.lo.clone())
        } else {
            k += 4;
            continue;
        };
        if (&hi - &lo) * Rat::from_integer(8.into()) <= lo || k > 400 {
            return (lo, hi);
        }
        k += 4;
    }
}

fn eigen_interval(s: &SpectralData, i: usize, k: usize) -> Interval {
    let mut r = s.eigenvalues[i].clone();
    for _ in 0..k {
        r = r.refine();
    }
    r.interval()
}

/// Rational `ρ ≥ λ_t / λ_0` with `ρ < 1`, for `λ_t < λ_0`, with a short dyadic form.
fn ratio_upper(s: &SpectralData, t: usize, i0: usize) -> Rat {
    let mut k = 0;
    let (hi, lo) = loop {
        let a = eigen_interval(s, t, k);
        let b = eigen_interval(s, i0, k);
        if b.lo.is_positive() {
            let hi = &a.hi / &b.lo;
            let lo = &a.lo / &b.hi;
            let one = Rat::one();
            if hi < one && ((&hi - &lo) * Rat::from_integer(4.into()) <= &one - &hi || k > 400) {
                break (hi, lo);
            }
        }
        k += 4;
    };
    debug_assert!(lo <= hi);
    let gap = Rat::one() - &hi;
    let mut e = 4u32;
    loop {
        let den = num_bigint::BigInt::one() << e;
        let scaled = (&hi * Rat::from_integer(den.clone())).ceil();
        let r = scaled / Rat::from_integer(den);
        if r < Rat::one() && (&r - &hi) * Rat::from_integer(4.into()) <= gap {
            return r;
        }
        e += 4;
    }
}

fn binom_rat(n: usize, k: usize) -> Rat {
    Rat::from_integer(binomial(n, k))
}

/// Least `N ≥ start` with `pred(n)` for every `n ≥ N`, given that `pred`
/// is monotone (false then true) on `[start, ∞)`.
fn first_true_from(start: usize, pred: impl Fn(usize) -> bool) -> usize {
    if pred(start) {
        return start;
    }
    let mut bad = start;
    let mut step = 1usize;
    let good = loop {
        let n = start + step;
        if pred(n) {
            break n;
        }
        bad = n;
        step *= 2;
    };
    let (mut lo, mut hi) = (bad, good);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Index from which `|c_0| C(n, j_0) λ_0^n > Σ_others |c_t| C(n, j_t) λ_t^n`,
/// certified through rational upper bounds on each ratio term that are
/// strictly decreasing past a computable index.
fn dominance_threshold(s: &SpectralData, coeffs: &[Vec<AlgScalar>], dom: (usize, usize)) -> usize {
    let (i0, j0) = dom;
    let others: Vec<(usize, usize)> = coeffs
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(j, _)| (i, j)))
        .filter(|&t| t != dom)
        .collect();
    if others.is_empty() {
        return j0;
    }
    let m = Rat::from_integer(others.len().into());
    let (c0_lo, _) = abs_bounds(&coeffs[i0][j0]);
    let mut n_dom = j0;
    for &(it, jt) in &others {
        let (_, ct_hi) = abs_bounds(&coeffs[it][jt]);
        let rho = if it == i0 { Rat::one() } else { ratio_upper(s, it, i0) };
        let jmax = j0.max(jt);
        // B(n+1)/B(n) = ρ (n+1-j0)/(n+1-jt) < 1 from n_dec on
        let n_dec = if rho.is_one() {
            jmax
        } else {
            let x = (Rat::from_integer(jt.into()) - &rho * Rat::from_integer(j0.into())) / (Rat::one() - &rho);
            let f = x.floor().to_integer();
            let f: usize = if f.is_negative() { 0 } else { f.try_into().unwrap_or(usize::MAX / 4) };
            jmax.max(f)
        };
        let lhs_coeff = &m * &ct_hi;
        let bound_ok = |n: usize| -> bool {
            let lhs = &lhs_coeff * binom_rat(n, jt) * pow_rat(&rho, n);
            lhs < &c0_lo * binom_rat(n, j0)
        };
        n_dom = n_dom.max(first_true_from(n_dec, bound_ok));
    }
    n_dom
}

fn pow_rat(r: &Rat, n: usize) -> Rat {
    if r.is_one() {
        return Rat::one();
    }
    num_traits::pow::pow(r.clone(), n)
}

/// Classifies `s_n = ⟨A^n (v − w), τ⟩` as identically zero, ultimately
/// positive or ultimately negative, with verified thresholds.
pub fn classify_sequence(
    s: &SpectralData,
    v: &[Rat],
    w: &[Rat],
    tau: &AlgVector,
) -> Result<SeqClass, ExactError> {
    let diff = sub(v, w);
    let coeffs = expand_inner_product(s, &diff, tau)?;
    let mut dominant = None;
    for (i, row) in coeffs.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                dominant = Some((i, j));
            }
        }
    }
    let Some((i0, j0)) = dominant else {
        return Ok(SeqClass {
            kind: SeqKind::IdenticallyZero,
            threshold: None,
            dominance_threshold: None,
            dominant: None,
            coefficients: coeffs,
        });
    };
    let sign = coeffs[i0][j0].sign();
    let kind = if sign == Ordering::Greater { SeqKind::UltimatelyPositive } else { SeqKind::UltimatelyNegative };
    let n_dom = dominance_threshold(s, &coeffs, (i0, j0));

    // tighten: walk down from n_dom while the exact sign still agrees
    let a = transition_matrix(s);
    let mut xs = Vec::with_capacity(n_dom);
    let mut x = diff;
    for _ in 0..n_dom {
        xs.push(x.clone());
        x = a.mul_vec(&x);
    }
    let mut threshold = n_dom;
    while threshold > 0 {
        let sn = tau.dot_rat(&xs[threshold - 1])?;
        if sn.sign() != sign {
            break;
        }
        threshold -= 1;
    }
    Ok(SeqClass {
        kind,
        threshold: Some(threshold),
        dominance_threshold: Some(n_dom),
        dominant: Some((i0, j0)),
        coefficients: coeffs,
    })
}

/// Exact check of the tail-domination inequality at `n`.
pub fn tail_dominates(s: &SpectralData, cls: &SeqClass, n: usize) -> Result<bool, ExactError> {
    let Some((i0, j0)) = cls.dominant else { return Ok(true) };
    let term = |i: usize, j: usize| -> Result<AlgScalar, ExactError> {
        let c = &cls.coefficients[i][j];
        let c = if c.sign() == Ordering::Less { c.neg() } else { c.clone() };
        Ok(c.mul(&AlgScalar::Nf(s.lambdas[i].pow(n)))?.mul_rat(&binom_rat(n, j)))
    };
    let lead = term(i0, j0)?;
    let mut rest = AlgScalar::zero();
    for (i, row) in cls.coefficients.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if (i, j) != (i0, j0) && !c.is_zero() {
                rest = rest.add(&term(i, j)?)?;
            }
        }
    }
    Ok(lead.cmp_scalar(&rest)? == Ordering::Greater)
}

/// An eventually τ-maximizing vertex of `u` (lexicographically first among
/// equivalent ones) and the index from which it maximizes `⟨A^i ·, τ⟩`.
pub fn eventual_maximizer(
    s: &SpectralData,
    u: &GenPolyhedron,
    tau: &AlgVector,
) -> Result<(Vec<Rat>, usize), ExactError> {
    let vs = u.vertices();
    let mut best = 0;
    for k in 1..vs.len() {
        if classify_sequence(s, &vs[k], &vs[best], tau)?.kind == SeqKind::UltimatelyPositive {
            best = k;
        }
    }
    let mut n = 0;
    for (k, v) in vs.iter().enumerate() {
        if k == best {
            continue;
        }
        let c = classify_sequence(s, &vs[best], v, tau)?;
        debug_assert!(c.is_nonnegative_eventually());
        n = n.max(c.threshold.unwrap_or(0));
    }
    Ok((vs[best].clone(), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::linalg::spectral_decompose;

    fn fig() -> (SpectralData, GenPolyhedron) {
        let s = spectral_decompose(&RatMatrix::diag(&[rat(1, 3), rat(2, 3)])).unwrap();
        let u = GenPolyhedron::polytope(
            [[-2, -1], [0, -1], [0, 1], [2, 1]].iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect(),
        );
        (s, u)
    }

    fn v(x: i64, y: i64) -> Vec<Rat> {
        vec![int(x), int(y)]
    }

    #[test]
    fn fig_classifications() {
        let (s, _) = fig();
        let tau = AlgVector::Rational(v(1, 0));
        let c = classify_sequence(&s, &v(2, 1), &v(0, 1), &tau).unwrap();
        assert_eq!(c.kind, SeqKind::UltimatelyPositive);
        assert_eq!(c.threshold, Some(0));
        let c = classify_sequence(&s, &v(2, 1), &v(2, 1), &tau).unwrap();
        assert_eq!(c.kind, SeqKind::IdenticallyZero);
        let c = classify_sequence(&s, &v(2, 1), &v(0, 1), &AlgVector::Rational(v(-1, 1))).unwrap();
        assert_eq!(c.kind, SeqKind::UltimatelyNegative);
    }

    #[test]
    fn late_sign_change_has_tight_threshold() {
        // s_n = 10 (1/2)^n - (3/4)^n: negative eventually, positive for small n
        let a = RatMatrix::diag(&[rat(1, 2), rat(3, 4)]);
        let s = spectral_decompose(&a).unwrap();
        let tau = AlgVector::Rational(v(1, 1));
        let c = classify_sequence(&s, &[int(10), int(-1)], &v(0, 0), &tau).unwrap();
        assert_eq!(c.kind, SeqKind::UltimatelyNegative);
        // oracle: direct evaluation; 10 (2/3)^n < 1 first at n = 6
        let sn = |n: i32| int(10) * rat(1, 2).pow(n) - rat(3, 4).pow(n);
        let first_neg = (0..100).find(|&n| (n..n + 50).all(|m| sn(m) < int(0))).unwrap();
        assert_eq!(c.threshold, Some(first_neg as usize));
        let nd = c.dominance_threshold.unwrap();
        for n in [nd, nd + 1, nd + 7] {
            assert!(tail_dominates(&s, &c, n).unwrap());
        }
    }

    #[test]
    fn jordan_block_dominance() {
        let a = RatMatrix::from_rows(vec![vec![rat(1, 2), int(1)], vec![int(0), rat(1, 2)]]);
        let s = spectral_decompose(&a).unwrap();
        // s_n = -5 (1/2)^n + 2n (1/2)^n : the n (1/2)^n term dominates
        let tau = AlgVector::Rational(v(1, 0));
        let c = classify_sequence(&s, &[int(-5), int(1)], &v(0, 0), &tau).unwrap();
        assert_eq!(c.kind, SeqKind::UltimatelyPositive);
        assert_eq!(c.dominant, Some((0, 1)));
        assert_eq!(c.threshold, Some(3));
    }

    #[test]
    fn maximizers() {
        let (s, u) = fig();
        assert_eq!(eventual_maximizer(&s, &u, &AlgVector::Rational(v(1, 0))).unwrap(), (v(2, 1), 0));
        assert_eq!(eventual_maximizer(&s, &u, &AlgVector::Rational(v(0, 1))).unwrap(), (v(0, 1), 0));
        assert_eq!(eventual_maximizer(&s, &u, &AlgVector::Rational(v(0, 0))).unwrap(), (v(-2, -1), 0));
    }
}
