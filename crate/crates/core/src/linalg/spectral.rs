//! Jordan–Chevalley data for matrices with real positive spectrum.
//!
//! `A = S + N` with `S` semisimple and `N` nilpotent, both rational
//! (Newton iteration on the squarefree part of the characteristic
//! polynomial). For each eigenvalue λ the spectral projector is
//! `Π_λ = q_λ(S) / p'(λ)` with `q_λ = p / (x − λ)`, evaluated in `Q(λ)`.
//! Then `A^n = Σ_λ Σ_j C(n, j) λ^n · λ^{-j} Π_λ N^j`.

use super::algvec::{AlgScalar, AlgVector};
use super::charpoly::charpoly;
use super::{Matrix, RatMatrix};
use crate::exactnum::{
    sturm_isolate_real_roots, ExactError, IntPoly, NfElem, NumberField, QPoly, RealAlg, Rat,
};
use num_traits::Zero;
use std::cmp::Ordering;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("matrix has a non-real eigenvalue")]
    NonRealEigenvalue,
    #[error("matrix has a non-positive eigenvalue {0}")]
    NonPositiveEigenvalue(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Debug)]
pub struct SpectralData {
    pub dim: usize,
    /// Ascending, all strictly positive.
    pub eigenvalues: Vec<RealAlg>,
    /// Algebraic multiplicity of each eigenvalue.
    pub multiplicities: Vec<usize>,
    /// `Q(λ_i)`.
    pub fields: Vec<Arc<NumberField>>,
    /// `λ_i` as the generator of its field.
    pub lambdas: Vec<NfElem>,
    pub projectors: Vec<Matrix<NfElem>>,
    pub semisimple: RatMatrix,
    pub nilpotent: RatMatrix,
    /// `bilinear[i][j] = λ_i^{-j} Π_i N^j` for `j < dim`.
    pub bilinear: Vec<Vec<Matrix<NfElem>>>,
}

fn eval_qpoly_at_matrix(p: &QPoly, m: &RatMatrix) -> RatMatrix {
    let mut acc = RatMatrix::zeros(m.rows(), m.cols());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(m).add(&RatMatrix::identity(m.rows()).scale(c));
    }
    acc
}

/// Semisimple part of `a` given the squarefree part `p` of its characteristic polynomial.
fn semisimple_part(a: &RatMatrix, p: &QPoly) -> RatMatrix {
    let dp = p.derivative();
    let mut s = a.clone();
    for _ in 0..=a.rows() + 1 {
        let ps = eval_qpoly_at_matrix(p, &s);
        if ps.is_zero_matrix() {
            return s;
        }
        let inv = eval_qpoly_at_matrix(&dp, &s).inverse().expect("p'(S) invertible during Newton iteration");
        s = s.sub(&ps.mul(&inv));
    }
    panic!("Newton iteration for the semisimple part did not converge");
}

pub fn spectral_decompose(a: &RatMatrix) -> Result<SpectralData, SpectralError> {
    assert!(a.is_square(), "spectral decomposition of a non-square matrix");
    let d = a.rows();
    let chi = charpoly(a);
    let chi_int = IntPoly::from_qpoly(&chi);
    let sqf = chi_int.squarefree_part();
    let p = sqf.to_qpoly().monic();

    let mut eig = Vec::new();
    for (part, mult) in chi_int.squarefree_decomposition() {
        let roots = sturm_isolate_real_roots(&part);
        if roots.len() < part.degree() {
            return Err(SpectralError::NonRealEigenvalue);
        }
        for r in roots {
            if r.sign() != Ordering::Greater {
                return Err(SpectralError::NonPositiveEigenvalue(format!("{r}")));
            }
            eig.push((r, mult));
        }
    }
    eig.sort_by(|x, y| x.0.cmp(&y.0));

    let s = semisimple_part(a, &p);
    let n = a.sub(&s);
    let mut s_pows = vec![RatMatrix::identity(d)];
    for k in 1..p.degree().max(1) {
        s_pows.push(s_pows[k - 1].mul(&s));
    }
    let mut n_pows = vec![RatMatrix::identity(d)];
    for j in 1..d {
        n_pows.push(n_pows[j - 1].mul(&n));
    }

    let mut out = SpectralData {
        dim: d,
        eigenvalues: Vec::new(),
        multiplicities: Vec::new(),
        fields: Vec::new(),
        lambdas: Vec::new(),
        projectors: Vec::new(),
        semisimple: s,
        nilpotent: n,
        bilinear: Vec::new(),
    };
    for (lambda, mult) in eig {
        let k = NumberField::new(lambda.clone());
        let l = NfElem::generator(&k);
        // q = p / (x - λ) by synthetic division, coefficients in Q(λ)
        let pc = p.coeffs();
        let deg = p.degree();
        let mut q = vec![NfElem::zero(&k); deg];
        let mut carry = NfElem::zero(&k);
        for i in (1..=deg).rev() {
            carry = NfElem::from_rat(&k, pc[i].clone()).add(&carry.mul(&l));
            q[i - 1] = carry.clone();
        }
        // p'(λ) is p' read as an element of Q(λ)
        let inv = NfElem::from_poly(&k, p.derivative()).inv()?;
        let mut proj = Matrix::from_fn(d, d, |_, _| NfElem::zero(&k));
        for (i, qi) in q.iter().enumerate() {
            let coef = qi.mul(&inv);
            if coef.is_zero() {
                continue;
            }
            let term = s_pows[i].to_field(&k).try_scale(&coef)?;
            proj = proj.try_add(&term)?;
        }
        let linv = l.inv()?;
        let mut b = Vec::with_capacity(d);
        let mut scale = NfElem::one(&k);
        for np in &n_pows {
            b.push(proj.try_mul(&np.to_field(&k))?.try_scale(&scale)?);
            scale = scale.mul(&linv);
        }
        out.eigenvalues.push(lambda);
        out.multiplicities.push(mult);
        out.fields.push(k);
        out.lambdas.push(l);
        out.projectors.push(proj);
        out.bilinear.push(b);
    }
    Ok(out)
}

/// `c[i][j] = τᵀ B_ij u`, so that `⟨A^n u, τ⟩ = Σ_ij C(n, j) λ_i^n c[i][j]`.
pub fn expand_inner_product(
    s: &SpectralData,
    u: &[Rat],
    tau: &AlgVector,
) -> Result<Vec<Vec<AlgScalar>>, ExactError> {
    let mut out = Vec::with_capacity(s.eigenvalues.len());
    for (i, k) in s.fields.iter().enumerate() {
        let uk: Vec<NfElem> = u.iter().map(|x| NfElem::from_rat(k, x.clone())).collect();
        let mut row = Vec::with_capacity(s.dim);
        for b in &s.bilinear[i] {
            if b.is_zero_matrix() || u.iter().all(Zero::is_zero) {
                row.push(AlgScalar::zero());
                continue;
            }
            let bu = b.try_mul_vec(&uk)?;
            row.push(tau.dot_nf(&bu)?);
        }
        out.push(row);
    }
    Ok(out)
}

impl SpectralData {
    /// `Σ_ij C(n, j) λ_i^n c[i][j]` evaluated exactly.
    pub fn evaluate_expansion(&self, c: &[Vec<AlgScalar>], n: usize) -> Result<RealAlg, ExactError> {
        let mut total = AlgScalar::zero();
        for (i, row) in c.iter().enumerate() {
            let ln = AlgScalar::Nf(self.lambdas[i].pow(n));
            for (j, cij) in row.iter().enumerate() {
                if cij.is_zero() || j > n {
                    continue;
                }
                let b = Rat::from_integer(binomial(n, j));
                total = total.add(&cij.mul(&ln)?.mul_rat(&b))?;
            }
        }
        Ok(total.to_realalg())
    }
}

pub fn binomial(n: usize, k: usize) -> num_bigint::BigInt {
    if k > n {
        return num_bigint::BigInt::zero();
    }
    let mut r = num_bigint::BigInt::from(1);
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn nf_matrix_is(m: &Matrix<NfElem>, expect: &RatMatrix) -> bool {
        (0..m.rows()).all(|r| (0..m.cols()).all(|c| m.get(r, c).as_rat().as_ref() == Some(expect.get(r, c))))
    }

    #[test]
    fn diagonal_example() {
        let s = spectral_decompose(&RatMatrix::diag(&[rat(1, 3), rat(2, 3)])).unwrap();
        assert_eq!(s.eigenvalues, vec![RealAlg::from_rat(rat(1, 3)), RealAlg::from_rat(rat(2, 3))]);
        assert!(nf_matrix_is(&s.projectors[0], &RatMatrix::diag(&[int(1), int(0)])));
        assert!(nf_matrix_is(&s.projectors[1], &RatMatrix::diag(&[int(0), int(1)])));
        assert!(s.nilpotent.is_zero_matrix());
    }

    #[test]
    fn scalar_and_jordan_examples() {
        let s = spectral_decompose(&RatMatrix::identity(2).scale(&rat(1, 2))).unwrap();
        assert_eq!(s.eigenvalues.len(), 1);
        assert!(nf_matrix_is(&s.projectors[0], &RatMatrix::identity(2)));
        let j = RatMatrix::from_rows(vec![vec![rat(1, 2), int(1)], vec![int(0), rat(1, 2)]]);
        let s = spectral_decompose(&j).unwrap();
        assert_eq!(s.multiplicities, vec![2]);
        assert!(nf_matrix_is(&s.projectors[0], &RatMatrix::identity(2)));
        assert_eq!(s.nilpotent, RatMatrix::from_i64(&[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn expansion_examples() {
        let s = spectral_decompose(&RatMatrix::diag(&[rat(1, 3), rat(2, 3)])).unwrap();
        let c = expand_inner_product(&s, &[int(2), int(1)], &AlgVector::Rational(vec![int(1), int(0)])).unwrap();
        assert_eq!(c[0][0].to_realalg(), RealAlg::from_i64(2));
        assert!(c[1].iter().all(AlgScalar::is_zero));
        assert!(c[0][1..].iter().all(AlgScalar::is_zero));
        let j = RatMatrix::from_rows(vec![vec![rat(1, 2), int(1)], vec![int(0), rat(1, 2)]]);
        let s = spectral_decompose(&j).unwrap();
        let c = expand_inner_product(&s, &[int(0), int(1)], &AlgVector::Rational(vec![int(1), int(0)])).unwrap();
        assert_eq!(c[0][1].to_realalg(), RealAlg::from_i64(2));
        for n in 0..=10 {
            let direct = j.pow(n).mul_vec(&[int(0), int(1)])[0].clone();
            assert_eq!(s.evaluate_expansion(&c, n).unwrap(), RealAlg::from_rat(direct));
        }
    }

    #[test]
    fn irrational_spectrum_projectors() {
        // eigenvalues (1 ± √(1/2))/2·… : [[1/2, 1/4], [1/2, 1/4]]+… use a symmetric matrix with irrational roots
        let a = RatMatrix::from_rows(vec![vec![rat(1, 2), rat(1, 4)], vec![rat(1, 4), rat(1, 4)]]);
        let s = spectral_decompose(&a).unwrap();
        assert_eq!(s.eigenvalues.len(), 2);
        assert!(s.eigenvalues.iter().all(|e| !e.is_rational()));
        // Π_1 Π_2 = 0 and Π_i^2 = Π_i in each field
        for p in &s.projectors {
            assert_eq!(p.try_mul(p).unwrap().entries().iter().zip(p.entries()).all(|(x, y)| x.sub(y).is_zero()), true);
        }
        let u = [int(1), int(-2)];
        let tau = AlgVector::Rational(vec![int(3), int(1)]);
        let c = expand_inner_product(&s, &u, &tau).unwrap();
        for n in 0..8 {
            let direct = crate::exactnum::dot(&a.pow(n).mul_vec(&u), tau.as_rational().unwrap());
            assert_eq!(s.evaluate_expansion(&c, n).unwrap(), RealAlg::from_rat(direct));
        }
    }
}
