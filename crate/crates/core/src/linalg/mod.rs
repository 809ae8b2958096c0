//! Exact matrices over Q, over real number fields and over real algebraic
//! numbers, plus the spectral machinery built on them.

mod algvec;
mod charpoly;
mod spectral;
mod subspace;

pub use algvec::{AlgScalar, AlgVector};
pub use charpoly::{charpoly, charpoly_int, real_spectrum_power, real_spectrum_power_bound, schur_stable};
pub use spectral::{binomial, expand_inner_product, spectral_decompose, SpectralData, SpectralError};
pub use subspace::{column_basis, coordinates, fitting_split, krylov_invariant_span};

use crate::exactnum::{ExactError, NfElem, RealAlg, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Field operations needed by generic elimination.
pub trait Scalar: Clone + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Result<Self, ExactError>;
    fn sub(&self, o: &Self) -> Result<Self, ExactError>;
    fn mul(&self, o: &Self) -> Result<Self, ExactError>;
    fn div(&self, o: &Self) -> Result<Self, ExactError>;
    fn neg(&self) -> Self;
}

impl Scalar for Rat {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn add(&self, o: &Self) -> Result<Self, ExactError> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self) -> Result<Self, ExactError> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Result<Self, ExactError> {
        Ok(self * o)
    }
    fn div(&self, o: &Self) -> Result<Self, ExactError> {
        if Zero::is_zero(o) {
            Err(ExactError::DivisionByZero)
        } else {
            Ok(self / o)
        }
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Scalar for NfElem {
    fn is_zero(&self) -> bool {
        NfElem::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        NfElem::zero(self.field())
    }
    fn one_like(&self) -> Self {
        NfElem::one(self.field())
    }
    fn add(&self, o: &Self) -> Result<Self, ExactError> {
        Ok(NfElem::add(self, o))
    }
    fn sub(&self, o: &Self) -> Result<Self, ExactError> {
        Ok(NfElem::sub(self, o))
    }
    fn mul(&self, o: &Self) -> Result<Self, ExactError> {
        Ok(NfElem::mul(self, o))
    }
    fn div(&self, o: &Self) -> Result<Self, ExactError> {
        NfElem::div(self, o)
    }
    fn neg(&self) -> Self {
        NfElem::neg(self)
    }
}

impl Scalar for RealAlg {
    fn is_zero(&self) -> bool {
        RealAlg::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        RealAlg::zero()
    }
    fn one_like(&self) -> Self {
        RealAlg::one()
    }
    fn add(&self, o: &Self) -> Result<Self, ExactError> {
        RealAlg::add(self, o)
    }
    fn sub(&self, o: &Self) -> Result<Self, ExactError> {
        RealAlg::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Result<Self, ExactError> {
        RealAlg::mul(self, o)
    }
    fn div(&self, o: &Self) -> Result<Self, ExactError> {
        RealAlg::div(self, o)
    }
    fn neg(&self) -> Self {
        RealAlg::neg(self)
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rat>;

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_cols(rows: usize, cols: &[Vec<T>]) -> Self {
        Self::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn try_mul(&self, o: &Self) -> Result<Self, ExactError> {
        assert_eq!(self.cols, o.rows, "dimension mismatch in matrix product");
        let zero = self.data.first().or(o.data.first()).map(|x| x.zero_like());
        let mut data = Vec::with_capacity(self.rows * o.cols);
        for r in 0..self.rows {
            for c in 0..o.cols {
                let mut acc: Option<T> = None;
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    let b = o.get(k, c);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let p = a.mul(b)?;
                    acc = Some(match acc {
                        None => p,
                        Some(x) => x.add(&p)?,
                    });
                }
                data.push(acc.unwrap_or_else(|| zero.clone().expect("scalar context for empty product")));
            }
        }
        Ok(Self { rows: self.rows, cols: o.cols, data })
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, ExactError> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect::<Result<_, _>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, ExactError> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect::<Result<_, _>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_mul_vec(&self, v: &[T]) -> Result<Vec<T>, ExactError> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = v[0].zero_like();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(r, k);
                    if a.is_zero() || x.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(x)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> Result<(Self, Vec<usize>), ExactError> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let piv = m.get(row, col).clone();
            for c in col..m.cols {
                let v = m.get(row, c).div(&piv)?;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for c in col..m.cols {
                    if m.get(row, c).is_zero() {
                        continue;
                    }
                    let v = m.get(r, c).sub(&f.mul(m.get(row, c))?)?;
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok((m, pivots))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> Result<usize, ExactError> {
        Ok(self.rref()?.1.len())
    }

    /// Basis of the right null space `{x : M x = 0}`; `zero` supplies the
    /// scalar context for empty matrices.
    pub fn kernel(&self, zero: &T) -> Result<Vec<Vec<T>>, ExactError> {
        let (r, pivots) = self.rref()?;
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![zero.zero_like(); self.cols];
            v[free] = zero.one_like();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = r.get(i, free).neg();
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// Solves `M x = b`, returning one solution if consistent.
    pub fn solve(&self, b: &[T]) -> Result<Option<Vec<T>>, ExactError> {
        let aug = Self::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        let (r, pivots) = aug.rref()?;
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let zero = b[0].zero_like();
        let mut x = vec![zero; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn try_inverse(&self) -> Result<Option<Self>, ExactError> {
        assert!(self.is_square());
        let n = self.rows;
        let one = self.data[0].one_like();
        let zero = self.data[0].zero_like();
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                one.clone()
            } else {
                zero.clone()
            }
        });
        let (r, pivots) = aug.rref()?;
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        Ok(Some(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone())))
    }

    pub fn try_scale(&self, s: &T) -> Result<Self, ExactError> {
        let data = self.data.iter().map(|x| x.mul(s)).collect::<Result<_, _>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }
}

impl serde::Serialize for Matrix<Rat> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::exactnum::ser::vecs::serialize(&self.row_vecs(), s)
    }
}

impl<'de> serde::Deserialize<'de> for Matrix<Rat> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rows = crate::exactnum::ser::vecs::deserialize(d)?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(D::Error::custom("ragged matrix rows"));
        }
        Ok(Matrix::from_rows(rows))
    }
}

impl Matrix<Rat> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Rat::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { Rat::one() } else { Rat::zero() })
    }

    pub fn diag(entries: &[Rat]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r].clone() } else { Rat::zero() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if Zero::is_zero(a) {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.get(k, c);
                    if !Zero::is_zero(b) {
                        out.data[r * o.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("rational arithmetic is total")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.try_sub(o).expect("rational arithmetic is total")
    }

    pub fn scale(&self, s: &Rat) -> Self {
        self.map(|x| x * s)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Rat::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(r, k);
                    if !Zero::is_zero(a) && !Zero::is_zero(x) {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix: `vᵀ M`.
    pub fn vec_mul(&self, v: &[Rat]) -> Vec<Rat> {
        self.transpose().mul_vec(v)
    }

    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
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

    pub fn inverse(&self) -> Option<Self> {
        self.try_inverse().expect("rational arithmetic is total")
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Rat {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Rat::one();
        }
        // Clear denominators row by row so elimination stays in Z.
        let mut scale = Rat::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in 0..n {
            let row = self.row(r);
            let l = row.iter().fold(BigInt::one(), |l, x| num_integer::Integer::lcm(&l, x.denom()));
            scale *= Rat::from_integer(l.clone());
            m.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        }
        let mut sign = 1;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return Rat::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        Rat::from_integer(&m[n - 1][n - 1] * BigInt::from(sign)) / scale
    }

    pub fn rank_q(&self) -> usize {
        self.rank().expect("rational arithmetic is total")
    }

    pub fn kernel_q(&self) -> Vec<Vec<Rat>> {
        self.kernel(&Rat::zero()).expect("rational arithmetic is total")
    }

    pub fn solve_q(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        self.solve(b).expect("rational arithmetic is total")
    }

    /// Block-diagonal matrix.
    pub fn block_diag(blocks: &[RatMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Lifts to a matrix over a number field.
    pub fn to_field(&self, k: &std::sync::Arc<crate::exactnum::NumberField>) -> Matrix<NfElem> {
        self.map(|x| NfElem::from_rat(k, x.clone()))
    }

    pub fn to_realalg(&self) -> Matrix<RealAlg> {
        self.map(|x| RealAlg::from_rat(x.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = RatMatrix::from_rows(vec![
            vec![rat(1, 2), int(2), int(3)],
            vec![int(0), rat(-1, 3), int(4)],
            vec![int(5), int(6), int(0)],
        ]);
        let g = |r: usize, c: usize| m.get(r, c).clone();
        let cof = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1)) - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
            + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0));
        assert_eq!(m.det(), cof);
        let singular = RatMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), int(0));
        let swap = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.det(), int(-1));
    }

    #[test]
    fn kernel_and_inverse() {
        let m = RatMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel_q();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        let a = RatMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
        assert!(RatMatrix::from_i64(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn power_by_squaring() {
        let a = RatMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(a.pow(5), RatMatrix::from_i64(&[&[1, 5], &[0, 1]]));
        assert_eq!(a.pow(0), RatMatrix::identity(2));
    }
}
