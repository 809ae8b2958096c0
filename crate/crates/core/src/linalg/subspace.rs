use super::RatMatrix;
use crate::exactnum::Rat;

/// Canonical basis (nonzero RREF rows) of the span of `vectors` in `Q^dim`.
pub fn column_basis(vectors: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = RatMatrix::from_rows(vectors.to_vec());
    debug_assert_eq!(m.cols(), dim);
    let (r, pivots) = m.rref().expect("rational arithmetic is total");
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// Coordinates of `v` in the given basis, if `v` lies in its span.
pub fn coordinates(basis: &[Vec<Rat>], v: &[Rat]) -> Option<Vec<Rat>> {
    if basis.is_empty() {
        return v.iter().all(|x| num_traits::Zero::is_zero(x)).then(Vec::new);
    }
    RatMatrix::from_cols(v.len(), basis).solve_q(v)
}

/// `(ker A^d, im A^d)`: the nilpotent and invertible parts of the Fitting decomposition.
pub fn fitting_split(a: &RatMatrix) -> (Vec<Vec<Rat>>, Vec<Vec<Rat>>) {
    let d = a.rows();
    let ad = a.pow(d);
    let v0 = ad.kernel_q();
    let v1 = column_basis(&ad.col_vecs(), d);
    (v0, v1)
}

/// Basis of the least A-invariant subspace containing the generators.
pub fn krylov_invariant_span(a: &RatMatrix, generators: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let d = a.rows();
    let mut all = Vec::new();
    for g in generators {
        let mut v = g.clone();
        for _ in 0..d {
            all.push(v.clone());
            v = a.mul_vec(&v);
        }
    }
    column_basis(&all, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    #[test]
    fn fitting_examples() {
        let (v0, v1) = fitting_split(&RatMatrix::diag(&[int(0), rat(1, 2)]));
        assert_eq!(v0, vec![vec![int(1), int(0)]]);
        assert_eq!(v1, vec![vec![int(0), int(1)]]);
        let (v0, v1) = fitting_split(&RatMatrix::from_i64(&[&[2, 1], &[1, 1]]));
        assert!(v0.is_empty());
        assert_eq!(v1.len(), 2);
        let (v0, v1) = fitting_split(&RatMatrix::from_i64(&[&[0, 1], &[0, 0]]));
        assert_eq!(v0.len(), 2);
        assert!(v1.is_empty());
    }

    #[test]
    fn krylov_examples() {
        let a = RatMatrix::diag(&[rat(1, 2), rat(1, 3)]);
        assert_eq!(krylov_invariant_span(&a, &[vec![int(1), int(0)]]).len(), 1);
        let swap = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]).scale(&rat(1, 2));
        let g = vec![int(1), int(0)];
        // oracle: rank of [g, Ag]
        let oracle = RatMatrix::from_cols(2, &[g.clone(), swap.mul_vec(&g)]).rank_q();
        assert_eq!(krylov_invariant_span(&swap, &[g]).len(), oracle);
        assert_eq!(oracle, 2);
    }

    #[test]
    fn coordinates_in_basis() {
        let b = vec![vec![int(1), int(1), int(0)], vec![int(0), int(1), int(1)]];
        assert_eq!(coordinates(&b, &[int(2), int(5), int(3)]), Some(vec![int(2), int(3)]));
        assert_eq!(coordinates(&b, &[int(1), int(0), int(0)]), None);
    }
}
