use super::RatMatrix;
use crate::exactnum::{IntPoly, QPoly, Rat, SturmSequence};
use num_traits::{One, Signed, Zero};

/// `det(xI - A)` by Berkowitz's division-free algorithm; monic, degree `d`.
pub fn charpoly(a: &RatMatrix) -> QPoly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    // coefficients highest degree first
    let mut poly = vec![Rat::one()];
    for r in 0..n {
        let row: Vec<Rat> = (0..r).map(|c| a.get(r, c).clone()).collect();
        let mut col: Vec<Rat> = (0..r).map(|i| a.get(i, r).clone()).collect();
        let mut t = vec![Rat::one(), -a.get(r, r).clone()];
        for _ in 0..r {
            t.push(-crate::exactnum::dot(&row, &col));
            col = (0..r)
                .map(|i| (0..r).fold(Rat::zero(), |acc, k| acc + a.get(i, k) * &col[k]))
                .collect();
        }
        let mut next = vec![Rat::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in poly.iter().enumerate().take(i + 1) {
                *slot += &t[i - j] * pj;
            }
        }
        poly = next;
    }
    poly.reverse();
    QPoly::new(poly)
}

/// Characteristic polynomial scaled to a primitive integer polynomial.
pub fn charpoly_int(a: &RatMatrix) -> IntPoly {
    IntPoly::from_qpoly(&charpoly(a))
}

/// Schur–Cohn test: all roots of the characteristic polynomial lie strictly
/// inside the unit disk.
pub fn schur_stable(a: &RatMatrix) -> bool {
    let mut p = charpoly(a);
    loop {
        let n = p.degree();
        if n == 0 {
            return true;
        }
        let c = p.coeffs();
        let (a0, an) = (c[0].clone(), c[n].clone());
        if a0.abs() >= an.abs() {
            return false;
        }
        let q: Vec<Rat> = (1..=n).map(|k| &an * &c[k] - &a0 * &c[n - k]).collect();
        p = QPoly::new(q);
    }
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// `lcm{r : φ(r) ≤ d}`: every root of unity that is an eigenvalue ratio of
/// a d×d rational matrix has order dividing this.
pub fn real_spectrum_power_bound(d: usize) -> usize {
    let d = d.max(1) as u64;
    let mut l = 1u64;
    for r in 1..=2 * d * d + 2 {
        if euler_phi(r) <= d {
            l = num_integer::lcm(l, r);
        }
    }
    l as usize
}

/// Every root of `p` is real and nonnegative.
fn roots_real_nonnegative(p: &QPoly) -> bool {
    let ip = IntPoly::from_qpoly(p);
    if ip.degree() == 0 {
        return true;
    }
    let s = ip.squarefree_part();
    SturmSequence::new(&s).count_from(&Rat::zero()) == s.degree()
}

/// The least `M ≥ 1` such that `A^M` has only real nonnegative eigenvalues,
/// searched up to [`real_spectrum_power_bound`]; `None` proves no such power exists.
pub fn real_spectrum_power(a: &RatMatrix) -> Option<usize> {
    let bound = real_spectrum_power_bound(a.rows());
    let mut p = a.clone();
    for m in 1..=bound {
        if roots_real_nonnegative(&charpoly(&p)) {
            return Some(m);
        }
        p = p.mul(a);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::linalg::RatMatrix;

    fn rot(c: Rat, s: Rat, scale: Rat) -> RatMatrix {
        RatMatrix::from_rows(vec![vec![&c * &scale, -&s * &scale], vec![&s * &scale, &c * &scale]])
    }

    #[test]
    fn charpoly_examples() {
        let a = RatMatrix::diag(&[rat(1, 3), rat(2, 3)]);
        assert_eq!(charpoly(&a), QPoly::x_minus(&rat(1, 3)).mul(&QPoly::x_minus(&rat(2, 3))));
        let i3 = RatMatrix::identity(3);
        assert_eq!(charpoly(&i3), QPoly::x_minus(&int(1)).pow(3));
        let r = RatMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        assert_eq!(charpoly(&r), QPoly::new(vec![int(1), int(0), int(1)]));
    }

    #[test]
    fn charpoly_matches_determinant_oracle() {
        let a = RatMatrix::from_rows(vec![
            vec![rat(1, 2), int(2), int(-1), int(0)],
            vec![int(3), rat(-1, 3), int(4), int(1)],
            vec![int(0), int(5), int(1), rat(2, 7)],
            vec![int(1), int(1), int(-2), int(3)],
        ]);
        let p = charpoly(&a);
        for x in [int(0), int(1), rat(-3, 2), int(5)] {
            let m = RatMatrix::identity(4).scale(&x).sub(&a);
            assert_eq!(p.eval(&x), m.det());
        }
    }

    #[test]
    fn schur_examples() {
        assert!(schur_stable(&RatMatrix::diag(&[rat(1, 3), rat(2, 3)])));
        assert!(!schur_stable(&RatMatrix::diag(&[int(1), int(1)])));
        assert!(!schur_stable(&RatMatrix::block_diag(&[RatMatrix::from_i64(&[&[0, 1], &[-1, 0]]), RatMatrix::diag(&[int(2)])])));
        assert!(schur_stable(&rot(rat(3, 5), rat(4, 5), rat(1, 2))));
        assert!(!schur_stable(&RatMatrix::diag(&[rat(-1, 1), rat(1, 2)])));
    }

    #[test]
    fn real_power_examples() {
        assert_eq!(real_spectrum_power(&RatMatrix::diag(&[rat(1, 3), rat(2, 3)])), Some(1));
        let quarter = rot(int(0), int(1), rat(1, 2));
        assert_eq!(real_spectrum_power(&quarter), Some(4));
        assert_eq!(quarter.pow(4), RatMatrix::diag(&[rat(1, 16), rat(1, 16)]));
        // oracle: A, A^2, A^3 have non-real or negative spectrum
        for m in 1..4 {
            assert!(!roots_real_nonnegative(&charpoly(&quarter.pow(m))));
        }
        assert_eq!(real_spectrum_power(&rot(rat(3, 5), rat(4, 5), rat(1, 2))), None);
        assert_eq!(real_spectrum_power_bound(2), 12);
        assert_eq!(real_spectrum_power_bound(3), 12);
        assert_eq!(real_spectrum_power_bound(4), 120);
    }
}
