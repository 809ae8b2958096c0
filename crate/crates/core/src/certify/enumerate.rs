//! Fair enumeration of real algebraic vectors by (degree, height) levels.

use super::candidates::SeenDirections;
use crate::exactnum::{irreducible_factors, sturm_isolate_real_roots, IntPoly, RealAlg};
use crate::linalg::AlgVector;
use num_bigint::BigInt;
use std::collections::BTreeSet;

/// Every vector whose entries are real roots of integer polynomials with
/// degree ≤ D and coefficients bounded by H in absolute value, level by
/// level over `(D, H)` ordered by `D + H`. Each level emits only the tuples
/// that use a number first seen at that level.
pub struct AlgebraicVectors {
    dim: usize,
    levels: Vec<(usize, usize)>,
    level: usize,
    polys: BTreeSet<Vec<BigInt>>,
    numbers: Vec<RealAlg>,
    first_new: usize,
    odometer: Option<Vec<usize>>,
    seen: SeenDirections,
}

pub fn enumerate_algebraic_vectors(dim: usize, max_degree: usize, max_height: usize) -> AlgebraicVectors {
    let mut levels: Vec<(usize, usize)> =
        (1..=max_degree).flat_map(|d| (1..=max_height).map(move |h| (d, h))).collect();
    levels.sort_by_key(|&(d, h)| (d + h, d));
    AlgebraicVectors {
        dim,
        levels,
        level: 0,
        polys: BTreeSet::new(),
        numbers: Vec::new(),
        first_new: 0,
        odometer: None,
        seen: SeenDirections::default(),
    }
}

/// Integer coefficient vectors of degree exactly `deg`, heights ≤ `h`,
/// positive leading coefficient.
fn coefficient_vectors(deg: usize, h: i64) -> impl Iterator<Item = Vec<i64>> {
    let width = (2 * h + 1) as usize;
    let total = width.pow(deg as u32) * h as usize;
    (0..total).map(move |mut k| {
        let mut c = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            c.push((k % width) as i64 - h);
            k /= width;
        }
        c.push(k as i64 + 1);
        c
    })
}

impl AlgebraicVectors {
    /// Adds the numbers of the next level; `false` when all levels are done.
    fn open_level(&mut self) -> bool {
        let Some(&(deg, h)) = self.levels.get(self.level) else { return false };
        self.level += 1;
        self.first_new = self.numbers.len();
        for d in 1..=deg {
            for c in coefficient_vectors(d, h as i64) {
                let p = IntPoly::from_i64(&c);
                if p.content() != BigInt::from(1) {
                    continue;
                }
                let key = p.coeffs().to_vec();
                if self.polys.contains(&key) {
                    continue;
                }
                let f = irreducible_factors(&p);
                if f.len() != 1 || f[0].degree() != d {
                    continue;
                }
                self.polys.insert(key);
                self.numbers.extend(sturm_isolate_real_roots(&p));
            }
        }
        self.odometer = (self.numbers.len() > self.first_new).then(|| vec![0; self.dim]);
        true
    }

    fn advance(&mut self) -> Option<Vec<usize>> {
        let n = self.numbers.len();
        let odo = self.odometer.as_mut()?;
        let current = odo.clone();
        let mut i = 0;
        loop {
            if i == odo.len() {
                self.odometer = None;
                break;
            }
            odo[i] += 1;
            if odo[i] < n {
                break;
            }
            odo[i] = 0;
            i += 1;
        }
        Some(current)
    }
}

impl Iterator for AlgebraicVectors {
    type Item = AlgVector;

    fn next(&mut self) -> Option<AlgVector> {
        if self.dim == 0 {
            return None;
        }
        loop {
            let Some(idx) = self.advance() else {
                if !self.open_level() {
                    return None;
                }
                // irrational duplicates are only tracked within a level
                self.seen.clear_irrational();
                continue;
            };
            if idx.iter().all(|&i| i < self.first_new) {
                continue;
            }
            let v = AlgVector::from_realalg(idx.iter().map(|&i| self.numbers[i].clone()).collect());
            if v.is_zero() {
                continue;
            }
            match self.seen.insert(&v) {
                Ok(true) => return Some(v),
                Ok(false) => continue,
                Err(e) => {
                    log::debug!("skipping enumerated vector: {e}");
                    continue;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    #[test]
    fn first_level_over_the_plane() {
        let v: Vec<AlgVector> = enumerate_algebraic_vectors(2, 1, 1).collect();
        let r: BTreeSet<Vec<_>> = v.iter().map(|x| x.as_rational().unwrap().to_vec()).collect();
        for p in [[1, 0], [0, 1], [1, 1], [1, -1], [-1, 1], [-1, -1], [-1, 0], [0, -1]] {
            assert!(r.contains(&vec![int(p[0]), int(p[1])]));
        }
        assert_eq!(v.len(), 8);
    }

    #[test]
    fn square_roots_appear_by_degree_two() {
        let v: Vec<AlgVector> = enumerate_algebraic_vectors(1, 2, 2).collect();
        assert!(v.iter().any(|x| x.as_rational() == Some(&[int(1)][..])));
        assert!(v.iter().any(|x| x.as_rational() == Some(&[int(-1)][..])));
        let v: Vec<AlgVector> = enumerate_algebraic_vectors(2, 2, 2).collect();
        let sqrt2 = 2f64.sqrt();
        assert!(v.iter().any(|x| {
            let f = x.to_f64();
            (f[0] - sqrt2).abs() < 1e-9 && f[1] == 1.0
        }));
        assert!(v.iter().any(|x| {
            let f = x.to_f64();
            (f[0] + sqrt2).abs() < 1e-9 && f[1] == 1.0
        }));
    }

    #[test]
    fn fixed_vector_appears_once_budget_suffices() {
        // (1 + √5)/2 has minimal polynomial x² − x − 1
        let phi = RealAlg::from_root(&IntPoly::from_i64(&[-1, -1, 1]), int(1), int(2)).unwrap();
        let target = AlgVector::from_realalg(vec![phi, RealAlg::from_i64(-1)]);
        let hits = enumerate_algebraic_vectors(2, 2, 1)
            .filter(|v| v.is_positive_multiple_of(&target).unwrap())
            .count();
        assert_eq!(hits, 1);
    }
}
