//! Candidate separating directions derived from the geometry of U, Q and A.

use super::classify::transition_matrix;
use crate::exactnum::{primitive_direction, ExactError, NfElem, NumberField, Rat};
use crate::geometry::{facet_normals, linear_image, minkowski_sum, GenPolyhedron};
use crate::linalg::{binomial, AlgScalar, AlgVector, Matrix, RatMatrix, SpectralData};
use itertools::Itertools;
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

/// Basis of `{τ′ : L_ij(u−u′, τ) = 0 ⇒ L_ij(u−u′, τ′) = 0 for all u, u′, i, j}`.
#[derive(Clone, Debug)]
pub struct DomSpace {
    pub basis: Vec<AlgVector>,
}

#[derive(Clone, Debug)]
enum Row {
    Q(Vec<Rat>),
    K(Arc<NumberField>, Vec<NfElem>),
}

impl Row {
    fn from_field(v: Vec<NfElem>) -> Option<Row> {
        if v.iter().all(NfElem::is_zero) {
            return None;
        }
        let k = v[0].field().clone();
        match v.iter().map(NfElem::as_rat).collect::<Option<Vec<_>>>() {
            Some(r) => Some(Row::Q(primitive_direction(&r))),
            None => Some(Row::K(k, v)),
        }
    }

    fn to_field(&self, k: &Arc<NumberField>) -> Vec<NfElem> {
        match self {
            Row::Q(r) => r.iter().map(|x| NfElem::from_rat(k, x.clone())).collect(),
            Row::K(_, v) => v.clone(),
        }
    }
}

fn diff(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `B_ij (u − u′)` for every vertex pair and every `(i, j)`, paired with
/// whether `τ` annihilates it.
fn bilinear_rows(s: &SpectralData, u: &GenPolyhedron, tau: Option<&AlgVector>) -> Result<Vec<(Row, bool)>, ExactError> {
    let vs = u.vertices();
    let mut out = Vec::new();
    for (a, b) in (0..vs.len()).tuple_combinations() {
        let x = diff(&vs[a], &vs[b]);
        for (i, k) in s.fields.iter().enumerate() {
            let xk: Vec<NfElem> = x.iter().map(|r| NfElem::from_rat(k, r.clone())).collect();
            for m in &s.bilinear[i] {
                if m.is_zero_matrix() {
                    continue;
                }
                let Some(row) = Row::from_field(m.try_mul_vec(&xk)?) else { continue };
                let vanishes = match tau {
                    Some(t) => match &row {
                        Row::Q(r) => t.dot_rat(r)?.is_zero(),
                        Row::K(_, v) => t.dot_nf(v)?.is_zero(),
                    },
                    None => false,
                };
                out.push((row, vanishes));
            }
        }
    }
    Ok(out)
}

/// Common right kernel of rows; `None` when the rows live in two different
/// irrational fields.
fn kernel_of(rows: &[Row], dim: usize) -> Result<Option<Vec<AlgVector>>, ExactError> {
    let mut field: Option<Arc<NumberField>> = None;
    for r in rows {
        if let Row::K(k, _) = r {
            match &field {
                Some(f) if !(Arc::ptr_eq(f, k) || f.same_as(k)) => return Ok(None),
                Some(_) => {}
                None => field = Some(k.clone()),
            }
        }
    }
    if rows.is_empty() {
        let id = RatMatrix::identity(dim).row_vecs();
        return Ok(Some(id.into_iter().map(AlgVector::Rational).collect()));
    }
    Ok(Some(match field {
        None => {
            let m = RatMatrix::from_rows(
                rows.iter().map(|r| if let Row::Q(v) = r { v.clone() } else { unreachable!() }).collect(),
            );
            m.kernel_q().into_iter().map(AlgVector::Rational).collect()
        }
        Some(k) => {
            let m = Matrix::from_rows(rows.iter().map(|r| r.to_field(&k)).collect());
            m.kernel(&NfElem::zero(&k))?
                .into_iter()
                .map(|v| AlgVector::from_scalars(v.into_iter().map(AlgScalar::Nf).collect()))
                .collect()
        }
    }))
}

/// Reduces rows over one field to an independent set.
fn reduce_rows(rows: Vec<Row>) -> Result<Vec<Row>, ExactError> {
    let Some(k) = rows.iter().find_map(|r| if let Row::K(k, _) = r { Some(k.clone()) } else { None }) else {
        if rows.is_empty() {
            return Ok(rows);
        }
        let m = RatMatrix::from_rows(rows.iter().map(|r| if let Row::Q(v) = r { v.clone() } else { unreachable!() }).collect());
        let (r, piv) = m.rref()?;
        return Ok((0..piv.len()).map(|i| Row::Q(r.row(i))).collect());
    };
    let m = Matrix::from_rows(rows.iter().map(|r| r.to_field(&k)).collect());
    let (r, piv) = m.rref()?;
    Ok((0..piv.len()).filter_map(|i| Row::from_field(r.row(i))).collect())
}

pub fn dom_space(s: &SpectralData, u: &GenPolyhedron, tau: &AlgVector) -> Result<DomSpace, ExactError> {
    let d = s.dim;
    let mut by_field: Vec<Vec<Row>> = vec![Vec::new(); s.fields.len() + 1];
    for (row, vanishes) in bilinear_rows(s, u, Some(tau))? {
        if !vanishes {
            continue;
        }
        let slot = match &row {
            Row::Q(_) => 0,
            Row::K(k, _) => 1 + s.fields.iter().position(|f| Arc::ptr_eq(f, k) || f.same_as(k)).unwrap_or(0),
        };
        by_field[slot].push(row);
    }
    let mut reduced = Vec::new();
    for rows in by_field {
        reduced.extend(reduce_rows(rows)?);
    }
    if let Some(basis) = kernel_of(&reduced, d)? {
        return Ok(DomSpace { basis });
    }
    // rows from several fields: eliminate over the real algebraic numbers
    let m = Matrix::from_rows(
        reduced
            .iter()
            .map(|r| match r {
                Row::Q(v) => v.iter().map(|x| crate::exactnum::RealAlg::from_rat(x.clone())).collect(),
                Row::K(_, v) => v.iter().map(NfElem::to_realalg).collect(),
            })
            .collect(),
    );
    let basis = m.kernel(&crate::exactnum::RealAlg::zero())?.into_iter().map(AlgVector::from_realalg).collect();
    Ok(DomSpace { basis })
}

/// Deduplication of directions up to positive scaling.
#[derive(Default)]
pub(crate) struct SeenDirections {
    rational: BTreeSet<Vec<Rat>>,
    other: Vec<(Vec<f64>, AlgVector)>,
}

fn unit_f64(v: &AlgVector) -> Vec<f64> {
    let f = v.to_f64();
    let n = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    f.into_iter().map(|x| x / n).collect()
}

impl SeenDirections {
    /// `true` when `v` is new.
    pub(crate) fn insert(&mut self, v: &AlgVector) -> Result<bool, ExactError> {
        if let AlgVector::Rational(r) = v {
            return Ok(self.rational.insert(primitive_direction(r)));
        }
        let u = unit_f64(v);
        for (w, old) in &self.other {
            let close = u.iter().zip(w).all(|(a, b)| (a - b).abs() < 1e-6);
            if close && v.is_positive_multiple_of(old)? {
                return Ok(false);
            }
        }
        self.other.push((u, v.clone()));
        Ok(true)
    }

    pub(crate) fn clear_irrational(&mut self) {
        self.other.clear();
    }
}

const FACET_SUBSET_LIMIT: u64 = 200_000;

fn facet_work(p: &GenPolyhedron) -> u64 {
    binomial(p.vertices().len(), p.dim()).to_u64().unwrap_or(u64::MAX)
}

/// Lazily produced candidate directions, each emitted once up to positive
/// scaling: negated facet normals of Q, outward facet normals of partial
/// sums `Σ_{i≤n} A^i U` for `n < budget`, `±` left eigenvectors of A, then
/// one-dimensional solution spaces of `d − 1` linear conditions drawn from
/// the bilinear forms, Q's affine hull and the images `A^k(v − w)`.
pub struct CandidateStream {
    s: SpectralData,
    u: GenPolyhedron,
    q: GenPolyhedron,
    budget: usize,
    stage: usize,
    n: usize,
    psum: Option<GenPolyhedron>,
    term: Option<GenPolyhedron>,
    pool: Vec<Row>,
    subsets: Option<Box<dyn Iterator<Item = Vec<usize>> + Send>>,
    tried: usize,
    buffer: VecDeque<AlgVector>,
    seen: SeenDirections,
}

pub fn extremal_candidates(s: &SpectralData, u: &GenPolyhedron, q: &GenPolyhedron, budget: usize) -> CandidateStream {
    CandidateStream {
        s: s.clone(),
        u: u.clone(),
        q: q.clone(),
        budget,
        stage: 0,
        n: 0,
        psum: None,
        term: None,
        pool: Vec::new(),
        subsets: None,
        tried: 0,
        buffer: VecDeque::new(),
        seen: SeenDirections::default(),
    }
}

fn negated(v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|x| -x).collect()
}

impl CandidateStream {
    fn push(&mut self, v: AlgVector) {
        if v.is_zero() {
            return;
        }
        match self.seen.insert(&v) {
            Ok(true) => self.buffer.push_back(v.canonical()),
            Ok(false) => {}
            Err(e) => log::debug!("dropping candidate: {e}"),
        }
    }

    fn push_pm(&mut self, v: AlgVector) {
        let n = v.neg();
        self.push(v);
        self.push(n);
    }

    /// Advances one unit of work; `false` when exhausted.
    fn step(&mut self) -> bool {
        match self.stage {
            0 => {
                match facet_normals(&self.q) {
                    Ok(ns) => ns.iter().for_each(|n| self.push(AlgVector::Rational(negated(n)))),
                    Err(e) => log::debug!("no facet normals for the target: {e}"),
                }
                self.stage = 1;
            }
            1 => {
                if self.n >= self.budget {
                    self.stage = 2;
                    return true;
                }
                let a = transition_matrix(&self.s);
                let p = match self.psum.take() {
                    None => self.u.clone(),
                    Some(prev) => {
                        let term = linear_image(&a, self.term.as_ref().unwrap_or(&self.u));
                        let sum = minkowski_sum(&prev, &term);
                        self.term = Some(term);
                        sum
                    }
                };
                if facet_work(&p) > FACET_SUBSET_LIMIT {
                    self.stage = 2;
                    return true;
                }
                if let Ok(ns) = facet_normals(&p) {
                    ns.into_iter().for_each(|n| self.push(AlgVector::Rational(n)));
                }
                self.psum = Some(p);
                self.n += 1;
            }
            2 => {
                if self.budget > 0 {
                    let a = transition_matrix(&self.s);
                    for (i, k) in self.s.fields.clone().iter().enumerate() {
                        let lam = &self.s.lambdas[i];
                        let at = a.transpose().to_field(k);
                        let m = Matrix::from_fn(at.rows(), at.cols(), |r, c| {
                            if r == c {
                                at.get(r, c).sub(lam)
                            } else {
                                at.get(r, c).clone()
                            }
                        });
                        match m.kernel(&NfElem::zero(k)) {
                            Ok(ker) => {
                                for v in ker {
                                    self.push_pm(AlgVector::from_scalars(v.into_iter().map(AlgScalar::Nf).collect()));
                                }
                            }
                            Err(e) => log::debug!("eigenvector kernel failed: {e}"),
                        }
                    }
                }
                self.stage = 3;
            }
            3 => {
                if self.budget == 0 {
                    self.stage = 4;
                    return true;
                }
                match self.build_pool() {
                    Ok(pool) => self.pool = pool,
                    Err(e) => log::debug!("candidate pool failed: {e}"),
                }
                let d = self.s.dim;
                let k = d.saturating_sub(1).min(self.pool.len());
                if d == 1 {
                    self.push_pm(AlgVector::Rational(vec![Rat::from_integer(1.into())]));
                    self.stage = 4;
                    return true;
                }
                if k < d - 1 {
                    self.stage = 4;
                    return true;
                }
                self.subsets = Some(Box::new((0..self.pool.len()).combinations(k)));
                self.stage = 4;
                self.tried = 0;
                return self.subsets.is_some();
            }
            _ => {
                let cap = 64 * self.budget;
                let Some(it) = self.subsets.as_mut() else { return false };
                if self.tried >= cap {
                    self.subsets = None;
                    return false;
                }
                let Some(sub) = it.next() else {
                    self.subsets = None;
                    return false;
                };
                self.tried += 1;
                let rows: Vec<Row> = sub.iter().map(|&i| self.pool[i].clone()).collect();
                match kernel_of(&rows, self.s.dim) {
                    Ok(Some(ker)) if ker.len() == 1 => {
                        let v = ker.into_iter().next().unwrap();
                        self.push_pm(v);
                    }
                    Ok(_) => {}
                    Err(e) => log::debug!("pattern kernel failed: {e}"),
                }
            }
        }
        true
    }

    fn build_pool(&self) -> Result<Vec<Row>, ExactError> {
        const POOL_CAP: usize = 20;
        let mut pool = Vec::new();
        let mut seen = BTreeSet::new();
        let mut add_q = |pool: &mut Vec<Row>, v: Vec<Rat>| {
            if v.iter().all(Zero::is_zero) {
                return;
            }
            let p = primitive_direction(&v);
            if seen.insert(p.clone()) {
                pool.push(Row::Q(p));
            }
        };
        let qv = self.q.vertices();
        for v in &qv[1..] {
            add_q(&mut pool, diff(v, &qv[0]));
        }
        let mut irr = Vec::new();
        for (row, _) in bilinear_rows(&self.s, &self.u, None)? {
            match row {
                Row::Q(v) => add_q(&mut pool, v),
                r => irr.push(r),
            }
        }
        let a = transition_matrix(&self.s);
        let vs = self.u.vertices();
        for (i, j) in (0..vs.len()).tuple_combinations() {
            let mut x = diff(&vs[i], &vs[j]);
            for _ in 0..self.budget.min(4) {
                x = a.mul_vec(&x);
                add_q(&mut pool, x.clone());
            }
        }
        pool.extend(irr);
        pool.truncate(POOL_CAP);
        Ok(pool)
    }
}

impl Iterator for CandidateStream {
    type Item = AlgVector;

    fn next(&mut self) -> Option<AlgVector> {
        loop {
            if let Some(v) = self.buffer.pop_front() {
                return Some(v);
            }
            if !self.step() {
                return self.buffer.pop_front();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::tests::fig;
    use crate::exactnum::{int, rat};

    fn has(cands: &[AlgVector], v: &[i64]) -> bool {
        let v: Vec<Rat> = v.iter().map(|x| int(*x)).collect();
        cands.iter().any(|c| c.as_rational() == Some(&v[..]))
    }

    #[test]
    fn budget_zero_yields_target_normals_only() {
        let (_, s, u) = fig();
        let q = GenPolyhedron::cube(2, &int(1)).translate(&[int(5), int(0)]);
        let c: Vec<AlgVector> = extremal_candidates(&s, &u, &q, 0).collect();
        assert_eq!(c.len(), 4);
        assert!(has(&c, &[1, 0]));
    }

    #[test]
    fn eigenvectors_and_partial_sum_normals() {
        let (_, s, u) = fig();
        let q = GenPolyhedron::point(vec![int(0), int(3)]);
        let c: Vec<AlgVector> = extremal_candidates(&s, &u, &q, 3).collect();
        for v in [[1, 0], [0, 1], [-1, 0], [0, -1], [-1, 1]] {
            assert!(has(&c, &v), "{v:?}");
        }
        for (i, a) in c.iter().enumerate() {
            for b in &c[..i] {
                assert!(!a.is_positive_multiple_of(b).unwrap());
            }
        }
    }

    #[test]
    fn dom_space_examples() {
        let (_, s, u) = fig();
        let contains = |dom: &DomSpace, t: &[Rat]| {
            let basis: Vec<Vec<Rat>> = dom.basis.iter().map(|b| b.as_rational().unwrap().to_vec()).collect();
            if basis.is_empty() {
                return t.iter().all(Zero::is_zero);
            }
            RatMatrix::from_cols(2, &basis).solve_q(t).is_some()
        };
        // τ = 0: every condition fires; the edge differences span R², so Dom = {0}
        let zero = dom_space(&s, &u, &AlgVector::Rational(vec![int(0), int(0)])).unwrap();
        assert!(zero.basis.is_empty());
        // τ = (1,0): the λ=2/3 form (second coordinate) vanishes on some
        // differences, forcing τ′₂ = 0; the λ=1/3 form never vanishes on them
        let e1 = vec![int(1), int(0)];
        let dom = dom_space(&s, &u, &AlgVector::Rational(e1.clone())).unwrap();
        assert_eq!(dom.basis.len(), 1);
        assert!(contains(&dom, &e1));
        // a generic direction has no vanishing conditions
        let g = vec![int(1), rat(1, 7)];
        let dom = dom_space(&s, &u, &AlgVector::Rational(g.clone())).unwrap();
        assert_eq!(dom.basis.len(), 2);
        assert!(contains(&dom, &g));
    }
}
