//! Generator-form polyhedra (`conv V + cone R + span L`), finite unions of
//! them, and the polyhedral predicates built on the exact simplex.

mod hrep;
mod lp;

pub use hrep::{
    affine_hull, facet_normals, facet_normals_with_ceiling, halfspaces, intersect_with_subspace,
    vertices_from_halfspaces, HalfSpaces, DEFAULT_FACET_CEILING,
};
pub use lp::{lp_solve, Constraint, LinearProgram, LpOutcome, Relation, VarKind};

use crate::exactnum::{dot, primitive_direction, ser, Rat};
use std::collections::BTreeSet;
use crate::linalg::{column_basis, RatMatrix};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("facet enumeration in dimension {dim} exceeds the ceiling {ceiling}")]
    FacetCeiling { dim: usize, ceiling: usize },
    #[error("operation requires a bounded polytope")]
    NotPolytope,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a polyhedron needs at least one vertex")]
    NoVertices,
    #[error("a control set needs at least one component")]
    NoComponents,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPolyhedron", into = "RawPolyhedron")]
pub struct GenPolyhedron {
    dim: usize,
    vertices: Vec<Vec<Rat>>,
    rays: Vec<Vec<Rat>>,
    lines: Vec<Vec<Rat>>,
}

#[derive(Serialize, Deserialize)]
struct RawPolyhedron {
    dim: usize,
    #[serde(with = "ser::vecs")]
    vertices: Vec<Vec<Rat>>,
    #[serde(with = "ser::vecs", default)]
    rays: Vec<Vec<Rat>>,
    #[serde(with = "ser::vecs", default)]
    lines: Vec<Vec<Rat>>,
}

impl TryFrom<RawPolyhedron> for GenPolyhedron {
    type Error = GeometryError;
    fn try_from(r: RawPolyhedron) -> Result<Self, GeometryError> {
        GenPolyhedron::try_new(r.dim, r.vertices, r.rays, r.lines)
    }
}

impl From<GenPolyhedron> for RawPolyhedron {
    fn from(p: GenPolyhedron) -> Self {
        RawPolyhedron { dim: p.dim, vertices: p.vertices, rays: p.rays, lines: p.lines }
    }
}

/// Weights expressing a point through the generators of a polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub vertex_weights: Vec<Rat>,
    pub ray_weights: Vec<Rat>,
    pub line_weights: Vec<Rat>,
}

fn check_dims(dim: usize, vs: &[Vec<Rat>]) -> Result<(), GeometryError> {
    match vs.iter().find(|v| v.len() != dim) {
        Some(v) => Err(GeometryError::DimensionMismatch { expected: dim, found: v.len() }),
        None => Ok(()),
    }
}

impl GenPolyhedron {
    pub fn try_new(
        dim: usize,
        mut vertices: Vec<Vec<Rat>>,
        rays: Vec<Vec<Rat>>,
        lines: Vec<Vec<Rat>>,
    ) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::NoVertices);
        }
        check_dims(dim, &vertices)?;
        check_dims(dim, &rays)?;
        check_dims(dim, &lines)?;
        vertices.sort();
        vertices.dedup();
        let mut rays: Vec<Vec<Rat>> =
            rays.iter().filter(|r| r.iter().any(|x| !x.is_zero())).map(|r| primitive_direction(r)).collect();
        rays.sort();
        rays.dedup();
        let lines = column_basis(&lines, dim);
        Ok(Self { dim, vertices, rays, lines })
    }

    /// Panics on inconsistent dimensions or an empty vertex list.
    pub fn new(dim: usize, vertices: Vec<Vec<Rat>>, rays: Vec<Vec<Rat>>, lines: Vec<Vec<Rat>>) -> Self {
        Self::try_new(dim, vertices, rays, lines).expect("invalid polyhedron generators")
    }

    pub fn polytope(vertices: Vec<Vec<Rat>>) -> Self {
        let dim = vertices.first().map_or(0, Vec::len);
        Self::new(dim, vertices, vec![], vec![])
    }

    pub fn point(p: Vec<Rat>) -> Self {
        Self::polytope(vec![p])
    }

    pub fn origin(dim: usize) -> Self {
        Self::point(vec![Rat::zero(); dim])
    }

    /// `[-r, r]^dim`.
    pub fn cube(dim: usize, r: &Rat) -> Self {
        let mut vs = vec![vec![]];
        for _ in 0..dim {
            vs = vs
                .into_iter()
                .flat_map(|v: Vec<Rat>| {
                    let mut a = v.clone();
                    a.push(-r.clone());
                    let mut b = v;
                    b.push(r.clone());
                    [a, b]
                })
                .collect();
        }
        Self::new(dim, vs, vec![], vec![])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<Rat>] {
        &self.rays
    }

    pub fn lines(&self) -> &[Vec<Rat>] {
        &self.lines
    }

    pub fn is_polytope(&self) -> bool {
        self.rays.is_empty() && self.lines.is_empty()
    }

    pub fn num_generators(&self) -> usize {
        self.vertices.len() + self.rays.len() + self.lines.len()
    }

    /// Builds `x = Σ λ_v v + Σ μ_r r + Σ ν_l l` from weights.
    pub fn combine(&self, d: &Decomposition) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); self.dim];
        let gens = self.vertices.iter().zip(&d.vertex_weights).chain(self.rays.iter().zip(&d.ray_weights));
        for (g, w) in gens.chain(self.lines.iter().zip(&d.line_weights)) {
            if w.is_zero() {
                continue;
            }
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += w * gi;
            }
        }
        x
    }

    /// Weights are valid: vertex weights nonnegative summing to one, ray
    /// weights nonnegative.
    pub fn valid_weights(&self, d: &Decomposition) -> bool {
        d.vertex_weights.len() == self.vertices.len()
            && d.ray_weights.len() == self.rays.len()
            && d.line_weights.len() == self.lines.len()
            && d.vertex_weights.iter().all(|w| *w >= Rat::zero())
            && d.ray_weights.iter().all(|w| *w >= Rat::zero())
            && d.vertex_weights.iter().sum::<Rat>().is_one()
    }

    /// Variables of `self` appended to `lp`: returns the index of the first
    /// new variable. Adds the convexity row; the caller wires the point.
    pub(crate) fn append_vars(&self, lp: &mut LinearProgram) -> usize {
        let start = lp.num_vars();
        for _ in 0..self.vertices.len() + self.rays.len() {
            lp.add_var(VarKind::NonNeg);
        }
        for _ in 0..self.lines.len() {
            lp.add_var(VarKind::Free);
        }
        let terms: Vec<(usize, Rat)> = (0..self.vertices.len()).map(|i| (start + i, Rat::one())).collect();
        lp.constrain_sparse(&terms, Relation::Eq, Rat::one());
        start
    }

    /// The `k`-th generator in variable order: vertices, rays, lines.
    pub(crate) fn generator(&self, k: usize) -> &[Rat] {
        let (nv, nr) = (self.vertices.len(), self.rays.len());
        if k < nv {
            &self.vertices[k]
        } else if k < nv + nr {
            &self.rays[k - nv]
        } else {
            &self.lines[k - nv - nr]
        }
    }

    pub(crate) fn split_weights(&self, w: &[Rat]) -> Decomposition {
        let (nv, nr) = (self.vertices.len(), self.rays.len());
        Decomposition {
            vertex_weights: w[..nv].to_vec(),
            ray_weights: w[nv..nv + nr].to_vec(),
            line_weights: w[nv + nr..].to_vec(),
        }
    }

    /// Generator weights producing `p`, if `p` lies in the polyhedron.
    pub fn decompose(&self, p: &[Rat]) -> Option<Decomposition> {
        self.decompose_with(None, p)
    }

    /// Weights of some `x` in the polyhedron with `m x = p`.
    pub fn decompose_image(&self, m: &RatMatrix, p: &[Rat]) -> Option<Decomposition> {
        self.decompose_with(Some(m), p)
    }

    fn decompose_with(&self, m: Option<&RatMatrix>, p: &[Rat]) -> Option<Decomposition> {
        let mapped: Vec<Vec<Rat>> = (0..self.num_generators())
            .map(|k| match m {
                Some(m) => m.mul_vec(self.generator(k)),
                None => self.generator(k).to_vec(),
            })
            .collect();
        assert!(mapped.iter().all(|g| g.len() == p.len()), "dimension mismatch in membership test");
        let mut lp = LinearProgram::default();
        let start = self.append_vars(&mut lp);
        for (c, pc) in p.iter().enumerate() {
            let terms: Vec<(usize, Rat)> = mapped
                .iter()
                .enumerate()
                .filter(|(_, g)| !g[c].is_zero())
                .map(|(k, g)| (start + k, g[c].clone()))
                .collect();
            lp.constrain_sparse(&terms, Relation::Eq, pc.clone());
        }
        let out = lp.solve();
        let w = out.point()?;
        Some(self.split_weights(w))
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.decompose(p).is_some()
    }

    /// `max ⟨x, τ⟩` over the polyhedron, `None` if unbounded.
    pub fn support(&self, tau: &[Rat]) -> Option<Rat> {
        if self.rays.iter().any(|r| dot(r, tau) > Rat::zero()) || self.lines.iter().any(|l| !dot(l, tau).is_zero()) {
            return None;
        }
        self.vertices.iter().map(|v| dot(v, tau)).max()
    }

    /// `min ⟨x, τ⟩` over the polyhedron, `None` if unbounded.
    pub fn min_value(&self, tau: &[Rat]) -> Option<Rat> {
        let neg: Vec<Rat> = tau.iter().map(|x| -x).collect();
        self.support(&neg).map(|v| -v)
    }

    /// Drops vertices and rays expressible through the remaining generators.
    pub fn reduce(&self) -> Self {
        let mut out = self.clone();
        let mut seen = BTreeSet::new();
        out.vertices.retain(|v| seen.insert(v.clone()));
        if out.rays.is_empty() && out.lines.is_empty() {
            out.vertices = extreme_points(out.dim, std::mem::take(&mut out.vertices));
        } else {
            let mut i = 0;
            while i < out.vertices.len() && out.vertices.len() > 1 {
                let mut rest = out.clone();
                let v = rest.vertices.remove(i);
                if rest.contains(&v) {
                    out = rest;
                } else {
                    i += 1;
                }
            }
        }
        let mut i = 0;
        while i < out.rays.len() {
            let mut rest = out.clone();
            let r = rest.rays.remove(i);
            let cone = GenPolyhedron { vertices: vec![vec![Rat::zero(); out.dim]], ..rest.clone() };
            if cone.contains(&r) {
                out = rest;
            } else {
                i += 1;
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let f = |vs: &[Vec<Rat>]| vs.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
        Self::new(self.dim, f(&self.vertices), f(&self.rays), self.lines.clone())
    }

    pub fn translate(&self, t: &[Rat]) -> Self {
        let vs = self.vertices.iter().map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect()).collect();
        Self::new(self.dim, vs, self.rays.clone(), self.lines.clone())
    }

    /// Embeds into `Q^{dim+extra}` by zero padding.
    pub fn pad(&self, extra: usize) -> Self {
        let f = |vs: &[Vec<Rat>]| {
            vs.iter()
                .map(|v| v.iter().cloned().chain(std::iter::repeat_n(Rat::zero(), extra)).collect())
                .collect()
        };
        Self::new(self.dim + extra, f(&self.vertices), f(&self.rays), f(&self.lines))
    }
}

/// `P + Q`, with redundant vertices removed by LP membership.
pub fn minkowski_sum(p: &GenPolyhedron, q: &GenPolyhedron) -> GenPolyhedron {
    assert_eq!(p.dim, q.dim, "dimension mismatch in Minkowski sum");
    if p.is_polytope() && q.is_polytope() {
        return sum_of_reduced(&p.reduce(), &q.reduce());
    }
    let mut vs = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            vs.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    let rays = p.rays.iter().chain(&q.rays).cloned().collect();
    let lines = p.lines.iter().chain(&q.lines).cloned().collect();
    GenPolyhedron::new(p.dim, vs, rays, lines).reduce()
}

/// Sum of two polytopes whose vertex lists have no redundant points.
fn sum_of_reduced(p: &GenPolyhedron, q: &GenPolyhedron) -> GenPolyhedron {
    let (pv, qv) = (&p.vertices, &q.vertices);
    if pv.len() == 1 || qv.len() == 1 {
        let vs = pv.iter().flat_map(|a| qv.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())).collect();
        return GenPolyhedron::new(p.dim, vs, vec![], vec![]);
    }
    // pairs that are the unique maximizers along some generic direction
    let mut sure = BTreeSet::new();
    for c in generic_directions(p.dim) {
        if let (Some(i), Some(j)) = (unique_argmax(pv, &c), unique_argmax(qv, &c)) {
            sure.insert((i, j));
        }
    }
    let pd: Vec<Vec<Vec<Rat>>> = (0..pv.len()).map(|i| differences(pv, i)).collect();
    let qd: Vec<Vec<Vec<Rat>>> = (0..qv.len()).map(|j| differences(qv, j)).collect();
    let mut vs = Vec::new();
    for (i, a) in pv.iter().enumerate() {
        for (j, b) in qv.iter().enumerate() {
            if sure.contains(&(i, j)) {
                vs.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
                continue;
            }
            // an edge direction of P at i opposite to one of Q at j rules it out
            let opposite: BTreeSet<Vec<Rat>> = qd[j].iter().map(|d| d.iter().map(|x| -x).collect()).collect();
            if pd[i].iter().any(|d| opposite.contains(d)) {
                continue;
            }
            if positively_independent(p.dim, pd[i].iter().chain(&qd[j])) {
                vs.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
    }
    GenPolyhedron::new(p.dim, vs, vec![], vec![])
}

/// A fixed pseudo-random family of integer directions.
fn generic_directions(dim: usize) -> impl Iterator<Item = Vec<Rat>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (0..(64 * dim).max(256)).map(move |_| (0..dim).map(|_| Rat::from_integer(rng.random_range(-64i64..=64).into())).collect())
}

fn unique_argmax(vs: &[Vec<Rat>], c: &[Rat]) -> Option<usize> {
    let vals: Vec<Rat> = vs.iter().map(|v| dot(v, c)).collect();
    let max = vals.iter().max()?;
    let mut at = vals.iter().enumerate().filter(|(_, x)| *x == max).map(|(i, _)| i);
    match (at.next(), at.next()) {
        (Some(i), None) => Some(i),
        _ => None,
    }
}

/// `vs[i] − vs[k]` for `k ≠ i`, scaled to primitive integer vectors;
/// positive scaling does not affect the vertex tests below.
fn differences(vs: &[Vec<Rat>], i: usize) -> Vec<Vec<Rat>> {
    vs.iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .map(|(_, v)| primitive_direction(&vs[i].iter().zip(v).map(|(a, b)| a - b).collect::<Vec<_>>()))
        .collect()
}

/// The points of a duplicate-free list that are vertices of its hull, in
/// their original order.
fn extreme_points(dim: usize, vs: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    if vs.len() <= 1 {
        return vs;
    }
    let mut sure = vec![false; vs.len()];
    for c in generic_directions(dim) {
        if let Some(i) = unique_argmax(&vs, &c) {
            sure[i] = true;
        }
    }
    let keep: Vec<bool> = (0..vs.len()).map(|i| sure[i] || positively_independent(dim, differences(&vs, i).iter())).collect();
    vs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(v, _)| v).collect()
}

/// No nonzero `y ≥ 0` has `Σ y_k d_k = 0`; equivalently some direction is
/// strictly positive on every `d_k`.
fn positively_independent<'a>(dim: usize, ds: impl Iterator<Item = &'a Vec<Rat>>) -> bool {
    let ds: Vec<&Vec<Rat>> = ds.collect();
    if ds.is_empty() {
        return true;
    }
    let n = ds.len();
    let mut lp = LinearProgram::nonneg(n);
    lp.constrain_sparse(&(0..n).map(|k| (k, Rat::one())).collect::<Vec<_>>(), Relation::Eq, Rat::one());
    for c in 0..dim {
        let terms: Vec<(usize, Rat)> =
            ds.iter().enumerate().filter(|(_, d)| !d[c].is_zero()).map(|(k, d)| (k, d[c].clone())).collect();
        lp.constrain_sparse(&terms, Relation::Eq, Rat::zero());
    }
    !lp.solve().is_feasible()
}

/// `A(P)`.
pub fn linear_image(a: &RatMatrix, p: &GenPolyhedron) -> GenPolyhedron {
    assert_eq!(a.cols(), p.dim, "dimension mismatch in linear image");
    let f = |vs: &[Vec<Rat>]| vs.iter().map(|v| a.mul_vec(v)).collect();
    GenPolyhedron::new(a.rows(), f(&p.vertices), f(&p.rays), f(&p.lines)).reduce()
}

/// `Σ_{i≤n} A^i(P)`.
pub fn partial_sum(a: &RatMatrix, p: &GenPolyhedron, n: usize) -> GenPolyhedron {
    let mut acc = p.reduce();
    let mut term = acc.clone();
    for _ in 0..n {
        term = linear_image(a, &term);
        acc = if acc.is_polytope() { sum_of_reduced(&acc, &term) } else { minkowski_sum(&acc, &term) };
    }
    acc
}

/// `0 ∈ relint P`: some convex combination of the vertices with every
/// weight positive equals the origin.
pub fn relative_interior_contains_origin(p: &GenPolyhedron) -> bool {
    assert!(p.is_polytope(), "relative interior test needs a polytope");
    let n = p.vertices.len();
    let mut lp = LinearProgram::nonneg(n);
    let t = lp.add_var(VarKind::Free);
    lp.constrain_sparse(&(0..n).map(|i| (i, Rat::one())).collect::<Vec<_>>(), Relation::Eq, Rat::one());
    for c in 0..p.dim {
        let terms: Vec<(usize, Rat)> = (0..n).map(|i| (i, p.vertices[i][c].clone())).collect();
        lp.constrain_sparse(&terms, Relation::Eq, Rat::zero());
    }
    for i in 0..n {
        lp.constrain_sparse(&[(i, Rat::one()), (t, -Rat::one())], Relation::Ge, Rat::zero());
    }
    let mut obj = vec![Rat::zero(); n + 1];
    obj[t] = Rat::one();
    match lp.maximize(obj).solve() {
        LpOutcome::Optimal { value, .. } => value > Rat::zero(),
        _ => false,
    }
}

/// A finite union of polyhedra in a common ambient space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<GenPolyhedron>", into = "Vec<GenPolyhedron>")]
pub struct ControlSet {
    components: Vec<GenPolyhedron>,
}

impl TryFrom<Vec<GenPolyhedron>> for ControlSet {
    type Error = GeometryError;
    fn try_from(v: Vec<GenPolyhedron>) -> Result<Self, GeometryError> {
        ControlSet::new(v)
    }
}

impl From<ControlSet> for Vec<GenPolyhedron> {
    fn from(c: ControlSet) -> Self {
        c.components
    }
}

impl ControlSet {
    pub fn new(components: Vec<GenPolyhedron>) -> Result<Self, GeometryError> {
        let Some(first) = components.first() else { return Err(GeometryError::NoComponents) };
        let dim = first.dim;
        if let Some(c) = components.iter().find(|c| c.dim != dim) {
            return Err(GeometryError::DimensionMismatch { expected: dim, found: c.dim });
        }
        Ok(Self { components })
    }

    pub fn single(p: GenPolyhedron) -> Self {
        Self { components: vec![p] }
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim
    }

    pub fn components(&self) -> &[GenPolyhedron] {
        &self.components
    }

    /// The single component, if it is a polytope.
    pub fn as_polytope(&self) -> Option<&GenPolyhedron> {
        match self.components.as_slice() {
            [p] if p.is_polytope() => Some(p),
            _ => None,
        }
    }

    /// Closed convex relaxation of the union: all generators pooled.
    pub fn hull(&self) -> GenPolyhedron {
        let mut vs = Vec::new();
        let mut rs = Vec::new();
        let mut ls = Vec::new();
        for c in &self.components {
            vs.extend(c.vertices.iter().cloned());
            rs.extend(c.rays.iter().cloned());
            ls.extend(c.lines.iter().cloned());
        }
        GenPolyhedron::new(self.dim(), vs, rs, ls)
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.components.iter().any(|c| c.contains(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    pub(crate) fn pts(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect()
    }

    pub(crate) fn fig_u() -> GenPolyhedron {
        GenPolyhedron::polytope(pts(&[&[-2, -1], &[0, -1], &[0, 1], &[2, 1]]))
    }

    #[test]
    fn minkowski_examples() {
        let u = fig_u();
        assert_eq!(minkowski_sum(&u, &GenPolyhedron::origin(2)), u);
        let sx = GenPolyhedron::polytope(pts(&[&[-1, 0], &[1, 0]]));
        let sy = GenPolyhedron::polytope(pts(&[&[0, -1], &[0, 1]]));
        assert_eq!(minkowski_sum(&sx, &sy), GenPolyhedron::cube(2, &int(1)));

        let a = RatMatrix::diag(&[rat(1, 3), rat(2, 3)]);
        let au = linear_image(&a, &u);
        let s = minkowski_sum(&u, &au);
        // oracle: each of the 16 pairwise sums is kept iff it is not in the
        // hull of the other 15
        let mut all = Vec::new();
        for x in u.vertices() {
            for y in au.vertices() {
                all.push(x.iter().zip(y).map(|(p, q)| p + q).collect::<Vec<Rat>>());
            }
        }
        for (i, c) in all.iter().enumerate() {
            let others: Vec<Vec<Rat>> =
                all.iter().enumerate().filter(|(j, o)| *j != i && *o != c).map(|(_, o)| o.clone()).collect();
            let redundant = GenPolyhedron::polytope(others).contains(c);
            assert_eq!(s.vertices().contains(c), !redundant, "{c:?}");
        }
    }

    #[test]
    fn linear_image_examples() {
        let u = fig_u();
        assert_eq!(linear_image(&RatMatrix::identity(2), &u), u);
        let a = RatMatrix::diag(&[rat(1, 3), rat(2, 3)]);
        let img = linear_image(&a, &u);
        let expect = vec![
            vec![rat(-2, 3), rat(-2, 3)],
            vec![int(0), rat(-2, 3)],
            vec![int(0), rat(2, 3)],
            vec![rat(2, 3), rat(2, 3)],
        ];
        assert_eq!(img.vertices(), expect.as_slice());
        assert_eq!(linear_image(&RatMatrix::zeros(2, 2), &u), GenPolyhedron::origin(2));
    }

    #[test]
    fn partial_sum_support_is_geometric_sum() {
        let a = RatMatrix::diag(&[rat(1, 3), rat(2, 3)]);
        let s = partial_sum(&a, &fig_u(), 8);
        // 2 (1 - (1/3)^9) / (2/3)
        let expect = int(3) * (int(1) - rat(1, 3).pow(9));
        assert_eq!(s.support(&[int(1), int(0)]), Some(expect.clone()));
        // same value through the simplex
        let mut lp = LinearProgram::default();
        let start = s.append_vars(&mut lp);
        let obj: Vec<Rat> = (0..lp.num_vars()).map(|k| s.generator(k - start)[0].clone()).collect();
        assert_eq!(lp.maximize(obj).solve().value(), Some(&expect));
    }

    #[test]
    fn relative_interior_examples() {
        assert!(relative_interior_contains_origin(&GenPolyhedron::cube(2, &int(1))));
        assert!(relative_interior_contains_origin(&fig_u()));
        assert!(!relative_interior_contains_origin(&GenPolyhedron::polytope(pts(&[&[0, 0], &[1, 0]]))));
        assert!(relative_interior_contains_origin(&GenPolyhedron::polytope(pts(&[&[-1, 0], &[1, 0]]))));
        assert!(!relative_interior_contains_origin(&GenPolyhedron::polytope(pts(&[&[1, 0], &[2, 0]]))));
    }

    #[test]
    fn membership_with_rays_and_lines() {
        let p = GenPolyhedron::new(2, pts(&[&[0, 0]]), pts(&[&[1, 0]]), pts(&[&[0, 2]]));
        assert!(p.contains(&[int(5), int(-7)]));
        assert!(!p.contains(&[int(-1), int(0)]));
        let d = p.decompose(&[int(3), int(4)]).unwrap();
        assert!(p.valid_weights(&d));
        assert_eq!(p.combine(&d), vec![int(3), int(4)]);
        assert_eq!(p.support(&[int(-1), int(0)]), Some(int(0)));
        assert_eq!(p.support(&[int(1), int(0)]), None);
    }

    #[test]
    fn serde_round_trip() {
        let u = fig_u();
        let s = serde_json::to_string(&u).unwrap();
        assert!(s.contains("\"-2\""));
        assert_eq!(serde_json::from_str::<GenPolyhedron>(&s).unwrap(), u);
        assert!(serde_json::from_str::<GenPolyhedron>(r#"{"dim":2,"vertices":[]}"#).is_err());
    }
}
