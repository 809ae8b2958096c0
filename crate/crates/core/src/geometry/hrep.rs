//! Facet enumeration by brute force over vertex subsets, the way back from
//! inequalities to vertices, and sections by linear subspaces.

use super::{GenPolyhedron, GeometryError, LinearProgram, LpOutcome, Relation, VarKind};
use crate::exactnum::{dot, primitive_direction, Rat};
use crate::linalg::{column_basis, RatMatrix};
use itertools::Itertools;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

pub const DEFAULT_FACET_CEILING: usize = 5;

/// `{x : a·x ≤ b for (a, b) in ineqs, a·x = b for (a, b) in eqs}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpaces {
    pub dim: usize,
    pub ineqs: Vec<(Vec<Rat>, Rat)>,
    pub eqs: Vec<(Vec<Rat>, Rat)>,
}

/// A base point and a basis of the direction space of `aff(vertices)`.
pub fn affine_hull(p: &GenPolyhedron) -> (Vec<Rat>, Vec<Vec<Rat>>) {
    let v0 = p.vertices()[0].clone();
    let diffs: Vec<Vec<Rat>> =
        p.vertices()[1..].iter().map(|v| v.iter().zip(&v0).map(|(a, b)| a - b).collect()).collect();
    (v0, column_basis(&diffs, p.dim()))
}

fn orthogonal_complement(basis: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    if basis.is_empty() {
        return (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Rat::from_integer(1.into()) } else { Rat::zero() }).collect())
            .collect();
    }
    RatMatrix::from_rows(basis.to_vec()).kernel_q()
}

/// Outward normals (primitive integer vectors) of the facets of a polytope
/// relative to its affine hull, together with `±` a basis of the normal
/// space of the hull when the polytope is not full-dimensional.
pub fn facet_normals(p: &GenPolyhedron) -> Result<Vec<Vec<Rat>>, GeometryError> {
    facet_normals_with_ceiling(p, DEFAULT_FACET_CEILING)
}

pub fn facet_normals_with_ceiling(p: &GenPolyhedron, ceiling: usize) -> Result<Vec<Vec<Rat>>, GeometryError> {
    let (rel, perp) = relative_facets(p, ceiling)?;
    let mut out: Vec<Vec<Rat>> = rel.into_iter().map(|(n, _)| n).collect();
    for n in perp {
        let n = primitive_direction(&n);
        out.push(n.iter().map(|x| -x).collect());
        out.push(n);
    }
    Ok(out)
}

type Facets = (Vec<(Vec<Rat>, Rat)>, Vec<Vec<Rat>>);

/// Relative facets as `(outward normal, level)` plus the normal space of the hull.
fn relative_facets(p: &GenPolyhedron, ceiling: usize) -> Result<Facets, GeometryError> {
    if !p.is_polytope() {
        return Err(GeometryError::NotPolytope);
    }
    let d = p.dim();
    if d > ceiling {
        return Err(GeometryError::FacetCeiling { dim: d, ceiling });
    }
    let (_, dirs) = affine_hull(p);
    let k = dirs.len();
    let perp = orthogonal_complement(&dirs, d);
    let mut seen = BTreeSet::new();
    let mut facets = Vec::new();
    if k == 0 {
        return Ok((facets, perp));
    }
    let vs = p.vertices();
    for subset in (0..vs.len()).combinations(k) {
        let base = &vs[subset[0]];
        let mut rows: Vec<Vec<Rat>> = perp.clone();
        for &i in &subset[1..] {
            rows.push(vs[i].iter().zip(base).map(|(a, b)| a - b).collect());
        }
        let ker = RatMatrix::from_rows(rows).kernel_q();
        if ker.len() != 1 {
            continue;
        }
        let n = primitive_direction(&ker[0]);
        let level = dot(&n, base);
        let (mut above, mut below) = (false, false);
        for v in vs {
            match dot(&n, v).cmp(&level) {
                std::cmp::Ordering::Greater => above = true,
                std::cmp::Ordering::Less => below = true,
                std::cmp::Ordering::Equal => {}
            }
            if above && below {
                break;
            }
        }
        let n = match (above, below) {
            (true, true) => continue,
            (true, false) => n.iter().map(|x| -x).collect(),
            _ => n,
        };
        if seen.insert(n.clone()) {
            let level = dot(&n, base);
            facets.push((n, level));
        }
    }
    Ok((facets, perp))
}

/// Inequality description of a polytope.
pub fn halfspaces(p: &GenPolyhedron, ceiling: usize) -> Result<HalfSpaces, GeometryError> {
    let (rel, perp) = relative_facets(p, ceiling)?;
    let v0 = &p.vertices()[0];
    let eqs = perp.into_iter().map(|n| (n.clone(), dot(&n, v0))).collect();
    Ok(HalfSpaces { dim: p.dim(), ineqs: rel, eqs })
}

/// Vertices of a bounded H-polyhedron; empty when infeasible.
pub fn vertices_from_halfspaces(h: &HalfSpaces) -> Vec<Vec<Rat>> {
    let d = h.dim;
    // parametrize the equality solutions as y0 + K z
    let (y0, kbasis) = if h.eqs.is_empty() {
        (vec![Rat::zero(); d], orthogonal_complement(&[], d))
    } else {
        let a = RatMatrix::from_rows(h.eqs.iter().map(|(a, _)| a.clone()).collect());
        let b: Vec<Rat> = h.eqs.iter().map(|(_, b)| b.clone()).collect();
        match a.solve_q(&b) {
            Some(y0) => (y0, a.kernel_q()),
            None => return Vec::new(),
        }
    };
    let r = kbasis.len();
    let lift = |z: &[Rat]| -> Vec<Rat> {
        let mut y = y0.clone();
        for (zi, k) in z.iter().zip(&kbasis) {
            for (yj, kj) in y.iter_mut().zip(k) {
                *yj += zi * kj;
            }
        }
        y
    };
    let reduced: Vec<(Vec<Rat>, Rat)> = h
        .ineqs
        .iter()
        .map(|(a, b)| (kbasis.iter().map(|k| dot(a, k)).collect(), b - dot(a, &y0)))
        .collect();
    let feasible = |z: &[Rat]| reduced.iter().all(|(a, b)| dot(a, z) <= *b);
    let mut out = BTreeSet::new();
    if r == 0 {
        if feasible(&[]) {
            out.insert(y0.clone());
        }
        return out.into_iter().collect();
    }
    for subset in (0..reduced.len()).combinations(r) {
        let m = RatMatrix::from_rows(subset.iter().map(|&i| reduced[i].0.clone()).collect());
        if m.rank_q() < r {
            continue;
        }
        let rhs: Vec<Rat> = subset.iter().map(|&i| reduced[i].1.clone()).collect();
        let z = m.solve_q(&rhs).expect("nonsingular square system");
        if feasible(&z) {
            out.insert(lift(&z));
        }
    }
    out.into_iter().collect()
}

/// `P ∩ span(basis)`, in coordinates with respect to `basis`; `None` when
/// the intersection is empty. Grows an inner hull from support points until
/// every facet of it (and both sides of its affine hull) is confirmed by a
/// support query.
pub fn intersect_with_subspace(
    p: &GenPolyhedron,
    basis: &[Vec<Rat>],
    ceiling: usize,
) -> Result<Option<GenPolyhedron>, GeometryError> {
    if !p.is_polytope() {
        return Err(GeometryError::NotPolytope);
    }
    let k = basis.len();
    if k > ceiling {
        return Err(GeometryError::FacetCeiling { dim: k, ceiling });
    }
    let vs = p.vertices();
    let m = vs.len();
    // variables: convex weights λ, then free coordinates y; Σλ v = Σ y b
    let mut lp = LinearProgram::nonneg(m);
    for _ in 0..k {
        lp.add_var(VarKind::Free);
    }
    lp.constrain_sparse(&(0..m).map(|i| (i, Rat::one())).collect::<Vec<_>>(), Relation::Eq, Rat::one());
    for c in 0..p.dim() {
        let terms: Vec<(usize, Rat)> = (0..m)
            .map(|i| (i, vs[i][c].clone()))
            .chain(basis.iter().enumerate().map(|(j, b)| (m + j, -b[c].clone())))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        lp.constrain_sparse(&terms, Relation::Eq, Rat::zero());
    }
    let support = |dir: &[Rat]| -> Option<(Rat, Vec<Rat>)> {
        let mut obj = vec![Rat::zero(); m];
        obj.extend(dir.iter().cloned());
        match lp.clone().maximize(obj).solve() {
            LpOutcome::Optimal { value, point, .. } => Some((value, point[m..].to_vec())),
            _ => None,
        }
    };
    let Some((_, y0)) = support(&vec![Rat::zero(); k]) else { return Ok(None) };
    let mut pts = vec![y0];
    loop {
        let cur = GenPolyhedron::new(k, pts.clone(), vec![], vec![]).reduce();
        pts = cur.vertices().to_vec();
        let (mut queries, perp) = relative_facets(&cur, ceiling)?;
        for n in perp {
            let level = dot(&n, &pts[0]);
            queries.push((n.iter().map(|x| -x).collect(), -level.clone()));
            queries.push((n, level));
        }
        let mut grew = false;
        for (n, level) in queries {
            let (value, y) = support(&n).expect("a feasible polytope is bounded in every direction");
            if value > level {
                pts.push(y);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    pts.sort();
    Ok(Some(GenPolyhedron::new(k, pts, vec![], vec![])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::geometry::tests::{fig_u, pts};

    fn sorted(mut v: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
        v.sort();
        v
    }

    #[test]
    fn facet_examples() {
        let sq = GenPolyhedron::cube(2, &int(1));
        assert_eq!(sorted(facet_normals(&sq).unwrap()), sorted(pts(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])));
        let n = facet_normals(&fig_u()).unwrap();
        assert_eq!(sorted(n), sorted(pts(&[&[0, -1], &[-1, 1], &[1, -1], &[0, 1]])));
        let tri = GenPolyhedron::polytope(pts(&[&[0, 0], &[1, 0], &[0, 1]]));
        assert_eq!(facet_normals(&tri).unwrap().len(), 3);
        let big = GenPolyhedron::cube(6, &int(1));
        assert!(matches!(facet_normals(&big), Err(GeometryError::FacetCeiling { .. })));
    }

    #[test]
    fn lower_dimensional_normals() {
        let pt = GenPolyhedron::point(vec![int(0), int(3)]);
        assert_eq!(sorted(facet_normals(&pt).unwrap()), sorted(pts(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])));
        let seg = GenPolyhedron::polytope(pts(&[&[0, 0], &[2, 2]]));
        assert_eq!(sorted(facet_normals(&seg).unwrap()), sorted(pts(&[&[1, 1], &[-1, -1], &[1, -1], &[-1, 1]])));
    }

    #[test]
    fn facet_supports_are_attained_by_enough_vertices() {
        let cube = GenPolyhedron::cube(3, &int(2));
        let p = crate::geometry::minkowski_sum(&cube, &GenPolyhedron::polytope(pts(&[&[0, 0, 0], &[1, 2, 3]])));
        for n in facet_normals(&p).unwrap() {
            let m = p.support(&n).unwrap();
            let on: Vec<&Vec<Rat>> = p.vertices().iter().filter(|v| dot(v, &n) == m).collect();
            assert!(on.len() >= 3);
            let (_, dirs) = affine_hull(&GenPolyhedron::polytope(on.into_iter().cloned().collect()));
            assert_eq!(dirs.len(), 2);
        }
    }

    #[test]
    fn halfspace_round_trip() {
        let u = fig_u();
        let h = halfspaces(&u, 5).unwrap();
        assert_eq!(sorted(vertices_from_halfspaces(&h)), sorted(u.vertices().to_vec()));
    }

    #[test]
    fn subspace_intersections() {
        let sq = GenPolyhedron::cube(2, &int(1));
        let xaxis = vec![vec![int(1), int(0)]];
        let seg = intersect_with_subspace(&sq, &xaxis, 5).unwrap().unwrap();
        assert_eq!(seg.vertices(), pts(&[&[-1], &[1]]).as_slice());
        let full = pts(&[&[1, 0], &[0, 1]]);
        assert_eq!(intersect_with_subspace(&fig_u(), &full, 5).unwrap().unwrap(), fig_u());
        let tri = GenPolyhedron::polytope(pts(&[&[0, 1], &[1, -1], &[-1, -1]]));
        let cut = intersect_with_subspace(&tri, &xaxis, 5).unwrap().unwrap();
        // edge from (0,1) to (±1,-1) crosses y = 0 at x = ±1/2
        assert_eq!(cut.vertices(), &[vec![rat(-1, 2)], vec![rat(1, 2)]]);
        let far = GenPolyhedron::cube(2, &int(1)).translate(&[int(0), int(5)]);
        assert_eq!(intersect_with_subspace(&far, &xaxis, 5).unwrap(), None);
    }
}
