//! Simplicity checks and the reduction to a system with invertible
//! transition matrix, positive real spectrum and full-dimensional reachable
//! set: power step, then Fitting split, then restriction to the Krylov span.

use crate::exactnum::{ser, Rat};
use crate::forward::{replay, solve_schedule, witness_controls, Goal, ReachWitness, WitnessStep};
use crate::geometry::{
    intersect_with_subspace, linear_image, minkowski_sum, partial_sum, relative_interior_contains_origin,
    ControlSet, GenPolyhedron, GeometryError, DEFAULT_FACET_CEILING,
};
use crate::linalg::{coordinates, fitting_split, krylov_invariant_span, real_spectrum_power, schur_stable, RatMatrix};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LtiSystem {
    pub a: RatMatrix,
    pub controls: ControlSet,
    #[serde(with = "ser::vec")]
    pub source: Vec<Rat>,
    pub target: GenPolyhedron,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreprocessError {
    #[error("{what} has dimension {found}, expected {expected}")]
    Dimension { what: &'static str, expected: usize, found: usize },
    #[error("the target must be a bounded polytope")]
    TargetNotPolytope,
    #[error("system is not simple: {0}")]
    NotSimple(String),
    #[error("the certification pipeline needs source = 0")]
    NonzeroSource,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("witness lifting failed: {0}")]
    Lift(String),
}

impl LtiSystem {
    pub fn new(
        a: RatMatrix,
        controls: ControlSet,
        source: Vec<Rat>,
        target: GenPolyhedron,
    ) -> Result<Self, PreprocessError> {
        let d = a.rows();
        let dim = |what, found| {
            if found == d {
                Ok(())
            } else {
                Err(PreprocessError::Dimension { what, expected: d, found })
            }
        };
        dim("matrix column count", a.cols())?;
        dim("control set", controls.dim())?;
        dim("source", source.len())?;
        dim("target", target.dim())?;
        if !target.is_polytope() {
            return Err(PreprocessError::TargetNotPolytope);
        }
        Ok(Self { a, controls, source, target })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicityReport {
    pub is_polytope: bool,
    pub origin_in_rel_interior: bool,
    pub schur: bool,
    pub real_power: Option<usize>,
    pub source_zero: bool,
    pub simple: bool,
}

impl SimplicityReport {
    /// Names the first failing condition.
    pub fn failure(&self) -> Option<&'static str> {
        if !self.is_polytope {
            Some("the control set is not a single bounded polytope")
        } else if !self.origin_in_rel_interior {
            Some("0 is not in the relative interior of the control polytope")
        } else if !self.schur {
            Some("the spectral radius of A is not below 1")
        } else if self.real_power.is_none() {
            Some("no positive power of A has an exclusively real spectrum")
        } else {
            None
        }
    }
}

pub fn check_simple(sys: &LtiSystem) -> SimplicityReport {
    let poly = sys.controls.as_polytope();
    let is_polytope = poly.is_some();
    let origin_in_rel_interior = poly.is_some_and(relative_interior_contains_origin);
    let schur = schur_stable(&sys.a);
    let real_power = real_spectrum_power(&sys.a);
    let source_zero = sys.source.iter().all(Zero::is_zero);
    let simple = is_polytope && origin_in_rel_interior && schur && real_power.is_some();
    SimplicityReport { is_polytope, origin_in_rel_interior, schur, real_power, source_zero, simple }
}

/// Everything needed to lift a reduced witness back to the original system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackMap {
    pub power: usize,
    /// Steps of `A^M` absorbed by the Fitting split (0 when `A^M` is invertible).
    pub fitting_steps: usize,
    /// Basis of `im (A^M)^d` in original coordinates.
    #[serde(with = "ser::vecs")]
    pub v1_basis: Vec<Vec<Rat>>,
    /// Basis of the Krylov span in `V1` coordinates.
    #[serde(with = "ser::vecs")]
    pub span_basis: Vec<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleForm {
    pub a_reduced: RatMatrix,
    pub u_reduced: GenPolyhedron,
    /// `None` when the reduced target is empty, i.e. the original target is unreachable.
    pub q_reduced: Option<GenPolyhedron>,
    pub back_map: BackMap,
}

/// Matrix of `a` restricted to the invariant subspace spanned by `basis`.
fn restrict(a: &RatMatrix, basis: &[Vec<Rat>]) -> RatMatrix {
    let cols: Vec<Vec<Rat>> = basis
        .iter()
        .map(|b| coordinates(basis, &a.mul_vec(b)).expect("subspace is invariant"))
        .collect();
    RatMatrix::from_cols(basis.len(), &cols)
}

fn to_coords(p: &GenPolyhedron, basis: &[Vec<Rat>]) -> GenPolyhedron {
    let f = |vs: &[Vec<Rat>]| -> Vec<Vec<Rat>> {
        vs.iter().map(|v| coordinates(basis, v).expect("generator lies in the subspace")).collect()
    };
    GenPolyhedron::new(basis.len(), f(p.vertices()), f(p.rays()), f(p.lines()))
}

fn from_coords(basis: &[Vec<Rat>], dim: usize, c: &[Rat]) -> Vec<Rat> {
    let mut x = vec![Rat::zero(); dim];
    for (ci, b) in c.iter().zip(basis) {
        for (xj, bj) in x.iter_mut().zip(b) {
            *xj += ci * bj;
        }
    }
    x
}

fn is_full(basis: &[Vec<Rat>], dim: usize) -> bool {
    basis.len() == dim
}

fn standard_basis(d: usize) -> Vec<Vec<Rat>> {
    RatMatrix::identity(d).row_vecs()
}

pub fn to_simple_form(sys: &LtiSystem) -> Result<SimpleForm, PreprocessError> {
    let report = check_simple(sys);
    if let Some(why) = report.failure() {
        return Err(PreprocessError::NotSimple(why.to_string()));
    }
    if !report.source_zero {
        return Err(PreprocessError::NonzeroSource);
    }
    let d = sys.dim();
    let u = sys.controls.as_polytope().expect("checked above");
    let m = report.real_power.expect("checked above");

    let (am, um) = if m == 1 { (sys.a.clone(), u.clone()) } else { (sys.a.pow(m), partial_sum(&sys.a, u, m - 1)) };

    let (v0, v1) = fitting_split(&am);
    let (fitting_steps, v1_basis, a1, u1, q1) = if v0.is_empty() {
        (0, standard_basis(d), am.clone(), um.clone(), Some(sys.target.clone()))
    } else {
        let ad = am.pow(d);
        let a1 = restrict(&am, &v1);
        let u1 = to_coords(&linear_image(&ad, &um), &v1);
        let absorbed = partial_sum(&am, &um, d - 1);
        let diff = minkowski_sum(&sys.target, &absorbed.neg());
        let q1 = if v1.is_empty() {
            diff.contains(&vec![Rat::zero(); d]).then(|| GenPolyhedron::origin(0))
        } else {
            intersect_with_subspace(&diff, &v1, DEFAULT_FACET_CEILING)?
        };
        (d, v1, a1, u1, q1)
    };

    let d1 = a1.rows();
    let span = krylov_invariant_span(&a1, u1.vertices());
    let (span_basis, a2, u2, q2) = if is_full(&span, d1) {
        (standard_basis(d1), a1, u1, q1)
    } else {
        let a2 = restrict(&a1, &span);
        let u2 = to_coords(&u1, &span);
        let q2 = match q1 {
            None => None,
            Some(q) if span.is_empty() => q.contains(&vec![Rat::zero(); d1]).then(|| GenPolyhedron::origin(0)),
            Some(q) => intersect_with_subspace(&q, &span, DEFAULT_FACET_CEILING)?,
        };
        (span, a2, u2, q2)
    };

    Ok(SimpleForm {
        a_reduced: a2,
        u_reduced: u2,
        q_reduced: q2,
        back_map: BackMap { power: m, fitting_steps, v1_basis, span_basis },
    })
}

impl SimpleForm {
    /// The reduced system (source 0), when the reduced target is nonempty.
    pub fn reduced_system(&self) -> Option<LtiSystem> {
        let q = self.q_reduced.clone()?;
        let k = self.a_reduced.rows();
        Some(LtiSystem {
            a: self.a_reduced.clone(),
            controls: ControlSet::single(self.u_reduced.clone()),
            source: vec![Rat::zero(); k],
            target: q,
        })
    }

    /// Original horizon corresponding to a reduced horizon.
    pub fn original_horizon(&self, reduced: usize) -> usize {
        self.back_map.power * (reduced + self.back_map.fitting_steps)
    }
}

/// Lifts a reduced witness to an original control sequence that replays
/// into the original target.
pub fn lift_witness(
    sys: &LtiSystem,
    form: &SimpleForm,
    reduced: &ReachWitness,
) -> Result<ReachWitness, PreprocessError> {
    let bad = |s: &str| PreprocessError::Lift(s.to_string());
    let rsys = form.reduced_system().ok_or_else(|| bad("reduced target is empty"))?;
    let rcontrols = witness_controls(&rsys.controls, reduced).map_err(|e| PreprocessError::Lift(e.to_string()))?;
    let d = sys.dim();
    let bm = &form.back_map;
    let u = sys.controls.as_polytope().ok_or_else(|| bad("control set is not a polytope"))?;
    let am = sys.a.pow(bm.power);
    let um = if bm.power == 1 { u.clone() } else { partial_sum(&sys.a, u, bm.power - 1) };

    // reduced controls in original coordinates; each is A_M^{d_F} of a point of U_M
    let d1 = bm.v1_basis.len();
    let ad = am.pow(bm.fitting_steps);
    let mut power_controls = Vec::with_capacity(rcontrols.len() + bm.fitting_steps);
    for c in &rcontrols {
        let in_v1 = from_coords(&bm.span_basis, d1, c);
        let x = from_coords(&bm.v1_basis, d, &in_v1);
        let w = um.decompose_image(&ad, &x).ok_or_else(|| bad("control has no preimage in U_M"))?;
        power_controls.push(um.combine(&w));
    }
    if bm.fitting_steps > 0 {
        let xt = replay(&am, &vec![Rat::zero(); d], &power_controls);
        let steps = vec![&um; bm.fitting_steps];
        let ws = solve_schedule(&am, &xt, &steps, Goal::Set(&sys.target))
            .ok_or_else(|| bad("no absorbed controls reach the target"))?;
        for w in ws {
            power_controls.push(um.combine(&um.split_weights(&w)));
        }
    }

    let mut controls = Vec::with_capacity(power_controls.len() * bm.power);
    let steps = vec![u; bm.power];
    for p in &power_controls {
        let ws = solve_schedule(&sys.a, &vec![Rat::zero(); d], &steps, Goal::Point(p))
            .ok_or_else(|| bad("power-step control does not split"))?;
        controls.extend(ws.into_iter().map(|weights| WitnessStep { component: 0, weights }));
    }
    let lifted = ReachWitness { horizon: controls.len(), controls };
    match crate::forward::verify_witness(sys, &lifted) {
        Ok(true) => Ok(lifted),
        _ => Err(bad("lifted witness does not replay into the target")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::forward::reach_within;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter().map(|r| r.iter().map(|x| int(*x)).collect()).collect()
    }

    fn fig_u() -> GenPolyhedron {
        GenPolyhedron::polytope(pts(&[&[-2, -1], &[0, -1], &[0, 1], &[2, 1]]))
    }

    fn sys(a: RatMatrix, u: GenPolyhedron, q: GenPolyhedron) -> LtiSystem {
        let d = a.rows();
        LtiSystem::new(a, ControlSet::single(u), vec![Rat::zero(); d], q).unwrap()
    }

    #[test]
    fn fig_system_is_simple_and_unchanged() {
        let s = sys(RatMatrix::diag(&[rat(1, 3), rat(2, 3)]), fig_u(), GenPolyhedron::point(vec![int(1), int(1)]));
        let r = check_simple(&s);
        assert!(r.simple);
        assert_eq!(r.real_power, Some(1));
        let f = to_simple_form(&s).unwrap();
        assert_eq!(f.a_reduced, s.a);
        assert_eq!(f.u_reduced, fig_u());
        assert_eq!(f.q_reduced.as_ref(), Some(&s.target));
        let w = reach_within(&f.reduced_system().unwrap(), 4).unwrap();
        assert_eq!(lift_witness(&s, &f, &w).unwrap(), w);
    }

    #[test]
    fn non_simple_examples() {
        let sk = sys(RatMatrix::diag(&[int(1), int(2)]), GenPolyhedron::cube(2, &int(1)), GenPolyhedron::origin(2));
        assert!(!check_simple(&sk).schur);
        let c = rat(3, 5);
        let s = rat(4, 5);
        let half = rat(1, 2);
        let rot = RatMatrix::from_rows(vec![vec![&c * &half, -&s * &half], vec![&s * &half, &c * &half]]);
        let seg = GenPolyhedron::polytope(pts(&[&[0, 0], &[1, 0]]));
        let r = check_simple(&sys(rot, seg, GenPolyhedron::origin(2)));
        assert_eq!(r.real_power, None);
        assert!(!r.simple);
    }

    #[test]
    fn fitting_reduction_to_one_dimension() {
        let a = RatMatrix::diag(&[int(0), rat(1, 2)]);
        let q = GenPolyhedron::cube(2, &int(1)).translate(&[int(0), int(2)]);
        let s = sys(a, GenPolyhedron::cube(2, &int(1)), q.clone());
        let f = to_simple_form(&s).unwrap();
        assert_eq!(f.a_reduced, RatMatrix::diag(&[rat(1, 2)]));
        assert_eq!(f.back_map.fitting_steps, 2);
        assert_eq!(f.back_map.v1_basis, pts(&[&[0, 1]]));
        // oracle: S = U + A U = [-1,1] x [-3/2, 3/2]; Q - S on the e2 axis is [1 - 3/2, 3 + 3/2]
        assert_eq!(f.q_reduced.unwrap().vertices(), &[vec![rat(-1, 2)], vec![rat(9, 2)]]);
        // U' = A^2 U = {0} x [-1/4, 1/4]
        assert_eq!(f.u_reduced.vertices(), &[vec![rat(-1, 4)], vec![rat(1, 4)]]);
    }

    #[test]
    fn rotation_power_reduction_and_lift() {
        let a = RatMatrix::from_rows(vec![vec![int(0), rat(-1, 2)], vec![rat(1, 2), int(0)]]);
        let u = GenPolyhedron::cube(2, &int(1));
        let q = GenPolyhedron::point(vec![rat(5, 4), rat(1, 3)]);
        let s = sys(a.clone(), u.clone(), q);
        let f = to_simple_form(&s).unwrap();
        assert_eq!(f.back_map.power, 4);
        assert_eq!(f.a_reduced, RatMatrix::diag(&[rat(1, 16), rat(1, 16)]));
        // oracle: explicit 4-term Minkowski sum
        let mut sum = u.clone();
        let mut term = u.clone();
        for _ in 1..4 {
            term = linear_image(&a, &term);
            sum = minkowski_sum(&sum, &term);
        }
        assert_eq!(f.u_reduced, sum);
        let w = reach_within(&f.reduced_system().unwrap(), 3).unwrap();
        let lifted = lift_witness(&s, &f, &w).unwrap();
        assert_eq!(lifted.horizon, 4 * w.horizon);
    }

    #[test]
    fn span_reduction_and_nilpotent_lift() {
        // A has a nilpotent block and U lives in a 2-D slice of Q^3
        let a = RatMatrix::from_rows(vec![
            vec![rat(1, 2), int(0), int(0)],
            vec![int(0), rat(1, 3), int(0)],
            vec![int(1), int(0), int(0)],
        ]);
        let u = GenPolyhedron::polytope(pts(&[&[-1, 0, 0], &[1, 0, 0], &[0, 0, -1], &[0, 0, 1]]));
        let q = GenPolyhedron::point(vec![rat(3, 4), int(0), rat(1, 2)]);
        let s = sys(a, u, q);
        assert!(check_simple(&s).simple);
        let f = to_simple_form(&s).unwrap();
        assert_eq!(f.back_map.fitting_steps, 3);
        assert_eq!(f.a_reduced.rows(), 1);
        let w = reach_within(&f.reduced_system().unwrap(), 4).unwrap();
        let lifted = lift_witness(&s, &f, &w).unwrap();
        assert_eq!(lifted.horizon, f.original_horizon(w.horizon));
        assert_eq!(crate::forward::verify_witness(&s, &lifted), Ok(true));
    }

    #[test]
    fn empty_reduced_target() {
        let a = RatMatrix::diag(&[int(0), rat(1, 2)]);
        let q = GenPolyhedron::point(vec![int(5), int(0)]);
        let f = to_simple_form(&sys(a, GenPolyhedron::cube(2, &int(1)), q)).unwrap();
        assert!(f.q_reduced.is_none());
    }
}
