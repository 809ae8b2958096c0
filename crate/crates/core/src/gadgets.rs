//! Hardness reductions packaged as instance generators: matrix powering
//! fragments, vector reachability, and the Skolem and Markov gadgets.

use crate::exactnum::{int, Rat};
use crate::forward::{ReachWitness, WitnessStep};
use crate::geometry::{vertices_from_halfspaces, ControlSet, GenPolyhedron, HalfSpaces};
use crate::linalg::RatMatrix;
use crate::preprocess::LtiSystem;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("matrix {0} is singular")]
    Singular(usize),
    #[error("matrix {index} is {rows}x{cols}, expected {dim}x{dim}")]
    Shape { index: usize, rows: usize, cols: usize, dim: usize },
    #[error("vector has dimension {found}, expected {expected}")]
    VectorDim { expected: usize, found: usize },
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("at least one matrix is required")]
    Empty,
    #[error("instances have different factor counts ({0} vs {1})")]
    FactorCount(usize, usize),
    #[error("matrix is not column-stochastic")]
    NotStochastic,
    #[error("matrix must be at least 2x2")]
    TooSmall,
    #[error("exponent {0} is zero")]
    ZeroExponent(usize),
    #[error("exponent count {found} does not match {expected} matrices")]
    ExponentCount { expected: usize, found: usize },
    #[error("the last exponent is negative; no forward schedule realizes it")]
    NegativeFinalExponent,
    #[error("atomic control {0} would fire after the final step")]
    Unschedulable(usize),
}

fn unipotent(d: usize, r: usize, c: usize, v: i64) -> RatMatrix {
    let mut m = RatMatrix::identity(d);
    m.set(r, c, int(v));
    m
}

/// `A^n` for any integer `n` (A invertible when `n < 0`).
fn int_pow(a: &RatMatrix, n: i64) -> RatMatrix {
    if n >= 0 {
        a.pow(n as usize)
    } else {
        a.inverse().expect("invertible").pow(n.unsigned_abs() as usize)
    }
}

fn check_square(ms: &[RatMatrix]) -> Result<usize, GadgetError> {
    let d = ms.first().ok_or(GadgetError::Empty)?.rows();
    for (index, m) in ms.iter().enumerate() {
        if m.rows() != d || m.cols() != d {
            return Err(GadgetError::Shape { index, rows: m.rows(), cols: m.cols(), dim: d });
        }
        if m.det().is_zero() {
            return Err(GadgetError::Singular(index));
        }
    }
    Ok(d)
}

/// `∏ A_i^{n_i} = C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoweringInstance {
    pub matrices: Vec<RatMatrix>,
    pub target: RatMatrix,
}

impl PoweringInstance {
    pub fn new(matrices: Vec<RatMatrix>, target: RatMatrix) -> Result<Self, GadgetError> {
        let mut all = matrices.clone();
        all.push(target.clone());
        check_square(&all)?;
        Ok(Self { matrices, target })
    }

    pub fn dim(&self) -> usize {
        self.target.rows()
    }

    pub fn product(&self, exps: &[i64]) -> RatMatrix {
        assert_eq!(exps.len(), self.matrices.len(), "one exponent per matrix");
        self.matrices
            .iter()
            .zip(exps)
            .fold(RatMatrix::identity(self.dim()), |acc, (a, &n)| acc.mul(&int_pow(a, n)))
    }

    pub fn holds(&self, exps: &[i64]) -> bool {
        self.product(exps) == self.target
    }

    /// Appends identity factors up to `k`.
    pub fn pad(&self, k: usize) -> Self {
        let mut m = self.matrices.clone();
        m.resize(k.max(m.len()), RatMatrix::identity(self.dim()));
        Self { matrices: m, target: self.target.clone() }
    }
}

/// `[[1,1],[0,1]]^z = [[1,k],[0,1]]`.
pub fn gadget_constant(k: i64) -> PoweringInstance {
    PoweringInstance { matrices: vec![unipotent(2, 0, 1, 1)], target: unipotent(2, 0, 1, k) }
}

/// Variables `(x, y, z)`: holds iff `z = x + y`.
pub fn gadget_add() -> PoweringInstance {
    PoweringInstance {
        matrices: vec![unipotent(2, 0, 1, 1), unipotent(2, 0, 1, 1), unipotent(2, 0, 1, -1)],
        target: RatMatrix::identity(2),
    }
}

/// Variables `(z, y′, x, y, x′)`: holds iff `z = xy`, `x′ = x`, `y′ = y`.
pub fn gadget_mul() -> PoweringInstance {
    PoweringInstance {
        matrices: vec![
            unipotent(3, 0, 2, -1),
            unipotent(3, 1, 2, -1),
            unipotent(3, 0, 1, 1),
            unipotent(3, 1, 2, 1),
            unipotent(3, 0, 1, -1),
        ],
        target: RatMatrix::identity(3),
    }
}

/// Block-diagonal stacking; shorter instances are padded with identities.
pub fn conjoin(instances: &[PoweringInstance]) -> Result<PoweringInstance, GadgetError> {
    let k = instances.iter().map(|p| p.matrices.len()).max().ok_or(GadgetError::Empty)?;
    let padded: Vec<PoweringInstance> = instances.iter().map(|p| p.pad(k)).collect();
    let matrices = (0..k)
        .map(|i| RatMatrix::block_diag(&padded.iter().map(|p| p.matrices[i].clone()).collect::<Vec<_>>()))
        .collect();
    let target = RatMatrix::block_diag(&padded.iter().map(|p| p.target.clone()).collect::<Vec<_>>());
    Ok(PoweringInstance { matrices, target })
}

/// `A_k^{n_k} ⋯ A_1^{n_1} x = y` with every `n_i ≠ 0`: `A_1` acts first,
/// matching the order in which the LTI gadget applies the factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorReachInstance {
    pub matrices: Vec<RatMatrix>,
    pub x: Vec<Rat>,
    pub y: Vec<Rat>,
}

impl VectorReachInstance {
    pub fn new(matrices: Vec<RatMatrix>, x: Vec<Rat>, y: Vec<Rat>) -> Result<Self, GadgetError> {
        let d = check_square(&matrices)?;
        for v in [&x, &y] {
            if v.len() != d {
                return Err(GadgetError::VectorDim { expected: d, found: v.len() });
            }
            if v.iter().all(Zero::is_zero) {
                return Err(GadgetError::ZeroVector);
            }
        }
        Ok(Self { matrices, x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn apply(&self, exps: &[i64]) -> Vec<Rat> {
        assert_eq!(exps.len(), self.matrices.len(), "one exponent per matrix");
        self.matrices.iter().zip(exps).fold(self.x.clone(), |z, (a, &n)| int_pow(a, n).mul_vec(&z))
    }

    pub fn holds(&self, exps: &[i64]) -> bool {
        !exps.contains(&0) && self.apply(exps) == self.y
    }
}

/// Lifts `∏ A_i^{n_i} = B` to `∏ diag(A_i, …, A_i)^{n_i} (e_1; …; e_d) = (b_1; …; b_d)`.
/// The factors are listed in reverse, so the exponent tuple of the vector
/// instance is the reversed tuple of the powering instance.
pub fn powering_to_vector_reach(p: &PoweringInstance) -> VectorReachInstance {
    let d = p.dim();
    let matrices = p.matrices.iter().rev().map(|a| RatMatrix::block_diag(&vec![a.clone(); d])).collect();
    let x = RatMatrix::identity(d).col_vecs().concat();
    let y = p.target.col_vecs().concat();
    VectorReachInstance { matrices, x, y }
}

/// The vector-reachability system in dimension `(k+1)d + k` together with
/// the data needed to map exponent tuples to control schedules.
#[derive(Clone, Debug)]
pub struct VectorReachLti {
    pub system: LtiSystem,
    pub instance: VectorReachInstance,
}

/// A schedule derived from exponents: atomic control `i` fires at step
/// `times[i]`, and the target is reached after `horizon` steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorReachSchedule {
    pub times: Vec<usize>,
    pub horizon: usize,
    pub witness: ReachWitness,
}

/// Nonnegative `t_1..t_{k+1}` with `t_{i+1} − t_i = n_i`, shifted so the
/// smallest is zero.
pub fn exponent_times(exps: &[i64]) -> Vec<usize> {
    let mut t = vec![0i64];
    for n in exps {
        t.push(t.last().unwrap() + n);
    }
    let min = *t.iter().min().unwrap();
    t.into_iter().map(|x| (x - min) as usize).collect()
}

fn block_index(d: usize, block: usize, j: usize) -> usize {
    block * d + j
}

pub fn vector_reach_to_lti(v: &VectorReachInstance) -> VectorReachLti {
    let (k, d) = (v.matrices.len(), v.dim());
    let dim = (k + 1) * d + k;
    let mut blocks = vec![RatMatrix::identity(d)];
    blocks.extend(v.matrices.iter().cloned());
    blocks.push(RatMatrix::identity(k));
    let a = RatMatrix::block_diag(&blocks);
    // one affine component per subset of atomic controls, indexed by bitmask
    let comps = (0..1usize << k)
        .map(|mask| {
            let mut offset = vec![Rat::zero(); dim];
            let mut lines = Vec::new();
            for i in (0..k).filter(|i| mask >> i & 1 == 1) {
                offset[(k + 1) * d + i] = Rat::one();
                for j in 0..d {
                    let mut l = vec![Rat::zero(); dim];
                    l[block_index(d, i, j)] = Rat::one();
                    l[block_index(d, i + 1, j)] = -Rat::one();
                    lines.push(l);
                }
            }
            GenPolyhedron::new(dim, vec![offset], vec![], lines)
        })
        .collect();
    let controls = ControlSet::new(comps).expect("components share a dimension");
    let mut source = vec![Rat::zero(); dim];
    source[..d].clone_from_slice(&v.x);
    let mut target = vec![Rat::zero(); dim];
    target[k * d..(k + 1) * d].clone_from_slice(&v.y);
    for x in &mut target[(k + 1) * d..] {
        *x = Rat::one();
    }
    let system = LtiSystem::new(a, controls, source, GenPolyhedron::point(target)).expect("consistent dimensions");
    VectorReachLti { system, instance: v.clone() }
}

impl VectorReachLti {
    /// Control schedule realizing a solution `n`: atomic control `i` moves
    /// `z_i = ∏_{j<i} A_j^{n_j} x` from block `i` to block `i+1` at step
    /// `t_i`; the run ends after `t_{k+1} + 1` steps.
    pub fn schedule(&self, exps: &[i64]) -> Result<VectorReachSchedule, GadgetError> {
        let inst = &self.instance;
        let (k, d) = (inst.matrices.len(), inst.dim());
        if exps.len() != k {
            return Err(GadgetError::ExponentCount { expected: k, found: exps.len() });
        }
        if let Some(i) = exps.iter().position(|&n| n == 0) {
            return Err(GadgetError::ZeroExponent(i));
        }
        if exps[k - 1] < 0 {
            return Err(GadgetError::NegativeFinalExponent);
        }
        let times = exponent_times(exps);
        let horizon = times[k] + 1;
        if let Some(i) = times[..k].iter().position(|&t| t >= horizon) {
            return Err(GadgetError::Unschedulable(i));
        }
        let mut z = vec![inst.x.clone()];
        for i in 0..k {
            z.push(int_pow(&inst.matrices[i], exps[i]).mul_vec(&z[i]));
        }
        let dim = self.system.dim();
        let mut controls = Vec::with_capacity(horizon);
        for step in 0..horizon {
            let mut mask = 0usize;
            let mut u = vec![Rat::zero(); dim];
            for i in (0..k).filter(|&i| times[i] == step) {
                mask |= 1 << i;
                u[(k + 1) * d + i] = Rat::one();
                for j in 0..d {
                    u[block_index(d, i, j)] -= &z[i][j];
                    u[block_index(d, i + 1, j)] += &z[i][j];
                }
            }
            let comp = &self.system.controls.components()[mask];
            let dec = comp.decompose(&u).expect("control lies in its component");
            let weights = [dec.vertex_weights, dec.ray_weights, dec.line_weights].concat();
            controls.push(WitnessStep { component: mask, weights });
        }
        Ok(VectorReachSchedule { times, horizon, witness: ReachWitness { horizon, controls } })
    }
}

/// `A = diag(M, 2)`, controls `{0} ∪ {(0, x_2, …, x_d, 1)}`, source
/// `(e_2, 0)`, target `(0, …, 0, 1)`: reachable in `n ≥ 1` steps iff
/// `(M^n)_{1,2} = 0`.
pub fn skolem_to_lti(m: &RatMatrix) -> Result<LtiSystem, GadgetError> {
    let d = m.rows();
    if m.cols() != d {
        return Err(GadgetError::Shape { index: 0, rows: d, cols: m.cols(), dim: d });
    }
    if d < 2 {
        return Err(GadgetError::TooSmall);
    }
    let a = RatMatrix::block_diag(&[m.clone(), RatMatrix::diag(&[int(2)])]);
    let e = |i: usize| -> Vec<Rat> { (0..=d).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect() };
    let affine = GenPolyhedron::new(d + 1, vec![e(d)], vec![], (1..d).map(e).collect());
    let controls = ControlSet::new(vec![GenPolyhedron::origin(d + 1), affine]).expect("same dimension");
    LtiSystem::new(a, controls, e(1), GenPolyhedron::point(e(d))).map_err(|_| GadgetError::TooSmall)
}

fn is_column_stochastic(m: &RatMatrix) -> bool {
    m.rows() == m.cols()
        && m.entries().iter().all(|x| *x >= Rat::zero())
        && (0..m.cols()).all(|c| m.col(c).iter().sum::<Rat>().is_one())
}

/// `A = diag(M, 0, 0, 1)` with
/// `U = {(−x, y, z, z) : x ≥ 0, 0 ≤ y ≤ x_1, Σ x_i = z ≤ 1}`, source
/// `(e_2, 0, 0, 0)`, target `(0, 1/2, 1, 1)`: reachable in `n` steps iff
/// `(M^n)_{1,2} ≥ 1/2`.
pub fn markov_to_lti(m: &RatMatrix) -> Result<LtiSystem, GadgetError> {
    if !is_column_stochastic(m) {
        return Err(GadgetError::NotStochastic);
    }
    let d = m.rows();
    if d < 2 {
        return Err(GadgetError::TooSmall);
    }
    // H-description over (x, y, z)
    let n = d + 2;
    let unit = |i: usize, s: i64| -> Vec<Rat> { (0..n).map(|j| if i == j { int(s) } else { Rat::zero() }).collect() };
    let mut ineqs: Vec<(Vec<Rat>, Rat)> = (0..d).map(|i| (unit(i, -1), Rat::zero())).collect();
    ineqs.push((unit(d, -1), Rat::zero()));
    let mut y_le_x1 = unit(d, 1);
    y_le_x1[0] = int(-1);
    ineqs.push((y_le_x1, Rat::zero()));
    ineqs.push((unit(d + 1, 1), Rat::one()));
    let mut sum = vec![Rat::one(); n];
    sum[d] = Rat::zero();
    sum[d + 1] = int(-1);
    let h = HalfSpaces { dim: n, ineqs, eqs: vec![(sum, Rat::zero())] };
    let vertices = vertices_from_halfspaces(&h)
        .into_iter()
        .map(|p| {
            let mut v: Vec<Rat> = p[..d].iter().map(|x| -x).collect();
            v.push(p[d].clone());
            v.push(p[d + 1].clone());
            v.push(p[d + 1].clone());
            v
        })
        .collect();
    let u = GenPolyhedron::polytope(vertices);
    let zero = RatMatrix::zeros(1, 1);
    let a = RatMatrix::block_diag(&[m.clone(), zero.clone(), zero, RatMatrix::identity(1)]);
    let mut source = vec![Rat::zero(); d + 3];
    source[1] = Rat::one();
    let mut target = vec![Rat::zero(); d + 3];
    target[d] = Rat::new(1.into(), 2.into());
    target[d + 1] = Rat::one();
    target[d + 2] = Rat::one();
    LtiSystem::new(a, ControlSet::single(u), source, GenPolyhedron::point(target)).map_err(|_| GadgetError::TooSmall)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::forward::{reach_exactly, reach_within, verify_witness};

    #[test]
    fn arithmetic_fragments() {
        let c = gadget_constant(3);
        assert!(c.holds(&[3]));
        assert!(!c.holds(&[2]));
        assert_eq!(unipotent(2, 0, 1, 1).pow(3), RatMatrix::from_i64(&[&[1, 3], &[0, 1]]));
        let add = gadget_add();
        assert!(add.holds(&[2, 3, 5]));
        assert!(add.holds(&[-4, 1, -3]));
        assert!(!add.holds(&[2, 3, 6]));
        let mul = gadget_mul();
        // order (z, y', x, y, x')
        assert!(mul.holds(&[6, 3, 2, 3, 2]));
        assert!(mul.holds(&[-6, 3, -2, 3, -2]));
        assert!(!mul.holds(&[5, 3, 2, 3, 2]));
        assert!(!mul.holds(&[6, 3, 2, 3, 1]));
        for x in -3..=3i64 {
            for y in -3..=3i64 {
                for z in -9..=9i64 {
                    assert_eq!(mul.holds(&[z, y, x, y, x]), z == x * y);
                    assert_eq!(add.holds(&[x, y, z]), z == x + y);
                }
            }
        }
    }

    #[test]
    fn conjunction_intersects_solution_sets() {
        let p = gadget_add();
        let q = PoweringInstance {
            matrices: vec![unipotent(2, 0, 1, 1), unipotent(2, 0, 1, -1), RatMatrix::identity(2)],
            target: unipotent(2, 0, 1, 1),
        };
        let both = conjoin(&[p.clone(), q.clone()]).unwrap();
        assert_eq!(both.dim(), 4);
        assert_eq!(conjoin(std::slice::from_ref(&p)).unwrap(), p);
        for x in -3..=3 {
            for y in -3..=3 {
                for z in -3..=3 {
                    let e = [x, y, z];
                    assert_eq!(both.holds(&e), p.holds(&e) && q.holds(&e));
                }
            }
        }
        let trivial = PoweringInstance { matrices: vec![unipotent(2, 0, 1, 1)], target: RatMatrix::identity(2) }.pad(3);
        let with_trivial = conjoin(&[p.clone(), trivial]).unwrap();
        // trivial part forces the first exponent to zero
        for y in -3..=3 {
            for z in -3..=3 {
                assert_eq!(with_trivial.holds(&[0, y, z]), p.holds(&[0, y, z]));
            }
        }
    }

    #[test]
    fn powering_lift() {
        let a = unipotent(2, 0, 1, 1);
        let p = PoweringInstance::new(vec![a.clone()], a.pow(2)).unwrap();
        let v = powering_to_vector_reach(&p);
        assert_eq!(v.dim(), 4);
        assert!(v.holds(&[2]));
        assert!(!v.holds(&[1]));
        let p = PoweringInstance::new(vec![a.clone()], a.clone()).unwrap();
        assert!(powering_to_vector_reach(&p).holds(&[1]));
        // order matters for non-commuting factors
        let b = unipotent(2, 1, 0, 1);
        let p = PoweringInstance::new(vec![a.clone(), b.clone()], a.pow(2).mul(&b.pow(3))).unwrap();
        let v = powering_to_vector_reach(&p);
        assert!(p.holds(&[2, 3]));
        assert!(v.holds(&[3, 2]));
        assert!(!v.holds(&[2, 3]));
        let bad = PoweringInstance::new(vec![a], RatMatrix::identity(3));
        assert!(matches!(bad, Err(GadgetError::Shape { .. })));
    }

    #[test]
    fn exponent_times_satisfy_differences() {
        for exps in [vec![2], vec![-3, 5], vec![1, -4, 2, -1], vec![-2, -2]] {
            let t = exponent_times(&exps);
            assert!(t.contains(&0));
            for (i, n) in exps.iter().enumerate() {
                assert_eq!(t[i + 1] as i64 - t[i] as i64, *n);
            }
        }
    }

    fn vr_example(y: [i64; 2]) -> VectorReachLti {
        let inst = VectorReachInstance::new(
            vec![unipotent(2, 0, 1, 1)],
            vec![int(0), int(1)],
            vec![int(y[0]), int(y[1])],
        )
        .unwrap();
        vector_reach_to_lti(&inst)
    }

    #[test]
    fn vector_reach_schedule_replays() {
        let g = vr_example([2, 1]);
        assert_eq!(g.system.dim(), 5);
        let s = g.schedule(&[2]).unwrap();
        assert_eq!(s.times, vec![0, 2]);
        assert_eq!(s.horizon, 3);
        assert_eq!(verify_witness(&g.system, &s.witness), Ok(true));
        assert!(reach_exactly(&g.system, 3).is_some());
        assert!(reach_within(&g.system, 2).is_none());
        assert_eq!(g.schedule(&[0]), Err(GadgetError::ZeroExponent(0)));
        assert_eq!(g.schedule(&[-1]), Err(GadgetError::NegativeFinalExponent));

        let g = vr_example([0, 2]);
        assert!(reach_within(&g.system, 5).is_none());
    }

    #[test]
    fn two_factor_schedule_with_negative_first_exponent() {
        let a1 = unipotent(2, 0, 1, 1);
        let a2 = unipotent(2, 1, 0, 1);
        let x = vec![int(1), int(1)];
        let exps = [-1i64, 2];
        let target = int_pow(&a2, exps[1]).mul_vec(&int_pow(&a1, exps[0]).mul_vec(&x));
        let inst = VectorReachInstance::new(vec![a1.clone(), a2.clone()], x.clone(), target).unwrap();
        assert!(inst.holds(&exps));
        let g = vector_reach_to_lti(&inst);
        let s = g.schedule(&exps).unwrap();
        assert_eq!(s.times, vec![1, 0, 2]);
        assert_eq!(verify_witness(&g.system, &s.witness), Ok(true));

        let three = VectorReachInstance::new(vec![a1.clone(), a2, a1], x.clone(), x).unwrap();
        let g = vector_reach_to_lti(&three);
        assert_eq!(g.schedule(&[3, -5, 1]), Err(GadgetError::Unschedulable(0)));
    }

    #[test]
    fn skolem_gadgets() {
        let rot = RatMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let sys = skolem_to_lti(&rot).unwrap();
        assert!(reach_within(&sys, 1).is_none());
        let w = reach_exactly(&sys, 2).unwrap();
        assert_eq!(verify_witness(&sys, &w), Ok(true));
        let jordan = RatMatrix::from_i64(&[&[2, 1], &[0, 2]]);
        assert!(reach_within(&skolem_to_lti(&jordan).unwrap(), 8).is_none());
    }

    #[test]
    fn markov_gadgets() {
        let swap = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        let sys = markov_to_lti(&swap).unwrap();
        let w = reach_exactly(&sys, 1).unwrap();
        assert_eq!(verify_witness(&sys, &w), Ok(true));
        let half = RatMatrix::from_rows(vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]]);
        assert!(reach_exactly(&markov_to_lti(&half).unwrap(), 1).is_some());
        assert!(reach_within(&markov_to_lti(&RatMatrix::identity(2)).unwrap(), 4).is_none());
        assert_eq!(markov_to_lti(&RatMatrix::from_i64(&[&[1, 1], &[0, 1]])), Err(GadgetError::NotStochastic));
    }
}
