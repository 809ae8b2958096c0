//! Bounded-horizon reachability by exact LP over control sequences.

use crate::exactnum::{ser, Rat};
use crate::geometry::{ControlSet, GenPolyhedron, LinearProgram, Relation};
use crate::linalg::RatMatrix;
use crate::preprocess::LtiSystem;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One control: a component of the control set and generator weights
/// (vertices, then rays, then lines) over it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStep {
    pub component: usize,
    #[serde(with = "ser::vec")]
    pub weights: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachWitness {
    pub horizon: usize,
    pub controls: Vec<WitnessStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("witness horizon {horizon} disagrees with {steps} listed controls")]
    HorizonMismatch { horizon: usize, steps: usize },
    #[error("step {step}: component {component} does not exist")]
    NoSuchComponent { step: usize, component: usize },
    #[error("step {step}: {reason}")]
    Malformed { step: usize, reason: String },
}

impl ReachWitness {
    pub fn empty() -> Self {
        Self { horizon: 0, controls: Vec::new() }
    }
}

/// Control vectors of a witness, after validating every weight vector.
pub fn witness_controls(controls: &ControlSet, w: &ReachWitness) -> Result<Vec<Vec<Rat>>, WitnessError> {
    if w.horizon != w.controls.len() {
        return Err(WitnessError::HorizonMismatch { horizon: w.horizon, steps: w.controls.len() });
    }
    let mut out = Vec::with_capacity(w.horizon);
    for (step, s) in w.controls.iter().enumerate() {
        let Some(c) = controls.components().get(s.component) else {
            return Err(WitnessError::NoSuchComponent { step, component: s.component });
        };
        if s.weights.len() != c.num_generators() {
            let reason = format!("expected {} weights, found {}", c.num_generators(), s.weights.len());
            return Err(WitnessError::Malformed { step, reason });
        }
        let d = c.split_weights(&s.weights);
        if !c.valid_weights(&d) {
            let reason = "weights are negative or vertex weights do not sum to 1".to_string();
            return Err(WitnessError::Malformed { step, reason });
        }
        out.push(c.combine(&d));
    }
    Ok(out)
}

/// `x_T` from `x_{t+1} = A x_t + u_t`.
pub fn replay(a: &RatMatrix, source: &[Rat], controls: &[Vec<Rat>]) -> Vec<Rat> {
    let mut x = source.to_vec();
    for u in controls {
        x = a.mul_vec(&x).into_iter().zip(u).map(|(p, q)| p + q).collect();
    }
    x
}

/// Exact replay; `Ok(false)` when the final state misses the target,
/// `Err` when the witness itself is malformed.
pub fn verify_witness(sys: &LtiSystem, w: &ReachWitness) -> Result<bool, WitnessError> {
    let us = witness_controls(&sys.controls, w)?;
    let x = replay(&sys.a, &sys.source, &us);
    Ok(sys.target.contains(&x))
}

pub(crate) enum Goal<'a> {
    Set(&'a GenPolyhedron),
    Point(&'a [Rat]),
}

/// Finds `u_i ∈ steps[i]` with `A^n s + Σ A^{n-1-i} u_i` in (or equal to)
/// the goal; returns flat weights per step.
pub(crate) fn solve_schedule(
    a: &RatMatrix,
    source: &[Rat],
    steps: &[&GenPolyhedron],
    goal: Goal<'_>,
) -> Option<Vec<Vec<Rat>>> {
    let n = steps.len();
    let d = a.rows();
    let mut powers = vec![RatMatrix::identity(d)];
    for i in 0..n {
        powers.push(powers[i].mul(a));
    }
    let mut lp = LinearProgram::default();
    let mut cols: Vec<(usize, Vec<Rat>)> = Vec::new();
    let mut starts = Vec::with_capacity(n);
    for (i, p) in steps.iter().enumerate() {
        let start = p.append_vars(&mut lp);
        starts.push(start);
        let m = &powers[n - 1 - i];
        for k in 0..p.num_generators() {
            cols.push((start + k, m.mul_vec(p.generator(k))));
        }
    }
    let mut rhs: Vec<Rat> = powers[n].mul_vec(source).into_iter().map(|x| -x).collect();
    match goal {
        Goal::Set(q) => {
            let start = q.append_vars(&mut lp);
            for k in 0..q.num_generators() {
                cols.push((start + k, q.generator(k).iter().map(|x| -x).collect()));
            }
        }
        Goal::Point(p) => {
            for (r, x) in rhs.iter_mut().zip(p) {
                *r += x;
            }
        }
    }
    for (c, r) in rhs.into_iter().enumerate() {
        let terms: Vec<(usize, Rat)> =
            cols.iter().filter(|(_, g)| !g[c].is_zero()).map(|(j, g)| (*j, g[c].clone())).collect();
        lp.constrain_sparse(&terms, Relation::Eq, r);
    }
    let out = lp.solve();
    let x = out.point()?;
    Some(
        steps
            .iter()
            .zip(&starts)
            .map(|(p, &s)| x[s..s + p.num_generators()].to_vec())
            .collect(),
    )
}

/// A witness of horizon exactly `n`, if one exists. Union control sets are
/// searched depth-first over component assignments in lexicographic order,
/// pruning with the convex-hull relaxation.
pub fn reach_exactly(sys: &LtiSystem, n: usize) -> Option<ReachWitness> {
    let comps = sys.controls.components();
    let goal = || Goal::Set(&sys.target);
    if comps.len() == 1 {
        let steps = vec![&comps[0]; n];
        let ws = solve_schedule(&sys.a, &sys.source, &steps, goal())?;
        let controls = ws.into_iter().map(|weights| WitnessStep { component: 0, weights }).collect();
        return Some(ReachWitness { horizon: n, controls });
    }
    let hull = sys.controls.hull();
    let mut assignment = Vec::with_capacity(n);
    dfs(sys, n, &hull, &mut assignment)
}

fn dfs(sys: &LtiSystem, n: usize, hull: &GenPolyhedron, assignment: &mut Vec<usize>) -> Option<ReachWitness> {
    let comps = sys.controls.components();
    let mut steps: Vec<&GenPolyhedron> = assignment.iter().map(|&c| &comps[c]).collect();
    let fixed = steps.len();
    steps.extend(std::iter::repeat_n(hull, n - fixed));
    let ws = solve_schedule(&sys.a, &sys.source, &steps, Goal::Set(&sys.target))?;
    if fixed == n {
        let controls =
            assignment.iter().zip(ws).map(|(&component, weights)| WitnessStep { component, weights }).collect();
        return Some(ReachWitness { horizon: n, controls });
    }
    for c in 0..comps.len() {
        assignment.push(c);
        let found = dfs(sys, n, hull, assignment);
        assignment.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Minimal-horizon witness with horizon at most `budget`.
pub fn reach_within(sys: &LtiSystem, budget: usize) -> Option<ReachWitness> {
    (0..=budget).find_map(|n| reach_exactly(sys, n))
}

/// Maximum of `⟨x, τ⟩` over `Σ_{i≤n} A^i(U)` by the sequential LP.
pub fn partial_sum_max(a: &RatMatrix, u: &GenPolyhedron, n: usize, tau: &[Rat]) -> Option<Rat> {
    let d = a.rows();
    let mut lp = LinearProgram::default();
    let mut obj_cols = Vec::new();
    let mut m = RatMatrix::identity(d);
    for _ in 0..=n {
        let start = u.append_vars(&mut lp);
        for k in 0..u.num_generators() {
            obj_cols.push((start + k, crate::exactnum::dot(&m.mul_vec(u.generator(k)), tau)));
        }
        m = m.mul(a);
    }
    let mut obj = vec![Rat::zero(); lp.num_vars()];
    for (j, c) in obj_cols {
        obj[j] = c;
    }
    lp.maximize(obj).solve().value().cloned()
}

/// One weight vector selecting vertex `k` of `p`.
pub fn vertex_step(p: &GenPolyhedron, component: usize, k: usize) -> WitnessStep {
    let mut weights = vec![Rat::zero(); p.num_generators()];
    weights[k] = Rat::one();
    WitnessStep { component, weights }
}
