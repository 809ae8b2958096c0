//! Dense-tableau two-phase simplex over Q.

use crate::exactnum::Rat;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    NonNeg,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Relation,
    pub rhs: Rat,
}

/// `maximize objective · x` subject to the constraints; with no objective
/// this is a pure feasibility problem.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub kinds: Vec<VarKind>,
    pub constraints: Vec<Constraint>,
    pub objective: Option<Vec<Rat>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    /// `duals[i]` is the multiplier of constraint `i`: `≥ 0` for `Le`,
    /// `≤ 0` for `Ge`, free for `Eq`.
    Optimal { value: Rat, point: Vec<Rat>, duals: Vec<Rat> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn point(&self) -> Option<&[Rat]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(kinds: Vec<VarKind>) -> Self {
        Self { kinds, constraints: Vec::new(), objective: None }
    }

    pub fn nonneg(n: usize) -> Self {
        Self::new(vec![VarKind::NonNeg; n])
    }

    pub fn num_vars(&self) -> usize {
        self.kinds.len()
    }

    pub fn add_var(&mut self, kind: VarKind) -> usize {
        self.kinds.push(kind);
        for c in &mut self.constraints {
            c.coeffs.push(Rat::zero());
        }
        if let Some(o) = &mut self.objective {
            o.push(Rat::zero());
        }
        self.kinds.len() - 1
    }

    pub fn constrain(&mut self, coeffs: Vec<Rat>, rel: Relation, rhs: Rat) {
        assert_eq!(coeffs.len(), self.num_vars(), "constraint width mismatch");
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    /// Sparse form of [`constrain`](Self::constrain).
    pub fn constrain_sparse(&mut self, terms: &[(usize, Rat)], rel: Relation, rhs: Rat) {
        let mut coeffs = vec![Rat::zero(); self.num_vars()];
        for (i, c) in terms {
            coeffs[*i] += c;
        }
        self.constrain(coeffs, rel, rhs);
    }

    pub fn maximize(mut self, objective: Vec<Rat>) -> Self {
        assert_eq!(objective.len(), self.num_vars());
        self.objective = Some(objective);
        self
    }

    pub fn solve(&self) -> LpOutcome {
        lp_solve(self)
    }

    /// Checks a point against every constraint exactly.
    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        let signs_ok = self.kinds.iter().zip(x).all(|(k, v)| *k == VarKind::Free || !v.is_negative());
        signs_ok
            && self.constraints.iter().all(|c| {
                let lhs = crate::exactnum::dot(&c.coeffs, x);
                match c.rel {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    /// Verifies an optimality certificate: primal feasibility, dual
    /// feasibility and equal objective values.
    pub fn certifies(&self, value: &Rat, point: &[Rat], duals: &[Rat]) -> bool {
        let obj = self.objective.clone().unwrap_or_else(|| vec![Rat::zero(); self.num_vars()]);
        if !self.satisfied_by(point) || crate::exactnum::dot(&obj, point) != *value {
            return false;
        }
        if duals.len() != self.constraints.len() {
            return false;
        }
        for (c, y) in self.constraints.iter().zip(duals) {
            let ok = match c.rel {
                Relation::Le => !y.is_negative(),
                Relation::Ge => !y.is_positive(),
                Relation::Eq => true,
            };
            if !ok {
                return false;
            }
        }
        for (j, kind) in self.kinds.iter().enumerate() {
            let col: Rat = self.constraints.iter().zip(duals).map(|(c, y)| &c.coeffs[j] * y).sum();
            let ok = match kind {
                VarKind::NonNeg => col >= obj[j],
                VarKind::Free => col == obj[j],
            };
            if !ok {
                return false;
            }
        }
        let dual_value: Rat = self.constraints.iter().zip(duals).map(|(c, y)| &c.rhs * y).sum();
        dual_value == *value
    }
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    ncols: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            let inv = p.recip();
            for x in self.rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[Rat]) -> Vec<Rat> {
        let mut z: Vec<Rat> = cost.iter().map(|c| -c).collect();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (zj, a) in z.iter_mut().zip(row) {
                if !a.is_zero() {
                    *zj += cb * a;
                }
            }
        }
        z
    }

    /// Maximizes `cost · x` over columns `j` with `allowed[j]`.
    fn run(&mut self, cost: &[Rat], allowed: &[bool]) -> Phase {
        // steepest reduced cost while progress is made; Bland's rule after a
        // run of degenerate pivots, which rules out cycling
        let mut degenerate = 0;
        loop {
            let z = self.reduced_costs(cost);
            let mut candidates = (0..self.ncols).filter(|&j| allowed[j] && z[j].is_negative());
            let enter = if degenerate < 8 {
                candidates.min_by(|&a, &b| z[a].cmp(&z[b]).then(a.cmp(&b)))
            } else {
                candidates.next()
            };
            let Some(enter) = enter else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Phase::Unbounded,
                Some((r, ratio)) => {
                    if ratio.is_zero() {
                        degenerate += 1;
                    } else if degenerate < 8 {
                        degenerate = 0;
                    }
                    self.pivot(r, enter)
                }
            }
        }
    }

    fn objective_value(&self, cost: &[Rat]) -> Rat {
        self.basis.iter().zip(&self.rhs).map(|(b, v)| &cost[*b] * v).sum()
    }
}

/// Exact simplex. Returned points satisfy every constraint exactly; duals
/// certify optimality (see [`LinearProgram::certifies`]).
pub fn lp_solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars();
    let m = lp.constraints.len();
    // column layout: split original vars (free → two columns), then one
    // slack/surplus per inequality, then one artificial per Ge/Eq row
    let mut col_of: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut ncols = 0;
    for k in &lp.kinds {
        match k {
            VarKind::NonNeg => {
                col_of.push((ncols, None));
                ncols += 1;
            }
            VarKind::Free => {
                col_of.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
    }
    let mut sign = Vec::with_capacity(m);
    let mut rels = Vec::with_capacity(m);
    for c in &lp.constraints {
        let s = if c.rhs.is_negative() { -1 } else { 1 };
        sign.push(s);
        rels.push(match (c.rel, s) {
            (Relation::Le, -1) => Relation::Ge,
            (Relation::Ge, -1) => Relation::Le,
            (r, _) => r,
        });
    }
    let mut slack_col = vec![None; m];
    for (i, r) in rels.iter().enumerate() {
        if *r != Relation::Eq {
            slack_col[i] = Some(ncols);
            ncols += 1;
        }
    }
    let art_start = ncols;
    let mut art_col = vec![None; m];
    for (i, r) in rels.iter().enumerate() {
        if *r != Relation::Le {
            art_col[i] = Some(ncols);
            ncols += 1;
        }
    }
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    // column holding the unit vector e_i in the initial tableau
    let mut unit_col = Vec::with_capacity(m);
    for (i, c) in lp.constraints.iter().enumerate() {
        let s = Rat::from_integer(sign[i].into());
        let mut row = vec![Rat::zero(); ncols];
        for (j, a) in c.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (p, q) = col_of[j];
            row[p] = a * &s;
            if let Some(q) = q {
                row[q] = -(a * &s);
            }
        }
        match rels[i] {
            Relation::Le => {
                let sc = slack_col[i].unwrap();
                row[sc] = Rat::one();
                basis.push(sc);
                unit_col.push(sc);
            }
            Relation::Ge => {
                row[slack_col[i].unwrap()] = -Rat::one();
                let ac = art_col[i].unwrap();
                row[ac] = Rat::one();
                basis.push(ac);
                unit_col.push(ac);
            }
            Relation::Eq => {
                let ac = art_col[i].unwrap();
                row[ac] = Rat::one();
                basis.push(ac);
                unit_col.push(ac);
            }
        }
        rows.push(row);
        rhs.push(&c.rhs * &s);
    }
    let mut t = Tableau { rows, rhs, basis, ncols };

    if art_start < ncols {
        let mut cost = vec![Rat::zero(); ncols];
        for c in cost.iter_mut().skip(art_start) {
            *c = -Rat::one();
        }
        let allowed = vec![true; ncols];
        t.run(&cost, &allowed);
        if !t.objective_value(&cost).is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..m {
            if t.basis[r] >= art_start {
                if let Some(c) = (0..art_start).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(r, c);
                }
            }
        }
    }

    let mut cost = vec![Rat::zero(); ncols];
    if let Some(obj) = &lp.objective {
        for (j, c) in obj.iter().enumerate() {
            let (p, q) = col_of[j];
            cost[p] = c.clone();
            if let Some(q) = q {
                cost[q] = -c;
            }
        }
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| j < art_start).collect();
    if let Phase::Unbounded = t.run(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }

    let mut col_val = vec![Rat::zero(); ncols];
    for (b, v) in t.basis.iter().zip(&t.rhs) {
        col_val[*b] = v.clone();
    }
    let point: Vec<Rat> = col_of
        .iter()
        .map(|(p, q)| match q {
            Some(q) => &col_val[*p] - &col_val[*q],
            None => col_val[*p].clone(),
        })
        .collect();
    let z = t.reduced_costs(&cost);
    let duals: Vec<Rat> = (0..m).map(|i| &z[unit_col[i]] * Rat::from_integer(sign[i].into())).collect();
    let value = t.objective_value(&cost);
    LpOutcome::Optimal { value, point, duals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|x| int(*x)).collect()
    }

    #[test]
    fn basic_outcomes() {
        let mut lp = LinearProgram::new(vec![VarKind::Free]);
        lp.constrain(ints(&[1]), Relation::Le, int(3));
        let lp = lp.maximize(ints(&[1]));
        match lp.solve() {
            LpOutcome::Optimal { value, point, duals } => {
                assert_eq!(value, int(3));
                assert!(lp.certifies(&value, &point, &duals));
            }
            o => panic!("{o:?}"),
        }

        let mut lp = LinearProgram::new(vec![VarKind::Free]);
        lp.constrain(ints(&[1]), Relation::Ge, int(1));
        lp.constrain(ints(&[1]), Relation::Le, int(0));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::nonneg(2);
        lp.constrain(ints(&[1, -1]), Relation::Le, int(1));
        assert_eq!(lp.maximize(ints(&[1, 0])).solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn textbook_program_with_duals() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let mut lp = LinearProgram::nonneg(2);
        lp.constrain(ints(&[1, 0]), Relation::Le, int(4));
        lp.constrain(ints(&[0, 2]), Relation::Le, int(12));
        lp.constrain(ints(&[3, 2]), Relation::Le, int(18));
        let lp = lp.maximize(ints(&[3, 5]));
        let LpOutcome::Optimal { value, point, duals } = lp.solve() else { panic!() };
        assert_eq!(value, int(36));
        assert_eq!(point, ints(&[2, 6]));
        assert_eq!(duals, vec![int(0), rat(3, 2), int(1)]);
        assert!(lp.certifies(&value, &point, &duals));
    }

    #[test]
    fn equality_and_negative_rhs() {
        // x + y = -2, x ≥ -5 (free vars), minimize x → x = -5, y = 3
        let mut lp = LinearProgram::new(vec![VarKind::Free, VarKind::Free]);
        lp.constrain(ints(&[1, 1]), Relation::Eq, int(-2));
        lp.constrain(ints(&[1, 0]), Relation::Ge, int(-5));
        lp.constrain(ints(&[0, 1]), Relation::Le, int(10));
        let lp = lp.maximize(ints(&[-1, 0]));
        let LpOutcome::Optimal { value, point, duals } = lp.solve() else { panic!() };
        assert_eq!(value, int(5));
        assert_eq!(point, ints(&[-5, 3]));
        assert!(lp.certifies(&value, &point, &duals));
    }

    #[test]
    fn degenerate_redundant_equalities() {
        let mut lp = LinearProgram::nonneg(3);
        lp.constrain(ints(&[1, 1, 1]), Relation::Eq, int(1));
        lp.constrain(ints(&[2, 2, 2]), Relation::Eq, int(2));
        lp.constrain(ints(&[1, -1, 0]), Relation::Eq, int(0));
        let lp = lp.maximize(ints(&[0, 1, 0]));
        let LpOutcome::Optimal { value, point, duals } = lp.solve() else { panic!() };
        assert_eq!(value, rat(1, 2));
        assert!(lp.certifies(&value, &point, &duals));
    }

    #[test]
    fn feasibility_only() {
        let mut lp = LinearProgram::nonneg(2);
        lp.constrain(ints(&[1, 1]), Relation::Eq, int(1));
        lp.constrain(ints(&[1, -1]), Relation::Eq, rat(1, 3));
        let out = lp.solve();
        assert_eq!(out.point().unwrap(), &[rat(2, 3), rat(1, 3)]);
    }
}
