//! Dense two-phase simplex for small linear programs.
//!
//! Problems are stated as `maximize c·x` subject to equality rows, `≤` rows
//! and per-variable bounds (`x_j >= 0` or free). Once an optimal basis is
//! found, primal and dual values are recomputed from the original data with
//! an LU solve, so the reported residuals reflect the problem rather than
//! the pivoting history.
//!
//! The solver is a revised simplex with an explicit basis inverse that is
//! rebuilt from the original columns at regular intervals. Pricing uses
//! Dantzig's rule with a Harris ratio test. After a run of degenerate pivots
//! the entering column is drawn at random among the improving ones, which
//! breaks cycles with probability one; the draw uses a fixed seed, so
//! solves are reproducible.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarBound {
    NonNeg,
    Free,
}

#[derive(Clone, Debug, Default)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub eq_constraints: Vec<(Vec<f64>, f64)>,
    /// `row · x <= rhs`.
    pub ineq_constraints: Vec<(Vec<f64>, f64)>,
    pub bounds: Vec<VarBound>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>, bounds: Vec<VarBound>) -> Self {
        LpProblem { objective, bounds, ..Default::default() }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) {
        self.eq_constraints.push((row, rhs));
    }

    pub fn add_le(&mut self, row: Vec<f64>, rhs: f64) {
        self.ineq_constraints.push((row, rhs));
    }

    /// Stored as the negated `≤` row; its multiplier is reported accordingly.
    pub fn add_ge(&mut self, row: Vec<f64>, rhs: f64) {
        self.ineq_constraints.push((row.into_iter().map(|a| -a).collect(), -rhs));
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::invalid(format!("{} bounds for {n} variables", self.bounds.len())));
        }
        let rows = self.eq_constraints.iter().chain(&self.ineq_constraints);
        for (k, (row, rhs)) in rows.enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!("constraint {k} has {} coefficients, expected {n}", row.len())));
            }
            if !rhs.is_finite() || row.iter().any(|a| !a.is_finite()) {
                return Err(Error::invalid(format!("constraint {k} has non-finite data")));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("objective has non-finite coefficients"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub primal: Vec<f64>,
    /// Multipliers for the equality rows followed by the `≤` rows (the
    /// latter are nonnegative at optimality).
    pub dual: Vec<f64>,
    pub iterations: usize,
    /// Estimated 1-norm condition number of the final basis.
    pub basis_condition: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct LpResiduals {
    pub primal_feasibility: f64,
    pub dual_feasibility: f64,
    pub complementary_slackness: f64,
    pub duality_gap: f64,
}

impl LpSolution {
    fn status_only(status: LpStatus, iterations: usize) -> Self {
        LpSolution { status, value: f64::NAN, primal: vec![], dual: vec![], iterations, basis_condition: f64::NAN }
    }

    /// Feasibility, dual feasibility and complementary slackness residuals of
    /// an optimal solution against the original problem.
    pub fn residuals(&self, lp: &LpProblem) -> LpResiduals {
        let n = lp.num_vars();
        let x = &self.primal;
        let dot = |r: &[f64], v: &[f64]| r.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        let mut pf: f64 = 0.0;
        for (row, rhs) in &lp.eq_constraints {
            pf = pf.max((dot(row, x) - rhs).abs());
        }
        let mut cs: f64 = 0.0;
        let neq = lp.eq_constraints.len();
        for (k, (row, rhs)) in lp.ineq_constraints.iter().enumerate() {
            let slack = rhs - dot(row, x);
            pf = pf.max(-slack);
            cs = cs.max((self.dual[neq + k] * slack).abs());
        }
        let mut df: f64 = 0.0;
        for y in &self.dual[neq..] {
            df = df.max(-y);
        }
        for j in 0..n {
            // Reduced cost Aᵀy - c; must be >= 0 for x_j >= 0 and 0 for free.
            let mut aty = 0.0;
            for (k, (row, _)) in lp.eq_constraints.iter().chain(&lp.ineq_constraints).enumerate() {
                aty += row[j] * self.dual[k];
            }
            let red = aty - lp.objective[j];
            match lp.bounds[j] {
                VarBound::NonNeg => {
                    pf = pf.max(-x[j]);
                    df = df.max(-red);
                    cs = cs.max((red * x[j]).abs());
                }
                VarBound::Free => df = df.max(red.abs()),
            }
        }
        let dual_obj: f64 = lp
            .eq_constraints
            .iter()
            .chain(&lp.ineq_constraints)
            .zip(&self.dual)
            .map(|((_, rhs), y)| rhs * y)
            .sum();
        LpResiduals {
            primal_feasibility: pf,
            dual_feasibility: df,
            complementary_slackness: cs,
            duality_gap: (dual_obj - self.value).abs(),
        }
    }
}

const DEGENERATE_RUN: usize = 5;
const PRICING_SEED: u64 = 0x51_3d_ef;
const REFACTOR_EVERY: usize = 40;

/// Revised simplex over a dense standard-form matrix with `b >= 0`. The
/// basis inverse is kept explicitly, updated by product form and rebuilt from
/// the original columns every [`REFACTOR_EVERY`] pivots.
struct Revised {
    m: usize,
    /// Column-major constraint matrix, one `Vec` of length `m` per column.
    cols: Vec<Vec<f64>>,
    /// Columns without a lower bound; once basic they never leave.
    free: Vec<bool>,
    b: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    binv: DMatrix<f64>,
    xb: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
    feas_tol: f64,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Revised {
    fn new(cols: Vec<Vec<f64>>, free: Vec<bool>, b: Vec<f64>, basis: Vec<usize>) -> Result<Self> {
        let m = b.len();
        let mut is_basic = vec![false; cols.len()];
        for &j in &basis {
            is_basic[j] = true;
        }
        let feas_tol = 1e-9 * b.iter().fold(1.0f64, |s, v| s.max(v.abs()));
        let mut r = Revised {
            m,
            cols,
            free,
            b,
            basis,
            is_basic,
            binv: DMatrix::identity(m, m),
            xb: vec![0.0; m],
            iterations: 0,
            since_refactor: 0,
            feas_tol,
        };
        r.refactor()?;
        Ok(r)
    }

    fn basis_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.m, self.m, |r, c| self.cols[self.basis[c]][r])
    }

    fn refactor(&mut self) -> Result<()> {
        self.since_refactor = 0;
        if self.m == 0 {
            return Ok(());
        }
        self.binv = self
            .basis_matrix()
            .try_inverse()
            .ok_or_else(|| Error::Internal("singular simplex basis".into()))?;
        let x = &self.binv * DVector::from_column_slice(&self.b);
        self.xb = x.iter().copied().collect();
        Ok(())
    }

    /// `B⁻¹ a`.
    fn ftran(&self, a: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (k, &v) in a.iter().enumerate() {
            if v != 0.0 {
                for (o, bi) in out.iter_mut().zip(self.binv.column(k).iter()) {
                    *o += v * bi;
                }
            }
        }
        out
    }

    /// `c_Bᵀ B⁻¹`.
    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.m];
        for (r, &j) in self.basis.iter().enumerate() {
            let c = cost[j];
            if c != 0.0 {
                for (yk, k) in y.iter_mut().zip(0..self.m) {
                    *yk += c * self.binv[(r, k)];
                }
            }
        }
        y
    }

    fn reduced_cost(&self, cost: &[f64], y: &[f64], j: usize) -> f64 {
        cost[j] - self.cols[j].iter().zip(y).map(|(a, v)| a * v).sum::<f64>()
    }

    /// Brings column `q` in at row `p`, moving it by `step` (negative for a
    /// free column entering downwards).
    fn pivot(&mut self, p: usize, q: usize, alpha: &[f64], step: f64) -> Result<()> {
        for (x, a) in self.xb.iter_mut().zip(alpha) {
            *x -= step * a;
        }
        self.xb[p] = step;
        let ap = alpha[p];
        for k in 0..self.m {
            self.binv[(p, k)] /= ap;
        }
        for r in 0..self.m {
            if r != p && alpha[r] != 0.0 {
                let f = alpha[r];
                for k in 0..self.m {
                    let v = self.binv[(p, k)];
                    self.binv[(r, k)] -= f * v;
                }
            }
        }
        self.is_basic[self.basis[p]] = false;
        self.is_basic[q] = true;
        self.basis[p] = q;
        self.iterations += 1;
        self.since_refactor += 1;
        if self.since_refactor >= REFACTOR_EVERY {
            self.refactor()?;
        }
        Ok(())
    }

    /// Minimizes `cost · x` over columns not in `banned`, stopping early once
    /// the objective reaches `floor`. Optimality is only declared on a
    /// freshly refactored basis.
    fn run(&mut self, cost: &[f64], banned: &[bool], floor: f64, max_iter: usize) -> Result<Outcome> {
        let dtol = 1e-9 * cost.iter().fold(1.0f64, |s, c| s.max(c.abs()));
        let mut degenerate = 0;
        let mut rng = rng_from_seed(PRICING_SEED);
        loop {
            if self.iterations > max_iter {
                return Err(Error::Internal(format!("simplex iteration limit {max_iter} reached")));
            }
            if self.since_refactor == 0 {
                let obj: f64 = self.basis.iter().zip(&self.xb).map(|(&j, x)| cost[j] * x).sum();
                if obj <= floor {
                    return Ok(Outcome::Optimal);
                }
            }
            let stalled = degenerate >= DEGENERATE_RUN;
            let y = self.duals(cost);
            let mut enter = None;
            let mut best = dtol;
            let mut candidates = 0u64;
            for j in 0..self.cols.len() {
                if banned[j] || self.is_basic[j] {
                    continue;
                }
                let d = self.reduced_cost(cost, &y, j);
                let score = if self.free[j] { d.abs() } else { -d };
                if score <= dtol {
                    continue;
                }
                // In a degenerate run every improving column is equally
                // likely (reservoir sampling); otherwise Dantzig's rule.
                candidates += 1;
                let take = if stalled { rng.random_range(0..candidates) == 0 } else { score > best };
                if take {
                    best = score;
                    enter = Some((j, if d < 0.0 { 1.0 } else { -1.0 }));
                }
            }
            let Some((q, dir)) = enter else {
                if self.since_refactor == 0 {
                    return Ok(Outcome::Optimal);
                }
                self.refactor()?;
                continue;
            };
            let alpha = self.ftran(&self.cols[q]);
            let amax = alpha.iter().fold(0.0f64, |s, a| s.max(a.abs()));
            let ptol = (1e-9 * amax).max(1e-12);
            // Rows that block the move: nonnegative basics that decrease.
            let blocking: Vec<(usize, f64, f64)> = alpha
                .iter()
                .enumerate()
                .filter(|&(r, &a)| !self.free[self.basis[r]] && dir * a > ptol)
                .map(|(r, &a)| (r, dir * a, self.xb[r].max(0.0) / (dir * a)))
                .collect();
            if blocking.is_empty() {
                if self.since_refactor == 0 {
                    return Ok(Outcome::Unbounded);
                }
                self.refactor()?;
                continue;
            }
            // Harris two-pass ratio test: bound the step with a relaxed
            // feasibility tolerance, then take the largest pivot within it.
            let bound = blocking
                .iter()
                .map(|&(r, a, _)| (self.xb[r].max(0.0) + self.feas_tol) / a)
                .fold(f64::INFINITY, f64::min);
            let p = blocking
                .iter()
                .filter(|b| b.2 <= bound)
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .map(|b| b.0)
            .ok_or_else(|| Error::Internal("ratio test found no pivot row".into()))?;
            let theta = self.xb[p].max(0.0) / (dir * alpha[p]);
            degenerate = if theta <= 1e-12 { degenerate + 1 } else { 0 };
            self.pivot(p, q, &alpha, dir * theta)?;
        }
    }
}

pub const LP_DEFAULT_TOL: f64 = 1e-8;

/// Solves `lp`; `tol` is the phase-one infeasibility threshold (relative to
/// the right-hand-side scale).
pub fn lp_solve(lp: &LpProblem, tol: f64) -> Result<LpSolution> {
    lp.validate()?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let n = lp.num_vars();
    let nstruct = n;
    let neq = lp.eq_constraints.len();
    let nle = lp.ineq_constraints.len();
    let m = neq + nle;
    let slack0 = nstruct;
    let art0 = nstruct + nle;

    // Rows are flipped so that every right-hand side is nonnegative.
    let mut sign = vec![1.0; m];
    let mut b = Vec::with_capacity(m);
    let mut cols = vec![vec![0.0; m]; art0];
    for (k, (row, rhs)) in lp.eq_constraints.iter().chain(&lp.ineq_constraints).enumerate() {
        if *rhs < 0.0 {
            sign[k] = -1.0;
        }
        b.push(sign[k] * rhs);
        for j in 0..n {
            cols[j][k] = sign[k] * row[j];
        }
        if k >= neq {
            cols[slack0 + k - neq][k] = sign[k];
        }
    }
    // Artificials for equalities and flipped `≤` rows; other `≤` rows start
    // on their slack.
    let mut basis = vec![0; m];
    for k in 0..m {
        if k < neq || sign[k] < 0.0 {
            let mut e = vec![0.0; m];
            e[k] = 1.0;
            basis[k] = cols.len();
            cols.push(e);
        } else {
            basis[k] = slack0 + k - neq;
        }
    }
    let ncols = cols.len();
    let max_iter = 50 * (m + ncols) + 1000;
    let free: Vec<bool> = (0..ncols).map(|j| j < n && lp.bounds[j] == VarBound::Free).collect();
    let mut s = Revised::new(cols, free, b.clone(), basis)?;

    let mut banned = vec![false; ncols];
    if ncols > art0 {
        let mut c1 = vec![0.0; ncols];
        c1[art0..].iter_mut().for_each(|c| *c = 1.0);
        // A zero-infeasibility vertex is all phase one needs; the search for
        // a dual-feasible basis there can take long on degenerate problems.
        s.run(&c1, &banned, s.feas_tol, max_iter)?;
        let infeas: f64 = s.basis.iter().zip(&s.xb).filter(|(&j, _)| j >= art0).map(|(_, x)| x.max(0.0)).sum();
        let bscale = b.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        if infeas > tol * bscale {
            return Ok(LpSolution::status_only(LpStatus::Infeasible, s.iterations));
        }
        // Pivot zero-level artificials out where possible. Those that remain
        // sit on redundant rows and keep a zero multiplier.
        for r in 0..m {
            if s.basis[r] < art0 {
                continue;
            }
            let rho: Vec<f64> = s.binv.row(r).iter().copied().collect();
            let mut best: Option<(usize, f64)> = None;
            for j in 0..art0 {
                if s.is_basic[j] {
                    continue;
                }
                let v: f64 = s.cols[j].iter().zip(&rho).map(|(a, p)| a * p).sum();
                if v.abs() > 1e-7 && best.is_none_or(|(_, bv)| v.abs() > bv.abs()) {
                    best = Some((j, v));
                }
            }
            if let Some((q, _)) = best {
                let alpha = s.ftran(&s.cols[q]);
                s.xb[r] = 0.0;
                s.pivot(r, q, &alpha, 0.0)?;
            }
        }
        s.refactor()?;
        banned[art0..].iter_mut().for_each(|v| *v = true);
    }

    // Phase two: minimize -c·x.
    let mut d = vec![0.0; ncols];
    for j in 0..n {
        d[j] = -lp.objective[j];
    }
    if let Outcome::Unbounded = s.run(&d, &banned, f64::NEG_INFINITY, max_iter)? {
        return Ok(LpSolution::status_only(LpStatus::Unbounded, s.iterations));
    }
    refine(lp, &s, &sign, &d)
}

/// Recomputes primal and dual values for the final basis from the original
/// columns with an LU solve. Rows whose artificial stayed basic are
/// redundant and get a zero multiplier.
fn refine(lp: &LpProblem, s: &Revised, sign: &[f64], d: &[f64]) -> Result<LpSolution> {
    let m = s.m;
    let bmat = s.basis_matrix();
    let b = DVector::from_column_slice(&s.b);
    let cb = DVector::from_fn(m, |c, _| -d[s.basis[c]]);
    // nalgebra's LU does not accept an empty system.
    let (xb, y) = if m == 0 {
        (b, cb)
    } else {
        let lu = bmat.clone().lu();
        let xb = lu.solve(&b).ok_or_else(|| Error::Internal("singular basis in refinement".into()))?;
        let y = bmat
            .transpose()
            .lu()
            .solve(&cb)
            .ok_or_else(|| Error::Internal("singular basis in dual refinement".into()))?;
        (xb, y)
    };

    let n = lp.num_vars();
    let mut primal = vec![0.0; n];
    for (c, &col) in s.basis.iter().enumerate() {
        if col < n {
            primal[col] = xb[c];
        }
    }
    let dual: Vec<f64> = (0..m).map(|k| sign[k] * y[k]).collect();
    let value = lp.objective.iter().zip(&primal).map(|(c, x)| c * x).sum();
    let inv_norm = if m == 0 { 0.0 } else { bmat.clone().try_inverse().map(|inv| one_norm(&inv)).unwrap_or(f64::INFINITY) };
    Ok(LpSolution {
        status: LpStatus::Optimal,
        value,
        primal,
        dual,
        iterations: s.iterations,
        basis_condition: one_norm(&bmat) * inv_norm,
    })
}

fn one_norm(a: &DMatrix<f64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use rand::Rng;

    fn solve(lp: &LpProblem) -> LpSolution {
        lp_solve(lp, LP_DEFAULT_TOL).unwrap()
    }

    fn assert_certified(lp: &LpProblem, s: &LpSolution) {
        let r = s.residuals(lp);
        assert!(r.primal_feasibility <= 1e-8, "{r:?}");
        assert!(r.dual_feasibility <= 1e-8, "{r:?}");
        assert!(r.complementary_slackness <= 1e-6, "{r:?}");
        assert!(r.duality_gap <= 1e-8 * (1.0 + s.value.abs()), "{r:?}");
    }

    #[test]
    fn single_variable() {
        let mut lp = LpProblem::new(vec![1.0], vec![VarBound::NonNeg]);
        lp.add_le(vec![1.0], 1.0);
        let s = solve(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 1.0).abs() < 1e-12);
        assert_certified(&lp, &s);
    }

    #[test]
    fn degenerate_tie() {
        let mut lp = LpProblem::new(vec![1.0, 1.0], vec![VarBound::NonNeg; 2]);
        lp.add_le(vec![1.0, 1.0], 1.0);
        let s = solve(&lp);
        assert!((s.value - 1.0).abs() < 1e-12);
        assert_certified(&lp, &s);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LpProblem::new(vec![1.0], vec![VarBound::NonNeg]);
        lp.add_le(vec![1.0], -1.0);
        assert_eq!(solve(&lp).status, LpStatus::Infeasible);

        let mut lp = LpProblem::new(vec![1.0, 0.0], vec![VarBound::NonNeg; 2]);
        lp.add_le(vec![-1.0, 1.0], 1.0);
        assert_eq!(solve(&lp).status, LpStatus::Unbounded);

        let mut lp = LpProblem::new(vec![1.0], vec![VarBound::Free]);
        lp.add_eq(vec![1.0], 2.0);
        lp.add_eq(vec![2.0], 3.0);
        assert_eq!(solve(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn free_variables_and_equalities() {
        // max x - y  s.t. x + y = 1, x <= 3, y free  ->  x = 3, y = -2, value 5.
        let mut lp = LpProblem::new(vec![1.0, -1.0], vec![VarBound::NonNeg, VarBound::Free]);
        lp.add_eq(vec![1.0, 1.0], 1.0);
        lp.add_le(vec![1.0, 0.0], 3.0);
        let s = solve(&lp);
        assert!((s.value - 5.0).abs() < 1e-12);
        assert!((s.primal[1] + 2.0).abs() < 1e-12);
        assert_certified(&lp, &s);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LpProblem::new(vec![1.0, 2.0], vec![VarBound::NonNeg; 2]);
        lp.add_eq(vec![1.0, 1.0], 1.0);
        lp.add_eq(vec![2.0, 2.0], 2.0);
        let s = solve(&lp);
        assert!((s.value - 2.0).abs() < 1e-12);
        assert_certified(&lp, &s);
    }

    #[test]
    fn ge_rows() {
        // min x + y  (max -x - y)  s.t. x + 2y >= 2, 3x + y >= 3 -> x = 0.8, y = 0.6.
        let mut lp = LpProblem::new(vec![-1.0, -1.0], vec![VarBound::NonNeg; 2]);
        lp.add_ge(vec![1.0, 2.0], 2.0);
        lp.add_ge(vec![3.0, 1.0], 3.0);
        let s = solve(&lp);
        assert!((s.value + 1.4).abs() < 1e-12);
        assert_certified(&lp, &s);
    }

    #[test]
    fn beale_cycling_example() {
        // Beale's classic example cycles under the textbook rule without
        // anti-cycling; optimum 1/20.
        let mut lp = LpProblem::new(vec![0.75, -150.0, 0.02, -6.0], vec![VarBound::NonNeg; 4]);
        lp.add_le(vec![0.25, -60.0, -0.04, 9.0], 0.0);
        lp.add_le(vec![0.5, -90.0, -0.02, 3.0], 0.0);
        lp.add_le(vec![0.0, 0.0, 1.0, 0.0], 1.0);
        let s = solve(&lp);
        assert!((s.value - 0.05).abs() < 1e-12, "{}", s.value);
        assert_certified(&lp, &s);
    }

    #[test]
    fn random_feasible_programs_are_certified() {
        let mut rng = rng_from_seed(5);
        for _ in 0..100 {
            let n = rng.random_range(2..12);
            let m = rng.random_range(1..12);
            let mut lp = LpProblem::new(
                (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
                (0..n).map(|j| if j % 3 == 0 { VarBound::Free } else { VarBound::NonNeg }).collect(),
            );
            for _ in 0..m {
                lp.add_le((0..n).map(|_| rng.random_range(-1.0..1.0)).collect(), rng.random_range(0.0..2.0));
            }
            // Box the free variables so the program stays bounded.
            for j in 0..n {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                lp.add_le(e.clone(), 5.0);
                e[j] = -1.0;
                lp.add_le(e, 5.0);
            }
            let mut e0 = vec![0.0; n];
            e0[0] = 1.0;
            // x = 0 stays feasible.
            lp.add_eq(e0, 0.0);
            let s = solve(&lp);
            assert_eq!(s.status, LpStatus::Optimal);
            assert_certified(&lp, &s);
        }
    }

    #[test]
    fn rejects_malformed_rows() {
        let mut lp = LpProblem::new(vec![1.0, 1.0], vec![VarBound::NonNeg; 2]);
        lp.add_le(vec![1.0], 1.0);
        assert!(lp_solve(&lp, 1e-8).is_err());
        let lp = LpProblem::new(vec![1.0], vec![]);
        assert!(lp_solve(&lp, 1e-8).is_err());
        let mut lp = LpProblem::new(vec![1.0], vec![VarBound::NonNeg]);
        lp.add_le(vec![f64::NAN], 1.0);
        assert!(lp_solve(&lp, 1e-8).is_err());
    }
}
