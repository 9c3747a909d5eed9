//! Exact linear programming: a dense two-phase simplex method with Bland's rule.
//!
//! Problems have equality constraints and per-variable bounds. Every optimum
//! comes with a dual vector for the equalities; the Lagrangian bound it
//! implies is recomputed on the original problem and must equal the optimum.

use super::matrix::Matrix;
use crate::scalar::Field;

/// `maximize c.x` subject to `Ax = b` and `lower <= x <= upper`.
#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    pub objective: Vec<T>,
    pub equations: Matrix<T>,
    pub rhs: Vec<T>,
    pub lower: Vec<Option<T>>,
    pub upper: Vec<Option<T>>,
}

impl<T: Field> LinearProgram<T> {
    /// A program over nonnegative variables with no upper bounds.
    pub fn nonnegative(objective: Vec<T>, equations: Matrix<T>, rhs: Vec<T>) -> Self {
        let n = objective.len();
        LinearProgram { objective, equations, rhs, lower: vec![Some(T::zero()); n], upper: vec![None; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T> {
    pub value: T,
    pub x: Vec<T>,
    /// Multipliers for the equality constraints.
    pub dual: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal(LpSolution<T>),
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn optimal(self) -> Option<LpSolution<T>> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

/// How an original variable is expressed through standard-form columns.
#[derive(Clone, Debug)]
enum Substitution<T> {
    /// `x = offset + z[col]`
    Shift { col: usize, offset: T },
    /// `x = offset - z[col]`
    Negated { col: usize, offset: T },
    /// `x = z[pos] - z[neg]`
    Free { pos: usize, neg: usize },
}

pub fn solve_lp<T: Field>(lp: &LinearProgram<T>) -> LpOutcome<T> {
    let n = lp.num_vars();
    let m = lp.equations.rows();
    assert_eq!(lp.equations.cols(), n);
    assert_eq!(lp.rhs.len(), m);
    assert_eq!(lp.lower.len(), n);
    assert_eq!(lp.upper.len(), n);

    // Standard form: maximize c'.z + constant, A'z = b', z >= 0.
    let mut subs = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut bound_rows: Vec<(usize, T)> = Vec::new();
    for j in 0..n {
        match (&lp.lower[j], &lp.upper[j]) {
            (Some(l), Some(u)) => {
                if u < l {
                    return LpOutcome::Infeasible;
                }
                subs.push(Substitution::Shift { col: ncols, offset: l.clone() });
                bound_rows.push((ncols, u.clone() - l.clone()));
                ncols += 1;
            }
            (Some(l), None) => {
                subs.push(Substitution::Shift { col: ncols, offset: l.clone() });
                ncols += 1;
            }
            (None, Some(u)) => {
                subs.push(Substitution::Negated { col: ncols, offset: u.clone() });
                ncols += 1;
            }
            (None, None) => {
                subs.push(Substitution::Free { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
    }
    let slack_start = ncols;
    ncols += bound_rows.len();

    let rows = m + bound_rows.len();
    let mut a = vec![vec![T::zero(); ncols]; rows];
    let mut b = vec![T::zero(); rows];
    let mut cost = vec![T::zero(); ncols];
    let mut constant = T::zero();
    for (j, sub) in subs.iter().enumerate() {
        let cj = &lp.objective[j];
        match sub {
            Substitution::Shift { col, offset } => {
                cost[*col] = cj.clone();
                constant = constant + cj.clone() * offset.clone();
            }
            Substitution::Negated { col, offset } => {
                cost[*col] = -cj.clone();
                constant = constant + cj.clone() * offset.clone();
            }
            Substitution::Free { pos, neg } => {
                cost[*pos] = cj.clone();
                cost[*neg] = -cj.clone();
            }
        }
    }
    for i in 0..m {
        let mut rhs = lp.rhs[i].clone();
        for (j, sub) in subs.iter().enumerate() {
            let aij = lp.equations.get(i, j);
            if aij.is_zero() {
                continue;
            }
            match sub {
                Substitution::Shift { col, offset } => {
                    a[i][*col] = aij.clone();
                    rhs = rhs - aij.clone() * offset.clone();
                }
                Substitution::Negated { col, offset } => {
                    a[i][*col] = -aij.clone();
                    rhs = rhs - aij.clone() * offset.clone();
                }
                Substitution::Free { pos, neg } => {
                    a[i][*pos] = aij.clone();
                    a[i][*neg] = -aij.clone();
                }
            }
        }
        b[i] = rhs;
    }
    for (k, (col, width)) in bound_rows.iter().enumerate() {
        a[m + k][*col] = T::one();
        a[m + k][slack_start + k] = T::one();
        b[m + k] = width.clone();
    }

    let standard_a = a.clone();
    let (z, basis) = match simplex(a, b, &cost) {
        SimplexResult::Infeasible => return LpOutcome::Infeasible,
        SimplexResult::Unbounded => return LpOutcome::Unbounded,
        SimplexResult::Optimal { z, basis } => (z, basis),
    };

    let x: Vec<T> = subs
        .iter()
        .map(|sub| match sub {
            Substitution::Shift { col, offset } => offset.clone() + z[*col].clone(),
            Substitution::Negated { col, offset } => offset.clone() - z[*col].clone(),
            Substitution::Free { pos, neg } => z[*pos].clone() - z[*neg].clone(),
        })
        .collect();
    let value = lp.objective.iter().zip(&x).fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone());
    debug_assert!(value == constant.clone() + cost.iter().zip(&z).fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone()));

    // Duals of the standard form: any solution of B^T y = c_B. The basis
    // columns have the same left kernel as the whole constraint matrix, so
    // the choice does not matter.
    let bt = Matrix::from_rows(
        rows,
        basis.iter().map(|&col| (0..rows).map(|r| standard_a[r][col].clone()).collect()).collect(),
    );
    let cb: Vec<T> = basis.iter().map(|&col| cost[col].clone()).collect();
    let y = bt.solve(&cb).expect("basis columns are independent");
    let dual = y[..m].to_vec();

    let solution = LpSolution { value, x, dual };
    assert!(verify_certificate(lp, &solution), "simplex produced an unverifiable dual certificate");
    LpOutcome::Optimal(solution)
}

/// Checks primal feasibility and that the Lagrangian bound of the dual
/// vector equals the objective value, which proves optimality.
pub fn verify_certificate<T: Field>(lp: &LinearProgram<T>, sol: &LpSolution<T>) -> bool {
    let n = lp.num_vars();
    if lp.equations.mul_vec(&sol.x) != lp.rhs {
        return false;
    }
    for j in 0..n {
        if lp.lower[j].as_ref().is_some_and(|l| &sol.x[j] < l) || lp.upper[j].as_ref().is_some_and(|u| &sol.x[j] > u) {
            return false;
        }
    }
    let value = lp.objective.iter().zip(&sol.x).fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone());
    if value != sol.value {
        return false;
    }
    let at_y = lp.equations.transpose().mul_vec(&sol.dual);
    let mut bound = lp.rhs.iter().zip(&sol.dual).fold(T::zero(), |acc, (b, y)| acc + b.clone() * y.clone());
    for j in 0..n {
        let r = lp.objective[j].clone() - at_y[j].clone();
        if r.is_positive() {
            match &lp.upper[j] {
                Some(u) => bound = bound + r * u.clone(),
                None => return false,
            }
        } else if r.is_negative() {
            match &lp.lower[j] {
                Some(l) => bound = bound + r * l.clone(),
                None => return false,
            }
        }
    }
    bound == sol.value
}

enum SimplexResult<T> {
    Optimal { z: Vec<T>, basis: Vec<usize> },
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Field> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize, objective: &mut (Vec<T>, T)) {
        let inv = T::one() / self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        self.rhs[r] = self.rhs[r].clone() * inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let nz: Vec<usize> = pivot_row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, _)| j).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for &j in &nz {
                self.rows[i][j] = self.rows[i][j].clone() - f.clone() * pivot_row[j].clone();
            }
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        let (obj, val) = objective;
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for &j in &nz {
                obj[j] = obj[j].clone() - f.clone() * pivot_row[j].clone();
            }
            *val = val.clone() - f * pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes with reduced costs `objective.0` (entering when positive)
    /// over columns passing `allowed`. Returns false when unbounded.
    fn optimize(&mut self, objective: &mut (Vec<T>, T), allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..objective.0.len()).find(|&j| allowed(j) && objective.0[j].is_positive());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let aic = &self.rows[i][c];
                if !aic.is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / aic.clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c, objective);
        }
    }
}

/// Reduced-cost row for maximizing `cost` in the current basis.
fn reduced_costs<T: Field>(t: &Tableau<T>, cost: &[T]) -> (Vec<T>, T) {
    let mut obj: Vec<T> = cost.to_vec();
    let mut val = T::zero();
    for (i, &bcol) in t.basis.iter().enumerate() {
        let cb = cost[bcol].clone();
        if cb.is_zero() {
            continue;
        }
        for (j, v) in t.rows[i].iter().enumerate() {
            if !v.is_zero() {
                obj[j] = obj[j].clone() - cb.clone() * v.clone();
            }
        }
        val = val + cb * t.rhs[i].clone();
    }
    // `val` tracks the negated objective so that pivots update it uniformly.
    (obj, -val)
}

fn simplex<T: Field>(a: Vec<Vec<T>>, b: Vec<T>, cost: &[T]) -> SimplexResult<T> {
    let m = a.len();
    let n = cost.len();
    // Phase 1 with one artificial column per row.
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (mut row, bi)) in a.into_iter().zip(b).enumerate() {
        let neg = bi.is_negative();
        if neg {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        row.resize(n + m, T::zero());
        row[n + i] = T::one();
        rows.push(row);
        rhs.push(if neg { -bi } else { bi });
    }
    let mut t = Tableau { rows, rhs, basis: (n..n + m).collect() };
    let mut phase1_cost = vec![T::zero(); n + m];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = -T::one();
    }
    let mut obj = reduced_costs(&t, &phase1_cost);
    t.optimize(&mut obj, &|_| true);
    let infeasibility = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &c)| c >= n)
        .fold(T::zero(), |acc, (i, _)| acc + t.rhs[i].clone());
    if !infeasibility.is_zero() {
        return SimplexResult::Infeasible;
    }

    // Drive remaining artificials out; drop rows that are redundant.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] < n {
            i += 1;
            continue;
        }
        if let Some(c) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
            let mut dummy = (vec![T::zero(); n + m], T::zero());
            t.pivot(i, c, &mut dummy);
            i += 1;
        } else {
            t.rows.remove(i);
            t.rhs.remove(i);
            t.basis.remove(i);
        }
    }

    let mut full_cost = cost.to_vec();
    full_cost.resize(n + m, T::zero());
    let mut obj = reduced_costs(&t, &full_cost);
    if !t.optimize(&mut obj, &|j| j < n) {
        return SimplexResult::Unbounded;
    }
    let mut z = vec![T::zero(); n];
    for (i, &c) in t.basis.iter().enumerate() {
        z[c] = t.rhs[i].clone();
    }
    SimplexResult::Optimal { z, basis: t.basis }
}

/// Convenience: minimize instead of maximize.
pub fn minimize<T: Field>(lp: &LinearProgram<T>) -> LpOutcome<T> {
    let mut neg = lp.clone();
    for c in neg.objective.iter_mut() {
        *c = -c.clone();
    }
    match solve_lp(&neg) {
        LpOutcome::Optimal(s) => LpOutcome::Optimal(LpSolution {
            value: -s.value,
            x: s.x,
            dual: s.dual.into_iter().map(|y| -y).collect(),
        }),
        other => other,
    }
}

/// Whether `{x : Ax = b, lower <= x <= upper}` is nonempty.
pub fn is_feasible<T: Field>(equations: Matrix<T>, rhs: Vec<T>, lower: Vec<Option<T>>, upper: Vec<Option<T>>) -> bool {
    let n = equations.cols();
    let lp = LinearProgram { objective: vec![T::zero(); n], equations, rhs, lower, upper };
    matches!(solve_lp(&lp), LpOutcome::Optimal(_))
}

/// Optimum of `objective . lambda` over `{lambda >= 0 : rows . lambda = rhs}`,
/// or `None` when infeasible. Panics when unbounded.
fn optimize_nonnegative<T: Field>(k: usize, rows: &[Vec<T>], rhs: &[T], objective: &[T], maximize: bool) -> Option<T> {
    let lp = LinearProgram::nonnegative(objective.to_vec(), Matrix::from_rows(k, rows.to_vec()), rhs.to_vec());
    let outcome = if maximize { solve_lp(&lp) } else { minimize(&lp) };
    match outcome {
        LpOutcome::Optimal(sol) => Some(sol.value),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => panic!("linear objective unbounded on the feasible region"),
    }
}

pub fn maximize_linear<T: Field>(k: usize, rows: &[Vec<T>], rhs: &[T], objective: &[T]) -> Option<T> {
    optimize_nonnegative(k, rows, rhs, objective, true)
}

pub fn minimize_linear<T: Field>(k: usize, rows: &[Vec<T>], rhs: &[T], objective: &[T]) -> Option<T> {
    optimize_nonnegative(k, rows, rhs, objective, false)
}
