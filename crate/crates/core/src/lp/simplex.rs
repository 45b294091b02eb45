//! Two-phase primal simplex over exact rationals on a sparse-row tableau.

use num_traits::{Signed, Zero};

use super::number::Num;
use super::{Bound, LinearProgram, LpSolution, LpStatus, Relation};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Entering-variable rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    /// Smallest-index entering and leaving variables; never cycles.
    Bland,
    /// Largest reduced cost entering, with ratio-test ties broken
    /// lexicographically on the rows of `B^-1` (a symbolic perturbation of
    /// the right-hand side); never cycles.
    Lexicographic,
    /// Largest reduced cost, switching to Bland's rule after this many
    /// consecutive degenerate pivots until the objective moves again.
    Dantzig { degenerate_limit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    pub rule: PivotRule,
    /// Re-verify the primal/dual certificate against the original program.
    pub verify: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { rule: PivotRule::Lexicographic, verify: true }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_with(lp, SolverOptions::default())
}

pub fn solve_with(lp: &LinearProgram, options: SolverOptions) -> Result<LpSolution> {
    let mut tableau = Tableau::standard_form(lp);
    let status = tableau.run(options.rule);
    let solution = tableau.solution(lp, status);
    if options.verify && solution.is_optimal() {
        lp.check_certificate(&solution.assignment, &solution.duals, &solution.optimum)
            .map_err(|reason| Error::Lp(format!("certificate check failed: {reason}")))?;
    }
    Ok(solution)
}

type Row = Vec<(usize, Num)>;

struct Tableau {
    rows: Vec<Row>,
    rhs: Vec<Num>,
    basis: Vec<usize>,
    /// Original constraint index of each tableau row.
    origin: Vec<usize>,
    columns: usize,
    cost: Vec<Num>,
    artificial: Vec<bool>,
    /// Columns of the starting identity basis.
    unit: Vec<bool>,
    /// Per original constraint: the unit column it started with, and whether
    /// the row was negated to make its right-hand side nonnegative.
    identity: Vec<(usize, bool)>,
    /// Per variable: its column and, for free variables, the negative part.
    var_columns: Vec<(usize, Option<usize>)>,
    reduced: Vec<Num>,
    value: Num,
    pivots: usize,
}

fn coefficient(row: &Row, col: usize) -> Option<&Num> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|pos| &row[pos].1)
}

impl Tableau {
    fn standard_form(lp: &LinearProgram) -> Self {
        let mut columns = 0;
        let mut cost = Vec::new();
        let mut var_columns = Vec::with_capacity(lp.num_variables());
        for var in 0..lp.num_variables() {
            let plus = columns;
            columns += 1;
            let c = Num::from_rational(&lp.objective().coefficient(var));
            let minus = match lp.bound(var) {
                Bound::NonNegative => None,
                Bound::Free => {
                    columns += 1;
                    Some(plus + 1)
                }
            };
            if minus.is_some() {
                let negated = c.neg();
                cost.push(c);
                cost.push(negated);
            } else {
                cost.push(c);
            }
            var_columns.push((plus, minus));
        }
        let structural = columns;
        let mut rows = Vec::with_capacity(lp.num_constraints());
        let mut rhs = Vec::with_capacity(lp.num_constraints());
        let mut basis = Vec::with_capacity(lp.num_constraints());
        let mut identity = Vec::with_capacity(lp.num_constraints());
        let mut artificial = vec![false; structural];
        for constraint in lp.constraints() {
            let negate = constraint.rhs.is_negative();
            let signed = |x: &Rational| {
                let x = Num::from_rational(x);
                if negate { x.neg() } else { x }
            };
            let relation = match (constraint.relation, negate) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            let mut row: Row = Vec::with_capacity(constraint.form.terms().len() * 2 + 2);
            for (var, coef) in constraint.form.terms() {
                let (plus, minus) = var_columns[*var];
                let a = signed(coef);
                if let Some(minus) = minus {
                    let negated = a.neg();
                    row.push((plus, a));
                    row.push((minus, negated));
                } else {
                    row.push((plus, a));
                }
            }
            if relation == Relation::Ge {
                row.push((columns, Num::one().neg()));
                artificial.push(false);
                cost.push(Num::zero());
                columns += 1;
            }
            let unit = columns;
            row.push((unit, Num::one()));
            artificial.push(relation != Relation::Le);
            cost.push(Num::zero());
            columns += 1;
            rows.push(row);
            rhs.push(signed(&constraint.rhs));
            basis.push(unit);
            identity.push((unit, negate));
        }
        let mut unit = vec![false; columns];
        for &(col, _) in &identity {
            unit[col] = true;
        }
        let origin = (0..rows.len()).collect();
        Self {
            rows,
            rhs,
            basis,
            origin,
            columns,
            cost,
            artificial,
            unit,
            identity,
            var_columns,
            reduced: Vec::new(),
            value: Num::zero(),
            pivots: 0,
        }
    }

    /// Reduced costs `c_j - c_B B^-1 A_j` for the given column costs.
    fn price(&mut self, cost: &[Num]) {
        let mut reduced = cost.to_vec();
        let mut value = Num::zero();
        for (r, row) in self.rows.iter().enumerate() {
            let cb = &cost[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            value = value.add(&cb.mul(&self.rhs[r]));
            for (col, a) in row {
                reduced[*col] = reduced[*col].sub_mul(cb, a);
            }
        }
        self.reduced = reduced;
        self.value = value;
    }

    fn run(&mut self, rule: PivotRule) -> LpStatus {
        if self.artificial.iter().any(|&a| a) {
            let phase_one: Vec<Num> =
                self.artificial.iter().map(|&a| if a { Num::one().neg() } else { Num::zero() }).collect();
            self.price(&phase_one);
            let status = self.iterate(rule, true);
            debug_assert_eq!(status, LpStatus::Optimal);
            if self.value.is_negative() {
                return LpStatus::Infeasible;
            }
            self.drive_out_artificials();
        }
        let cost = self.cost.clone();
        self.price(&cost);
        self.iterate(rule, false)
    }

    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if !self.artificial[self.basis[r]] {
                r += 1;
                continue;
            }
            let replacement = self.rows[r].iter().find(|(c, _)| !self.artificial[*c]).map(|(c, _)| *c);
            match replacement {
                Some(col) => {
                    self.pivot(r, col);
                    r += 1;
                }
                None => {
                    // every structural coefficient vanished: the row is redundant
                    self.rows.remove(r);
                    self.rhs.remove(r);
                    self.basis.remove(r);
                    self.origin.remove(r);
                }
            }
        }
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let mut candidates = (0..self.columns).filter(|&j| !self.artificial[j] && self.reduced[j].is_positive());
        if bland {
            return candidates.next();
        }
        let mut best: Option<usize> = None;
        for j in candidates {
            if best.is_none_or(|b| self.reduced[j] > self.reduced[b]) {
                best = Some(j);
            }
        }
        best
    }

    /// Whether row `r / a_r` precedes row `s / a_s` on the `B^-1` columns.
    fn lex_less(&self, r: usize, a_r: &Num, s: usize, a_s: &Num) -> bool {
        let mut left = self.rows[r].iter().filter(|(c, _)| self.unit[*c]).peekable();
        let mut right = self.rows[s].iter().filter(|(c, _)| self.unit[*c]).peekable();
        loop {
            let (x, y) = match (left.peek(), right.peek()) {
                (None, None) => return false,
                (Some((c, x)), Some((d, y))) if c == d => {
                    let pair = (x.div(a_r), y.div(a_s));
                    left.next();
                    right.next();
                    pair
                }
                (Some((c, x)), Some((d, _))) if c < d => {
                    let pair = (x.div(a_r), Num::zero());
                    left.next();
                    pair
                }
                (Some((_, x)), None) => {
                    let pair = (x.div(a_r), Num::zero());
                    left.next();
                    pair
                }
                (_, Some((_, y))) => {
                    let pair = (Num::zero(), y.div(a_s));
                    right.next();
                    pair
                }
            };
            if x != y {
                return x < y;
            }
        }
    }

    fn leaving(&self, col: usize, lexicographic: bool) -> Option<usize> {
        let mut best: Option<(usize, Num, &Num)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            let Some(a) = coefficient(row, col) else { continue };
            if !a.is_positive() {
                continue;
            }
            let ratio = self.rhs[r].div(a);
            let better = match &best {
                None => true,
                Some((b, current, a_b)) => match ratio.cmp(current) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Greater => false,
                    std::cmp::Ordering::Equal if lexicographic => self.lex_less(r, a, *b, a_b),
                    std::cmp::Ordering::Equal => self.basis[r] < self.basis[*b],
                },
            };
            if better {
                best = Some((r, ratio, a));
            }
        }
        best.map(|(r, _, _)| r)
    }

    fn iterate(&mut self, rule: PivotRule, phase_one: bool) -> LpStatus {
        let mut degenerate_run = 0;
        loop {
            let bland = match rule {
                PivotRule::Bland => true,
                PivotRule::Lexicographic => false,
                PivotRule::Dantzig { degenerate_limit } => degenerate_run >= degenerate_limit,
            };
            let Some(col) = self.entering(bland) else { return LpStatus::Optimal };
            let Some(r) = self.leaving(col, rule == PivotRule::Lexicographic) else {
                debug_assert!(!phase_one, "phase one is bounded");
                return LpStatus::Unbounded;
            };
            if self.rhs[r].is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, col);
        }
    }

    fn pivot(&mut self, r: usize, col: usize) {
        self.pivots += 1;
        let pivot = coefficient(&self.rows[r], col).expect("pivot on a zero entry").clone();
        if !pivot.is_one() {
            let inverse = pivot.recip();
            for (_, a) in self.rows[r].iter_mut() {
                *a = a.mul(&inverse);
            }
            self.rhs[r] = self.rhs[r].mul(&inverse);
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let Some(factor) = coefficient(&self.rows[i], col).cloned() else { continue };
            let updated = subtract_scaled(&self.rows[i], &factor, &pivot_row);
            self.rows[i] = updated;
            self.rhs[i] = self.rhs[i].sub_mul(&factor, &pivot_rhs);
        }
        let factor = self.reduced[col].clone();
        if !factor.is_zero() {
            for (j, a) in &pivot_row {
                self.reduced[*j] = self.reduced[*j].sub_mul(&factor, a);
            }
            self.value = self.value.add(&factor.mul(&pivot_rhs));
        }
        self.rows[r] = pivot_row;
        self.basis[r] = col;
    }

    fn solution(&self, lp: &LinearProgram, status: LpStatus) -> LpSolution {
        let mut column_values = vec![Rational::zero(); self.columns];
        for (r, &col) in self.basis.iter().enumerate() {
            column_values[col] = self.rhs[r].to_rational();
        }
        let assignment: Vec<Rational> = self
            .var_columns
            .iter()
            .map(|&(plus, minus)| match minus {
                Some(minus) => &column_values[plus] - &column_values[minus],
                None => column_values[plus].clone(),
            })
            .collect();
        let mut duals = vec![Rational::zero(); lp.num_constraints()];
        if status == LpStatus::Optimal {
            for &original in &self.origin {
                let (unit, negated) = self.identity[original];
                let y = -self.reduced[unit].to_rational();
                duals[original] = if negated { -y } else { y };
            }
        }
        let optimum = if status == LpStatus::Optimal { self.value.to_rational() } else { Rational::zero() };
        LpSolution { status, optimum, assignment, duals, pivots: self.pivots }
    }
}

/// `row - factor * other`, both sorted by column.
fn subtract_scaled(row: &Row, factor: &Num, other: &Row) -> Row {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let left = row.get(i).map(|(c, _)| *c).unwrap_or(usize::MAX);
        let right = other.get(j).map(|(c, _)| *c).unwrap_or(usize::MAX);
        if left < right {
            out.push(row[i].clone());
            i += 1;
        } else if right < left {
            out.push((right, factor.mul(&other[j].1).neg()));
            j += 1;
        } else {
            let v = row[i].1.sub_mul(factor, &other[j].1);
            if !v.is_zero() {
                out.push((left, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::LinearForm;
    use crate::rational::{int, rat};

    fn form(terms: &[(usize, Rational)]) -> LinearForm {
        LinearForm::from_terms(terms.iter().cloned())
    }

    const RULES: [PivotRule; 3] = [PivotRule::Bland, PivotRule::Lexicographic, PivotRule::Dantzig { degenerate_limit: 3 }];

    fn run(lp: &LinearProgram) -> Vec<LpSolution> {
        RULES.iter().map(|&rule| solve_with(lp, SolverOptions { rule, verify: true }).unwrap()).collect()
    }

    #[test]
    fn one_dimensional() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", Bound::NonNegative);
        lp.set_objective(form(&[(x, int(1))]));
        lp.add_constraint("cap", form(&[(x, int(1))]), Relation::Le, rat(3, 7));
        for s in run(&lp) {
            assert_eq!(s.optimum, rat(3, 7));
            assert_eq!(s.assignment, vec![rat(3, 7)]);
        }
    }

    #[test]
    fn degenerate_with_redundant_equalities() {
        // max x + y s.t. x + y = 1, 2x + 2y = 2, x - y = 0, x <= 1/2, x + y <= 1
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", Bound::NonNegative);
        let y = lp.add_variable("y", Bound::NonNegative);
        lp.set_objective(form(&[(x, int(1)), (y, int(1))]));
        lp.add_constraint("e1", form(&[(x, int(1)), (y, int(1))]), Relation::Eq, int(1));
        lp.add_constraint("e2", form(&[(x, int(2)), (y, int(2))]), Relation::Eq, int(2));
        lp.add_constraint("e3", form(&[(x, int(1)), (y, int(-1))]), Relation::Eq, int(0));
        lp.add_constraint("l1", form(&[(x, int(1))]), Relation::Le, rat(1, 2));
        lp.add_constraint("l2", form(&[(x, int(1)), (y, int(1))]), Relation::Le, int(1));
        for s in run(&lp) {
            assert_eq!(s.status, LpStatus::Optimal);
            assert_eq!(s.optimum, int(1));
            assert_eq!(s.assignment, vec![rat(1, 2), rat(1, 2)]);
        }
    }

    /// Beale's example cycles under the textbook largest-coefficient rule.
    #[test]
    fn beale_cycling_example_terminates() {
        let mut lp = LinearProgram::new();
        let v: Vec<usize> = (0..4).map(|k| lp.add_variable(format!("x{k}"), Bound::NonNegative)).collect();
        lp.set_objective(form(&[(v[0], rat(3, 4)), (v[1], int(-20)), (v[2], rat(1, 2)), (v[3], int(-6))]));
        lp.add_constraint("r1", form(&[(v[0], rat(1, 4)), (v[1], int(-8)), (v[2], int(-1)), (v[3], int(9))]), Relation::Le, int(0));
        lp.add_constraint("r2", form(&[(v[0], rat(1, 2)), (v[1], int(-12)), (v[2], rat(-1, 2)), (v[3], int(3))]), Relation::Le, int(0));
        lp.add_constraint("r3", form(&[(v[2], int(1))]), Relation::Le, int(1));
        for s in run(&lp) {
            assert_eq!(s.optimum, rat(5, 4));
        }
    }

    #[test]
    fn free_variables_and_ge_rows() {
        // max -x s.t. x >= -3, x free  -> x = -3
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", Bound::Free);
        lp.set_objective(form(&[(x, int(-1))]));
        lp.add_constraint("floor", form(&[(x, int(1))]), Relation::Ge, int(-3));
        for s in run(&lp) {
            assert_eq!(s.optimum, int(3));
            assert_eq!(s.assignment, vec![int(-3)]);
        }
        // min x + y s.t. x + 2y >= 2, 3x + y >= 3 (as max of the negation)
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", Bound::NonNegative);
        let y = lp.add_variable("y", Bound::NonNegative);
        lp.set_objective(form(&[(x, int(-1)), (y, int(-1))]));
        lp.add_constraint("a", form(&[(x, int(1)), (y, int(2))]), Relation::Ge, int(2));
        lp.add_constraint("b", form(&[(x, int(3)), (y, int(1))]), Relation::Ge, int(3));
        for s in run(&lp) {
            assert_eq!(s.optimum, rat(-7, 5));
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", Bound::NonNegative);
        lp.set_objective(form(&[(x, int(1))]));
        lp.add_constraint("lo", form(&[(x, int(1))]), Relation::Ge, int(2));
        let mut capped = lp.clone();
        capped.add_constraint("hi", form(&[(x, int(1))]), Relation::Le, int(1));
        assert!(run(&capped).iter().all(|s| s.status == LpStatus::Infeasible));
        assert!(run(&lp).iter().all(|s| s.status == LpStatus::Unbounded));
    }
}
