//! Exact linear programs: a small modelling layer, a rational simplex solver
//! with a checkable optimality certificate, and the auction programs whose
//! optima are the maximum revenues over DIC and BIC mechanisms.

mod auction;
mod export;
mod number;
mod simplex;

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::rational::Rational;

pub use auction::{
    build_bic_lp, build_dic_lp, build_lp, certify_revenues, certify_with, extract_mechanism,
    lp_for_space, solve_auction, AuctionLp, Certification, IncentiveModel, LpOptions, ProgramSize, DEFAULT_LP_CAP,
};
pub use simplex::{solve, solve_with, PivotRule, SolverOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Bound {
    NonNegative,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        })
    }
}

/// Sparse linear form; terms are kept sorted by variable with no zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinearForm {
    terms: Vec<(usize, Rational)>,
}

impl LinearForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, Rational)>>(terms: I) -> Self {
        let mut form = Self::new();
        for (var, coef) in terms {
            form.add(var, coef);
        }
        form
    }

    pub fn add(&mut self, var: usize, coef: Rational) {
        match self.terms.binary_search_by_key(&var, |(v, _)| *v) {
            Ok(pos) => {
                self.terms[pos].1 += coef;
                if self.terms[pos].1.is_zero() {
                    self.terms.remove(pos);
                }
            }
            Err(pos) if !coef.is_zero() => self.terms.insert(pos, (var, coef)),
            Err(_) => {}
        }
    }

    pub fn terms(&self) -> &[(usize, Rational)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, var: usize) -> Rational {
        match self.terms.binary_search_by_key(&var, |(v, _)| *v) {
            Ok(pos) => self.terms[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn evaluate(&self, assignment: &[Rational]) -> Rational {
        self.terms.iter().map(|(v, c)| c * &assignment[*v]).sum()
    }

    /// Replaces every variable by `map[var]`, merging repeated targets.
    fn substitute(&self, map: &[usize]) -> Self {
        Self::from_terms(self.terms.iter().map(|(v, c)| (map[*v], c.clone())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub form: LinearForm,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn is_satisfied(&self, assignment: &[Rational]) -> bool {
        let lhs = self.form.evaluate(assignment);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

/// `maximize objective` subject to the constraints and variable bounds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearProgram {
    names: Vec<String>,
    bounds: Vec<Bound>,
    objective: LinearForm,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, bound: Bound) -> usize {
        self.names.push(name.into());
        self.bounds.push(bound);
        self.names.len() - 1
    }

    pub fn set_objective(&mut self, objective: LinearForm) {
        self.assert_declared(&objective);
        self.objective = objective;
    }

    pub fn add_constraint(&mut self, name: impl Into<String>, form: LinearForm, relation: Relation, rhs: Rational) {
        self.assert_declared(&form);
        self.constraints.push(Constraint { name: name.into(), form, relation, rhs });
    }

    fn assert_declared(&self, form: &LinearForm) {
        if let Some((v, _)) = form.terms.last() {
            assert!(*v < self.names.len(), "variable {v} referenced before declaration");
        }
    }

    pub fn num_variables(&self) -> usize {
        self.names.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn bound(&self, var: usize) -> Bound {
        self.bounds[var]
    }

    pub fn objective(&self) -> &LinearForm {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Re-substitutes `assignment` into every bound and constraint.
    /// Returns the first failing item.
    pub fn check_feasible(&self, assignment: &[Rational]) -> Result<(), String> {
        if assignment.len() != self.num_variables() {
            return Err(format!("assignment has {} values for {} variables", assignment.len(), self.num_variables()));
        }
        for (var, value) in assignment.iter().enumerate() {
            if self.bounds[var] == Bound::NonNegative && value.is_negative() {
                return Err(format!("{} = {value} violates its lower bound", self.names[var]));
            }
        }
        for row in &self.constraints {
            if !row.is_satisfied(assignment) {
                return Err(format!("constraint {} violated", row.name));
            }
        }
        Ok(())
    }

    /// Verifies an optimality certificate: primal feasibility of `assignment`,
    /// dual feasibility of `duals` (one per constraint), and equality of both
    /// objective values with `optimum`.
    pub fn check_certificate(&self, assignment: &[Rational], duals: &[Rational], optimum: &Rational) -> Result<(), String> {
        self.check_feasible(assignment)?;
        if &self.objective.evaluate(assignment) != optimum {
            return Err("objective at the assignment differs from the optimum".into());
        }
        if duals.len() != self.num_constraints() {
            return Err("one dual value per constraint required".into());
        }
        let mut reduced: Vec<Rational> = vec![Rational::zero(); self.num_variables()];
        for (var, coef) in self.objective.terms() {
            reduced[*var] = coef.clone();
        }
        let mut dual_objective = Rational::zero();
        for (row, y) in self.constraints.iter().zip(duals) {
            let sign_ok = match row.relation {
                Relation::Le => !y.is_negative(),
                Relation::Ge => !y.is_positive(),
                Relation::Eq => true,
            };
            if !sign_ok {
                return Err(format!("dual of {} has the wrong sign", row.name));
            }
            if y.is_zero() {
                continue;
            }
            dual_objective += y * &row.rhs;
            for (var, coef) in row.form.terms() {
                reduced[*var] -= y * coef;
            }
        }
        for (var, r) in reduced.iter().enumerate() {
            let ok = match self.bounds[var] {
                Bound::NonNegative => !r.is_positive(),
                Bound::Free => r.is_zero(),
            };
            if !ok {
                return Err(format!("reduced cost of {} is {r}", self.names[var]));
            }
        }
        if &dual_objective != optimum {
            return Err("dual objective differs from the optimum".into());
        }
        Ok(())
    }

    /// Collapses the program onto orbit representatives of a variable
    /// symmetry group given by its generators (each a permutation of the
    /// variables that maps the program onto itself). Identical rows are
    /// merged. Returns the reduced program and the map from original
    /// variables to reduced ones.
    ///
    /// Averaging any optimal point over the group gives an optimal point that
    /// is constant on orbits, so both programs have the same optimum.
    pub fn symmetrize(&self, generators: &[Vec<usize>]) -> (LinearProgram, Vec<usize>) {
        let n = self.num_variables();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for generator in generators {
            assert_eq!(generator.len(), n, "generator must permute every variable");
            for (x, &y) in generator.iter().enumerate() {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx.max(ry)] = rx.min(ry);
                }
            }
        }
        let mut reduced = LinearProgram::new();
        let mut slot = vec![usize::MAX; n];
        let mut map = vec![0; n];
        for var in 0..n {
            let root = find(&mut parent, var);
            if slot[root] == usize::MAX {
                slot[root] = reduced.add_variable(self.names[root].clone(), self.bounds[root]);
            }
            map[var] = slot[root];
        }
        for var in 0..n {
            assert_eq!(self.bounds[var], reduced.bounds[map[var]], "orbits must share bounds");
        }
        reduced.objective = self.objective.substitute(&map);
        let mut seen = HashSet::new();
        for row in &self.constraints {
            let form = row.form.substitute(&map);
            if form.is_empty() {
                assert!(
                    Constraint { name: String::new(), form: form.clone(), relation: row.relation, rhs: row.rhs.clone() }
                        .is_satisfied(&[]),
                    "symmetrized row {} is infeasible",
                    row.name
                );
                continue;
            }
            if seen.insert((form.clone(), row.relation, row.rhs.clone())) {
                reduced.constraints.push(Constraint { name: row.name.clone(), form, relation: row.relation, rhs: row.rhs.clone() });
            }
        }
        (reduced, map)
    }

    /// Standard textual LP format; see [`export::write_lp_format`].
    pub fn to_lp_format(&self) -> String {
        export::write_lp_format(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Meaningful only when optimal; zero otherwise.
    pub optimum: Rational,
    /// Primal values, one per variable.
    pub assignment: Vec<Rational>,
    /// Dual values, one per constraint.
    pub duals: Vec<Rational>,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}
