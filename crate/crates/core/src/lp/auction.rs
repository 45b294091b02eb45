//! The revenue-maximisation programs over all mechanisms on a finite type
//! space, with per-profile variables `q_i^j(t) >= 0` and `u_i(t)`.

use num_traits::Zero;
use serde::Serialize;

use super::simplex::{solve_with, SolverOptions};
use super::{Bound, LinearForm, LinearProgram, LpSolution, LpStatus, Relation};
use crate::audit::expected_revenue;
use crate::closed_form::{r_b, r_d};
use crate::error::{Error, Result};
use crate::mechanism::{Mechanism, MechanismLabel};
use crate::model::{AuctionSpec, TypeSpace, DEFAULT_ENUMERATION_CAP};
use crate::rational::{int, ratio_str, Rational};

/// Default bound on `n * T^n`, the number of (profile, buyer) cells.
/// Admits two-point instances up to `n = 4` and 36-type spaces at `n = 2`.
pub const DEFAULT_LP_CAP: u128 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IncentiveModel {
    /// per-profile IR and DIC
    Dominant,
    /// interim BIR and BIC
    Bayesian,
}

impl IncentiveModel {
    pub fn code(self) -> &'static str {
        match self {
            IncentiveModel::Dominant => "dic",
            IncentiveModel::Bayesian => "bic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpOptions {
    /// Collapse variables onto orbits of buyer permutations and, when the
    /// type distribution allows it, the item swap.
    pub symmetrize: bool,
    pub solver: SolverOptions,
    pub cap: u128,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self { symmetrize: false, solver: SolverOptions::default(), cap: DEFAULT_LP_CAP }
    }
}

/// Constraint-family sizes of the unreduced program. In the dominant
/// program the participation constraints `u_i(t) >= 0` are carried as
/// variable bounds rather than rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProgramSize {
    pub allocation_vars: usize,
    pub utility_vars: usize,
    pub incentive_rows: usize,
    pub participation: usize,
    pub supply_rows: usize,
}

/// A built program together with what is needed to read a mechanism back.
#[derive(Clone, Debug)]
pub struct AuctionLp {
    pub model: IncentiveModel,
    pub space: TypeSpace,
    pub spec: Option<AuctionSpec>,
    pub program: LinearProgram,
    pub size: ProgramSize,
    /// Variable of `program` holding each unreduced variable.
    pub map: Vec<usize>,
}

struct Layout {
    n: usize,
    profiles: usize,
}

impl Layout {
    fn q(&self, profile: usize, buyer: usize, item: usize) -> usize {
        (profile * self.n + buyer) * 2 + item
    }

    fn u(&self, profile: usize, buyer: usize) -> usize {
        2 * self.profiles * self.n + profile * self.n + buyer
    }

    fn len(&self) -> usize {
        3 * self.profiles * self.n
    }
}

fn check_lp_cap(space: &TypeSpace, cap: u128) -> Result<()> {
    space.check_cap(DEFAULT_ENUMERATION_CAP)?;
    let cells = (space.num_types() as u128).pow(space.buyers() as u32) * space.buyers() as u128;
    if cells > cap {
        return Err(Error::LpTooLarge { cells, cap });
    }
    Ok(())
}

fn profile_name(space: &TypeSpace, profile: usize) -> String {
    space.decode(profile).iter().map(|&t| sanitize(space.label(t))).collect::<Vec<_>>().join("_")
}

/// Keeps variable names valid in the exported LP format.
fn sanitize(label: &str) -> String {
    label
        .chars()
        .filter_map(|c| match c {
            '(' | ')' => None,
            ',' => Some('x'),
            '/' => Some('d'),
            c => Some(c),
        })
        .collect()
}

/// Builds the unreduced program on any finite type space.
pub fn lp_for_space(space: &TypeSpace, model: IncentiveModel, cap: u128) -> Result<AuctionLp> {
    check_lp_cap(space, cap)?;
    let n = space.buyers();
    let types = space.num_types();
    let layout = Layout { n, profiles: space.num_profiles() };
    let mut lp = LinearProgram::new();
    let utility_bound = match model {
        IncentiveModel::Dominant => Bound::NonNegative,
        IncentiveModel::Bayesian => Bound::Free,
    };
    let names: Vec<String> = (0..layout.profiles).map(|k| profile_name(space, k)).collect();
    for (k, name) in names.iter().enumerate() {
        for i in 0..n {
            for j in 0..2 {
                let var = lp.add_variable(format!("q{}_{}_{name}", i + 1, j + 1), Bound::NonNegative);
                debug_assert_eq!(var, layout.q(k, i, j));
            }
        }
    }
    for (k, name) in names.iter().enumerate() {
        for i in 0..n {
            let var = lp.add_variable(format!("u{}_{name}", i + 1), utility_bound);
            debug_assert_eq!(var, layout.u(k, i));
        }
    }

    let probabilities = space.profile_probabilities();
    let mut objective = LinearForm::new();
    for (k, weight) in probabilities.iter().enumerate() {
        for i in 0..n {
            let values = space.values(space.buyer_type(k, i));
            for j in 0..2 {
                objective.add(layout.q(k, i, j), weight * &values[j]);
            }
            objective.add(layout.u(k, i), -weight.clone());
        }
    }
    lp.set_objective(objective);

    let others = space.num_others();
    let weights = space.others_probabilities();
    let mut incentive_rows = 0;
    for i in 0..n {
        for t in 0..types {
            for r in (0..types).filter(|&r| r != t) {
                let (truth, report) = (space.values(t), space.values(r));
                let diff = [&truth[0] - &report[0], &truth[1] - &report[1]];
                // u(r) - u(t) + (t - r) . q(r) <= 0
                let add_cell = |form: &mut LinearForm, o: usize, w: &Rational| {
                    let lie = space.compose(i, r, o);
                    let honest = space.compose(i, t, o);
                    form.add(layout.u(lie, i), w.clone());
                    form.add(layout.u(honest, i), -w.clone());
                    for j in 0..2 {
                        form.add(layout.q(lie, i, j), w * &diff[j]);
                    }
                };
                match model {
                    IncentiveModel::Dominant => {
                        for o in 0..others {
                            let mut form = LinearForm::new();
                            add_cell(&mut form, o, &int(1));
                            let label = format!("dic{}_{}_{}_{}", i + 1, sanitize(space.label(t)), sanitize(space.label(r)), o);
                            lp.add_constraint(label, form, Relation::Le, Rational::zero());
                            incentive_rows += 1;
                        }
                    }
                    IncentiveModel::Bayesian => {
                        let mut form = LinearForm::new();
                        for (o, w) in weights.iter().enumerate() {
                            add_cell(&mut form, o, w);
                        }
                        let label = format!("bic{}_{}_{}", i + 1, sanitize(space.label(t)), sanitize(space.label(r)));
                        lp.add_constraint(label, form, Relation::Le, Rational::zero());
                        incentive_rows += 1;
                    }
                }
            }
        }
    }

    let mut participation = n * layout.profiles;
    if model == IncentiveModel::Bayesian {
        participation = 0;
        for i in 0..n {
            for t in 0..types {
                // -ū_i(t) <= 0
                let form = LinearForm::from_terms(weights.iter().enumerate().map(|(o, w)| (layout.u(space.compose(i, t, o), i), -w.clone())));
                lp.add_constraint(format!("bir{}_{}", i + 1, sanitize(space.label(t))), form, Relation::Le, Rational::zero());
                participation += 1;
            }
        }
    }

    for (k, name) in names.iter().enumerate() {
        for j in 0..2 {
            let form = LinearForm::from_terms((0..n).map(|i| (layout.q(k, i, j), int(1))));
            lp.add_constraint(format!("supply{}_{name}", j + 1), form, Relation::Le, int(1));
        }
    }

    let size = ProgramSize {
        allocation_vars: 2 * n * layout.profiles,
        utility_vars: n * layout.profiles,
        incentive_rows,
        participation,
        supply_rows: 2 * layout.profiles,
    };
    let map = (0..layout.len()).collect();
    Ok(AuctionLp { model, space: space.clone(), spec: None, program: lp, size, map })
}

pub fn build_dic_lp(spec: &AuctionSpec) -> Result<AuctionLp> {
    build_lp(spec, IncentiveModel::Dominant, &LpOptions::default())
}

pub fn build_bic_lp(spec: &AuctionSpec) -> Result<AuctionLp> {
    build_lp(spec, IncentiveModel::Bayesian, &LpOptions::default())
}

pub fn build_lp(spec: &AuctionSpec, model: IncentiveModel, options: &LpOptions) -> Result<AuctionLp> {
    let mut built = lp_for_space(&spec.type_space(), model, options.cap)?;
    built.spec = Some(spec.clone());
    if options.symmetrize {
        built = built.symmetrized();
    }
    Ok(built)
}

impl AuctionLp {
    /// Variable permutations induced by relabelling buyers and, when the
    /// distribution is item-symmetric, exchanging the items.
    fn generators(&self) -> Vec<Vec<usize>> {
        let space = &self.space;
        let n = space.buyers();
        let layout = Layout { n, profiles: space.num_profiles() };
        let swap: Option<Vec<usize>> = (0..space.num_types())
            .map(|t| space.swapped_type(t).filter(|&s| space.type_probability(s) == space.type_probability(t)))
            .collect();
        let mut actions: Vec<(Vec<usize>, bool)> = Vec::new();
        if n >= 2 {
            let mut transposition: Vec<usize> = (0..n).collect();
            transposition.swap(0, 1);
            actions.push((transposition, false));
            actions.push(((0..n).map(|i| (i + 1) % n).collect(), false));
        }
        if swap.is_some() {
            actions.push(((0..n).collect(), true));
        }
        actions
            .into_iter()
            .map(|(perm, flip)| {
                let mut image = vec![0; layout.len()];
                for k in 0..layout.profiles {
                    let types = space.decode(k);
                    let mut moved = vec![0; n];
                    for i in 0..n {
                        moved[perm[i]] = if flip { swap.as_ref().unwrap()[types[i]] } else { types[i] };
                    }
                    let target = space.encode(&moved);
                    for i in 0..n {
                        for j in 0..2 {
                            let item = if flip { 1 - j } else { j };
                            image[layout.q(k, i, j)] = layout.q(target, perm[i], item);
                        }
                        image[layout.u(k, i)] = layout.u(target, perm[i]);
                    }
                }
                image
            })
            .collect()
    }

    /// The orbit-reduced program; see [`LinearProgram::symmetrize`].
    pub fn symmetrized(&self) -> AuctionLp {
        let (program, map) = self.program.symmetrize(&self.generators());
        let map = self.map.iter().map(|&v| map[v]).collect();
        AuctionLp { program, map, ..self.clone() }
    }

    /// Values of the unreduced variables.
    fn expand(&self, assignment: &[Rational]) -> Vec<Rational> {
        self.map.iter().map(|&v| assignment[v].clone()).collect()
    }
}

/// Reads the `(q, u)` tables of a solution back into a mechanism.
pub fn extract_mechanism(built: &AuctionLp, solution: &LpSolution) -> Result<Mechanism> {
    if !solution.is_optimal() {
        return Err(Error::Lp(format!("no optimal solution to extract ({:?})", solution.status)));
    }
    let values = built.expand(&solution.assignment);
    let n = built.space.buyers();
    let layout = Layout { n, profiles: built.space.num_profiles() };
    let cells = n * layout.profiles;
    let mut allocation = Vec::with_capacity(cells);
    let mut utility = Vec::with_capacity(cells);
    for k in 0..layout.profiles {
        for i in 0..n {
            allocation.push([values[layout.q(k, i, 0)].clone(), values[layout.q(k, i, 1)].clone()]);
            utility.push(values[layout.u(k, i)].clone());
        }
    }
    let mechanism = Mechanism::new(built.space.clone(), MechanismLabel::Custom, allocation, utility)?;
    Ok(match &built.spec {
        Some(spec) => mechanism.with_spec(spec),
        None => mechanism,
    })
}

/// Solves and extracts; the mechanism's expected revenue is checked to
/// equal the optimum.
pub fn solve_auction(built: &AuctionLp, options: SolverOptions) -> Result<(LpSolution, Mechanism)> {
    let solution = solve_with(&built.program, options)?;
    if solution.status != LpStatus::Optimal {
        return Err(Error::Lp(format!("auction program reported {:?}", solution.status)));
    }
    let mechanism = extract_mechanism(built, &solution)?;
    if expected_revenue(&mechanism) != solution.optimum {
        return Err(Error::Lp("extracted mechanism revenue differs from the optimum".into()));
    }
    Ok((solution, mechanism))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certification {
    pub spec: AuctionSpec,
    #[serde(with = "ratio_str")]
    pub lp_d: Rational,
    #[serde(with = "ratio_str")]
    pub r_d: Rational,
    pub equal_d: bool,
    #[serde(with = "ratio_str")]
    pub lp_b: Rational,
    #[serde(with = "ratio_str")]
    pub r_b: Rational,
    pub equal_b: bool,
}

impl Certification {
    pub fn passed(&self) -> bool {
        self.equal_d && self.equal_b
    }
}

pub fn certify_revenues(spec: &AuctionSpec) -> Result<Certification> {
    certify_with(spec, &LpOptions::default())
}

pub fn certify_with(spec: &AuctionSpec, options: &LpOptions) -> Result<Certification> {
    let optimum = |model| -> Result<Rational> {
        let built = build_lp(spec, model, options)?;
        Ok(solve_auction(&built, options.solver)?.0.optimum)
    };
    let lp_d = optimum(IncentiveModel::Dominant)?;
    let lp_b = optimum(IncentiveModel::Bayesian)?;
    let (formula_d, formula_b) = (r_d(spec), r_b(spec));
    Ok(Certification {
        spec: spec.clone(),
        equal_d: lp_d == formula_d,
        equal_b: lp_b == formula_b,
        lp_d,
        r_d: formula_d,
        lp_b,
        r_b: formula_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::{check_bic, check_bir, check_dic, check_ir};
    use crate::rational::rat;

    fn spec(n: usize, b: Rational) -> AuctionSpec {
        AuctionSpec::new(n, rat(1, 2), int(1), b).unwrap()
    }

    #[test]
    fn program_sizes_for_two_buyers() {
        let dic = build_dic_lp(&spec(2, int(2))).unwrap();
        let expected = ProgramSize { allocation_vars: 64, utility_vars: 32, incentive_rows: 96, participation: 32, supply_rows: 32 };
        assert_eq!(dic.size, expected);
        assert_eq!(dic.program.num_variables(), 96);
        assert_eq!(dic.program.num_constraints(), 96 + 32);
        let bic = build_bic_lp(&spec(2, int(2))).unwrap();
        assert_eq!(bic.size, ProgramSize { incentive_rows: 24, participation: 8, ..expected });
        // the origin is feasible with objective 0
        let origin = vec![Rational::zero(); 96];
        assert!(dic.program.check_feasible(&origin).is_ok());
        assert!(bic.program.check_feasible(&origin).is_ok());
        assert!(dic.program.objective().evaluate(&origin).is_zero());
    }

    #[test]
    fn example_one_optima_and_extraction() {
        let s = spec(2, int(2));
        let (dic, md) = solve_auction(&build_dic_lp(&s).unwrap(), SolverOptions::default()).unwrap();
        assert_eq!(dic.optimum, rat(25, 8));
        assert!(check_ir(&md).passed && check_dic(&md).passed);
        let (bic, mb) = solve_auction(&build_bic_lp(&s).unwrap(), SolverOptions::default()).unwrap();
        assert_eq!(bic.optimum, rat(51, 16));
        assert!(check_bir(&mb).passed && check_bic(&mb).passed);
    }

    #[test]
    fn low_b_optima() {
        let c = certify_revenues(&spec(2, rat(3, 2))).unwrap();
        assert_eq!((c.lp_d.clone(), c.lp_b.clone()), (rat(81, 32), rat(41, 16)));
        assert!(c.passed());
    }

    #[test]
    fn bayesian_optimum_above_v3_sells_at_b() {
        for b in [int(3), int(4), rat(13, 3)] {
            let c = certify_revenues(&spec(2, b.clone())).unwrap();
            assert_eq!(c.lp_b, rat(3, 2) * &b);
            assert_eq!(c.lp_d, c.lp_b);
        }
    }

    #[test]
    fn symmetrized_programs_agree_with_full_ones() {
        for b in [rat(3, 2), rat(7, 4), int(2), rat(5, 2), int(4)] {
            let s = spec(2, b);
            for model in [IncentiveModel::Dominant, IncentiveModel::Bayesian] {
                let full = build_lp(&s, model, &LpOptions::default()).unwrap();
                let reduced = full.symmetrized();
                assert!(reduced.program.num_variables() < full.program.num_variables());
                let (a, _) = solve_auction(&full, SolverOptions::default()).unwrap();
                let (b, m) = solve_auction(&reduced, SolverOptions::default()).unwrap();
                assert_eq!(a.optimum, b.optimum);
                match model {
                    IncentiveModel::Dominant => assert!(check_dic(&m).passed && check_ir(&m).passed),
                    IncentiveModel::Bayesian => assert!(check_bic(&m).passed && check_bir(&m).passed),
                }
            }
        }
    }

    #[test]
    fn cap_rejects_five_buyers() {
        let err = build_dic_lp(&spec(5, int(2))).unwrap_err();
        assert!(matches!(err, Error::LpTooLarge { cells: 5120, cap: DEFAULT_LP_CAP }));
    }

    #[test]
    fn single_buyer_exploratory_space() {
        let space = TypeSpace::two_point(1, rat(1, 2), int(1), int(2)).unwrap();
        let built = lp_for_space(&space, IncentiveModel::Dominant, DEFAULT_LP_CAP).unwrap();
        let (solution, mechanism) = solve_auction(&built, SolverOptions::default()).unwrap();
        // one buyer: both programs coincide and beat selling each item at a or b
        let bayes = lp_for_space(&space, IncentiveModel::Bayesian, DEFAULT_LP_CAP).unwrap();
        assert_eq!(solve_auction(&bayes, SolverOptions::default()).unwrap().0.optimum, solution.optimum);
        assert!(solution.optimum >= int(2));
        assert!(check_dic(&mechanism).passed);
    }
}
