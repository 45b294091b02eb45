//! Exhaustive, exact verification of participation and incentive constraints,
//! expected revenue, and the `Q`/`U` statistics of the upper-bound argument.
//!
//! All checks work from the `(q, u)` tables; payments are derived on the fly,
//! so a mechanism can never carry an inconsistent payment table. Constraints
//! are enumerated buyer, then true type, then reported type, then `t_{-i}`
//! in profile order, and violations are reported in that order.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mechanism::Mechanism;
use crate::model::{bump_cheap_entry, classify_profile, tau, AuctionSpec, BuyerType, ClassKind, TypeProfile};
use crate::rational::{ratio_str, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    IR,
    DIC,
    BIR,
    BIC,
}

/// Indices that identify one constraint, enough to re-evaluate it with [`replay`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConstraintKey {
    pub condition: Condition,
    pub buyer: usize,
    pub true_type: usize,
    pub reported_type: usize,
    /// Index of `t_{-i}`; `None` for interim (averaged) constraints.
    pub others: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum OthersLabel {
    Profile(Vec<String>),
    Averaged(&'static str),
}

/// A failed constraint `lhs >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub buyer: usize,
    pub true_type: String,
    pub reported_type: String,
    pub others: OthersLabel,
    #[serde(with = "ratio_str")]
    pub lhs: Rational,
    #[serde(with = "ratio_str")]
    pub rhs: Rational,
    pub key: ConstraintKey,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub condition: Condition,
    pub passed: bool,
    /// Number of constraints evaluated.
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    fn from_violations(condition: Condition, checked: usize, violations: Vec<Violation>) -> Self {
        Self { condition, passed: violations.is_empty(), checked, violations }
    }

    pub fn contains(&self, buyer: usize, true_type: usize, reported_type: usize, others: Option<usize>) -> bool {
        self.violations.iter().any(|v| {
            v.key.buyer == buyer
                && v.key.true_type == true_type
                && v.key.reported_type == reported_type
                && v.key.others == others
        })
    }
}

/// `sum_t Pr{t} sum_i s_i(t)`.
pub fn expected_revenue(mech: &Mechanism) -> Rational {
    let space = mech.space();
    (0..mech.num_profiles())
        .map(|k| {
            let total: Rational = (0..mech.n()).map(|i| mech.payment(k, i)).sum();
            total * space.profile_probability(k)
        })
        .sum()
}

fn others_label(mech: &Mechanism, buyer: usize, others: usize) -> OthersLabel {
    let space = mech.space();
    // any own type works for decoding t_{-i}
    let profile = space.compose(buyer, 0, others);
    let labels = (0..mech.n())
        .filter(|&k| k != buyer)
        .map(|k| space.label(space.buyer_type(profile, k)).to_string())
        .collect();
    OthersLabel::Profile(labels)
}

fn violation(mech: &Mechanism, key: ConstraintKey, lhs: Rational, rhs: Rational) -> Violation {
    let space = mech.space();
    let others = match key.others {
        Some(o) => others_label(mech, key.buyer, o),
        None => OthersLabel::Averaged("averaged"),
    };
    Violation {
        buyer: key.buyer,
        true_type: space.label(key.true_type).to_string(),
        reported_type: space.label(key.reported_type).to_string(),
        others,
        lhs,
        rhs,
        key,
    }
}

/// `(t - t') . q`
fn gain(mech: &Mechanism, true_type: usize, reported: usize, q: &[Rational; 2]) -> Rational {
    let space = mech.space();
    let (truth, report) = (space.values(true_type), space.values(reported));
    (&truth[0] - &report[0]) * &q[0] + (&truth[1] - &report[1]) * &q[1]
}

/// Evaluates the `(lhs, rhs)` pair of a single constraint.
pub fn replay(mech: &Mechanism, key: &ConstraintKey) -> (Rational, Rational) {
    let space = mech.space();
    let i = key.buyer;
    match (key.condition, key.others) {
        (Condition::IR, Some(o)) => {
            let k = space.compose(i, key.true_type, o);
            (mech.utility(k, i).clone(), Rational::zero())
        }
        (Condition::DIC, Some(o)) => {
            let truthful = space.compose(i, key.true_type, o);
            let lie = space.compose(i, key.reported_type, o);
            let rhs = mech.utility(lie, i) + gain(mech, key.true_type, key.reported_type, mech.allocation(lie, i));
            (mech.utility(truthful, i).clone(), rhs)
        }
        (Condition::BIR, None) => {
            let interim = interim(mech);
            (interim.utility(i, key.true_type).clone(), Rational::zero())
        }
        (Condition::BIC, None) => {
            let interim = interim(mech);
            let rhs = interim.utility(i, key.reported_type)
                + gain(mech, key.true_type, key.reported_type, interim.allocation(i, key.reported_type));
            (interim.utility(i, key.true_type).clone(), rhs)
        }
        _ => panic!("constraint key {key:?} mixes per-profile and interim forms"),
    }
}

/// `u_i(t) >= 0` for every buyer and profile.
pub fn check_ir(mech: &Mechanism) -> AuditReport {
    let space = mech.space();
    let mut violations = Vec::new();
    let mut checked = 0;
    for i in 0..mech.n() {
        for t in 0..space.num_types() {
            for o in 0..space.num_others() {
                checked += 1;
                let k = space.compose(i, t, o);
                let u = mech.utility(k, i);
                if u < &Rational::zero() {
                    let key = ConstraintKey { condition: Condition::IR, buyer: i, true_type: t, reported_type: t, others: Some(o) };
                    violations.push(violation(mech, key, u.clone(), Rational::zero()));
                }
            }
        }
    }
    AuditReport::from_violations(Condition::IR, checked, violations)
}

/// `u_i(t_i, t_{-i}) >= u_i(t'_i, t_{-i}) + (t_i - t'_i) . q_i(t'_i, t_{-i})`
/// for every buyer, ordered pair of distinct types, and `t_{-i}`.
pub fn check_dic(mech: &Mechanism) -> AuditReport {
    let space = mech.space();
    let mut violations = Vec::new();
    let mut checked = 0;
    for i in 0..mech.n() {
        for t in 0..space.num_types() {
            for r in (0..space.num_types()).filter(|&r| r != t) {
                for o in 0..space.num_others() {
                    checked += 1;
                    let truthful = space.compose(i, t, o);
                    let lie = space.compose(i, r, o);
                    let lhs = mech.utility(truthful, i);
                    let rhs = mech.utility(lie, i) + gain(mech, t, r, mech.allocation(lie, i));
                    if lhs < &rhs {
                        let key = ConstraintKey { condition: Condition::DIC, buyer: i, true_type: t, reported_type: r, others: Some(o) };
                        violations.push(violation(mech, key, lhs.clone(), rhs));
                    }
                }
            }
        }
    }
    AuditReport::from_violations(Condition::DIC, checked, violations)
}

/// Interim allocations `q̄_i(t_i)` and utilities `ū_i(t_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterimTable {
    types: usize,
    allocation: Vec<[Rational; 2]>,
    utility: Vec<Rational>,
}

impl InterimTable {
    pub fn allocation(&self, buyer: usize, ty: usize) -> &[Rational; 2] {
        &self.allocation[buyer * self.types + ty]
    }

    pub fn utility(&self, buyer: usize, ty: usize) -> &Rational {
        &self.utility[buyer * self.types + ty]
    }
}

/// Averages over `t_{-i}` weighted by `Pr{t_{-i}}`.
pub fn interim(mech: &Mechanism) -> InterimTable {
    let space = mech.space();
    let weights = space.others_probabilities();
    let types = space.num_types();
    let mut allocation = Vec::with_capacity(mech.n() * types);
    let mut utility = Vec::with_capacity(mech.n() * types);
    for i in 0..mech.n() {
        for t in 0..types {
            let mut q = [Rational::zero(), Rational::zero()];
            let mut u = Rational::zero();
            for (o, w) in weights.iter().enumerate() {
                let k = space.compose(i, t, o);
                let cell = mech.allocation(k, i);
                q[0] += w * &cell[0];
                q[1] += w * &cell[1];
                u += w * mech.utility(k, i);
            }
            allocation.push(q);
            utility.push(u);
        }
    }
    InterimTable { types, allocation, utility }
}

/// `ū_i(t_i) >= 0` for every buyer and type.
pub fn check_bir(mech: &Mechanism) -> AuditReport {
    let table = interim(mech);
    let space = mech.space();
    let mut violations = Vec::new();
    let mut checked = 0;
    for i in 0..mech.n() {
        for t in 0..space.num_types() {
            checked += 1;
            let u = table.utility(i, t);
            if u < &Rational::zero() {
                let key = ConstraintKey { condition: Condition::BIR, buyer: i, true_type: t, reported_type: t, others: None };
                violations.push(violation(mech, key, u.clone(), Rational::zero()));
            }
        }
    }
    AuditReport::from_violations(Condition::BIR, checked, violations)
}

/// `ū_i(t_i) >= ū_i(t'_i) + (t_i - t'_i) . q̄_i(t'_i)`.
pub fn check_bic(mech: &Mechanism) -> AuditReport {
    let table = interim(mech);
    let space = mech.space();
    let mut violations = Vec::new();
    let mut checked = 0;
    for i in 0..mech.n() {
        for t in 0..space.num_types() {
            for r in (0..space.num_types()).filter(|&r| r != t) {
                checked += 1;
                let lhs = table.utility(i, t);
                let rhs = table.utility(i, r) + gain(mech, t, r, table.allocation(i, r));
                if lhs < &rhs {
                    let key = ConstraintKey { condition: Condition::BIC, buyer: i, true_type: t, reported_type: r, others: None };
                    violations.push(violation(mech, key, lhs.clone(), rhs));
                }
            }
        }
    }
    AuditReport::from_violations(Condition::BIC, checked, violations)
}

/// Recomputes each misreport utility straight from its definition
/// `t_i . q_i(t'_i, t_{-i}) - s_i(t'_i, t_{-i})` and compares it with the
/// transfer equation, per profile and in averaged form.
pub fn transfer_equation_check(mech: &Mechanism) -> bool {
    let space = mech.space();
    let weights = space.others_probabilities();
    let table = interim(mech);
    for i in 0..mech.n() {
        for t in 0..space.num_types() {
            for r in 0..space.num_types() {
                let mut averaged = Rational::zero();
                for (o, w) in weights.iter().enumerate() {
                    let lie = space.compose(i, r, o);
                    let direct = mech.value_of(t, lie, i) - mech.payment(lie, i);
                    let transferred = mech.utility(lie, i) + gain(mech, t, r, mech.allocation(lie, i));
                    if direct != transferred {
                        return false;
                    }
                    averaged += w * direct;
                }
                let transferred = table.utility(i, r) + gain(mech, t, r, table.allocation(i, r));
                if averaged != transferred {
                    return false;
                }
            }
        }
    }
    true
}

/// The family of `t_{-1}` used to organise the dominant-strategy proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseFamily {
    /// every other buyer is `(a,a)`
    A,
    /// item 1 cheap among the others, item 2 not
    B,
    /// item 2 cheap among the others, item 1 not
    C,
    /// both items non-cheap, nobody else is `(b,b)`
    D,
    /// some other buyer is `(b,b)`
    E,
}

pub fn case_family(others: &[BuyerType]) -> CaseFamily {
    let cheap = crate::model::cheap_items(others);
    match cheap {
        [true, true] => CaseFamily::A,
        [true, false] => CaseFamily::B,
        [false, true] => CaseFamily::C,
        [false, false] if others.contains(&BuyerType::BB) => CaseFamily::E,
        [false, false] => CaseFamily::D,
    }
}

/// Case families touched by the dominant-strategy constraints of buyer 1.
pub fn dic_case_coverage(spec: &AuctionSpec) -> BTreeSet<CaseFamily> {
    let n = spec.n();
    (0..4usize.pow(n as u32 - 1))
        .map(|o| case_family(TypeProfile::from_index(n - 1, o).types()))
        .collect()
}

/// The constraint `u_1((b,b), t_{-1}) >= u_1((a,b), t_{-1}) + (b-a) q_1^1((a,b), t_{-1})`
/// with `t_{-1} = ((a,b), (a,a), ...)`, as a replayable key.
pub fn bayesian_witness_key(n: usize) -> ConstraintKey {
    let mut others = vec![BuyerType::AA; n - 1];
    others[0] = BuyerType::AB;
    ConstraintKey {
        condition: Condition::DIC,
        buyer: 0,
        true_type: BuyerType::BB.index(),
        reported_type: BuyerType::AB.index(),
        others: Some(TypeProfile::new(others).index()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuEntry {
    #[serde(with = "ratio_str")]
    pub q: Rational,
    #[serde(with = "ratio_str")]
    pub u: Rational,
    pub profiles: usize,
}

/// `Q(S)` and `U(S)` for the five profile sets of the upper-bound argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuStatistics {
    pub s0: QuEntry,
    pub s1: QuEntry,
    pub s2: QuEntry,
    pub s1_prime: QuEntry,
    pub s2_prime: QuEntry,
    /// `Q` and `U` over all profiles.
    pub total: QuEntry,
    /// `S'_1` and `S'_2` are disjoint and contain no cheap items.
    pub primes_well_formed: bool,
}

/// Cheap-item allocation mass `sum_{i,j} q'_i^j(t)` at one profile.
pub fn cheap_allocation_mass(mech: &Mechanism, profile: &TypeProfile) -> Rational {
    let class = classify_profile(profile);
    let k = profile.index();
    (0..mech.n())
        .map(|i| {
            let q = mech.allocation(k, i);
            (0..2).filter(|&j| class.cheap[j]).map(|j| q[j].clone()).sum::<Rational>()
        })
        .sum()
}

fn entry(mech: &Mechanism, spec: &AuctionSpec, set: &BTreeSet<TypeProfile>) -> QuEntry {
    let mut q = Rational::zero();
    let mut u = Rational::zero();
    for profile in set {
        let weight = spec.profile_probability(profile);
        let k = profile.index();
        q += &weight * cheap_allocation_mass(mech, profile);
        u += &weight * (0..mech.n()).map(|i| mech.utility(k, i).clone()).sum::<Rational>();
    }
    QuEntry { q, u, profiles: set.len() }
}

pub fn qu_statistics(mech: &Mechanism) -> Result<QuStatistics> {
    let spec = mech
        .spec()
        .ok_or_else(|| Error::Malformed("Q/U statistics need a two-point instance".into()))?
        .clone();
    let n = spec.n();
    let all: Vec<TypeProfile> = (0..mech.num_profiles()).map(|k| TypeProfile::from_index(n, k)).collect();
    let of_kind = |kind| all.iter().filter(|t| classify_profile(t).kind == kind).cloned().collect::<BTreeSet<_>>();
    let s0 = of_kind(ClassKind::S0);
    let s1 = of_kind(ClassKind::S1);
    let s2 = of_kind(ClassKind::S2);
    let s1_prime: BTreeSet<TypeProfile> =
        (0..n).flat_map(|i| (0..n).map(move |k| tau(n, Some(i), Some(k)))).collect();
    let s2_prime: BTreeSet<TypeProfile> =
        s2.iter().flat_map(|t| (0..n).filter_map(move |i| bump_cheap_entry(t, i))).collect();
    let primes_well_formed = s1_prime.is_disjoint(&s2_prime)
        && s1_prime.iter().chain(s2_prime.iter()).all(|t| classify_profile(t).cheap_count() == 0);
    let everything: BTreeSet<TypeProfile> = all.into_iter().collect();
    Ok(QuStatistics {
        s0: entry(mech, &spec, &s0),
        s1: entry(mech, &spec, &s1),
        s2: entry(mech, &spec, &s2),
        s1_prime: entry(mech, &spec, &s1_prime),
        s2_prime: entry(mech, &spec, &s2_prime),
        total: entry(mech, &spec, &everything),
        primes_well_formed,
    })
}
