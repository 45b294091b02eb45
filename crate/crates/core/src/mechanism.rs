//! Mechanisms as explicit allocation and utility tables, and the two optimal
//! mechanisms for two-point instances.
//!
//! A mechanism is the pair `(q, u)`; payments are always derived as
//! `s_i(t) = q_i(t) . t_i - u_i(t)`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::closed_form::{b_interval, indicator_flags, BInterval, IndicatorFlags};
use crate::error::{Error, Result};
use crate::model::{
    is_one_cheap, AllocationVector, AuctionSpec, BuyerType, HierarchyScheme, TypeProfile, TypeSpace,
    DEFAULT_ENUMERATION_CAP,
};
use crate::rational::{int, ratio_str, ratio_str_seq, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MechanismLabel {
    DicOptimal,
    BicOptimal,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mechanism {
    space: TypeSpace,
    spec: Option<AuctionSpec>,
    label: MechanismLabel,
    // indexed by profile * n + buyer
    allocation: Vec<[Rational; 2]>,
    utility: Vec<Rational>,
}

impl Mechanism {
    /// Checks table sizes and the per-profile supply constraint.
    pub fn new(
        space: TypeSpace,
        label: MechanismLabel,
        allocation: Vec<[Rational; 2]>,
        utility: Vec<Rational>,
    ) -> Result<Self> {
        let cells = space.num_profiles() * space.buyers();
        if allocation.len() != cells || utility.len() != cells {
            return Err(Error::Malformed(format!(
                "mechanism tables need {cells} cells, got {} allocations and {} utilities",
                allocation.len(),
                utility.len()
            )));
        }
        let n = space.buyers();
        for (profile, rows) in allocation.chunks(n).enumerate() {
            if !AllocationVector(rows.to_vec()).is_feasible() {
                return Err(Error::Malformed(format!("infeasible allocation at profile {profile}")));
            }
        }
        Ok(Self { space, spec: None, label, allocation, utility })
    }

    /// Mechanism on the type space of a two-point instance.
    pub fn for_spec(
        spec: &AuctionSpec,
        label: MechanismLabel,
        allocation: Vec<[Rational; 2]>,
        utility: Vec<Rational>,
    ) -> Result<Self> {
        let mut mechanism = Self::new(spec.type_space(), label, allocation, utility)?;
        mechanism.spec = Some(spec.clone());
        Ok(mechanism)
    }

    /// Allocates nothing and charges nothing.
    pub fn no_trade(space: TypeSpace) -> Self {
        let cells = space.num_profiles() * space.buyers();
        let zero = Rational::zero();
        Self {
            space,
            spec: None,
            label: MechanismLabel::Custom,
            allocation: vec![[zero.clone(), zero.clone()]; cells],
            utility: vec![zero; cells],
        }
    }

    pub fn with_spec(mut self, spec: &AuctionSpec) -> Self {
        debug_assert_eq!(spec.type_space(), self.space);
        self.spec = Some(spec.clone());
        self
    }

    pub fn space(&self) -> &TypeSpace {
        &self.space
    }

    pub fn spec(&self) -> Option<&AuctionSpec> {
        self.spec.as_ref()
    }

    pub fn label(&self) -> MechanismLabel {
        self.label
    }

    pub fn n(&self) -> usize {
        self.space.buyers()
    }

    pub fn num_profiles(&self) -> usize {
        self.space.num_profiles()
    }

    fn cell(&self, profile: usize, buyer: usize) -> usize {
        profile * self.n() + buyer
    }

    pub fn allocation(&self, profile: usize, buyer: usize) -> &[Rational; 2] {
        &self.allocation[self.cell(profile, buyer)]
    }

    pub fn utility(&self, profile: usize, buyer: usize) -> &Rational {
        &self.utility[self.cell(profile, buyer)]
    }

    /// Overwrites one utility entry (payments follow).
    pub fn set_utility(&mut self, profile: usize, buyer: usize, value: Rational) {
        let cell = self.cell(profile, buyer);
        self.utility[cell] = value;
    }

    /// Overwrites one allocation entry; fails if supply would be exceeded.
    pub fn set_allocation(&mut self, profile: usize, buyer: usize, value: [Rational; 2]) -> Result<()> {
        let cell = self.cell(profile, buyer);
        let previous = std::mem::replace(&mut self.allocation[cell], value);
        let start = profile * self.n();
        if !AllocationVector(self.allocation[start..start + self.n()].to_vec()).is_feasible() {
            self.allocation[cell] = previous;
            return Err(Error::Malformed(format!("infeasible allocation at profile {profile}")));
        }
        Ok(())
    }

    pub fn allocation_vector(&self, profile: usize) -> AllocationVector {
        let start = profile * self.n();
        AllocationVector(self.allocation[start..start + self.n()].to_vec())
    }

    /// Value buyer `buyer` of type `ty` derives from the bundle assigned at `profile`.
    pub fn value_of(&self, ty: usize, profile: usize, buyer: usize) -> Rational {
        let values = self.space.values(ty);
        let q = self.allocation(profile, buyer);
        &values[0] * &q[0] + &values[1] * &q[1]
    }

    /// `s_i(t) = q_i(t) . t_i - u_i(t)`.
    pub fn payment(&self, profile: usize, buyer: usize) -> Rational {
        let ty = self.space.buyer_type(profile, buyer);
        self.value_of(ty, profile, buyer) - self.utility(profile, buyer)
    }

    /// Payment table indexed by `profile * n + buyer`.
    pub fn payments(&self) -> Vec<Rational> {
        (0..self.num_profiles())
            .flat_map(|k| (0..self.n()).map(move |i| (k, i)))
            .map(|(k, i)| self.payment(k, i))
            .collect()
    }

    /// Canonical JSON view: profiles in enumeration order.
    pub fn to_table(&self) -> MechanismTable {
        let payments = self.payments();
        let profiles = (0..self.num_profiles())
            .map(|k| {
                let types = self.space.decode(k);
                ProfileRow {
                    profile: types.iter().map(|&t| self.space.label(t).to_string()).collect(),
                    probability: self.space.profile_probability(k),
                    buyers: (0..self.n())
                        .map(|i| BuyerRow {
                            allocation: self.allocation(k, i).to_vec(),
                            utility: self.utility(k, i).clone(),
                            payment: payments[self.cell(k, i)].clone(),
                        })
                        .collect(),
                }
            })
            .collect();
        MechanismTable { spec: self.spec.clone(), label: self.label, profiles }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MechanismTable {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<AuctionSpec>,
    pub label: MechanismLabel,
    pub profiles: Vec<ProfileRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub profile: Vec<String>,
    #[serde(with = "ratio_str")]
    pub probability: Rational,
    pub buyers: Vec<BuyerRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BuyerRow {
    #[serde(with = "ratio_str_seq")]
    pub allocation: Vec<Rational>,
    #[serde(with = "ratio_str")]
    pub utility: Rational,
    #[serde(with = "ratio_str")]
    pub payment: Rational,
}

/// `s_i(t)` for every buyer and profile of `mech`.
pub fn payments(mech: &Mechanism) -> Vec<Rational> {
    mech.payments()
}

/// Hierarchy pairs `(H^1, H^2)` for the four intervals of `b`.
fn hierarchy_pair(interval: BInterval) -> [HierarchyScheme; 2] {
    use BuyerType::*;
    let first: &[BuyerType] = match interval {
        BInterval::I1 => &[BB, BA, AB, AA],
        BInterval::I2 => &[BB, BA, AB],
        BInterval::I3 | BInterval::I4 => &[BB, BA],
    };
    let second: Vec<BuyerType> = first.iter().map(|t| t.swap_items()).collect();
    [HierarchyScheme::singletons(first), HierarchyScheme::singletons(&second)]
}

/// Allocation of the dominant-strategy mechanism in `interval` at `profile`.
fn dic_allocation(interval: BInterval, profile: &TypeProfile) -> AllocationVector {
    let n = profile.len();
    if interval == BInterval::I3 {
        // bundle at price a+b to a buyer facing only (a,a) opponents
        let lone = (0..n).find(|&i| {
            profile.buyer(i) != BuyerType::AA && profile.others(i).iter().all(|t| *t == BuyerType::AA)
        });
        if let Some(i) = lone {
            let mut allocation = AllocationVector::zeros(n);
            allocation.0[i] = [Rational::one(), Rational::one()];
            return allocation;
        }
        if profile.types().iter().all(|t| *t == BuyerType::AA) {
            return AllocationVector::zeros(n);
        }
    }
    AllocationVector::from_hierarchies(&hierarchy_pair(interval), profile.types())
}

fn high_count(types: &[BuyerType]) -> usize {
    types.iter().filter(|t| **t != BuyerType::AA).count()
}

/// Which utility rule applies to a `(b,b)` buyer facing a 1-cheap `t_{-i}`.
#[derive(Clone, Copy)]
enum ExceptionRule {
    /// `(b-a) gamma / (1 + |I(t_{-i})|)`
    Dominant,
    /// `(1/2)(b-a) beta / (1 + |I(t_{-i})|)`
    Bayesian,
}

fn utility_entry(
    spec: &AuctionSpec,
    flags: IndicatorFlags,
    rule: ExceptionRule,
    profile: &TypeProfile,
    buyer: usize,
) -> Rational {
    let gap = spec.b() - spec.a();
    let flag = |on: bool| if on { Rational::one() } else { Rational::zero() };
    let n = int(spec.n() as i64);
    let own = profile.buyer(buyer);
    let others = profile.others(buyer);
    if others.iter().all(|t| *t == BuyerType::AA) {
        return match own {
            BuyerType::AB | BuyerType::BA => gap * flag(flags.alpha) / n,
            BuyerType::BB => gap * (flag(flags.alpha) / n + flag(flags.beta)),
            BuyerType::AA => Rational::zero(),
        };
    }
    if own == BuyerType::BB && is_one_cheap(&others) {
        let crowd = int(1 + high_count(&others) as i64);
        return match rule {
            ExceptionRule::Dominant => gap * flag(flags.gamma) / crowd,
            ExceptionRule::Bayesian => gap * flag(flags.beta) / (int(2) * crowd),
        };
    }
    Rational::zero()
}

fn assemble(
    spec: &AuctionSpec,
    label: MechanismLabel,
    allocation_interval: BInterval,
    rule: ExceptionRule,
    cap: u128,
) -> Result<Mechanism> {
    let flags = indicator_flags(spec);
    let space = spec.type_space();
    space.check_cap(cap)?;
    let n = spec.n();
    let mut allocation = Vec::with_capacity(space.num_profiles() * n);
    let mut utility = Vec::with_capacity(space.num_profiles() * n);
    for k in 0..space.num_profiles() {
        let profile = TypeProfile::from_index(n, k);
        allocation.extend(dic_allocation(allocation_interval, &profile).0);
        utility.extend((0..n).map(|i| utility_entry(spec, flags, rule, &profile, i)));
    }
    Ok(Mechanism::for_spec(spec, label, allocation, utility).expect("constructed tables are feasible"))
}

/// The optimal dominant-strategy mechanism: hierarchy allocation chosen by
/// the interval of `b` (with the bundle offer in `[v2, v3)`) and the
/// four-branch utility rule.
///
/// Panics if the instance exceeds the default enumeration cap; see
/// [`try_build_m_d`].
pub fn build_m_d(spec: &AuctionSpec) -> Mechanism {
    try_build_m_d(spec, DEFAULT_ENUMERATION_CAP).expect("instance within the enumeration cap")
}

pub fn try_build_m_d(spec: &AuctionSpec, cap: u128) -> Result<Mechanism> {
    assemble(spec, MechanismLabel::DicOptimal, b_interval(spec), ExceptionRule::Dominant, cap)
}

/// The optimal Bayesian mechanism. Below `v3` it uses the first or second
/// hierarchy pair and gives a `(b,b)` buyer facing a 1-cheap `t_{-i}` half the
/// dominant-strategy rent; from `v3` on it coincides with [`build_m_d`].
pub fn build_m_b(spec: &AuctionSpec) -> Mechanism {
    try_build_m_b(spec, DEFAULT_ENUMERATION_CAP).expect("instance within the enumeration cap")
}

pub fn try_build_m_b(spec: &AuctionSpec, cap: u128) -> Result<Mechanism> {
    let (allocation_interval, rule) = match b_interval(spec) {
        BInterval::I1 => (BInterval::I1, ExceptionRule::Bayesian),
        BInterval::I2 | BInterval::I3 => (BInterval::I2, ExceptionRule::Bayesian),
        BInterval::I4 => (BInterval::I4, ExceptionRule::Dominant),
    };
    assemble(spec, MechanismLabel::BicOptimal, allocation_interval, rule, cap)
}
