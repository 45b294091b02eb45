//! Instances, buyer types, type profiles and hierarchy allocation schemes.
//!
//! Profiles are enumerated in a fixed lexicographic order: buyer 1 is the
//! most significant position and, per buyer, types run
//! `(a,a) < (a,b) < (b,a) < (b,b)`. Every table in the crate (mechanisms, LP
//! variables, audits) is indexed in this order.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{pow, ratio_str, Rational};

/// Number of items. Fixed.
pub const ITEMS: usize = 2;

/// Default limit on the number of profiles an exhaustive routine will touch (4^10).
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 20;

/// The instance `(n, p, a, b)`: `n` buyers, each valuing each item
/// independently at `a` with probability `p` and at `b` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct AuctionSpec {
    n: usize,
    #[serde(with = "ratio_str")]
    p: Rational,
    #[serde(with = "ratio_str")]
    a: Rational,
    #[serde(with = "ratio_str")]
    b: Rational,
}

#[derive(Deserialize)]
struct RawSpec {
    n: usize,
    #[serde(with = "ratio_str")]
    p: Rational,
    #[serde(with = "ratio_str")]
    a: Rational,
    #[serde(with = "ratio_str")]
    b: Rational,
}

impl TryFrom<RawSpec> for AuctionSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        AuctionSpec::new(raw.n, raw.p, raw.a, raw.b)
    }
}

impl AuctionSpec {
    /// Validates `n >= 2`, `0 < p < 1` and `0 <= a < b`.
    pub fn new(n: usize, p: Rational, a: Rational, b: Rational) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec("n must be at least 2".into()));
        }
        validate_two_point(&p, &a, &b)?;
        Ok(Self { n, p, a, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Probability that a single valuation is low.
    pub fn p(&self) -> &Rational {
        &self.p
    }

    /// Low value.
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// High value.
    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Same `(n, p, a)` with a different high value.
    pub fn with_b(&self, b: Rational) -> Result<Self> {
        Self::new(self.n, self.p.clone(), self.a.clone(), b)
    }

    pub fn value(&self, level: Level) -> &Rational {
        match level {
            Level::Low => &self.a,
            Level::High => &self.b,
        }
    }

    pub fn values(&self, ty: BuyerType) -> [Rational; 2] {
        let [first, second] = ty.levels();
        [self.value(first).clone(), self.value(second).clone()]
    }

    pub fn type_probability(&self, ty: BuyerType) -> Rational {
        let q = Rational::one() - &self.p;
        ty.levels()
            .iter()
            .map(|level| match level {
                Level::Low => self.p.clone(),
                Level::High => q.clone(),
            })
            .product()
    }

    /// `p^(#a entries) (1-p)^(#b entries)`.
    pub fn profile_probability(&self, profile: &TypeProfile) -> Rational {
        let highs: usize = profile.types().iter().map(|t| t.high_count()).sum();
        let lows = ITEMS * profile.len() - highs;
        pow(&self.p, lows) * pow(&(Rational::one() - &self.p), highs)
    }

    /// The finite type space indexed the same way as [`TypeProfile::index`].
    pub fn type_space(&self) -> TypeSpace {
        TypeSpace::two_point(self.n, self.p.clone(), self.a.clone(), self.b.clone())
            .expect("validated spec")
    }
}

impl fmt::Display for AuctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, p={}, a={}, b={})", self.n, self.p, self.a, self.b)
    }
}

fn validate_two_point(p: &Rational, a: &Rational, b: &Rational) -> Result<()> {
    if !(p > &Rational::zero() && p < &Rational::one()) {
        return Err(Error::InvalidSpec("p must lie in (0,1)".into()));
    }
    if a < &Rational::zero() {
        return Err(Error::InvalidSpec("a must be nonnegative".into()));
    }
    if a >= b {
        return Err(Error::InvalidSpec("b must exceed a".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Low,
    High,
}

/// A buyer's type: one of `(a,a)`, `(a,b)`, `(b,a)`, `(b,b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum BuyerType {
    AA,
    AB,
    BA,
    BB,
}

impl BuyerType {
    /// All four types in enumeration order.
    pub const ALL: [BuyerType; 4] = [BuyerType::AA, BuyerType::AB, BuyerType::BA, BuyerType::BB];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Self {
        Self::ALL[index]
    }

    pub fn levels(self) -> [Level; 2] {
        match self {
            BuyerType::AA => [Level::Low, Level::Low],
            BuyerType::AB => [Level::Low, Level::High],
            BuyerType::BA => [Level::High, Level::Low],
            BuyerType::BB => [Level::High, Level::High],
        }
    }

    pub fn from_levels(levels: [Level; 2]) -> Self {
        match levels {
            [Level::Low, Level::Low] => BuyerType::AA,
            [Level::Low, Level::High] => BuyerType::AB,
            [Level::High, Level::Low] => BuyerType::BA,
            [Level::High, Level::High] => BuyerType::BB,
        }
    }

    pub fn is_high(self, item: usize) -> bool {
        self.levels()[item] == Level::High
    }

    pub fn high_count(self) -> usize {
        self.levels().iter().filter(|l| **l == Level::High).count()
    }

    /// The type with the two items' valuations exchanged.
    pub fn swap_items(self) -> Self {
        let [first, second] = self.levels();
        Self::from_levels([second, first])
    }

    /// Componentwise `self >= other`.
    pub fn dominates(self, other: BuyerType) -> bool {
        let (mine, theirs) = (self.levels(), other.levels());
        mine[0] >= theirs[0] && mine[1] >= theirs[1]
    }

    /// Two-character code: `"aa"`, `"ab"`, `"ba"`, `"bb"`.
    pub fn code(self) -> &'static str {
        match self {
            BuyerType::AA => "aa",
            BuyerType::AB => "ab",
            BuyerType::BA => "ba",
            BuyerType::BB => "bb",
        }
    }

    pub fn from_code(code: &str) -> Result<Self> {
        match code {
            "aa" => Ok(BuyerType::AA),
            "ab" => Ok(BuyerType::AB),
            "ba" => Ok(BuyerType::BA),
            "bb" => Ok(BuyerType::BB),
            other => Err(Error::Malformed(format!("unknown buyer type `{other}`"))),
        }
    }
}

impl fmt::Display for BuyerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl From<BuyerType> for String {
    fn from(ty: BuyerType) -> Self {
        ty.code().to_string()
    }
}

impl TryFrom<String> for BuyerType {
    type Error = Error;

    fn try_from(code: String) -> Result<Self> {
        BuyerType::from_code(&code)
    }
}

/// Row `i` is buyer `i`'s type.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeProfile(Vec<BuyerType>);

impl TypeProfile {
    pub fn new(types: Vec<BuyerType>) -> Self {
        Self(types)
    }

    /// `(a,a)^n`.
    pub fn lowest(n: usize) -> Self {
        Self(vec![BuyerType::AA; n])
    }

    /// Inverse of [`TypeProfile::index`].
    pub fn from_index(n: usize, mut index: usize) -> Self {
        let mut types = vec![BuyerType::AA; n];
        for slot in types.iter_mut().rev() {
            *slot = BuyerType::from_index(index % 4);
            index /= 4;
        }
        Self(types)
    }

    /// Position in the enumeration order.
    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, t| acc * 4 + t.index())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn types(&self) -> &[BuyerType] {
        &self.0
    }

    pub fn buyer(&self, i: usize) -> BuyerType {
        self.0[i]
    }

    /// `t_{-i}`.
    pub fn others(&self, i: usize) -> Vec<BuyerType> {
        self.0.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, t)| *t).collect()
    }

    pub fn with_buyer(&self, i: usize, ty: BuyerType) -> Self {
        let mut types = self.0.clone();
        types[i] = ty;
        Self(types)
    }

    /// `(t_i, t_{-i})` with `t_i` inserted at position `i`.
    pub fn compose(i: usize, ty: BuyerType, others: &[BuyerType]) -> Self {
        let mut types = others.to_vec();
        types.insert(i, ty);
        Self(types)
    }

    pub fn swap_items(&self) -> Self {
        Self(self.0.iter().map(|t| t.swap_items()).collect())
    }

    pub fn permute_buyers(&self, permutation: &[usize]) -> Self {
        // buyer i of the result is buyer permutation[i] of self
        Self(permutation.iter().map(|&k| self.0[k]).collect())
    }

    pub fn classify(&self) -> ProfileClass {
        classify_profile(self)
    }
}

impl fmt::Display for TypeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let codes: Vec<&str> = self.0.iter().map(|t| t.code()).collect();
        write!(f, "[{}]", codes.join(","))
    }
}

/// Every profile of `spec` with its exact probability, in enumeration order.
pub fn enumerate_profiles(spec: &AuctionSpec) -> Result<Vec<(TypeProfile, Rational)>> {
    enumerate_profiles_capped(spec, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_profiles_capped(spec: &AuctionSpec, cap: u128) -> Result<Vec<(TypeProfile, Rational)>> {
    let count = check_cap(4, spec.n, cap)?;
    Ok((0..count)
        .map(|index| {
            let profile = TypeProfile::from_index(spec.n, index);
            let probability = spec.profile_probability(&profile);
            (profile, probability)
        })
        .collect())
}

/// `types^buyers` when it fits under `cap`.
pub fn check_cap(types: usize, buyers: usize, cap: u128) -> Result<usize> {
    let mut count: u128 = 1;
    for _ in 0..buyers {
        count = count.saturating_mul(types as u128);
    }
    if count > cap {
        return Err(Error::CapExceeded { profiles: count, cap });
    }
    Ok(count as usize)
}

/// Per-item hierarchy: listed levels rank 1, 2, ...; unlisted types never
/// receive the item. The item is split evenly among the present buyers of
/// minimum rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<BuyerType>>", into = "Vec<Vec<BuyerType>>")]
pub struct HierarchyScheme {
    levels: Vec<Vec<BuyerType>>,
}

impl HierarchyScheme {
    pub fn new(levels: Vec<Vec<BuyerType>>) -> Result<Self> {
        let mut seen = Vec::new();
        for ty in levels.iter().flatten() {
            if seen.contains(ty) {
                return Err(Error::Malformed(format!("type {ty} listed twice in hierarchy")));
            }
            seen.push(*ty);
        }
        Ok(Self { levels })
    }

    /// One type per level, e.g. `[(b,b); (b,a); (a,b)]`.
    pub fn singletons(order: &[BuyerType]) -> Self {
        Self::new(order.iter().map(|t| vec![*t]).collect()).expect("caller passes distinct types")
    }

    pub fn levels(&self) -> &[Vec<BuyerType>] {
        &self.levels
    }

    /// `None` is rank infinity.
    pub fn rank(&self, ty: BuyerType) -> Option<usize> {
        self.levels.iter().position(|level| level.contains(&ty))
    }

    /// Share of the item each buyer receives at `profile`.
    pub fn allocate(&self, profile: &[BuyerType]) -> Vec<Rational> {
        let ranks: Vec<Option<usize>> = profile.iter().map(|t| self.rank(*t)).collect();
        let best = ranks.iter().flatten().min().copied();
        let mut shares = vec![Rational::zero(); profile.len()];
        if let Some(best) = best {
            let winners: Vec<usize> = (0..profile.len()).filter(|&i| ranks[i] == Some(best)).collect();
            let share = Rational::new(1.into(), (winners.len() as i64).into());
            for i in winners {
                shares[i] = share.clone();
            }
        }
        shares
    }

    /// Same scheme with every listed type's items exchanged.
    pub fn swap_items(&self) -> Self {
        Self {
            levels: self.levels.iter().map(|level| level.iter().map(|t| t.swap_items()).collect()).collect(),
        }
    }
}

impl TryFrom<Vec<Vec<BuyerType>>> for HierarchyScheme {
    type Error = Error;

    fn try_from(levels: Vec<Vec<BuyerType>>) -> Result<Self> {
        HierarchyScheme::new(levels)
    }
}

impl From<HierarchyScheme> for Vec<Vec<BuyerType>> {
    fn from(scheme: HierarchyScheme) -> Self {
        scheme.levels
    }
}

impl fmt::Display for HierarchyScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levels: Vec<String> = self
            .levels
            .iter()
            .map(|level| level.iter().map(|t| t.code()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", levels.join("; "))
    }
}

/// `allocate_hierarchy` for one item: convenience free function.
pub fn allocate_hierarchy(scheme: &HierarchyScheme, profile: &TypeProfile) -> Vec<Rational> {
    scheme.allocate(profile.types())
}

/// `q_i^j` for every buyer `i` and item `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllocationVector(pub Vec<[Rational; 2]>);

impl AllocationVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![[Rational::zero(), Rational::zero()]; n])
    }

    /// Allocation of a hierarchy pair `(H^1, H^2)`.
    pub fn from_hierarchies(schemes: &[HierarchyScheme; 2], profile: &[BuyerType]) -> Self {
        let first = schemes[0].allocate(profile);
        let second = schemes[1].allocate(profile);
        Self(first.into_iter().zip(second).map(|(x, y)| [x, y]).collect())
    }

    /// Every share in `[0,1]` and every item's total at most 1.
    pub fn is_feasible(&self) -> bool {
        let zero = Rational::zero();
        let one = Rational::one();
        let shares_ok = self.0.iter().flatten().all(|q| *q >= zero && *q <= one);
        let supply_ok = (0..ITEMS).all(|j| self.0.iter().map(|row| &row[j]).sum::<Rational>() <= one);
        shares_ok && supply_ok
    }
}

/// Profile classes of the upper-bound argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    /// The lowest profile `(a,a)^n`.
    S0,
    /// Exactly one cheap item and exactly one buyer above `(a,a)`.
    S1,
    /// Exactly one cheap item and at least two buyers above `(a,a)`.
    S2,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileClass {
    pub kind: ClassKind,
    /// `cheap[j]` iff every buyer values item `j` at `a`.
    pub cheap: [bool; 2],
    /// `I(t)`: buyers whose type is not `(a,a)`.
    pub high_buyers: Vec<usize>,
}

impl ProfileClass {
    pub fn cheap_count(&self) -> usize {
        self.cheap.iter().filter(|c| **c).count()
    }

    /// The single cheap item of a 1-cheap profile.
    pub fn cheap_item(&self) -> Option<usize> {
        match self.cheap {
            [true, false] => Some(0),
            [false, true] => Some(1),
            _ => None,
        }
    }
}

pub fn cheap_items(types: &[BuyerType]) -> [bool; 2] {
    [0, 1].map(|j| types.iter().all(|t| !t.is_high(j)))
}

/// Exactly one cheap item among `types` (used for `t_{-i}` as well as full profiles).
pub fn is_one_cheap(types: &[BuyerType]) -> bool {
    let [first, second] = cheap_items(types);
    first != second
}

pub fn classify_profile(profile: &TypeProfile) -> ProfileClass {
    let cheap = cheap_items(profile.types());
    let high_buyers: Vec<usize> =
        (0..profile.len()).filter(|&i| profile.buyer(i) != BuyerType::AA).collect();
    let kind = match (cheap, high_buyers.len()) {
        ([true, true], _) => ClassKind::S0,
        ([true, false] | [false, true], 1) => ClassKind::S1,
        ([true, false] | [false, true], _) => ClassKind::S2,
        _ => ClassKind::Other,
    };
    ProfileClass { kind, cheap, high_buyers }
}

/// Probability masses of the classes S0, S1, S2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassMasses {
    #[serde(with = "ratio_str")]
    pub p0: Rational,
    #[serde(with = "ratio_str")]
    pub p1: Rational,
    #[serde(with = "ratio_str")]
    pub p2: Rational,
}

/// Closed forms `p0 = p^{2n}`, `p1 = 2n p^{2n-1}(1-p)`,
/// `p2 = 2p^n(1 - p^n - n p^{n-1}(1-p))`.
pub fn class_probabilities(spec: &AuctionSpec) -> ClassMasses {
    let n = spec.n();
    let p = spec.p();
    let q = Rational::one() - p;
    let nn = Rational::from_integer(n.into());
    let p0 = pow(p, 2 * n);
    let p1 = Rational::from_integer(2.into()) * &nn * pow(p, 2 * n - 1) * &q;
    let p2 = Rational::from_integer(2.into())
        * pow(p, n)
        * (Rational::one() - pow(p, n) - &nn * pow(p, n - 1) * &q);
    ClassMasses { p0, p1, p2 }
}

/// Class masses summed over the enumerated profiles.
pub fn class_masses_by_enumeration(spec: &AuctionSpec) -> Result<ClassMasses> {
    let mut masses = [Rational::zero(), Rational::zero(), Rational::zero()];
    for (profile, probability) in enumerate_profiles(spec)? {
        match classify_profile(&profile).kind {
            ClassKind::S0 => masses[0] += probability,
            ClassKind::S1 => masses[1] += probability,
            ClassKind::S2 => masses[2] += probability,
            ClassKind::Other => {}
        }
    }
    let [p0, p1, p2] = masses;
    Ok(ClassMasses { p0, p1, p2 })
}

/// `tau_{i,i'}`: item 1 high only for buyer `first`, item 2 high only for
/// buyer `second`; `None` leaves that column all low.
pub fn tau(n: usize, first: Option<usize>, second: Option<usize>) -> TypeProfile {
    let mut levels = vec![[Level::Low, Level::Low]; n];
    if let Some(i) = first {
        levels[i][0] = Level::High;
    }
    if let Some(i) = second {
        levels[i][1] = Level::High;
    }
    TypeProfile::new(levels.into_iter().map(BuyerType::from_levels).collect())
}

/// `tau_{t,i}` for a 1-cheap `t`: raise buyer `i`'s entry in the cheap column to `b`.
pub fn bump_cheap_entry(profile: &TypeProfile, i: usize) -> Option<TypeProfile> {
    let item = classify_profile(profile).cheap_item()?;
    let mut levels = profile.buyer(i).levels();
    levels[item] = Level::High;
    Some(profile.with_buyer(i, BuyerType::from_levels(levels)))
}

/// A general finite type space: `buyers` IID buyers, each drawing one of the
/// listed two-item valuation vectors with the listed probability.
///
/// Profile `k` is the base-`T` number whose most significant digit is buyer
/// 1's type index. For two-point instances the type indices coincide with
/// [`BuyerType::index`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeSpace {
    buyers: usize,
    values: Vec<[Rational; 2]>,
    probabilities: Vec<Rational>,
    labels: Vec<String>,
}

impl TypeSpace {
    pub fn new(
        buyers: usize,
        values: Vec<[Rational; 2]>,
        probabilities: Vec<Rational>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if buyers == 0 {
            return Err(Error::InvalidSpec("at least one buyer required".into()));
        }
        if values.is_empty() || values.len() != probabilities.len() || values.len() != labels.len() {
            return Err(Error::InvalidSpec("type table lengths disagree".into()));
        }
        if probabilities.iter().any(|p| p < &Rational::zero()) {
            return Err(Error::InvalidSpec("negative type probability".into()));
        }
        if probabilities.iter().sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidSpec("type probabilities must sum to 1".into()));
        }
        Ok(Self { buyers, values, probabilities, labels })
    }

    /// Two-point instance without the `n >= 2` restriction of [`AuctionSpec`].
    pub fn two_point(n: usize, p: Rational, a: Rational, b: Rational) -> Result<Self> {
        validate_two_point(&p, &a, &b)?;
        let q = Rational::one() - &p;
        let mut values = Vec::new();
        let mut probabilities = Vec::new();
        let mut labels = Vec::new();
        for ty in BuyerType::ALL {
            let pick = |level: Level| if level == Level::Low { (a.clone(), p.clone()) } else { (b.clone(), q.clone()) };
            let [(v1, w1), (v2, w2)] = ty.levels().map(pick);
            values.push([v1, v2]);
            probabilities.push(w1 * w2);
            labels.push(ty.code().to_string());
        }
        Self::new(n, values, probabilities, labels)
    }

    /// Items drawn IID from the weighted `atoms` (ascending order expected);
    /// type `(x, y)` has probability `w(x) w(y)`.
    pub fn iid_items(buyers: usize, atoms: &[(Rational, Rational)]) -> Result<Self> {
        let mut values = Vec::new();
        let mut probabilities = Vec::new();
        let mut labels = Vec::new();
        for (first, w1) in atoms {
            for (second, w2) in atoms {
                values.push([first.clone(), second.clone()]);
                probabilities.push(w1 * w2);
                labels.push(format!("({first},{second})"));
            }
        }
        Self::new(buyers, values, probabilities, labels)
    }

    pub fn buyers(&self) -> usize {
        self.buyers
    }

    pub fn num_types(&self) -> usize {
        self.values.len()
    }

    /// `T^n`; callers must have checked the cap.
    pub fn num_profiles(&self) -> usize {
        self.num_types().pow(self.buyers as u32)
    }

    /// `T^(n-1)`.
    pub fn num_others(&self) -> usize {
        self.num_types().pow(self.buyers as u32 - 1)
    }

    pub fn check_cap(&self, cap: u128) -> Result<usize> {
        check_cap(self.num_types(), self.buyers, cap)
    }

    pub fn values(&self, ty: usize) -> &[Rational; 2] {
        &self.values[ty]
    }

    pub fn type_probability(&self, ty: usize) -> &Rational {
        &self.probabilities[ty]
    }

    pub fn label(&self, ty: usize) -> &str {
        &self.labels[ty]
    }

    fn stride(&self, buyer: usize) -> usize {
        self.num_types().pow((self.buyers - 1 - buyer) as u32)
    }

    pub fn buyer_type(&self, profile: usize, buyer: usize) -> usize {
        (profile / self.stride(buyer)) % self.num_types()
    }

    pub fn decode(&self, profile: usize) -> Vec<usize> {
        (0..self.buyers).map(|i| self.buyer_type(profile, i)).collect()
    }

    pub fn encode(&self, types: &[usize]) -> usize {
        types.iter().fold(0, |acc, t| acc * self.num_types() + t)
    }

    /// Index of `t_{-i}` within the `T^(n-1)` profiles of the other buyers.
    pub fn others_index(&self, profile: usize, buyer: usize) -> usize {
        let stride = self.stride(buyer);
        let high = profile / (stride * self.num_types());
        high * stride + profile % stride
    }

    /// Profile index of `(t_i, t_{-i})`.
    pub fn compose(&self, buyer: usize, ty: usize, others: usize) -> usize {
        let stride = self.stride(buyer);
        let high = others / stride;
        (high * self.num_types() + ty) * stride + others % stride
    }

    pub fn profile_probability(&self, profile: usize) -> Rational {
        (0..self.buyers).map(|i| self.probabilities[self.buyer_type(profile, i)].clone()).product()
    }

    /// Probability of the others-profile with index `others`.
    pub fn others_probability(&self, others: usize) -> Rational {
        let t = self.num_types();
        let mut rest = others;
        let mut probability = Rational::one();
        for _ in 0..self.buyers - 1 {
            probability *= &self.probabilities[rest % t];
            rest /= t;
        }
        probability
    }

    /// All profile probabilities in order.
    pub fn profile_probabilities(&self) -> Vec<Rational> {
        (0..self.num_profiles()).map(|k| self.profile_probability(k)).collect()
    }

    /// All others-profile probabilities in order.
    pub fn others_probabilities(&self) -> Vec<Rational> {
        (0..self.num_others()).map(|k| self.others_probability(k)).collect()
    }

    /// Index of the type whose valuations are exchanged, if present.
    pub fn swapped_type(&self, ty: usize) -> Option<usize> {
        let [x, y] = &self.values[ty];
        self.values.iter().position(|v| &v[0] == y && &v[1] == x)
    }
}
