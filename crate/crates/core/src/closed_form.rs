//! Closed-form optimal revenues, breakpoints and benchmark revenues.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{class_probabilities, AuctionSpec};
use crate::rational::{int, positive_part, pow, ratio_str, Rational};

/// Points on the `b` axis where the revenue curves change slope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Breakpoints {
    /// `(1+p^2)/(1-p^2) a`
    #[serde(with = "ratio_str")]
    pub v1: Rational,
    /// `a/(1-p)`
    #[serde(with = "ratio_str")]
    pub v2: Rational,
    /// `(1+p)/(1-p) a`
    #[serde(with = "ratio_str")]
    pub v3: Rational,
}

impl Breakpoints {
    pub fn as_array(&self) -> [&Rational; 3] {
        [&self.v1, &self.v2, &self.v3]
    }
}

pub fn breakpoints(spec: &AuctionSpec) -> Breakpoints {
    breakpoints_for(spec.p(), spec.a())
}

/// Breakpoints depend only on `p` and `a`.
pub fn breakpoints_for(p: &Rational, a: &Rational) -> Breakpoints {
    let one = Rational::one();
    let p2 = p * p;
    Breakpoints {
        v1: (&one + &p2) / (&one - &p2) * a,
        v2: a / (&one - p),
        v3: (&one + p) / (&one - p) * a,
    }
}

/// Indicators of the three strict inequalities `b < v1`, `b < v3`, `b < v2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndicatorFlags {
    pub alpha: bool,
    pub beta: bool,
    pub gamma: bool,
}

impl IndicatorFlags {
    pub fn as_bits(self) -> [u8; 3] {
        [self.alpha as u8, self.beta as u8, self.gamma as u8]
    }
}

pub fn indicator_flags(spec: &AuctionSpec) -> IndicatorFlags {
    let v = breakpoints(spec);
    let b = spec.b();
    IndicatorFlags { alpha: b < &v.v1, beta: b < &v.v3, gamma: b < &v.v2 }
}

/// The four linearity intervals `(a,v1)`, `[v1,v2)`, `[v2,v3)`, `[v3,inf)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BInterval {
    I1,
    I2,
    I3,
    I4,
}

pub fn b_interval(spec: &AuctionSpec) -> BInterval {
    let v = breakpoints(spec);
    let b = spec.b();
    if b < &v.v1 {
        BInterval::I1
    } else if b < &v.v2 {
        BInterval::I2
    } else if b < &v.v3 {
        BInterval::I3
    } else {
        BInterval::I4
    }
}

/// The three bracketed increments shared by both revenue formulas.
struct Brackets {
    lowest: Rational,
    half: Rational,
    full: Rational,
}

fn brackets(spec: &AuctionSpec) -> Brackets {
    let one = Rational::one();
    let p = spec.p();
    let q = &one - p;
    let (a, b) = (spec.a(), spec.b());
    let gap = b - a;
    let two = int(2);
    Brackets {
        lowest: positive_part(&two * a - (&one - p * p) / (p * p) * &gap),
        half: positive_part(a - &q / (&two * p) * &gap),
        full: positive_part(a - &q / p * &gap),
    }
}

/// `s_b = 2(1-p^n) b`: selling each item separately at price `b`.
pub fn sell_at_b(spec: &AuctionSpec) -> Rational {
    int(2) * (Rational::one() - pow(spec.p(), spec.n())) * spec.b()
}

/// Optimal dominant-strategy revenue.
pub fn r_d(spec: &AuctionSpec) -> Rational {
    let masses = class_probabilities(spec);
    let br = brackets(spec);
    sell_at_b(spec) + masses.p0 * br.lowest + masses.p1 * br.half + masses.p2 * br.full
}

/// Optimal Bayesian revenue.
pub fn r_b(spec: &AuctionSpec) -> Rational {
    let masses = class_probabilities(spec);
    let br = brackets(spec);
    sell_at_b(spec) + masses.p0 * br.lowest + (masses.p1 + masses.p2) * br.half
}

/// Revenue of selling each item separately at its optimal posted price
/// (`a` or `b`).
pub fn srev(spec: &AuctionSpec) -> Rational {
    let one = Rational::one();
    let n = spec.n();
    let (p, a, b) = (spec.p(), spec.a(), spec.b());
    let at_b = (&one - pow(p, n)) * b;
    let at_a = pow(p, n - 1) * a + (&one - pow(p, n - 1)) * b;
    int(2) * at_b.max(at_a)
}

/// Best single posted price for the bundle, searched over the three atoms
/// `2a`, `a+b`, `2b` of a buyer's bundle value.
pub fn grand_bundle_rev(spec: &AuctionSpec) -> Rational {
    let one = Rational::one();
    let n = spec.n();
    let (p, a, b) = (spec.p(), spec.a(), spec.b());
    let q = &one - p;
    // probability one buyer's bundle value is at least each price
    let reach = [one.clone(), &one - p * p, &q * &q];
    let prices = [int(2) * a, a + b, int(2) * b];
    prices
        .iter()
        .zip(reach.iter())
        .map(|(price, r)| price * (&one - pow(&(&one - r), n)))
        .max()
        .expect("three candidate prices")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RevenueReport {
    #[serde(with = "ratio_str")]
    pub r_d: Rational,
    #[serde(with = "ratio_str")]
    pub r_b: Rational,
    #[serde(with = "ratio_str")]
    pub srev: Rational,
    #[serde(with = "ratio_str")]
    pub s_b: Rational,
    #[serde(with = "ratio_str")]
    pub bundle_rev: Rational,
    pub flags: IndicatorFlags,
    pub breakpoints: Breakpoints,
}

pub fn revenue_report(spec: &AuctionSpec) -> RevenueReport {
    let report = RevenueReport {
        r_d: r_d(spec),
        r_b: r_b(spec),
        srev: srev(spec),
        s_b: sell_at_b(spec),
        bundle_rev: grand_bundle_rev(spec),
        flags: indicator_flags(spec),
        breakpoints: breakpoints(spec),
    };
    assert!(
        report.r_b >= report.r_d && report.r_d >= report.srev && report.srev >= report.s_b,
        "revenue ordering violated at {spec}"
    );
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    #[serde(with = "ratio_str")]
    pub b: Rational,
    #[serde(with = "ratio_str")]
    pub r_d: Rational,
    #[serde(with = "ratio_str")]
    pub r_b: Rational,
    #[serde(with = "ratio_str")]
    pub srev: Rational,
    pub flags: IndicatorFlags,
    pub breakpoint: bool,
}

/// Evaluates the revenue curves at `b_min + k (b_max - b_min)/steps` for
/// `k = 0..=steps`, plus every breakpoint above `a`, sorted by `b`.
///
/// Grid points equal to `a` are skipped, so `b_min = a` sweeps the half-open
/// range `(a, b_max]`. A grid point that coincides with a breakpoint appears
/// once, flagged as a breakpoint.
pub fn sweep_b(
    n: usize,
    p: &Rational,
    a: &Rational,
    b_min: &Rational,
    b_max: &Rational,
    steps: usize,
) -> Result<Vec<SweepRow>> {
    if steps == 0 {
        return Err(Error::InvalidRange("steps must be at least 1".into()));
    }
    if b_min < a {
        return Err(Error::InvalidRange(format!("b range starts at {b_min}, below a = {a}")));
    }
    if b_max <= b_min {
        return Err(Error::InvalidRange("b_max must exceed b_min".into()));
    }
    // validate (n, p, a) once through a representative instance
    let base = AuctionSpec::new(n, p.clone(), a.clone(), b_max.clone())?;
    let width = (b_max - b_min) / int(steps as i64);
    let mut points: Vec<(Rational, bool)> = (0..=steps)
        .map(|k| (b_min + &width * int(k as i64), false))
        .filter(|(b, _)| b > a)
        .collect();
    for v in breakpoints(&base).as_array() {
        if v <= a {
            continue;
        }
        match points.iter_mut().find(|(b, _)| b == v) {
            Some(point) => point.1 = true,
            None => points.push((v.clone(), true)),
        }
    }
    points.sort_by(|x, y| x.0.cmp(&y.0));
    points.dedup_by(|x, y| {
        if x.0 == y.0 {
            y.1 |= x.1;
            true
        } else {
            false
        }
    });
    points
        .into_iter()
        .map(|(b, breakpoint)| {
            let spec = base.with_b(b.clone())?;
            Ok(SweepRow { r_d: r_d(&spec), r_b: r_b(&spec), srev: srev(&spec), flags: indicator_flags(&spec), b, breakpoint })
        })
        .collect()
}

/// Three interior points of each linearity interval plus the breakpoints,
/// all strictly above `a`.
///
/// Bounded intervals get their quarter points; `[v3, inf)` gets
/// `v3 + k w` for `k = 1, 2, 3` with `w = v3 - a` (or 1 when `a = 0`).
/// When `a = 0` the first three intervals are empty and only the
/// unbounded interval contributes.
pub fn sample_b_values(p: &Rational, a: &Rational) -> Vec<Rational> {
    let v = breakpoints_for(p, a);
    let mut values = Vec::new();
    let bounded = [(a, &v.v1), (&v.v1, &v.v2), (&v.v2, &v.v3)];
    for (lo, hi) in bounded {
        if lo < hi {
            for k in 1..=3 {
                values.push(lo + (hi - lo) * Rational::new(k.into(), 4.into()));
            }
        }
    }
    let step = if a.is_zero() { Rational::one() } else { &v.v3 - a };
    for k in 1..=3 {
        values.push(&v.v3 + &step * int(k));
    }
    for point in v.as_array() {
        if point > a {
            values.push(point.clone());
        }
    }
    values.sort();
    values.dedup();
    values
}

/// Every instance of the certification grid for the given buyer counts:
/// `p` in {1/4, 1/3, 1/2, 2/3, 3/4}, `a` in {0, 1}, `b` from [`sample_b_values`].
pub fn certification_grid(buyer_counts: &[usize]) -> Vec<AuctionSpec> {
    let ps = [(1, 4), (1, 3), (1, 2), (2, 3), (3, 4)].map(|(x, y)| Rational::new(x.into(), y.into()));
    let mut specs = Vec::new();
    for &n in buyer_counts {
        for p in &ps {
            for a in [int(0), int(1)] {
                for b in sample_b_values(p, &a) {
                    specs.push(AuctionSpec::new(n, p.clone(), a.clone(), b).expect("grid values are valid"));
                }
            }
        }
    }
    specs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn spec(n: usize, p: Rational, a: Rational, b: Rational) -> AuctionSpec {
        AuctionSpec::new(n, p, a, b).unwrap()
    }

    fn base_instance() -> AuctionSpec {
        spec(2, rat(1, 2), int(1), int(2))
    }

    #[test]
    fn breakpoint_examples() {
        let v = breakpoints(&base_instance());
        assert_eq!((v.v1, v.v2, v.v3), (rat(5, 3), int(2), int(3)));
        let zero = breakpoints(&spec(2, rat(1, 2), int(0), int(2)));
        assert_eq!((zero.v1, zero.v2, zero.v3), (int(0), int(0), int(0)));
        let third = breakpoints(&spec(2, rat(1, 3), int(1), int(2)));
        assert_eq!((third.v1, third.v2, third.v3), (rat(5, 4), rat(3, 2), int(2)));
    }

    #[test]
    fn example_one_revenues() {
        let s = base_instance();
        assert_eq!(r_d(&s), rat(25, 8));
        assert_eq!(r_b(&s), rat(51, 16));
        assert_eq!(srev(&s), int(3));
        assert_eq!(grand_bundle_rev(&s), rat(45, 16));
        assert_eq!((r_b(&s) - r_d(&s)) / r_d(&s), rat(1, 50));
    }

    #[test]
    fn example_one_segments() {
        // r_D = (3 + 11b)/8 on [2,3); r_B = (9 + 21b)/16 on [5/3,3)
        for b in [int(2), rat(9, 4), rat(5, 2), rat(29, 10)] {
            let s = spec(2, rat(1, 2), int(1), b.clone());
            assert_eq!(r_d(&s), (int(3) + int(11) * &b) / int(8));
        }
        for b in [rat(5, 3), int(2), rat(7, 3), rat(29, 10)] {
            let s = spec(2, rat(1, 2), int(1), b.clone());
            assert_eq!(r_b(&s), (int(9) + int(21) * &b) / int(16));
        }
    }

    #[test]
    fn below_v1_values() {
        let s = spec(2, rat(1, 2), int(1), rat(3, 2));
        assert_eq!(r_d(&s), rat(81, 32));
        assert_eq!(r_b(&s), rat(41, 16));
        assert_eq!(srev(&s), rat(5, 2));
    }

    #[test]
    fn grand_bundle_three_prices() {
        // (2,1/2,1,3/2): prices 2, 5/2, 3 with reach 1, 15/16, 7/16
        let s = spec(2, rat(1, 2), int(1), rat(3, 2));
        let by_hand = [int(2), rat(5, 2) * rat(15, 16), int(3) * rat(7, 16)].into_iter().max().unwrap();
        assert_eq!(grand_bundle_rev(&s), by_hand);
        // a = 0: the zero price earns nothing
        let z = spec(2, rat(1, 2), int(0), int(2));
        assert_eq!(grand_bundle_rev(&z), (int(2) * rat(15, 16)).max(int(4) * rat(7, 16)));
    }

    #[test]
    fn above_v3_everything_collapses() {
        for b in [int(3), int(4), int(10)] {
            let s = spec(2, rat(1, 2), int(1), b);
            let report = revenue_report(&s);
            assert_eq!(report.r_d, report.s_b);
            assert_eq!(report.r_b, report.s_b);
            assert_eq!(report.srev, report.s_b);
        }
    }

    #[test]
    fn strict_gaps_below_v3() {
        for b in [rat(11, 10), rat(3, 2), rat(5, 3), int(2), rat(5, 2), rat(299, 100)] {
            let report = revenue_report(&spec(2, rat(1, 2), int(1), b));
            assert!(report.r_b > report.r_d);
            assert!(report.r_d > report.srev);
        }
    }

    #[test]
    fn large_b_sells_at_b() {
        let s = spec(3, rat(1, 2), int(1), int(1000));
        let one = Rational::one();
        assert_eq!(srev(&s), int(2) * (&one - pow(&rat(1, 2), 3)) * int(1000));
    }

    #[test]
    fn flags_are_ordered() {
        for b in sample_b_values(&rat(1, 3), &int(1)) {
            let f = indicator_flags(&spec(2, rat(1, 3), int(1), b));
            assert!(f.alpha <= f.gamma && f.gamma <= f.beta);
        }
        // strict at the breakpoint itself
        let at_v1 = indicator_flags(&spec(2, rat(1, 2), int(1), rat(5, 3)));
        assert!(!at_v1.alpha && at_v1.gamma && at_v1.beta);
    }

    #[test]
    fn intervals() {
        let cases = [(rat(3, 2), BInterval::I1), (rat(5, 3), BInterval::I2), (int(2), BInterval::I3), (int(3), BInterval::I4)];
        for (b, expected) in cases {
            assert_eq!(b_interval(&spec(2, rat(1, 2), int(1), b)), expected);
        }
        assert_eq!(b_interval(&spec(2, rat(1, 2), int(0), rat(1, 10))), BInterval::I4);
    }

    #[test]
    fn sweep_includes_breakpoints() {
        let rows = sweep_b(2, &rat(1, 2), &int(1), &int(1), &int(4), 60).unwrap();
        // 60 grid points above a=1; v2 and v3 lie on the 1/20 grid, v1 = 5/3 does not
        assert_eq!(rows.len(), 61);
        assert_eq!(rows.iter().filter(|r| r.breakpoint).count(), 3);
        let single = sweep_b(2, &rat(1, 2), &int(1), &rat(11, 10), &rat(12, 10), 1).unwrap();
        assert_eq!(single.len(), 5);
        assert!(sweep_b(2, &rat(1, 2), &int(1), &rat(1, 2), &int(4), 10).is_err());
        assert!(sweep_b(2, &rat(1, 2), &int(1), &int(2), &int(2), 10).is_err());
    }

    #[test]
    fn sample_values_cover_each_interval() {
        let values = sample_b_values(&rat(1, 2), &int(1));
        assert_eq!(values.len(), 15);
        for interval in [BInterval::I1, BInterval::I2, BInterval::I3, BInterval::I4] {
            let hits = values.iter().filter(|b| b_interval(&spec(2, rat(1, 2), int(1), (*b).clone())) == interval).count();
            // breakpoints open I2, I3, I4
            let expected = if interval == BInterval::I1 { 3 } else { 4 };
            assert_eq!(hits, expected, "{interval:?}");
        }
        assert_eq!(sample_b_values(&rat(1, 2), &int(0)), vec![int(1), int(2), int(3)]);
        assert_eq!(certification_grid(&[2]).len(), 5 * (15 + 3));
    }
}
