//! Discretised probes of the continuous family with item values uniform on
//! `[a, a+1] ∪ [λa, λa+1]`: LP optima over midpoint grids, compared with
//! `a` times the two-point formulas at `(n, 1/2, 1, λ)`.
//!
//! Everything here is exploratory. Band checks against the continuous
//! bounds are indicative only, since a grid optimum is not the continuous
//! optimum.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::closed_form::{r_b, r_d};
use crate::error::{Error, Result};
use crate::lp::{lp_for_space, solve_auction, IncentiveModel, LpOptions};
use crate::model::{AuctionSpec, TypeSpace};
use crate::rational::{int, rat, ratio_str, Rational};

/// Name of the discretisation rule, echoed in probe output.
pub const DISCRETIZATION: &str = "midpoint";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContinuousSpec {
    n: usize,
    #[serde(with = "ratio_str")]
    a: Rational,
    #[serde(with = "ratio_str")]
    lambda: Rational,
    grid_m: usize,
}

impl ContinuousSpec {
    pub fn new(n: usize, a: Rational, lambda: Rational, grid_m: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpec("n must be at least 2".into()));
        }
        if lambda <= Rational::one() {
            return Err(Error::InvalidSpec("lambda must exceed 1".into()));
        }
        // the two intervals must not overlap: λa > a + 1
        if a <= (&lambda - Rational::one()).recip() {
            return Err(Error::InvalidSpec("a must exceed 1/(lambda-1)".into()));
        }
        if grid_m == 0 {
            return Err(Error::InvalidSpec("grid_m must be at least 1".into()));
        }
        Ok(Self { n, a, lambda, grid_m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn grid_m(&self) -> usize {
        self.grid_m
    }

    /// The two-point instance `(n, 1/2, 1, λ)` whose formulas scale with `a`.
    pub fn reference_spec(&self) -> AuctionSpec {
        AuctionSpec::new(self.n, rat(1, 2), int(1), self.lambda.clone()).expect("λ > 1 gives a valid instance")
    }

    /// The two-point instance induced by a one-point-per-interval grid.
    pub fn collapsed_spec(&self) -> AuctionSpec {
        let half = rat(1, 2);
        AuctionSpec::new(self.n, half.clone(), &self.a + &half, &self.lambda * &self.a + half)
            .expect("separated intervals give a valid instance")
    }
}

/// LP options for grid probes: symmetry reduction on, everything else
/// default. The reduced and full programs have the same optimum.
pub fn default_lp_options() -> LpOptions {
    LpOptions { symmetrize: true, ..LpOptions::default() }
}

/// Equal-weight atoms at the midpoints of `grid_m` equal cells of each
/// interval, ascending.
pub fn discretize(spec: &ContinuousSpec) -> Vec<(Rational, Rational)> {
    let m = spec.grid_m as i64;
    let weight = rat(1, 2 * m);
    let high = &spec.lambda * &spec.a;
    [spec.a.clone(), high]
        .iter()
        .flat_map(|start| (0..m).map(move |s| start + rat(2 * s + 1, 2 * m)))
        .map(|x| (x, weight.clone()))
        .collect()
}

pub fn grid_type_space(spec: &ContinuousSpec) -> Result<TypeSpace> {
    TypeSpace::iid_items(spec.n, &discretize(spec))
}

/// Exact LP optimum over the discretised type space.
pub fn lp_over_grid(spec: &ContinuousSpec, model: IncentiveModel, options: &LpOptions) -> Result<Rational> {
    let space = grid_type_space(spec)?;
    let mut built = lp_for_space(&space, model, options.cap)?;
    if options.symmetrize {
        built = built.symmetrized();
    }
    Ok(solve_auction(&built, options.solver)?.0.optimum)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeRow {
    #[serde(with = "ratio_str")]
    pub a: Rational,
    pub grid_m: usize,
    #[serde(with = "ratio_str")]
    pub lp_d: Rational,
    #[serde(with = "ratio_str")]
    pub lp_b: Rational,
    #[serde(with = "ratio_str")]
    pub ratio_d: Rational,
    #[serde(with = "ratio_str")]
    pub ratio_b: Rational,
    /// `(lp_b - lp_d) / lp_d`
    #[serde(with = "ratio_str")]
    pub gap: Rational,
    #[serde(with = "ratio_str")]
    pub reference_d: Rational,
    #[serde(with = "ratio_str")]
    pub reference_b: Rational,
    /// Indicative membership in `[r_D a, r_D a + 5/4]` and
    /// `[r_B a, r_B a + 3/2]`; only defined for `n = 2, λ = 2`.
    pub within_band_d: Option<bool>,
    pub within_band_b: Option<bool>,
}

fn in_band(value: &Rational, low: Rational, width: Rational) -> bool {
    value >= &low && value <= &(low + width)
}

pub fn probe(spec: &ContinuousSpec, options: &LpOptions) -> Result<ProbeRow> {
    let lp_d = lp_over_grid(spec, IncentiveModel::Dominant, options)?;
    let lp_b = lp_over_grid(spec, IncentiveModel::Bayesian, options)?;
    let reference = spec.reference_spec();
    let (reference_d, reference_b) = (r_d(&reference), r_b(&reference));
    let banded = spec.n == 2 && spec.lambda == int(2);
    let a = &spec.a;
    let within_band_d = banded.then(|| in_band(&lp_d, &reference_d * a, rat(5, 4)));
    let within_band_b = banded.then(|| in_band(&lp_b, &reference_b * a, rat(3, 2)));
    let gap = if lp_d.is_positive() { (&lp_b - &lp_d) / &lp_d } else { Rational::zero() };
    Ok(ProbeRow {
        a: a.clone(),
        grid_m: spec.grid_m,
        ratio_d: &lp_d / a,
        ratio_b: &lp_b / a,
        gap,
        lp_d,
        lp_b,
        reference_d,
        reference_b,
        within_band_d,
        within_band_b,
    })
}

/// One probe per `a`, in the given order.
pub fn probe_series(
    n: usize,
    lambda: &Rational,
    a_values: &[Rational],
    grid_m: usize,
    options: &LpOptions,
) -> Result<Vec<ProbeRow>> {
    a_values
        .iter()
        .map(|a| probe(&ContinuousSpec::new(n, a.clone(), lambda.clone(), grid_m)?, options))
        .collect()
}
