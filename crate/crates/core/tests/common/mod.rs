//! Independent oracles shared by the integration tests and the acceptance
//! runner. Everything is recomputed from the instance parameters rather than
//! taken from the library's own formula code.
#![allow(dead_code)]

use dicbic::audit::{interim, qu_statistics};
use dicbic::closed_form::indicator_flags;
use dicbic::mechanism::{build_m_b, build_m_d, Mechanism};
use dicbic::model::AuctionSpec;
use dicbic::rational::{int, pow};
use dicbic::Rational;
use num_traits::{One, Zero};

pub fn flag(on: bool) -> Rational {
    if on {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// `(p0, p1, p2)`: masses of the all-low profile, the profiles with one
/// high entry, and the remaining profiles with exactly one cheap item.
pub fn class_masses(n: usize, p: &Rational) -> [Rational; 3] {
    let q = Rational::one() - p;
    let nn = int(n as i64);
    let p0 = pow(p, 2 * n);
    let p1 = int(2) * &nn * pow(p, 2 * n - 1) * &q;
    let p2 = int(2) * pow(p, n) * (Rational::one() - pow(p, n) - nn * pow(p, n - 1) * q);
    [p0, p1, p2]
}

fn expect(what: &str, got: &Rational, want: &Rational) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

/// Q/U equalities of the upper-bound argument for one mechanism.
/// `bayesian` selects the halved `U(S'_2)` and the `beta` weight on `Q(S_2)`.
pub fn check_qu(spec: &AuctionSpec, mech: &Mechanism, bayesian: bool) -> Result<(), String> {
    let stats = qu_statistics(mech).map_err(|e| e.to_string())?;
    let f = indicator_flags(spec);
    let [p0, p1, p2] = class_masses(spec.n(), spec.p());
    let gap = spec.b() - spec.a();
    let r = (Rational::one() - spec.p()) / spec.p();
    let s2_flag = if bayesian { f.beta } else { f.gamma };
    let tag = if bayesian { "M_B" } else { "M_D" };
    if !stats.primes_well_formed {
        return Err(format!("{tag}: S'_1 / S'_2 not disjoint or contain cheap items"));
    }
    expect(&format!("{tag} Q(S0)"), &stats.s0.q, &(int(2) * &p0 * flag(f.alpha)))?;
    expect(&format!("{tag} Q(S1)"), &stats.s1.q, &(&p1 * flag(f.beta)))?;
    expect(&format!("{tag} Q(S2)"), &stats.s2.q, &(&p2 * flag(s2_flag)))?;
    expect(&format!("{tag} U(S1)"), &stats.s1.u, &(&gap * &r * &stats.s0.q))?;
    let u_s1p = &gap * (&r * &r * &stats.s0.q + &r * &stats.s1.q) / int(2);
    expect(&format!("{tag} U(S'1)"), &stats.s1_prime.u, &u_s1p)?;
    let halve = if bayesian { int(2) } else { int(1) };
    expect(&format!("{tag} U(S'2)"), &stats.s2_prime.u, &(&gap * &r * &stats.s2.q / halve))?;
    Ok(())
}

pub fn check_qu_identities(spec: &AuctionSpec) -> Result<(), String> {
    check_qu(spec, &build_m_d(spec), false)?;
    check_qu(spec, &build_m_b(spec), true)
}

/// Interim monotonicity, the two adjacent-type utility equalities and the
/// item-ordering inequalities for the Bayesian mechanism.
pub fn check_interim_facts(spec: &AuctionSpec) -> Result<(), String> {
    const AA: usize = 0;
    const AB: usize = 1;
    const BA: usize = 2;
    const BB: usize = 3;
    let table = interim(&build_m_b(spec));
    let gap = spec.b() - spec.a();
    for i in 0..spec.n() {
        let q = |t: usize| table.allocation(i, t).clone();
        let u = |t: usize| table.utility(i, t).clone();
        for (hi, lo) in [(BB, AB), (BB, BA), (AB, AA), (BA, AA), (BB, AA)] {
            let (qh, ql) = (q(hi), q(lo));
            if qh[0] < ql[0] || qh[1] < ql[1] {
                return Err(format!("buyer {i}: interim allocation not monotone between types {hi} and {lo}"));
            }
        }
        expect(&format!("buyer {i} u(ab)-u(aa)"), &(u(AB) - u(AA)), &(&gap * &q(AA)[1]))?;
        expect(&format!("buyer {i} u(bb)-u(ab)"), &(u(BB) - u(AB)), &(&gap * &q(AB)[0]))?;
        if q(AB)[0] > q(AB)[1] {
            return Err(format!("buyer {i}: q1(ab) > q2(ab)"));
        }
        if q(BA)[0] < q(BA)[1] {
            return Err(format!("buyer {i}: q1(ba) < q2(ba)"));
        }
    }
    Ok(())
}
