//! Exhaustive incentive audits, the dominant-strategy constraint the
//! Bayesian mechanism breaks, and a deliberately broken mechanism.
//!
//!     cargo run --example audit

use dicbic::audit::{bayesian_witness_key, check_bic, check_bir, check_dic, check_ir, replay};
use dicbic::mechanism::{build_m_b, build_m_d};
use dicbic::model::AuctionSpec;
use dicbic::rational::{int, rat};

fn main() -> dicbic::Result<()> {
    let spec = AuctionSpec::new(3, rat(1, 2), int(1), int(2))?;
    let (md, mb) = (build_m_d(&spec), build_m_b(&spec));
    for (name, report) in [
        ("M_D IR", check_ir(&md)),
        ("M_D DIC", check_dic(&md)),
        ("M_B IR", check_ir(&mb)),
        ("M_B BIC", check_bic(&mb)),
        ("M_B BIR", check_bir(&mb)),
        ("M_B DIC", check_dic(&mb)),
    ] {
        println!("{name:<8} passed={} checked={} violations={}", report.passed, report.checked, report.violations.len());
    }

    let key = bayesian_witness_key(spec.n());
    let (lhs, rhs) = replay(&mb, &key);
    println!("witness: truthful utility {lhs} < deviation payoff {rhs}");

    // an extra rent at a single profile is caught by the participation audit
    let mut broken = md.clone();
    broken.set_utility(0, 0, rat(-1, 10));
    for v in check_ir(&broken).violations {
        println!("planted IR violation: buyer {} type {} others {:?}: {} < {}", v.buyer, v.true_type, v.others, v.lhs, v.rhs);
    }
    Ok(())
}
