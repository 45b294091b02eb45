//! Closed-form revenues for one instance, then across the four `b` regimes.
//!
//!     cargo run --example formulas

use dicbic::closed_form::{b_interval, revenue_report};
use dicbic::model::AuctionSpec;
use dicbic::rational::{int, rat, Exact};

fn main() -> dicbic::Result<()> {
    let spec = AuctionSpec::new(2, rat(1, 2), int(1), int(2))?;
    let report = revenue_report(&spec);
    println!("{spec}");
    println!("  dominant-strategy optimum  {}", Exact(&report.r_d));
    println!("  Bayesian optimum           {}", Exact(&report.r_b));
    println!("  separate selling           {}", Exact(&report.srev));
    println!("  grand bundle               {}", Exact(&report.bundle_rev));
    let bp = &report.breakpoints;
    println!("  breakpoints v1={} v2={} v3={}", bp.v1, bp.v2, bp.v3);

    println!();
    for b in [rat(6, 5), rat(7, 4), rat(5, 2), int(4)] {
        let s = spec.with_b(b)?;
        let r = revenue_report(&s);
        println!("b={:<4} {:?}  r_D={:<8} r_B={:<8} SREV={}", s.b(), b_interval(&s), r.r_d, r.r_b, r.srev);
    }
    Ok(())
}
