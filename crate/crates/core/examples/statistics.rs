//! Cheap-item allocation mass `Q` and utility mass `U` over the profile
//! classes used in the upper-bound argument, next to the class masses.
//!
//!     cargo run --example statistics

use dicbic::audit::{qu_statistics, QuEntry};
use dicbic::mechanism::{build_m_b, build_m_d};
use dicbic::model::{class_probabilities, AuctionSpec};
use dicbic::rational::{int, rat};

fn show(name: &str, e: &QuEntry) {
    println!("  {name:<4} profiles={:<3} Q={:<10} U={}", e.profiles, e.q, e.u);
}

fn main() -> dicbic::Result<()> {
    let spec = AuctionSpec::new(3, rat(1, 2), int(1), rat(3, 2))?;
    let masses = class_probabilities(&spec);
    println!("{spec}: p0={} p1={} p2={}", masses.p0, masses.p1, masses.p2);
    for mech in [build_m_d(&spec), build_m_b(&spec)] {
        let s = qu_statistics(&mech)?;
        println!("{:?}", mech.label());
        show("S0", &s.s0);
        show("S1", &s.s1);
        show("S2", &s.s2);
        show("S'1", &s.s1_prime);
        show("S'2", &s.s2_prime);
    }
    Ok(())
}
