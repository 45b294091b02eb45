//! Certifies the closed-form optima with the exact LP oracle and recovers an
//! optimal mechanism from the dominant-strategy program.
//!
//!     cargo run --release --example certify [-- N]

use dicbic::audit::{check_dic, check_ir};
use dicbic::lp::{build_dic_lp, certify_revenues, solve_auction, SolverOptions};
use dicbic::model::AuctionSpec;
use dicbic::rational::{int, rat};

fn main() -> dicbic::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    for b in [rat(5, 4), rat(7, 4), rat(5, 2), int(4)] {
        let spec = AuctionSpec::new(n, rat(1, 2), int(1), b)?;
        let c = certify_revenues(&spec)?;
        println!("{spec}: lp_D={} (formula {}) lp_B={} (formula {}) -> {}", c.lp_d, c.r_d, c.lp_b, c.r_b, if c.passed() { "certified" } else { "MISMATCH" });
    }

    let spec = AuctionSpec::new(n, rat(1, 2), int(1), int(2))?;
    let built = build_dic_lp(&spec)?;
    let (solution, mech) = solve_auction(&built, SolverOptions::default())?;
    println!(
        "dominant LP: {} variables, {} rows, {} pivots, optimum {}; extracted mechanism IR={} DIC={}",
        built.program.num_variables(),
        built.program.num_constraints(),
        solution.pivots,
        solution.optimum,
        check_ir(&mech).passed,
        check_dic(&mech).passed
    );
    Ok(())
}
