//! Builds both optimal mechanisms and prints their per-profile tables.
//!
//!     cargo run --example mechanisms [-- --json]

use dicbic::audit::expected_revenue;
use dicbic::mechanism::{build_m_b, build_m_d};
use dicbic::model::{AuctionSpec, TypeProfile};
use dicbic::rational::{int, rat};

fn main() -> dicbic::Result<()> {
    let spec = AuctionSpec::new(2, rat(1, 2), int(1), int(2))?;
    let json = std::env::args().any(|a| a == "--json");
    for mech in [build_m_d(&spec), build_m_b(&spec)] {
        if json {
            println!("{}", serde_json::to_string_pretty(&mech.to_table())?);
            continue;
        }
        println!("{:?}: expected revenue {}", mech.label(), expected_revenue(&mech));
        for k in 0..mech.num_profiles() {
            let profile = TypeProfile::from_index(spec.n(), k);
            let cells: Vec<String> = (0..spec.n())
                .map(|i| {
                    let q = mech.allocation(k, i);
                    format!("q=({},{}) u={} s={}", q[0], q[1], mech.utility(k, i), mech.payment(k, i))
                })
                .collect();
            println!("  {profile}  {}", cells.join(" | "));
        }
    }
    Ok(())
}
