//! LP optima over midpoint grids of the continuous two-interval family,
//! against `a` times the two-point reference formulas.
//!
//!     cargo run --release --example continuous [-- GRID_M]

use dicbic::continuous::{default_lp_options, probe_series, DISCRETIZATION};
use dicbic::rational::{int, to_decimal, Exact};

fn main() -> dicbic::Result<()> {
    let grid_m: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let a_values = [int(10), int(20), int(40)];
    println!("discretization: {DISCRETIZATION}, grid_m = {grid_m}");
    for row in probe_series(2, &int(2), &a_values, grid_m, &default_lp_options())? {
        println!(
            "a={:<3} lp_D={} lp_B={} lp_D/a={} lp_B/a={} gap={}",
            row.a,
            Exact(&row.lp_d),
            Exact(&row.lp_b),
            to_decimal(&row.ratio_d),
            to_decimal(&row.ratio_b),
            to_decimal(&row.gap)
        );
    }
    Ok(())
}
