//! Revenue curves in `b` as CSV on stdout, ready for plotting.
//!
//!     cargo run --example sweep > curves.csv

use dicbic::closed_form::sweep_b;
use dicbic::rational::{int, to_decimal};

fn main() -> dicbic::Result<()> {
    let rows = sweep_b(2, &dicbic::rational::rat(1, 2), &int(1), &int(1), &int(4), 60)?;
    println!("b,r_D,r_B,SREV,breakpoint");
    for r in rows {
        println!("{},{},{},{},{}", to_decimal(&r.b), to_decimal(&r.r_d), to_decimal(&r.r_b), to_decimal(&r.srev), r.breakpoint);
    }
    Ok(())
}
