//! Writes the dominant-strategy and Bayesian programs in LP text format so
//! an external solver can cross-check them.
//!
//!     cargo run --example lp_export -- OUT_DIR

use dicbic::lp::{build_bic_lp, build_dic_lp};
use dicbic::model::AuctionSpec;
use dicbic::rational::{int, rat};

fn main() -> dicbic::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "lp-out".into());
    std::fs::create_dir_all(&dir)?;
    let spec = AuctionSpec::new(2, rat(1, 2), int(1), int(2))?;
    for (name, built) in [("dic.lp", build_dic_lp(&spec)?), ("bic.lp", build_bic_lp(&spec)?)] {
        let path = std::path::Path::new(&dir).join(name);
        std::fs::write(&path, built.program.to_lp_format())?;
        println!("{}: {} variables, {} constraints", path.display(), built.program.num_variables(), built.program.num_constraints());
    }
    Ok(())
}
