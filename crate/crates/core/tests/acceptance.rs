//! Acceptance runner: one PASS/FAIL line per criterion, exact comparisons
//! throughout. Exits nonzero if any criterion fails.

mod common;

use std::time::Instant;

use dicbic::audit::{bayesian_witness_key, check_bic, check_bir, check_dic, check_ir, expected_revenue};
use dicbic::cli;
use dicbic::closed_form::{breakpoints, certification_grid, r_b, r_d};
use dicbic::continuous::{default_lp_options, lp_over_grid, ContinuousSpec};
use dicbic::lp::{certify_revenues, IncentiveModel};
use dicbic::mechanism::{build_m_b, build_m_d};
use dicbic::model::{class_masses_by_enumeration, AuctionSpec};
use dicbic::rational::{int, parse_rational, rat};
use dicbic::Rational;
use num_traits::Signed;

type Outcome = Result<String, String>;

fn cli_output(args: &[&str]) -> Result<String, String> {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(std::iter::once("dicbic").chain(args.iter().copied()), &mut out, &mut err);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    Ok(String::from_utf8(out).expect("utf-8 output"))
}

fn exact(text: &serde_json::Value) -> Rational {
    parse_rational(text.as_str().expect("rational string"), false).expect("rational")
}

fn example_report() -> Result<serde_json::Value, String> {
    let out = cli_output(&["formulas", "--n", "2", "--p", "1/2", "--a", "1", "--b", "2", "--format", "json"])?;
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let v = example_report()?;
    let r = &v["report"];
    let got = [exact(&r["r_d"]), exact(&r["r_b"]), exact(&r["srev"]), exact(&r["bundle_rev"])];
    let want = [rat(25, 8), rat(51, 16), int(3), rat(45, 16)];
    if got == want {
        Ok("r_D=25/8 r_B=51/16 SREV=3 bundle=45/16".into())
    } else {
        Err(format!("got r_D={} r_B={} SREV={} bundle={}", got[0], got[1], got[2], got[3]))
    }
}

fn criterion_2() -> Outcome {
    let gap = exact(&example_report()?["relative_gap"]);
    let s = AuctionSpec::new(2, rat(1, 2), int(1), int(2)).unwrap();
    let direct = (r_b(&s) - r_d(&s)) / r_d(&s);
    if gap == rat(1, 50) && direct == gap {
        Ok("(r_B-r_D)/r_D = 1/50".into())
    } else {
        Err(format!("gap {gap}, direct {direct}"))
    }
}

fn grid() -> Vec<AuctionSpec> {
    certification_grid(&[2, 3])
}

fn criterion_3() -> Outcome {
    let specs = grid();
    let mut failures = Vec::new();
    for s in &specs {
        match certify_revenues(s) {
            Ok(c) if c.passed() => {}
            Ok(c) => failures.push(format!("{s}: lp_D={} r_D={} lp_B={} r_B={}", c.lp_d, c.r_d, c.lp_b, c.r_b)),
            Err(e) => failures.push(format!("{s}: {e}")),
        }
    }
    if failures.is_empty() {
        Ok(format!("{} specs, lp_D = r_D and lp_B = r_B on all", specs.len()))
    } else {
        Err(format!("{} of {} failed; first: {}", failures.len(), specs.len(), failures[0]))
    }
}

fn criterion_4() -> Outcome {
    let specs = grid();
    for s in &specs {
        let (md, mb) = (build_m_d(s), build_m_b(s));
        if expected_revenue(&md) != r_d(s) || expected_revenue(&mb) != r_b(s) {
            return Err(format!("{s}: revenue differs from the formula"));
        }
        if !(check_ir(&md).passed && check_dic(&md).passed) {
            return Err(format!("{s}: M_D fails IR/DIC"));
        }
        if !(check_ir(&mb).passed && check_bic(&mb).passed && check_bir(&mb).passed) {
            return Err(format!("{s}: M_B fails IR/BIC/BIR"));
        }
    }
    Ok(format!("{} specs, both mechanisms audited exhaustively", specs.len()))
}

fn criterion_5() -> Outcome {
    let (mut below, mut above) = (0, 0);
    for s in &grid() {
        let report = check_dic(&build_m_b(s));
        let key = bayesian_witness_key(s.n());
        if s.b() < &breakpoints(s).v3 {
            below += 1;
            if report.passed || !report.contains(key.buyer, key.true_type, key.reported_type, key.others) {
                return Err(format!("{s}: witness constraint not violated"));
            }
        } else {
            above += 1;
            if !report.passed {
                return Err(format!("{s}: DIC fails although b >= v3"));
            }
        }
    }
    Ok(format!("witness violated on {below} specs with b < v3; DIC holds on {above} with b >= v3"))
}

fn criterion_6() -> Outcome {
    let specs = grid();
    for s in &specs {
        common::check_qu_identities(s).map_err(|e| format!("{s}: {e}"))?;
        let m = class_masses_by_enumeration(s).map_err(|e| e.to_string())?;
        if [m.p0, m.p1, m.p2] != common::class_masses(s.n(), s.p()) {
            return Err(format!("{s}: class masses differ"));
        }
    }
    Ok(format!("Q/U equalities and class masses exact on {} specs", specs.len()))
}

fn criterion_7() -> Outcome {
    let csv = cli_output(&["sweep", "--n", "2", "--p", "1/2", "--a", "1", "--b-min", "1", "--b-max", "4", "--steps", "60"])?;
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let (mut on_segment, mut merged) = (0, 0);
    for record in reader.records() {
        let r = record.map_err(|e| e.to_string())?;
        let col = |num: usize| rat_from(&r[num], &r[num + 1]);
        let (b, rd, rb, sr) = (col(0), col(3), col(6), col(9));
        if b >= int(2) && b < int(3) {
            on_segment += 1;
            let line = rat(25, 8) + rat(11, 8) * (&b - int(2));
            if rd != line {
                return Err(format!("r_D({b}) = {rd}, off the slope-11/8 line ({line})"));
            }
        }
        if b >= int(3) {
            merged += 1;
            if rd != rb || rd != sr {
                return Err(format!("curves differ at b={b}: {rd}, {rb}, {sr}"));
            }
        }
    }
    if on_segment < 3 || merged < 3 {
        return Err(format!("too few sampled points ({on_segment} on [2,3), {merged} at b >= 3)"));
    }
    Ok(format!("r_D affine with slope 11/8 at {on_segment} points of [2,3); curves equal at {merged} points b >= 3"))
}

fn rat_from(num: &str, den: &str) -> Rational {
    parse_rational(&format!("{num}/{den}"), false).expect("csv rational")
}

fn criterion_8() -> Outcome {
    let options = default_lp_options();
    let mut cells = Vec::new();
    for m in [1, 2] {
        for a in [10, 20, 40] {
            let spec = ContinuousSpec::new(2, int(a), int(2), m).map_err(|e| e.to_string())?;
            let lp_d = lp_over_grid(&spec, IncentiveModel::Dominant, &options).map_err(|e| e.to_string())?;
            let lp_b = lp_over_grid(&spec, IncentiveModel::Bayesian, &options).map_err(|e| e.to_string())?;
            if lp_b <= lp_d {
                return Err(format!("a={a} m={m}: lp_B={lp_b} not above lp_D={lp_d}"));
            }
            if m == 1 {
                let c = certify_revenues(&spec.collapsed_spec()).map_err(|e| e.to_string())?;
                if c.lp_d != lp_d || c.lp_b != lp_b {
                    return Err(format!("a={a}: one-point grid differs from the collapsed two-point oracle"));
                }
            }
            cells.push((a, m, lp_d));
        }
    }
    for m in [1, 2] {
        let dev = |a: i64| {
            let lp = &cells.iter().find(|c| c.0 == a && c.1 == m).unwrap().2;
            (lp / int(a) - rat(25, 8)).abs()
        };
        if dev(40) > dev(10) {
            return Err(format!("m={m}: |lp_D/a - 25/8| grows from {} to {}", dev(10), dev(40)));
        }
    }
    Ok("lp_B > lp_D on 6 cells; |lp_D/a - 25/8| shrinks from a=10 to a=40; one-point grids match the two-point oracle".into())
}

fn criterion_9() -> Outcome {
    let specs = grid();
    for s in &specs {
        common::check_interim_facts(s).map_err(|e| format!("{s}: {e}"))?;
    }
    Ok(format!("interim monotonicity, equalities and inequalities exact on {} specs", specs.len()))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (k, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {k}: PASS ({secs:.2}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {k}: FAIL ({secs:.2}s) {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
