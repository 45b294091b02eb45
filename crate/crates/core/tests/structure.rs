mod common;

use dicbic::audit::{check_bic, check_bir, check_dic, check_ir, expected_revenue, qu_statistics};
use dicbic::closed_form::{certification_grid, r_b, r_d, breakpoints};
use dicbic::mechanism::{build_m_b, build_m_d};
use dicbic::model::{class_masses_by_enumeration, AuctionSpec};
use dicbic::rational::{int, rat};

fn spec(n: usize, p: (i64, i64), a: i64, b: (i64, i64)) -> AuctionSpec {
    AuctionSpec::new(n, rat(p.0, p.1), int(a), rat(b.0, b.1)).unwrap()
}

#[test]
fn class_masses_match_enumeration() {
    for n in 2..=4 {
        for p in [rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3), rat(3, 4), rat(7, 9)] {
            let s = AuctionSpec::new(n, p.clone(), int(1), int(2)).unwrap();
            let m = class_masses_by_enumeration(&s).unwrap();
            let [p0, p1, p2] = common::class_masses(n, &p);
            assert_eq!((m.p0, m.p1, m.p2), (p0, p1, p2), "n={n} p={p}");
        }
    }
}

#[test]
fn qu_equalities_on_the_grid() {
    for s in certification_grid(&[2, 3]) {
        common::check_qu_identities(&s).unwrap_or_else(|e| panic!("{s}: {e}"));
    }
}

#[test]
fn qu_equalities_at_four_buyers() {
    for b in [(5, 4), (3, 2), (2, 1), (4, 1)] {
        let s = spec(4, (1, 2), 1, b);
        common::check_qu_identities(&s).unwrap_or_else(|e| panic!("{s}: {e}"));
    }
}

#[test]
fn dominant_cheap_mass_at_three_halves() {
    // alpha = 1 here, so the all-low profile carries cheap mass 2 p0 = 2/16
    let s = spec(2, (1, 2), 1, (3, 2));
    assert_eq!(qu_statistics(&build_m_d(&s)).unwrap().s0.q, rat(1, 8));
}

#[test]
fn interim_facts_for_the_bayesian_mechanism() {
    for s in certification_grid(&[2, 3]) {
        common::check_interim_facts(&s).unwrap_or_else(|e| panic!("{s}: {e}"));
    }
}

#[test]
fn mechanisms_are_feasible_and_optimal_on_the_grid() {
    for s in certification_grid(&[2, 3]) {
        let (md, mb) = (build_m_d(&s), build_m_b(&s));
        assert_eq!(expected_revenue(&md), r_d(&s), "{s}");
        assert_eq!(expected_revenue(&mb), r_b(&s), "{s}");
        assert!(check_ir(&md).passed && check_dic(&md).passed, "{s}");
        assert!(check_ir(&mb).passed && check_bic(&mb).passed && check_bir(&mb).passed, "{s}");
    }
}

#[test]
fn mechanisms_coincide_from_the_last_breakpoint() {
    for n in [2, 3] {
        let v3 = breakpoints(&spec(n, (1, 2), 1, (2, 1))).v3;
        for b in [v3.clone(), &v3 + rat(1, 3), &v3 * int(2)] {
            let s = AuctionSpec::new(n, rat(1, 2), int(1), b).unwrap();
            assert_eq!(build_m_d(&s).to_table().profiles, build_m_b(&s).to_table().profiles);
        }
    }
}
