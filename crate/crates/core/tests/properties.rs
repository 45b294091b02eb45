use dicbic::audit::{check_bic, check_bir, check_dic, check_ir, expected_revenue};
use dicbic::closed_form::{breakpoints, indicator_flags, r_b, r_d, sell_at_b, srev};
use dicbic::lp::{certify_with, IncentiveModel, LpOptions, build_lp, solve_auction};
use dicbic::mechanism::{build_m_b, build_m_d};
use dicbic::model::AuctionSpec;
use dicbic::rational::rat;
use dicbic::Rational;
use proptest::prelude::*;

fn instance(max_n: usize) -> impl Strategy<Value = AuctionSpec> {
    (2..=max_n, 2i64..=12, 0i64..=6, 1i64..=4, 1i64..=40, 1i64..=8).prop_flat_map(move |(n, m, a_num, a_den, d_num, d_den)| {
        (1..m).prop_map(move |k| {
            let a = rat(a_num, a_den);
            let b = &a + rat(d_num, d_den);
            AuctionSpec::new(n, rat(k, m), a, b).unwrap()
        })
    })
}

fn scaled(spec: &AuctionSpec, k: &Rational) -> AuctionSpec {
    AuctionSpec::new(spec.n(), spec.p().clone(), spec.a() * k, spec.b() * k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn revenue_ordering(s in instance(8)) {
        let (d, b, sr, sb) = (r_d(&s), r_b(&s), srev(&s), sell_at_b(&s));
        prop_assert!(b >= d && d >= sr && sr >= sb, "{}", s);
    }

    #[test]
    fn flags_follow_the_ordered_breakpoints(s in instance(8)) {
        let bp = breakpoints(&s);
        prop_assert!(s.a() <= &bp.v1 && bp.v1 <= bp.v2 && bp.v2 <= bp.v3);
        let f = indicator_flags(&s);
        prop_assert_eq!(f.alpha, s.b() < &bp.v1);
        prop_assert_eq!(f.gamma, s.b() < &bp.v2);
        prop_assert_eq!(f.beta, s.b() < &bp.v3);
        prop_assert!(!f.alpha || f.gamma);
        prop_assert!(!f.gamma || f.beta);
    }

    #[test]
    fn formulas_merge_from_the_last_breakpoint(s in instance(8)) {
        if !indicator_flags(&s).beta {
            prop_assert_eq!(r_d(&s), r_b(&s));
            prop_assert_eq!(r_d(&s), srev(&s));
        } else {
            prop_assert!(r_b(&s) > r_d(&s));
        }
    }

    #[test]
    fn revenues_scale_with_values(s in instance(6), k in 1i64..20, m in 1i64..7) {
        let k = rat(k, m);
        let t = scaled(&s, &k);
        prop_assert_eq!(r_d(&t), r_d(&s) * &k);
        prop_assert_eq!(r_b(&t), r_b(&s) * &k);
        prop_assert_eq!(srev(&t), srev(&s) * &k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mechanisms_audit_clean_and_hit_the_formulas(s in instance(3)) {
        let (md, mb) = (build_m_d(&s), build_m_b(&s));
        prop_assert_eq!(expected_revenue(&md), r_d(&s));
        prop_assert_eq!(expected_revenue(&mb), r_b(&s));
        prop_assert!(check_ir(&md).passed && check_dic(&md).passed);
        prop_assert!(check_ir(&mb).passed && check_bic(&mb).passed && check_bir(&mb).passed);
    }

    #[test]
    fn lp_oracle_agrees_with_the_formulas(s in instance(2)) {
        let c = certify_with(&s, &LpOptions::default()).unwrap();
        prop_assert!(c.passed(), "{:?}", c);
    }

    #[test]
    fn symmetry_reduction_keeps_the_optimum(s in instance(2)) {
        for model in [IncentiveModel::Dominant, IncentiveModel::Bayesian] {
            let full = build_lp(&s, model, &LpOptions::default()).unwrap();
            let reduced = full.symmetrized();
            prop_assert!(reduced.program.num_variables() < full.program.num_variables());
            let options = LpOptions::default().solver;
            prop_assert_eq!(solve_auction(&full, options).unwrap().0.optimum, solve_auction(&reduced, options).unwrap().0.optimum);
        }
    }
}
