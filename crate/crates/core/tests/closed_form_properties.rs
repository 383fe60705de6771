use proptest::prelude::*;
use secrecy_core::closed_form::{self, outage};
use secrecy_core::{EavesdropperMode, Scheme, SystemConfig};

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Heterogeneous users, independent eavesdroppers with arbitrary gains.
fn arb_uncoordinated() -> impl Strategy<Value = SystemConfig> {
    (1usize..4, 1usize..4).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(0.1f64..5.0, m),
            prop::collection::vec(0.1f64..5.0, m),
            prop::collection::vec(prop::collection::vec(0.01f64..3.0, n), m),
            0.2f64..3.0,
            prop::collection::vec(0.2f64..3.0, n),
            0.1f64..1e3,
            0.0f64..3.0,
        )
            .prop_map(|(gb, gp, ge, nb, ne, i, rs)| {
                SystemConfig::new(gb, gp, ge, nb, ne, i, rs).unwrap()
            })
    })
}

/// Configurations meeting the coordinated closed-form assumptions.
fn arb_coordinated() -> impl Strategy<Value = SystemConfig> {
    (1usize..4, 1usize..5).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(0.1f64..5.0, m),
            prop::collection::vec(0.1f64..5.0, m),
            prop::collection::vec(0.01f64..3.0, m),
            0.2f64..3.0,
            0.2f64..3.0,
            0.1f64..1e3,
            0.0f64..3.0,
        )
            .prop_map(move |(gb, gp, ge, nb, ne, i, rs)| {
                let ge = ge.iter().map(|g| vec![*g; n]).collect();
                SystemConfig::new(gb, gp, ge, nb, vec![ne; n], i, rs).unwrap()
            })
    })
}

fn all_pairs(
    cfg: &SystemConfig,
    modes: &[EavesdropperMode],
) -> Vec<(Scheme, EavesdropperMode, f64)> {
    let mut out = vec![];
    for scheme in Scheme::ALL {
        for &mode in modes {
            out.push((scheme, mode, outage(scheme, mode, cfg).unwrap().value()));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn values_are_probabilities(cfg in arb_uncoordinated(), ccfg in arb_coordinated()) {
        for (_, _, p) in all_pairs(&cfg, &[EavesdropperMode::Uncoordinated]) {
            prop_assert!((0.0..=1.0).contains(&p));
        }
        for (_, _, p) in all_pairs(&ccfg, &EavesdropperMode::ALL) {
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn optimal_never_exceeds_suboptimal(cfg in arb_coordinated()) {
        for mode in EavesdropperMode::ALL {
            let opt = closed_form::outage_optimal(&cfg, mode).unwrap().value();
            let sub = closed_form::outage_suboptimal(&cfg, mode).unwrap().value();
            prop_assert!(opt <= sub * (1.0 + 1e-12) + 1e-15, "{opt} {sub}");
        }
    }

    #[test]
    fn optimal_never_exceeds_any_user(cfg in arb_uncoordinated()) {
        let opt = closed_form::outage_optimal(&cfg, EavesdropperMode::Uncoordinated).unwrap().value();
        for i in 0..cfg.num_users() {
            let u = closed_form::outage_user_uncoordinated(i, &cfg).unwrap().value();
            prop_assert!(opt <= u);
        }
    }

    // Choosing the strongest main channel can only help when nothing else
    // distinguishes the users.
    #[test]
    fn suboptimal_never_exceeds_round_robin_with_shared_statistics(
        gb in prop::collection::vec(0.1f64..5.0, 1..5),
        gp in 0.1f64..5.0,
        ge in prop::collection::vec(0.01f64..3.0, 1..4),
        i in 0.1f64..1e3,
        rs in 0.0f64..3.0,
    ) {
        let m = gb.len();
        let n = ge.len();
        let cfg = SystemConfig::new(gb, vec![gp; m], vec![ge; m], 1.0, vec![1.0; n], i, rs).unwrap();
        let sub = closed_form::outage_suboptimal_uncoordinated(&cfg).unwrap().value();
        let rr = closed_form::outage_round_robin(&cfg, EavesdropperMode::Uncoordinated).unwrap().value();
        prop_assert!(sub <= rr * (1.0 + 1e-10), "{sub} {rr}");
    }

    #[test]
    fn coordination_never_helps_the_network(cfg in arb_coordinated()) {
        for scheme in Scheme::ALL {
            let u = outage(scheme, EavesdropperMode::Uncoordinated, &cfg).unwrap().value();
            let c = outage(scheme, EavesdropperMode::Coordinated, &cfg).unwrap().value();
            prop_assert!(c >= u * (1.0 - 1e-12) - 1e-15, "{scheme:?} {u} {c}");
        }
    }

    #[test]
    fn non_increasing_in_interference_limit(cfg in arb_coordinated(), factor in 1.01f64..100.0) {
        let more = cfg.with_interference_limit(cfg.interference_limit() * factor).unwrap();
        for (s, m, p) in all_pairs(&cfg, &EavesdropperMode::ALL) {
            let q = outage(s, m, &more).unwrap().value();
            prop_assert!(q <= p * (1.0 + 1e-10) + 1e-15, "{s:?} {m:?} {p} {q}");
        }
    }

    #[test]
    fn non_decreasing_in_secrecy_rate(cfg in arb_coordinated(), step in 0.01f64..2.0) {
        let harder = cfg.with_secrecy_rate(cfg.secrecy_rate() + step).unwrap();
        for (s, m, p) in all_pairs(&cfg, &EavesdropperMode::ALL) {
            let q = outage(s, m, &harder).unwrap().value();
            prop_assert!(q >= p * (1.0 - 1e-10) - 1e-15, "{s:?} {m:?} {p} {q}");
        }
    }

    #[test]
    fn non_decreasing_in_eavesdropper_count(cfg in arb_uncoordinated(), extra in 0.01f64..3.0) {
        let m = cfg.num_users();
        let mut ge = cfg.gain_eve().to_vec();
        for row in &mut ge {
            row.push(extra);
        }
        let mut ne = cfg.noise_eve().to_vec();
        ne.push(1.0);
        let bigger = SystemConfig::new(
            cfg.gain_main().to_vec(), cfg.gain_primary().to_vec(), ge,
            cfg.noise_cbs(), ne, cfg.interference_limit(), cfg.secrecy_rate(),
        ).unwrap();
        prop_assert_eq!(bigger.num_users(), m);
        for (s, mode, p) in all_pairs(&cfg, &[EavesdropperMode::Uncoordinated]) {
            let q = outage(s, mode, &bigger).unwrap().value();
            prop_assert!(q >= p * (1.0 - 1e-10) - 1e-15, "{s:?} {p} {q}");
        }
    }

    #[test]
    fn coordinated_non_decreasing_in_eavesdropper_count(cfg in arb_coordinated()) {
        let n = cfg.num_eves();
        let ge = cfg.gain_eve().iter().map(|r| vec![r[0]; n + 1]).collect();
        let bigger = SystemConfig::new(
            cfg.gain_main().to_vec(), cfg.gain_primary().to_vec(), ge,
            cfg.noise_cbs(), vec![cfg.noise_eve()[0]; n + 1], cfg.interference_limit(), cfg.secrecy_rate(),
        ).unwrap();
        for (s, mode, p) in all_pairs(&cfg, &[EavesdropperMode::Coordinated]) {
            let q = outage(s, mode, &bigger).unwrap().value();
            prop_assert!(q >= p * (1.0 - 1e-10) - 1e-15, "{s:?} {p} {q}");
        }
    }

    #[test]
    fn product_law_is_exact(cfg in arb_coordinated()) {
        for mode in EavesdropperMode::ALL {
            let product: f64 = (0..cfg.num_users())
                .map(|i| closed_form::outage_user(i, &cfg, mode).unwrap().value())
                .product();
            prop_assert_eq!(closed_form::outage_optimal(&cfg, mode).unwrap().value(), product);
        }
    }

    #[test]
    fn scale_invariance(cfg in arb_coordinated(), c in 1e-3f64..1e3) {
        let scaled = cfg.scaled_power(c).unwrap();
        for (s, m, p) in all_pairs(&cfg, &EavesdropperMode::ALL) {
            let q = outage(s, m, &scaled).unwrap().value();
            prop_assert!(rel_close(p, q, 1e-9) || (p - q).abs() < 1e-14, "{s:?} {m:?} {p} {q}");
        }
    }

    #[test]
    fn single_eavesdropper_modes_coincide(cfg in arb_coordinated().prop_filter("N = 1", |c| c.num_eves() == 1)) {
        for i in 0..cfg.num_users() {
            let u = closed_form::outage_user_uncoordinated(i, &cfg).unwrap().value();
            let c = closed_form::outage_user_coordinated(i, &cfg).unwrap().value();
            prop_assert!(rel_close(u, c, 1e-12) || (u - c).abs() < 1e-15);
        }
        let u = closed_form::outage_suboptimal_uncoordinated(&cfg).unwrap().value();
        let c = closed_form::outage_suboptimal_coordinated(&cfg).unwrap().value();
        prop_assert!(rel_close(u, c, 1e-9) || (u - c).abs() < 1e-14, "{u} {c}");
    }

    #[test]
    fn single_user_suboptimal_reduces_to_user_form(cfg in arb_coordinated().prop_filter("M = 1", |c| c.num_users() == 1)) {
        for mode in EavesdropperMode::ALL {
            let s = closed_form::outage_suboptimal(&cfg, mode).unwrap().value();
            let u = closed_form::outage_user(0, &cfg, mode).unwrap().value();
            prop_assert!(rel_close(s, u, 1e-10) || (s - u).abs() < 1e-14, "{mode:?} {s} {u}");
        }
    }
}

#[test]
fn identical_users_round_robin_equals_single_user() {
    let cfg = SystemConfig::symmetric(5, 3, 1.3, 0.8, 0.4, 1.0, 20.0, 0.7).unwrap();
    let one = SystemConfig::symmetric(1, 3, 1.3, 0.8, 0.4, 1.0, 20.0, 0.7).unwrap();
    for mode in EavesdropperMode::ALL {
        let rr = closed_form::outage_round_robin(&cfg, mode).unwrap().value();
        let u = closed_form::outage_user(0, &one, mode).unwrap().value();
        assert!(rel_close(rr, u, 1e-14));
    }
}

#[test]
fn two_user_round_robin_is_mean() {
    let cfg = SystemConfig::new(
        vec![1.0, 3.0],
        vec![1.0, 0.5],
        vec![vec![0.2, 0.4], vec![0.6, 0.1]],
        1.0,
        vec![1.0, 1.5],
        10.0,
        1.0,
    )
    .unwrap();
    let p1 = closed_form::outage_user_uncoordinated(0, &cfg)
        .unwrap()
        .value();
    let p2 = closed_form::outage_user_uncoordinated(1, &cfg)
        .unwrap()
        .value();
    let rr = closed_form::outage_round_robin(&cfg, EavesdropperMode::Uncoordinated).unwrap();
    assert!(rel_close(rr.value(), (p1 + p2) / 2.0, 1e-15));
}

#[test]
fn branch_switch_is_continuous_for_many_configs() {
    // sigma_ie chosen so that sigma_ip N_e (2^Rs - 1) / (sigma_ie 2^Rs I) = 1
    for (m, sp, i, rs) in [(2, 1.0, 10.0, 1.0), (3, 0.5, 4.0, 0.3), (4, 2.0, 50.0, 2.0)] {
        let a: f64 = 2f64.powf(rs);
        let se = sp * (a - 1.0) / (a * i);
        let at = SystemConfig::symmetric(m, 1, 1.0, sp, se, 1.0, i, rs).unwrap();
        assert!(closed_form::on_degenerate_branch(0, 1, &at));
        let mid = closed_form::outage_suboptimal_uncoordinated(&at)
            .unwrap()
            .value();
        for eps in [1e-6, -1e-6, 1e-10, -1e-10] {
            let near =
                SystemConfig::symmetric(m, 1, 1.0, sp, se * (1.0 + eps), 1.0, i, rs).unwrap();
            let p = closed_form::outage_suboptimal_uncoordinated(&near)
                .unwrap()
                .value();
            assert!((p - mid).abs() < 1e-6, "{m} {eps} {p} {mid}");
        }
    }
}
