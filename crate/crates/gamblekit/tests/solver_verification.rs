//! Fairness-solver guarantees beyond the unit tests: verification closure of
//! reported crossings and agreement with the asymptotic boundary laws.

use gamblekit::analysis::expected_net_profit;
use gamblekit::fairness::{fair_p, fair_u_for_d, FairStatus};
use gamblekit::game::GameParams;

#[test]
fn crossings_reevaluate_to_nearly_zero() {
    for n in [20u32, 100, 500] {
        for d in [0.4f64, 0.6, 0.8] {
            let base = GameParams::new(n, 1.5, d, 0.5).unwrap();
            let sol = fair_u_for_d(&base, 1e-10, 4.0).unwrap();
            match sol.status {
                FairStatus::Crossing => {
                    let mut at = base;
                    at.u = sol.midpoint();
                    let g_mid = expected_net_profit(&at).unwrap().g;
                    let best = g_mid.abs().min(sol.g_lo.abs()).min(sol.g_hi.abs());
                    assert!(best <= 1e-6, "n={n} d={d}: |g| = {best} at bracket {sol:?}");
                }
                FairStatus::JumpAcrossZero => {
                    assert!(sol.g_lo < 0.0 && sol.g_hi > 0.0);
                    assert!(sol.bracket_hi - sol.bracket_lo <= 1e-10);
                }
                FairStatus::NoSignChange => panic!("n={n} d={d}: expected a bracket"),
            }
        }
    }
}

#[test]
fn fair_bias_crossings_close_tightly() {
    for n in [30u32, 100, 350] {
        for (u, d) in [(1.5f64, 0.6f64), (1.2, 0.8), (2.0, 0.45)] {
            let base = GameParams::new(n, u, d, 0.5).unwrap();
            let sol = fair_p(&base, 1e-12).unwrap();
            assert_eq!(sol.status, FairStatus::Crossing, "n={n} u={u} d={d}");
            let mut at = base;
            at.p = sol.midpoint();
            let g = expected_net_profit(&at).unwrap().g;
            assert!(g.abs() <= 1e-9, "n={n} u={u} d={d}: g = {g}");
        }
    }
}

#[test]
fn fair_bias_approaches_the_threshold_boundary() {
    // As n grows the fair p tends to the root of u^p d^(1-p) = 1, which is
    // ln(1/d)/ln(u/d).
    for (u, d) in [(1.5f64, 0.6f64), (2.0, 0.5), (1.2, 0.7)] {
        let base = GameParams::new(2000, u, d, 0.5).unwrap();
        let sol = fair_p(&base, 1e-12).unwrap();
        let boundary = (1.0 / d).ln() / (u / d).ln();
        assert!(
            (sol.midpoint() - boundary).abs() < 0.02,
            "u={u} d={d}: fair p = {}, boundary = {boundary}",
            sol.midpoint()
        );
    }
}

#[test]
fn fair_up_factor_respects_bracket_ordering() {
    // Bracket invariants hold on a scattered grid: width within tolerance,
    // negative profit below, nonnegative above.
    for n in [10u32, 60, 240] {
        for d in [0.3, 0.55, 0.75, 0.9] {
            let base = GameParams::new(n, 1.5, d, 0.5).unwrap();
            let sol = fair_u_for_d(&base, 1e-8, 6.0).unwrap();
            if sol.status == FairStatus::NoSignChange {
                continue;
            }
            assert!(sol.bracket_hi - sol.bracket_lo <= 1e-8);
            assert!(sol.g_lo < 0.0);
            assert!(sol.g_hi >= 0.0);
            assert!(sol.g_lo * sol.g_hi <= 0.0);
        }
    }
}
