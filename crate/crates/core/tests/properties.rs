//! Randomized invariants, complementing the unit oracles.

use nclab::core_models::{EntropyPair, FluxModel, KineticFunction};
use nclab::fd_schemes::{entropy_identity_residuals, Boundary, GridState, SchemeConfig};
use nclab::front_tracking::generalized_strength;
use nclab::riemann::{evaluate, NonclassicalSolver};
use nclab::table::KineticTable;
use proptest::prelude::*;

fn solver(c: f64) -> NonclassicalSolver {
    let flux = FluxModel::cubic();
    let pair = EntropyPair::quadratic(flux.clone());
    NonclassicalSolver::new(flux, pair, KineticFunction::linear(c).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn riemann_patterns_are_valid_and_dissipative(
        ul in -3.0f64..3.0,
        ur in -3.0f64..3.0,
        c in 0.55f64..0.95,
    ) {
        let s = solver(c);
        let p = s.solve(ul, ur).unwrap();
        p.validate(s.pair()).unwrap();
        prop_assert!(p.waves.len() <= 2);
        prop_assert!(p.total_entropy_dissipation(s.pair()).unwrap() <= 1e-12);
        // Far-field evaluation recovers the data.
        prop_assert_eq!(evaluate(s.flux(), &p, -1e6), ul);
        prop_assert_eq!(evaluate(s.flux(), &p, 1e6), ur);
    }

    #[test]
    fn kinetic_values_are_pinched(
        mag in 0.05f64..2.5,
        negative in any::<bool>(),
        c in 0.55f64..0.95,
    ) {
        let u = if negative { -mag } else { mag };
        let s = solver(c);
        let phi = s.kinetic().phi(u);
        let tangent = s.flux().tangent(u).unwrap();
        let zero = s.pair().zero_dissipation(u).unwrap();
        prop_assert!(phi * u < 0.0);
        prop_assert!(phi.abs() >= tangent.abs() - 1e-12);
        prop_assert!(phi.abs() < zero.abs());
    }

    #[test]
    fn generalized_strength_is_bounded_by_variation(
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
    ) {
        let s = solver(0.75);
        let sigma = generalized_strength(s.pair(), a, b).unwrap();
        prop_assert!(sigma >= 0.0);
        // For the cubic with quadratic entropy, psi(u) = |u|, so sigma is
        // 1-Lipschitz in the jump.
        prop_assert!(sigma <= (a - b).abs() + 1e-12);
        if a == b {
            prop_assert_eq!(sigma, 0.0);
        }
    }

    #[test]
    fn table_round_trip_is_bit_exact(
        steps in proptest::collection::vec(0.01f64..0.7, 2..16),
        c in 0.5f64..0.95,
        slope in proptest::option::of(-1.0f64..-0.5),
        tag in "[a-z]{1,8}",
    ) {
        let mut u = 0.1;
        let rows: Vec<(f64, f64)> = steps
            .iter()
            .map(|d| {
                u += d;
                (u, -c * u)
            })
            .collect();
        let mut table = KineticTable::new("cubic", rows).unwrap().with_meta("tag", &tag);
        table.slope_at_zero = slope;
        let mut buf = Vec::new();
        table.write_to(&mut buf).unwrap();
        let back = KineticTable::read_from(&buf[..]).unwrap();
        prop_assert_eq!(&table, &back);
        for (r0, r1) in table.rows.iter().zip(&back.rows) {
            prop_assert_eq!(r0.0.to_bits(), r1.0.to_bits());
            prop_assert_eq!(r0.1.to_bits(), r1.1.to_bits());
        }
        let mut buf2 = Vec::new();
        back.write_to(&mut buf2).unwrap();
        prop_assert_eq!(buf, buf2);
    }

    #[test]
    fn entropy_identity_holds_on_random_periodic_data(
        a1 in -0.3f64..0.3,
        a2 in -0.3f64..0.3,
        b1 in -0.3f64..0.3,
        order in prop::sample::select(vec![2u8, 3, 4]),
    ) {
        let flux = FluxModel::cubic();
        let pair = EntropyPair::quadratic(flux.clone());
        let cfg = SchemeConfig {
            flux,
            pair,
            base_flux_order: order,
            alpha: 0.0,
            beta: 0.0,
            h: 0.1,
            cfl: 0.4,
            domain: (0.0, 6.4),
            boundary: Boundary::Periodic,
        };
        let k = 2.0 * std::f64::consts::PI / 6.4;
        let state = GridState::from_fn(&cfg, |x| {
            a1 * (k * x).sin() + a2 * (2.0 * k * x).sin() + b1 * (k * x).cos()
        });
        let worst = entropy_identity_residuals(&cfg, &state)
            .unwrap()
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()));
        prop_assert!(worst <= 1e-13, "residual {worst:e}");
    }
}
