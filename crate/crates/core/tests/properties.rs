use proptest::prelude::*;

use xxchain::entanglement::*;
use xxchain::negativity::{logarithmic_negativity, NegativitySetup};
use xxchain::pst::{synthesize_from_spectrum, transfer_fidelity};
use xxchain::reference::closed_form_reference;
use xxchain::transport::*;
use xxchain::*;

fn chain_strategy() -> impl Strategy<Value = Chain> {
    (1usize..24)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.2f64..2.0, n),
                prop::collection::vec(-2.0f64..2.0, n + 1),
            )
        })
        .prop_map(|(j, b)| Chain::new(j, b, None).unwrap())
}

fn mirror_strategy() -> impl Strategy<Value = Chain> {
    (1usize..24)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.3f64..1.5, n.div_ceil(2)),
                prop::collection::vec(-1.0f64..1.0, n / 2 + 1),
                Just(n),
            )
        })
        .prop_map(|(half_j, half_b, n)| {
            let j = (0..n).map(|i| half_j[i.min(n - 1 - i)]).collect();
            let b = (0..=n).map(|i| half_b[i.min(n - i)]).collect();
            Chain::new(j, b, None).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_sums_to_trace(chain in chain_strategy()) {
        let sd = diagonalize(&chain).unwrap();
        let trace: f64 = chain.fields().iter().sum();
        let sum: f64 = sd.omegas.iter().sum();
        prop_assert!((trace - sum).abs() < 1e-10 * (1.0 + trace.abs()));
        prop_assert!(sd.omegas.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn closed_forms_match(n in 1usize..40, p in 0.05f64..0.95, site in 0usize..40, mode in 0usize..40) {
        let (site, mode) = (site % (n + 1), mode % (n + 1));
        let spec = ChainSpec::Krawtchouk { n, p };
        let sd = diagonalize(&build_chain(&spec).unwrap()).unwrap();
        let (omega, phi) = closed_form_reference(&spec, site, mode).unwrap();
        prop_assert!((omega - sd.omegas[mode]).abs() < 1e-9 * n as f64);
        prop_assert!((phi - sd.amplitude(site, mode)).abs() < 1e-8);
    }

    #[test]
    fn synthesis_round_trip(chain in mirror_strategy()) {
        let sd = diagonalize(&chain).unwrap();
        // edge-localized mirror pairs can be split by ~1e-13, below what a double spectrum resolves
        let scale = sd.omegas[sd.len() - 1] - sd.omegas[0];
        prop_assume!(sd.omegas.windows(2).all(|w| w[1] - w[0] > 1e-6 * scale));
        let rebuilt = synthesize_from_spectrum(&sd.omegas).unwrap();
        for (a, b) in chain.couplings().iter().zip(rebuilt.couplings()) {
            prop_assert!((a - b).abs() < 1e-7);
        }
        for (a, b) in chain.fields().iter().zip(rebuilt.fields()) {
            prop_assert!((a - b).abs() < 1e-7);
        }
    }

    #[test]
    fn synthesized_spectrum_is_prescribed(gaps in prop::collection::vec(0.1f64..2.0, 1..20), base in -5.0f64..5.0) {
        let omegas: Vec<f64> = std::iter::once(base)
            .chain(gaps.iter().scan(base, |w, g| { *w += g; Some(*w) }))
            .collect();
        let chain = synthesize_from_spectrum(&omegas).unwrap();
        let sd = diagonalize(&chain).unwrap();
        for (a, b) in omegas.iter().zip(&sd.omegas) {
            prop_assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn shift_moves_spectrum(chain in chain_strategy(), c in -3.0f64..3.0) {
        let a = diagonalize(&chain).unwrap();
        let b = diagonalize(&chain.shifted(c)).unwrap();
        for (x, y) in a.omegas.iter().zip(&b.omegas) {
            prop_assert!((x + c - y).abs() < 1e-10);
        }
        prop_assert!((transfer_fidelity(&a, 1.3) - transfer_fidelity(&b, 1.3)).abs() < 1e-10);
    }

    #[test]
    fn fidelity_at_most_one(chain in chain_strategy(), t in 0.0f64..50.0) {
        let f = transfer_fidelity(&diagonalize(&chain).unwrap(), t);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn current_is_antisymmetric(chain in mirror_strategy(), t0 in 0.1f64..50.0, tn in 0.1f64..50.0) {
        let (_, sd) = shift_to_positive(&chain, 0.5).unwrap();
        let forward = heat_current_general(&sd, &BathConfig::new(t0, tn, 0.1, 1.0).unwrap()).unwrap();
        let backward = heat_current_general(&sd, &BathConfig::new(tn, t0, 0.1, 1.0).unwrap()).unwrap();
        prop_assert!((forward + backward).abs() <= 1e-12 * forward.abs().max(1e-300));
        prop_assert!(forward == 0.0 || forward.signum() == (t0 - tn).signum());
    }

    #[test]
    fn current_scales_with_h_squared(chain in mirror_strategy(), h in 0.1f64..5.0) {
        let (chain, sd) = shift_to_positive(&chain, 0.5).unwrap();
        let unit = heat_current_mirror(&chain, &sd, &BathConfig::new(3.0, 1.0, 0.1, 1.0).unwrap()).unwrap();
        let scaled = heat_current_mirror(&chain, &sd, &BathConfig::new(3.0, 1.0, 0.1, h).unwrap()).unwrap();
        prop_assert!((scaled - h * h * unit).abs() < 1e-10 * scaled.abs());
    }

    #[test]
    fn negativity_swap_symmetric(chain in chain_strategy(), k in 0usize..24, s in 0usize..24) {
        let sites = chain.sites();
        prop_assume!(sites >= 3);
        let sd = diagonalize(&chain).unwrap();
        let m = s % (sites - 1);
        let a2: Vec<usize> = (m + 1..sites).take(2).collect();
        let setup = NegativitySetup::from_spectrum(&sd, k % sites, &[m], &a2).unwrap();
        let e = logarithmic_negativity(&setup).unwrap();
        let swapped = logarithmic_negativity(&setup.swapped()).unwrap();
        prop_assert!(e >= -1e-10);
        prop_assert!((e - swapped).abs() < 1e-10);
    }

    #[test]
    fn entropy_bounds_and_complement(chain in chain_strategy(), k in 0usize..24, ell in 0usize..24) {
        let sites = chain.sites();
        let sd = diagonalize(&chain).unwrap();
        let (k, ell) = (k % sites, ell % sites);
        let left = entanglement_entropy(&correlation_matrix(&sd, k, &interval(ell)).unwrap());
        prop_assert!(left >= 0.0 && left <= (ell + 1) as f64 * std::f64::consts::LN_2 + 1e-12);
        if ell + 1 < sites {
            let rest: Vec<usize> = (ell + 1..sites).collect();
            let right = entanglement_entropy(&correlation_matrix(&sd, k, &rest).unwrap());
            prop_assert!((left - right).abs() < 1e-8);
        }
    }
}
