//! Property tests for the invariants the closed forms and kernels promise.

use proptest::prelude::*;

use scattersim_core::analytic::{
    ber_bound_monostatic, ber_bound_multistatic, l_slot_outage, outage_bound_monostatic,
    outage_bound_multistatic,
};
use scattersim_core::channel::{
    dyadic_power_cdf_rayleigh, dyadic_power_pdf, monostatic_power_cdf_rayleigh, path_loss,
    PathLossParams,
};
use scattersim_core::detect::detect_noncoherent;
use scattersim_core::signal::{rho_coefficients, tag_symbol, FrequencyAssignment, RxSymbol, TagPhases};
use scattersim_core::specfun::{
    bessel_k, gamma, lower_incomplete_gamma, q_function, upper_incomplete_gamma,
};

proptest! {
    #[test]
    fn q_function_complement_and_range(x in -8.0..8.0f64) {
        let q = q_function(x).unwrap();
        prop_assert!(q > 0.0 && q < 1.0);
        let sum = q + q_function(-x).unwrap();
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_recurrence(x in 0.1..30.0f64) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!(((lhs - rhs) / rhs).abs() < 1e-10);
    }

    #[test]
    fn incomplete_gamma_partition(a in 0.5..6.0f64, x in 0.0..20.0f64) {
        let total = lower_incomplete_gamma(a, x).unwrap() + upper_incomplete_gamma(a, x).unwrap();
        let g = gamma(a).unwrap();
        prop_assert!(((total - g) / g).abs() < 1e-9);
    }

    #[test]
    fn bessel_k_order_symmetry(nu in -4.0..4.0f64, x in 0.02..40.0f64) {
        let a = bessel_k(nu, x).unwrap();
        let b = bessel_k(-nu, x).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a > 0.0);
    }

    #[test]
    fn dyadic_pdf_symmetric_in_hops(ml in 0.5..8.0f64, mn in 0.5..8.0f64, x in 0.01..20.0f64) {
        let a = dyadic_power_pdf(x, ml, mn).unwrap();
        let b = dyadic_power_pdf(x, mn, ml).unwrap();
        prop_assert!(((a - b) / b).abs() < 1e-9);
    }

    #[test]
    fn rayleigh_cdfs_are_probabilities_and_monotone(x in 0.0..50.0f64, dx in 0.001..5.0f64) {
        for f in [monostatic_power_cdf_rayleigh, dyadic_power_cdf_rayleigh] {
            let lo = f(x).unwrap();
            let hi = f(x + dx).unwrap();
            prop_assert!((0.0..=1.0).contains(&lo));
            prop_assert!(hi >= lo - 1e-12);
        }
    }

    #[test]
    fn path_loss_monotone(d1 in 1.0..500.0f64, factor in 1.001..10.0f64, nu in 1.5..4.0f64) {
        let p = PathLossParams::new(0.3456, nu).unwrap();
        let near = path_loss(d1, &p).unwrap();
        let far = path_loss(d1 * factor, &p).unwrap();
        prop_assert!(near > far);
    }

    #[test]
    fn tag_symbols_are_orthonormal(phi0 in 0.0..std::f64::consts::TAU,
                                   phi1 in 0.0..std::f64::consts::TAU) {
        let phases = TagPhases::new(phi0, phi1);
        let x0 = tag_symbol(0, &phases);
        let x1 = tag_symbol(1, &phases);
        let n0: f64 = x0.iter().map(|c| c.norm_sqr()).sum();
        let n1: f64 = x1.iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((n0 - 1.0).abs() < 1e-13);
        prop_assert!((n1 - 1.0).abs() < 1e-13);
        let inner: num_complex::Complex64 =
            x0.iter().zip(x1.iter()).map(|(a, b)| a * b.conj()).sum();
        prop_assert!(inner.norm() < 1e-14);
    }

    #[test]
    fn rho_matrix_symmetric_positive(seed in any::<u64>(), n in 2usize..12) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = FrequencyAssignment::random(n, 0.1e6, 0.01e6, 1e-3, &mut rng).unwrap();
        let rho = rho_coefficients(&a).unwrap();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    prop_assert!(rho.get(i, j).unwrap() > 0.0);
                    prop_assert_eq!(rho.get(i, j).unwrap(), rho.get(j, i).unwrap());
                }
            }
        }
    }

    #[test]
    fn ber_bounds_live_in_half_interval(m1 in 0.5..10.0f64, m2 in 0.5..10.0f64,
                                        snr_db in -20.0..60.0f64) {
        let snr = 10f64.powf(snr_db / 10.0);
        let mono = ber_bound_monostatic(m2, snr).unwrap();
        prop_assert!(mono > 0.0 && mono <= 0.5 + 1e-12);
        let multi = ber_bound_multistatic(m1, m2, snr).unwrap();
        prop_assert!(multi > 0.0 && multi <= 0.5 + 1e-12);
    }

    #[test]
    fn ber_bounds_decrease_with_snr(m1 in 0.5..8.0f64, m2 in 0.5..8.0f64,
                                    snr_db in -10.0..50.0f64, step_db in 0.5..10.0f64) {
        let lo = 10f64.powf(snr_db / 10.0);
        let hi = 10f64.powf((snr_db + step_db) / 10.0);
        prop_assert!(ber_bound_monostatic(m2, hi).unwrap() < ber_bound_monostatic(m2, lo).unwrap());
        prop_assert!(
            ber_bound_multistatic(m1, m2, hi).unwrap()
                < ber_bound_multistatic(m1, m2, lo).unwrap()
        );
    }

    #[test]
    fn outage_bounds_increase_with_theta(theta_db in -30.0..30.0f64, step in 0.1..6.0f64,
                                         sinr_db in -10.0..40.0f64) {
        let sinr = 10f64.powf(sinr_db / 10.0);
        let lo = 10f64.powf(theta_db / 10.0);
        let hi = 10f64.powf((theta_db + step) / 10.0);
        let m = (
            outage_bound_monostatic(lo, sinr).unwrap(),
            outage_bound_monostatic(hi, sinr).unwrap(),
        );
        prop_assert!(m.1 >= m.0 && (0.0..=1.0).contains(&m.0));
        let b = (
            outage_bound_multistatic(lo, sinr).unwrap(),
            outage_bound_multistatic(hi, sinr).unwrap(),
        );
        prop_assert!(b.1 >= b.0 && (0.0..=1.0).contains(&b.0));
    }

    #[test]
    fn l_slot_outage_never_exceeds_worst_slot(p in proptest::collection::vec(0.0..1.0f64, 1..6)) {
        let joint = l_slot_outage(&p).unwrap();
        let worst = p.iter().copied().fold(1.0f64, f64::min);
        prop_assert!(joint <= worst + 1e-15);
    }

    #[test]
    fn envelope_detector_is_rotation_invariant(
        re in proptest::collection::vec(-3.0..3.0f64, 4),
        im in proptest::collection::vec(-3.0..3.0f64, 4),
        phi0 in 0.0..std::f64::consts::TAU,
        phi1 in 0.0..std::f64::consts::TAU,
        theta in 0.0..std::f64::consts::TAU,
    ) {
        let phases = TagPhases::new(phi0, phi1);
        let vector: Vec<num_complex::Complex64> = re
            .iter()
            .zip(im.iter())
            .map(|(&r, &i)| num_complex::Complex64::new(r, i))
            .collect();
        let rx = RxSymbol {
            vector: [vector[0], vector[1], vector[2], vector[3]],
            slot: 0,
            tag: 0,
            truth_bit: 0,
            channel_amp: 1.0,
            channel_phase: 0.0,
        };
        let d0 = detect_noncoherent(&rx, &phases);
        let rot = num_complex::Complex64::from_polar(1.0, theta);
        let mut rotated = rx.clone();
        for v in rotated.vector.iter_mut() {
            *v *= rot;
        }
        prop_assert_eq!(detect_noncoherent(&rotated, &phases), d0);
    }
}
