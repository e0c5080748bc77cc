use cogrelay::channels::{fso_snr_cdf, FsoParams, RfLinkConfig};
use cogrelay::linkstats::{sr_snr_cdf, sr_snr_cdf_oracle, SrSnrModel};
use cogrelay::perf::{ber_symbol, BerMethod, ModulationConstants};
use cogrelay::specfun::{reg_lower_gamma, reg_upper_gamma};
use proptest::prelude::*;

fn link(n_r: u32, eps: f64, rho: f64) -> RfLinkConfig {
    RfLinkConfig {
        n_r,
        sigma2_eps_sr: eps,
        sigma2_eps_sp: eps,
        rho_sr: rho,
        rho_sp: rho,
        ..RfLinkConfig::reference()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn incomplete_gamma_halves_sum_to_one(s in 0.1f64..40.0, x in 0.0f64..80.0) {
        let p = reg_lower_gamma(s, x).unwrap();
        let q = reg_upper_gamma(s, x).unwrap();
        prop_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
        prop_assert!((p + q - 1.0).abs() < 1e-13);
    }

    #[test]
    fn sr_cdf_is_monotone_and_matches_oracle(
        n_r in 1u32..5,
        eps in 0.0f64..0.3,
        rho in 0.9f64..1.0,
        pa_db in -5.0f64..40.0,
        k in 1u32..50,
        x1 in 1e-3f64..50.0,
        dx in 0.0f64..50.0,
    ) {
        let m = SrSnrModel::new(&link(n_r, eps, rho), 10f64.powf(pa_db / 10.0), 10f64.powf(2.7), 1.0, k).unwrap();
        let a = sr_snr_cdf(&m, x1).unwrap();
        let b = sr_snr_cdf(&m, x1 + dx).unwrap();
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        prop_assert!(b >= a - 1e-12);
        let o = sr_snr_cdf_oracle(&m, x1).unwrap();
        prop_assert!((a - o).abs() <= 1e-9 * o.max(1e-6), "{} vs {}", a, o);
    }

    #[test]
    fn fso_cdf_is_monotone(mu_db in 0.0f64..40.0, xi in 0.5f64..4.0, x in 1e-4f64..100.0, dx in 0.0f64..100.0) {
        let p = FsoParams { xi, ..FsoParams::moderate(10f64.powf(mu_db / 10.0)) };
        let a = fso_snr_cdf(&p, x).unwrap();
        let b = fso_snr_cdf(&p, x + dx).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b >= a - 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symbol_ber_is_bounded_and_methods_agree(
        pa_db in 0.0f64..30.0,
        mu_db in 5.0f64..30.0,
        k in 1u32..50,
        dbpsk in any::<bool>(),
    ) {
        let mc = if dbpsk { ModulationConstants::DBPSK } else { ModulationConstants::BPSK };
        let m = SrSnrModel::new(&link(2, 0.05, 0.999), 10f64.powf(pa_db / 10.0), 10f64.powf(2.7), 1.0, k).unwrap();
        let fso = FsoParams::moderate(10f64.powf(mu_db / 10.0));
        let c = ber_symbol(&m, &fso, &mc, BerMethod::Closed).unwrap().value;
        let q = ber_symbol(&m, &fso, &mc, BerMethod::Quadrature).unwrap().value;
        prop_assert!((0.0..=0.5).contains(&c));
        prop_assert!((c - q).abs() <= 1e-6 * q.max(1e-12), "{} vs {}", c, q);
    }
}
