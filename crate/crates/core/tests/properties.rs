use pacs_core::specfun::{gamma, ln_gamma, pfq};
use pacs_core::*;
use proptest::prelude::*;

fn system_strategy() -> impl Strategy<Value = (SipSystem, f64)> {
    prop_oneof![
        (0.2..3.0f64, 0.2..2.0f64).prop_map(|(g, c)| (SipSystem::d_type(g, c).unwrap(), 3.0)),
        (0.3..3.0f64, -9.0..-1.1f64, -1.0..1.0f64).prop_map(|(g, r, a)| (SipSystem::c_type(g, r, a).unwrap(), 0.9)),
        (0.5..2.0f64, 0.2..3.0f64).prop_map(|(k, r)| (SipSystem::a_type1(k, r).unwrap(), 4.0)),
        (0.5..2.0f64, 0.2..6.0f64, -1.0..1.0f64).prop_map(|(k, n, a)| (SipSystem::a_type2(k, n, a).unwrap(), 0.9)),
    ]
}

fn z_in(r_max: f64, t: f64, phi: f64) -> Complex64 {
    Complex64::from_polar(r_max * t, phi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_is_hermitian_and_unit_on_diagonal(
        (s, r) in system_strategy(), m in 0usize..6,
        t1 in 0.0..1.0f64, p1 in 0.0..6.3f64, t2 in 0.0..1.0f64, p2 in 0.0..6.3f64,
    ) {
        let (z, zp) = (z_in(r, t1, p1), z_in(r, t2, p2));
        let a = kernel(&s, m, z, zp).unwrap();
        let b = kernel(&s, m, zp, z).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12);
        prop_assert!((kernel(&s, m, z, z).unwrap() - 1.0).norm() <= 1e-12);
        prop_assert!(a.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn states_are_normalized((s, r) in system_strategy(), m in 0usize..6, t in 0.0..1.0f64, phi in 0.0..6.3f64) {
        let p = PacsPoint::new(s, z_in(r, t, phi), m).unwrap();
        let mut total = 0.0;
        for n in 0..4000 {
            let a = state_coefficient(&p, n).unwrap().norm_sqr();
            total += a;
            if n > 50 && a < 1e-20 * total {
                break;
            }
        }
        prop_assert!((total - 1.0).abs() <= 1e-10, "total {}", total);
        for j in 0..m {
            prop_assert_eq!(fock_amplitude(&p, j).unwrap(), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn series_and_closed_normalization_agree((s, r) in system_strategy(), m in 0usize..6, t in 0.0..1.0f64) {
        let x = (r * t).powi(2);
        let a = normalization(&s, m, x, NormMethod::Series).unwrap();
        let b = normalization(&s, m, x, NormMethod::Closed).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a, "{} vs {}", a, b);
    }

    #[test]
    fn mandel_identity_and_closed_agreement((s, r) in system_strategy(), m in 1usize..8, t in 0.02..1.0f64) {
        let p = PacsPoint::new(s, Complex64::new(r * t, 0.0), m).unwrap();
        let a = report(&p, StatMethod::Series).unwrap();
        let b = report(&p, StatMethod::Closed).unwrap();
        let scale = a.mandel_q.abs().max(1.0);
        prop_assert!((a.mandel_q - a.mean_n * (a.g2 - 1.0)).abs() <= 1e-10 * scale);
        prop_assert!((a.mandel_q - b.mandel_q).abs() <= 1e-8 * scale, "{:?} vs {:?}", a, b);
        prop_assert!((a.mean_n - b.mean_n).abs() <= 1e-10 * a.mean_n);
        prop_assert!(a.mean_n >= s.energy(m) - 1e-12);
    }

    #[test]
    fn pnd_sums_to_one((s, r) in system_strategy(), m in 0usize..4, t in 0.0..1.0f64) {
        let p = PacsPoint::new(s, Complex64::new(r * t, 0.0), m).unwrap();
        let mut total = 0.0;
        for n in 0..4000 {
            let q = pnd(&p, n, StatMethod::Closed).unwrap();
            total += q;
            if n > m + 50 && q < 1e-20 {
                break;
            }
        }
        prop_assert!((total - 1.0).abs() <= 1e-10, "total {}", total);
    }

    #[test]
    fn overlap_series_matches_closed(
        (s, r) in system_strategy(), m1 in 0usize..4, m2 in 0usize..4,
        t1 in 0.0..1.0f64, p1 in 0.0..6.3f64, t2 in 0.0..1.0f64, p2 in 0.0..6.3f64,
    ) {
        let (z1, z2) = (z_in(r, t1, p1), z_in(r, t2, p2));
        let a = inner_product(&s, z1, m1, z2, m2).unwrap();
        match inner_product_closed(&s, z1, m1, z2, m2) {
            Ok(b) => prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-3), "{} vs {}", a, b),
            Err(Error::Undefined(_)) => prop_assert!(s.family() == Family::AType2 && s.alpha() != 0.0),
            Err(e) => prop_assert!(false, "{}", e),
        }
        let back = inner_product(&s, z2, m2, z1, m1).unwrap();
        prop_assert!((a - back.conj()).norm() <= 1e-12);
    }

    #[test]
    fn energy_is_partial_sum_of_remainders((s, _) in system_strategy(), n in 0usize..200) {
        let e = s.energy(n);
        prop_assert!((e - s.energy_by_summation(n)).abs() <= 1e-10 * e.max(1.0));
    }

    #[test]
    fn gamma_recurrence(x in 0.01..150.0f64) {
        let lhs = ln_gamma(x + 1.0).unwrap();
        let rhs = ln_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 4e-15 * lhs.abs().max(1.0));
    }

    #[test]
    fn kummer_transformation(a in -3.0..3.0f64, b in 0.5..4.0f64, x in -5.0..5.0f64) {
        // 1F1(a; b; x) = e^x 1F1(b − a; b; −x)
        let l = pfq(&[a], &[b], Complex64::new(x, 0.0), 1e-15, 10_000).unwrap().value.re;
        let r = x.exp() * pfq(&[b - a], &[b], Complex64::new(-x, 0.0), 1e-15, 10_000).unwrap().value.re;
        prop_assert!((l - r).abs() <= 1e-11 * (l.abs() + r.abs()).max(1.0) * x.abs().exp(), "{} vs {}", l, r);
    }

    #[test]
    fn gauss_sum(a in -2.0..2.0f64, b in -2.0..2.0f64, extra in 0.5..3.0f64) {
        // 2F1(a, b; c; 1) = Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b)) for c − a − b > 0
        let c = a + b + extra;
        prop_assume!(c > 0.1 && (c - a) > 0.1 && (c - b) > 0.1);
        let got = pfq(&[a, b], &[c], Complex64::new(1.0, 0.0), 1e-13, 2_000_000);
        let expected = gamma(c).unwrap() * gamma(c - a - b).unwrap() / (gamma(c - a).unwrap() * gamma(c - b).unwrap());
        if let Ok(r) = got {
            if r.converged {
                prop_assert!((r.value.re - expected).abs() <= 1e-7 * expected.abs().max(1.0), "{} vs {}", r.value.re, expected);
            }
        }
    }
}
