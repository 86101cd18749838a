use approx::assert_relative_eq;
use pacs_core::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn d_type_overlap_is_gaussian() {
    let d = SipSystem::d_type(1.5, 0.8).unwrap();
    let beta = 0.8 * 0.8 / 1.5;
    for (z, zp) in [(c(0.3), c(1.2)), (Complex64::new(0.5, -1.0), Complex64::new(-0.2, 0.7))] {
        let got = inner_product(&d, z, 0, zp, 0).unwrap();
        let expected = (-(beta / 2.0) * (z.norm_sqr() + zp.norm_sqr() - 2.0 * zp.conj() * z)).exp();
        assert!((got - expected).norm() < 1e-14, "{got} vs {expected}");
    }
    let k = kernel(&SipSystem::d_type(1.0, 1.0).unwrap(), 0, c(1.0), c(0.0)).unwrap();
    assert_relative_eq!(k.re, 0.6065306597126334, max_relative = 1e-14);
}

#[test]
fn c_type_overlap_closed_form() {
    let cs = SipSystem::c_type(1.0, -2.0, 0.0).unwrap();
    let got = inner_product(&cs, c(0.3), 0, c(0.4), 0).unwrap();
    let expected = (0.91f64 * 0.84).sqrt() / 0.88;
    assert_relative_eq!(got.re, expected * expected, max_relative = 1e-14);
    assert!(got.im.abs() < 1e-15);
}

#[test]
fn a_type1_half_is_sech() {
    let a1 = SipSystem::a_type1(1.0, 0.5).unwrap();
    for r in [0.1, 1.0, 3.0, 8.0] {
        for method in [NormMethod::Series, NormMethod::Closed] {
            let n = normalization(&a1, 0, r * r, method).unwrap();
            assert_relative_eq!(n, (1.0 / f64::cosh(r)).sqrt(), max_relative = 1e-13);
        }
    }
}

#[test]
fn poisson_distribution_at_m0() {
    let d = SipSystem::d_type(1.0, 1.0).unwrap();
    let p = PacsPoint::new(d, c(2.0), 0).unwrap();
    let mut fact = 1.0;
    for n in 0..30 {
        if n > 0 {
            fact *= n as f64;
        }
        let expected = (-4.0f64).exp() * 4f64.powi(n as i32) / fact;
        for method in [StatMethod::Series, StatMethod::Closed] {
            assert_relative_eq!(pnd(&p, n, method).unwrap(), expected, max_relative = 1e-12);
        }
    }
    assert!(mandel_q(&p, StatMethod::Series).unwrap().abs() < 1e-12);
}

#[test]
fn m0_weights_for_several_parameters() {
    let systems = [
        SipSystem::d_type(0.7, 1.3).unwrap(),
        SipSystem::c_type(2.0, -3.5, 0.4).unwrap(),
        SipSystem::a_type2(1.3, 4.0, 0.0).unwrap(),
    ];
    for s in systems {
        for x in [0.05, 0.3, 0.8] {
            let w = weight(&s, 0, x).unwrap();
            let e = weight_m0_closed(&s, x).unwrap();
            assert_relative_eq!(w, e, max_relative = 1e-8);
        }
    }
    assert!(weight_m0_closed(&SipSystem::a_type1(1.0, 2.0).unwrap(), 0.5).is_none());
}

#[test]
fn vacuum_statistics() {
    let s = SipSystem::a_type2(1.0, 1.5, 0.0).unwrap();
    let p = PacsPoint::new(s, c(0.0), 3).unwrap();
    assert_eq!(mean_n(&p, StatMethod::Series).unwrap(), s.energy(3));
    assert_eq!(mean_n2(&p, StatMethod::Series).unwrap(), s.energy(3).powi(2));
}

#[test]
fn domain_and_parameter_errors() {
    assert!(matches!(SipSystem::d_type(-1.0, 1.0), Err(Error::Parameter(_))));
    assert!(matches!(SipSystem::c_type(1.0, 0.5, 0.0), Err(Error::Parameter(_))));
    assert!(matches!(SipSystem::a_type1(1.0, -0.5), Err(Error::Parameter(_))));
    assert!(matches!(SipSystem::a_type2(1.0, 0.0, 0.0), Err(Error::Parameter(_))));
    let cs = SipSystem::c_type(1.0, -2.0, 0.0).unwrap();
    assert!(PacsPoint::new(cs, c(1.0), 0).is_err());
    assert!(matches!(weight(&cs, 0, 1.5), Err(Error::Domain(_))));
    let d = SipSystem::d_type(1.0, 1.0).unwrap();
    let p = PacsPoint::new(d, c(1.0), 0).unwrap();
    assert!(matches!(report(&p, StatMethod::Closed), Err(Error::Parameter(_))));
}

#[test]
fn positivity_depends_on_rho() {
    let grid: Vec<f64> = (1..50).map(|i| i as f64 / 50.0).collect();
    let good = SipSystem::c_type(1.0, -2.0, 0.0).unwrap();
    assert!(good.measure_is_positive());
    assert!(weight_positivity_scan(&good, 1, &grid).unwrap() > 0.0);
    let bad = SipSystem::c_type(1.0, -0.5, 0.0).unwrap();
    assert!(!bad.measure_is_positive());
    assert!(weight_positivity_scan(&bad, 0, &grid).unwrap() < 0.0);
}
