use nonlocal_spectra::asymptotics::{
    green_asymptotic, legendre, local_clt_check, log_mgf, phase_min, tail_bound_check,
    LargeDeviationProfile,
};
use nonlocal_spectra::greens::resolvent_series_oracle;
use nonlocal_spectra::kernels::{make_gaussian, make_quartic_exp};

#[test]
fn green_asymptotic_tracks_series() {
    let g = make_gaussian(1.0, 1).unwrap();
    let prof = LargeDeviationProfile::new(&g).unwrap();
    let d = phase_min(&prof, 1.0, 1.0).unwrap();
    let errors: Vec<f64> = [10.0, 20.0, 30.0]
        .iter()
        .map(|&r| {
            let s = resolvent_series_oracle(&g, 1.0, r, 200, 1e-40)
                .unwrap()
                .value;
            (green_asymptotic(&d, r) / s - 1.0).abs()
        })
        .collect();
    assert!(
        errors[0] < 1e-5 && errors[1] < 1e-12 && errors[2] < 1e-12,
        "{errors:?}"
    );
}

#[test]
fn local_limit_error_shrinks_like_inverse_n() {
    let prof = LargeDeviationProfile::new(&make_quartic_exp()).unwrap();
    let sup = |n: usize| {
        let ys: Vec<f64> = (0..=40)
            .map(|i| n as f64 * (-1.0 + i as f64 / 20.0))
            .collect();
        local_clt_check(&prof, n, &ys).unwrap().sup_rel_error
    };
    let (e16, e64) = (sup(16), sup(64));
    assert!(e64 < e16 && e64 < 0.05);
    assert!((e16 / e64 - 4.0).abs() < 0.5, "{e16} / {e64}");
}

#[test]
fn gaussian_tail_bound_holds_with_surrogate_constant() {
    let prof = LargeDeviationProfile::new(&make_gaussian(1.0, 1).unwrap()).unwrap();
    let ys: Vec<f64> = (0..=16).map(|i| 4.0 + i as f64 * 0.5).collect();
    let rep = tail_bound_check(&prof, 4, &ys).unwrap();
    assert!(rep.all_hold);
    // ∫ a e^{y²/2} diverges, so doubling the window adds ln 2 to c.
    assert!((rep.c_truncation_change - 2f64.ln()).abs() < 1e-12);
    assert!((rep.oracle_log_slope - rep.bound_log_slope).abs() < 1e-9);
}

#[test]
fn legendre_duality_and_gradient() {
    let q = make_quartic_exp();
    let prof = LargeDeviationProfile::new(&q).unwrap();
    for &p in &[0.2, 0.7, 1.5] {
        let lp = legendre(&prof, p).unwrap();
        let h = log_mgf(&q, lp.nu_star).unwrap().h;
        assert!((h + lp.h_star - p * lp.nu_star).abs() < 1e-10);
        let e = 1e-4;
        let fd = (legendre(&prof, p + e).unwrap().h_star - legendre(&prof, p - e).unwrap().h_star)
            / (2.0 * e);
        assert!((fd - lp.nu_star).abs() < 1e-6 * lp.nu_star.abs().max(1.0));
    }
}
