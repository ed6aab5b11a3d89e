use nonlocal_spectra::eigen::{
    build_bs_operator, dense_hamiltonian_top_eigenvalue, ground_state, perron_eigenvalue,
    principal_eigenvalue, threshold_scan, EigenOptions, EigenOutcome,
};
use nonlocal_spectra::fourier::Grid1d;
use nonlocal_spectra::kernels::{make_gaussian, make_stable_like, Potential, Profile};

#[test]
fn gaussian_bound_state_matches_dense_hamiltonian() {
    let g = make_gaussian(1.0, 1).unwrap();
    let v = Potential::new(Profile::Bump, 1.0, 0.5).unwrap();
    let opts = EigenOptions::default();
    let found = match principal_eigenvalue(&g, &v, 2.0, &opts).unwrap() {
        EigenOutcome::Found(p) => p,
        other => panic!("{other:?}"),
    };
    let grid = Grid1d::with_half_width(1024, 60.0).unwrap();
    let dense = dense_hamiltonian_top_eigenvalue(&g, &v.with_scale(2.0).unwrap(), &grid);
    assert!(
        (found.lambda0 - dense).abs() <= 1e-5 * found.lambda0,
        "{} vs {dense}",
        found.lambda0
    );
    assert!(found.lambda0 > 0.0 && found.lambda0 <= 0.5);
    assert!(found.second_mu < 1.0);
    assert!(found.eigenfunction_nodes.iter().all(|p| *p >= 0.0));
    let gs = ground_state(
        &g,
        &v,
        &found,
        &Grid1d::with_half_width(512, 20.0).unwrap(),
        &opts,
    )
    .unwrap();
    assert!(
        gs.fixed_point_residual <= 1e-6,
        "{}",
        gs.fixed_point_residual
    );
    assert!(gs.sup_normalized.iter().all(|p| *p > 0.0 && *p <= 1.0));
}

#[test]
fn perron_value_decreases_in_lambda() {
    let g = make_gaussian(1.0, 1).unwrap();
    let v = Potential::new(Profile::Quartic, 1.0, 0.3).unwrap();
    let opts = EigenOptions::default();
    let mus: Vec<f64> = [0.05, 0.1, 0.2, 0.4, 0.8]
        .iter()
        .map(|&l| {
            perron_eigenvalue(
                &build_bs_operator(&g, &v, l, 1.5, &opts).unwrap(),
                1e-12,
                10_000,
            )
            .unwrap()
            .mu0
        })
        .collect();
    assert!(mus.windows(2).all(|w| w[1] < w[0]), "{mus:?}");
}

#[test]
fn transient_kernel_needs_large_scale() {
    let s = make_stable_like(0.5, 1).unwrap();
    let v = Potential::new(Profile::Bump, 1.0, 0.5).unwrap();
    let scan = threshold_scan(&s, &v, &[0.5, 1.0, 4.0, 8.0], &EigenOptions::default()).unwrap();
    let flags: Vec<Option<bool>> = scan.iter().map(|p| p.exists).collect();
    assert_eq!(
        flags,
        vec![Some(false), Some(false), Some(true), Some(true)]
    );
    let (a, b) = (scan[2].lambda0.unwrap(), scan[3].lambda0.unwrap());
    assert!(0.0 < a && a <= b && b <= 0.5);
}

#[test]
fn recurrent_kernel_without_bound_state_is_inconclusive() {
    let g = make_gaussian(1.0, 1).unwrap();
    let v = Potential::new(Profile::Bump, 1.0, 0.99).unwrap();
    let out = principal_eigenvalue(
        &g,
        &v,
        0.05,
        &EigenOptions {
            probe_levels: 4,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(
        matches!(out, EigenOutcome::InconclusiveAtProbe { .. }),
        "{out:?}"
    );
}
