use nonlocal_spectra::asymptotics::{phase_min, LargeDeviationProfile};
use nonlocal_spectra::dynamics::{
    evolve, front_experiment, front_extract, gzero_v_norm_bound, stabilization_experiment,
    stabilize, EvolveOptions, InitialData, StabilizeOptions,
};
use nonlocal_spectra::eigen::{principal_eigenvalue, EigenOptions};
use nonlocal_spectra::fourier::Grid1d;
use nonlocal_spectra::kernels::{make_gaussian, make_stable_like, Potential, Profile};
use nonlocal_spectra::Error;

#[test]
fn gaussian_front_moves_at_predicted_speed() {
    let g = make_gaussian(1.0, 1).unwrap();
    let v = Potential::new(Profile::Bump, 1.0, 0.5).unwrap();
    let lambda0 = principal_eigenvalue(&g, &v, 2.0, &EigenOptions::default())
        .unwrap()
        .lambda0()
        .unwrap();
    let phi = phase_min(&LargeDeviationProfile::new(&g).unwrap(), 1.0, lambda0)
        .unwrap()
        .phi;
    let grid = Grid1d::with_half_width(4096, 128.0).unwrap();
    let u0 = InitialData::Box {
        radius: 2.0,
        height: 1.0,
    };
    let rep = front_experiment(
        &g,
        &v.with_scale(2.0).unwrap(),
        lambda0,
        phi,
        &u0,
        100.0,
        0.05,
        &grid,
        &EvolveOptions::default(),
    )
    .unwrap();
    for fit in &rep.fits {
        assert!(fit.slope_relative_error < 0.05, "{fit:?}");
        assert!(fit.offset_band < 0.5, "{fit:?}");
        let span = 0.5 * (fit.window.1 - fit.window.0);
        assert!(fit.offset_trend.abs() * span < 0.05, "{fit:?}");
    }
    // Along x = ct the mode contributes e^{(λ₀ - φc)t}.
    for &(c, rate) in rep.interior_rates.iter().chain(&rep.exterior_rates) {
        let expected = lambda0 - phi * c.abs();
        assert!(
            (rate - expected).abs() < 0.1 * expected.abs(),
            "c = {c}: {rate} vs {expected}"
        );
    }
}

#[test]
fn front_radius_is_stable_under_grid_refinement() {
    let g = make_gaussian(1.0, 1).unwrap();
    let v = Potential::new(Profile::Bump, 2.0, 0.5).unwrap();
    let u0 = InitialData::Gaussian {
        width: 1.0,
        height: 1.0,
    };
    let radius = |n: usize| {
        let grid = Grid1d::with_half_width(n, 64.0).unwrap();
        let s = evolve(&g, &v, &u0, 30.0, 0.05, &grid, &EvolveOptions::default()).unwrap();
        front_extract(s.last().unwrap(), &[1.0], 1.0)[0]
            .radius
            .unwrap()
    };
    let (coarse, fine) = (radius(1024), radius(4096));
    assert!((coarse - fine).abs() < 1e-3, "{coarse} vs {fine}");
}

#[test]
fn mass_grows_and_positivity_holds_with_potential() {
    let g = make_gaussian(1.0, 1).unwrap();
    let v = Potential::new(Profile::Tent, 1.0, 0.7).unwrap();
    let grid = Grid1d::with_half_width(1024, 64.0).unwrap();
    let states = evolve(
        &g,
        &v,
        &InitialData::Gaussian {
            width: 3.0,
            height: 0.2,
        },
        10.0,
        0.05,
        &grid,
        &EvolveOptions::default(),
    )
    .unwrap();
    let masses: Vec<f64> = states.iter().map(|s| grid.integrate(&s.u)).collect();
    assert!(masses.windows(2).all(|w| w[1] >= w[0]));
    assert!(states.iter().all(|s| s.u.iter().all(|u| *u >= 0.0)));
}

#[test]
fn norm_bound_is_homogeneous_and_rejects_recurrent_walks() {
    let s = make_stable_like(0.5, 1).unwrap();
    assert_eq!(gzero_v_norm_bound(&s, &Potential::zero()).unwrap(), 0.0);
    let a = gzero_v_norm_bound(&s, &Potential::new(Profile::Bump, 1.0, 0.9).unwrap()).unwrap();
    let b = gzero_v_norm_bound(&s, &Potential::new(Profile::Bump, 1.0, 0.8).unwrap()).unwrap();
    assert!((b / a - 2.0).abs() < 1e-10, "{a} {b}");
    let g = make_gaussian(1.0, 1).unwrap();
    assert_eq!(
        gzero_v_norm_bound(&g, &Potential::new(Profile::Bump, 1.0, 0.9).unwrap()),
        Err(Error::RecurrentResolvent)
    );
    let big = Potential::new(Profile::Bump, 2.0, 0.5).unwrap();
    assert!(matches!(
        stabilize(&s, &big, 100, 1e-12, &StabilizeOptions::default()),
        Err(Error::ContractionViolated { .. })
    ));
}

#[test]
fn stabilization_matches_neumann_series() {
    let s = make_stable_like(0.5, 1).unwrap();
    let v = Potential::new(Profile::Bump, 1.0, 0.95).unwrap();
    let free = stabilize(
        &s,
        &Potential::zero(),
        10,
        1e-12,
        &StabilizeOptions::default(),
    )
    .unwrap();
    assert!(free.u_infinity_nodes.iter().all(|u| *u == 1.0));
    let grid = Grid1d::new(1 << 15, 0.0625).unwrap();
    let run = stabilization_experiment(
        &s,
        &v,
        &grid,
        0.05,
        1.0,
        1e-3,
        500.0,
        16.0,
        &StabilizeOptions::default(),
    )
    .unwrap();
    let res = &run.result;
    assert!(res.norm_bound < 1.0);
    for w in res.increments.windows(2) {
        assert!(w[1] <= res.norm_bound * w[0], "{w:?} vs {}", res.norm_bound);
    }
    let cap = 1.0 / (1.0 - res.norm_bound);
    assert!(res.u_infinity_nodes.iter().all(|u| *u >= 1.0 && *u <= cap));
    assert!(run.max_decrease <= 1e-12);
    assert!(
        res.evolution_gap.unwrap() <= 1e-2,
        "{:?}",
        res.evolution_gap
    );
}
