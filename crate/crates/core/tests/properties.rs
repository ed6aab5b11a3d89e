use std::sync::OnceLock;

use proptest::prelude::*;

use nonlocal_spectra::asymptotics::{legendre, log_mgf, LargeDeviationProfile};
use nonlocal_spectra::dynamics::{evolve, gzero_v_norm_bound, EvolveOptions, InitialData};
use nonlocal_spectra::eigen::{build_bs_operator, perron_eigenvalue, EigenOptions};
use nonlocal_spectra::fourier::Grid1d;
use nonlocal_spectra::greens::{ResolventOptions, ResolventTable};
use nonlocal_spectra::kernels::{
    make_embedded_family, make_epanechnikov, make_gaussian, make_quartic_exp, make_stable_like,
    JumpKernel, Potential, Profile,
};

fn kernels() -> &'static [JumpKernel] {
    static KERNELS: OnceLock<Vec<JumpKernel>> = OnceLock::new();
    KERNELS.get_or_init(|| {
        vec![
            make_gaussian(1.3, 1).unwrap(),
            stable_half().clone(),
            make_stable_like(1.5, 1).unwrap(),
            make_embedded_family(0.3).unwrap(),
            make_epanechnikov(2.0).unwrap(),
            make_quartic_exp(),
        ]
    })
}

fn stable_half() -> &'static JumpKernel {
    static STABLE: OnceLock<JumpKernel> = OnceLock::new();
    STABLE.get_or_init(|| make_stable_like(0.5, 1).unwrap())
}

fn profile() -> impl Strategy<Value = Profile> {
    prop_oneof![
        Just(Profile::Bump),
        Just(Profile::Quartic),
        Just(Profile::Tent)
    ]
}

proptest! {
    #[test]
    fn symbol_is_even_and_bounded(k in -50.0f64..50.0) {
        for kern in kernels() {
            let s = kern.symbol(k);
            prop_assert!(s.abs() <= 1.0 + 1e-12);
            prop_assert!((s - kern.symbol(-k)).abs() <= 1e-12);
            prop_assert!(kern.one_minus_symbol(k) >= -1e-12);
            prop_assert!((kern.density(k) - kern.density(-k)).abs() <= 1e-14);
        }
    }

    #[test]
    fn log_mgf_is_even_nonnegative_with_positive_curvature(nu in -3.0f64..3.0) {
        for kern in [make_gaussian(0.8, 1).unwrap(), make_quartic_exp(), make_epanechnikov(1.0).unwrap()] {
            let m = log_mgf(&kern, nu).unwrap();
            let mirror = log_mgf(&kern, -nu).unwrap();
            prop_assert!(m.h >= -1e-14);
            prop_assert!((m.h - mirror.h).abs() <= 1e-12 * m.h.abs().max(1.0));
            prop_assert!((m.grad + mirror.grad).abs() <= 1e-12 * m.grad.abs().max(1.0));
            prop_assert!(m.hess > 0.0);
        }
    }

    #[test]
    fn rate_function_is_convex(p in -1.8f64..1.8, d in 0.01f64..0.5) {
        let prof = LargeDeviationProfile::new(&make_quartic_exp()).unwrap();
        let (a, b, c) = (
            legendre(&prof, p - d).unwrap().h_star,
            legendre(&prof, p).unwrap().h_star,
            legendre(&prof, p + d).unwrap().h_star,
        );
        prop_assert!(b >= -1e-14);
        prop_assert!(b <= 0.5 * (a + c) + 1e-12);
    }

    #[test]
    fn resolvent_is_positive_and_decreasing_in_lambda(l1 in 0.05f64..2.0, ratio in 1.05f64..3.0, x in 0.0f64..8.0) {
        let g = make_gaussian(1.0, 1).unwrap();
        let lo = ResolventTable::new(&g, l1, 10.0, &ResolventOptions::default()).unwrap();
        let hi = ResolventTable::new(&g, l1 * ratio, 10.0, &ResolventOptions::default()).unwrap();
        prop_assert!(hi.t(x) > 0.0);
        prop_assert!(hi.t(x) < lo.t(x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn perron_value_decreases_in_lambda(r in 0.5f64..3.0, l1 in 0.02f64..1.0, ratio in 1.1f64..3.0, prof in profile()) {
        let g = make_gaussian(1.0, 1).unwrap();
        let v = Potential::new(prof, 1.0, 0.4).unwrap();
        let opts = EigenOptions::default();
        let mu = |l: f64| perron_eigenvalue(&build_bs_operator(&g, &v, l, r, &opts).unwrap(), 1e-12, 10_000).unwrap();
        let (a, b) = (mu(l1), mu(l1 * ratio));
        prop_assert!(b.mu0 < a.mu0);
        prop_assert!(a.psi.iter().all(|p| *p >= 0.0));
    }

    #[test]
    fn evolution_preserves_sign_and_order(radius in 0.5f64..3.0, delta in 0.3f64..0.95, prof in profile()) {
        let g = make_gaussian(1.0, 1).unwrap();
        let v = Potential::new(prof, radius, delta).unwrap();
        let grid = Grid1d::with_half_width(512, 32.0).unwrap();
        let opts = EvolveOptions { snapshot_every: 0.5, ..Default::default() };
        let from_box = evolve(&g, &v, &InitialData::Box { radius: 1.0, height: 0.3 }, 5.0, 0.1, &grid, &opts).unwrap();
        prop_assert!(from_box.iter().all(|s| s.u.iter().all(|u| *u >= 0.0)));
        let from_one = evolve(&g, &v, &InitialData::Constant { value: 1.0 }, 5.0, 0.1, &grid, &opts).unwrap();
        for w in from_one.windows(2) {
            prop_assert!(w[0].u.iter().zip(&w[1].u).all(|(a, b)| *b >= *a - 1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn norm_bound_is_one_homogeneous(scale in 0.05f64..1.0, prof in profile()) {
        let s = stable_half();
        let base = Potential::new(prof, 1.0, 0.5).unwrap();
        let scaled = Potential::new(prof, 1.0, 1.0 - 0.5 * scale).unwrap();
        let (a, b) = (gzero_v_norm_bound(s, &base).unwrap(), gzero_v_norm_bound(s, &scaled).unwrap());
        prop_assert!((b - scale * a).abs() <= 1e-10 * a);
    }
}
