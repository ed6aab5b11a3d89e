//! One function per subcommand. Each reads only its config and writes only to the sink.

use nonlocal_spectra::asymptotics::{local_clt_check, phase_min, LargeDeviationProfile};
use nonlocal_spectra::dynamics::{
    front_experiment, stabilization_experiment, EvolveOptions, StabilizeOptions,
};
use nonlocal_spectra::eigen::{principal_eigenvalue, threshold_scan, EigenOptions, EigenOutcome};
use nonlocal_spectra::fourier::Grid1d;
use nonlocal_spectra::greens::{
    resolvent_series_oracle, transience_test, ResolventOptions, ResolventTable,
};
use nonlocal_spectra::kernels::{default_symbol_half_width, kernel_symbol, JumpKernel};
use nonlocal_spectra::spectral::{essential_spectrum, spectrum_report, PlateauOptions};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::{num, opt, Sink};

fn eigen_options(cfg: &ExperimentConfig) -> EigenOptions {
    let mut opts = EigenOptions {
        power_tol: cfg.tolerances.power_tol,
        lambda_tol: cfg.tolerances.lambda_tol,
        refinement_tol: cfg.tolerances.refinement_tol,
        ..Default::default()
    };
    if let Some(e) = &cfg.eigen {
        opts.panels = e.panels;
        opts.nodes_per_panel = e.nodes_per_panel;
    }
    opts
}

pub fn spectrum(cfg: &ExperimentConfig, sink: &Sink) -> Result<()> {
    let kernel = cfg.kernel()?;
    let (half_width, n) = match &cfg.grid {
        Some(g) => (g.half_width, g.n_points),
        None => (default_symbol_half_width(&kernel), 1 << 14),
    };
    let symbol = kernel_symbol(&kernel, half_width, n)?;
    let opts = PlateauOptions {
        flatness_tol: cfg.tolerances.plateau_flatness,
        min_width: cfg.tolerances.plateau_min_width,
        ..Default::default()
    };
    let report = spectrum_report(&symbol, kernel.chi, &opts);
    let essential = match &cfg.potential {
        Some(_) => Some(essential_spectrum(
            &report.interval,
            &cfg.potential()?,
            kernel.chi,
        )),
        None => None,
    };
    #[derive(Serialize)]
    struct Out<'a> {
        report: &'a nonlocal_spectra::spectral::SpectrumReport,
        essential_spectrum: Option<nonlocal_spectra::spectral::EssentialSpectrum>,
    }
    sink.json(
        "spectrum.json",
        &Out {
            report: &report,
            essential_spectrum: essential,
        },
    )?;
    sink.csv(
        "plateaus.csv",
        &["lambda", "level", "k_lo", "k_hi", "measure"],
        report.plateaus.iter().map(|p| {
            vec![
                num(p.lambda),
                num(p.level),
                num(p.k_lo),
                num(p.k_hi),
                num(p.measure),
            ]
        }),
    )?;
    sink.csv(
        "symbol.csv",
        &["k", "symbol"],
        symbol
            .k_nodes
            .iter()
            .zip(&symbol.values)
            .map(|(k, v)| vec![num(*k), num(*v)]),
    )
}

pub fn transience(cfg: &ExperimentConfig, sink: &Sink) -> Result<()> {
    let kernel = cfg.kernel()?;
    let levels = cfg.transience.as_ref().map_or(40, |t| t.levels);
    let verdict = transience_test(&kernel, levels)?;
    sink.json("transience.json", &verdict)?;
    sink.csv(
        "transience.csv",
        &["level", "increment", "integral_estimate", "level_verdict"],
        verdict
            .increments
            .iter()
            .zip(&verdict.integral_estimates)
            .zip(&verdict.level_verdicts)
            .enumerate()
            .map(|(j, ((d, i), v))| vec![j.to_string(), num(*d), num(*i), format!("{v:?}")]),
    )
}

pub fn eigen(cfg: &ExperimentConfig, sink: &Sink) -> Result<()> {
    let kernel = cfg.kernel()?;
    let potential = cfg.potential()?;
    let sec = cfg.section(&cfg.eigen, "eigen")?;
    let scan = threshold_scan(&kernel, &potential, &sec.r_grid, &eigen_options(cfg))?;
    sink.json("eigen.json", &scan)?;
    sink.csv(
        "eigen_curve.csv",
        &["r", "exists", "lambda0"],
        scan.iter().map(|p| {
            let exists = match p.exists {
                Some(true) => "true",
                Some(false) => "false",
                None => "inconclusive",
            };
            vec![num(p.r), exists.to_string(), opt(p.lambda0)]
        }),
    )
}

pub fn asym(cfg: &ExperimentConfig, sink: &Sink) -> Result<()> {
    let kernel = cfg.kernel()?;
    let sec = cfg.section(&cfg.asym, "asym")?;
    let profile = LargeDeviationProfile::new(&kernel)?;
    let mut phases = Vec::new();
    for &theta in &sec.directions {
        for &lambda in &sec.lambdas {
            phases.push(phase_min(&profile, theta, lambda)?);
        }
    }
    let legendre = sec
        .p_grid
        .iter()
        .map(|&p| profile.legendre(p))
        .collect::<nonlocal_spectra::Result<Vec<_>>>()?;
    sink.csv(
        "phase.csv",
        &["theta", "lambda", "tau0", "phi", "f"],
        phases.iter().map(|d| {
            vec![
                num(d.theta),
                num(d.lambda),
                num(d.tau0),
                num(d.phi),
                num(d.prefactor),
            ]
        }),
    )?;
    sink.csv(
        "legendre.csv",
        &["p", "h_star", "nu_star"],
        legendre
            .iter()
            .map(|l| vec![num(l.p), num(l.h_star), num(l.nu_star)]),
    )?;
    sink.json("asym.json", &phases)
}

/// Internal-units `λ₀` from the inline value or a fresh eigen solve.
fn front_lambda0(
    cfg: &ExperimentConfig,
    kernel: &JumpKernel,
    r: f64,
    inline: Option<f64>,
) -> Result<f64> {
    if let Some(l) = inline {
        return Ok(l / kernel.chi);
    }
    match principal_eigenvalue(kernel, &cfg.potential()?, r, &eigen_options(cfg))? {
        EigenOutcome::Found(p) => Ok(p.lambda0_internal),
        other => Err(CliError::Precondition(format!(
            "front requires a positive principal eigenvalue at R = {r}; the eigen solve returned {}",
            match other {
                EigenOutcome::NoEigenvalue { .. } => "no eigenvalue",
                _ => "an inconclusive probe",
            }
        ))),
    }
}

pub fn front(cfg: &ExperimentConfig, sink: &Sink) -> Result<()> {
    let kernel = cfg.kernel()?;
    let sec = cfg.section(&cfg.front, "front")?;
    let lambda0 = front_lambda0(cfg, &kernel, sec.r, sec.lambda0)?;
    let phi = phase_min(&LargeDeviationProfile::new(&kernel)?, 1.0, lambda0)?.phi;
    let potential = cfg.potential()?.with_scale(sec.r)?;
    let grid = Grid1d::with_half_width(sec.n_points, sec.half_width)?;
    let opts = EvolveOptions {
        snapshot_every: sec.snapshot_every,
        ..Default::default()
    };
    let report = front_experiment(
        &kernel,
        &potential,
        lambda0,
        phi,
        &sec.u0,
        sec.t_final,
        sec.dt,
        &grid,
        &opts,
    )?;
    let chi = kernel.chi;
    let mut rows = Vec::new();
    for (i, &t) in report.trace.times.iter().enumerate() {
        for (d, &dir) in report.trace.directions.iter().enumerate() {
            if let Some(r) = report.trace.radii[d][i] {
                rows.push(vec![num(t / chi), num(dir), num(r)]);
            }
        }
    }
    sink.csv("front_trace.csv", &["t", "direction", "radius"], rows)?;
    #[derive(Serialize)]
    struct Fit<'a> {
        lambda0: f64,
        phi: f64,
        speed: f64,
        slope: Vec<f64>,
        fits: &'a [nonlocal_spectra::dynamics::FrontFit],
        interior_rates: &'a [(f64, f64)],
        exterior_rates: &'a [(f64, f64)],
    }
    sink.json(
        "front_fit.json",
        &Fit {
            lambda0: lambda0 * chi,
            phi,
            speed: report.speed * chi,
            slope: report.fits.iter().map(|f| f.slope).collect(),
            fits: &report.fits,
            interior_rates: &report.interior_rates,
            exterior_rates: &report.exterior_rates,
        },
    )
}

pub fn stabilize(cfg: &ExperimentConfig, sink: &Sink) -> Result<()> {
    let kernel = cfg.kernel()?;
    let sec = cfg.section(&cfg.stabilize, "stabilize")?;
    let potential = cfg.potential()?.with_scale(sec.r)?;
    let grid = Grid1d::new(sec.n_points, sec.spacing)?;
    let opts = StabilizeOptions::default();
    let run = stabilization_experiment(
        &kernel,
        &potential,
        &grid,
        sec.dt,
        sec.snapshot_every,
        sec.increment_tol,
        sec.t_max,
        sec.reach,
        &opts,
    )?;
    #[derive(Serialize)]
    struct Out<'a> {
        norm_bound: f64,
        n_terms: usize,
        evolution_gap: Option<f64>,
        stop_time: f64,
        max_decrease: f64,
        neumann_increments: &'a [f64],
    }
    let res = &run.result;
    sink.json(
        "stabilize.json",
        &Out {
            norm_bound: res.norm_bound,
            n_terms: res.neumann_terms,
            evolution_gap: res.evolution_gap,
            stop_time: run.stop_time / kernel.chi,
            max_decrease: run.max_decrease,
            neumann_increments: &res.increments,
        },
    )?;
    sink.csv(
        "u_infinity.csv",
        &["x", "u_infinity"],
        res.nodes
            .iter()
            .zip(&res.u_infinity_nodes)
            .map(|(x, u)| vec![num(*x), num(*u)]),
    )?;
    sink.csv(
        "evolution_increments.csv",
        &["t", "increment"],
        run.increments
            .iter()
            .map(|(t, d)| vec![num(t / kernel.chi), num(*d)]),
    )
}

#[derive(Serialize)]
struct SeriesRow {
    lambda: f64,
    x: f64,
    table: f64,
    series: f64,
    abs_error: f64,
}

pub fn oracle(cfg: &ExperimentConfig, sink: &Sink) -> Result<()> {
    let kernel = cfg.kernel()?;
    let sec = cfg.section(&cfg.oracle, "oracle")?;
    let mut breaches = Vec::new();

    let mut clt_rows = Vec::new();
    let mut clt_sup = Vec::new();
    if !sec.clt_n.is_empty() {
        let profile = LargeDeviationProfile::new(&kernel)?;
        for &n in &sec.clt_n {
            let ys: Vec<f64> = sec.clt_ratios.iter().map(|r| r * n as f64).collect();
            let rep = local_clt_check(&profile, n, &ys)?;
            if rep.sup_rel_error > sec.clt_tol {
                breaches.push(format!(
                    "local limit at n = {n}: {:.3e} > {:.1e}",
                    rep.sup_rel_error, sec.clt_tol
                ));
            }
            clt_sup.push((n, rep.sup_rel_error));
            for p in rep.points {
                clt_rows.push(vec![
                    n.to_string(),
                    num(p.y),
                    num(p.oracle),
                    num(p.formula),
                    num(p.rel_error),
                ]);
            }
        }
    }

    let mut series = Vec::new();
    if !sec.series_lambdas.is_empty() {
        let x_max = sec.series_x.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for &lambda in &sec.series_lambdas {
            let table = ResolventTable::new(
                &kernel,
                lambda,
                x_max.max(1.0),
                &ResolventOptions::default(),
            )?;
            for &x in &sec.series_x {
                let s = resolvent_series_oracle(
                    &kernel,
                    lambda,
                    x,
                    sec.series_terms,
                    1e-3 * sec.series_tol,
                )?
                .value;
                let t = table.t(x);
                series.push(SeriesRow {
                    lambda,
                    x,
                    table: t,
                    series: s,
                    abs_error: (t - s).abs(),
                });
            }
        }
        let sup = series.iter().map(|r| r.abs_error).fold(0.0, f64::max);
        if sup > sec.series_tol {
            breaches.push(format!(
                "resolvent vs series: {sup:.3e} > {:.1e}",
                sec.series_tol
            ));
        }
    }

    sink.csv(
        "oracle_clt.csv",
        &["n", "y", "oracle", "formula", "rel_error"],
        clt_rows,
    )?;
    sink.csv(
        "oracle_series.csv",
        &["lambda", "x", "table", "series", "abs_error"],
        series.iter().map(|r| {
            vec![
                num(r.lambda),
                num(r.x),
                num(r.table),
                num(r.series),
                num(r.abs_error),
            ]
        }),
    )?;
    #[derive(Serialize)]
    struct Out<'a> {
        clt_sup_rel_error: &'a [(usize, f64)],
        series: &'a [SeriesRow],
        breaches: &'a [String],
    }
    sink.json(
        "oracle.json",
        &Out {
            clt_sup_rel_error: &clt_sup,
            series: &series,
            breaches: &breaches,
        },
    )?;
    if breaches.is_empty() {
        Ok(())
    } else {
        Err(CliError::Breach(breaches.join("; ")))
    }
}
