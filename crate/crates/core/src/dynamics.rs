//! Evolution of `∂u/∂t = (L + v) u` on a periodic grid, front extraction and
//! the front-law fit, and the stabilization limit `(1 - G₀v)⁻¹ 1`.
//!
//! Time is internal (`s = χt`); the kernel's `χ` is applied by callers.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fourier::{Grid1d, Spectral};
use crate::greens::{
    one_minus_symbol_on_grid, transience_test, transition_density, FourierOptions,
    ResolventOptions, ResolventTable, Verdict,
};
use crate::kernels::{JumpKernel, Potential};
use crate::quad::{linear_fit, GaussLegendre};

/// Initial data `u₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Constant {
        value: f64,
    },
    /// `height` on `|x| ≤ radius`, zero outside.
    Box {
        radius: f64,
        height: f64,
    },
    Gaussian {
        width: f64,
        height: f64,
    },
}

impl InitialData {
    pub fn sample(&self, grid: &Grid1d) -> Result<Vec<f64>> {
        let u: Vec<f64> = match *self {
            InitialData::Constant { value } => vec![value; grid.n],
            InitialData::Box { radius, height } => grid
                .nodes()
                .iter()
                .map(|x| if x.abs() <= radius { height } else { 0.0 })
                .collect(),
            InitialData::Gaussian { width, height } => grid
                .nodes()
                .iter()
                .map(|x| height * (-0.5 * (x / width).powi(2)).exp())
                .collect(),
        };
        if u.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(invalid(
                "u0",
                "initial data must be finite and non-negative",
            ));
        }
        Ok(u)
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, InitialData::Constant { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    Strang,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvolutionState {
    pub grid: Grid1d,
    pub t: f64,
    pub dt: f64,
    pub scheme: Scheme,
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EvolveOptions {
    /// Emit a state every `snapshot_every` time units (rounded to whole steps).
    pub snapshot_every: f64,
    /// Abort once `u ≥ kill_threshold` within this fraction of the half-width
    /// from the boundary. Disabled for constant initial data.
    pub kill_zone: f64,
    pub kill_threshold: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            snapshot_every: 1.0,
            kill_zone: 0.2,
            kill_threshold: 1.0,
        }
    }
}

/// Strang splitting: `e^{dt v/2}`, then `e^{dt(â - 1)}` in Fourier space, then `e^{dt v/2}`.
pub struct Evolver {
    grid: Grid1d,
    spectral: Spectral,
    half_potential: Vec<f64>,
    free: Vec<f64>,
    scratch: Vec<Complex64>,
    pub u: Vec<f64>,
    pub t: f64,
    pub dt: f64,
    kill: Option<(usize, f64)>,
}

impl Evolver {
    pub fn new(
        kernel: &JumpKernel,
        potential: &Potential,
        u0: &InitialData,
        dt: f64,
        grid: &Grid1d,
        opts: &EvolveOptions,
    ) -> Result<Self> {
        if kernel.dim != 1 {
            return Err(Error::UnsupportedDimension(kernel.dim));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(invalid("dt", format!("{dt} must be positive")));
        }
        let half_potential = grid
            .nodes()
            .iter()
            .map(|&x| (0.5 * dt * potential.value(x)).exp())
            .collect();
        let free = one_minus_symbol_on_grid(kernel, grid)
            .iter()
            .map(|d| (-dt * d).exp())
            .collect();
        let kill = if u0.is_constant() || opts.kill_zone <= 0.0 {
            None
        } else {
            let width = (opts.kill_zone * grid.n as f64 / 2.0).ceil() as usize;
            Some((width.max(1), opts.kill_threshold))
        };
        Ok(Self {
            grid: *grid,
            spectral: Spectral::new(*grid),
            half_potential,
            free,
            scratch: Vec::with_capacity(grid.n),
            u: u0.sample(grid)?,
            t: 0.0,
            dt,
            kill,
        })
    }

    pub fn step(&mut self) -> Result<()> {
        for (u, e) in self.u.iter_mut().zip(&self.half_potential) {
            *u *= e;
        }
        self.spectral
            .apply_multiplier_into(&mut self.u, &self.free, &mut self.scratch);
        for (u, e) in self.u.iter_mut().zip(&self.half_potential) {
            // Round-off can leave -1e-17 where the exact step is positive.
            *u = u.max(0.0) * e;
        }
        self.t += self.dt;
        if let Some((width, threshold)) = self.kill {
            let n = self.u.len();
            let edge = self.u[..width]
                .iter()
                .chain(&self.u[n - width..])
                .copied()
                .fold(0.0, f64::max);
            if edge >= threshold {
                return Err(Error::DomainExhausted { t: self.t });
            }
        }
        Ok(())
    }

    pub fn state(&self) -> EvolutionState {
        EvolutionState {
            grid: self.grid,
            t: self.t,
            dt: self.dt,
            scheme: Scheme::Strang,
            u: self.u.clone(),
        }
    }
}

/// States at `t = 0` and every `snapshot_every` up to `t_final`.
pub fn evolve(
    kernel: &JumpKernel,
    potential: &Potential,
    u0: &InitialData,
    t_final: f64,
    dt: f64,
    grid: &Grid1d,
    opts: &EvolveOptions,
) -> Result<Vec<EvolutionState>> {
    let mut ev = Evolver::new(kernel, potential, u0, dt, grid, opts)?;
    let steps = (t_final / dt).round() as usize;
    let every = ((opts.snapshot_every / dt).round() as usize).max(1);
    let mut out = vec![ev.state()];
    for s in 1..=steps {
        ev.step()?;
        if s % every == 0 || s == steps {
            out.push(ev.state());
        }
    }
    Ok(out)
}

/// Outermost threshold crossing along one direction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrontPoint {
    pub direction: f64,
    pub radius: Option<f64>,
    /// Number of crossings along the ray; more than one means the outermost was taken.
    pub crossings: usize,
}

/// Front radius along `directions` (each `±1`) by linear interpolation.
pub fn front_extract(
    state: &EvolutionState,
    directions: &[f64],
    threshold: f64,
) -> Vec<FrontPoint> {
    let g = state.grid;
    let o = g.origin();
    directions
        .iter()
        .map(|&dir| {
            let ray: Vec<(f64, f64)> = if dir > 0.0 {
                (o..g.n).map(|j| (g.x(j), state.u[j])).collect()
            } else {
                (0..=o).rev().map(|j| (-g.x(j), state.u[j])).collect()
            };
            let mut crossings = 0;
            let mut radius = None;
            for w in ray.windows(2) {
                let ((r0, u0), (r1, u1)) = (w[0], w[1]);
                if (u0 >= threshold) != (u1 >= threshold) {
                    crossings += 1;
                    radius = Some(r0 + (threshold - u0) * (r1 - r0) / (u1 - u0));
                }
            }
            FrontPoint {
                direction: dir,
                radius,
                crossings,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FrontTrace {
    pub times: Vec<f64>,
    pub directions: Vec<f64>,
    /// `radii[d][i]` for direction `d` at `times[i]`.
    pub radii: Vec<Vec<Option<f64>>>,
    pub u_max: Vec<f64>,
    pub threshold: f64,
}

pub fn front_trace(states: &[EvolutionState], directions: &[f64], threshold: f64) -> FrontTrace {
    let mut radii = vec![Vec::with_capacity(states.len()); directions.len()];
    for s in states {
        for (d, fp) in front_extract(s, directions, threshold)
            .into_iter()
            .enumerate()
        {
            radii[d].push(fp.radius);
        }
    }
    FrontTrace {
        times: states.iter().map(|s| s.t).collect(),
        directions: directions.to_vec(),
        radii,
        u_max: states
            .iter()
            .map(|s| s.u.iter().copied().fold(0.0, f64::max))
            .collect(),
        threshold,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FrontFit {
    pub direction: f64,
    pub slope: f64,
    pub slope_relative_error: f64,
    pub intercept: f64,
    /// Spread of `radius - λ₀t/φ` over the final half-window.
    pub offset_band: f64,
    /// Least-squares slope of that residual against `t` over the final half-window.
    pub offset_trend: f64,
    pub window: (f64, f64),
    pub points: usize,
}

/// Regress the radius on `X = (λ₀t + ((1-d)/2) ln t)/φ` over the window where
/// `λ₀t ≥ 5` and `u_max ≥ 10`; the slope should be 1.
pub fn front_law_fit(trace: &FrontTrace, lambda0: f64, phi: f64) -> Result<Vec<FrontFit>> {
    if !(lambda0 > 0.0 && phi > 0.0) {
        return Err(invalid("lambda0/phi", "must be positive"));
    }
    trace
        .directions
        .iter()
        .enumerate()
        .map(|(d, &dir)| {
            let pts: Vec<(f64, f64)> = trace
                .times
                .iter()
                .zip(&trace.radii[d])
                .zip(&trace.u_max)
                .filter(|((t, _), m)| lambda0 * **t >= 5.0 && **m >= 10.0)
                .filter_map(|((t, r), _)| r.map(|r| (*t, r)))
                .collect();
            if pts.len() < 8 {
                return Err(Error::WindowTooShort { points: pts.len() });
            }
            let x: Vec<f64> = pts.iter().map(|(t, _)| lambda0 * t / phi).collect();
            let y: Vec<f64> = pts.iter().map(|(_, r)| *r).collect();
            let (slope, intercept) = linear_fit(&x, &y);
            let half = pts.len() / 2;
            let late = &pts[half..];
            let resid: Vec<f64> = late.iter().map(|(t, r)| r - lambda0 * t / phi).collect();
            let times: Vec<f64> = late.iter().map(|(t, _)| *t).collect();
            let band = resid.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                - resid.iter().copied().fold(f64::INFINITY, f64::min);
            Ok(FrontFit {
                direction: dir,
                slope,
                slope_relative_error: (slope - 1.0).abs(),
                intercept,
                offset_band: band,
                offset_trend: linear_fit(&times, &resid).0,
                window: (pts[0].0, pts[pts.len() - 1].0),
                points: pts.len(),
            })
        })
        .collect()
}

/// `d ln u(t, ct)/dt` along moving points `x = ±ct`, fitted over states with `t ≥ t_min`.
pub fn ray_growth_rates(states: &[EvolutionState], speeds: &[f64], t_min: f64) -> Vec<(f64, f64)> {
    speeds
        .iter()
        .map(|&c| {
            let (ts, logs): (Vec<f64>, Vec<f64>) = states
                .iter()
                .filter(|s| s.t >= t_min)
                .filter_map(|s| {
                    let g = s.grid;
                    let x = c * s.t;
                    let pos = x / g.h + g.origin() as f64;
                    let j = pos.floor() as usize;
                    if j + 1 >= g.n {
                        return None;
                    }
                    let w = pos - j as f64;
                    let u = (1.0 - w) * s.u[j] + w * s.u[j + 1];
                    (u > 0.0).then(|| (s.t, u.ln()))
                })
                .unzip();
            let rate = if ts.len() >= 2 {
                linear_fit(&ts, &logs).0
            } else {
                f64::NAN
            };
            (c, rate)
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FrontReport {
    pub lambda0: f64,
    pub phi: f64,
    /// Predicted front speed `λ₀/φ`.
    pub speed: f64,
    pub trace: FrontTrace,
    pub fits: Vec<FrontFit>,
    /// `(c, d ln u(t, ct)/dt)` at `c = ±0.9 λ₀/φ` (interior) and `±1.1 λ₀/φ` (exterior).
    pub interior_rates: Vec<(f64, f64)>,
    pub exterior_rates: Vec<(f64, f64)>,
}

/// Evolve, trace the `u = 1` front in both directions, fit the front law, and
/// probe growth inside and outside the predicted front.
#[allow(clippy::too_many_arguments)]
pub fn front_experiment(
    kernel: &JumpKernel,
    potential: &Potential,
    lambda0: f64,
    phi: f64,
    u0: &InitialData,
    t_final: f64,
    dt: f64,
    grid: &Grid1d,
    opts: &EvolveOptions,
) -> Result<FrontReport> {
    let states = evolve(kernel, potential, u0, t_final, dt, grid, opts)?;
    let trace = front_trace(&states, &[1.0, -1.0], 1.0);
    let fits = front_law_fit(&trace, lambda0, phi)?;
    let speed = lambda0 / phi;
    let t_min = 0.4 * t_final;
    let interior_rates = ray_growth_rates(&states, &[0.9 * speed, -0.9 * speed], t_min);
    let exterior_rates = ray_growth_rates(&states, &[1.1 * speed, -1.1 * speed], t_min);
    Ok(FrontReport {
        lambda0,
        phi,
        speed,
        trace,
        fits,
        interior_rates,
        exterior_rates,
    })
}

const ANNULUS_LEVELS: usize = 60;

/// `sup v + (1/2π) ∫ |â ṽ| / (1 - â) dk`, an upper bound on `‖f ↦ G₀(v f)‖∞`.
pub fn gzero_v_norm_bound(kernel: &JumpKernel, potential: &Potential) -> Result<f64> {
    if kernel.dim != 1 {
        return Err(Error::UnsupportedDimension(kernel.dim));
    }
    if potential.is_zero() {
        return Ok(0.0);
    }
    match transience_test(kernel, ANNULUS_LEVELS)?.verdict {
        Verdict::Transient => {}
        Verdict::Recurrent => return Err(Error::RecurrentResolvent),
        Verdict::Inconclusive => {
            return Err(Error::Resolution(
                "transience of the kernel is not established".into(),
            ))
        }
    }
    let integrand = |k: f64| {
        let d = kernel.one_minus_symbol(k);
        ((1.0 - d) * potential.fourier(k)).abs() / d
    };
    let rule = GaussLegendre::new(16);
    // Near the origin: dyadic annuli in (0, 1] plus a k^{-p} model on the last disc.
    let mut near = 0.0;
    for j in 0..ANNULUS_LEVELS {
        let hi = 0.5f64.powi(j as i32);
        near += rule.integrate(0.5 * hi, hi, integrand);
    }
    let eps = 0.5f64.powi(ANNULUS_LEVELS as i32);
    let (m1, m2) = (integrand(eps), integrand(2.0 * eps));
    let p = (m1 / m2).log2().clamp(0.0, 0.999);
    near += m1 * eps / (1.0 - p);
    // Unit panels outward until three in a row are negligible.
    let mut far = 0.0;
    let mut quiet = 0;
    let mut k = 1.0;
    while quiet < 3 {
        let piece = rule.integrate(k, k + 1.0, integrand);
        far += piece;
        quiet = if piece <= 1e-16 * (near + far) {
            quiet + 1
        } else {
            0
        };
        k += 1.0;
        if k > 1e5 {
            return Err(Error::Resolution(
                "k-integral of the norm bound did not converge by k = 1e5".into(),
            ));
        }
    }
    // Both halves of the line.
    Ok(potential.sup_bound() + (near + far) / PI)
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilizationResult {
    pub norm_bound: f64,
    /// Quadrature nodes on `supp v` and `u∞` there.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub u_infinity_nodes: Vec<f64>,
    /// `sup |(G₀v)ⁿ 1|` on the nodes for `n = 1, 2, …`.
    pub increments: Vec<f64>,
    pub neumann_terms: usize,
    /// `sup |u(T) - u∞|` once an evolution has been compared.
    pub evolution_gap: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct StabilizeOptions {
    pub panels: usize,
    pub nodes_per_panel: usize,
    pub resolvent: ResolventOptions,
}

impl Default for StabilizeOptions {
    fn default() -> Self {
        Self {
            panels: 32,
            nodes_per_panel: 8,
            resolvent: ResolventOptions::default(),
        }
    }
}

/// `u∞ = Σ (G₀v)ⁿ 1` on quadrature nodes covering `supp v`, with
/// `G₀(g)(x) = g(x) + ∫ T₀(x - y) g(y) dy` applied by direct quadrature.
pub fn stabilize(
    kernel: &JumpKernel,
    potential: &Potential,
    n_terms: usize,
    tol: f64,
    opts: &StabilizeOptions,
) -> Result<StabilizationResult> {
    let norm_bound = gzero_v_norm_bound(kernel, potential)?;
    if norm_bound >= 1.0 {
        return Err(Error::ContractionViolated { bound: norm_bound });
    }
    let s = potential.support();
    let rule = GaussLegendre::new(opts.nodes_per_panel);
    let step = 2.0 * s / opts.panels as f64;
    let (mut nodes, mut weights) = (Vec::new(), Vec::new());
    for p in 0..opts.panels {
        rule.push_panel(
            -s + p as f64 * step,
            -s + (p + 1) as f64 * step,
            &mut nodes,
            &mut weights,
        );
    }
    let n = nodes.len();
    let mut increments = Vec::new();
    let mut total = vec![1.0; n];
    let mut term = vec![1.0; n];
    if !potential.is_zero() {
        let table = ResolventTable::new(kernel, 0.0, 2.0 * s, &opts.resolvent)?;
        let v: Vec<f64> = nodes.iter().map(|&x| potential.value(x)).collect();
        let kernel_matrix: Vec<f64> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                weights[j] * table.t(nodes[i] - nodes[j]) * v[j]
            })
            .collect();
        for _ in 0..n_terms {
            let next: Vec<f64> = (0..n)
                .map(|i| {
                    v[i] * term[i]
                        + (0..n)
                            .map(|j| kernel_matrix[i * n + j] * term[j])
                            .sum::<f64>()
                })
                .collect();
            if next.iter().any(|x| *x < 0.0) {
                return Err(Error::NumericalPositivity(
                    "negative Neumann increment".into(),
                ));
            }
            let sup = next.iter().copied().fold(0.0, f64::max);
            increments.push(sup);
            for (t, x) in total.iter_mut().zip(&next) {
                *t += x;
            }
            term = next;
            if sup < tol {
                break;
            }
        }
    }
    Ok(StabilizationResult {
        norm_bound,
        nodes,
        weights,
        u_infinity_nodes: total,
        neumann_terms: increments.len() + 1,
        increments,
        evolution_gap: None,
    })
}

/// `u∞(x) = (1 + ∫ T₀(x - y) v(y) u∞(y) dy) / (1 - v(x))` on the nodes of `grid` with `|x| ≤ reach`.
pub fn u_infinity_on_grid(
    kernel: &JumpKernel,
    potential: &Potential,
    result: &StabilizationResult,
    grid: &Grid1d,
    reach: f64,
    opts: &StabilizeOptions,
) -> Result<Vec<(usize, f64)>> {
    if potential.is_zero() {
        return Ok((0..grid.n)
            .filter(|&j| grid.x(j).abs() <= reach)
            .map(|j| (j, 1.0))
            .collect());
    }
    let table = ResolventTable::new(
        kernel,
        0.0,
        reach + potential.support() + grid.h,
        &opts.resolvent,
    )?;
    let src: Vec<f64> = result
        .nodes
        .iter()
        .zip(&result.weights)
        .zip(&result.u_infinity_nodes)
        .map(|((&y, w), u)| w * potential.value(y) * u)
        .collect();
    Ok((0..grid.n)
        .into_par_iter()
        .filter(|&j| grid.x(j).abs() <= reach)
        .map(|j| {
            let x = grid.x(j);
            let conv: f64 = result
                .nodes
                .iter()
                .zip(&src)
                .map(|(y, s)| table.t(x - y) * s)
                .sum();
            (j, (1.0 + conv) / (1.0 - potential.value(x)))
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilizationRun {
    pub result: StabilizationResult,
    /// Time of the first snapshot whose increment fell below the tolerance.
    pub stop_time: f64,
    pub increments: Vec<(f64, f64)>,
    /// Largest pointwise decrease between snapshots (≤ 0 up to round-off when monotone).
    pub max_decrease: f64,
}

/// Evolve from `u₀ ≡ 1` until `sup |u(t + Δ) - u(t)| < increment_tol` (Δ the
/// snapshot spacing), then compare with `u∞` on `|x| ≤ reach`.
#[allow(clippy::too_many_arguments)]
pub fn stabilization_experiment(
    kernel: &JumpKernel,
    potential: &Potential,
    grid: &Grid1d,
    dt: f64,
    snapshot_every: f64,
    increment_tol: f64,
    t_max: f64,
    reach: f64,
    opts: &StabilizeOptions,
) -> Result<StabilizationRun> {
    let mut result = stabilize(kernel, potential, 500, 1e-14, opts)?;
    let limit = u_infinity_on_grid(kernel, potential, &result, grid, reach, opts)?;
    let evo_opts = EvolveOptions {
        snapshot_every,
        ..Default::default()
    };
    let mut ev = Evolver::new(
        kernel,
        potential,
        &InitialData::Constant { value: 1.0 },
        dt,
        grid,
        &evo_opts,
    )?;
    let every = ((snapshot_every / dt).round() as usize).max(1);
    let mut prev = ev.u.clone();
    let mut increments = Vec::new();
    let mut max_decrease = f64::NEG_INFINITY;
    loop {
        for _ in 0..every {
            ev.step()?;
        }
        let mut inc: f64 = 0.0;
        for (a, b) in ev.u.iter().zip(&prev) {
            inc = inc.max((a - b).abs());
            max_decrease = max_decrease.max(b - a);
        }
        increments.push((ev.t, inc));
        prev.clone_from(&ev.u);
        if inc < increment_tol {
            break;
        }
        if ev.t >= t_max {
            return Err(Error::IterationLimit {
                iterations: increments.len(),
                last_change: inc,
                estimate: ev.t,
            });
        }
    }
    let gap = limit
        .iter()
        .map(|&(j, u)| (ev.u[j] - u).abs())
        .fold(0.0, f64::max);
    result.evolution_gap = Some(gap);
    Ok(StabilizationRun {
        result,
        stop_time: ev.t,
        increments,
        max_decrease,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PtBoundReport {
    pub epsilon: f64,
    pub c: f64,
    pub alpha: f64,
    /// Points `(t, x)` where the fitted bound fails (empty unless the fit degenerates).
    pub violations: Vec<(f64, f64)>,
    pub samples: usize,
}

/// Smallest `(C, α)` with `p(t, x) ≤ C t e^{αε²t - ε|x|}` on the sampled box,
/// choosing `α ≥ 0` to minimize the bound at the largest sampled `t` and `x = 0`.
pub fn pt_bound_check(
    kernel: &JumpKernel,
    t_grid: &[f64],
    x_grid: &Grid1d,
    x_max: f64,
    epsilon: f64,
) -> Result<PtBoundReport> {
    if !(epsilon >= 0.0) {
        return Err(invalid("epsilon", "must be non-negative"));
    }
    let opts = FourierOptions::default();
    let mut samples: Vec<(f64, f64, f64)> = Vec::new();
    for &t in t_grid {
        let td = transition_density(kernel, t, x_grid, &opts)?;
        for (j, &p) in td.regular.iter().enumerate() {
            let x = x_grid.x(j);
            if x.abs() <= x_max && p > 1e-250 {
                samples.push((t, x, p));
            }
        }
    }
    // z_i = ln p - ln t + ε|x|; need ln C ≥ z_i - α ε² t_i for all i.
    let e2 = epsilon * epsilon;
    let z: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(t, x, p)| (t, p.ln() - t.ln() + epsilon * x.abs()))
        .collect();
    let t_top = t_grid.iter().copied().fold(0.0, f64::max);
    let ln_c = |alpha: f64| {
        z.iter()
            .map(|(t, zi)| zi - alpha * e2 * t)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let objective = |alpha: f64| ln_c(alpha) + alpha * e2 * t_top;
    // Convex piecewise-linear in α: golden-section on [0, α_max].
    let (mut a, mut b) = (0.0, if e2 > 0.0 { 50.0 } else { 0.0 });
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        if b - a < 1e-12 {
            break;
        }
        let (c1, c2) = (b - g * (b - a), a + g * (b - a));
        if objective(c1) <= objective(c2) {
            b = c2;
        } else {
            a = c1;
        }
    }
    let alpha = 0.5 * (a + b);
    let lc = ln_c(alpha);
    let violations = samples
        .iter()
        .filter(|&&(t, x, p)| {
            p > (lc + t.ln() + alpha * e2 * t - epsilon * x.abs()).exp() * (1.0 + 1e-12)
        })
        .map(|&(t, x, _)| (t, x))
        .collect();
    Ok(PtBoundReport {
        epsilon,
        c: lc.exp(),
        alpha,
        violations,
        samples: samples.len(),
    })
}
