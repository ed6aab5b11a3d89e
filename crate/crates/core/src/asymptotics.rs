//! Large deviations of the jump law and the exponential decay of `G_λ` for
//! ultra-light tails.
//!
//! With `H(ν) = ln ∫ e^{νy} a(y) dy` and its Legendre transform `H*`, the phase
//! `S(τ) = τ [H*(θ/τ) + ln(1+λ)]` satisfies `S_τ = ln(1+λ) - H(ν*(θ/τ))` and
//! `S_ττ = p³ / B(ν*(p))` at `p = 1/τ`, which is what the minimizer uses.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::RwLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fourier::{Grid1d, Spectral};
use crate::kernels::{Family, JumpKernel, TailClass};
use crate::quad::{lagrange6, linear_fit, GaussLegendre};

/// `H(ν)`, `H'(ν)` and the tilted variance `B(ν) = H''(ν)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TiltedMoments {
    pub h: f64,
    pub grad: f64,
    pub hess: f64,
}

/// Log-integrand drop at the window edges: e^{-40} ≈ 4e-18.
const EDGE_DROP: f64 = 40.0;
const MAX_WINDOW: f64 = 1e4;

fn check_tilt(kernel: &JumpKernel, nu: f64) -> Result<()> {
    if kernel.dim != 1 {
        return Err(Error::UnsupportedDimension(kernel.dim));
    }
    if !nu.is_finite() {
        return Err(Error::TiltOutOfRange { nu });
    }
    match kernel.tail {
        TailClass::UltraLight(_) => Ok(()),
        TailClass::Light(delta) if nu.abs() < delta => Ok(()),
        TailClass::Light(_) => Err(Error::TiltOutOfRange { nu }),
        _ => Err(invalid(
            "kernel",
            "the log-MGF needs an ultra-light or light tail",
        )),
    }
}

/// Integration window `[-Y, Y]` outside which `a(y) e^{νy}` is negligible.
fn tilt_window(kernel: &JumpKernel, nu: f64) -> Result<f64> {
    if let Some(r) = kernel.compact_support() {
        return Ok(r);
    }
    let g = |y: f64| kernel.log_density(y) + nu * y;
    let mut y_max = 8.0;
    while y_max <= MAX_WINDOW {
        let peak = (0..=512)
            .map(|i| g(-y_max + 2.0 * y_max * i as f64 / 512.0))
            .fold(f64::NEG_INFINITY, f64::max);
        if g(y_max) < peak - EDGE_DROP && g(-y_max) < peak - EDGE_DROP {
            return Ok(y_max);
        }
        y_max *= 1.5;
    }
    Err(Error::TiltOutOfRange { nu })
}

fn window_rule(y_max: f64) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::new(16);
    let panels = ((2.0 * y_max / 0.25).ceil() as usize).max(64);
    let step = 2.0 * y_max / panels as f64;
    let mut nodes = Vec::with_capacity(16 * panels);
    let mut weights = Vec::with_capacity(16 * panels);
    for p in 0..panels {
        rule.push_panel(
            -y_max + p as f64 * step,
            -y_max + (p + 1) as f64 * step,
            &mut nodes,
            &mut weights,
        );
    }
    (nodes, weights)
}

/// Tilted integrals by composite Gauss–Legendre on an adaptively widened window,
/// evaluated in log space so large tilts do not overflow.
pub fn log_mgf(kernel: &JumpKernel, nu: f64) -> Result<TiltedMoments> {
    check_tilt(kernel, nu)?;
    let y_max = tilt_window(kernel, nu)?;
    let (nodes, weights) = window_rule(y_max);
    let g: Vec<f64> = nodes
        .iter()
        .map(|&y| kernel.log_density(y) + nu * y)
        .collect();
    let shift = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = g
        .iter()
        .zip(&weights)
        .map(|(gi, w)| w * (gi - shift).exp())
        .collect();
    let i0: f64 = e.iter().sum();
    let mean = e.iter().zip(&nodes).map(|(ei, y)| ei * y).sum::<f64>() / i0;
    let var = e
        .iter()
        .zip(&nodes)
        .map(|(ei, y)| ei * (y - mean).powi(2))
        .sum::<f64>()
        / i0;
    Ok(TiltedMoments {
        h: shift + i0.ln(),
        grad: mean,
        hess: var,
    })
}

/// Half-width of the support along `θ̂ = ±1`; infinite for positive densities.
pub fn hull_support(kernel: &JumpKernel, _theta_hat: f64) -> f64 {
    if let Some(r) = kernel.compact_support() {
        return r;
    }
    if let Family::Custom { extent, .. } = &kernel.family {
        let floor = 1e-300;
        if kernel.density(*extent) > floor {
            return f64::INFINITY;
        }
        let (mut lo, mut hi) = (0.0, *extent);
        if kernel.density(lo) <= floor {
            return 0.0;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if kernel.density(mid) > floor {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return hi;
    }
    f64::INFINITY
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LegendrePoint {
    pub p: f64,
    pub h_star: f64,
    pub nu_star: f64,
}

/// `H`, `H*` and the hull for one kernel, with a cache of solved Legendre points.
#[derive(Debug)]
pub struct LargeDeviationProfile {
    pub kernel: JumpKernel,
    pub s_plus: f64,
    cache: RwLock<HashMap<u64, LegendrePoint>>,
}

impl LargeDeviationProfile {
    pub fn new(kernel: &JumpKernel) -> Result<Self> {
        check_tilt(kernel, 0.0)?;
        Ok(Self {
            kernel: kernel.clone(),
            s_plus: hull_support(kernel, 1.0),
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn moments(&self, nu: f64) -> Result<TiltedMoments> {
        log_mgf(&self.kernel, nu)
    }

    pub fn legendre(&self, p: f64) -> Result<LegendrePoint> {
        legendre(self, p)
    }
}

const NEWTON_TOL: f64 = 1e-12;

/// Solve `H'(ν) = p` by damped Newton from `ν = 0`; `H*(p) = pν* - H(ν*)`.
pub fn legendre(profile: &LargeDeviationProfile, p: f64) -> Result<LegendrePoint> {
    if !p.is_finite() || p.abs() >= profile.s_plus {
        return Err(Error::HullViolation {
            p,
            s_plus: profile.s_plus,
        });
    }
    if let Some(hit) = profile
        .cache
        .read()
        .expect("legendre cache poisoned")
        .get(&p.to_bits())
    {
        return Ok(*hit);
    }
    let tol = NEWTON_TOL * p.abs().max(1.0);
    let mut nu = 0.0;
    let mut m = profile.moments(nu)?;
    let mut solved = false;
    for _ in 0..200 {
        let f = m.grad - p;
        if f.abs() <= tol {
            solved = true;
            break;
        }
        let step = -f / m.hess;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..6 {
            let cand = nu + t * step;
            if let Ok(mc) = profile.moments(cand) {
                if (mc.grad - p).abs() < f.abs() {
                    accepted = Some((cand, mc));
                    break;
                }
            }
            t *= 0.5;
        }
        if accepted.is_none() {
            // Descent on the convex objective H(ν) - pν with backtracking.
            let obj = m.h - p * nu;
            let mut t = 1.0 / 64.0;
            for _ in 0..40 {
                let cand = nu + t * step;
                if let Ok(mc) = profile.moments(cand) {
                    if mc.h - p * cand < obj {
                        accepted = Some((cand, mc));
                        break;
                    }
                }
                t *= 0.5;
            }
        }
        match accepted {
            Some((cand, mc)) => {
                let moved = (cand - nu).abs();
                nu = cand;
                m = mc;
                if moved <= 1e-15 * nu.abs().max(1.0) {
                    solved = (m.grad - p).abs() <= 1e3 * tol;
                    break;
                }
            }
            None => break,
        }
    }
    if !solved {
        return Err(Error::Solver(format!(
            "Legendre solve for p = {p} stalled at ν = {nu} with H'(ν) - p = {:.3e}",
            m.grad - p
        )));
    }
    let point = LegendrePoint {
        p,
        h_star: p * nu - m.h,
        nu_star: nu,
    };
    profile
        .cache
        .write()
        .expect("legendre cache poisoned")
        .insert(p.to_bits(), point);
    Ok(point)
}

/// Decay data of `G_λ` along a direction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrontDecayProfile {
    pub theta: f64,
    pub lambda: f64,
    pub tau0: f64,
    pub phi: f64,
    pub s_tautau: f64,
    pub prefactor: f64,
    /// `ν*(θ/τ⁰)`, which equals `φ` in one dimension.
    pub nu_star: f64,
}

/// `S(τ) = τ [H*(θ/τ) + ln(1+λ)]`.
pub fn phase(profile: &LargeDeviationProfile, theta: f64, tau: f64, lambda: f64) -> Result<f64> {
    let lp = profile.legendre(theta / tau)?;
    Ok(tau * (lp.h_star + lambda.ln_1p()))
}

/// Minimize `S` over `τ > 1/s⁺` by safeguarded Newton on `S_τ = 0`.
pub fn phase_min(
    profile: &LargeDeviationProfile,
    theta: f64,
    lambda: f64,
) -> Result<FrontDecayProfile> {
    if (theta.abs() - 1.0).abs() > 1e-12 {
        return Err(invalid("theta", "must be a unit direction (±1)"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda", format!("{lambda} must be positive")));
    }
    let ell = lambda.ln_1p();
    let tau_min = 1.0 / profile.s_plus;
    // S_τ and S_ττ at τ, with ν* reused.
    let eval = |tau: f64| -> Result<(f64, f64, LegendrePoint, TiltedMoments)> {
        let lp = profile.legendre(theta / tau)?;
        let m = profile.moments(lp.nu_star)?;
        let p = 1.0 / tau;
        Ok((ell - m.h, p * p * p / m.hess, lp, m))
    };
    // S_τ < 0 near the lower end of the domain and → ln(1+λ) > 0 as τ → ∞.
    let mut sampled = Vec::new();
    let mut sign_at = |tau: f64| -> Result<f64> {
        let s_tau = eval(tau)?.0;
        sampled.push((tau, s_tau));
        Ok(s_tau)
    };
    let shrink = |tau: f64| (0.5 * tau).max(tau_min + 0.5 * (tau - tau_min));
    let (mut lo, mut hi) = (1.0, 1.0);
    let mut bracketed = false;
    if sign_at(1.0)? < 0.0 {
        hi = 2.0;
        for _ in 0..80 {
            if sign_at(hi)? > 0.0 {
                bracketed = true;
                break;
            }
            lo = hi;
            hi *= 2.0;
        }
    } else {
        lo = shrink(1.0);
        for _ in 0..80 {
            if sign_at(lo)? < 0.0 {
                bracketed = true;
                break;
            }
            hi = lo;
            lo = shrink(lo);
        }
    }
    if !bracketed {
        return Err(Error::Solver(format!(
            "phase bracketing failed; sampled (τ, S_τ): {sampled:?}"
        )));
    }
    let mut tau = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (s_tau, s_tt, ..) = eval(tau)?;
        if s_tau < 0.0 {
            lo = tau;
        } else {
            hi = tau;
        }
        let newton = tau - s_tau / s_tt;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let done = (next - tau).abs() <= 1e-14 * tau || hi - lo <= 1e-15 * tau;
        tau = next;
        if done {
            break;
        }
    }
    let (_, s_tt, lp, m) = eval(tau)?;
    let phi = tau * (lp.h_star + ell);
    if !(s_tt > 0.0 && phi > 0.0) {
        return Err(Error::Solver(format!(
            "degenerate phase minimum: S_ττ = {s_tt}, φ = {phi}"
        )));
    }
    // Laplace method on the sum over n: (1+λ)^{-1} (2πτ)^{-1/2} B^{-1/2} √(2π/S_ττ).
    let prefactor =
        (2.0 * PI * tau).powf(-0.5) * m.hess.powf(-0.5) * (2.0 * PI / s_tt).sqrt() / (1.0 + lambda);
    Ok(FrontDecayProfile {
        theta,
        lambda,
        tau0: tau,
        phi,
        s_tautau: s_tt,
        prefactor,
        nu_star: lp.nu_star,
    })
}

/// `f r^{(1-d)/2} e^{-rφ}` with `d = 1`.
pub fn green_asymptotic(decay: &FrontDecayProfile, r: f64) -> f64 {
    decay.prefactor * (-r * decay.phi).exp()
}

/// `a_n(y)` through the exponentially tilted law: with `b = a e^{νz - H(ν)}`,
/// `a_n(y) = e^{nH(ν) - νy} b^{*n}(y)`, and `b^{*n}` is centred at `nH'(ν)`.
/// With `ν = ν*(y/n)` the FFT evaluates `b^{*n}` near its peak, so the result
/// keeps its relative accuracy far into the tail.
pub fn tilted_power(kernel: &JumpKernel, n: usize, y: f64, nu: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let m = log_mgf(kernel, nu)?;
    let window = tilt_window(kernel, nu)?;
    let spread = (n as f64 * m.hess).sqrt();
    let half = (y.abs().max((n as f64 * m.grad).abs()) + 14.0 * spread + window).max(2.0 * window);
    let h_max = 0.02 * m.hess.sqrt().clamp(0.1, 1.0);
    let points = ((2.0 * half / h_max).ceil() as usize)
        .next_power_of_two()
        .max(1024);
    let grid = Grid1d::with_half_width(points, half)?;
    let b: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&z| (kernel.log_density(z) + nu * z - m.h).exp())
        .collect();
    let sp = Spectral::new(grid);
    let spec: Vec<_> = sp
        .forward(&b)
        .into_iter()
        .map(|z| z.powu(n as u32))
        .collect();
    let conv = sp.inverse_real(&spec);
    let x0 = grid.x(0);
    let value = lagrange6(&conv, x0, grid.h, y);
    Ok((n as f64 * m.h - nu * y).exp() * value)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CltPoint {
    pub y: f64,
    pub oracle: f64,
    pub formula: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CltReport {
    pub n: usize,
    pub points: Vec<CltPoint>,
    pub sup_rel_error: f64,
}

/// `e^{-nH*(y/n)} / √(2πn B(ν*(y/n)))`.
pub fn local_clt_formula(profile: &LargeDeviationProfile, n: usize, y: f64) -> Result<f64> {
    let lp = profile.legendre(y / n as f64)?;
    let b = profile.moments(lp.nu_star)?.hess;
    let nf = n as f64;
    Ok((-nf * lp.h_star).exp() / (2.0 * PI * nf * b).sqrt())
}

/// Sup relative error of the local limit formula against the tilted oracle.
pub fn local_clt_check(
    profile: &LargeDeviationProfile,
    n: usize,
    y_grid: &[f64],
) -> Result<CltReport> {
    let points = y_grid
        .par_iter()
        .map(|&y| {
            let formula = local_clt_formula(profile, n, y)?;
            let nu = profile.legendre(y / n as f64)?.nu_star;
            let oracle = tilted_power(&profile.kernel, n, y, nu)?;
            Ok(CltPoint {
                y,
                oracle,
                formula,
                rel_error: (formula - oracle).abs() / oracle,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sup_rel_error = points.iter().map(|p| p.rel_error).fold(0.0, f64::max);
    Ok(CltReport {
        n,
        points,
        sup_rel_error,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TailPoint {
    pub y: f64,
    pub oracle: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailBoundReport {
    pub n: usize,
    pub alpha: f64,
    /// `ln ∫_{-Y}^{Y} a(y) e^{|y|^α/2} dy`.
    pub c: f64,
    pub domain: f64,
    /// `c(2Y) - c(Y)`; does not vanish when the untruncated integral diverges.
    pub c_truncation_change: f64,
    pub points: Vec<TailPoint>,
    pub violations: Vec<f64>,
    pub all_hold: bool,
    /// Least-squares slopes of `ln a_n` and `ln bound` against `|y|`.
    pub oracle_log_slope: f64,
    pub bound_log_slope: f64,
}

fn tail_constant(kernel: &JumpKernel, alpha: f64, y_max: f64) -> f64 {
    let (nodes, weights) = window_rule(y_max);
    let s: f64 = nodes
        .iter()
        .zip(&weights)
        .map(|(&y, w)| w * (kernel.log_density(y) + 0.5 * y.abs().powf(alpha)).exp())
        .sum();
    s.ln()
}

/// Check `a_n(y) ≤ exp(n (c - (|y|/n)^α / 2))` for `|y|/n ≥ 1` on `y_grid`.
pub fn tail_bound_check(
    profile: &LargeDeviationProfile,
    n: usize,
    y_grid: &[f64],
) -> Result<TailBoundReport> {
    let alpha = match profile.kernel.tail {
        TailClass::UltraLight(a) => a,
        other => {
            return Err(invalid(
                "kernel",
                format!("tail bound needs an ultra-light tail, got {other:?}"),
            ))
        }
    };
    let nf = n as f64;
    if let Some(&y) = y_grid.iter().find(|y| y.abs() < nf) {
        return Err(invalid(
            "y_grid",
            format!("|y|/n = {} is below 1", y.abs() / nf),
        ));
    }
    let domain = tilt_window(&profile.kernel, 0.0)?;
    let c = tail_constant(&profile.kernel, alpha, domain);
    let c_truncation_change = tail_constant(&profile.kernel, alpha, 2.0 * domain) - c;
    let points = y_grid
        .par_iter()
        .map(|&y| {
            let bound = (nf * (c - 0.5 * (y.abs() / nf).powf(alpha))).exp();
            let nu = match profile.legendre(y / nf) {
                Ok(lp) => lp.nu_star,
                Err(Error::HullViolation { .. }) => {
                    return Ok(TailPoint {
                        y,
                        oracle: 0.0,
                        bound,
                        holds: true,
                    })
                }
                Err(e) => return Err(e),
            };
            let oracle = tilted_power(&profile.kernel, n, y, nu)?;
            Ok(TailPoint {
                y,
                oracle,
                bound,
                holds: oracle <= bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations: Vec<f64> = points.iter().filter(|p| !p.holds).map(|p| p.y).collect();
    let fit_pts: Vec<&TailPoint> = points.iter().filter(|p| p.oracle > 0.0).collect();
    let ys: Vec<f64> = fit_pts.iter().map(|p| p.y.abs()).collect();
    let (oracle_log_slope, bound_log_slope) = if ys.len() >= 2 {
        (
            linear_fit(
                &ys,
                &fit_pts.iter().map(|p| p.oracle.ln()).collect::<Vec<_>>(),
            )
            .0,
            linear_fit(
                &ys,
                &fit_pts.iter().map(|p| p.bound.ln()).collect::<Vec<_>>(),
            )
            .0,
        )
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(TailBoundReport {
        n,
        alpha,
        c,
        domain,
        c_truncation_change,
        all_hold: violations.is_empty(),
        points,
        violations,
        oracle_log_slope,
        bound_log_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{make_epanechnikov, make_gaussian, make_quartic_exp, make_stable_like};

    #[test]
    fn gaussian_closed_forms() {
        let g = make_gaussian(1.0, 1).unwrap();
        for &nu in &[0.0, 0.3, -1.2, 4.0] {
            let m = log_mgf(&g, nu).unwrap();
            assert!((m.h - 0.5 * nu * nu).abs() < 1e-12 * (1.0 + nu * nu));
            assert!((m.grad - nu).abs() < 1e-12);
            assert!((m.hess - 1.0).abs() < 1e-12);
        }
        let prof = LargeDeviationProfile::new(&g).unwrap();
        let lp = prof.legendre(1.7).unwrap();
        assert!((lp.h_star - 0.5 * 1.7 * 1.7).abs() < 1e-12 && (lp.nu_star - 1.7).abs() < 1e-12);
        let d = phase_min(&prof, 1.0, std::f64::consts::E - 1.0).unwrap();
        assert!((d.tau0 - 0.5f64.sqrt()).abs() < 1e-10);
        assert!((d.phi - 2f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn heavy_tails_and_hull_are_rejected() {
        assert!(log_mgf(&make_stable_like(0.5, 1).unwrap(), 0.1).is_err());
        let prof = LargeDeviationProfile::new(&make_epanechnikov(1.0).unwrap()).unwrap();
        assert_eq!(prof.s_plus, 1.0);
        assert!(matches!(
            prof.legendre(1.0),
            Err(Error::HullViolation { .. })
        ));
        let near: Vec<f64> = [0.9, 0.99, 0.999]
            .iter()
            .map(|&p| prof.legendre(p).unwrap().h_star)
            .collect();
        assert!(near.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn phase_equals_tilt_solving_h_equals_log() {
        // φ = ν₀ with H(ν₀) = ln(1+λ): bisection on H alone.
        let q = make_quartic_exp();
        let prof = LargeDeviationProfile::new(&q).unwrap();
        let lambda = 0.4;
        let d = phase_min(&prof, 1.0, lambda).unwrap();
        let (mut lo, mut hi) = (0.0, 20.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if log_mgf(&q, mid).unwrap().h < lambda.ln_1p() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((d.phi - lo).abs() < 1e-9, "{} vs {lo}", d.phi);
        assert!((d.nu_star - lo).abs() < 1e-9);
    }

    #[test]
    fn tilted_power_matches_gaussian_closed_form() {
        let g = make_gaussian(1.0, 1).unwrap();
        for &(n, y) in &[(4usize, 10.0), (16, 5.0), (9, -20.0)] {
            let exact = (-y * y / (2.0 * n as f64)).exp() / (2.0 * PI * n as f64).sqrt();
            let got = tilted_power(&g, n, y, y / n as f64).unwrap();
            assert!(
                (got - exact).abs() < 1e-10 * exact,
                "n={n} y={y}: {got} vs {exact}"
            );
        }
    }
}
