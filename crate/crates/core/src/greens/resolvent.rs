//! Evaluation of `T_λ(x) = (1/2π) ∫ m_λ(k) e^{ikx} dk` with
//! `m_λ = â / ((1+λ-â)(1+λ))`.
//!
//! The symbol is split by an erfc cutoff centred at `|k| = 3k_s/4`. The part
//! near the origin, where `m_λ` is peaked (or singular when `λ = 0`), is
//! integrated directly on dyadic annuli and tabulated on a coarse x-grid,
//! since it is band-limited. The remaining part is analytic in a strip and
//! decays exponentially in `x`, so a single FFT on a fine periodic grid gives
//! it without visible wrap-around.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fourier::{Grid1d, Spectral};
use crate::greens::transience::{transience_test, Verdict};
use crate::kernels::JumpKernel;
use crate::quad::{lagrange6, GaussLegendre};
use crate::special::erfc;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResolventOptions {
    /// Cutoff radius `k_s`; the transition is centred at `3k_s/4` with width `k_s/9`,
    /// and the inner part is integrated over `[0, 3k_s/2]`.
    pub split_radius: f64,
    /// Tabulation step of the inner part.
    pub inner_step: f64,
    /// Number of dyadic annuli below `k_s`.
    pub levels: usize,
    /// Symbol magnitude below which the outer part is truncated.
    pub symbol_floor: f64,
}

impl Default for ResolventOptions {
    fn default() -> Self {
        Self {
            split_radius: 1.0,
            inner_step: 0.05,
            levels: 48,
            symbol_floor: 1e-13,
        }
    }
}

/// `T_λ` tabulated on `[0, x_max]`, evaluable at any `|x| ≤ x_max`.
#[derive(Debug, Clone)]
pub struct ResolventTable {
    pub lambda: f64,
    pub x_max: f64,
    inner: Vec<f64>,
    inner_h: f64,
    outer: Vec<f64>,
    outer_h: f64,
}

const GUARD: usize = 4;

/// Weight of the outer part; the inner part gets `1 - outer_weight`.
/// Below `k_s/8` the outer weight (< 1e-15) is set to zero so it never meets
/// the singularity of `m_0` at the origin.
fn outer_weight(k: f64, ks: f64) -> f64 {
    let k = k.abs();
    if k < 0.125 * ks {
        0.0
    } else {
        0.5 * erfc(-(k - 0.75 * ks) * 9.0 / ks)
    }
}

fn inner_weight(k: f64, ks: f64) -> f64 {
    let k = k.abs();
    if k < 0.125 * ks {
        1.0
    } else {
        0.5 * erfc((k - 0.75 * ks) * 9.0 / ks)
    }
}

fn multiplier(kernel: &JumpKernel, lambda: f64, k: f64) -> f64 {
    let d = kernel.one_minus_symbol(k);
    (1.0 - d) / ((lambda + d) * (1.0 + lambda))
}

impl ResolventTable {
    pub fn new(
        kernel: &JumpKernel,
        lambda: f64,
        x_max: f64,
        opts: &ResolventOptions,
    ) -> Result<Self> {
        if kernel.dim != 1 {
            return Err(Error::UnsupportedDimension(kernel.dim));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(invalid("lambda", format!("{lambda} must be non-negative")));
        }
        if !(x_max > 0.0 && x_max.is_finite()) {
            return Err(invalid("x_max", format!("{x_max} must be positive")));
        }
        if lambda == 0.0 {
            let verdict = transience_test(kernel, 60)?;
            match verdict.verdict {
                Verdict::Transient => {}
                Verdict::Recurrent => return Err(Error::RecurrentResolvent),
                Verdict::Inconclusive => return Err(Error::Resolution(format!(
                    "λ = 0 needs a certified transient kernel; classifier was inconclusive ({})",
                    verdict.note
                ))),
            }
        }
        let (inner, inner_h) = inner_table(kernel, lambda, x_max, opts)?;
        let (outer, outer_h) = outer_table(kernel, lambda, x_max, opts)?;
        Ok(Self {
            lambda,
            x_max,
            inner,
            inner_h,
            outer,
            outer_h,
        })
    }

    pub fn atom_weight(&self) -> f64 {
        1.0 / (1.0 + self.lambda)
    }

    /// `T_λ(x)`; `|x|` must not exceed `x_max`.
    pub fn t(&self, x: f64) -> f64 {
        let x = x.abs();
        debug_assert!(
            x <= self.x_max * (1.0 + 1e-12),
            "|x| = {x} beyond table range {}",
            self.x_max
        );
        let g = GUARD as f64;
        lagrange6(&self.inner, -g * self.inner_h, self.inner_h, x)
            + lagrange6(&self.outer, -g * self.outer_h, self.outer_h, x)
    }
}

/// Quadrature nodes over `[0, 3k_s/2]`: `[k_s, 3k_s/2]` plus dyadic annuli below `k_s`, each cut into panels
/// short enough that `cos(k x)` turns by at most a few radians for `|x| ≤ x_max`.
fn inner_nodes(opts: &ResolventOptions, x_max: f64) -> (Vec<f64>, Vec<f64>, f64) {
    let rule = GaussLegendre::new(16);
    let ks = opts.split_radius;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let top = ((0.5 * ks * x_max / 4.0).ceil() as usize).max(8);
    let step = 0.5 * ks / top as f64;
    for p in 0..top {
        rule.push_panel(
            ks + p as f64 * step,
            ks + (p + 1) as f64 * step,
            &mut nodes,
            &mut weights,
        );
    }
    for j in 0..opts.levels {
        let hi = ks * 0.5f64.powi(j as i32);
        let lo = 0.5 * hi;
        let min_panels = if j == 0 { 8 } else { 2 };
        let panels = ((hi - lo) * x_max / 4.0).ceil().max(min_panels as f64) as usize;
        let step = (hi - lo) / panels as f64;
        for p in 0..panels {
            rule.push_panel(
                lo + p as f64 * step,
                lo + (p + 1) as f64 * step,
                &mut nodes,
                &mut weights,
            );
        }
    }
    let eps = ks * 0.5f64.powi(opts.levels as i32);
    (nodes, weights, eps)
}

fn inner_table(
    kernel: &JumpKernel,
    lambda: f64,
    x_max: f64,
    opts: &ResolventOptions,
) -> Result<(Vec<f64>, f64)> {
    let ks = opts.split_radius;
    let (nodes, weights, eps) = inner_nodes(opts, x_max);
    if eps * x_max > 1e-6 {
        return Err(Error::Resolution(format!(
            "innermost annulus radius {eps:.3e} too coarse for |x| ≤ {x_max}; raise the level count"
        )));
    }
    let w: Vec<f64> = nodes
        .iter()
        .zip(&weights)
        .map(|(&k, &wt)| wt * inner_weight(k, ks) * multiplier(kernel, lambda, k) / PI)
        .collect();
    // On [0, ε] the multiplier behaves like C k^{-p}; integrate that model.
    let m1 = multiplier(kernel, lambda, eps);
    let m2 = multiplier(kernel, lambda, 2.0 * eps);
    let p = (m1 / m2).log2().clamp(0.0, 1.0);
    if p > 0.999 {
        return Err(Error::RecurrentResolvent);
    }
    let remainder = m1 * eps / (1.0 - p) / PI;

    let h = opts.inner_step;
    let count = (x_max / h).ceil() as usize + 2 * GUARD + 1;
    let table = (0..count)
        .into_par_iter()
        .map(|i| {
            let x = (i as f64 - GUARD as f64) * h;
            nodes
                .iter()
                .zip(&w)
                .map(|(k, wk)| wk * (k * x).cos())
                .sum::<f64>()
                + remainder
        })
        .collect();
    Ok((table, h))
}

/// Smallest k beyond which `|â|` stays below the floor (checked on a few multiples).
fn symbol_cutoff(kernel: &JumpKernel, floor: f64) -> f64 {
    let mut k = 1.0;
    while k < 1e5 {
        if [1.0, 1.3, 1.7, 2.0]
            .iter()
            .all(|f| kernel.symbol(k * f).abs() <= floor)
        {
            return k;
        }
        k *= 1.25;
    }
    k
}

fn outer_table(
    kernel: &JumpKernel,
    lambda: f64,
    x_max: f64,
    opts: &ResolventOptions,
) -> Result<(Vec<f64>, f64)> {
    let ks = opts.split_radius;
    let k_cut = symbol_cutoff(kernel, opts.symbol_floor).max(2.0 * ks);
    let h = (PI / (2.0 * k_cut)).min(opts.inner_step);
    let period = 4.0 * x_max + 64.0;
    let n = ((period / h).ceil() as usize).next_power_of_two();
    if n > 1 << 24 {
        return Err(Error::Resolution(format!(
            "outer resolvent grid would need {n} points (k cutoff {k_cut:.3e}, |x| ≤ {x_max})"
        )));
    }
    let grid = Grid1d::new(n, h)?;
    let mult: Vec<f64> = grid
        .frequencies()
        .par_iter()
        .map(|&k| {
            let cut = outer_weight(k, ks);
            if cut == 0.0 {
                0.0
            } else {
                cut * multiplier(kernel, lambda, k.abs())
            }
        })
        .collect();
    let values = Spectral::new(grid).inverse_symbol(&mult);
    let o = grid.origin();
    let count = (x_max / h).ceil() as usize + 2 * GUARD + 1;
    let table = (0..count).map(|i| values[o + i - GUARD]).collect();
    Ok((table, h))
}

/// `G_λ` on a spatial grid: atom weight plus sampled `T_λ`.
#[derive(Debug, Clone, Serialize)]
pub struct ResolventKernel {
    pub lambda: f64,
    pub atom_weight: f64,
    pub grid: Grid1d,
    pub t_values: Vec<f64>,
}

impl ResolventKernel {
    /// `∫ G_λ` by the trapezoidal rule on the grid, atom included.
    pub fn total_mass(&self) -> f64 {
        self.atom_weight + self.grid.integrate(&self.t_values)
    }
}

/// `T_λ` at the nodes of `grid`. Fails if any sampled value is not positive.
pub fn resolvent_kernel(
    kernel: &JumpKernel,
    lambda: f64,
    grid: &Grid1d,
    opts: &ResolventOptions,
) -> Result<ResolventKernel> {
    let x_max = grid.half_width();
    let table = ResolventTable::new(kernel, lambda, x_max, opts)?;
    let t_values: Vec<f64> = grid.nodes().iter().map(|&x| table.t(x)).collect();
    let bad = t_values.iter().filter(|v| **v <= 0.0).count();
    if bad > 0 {
        let min = t_values.iter().copied().fold(f64::INFINITY, f64::min);
        return Err(Error::NumericalPositivity(format!(
            "T_λ ≤ 0 at {bad} nodes (min {min:.3e}); the grid extends past the accuracy floor"
        )));
    }
    Ok(ResolventKernel {
        lambda,
        atom_weight: table.atom_weight(),
        grid: *grid,
        t_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::resolvent_series_oracle;
    use crate::kernels::{make_gaussian, make_stable_like};

    #[test]
    fn gaussian_table_matches_series() {
        let g = make_gaussian(1.0, 1).unwrap();
        for &(lambda, x_max) in &[(1.0, 30.0), (0.27, 4.0)] {
            let table =
                ResolventTable::new(&g, lambda, x_max, &ResolventOptions::default()).unwrap();
            for &x in &[0.013, 0.5, 1.7, 3.9, 6.0, 14.3, 29.0] {
                if x > x_max {
                    continue;
                }
                let s = resolvent_series_oracle(&g, lambda, x, 400, 1e-14)
                    .unwrap()
                    .value;
                assert!(
                    (table.t(x) - s).abs() < 1e-9,
                    "λ={lambda} x={x}: {} vs {s}",
                    table.t(x)
                );
            }
        }
    }

    #[test]
    fn stable_zero_resolvent_matches_scaling_sum() {
        // T₀(x) = Σ_n n^{-2} a(x/n²) for γ = 1/2; sum to N and add the integral tail.
        let s = make_stable_like(0.5, 1).unwrap();
        let table = ResolventTable::new(&s, 0.0, 20.0, &ResolventOptions::default()).unwrap();
        for &x in &[0.7, 3.0, 15.0] {
            let term = |n: f64| s.density(x / (n * n)) / (n * n);
            let big_n = 20_000;
            let mut acc: f64 = (1..=big_n).map(|n| term(n as f64)).sum();
            // ∫_{N+1/2}^∞ n^{-2} a(x/n²) dn with n = 1/u.
            let u_max = 1.0 / (big_n as f64 + 0.5);
            acc += crate::quad::adaptive(|u| s.density(x * u * u), 0.0, u_max, 1e-18, 1e-12);
            assert!(
                (table.t(x) - acc).abs() < 1e-7 * acc,
                "x={x}: {} vs {acc}",
                table.t(x)
            );
        }
    }

    #[test]
    fn zero_lambda_on_recurrent_kernel_is_rejected() {
        let g = make_gaussian(1.0, 1).unwrap();
        assert_eq!(
            ResolventTable::new(&g, 0.0, 5.0, &ResolventOptions::default()).unwrap_err(),
            Error::RecurrentResolvent
        );
    }
}
