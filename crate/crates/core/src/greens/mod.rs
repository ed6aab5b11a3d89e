//! Convolution powers `a_n`, the transition density `p(t, x)`, the resolvent
//! `G_λ = (1+λ)⁻¹ I + T_λ` and the recurrence/transience classifier.

mod resolvent;
mod transience;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fourier::{Grid1d, Spectral};
use crate::kernels::{Family, JumpKernel};
use crate::quad::lagrange6;

pub use resolvent::{resolvent_kernel, ResolventKernel, ResolventOptions, ResolventTable};
pub use transience::{transience_test, TransienceVerdict, Verdict};

/// Settings shared by the Fourier-based routines.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FourierOptions {
    /// The periodic work grid has `padding` times as many points as the output grid.
    pub padding: usize,
    /// Largest tolerated mass defect of a restricted density.
    pub mass_tolerance: f64,
}

impl Default for FourierOptions {
    fn default() -> Self {
        Self {
            padding: 4,
            mass_tolerance: 1e-8,
        }
    }
}

/// Symbol sampled at the FFT frequencies of `grid`: closed form if available,
/// otherwise the trapezoidal transform of the sampled density.
pub fn symbol_on_grid(kernel: &JumpKernel, grid: &Grid1d) -> Vec<f64> {
    if kernel.has_closed_symbol() {
        grid.frequencies()
            .par_iter()
            .map(|&k| kernel.symbol(k))
            .collect()
    } else {
        let samples: Vec<f64> = grid.nodes().iter().map(|&x| kernel.density(x)).collect();
        Spectral::new(*grid)
            .forward(&samples)
            .iter()
            .map(|z| z.re)
            .collect()
    }
}

/// `1 - â` at the FFT frequencies of `grid`, cancellation-free for closed forms.
pub(crate) fn one_minus_symbol_on_grid(kernel: &JumpKernel, grid: &Grid1d) -> Vec<f64> {
    if kernel.has_closed_symbol() {
        grid.frequencies()
            .par_iter()
            .map(|&k| kernel.one_minus_symbol(k))
            .collect()
    } else {
        symbol_on_grid(kernel, grid)
            .iter()
            .map(|s| 1.0 - s)
            .collect()
    }
}

/// `a_n` for `n = 1..=n_max` on a spatial grid.
#[derive(Debug, Clone, Serialize)]
pub struct ConvolutionPowers {
    pub grid: Grid1d,
    /// `table[n - 1][j] = a_n(x_j)`.
    pub table: Vec<Vec<f64>>,
    /// `1 - Σ_j a_n(x_j) h` for each `n`.
    pub mass_defects: Vec<f64>,
}

impl ConvolutionPowers {
    pub fn n_max(&self) -> usize {
        self.table.len()
    }

    pub fn power(&self, n: usize) -> &[f64] {
        &self.table[n - 1]
    }

    /// Interpolated `a_n(x)`; zero outside the grid.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        let x0 = self.grid.x(0);
        if x < x0 || x > self.grid.x(self.grid.n - 1) {
            return 0.0;
        }
        lagrange6(self.power(n), x0, self.grid.h, x)
    }
}

fn check_grid_dim(kernel: &JumpKernel) -> Result<()> {
    if kernel.dim != 1 {
        return Err(Error::UnsupportedDimension(kernel.dim));
    }
    Ok(())
}

/// Convolution powers by repeated multiplication in Fourier space on a padded periodic grid.
///
/// Mass defects are reported per `n`; nothing is renormalized.
pub fn conv_powers(
    kernel: &JumpKernel,
    n_max: usize,
    grid: &Grid1d,
    opts: &FourierOptions,
) -> Result<ConvolutionPowers> {
    check_grid_dim(kernel)?;
    if n_max == 0 {
        return Err(invalid("n_max", "must be at least 1"));
    }
    let padded = grid.padded(opts.padding);
    let spectral = Spectral::new(padded);
    let symbol = symbol_on_grid(kernel, &padded);
    let offset = grid.embed_index(&padded, 0);
    let mut power = vec![1.0; padded.n];
    let mut table = Vec::with_capacity(n_max);
    let mut mass_defects = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        for (p, s) in power.iter_mut().zip(&symbol) {
            *p *= s;
        }
        let full = spectral.inverse_symbol(&power);
        let restricted = full[offset..offset + grid.n].to_vec();
        let defect = 1.0 - grid.integrate(&restricted);
        if defect.abs() > opts.mass_tolerance {
            return Err(Error::DomainTooSmall { n, leakage: defect });
        }
        table.push(restricted);
        mass_defects.push(defect);
    }
    Ok(ConvolutionPowers {
        grid: *grid,
        table,
        mass_defects,
    })
}

/// `p(t, ·) = e^{-t} δ + regular part`.
#[derive(Debug, Clone, Serialize)]
pub struct TransitionDensity {
    pub t: f64,
    pub atom: f64,
    pub grid: Grid1d,
    pub regular: Vec<f64>,
}

impl TransitionDensity {
    pub fn total_mass(&self) -> f64 {
        self.atom + self.grid.integrate(&self.regular)
    }
}

/// Regular part of `p(t, ·)` from the multiplier `e^{t(â-1)} - e^{-t}`.
pub fn transition_density(
    kernel: &JumpKernel,
    t: f64,
    grid: &Grid1d,
    opts: &FourierOptions,
) -> Result<TransitionDensity> {
    check_grid_dim(kernel)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid("t", format!("{t} must be positive")));
    }
    let padded = grid.padded(opts.padding);
    let atom = (-t).exp();
    let multiplier: Vec<f64> = one_minus_symbol_on_grid(kernel, &padded)
        .iter()
        .map(|d| (-t * d).exp() - atom)
        .collect();
    let full = Spectral::new(padded).inverse_symbol(&multiplier);
    let offset = grid.embed_index(&padded, 0);
    let regular = full[offset..offset + grid.n].to_vec();
    let td = TransitionDensity {
        t,
        atom,
        grid: *grid,
        regular,
    };
    let defect = 1.0 - td.total_mass();
    if defect.abs() > opts.mass_tolerance {
        return Err(Error::DomainTooSmall {
            n: 0,
            leakage: defect,
        });
    }
    Ok(td)
}

/// `a_n(x)` in closed form where the family is closed under convolution.
pub fn closed_form_power(kernel: &JumpKernel, n: usize, x: f64) -> Option<f64> {
    let nf = n as f64;
    match &kernel.family {
        Family::Gaussian { sigma } => {
            let var = nf * sigma * sigma;
            Some((-0.5 * x * x / var).exp() / (2.0 * std::f64::consts::PI * var).sqrt())
        }
        Family::Stable(s) => {
            let scale = nf.powf(-1.0 / s.gamma);
            Some(scale * s.density(x * scale))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub truncation_bound: f64,
    pub terms: usize,
}

/// `T_λ(x) = Σ_{n=1}^{n_max} a_n(x) / (1+λ)^{n+1}`, summed term by term.
///
/// Uses closed-form powers when the family has them, otherwise an FFT table.
/// The tail bound uses `sup a_n ≤ sup a`.
pub fn resolvent_series_oracle(
    kernel: &JumpKernel,
    lambda: f64,
    x: f64,
    n_max: usize,
    tol: f64,
) -> Result<SeriesValue> {
    check_grid_dim(kernel)?;
    if !(lambda > 0.0) {
        return Err(invalid("lambda", format!("{lambda} must be positive")));
    }
    if x == 0.0 {
        return Err(invalid("x", "the series oracle excludes the atom at x = 0"));
    }
    let q = 1.0 / (1.0 + lambda);
    let truncation_bound = kernel.sup_density() * q.powi(n_max as i32 + 1) / lambda;
    if truncation_bound > tol {
        return Err(Error::InsufficientTerms {
            bound: truncation_bound,
            tol,
        });
    }
    let table;
    let power: Box<dyn Fn(usize) -> f64> = if closed_form_power(kernel, 1, x).is_some() {
        Box::new(|n| closed_form_power(kernel, n, x).unwrap_or(0.0))
    } else {
        let spread = second_moment(kernel).sqrt();
        let half = 2.0 * x.abs() + 10.0 * (n_max as f64).sqrt() * spread + 20.0;
        let n = ((2.0 * half / 0.05) as usize)
            .next_power_of_two()
            .clamp(1024, 1 << 20);
        let grid = Grid1d::with_half_width(n, half)?;
        let opts = FourierOptions {
            padding: 2,
            mass_tolerance: 1e-6,
        };
        table = conv_powers(kernel, n_max, &grid, &opts)?;
        Box::new(|n| table.eval(n, x))
    };
    let mut value = 0.0;
    let mut weight = q;
    for n in 1..=n_max {
        weight *= q;
        value += power(n) * weight;
    }
    Ok(SeriesValue {
        value,
        truncation_bound,
        terms: n_max,
    })
}

fn second_moment(kernel: &JumpKernel) -> f64 {
    let e = kernel.compact_support().unwrap_or(40.0);
    2.0 * crate::quad::adaptive(|y| y * y * kernel.density(y), 0.0, e, 1e-14, 1e-10)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::make_gaussian;

    #[test]
    fn gaussian_fourth_power_is_normal_with_variance_four() {
        let g = make_gaussian(1.0, 1).unwrap();
        let grid = Grid1d::with_half_width(1024, 40.0).unwrap();
        let cp = conv_powers(&g, 4, &grid, &FourierOptions::default()).unwrap();
        let err = grid
            .nodes()
            .iter()
            .zip(cp.power(4))
            .map(|(x, v)| (v - closed_form_power(&g, 4, *x).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
        assert!(cp.mass_defects.iter().all(|d| d.abs() < 1e-8));
        let a2_0 = cp.power(2)[grid.origin()];
        let direct = crate::quad::adaptive(|y| g.density(y).powi(2), -40.0, 40.0, 1e-15, 1e-12);
        assert!((a2_0 - direct).abs() < 1e-10);
    }

    #[test]
    fn narrow_grid_reports_leakage() {
        let g = make_gaussian(1.0, 1).unwrap();
        let grid = Grid1d::with_half_width(64, 4.0).unwrap();
        match conv_powers(&g, 8, &grid, &FourierOptions::default()) {
            Err(Error::DomainTooSmall { n, .. }) => assert!(n <= 2),
            other => panic!("expected leakage, got {other:?}"),
        }
    }

    #[test]
    fn transition_density_matches_poisson_series() {
        let g = make_gaussian(1.0, 1).unwrap();
        let grid = Grid1d::with_half_width(1024, 40.0).unwrap();
        let t = 2.0;
        let p = transition_density(&g, t, &grid, &FourierOptions::default()).unwrap();
        assert!((p.total_mass() - 1.0).abs() < 1e-8);
        assert!(p.regular.iter().all(|v| *v > -1e-15));
        let cp = conv_powers(&g, 40, &grid, &FourierOptions::default()).unwrap();
        let mut err: f64 = 0.0;
        for j in 0..grid.n {
            let mut acc = 0.0;
            let mut c = 1.0;
            for n in 1..=40 {
                c *= t / n as f64;
                acc += c * cp.power(n)[j];
            }
            err = err.max((p.regular[j] - (-t).exp() * acc).abs());
        }
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn series_oracle_decays_like_inverse_square_in_lambda() {
        let g = make_gaussian(1.0, 1).unwrap();
        let lam = 1e4;
        let v = resolvent_series_oracle(&g, lam, 0.5, 10, 1e-12).unwrap();
        let lead = g.density(0.5) / (1.0 + lam).powi(2);
        assert!((v.value / lead - 1.0).abs() < 1e-3);
        assert!(matches!(
            resolvent_series_oracle(&g, 0.01, 0.5, 10, 1e-12),
            Err(Error::InsufficientTerms { .. })
        ));
    }
}
