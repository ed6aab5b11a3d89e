//! Uniform periodic grids and FFT plumbing.
//!
//! Nodes are `x_j = (j - n/2) h` for `j = 0..n`, so the origin sits at index
//! `n/2`. Frequencies follow the usual FFT ordering.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1d {
    pub n: usize,
    pub h: f64,
}

impl Grid1d {
    pub fn new(n: usize, h: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(invalid(
                "n_points",
                format!("{n} is not a power of two ≥ 8"),
            ));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(invalid("spacing", format!("{h}")));
        }
        Ok(Self { n, h })
    }

    /// Grid with `n` points covering `[-half_width, half_width)`.
    pub fn with_half_width(n: usize, half_width: f64) -> Result<Self> {
        Self::new(n, 2.0 * half_width / n as f64)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.n as f64 * self.h
    }

    pub fn origin(&self) -> usize {
        self.n / 2
    }

    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    pub fn dk(&self) -> f64 {
        2.0 * PI / (self.n as f64 * self.h)
    }

    /// Angular frequency of FFT bin `m`.
    pub fn k(&self, m: usize) -> f64 {
        let mi = if m < self.n / 2 {
            m as f64
        } else {
            m as f64 - self.n as f64
        };
        mi * self.dk()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.k(m)).collect()
    }

    /// Same spacing, `factor` times as many points.
    pub fn padded(&self, factor: usize) -> Self {
        let f = factor.max(1).next_power_of_two();
        Self {
            n: self.n * f,
            h: self.h,
        }
    }

    /// Index of the padded-grid node that coincides with node `j` of `self`.
    pub fn embed_index(&self, padded: &Grid1d, j: usize) -> usize {
        j + padded.n / 2 - self.n / 2
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().sum::<f64>() * self.h
    }
}

/// Planned forward/inverse transforms for one grid size.
pub struct Spectral {
    pub grid: Grid1d,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Spectral {
    pub fn new(grid: Grid1d) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid.n);
        let inv = planner.plan_fft_inverse(grid.n);
        Self { grid, fwd, inv }
    }

    /// Continuous Fourier transform `∫ f(x) e^{-ikx} dx` approximated by the
    /// trapezoidal sum, at the FFT frequencies.
    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        let h = self.grid.h;
        for (m, z) in buf.iter_mut().enumerate() {
            let s = if m % 2 == 0 { h } else { -h };
            *z *= s;
        }
        buf
    }

    /// Inverse of [`Spectral::forward`]: `(1/2π) ∫ F(k) e^{ikx} dk` sampled on the grid.
    pub fn inverse_real(&self, spectrum: &[Complex64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = spectrum
            .iter()
            .enumerate()
            .map(|(m, &z)| if m % 2 == 0 { z } else { -z })
            .collect();
        self.inv.process(&mut buf);
        let scale = 1.0 / (self.grid.n as f64 * self.grid.h);
        buf.iter().map(|z| z.re * scale).collect()
    }

    /// Inverse transform of a real, even symbol given at the FFT frequencies.
    pub fn inverse_symbol(&self, symbol: &[f64]) -> Vec<f64> {
        let spec: Vec<Complex64> = symbol.iter().map(|&s| Complex64::new(s, 0.0)).collect();
        self.inverse_real(&spec)
    }

    /// Apply a Fourier multiplier to a real field.
    pub fn apply_multiplier(&self, f: &[f64], multiplier: &[f64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fwd.process(&mut buf);
        for (z, m) in buf.iter_mut().zip(multiplier) {
            *z *= *m;
        }
        self.inv.process(&mut buf);
        let scale = 1.0 / self.grid.n as f64;
        buf.iter().map(|z| z.re * scale).collect()
    }

    /// In-place variant of [`Spectral::apply_multiplier`] using a scratch buffer.
    pub fn apply_multiplier_into(
        &self,
        f: &mut [f64],
        multiplier: &[f64],
        scratch: &mut Vec<Complex64>,
    ) {
        scratch.clear();
        scratch.extend(f.iter().map(|&v| Complex64::new(v, 0.0)));
        self.fwd.process(scratch);
        for (z, m) in scratch.iter_mut().zip(multiplier) {
            *z *= *m;
        }
        self.inv.process(scratch);
        let scale = 1.0 / self.grid.n as f64;
        for (v, z) in f.iter_mut().zip(scratch.iter()) {
            *v = z.re * scale;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_of_gaussian_matches_closed_form() {
        let grid = Grid1d::with_half_width(512, 20.0).unwrap();
        let sp = Spectral::new(grid);
        let f: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|x| (-x * x / 2.0).exp() / (2.0 * PI).sqrt())
            .collect();
        let ft = sp.forward(&f);
        for (m, z) in ft.iter().enumerate() {
            let k = grid.k(m);
            assert!((z.re - (-k * k / 2.0).exp()).abs() < 1e-13);
            assert!(z.im.abs() < 1e-13);
        }
        let back = sp.inverse_real(&ft);
        for (a, b) in back.iter().zip(&f) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn grid_rejects_non_power_of_two() {
        assert!(Grid1d::new(100, 0.1).is_err());
    }
}
