//! Spectrum of `L` from its symbol, plateau (embedded) eigenvalues, and Weyl
//! quasi-mode residuals for `H = L + v`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fourier::{Grid1d, Spectral};
use crate::greens::symbol_on_grid;
use crate::kernels::{JumpKernel, Potential, SymbolGrid};

/// `[-a, 0]` with `a = χ(1 - inf â)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectrumInterval {
    pub lower: f64,
    pub upper: f64,
    pub a: f64,
    /// The grid minimum sat on the box edge, so the infimum may lie outside the box.
    pub minimum_at_boundary: bool,
}

/// Since `â → 0` at infinity, `inf â ≤ 0` and the grid minimum is capped at 0.
pub fn spectrum_interval(symbol: &SymbolGrid, chi: f64) -> SpectrumInterval {
    let (argmin, min) =
        symbol
            .values
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
            );
    let last = symbol.len() - 1;
    let minimum_at_boundary = argmin == 0 || argmin == last;
    let inf = min.min(0.0);
    let a = chi * (1.0 - inf);
    SpectrumInterval {
        lower: -a,
        upper: 0.0,
        a,
        minimum_at_boundary,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Plateau {
    /// `χ(level - 1)`.
    pub lambda: f64,
    pub level: f64,
    pub k_lo: f64,
    pub k_hi: f64,
    /// Lebesgue measure of the level set, counting `±k`.
    pub measure: f64,
    /// Largest deviation of the symbol from `level` on the interval.
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PlateauOptions {
    pub flatness_tol: f64,
    pub min_width: f64,
    /// A plateau must be entered or left with slope at least
    /// `kink_factor · flatness_tol / min_width`; this rejects the slow decay
    /// of a smooth symbol toward 0 at large `|k|`.
    pub kink_factor: f64,
}

impl Default for PlateauOptions {
    fn default() -> Self {
        Self {
            flatness_tol: 1e-4,
            min_width: 0.1,
            kink_factor: 10.0,
        }
    }
}

/// Maximal intervals in `k ≥ 0` where the symbol's total variation stays within tolerance.
pub fn plateau_eigenvalues(symbol: &SymbolGrid, chi: f64, opts: &PlateauOptions) -> Vec<Plateau> {
    let o = symbol.origin();
    let k = &symbol.k_nodes[o..];
    let v = &symbol.values[o..];
    let n = v.len();
    if n < 3 {
        return Vec::new();
    }
    // tv[i] = Σ_{j<i} |v_{j+1} - v_j|
    let mut tv = vec![0.0; n];
    for i in 1..n {
        tv[i] = tv[i - 1] + (v[i] - v[i - 1]).abs();
    }
    let mut windows: Vec<(usize, usize)> = Vec::new();
    let mut j = 0;
    for i in 0..n {
        j = j.max(i);
        while j + 1 < n && tv[j + 1] - tv[i] <= opts.flatness_tol {
            j += 1;
        }
        if k[j] - k[i] >= opts.min_width {
            match windows.last_mut() {
                Some(last) if i <= last.1 => last.1 = last.1.max(j),
                _ => windows.push((i, j)),
            }
        }
    }
    let span = (opts.min_width / 4.0 / symbol.spacing).ceil().max(1.0) as usize;
    let slope_floor = opts.kink_factor * opts.flatness_tol / opts.min_width;
    let slope = |a: usize, b: usize| (tv[b] - tv[a]) / (k[b] - k[a]);
    windows
        .into_iter()
        .filter(|&(lo, hi)| {
            let left = lo >= span && slope(lo - span, lo) >= slope_floor;
            let right = hi + span < n && slope(hi, hi + span) >= slope_floor;
            left || right
        })
        .map(|(lo, hi)| {
            let seg = &v[lo..=hi];
            let level = seg.iter().sum::<f64>() / seg.len() as f64;
            let max_deviation = seg.iter().map(|x| (x - level).abs()).fold(0.0, f64::max);
            Plateau {
                lambda: chi * (level - 1.0),
                level,
                k_lo: k[lo],
                k_hi: k[hi],
                measure: 2.0 * (k[hi] - k[lo]),
                max_deviation,
            }
        })
        .collect()
}

/// Sub-intervals of `[-a, 0]` containing no values `χ(â(k) - 1)` at nodes
/// where `|â'|` falls below `grad_floor`.
///
/// This is a numerical indication of absolutely continuous spectrum, not a proof.
pub fn ac_intervals(
    symbol: &SymbolGrid,
    chi: f64,
    grad_floor: f64,
    margin: f64,
) -> Vec<(f64, f64)> {
    let interval = spectrum_interval(symbol, chi);
    let v = &symbol.values;
    let h = symbol.spacing;
    let mut critical: Vec<f64> = (1..v.len() - 1)
        .filter(|&i| ((v[i + 1] - v[i - 1]) / (2.0 * h)).abs() < grad_floor)
        .map(|i| chi * (v[i] - 1.0))
        .collect();
    critical.push(interval.lower);
    critical.push(interval.upper);
    critical.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for w in critical.windows(2) {
        let (lo, hi) = (w[0] + margin, w[1] - margin);
        if hi > lo {
            out.push((lo, hi));
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct EssentialSpectrum {
    /// Segments known to lie in the essential spectrum of `H`.
    pub segments: Vec<(f64, f64)>,
    pub caveat: &'static str,
}

/// `[-a, 0] ∪ [-χ, χ(max v - 1)]`.
pub fn essential_spectrum(
    interval: &SpectrumInterval,
    potential: &Potential,
    chi: f64,
) -> EssentialSpectrum {
    EssentialSpectrum {
        segments: vec![
            (interval.lower, interval.upper),
            (-chi, chi * (potential.sup_bound() - 1.0)),
        ],
        caveat:
            "containment only: these segments lie in the essential spectrum, which may be larger",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub interval: SpectrumInterval,
    pub plateaus: Vec<Plateau>,
    pub ac_intervals: Vec<(f64, f64)>,
    pub caveats: Vec<String>,
}

pub fn spectrum_report(symbol: &SymbolGrid, chi: f64, opts: &PlateauOptions) -> SpectrumReport {
    let interval = spectrum_interval(symbol, chi);
    let plateaus = plateau_eigenvalues(symbol, chi, opts);
    let floor = opts.kink_factor * opts.flatness_tol / opts.min_width;
    let ac = ac_intervals(symbol, chi, floor, 10.0 * opts.flatness_tol * chi);
    let mut caveats = vec![
        "absolutely continuous intervals are a numerical indication from gradient bounds on the grid, not a proof".to_string(),
    ];
    if interval.minimum_at_boundary {
        caveats.push(
            "symbol minimum attained at the box edge; the infimum was capped at 0".to_string(),
        );
    }
    if !plateaus.is_empty() {
        caveats
            .push("plateau eigenvalues are reported as χ(c - 1) for plateau level c".to_string());
    }
    SpectrumReport {
        interval,
        plateaus,
        ac_intervals: ac,
        caveats,
    }
}

/// `‖(H - λ₀)ψ_ε‖ / ‖ψ_ε‖` with `λ₀ = v(x₀) - 1` and the Gaussian quasi-mode
/// `ψ_ε(x) = (πε)^{-1/4} exp(-(x - x₀)²/(2ε))`.
pub fn weyl_residual(
    kernel: &JumpKernel,
    potential: &Potential,
    x0: f64,
    epsilon: f64,
    grid: &Grid1d,
) -> Result<f64> {
    if kernel.dim != 1 {
        return Err(Error::UnsupportedDimension(kernel.dim));
    }
    if !(epsilon > 0.0) {
        return Err(invalid("epsilon", format!("{epsilon} must be positive")));
    }
    let width = epsilon.sqrt();
    if width < 4.0 * grid.h {
        return Err(Error::Resolution(format!(
            "quasi-mode width √ε = {width:.3e} is below four grid spacings ({:.3e})",
            4.0 * grid.h
        )));
    }
    if x0.abs() + 12.0 * width > grid.half_width() {
        return Err(Error::Resolution(format!(
            "quasi-mode at x₀ = {x0} with width {width:.3e} does not fit in the grid"
        )));
    }
    let norm = (PI * epsilon).powf(-0.25);
    let psi: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&x| norm * (-(x - x0).powi(2) / (2.0 * epsilon)).exp())
        .collect();
    let conv = Spectral::new(*grid).apply_multiplier(&psi, &symbol_on_grid(kernel, grid));
    let shift = potential.value(x0);
    let residual: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(psi.iter().zip(&conv))
        .map(|(&x, (p, c))| c + (potential.value(x) - shift) * p)
        .collect();
    let l2 = |f: &[f64]| (grid.integrate(&f.iter().map(|v| v * v).collect::<Vec<_>>())).sqrt();
    Ok(kernel.chi * l2(&residual) / l2(&psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{kernel_symbol, make_embedded_family, make_gaussian, Profile};

    #[test]
    fn gaussian_interval_and_no_plateaus() {
        let g = make_gaussian(1.0, 1).unwrap();
        let s = kernel_symbol(&g, 40.0, 1 << 14).unwrap();
        let iv = spectrum_interval(&s, 2.0);
        assert_eq!(iv.a, 2.0);
        assert!(plateau_eigenvalues(&s, 1.0, &PlateauOptions::default()).is_empty());
    }

    #[test]
    fn embedded_plateaus() {
        let e = make_embedded_family(0.4).unwrap();
        let s = kernel_symbol(&e, 40.0, 1 << 14).unwrap();
        let p = plateau_eigenvalues(&s, 1.5, &PlateauOptions::default());
        assert_eq!(p.len(), 2);
        assert!((p[0].lambda - 1.5 * (0.4 - 1.0)).abs() < 1e-12);
        assert!((p[0].k_lo - 1.0).abs() < 0.01 && (p[0].k_hi - 2.0).abs() < 0.01);
        assert!((p[1].lambda + 1.5).abs() < 1e-12);
        assert!(p.iter().all(|q| q.measure > 0.0));
        let ac = ac_intervals(&s, 1.0, 1e-2, 1e-3);
        assert!(ac.iter().any(|&(lo, hi)| lo < -0.9 && hi > -0.7));
        assert!(ac.iter().all(|&(lo, hi)| !(lo < -0.6 && hi > -0.6)));
    }

    #[test]
    fn weyl_residual_shrinks_with_epsilon() {
        let g = make_gaussian(1.0, 1).unwrap();
        let v = Potential::new(Profile::Quartic, 2.0, 0.5).unwrap();
        let grid = Grid1d::with_half_width(1 << 14, 60.0).unwrap();
        let x0 = 1.0;
        let r_big = weyl_residual(&g, &v, x0, 0.16, &grid).unwrap();
        let r_small = weyl_residual(&g, &v, x0, 0.04, &grid).unwrap();
        assert!(r_small < r_big, "{r_small} vs {r_big}");
        let outside = weyl_residual(&g, &Potential::zero(), 10.0, 0.01, &grid).unwrap();
        assert!(outside < weyl_residual(&g, &Potential::zero(), 10.0, 0.04, &grid).unwrap());
    }
}
