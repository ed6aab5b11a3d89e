//! Jump densities `a(y)`, their symbols `â(k)`, and compactly supported potentials.
//!
//! All kernels are one-dimensional and normalized to unit intensity
//! internally; the user intensity `χ` is carried along and applied when
//! results are reported.

mod potential;
mod stable;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fourier::{Grid1d, Spectral};
use crate::quad::{adaptive, GaussLegendre};
use crate::special::{erfc, gamma, sinc};

pub use potential::{Potential, Profile};
pub use stable::{density_by_quadrature, StableDensity};

/// Decay class of the jump density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TailClass {
    /// `a(y) ≍ exp(-|y|^α)` with `α > 1`.
    UltraLight(f64),
    /// `a(y) ≍ exp(-δ|y|)`.
    Light(f64),
    /// `a(y) ≍ |y|^{-d-γ}` with `γ > 2`.
    Moderate(f64),
    /// `a(y) ≍ |y|^{-d-γ}` with `γ ∈ (0, 2)`.
    Heavy(f64),
}

impl TailClass {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TailClass::UltraLight(a) if a > 1.0 => Ok(()),
            TailClass::Light(d) if d > 0.0 => Ok(()),
            TailClass::Moderate(g) if g > 2.0 => Ok(()),
            TailClass::Heavy(g) if g > 0.0 && g < 2.0 => Ok(()),
            other => Err(invalid(
                "tail",
                format!("{other:?} violates its parameter range"),
            )),
        }
    }

    pub fn is_ultra_light(&self) -> bool {
        matches!(self, TailClass::UltraLight(_))
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Family {
    Gaussian {
        sigma: f64,
    },
    Stable(Arc<StableDensity>),
    Embedded {
        h: f64,
    },
    /// Normalized weights `h_0, h_1, ...`.
    EmbeddedMulti {
        weights: Vec<f64>,
    },
    /// `(3/4r)(1 - (y/r)^2)_+`.
    Epanechnikov {
        radius: f64,
    },
    /// `exp(-y^4) / (2Γ(5/4))`.
    QuarticExp,
    Custom {
        density: RealFn,
        symbol: Option<RealFn>,
        /// Half-width beyond which the density is negligible for quadrature.
        extent: f64,
    },
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gaussian { sigma } => write!(f, "Gaussian(σ={sigma})"),
            Family::Stable(s) => write!(f, "Stable(γ={})", s.gamma),
            Family::Embedded { h } => write!(f, "Embedded(h={h})"),
            Family::EmbeddedMulti { weights } => write!(f, "EmbeddedMulti({weights:?})"),
            Family::Epanechnikov { radius } => write!(f, "Epanechnikov(r={radius})"),
            Family::QuarticExp => write!(f, "QuarticExp"),
            Family::Custom { extent, .. } => write!(f, "Custom(extent={extent})"),
        }
    }
}

/// A symmetric probability density of jump lengths.
#[derive(Debug, Clone)]
pub struct JumpKernel {
    pub dim: usize,
    pub chi: f64,
    pub family: Family,
    pub tail: TailClass,
    pub mass_tolerance: f64,
}

fn quartic_norm() -> f64 {
    2.0 * gamma(1.25)
}

fn tent(width: f64, k: f64) -> f64 {
    (width - k.abs()).max(0.0)
}

impl JumpKernel {
    /// Replace the intensity `χ` (defaults to 1).
    pub fn with_chi(mut self, chi: f64) -> Result<Self> {
        if !(chi > 0.0 && chi.is_finite()) {
            return Err(invalid("chi", format!("{chi} must be positive")));
        }
        self.chi = chi;
        Ok(self)
    }

    pub fn density(&self, y: f64) -> f64 {
        match &self.family {
            Family::Gaussian { sigma } => {
                let z = y / sigma;
                (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
            }
            Family::Stable(s) => s.density(y),
            Family::Embedded { h } => {
                let s = (0.5 * y).sin().powi(2);
                let q = 1.0 + 4.0 * h - 20.0 * h * s + 16.0 * h * s * s;
                sinc(0.5 * y).powi(2) * q / (2.0 * PI)
            }
            Family::EmbeddedMulti { weights } => {
                let base = 0.5 * sinc(0.5 * y);
                weights
                    .iter()
                    .enumerate()
                    .map(|(j, w)| {
                        let m = (4 * j + 1) as f64 / 2.0;
                        w * m * sinc(m * y)
                    })
                    .sum::<f64>()
                    * base
                    * 2.0
                    / PI
            }
            Family::Epanechnikov { radius } => {
                let u = y / radius;
                if u.abs() < 1.0 {
                    0.75 * (1.0 - u * u) / radius
                } else {
                    0.0
                }
            }
            Family::QuarticExp => (-y.powi(4)).exp() / quartic_norm(),
            Family::Custom { density, .. } => density(y),
        }
    }

    /// `ln a(y)`, in closed form where the density would underflow far out.
    pub fn log_density(&self, y: f64) -> f64 {
        match &self.family {
            Family::Gaussian { sigma } => {
                let z = y / sigma;
                -0.5 * z * z - (sigma * (2.0 * PI).sqrt()).ln()
            }
            Family::QuarticExp => -y.powi(4) - quartic_norm().ln(),
            _ => self.density(y).ln(),
        }
    }

    /// Closed-form symbol when the family provides one.
    pub fn symbol_closed_form(&self, k: f64) -> Option<f64> {
        match &self.family {
            Family::Gaussian { sigma } => Some((-0.5 * sigma * sigma * k * k).exp()),
            Family::Stable(s) => Some((-k.abs().powf(s.gamma)).exp()),
            Family::Embedded { h } => {
                Some((1.0 - h) * tent(1.0, k) + h * (tent(3.0, k) - tent(2.0, k)))
            }
            Family::EmbeddedMulti { weights } => Some(
                weights
                    .iter()
                    .enumerate()
                    .map(|(j, w)| w * (tent((2 * j + 1) as f64, k) - tent((2 * j) as f64, k)))
                    .sum(),
            ),
            Family::Epanechnikov { radius } => {
                let u = k * radius;
                if u.abs() < 1e-3 {
                    let u2 = u * u;
                    Some(1.0 - u2 / 10.0 + u2 * u2 / 280.0)
                } else {
                    Some(3.0 * (u.sin() - u * u.cos()) / u.powi(3))
                }
            }
            Family::QuarticExp => None,
            Family::Custom { symbol, .. } => symbol.as_ref().map(|s| s(k)),
        }
    }

    pub fn has_closed_symbol(&self) -> bool {
        self.symbol_closed_form(0.0).is_some()
    }

    /// `â(k)`, by quadrature of `2∫₀ cos(ky) a(y) dy` when no closed form exists.
    pub fn symbol(&self, k: f64) -> f64 {
        if let Some(v) = self.symbol_closed_form(k) {
            return v;
        }
        let extent = self.effective_extent();
        let panels = ((extent * (1.0 + k.abs())).ceil() as usize).max(8);
        let rule = GaussLegendre::new(12);
        let step = extent / panels as f64;
        (0..panels)
            .map(|i| {
                rule.integrate(i as f64 * step, (i + 1) as f64 * step, |y| {
                    (k * y).cos() * self.density(y)
                })
            })
            .sum::<f64>()
            * 2.0
    }

    /// `1 - â(k)` without cancellation near `k = 0`.
    pub fn one_minus_symbol(&self, k: f64) -> f64 {
        match &self.family {
            Family::Gaussian { sigma } => -(-0.5 * sigma * sigma * k * k).exp_m1(),
            Family::Stable(s) => -(-k.abs().powf(s.gamma)).exp_m1(),
            Family::Embedded { h } if k.abs() <= 1.0 => (1.0 - h) * k.abs(),
            Family::EmbeddedMulti { weights } if k.abs() <= 1.0 => weights[0] * k.abs(),
            Family::Epanechnikov { radius } if (k * radius).abs() < 1e-3 => {
                let u2 = (k * radius).powi(2);
                u2 / 10.0 - u2 * u2 / 280.0
            }
            Family::QuarticExp | Family::Custom { .. } if k.abs() < 0.1 => {
                // 1 - â(k) = 4 ∫₀^∞ sin²(ky/2) a(y) dy.
                let e = self.effective_extent();
                4.0 * integrate_panels(
                    |y| (0.5 * k * y).sin().powi(2) * self.density(y),
                    0.0,
                    e,
                    0.25,
                )
            }
            _ => 1.0 - self.symbol(k),
        }
    }

    /// Radius of the support if it is compact.
    pub fn compact_support(&self) -> Option<f64> {
        match &self.family {
            Family::Epanechnikov { radius } => Some(*radius),
            _ => None,
        }
    }

    /// Half-width outside which an ultra-light density is below 1e-300 relative.
    fn effective_extent(&self) -> f64 {
        match &self.family {
            Family::Gaussian { sigma } => 38.0 * sigma,
            Family::Epanechnikov { radius } => *radius,
            Family::QuarticExp => 6.0,
            Family::Custom { extent, .. } => *extent,
            _ => f64::INFINITY,
        }
    }

    pub fn sup_density(&self) -> f64 {
        self.density(0.0)
    }

    /// Mass of `{|y| > l}`.
    pub fn tail_mass_beyond(&self, l: f64) -> f64 {
        let l = l.abs();
        match &self.family {
            Family::Gaussian { sigma } => erfc(l / (sigma * 2f64.sqrt())),
            Family::Stable(s) => {
                if l >= 50.0 {
                    s.tail_mass(l)
                } else {
                    (1.0 - 2.0 * integrate_panels(|y| s.density(y), 0.0, l, 1.0)).max(0.0)
                }
            }
            // Averaging the oscillating numerators leaves 2h₀/(πy²) per side.
            Family::Embedded { h } => 2.0 * (1.0 - h) / (PI * l.max(1.0)),
            Family::EmbeddedMulti { weights } => 2.0 * weights[0] / (PI * l.max(1.0)),
            Family::Epanechnikov { radius } => {
                let u = (l / radius).min(1.0);
                1.0 - 1.5 * (u - u * u * u / 3.0)
            }
            Family::QuarticExp | Family::Custom { .. } => {
                let e = self.effective_extent();
                if l >= e {
                    0.0
                } else {
                    2.0 * integrate_panels(|y| self.density(y), l, e, 0.25)
                }
            }
        }
    }

    /// Total mass by panel quadrature up to `half_width` plus the analytic tail.
    pub fn mass(&self, half_width: f64) -> f64 {
        if let Family::Stable(s) = &self.family {
            return s.cached_mass();
        }
        let l = half_width.min(self.effective_extent());
        let body = match self.compact_support() {
            Some(r) => integrate_panels(|y| self.density(y), 0.0, r.min(l), r / 64.0),
            None => integrate_panels(|y| self.density(y), 0.0, l, 0.5),
        };
        2.0 * body + self.tail_mass_beyond(l)
    }
}

fn integrate_panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, width: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let rule = GaussLegendre::new(12);
    let panels = ((b - a) / width).ceil().max(1.0) as usize;
    let step = (b - a) / panels as f64;
    (0..panels)
        .map(|i| rule.integrate(a + i as f64 * step, a + (i + 1) as f64 * step, &f))
        .sum()
}

fn require_d1(d: usize) -> Result<()> {
    if d == 1 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(d))
    }
}

pub fn make_gaussian(sigma: f64, d: usize) -> Result<JumpKernel> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid("sigma", format!("{sigma} must be positive")));
    }
    require_d1(d)?;
    Ok(JumpKernel {
        dim: d,
        chi: 1.0,
        family: Family::Gaussian { sigma },
        tail: TailClass::UltraLight(2.0),
        mass_tolerance: 1e-10,
    })
}

/// Kernel with symbol `exp(-|k|^γ)`; the density is obtained by numerical inversion.
pub fn make_stable_like(gamma_exp: f64, d: usize) -> Result<JumpKernel> {
    if !(gamma_exp > 0.0 && gamma_exp < 2.0) {
        return Err(invalid("gamma", format!("{gamma_exp} is outside (0, 2)")));
    }
    require_d1(d)?;
    Ok(JumpKernel {
        dim: d,
        chi: 1.0,
        family: Family::Stable(Arc::new(StableDensity::new(gamma_exp)?)),
        tail: TailClass::Heavy(gamma_exp),
        mass_tolerance: 1e-6,
    })
}

/// Kernel whose symbol is flat (equal to `h`) on `1 ≤ |k| ≤ 2` and zero for `|k| ≥ 3`.
pub fn make_embedded_family(h: f64) -> Result<JumpKernel> {
    if !(h > 0.0) {
        return Err(invalid("h", format!("{h} must be positive")));
    }
    if h > 4.0 / 9.0 + 1e-15 {
        return Err(Error::PositivityViolation(format!(
            "h = {h} exceeds 4/9; the density dips to (1 - 9h/4)/(πx²)·2s < 0 near sin²(x/2) = 5/8"
        )));
    }
    Ok(JumpKernel {
        dim: 1,
        chi: 1.0,
        family: Family::Embedded { h },
        tail: TailClass::Heavy(1.0),
        mass_tolerance: 1e-3,
    })
}

/// Multi-plateau kernel: `â = c_m = Σ_{j≥m} h_j` on `2m-1 ≤ |k| ≤ 2m`.
///
/// Uses `h_0..=h_{m_max}` after normalizing to unit sum.
pub fn make_embedded_family_multi(h_seq: &[f64], m_max: usize) -> Result<JumpKernel> {
    let take = (m_max + 1).min(h_seq.len());
    if take < 2 {
        return Err(invalid("h_seq", "need at least h_0 and h_1"));
    }
    let raw = &h_seq[..take];
    if raw.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
        return Err(invalid("h_seq", "weights must be positive and finite"));
    }
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|h| h / total).collect();
    let dominated: f64 = weights
        .iter()
        .enumerate()
        .skip(1)
        .map(|(j, h)| h * (3.0 * j as f64).exp())
        .sum();
    if weights[0] <= dominated {
        return Err(invalid(
            "h_seq",
            format!(
                "h_0 = {:.6e} does not exceed Σ h_j e^(3j) = {dominated:.6e}",
                weights[0]
            ),
        ));
    }
    Ok(JumpKernel {
        dim: 1,
        chi: 1.0,
        family: Family::EmbeddedMulti { weights },
        tail: TailClass::Heavy(1.0),
        mass_tolerance: 1e-3,
    })
}

/// Compactly supported test kernel on `[-radius, radius]`.
pub fn make_epanechnikov(radius: f64) -> Result<JumpKernel> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(invalid("radius", format!("{radius} must be positive")));
    }
    Ok(JumpKernel {
        dim: 1,
        chi: 1.0,
        family: Family::Epanechnikov { radius },
        tail: TailClass::UltraLight(2.0),
        mass_tolerance: 1e-10,
    })
}

/// Test kernel proportional to `exp(-y^4)`.
pub fn make_quartic_exp() -> JumpKernel {
    JumpKernel {
        dim: 1,
        chi: 1.0,
        family: Family::QuarticExp,
        tail: TailClass::UltraLight(4.0),
        mass_tolerance: 1e-10,
    }
}

/// User-supplied even density; `extent` bounds its numerically relevant support.
pub fn make_custom(
    density: impl Fn(f64) -> f64 + Send + Sync + 'static,
    symbol: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    tail: TailClass,
    extent: f64,
) -> Result<JumpKernel> {
    tail.validate()?;
    if !(extent > 0.0) {
        return Err(invalid("extent", format!("{extent} must be positive")));
    }
    Ok(JumpKernel {
        dim: 1,
        chi: 1.0,
        family: Family::Custom {
            density: Arc::new(density),
            symbol,
            extent,
        },
        tail,
        mass_tolerance: 1e-8,
    })
}

/// Symbol sampled at `k_j = (j - n/2)·dk`, `dk = 2K/n`.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolGrid {
    pub k_nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub half_width: f64,
    pub spacing: f64,
}

impl SymbolGrid {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn origin(&self) -> usize {
        self.values.len() / 2
    }

    /// Largest |â(k) - â(-k)| over mirrored nodes.
    pub fn evenness_defect(&self) -> f64 {
        let o = self.origin();
        (1..o)
            .map(|i| (self.values[o + i] - self.values[o - i]).abs())
            .fold(0.0, f64::max)
    }

    fn edge_value(&self) -> f64 {
        self.values[0].abs().max(self.values[self.len() - 1].abs())
    }
}

/// Edge threshold used to decide whether the k-box is wide enough.
pub fn symbol_threshold(kernel: &JumpKernel) -> f64 {
    if kernel.tail.is_ultra_light() {
        1e-10
    } else {
        1e-6
    }
}

fn check_symbol_args(kernel: &JumpKernel, half_width: f64, n_points: usize) -> Result<f64> {
    require_d1(kernel.dim)?;
    if n_points < 8 || !n_points.is_power_of_two() {
        return Err(invalid(
            "n_points",
            format!("{n_points} is not a power of two ≥ 8"),
        ));
    }
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(invalid("K", format!("{half_width}")));
    }
    Ok(2.0 * half_width / n_points as f64)
}

fn finish(grid: SymbolGrid, kernel: &JumpKernel) -> Result<SymbolGrid> {
    let threshold = symbol_threshold(kernel);
    let edge = grid.edge_value();
    if edge > threshold {
        return Err(Error::Truncation {
            k_edge: grid.half_width,
            value: edge,
            threshold,
        });
    }
    Ok(grid)
}

/// Symbol on a uniform k-box, from the closed form when available and the DFT otherwise.
pub fn kernel_symbol(kernel: &JumpKernel, half_width: f64, n_points: usize) -> Result<SymbolGrid> {
    if !kernel.has_closed_symbol() {
        return kernel_symbol_numeric(kernel, half_width, n_points);
    }
    let dk = check_symbol_args(kernel, half_width, n_points)?;
    let k_nodes: Vec<f64> = (0..n_points)
        .map(|j| (j as f64 - (n_points / 2) as f64) * dk)
        .collect();
    let values = k_nodes.iter().map(|&k| kernel.symbol(k)).collect();
    finish(
        SymbolGrid {
            k_nodes,
            values,
            half_width,
            spacing: dk,
        },
        kernel,
    )
}

/// Trapezoidal DFT of the density sampled with spacing `π/K`, giving the same k-box.
pub fn kernel_symbol_numeric(
    kernel: &JumpKernel,
    half_width: f64,
    n_points: usize,
) -> Result<SymbolGrid> {
    let dk = check_symbol_args(kernel, half_width, n_points)?;
    let xgrid = Grid1d::new(n_points, PI / half_width)?;
    let samples: Vec<f64> = xgrid.nodes().iter().map(|&x| kernel.density(x)).collect();
    let spec = Spectral::new(xgrid).forward(&samples);
    let half = n_points / 2;
    let k_nodes: Vec<f64> = (0..n_points)
        .map(|j| (j as f64 - half as f64) * dk)
        .collect();
    let values = (0..n_points)
        .map(|j| spec[(j + half) % n_points].re)
        .collect();
    finish(
        SymbolGrid {
            k_nodes,
            values,
            half_width,
            spacing: dk,
        },
        kernel,
    )
}

/// Half-width of a k-box at which the closed-form symbol has dropped below the
/// default edge threshold.
pub fn default_symbol_half_width(kernel: &JumpKernel) -> f64 {
    let threshold = symbol_threshold(kernel);
    let mut k = 1.0;
    while kernel.symbol(k).abs() > threshold && k < 1e6 {
        k *= 1.25;
    }
    k
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub symmetry_defect: f64,
    pub min_density: f64,
    pub mass_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Samples the density on `grid` for symmetry and sign, and measures its total mass.
pub fn validate_kernel(kernel: &JumpKernel, grid: &Grid1d, tol: f64) -> ValidationReport {
    let n = grid.n;
    let o = grid.origin();
    let vals: Vec<f64> = grid.nodes().iter().map(|&x| kernel.density(x)).collect();
    let symmetry_defect = (1..n - o)
        .map(|i| (vals[o + i] - kernel.density(-grid.x(o + i))).abs())
        .fold(0.0, f64::max);
    let min_density = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let mass_defect = (kernel.mass(grid.half_width()) - 1.0).abs();
    let passed = symmetry_defect <= tol
        && min_density >= -tol
        && mass_defect <= tol.max(kernel.mass_tolerance);
    ValidationReport {
        symmetry_defect,
        min_density,
        mass_defect,
        tolerance: tol,
        passed,
    }
}

/// Adaptive evaluation of `2∫₀^∞ cos(ky) a(y) dy` for ultra-light densities; test oracle helper.
pub fn symbol_by_adaptive_quadrature(kernel: &JumpKernel, k: f64, extent: f64) -> f64 {
    2.0 * adaptive(
        |y| (k * y).cos() * kernel.density(y),
        0.0,
        extent,
        1e-15,
        1e-13,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_reference_values() {
        let g1 = make_gaussian(1.0, 1).unwrap();
        assert!((g1.symbol(0.0) - 1.0).abs() < 1e-15);
        assert!((g1.symbol(1.0) - 0.606_530_7).abs() < 1e-7);
        let q = symbol_by_adaptive_quadrature(&g1, 1.0, 40.0);
        assert!((q - g1.symbol(1.0)).abs() < 1e-12);
        let g2 = make_gaussian(2.0, 1).unwrap();
        assert!((g2.density(0.0) - 0.199_471_1).abs() < 1e-7);
        assert!(make_gaussian(0.0, 1).is_err());
        assert_eq!(
            make_gaussian(1.0, 2).unwrap_err(),
            Error::UnsupportedDimension(2)
        );
    }

    #[test]
    fn stable_reference_values() {
        let c = make_stable_like(1.0, 1).unwrap();
        assert!((c.density(0.0) - std::f64::consts::FRAC_1_PI).abs() < 1e-7);
        for &y in &[0.5, 3.0, 40.0, 2000.0] {
            let exact = 1.0 / (PI * (1.0 + y * y));
            assert!((c.density(y) - exact).abs() / exact < 1e-8);
        }
        let s = make_stable_like(0.5, 1).unwrap();
        assert!((s.symbol(4.0) - 0.135_335_3).abs() < 1e-7);
        assert!(make_stable_like(2.0, 1).is_err());
    }

    #[test]
    fn stable_tail_exponent_from_log_log_fit() {
        let s = make_stable_like(0.5, 1).unwrap();
        let ys: Vec<f64> = (0..20)
            .map(|i| 10f64.powf(2.0 + 2.0 * i as f64 / 19.0))
            .collect();
        let lx: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
        let ly: Vec<f64> = ys.iter().map(|&y| s.density(y).ln()).collect();
        let (slope, _) = crate::quad::linear_fit(&lx, &ly);
        assert!((slope + 1.5).abs() < 0.02, "slope {slope}");
        let c = s.density(1e5) * 1e5f64.powf(1.5);
        let c2 = s.density(1e4) * 1e4f64.powf(1.5);
        assert!(c > 0.0 && (c - c2).abs() / c < 0.05);
    }

    #[test]
    fn embedded_density_identity_and_positivity() {
        let k = make_embedded_family(0.4).unwrap();
        let h = 0.4;
        for i in 1..400 {
            let x = -20.0 + 0.1 * i as f64 + 0.013;
            let direct = ((1.0 - x.cos()) * (1.0 - h) + ((2.0 * x).cos() - (3.0 * x).cos()) * h)
                / (PI * x * x);
            assert!((k.density(x) - direct).abs() < 1e-12);
        }
        assert!((k.density(0.0) - (1.0 + 4.0 * h) / (2.0 * PI)).abs() < 1e-15);
        assert!(matches!(
            make_embedded_family(0.45),
            Err(Error::PositivityViolation(_))
        ));
        assert!(make_embedded_family_multi(&[0.6, 0.4], 1).is_err());
        let multi = make_embedded_family_multi(&[0.96, 0.04], 1).unwrap();
        let single = make_embedded_family(0.04).unwrap();
        for &x in &[0.0, 0.3, 2.0, 7.7, 31.0] {
            assert!((multi.density(x) - single.density(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn symbol_grid_checks_truncation() {
        let g = make_gaussian(1.0, 1).unwrap();
        assert!(matches!(
            kernel_symbol(&g, 5.0, 1024),
            Err(Error::Truncation { .. })
        ));
        let grid = kernel_symbol(&g, 40.0, 1 << 14).unwrap();
        assert_eq!(grid.values[grid.origin()], 1.0);
        assert_eq!(grid.evenness_defect(), 0.0);
    }

    #[test]
    fn quartic_symbol_by_panels_matches_adaptive() {
        let q = make_quartic_exp();
        assert!((q.symbol(0.0) - 1.0).abs() < 1e-13);
        for &k in &[0.7, 3.0, 9.0] {
            let a = symbol_by_adaptive_quadrature(&q, k, 6.0);
            assert!((q.symbol(k) - a).abs() < 1e-12);
        }
    }
}
