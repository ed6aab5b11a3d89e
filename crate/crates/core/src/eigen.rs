//! Positive eigenvalues of `H = L + v_R` through the operator `√w T_λ √w`
//! with `w = (1+λ) v_R / (1 + λ - v_R)`: `λ` is an eigenvalue of `H` exactly
//! when 1 is an eigenvalue of that operator.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fourier::Grid1d;
use crate::greens::{transience_test, ResolventOptions, ResolventTable, Verdict};
use crate::kernels::{JumpKernel, Potential};
use crate::quad::GaussLegendre;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EigenOptions {
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Relative change of the Rayleigh quotient that stops power iteration.
    pub power_tol: f64,
    pub max_iterations: usize,
    /// Width of the final bisection bracket in `λ`.
    pub lambda_tol: f64,
    /// Probes `λ = 2^{-j}` for `j = 0..=probe_levels`.
    pub probe_levels: i32,
    /// Doubling the panel count must move `μ₀` by less than this.
    pub refinement_tol: f64,
    pub resolvent: ResolventOptions,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            panels: 16,
            nodes_per_panel: 8,
            power_tol: 1e-12,
            max_iterations: 10_000,
            lambda_tol: 1e-10,
            probe_levels: 20,
            refinement_tol: 1e-5,
            resolvent: ResolventOptions::default(),
        }
    }
}

/// Symmetrized Nyström matrix `M_ij = √(ω_i w_i) T_λ(x_i - x_j) √(ω_j w_j)`.
#[derive(Debug, Clone)]
pub struct GroundEnergyOperator {
    pub lambda: f64,
    pub r: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub w_values: Vec<f64>,
    pub matrix: DMatrix<f64>,
}

fn quadrature_on_support(
    potential: &Potential,
    panels: usize,
    per_panel: usize,
) -> (Vec<f64>, Vec<f64>) {
    let s = potential.support();
    let rule = GaussLegendre::new(per_panel);
    let mut nodes = Vec::with_capacity(panels * per_panel);
    let mut weights = Vec::with_capacity(panels * per_panel);
    let step = 2.0 * s / panels as f64;
    for p in 0..panels {
        rule.push_panel(
            -s + p as f64 * step,
            -s + (p + 1) as f64 * step,
            &mut nodes,
            &mut weights,
        );
    }
    (nodes, weights)
}

fn w_of(v: f64, lambda: f64) -> f64 {
    (1.0 + lambda) * v / (1.0 + lambda - v)
}

fn check_inputs(kernel: &JumpKernel, potential: &Potential, lambda: f64) -> Result<()> {
    if kernel.dim != 1 {
        return Err(Error::UnsupportedDimension(kernel.dim));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(invalid("lambda", format!("{lambda} must be non-negative")));
    }
    if potential.sup_bound() >= 1.0 {
        return Err(invalid("potential", "sup v must stay below 1"));
    }
    Ok(())
}

/// Assemble the operator for `v_R` with `R = potential.scale`, using a resolvent table
/// that must cover `|x| ≤ 2 R ρ`.
pub fn assemble(
    potential: &Potential,
    table: &ResolventTable,
    opts: &EigenOptions,
) -> Result<GroundEnergyOperator> {
    if opts.panels * opts.nodes_per_panel < 16 {
        return Err(Error::Resolution(format!(
            "{} Nyström nodes are below the floor of 16",
            opts.panels * opts.nodes_per_panel
        )));
    }
    let lambda = table.lambda;
    let (nodes, weights) = quadrature_on_support(potential, opts.panels, opts.nodes_per_panel);
    let w_values: Vec<f64> = nodes
        .iter()
        .map(|&x| w_of(potential.value(x), lambda))
        .collect();
    let scale: Vec<f64> = w_values
        .iter()
        .zip(&weights)
        .map(|(w, om)| (w * om).sqrt())
        .collect();
    let n = nodes.len();
    // Equal panels: x_i - x_j depends only on the panel offset and the two local
    // indices, so T_λ is needed at (2P - 1) m² points rather than n².
    let (panels, m) = (opts.panels, opts.nodes_per_panel);
    let step = 2.0 * potential.support() / panels as f64;
    let local: Vec<f64> = nodes[..m].iter().map(|x| x + potential.support()).collect();
    let diffs: Vec<f64> = (0..(2 * panels - 1) * m * m)
        .into_par_iter()
        .map(|idx| {
            let dp = (idx / (m * m)) as f64 - (panels - 1) as f64;
            let (a, b) = ((idx / m) % m, idx % m);
            table.t(dp * step + local[a] - local[b])
        })
        .collect();
    let matrix = DMatrix::from_fn(n, n, |i, j| {
        if scale[i] == 0.0 || scale[j] == 0.0 {
            return 0.0;
        }
        let dp = i / m + panels - 1 - j / m;
        scale[i] * diffs[(dp * m + i % m) * m + j % m] * scale[j]
    });
    Ok(GroundEnergyOperator {
        lambda,
        r: potential.scale,
        nodes,
        weights,
        w_values,
        matrix,
    })
}

pub fn build_bs_operator(
    kernel: &JumpKernel,
    potential: &Potential,
    lambda: f64,
    r: f64,
    opts: &EigenOptions,
) -> Result<GroundEnergyOperator> {
    let potential = potential.with_scale(r)?;
    check_inputs(kernel, &potential, lambda)?;
    let table = ResolventTable::new(kernel, lambda, 2.0 * potential.support(), &opts.resolvent)?;
    assemble(&potential, &table, opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct PerronPair {
    pub mu0: f64,
    /// Eigenfunction of `√w T_λ √w` at the quadrature nodes, unit sup norm.
    pub psi: Vec<f64>,
    /// Normalized eigenvector of the symmetrized matrix.
    pub vector: Vec<f64>,
    pub iterations: usize,
}

/// Power iteration from the constant vector. Stops once the Rayleigh quotient
/// changes by at most `tol` (relative) and the eigen-residual `‖Mx - μx‖` is at
/// most `√tol · μ`, so the vector is as accurate as the eigenvalue allows.
pub fn perron_eigenvalue(
    op: &GroundEnergyOperator,
    tol: f64,
    max_iterations: usize,
) -> Result<PerronPair> {
    let n = op.matrix.nrows();
    let mut x = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut mu = 0.0;
    let mut change = f64::INFINITY;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let done = |change: f64, residual: f64, mu: f64| {
        change <= tol * mu.abs() && residual <= tol.sqrt() * mu.abs()
    };
    while iterations < max_iterations {
        iterations += 1;
        let y = &op.matrix * &x;
        let rq = x.dot(&y);
        let norm = y.norm();
        if norm == 0.0 {
            mu = 0.0;
            change = 0.0;
            residual = 0.0;
            break;
        }
        residual = (&y - rq * &x).norm();
        change = (rq - mu).abs();
        mu = rq;
        x = y / norm;
        if done(change, residual, mu) {
            break;
        }
    }
    if !done(change, residual, mu) && mu != 0.0 {
        return Err(Error::IterationLimit {
            iterations,
            last_change: change,
            estimate: mu,
        });
    }
    let vector: Vec<f64> = x.iter().copied().collect();
    let mut psi: Vec<f64> = vector
        .iter()
        .zip(&op.weights)
        .map(|(z, om)| z / om.sqrt())
        .collect();
    let peak = psi.iter().copied().fold(0.0, f64::max);
    if peak > 0.0 {
        psi.iter_mut().for_each(|p| *p /= peak);
    }
    Ok(PerronPair {
        mu0: mu,
        psi,
        vector,
        iterations,
    })
}

/// `|μ₁|` by power iteration on the matrix deflated by the Perron pair.
pub fn second_modulus(
    op: &GroundEnergyOperator,
    perron: &PerronPair,
    max_iterations: usize,
) -> f64 {
    let n = op.matrix.nrows();
    if n < 2 || perron.mu0 == 0.0 {
        return 0.0;
    }
    let p = DVector::from_column_slice(&perron.vector);
    let project = |y: DVector<f64>| {
        let c = p.dot(&y);
        y - c * &p
    };
    let mut x = project(DVector::from_fn(
        n,
        |i, _| if i % 2 == 0 { 1.0 } else { -0.5 },
    ));
    let mut estimate = 0.0;
    for _ in 0..max_iterations {
        let norm = x.norm();
        if norm == 0.0 {
            return 0.0;
        }
        x /= norm;
        let y = project(&op.matrix * &x);
        let next = y.norm();
        let settled = (next - estimate).abs() <= 1e-9 * perron.mu0;
        estimate = next;
        x = y;
        if settled {
            break;
        }
    }
    estimate
}

/// All eigenvalues of the symmetrized matrix, descending (dense oracle).
pub fn dense_spectrum(op: &GroundEnergyOperator) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(op.matrix.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Doubles the panel count at `λ = 1/2` until `μ₀` moves by less than the
/// refinement tolerance, at most three times. Returns the last shift.
fn refine_panels(
    kernel: &JumpKernel,
    potential: &Potential,
    opts: &EigenOptions,
) -> Result<(EigenOptions, f64)> {
    let table = ResolventTable::new(kernel, 0.5, 2.0 * potential.support(), &opts.resolvent)?;
    let mu_of = |o: &EigenOptions| -> Result<f64> {
        let op = assemble(potential, &table, o)?;
        Ok(perron_eigenvalue(&op, o.power_tol, o.max_iterations)?.mu0)
    };
    let mut local = *opts;
    let mut mu = mu_of(&local)?;
    let mut shift = f64::INFINITY;
    for _ in 0..3 {
        let mut finer = local;
        finer.panels *= 2;
        let mu_fine = mu_of(&finer)?;
        shift = (mu_fine - mu).abs();
        local = finer;
        mu = mu_fine;
        if shift < opts.refinement_tol {
            break;
        }
    }
    Ok((local, shift))
}

fn mu_at(
    kernel: &JumpKernel,
    potential: &Potential,
    lambda: f64,
    opts: &EigenOptions,
) -> Result<(f64, GroundEnergyOperator, PerronPair)> {
    let table = ResolventTable::new(kernel, lambda, 2.0 * potential.support(), &opts.resolvent)?;
    let op = assemble(potential, &table, opts)?;
    let pair = perron_eigenvalue(&op, opts.power_tol, opts.max_iterations)?;
    Ok((pair.mu0, op, pair))
}

#[derive(Debug, Clone, Serialize)]
pub struct PrincipalEigenvalue {
    /// In units of `χ`.
    pub lambda0: f64,
    pub r: f64,
    /// `(λ, μ₀(λ))` pairs visited by probing and bisection, internal units.
    pub mu_curve: Vec<(f64, f64)>,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `ψ₁` at the nodes, unit sup norm.
    pub eigenfunction_nodes: Vec<f64>,
    /// `√w_j ψ_j ω_j`, the density that generates `φ₀` through `T_λ₀`.
    source: Vec<f64>,
    pub panels: usize,
    /// Change of `μ₀(1/2)` under the last panel doubling; above the refinement
    /// tolerance when the doubling cap was hit.
    pub refinement_shift: f64,
    /// `λ₀` in internal units.
    pub lambda0_internal: f64,
    /// Modulus of the second eigenvalue of the final matrix.
    pub second_mu: f64,
}

#[derive(Debug, Clone, Serialize)]
pub enum EigenOutcome {
    Found(PrincipalEigenvalue),
    NoEigenvalue {
        mu_curve: Vec<(f64, f64)>,
    },
    /// Recurrent (or unclassified) kernel with `μ₀ ≤ 1` down to the probe floor.
    InconclusiveAtProbe {
        probe_floor: f64,
        mu_curve: Vec<(f64, f64)>,
    },
}

impl EigenOutcome {
    pub fn lambda0(&self) -> Option<f64> {
        match self {
            EigenOutcome::Found(p) => Some(p.lambda0),
            _ => None,
        }
    }
}

/// Largest positive eigenvalue of `L + v_R` by bisection on `μ₀(λ) = 1`.
pub fn principal_eigenvalue(
    kernel: &JumpKernel,
    potential: &Potential,
    r: f64,
    opts: &EigenOptions,
) -> Result<EigenOutcome> {
    let potential = potential.with_scale(r)?;
    check_inputs(kernel, &potential, 0.0)?;
    let mut curve = Vec::new();
    if potential.is_zero() {
        return Ok(EigenOutcome::NoEigenvalue { mu_curve: curve });
    }
    let (local, refinement_shift) = refine_panels(kernel, &potential, opts)?;
    let mut bracket = None;
    let mut prev = 1.0;
    for j in 0..=opts.probe_levels {
        let lam = 0.5f64.powi(j);
        let (mu, _, _) = mu_at(kernel, &potential, lam, &local)?;
        curve.push((lam, mu));
        if mu > 1.0 {
            if j == 0 {
                return Err(Error::Solver(format!(
                    "μ₀(1) = {mu} > 1 contradicts λ₀ ≤ 1 - δ; the discretization is unreliable"
                )));
            }
            bracket = Some((lam, prev));
            break;
        }
        prev = lam;
    }
    let floor = 0.5f64.powi(opts.probe_levels);
    let (mut lo, mut hi) = match bracket {
        Some(b) => b,
        None => match transience_test(kernel, 60)?.verdict {
            Verdict::Transient => {
                let (mu, _, _) = mu_at(kernel, &potential, 0.0, &local)?;
                curve.push((0.0, mu));
                if mu > 1.0 {
                    (0.0, floor)
                } else {
                    curve.sort_by(|a, b| a.0.total_cmp(&b.0));
                    return Ok(EigenOutcome::NoEigenvalue { mu_curve: curve });
                }
            }
            _ => {
                curve.sort_by(|a, b| a.0.total_cmp(&b.0));
                return Ok(EigenOutcome::InconclusiveAtProbe {
                    probe_floor: floor,
                    mu_curve: curve,
                });
            }
        },
    };

    while hi - lo > opts.lambda_tol {
        let mid = 0.5 * (lo + hi);
        let (mu, _, _) = mu_at(kernel, &potential, mid, &local)?;
        curve.push((mid, mu));
        if mu > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda0 = 0.5 * (lo + hi);
    let (_, op, pair) = mu_at(kernel, &potential, lambda0, &local)?;
    if pair
        .psi
        .iter()
        .zip(&op.w_values)
        .any(|(p, w)| *p < 0.0 || (*p == 0.0 && *w > 0.0))
    {
        return Err(Error::NumericalPositivity(
            "Perron vector has non-positive entries where w > 0".into(),
        ));
    }
    let second_mu = second_modulus(&op, &pair, opts.max_iterations);
    let source = op
        .w_values
        .iter()
        .zip(&pair.psi)
        .zip(&op.weights)
        .map(|((w, p), om)| w.sqrt() * p * om)
        .collect();
    curve.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(EigenOutcome::Found(PrincipalEigenvalue {
        lambda0: kernel.chi * lambda0,
        r,
        mu_curve: curve,
        nodes: op.nodes,
        weights: op.weights,
        eigenfunction_nodes: pair.psi,
        source,
        panels: local.panels,
        refinement_shift,
        lambda0_internal: lambda0,
        second_mu,
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundState {
    pub grid: Grid1d,
    /// `φ₀` with `max φ₀ = 1`.
    pub sup_normalized: Vec<f64>,
    /// `φ₀` with unit `L²` norm on the grid.
    pub l2_normalized: Vec<f64>,
    /// `‖φ₀ - G_λ₀(v φ₀)‖∞ / ‖φ₀‖∞` evaluated on the grid.
    pub fixed_point_residual: f64,
}

/// `φ₀ = (1+λ₀)/(1+λ₀-v) · Σ_j T_λ₀(x - x_j) √w_j ψ_j ω_j` on `grid`.
pub fn ground_state(
    kernel: &JumpKernel,
    potential: &Potential,
    eig: &PrincipalEigenvalue,
    grid: &Grid1d,
    opts: &EigenOptions,
) -> Result<GroundState> {
    let potential = potential.with_scale(eig.r)?;
    let lam = eig.lambda0_internal;
    let reach = grid.half_width() + potential.support() + grid.h;
    let table = ResolventTable::new(
        kernel,
        lam,
        reach.max(2.0 * potential.support()),
        &opts.resolvent,
    )?;
    let convolve = |x: f64| -> f64 {
        eig.nodes
            .iter()
            .zip(&eig.source)
            .map(|(y, s)| table.t(x - y) * s)
            .sum()
    };
    let eval = |x: f64| -> f64 { (1.0 + lam) / (1.0 + lam - potential.value(x)) * convolve(x) };
    let phi: Vec<f64> = grid.nodes().par_iter().map(|&x| eval(x)).collect();
    let peak = phi.iter().copied().fold(0.0, f64::max);
    if !(peak > 0.0) || phi.iter().any(|p| *p <= 0.0) {
        return Err(Error::NumericalPositivity(
            "reconstructed ground state is not positive on the grid".into(),
        ));
    }
    let sup_normalized: Vec<f64> = phi.iter().map(|p| p / peak).collect();
    let l2 = grid
        .integrate(&phi.iter().map(|p| p * p).collect::<Vec<_>>())
        .sqrt();
    let l2_normalized = phi.iter().map(|p| p / l2).collect();

    // G_λ(vφ)(x) = v φ(x)/(1+λ) + ∫ T_λ(x-y) v(y) φ(y) dy, quadrature on the Nyström nodes.
    let phi_nodes: Vec<f64> = eig.nodes.iter().map(|&y| eval(y)).collect();
    let vphi: Vec<f64> = eig
        .nodes
        .iter()
        .zip(&phi_nodes)
        .zip(&eig.weights)
        .map(|((&y, p), om)| potential.value(y) * p * om)
        .collect();
    let residual = grid
        .nodes()
        .par_iter()
        .zip(phi.par_iter())
        .map(|(&x, p)| {
            let g = potential.value(x) * p / (1.0 + lam)
                + eig
                    .nodes
                    .iter()
                    .zip(&vphi)
                    .map(|(y, s)| table.t(x - y) * s)
                    .sum::<f64>();
            (p - g).abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(GroundState {
        grid: *grid,
        sup_normalized,
        l2_normalized,
        fixed_point_residual: residual / peak,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub r: f64,
    /// `None` when the computation was inconclusive or failed.
    pub exists: Option<bool>,
    pub lambda0: Option<f64>,
    pub note: String,
}

/// Existence flag and `λ₀(R)` over an increasing grid of scales, in parallel.
pub fn threshold_scan(
    kernel: &JumpKernel,
    potential: &Potential,
    r_grid: &[f64],
    opts: &EigenOptions,
) -> Result<Vec<ScanPoint>> {
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("R_grid", "must be strictly increasing"));
    }
    Ok(r_grid
        .par_iter()
        .map(
            |&r| match principal_eigenvalue(kernel, potential, r, opts) {
                Ok(EigenOutcome::Found(p)) => ScanPoint {
                    r,
                    exists: Some(true),
                    lambda0: Some(p.lambda0),
                    note: String::new(),
                },
                Ok(EigenOutcome::NoEigenvalue { .. }) => ScanPoint {
                    r,
                    exists: Some(false),
                    lambda0: None,
                    note: String::new(),
                },
                Ok(EigenOutcome::InconclusiveAtProbe { probe_floor, .. }) => ScanPoint {
                    r,
                    exists: None,
                    lambda0: None,
                    note: format!("μ₀ ≤ 1 down to the probe floor λ = {probe_floor:.3e}"),
                },
                Err(e) => ScanPoint {
                    r,
                    exists: None,
                    lambda0: None,
                    note: e.to_string(),
                },
            },
        )
        .collect())
}

/// Experimental: all eigenvalues `μ_j > 1` of the operator at the smallest
/// admissible `λ` (0 for transient kernels, the probe floor otherwise).
/// Their count bounds the number of positive eigenvalues of `H`; no roots are
/// solved for because monotonicity of `μ_j` in `λ` is not established for `j ≥ 1`.
pub fn experimental_mu_above_one(
    kernel: &JumpKernel,
    potential: &Potential,
    r: f64,
    opts: &EigenOptions,
) -> Result<Vec<f64>> {
    let potential = potential.with_scale(r)?;
    check_inputs(kernel, &potential, 0.0)?;
    let lam = match transience_test(kernel, 60)?.verdict {
        Verdict::Transient => 0.0,
        _ => 0.5f64.powi(opts.probe_levels),
    };
    let table = ResolventTable::new(kernel, lam, 2.0 * potential.support(), &opts.resolvent)?;
    let op = assemble(&potential, &table, opts)?;
    Ok(dense_spectrum(&op)
        .into_iter()
        .filter(|m| *m > 1.0)
        .collect())
}

/// Top eigenvalue of `H` discretized directly: `H_ij = h a(x_i - x_j) - δ_ij + v(x_i) δ_ij`
/// on a uniform truncated grid (independent oracle for `λ₀`, internal units).
pub fn dense_hamiltonian_top_eigenvalue(
    kernel: &JumpKernel,
    potential: &Potential,
    grid: &Grid1d,
) -> f64 {
    let x = grid.nodes();
    let n = x.len();
    let h = grid.h;
    let m = DMatrix::from_fn(n, n, |i, j| {
        let mut v = h * kernel.density(x[i] - x[j]);
        if i == j {
            v += potential.value(x[i]) - 1.0;
        }
        v
    });
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{make_gaussian, Profile};

    fn setup() -> (JumpKernel, Potential) {
        (
            make_gaussian(1.0, 1).unwrap(),
            Potential::new(Profile::Bump, 1.0, 0.5).unwrap(),
        )
    }

    #[test]
    fn zero_potential_gives_zero_operator() {
        let (g, _) = setup();
        let op =
            build_bs_operator(&g, &Potential::zero(), 0.5, 1.0, &EigenOptions::default()).unwrap();
        assert!(op.matrix.iter().all(|v| *v == 0.0));
        let pair = perron_eigenvalue(&op, 1e-12, 100).unwrap();
        assert_eq!(pair.mu0, 0.0);
    }

    #[test]
    fn power_iteration_matches_dense_and_entries_positive() {
        let (g, v) = setup();
        let opts = EigenOptions {
            panels: 25,
            ..Default::default()
        };
        let op = build_bs_operator(&g, &v, 0.3, 2.0, &opts).unwrap();
        assert_eq!(op.nodes.len(), 200);
        assert!(op.matrix.iter().all(|m| *m > 0.0));
        let pair = perron_eigenvalue(&op, 1e-14, 10_000).unwrap();
        let dense = dense_spectrum(&op);
        let n = dense.len();
        assert!((pair.mu0 - dense[0]).abs() <= 1e-10 * dense[0]);
        assert!(dense[1].abs() < dense[0]);
        let second = second_modulus(&op, &pair, 10_000);
        let dense_second = dense[1].abs().max(dense[n - 1].abs());
        assert!(
            (second - dense_second).abs() < 1e-6 * dense[0],
            "{second} vs {dense_second}"
        );
        assert!(pair.psi.iter().all(|p| *p > 0.0));
    }

    #[test]
    fn nystrom_refinement_converges() {
        let (g, v) = setup();
        let coarse = build_bs_operator(&g, &v, 0.2, 1.0, &EigenOptions::default()).unwrap();
        let fine_opts = EigenOptions {
            panels: 32,
            ..Default::default()
        };
        let fine = build_bs_operator(&g, &v, 0.2, 1.0, &fine_opts).unwrap();
        let a = perron_eigenvalue(&coarse, 1e-12, 10_000).unwrap().mu0;
        let b = perron_eigenvalue(&fine, 1e-12, 10_000).unwrap().mu0;
        assert!((a - b).abs() < 1e-4);
    }
}
