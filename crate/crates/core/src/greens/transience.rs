//! Convergence test for `∫ |â/(1-â)| dk` near the origin.
//!
//! The integral over `|k| ≤ k_s` is split into dyadic annuli
//! `[k_s 2^{-j-1}, k_s 2^{-j}]`. If the integrand behaves like `k^{-p}`, the
//! annulus contributions scale by `2^{p-1}` per level: they shrink
//! geometrically when the walk is transient and stop shrinking otherwise.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::kernels::JumpKernel;
use crate::quad::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Transient,
    Recurrent,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransienceVerdict {
    pub verdict: Verdict,
    /// Partial integrals over `|k| ∈ [k_s 2^{-j-1}, k_s]`, one per level.
    pub integral_estimates: Vec<f64>,
    pub increments: Vec<f64>,
    /// Per-level reading; the final verdict needs the last three to agree.
    pub level_verdicts: Vec<Verdict>,
    /// Local exponent `p` implied by the last increment ratio.
    pub local_exponent: f64,
    pub split_radius: f64,
    pub note: String,
}

const SPLIT_RADIUS: f64 = 1.0;
const CAUCHY_TOL: f64 = 1e-6;

pub fn transience_test(kernel: &JumpKernel, refinement_levels: usize) -> Result<TransienceVerdict> {
    if kernel.dim != 1 {
        return Err(Error::UnsupportedDimension(kernel.dim));
    }
    if refinement_levels < 4 {
        return Err(invalid("refinement_levels", "need at least 4 levels"));
    }
    let rule = GaussLegendre::new(24);
    let integrand = |k: f64| {
        let d = kernel.one_minus_symbol(k);
        ((1.0 - d) / d).abs()
    };
    let mut increments = Vec::with_capacity(refinement_levels);
    let mut integral_estimates = Vec::with_capacity(refinement_levels);
    let mut level_verdicts = Vec::with_capacity(refinement_levels);
    let mut total = 0.0;
    for j in 0..refinement_levels {
        let hi = SPLIT_RADIUS * 0.5f64.powi(j as i32);
        let delta = 2.0 * rule.integrate(0.5 * hi, hi, integrand);
        if !delta.is_finite() {
            return Err(Error::Solver(format!(
                "non-finite annulus integral at level {j}"
            )));
        }
        total += delta;
        increments.push(delta);
        integral_estimates.push(total);
        let v = if j < 2 {
            Verdict::Inconclusive
        } else {
            let r = delta / increments[j - 1];
            let r_prev = increments[j - 1] / increments[j - 2];
            if r >= 1.0 && r_prev >= 1.0 {
                Verdict::Recurrent
            } else if r < 1.0 && r_prev < 1.0 && delta * r / (1.0 - r) <= CAUCHY_TOL * total {
                Verdict::Transient
            } else {
                Verdict::Inconclusive
            }
        };
        level_verdicts.push(v);
    }
    let last = refinement_levels - 1;
    let ratio = increments[last] / increments[last - 1];
    let local_exponent = 1.0 + ratio.log2();
    let tail = &level_verdicts[last - 2..];
    let verdict = if tail.iter().all(|v| *v == tail[0]) {
        tail[0]
    } else {
        Verdict::Inconclusive
    };
    let note = match verdict {
        Verdict::Transient => format!(
            "annulus contributions shrink by {ratio:.4} per level; partial integrals Cauchy to {CAUCHY_TOL:.0e}"
        ),
        Verdict::Recurrent => format!(
            "annulus contributions do not shrink (ratio {ratio:.4}, local exponent {local_exponent:.3} ≥ 1)"
        ),
        Verdict::Inconclusive => format!(
            "last three levels disagree ({tail:?}); ratio {ratio:.4}, raise the level count"
        ),
    };
    Ok(TransienceVerdict {
        verdict,
        integral_estimates,
        increments,
        level_verdicts,
        local_exponent,
        split_radius: SPLIT_RADIUS,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{make_embedded_family, make_gaussian, make_stable_like};

    #[test]
    fn classifies_reference_kernels() {
        let g = transience_test(&make_gaussian(1.0, 1).unwrap(), 30).unwrap();
        assert_eq!(g.verdict, Verdict::Recurrent);
        assert!((g.local_exponent - 2.0).abs() < 1e-3);
        let c = transience_test(&make_stable_like(1.0, 1).unwrap(), 30).unwrap();
        assert_eq!(c.verdict, Verdict::Recurrent);
        let s = transience_test(&make_stable_like(0.5, 1).unwrap(), 60).unwrap();
        assert_eq!(s.verdict, Verdict::Transient);
        assert!((s.local_exponent - 0.5).abs() < 1e-3);
        let e = transience_test(&make_embedded_family(0.4).unwrap(), 30).unwrap();
        assert_eq!(e.verdict, Verdict::Recurrent);
    }

    #[test]
    fn too_few_levels_is_inconclusive() {
        let s = transience_test(&make_stable_like(0.5, 1).unwrap(), 6).unwrap();
        assert_eq!(s.verdict, Verdict::Inconclusive);
    }
}
