use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quad::GaussLegendre;

/// Shape of the potential on the unit ball, normalized to 1 at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `exp(1 - 1/(1 - r²))`, smooth at the edge.
    Bump,
    /// `(1 - r²)²`.
    Quartic,
    /// `1 - |r|`.
    Tent,
    Zero,
}

impl Profile {
    pub fn eval(&self, r: f64) -> f64 {
        let r2 = r * r;
        if r2 >= 1.0 {
            return 0.0;
        }
        match self {
            Profile::Bump => (1.0 - 1.0 / (1.0 - r2)).exp(),
            Profile::Quartic => (1.0 - r2) * (1.0 - r2),
            Profile::Tent => 1.0 - r.abs(),
            Profile::Zero => 0.0,
        }
    }
}

/// `v_R(x) = (1 - δ) · profile(x / (R ρ))`, radially non-increasing and supported on `|x| ≤ Rρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Potential {
    pub profile: Profile,
    pub support_radius: f64,
    pub delta: f64,
    pub scale: f64,
}

impl Potential {
    pub fn new(profile: Profile, support_radius: f64, delta: f64) -> Result<Self> {
        if !(support_radius > 0.0 && support_radius.is_finite()) {
            return Err(invalid(
                "support_radius",
                format!("{support_radius} must be positive"),
            ));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(invalid("delta", format!("{delta} must lie in (0, 1]")));
        }
        Ok(Self {
            profile,
            support_radius,
            delta,
            scale: 1.0,
        })
    }

    pub fn zero() -> Self {
        Self {
            profile: Profile::Zero,
            support_radius: 1.0,
            delta: 1.0,
            scale: 1.0,
        }
    }

    pub fn with_scale(mut self, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(invalid("R", format!("{r} must be positive")));
        }
        self.scale = r;
        Ok(self)
    }

    /// Peak value `1 - δ`.
    pub fn sup_bound(&self) -> f64 {
        if self.profile == Profile::Zero {
            0.0
        } else {
            1.0 - self.delta
        }
    }

    /// Support radius of `v_R`.
    pub fn support(&self) -> f64 {
        self.scale * self.support_radius
    }

    pub fn is_zero(&self) -> bool {
        self.sup_bound() == 0.0
    }

    pub fn value(&self, x: f64) -> f64 {
        self.sup_bound() * self.profile.eval(x / self.support())
    }

    /// `ṽ(k) = ∫ v_R(x) cos(kx) dx` by composite Gauss–Legendre.
    pub fn fourier(&self, k: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let s = self.support();
        let rule = GaussLegendre::new(16);
        let panels = 16 + (k.abs() * s).ceil() as usize;
        let step = s / panels as f64;
        2.0 * (0..panels)
            .map(|i| {
                rule.integrate(i as f64 * step, (i + 1) as f64 * step, |x| {
                    self.value(x) * (k * x).cos()
                })
            })
            .sum::<f64>()
    }

    /// `∫ v_R`.
    pub fn integral(&self) -> f64 {
        self.fourier(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_moves_the_support() {
        let v = Potential::new(Profile::Bump, 2.0, 0.5)
            .unwrap()
            .with_scale(3.0)
            .unwrap();
        assert_eq!(v.support(), 6.0);
        assert_eq!(v.value(6.0), 0.0);
        assert!((v.value(0.0) - 0.5).abs() < 1e-15);
        assert!(v.value(5.9) > 0.0);
    }

    #[test]
    fn quartic_integral_is_closed_form() {
        // ∫_{-1}^{1} (1 - x²)² dx = 16/15.
        let v = Potential::new(Profile::Quartic, 1.0, 0.5).unwrap();
        assert!((v.integral() - 0.5 * 16.0 / 15.0).abs() < 1e-14);
    }
}
