//! Small special-function helpers. Gamma and error functions come from `statrs`.

pub use statrs::function::erf::erfc;
pub use statrs::function::gamma::{gamma, ln_gamma};

/// sin(x)/x with the removable singularity filled.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}
