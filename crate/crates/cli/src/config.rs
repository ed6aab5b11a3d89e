//! Experiment configuration: JSON, versioned, unknown fields rejected.

use std::path::Path;

use nonlocal_spectra::dynamics::InitialData;
use nonlocal_spectra::kernels::{
    make_embedded_family, make_embedded_family_multi, make_epanechnikov, make_gaussian,
    make_quartic_exp, make_stable_like, JumpKernel, Potential, Profile,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment: String,
    pub kernel: KernelSpec,
    #[serde(default = "one")]
    pub chi: f64,
    #[serde(default)]
    pub potential: Option<PotentialSpec>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Output directory; `--out` takes precedence.
    #[serde(default)]
    pub output_dir: Option<String>,
    /// Recorded for provenance; no command draws random numbers.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub transience: Option<TransienceSpec>,
    #[serde(default)]
    pub eigen: Option<EigenSpec>,
    #[serde(default)]
    pub asym: Option<AsymSpec>,
    #[serde(default)]
    pub front: Option<FrontSpec>,
    #[serde(default)]
    pub stabilize: Option<StabilizeSpec>,
    #[serde(default)]
    pub oracle: Option<OracleSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelSpec {
    Gaussian { sigma: f64 },
    StableLike { gamma: f64 },
    Embedded { h: f64 },
    EmbeddedMulti { h_seq: Vec<f64>, m_max: usize },
    Epanechnikov { radius: f64 },
    QuarticExp,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileName {
    Bump,
    Quartic,
    Tent,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub profile: ProfileName,
    #[serde(default = "one")]
    pub support_radius: f64,
    /// `sup v = 1 - delta`, in units of `χ`.
    pub delta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Half-width `K` of the symbol box.
    pub half_width: f64,
    pub n_points: usize,
    #[serde(default = "default_padding")]
    pub padding: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub power_tol: f64,
    pub lambda_tol: f64,
    pub refinement_tol: f64,
    pub plateau_flatness: f64,
    pub plateau_min_width: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            power_tol: 1e-12,
            lambda_tol: 1e-10,
            refinement_tol: 1e-5,
            plateau_flatness: 1e-4,
            plateau_min_width: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransienceSpec {
    pub levels: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenSpec {
    pub r_grid: Vec<f64>,
    #[serde(default = "default_panels")]
    pub panels: usize,
    #[serde(default = "default_nodes_per_panel")]
    pub nodes_per_panel: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymSpec {
    pub lambdas: Vec<f64>,
    pub p_grid: Vec<f64>,
    #[serde(default = "default_directions")]
    pub directions: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontSpec {
    pub r: f64,
    pub t_final: f64,
    pub dt: f64,
    pub half_width: f64,
    pub n_points: usize,
    #[serde(default = "one")]
    pub snapshot_every: f64,
    pub u0: InitialData,
    /// Inline principal eigenvalue (units of `χ`); computed when absent.
    #[serde(default)]
    pub lambda0: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilizeSpec {
    #[serde(default = "one")]
    pub r: f64,
    pub dt: f64,
    #[serde(default = "one")]
    pub snapshot_every: f64,
    #[serde(default = "default_increment_tol")]
    pub increment_tol: f64,
    pub t_max: f64,
    pub n_points: usize,
    pub spacing: f64,
    /// `u∞` is compared on `|x| ≤ reach`.
    pub reach: f64,
    #[serde(default = "default_neumann_terms")]
    pub n_terms: usize,
    #[serde(default = "default_neumann_tol")]
    pub neumann_tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    #[serde(default)]
    pub clt_n: Vec<usize>,
    /// Sample points in `y/n`.
    #[serde(default)]
    pub clt_ratios: Vec<f64>,
    #[serde(default = "default_clt_tol")]
    pub clt_tol: f64,
    #[serde(default)]
    pub series_lambdas: Vec<f64>,
    #[serde(default)]
    pub series_x: Vec<f64>,
    #[serde(default = "default_series_tol")]
    pub series_tol: f64,
    #[serde(default = "default_series_terms")]
    pub series_terms: usize,
}

fn one() -> f64 {
    1.0
}
fn default_padding() -> usize {
    4
}
fn default_panels() -> usize {
    16
}
fn default_nodes_per_panel() -> usize {
    8
}
fn default_directions() -> Vec<f64> {
    vec![1.0, -1.0]
}
fn default_increment_tol() -> f64 {
    1e-3
}
fn default_neumann_terms() -> usize {
    500
}
fn default_neumann_tol() -> f64 {
    1e-14
}
fn default_clt_tol() -> f64 {
    0.05
}
fn default_series_tol() -> f64 {
    1e-6
}
fn default_series_terms() -> usize {
    400
}

fn field(path: &str, reason: impl Into<String>) -> CliError {
    CliError::Config(format!("{path}: {}", reason.into()))
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(field(path, format!("{v} must be positive and finite")))
    }
}

fn power_of_two(path: &str, n: usize) -> Result<()> {
    if n >= 2 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(field(path, format!("{n} must be a power of two")))
    }
}

fn increasing(path: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(field(path, "must not be empty"));
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(field(path, "must be strictly increasing"));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config(format!("{path}: {}", e.into_inner()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(field(
                "schema_version",
                format!(
                    "{} is not supported (expected {SCHEMA_VERSION})",
                    self.schema_version
                ),
            ));
        }
        positive("chi", self.chi)?;
        if let Some(p) = &self.potential {
            positive("potential.support_radius", p.support_radius)?;
            positive("potential.delta", p.delta)?;
        }
        if let Some(g) = &self.grid {
            positive("grid.half_width", g.half_width)?;
            power_of_two("grid.n_points", g.n_points)?;
            if g.padding == 0 {
                return Err(field("grid.padding", "must be at least 1"));
            }
        }
        let t = &self.tolerances;
        positive("tolerances.power_tol", t.power_tol)?;
        positive("tolerances.lambda_tol", t.lambda_tol)?;
        positive("tolerances.refinement_tol", t.refinement_tol)?;
        positive("tolerances.plateau_flatness", t.plateau_flatness)?;
        positive("tolerances.plateau_min_width", t.plateau_min_width)?;
        if let Some(e) = &self.eigen {
            increasing("eigen.r_grid", &e.r_grid)?;
            for (i, r) in e.r_grid.iter().enumerate() {
                positive(&format!("eigen.r_grid[{i}]"), *r)?;
            }
        }
        if let Some(a) = &self.asym {
            for (i, l) in a.lambdas.iter().enumerate() {
                positive(&format!("asym.lambdas[{i}]"), *l)?;
            }
            for (i, d) in a.directions.iter().enumerate() {
                if (d.abs() - 1.0).abs() > 1e-12 {
                    return Err(field(
                        &format!("asym.directions[{i}]"),
                        "directions in one dimension are ±1",
                    ));
                }
            }
        }
        if let Some(f) = &self.front {
            positive("front.r", f.r)?;
            positive("front.t_final", f.t_final)?;
            positive("front.dt", f.dt)?;
            positive("front.half_width", f.half_width)?;
            positive("front.snapshot_every", f.snapshot_every)?;
            power_of_two("front.n_points", f.n_points)?;
            if let Some(l) = f.lambda0 {
                positive("front.lambda0", l)?;
            }
        }
        if let Some(s) = &self.stabilize {
            positive("stabilize.r", s.r)?;
            positive("stabilize.dt", s.dt)?;
            positive("stabilize.snapshot_every", s.snapshot_every)?;
            positive("stabilize.increment_tol", s.increment_tol)?;
            positive("stabilize.t_max", s.t_max)?;
            positive("stabilize.spacing", s.spacing)?;
            positive("stabilize.reach", s.reach)?;
            positive("stabilize.neumann_tol", s.neumann_tol)?;
            power_of_two("stabilize.n_points", s.n_points)?;
        }
        if let Some(o) = &self.oracle {
            positive("oracle.clt_tol", o.clt_tol)?;
            positive("oracle.series_tol", o.series_tol)?;
            for (i, l) in o.series_lambdas.iter().enumerate() {
                positive(&format!("oracle.series_lambdas[{i}]"), *l)?;
            }
            if o.series_x.contains(&0.0) {
                return Err(field(
                    "oracle.series_x",
                    "x = 0 carries the atom and is excluded",
                ));
            }
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical serialization (defaults filled in).
    pub fn sha256(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&canonical))
    }

    pub fn kernel(&self) -> Result<JumpKernel> {
        let k = match &self.kernel {
            KernelSpec::Gaussian { sigma } => make_gaussian(*sigma, 1),
            KernelSpec::StableLike { gamma } => make_stable_like(*gamma, 1),
            KernelSpec::Embedded { h } => make_embedded_family(*h),
            KernelSpec::EmbeddedMulti { h_seq, m_max } => make_embedded_family_multi(h_seq, *m_max),
            KernelSpec::Epanechnikov { radius } => make_epanechnikov(*radius),
            KernelSpec::QuarticExp => Ok(make_quartic_exp()),
        }?;
        Ok(k.with_chi(self.chi)?)
    }

    /// The unscaled potential; commands apply their own `R`.
    pub fn potential(&self) -> Result<Potential> {
        let p = self
            .potential
            .as_ref()
            .ok_or_else(|| field("potential", "required by this command"))?;
        let profile = match p.profile {
            ProfileName::Bump => Profile::Bump,
            ProfileName::Quartic => Profile::Quartic,
            ProfileName::Tent => Profile::Tent,
        };
        Ok(Potential::new(profile, p.support_radius, p.delta)?)
    }

    pub fn section<'a, T>(&self, value: &'a Option<T>, name: &str) -> Result<&'a T> {
        value
            .as_ref()
            .ok_or_else(|| field(name, "section required by this command"))
    }
}
