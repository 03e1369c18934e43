//! Run configuration: a sectioned TOML file with every key checked.

use std::fs::File;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bandflow::io::read_angle_table_csv;
use bandflow::pde::{EvolveControls, GridKind, Scheme};
use bandflow::traveling_wave::{DEFAULT_NODES, DEFAULT_TOL};
use bandflow::verification::SuiteConfig;
use bandflow::CoefficientPair;
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub coefficients: Option<CoefficientsSection>,
    #[serde(default)]
    pub wave: WaveSection,
    pub pde: Option<PdeSection>,
    pub verify: Option<VerifySection>,
    #[serde(default)]
    pub output: OutputSection,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    Constant,
    RationalBump,
    GrimReaper,
    Tabulated,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsSection {
    pub family: FamilyName,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default)]
    pub eps: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub delta: f64,
    pub symmetric: Option<bool>,
    /// `omega,a,b` table for the tabulated family, relative to the config file.
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveSection {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    /// Boundary slopes to solve for; empty means the infinite-slope wave.
    #[serde(default)]
    pub h: Vec<f64>,
}

impl Default for WaveSection {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            nodes: DEFAULT_NODES,
            h: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DatumKind {
    Rho,
    User,
    Lift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridName {
    Uniform,
    Clustered,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeSection {
    #[serde(default = "default_intervals")]
    pub intervals: usize,
    #[serde(default = "default_grid")]
    pub grid: GridName,
    #[serde(default = "default_clustering")]
    pub clustering: f64,
    pub scheme: Option<Scheme>,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    pub snapshot_every: Option<f64>,
    pub slope_cap: Option<f64>,
    pub dt: Option<f64>,
    pub adaptive: Option<bool>,
    pub dt_min: Option<f64>,
    pub dt_max: Option<f64>,
    pub du_max: Option<f64>,
    #[serde(default = "default_datum")]
    pub datum: DatumKind,
    /// `x,u` or `x,u,ux` samples for the user datum.
    pub file: Option<PathBuf>,
    /// `M1` above the admissible threshold for the rho datum.
    #[serde(default = "one")]
    pub m1_offset: f64,
    /// Lift datum `K e^{x^2/2} + gamma x (1 - x^2)^2`.
    #[serde(default = "default_lift_k")]
    pub lift_k: f64,
    #[serde(default)]
    pub lift_gamma: f64,
    pub compat_tol: Option<f64>,
}

impl Default for PdeSection {
    fn default() -> Self {
        toml::from_str("").expect("defaults")
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default)]
    pub checks: Vec<String>,
    pub epsilon: Option<f64>,
    pub t_end: Option<f64>,
    pub h0: Option<f64>,
    pub cbar_override: Option<f64>,
    pub s0_min: Option<f64>,
    pub wedge_tol: Option<f64>,
    pub convexity_rel_tol: Option<f64>,
    pub envelope_x_max: Option<f64>,
    pub envelope_slack_factor: Option<f64>,
    pub convergence_levels: Option<usize>,
    pub convergence_t_max: Option<f64>,
    pub error_fraction: Option<f64>,
    pub speed_tol: Option<f64>,
    pub general_delta: Option<f64>,
    pub general_gamma: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    H,
    C,
    Alpha,
    Eps,
    Beta,
    Delta,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub axis: Axis,
    pub values: Vec<f64>,
}

fn one() -> f64 {
    1.0
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_nodes() -> usize {
    DEFAULT_NODES
}
fn default_intervals() -> usize {
    512
}
fn default_grid() -> GridName {
    GridName::Uniform
}
fn default_clustering() -> f64 {
    0.5
}
fn default_t_end() -> f64 {
    5.0
}
fn default_datum() -> DatumKind {
    DatumKind::Rho
}
fn default_lift_k() -> f64 {
    2.0
}

/// A configuration problem: reported as a usage error.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// Loaded config plus the directory relative paths resolve against.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: RunConfig,
    pub base: PathBuf,
}

impl Loaded {
    pub fn read(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self {
                config: RunConfig::default(),
                base: PathBuf::from("."),
            });
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig =
            toml::from_str(&text).map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { config, base })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn coefficients(&self) -> Result<&CoefficientsSection> {
        self.config
            .coefficients
            .as_ref()
            .ok_or_else(|| usage("config needs a [coefficients] section"))
    }

    pub fn pair(&self) -> Result<CoefficientPair> {
        let c = self.coefficients()?;
        self.pair_with(c)
    }

    pub fn pair_with(&self, c: &CoefficientsSection) -> Result<CoefficientPair> {
        let pair = match c.family {
            FamilyName::Constant => CoefficientPair::constant(c.alpha, c.beta)?,
            FamilyName::RationalBump => CoefficientPair::rational_bump(c.alpha, c.eps, c.beta, c.delta)?,
            FamilyName::GrimReaper => CoefficientPair::grim_reaper(c.alpha)?,
            FamilyName::Tabulated => {
                let file = c
                    .file
                    .as_ref()
                    .ok_or_else(|| usage("the tabulated family needs `file` in [coefficients]"))?;
                let path = self.resolve(file);
                let f = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
                let table = read_angle_table_csv(f).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                CoefficientPair::tabulated(table, c.symmetric.unwrap_or(false))
            }
        };
        Ok(match c.symmetric {
            Some(s) => pair.with_symmetric(s),
            None => pair,
        })
    }

    pub fn pde(&self) -> Result<&PdeSection> {
        self.config
            .pde
            .as_ref()
            .ok_or_else(|| usage("config needs a [pde] section"))
    }

    pub fn sweep(&self) -> Result<&SweepSection> {
        self.config
            .sweep
            .as_ref()
            .ok_or_else(|| usage("config needs a [sweep] section"))
    }

    pub fn suite(&self, scheme: Option<Scheme>) -> Result<SuiteConfig> {
        let v = self
            .config
            .verify
            .as_ref()
            .ok_or_else(|| usage("config needs a [verify] section"))?;
        let mut cfg = SuiteConfig::new(self.pair()?);
        if let Some(p) = &self.config.pde {
            cfg.intervals = p.intervals;
            cfg.grid = p.grid_kind();
            cfg.controls = p.controls(scheme);
            cfg.m1_offset = p.m1_offset;
        } else if let Some(s) = scheme {
            cfg.controls.scheme = s;
        }
        cfg.wave_tol = self.config.wave.tol;
        cfg.wave_nodes = self.config.wave.nodes;
        cfg.checks = v.checks.clone();
        cfg.cbar_override = v.cbar_override;
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut cfg.epsilon, v.epsilon);
        cfg.convergence.epsilon = cfg.epsilon;
        set(&mut cfg.t_end, v.t_end);
        set(&mut cfg.h0, v.h0);
        set(&mut cfg.s0_min, v.s0_min);
        set(&mut cfg.wedge_tol, v.wedge_tol);
        set(&mut cfg.convexity_rel_tol, v.convexity_rel_tol);
        set(&mut cfg.envelope.x_max, v.envelope_x_max);
        set(&mut cfg.envelope.slack_factor, v.envelope_slack_factor);
        set(&mut cfg.convergence.t_max, v.convergence_t_max);
        set(&mut cfg.convergence.error_fraction, v.error_fraction);
        set(&mut cfg.convergence.speed_tol, v.speed_tol);
        set(&mut cfg.general_delta, v.general_delta);
        set(&mut cfg.general_gamma, v.general_gamma);
        if let Some(l) = v.convergence_levels {
            cfg.convergence.levels = l;
        }
        Ok(cfg)
    }
}

impl PdeSection {
    pub fn grid_kind(&self) -> GridKind {
        match self.grid {
            GridName::Uniform => GridKind::Uniform,
            GridName::Clustered => GridKind::Clustered {
                strength: self.clustering,
            },
        }
    }

    /// A fixed step is implied when `dt` is given without `adaptive`.
    pub fn controls(&self, scheme: Option<Scheme>) -> EvolveControls {
        let mut c = EvolveControls::default();
        c.scheme = scheme.or(self.scheme).unwrap_or(c.scheme);
        if let Some(dt) = self.dt {
            c.dt = dt;
            c.adaptive = false;
        }
        if let Some(a) = self.adaptive {
            c.adaptive = a;
        }
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut c.dt_min, self.dt_min);
        set(&mut c.dt_max, self.dt_max);
        set(&mut c.du_max, self.du_max);
        set(&mut c.snapshot_every, self.snapshot_every);
        set(&mut c.slope_cap, self.slope_cap);
        c
    }
}

pub fn check_axis(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        bail!(usage("sweep axis is empty"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        bail!(usage("sweep axis values must be finite"));
    }
    let inc = values.windows(2).all(|w| w[1] > w[0]);
    let dec = values.windows(2).all(|w| w[1] < w[0]);
    if !(inc || dec) {
        bail!(usage("sweep axis values must be strictly monotone"));
    }
    Ok(())
}
