use std::fmt;
use std::sync::Arc;

use crate::coefficients::{CoefficientPair, Requirements};
use crate::error::{Error, Result};
use crate::linalg::HermiteTable;
use crate::roots::bisect;
use crate::traveling_wave::{self, Profile, StationaryProfile, DEFAULT_NODES, DEFAULT_TOL};

use super::grid::Grid;
use super::state::GridState;

pub const DEFAULT_COMPAT_TOL: f64 = 1e-8;

/// `rho(x) = Phi(p x) + M1`, with `p` chosen so that `rho'(+-1) = +-rho(+-1)`.
#[derive(Debug, Clone)]
pub struct RhoDatum {
    pub p: f64,
    pub m1: f64,
    /// The admissible lower bound for `M1`.
    pub threshold: f64,
    profile: Arc<Profile>,
}

impl RhoDatum {
    /// Needs the profile of the infinite-slope wave of an even pair and the
    /// zero-speed profile of the same pair.
    pub fn new(wave: &Profile, stationary: &StationaryProfile, m1: f64) -> Result<Self> {
        if !wave.pair().is_symmetric() {
            return Err(Error::Hypothesis("rho needs an even coefficient pair".into()));
        }
        let threshold = stationary.threshold().max(0.0);
        if !(m1 > threshold) {
            return Err(Error::M1TooSmall { m1, threshold });
        }
        let g = |p: f64| -> Result<f64> {
            let v = wave.eval(p)?;
            Ok(p * v.psi - v.phi - m1)
        };
        let g_hi = g(1.0)?;
        if !(g_hi > 0.0) {
            return Err(Error::M1TooSmall { m1, threshold: threshold.max(g_hi + m1) });
        }
        let root = bisect(g, 0.0, 1.0, -m1, g_hi, 1e-12)?;
        Ok(Self {
            p: root.x,
            m1,
            threshold,
            profile: Arc::new(wave.clone()),
        })
    }

    /// `(rho, rho', rho'')` at `x`.
    pub fn eval(&self, x: f64) -> Result<(f64, f64, f64)> {
        let v = self.profile.eval(self.p * x)?;
        Ok((v.phi + self.m1, self.p * v.psi, self.p * self.p * v.phi_xx))
    }

    pub fn wave_profile(&self) -> &Profile {
        &self.profile
    }
}

/// Convenience form: solves for the wave and the zero-speed profile first.
pub fn make_rho(pair: &CoefficientPair, m1: f64) -> Result<RhoDatum> {
    pair.require(Requirements::SYMMETRIC_FLOW)?;
    let wave = traveling_wave::solve_cbar(pair, DEFAULT_TOL)?;
    let stationary = traveling_wave::stationary_profile(pair, DEFAULT_NODES)?;
    RhoDatum::new(&wave.profile, &stationary, m1)
}

type DatumFn = dyn Fn(f64) -> Result<(f64, f64)> + Send + Sync;

/// A closed-form datum returning `(u, u')`.
#[derive(Clone)]
pub struct FunctionDatum {
    pub name: String,
    f: Arc<DatumFn>,
}

impl fmt::Debug for FunctionDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionDatum").field("name", &self.name).finish()
    }
}

impl FunctionDatum {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> Result<(f64, f64)> + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        (self.f)(x)
    }
}

/// `K e^{x^2/2}`, which satisfies `u'(+-1) = +-u(+-1)` for every `K`.
pub fn lift(x: f64) -> (f64, f64) {
    let e = (0.5 * x * x).exp();
    (e, x * e)
}

/// `x (1 - x^2)^2`: vanishes with its derivative at the walls and breaks evenness.
pub fn odd_bump(x: f64) -> (f64, f64) {
    let q = 1.0 - x * x;
    (x * q * q, q * q - 4.0 * x * x * q)
}

#[derive(Debug, Clone)]
pub enum InitialDatum {
    Rho(RhoDatum),
    Function(FunctionDatum),
    /// Cubic Hermite interpolation of `(x, u, u')` samples on `[-1, 1]`.
    Tabulated(HermiteTable),
}

impl InitialDatum {
    pub fn kind(&self) -> &'static str {
        match self {
            InitialDatum::Rho(_) => "rho",
            InitialDatum::Function(_) => "user-function",
            InitialDatum::Tabulated(_) => "tabulated",
        }
    }

    /// `K e^{x^2/2} + gamma x (1 - x^2)^2`.
    pub fn lift(k: f64, gamma: f64) -> Self {
        InitialDatum::Function(FunctionDatum::new(format!("lift(K={k}, gamma={gamma})"), move |x| {
            let (l, dl) = lift(x);
            let (o, d_o) = odd_bump(x);
            Ok((k * l + gamma * o, k * dl + gamma * d_o))
        }))
    }

    /// `rho + delta e^{x^2/2} + gamma x (1 - x^2)^2`: compatible whenever `rho` is,
    /// above `rho` for `delta > |gamma|`, and not even when `gamma != 0`.
    pub fn perturbed_rho(rho: &RhoDatum, delta: f64, gamma: f64) -> Self {
        let rho = rho.clone();
        InitialDatum::Function(FunctionDatum::new(
            format!("rho(p={}, M1={}) + lift(K={delta}, gamma={gamma})", rho.p, rho.m1),
            move |x| {
                let (r, dr, _) = rho.eval(x)?;
                let (l, dl) = lift(x);
                let (o, d_o) = odd_bump(x);
                Ok((r + delta * l + gamma * o, dr + delta * dl + gamma * d_o))
            },
        ))
    }

    pub fn tabulated(table: HermiteTable) -> Result<Self> {
        let (lo, hi) = table.domain();
        // exported wave profiles meet the walls only to the span tolerance
        if (lo + 1.0).abs() > 1e-9 || (hi - 1.0).abs() > 1e-9 {
            return Err(Error::IncompatibleDatum(format!(
                "tabulated datum must cover [-1, 1], got [{lo}, {hi}]"
            )));
        }
        Ok(InitialDatum::Tabulated(table))
    }

    /// `(u0, u0')` at `x`.
    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        match self {
            InitialDatum::Rho(r) => {
                let (v, d, _) = r.eval(x)?;
                Ok((v, d))
            }
            InitialDatum::Function(f) => f.eval(x),
            InitialDatum::Tabulated(t) => Ok(t.eval(x.clamp(-1.0, 1.0))),
        }
    }

    /// `(u0'(-1) + u0(-1), u0'(1) - u0(1))`.
    pub fn compatibility(&self) -> Result<(f64, f64)> {
        let (ul, dl) = self.eval(-1.0)?;
        let (ur, dr) = self.eval(1.0)?;
        Ok((dl + ul, dr - ur))
    }

    pub fn sample(&self, grid: &Grid) -> Result<GridState> {
        let u = grid
            .x()
            .iter()
            .map(|&x| self.eval(x).map(|v| v.0))
            .collect::<Result<Vec<_>>>()?;
        GridState::new(grid.clone(), u, 0.0)
    }

    /// Enforces `u0'(+-1) = +-u0(+-1)` within `compat_tol` and
    /// `u0(x) > phi(x;0) + M` at every node, then samples the datum.
    pub fn admit(&self, grid: &Grid, stationary: &StationaryProfile, compat_tol: f64) -> Result<GridState> {
        let (l, r) = self.compatibility()?;
        if l.abs() > compat_tol || r.abs() > compat_tol {
            return Err(Error::IncompatibleDatum(format!(
                "u0'(+-1) = +-u0(+-1) fails: residuals {l:e} at x = -1 and {r:e} at x = 1 exceed {compat_tol:e}"
            )));
        }
        let state = self.sample(grid)?;
        for (&x, &u) in grid.x().iter().zip(&state.u) {
            let bound = stationary.barrier(x)?;
            if !(u > bound) {
                return Err(Error::IncompatibleDatum(format!(
                    "u0(x) > phi(x;0) + M fails at x = {x}: u0 = {u}, phi(x;0) + M = {bound}"
                )));
            }
        }
        Ok(state)
    }
}
