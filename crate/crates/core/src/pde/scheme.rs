//! Spatial discretization of
//!
//! ```text
//! u_t = a(u_x) u_xx / (1 + u_x^2) + b(u_x) sqrt(1 + u_x^2)
//! ```
//!
//! in divergence form `u_t = d/dx F(atan u_x) + b(u_x) sqrt(1 + u_x^2)` with
//! `F' (theta) = a(tan theta)`. Each node owns the dual cell made of the two
//! adjacent half-cells; fluxes are evaluated from the cell slopes, and at the
//! walls the flux is `F(atan(+-u))`, which is where the condition
//! `u_x(+-1) = +-u(+-1)` enters. The forcing is integrated over each half-cell
//! with that cell's slope.
//!
//! This form stays consistent when the wall layer becomes thinner than a cell:
//! the last cell then carries the arclength of the layer, and the flux saturates
//! because `F` is bounded.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientPair;
use crate::error::{Error, Result};
use crate::linalg::solve_tridiagonal;

use super::state::GridState;

pub const DEFAULT_CFL: f64 = 0.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Diffusive flux linearized with frozen secant coefficients, solved implicitly.
    SemiImplicit,
    /// Forward Euler, kept for cross-checks.
    Explicit,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::SemiImplicit => "semi-implicit",
            Scheme::Explicit => "explicit",
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "semi-implicit" => Ok(Scheme::SemiImplicit),
            "explicit" => Ok(Scheme::Explicit),
            other => Err(Error::Config(format!(
                "unknown scheme `{other}` (expected semi-implicit or explicit)"
            ))),
        }
    }
}

#[inline]
fn forcing(pair: &CoefficientPair, s: f64) -> f64 {
    pair.b(s) * (1.0 + s * s).sqrt()
}

/// `F(atan s) / s`, the secant diffusivity of a cell with slope `s`.
#[inline]
fn secant(pair: &CoefficientPair, s: f64) -> f64 {
    if s.abs() < 1e-12 {
        pair.a(0.0)
    } else {
        pair.flux(s.atan()) / s
    }
}

struct Cells {
    width: Vec<f64>,
    slope: Vec<f64>,
    volume: Vec<f64>,
    /// Forcing collected at each node from its two half-cells.
    source: Vec<f64>,
}

fn cells(x: &[f64], u: &[f64], pair: &CoefficientPair) -> Cells {
    let n = x.len() - 1;
    let width: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let slope: Vec<f64> = (0..n).map(|j| (u[j + 1] - u[j]) / width[j]).collect();
    let mut volume = vec![0.0; n + 1];
    let mut source = vec![0.0; n + 1];
    for j in 0..n {
        let half = 0.5 * width[j];
        let g = forcing(pair, slope[j]) * half;
        volume[j] += half;
        volume[j + 1] += half;
        source[j] += g;
        source[j + 1] += g;
    }
    Cells {
        width,
        slope,
        volume,
        source,
    }
}

/// Wall fluxes `(F(atan(-u_0)), F(atan(u_N)))`.
fn wall_fluxes(u: &[f64], pair: &CoefficientPair) -> (f64, f64) {
    let n = u.len() - 1;
    (pair.flux((-u[0]).atan()), pair.flux(u[n].atan()))
}

/// `du/dt` at every node.
pub fn rhs(state: &GridState, pair: &CoefficientPair) -> Vec<f64> {
    rhs_nodes(state.x(), &state.u, pair)
}

pub fn rhs_nodes(x: &[f64], u: &[f64], pair: &CoefficientPair) -> Vec<f64> {
    let n = x.len() - 1;
    let c = cells(x, u, pair);
    let flux: Vec<f64> = c.slope.iter().map(|s| pair.flux(s.atan())).collect();
    let (left, right) = wall_fluxes(u, pair);
    (0..=n)
        .map(|i| {
            let f_in = if i == 0 { left } else { flux[i - 1] };
            let f_out = if i == n { right } else { flux[i] };
            (f_out - f_in + c.source[i]) / c.volume[i]
        })
        .collect()
}

/// `du/dt` at the interior nodes `x_1 .. x_{N-1}` only, with the end values
/// held as Dirichlet data. `x` need not span `[-1, 1]`.
pub fn interior_rhs(x: &[f64], u: &[f64], pair: &CoefficientPair) -> Vec<f64> {
    let n = x.len() - 1;
    let c = cells(x, u, pair);
    let flux: Vec<f64> = c.slope.iter().map(|s| pair.flux(s.atan())).collect();
    (1..n)
        .map(|i| (flux[i] - flux[i - 1] + c.source[i]) / c.volume[i])
        .collect()
}

/// Largest stable forward-Euler step: `cfl * min dx^2 / a_sup`. The diffusivity
/// of the divergence form is `a / (1 + u_x^2) <= a_sup`.
pub fn explicit_dt_limit(state: &GridState, pair: &CoefficientPair, cfl: f64) -> f64 {
    let h = state.grid.min_spacing();
    cfl * h * h / pair.extrema().a_sup
}

/// Advances one step of size `dt`.
pub fn step(state: &GridState, pair: &CoefficientPair, dt: f64, scheme: Scheme) -> Result<GridState> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let u = match scheme {
        Scheme::Explicit => {
            let r = rhs(state, pair);
            state.u.iter().zip(&r).map(|(u, r)| u + dt * r).collect::<Vec<_>>()
        }
        Scheme::SemiImplicit => semi_implicit(state, pair, dt),
    };
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::BlowUp {
            t: state.t + dt,
            last_good: Box::new(state.clone()),
        });
    }
    Ok(GridState {
        grid: state.grid.clone(),
        u,
        t: state.t + dt,
    })
}

fn semi_implicit(state: &GridState, pair: &CoefficientPair, dt: f64) -> Vec<f64> {
    let x = state.x();
    let u = &state.u;
    let n = x.len() - 1;
    let c = cells(x, u, pair);
    let k: Vec<f64> = (0..n).map(|j| secant(pair, c.slope[j]) / c.width[j]).collect();
    let (left, right) = wall_fluxes(u, pair);

    let mut lower = vec![0.0; n + 1];
    let mut diag = vec![1.0; n + 1];
    let mut upper = vec![0.0; n + 1];
    let mut b = vec![0.0; n + 1];
    for i in 0..=n {
        let r = dt / c.volume[i];
        let mut explicit = c.source[i];
        if i > 0 {
            diag[i] += r * k[i - 1];
            lower[i] = -r * k[i - 1];
        } else {
            explicit -= left;
        }
        if i < n {
            diag[i] += r * k[i];
            upper[i] = -r * k[i];
        } else {
            explicit += right;
        }
        b[i] = u[i] + r * explicit;
    }
    solve_tridiagonal(&lower, &diag, &upper, &mut b);
    b
}

/// Residual of the angle equation
/// `theta_t = a cos^2(theta) theta_xx + a' theta_x^2 + b sin(theta) theta_x + b' theta_x / cos(theta)`
/// at the interior nodes, with `theta_t = (u_t)_x / (1 + u_x^2)` taken from [`rhs`].
pub fn theta_residual(state: &GridState, pair: &CoefficientPair) -> Result<Vec<f64>> {
    let grid = &state.grid;
    let ux = state.ux();
    let theta: Vec<f64> = ux.iter().map(|p| p.atan()).collect();
    let theta_x = grid.derivative(&theta);
    let theta_xx = grid.second_derivative(&theta);
    let ut_x = grid.derivative(&rhs(state, pair));
    let n = grid.intervals();
    (1..n)
        .map(|i| {
            let v = pair.eval(ux[i])?;
            let (s, co) = theta[i].sin_cos();
            let lhs = ut_x[i] / (1.0 + ux[i] * ux[i]);
            let rhs = v.a * co * co * theta_xx[i]
                + v.da * theta_x[i] * theta_x[i]
                + v.b * s * theta_x[i]
                + v.db * theta_x[i] / co;
            Ok(lhs - rhs)
        })
        .collect()
}
