use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::grid::Grid;

/// Nodal values of `u` at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridState {
    pub grid: Grid,
    pub u: Vec<f64>,
    pub t: f64,
}

impl GridState {
    pub fn new(grid: Grid, u: Vec<f64>, t: f64) -> Result<Self> {
        if u.len() != grid.len() {
            return Err(Error::Config(format!(
                "state has {} values for {} nodes",
                u.len(),
                grid.len()
            )));
        }
        if let Some(i) = u.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite value at node {i}")));
        }
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
        }
        Ok(Self { grid, u, t })
    }

    pub fn from_fn(grid: Grid, t: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let u = grid.x().iter().map(|&x| f(x)).collect();
        Self::new(grid, u, t)
    }

    pub fn x(&self) -> &[f64] {
        self.grid.x()
    }

    pub fn ux(&self) -> Vec<f64> {
        self.grid.derivative(&self.u)
    }

    pub fn uxx(&self) -> Vec<f64> {
        self.grid.second_derivative(&self.u)
    }

    pub fn center_value(&self) -> f64 {
        self.u[self.grid.center()]
    }

    pub fn boundary_values(&self) -> (f64, f64) {
        (self.u[0], self.u[self.u.len() - 1])
    }

    /// `theta = atan(u_x)`, with one-sided differences at the ends.
    pub fn theta(&self) -> Vec<f64> {
        self.ux().into_iter().map(f64::atan).collect()
    }

    /// `(u_x + u)(-1)` and `(u_x - u)(1)` from one-sided second-order differences.
    pub fn boundary_residual(&self) -> (f64, f64) {
        let ux = self.ux();
        let n = self.u.len() - 1;
        (ux[0] + self.u[0], ux[n] - self.u[n])
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().all(|v| v.is_finite())
    }
}

/// `theta = atan(u_x)` at every node.
pub fn theta_of(state: &GridState) -> Vec<f64> {
    state.theta()
}

pub fn boundary_residual(state: &GridState) -> (f64, f64) {
    state.boundary_residual()
}
