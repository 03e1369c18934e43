use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{three_point_derivative, three_point_second_derivative};

pub const MIN_INTERVALS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GridKind {
    Uniform,
    /// Blend of the uniform map and `-cos(pi (xi + 1) / 2)`; `strength = 1` is
    /// the full cosine map.
    Clustered { strength: f64 },
}

/// Nodes `-1 = x_0 < ... < x_N = 1`, mirror-symmetric about 0, `N` even.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    kind: GridKind,
    x: Vec<f64>,
}

impl Grid {
    pub fn uniform(intervals: usize) -> Result<Self> {
        Self::new(intervals, GridKind::Uniform)
    }

    pub fn clustered(intervals: usize, strength: f64) -> Result<Self> {
        Self::new(intervals, GridKind::Clustered { strength })
    }

    pub fn new(intervals: usize, kind: GridKind) -> Result<Self> {
        if intervals < MIN_INTERVALS || intervals % 2 != 0 {
            return Err(Error::Config(format!(
                "grid needs an even number of intervals >= {MIN_INTERVALS}, got {intervals}"
            )));
        }
        let map: Box<dyn Fn(f64) -> f64> = match kind {
            GridKind::Uniform => Box::new(|xi| xi),
            GridKind::Clustered { strength } => {
                if !(strength > 0.0 && strength <= 1.0) {
                    return Err(Error::Config(format!(
                        "clustering strength must lie in (0, 1], got {strength}"
                    )));
                }
                Box::new(move |xi: f64| {
                    (1.0 - strength) * xi - strength * (0.5 * std::f64::consts::PI * (xi + 1.0)).cos()
                })
            }
        };
        let n = intervals;
        let mut x = vec![0.0; n + 1];
        for i in 0..=n / 2 {
            let xi = -1.0 + 2.0 * i as f64 / n as f64;
            x[i] = map(xi);
            x[n - i] = -x[i];
        }
        x[0] = -1.0;
        x[n] = 1.0;
        x[n / 2] = 0.0;
        Ok(Self { kind, x })
    }

    /// Arbitrary strictly increasing nodes from `-1` to `1` (used when reading files).
    pub fn from_nodes(x: Vec<f64>) -> Result<Self> {
        if x.len() < 3 || x.first() != Some(&-1.0) || x.last() != Some(&1.0) {
            return Err(Error::Config("grid nodes must run from -1 to 1".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("grid nodes must be strictly increasing".into()));
        }
        Ok(Self { kind: GridKind::Uniform, x })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Number of intervals `N`.
    pub fn intervals(&self) -> usize {
        self.x.len() - 1
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn center(&self) -> usize {
        self.intervals() / 2
    }

    pub fn min_spacing(&self) -> f64 {
        self.x.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.intervals();
        (0..=n).all(|i| (self.x[i] + self.x[n - i]).abs() <= 1e-14)
    }

    /// Cell widths `x_{j+1} - x_j`.
    pub fn widths(&self) -> Vec<f64> {
        self.x.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Dual-cell lengths: half of each adjacent cell.
    pub fn volumes(&self) -> Vec<f64> {
        let d = self.widths();
        let n = self.intervals();
        let mut v = vec![0.0; n + 1];
        for j in 0..n {
            v[j] += 0.5 * d[j];
            v[j + 1] += 0.5 * d[j];
        }
        v
    }

    /// Nodal first derivative: three-point, one-sided at the ends.
    pub fn derivative(&self, u: &[f64]) -> Vec<f64> {
        let n = self.intervals();
        let x = &self.x;
        (0..=n)
            .map(|i| {
                let k = i.clamp(1, n - 1);
                three_point_derivative(x[i], [x[k - 1], x[k], x[k + 1]], [u[k - 1], u[k], u[k + 1]])
            })
            .collect()
    }

    /// Nodal second derivative: three-point, reusing the neighbouring stencil at the ends.
    pub fn second_derivative(&self, u: &[f64]) -> Vec<f64> {
        let n = self.intervals();
        let x = &self.x;
        (0..=n)
            .map(|i| {
                let k = i.clamp(1, n - 1);
                three_point_second_derivative([x[k - 1], x[k], x[k + 1]], [u[k - 1], u[k], u[k + 1]])
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_shape() {
        let g = Grid::uniform(64).unwrap();
        assert_eq!(g.len(), 65);
        assert_eq!(g.x()[32], 0.0);
        assert!(g.is_symmetric());
        assert!((g.volumes().iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(Grid::uniform(32).is_err());
        assert!(Grid::uniform(65).is_err());
    }

    #[test]
    fn clustered_grid_refines_ends() {
        let g = Grid::clustered(128, 0.5).unwrap();
        let d = g.widths();
        assert!(d[0] < d[64]);
        assert!(g.is_symmetric());
        assert!(g.x().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn derivatives_exact_on_quadratics() {
        let g = Grid::clustered(64, 0.3).unwrap();
        let u: Vec<f64> = g.x().iter().map(|x| 3.0 * x * x - x + 2.0).collect();
        let du = g.derivative(&u);
        let d2u = g.second_derivative(&u);
        for (i, &x) in g.x().iter().enumerate() {
            assert!((du[i] - (6.0 * x - 1.0)).abs() < 1e-11);
            assert!((d2u[i] - 6.0).abs() < 1e-9);
        }
    }
}
