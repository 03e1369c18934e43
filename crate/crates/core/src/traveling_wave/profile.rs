use std::f64::consts::{FRAC_PI_2, PI};

use crate::coefficients::CoefficientPair;
use crate::error::{Error, Result};
use crate::quadrature::{gk15, integrate, QuadratureConfig};

use super::{dphi_dw, dx_dw};

const PANEL_QUADRATURE: QuadratureConfig = QuadratureConfig {
    rel_tol: 1e-13,
    abs_tol: 1e-17,
    max_subdivisions: 400,
};

const END_SLACK: f64 = 1e-12;

/// Wave profile sampled in the normal angle `w = atan(phi')`.
///
/// Nodes cluster toward the two ends of the angle interval, where `x(w)`
/// flattens out and `phi` steepens. `w = 0` is always a node and carries the
/// minimum `phi = 0`.
#[derive(Debug, Clone)]
pub struct Profile {
    pair: CoefficientPair,
    c: f64,
    omega: Vec<f64>,
    x: Vec<f64>,
    phi: Vec<f64>,
    psi: Vec<f64>,
    /// Angle interval of the full profile.
    w_ends: (f64, f64),
    x_ends: (f64, f64),
    phi_ends: (f64, f64),
}

/// Profile value and derivatives at one abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub x: f64,
    pub omega: f64,
    pub phi: f64,
    pub psi: f64,
    pub phi_xx: f64,
}

fn slope(w: f64) -> f64 {
    if w.abs() == FRAC_PI_2 {
        f64::INFINITY.copysign(w)
    } else {
        w.tan()
    }
}

impl Profile {
    /// Integrates `dx/dw` and `dphi/dw` outward from `w = 0` over `[w_lo, w_hi]`
    /// and adds `shift` to `x`.
    pub(crate) fn build(
        pair: &CoefficientPair,
        c: f64,
        w_lo: f64,
        w_hi: f64,
        shift: f64,
        nodes: usize,
    ) -> Result<Self> {
        if !(w_lo < 0.0 && w_hi > 0.0) {
            return Err(Error::Domain(format!("angle interval [{w_lo}, {w_hi}] must contain 0")));
        }
        let m = (nodes / 2).max(8);
        let singular = |w: f64| w.abs() == FRAC_PI_2 && c * w.cos() - pair.at_angle(w).1 <= c * 1e-15;
        let half = |w_end: f64| -> Vec<f64> {
            // the end node is dropped where phi itself is infinite
            let denom = if singular(w_end) { 2 * m + 1 } else { 2 * m } as f64;
            (0..=m).map(|j| w_end * (0.5 * PI * j as f64 / (0.5 * denom)).sin()).collect()
        };
        let (left, right) = (half(w_lo), half(w_hi));
        let mut omega: Vec<f64> = left.iter().rev().copied().collect();
        omega.extend_from_slice(&right[1..]);
        let center = m;

        let n = omega.len();
        let mut x = vec![0.0; n];
        let mut phi = vec![0.0; n];
        let fx = |w: f64| dx_dw(pair, c, w);
        let fp = |w: f64| dphi_dw(pair, c, w);
        for k in center + 1..n {
            x[k] = x[k - 1] + integrate(fx, omega[k - 1], omega[k], &PANEL_QUADRATURE)?.value;
            phi[k] = phi[k - 1] + integrate(fp, omega[k - 1], omega[k], &PANEL_QUADRATURE)?.value;
        }
        for k in (0..center).rev() {
            x[k] = x[k + 1] - integrate(fx, omega[k], omega[k + 1], &PANEL_QUADRATURE)?.value;
            phi[k] = phi[k + 1] - integrate(fp, omega[k], omega[k + 1], &PANEL_QUADRATURE)?.value;
        }
        for xi in x.iter_mut() {
            *xi += shift;
        }
        let psi = omega.iter().map(|&w| slope(w)).collect();

        let end = |k: usize, w_end: f64| -> Result<(f64, f64)> {
            if omega[k] == w_end {
                return Ok((x[k], phi[k]));
            }
            let dx = integrate(fx, omega[k], w_end, &PANEL_QUADRATURE)?.value;
            Ok((x[k] + dx, f64::INFINITY))
        };
        let (x_lo, phi_lo) = end(0, w_lo)?;
        let (x_hi, phi_hi) = end(n - 1, w_hi)?;

        Ok(Self {
            pair: pair.clone(),
            c,
            omega,
            x,
            phi,
            psi,
            w_ends: (w_lo, w_hi),
            x_ends: (x_lo, x_hi),
            phi_ends: (phi_lo, phi_hi),
        })
    }

    pub fn speed(&self) -> f64 {
        self.c
    }

    pub fn pair(&self) -> &CoefficientPair {
        &self.pair
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `(x, phi, psi)` at every node.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.len()).map(|k| (self.x[k], self.phi[k], self.psi[k]))
    }

    /// The closed x-interval covered by the profile.
    pub fn domain(&self) -> (f64, f64) {
        self.x_ends
    }

    pub fn end_values(&self) -> (f64, f64) {
        self.phi_ends
    }

    pub fn end_angles(&self) -> (f64, f64) {
        self.w_ends
    }

    /// `phi` at the right end; `phi` has minimum 0.
    pub fn height(&self) -> f64 {
        self.phi_ends.1
    }

    fn x_at(&self, anchor: usize, w: f64) -> f64 {
        self.x[anchor] + gk15(&|s| dx_dw(&self.pair, self.c, s), self.omega[anchor], w).value
    }

    fn phi_at(&self, anchor: usize, w: f64) -> f64 {
        self.phi[anchor] + gk15(&|s| dphi_dw(&self.pair, self.c, s), self.omega[anchor], w).value
    }

    fn point(&self, x: f64, w: f64, phi: f64) -> ProfilePoint {
        let psi = slope(w);
        let phi_xx = if psi.is_infinite() {
            f64::INFINITY
        } else {
            let (a, b) = self.pair.at_angle(w);
            let s = (1.0 + psi * psi).sqrt();
            (1.0 + psi * psi) / a * (self.c - b * s)
        };
        ProfilePoint { x, omega: w, phi, psi, phi_xx }
    }

    /// `phi`, `phi'` and `phi''` at `x` by inverting `x(w)`.
    pub fn eval(&self, x: f64) -> Result<ProfilePoint> {
        let (x_lo, x_hi) = self.x_ends;
        // ends computed by root finding may miss +-1 by a few ulps
        let x = if (x - x_lo).abs() <= END_SLACK {
            x_lo
        } else if (x - x_hi).abs() <= END_SLACK {
            x_hi
        } else {
            x
        };
        if !(x >= x_lo && x <= x_hi) {
            return Err(Error::Domain(format!(
                "profile evaluated at x = {x} outside [{x_lo}, {x_hi}]"
            )));
        }
        let n = self.len();
        if x == x_lo {
            return Ok(self.point(x, self.w_ends.0, self.phi_ends.0));
        }
        if x == x_hi {
            return Ok(self.point(x, self.w_ends.1, self.phi_ends.1));
        }
        let (anchor, mut wl, mut wr) = if x < self.x[0] {
            (0, self.w_ends.0, self.omega[0])
        } else if x > self.x[n - 1] {
            (n - 1, self.omega[n - 1], self.w_ends.1)
        } else {
            let k = self.x.partition_point(|&v| v <= x).clamp(1, n - 1);
            if self.x[k - 1] == x {
                return Ok(self.point(x, self.omega[k - 1], self.phi[k - 1]));
            }
            // anchor at the node nearer w = 0 keeps the panel away from the ends
            let anchor = if self.omega[k].abs() < self.omega[k - 1].abs() { k } else { k - 1 };
            (anchor, self.omega[k - 1], self.omega[k])
        };

        let (xl, xr) = (self.x_at(anchor, wl), self.x_at(anchor, wr));
        let mut w = if xr > xl { wl + (wr - wl) * (x - xl) / (xr - xl) } else { 0.5 * (wl + wr) };
        let scale = 4.0 * f64::EPSILON * x.abs().max(1.0);
        for _ in 0..200 {
            let r = self.x_at(anchor, w) - x;
            if r.abs() <= scale {
                break;
            }
            if r < 0.0 {
                wl = w;
            } else {
                wr = w;
            }
            let newton = w - r / dx_dw(&self.pair, self.c, w);
            w = if newton > wl && newton < wr { newton } else { 0.5 * (wl + wr) };
            if wr - wl <= f64::EPSILON * wr.abs().max(wl.abs()) {
                break;
            }
        }
        Ok(self.point(x, w, self.phi_at(anchor, w)))
    }
}

/// The zero-speed profile on `[-1, 1]` and its boundary constant `M`.
#[derive(Debug, Clone)]
pub struct StationaryProfile {
    pub profile: Profile,
    pub phi_left: f64,
    pub phi_right: f64,
    pub dphi_left: f64,
    pub dphi_right: f64,
    pub m: f64,
    /// `M < 0` can occur; callers may want to report it.
    pub m_negative: bool,
}

impl StationaryProfile {
    pub(crate) fn new(profile: Profile) -> Result<Self> {
        let (phi_left, phi_right) = profile.end_values();
        let (w_lo, w_hi) = profile.end_angles();
        let (dphi_left, dphi_right) = (w_lo.tan(), w_hi.tan());
        let m = (dphi_right - phi_right).max(-dphi_left - phi_left);
        Ok(Self {
            profile,
            phi_left,
            phi_right,
            dphi_left,
            dphi_right,
            m,
            m_negative: m < 0.0,
        })
    }

    /// `max_x phi(x;0) + M` over `[-1, 1]`, attained at an end by convexity.
    pub fn threshold(&self) -> f64 {
        self.phi_left.max(self.phi_right) + self.m
    }

    /// `phi(x;0) + M`.
    pub fn barrier(&self, x: f64) -> Result<f64> {
        Ok(self.profile.eval(x.clamp(-1.0, 1.0))?.phi + self.m)
    }
}
