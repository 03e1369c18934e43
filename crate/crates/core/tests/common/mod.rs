//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// `int_0^W cos w / (c cos w + beta) dw` in closed form.
pub fn constant_half_span(c: f64, beta: f64, w: f64) -> f64 {
    let tau = (0.5 * w).tan();
    let i = if (c - beta).abs() < 1e-14 {
        tau / beta
    } else if c > beta {
        let r = (c * c - beta * beta).sqrt();
        let (p, q) = ((c + beta).sqrt(), (c - beta).sqrt());
        ((p + q * tau) / (p - q * tau)).ln() / r
    } else {
        let r = (beta * beta - c * c).sqrt();
        2.0 / r * (((beta - c) / (beta + c)).sqrt() * tau).atan()
    };
    (w - beta * i) / c
}

/// `int_0^W sin w / (c cos w + beta) dw`.
pub fn constant_half_rise(c: f64, beta: f64, w: f64) -> f64 {
    ((c + beta) / (c * w.cos() + beta)).ln() / c
}

/// Plain bisection on a decreasing function.
pub fn bisect_decreasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Speed of the infinite-slope wave for `a = alpha`, `b = -beta`.
pub fn constant_cbar(alpha: f64, beta: f64) -> f64 {
    bisect_decreasing(|c| 2.0 * alpha * constant_half_span(c, beta, FRAC_PI_2) - 2.0, 1e-6, 10.0 * alpha)
}

/// Speed of the wave with boundary slope `h`.
pub fn constant_c_of_h(alpha: f64, beta: f64, h: f64) -> f64 {
    let w = h.atan();
    bisect_decreasing(|c| 2.0 * alpha * constant_half_span(c, beta, w) - 2.0, 1e-6, 10.0 * alpha)
}

/// `a = alpha + eps/(1+p^2)`, `b = -beta - delta/(1+p^2)`.
#[derive(Debug, Clone, Copy)]
pub struct Bump {
    pub alpha: f64,
    pub eps: f64,
    pub beta: f64,
    pub delta: f64,
}

impl Bump {
    pub fn a(&self, p: f64) -> f64 {
        self.alpha + self.eps / (1.0 + p * p)
    }

    pub fn b(&self, p: f64) -> f64 {
        -self.beta - self.delta / (1.0 + p * p)
    }

    /// `phi'' = (1 + psi^2)(c - b sqrt(1 + psi^2)) / a`.
    pub fn curvature(&self, c: f64, psi: f64) -> f64 {
        let s = (1.0 + psi * psi).sqrt();
        (1.0 + psi * psi) * (c - self.b(psi) * s) / self.a(psi)
    }
}

/// Classical RK4 for `(phi, psi)` from `x = 0` with `phi = psi = 0`; returns
/// samples at multiples of `dx_out` up to `x_end`.
pub fn rk4_profile(f: impl Fn(f64) -> f64, x_end: f64, steps_per_out: usize, dx_out: f64) -> Vec<(f64, f64, f64)> {
    let h = dx_out / steps_per_out as f64;
    let rhs = |y: [f64; 2]| [y[1], f(y[1])];
    let mut y = [0.0, 0.0];
    let mut out = vec![(0.0, 0.0, 0.0)];
    let n_out = (x_end / dx_out).round() as usize;
    for k in 1..=n_out {
        for _ in 0..steps_per_out {
            let k1 = rhs(y);
            let k2 = rhs([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
            let k3 = rhs([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
            let k4 = rhs([y[0] + h * k3[0], y[1] + h * k3[1]]);
            for i in 0..2 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        out.push((k as f64 * dx_out, y[0], y[1]));
    }
    out
}

/// `-(2/pi) ln cos(pi x / 2)`.
pub fn grim_reaper(x: f64) -> f64 {
    -(2.0 / std::f64::consts::PI) * (FRAC_PI_2 * x).cos().ln()
}
