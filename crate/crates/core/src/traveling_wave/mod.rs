//! Cup-like traveling waves `u = phi(x) + c t`.
//!
//! The half-widths of a wave with speed `c` are the span integrals
//! `X+(c) = int_0^inf a(r) dr / ((1+r^2)(c - b(r) sqrt(1+r^2)))` and the mirror
//! `X-(c)` over `r < 0`. With `r = tan(w)` both become proper integrals of
//! `a cos(w) / (c cos(w) - b)` over a quarter turn. The speed is the unique `c`
//! at which the span `X+ - X-` equals the band width 2.

mod profile;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

pub use profile::{Profile, ProfilePoint, StationaryProfile};

use crate::coefficients::{CoefficientPair, Requirements};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::roots::bisect;

/// Default tolerance on `|d(c) - 2|`.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default number of profile nodes.
pub const DEFAULT_NODES: usize = 2048;

const SMALLEST_C: f64 = 1e-12;

pub(crate) const SPAN_QUADRATURE: QuadratureConfig = QuadratureConfig {
    rel_tol: 1e-13,
    abs_tol: 1e-15,
    max_subdivisions: 4000,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// `dx/dw` along the wave, as a function of the normal angle.
#[inline]
pub(crate) fn dx_dw(pair: &CoefficientPair, c: f64, w: f64) -> f64 {
    let (a, b) = pair.at_angle(w);
    let cw = w.cos();
    a * cw / (c * cw - b)
}

/// `dphi/dw = tan(w) dx/dw`.
#[inline]
pub(crate) fn dphi_dw(pair: &CoefficientPair, c: f64, w: f64) -> f64 {
    let (a, b) = pair.at_angle(w);
    a * w.sin() / (c * w.cos() - b)
}

fn check_speed(pair: &CoefficientPair, c: f64) -> Result<()> {
    if !c.is_finite() || c < 0.0 {
        return Err(Error::Domain(format!("wave speed must be finite and nonnegative, got {c}")));
    }
    if c == 0.0 {
        if pair.forcing_vanishes() {
            return Err(Error::DivergentIntegral(
                "span integral diverges at c = 0 when b vanishes".into(),
            ));
        }
        if !pair.forcing_negative() {
            return Err(Error::Domain("c = 0 requires b < 0 at every slope".into()));
        }
    }
    Ok(())
}

/// Integral of `dx/dw` over `[0, w_max]` (plus side) or `[-w_max, 0]` (minus side, negated).
fn half_span(pair: &CoefficientPair, c: f64, w_max: f64, side: Side) -> Result<f64> {
    check_speed(pair, c)?;
    match side {
        Side::Plus => Ok(integrate(|w| dx_dw(pair, c, w), 0.0, w_max, &SPAN_QUADRATURE)?.value),
        // substitute w -> -w so that even pairs reproduce -X+ exactly
        Side::Minus => Ok(-integrate(|w| dx_dw(pair, c, -w), 0.0, w_max, &SPAN_QUADRATURE)?.value),
    }
}

/// `X+(c)`.
pub fn x_plus(pair: &CoefficientPair, c: f64) -> Result<f64> {
    half_span(pair, c, FRAC_PI_2, Side::Plus)
}

/// `X-(c)`, which is negative.
pub fn x_minus(pair: &CoefficientPair, c: f64) -> Result<f64> {
    half_span(pair, c, FRAC_PI_2, Side::Minus)
}

/// Span integrals truncated to slopes in `[0, h]` or `[-h, 0]`.
pub fn x_h(pair: &CoefficientPair, c: f64, h: f64, side: Side) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("boundary slope h must be positive, got {h}")));
    }
    half_span(pair, c, h.atan(), side)
}

/// `d(c) = X+(c) - X-(c)`.
pub fn span(pair: &CoefficientPair, c: f64) -> Result<f64> {
    Ok(x_plus(pair, c)? - x_minus(pair, c)?)
}

/// `d_h(c) = X+_h(c) - X-_h(c)`.
pub fn span_h(pair: &CoefficientPair, c: f64, h: f64) -> Result<f64> {
    Ok(x_h(pair, c, h, Side::Plus)? - x_h(pair, c, h, Side::Minus)?)
}

/// A speed together with its profile.
#[derive(Debug, Clone)]
pub struct WaveSolution {
    pub c: f64,
    /// Boundary slope; `None` is the infinite-slope wave.
    pub h: Option<f64>,
    /// Unshifted span endpoints `X+` and `X-` (or their truncated versions).
    pub x_plus: f64,
    pub x_minus: f64,
    /// `Phi` at the right end minus its minimum; infinite for the grim reaper.
    pub height: f64,
    /// Achieved `|d(c) - 2|`.
    pub tol: f64,
    pub profile: Profile,
}

/// The `wave.json` record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveSummary {
    pub c: f64,
    pub h: Option<f64>,
    pub x_plus: f64,
    pub x_minus: f64,
    pub height: f64,
    pub tol: f64,
}

impl WaveSolution {
    pub fn summary(&self) -> WaveSummary {
        WaveSummary {
            c: self.c,
            h: self.h,
            x_plus: self.x_plus,
            x_minus: self.x_minus,
            height: self.height,
            tol: self.tol,
        }
    }

    pub fn span(&self) -> f64 {
        self.x_plus - self.x_minus
    }
}

/// Bisection for the decreasing function `d(c) - 2` with the upper bracket
/// `c_hi` supplied by theory.
fn solve_span(d: impl Fn(f64) -> Result<f64>, c_hi: f64, tol: f64) -> Result<(f64, f64)> {
    let f = |c: f64| Ok(d(c)? - 2.0);
    let f_hi = f(c_hi)?;
    if f_hi.abs() < tol {
        return Ok((c_hi, f_hi.abs()));
    }
    if f_hi > 0.0 {
        return Err(Error::Hypothesis(format!(
            "span at the upper speed bound c = {c_hi} is {} > 2",
            f_hi + 2.0
        )));
    }
    let mut c_lo = 1.0f64.min(0.5 * c_hi);
    let mut f_lo = f(c_lo)?;
    while f_lo <= 0.0 {
        if f_lo.abs() < tol {
            return Ok((c_lo, f_lo.abs()));
        }
        c_lo *= 0.5;
        if c_lo < SMALLEST_C {
            return Err(Error::Hypothesis(format!(
                "span d(c) <= 2 down to c = {SMALLEST_C:e} (d(0+) ~ {}), so no wave of width 2 exists",
                f_lo + 2.0
            )));
        }
        f_lo = f(c_lo)?;
    }
    let root = bisect(f, c_lo, c_hi, f_lo, f_hi, tol)?;
    if root.residual.abs() >= tol {
        return Err(Error::Accuracy {
            estimate: root.x,
            error: root.residual.abs(),
        });
    }
    Ok((root.x, root.residual.abs()))
}

fn require_wave_pair(pair: &CoefficientPair) -> Result<()> {
    pair.require(Requirements::WAVE).map(|_| ())
}

/// The speed `c_bar` of the infinite-slope wave and its profile `Phi`.
pub fn solve_cbar(pair: &CoefficientPair, tol: f64) -> Result<WaveSolution> {
    solve_cbar_with_nodes(pair, tol, DEFAULT_NODES)
}

pub fn solve_cbar_with_nodes(pair: &CoefficientPair, tol: f64, nodes: usize) -> Result<WaveSolution> {
    require_wave_pair(pair)?;
    let c_hi = 0.5 * PI * pair.extrema().a_sup;
    let (c, residual) = solve_span(|c| span(pair, c), c_hi, tol)?;
    let x_plus = x_plus(pair, c)?;
    let x_minus = x_minus(pair, c)?;
    let profile = reconstruct_profile(pair, c, None, nodes)?;
    Ok(WaveSolution {
        c,
        h: None,
        x_plus,
        x_minus,
        height: profile.height(),
        tol: residual,
        profile,
    })
}

/// The speed `c(h)` of the wave with boundary slopes `+-h` and its profile.
pub fn solve_c_of_h(pair: &CoefficientPair, h: f64, tol: f64) -> Result<WaveSolution> {
    solve_c_of_h_with_nodes(pair, h, tol, DEFAULT_NODES)
}

pub fn solve_c_of_h_with_nodes(pair: &CoefficientPair, h: f64, tol: f64, nodes: usize) -> Result<WaveSolution> {
    if h == f64::INFINITY {
        return solve_cbar_with_nodes(pair, tol, nodes);
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!("boundary slope h must be positive, got {h}")));
    }
    require_wave_pair(pair)?;
    let e = pair.extrema();
    let lhs = e.a0 * h;
    let rhs = -e.b0 * (1.0 + h * h).sqrt();
    if !(lhs > rhs) {
        return Err(Error::Hypothesis(format!(
            "a0*h > -b0*sqrt(1+h^2) fails: {lhs} <= {rhs} at h = {h}"
        )));
    }
    let c_hi = e.a_sup * h.atan();
    let (c, residual) = solve_span(|c| span_h(pair, c, h), c_hi, tol)?;
    let x_plus = x_h(pair, c, h, Side::Plus)?;
    let x_minus = x_h(pair, c, h, Side::Minus)?;
    let profile = reconstruct_profile(pair, c, Some(h), nodes)?;
    Ok(WaveSolution {
        c,
        h: Some(h),
        x_plus,
        x_minus,
        height: profile.height(),
        tol: residual,
        profile,
    })
}

/// Profile of the wave with speed `c > 0` and boundary slope `h` (`None` for
/// infinite), shifted so that the right end sits at `x = 1` and `min phi = 0`.
pub fn reconstruct_profile(pair: &CoefficientPair, c: f64, h: Option<f64>, nodes: usize) -> Result<Profile> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Domain(format!("profile needs a positive speed, got {c}")));
    }
    let w_end = match h {
        None => FRAC_PI_2,
        Some(h) if h > 0.0 && h.is_finite() => h.atan(),
        Some(h) => return Err(Error::Domain(format!("boundary slope h must be positive, got {h}"))),
    };
    let x_right = half_span(pair, c, w_end, Side::Plus)?;
    Profile::build(pair, c, -w_end, w_end, 1.0 - x_right, nodes)
}

/// The zero-speed profile `phi(x; 0)` on `[-1, 1]` with `phi(0; 0) = 0`, and
/// the smallest `M` with `phi'(1;0) <= phi(1;0) + M` and
/// `-phi'(-1;0) <= phi(-1;0) + M`.
pub fn stationary_profile(pair: &CoefficientPair, nodes: usize) -> Result<StationaryProfile> {
    require_wave_pair(pair)?;
    if !pair.forcing_negative() {
        return Err(Error::Hypothesis("the zero-speed profile needs b < 0".into()));
    }
    let right = x_plus(pair, 0.0)?;
    let left = x_minus(pair, 0.0)?;
    if !(right > 1.0 && left < -1.0) {
        return Err(Error::Hypothesis(format!(
            "the zero-speed profile must cover [-1, 1]: X+(0) = {right}, X-(0) = {left}"
        )));
    }
    let w_plus = angle_at_width(pair, 1.0, Side::Plus)?;
    let w_minus = -angle_at_width(pair, 1.0, Side::Minus)?;
    let profile = Profile::build(pair, 0.0, w_minus, w_plus, 0.0, nodes)?;
    StationaryProfile::new(profile)
}

/// The angle `w > 0` at which the zero-speed half span reaches `width`.
fn angle_at_width(pair: &CoefficientPair, width: f64, side: Side) -> Result<f64> {
    let g = |w: f64| -> Result<f64> { Ok(half_span(pair, 0.0, w, side)?.abs() - width) };
    let hi = FRAC_PI_2;
    let g_hi = g(hi)?;
    let root = bisect(g, 0.0, hi, -width, g_hi, 1e-15)?;
    Ok(root.x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> CoefficientPair {
        CoefficientPair::constant(1.0, 0.5).unwrap()
    }

    #[test]
    fn grim_reaper_spans() {
        let gr = CoefficientPair::grim_reaper(1.0).unwrap();
        assert!((x_plus(&gr, 1.0).unwrap() - FRAC_PI_2).abs() < 1e-13);
        assert!((x_minus(&gr, 1.0).unwrap() + FRAC_PI_2).abs() < 1e-13);
        assert!((x_h(&gr, 1.0, 1.0, Side::Plus).unwrap() - PI / 4.0).abs() < 1e-13);
        assert!((span(&gr, FRAC_PI_2).unwrap() - 2.0).abs() < 1e-13);
        assert!(matches!(x_plus(&gr, 0.0), Err(Error::DivergentIntegral(_))));
        assert!(matches!(x_plus(&gr, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_speed_unit_ratio() {
        let pair = CoefficientPair::constant(1.0, 1.0).unwrap();
        assert!((x_plus(&pair, 0.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((x_minus(&pair, 0.0).unwrap() + 1.0).abs() < 1e-13);
        let v = x_h(&pair, 0.0, 1.0, Side::Plus).unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn even_pair_minus_side_mirrors() {
        let pair = CoefficientPair::rational_bump(1.0, 0.2, 0.5, 0.1).unwrap();
        let p = x_plus(&pair, 0.8).unwrap();
        let m = x_minus(&pair, 0.8).unwrap();
        assert!((p + m).abs() < 1e-12);
    }

    #[test]
    fn truncated_span_tail() {
        let pair = reference();
        let full = x_plus(&pair, 1.0).unwrap();
        let cut = x_h(&pair, 1.0, 1e6, Side::Plus).unwrap();
        assert!((full - cut).abs() < 1e-5);
        assert!(span_h(&pair, 1.0, 5.0).unwrap() < span(&pair, 1.0).unwrap());
    }

    #[test]
    fn grim_reaper_speeds() {
        let gr = CoefficientPair::grim_reaper(1.0).unwrap();
        let w = solve_cbar(&gr, DEFAULT_TOL).unwrap();
        assert!((w.c - FRAC_PI_2).abs() < 1e-8);
        assert!(w.height.is_infinite());
        for &h in &[0.5, 2.0, 7.0] {
            let w = solve_c_of_h(&gr, h, DEFAULT_TOL).unwrap();
            assert!((w.c - f64::atan(h)).abs() < 1e-9, "h = {h}: {}", w.c);
        }
    }

    #[test]
    fn reference_speed_and_bounds() {
        let w = solve_cbar(&reference(), DEFAULT_TOL).unwrap();
        assert!((w.c - 0.671_385_753_721_932_4).abs() < 1e-8);
        assert!(w.c > 0.0 && w.c < FRAC_PI_2);
        assert!((w.span() - 2.0).abs() < 1e-9);
        assert!(w.height <= 2.0 + 1e-6);
        let c5 = solve_c_of_h(&reference(), 5.0, DEFAULT_TOL).unwrap();
        assert!((c5.c - 0.626_441_79).abs() < 1e-7);
    }

    #[test]
    fn c_of_h_hypothesis_is_named() {
        // a0 h > -b0 sqrt(1+h^2) fails for small h when -b0 is close to a0
        let pair = CoefficientPair::constant(1.0, 0.9).unwrap();
        match solve_c_of_h(&pair, 1.0, DEFAULT_TOL) {
            Err(Error::Hypothesis(msg)) => assert!(msg.contains("a0*h > -b0*sqrt(1+h^2)")),
            other => panic!("expected hypothesis error, got {other:?}"),
        }
    }

    #[test]
    fn inadmissible_pair_rejected() {
        let pair = CoefficientPair::constant(1.0, 1.0).unwrap();
        assert!(matches!(solve_cbar(&pair, DEFAULT_TOL), Err(Error::InadmissiblePair(_))));
    }

    #[test]
    fn stationary_reference() {
        let s = stationary_profile(&reference(), 1024).unwrap();
        // the zero-speed profile of a = 1, b = -1/2 is an arc of the circle of radius 2
        let exact = |x: f64| 2.0 - (4.0 - x * x).sqrt();
        for &x in &[-0.9, -0.3, 0.0, 0.5, 1.0] {
            let p = s.profile.eval(x).unwrap();
            assert!((p.phi - exact(x)).abs() < 1e-10, "x = {x}");
        }
        assert!((s.m - (1.0 / 3f64.sqrt() - (2.0 - 3f64.sqrt()))).abs() < 1e-9);
        assert!(!s.m_negative);
    }
}
