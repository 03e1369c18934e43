//! Anisotropy coefficients `a(p)` (mobility) and `b(p)` (forcing) as functions
//! of the graph slope `p`, i.e. of the unit normal `(-p, 1)/sqrt(1 + p^2)`.
//!
//! Three families are supported:
//!
//! * `constant`: `a = alpha`, `b = -beta`;
//! * `rational-bump`: `a = alpha + eps/(1+p^2)`, `b = -beta - delta/(1+p^2)`,
//!   even in `p` by construction;
//! * `tabulated`: natural cubic splines of `a` and `b` in the normal angle
//!   `omega = atan(p)` over `[-pi/2, pi/2]`.
//!
//! Working in `omega` keeps every quantity bounded: `p = +-inf` is just
//! `omega = +-pi/2`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::CubicSpline;
use crate::quadrature::{integrate, QuadratureConfig};

/// Number of angle nodes used to sample coefficients on `[-pi/2, pi/2]`.
pub const ANGLE_SAMPLES: usize = 4096;

/// Strict inequalities evaluated by quadrature must clear `1` by this margin.
pub const INTEGRAL_CONDITION_MARGIN: f64 = 1e-10;

const EVEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Constant { alpha: f64, beta: f64 },
    RationalBump { alpha: f64, eps: f64, beta: f64, delta: f64 },
    Tabulated(AngleTable),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Constant { .. } => "constant",
            Family::RationalBump { .. } => "rational-bump",
            Family::Tabulated(_) => "tabulated",
        }
    }
}

/// Spline tables of `a` and `b` over the normal angle.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTable {
    a: CubicSpline,
    b: CubicSpline,
}

impl AngleTable {
    /// `omega` must be strictly increasing and span `[-pi/2, pi/2]`.
    pub fn new(omega: Vec<f64>, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        for (name, values) in [("omega", &omega), ("a", &a), ("b", &b)] {
            if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                return Err(Error::CoefficientDomain {
                    family: "tabulated",
                    parameter: name.to_string(),
                    value: *v,
                });
            }
        }
        let (first, last) = match (omega.first(), omega.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(Error::Config("tabulated coefficients need angle nodes".into())),
        };
        if (first + FRAC_PI_2).abs() > 1e-9 || (last - FRAC_PI_2).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "tabulated angle grid must span [-pi/2, pi/2], got [{first}, {last}]"
            )));
        }
        Ok(Self {
            a: CubicSpline::new(omega.clone(), a)?,
            b: CubicSpline::new(omega, b)?,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        self.a.knots()
    }
}

/// Function and derivative values at one slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoeffValues {
    pub a: f64,
    pub b: f64,
    pub da: f64,
    pub db: f64,
}

/// `a0 = min a`, `a_sup = max a`, `b0 = min b`, `b_sup = max b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrema {
    pub a0: f64,
    pub a_sup: f64,
    pub b0: f64,
    pub b_sup: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientPair {
    family: Family,
    symmetric: bool,
    degenerate: bool,
}

impl CoefficientPair {
    /// `a = alpha`, `b = -beta`.
    pub fn constant(alpha: f64, beta: f64) -> Result<Self> {
        check_finite("constant", &[("alpha", alpha), ("beta", beta)])?;
        Ok(Self {
            family: Family::Constant { alpha, beta },
            symmetric: true,
            degenerate: false,
        })
    }

    /// `a = alpha + eps/(1+p^2)`, `b = -beta - delta/(1+p^2)`.
    pub fn rational_bump(alpha: f64, eps: f64, beta: f64, delta: f64) -> Result<Self> {
        check_finite(
            "rational-bump",
            &[("alpha", alpha), ("eps", eps), ("beta", beta), ("delta", delta)],
        )?;
        Ok(Self {
            family: Family::RationalBump { alpha, eps, beta, delta },
            symmetric: true,
            degenerate: false,
        })
    }

    pub fn tabulated(table: AngleTable, symmetric: bool) -> Self {
        Self {
            family: Family::Tabulated(table),
            symmetric,
            degenerate: false,
        }
    }

    /// The grim-reaper test family `a = alpha`, `b = 0`.
    pub fn grim_reaper(alpha: f64) -> Result<Self> {
        Ok(Self::constant(alpha, 0.0)?.with_degenerate(true))
    }

    /// Admit `b = 0` (and only that) in place of the strict sign `b < 0`.
    pub fn with_degenerate(mut self, degenerate: bool) -> Self {
        self.degenerate = degenerate;
        self
    }

    /// Declares (or withdraws) evenness of the pair; verified by [`validate`](Self::validate).
    pub fn with_symmetric(mut self, symmetric: bool) -> Self {
        self.symmetric = symmetric;
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// True for the flagged `b = 0` family.
    pub fn forcing_vanishes(&self) -> bool {
        if !self.degenerate {
            return false;
        }
        let e = self.extrema();
        e.b0 == 0.0 && e.b_sup == 0.0
    }

    /// `b < 0` at every sampled slope.
    pub fn forcing_negative(&self) -> bool {
        self.extrema().b_sup < 0.0
    }

    /// Values and analytic derivatives at slope `p`.
    pub fn eval(&self, p: f64) -> Result<CoeffValues> {
        if !p.is_finite() {
            return Err(Error::Domain(format!("coefficients evaluated at non-finite slope {p}")));
        }
        let v = self.eval_unchecked(p);
        if [v.a, v.b, v.da, v.db].iter().all(|x| x.is_finite()) {
            Ok(v)
        } else {
            Err(self.domain_error())
        }
    }

    fn domain_error(&self) -> Error {
        let (family, params): (&'static str, Vec<(&str, f64)>) = match &self.family {
            Family::Constant { alpha, beta } => ("constant", vec![("alpha", *alpha), ("beta", *beta)]),
            Family::RationalBump { alpha, eps, beta, delta } => (
                "rational-bump",
                vec![("alpha", *alpha), ("eps", *eps), ("beta", *beta), ("delta", *delta)],
            ),
            Family::Tabulated(_) => ("tabulated", vec![]),
        };
        let worst = params
            .iter()
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .map(|&(n, v)| (n.to_string(), v))
            .unwrap_or_else(|| ("table".to_string(), f64::NAN));
        Error::CoefficientDomain {
            family,
            parameter: worst.0,
            value: worst.1,
        }
    }

    fn eval_unchecked(&self, p: f64) -> CoeffValues {
        match &self.family {
            Family::Constant { alpha, beta } => CoeffValues {
                a: *alpha,
                b: -beta,
                da: 0.0,
                db: 0.0,
            },
            Family::RationalBump { alpha, eps, beta, delta } => {
                let q = 1.0 / (1.0 + p * p);
                let dq = -2.0 * p * q * q;
                CoeffValues {
                    a: alpha + eps * q,
                    b: -beta - delta * q,
                    da: eps * dq,
                    db: -delta * dq,
                }
            }
            Family::Tabulated(t) => {
                let w = p.atan();
                let c2 = w.cos().powi(2);
                CoeffValues {
                    a: t.a.value(w),
                    b: t.b.value(w),
                    da: t.a.derivative(w) * c2,
                    db: t.b.derivative(w) * c2,
                }
            }
        }
    }

    /// `a(p)`; panics never, assumes finite parameters.
    #[inline]
    pub fn a(&self, p: f64) -> f64 {
        match &self.family {
            Family::Constant { alpha, .. } => *alpha,
            Family::RationalBump { alpha, eps, .. } => alpha + eps / (1.0 + p * p),
            Family::Tabulated(t) => t.a.value(p.atan()),
        }
    }

    #[inline]
    pub fn b(&self, p: f64) -> f64 {
        match &self.family {
            Family::Constant { beta, .. } => -beta,
            Family::RationalBump { beta, delta, .. } => -beta - delta / (1.0 + p * p),
            Family::Tabulated(t) => t.b.value(p.atan()),
        }
    }

    /// `(a, b)` at the normal angle `omega = atan(p)`, valid on the closed
    /// interval `[-pi/2, pi/2]`.
    #[inline]
    pub fn at_angle(&self, omega: f64) -> (f64, f64) {
        match &self.family {
            Family::Constant { alpha, beta } => (*alpha, -beta),
            Family::RationalBump { alpha, eps, beta, delta } => {
                let c2 = omega.cos().powi(2);
                (alpha + eps * c2, -beta - delta * c2)
            }
            Family::Tabulated(t) => (t.a.value(omega), t.b.value(omega)),
        }
    }

    /// `F(theta) = int_0^theta a(tan s) ds`, the flux whose x-derivative is
    /// `a(u_x) u_xx / (1 + u_x^2)` when `theta = atan(u_x)`.
    #[inline]
    pub fn flux(&self, theta: f64) -> f64 {
        match &self.family {
            Family::Constant { alpha, .. } => alpha * theta,
            Family::RationalBump { alpha, eps, .. } => {
                alpha * theta + eps * (0.5 * theta + 0.25 * (2.0 * theta).sin())
            }
            Family::Tabulated(t) => t.a.integral_from_start(theta) - t.a.integral_from_start(0.0),
        }
    }

    /// Nodes `omega_k` of the sampling contract, endpoints included.
    pub fn angle_grid() -> impl Iterator<Item = f64> {
        (0..ANGLE_SAMPLES)
            .map(|k| -FRAC_PI_2 + std::f64::consts::PI * k as f64 / (ANGLE_SAMPLES - 1) as f64)
    }

    pub fn extrema(&self) -> Extrema {
        match &self.family {
            Family::Constant { alpha, beta } => Extrema {
                a0: *alpha,
                a_sup: *alpha,
                b0: -beta,
                b_sup: -beta,
            },
            // the bump 1/(1+p^2) sweeps (0, 1]; the value 0 is the limit p -> inf
            Family::RationalBump { alpha, eps, beta, delta } => {
                let (a_lo, a_hi) = ordered(*alpha, alpha + eps);
                let (b_lo, b_hi) = ordered(-beta, -beta - delta);
                Extrema {
                    a0: a_lo,
                    a_sup: a_hi,
                    b0: b_lo,
                    b_sup: b_hi,
                }
            }
            Family::Tabulated(_) => {
                let mut e = Extrema {
                    a0: f64::INFINITY,
                    a_sup: f64::NEG_INFINITY,
                    b0: f64::INFINITY,
                    b_sup: f64::NEG_INFINITY,
                };
                for w in Self::angle_grid() {
                    let (a, b) = self.at_angle(w);
                    e.a0 = e.a0.min(a);
                    e.a_sup = e.a_sup.max(a);
                    e.b0 = e.b0.min(b);
                    e.b_sup = e.b_sup.max(b);
                }
                e
            }
        }
    }

    /// Left and right integral conditions
    /// `int a(r) dr / (-b(r) (1+r^2)^{3/2}) > 1` over `r < 0` and `r > 0`.
    /// Evaluated in the angle variable, where the integrand is `a cos(w) / (-b)`.
    /// Returns `+inf` when `b` vanishes identically.
    pub fn integral_conditions(&self) -> Result<(f64, f64)> {
        if self.forcing_vanishes() {
            return Ok((f64::INFINITY, f64::INFINITY));
        }
        if !self.forcing_negative() {
            return Err(Error::InadmissiblePair(
                "integral conditions need b < 0 everywhere".into(),
            ));
        }
        let cfg = QuadratureConfig {
            rel_tol: 1e-13,
            ..Default::default()
        };
        let f = |w: f64| {
            let (a, b) = self.at_angle(w);
            a * w.cos() / (-b)
        };
        let left = integrate(f, -FRAC_PI_2, 0.0, &cfg)?.value;
        let right = integrate(f, 0.0, FRAC_PI_2, &cfg)?.value;
        Ok((left, right))
    }

    pub fn validate(&self, req: Requirements) -> ValidationReport {
        let mut items = Vec::new();
        let ext = self.extrema();

        let finite = Self::angle_grid().all(|w| {
            let (a, b) = self.at_angle(w);
            a.is_finite() && b.is_finite()
        });
        let sign_ok = finite
            && ext.a0 > 0.0
            && if self.degenerate {
                ext.b_sup < 0.0 || (ext.b0 == 0.0 && ext.b_sup == 0.0)
            } else {
                ext.b_sup < 0.0
            };
        items.push(ValidationItem {
            name: "sign",
            required: req.sign,
            pass: sign_ok,
            value: Some(ext.b_sup),
            detail: format!(
                "a(p) > 0 > b(p): min a = {}, max b = {}{}",
                ext.a0,
                ext.b_sup,
                if self.degenerate { " (b = 0 admitted)" } else { "" }
            ),
        });

        let even_defect = self.even_defect();
        items.push(ValidationItem {
            name: "even",
            required: req.even,
            pass: self.symmetric && even_defect <= EVEN_TOL,
            value: Some(even_defect),
            detail: format!(
                "a(p) = a(-p), b(p) = b(-p): max defect {even_defect:e}, declared symmetric = {}",
                self.symmetric
            ),
        });

        items.push(ValidationItem {
            name: "dominance",
            required: req.dominance,
            pass: ext.a0 > -ext.b0,
            value: Some(ext.a0 + ext.b0),
            detail: format!("a0 > -b0: a0 = {}, -b0 = {}", ext.a0, -ext.b0),
        });

        let (pass, value, detail) = match self.integral_conditions() {
            Ok((left, right)) => (
                left > 1.0 + INTEGRAL_CONDITION_MARGIN && right > 1.0 + INTEGRAL_CONDITION_MARGIN,
                Some(left.min(right)),
                format!("int a/(-b (1+r^2)^(3/2)) > 1 on each half-line: left = {left}, right = {right}"),
            ),
            Err(e) => (false, None, e.to_string()),
        };
        items.push(ValidationItem {
            name: "integral-conditions",
            required: req.integral_conditions,
            pass,
            value,
            detail,
        });

        ValidationReport { items }
    }

    /// Rejects the pair unless every required check passes.
    pub fn require(&self, req: Requirements) -> Result<ValidationReport> {
        let report = self.validate(req);
        match report.first_failure() {
            Some(item) => Err(Error::InadmissiblePair(item.detail.clone())),
            None => Ok(report),
        }
    }

    fn even_defect(&self) -> f64 {
        Self::angle_grid()
            .map(|w| {
                let (a1, b1) = self.at_angle(w);
                let (a2, b2) = self.at_angle(-w);
                (a1 - a2).abs().max((b1 - b2).abs())
            })
            .fold(0.0, f64::max)
    }
}

fn ordered(x: f64, y: f64) -> (f64, f64) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

fn check_finite(family: &'static str, params: &[(&str, f64)]) -> Result<()> {
    match params.iter().find(|(_, v)| !v.is_finite()) {
        Some((name, value)) => Err(Error::CoefficientDomain {
            family,
            parameter: name.to_string(),
            value: *value,
        }),
        None => Ok(()),
    }
}

/// Which hypotheses a caller needs the pair to satisfy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Requirements {
    pub sign: bool,
    pub even: bool,
    pub dominance: bool,
    pub integral_conditions: bool,
}

impl Requirements {
    pub const SIGN: Self = Self {
        sign: true,
        even: false,
        dominance: false,
        integral_conditions: false,
    };

    /// Sign and `a0 > -b0`: what the traveling-wave and flow theory needs.
    pub const WAVE: Self = Self {
        sign: true,
        even: false,
        dominance: true,
        integral_conditions: false,
    };

    pub const SYMMETRIC_FLOW: Self = Self {
        sign: true,
        even: true,
        dominance: true,
        integral_conditions: false,
    };

    pub fn with_even(mut self, even: bool) -> Self {
        self.even = even;
        self
    }

    pub fn with_integral_conditions(mut self, on: bool) -> Self {
        self.integral_conditions = on;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationItem {
    pub name: &'static str,
    pub required: bool,
    pub pass: bool,
    pub value: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub items: Vec<ValidationItem>,
}

impl ValidationReport {
    pub fn item(&self, name: &str) -> Option<&ValidationItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn first_failure(&self) -> Option<&ValidationItem> {
        self.items.iter().find(|i| i.required && !i.pass)
    }

    pub fn passes_required(&self) -> bool {
        self.first_failure().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump() -> CoefficientPair {
        CoefficientPair::rational_bump(1.0, 0.2, 0.5, 0.0).unwrap()
    }

    #[test]
    fn constant_family_values() {
        let pair = CoefficientPair::constant(1.0, 1.0).unwrap();
        let v = pair.eval(3.0).unwrap();
        assert_eq!((v.a, v.b, v.da, v.db), (1.0, -1.0, 0.0, 0.0));
    }

    #[test]
    fn rational_bump_values_and_derivatives() {
        let v0 = bump().eval(0.0).unwrap();
        assert!((v0.a - 1.2).abs() < 1e-15);
        assert_eq!(v0.da, 0.0);
        // a' = -2 eps p / (1+p^2)^2 = -0.4/4 at p = 1
        let v1 = bump().eval(1.0).unwrap();
        assert!((v1.a - 1.1).abs() < 1e-15);
        assert!((v1.da + 0.1).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let pair = CoefficientPair::rational_bump(0.8, 0.3, 0.4, 0.15).unwrap();
        for &p in &[-2.0, -0.3, 0.7, 4.0] {
            let v = pair.eval(p).unwrap();
            let h = 1e-6;
            let fd_a = (pair.a(p + h) - pair.a(p - h)) / (2.0 * h);
            let fd_b = (pair.b(p + h) - pair.b(p - h)) / (2.0 * h);
            assert!((v.da - fd_a).abs() < 1e-8);
            assert!((v.db - fd_b).abs() < 1e-8);
        }
    }

    #[test]
    fn non_finite_parameter_is_named() {
        match CoefficientPair::rational_bump(1.0, f64::NAN, 0.5, 0.0) {
            Err(Error::CoefficientDomain { parameter, family, .. }) => {
                assert_eq!(parameter, "eps");
                assert_eq!(family, "rational-bump");
            }
            other => panic!("expected domain error, got {other:?}"),
        }
        let huge = CoefficientPair::rational_bump(1e308, 1e308, 0.5, 0.0).unwrap();
        assert!(matches!(huge.eval(0.0), Err(Error::CoefficientDomain { .. })));
    }

    #[test]
    fn extrema_of_closed_forms() {
        let e = CoefficientPair::constant(1.0, 0.5).unwrap().extrema();
        assert_eq!((e.a0, e.a_sup, e.b0, e.b_sup), (1.0, 1.0, -0.5, -0.5));
        let e = bump().extrema();
        assert_eq!((e.a0, e.a_sup), (1.0, 1.2));
        let e = CoefficientPair::rational_bump(1.0, 0.0, 0.4, 0.1).unwrap().extrema();
        assert!((e.b0 + 0.5).abs() < 1e-15 && (e.b_sup + 0.4).abs() < 1e-15);
    }

    #[test]
    fn flux_derivative_is_mobility() {
        let pair = CoefficientPair::rational_bump(0.9, 0.35, 0.5, 0.1).unwrap();
        for &t in &[-1.2, -0.1, 0.6, 1.5] {
            let h = 1e-6;
            let d = (pair.flux(t + h) - pair.flux(t - h)) / (2.0 * h);
            assert!((d - pair.a(f64::tan(t))).abs() < 1e-8);
        }
    }

    #[test]
    fn validation_examples() {
        let r = CoefficientPair::constant(1.0, 0.5)
            .unwrap()
            .validate(Requirements::SYMMETRIC_FLOW.with_integral_conditions(true));
        assert!(r.passes_required(), "{r:?}");

        let r = CoefficientPair::constant(1.0, 1.0).unwrap().validate(Requirements::WAVE);
        assert!(!r.item("dominance").unwrap().pass);

        // int_0^inf dr/(1+r^2)^{3/2} = 1, which does not clear the strict inequality
        let r = CoefficientPair::constant(1.0, 1.0)
            .unwrap()
            .validate(Requirements::SIGN.with_integral_conditions(true));
        let item = r.item("integral-conditions").unwrap();
        assert!((item.value.unwrap() - 1.0).abs() < 1e-12);
        assert!(!item.pass);
    }

    #[test]
    fn integral_condition_closed_form() {
        for &beta in &[0.25, 0.5, 0.8, 2.0] {
            let (l, r) = CoefficientPair::constant(1.0, beta).unwrap().integral_conditions().unwrap();
            assert!((l - 1.0 / beta).abs() < 1e-10);
            assert!((r - 1.0 / beta).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_flag_gates_zero_forcing() {
        let plain = CoefficientPair::constant(1.0, 0.0).unwrap();
        assert!(!plain.validate(Requirements::SIGN).passes_required());
        let gr = CoefficientPair::grim_reaper(1.0).unwrap();
        assert!(gr.validate(Requirements::WAVE).passes_required());
    }

    #[test]
    fn tabulated_matches_closed_form() {
        let exact = CoefficientPair::rational_bump(1.0, 0.2, 0.4, 0.1).unwrap();
        let n = 401;
        let omega: Vec<f64> = (0..n)
            .map(|k| -FRAC_PI_2 + std::f64::consts::PI * k as f64 / (n - 1) as f64)
            .collect();
        let (a, b): (Vec<f64>, Vec<f64>) = omega.iter().map(|&w| exact.at_angle(w)).unzip();
        let tab = CoefficientPair::tabulated(AngleTable::new(omega, a, b).unwrap(), true);
        for &p in &[-5.0, -0.5, 0.0, 1.3, 20.0] {
            let (e, t) = (exact.eval(p).unwrap(), tab.eval(p).unwrap());
            assert!((e.a - t.a).abs() < 1e-6 && (e.b - t.b).abs() < 1e-6);
            assert!((e.da - t.da).abs() < 1e-4);
        }
        let (ee, te) = (exact.extrema(), tab.extrema());
        assert!((ee.a_sup - te.a_sup).abs() < 1e-6 && (ee.b0 - te.b0).abs() < 1e-6);
        assert!(tab.validate(Requirements::SYMMETRIC_FLOW).passes_required());
        assert!((tab.flux(0.8) - exact.flux(0.8)).abs() < 1e-8);
    }

    #[test]
    fn asymmetric_table_fails_even_check() {
        let n = 65;
        let omega: Vec<f64> = (0..n)
            .map(|k| -FRAC_PI_2 + std::f64::consts::PI * k as f64 / (n - 1) as f64)
            .collect();
        let a = omega.iter().map(|w| 1.0 + 0.1 * w.sin()).collect();
        let b = omega.iter().map(|_| -0.5).collect();
        let tab = CoefficientPair::tabulated(AngleTable::new(omega, a, b).unwrap(), true);
        let r = tab.validate(Requirements::SYMMETRIC_FLOW);
        assert!(!r.item("even").unwrap().pass);
    }
}
