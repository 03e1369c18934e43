use crate::coefficients::{CoefficientPair, Requirements};
use crate::error::{Error, Result};
use crate::pde::{EvolveTrace, Grid, GridState, Scheme, TraceOrigin, TIME_EPS};
use crate::traveling_wave::Profile;

use super::report::{CheckResult, Status, Window};

pub const LINFTY_WEDGE: &str = "linfty_wedge";
pub const CONVEXITY: &str = "convexity";
pub const GRADIENT_ENVELOPES: &str = "gradient_envelopes";
pub const INTERIOR_GRADIENT: &str = "interior_gradient";
pub const CONVERGENCE: &str = "convergence";
pub const COMPARISON: &str = "comparison";

fn span_window(trace: &EvolveTrace, x_max: f64) -> Window {
    Window {
        t_min: trace.snapshots[0].t,
        t_max: trace.final_state().t,
        x_max,
    }
}

fn is_even(pair: &CoefficientPair) -> bool {
    pair.validate(Requirements::SYMMETRIC_FLOW).passes_required()
}

/// Values of `phi` (or `phi'`) at nodes, with `None` outside the profile's domain.
fn nodal<F: Fn(&crate::traveling_wave::ProfilePoint) -> f64>(
    profile: &Profile,
    x: &[f64],
    f: F,
) -> Result<Vec<f64>> {
    x.iter().map(|&xi| profile.eval(xi).map(|p| f(&p))).collect()
}

/// Exact traveling-wave states `u = phi(x) + c t + k` at the given times.
pub fn exact_wave_trace(profile: &Profile, c: f64, grid: &Grid, times: &[f64], k: f64) -> Result<EvolveTrace> {
    let phi = nodal(profile, grid.x(), |p| p.phi)?;
    let states = times
        .iter()
        .map(|&t| GridState::new(grid.clone(), phi.iter().map(|v| v + c * t + k).collect(), t))
        .collect::<Result<Vec<_>>>()?;
    EvolveTrace::from_states(TraceOrigin::Wave { c, h: None }, Scheme::SemiImplicit, states)
}

/// Lower convex hull of points sorted by abscissa.
fn lower_hull(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Bounds `c0 t - C1 <= u(0, t) <= c_bar t + C2` along the centerline.
///
/// `C2` is the least constant over the snapshots; it must not exceed the
/// comparison bound `max_x (u0 - Phi)` by more than `tol`. The lower line is the
/// edge of the lower convex hull of `(t, u(0, t))` over the middle of the run.
pub fn check_linfty_wedge(trace: &EvolveTrace, wave: &Profile, cbar: f64, tol: f64) -> Result<CheckResult> {
    if trace.snapshots.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "the wedge fit needs at least 3 snapshots, got {}",
            trace.snapshots.len()
        )));
    }
    let mut r = CheckResult::new(LINFTY_WEDGE, span_window(trace, 0.0), tol);
    let initial = &trace.snapshots[0];
    let phi = nodal(wave, initial.x(), |p| p.phi)?;
    let bound = initial
        .u
        .iter()
        .zip(&phi)
        .map(|(u, p)| u - p)
        .fold(f64::NEG_INFINITY, f64::max)
        + wave.eval(0.0)?.phi;

    let pts: Vec<(f64, f64)> = trace.snapshots.iter().map(|s| (s.t, s.center_value())).collect();
    let c2 = pts.iter().map(|(t, u)| u - cbar * t).fold(f64::NEG_INFINITY, f64::max);

    let hull = lower_hull(&pts);
    let t_mid = 0.5 * (pts[0].0 + pts[pts.len() - 1].0);
    let k = hull.partition_point(|p| p.0 < t_mid).clamp(1, hull.len() - 1);
    let (a, b) = (hull[k - 1], hull[k]);
    let c0 = (b.1 - a.1) / (b.0 - a.0);
    let c1 = -(a.1 - c0 * a.0);
    let lower_violation = pts
        .iter()
        .map(|(t, u)| (c0 * t - c1) - u)
        .fold(f64::NEG_INFINITY, f64::max);

    r.measure("cbar", cbar);
    r.measure("c0", c0);
    r.measure("C1", c1);
    r.measure("C2", c2);
    r.measure("C2_bound", bound);
    r.measure("upper_violation", (c2 - bound).max(0.0));
    r.measure("lower_violation", lower_violation.max(0.0));
    let ok = c0 > 0.0 && c2 <= bound + tol && lower_violation <= tol;
    Ok(r.with_status(if ok { Status::Pass } else { Status::Fail }))
}

/// `min u_xx > -rel_tol * max |u_xx|` at interior nodes of every snapshot, for
/// traces started from `rho` or from an exact wave of an even pair.
pub fn check_convexity(trace: &EvolveTrace, pair: &CoefficientPair, rel_tol: f64) -> CheckResult {
    let gated = matches!(trace.origin, TraceOrigin::Rho { .. } | TraceOrigin::Wave { .. });
    if !gated || !is_even(pair) {
        return CheckResult::not_applicable(CONVEXITY, "needs a rho or wave initial state and an even pair");
    }
    let mut min_uxx = f64::INFINITY;
    let mut max_abs = 0.0f64;
    let mut worst_t = 0.0;
    for s in &trace.snapshots {
        let uxx = s.uxx();
        let n = uxx.len() - 1;
        for &v in &uxx[1..n] {
            max_abs = max_abs.max(v.abs());
            if v < min_uxx {
                min_uxx = v;
                worst_t = s.t;
            }
        }
    }
    let tol = rel_tol * max_abs;
    let mut r = CheckResult::new(CONVEXITY, span_window(trace, 1.0), tol);
    r.measure("min_uxx", min_uxx);
    r.measure("max_abs_uxx", max_abs);
    r.measure("t_of_min", worst_t);
    r.with_status(if min_uxx > -tol { Status::Pass } else { Status::Fail })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeOptions {
    /// Nodes with `0 < |x| <= x_max` are checked.
    pub x_max: f64,
    /// Slack is `slack_factor * dx^2 * max |u_xxx|` over the window, the size of
    /// the three-point derivative's truncation error.
    pub slack_factor: f64,
}

impl Default for EnvelopeOptions {
    fn default() -> Self {
        Self {
            x_max: 0.9,
            slack_factor: 1.0,
        }
    }
}

/// `0 < sgn(x) u_x < sgn(x) Phi'(x)` at every snapshot and
/// `sgn(x) Phi'(x; h0) < sgn(x) u_x` from a measured onset on.
pub fn check_gradient_envelopes(
    trace: &EvolveTrace,
    pair: &CoefficientPair,
    wave_bar: &Profile,
    wave_h0: Option<&Profile>,
    opts: EnvelopeOptions,
) -> Result<CheckResult> {
    if !matches!(trace.origin, TraceOrigin::Rho { .. }) || !is_even(pair) {
        return Ok(CheckResult::not_applicable(
            GRADIENT_ENVELOPES,
            "needs a rho initial state and an even pair",
        ));
    }
    let wave_h0 = wave_h0.ok_or_else(|| Error::Dependency("the lower envelope needs the wave Phi(x; h0)".into()))?;
    let grid = &trace.snapshots[0].grid;
    let idx: Vec<usize> = (0..grid.len())
        .filter(|&i| grid.x()[i] != 0.0 && grid.x()[i].abs() <= opts.x_max + 1e-14)
        .collect();
    let xs: Vec<f64> = idx.iter().map(|&i| grid.x()[i]).collect();
    let upper = nodal(wave_bar, &xs, |p| p.psi)?;
    let lower = nodal(wave_h0, &xs, |p| p.psi)?;
    let h = idx
        .iter()
        .map(|&i| (grid.x()[i + 1] - grid.x()[i]).max(grid.x()[i] - grid.x()[i - 1]))
        .fold(0.0, f64::max);

    let mut upper_ok = true;
    let mut upper_margin = f64::INFINITY;
    let mut positivity_margin = f64::INFINITY;
    let mut center_slope = 0.0f64;
    let mut lower_ok = Vec::with_capacity(trace.snapshots.len());
    let mut lower_margins = Vec::with_capacity(trace.snapshots.len());
    let mut max_slack = 0.0f64;
    for s in &trace.snapshots {
        let ux = s.ux();
        let uxxx = grid.derivative(&s.uxx());
        let slack = opts.slack_factor * h * h * idx.iter().map(|&i| uxxx[i].abs()).fold(0.0, f64::max);
        max_slack = max_slack.max(slack);
        center_slope = center_slope.max(ux[grid.center()].abs());
        let mut low_margin = f64::INFINITY;
        for (k, &i) in idx.iter().enumerate() {
            let sign = xs[k].signum();
            let v = sign * ux[i];
            positivity_margin = positivity_margin.min(v);
            upper_margin = upper_margin.min(sign * upper[k] - v);
            low_margin = low_margin.min(v - sign * lower[k]);
            if !(v > -slack && v < sign * upper[k] + slack) {
                upper_ok = false;
            }
        }
        lower_ok.push(low_margin > -slack);
        lower_margins.push(low_margin);
    }
    let onset_index = (0..lower_ok.len()).find(|&i| lower_ok[i..].iter().all(|&ok| ok));

    let mut r = CheckResult::new(GRADIENT_ENVELOPES, span_window(trace, opts.x_max), max_slack);
    r.flag("upper_holds", upper_ok);
    r.measure("upper_margin", upper_margin);
    r.measure("positivity_margin", positivity_margin);
    r.measure("center_slope", center_slope);
    match onset_index {
        Some(i) => {
            r.measure("onset", trace.snapshots[i].t);
            r.measure(
                "lower_margin_after_onset",
                lower_margins[i..].iter().copied().fold(f64::INFINITY, f64::min),
            );
        }
        None => r.note("onset", "never"),
    }
    let ok = upper_ok && onset_index.is_some();
    Ok(r.with_status(if ok { Status::Pass } else { Status::Fail }))
}

/// The band-minimum bound `min_{1-2e <= |x| <= 1-e} |u_x| <= M2` with
/// `M2 = (Phi(1-e) + c_bar T) / e`, and the interior bound `|u_x| <= M3` on
/// `|x| <= 1-2e` from the first time `T_e` at which both wall values exceed `M2`.
pub fn check_interior_gradient(
    trace: &EvolveTrace,
    wave_bar: &Profile,
    cbar: f64,
    domination_time: Option<f64>,
    epsilon: f64,
) -> Result<CheckResult> {
    let t_dom = domination_time.ok_or_else(|| {
        Error::Dependency("M2 needs the domination time from the companion rho run".into())
    })?;
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::Config(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
    }
    let m2 = (wave_bar.eval(1.0 - epsilon)?.phi + cbar * t_dom) / epsilon;
    let grid = &trace.snapshots[0].grid;
    let x = grid.x();
    let in_band = |xi: f64| xi.abs() >= 1.0 - 2.0 * epsilon - 1e-14 && xi.abs() <= 1.0 - epsilon + 1e-14;
    let right: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 0.0 && in_band(x[i])).collect();
    let left: Vec<usize> = (0..x.len()).filter(|&i| x[i] < 0.0 && in_band(x[i])).collect();
    let inner: Vec<usize> = (0..x.len()).filter(|&i| x[i].abs() <= 1.0 - 2.0 * epsilon + 1e-14).collect();
    if right.is_empty() || left.is_empty() {
        return Err(Error::InsufficientData("no grid nodes in the band 1-2e <= |x| <= 1-e".into()));
    }

    let mut band_ok = true;
    let mut window_adjusted = false;
    let mut band_max = 0.0f64;
    let mut t_eps = None;
    for s in &trace.snapshots {
        let ux = s.ux();
        let band_min = |ids: &[usize]| ids.iter().map(|&i| ux[i].abs()).fold(f64::INFINITY, f64::min);
        let worst = band_min(&right).max(band_min(&left));
        if worst > m2 {
            if s.t <= TIME_EPS {
                window_adjusted = true;
            } else {
                band_ok = false;
            }
        }
        if s.t > TIME_EPS {
            band_max = band_max.max(worst);
        }
        let (ul, ur) = s.boundary_values();
        if t_eps.is_none() && ul.min(ur) > m2 {
            t_eps = Some(s.t);
        }
    }

    let mut r = CheckResult::new(INTERIOR_GRADIENT, span_window(trace, 1.0 - 2.0 * epsilon), 0.0);
    r.measure("epsilon", epsilon);
    r.measure("T", t_dom);
    r.measure("M2", m2);
    r.measure("band_min_max", band_max);
    r.flag("band_holds", band_ok);
    r.flag("window_adjusted", window_adjusted);
    let t_eps = match t_eps {
        Some(t) => t,
        None => {
            r.note("T_eps", "not reached");
            return Ok(r.with_status(if band_ok { Status::Partial } else { Status::Fail }));
        }
    };
    let at_t_eps = trace.at(t_eps).expect("T_eps is a snapshot time");
    let norm = at_t_eps.ux().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let m3 = m2.max(norm);
    let sup_after = trace
        .snapshots
        .iter()
        .filter(|s| s.t >= t_eps - TIME_EPS)
        .map(|s| {
            let ux = s.ux();
            inner.iter().fold(0.0f64, |m, &i| m.max(ux[i].abs()))
        })
        .fold(0.0, f64::max);
    r.measure("T_eps", t_eps);
    r.measure("M3", m3);
    r.measure("max_interior_slope", sup_after);
    let ok = band_ok && sup_after <= m3;
    Ok(r.with_status(if ok { Status::Pass } else { Status::Fail }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceOptions {
    /// Errors are measured on `|x| <= 1 - 2 epsilon`.
    pub epsilon: f64,
    pub levels: usize,
    /// Each ladder point looks at `t in [0, t_max]`.
    pub t_max: f64,
    /// Final error must be below this fraction of `Phi(1 - 2 epsilon) - Phi(0)`.
    pub error_fraction: f64,
    /// Relative tolerance on the fitted centerline speed.
    pub speed_tol: f64,
    /// One increase along the ladder is tolerated if it is below this fraction.
    pub monotone_slack: f64,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            levels: 3,
            t_max: 1.0,
            error_fraction: 0.05,
            speed_tol: 0.02,
            monotone_slack: 0.05,
        }
    }
}

/// Least-squares slope of `y` against `t`.
pub fn fit_slope(t: &[f64], y: &[f64]) -> f64 {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (a, b) in t.iter().zip(y) {
        num += (a - tm) * (b - ym);
        den += (a - tm) * (a - tm);
    }
    num / den
}

/// `E(s) = max |u(x, t+s) - u(0, s) - Phi(x) - c_bar t|` over `|x| <= 1 - 2 epsilon`
/// and `t in [0, t_max]`, for `s = s0, 2 s0, 4 s0, ...`, plus the centerline
/// speed over the second half of the run.
pub fn check_convergence(
    name: &str,
    trace: &EvolveTrace,
    pair: &CoefficientPair,
    wave_bar: &Profile,
    cbar: f64,
    s0: Option<f64>,
    opts: ConvergenceOptions,
) -> Result<CheckResult> {
    if !is_even(pair) {
        return Ok(CheckResult::not_applicable(name, "convergence to the wave is established for even pairs"));
    }
    let s0 = s0.ok_or_else(|| Error::Dependency("the ladder starts at the lower-envelope onset".into()))?;
    let x_max = 1.0 - 2.0 * opts.epsilon;
    let grid = &trace.snapshots[0].grid;
    let idx: Vec<usize> = (0..grid.len()).filter(|&i| grid.x()[i].abs() <= x_max + 1e-14).collect();
    let xs: Vec<f64> = idx.iter().map(|&i| grid.x()[i]).collect();
    let phi0 = wave_bar.eval(0.0)?.phi;
    let phi: Vec<f64> = nodal(wave_bar, &xs, |p| p.phi)?.into_iter().map(|v| v - phi0).collect();
    let scale = wave_bar.eval(x_max)?.phi - phi0;
    let tol = opts.error_fraction * scale;
    let t_final = trace.final_state().t;
    let center = grid.center();

    let base = s0.max(TIME_EPS);
    let mut ladder = Vec::new();
    let mut errors = Vec::new();
    for k in 0..opts.levels {
        let s = base * f64::powi(2.0, k as i32);
        if s + opts.t_max > t_final + TIME_EPS {
            break;
        }
        let u_s = trace.interpolate(s)?;
        let anchor = u_s[center];
        let mut times: Vec<f64> = trace
            .times()
            .into_iter()
            .filter(|&t| t > s + TIME_EPS && t <= s + opts.t_max + TIME_EPS)
            .collect();
        times.insert(0, s);
        let mut e = 0.0f64;
        for &t in &times {
            let u = if t == s { u_s.clone() } else { trace.interpolate(t)? };
            for (k, &i) in idx.iter().enumerate() {
                e = e.max((u[i] - anchor - phi[k] - cbar * (t - s)).abs());
            }
        }
        ladder.push(s);
        errors.push(e);
    }

    let series = &trace.series;
    let half = 0.5 * (series.t[0] + t_final);
    let (ts, us): (Vec<f64>, Vec<f64>) = series
        .t
        .iter()
        .zip(&series.u_center)
        .filter(|(t, _)| **t >= half)
        .map(|(t, u)| (*t, *u))
        .unzip();
    let speed = if ts.len() >= 2 { fit_slope(&ts, &us) } else { f64::NAN };
    let speed_err = (speed - cbar).abs() / cbar;

    let mut r = CheckResult::new(
        name,
        Window {
            t_min: base,
            t_max: ladder.last().copied().unwrap_or(base) + opts.t_max,
            x_max,
        },
        tol,
    );
    r.measure_list("s", &ladder);
    r.measure_list("E", &errors);
    r.measure("speed", speed);
    r.measure("speed_rel_error", speed_err);
    r.measure("cbar", cbar);
    // Changes far below the tolerance are discretization noise, not increases.
    let floor = 1e-3 * tol;
    let increases: Vec<f64> = errors
        .windows(2)
        .filter(|w| w[1] > w[0] + floor)
        .map(|w| w[1] / w[0] - 1.0)
        .collect();
    let monotone = increases.is_empty() || (increases.len() == 1 && increases[0] < opts.monotone_slack);
    r.flag("decreasing", monotone);
    let speed_ok = speed_err <= opts.speed_tol;
    let final_ok = errors.last().is_some_and(|&e| e < tol);
    if ladder.len() < opts.levels {
        if let Some(h) = trace.horizon {
            r.measure("horizon", h.t);
        }
        r.note("ladder", "incomplete: the run ends before the last reference time");
        let ok_so_far = monotone && speed_ok;
        return Ok(r.with_status(if ok_so_far { Status::Partial } else { Status::Fail }));
    }
    let ok = monotone && final_ok && speed_ok;
    Ok(r.with_status(if ok { Status::Pass } else { Status::Fail }))
}

/// Strict nodewise ordering `lower < upper` at every shared snapshot time,
/// given that it holds at the first one.
pub fn check_comparison(name: &str, lower: &EvolveTrace, upper: &EvolveTrace) -> Result<CheckResult> {
    if lower.snapshots[0].grid != upper.snapshots[0].grid {
        return Err(Error::IncompatibleTraces("the traces live on different grids".into()));
    }
    let pairs: Vec<(&GridState, &GridState)> = lower
        .snapshots
        .iter()
        .filter_map(|a| upper.at(a.t).map(|b| (a, b)))
        .collect();
    if pairs.is_empty() {
        return Err(Error::IncompatibleTraces("no shared snapshot times".into()));
    }
    let gap = |(a, b): &(&GridState, &GridState)| {
        a.u.iter().zip(&b.u).map(|(x, y)| y - x).fold(f64::INFINITY, f64::min)
    };
    let window = Window {
        t_min: pairs[0].0.t,
        t_max: pairs[pairs.len() - 1].0.t,
        x_max: 1.0,
    };
    let initial_gap = gap(&pairs[0]);
    if !(initial_gap > 0.0) {
        let mut r = CheckResult::not_applicable(name, "hypothesis not met at t=0: the data are not ordered");
        r.window = window;
        r.measure("initial_gap", initial_gap);
        return Ok(r);
    }
    let mut violations = 0usize;
    let mut min_gap = f64::INFINITY;
    for p in &pairs {
        let g = gap(p);
        min_gap = min_gap.min(g);
        if !(g > 0.0) {
            violations += 1;
        }
    }
    let mut r = CheckResult::new(name, window, 0.0);
    r.measure("shared_snapshots", pairs.len() as f64);
    r.measure("violations", violations as f64);
    r.measure("min_gap", min_gap);
    r.measure("initial_gap", initial_gap);
    Ok(r.with_status(if violations == 0 { Status::Pass } else { Status::Fail }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traveling_wave::{solve_cbar, DEFAULT_TOL};

    #[test]
    fn hull_is_below_points() {
        let pts = [(0.0, 1.0), (1.0, 0.5), (2.0, 1.5), (3.0, 1.6), (4.0, 3.0)];
        let hull = lower_hull(&pts);
        assert_eq!(hull, vec![(0.0, 1.0), (1.0, 0.5), (3.0, 1.6), (4.0, 3.0)]);
    }

    #[test]
    fn slope_fit_exact_on_lines() {
        let t = [0.0, 1.0, 2.0, 5.0];
        let y: Vec<f64> = t.iter().map(|t| 3.0 * t - 1.0).collect();
        assert!((fit_slope(&t, &y) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn exact_wave_saturates_checks() {
        let pair = CoefficientPair::constant(1.0, 0.5).unwrap();
        let wave = solve_cbar(&pair, DEFAULT_TOL).unwrap();
        let grid = Grid::uniform(64).unwrap();
        let times: Vec<f64> = (0..=20).map(|k| 0.5 * k as f64).collect();
        let tr = exact_wave_trace(&wave.profile, wave.c, &grid, &times, 0.75).unwrap();

        let w = check_linfty_wedge(&tr, &wave.profile, wave.c, 1e-9).unwrap();
        assert!(w.passed());
        assert!((w.number("C2").unwrap() - 0.75).abs() < 1e-12);
        assert!((w.number("c0").unwrap() - wave.c).abs() < 1e-9);

        let c = check_convexity(&tr, &pair, 1e-6);
        assert!(c.passed());

        let e = check_convergence(CONVERGENCE, &tr, &pair, &wave.profile, wave.c, Some(1.0), Default::default())
            .unwrap();
        assert!(e.passed());
        let errs = e.measured["E"].as_array().unwrap();
        assert_eq!(errs.len(), 3);
        assert!(errs.iter().all(|v| v.as_f64().unwrap() < 1e-12));
    }

    #[test]
    fn comparison_gates_and_orders() {
        let pair = CoefficientPair::constant(1.0, 0.5).unwrap();
        let wave = solve_cbar(&pair, DEFAULT_TOL).unwrap();
        let grid = Grid::uniform(64).unwrap();
        let times = [0.0, 1.0, 2.0];
        let a = exact_wave_trace(&wave.profile, wave.c, &grid, &times, 0.0).unwrap();
        let b = exact_wave_trace(&wave.profile, wave.c, &grid, &times, 1.0).unwrap();
        assert!(check_comparison(COMPARISON, &a, &b).unwrap().passed());
        let r = check_comparison(COMPARISON, &b, &a).unwrap();
        assert_eq!(r.status, Status::NotApplicable);
        let other = exact_wave_trace(&wave.profile, wave.c, &Grid::uniform(128).unwrap(), &times, 1.0).unwrap();
        assert!(matches!(check_comparison(COMPARISON, &a, &other), Err(Error::IncompatibleTraces(_))));
    }

    #[test]
    fn wedge_needs_three_snapshots() {
        let pair = CoefficientPair::constant(1.0, 0.5).unwrap();
        let wave = solve_cbar(&pair, DEFAULT_TOL).unwrap();
        let grid = Grid::uniform(64).unwrap();
        let tr = exact_wave_trace(&wave.profile, wave.c, &grid, &[0.0, 1.0], 0.0).unwrap();
        assert!(matches!(
            check_linfty_wedge(&tr, &wave.profile, wave.c, 1e-9),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn missing_envelope_wave_is_dependency_error() {
        let pair = CoefficientPair::constant(1.0, 0.5).unwrap();
        let wave = solve_cbar(&pair, DEFAULT_TOL).unwrap();
        let grid = Grid::uniform(64).unwrap();
        let tr = exact_wave_trace(&wave.profile, wave.c, &grid, &[0.0, 1.0, 2.0], 0.0)
            .unwrap()
            .with_origin(TraceOrigin::Rho { p: 0.9, m1: 1.0 });
        assert!(matches!(
            check_gradient_envelopes(&tr, &pair, &wave.profile, None, Default::default()),
            Err(Error::Dependency(_))
        ));
    }
}
