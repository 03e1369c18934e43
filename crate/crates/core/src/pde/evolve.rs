use serde::{Deserialize, Serialize};

use crate::coefficients::CoefficientPair;
use crate::error::{Error, Result};

use super::scheme::{explicit_dt_limit, step, Scheme, DEFAULT_CFL};
use super::state::GridState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveControls {
    pub scheme: Scheme,
    /// Initial step (adaptive) or the step itself (fixed).
    pub dt: f64,
    pub adaptive: bool,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Steps changing some nodal value by more than this are rejected (adaptive only).
    pub du_max: f64,
    pub snapshot_every: f64,
    /// Evolution stops once `|u_x|` at a wall node or its neighbour exceeds this.
    pub slope_cap: f64,
    pub cfl: f64,
    pub max_steps: usize,
}

impl Default for EvolveControls {
    fn default() -> Self {
        Self {
            scheme: Scheme::SemiImplicit,
            dt: 1e-4,
            adaptive: true,
            dt_min: 1e-12,
            dt_max: 1e-2,
            du_max: 1e-2,
            snapshot_every: 0.5,
            slope_cap: 1e3,
            cfl: DEFAULT_CFL,
            max_steps: 50_000_000,
        }
    }
}

impl EvolveControls {
    pub fn fixed(scheme: Scheme, dt: f64, snapshot_every: f64) -> Self {
        Self {
            scheme,
            dt,
            adaptive: false,
            snapshot_every,
            ..Self::default()
        }
    }
}

/// How the initial state was produced; some checks only apply to some origins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TraceOrigin {
    Rho { p: f64, m1: f64 },
    Function { name: String },
    Tabulated,
    Wave { c: f64, h: Option<f64> },
    State,
}

/// Quantities recorded after every accepted step.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub t: Vec<f64>,
    pub u_center: Vec<f64>,
    pub u_left: Vec<f64>,
    pub u_right: Vec<f64>,
    pub max_abs_ux: Vec<f64>,
    /// Minimum of `u_xx` over interior nodes.
    pub min_uxx: Vec<f64>,
}

impl Series {
    pub(crate) fn record(&mut self, s: &GridState) {
        let ux = s.ux();
        let uxx = s.uxx();
        let n = s.u.len() - 1;
        self.t.push(s.t);
        self.u_center.push(s.center_value());
        self.u_left.push(s.u[0]);
        self.u_right.push(s.u[n]);
        self.max_abs_ux.push(ux.iter().fold(0.0, |m: f64, v| m.max(v.abs())));
        self.min_uxx.push(uxx[1..n].iter().copied().fold(f64::INFINITY, f64::min));
    }

    fn retain_from(&self, t0: f64, shift: f64) -> Self {
        let keep: Vec<usize> = (0..self.t.len()).filter(|&i| self.t[i] >= t0 - TIME_EPS).collect();
        let pick = |v: &Vec<f64>| keep.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Series {
            t: keep.iter().map(|&i| self.t[i] - shift).collect(),
            u_center: pick(&self.u_center),
            u_left: pick(&self.u_left),
            u_right: pick(&self.u_right),
            max_abs_ux: pick(&self.max_abs_ux),
            min_uxx: pick(&self.min_uxx),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Horizon {
    pub t: f64,
    pub boundary_slope: f64,
    pub cap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveTrace {
    pub origin: TraceOrigin,
    pub scheme: Scheme,
    pub snapshots: Vec<GridState>,
    pub series: Series,
    /// Set when the run stopped at the slope cap before `t_end`.
    pub horizon: Option<Horizon>,
    pub steps: usize,
    pub rejected: usize,
}

pub const TIME_EPS: f64 = 1e-9;

impl EvolveTrace {
    /// A trace whose series are sampled at the given states only.
    pub fn from_states(origin: TraceOrigin, scheme: Scheme, states: Vec<GridState>) -> Result<Self> {
        if states.is_empty() || states.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::InsufficientData("states must be nonempty with increasing times".into()));
        }
        let mut series = Series::default();
        for s in &states {
            series.record(s);
        }
        Ok(Self {
            origin,
            scheme,
            snapshots: states,
            series,
            horizon: None,
            steps: 0,
            rejected: 0,
        })
    }

    /// Appends a continuation that starts from this trace's final state.
    pub fn extend(&mut self, more: EvolveTrace) -> Result<()> {
        let end = self.final_state().t;
        if (more.snapshots[0].t - end).abs() > TIME_EPS {
            return Err(Error::IncompatibleTraces(format!(
                "continuation starts at t = {} but the trace ends at t = {end}",
                more.snapshots[0].t
            )));
        }
        self.snapshots.extend(more.snapshots.into_iter().skip(1));
        let s = more.series.retain_from(end + 2.0 * TIME_EPS, 0.0);
        self.series.t.extend(s.t);
        self.series.u_center.extend(s.u_center);
        self.series.u_left.extend(s.u_left);
        self.series.u_right.extend(s.u_right);
        self.series.max_abs_ux.extend(s.max_abs_ux);
        self.series.min_uxx.extend(s.min_uxx);
        self.horizon = more.horizon;
        self.steps += more.steps;
        self.rejected += more.rejected;
        Ok(())
    }

    pub fn with_origin(mut self, origin: TraceOrigin) -> Self {
        self.origin = origin;
        self
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn final_state(&self) -> &GridState {
        self.snapshots.last().expect("a trace holds at least the initial state")
    }

    pub fn at(&self, t: f64) -> Option<&GridState> {
        self.snapshots.iter().find(|s| (s.t - t).abs() <= TIME_EPS)
    }

    /// Linear interpolation in time between the bracketing snapshots.
    pub fn interpolate(&self, t: f64) -> Result<Vec<f64>> {
        let k = self.snapshots.partition_point(|s| s.t < t - TIME_EPS);
        let out_of_range = || {
            Error::InsufficientData(format!(
                "time {t} outside the recorded range [{}, {}]",
                self.snapshots[0].t,
                self.final_state().t
            ))
        };
        let hi = self.snapshots.get(k).ok_or_else(out_of_range)?;
        if (hi.t - t).abs() <= TIME_EPS {
            return Ok(hi.u.clone());
        }
        if k == 0 {
            return Err(out_of_range());
        }
        let lo = &self.snapshots[k - 1];
        let w = (t - lo.t) / (hi.t - lo.t);
        Ok(lo.u.iter().zip(&hi.u).map(|(a, b)| a + w * (b - a)).collect())
    }

    /// The trace restricted to `t >= shift` with times moved back by `shift`,
    /// i.e. `u(x, t + shift)`.
    pub fn shifted(&self, shift: f64) -> EvolveTrace {
        let snapshots = self
            .snapshots
            .iter()
            .filter(|s| s.t >= shift - TIME_EPS)
            .map(|s| GridState {
                grid: s.grid.clone(),
                u: s.u.clone(),
                t: (s.t - shift).max(0.0),
            })
            .collect();
        EvolveTrace {
            origin: self.origin.clone(),
            scheme: self.scheme,
            snapshots,
            series: self.series.retain_from(shift, shift),
            horizon: self.horizon.map(|h| Horizon { t: h.t - shift, ..h }),
            steps: self.steps,
            rejected: self.rejected,
        }
    }

    /// First snapshot time at which `u` exceeds `u0` at every node.
    pub fn domination_time(&self, u0: &GridState) -> Option<f64> {
        self.snapshots
            .iter()
            .find(|s| s.u.iter().zip(&u0.u).all(|(a, b)| a > b))
            .map(|s| s.t)
    }
}

/// Grid-scale oscillation: second differences alternate in sign at more than a
/// quarter of the interior nodes. Smooth solutions have a few inflections at most.
fn oscillates(s: &GridState) -> bool {
    let u = &s.u;
    let n = u.len() - 1;
    let floor = 1e-12 * u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let d2: Vec<f64> = (1..n).map(|i| u[i + 1] - 2.0 * u[i] + u[i - 1]).collect();
    let flips = d2
        .windows(2)
        .filter(|w| w[0] * w[1] < 0.0 && w[0].abs() > floor && w[1].abs() > floor)
        .count();
    flips > n / 4
}

fn boundary_slope(s: &GridState) -> f64 {
    let ux = s.ux();
    let n = ux.len() - 1;
    [ux[0], ux[1], ux[n - 1], ux[n]].iter().fold(0.0, |m: f64, v| m.max(v.abs()))
}

/// Integrates from `initial.t` to `t_end`, recording snapshots every
/// `snapshot_every` and at the final time.
pub fn evolve(initial: GridState, pair: &CoefficientPair, t_end: f64, controls: &EvolveControls) -> Result<EvolveTrace> {
    if !(controls.dt > 0.0 && controls.snapshot_every > 0.0) {
        return Err(Error::Config("dt and snapshot cadence must be positive".into()));
    }
    if !(t_end >= initial.t) {
        return Err(Error::Config(format!("t_end = {t_end} precedes the initial time {}", initial.t)));
    }
    let t0 = initial.t;
    let mut series = Series::default();
    series.record(&initial);
    let mut trace = EvolveTrace {
        origin: TraceOrigin::State,
        scheme: controls.scheme,
        snapshots: vec![initial.clone()],
        series,
        horizon: None,
        steps: 0,
        rejected: 0,
    };
    let mut state = initial;
    let mut dt = controls.dt;
    let mut next_index = 1usize;
    let finish_eps = 1e-12 * t_end.abs().max(1.0);

    while state.t < t_end - finish_eps {
        if trace.steps >= controls.max_steps {
            return Err(Error::Domain(format!(
                "step budget of {} exhausted at t = {}",
                controls.max_steps, state.t
            )));
        }
        let next_snap = t0 + next_index as f64 * controls.snapshot_every;
        let target = next_snap.min(t_end);
        let mut dt_try = dt.min(target - state.t);
        if controls.adaptive && controls.scheme == Scheme::Explicit {
            dt_try = dt_try.min(explicit_dt_limit(&state, pair, controls.cfl));
        }
        let clipped = dt_try < dt;

        let attempt = step(&state, pair, dt_try, controls.scheme);
        let accepted = match attempt {
            Ok(next) => {
                let du = next
                    .u
                    .iter()
                    .zip(&state.u)
                    .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));
                if !controls.adaptive && oscillates(&next) {
                    return Err(Error::BlowUp {
                        t: next.t,
                        last_good: Box::new(state),
                    });
                }
                if controls.adaptive && (du > controls.du_max || oscillates(&next)) {
                    None
                } else {
                    Some(next)
                }
            }
            Err(e @ Error::BlowUp { .. }) if !controls.adaptive => return Err(e),
            Err(Error::BlowUp { .. }) => None,
            Err(e) => return Err(e),
        };
        let mut next = match accepted {
            Some(n) => n,
            None => {
                trace.rejected += 1;
                dt = 0.5 * dt_try;
                if dt < controls.dt_min {
                    return Err(Error::BlowUp {
                        t: state.t,
                        last_good: Box::new(state),
                    });
                }
                continue;
            }
        };
        if (target - next.t).abs() <= finish_eps {
            next.t = target;
        }
        state = next;
        trace.steps += 1;
        if controls.adaptive && !clipped {
            dt = (1.2 * dt).min(controls.dt_max);
        }
        trace.series.record(&state);

        let mut snapped = false;
        if state.t >= next_snap - finish_eps {
            next_index += 1;
            trace.snapshots.push(state.clone());
            snapped = true;
        } else if state.t >= t_end - finish_eps {
            trace.snapshots.push(state.clone());
            snapped = true;
        }
        let slope = boundary_slope(&state);
        if slope > controls.slope_cap {
            if !snapped {
                trace.snapshots.push(state.clone());
            }
            trace.horizon = Some(Horizon {
                t: state.t,
                boundary_slope: slope,
                cap: controls.slope_cap,
            });
            break;
        }
    }
    Ok(trace)
}
