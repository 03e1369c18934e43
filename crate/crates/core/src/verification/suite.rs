use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::coefficients::{CoefficientPair, Family, Requirements};
use crate::error::{Error, Result};
use crate::pde::{
    evolve, EvolveControls, EvolveTrace, Grid, GridKind, GridState, InitialDatum, RhoDatum, DEFAULT_COMPAT_TOL,
};
use crate::traveling_wave::{self, StationaryProfile, WaveSolution, DEFAULT_NODES, DEFAULT_TOL};

use super::checks::{
    check_comparison, check_convergence, check_convexity, check_gradient_envelopes, check_interior_gradient,
    check_linfty_wedge, ConvergenceOptions, EnvelopeOptions, CONVERGENCE, CONVEXITY, GRADIENT_ENVELOPES,
    INTERIOR_GRADIENT, LINFTY_WEDGE,
};
use super::report::{build_report, CheckResult, Status, VerificationReport, Window};

pub const CONVERGENCE_GENERAL: &str = "convergence_general";
pub const COMPARISON_LOWER: &str = "comparison_lower";
pub const COMPARISON_UPPER: &str = "comparison_upper";

/// Every check the suite knows, in report order.
pub const ALL_CHECKS: [&str; 8] = [
    COMPARISON_LOWER,
    COMPARISON_UPPER,
    CONVERGENCE,
    CONVERGENCE_GENERAL,
    CONVEXITY,
    GRADIENT_ENVELOPES,
    INTERIOR_GRADIENT,
    LINFTY_WEDGE,
];

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub pair: CoefficientPair,
    pub intervals: usize,
    pub grid: GridKind,
    pub controls: EvolveControls,
    pub t_end: f64,
    /// `M1` is the admissible threshold plus this offset.
    pub m1_offset: f64,
    /// Boundary slope of the lower-envelope wave.
    pub h0: f64,
    pub epsilon: f64,
    pub envelope: EnvelopeOptions,
    pub convergence: ConvergenceOptions,
    /// Lower bound for the first reference time of the convergence ladder.
    pub s0_min: f64,
    pub wedge_tol: f64,
    pub convexity_rel_tol: f64,
    /// The general datum is `rho + delta e^{x^2/2} + gamma x (1 - x^2)^2`.
    pub general_delta: f64,
    pub general_gamma: f64,
    pub wave_tol: f64,
    pub wave_nodes: usize,
    /// Replaces the computed `c_bar` in the checks (negative controls).
    pub cbar_override: Option<f64>,
    /// Empty means all checks.
    pub checks: Vec<String>,
}

impl SuiteConfig {
    pub fn new(pair: CoefficientPair) -> Self {
        Self {
            pair,
            intervals: 512,
            grid: GridKind::Uniform,
            controls: EvolveControls::default(),
            t_end: 30.0,
            m1_offset: 1.0,
            h0: 5.0,
            epsilon: 0.1,
            envelope: EnvelopeOptions::default(),
            convergence: ConvergenceOptions::default(),
            s0_min: 2.0,
            wedge_tol: 1e-3,
            convexity_rel_tol: 1e-6,
            general_delta: 0.5,
            general_gamma: 0.5,
            wave_tol: DEFAULT_TOL,
            wave_nodes: DEFAULT_NODES,
            cbar_override: None,
            checks: Vec::new(),
        }
    }

    fn requested(&self) -> Result<Vec<&'static str>> {
        if self.checks.is_empty() {
            return Ok(ALL_CHECKS.to_vec());
        }
        self.checks
            .iter()
            .map(|c| {
                ALL_CHECKS
                    .iter()
                    .copied()
                    .find(|k| k == c)
                    .ok_or_else(|| Error::Config(format!("unknown check `{c}`; known: {}", ALL_CHECKS.join(", "))))
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub report: VerificationReport,
    pub wave: WaveSolution,
    pub wave_h0: Option<WaveSolution>,
    /// Extended to `t_end + T` so that the shifted trace covers `[0, t_end]`.
    pub rho_trace: Option<EvolveTrace>,
    pub general_trace: EvolveTrace,
    pub domination_time: Option<f64>,
}

fn family_meta(pair: &CoefficientPair) -> Value {
    match pair.family() {
        Family::Constant { alpha, beta } => json!({"family": "constant", "alpha": alpha, "beta": beta}),
        Family::RationalBump { alpha, eps, beta, delta } => {
            json!({"family": "rational-bump", "alpha": alpha, "eps": eps, "beta": beta, "delta": delta})
        }
        Family::Tabulated(t) => json!({"family": "tabulated", "nodes": t.nodes().len()}),
    }
}

fn run_pair(
    a: (GridState, &CoefficientPair, f64, &EvolveControls),
    b: (GridState, &CoefficientPair, f64, &EvolveControls),
) -> (Result<EvolveTrace>, Result<EvolveTrace>) {
    std::thread::scope(|s| {
        let h = s.spawn(move || evolve(a.0, a.1, a.2, a.3));
        let rb = evolve(b.0, b.1, b.2, b.3);
        (h.join().expect("evolution thread panicked"), rb)
    })
}

fn recorded(name: &str, r: Result<CheckResult>, window: Window) -> CheckResult {
    r.unwrap_or_else(|e| {
        let mut c = CheckResult::new(name, window, 0.0).with_status(Status::Fail);
        c.note("error", &e.to_string());
        c
    })
}

/// Solves the waves, evolves the rho datum and a general datum, and runs the
/// requested checks. Blow-up and wave-solver failures are returned as errors;
/// failures inside individual checks are recorded in the report.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let requested = cfg.requested()?;
    let pair = &cfg.pair;
    let wave = traveling_wave::solve_cbar_with_nodes(pair, cfg.wave_tol, cfg.wave_nodes)?;
    let cbar = cfg.cbar_override.unwrap_or(wave.c);
    let stationary: StationaryProfile = traveling_wave::stationary_profile(pair, cfg.wave_nodes)?;
    let grid = Grid::new(cfg.intervals, cfg.grid)?;
    let symmetric = pair.validate(Requirements::SYMMETRIC_FLOW).passes_required();

    let mut meta = BTreeMap::new();
    meta.insert("pair".into(), family_meta(pair));
    meta.insert("symmetric".into(), json!(symmetric));
    meta.insert("grid".into(), json!({"intervals": cfg.intervals, "kind": cfg.grid}));
    meta.insert("scheme".into(), json!(cfg.controls.scheme.name()));
    meta.insert("t_end".into(), json!(cfg.t_end));
    meta.insert("cbar".into(), json!(wave.c));
    if let Some(c) = cfg.cbar_override {
        meta.insert("cbar_override".into(), json!(c));
    }
    meta.insert("epsilon".into(), json!(cfg.epsilon));

    let mut checks = Vec::new();
    let full = |t: &EvolveTrace, x_max: f64| Window {
        t_min: t.snapshots[0].t,
        t_max: t.final_state().t,
        x_max,
    };

    if !symmetric {
        let k = stationary.threshold().max(0.0) + cfg.m1_offset;
        let datum = InitialDatum::lift(k, cfg.general_gamma);
        let state = datum.admit(&grid, &stationary, DEFAULT_COMPAT_TOL)?;
        let general = evolve(state, pair, cfg.t_end, &cfg.controls)?.with_origin(datum.origin());
        meta.insert("general_datum".into(), json!(datum.origin()));
        meta.insert("horizon".into(), json!({"general": general.horizon}));
        for &name in &requested {
            let c = if name == LINFTY_WEDGE {
                recorded(name, check_linfty_wedge(&general, &wave.profile, cbar, cfg.wedge_tol), full(&general, 0.0))
            } else {
                CheckResult::not_applicable(name, "needs an even coefficient pair")
            };
            checks.push(c);
        }
        return Ok(SuiteOutcome {
            report: build_report(checks, meta)?,
            wave,
            wave_h0: None,
            rho_trace: None,
            general_trace: general,
            domination_time: None,
        });
    }

    let wave_h0 = traveling_wave::solve_c_of_h_with_nodes(pair, cfg.h0, cfg.wave_tol, cfg.wave_nodes)?;
    let m1 = stationary.threshold().max(0.0) + cfg.m1_offset;
    let rho = RhoDatum::new(&wave.profile, &stationary, m1)?;
    let rho_datum = InitialDatum::Rho(rho.clone());
    let general_datum = InitialDatum::perturbed_rho(&rho, cfg.general_delta, cfg.general_gamma);
    let rho_state = rho_datum.admit(&grid, &stationary, DEFAULT_COMPAT_TOL)?;
    let general_state = general_datum.admit(&grid, &stationary, DEFAULT_COMPAT_TOL)?;

    let (rho_run, general_run) = run_pair(
        (rho_state, pair, cfg.t_end, &cfg.controls),
        (general_state.clone(), pair, cfg.t_end, &cfg.controls),
    );
    let mut rho_trace = rho_run?.with_origin(rho_datum.origin());
    let general = general_run?.with_origin(general_datum.origin());
    let t_dom = rho_trace.domination_time(&general_state);
    if let Some(t) = t_dom {
        if rho_trace.horizon.is_none() && t > 0.0 {
            let start = rho_trace.final_state().clone();
            let more = evolve(start, pair, cfg.t_end + t, &cfg.controls)?;
            rho_trace.extend(more)?;
        }
    }

    meta.insert("c_h0".into(), json!(wave_h0.c));
    meta.insert("h0".into(), json!(cfg.h0));
    meta.insert("m1".into(), json!(m1));
    meta.insert("p".into(), json!(rho.p));
    meta.insert("domination_time".into(), json!(t_dom));
    meta.insert("general_datum".into(), json!(general_datum.origin()));
    meta.insert(
        "horizon".into(),
        json!({"rho": rho_trace.horizon, "general": general.horizon}),
    );
    meta.insert(
        "steps".into(),
        json!({"rho": rho_trace.steps, "general": general.steps}),
    );

    let envelopes = check_gradient_envelopes(&rho_trace, pair, &wave.profile, Some(&wave_h0.profile), cfg.envelope);
    let onset = envelopes.as_ref().ok().and_then(|c| c.number("onset"));
    let s0 = onset.map(|o| o.max(cfg.s0_min));
    if let Some(s) = s0 {
        meta.insert("s0".into(), json!(s));
    }

    for &name in &requested {
        let c = match name {
            LINFTY_WEDGE => recorded(
                name,
                check_linfty_wedge(&rho_trace, &wave.profile, cbar, cfg.wedge_tol),
                full(&rho_trace, 0.0),
            ),
            CONVEXITY => check_convexity(&rho_trace, pair, cfg.convexity_rel_tol),
            GRADIENT_ENVELOPES => recorded(name, envelopes.as_ref().map(Clone::clone).map_err(|e| Error::Dependency(e.to_string())), full(&rho_trace, cfg.envelope.x_max)),
            INTERIOR_GRADIENT => recorded(
                name,
                check_interior_gradient(&general, &wave.profile, cbar, t_dom, cfg.epsilon),
                full(&general, 1.0 - 2.0 * cfg.epsilon),
            ),
            CONVERGENCE => recorded(
                name,
                check_convergence(name, &rho_trace, pair, &wave.profile, cbar, s0, cfg.convergence),
                full(&rho_trace, 1.0 - 2.0 * cfg.convergence.epsilon),
            ),
            CONVERGENCE_GENERAL => recorded(
                name,
                check_convergence(name, &general, pair, &wave.profile, cbar, s0, cfg.convergence),
                full(&general, 1.0 - 2.0 * cfg.convergence.epsilon),
            ),
            COMPARISON_LOWER => recorded(name, check_comparison(name, &rho_trace, &general), full(&general, 1.0)),
            COMPARISON_UPPER => {
                let r = match t_dom {
                    Some(t) => check_comparison(name, &general, &rho_trace.shifted(t)),
                    None => Err(Error::Dependency("the rho run never dominated the general datum".into())),
                };
                recorded(name, r, full(&general, 1.0))
            }
            _ => unreachable!("requested names are validated"),
        };
        checks.push(c);
    }

    Ok(SuiteOutcome {
        report: build_report(checks, meta)?,
        wave,
        wave_h0: Some(wave_h0),
        rho_trace: Some(rho_trace),
        general_trace: general,
        domination_time: t_dom,
    })
}
