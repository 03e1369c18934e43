use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use bandflow::io::{read_datum_csv, write_profile_csv, write_report_json, write_snapshots_csv, write_state_json, write_trace_json, write_wave_json};
use bandflow::pde::{evolve, Grid, InitialDatum, RhoDatum, Scheme, DEFAULT_COMPAT_TOL};
use bandflow::traveling_wave::{self, solve_c_of_h_with_nodes, solve_cbar_with_nodes};
use bandflow::verification::{run_suite, Status};
use bandflow::{Error, WaveSolution};

use crate::config::{usage, DatumKind, Loaded};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED_CHECK: u8 = 1;
pub const EXIT_BLOW_UP: u8 = 3;

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))
}

fn h_label(h: Option<f64>) -> String {
    h.map_or_else(|| "inf".to_string(), |h| h.to_string())
}

pub fn tw(cfg: &Loaded, h_flag: Option<f64>, out: &Path) -> Result<u8> {
    let pair = cfg.pair()?;
    let wave = &cfg.config.wave;
    let hs: Vec<Option<f64>> = match h_flag {
        Some(h) => vec![Some(h)],
        None if wave.h.is_empty() => vec![None],
        None => wave.h.iter().copied().map(Some).collect(),
    };
    let mut solved = Vec::new();
    for h in &hs {
        let w = match h {
            None => solve_cbar_with_nodes(&pair, wave.tol, wave.nodes)?,
            Some(h) => solve_c_of_h_with_nodes(&pair, *h, wave.tol, wave.nodes)?,
        };
        solved.push(w);
    }
    ensure_dir(out)?;
    let single = solved.len() == 1;
    for w in &solved {
        let suffix = if single { String::new() } else { format!("-h{}", h_label(w.h)) };
        write_wave(out, &suffix, w)?;
        println!("h = {}  c = {}  achieved |d(c) - 2| = {:e}", h_label(w.h), w.c, w.tol);
    }
    Ok(EXIT_OK)
}

fn write_wave(out: &Path, suffix: &str, w: &WaveSolution) -> Result<()> {
    write_wave_json(create(out, &format!("wave{suffix}.json"))?, w)?;
    write_profile_csv(create(out, &format!("profile{suffix}.csv"))?, &w.profile)?;
    Ok(())
}

pub fn evolve_cmd(
    cfg: &Loaded,
    datum_flag: Option<DatumKind>,
    file_flag: Option<PathBuf>,
    scheme: Option<Scheme>,
    out: &Path,
) -> Result<u8> {
    let pair = cfg.pair()?;
    let pde = cfg.pde()?;
    let grid = Grid::new(pde.intervals, pde.grid_kind())?;
    let nodes = cfg.config.wave.nodes;
    let stationary = traveling_wave::stationary_profile(&pair, nodes)?;
    let m1 = stationary.threshold().max(0.0) + pde.m1_offset;
    let datum = match datum_flag.unwrap_or(pde.datum) {
        DatumKind::Rho => {
            let wave = solve_cbar_with_nodes(&pair, cfg.config.wave.tol, nodes)?;
            InitialDatum::Rho(RhoDatum::new(&wave.profile, &stationary, m1)?)
        }
        DatumKind::Lift => InitialDatum::lift(pde.lift_k, pde.lift_gamma),
        DatumKind::User => {
            let path = match (file_flag, &pde.file) {
                (Some(p), _) => p,
                (None, Some(p)) => cfg.resolve(p),
                (None, None) => return Err(usage("the user datum needs --file or `file` in [pde]")),
            };
            let f = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
            InitialDatum::tabulated(read_datum_csv(f)?)?
        }
    };
    let state = datum.admit(&grid, &stationary, pde.compat_tol.unwrap_or(DEFAULT_COMPAT_TOL))?;
    let controls = pde.controls(scheme);
    ensure_dir(out)?;
    let trace = match evolve(state, &pair, pde.t_end, &controls) {
        Ok(t) => t.with_origin(datum.origin()),
        Err(Error::BlowUp { t, last_good }) => {
            write_state_json(create(out, "last_good.json")?, &last_good)?;
            eprintln!(
                "error: numerical blow-up at t = {t}; last good state (t = {}) written to {}",
                last_good.t,
                out.join("last_good.json").display()
            );
            return Ok(EXIT_BLOW_UP);
        }
        Err(e) => return Err(e.into()),
    };
    write_snapshots_csv(create(out, "snapshots.csv")?, &trace)?;
    write_trace_json(create(out, "trace.json")?, &trace)?;
    let last = trace.final_state();
    match &trace.horizon {
        Some(h) => println!(
            "slope horizon reached at t = {} (|u_x| = {:e} above cap {:e}); stopped early",
            h.t, h.boundary_slope, h.cap
        ),
        None => println!("reached t = {} in {} steps", last.t, trace.steps),
    }
    println!("u(0, t) = {}", last.center_value());
    Ok(EXIT_OK)
}

pub fn verify(cfg: &Loaded, scheme: Option<Scheme>, out: &Path) -> Result<u8> {
    let suite = cfg.suite(scheme)?;
    let outcome = run_suite(&suite)?;
    ensure_dir(out)?;
    write_report_json(create(out, "report.json")?, &outcome.report)?;
    for c in &outcome.report.checks {
        let status = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::NotApplicable => "not-applicable",
            Status::Partial => "partial",
        };
        println!("{:<24} {status}", c.name);
    }
    Ok(if outcome.report.succeeded() {
        EXIT_OK
    } else {
        EXIT_FAILED_CHECK
    })
}
