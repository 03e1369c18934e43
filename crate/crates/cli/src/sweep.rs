//! Parameter sweeps: points run on a bounded pool, rows leave through one
//! writer in axis order as soon as they are contiguous.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use anyhow::{Context, Result};
use bandflow::io::fmt_f64;
use bandflow::traveling_wave::{reconstruct_profile, solve_c_of_h_with_nodes, solve_cbar_with_nodes, x_minus, x_plus};
use bandflow::CoefficientPair;

use crate::commands::{ensure_dir, EXIT_OK};
use crate::config::{check_axis, Axis, Loaded};

pub const HEADER: [&str; 7] = ["param", "c", "x_plus", "x_minus", "span", "height", "status"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub c: f64,
    pub x_plus: f64,
    pub x_minus: f64,
    pub height: f64,
}

fn eval_point(cfg: &Loaded, axis: Axis, value: f64) -> Result<Point> {
    let wave = &cfg.config.wave;
    let solve = |pair: &CoefficientPair, h: Option<f64>| -> Result<Point> {
        let w = match h {
            Some(h) => solve_c_of_h_with_nodes(pair, h, wave.tol, wave.nodes)?,
            None => solve_cbar_with_nodes(pair, wave.tol, wave.nodes)?,
        };
        Ok(Point {
            c: w.c,
            x_plus: w.x_plus,
            x_minus: w.x_minus,
            height: w.height,
        })
    };
    match axis {
        Axis::H => solve(&cfg.pair()?, Some(value)),
        Axis::C => {
            let pair = cfg.pair()?;
            Ok(Point {
                c: value,
                x_plus: x_plus(&pair, value)?,
                x_minus: x_minus(&pair, value)?,
                height: reconstruct_profile(&pair, value, None, wave.nodes)?.height(),
            })
        }
        Axis::Alpha | Axis::Eps | Axis::Beta | Axis::Delta => {
            let mut section = cfg.coefficients()?.clone();
            let slot = match axis {
                Axis::Alpha => &mut section.alpha,
                Axis::Eps => &mut section.eps,
                Axis::Beta => &mut section.beta,
                _ => &mut section.delta,
            };
            *slot = value;
            solve(&cfg.pair_with(&section)?, wave.h.first().copied())
        }
    }
}

fn row(value: f64, point: &Result<Point>) -> Vec<String> {
    match point {
        Ok(p) => vec![
            fmt_f64(value),
            fmt_f64(p.c),
            fmt_f64(p.x_plus),
            fmt_f64(p.x_minus),
            fmt_f64(p.x_plus - p.x_minus),
            fmt_f64(p.height),
            "ok".into(),
        ],
        Err(e) => {
            let mut r = vec![fmt_f64(value)];
            r.extend(std::iter::repeat_n(fmt_f64(f64::NAN), 5));
            r.push(format!("error: {e:#}"));
            r
        }
    }
}

/// Evaluates every point with up to `jobs` workers and hands rows to
/// `sink` in axis order.
pub fn run<W: Write>(cfg: &Loaded, axis: Axis, values: &[f64], jobs: usize, sink: W) -> Result<usize> {
    let mut out = csv::Writer::from_writer(sink);
    out.write_record(HEADER)?;
    out.flush()?;
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<Point>)>();
    let mut failures = 0;
    thread::scope(|s| -> Result<()> {
        for _ in 0..jobs.clamp(1, values.len()) {
            let tx = tx.clone();
            let next = &next;
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&v) = values.get(i) else { break };
                if tx.send((i, eval_point(cfg, axis, v))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending = BTreeMap::new();
        let mut written = 0;
        for (i, p) in rx {
            pending.insert(i, p);
            while let Some(p) = pending.remove(&written) {
                failures += usize::from(p.is_err());
                out.write_record(row(values[written], &p))?;
                out.flush()?;
                written += 1;
            }
        }
        Ok(())
    })?;
    Ok(failures)
}

pub fn sweep(cfg: &Loaded, jobs: usize, out: &Path) -> Result<u8> {
    let sweep = cfg.sweep()?;
    check_axis(&sweep.values)?;
    ensure_dir(out)?;
    let path = out.join("sweep.csv");
    let f = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    let failures = run(cfg, sweep.axis, &sweep.values, jobs, f)?;
    println!("{} points written to {}", sweep.values.len(), path.display());
    if failures > 0 {
        eprintln!("{failures} point(s) failed; see the status column");
    }
    Ok(EXIT_OK)
}
