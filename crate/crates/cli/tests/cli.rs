use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const REFERENCE: &str = "[coefficients]\nfamily = \"constant\"\nalpha = 1.0\nbeta = 0.5\n";

fn bandflow(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bandflow"))
        .current_dir(dir)
        .env_remove("BANDFLOW_OUT")
        .args(args)
        .output()
        .expect("binary runs")
}

fn setup(config: &str) -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("run.toml"), config).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Reads `c = <value>` from the tw output.
fn printed_speed(o: &Output) -> f64 {
    let s = stdout(o);
    let tail = s.split("c = ").nth(1).expect("speed printed");
    tail.split_whitespace().next().unwrap().parse().unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

fn numbers(csv: &str, name: &str) -> Vec<f64> {
    column(csv, name).iter().map(|v| v.parse().unwrap()).collect()
}

#[test]
fn grim_reaper_speed_is_half_pi() {
    let dir = setup("[coefficients]\nfamily = \"grim-reaper\"\n");
    let o = bandflow(dir.path(), &["tw", "--config", "run.toml", "--out", "w"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("c = 1.5707963"));
    assert!((printed_speed(&o) - FRAC_PI_2).abs() < 1e-8);
    assert!(dir.path().join("w/wave.json").exists());
    let profile = fs::read_to_string(dir.path().join("w/profile.csv")).unwrap();
    assert!(profile.starts_with("x,phi,psi"));
}

#[test]
fn finite_slope_is_slower() {
    let dir = setup(REFERENCE);
    let bar = printed_speed(&bandflow(dir.path(), &["tw", "--config", "run.toml", "--out", "a"]));
    let o = bandflow(dir.path(), &["tw", "--config", "run.toml", "--h", "5", "--out", "b"]);
    assert!(o.status.success());
    let c5 = printed_speed(&o);
    assert!(c5 < bar);
    assert!((c5 - 0.626_441_79).abs() < 1e-8);
    let wave: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("b/wave.json")).unwrap()).unwrap();
    assert_eq!(wave["h"].as_f64(), Some(5.0));
}

#[test]
fn malformed_configs_are_usage_errors() {
    for text in ["[coefficients\nfamily = 1", "[coefficients]\nfamily = \"constant\"\nbogus = 3\n", "[wave]\n"] {
        let dir = setup(text);
        let o = bandflow(dir.path(), &["tw", "--config", "run.toml"]);
        assert_eq!(o.status.code(), Some(2), "{text}: {}", stderr(&o));
    }
    let dir = setup(REFERENCE);
    assert_eq!(bandflow(dir.path(), &["evolve", "--config", "run.toml"]).status.code(), Some(2));
    assert_eq!(bandflow(dir.path(), &["tw", "--nope"]).status.code(), Some(2));
}

#[test]
fn hypothesis_failures_name_the_inequality() {
    let dir = setup("[coefficients]\nfamily = \"constant\"\nalpha = 1.0\nbeta = 0.9\n");
    let o = bandflow(dir.path(), &["tw", "--config", "run.toml", "--h", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("a0*h > -b0*sqrt(1+h^2)"), "{}", stderr(&o));
}

#[test]
fn rho_run_writes_trace() {
    let dir = setup(&format!("{REFERENCE}[pde]\nintervals = 128\nt_end = 5.0\nsnapshot_every = 1.0\n"));
    let o = bandflow(dir.path(), &["evolve", "--config", "run.toml", "--out", "run"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let snaps = fs::read_to_string(dir.path().join("run/snapshots.csv")).unwrap();
    assert!(snaps.starts_with("t,x,u,ux,uxx,theta"));
    assert_eq!(snaps.lines().count(), 1 + 6 * 129);
    let trace: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run/trace.json")).unwrap()).unwrap();
    assert!(trace["horizon"].is_null());
    let center: Vec<f64> = trace["series"]["u_center"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let half = center.len() / 2;
    assert!(center[half..].windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn slope_horizon_exits_cleanly() {
    let dir = setup(&format!(
        "{REFERENCE}[pde]\nintervals = 64\nt_end = 50.0\ndatum = \"lift\"\nslope_cap = 4.0\n"
    ));
    let o = bandflow(dir.path(), &["evolve", "--config", "run.toml", "--out", "run"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("slope horizon"));
    let trace: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run/trace.json")).unwrap()).unwrap();
    assert!(trace["horizon"]["t"].as_f64().unwrap() < 50.0);
}

#[test]
fn explicit_overshoot_exits_three_with_dump() {
    let dir = setup(&format!(
        "{REFERENCE}[pde]\nintervals = 128\nt_end = 5.0\ndatum = \"lift\"\nlift_gamma = 0.3\ndt = 1e-2\n"
    ));
    let o = bandflow(dir.path(), &["evolve", "--config", "run.toml", "--scheme", "explicit", "--out", "run"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let dump: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run/last_good.json")).unwrap()).unwrap();
    assert!(dump["u"].as_array().unwrap().iter().all(|v| v.as_f64().is_some_and(f64::is_finite)));
}

#[test]
fn incompatible_user_datum_is_rejected() {
    let dir = setup(&format!("{REFERENCE}[pde]\nintervals = 64\nt_end = 0.1\n"));
    let mut csv = String::from("x,u\n");
    for k in 0..=64 {
        let x = -1.0 + k as f64 / 32.0;
        csv.push_str(&format!("{x},{}\n", 3.0 + x * x));
    }
    fs::write(dir.path().join("u0.csv"), csv).unwrap();
    let o = bandflow(
        dir.path(),
        &["evolve", "--config", "run.toml", "--datum", "user", "--file", "u0.csv", "--out", "run"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("u0'(+-1) = +-u0(+-1)"), "{}", stderr(&o));
    assert!(!dir.path().join("run/trace.json").exists());
}

#[test]
fn reference_suite_passes() {
    let dir = setup(&format!("{REFERENCE}[verify]\n"));
    let o = bandflow(dir.path(), &["verify", "--config", "run.toml", "--out", "v"]);
    assert_eq!(o.status.code(), Some(0), "{}\n{}", stdout(&o), stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("v/report.json")).unwrap()).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 8);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn injected_speed_fails_verification() {
    let dir = setup(&format!("{REFERENCE}[verify]\nchecks = [\"convergence\"]\ncbar_override = 0.8\n"));
    let o = bandflow(dir.path(), &["verify", "--config", "run.toml", "--out", "v"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("v/report.json")).unwrap()).unwrap();
    assert_eq!(report["checks"][0]["name"], "convergence");
    assert_eq!(report["checks"][0]["status"], "fail");
}

#[test]
fn skewed_pair_gates_symmetric_checks() {
    let mut table = String::from("omega,a,b\n");
    for k in 0..=64 {
        let w = -FRAC_PI_2 + k as f64 * FRAC_PI_2 / 32.0;
        table.push_str(&format!("{w},{},{}\n", 1.0 + 0.2 * w.sin(), -0.5 - 0.1 * w.sin()));
    }
    let dir = setup(
        "[coefficients]\nfamily = \"tabulated\"\nfile = \"table.csv\"\n\
         [pde]\nintervals = 128\n\
         [verify]\nt_end = 5.0\nchecks = [\"convexity\", \"gradient_envelopes\", \"linfty_wedge\"]\n",
    );
    fs::write(dir.path().join("table.csv"), table).unwrap();
    let o = bandflow(dir.path(), &["verify", "--config", "run.toml", "--out", "v"]);
    assert_eq!(o.status.code(), Some(0), "{}\n{}", stdout(&o), stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("v/report.json")).unwrap()).unwrap();
    for c in report["checks"].as_array().unwrap() {
        let expected = if c["name"] == "linfty_wedge" { "pass" } else { "not-applicable" };
        assert_eq!(c["status"], expected, "{c}");
    }
}

#[test]
fn slope_sweep_increases_towards_limit() {
    let dir = setup(&format!("{REFERENCE}[sweep]\naxis = \"h\"\nvalues = [2, 5, 10, 50, 200]\n"));
    let o = bandflow(dir.path(), &["sweep", "--config", "run.toml", "--jobs", "3", "--out", "s"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap();
    assert!(csv.starts_with("param,c,x_plus,x_minus,span,height,status"));
    assert_eq!(numbers(&csv, "param"), vec![2.0, 5.0, 10.0, 50.0, 200.0]);
    let c = numbers(&csv, "c");
    assert!(c.windows(2).all(|w| w[1] > w[0]), "{c:?}");
    let bar = printed_speed(&bandflow(dir.path(), &["tw", "--config", "run.toml", "--out", "t"]));
    assert!(bar - c[4] < 1e-3 && c[4] < bar);
}

#[test]
fn speed_sweep_span_decreases() {
    let dir = setup(&format!("{REFERENCE}[sweep]\naxis = \"c\"\nvalues = [0.5, 1, 2]\n"));
    let o = bandflow(dir.path(), &["sweep", "--config", "run.toml", "--out", "s"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap();
    let span = numbers(&csv, "span");
    assert!(span.windows(2).all(|w| w[1] < w[0]), "{span:?}");
}

#[test]
fn failed_points_are_recorded_and_the_sweep_continues() {
    let dir = setup(&format!("{REFERENCE}[sweep]\naxis = \"beta\"\nvalues = [0.2, 1.5, 0.1]\n"));
    let o = bandflow(dir.path(), &["sweep", "--config", "run.toml", "--out", "s"]);
    assert_eq!(o.status.code(), Some(2), "non-monotone axis");
    let dir = setup(&format!("{REFERENCE}[sweep]\naxis = \"beta\"\nvalues = [0.2, 0.5, 1.5]\n"));
    let o = bandflow(dir.path(), &["sweep", "--config", "run.toml", "--out", "s"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("s/sweep.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[..2].iter().all(|r| r.ends_with(",ok")));
    assert!(rows[2].contains("error: coefficient pair rejected"), "{}", rows[2]);
}

#[test]
fn empty_axis_is_usage_error() {
    let dir = setup(&format!("{REFERENCE}[sweep]\naxis = \"h\"\nvalues = []\n"));
    assert_eq!(bandflow(dir.path(), &["sweep", "--config", "run.toml"]).status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let dir = setup(&format!(
        "{REFERENCE}[pde]\nintervals = 64\nt_end = 1.0\n[sweep]\naxis = \"h\"\nvalues = [3, 4, 6, 8, 12, 20]\n"
    ));
    for (run, jobs) in [("a", "1"), ("b", "4")] {
        for args in [vec!["tw"], vec!["evolve"], vec!["sweep", "--jobs", jobs]] {
            let mut args = args;
            args.extend(["--config", "run.toml", "--out", run]);
            let o = bandflow(dir.path(), &args);
            assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        }
    }
    for f in ["wave.json", "profile.csv", "snapshots.csv", "trace.json", "sweep.csv"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn output_directory_comes_from_environment() {
    let dir = setup("[coefficients]\nfamily = \"grim-reaper\"\n[output]\ndir = \"from-config\"\n");
    let o = Command::new(env!("CARGO_BIN_EXE_bandflow"))
        .current_dir(dir.path())
        .env("BANDFLOW_OUT", "from-env")
        .args(["tw", "--config", "run.toml"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("from-env/wave.json").exists());
    let o = bandflow(dir.path(), &["tw", "--config", "run.toml"]);
    assert!(o.status.success());
    assert!(dir.path().join("from-config/wave.json").exists());
}
