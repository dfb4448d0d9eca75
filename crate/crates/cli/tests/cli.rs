use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ire(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ire")).args(args).output().expect("binary runs")
}

fn write_cfg(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn preset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("presets").join(name)
}

fn run_cfg(cmd: &str, cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    ire(&args)
}

fn csv_column(text: &str, col: usize) -> Vec<f64> {
    text.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

#[test]
fn alpha_curve_normal_rows() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        d.path(),
        "n.cfg",
        "family = normal\nsigma1 = 1\nsigma2 = 1\nrho = 0\nlambda_start = 0\nlambda_stop = 5\nlambda_step = 0.5\n",
    );
    let o = run_cfg("alpha-curve", &cfg, d.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(d.path().join("n_alpha.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), "family,lambda,alpha_star,alpha,quad_error");
    assert_eq!(text.lines().count(), 12);
    assert_eq!(csv_column(&text, 3)[0], 0.5);
}

#[test]
fn alpha_curve_gamma_is_non_increasing() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        d.path(),
        "g.cfg",
        "family = gamma_scale\na1 = 1\na2 = 1\nlambda_start = 1\nlambda_stop = 5\nlambda_step = 1\n",
    );
    assert_eq!(run_cfg("alpha-curve", &cfg, d.path(), &[]).status.code(), Some(0));
    let text = fs::read_to_string(d.path().join("g_alpha.csv")).unwrap();
    let a = csv_column(&text, 3);
    assert_eq!(a.len(), 5);
    assert!(a.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn config_errors_exit_with_2() {
    let d = tempfile::tempdir().unwrap();
    let bad = write_cfg(d.path(), "bad.cfg", "family = gama\n");
    let o = run_cfg("alpha-curve", &bad, d.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gama"));

    let rmle = write_cfg(d.path(), "p.cfg", "family = power_scale\na1 = 1\na2 = 2\nestimators = bsee, rmle\n");
    let o = run_cfg("risk-sweep", &rmle, d.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!d.path().join("p_risk.csv").exists());

    let unknown = write_cfg(d.path(), "u.cfg", "family = normal\nsigma1 = 1\nsigma2 = 1\nsigmaa = 2\n");
    assert_eq!(run_cfg("alpha-curve", &unknown, d.path(), &[]).status.code(), Some(2));

    let missing = d.path().join("nope.cfg");
    assert_eq!(run_cfg("alpha-curve", &missing, d.path(), &[]).status.code(), Some(2));
}

#[test]
fn check_passes_by_default_and_catches_negative_control() {
    let d = tempfile::tempdir().unwrap();
    let o = ire(&["check", "--out", d.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report = fs::read_to_string(d.path().join("all_check.txt")).unwrap();
    assert!(report.contains("0 failed"));
    assert!(["normal", "exp_loc", "gamma_scale", "power_scale"].iter().all(|f| report.contains(f)));

    let cfg = write_cfg(d.path(), "neg.cfg", "identity_alpha = 0.5\ncheck_tuples = 2000\n");
    let o = run_cfg("check", &cfg, d.path(), &[]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL identity at alpha = 0.5"));
}

#[test]
fn admissible_interval_report() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_cfg(d.path(), "gi.cfg", "family = gamma_scale\na1 = 1\na2 = 1\np1 = 2\np2 = 1\n");
    let o = run_cfg("admissible-interval", &cfg, d.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(d.path().join("gi_interval.txt")).unwrap();
    assert!(text.contains("interval: (-inf, 0.6666666666666666]"));
    assert!(text.contains("diverges: true"));
    assert_eq!(text.matches("probe:").count(), 4);
}

#[test]
fn risk_sweep_outputs_are_deterministic_and_well_formed() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    let cfg = preset("fig2c.cfg");
    assert_eq!(run_cfg("risk-sweep", &cfg, &a, &["--n", "4000", "--threads", "1"]).status.code(), Some(0));
    assert_eq!(run_cfg("risk-sweep", &cfg, &b, &["--n", "4000", "--threads", "3"]).status.code(), Some(0));
    let csv_a = fs::read(a.join("fig2c_risk.csv")).unwrap();
    assert_eq!(csv_a, fs::read(b.join("fig2c_risk.csv")).unwrap());
    assert_eq!(String::from_utf8(csv_a).unwrap().lines().count(), 1 + 21 * 5);

    let svg = fs::read_to_string(a.join("fig2c_risk.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).expect("well-formed SVG");
    assert_eq!(doc.root_element().attribute("viewBox"), Some("0 0 800 600"));
    let polylines = doc.descendants().filter(|n| n.has_tag_name("polyline")).count();
    assert_eq!(polylines, 5);
    let legend = doc
        .descendants()
        .find(|n| n.attribute("class") == Some("legend"))
        .expect("legend group");
    let labels: Vec<&str> = legend.descendants().filter_map(|n| n.text()).collect();
    for tok in ["mix:1", "mix:0.75", "mix:0.5", "mix:0", "rmle"] {
        assert!(labels.contains(&tok), "{tok} missing from {labels:?}");
    }
}

#[test]
fn figure_one_preset_uses_pooled_mix() {
    let d = tempfile::tempdir().unwrap();
    let o = run_cfg("risk-sweep", &preset("fig1a.cfg"), d.path(), &["--n", "2000"]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(d.path().join("fig1a_risk.csv")).unwrap();
    let mix = 0.25 / (0.04 + 0.25);
    let tok = text.lines().nth(2).unwrap().split(',').nth(2).unwrap();
    let a: f64 = tok.strip_prefix("mix:").unwrap().parse().unwrap();
    assert!((a - mix).abs() < 1e-12);
    assert!(d.path().join("fig1a_risk.svg").exists());
}

#[test]
fn every_preset_validates() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("presets");
    let mut names: Vec<String> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    let expected: Vec<String> = (1..=3)
        .flat_map(|f| "abcdef".chars().map(move |c| format!("fig{f}{c}.cfg")))
        .collect();
    assert_eq!(names, expected);
    for n in &names {
        let raw = ire_cli::RawConfig::load(&dir.join(n)).unwrap();
        let cfg = ire_cli::ExperimentConfig::from_raw(&raw, ire_cli::Command::RiskSweep, &Default::default()).unwrap();
        assert_eq!(cfg.n, 50_000);
        assert_eq!(cfg.lambdas.len(), 21);
    }
}
