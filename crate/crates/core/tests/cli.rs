use std::path::Path;
use std::process::{Command, Output};

use harmonic_shear::verify::Report;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmonic-shear")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn coeffs_table() {
    let o = run(&["coeffs", "--fn", "harmonic_koebe", "--order", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "2\t2.5\t0.5"), "{text}");
    assert_eq!(text.lines().count(), 12);
}

#[test]
fn shear_subcommand_matches_catalog() {
    let a = run(&["shear", "--phi", "[0,1]/[1,-2,1]", "--omega", "[0,0,1]", "--order", "12"]);
    let b = run(&["coeffs", "--fn", "f4", "--order", "12"]);
    assert_eq!(a.status.code(), Some(0));
    let rows = |o: &Output| stdout(o).lines().map(String::from).collect::<Vec<_>>();
    assert_eq!(rows(&a), rows(&b));
}

#[test]
fn verify_bounds_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["verify", "bounds", "--fn", "f4", "--class", "SH0S", "--order", "30", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report.passed);
    assert_eq!(report.schema, 1);
    assert_eq!(report.check_name, "coeff_bounds_SH0S");
}

#[test]
fn failing_check_exits_1_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&["verify", "bounds", "--fn", "harmonic_koebe", "--class", "CHC", "--order", "20", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap().passed);
}

#[test]
fn grid_checks_pass_for_koebe() {
    for check in ["growth", "jacobian", "derivative", "local"] {
        let o = run(&["verify", check, "--fn", "harmonic_koebe", "--radii", "8", "--angles", "32"]);
        assert_eq!(o.status.code(), Some(0), "{check}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = run(&["verify", "curvature", "--fn", "harmonic_koebe", "--circle-radii", "0.05,rho,0.3", "--angles", "128"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn theta_search_koebe_prints_pi_cell() {
    let o = run(&["theta-search", "--fn", "harmonic_koebe", "--grid", "360"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows, vec!["180\tpi\t180"]);
}

#[test]
fn stability_and_radius() {
    let o = run(&["stability", "--fn", "f_a_lambda(a=1+sqrt(2),lambda=1)", "--mode", "convex", "--lambdas", "8", "--order", "120"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["radius", "--fn", "f1(n=2)", "--order", "8", "--angles", "128"]);
    assert_eq!(o.status.code(), Some(0));
    let r: f64 = stdout(&o).trim().parse().unwrap();
    assert!(r > 0.0 && r <= 0.999);
}

#[test]
fn render_is_byte_identical_and_jobs_independent() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let o1 = run(&["render", "--fn", "half_plane_f3", "--out", &s(&a), "--jobs", "1"]);
    let o2 = run(&["render", "--fn", "half_plane_f3", "--out", &s(&b), "--jobs", "3"]);
    assert_eq!((o1.status.code(), o2.status.code()), (Some(0), Some(0)));
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(x, y);
    assert_eq!(String::from_utf8(x).unwrap().matches("<polyline").count(), 24);

    let slice = run(&["render", "--fn", "harmonic_koebe", "--slice", "-1", "--rays", "4", "--circles", "2"]);
    assert_eq!(slice.status.code(), Some(0));
    assert_eq!(stdout(&slice).matches("<polyline").count(), 6);
}

#[test]
fn config_file_defaults_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"order": 5, "tolerances": {"coefficient": 1e-9}}"#).unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "coeffs", "--fn", "f4"]);
    assert_eq!(stdout(&o).lines().count(), 7);
    let o = run(&["--config", cfg.to_str().unwrap(), "coeffs", "--fn", "f4", "--order", "3"]);
    assert_eq!(stdout(&o).lines().count(), 5);
    std::fs::write(&cfg, r#"{"nonsense": 1}"#).unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "catalog"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nonsense", "--fn", "f4"]).status.code(), Some(2));
    let o = run(&["coeffs", "--fn", "f2(alpha=0.9,n=2)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));
    assert_eq!(run(&["verify", "growth", "--fn", "f4", "--r-max", "1.5"]).status.code(), Some(2));
}

#[test]
fn catalog_lists_members() {
    let o = run(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["harmonic_koebe", "half_plane_f3", "f4", "f1(n)", "f2(alpha, n)", "f_a_lambda", "F_a_lambda", "koebe_slice"] {
        assert!(text.contains(name), "missing {name}");
    }
}
