use std::path::Path;
use std::process::{Command, Output};

fn rlsnet(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rlsnet"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("RLSNET_OUT")
        .output()
        .unwrap()
}

fn seconds_per_step(dir: &Path) -> f64 {
    let text = std::fs::read_to_string(dir.join("timing.csv")).unwrap();
    let row = text.lines().nth(1).unwrap();
    row.split(',').nth(2).unwrap().parse().unwrap()
}

#[test]
fn run_succeeds_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = rlsnet(&["run", "circle_expansion", "--n", "32"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("eps1 ="));
    for name in ["metrics.csv", "summary.txt", "timing.csv", "interface_0.200000.csv", "field_0.200000.dat"] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["run", "circle_expansion", "--cfl", "5"][..],
        &["run", "no_such_scenario"],
        &["run", "foam"],
        &["run", "rotation", "--scheme", "weno9"],
    ] {
        let out = rlsnet(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn runtime_errors_exit_1() {
    // The exact solution leaves the domain long before t = 2.
    let dir = tempfile::tempdir().unwrap();
    let out = rlsnet(&["run", "triple_point", "--n", "32", "--end-time", "2"], dir.path());
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn metrics_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["run", "double_triple_point", "--n", "32", "--end-time", "0.1"];
    assert!(rlsnet(&args, a.path()).status.success());
    assert!(rlsnet(&args, b.path()).status.success());
    let read = |d: &Path| std::fs::read(d.join("metrics.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn study_prints_orders() {
    let dir = tempfile::tempdir().unwrap();
    let out = rlsnet(&["study", "circle_expansion", "--resolutions", "16,32,64", "--end-time", "0.05"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 4, "{text}");
    assert!(text.starts_with("n,eps1,epsinf,epsd,order_eps1"));
}

#[test]
fn weno5_cost_within_twice_semi_lagrangian() {
    let dir = tempfile::tempdir().unwrap();
    let mut best = [f64::INFINITY; 2];
    for _ in 0..2 {
        for (k, scheme) in ["weno5", "sl"].into_iter().enumerate() {
            let d = dir.path().join(scheme);
            let out = rlsnet(&["run", "single_vortex", "--n", "256", "--end-time", "0.05", "--scheme", scheme], &d);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
            best[k] = best[k].min(seconds_per_step(&d));
        }
    }
    assert!(best[0] <= 2.0 * best[1], "weno5 {:.3e} s/step, sl {:.3e} s/step", best[0], best[1]);
}

#[test]
fn study_needs_three_resolutions() {
    let dir = tempfile::tempdir().unwrap();
    let out = rlsnet(&["study", "circle_expansion", "--resolutions", "16,32"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
