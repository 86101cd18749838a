use std::path::PathBuf;
use std::process::{Command, Output};

fn pacs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pacs")).args(args).output().expect("run pacs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = scratch("repeat");
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    for out in [&a, &b] {
        let o = pacs(&["fig2", "--out", s(out), "--param", "count=40"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(dir.join("a_b.csv")).unwrap(), std::fs::read(dir.join("b_b.csv")).unwrap());
}

#[test]
fn two_panel_output_and_plot_script() {
    let dir = scratch("panels");
    let out = dir.join("fig5.csv");
    let o = pacs(&["fig5", "--out", s(&out), "--param", "count=10", "--emit-plot-script"]);
    assert_eq!(o.status.code(), Some(0));
    let q = std::fs::read_to_string(&out).unwrap();
    let g2 = std::fs::read_to_string(dir.join("fig5_b.csv")).unwrap();
    assert!(q.starts_with("abs_z,Q_m"), "{q}");
    assert!(g2.starts_with("abs_z,g2_m"), "{g2}");
    assert_eq!(q.lines().count(), 11);
    let script = std::fs::read_to_string(dir.join("fig5.gp")).unwrap();
    assert!(script.contains("'fig5.csv' using 1:2") && script.contains("'fig5_b.csv'"));
}

#[test]
fn config_file_then_params() {
    let dir = scratch("config");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# weight run\nfamily = d\nm = 1,2\nz_min = 0.5\nz_max = 2\ncount = 4\n").unwrap();
    let out = dir.join("w.csv");
    let o = pacs(&["weight", "--config", s(&cfg), "--param", "m=3", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("abs_z,w_m3\n"), "{csv}");
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn configuration_errors_exit_2() {
    let o = pacs(&["fig1", "--param", "gamma=-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gamma"));

    let dir = scratch("badcfg");
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "family = c\nbogus = 3\n").unwrap();
    let o = pacs(&["fig4", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn verify_passes_on_defaults() {
    let o = pacs(&["verify"]);
    let report = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{report}");
    assert!(report.lines().last().unwrap().ends_with("checks pass"));
    assert!(!report.contains("FAIL"));
}

#[test]
fn verify_fails_for_non_positive_measure() {
    let o = pacs(&["verify", "--param", "family=c", "--param", "rho=-0.5", "--param", "m=0"]);
    let report = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(1), "{report}");
    assert!(report.contains("FAIL weight positivity"));
}
