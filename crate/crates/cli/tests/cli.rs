use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use astrolabe_cli::Cli;
use clap::CommandFactory;

fn astrolabe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_astrolabe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn golden_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/plate_lat40_scale100.svg")
}

#[test]
fn plate_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("plate.svg");
    let o = astrolabe(&[
        "plate",
        "--lat",
        "40",
        "--scale-mm",
        "100",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
    assert!(svg.contains("id=\"almucantars\""));
}

#[test]
fn arctic_latitude_is_a_domain_error() {
    let o = astrolabe(&["plate", "--lat", "70", "--obliquity", "23.44"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("90 - obliquity"), "{}", stderr(&o));
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(
        astrolabe(&["plate", "--lat", "forty"]).status.code(),
        Some(1)
    );
    assert_eq!(
        astrolabe(&["plate", "--almucantar-step", "7"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(astrolabe(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn missing_catalog_is_io_error() {
    let o = astrolabe(&["rete", "--catalog", "/nonexistent/stars.csv"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn help_exits_zero() {
    assert_eq!(astrolabe(&["--help"]).status.code(), Some(0));
    assert_eq!(astrolabe(&["plate", "--help"]).status.code(), Some(0));
}

#[test]
fn qibla_reports_both_values() {
    let o = astrolabe(&["qibla", "--lat", "33.51", "--lon", "36.29"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let oracle: f64 = text
        .split("great-circle bearing ")
        .nth(1)
        .unwrap()
        .split(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((oracle - 164.6).abs() < 0.2, "{text}");
    assert!(text.contains("printed relation 15.29"), "{text}");
    assert!(text.contains("note:"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "lat = 40.0\nscale_mm = 100.0\n").unwrap();
    let a = astrolabe(&["plate", "--config", cfg.to_str().unwrap(), "--lat", "50"]);
    let b = astrolabe(&["plate", "--lat", "50", "--scale-mm", "100"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn misspelled_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "lattitude = 40.0\n").unwrap();
    let o = astrolabe(&["plate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("lattitude"));
}

#[test]
fn project_prints_coordinates() {
    let o = astrolabe(&["project", "--dec", "0", "--ha", "90", "--scale-mm", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("x = 100.000000 mm"), "{}", stdout(&o));
    let g = astrolabe(&["project", "--dec", "-10", "--ha", "0", "--kind", "gnomonic"]);
    assert_eq!(g.status.code(), Some(2));
}

#[test]
fn analyze_modes_run() {
    let o = astrolabe(&["analyze", "arc-displacement", "--ds", "0.3", "--dp", "0.4"]);
    assert!(stdout(&o).contains("dL = 0.500000"), "{}", stdout(&o));
    let o = astrolabe(&["analyze", "quadrant-chords", "--marks", "0,90,180,270"]);
    assert!(stdout(&o).contains("classification: ok"), "{}", stdout(&o));
    let o = astrolabe(&[
        "analyze",
        "band",
        "--diameter-mm",
        "150",
        "--lat",
        "22.6935",
        "--almucantar-step",
        "3",
        "--fraction",
        "0.02",
    ]);
    assert!(
        stdout(&o).contains("lands on band 3"),
        "{}{}",
        stdout(&o),
        stderr(&o)
    );
    let o = astrolabe(&[
        "analyze",
        "alidade",
        "--length",
        "200",
        "--offset",
        "0.01",
        "--rotation",
        "0.4",
        "--unit",
        "mm",
    ]);
    assert!(stdout(&o).contains("0.1000"), "{}", stdout(&o));
    assert!(
        astrolabe(&["analyze", "alidade", "--length", "200"])
            .status
            .code()
            == Some(1)
    );
}

#[test]
fn montecarlo_is_reproducible() {
    let args = [
        "analyze",
        "montecarlo",
        "--trials",
        "200",
        "--seed",
        "7",
        "--format",
        "csv",
    ];
    let a = astrolabe(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let b = astrolabe(&seq);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("stat,value"));
}

#[test]
fn full_document_has_three_panels() {
    let o = astrolabe(&["full", "--lat", "40"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = stdout(&o);
    for id in ["tropics", "ecliptic", "calendar"] {
        assert!(svg.contains(&format!("id=\"{id}\"")), "missing {id}");
    }
}

#[test]
fn every_flag_is_documented() {
    fn walk(cmd: &clap::Command, path: &str) {
        for arg in cmd.get_arguments() {
            let id = arg.get_id().as_str();
            if id == "help" || id == "version" {
                continue;
            }
            let help = arg.get_help().map(|h| h.to_string()).unwrap_or_default();
            assert!(!help.trim().is_empty(), "{path} --{id} has no help text");
        }
        for sub in cmd.get_subcommands() {
            assert!(
                sub.get_about().is_some(),
                "{path} {} has no description",
                sub.get_name()
            );
            walk(sub, &format!("{path} {}", sub.get_name()));
        }
    }
    walk(&Cli::command(), "astrolabe");
}

#[test]
fn golden_plate() {
    let o = astrolabe(&["plate", "--lat", "40", "--scale-mm", "100", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let path = golden_path();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &o.stdout).unwrap();
    }
    let golden =
        std::fs::read(&path).expect("golden file present; regenerate with UPDATE_GOLDEN=1");
    assert!(
        golden == o.stdout,
        "plate SVG differs from {}",
        path.display()
    );
}
