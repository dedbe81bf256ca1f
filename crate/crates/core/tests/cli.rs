//! End-to-end checks of the command-line front end: golden reports, exit
//! codes, and agreement with direct library calls.

use std::path::{Path, PathBuf};

use superquant::cli::{self, Command, JobConfig, Overrides};
use superquant::cones;
use superquant::kahler::NewtonParams;
use superquant::linalg::qvec;
use superquant::possys::Context;
use superquant::quantize;
use superquant::realform::RealForm;
use superquant::rootdata::{build_root_system, AlgebraSpec};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["superquant"];
    full.extend_from_slice(args);
    let code = cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_config(command: &str, config: &str, extra: &[&str]) -> (i32, String, String) {
    let path = data(config);
    let mut args = vec![command, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

/// Compares against `tests/golden/<name>`; set `UPDATE_GOLDEN=1` to rewrite.
fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "report differs from {}", path.display());
}

#[test]
fn golden_reports() {
    let cases: &[(&str, &str, &[&str], &str)] = &[
        ("roots", "a10.conf", &[], "roots_a10.tsv"),
        ("rho", "su211.conf", &[], "rho_su211.tsv"),
        ("cone", "su211.conf", &[], "cone_su211.tsv"),
        ("cells", "su211.conf", &[], "cells_su211.tsv"),
        ("classify", "su211.conf", &[], "classify_su211.tsv"),
        ("classify", "su211_custom.conf", &[], "classify_su211_custom.tsv"),
        ("spectrum", "su111.conf", &[], "spectrum_su111.tsv"),
        ("spectrum", "su211.conf", &[], "spectrum_su211.tsv"),
        ("model", "su211.conf", &[], "model_su211.tsv"),
        ("reduce", "su211.conf", &[], "reduce_su211.tsv"),
        ("qr", "su211.conf", &[], "qr_su211.tsv"),
        ("unitary", "b22.conf", &[], "unitary_b22.tsv"),
        ("unitary", "g3.conf", &[], "unitary_g3.tsv"),
        ("atlas", "su111.conf", &["--box", "2"], "atlas_su111.tsv"),
    ];
    for (cmd, cfg, extra, gold) in cases {
        let (code, out, err) = run_config(cmd, cfg, extra);
        assert_eq!(code, 0, "{cmd} {cfg}: {err}");
        golden(gold, &out);
    }
}

#[test]
fn reports_are_deterministic() {
    for cmd in ["cells", "spectrum", "model", "qr"] {
        let a = run_config(cmd, "su211.conf", &[]);
        let b = run_config(cmd, "su211.conf", &[]);
        assert_eq!(a, b);
    }
}

#[test]
fn roots_on_a10_lists_six_roots() {
    let (_, out, _) = run_config("roots", "a10.conf", &[]);
    let rows = out.lines().filter(|l| l.ends_with("\teven\t2") || l.contains("\todd\t")).count();
    assert_eq!(rows, 6);
}

#[test]
fn cells_on_su211_has_two_rows() {
    let (_, out, _) = run_config("cells", "su211.conf", &[]);
    let rows: Vec<&str> = out.lines().filter(|l| l.starts_with("R=")).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("R={}\t"));
    assert!(rows[1].starts_with("R={a1}\t"));
}

#[test]
fn exit_codes() {
    let (code, _, err) = run_config("qr", "bad_lattice.conf", &[]);
    assert_eq!(code, 2);
    assert!(err.contains("λ̂ not in the integral lattice"), "{err}");

    let (code, _, err) = run_config("roots", "bad_syntax.conf", &[]);
    assert_eq!(code, 2);
    assert!(err.contains("config line 3"), "{err}");

    let (code, _, err) = run_config("unitary", "f4.conf", &[]);
    assert_eq!(code, 1, "{err}");

    let (code, _, _) = run(&["roots", "--config", "/nonexistent/job.conf"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["frobnicate", "--config", "x"]);
    assert_eq!(code, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("--slice"));

    // λ̂ given in a non-canonical representative is accepted.
    let (code, _, err) = run_config("reduce", "su211.conf", &[]);
    assert_eq!(code, 0, "{err}");
}

#[test]
fn out_dir_receives_report_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = run_config("atlas", "su111.conf", &["--box", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let tsv = std::fs::read_to_string(dir.path().join("atlas.tsv")).unwrap();
    assert_eq!(tsv, out);
    let svg = std::fs::read_to_string(dir.path().join("atlas.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<circle").count(), 25);
    golden("atlas_su111.svg", &svg);
}

#[test]
fn slice_override_and_rank_check() {
    let (code, out, err) = run_config("atlas", "su111.conf", &["--box", "1", "--slice", "1,1,0; -1,0,0; -2,0,0"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("slice (1, 1, 0);(-1, 0, 0);(-2, 0, 0)"));
    let (code, _, err) = run_config("atlas", "su211.conf", &[]);
    assert_eq!(code, 2, "rank 3 needs an explicit slice: {err}");
    let (code, _, _) = run_config("atlas", "su111.conf", &["--slice", "1,0; 0,1; 0,0"]);
    assert_eq!(code, 2);
}

fn su211() -> Context {
    let spec = AlgebraSpec::a(2, 0);
    let rs = build_root_system(&spec).unwrap();
    let rf = RealForm::parse(&spec, "su(2,1|1)").unwrap();
    Context::new(rs, rf, &qvec(&[4, 3, 2, 1])).unwrap()
}

#[test]
fn cli_matches_library_calls() {
    let text = std::fs::read_to_string(data("su211.conf")).unwrap();
    let cfg = JobConfig::parse(&text).unwrap();
    let ovr = Overrides::default();
    let ctx = su211();
    let cell = cones::cell_for_mask(&ctx, 1);
    let model = quantize::model_potential(&cell, None).unwrap();
    let params = NewtonParams::default();

    let spec = cli::execute(Command::Spectrum, &cfg, &ovr).unwrap();
    let direct = quantize::spectrum(&ctx, &cell, &model.potential, 6, &params).unwrap();
    assert_eq!(spec.report, direct.to_tsv());

    let lam = qvec(&[1, 1, 4, -6]);
    let red = cli::execute(Command::Reduce, &cfg, &ovr).unwrap();
    assert_eq!(red.report, quantize::reduce(&ctx, &cell, &model.potential, &lam, &params).unwrap().to_tsv());

    let qr = cli::execute(Command::Qr, &cfg, &ovr).unwrap();
    assert_eq!(qr.report, quantize::check_qr(&ctx, &cell, &model.potential, &lam, 6, &params).unwrap().to_tsv());

    let cells = cli::execute(Command::Cells, &cfg, &ovr).unwrap();
    for c in cones::cells(&ctx) {
        let rays = cones::extreme_rays(&c).unwrap();
        let needle = format!("{}\t", c.label());
        let row = cells.report.lines().find(|l| l.starts_with(&needle)).unwrap();
        assert!(row.contains(&format!("\t{}\t", c.dim())));
        for r in rays {
            assert!(row.contains(&superquant::linalg::VecDisplay(&r).to_string()));
        }
    }

    let boxed = cli::execute(Command::Spectrum, &cfg, &Overrides { box_n: Some(2), ..Default::default() }).unwrap();
    assert_eq!(boxed.report, quantize::spectrum(&ctx, &cell, &model.potential, 2, &params).unwrap().to_tsv());
}
