//! End-to-end behavior of the `weingarten` binary: flag parsing, exit
//! codes, output formats, and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weingarten"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

/// Parsed CSV body (header checked separately).
fn csv_rows(text: &str, header: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header), "csv header");
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn curvature_plane_grid() {
    let o = run(&["curvature", "--family", "plane", "--grid", "0:1:2,0:1:2"]);
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));
    let rows = csv_rows(&stdout(&o), "x,y,H,K,W,valid");
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r[2].parse::<f64>().unwrap(), 0.0);
        assert_eq!(r[3].parse::<f64>().unwrap(), 0.0);
        assert_eq!(r[4].parse::<f64>().unwrap(), 1.0);
        assert_eq!(r[5], "true");
    }
}

#[test]
fn curvature_scherk_is_minimal_on_the_grid() {
    let o = run(&["curvature", "--family", "scherk", "--lambda", "1", "--grid", "-1:1:5,-1:1:5"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o), "x,y,H,K,W,valid");
    assert_eq!(rows.len(), 25);
    for r in &rows {
        assert!(r[2].parse::<f64>().unwrap().abs() < 1e-10, "H = {}", r[2]);
        assert_eq!(r[5], "true");
    }
}

#[test]
fn curvature_inline_expressions_match_the_library() {
    let o = run(&[
        "curvature",
        "--f",
        "t^3",
        "--g",
        "cos(t)",
        "--ambient",
        "euclidean",
        "--grid",
        "-1:1:4,-1:1:4",
    ]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&stdout(&o), "x,y,H,K,W,valid");

    use weingarten_core::{Ambient, GridSpec, Profile, TranslationSurface};
    let surface = TranslationSurface {
        f: Profile::from_source("t^3").unwrap(),
        g: Profile::from_source("cos(t)").unwrap(),
        ambient: Ambient::Euclidean,
        domain_f: (-1.0, 1.0),
        domain_g: (-1.0, 1.0),
    };
    let grid = GridSpec {
        x_start: -1.0,
        x_stop: 1.0,
        x_count: 4,
        y_start: -1.0,
        y_stop: 1.0,
        y_count: 4,
    };
    let samples = surface.sample_grid(&grid).unwrap();
    assert_eq!(rows.len(), samples.len());
    for (r, s) in rows.iter().zip(&samples) {
        assert_eq!(r[0].parse::<f64>().unwrap(), s.x);
        assert_eq!(r[1].parse::<f64>().unwrap(), s.y);
        assert_eq!(r[2].parse::<f64>().unwrap(), s.h);
        assert_eq!(r[3].parse::<f64>().unwrap(), s.k);
        assert_eq!(r[4].parse::<f64>().unwrap(), s.w);
    }
}

#[test]
fn spec_errors_exit_2_with_a_message() {
    let cases: [&[&str]; 7] = [
        &["curvature", "--f", "t^", "--g", "0", "--grid", "0:1:2,0:1:2"],
        &["curvature", "--family", "torus", "--grid", "0:1:2,0:1:2"],
        &["curvature", "--family", "plane", "--grid", "0:1:2"],
        &["curvature", "--family", "plane", "--grid", "1:0:2,0:1:2"],
        &["curvature", "--surface", "/nonexistent/s.json", "--grid", "0:1:2,0:1:2"],
        &["curvature", "--family", "plane", "--grid", "-20:20:5,0:1:5"],
        &["generate", "scherk", "--lambda", "0"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(code(&o), 2, "args {args:?}: stderr {}", stderr(&o));
        assert!(!stderr(&o).is_empty(), "args {args:?} left stderr empty");
        assert!(stdout(&o).is_empty() || args[0] != "curvature");
    }
}

#[test]
fn bad_surface_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(&path, "{\"ambient\": \"euclidean\"").unwrap();
    let o = run(&["curvature", "--surface", path.to_str().unwrap(), "--grid", "0:1:2,0:1:2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bad surface JSON"));
}

#[test]
fn no_valid_samples_exits_3() {
    // Spacelike W = 1 - g'^2 <= 0 everywhere on this band.
    let o = run(&[
        "curvature",
        "--f",
        "0",
        "--g",
        "t^2",
        "--ambient",
        "lorentz-spacelike",
        "--grid",
        "-1:1:3,1.1:2:4",
    ]);
    assert_eq!(code(&o), 3, "stderr: {}", stderr(&o));
}

#[test]
fn fit_verdict_table() {
    let fit = |args: &[&str]| {
        let o = run(args);
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("fit JSON");
        (code(&o), v)
    };

    let (c, v) = fit(&["fit", "--family", "plane", "--grid", "0:1:3,0:1:3"]);
    assert_eq!((c, v["verdict"].as_str().unwrap()), (0, "Degenerate"));

    let (c, v) = fit(&["fit", "--family", "cylinder", "--grid", "-2:2:9,-2:2:9"]);
    assert_eq!((c, v["verdict"].as_str().unwrap()), (0, "ConstantGaussCurvature"));
    assert!(v["rms_residual"].as_f64().unwrap() < 1e-12);

    let (c, v) = fit(&["fit", "--family", "scherk", "--lambda", "1", "--grid", "-1:1:9,-1:1:9"]);
    assert_eq!((c, v["verdict"].as_str().unwrap()), (0, "ConstantMeanCurvature"));
    assert!(v["rms_residual"].as_f64().unwrap() < 1e-10);

    let (c, v) = fit(&["fit", "--family", "paraboloid", "--grid", "-2:2:9,-2:2:9"]);
    assert_eq!((c, v["verdict"].as_str().unwrap()), (0, "NotLinearWeingarten"));
    assert!(v["rms_residual"].as_f64().unwrap() > 0.01);
}

#[test]
fn fit_report_shape() {
    let o = run(&["fit", "--family", "scherk", "--grid", "-1:1:5,-1:1:5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in
        ["a", "b", "c", "rms_residual", "max_residual", "rank", "verdict", "samples_used", "samples_invalid"]
    {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["samples_used"].as_u64().unwrap(), 25);
}

#[test]
fn verify_all_suites_pass() {
    let o = run(&["verify", "--suite", "all", "--seed", "42"]);
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let suites = v.as_array().unwrap();
    assert_eq!(suites.len(), 4);
    let labels: Vec<&str> = suites.iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert_eq!(labels, ["c0", "c1", "lorentzian", "lorentzian"]);
    for s in suites {
        for step in s["steps"].as_array().unwrap() {
            assert_eq!(step["status"], "pass", "step {}", step["name"]);
        }
    }
    // The inhomogeneous suite records the recovered cofactor.
    assert_eq!(suites[1]["cofactor"], "-2*a*b*(1+f1^2)*(1+g1^2)");
}

#[test]
fn verify_is_byte_deterministic() {
    let a = run(&["verify", "--suite", "c0", "--seed", "7"]);
    let b = run(&["verify", "--suite", "c0", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn verify_mutation_hook_fails_its_step() {
    let o = run(&["verify", "--suite", "c1", "--inject-mutation", "flip-phi-term-sign"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let steps = v[0]["steps"].as_array().unwrap();
    let failed: Vec<&str> = steps
        .iter()
        .filter(|s| s["status"] == "fail")
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["divide-by-second-factor"]);
}

#[test]
fn verify_rejects_unknown_names() {
    assert_eq!(code(&run(&["verify", "--suite", "c9"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "c0", "--inject-mutation", "nope"])), 2);
}

#[test]
fn mesh_plane_unit_cell() {
    let o = run(&["mesh", "--family", "plane", "--grid", "0:1:2,0:1:2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
    let faces: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
    assert_eq!(faces, ["f 1 3 4 2"]);
}

#[test]
fn mesh_scherk_full_grid() {
    let o = run(&[
        "mesh", "--family", "scherk", "--lambda", "1", "--grid", "-1.5:1.5:11,-1.5:1.5:11",
    ]);
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 121);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 100);
}

#[test]
fn mesh_clips_to_the_valid_region() {
    // Valid only where |2y| < 1: three interior y columns of the nine.
    let o = run(&[
        "mesh",
        "--f",
        "0",
        "--g",
        "t^2",
        "--ambient",
        "lorentz-spacelike",
        "--grid",
        "-1:1:5,-1:1:9",
    ]);
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 15);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 8);
    // 1-based indices stay within the emitted vertex count.
    for line in text.lines().filter(|l| l.starts_with("f ")) {
        for ix in line[2..].split(' ') {
            let ix: usize = ix.parse().unwrap();
            assert!((1..=15).contains(&ix));
        }
    }
}

#[test]
fn mesh_without_valid_cells_exits_3() {
    let o = run(&[
        "mesh",
        "--f",
        "0",
        "--g",
        "t^2",
        "--ambient",
        "lorentz-spacelike",
        "--grid",
        "-1:1:3,0.9:2:4",
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn generate_plane_emits_zero_profiles() {
    let o = run(&["generate", "plane"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["f"], "0");
    assert_eq!(v["g"], "0");
    assert_eq!(v["ambient"], "euclidean");
}

#[test]
fn generate_cylinder_carries_the_profile() {
    let o = run(&["generate", "cylinder", "--profile", "sin(t)"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["f"], "sin(t)");
    assert_eq!(v["g"], "0");
}

#[test]
fn generate_scherk_check_reports_tiny_deviation() {
    let o = run(&["generate", "scherk", "--lambda", "1", "--check"]);
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));
    let err = stderr(&o);
    assert!(err.contains("max deviation from closed form"), "stderr: {err}");
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["f"]["family"], "scherk");
}

#[test]
fn generate_check_outside_scherk_exits_2() {
    let o = run(&["generate", "plane", "--check"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn generate_profile_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let o = run(&[
        "generate",
        "scherk",
        "--lambda",
        "2",
        "--profile-out",
        path.to_str().unwrap(),
        "--step",
        "0.01",
    ]);
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let rows = csv_rows(&text, "x,f,fp");
    // mu = 4, span [0, 0.125] at step 0.01 with a clamped final step.
    assert_eq!(rows.len(), 14);
    assert_eq!(rows[0], ["0.0000000000000000e0", "0.0000000000000000e0", "0.0000000000000000e0"]);
    let last = rows.last().unwrap();
    assert_eq!(last[0].parse::<f64>().unwrap(), 0.125);
}

#[test]
fn generated_surface_round_trips_through_curvature() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scherk.json");
    let o = run(&["generate", "scherk", "--lambda", "1.5", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = run(&[
        "curvature",
        "--surface",
        path.to_str().unwrap(),
        "--grid",
        "-0.5:0.5:5,-0.5:0.5:5",
    ]);
    assert_eq!(code(&o), 0, "stderr: {}", stderr(&o));
    for r in csv_rows(&stdout(&o), "x,y,H,K,W,valid") {
        assert!(r[2].parse::<f64>().unwrap().abs() < 1e-10);
    }
}

#[test]
fn file_output_matches_stdout_and_leaves_no_temp() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let args_file = [
        "curvature", "--family", "paraboloid", "--grid", "-1:1:4,-1:1:4", "--out",
    ];
    let o_file = run(&[&args_file[..], &[path.to_str().unwrap()]].concat());
    assert_eq!(code(&o_file), 0);
    assert!(o_file.stdout.is_empty());
    let o_stdout = run(&["curvature", "--family", "paraboloid", "--grid", "-1:1:4,-1:1:4"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&o_stdout));
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| Path::new(n).extension().is_some_and(|e| e == "tmp"))
        .collect();
    assert!(leftovers.is_empty(), "{leftovers:?}");
}

#[test]
fn failed_write_leaves_no_partial_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing-dir").join("out.csv");
    let o = run(&[
        "curvature",
        "--family",
        "plane",
        "--grid",
        "0:1:2,0:1:2",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(!target.exists());
}
