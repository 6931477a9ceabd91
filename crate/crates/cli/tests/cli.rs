//! End-to-end tests of the `logmink` binary: determinism of seeded runs,
//! JSON round trips, and the exit-code contract (0 success, 2 invalid
//! input, 3 violation in a proven regime).

use std::path::PathBuf;
use std::process::{Command, Output};

use logmink::io::body_from_str;
use logmink::ConvexBody;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_logmink"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn workdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("logmink-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_file(name: &str, content: &str) -> PathBuf {
    let path = workdir().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn cube_json() -> &'static str {
    r#"{"schema":1,"dim":3,"vertices":[[1,1,1],[1,1,-1],[1,-1,1],[1,-1,-1],[-1,1,1],[-1,1,-1],[-1,-1,1],[-1,-1,-1]]}"#
}

fn box511_json() -> &'static str {
    r#"{"schema":1,"dim":3,"vertices":[[5,1,1],[5,1,-1],[5,-1,1],[5,-1,-1],[-5,1,1],[-5,1,-1],[-5,-1,1],[-5,-1,-1]]}"#
}

#[test]
fn sweep_is_deterministic_for_a_fixed_seed() {
    let args = [
        "--seed", "7", "sweep", "--family", "boxes", "--count", "20",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "same seed, different bytes");

    let other = run(&[
        "--seed", "8", "sweep", "--family", "boxes", "--count", "20",
    ]);
    assert_ne!(first.stdout, other.stdout, "different seed, same bytes");
}

#[test]
fn seed_env_var_matches_flag() {
    let flag = run(&[
        "--seed", "99", "sweep", "--family", "planar-random", "--count", "5",
    ]);
    let env = bin()
        .env("LOGMINK_SEED", "99")
        .args(["sweep", "--family", "planar-random", "--count", "5"])
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn sweep_emits_csv_with_header_and_all_rows() {
    for family in ["planar-random", "cylinder3d-random", "boxes", "prisms"] {
        let out = run(&["sweep", "--family", family, "--count", "10", "--points", "8"]);
        assert!(out.status.success(), "family {family}");
        let text = stdout(&out);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "seed,vol_k,vol_l,lhs,rhs,gap,class");
        assert_eq!(lines.len(), 11, "family {family}: {} lines", lines.len());
    }
}

#[test]
fn body_round_trips_through_wulff_losslessly() {
    let input = write_file("cube.json", cube_json());
    let out = run(&["wulff", input.to_str().unwrap()]);
    assert!(out.status.success());
    let emitted = body_from_str(&stdout(&out)).unwrap();
    let original = body_from_str(cube_json()).unwrap();
    let d = emitted.hausdorff_distance(&original).unwrap();
    assert!(d < 1e-12, "round trip moved the body by {d:e}");

    // And once more through the emitted JSON.
    let second = write_file("cube2.json", &stdout(&out));
    let out2 = run(&["wulff", second.to_str().unwrap()]);
    assert_eq!(out.stdout, out2.stdout, "second round trip changed bytes");
}

#[test]
fn verify_reports_equality_for_relative_boxes() {
    let k = write_file("verify-k.json", cube_json());
    let l = write_file("verify-l.json", box511_json());
    let out = run(&["verify", k.to_str().unwrap(), l.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["class"], "relative_cylinders");
    assert!(v["gap"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn verify_exit_code_3_on_violation() {
    // A negative tolerance turns any sub-threshold gap into a reported
    // violation, exercising the exit path without needing a false theorem.
    let k = write_file("viol-k.json", cube_json());
    let l = write_file("viol-l.json", cube_json());
    let out = run(&[
        "verify", k.to_str().unwrap(), l.to_str().unwrap(), "--tol=-1.0",
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {:?}", out.stderr);
}

#[test]
fn invalid_inputs_exit_with_code_2() {
    // Missing file.
    let out = run(&["wulff", "/nonexistent/body.json"]);
    assert_eq!(out.status.code(), Some(2));
    // Malformed JSON.
    let bad = write_file("bad.json", "{not json");
    let out = run(&["wulff", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // Asymmetric vertex set.
    let asym = write_file(
        "asym.json",
        r#"{"schema":1,"dim":2,"vertices":[[1,0],[0,1],[-1,0]]}"#,
    );
    let out = run(&["measure", asym.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    let v: serde_json::Value = serde_json::from_str(err.lines().last().unwrap()).unwrap();
    assert_eq!(v["error"], "AsymmetricInput");
    // Bad transform matrix.
    let cube = write_file("tcube.json", cube_json());
    let out = run(&["transform", cube.to_str().unwrap(), "--matrix", "1,0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn measure_then_solve_recovers_the_octahedron() {
    let octa = ConvexBody::from_points(
        3,
        &[
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ],
    )
    .unwrap();
    let body_json = serde_json::to_string(&logmink::io::body_to_json(&octa)).unwrap();
    let body_path = write_file("octa.json", &body_json);

    let out = run(&["measure", body_path.to_str().unwrap(), "--kind", "cone-volume"]);
    assert!(out.status.success());
    let measure_path = write_file("octa-measure.json", &stdout(&out));

    let out = run(&["solve", "--measure", measure_path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["status"], "converged");
    assert!(v["stationarity_residual"].as_f64().unwrap() < 1e-6);
    let solved = body_from_str(&serde_json::to_string(&v["body"]).unwrap()).unwrap();
    let c = (octa.volume() / solved.volume()).powf(1.0 / 3.0);
    let d = solved.dilate(c).unwrap().hausdorff_distance(&octa).unwrap();
    assert!(d < 1e-5, "solved body off by {d:e}");
}

#[test]
fn detect_splits_the_cube_into_three_segments() {
    let cube = write_file("dcube.json", cube_json());
    let out = run(&["detect", cube.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["is_cylinder"], true);
    assert_eq!(v["factors"].as_array().unwrap().len(), 3);
}

#[test]
fn transform_dispatches_on_measure_or_body_payload() {
    let cube = write_file("xcube.json", cube_json());
    let rot = "0,-1,0,1,0,0,0,0,1";
    let out = run(&["transform", cube.to_str().unwrap(), "--matrix", rot]);
    assert!(out.status.success());
    let rotated = body_from_str(&stdout(&out)).unwrap();
    assert!((rotated.volume() - 8.0).abs() < 1e-9);

    let out = run(&["measure", cube.to_str().unwrap(), "--kind", "surface"]);
    let measure_path = write_file("xcube-surface.json", &stdout(&out));
    let out = run(&["transform", measure_path.to_str().unwrap(), "--matrix", rot]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // A rotation permutes the six facet atoms and keeps every weight 4.
    let atoms = v["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 6);
    for atom in atoms {
        assert!((atom["w"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    }
}

#[test]
fn combine_labels_the_equality_class() {
    let k = write_file("ck.json", cube_json());
    let l = write_file("cl.json", box511_json());
    let out = run(&["combine", k.to_str().unwrap(), l.to_str().unwrap(), "--lambda", "0.5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["equality_class"], "relative_cylinders");
    let combined = body_from_str(&stdout(&out)).unwrap();
    // Geometric mean of the half-side 1 and 5 boxes.
    let expect = ConvexBody::make_box(3, [5.0_f64.sqrt(), 1.0, 1.0]).unwrap();
    assert!(combined.hausdorff_distance(&expect).unwrap() < 1e-6);
}

#[test]
fn output_flag_writes_the_artifact_to_disk() {
    let cube = write_file("ocube.json", cube_json());
    let target = workdir().join("out.json");
    let out = run(&[
        "-o",
        target.to_str().unwrap(),
        "measure",
        cube.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["kind"], "cone-volume");
}
