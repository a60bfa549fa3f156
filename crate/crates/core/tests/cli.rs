#[path = "common/scene.rs"]
mod scene;

use std::path::Path;
use std::process::{Command, Output};

use gripkit::perception::RegionOfInterest;
use nalgebra::Point3;

fn gripkit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gripkit"))
        .args(args)
        .current_dir(dir)
        .env_remove("GRIPKIT_CONFIG")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn fk_single_and_range() {
    let dir = tempfile::tempdir().unwrap();
    let one = gripkit(dir.path(), &["fk", "--theta", "-0.8"]);
    assert_eq!(code(&one), 0);
    let text = stdout(&one);
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("theta,y_b,delta,b,alpha,x_left,x_right,y_tip\n-0.8,"));

    let range = gripkit(dir.path(), &["fk", "--from", "-0.8", "--to", "-1.4", "--step", "0.015"]);
    assert_eq!(code(&range), 0);
    assert_eq!(stdout(&range).lines().count(), 42);
}

#[test]
fn fk_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&gripkit(dir.path(), &["fk", "--theta", "-3.2", "--strict"])), 3);
    assert_eq!(code(&gripkit(dir.path(), &["fk", "--theta", "-1.6"])), 0);
    assert_eq!(code(&gripkit(dir.path(), &["fk"])), 2);
    assert_eq!(code(&gripkit(dir.path(), &["--config", "nope.json", "fk", "--theta", "-1"])), 2);
    std::fs::write(dir.path().join("bad.json"), r#"{"perturbation": {"x_bias": 50}}"#).unwrap();
    assert_eq!(code(&gripkit(dir.path(), &["--config", "bad.json", "fk", "--theta", "-1"])), 2);
}

#[test]
fn estimate_and_plan_a_bottle() {
    let dir = tempfile::tempdir().unwrap();
    scene::write_scene(dir.path(), "bottle", scene::bottle(), None);
    let est = gripkit(dir.path(), &["estimate", "bottle.json"]);
    assert_eq!(code(&est), 0, "{}", String::from_utf8_lossy(&est.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&est)).unwrap();
    let d = json["estimate"]["extents"][0].as_f64().unwrap();
    assert!((d - 0.08).abs() / 0.08 <= 0.02);
    assert_eq!(json["decision"]["approach"], "horizontal");
    std::fs::write(dir.path().join("est.json"), stdout(&est)).unwrap();

    let plan = gripkit(dir.path(), &["plan", "est.json", "--mass", "0.1"]);
    assert_eq!(code(&plan), 0, "{}", String::from_utf8_lossy(&plan.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&plan)).unwrap();
    assert_eq!(json["plan"]["kind"], "envelope");
    assert_eq!(json["validation"]["passed"], true);

    let heavy = gripkit(dir.path(), &["plan", "est.json", "--mass", "0.5", "--unhinged"]);
    assert_eq!(code(&heavy), 5);
}

#[test]
fn coin_is_pinched_from_above() {
    let dir = tempfile::tempdir().unwrap();
    scene::write_scene(dir.path(), "coin", scene::coin(), None);
    let est = gripkit(dir.path(), &["estimate", "coin.json"]);
    assert_eq!(code(&est), 0);
    std::fs::write(dir.path().join("est.json"), stdout(&est)).unwrap();
    let plan = gripkit(dir.path(), &["plan", "est.json", "--mass", "0.01"]);
    assert_eq!(code(&plan), 0, "{}", String::from_utf8_lossy(&plan.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&plan)).unwrap();
    assert_eq!(json["plan"]["kind"], "pinch");
    assert_eq!(json["plan"]["approach"], "vertical");
}

#[test]
fn oversized_object_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    scene::write_scene(dir.path(), "bucket", scene::bucket(), None);
    let est = gripkit(dir.path(), &["estimate", "bucket.json"]);
    assert_eq!(code(&est), 5);
    std::fs::write(dir.path().join("est.json"), stdout(&est)).unwrap();
    assert_eq!(code(&gripkit(dir.path(), &["plan", "est.json", "--mass", "0.1"])), 5);
}

#[test]
fn empty_roi_and_broken_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let roi = RegionOfInterest::new(Point3::new(3.0, 3.0, 3.0), Point3::new(4.0, 4.0, 4.0)).unwrap();
    scene::write_scene(dir.path(), "away", scene::bottle(), Some(roi));
    assert_eq!(code(&gripkit(dir.path(), &["estimate", "away.json"])), 4);
    std::fs::write(dir.path().join("broken.json"), "{\"views\": [").unwrap();
    assert_eq!(code(&gripkit(dir.path(), &["estimate", "broken.json"])), 2);
    std::fs::write(dir.path().join("garbage.xyz"), "1 2 x\n").unwrap();
    let m = r#"{"views": [{"cloud": "garbage.xyz", "transform": [1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]}]}"#;
    std::fs::write(dir.path().join("garbage.json"), m).unwrap();
    let out = gripkit(dir.path(), &["estimate", "garbage.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn slide_reports_closure_and_contact() {
    let dir = tempfile::tempdir().unwrap();
    let out = gripkit(dir.path(), &["--out", "run", "simulate-slide", "--require-contact"]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("run/slide_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["closure_theta"], -1.9);
    assert_eq!(summary["no_contact"], false);

    std::fs::write(dir.path().join("far.json"), r#"{"slide": {"surface_y": 400.0}}"#).unwrap();
    let far = gripkit(dir.path(), &["--config", "far.json", "simulate-slide"]);
    assert_eq!(code(&far), 0);
    let strict = gripkit(dir.path(), &["--config", "far.json", "simulate-slide", "--require-contact"]);
    assert_eq!(code(&strict), 6);
}

#[test]
fn config_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.json"), r#"{"perturbation": {"x_bias": 5.0}}"#).unwrap();
    let run = |env: bool| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_gripkit"));
        cmd.args(["simulate-free"]).current_dir(dir.path()).env_remove("GRIPKIT_CONFIG");
        if env {
            cmd.env("GRIPKIT_CONFIG", "c.json");
        }
        String::from_utf8(cmd.output().unwrap().stdout).unwrap()
    };
    let plain = run(false);
    let biased = run(true);
    let x = |csv: &str| csv.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse::<f64>().unwrap();
    assert!((x(&biased) - x(&plain) - 5.0).abs() < 1e-9);
}

#[test]
fn run_directory_has_a_provenance_manifest() {
    let dir = tempfile::tempdir().unwrap();
    scene::write_scene(dir.path(), "bottle", scene::bottle(), None);
    assert_eq!(code(&gripkit(dir.path(), &["--out", "r", "estimate", "bottle.json"])), 0);
    let run: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("r/run.json")).unwrap()).unwrap();
    assert_eq!(run["command"], "estimate");
    assert_eq!(run["inputs"].as_array().unwrap().len(), 3);
    assert_eq!(run["outputs"][0]["path"], "estimate.json");
    let bytes = std::fs::read(dir.path().join("r/estimate.json")).unwrap();
    assert_eq!(run["outputs"][0]["sha256"], gripkit::app::sha256_hex(&bytes));
}
