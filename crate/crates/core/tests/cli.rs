use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn persep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_persep"))
        .args(args)
        .env_remove("PERSEP_SEED")
        .output()
        .unwrap()
}

fn run_on(args: &[&str], scene: &str) -> Output {
    let path = fixture(scene);
    let mut all: Vec<&str> = args.to_vec();
    all.push(path.to_str().unwrap());
    persep(&all)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn support_from_exterior_point() {
    let out = run_on(&["support"], "support_square_exterior.json");
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["status"], "supported");
    assert_eq!(doc["anchor"], serde_json::json!([2.0, 0.5]));
    assert!(doc["side_a_max"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn interior_point_is_a_negative_result() {
    let out = run_on(&["support"], "support_square_interior.json");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "p_in_interior");
}

#[test]
fn xor_scene_is_not_separable() {
    let out = run_on(&["separate", "--at-point"], "separate_xor.json");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "not_separable");
    let out = run_on(&["separate"], "separate_xor.json");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "not_found");
}

#[test]
fn mirror_scene_document() {
    let out = run_on(&["separate", "--at-point"], "separate_mirror.json");
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "{\n  \"status\": \"separated\",\n  \"normal\": [0.000000, -1.000000],\n  \"anchor\": [0.000000, 0.000000],\n  \"side_a_max\": -1.000000,\n  \"side_b_min\": 1.000000,\n  \"margin\": 2.000000\n}\n"
    );
}

#[test]
fn precision_flag() {
    let out = run_on(
        &["--precision", "2", "separate", "--at-point"],
        "separate_mirror.json",
    );
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("\"margin\": 2.00\n"));
}

#[test]
fn verify_agrees_on_fixtures() {
    for (args, scene, code) in [
        (vec!["--verify", "support"], "support_cube_3d.json", 0),
        (
            vec!["--verify", "support"],
            "support_square_interior.json",
            1,
        ),
        (
            vec!["--verify", "separate", "--at-point"],
            "separate_two_blobs.json",
            0,
        ),
        (
            vec!["--verify", "separate", "--at-point"],
            "separate_interleaved.json",
            1,
        ),
        (
            vec!["--verify", "separate", "--at-point"],
            "separate_clusters_3d.json",
            0,
        ),
        (
            vec!["--verify", "separate"],
            "separate_search_clusters.json",
            0,
        ),
    ] {
        let out = run_on(&args, scene);
        assert_eq!(out.status.code(), Some(code), "{scene}");
        assert_eq!(json(&out)["verified"], true, "{scene}");
    }
}

#[test]
fn point_inside_a_set() {
    let out = run_on(&["separate", "--at-point"], "separate_p_in_set.json");
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["status"], "degenerate_point");
}

#[test]
fn cone_reports_verdicts() {
    let out = run_on(&["cone"], "separate_nonconvex_union.json");
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["sets"][0]["verdict"], "not_convex");
    assert_eq!(doc["sets"][1]["verdict"], "convex");
}

#[test]
fn lemma_suite_passes() {
    let out = persep(&["check", "lemmas", "--trials", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let tallies: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(tallies.len(), 7);
    for line in tallies {
        assert!(line.ends_with(": 100/100"), "{line}");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_persep"))
        .args(["check", "lemmas", "--trials", "2"])
        .env("PERSEP_SEED", "99")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("seed 99\n"));
}

#[test]
fn plot_writes_svg() {
    let dir = std::env::temp_dir().join(format!("persep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("fig.svg");
    let out = run_on(
        &["plot", "--out", target.to_str().unwrap()],
        "separate_two_blobs.json",
    );
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&target).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<line").count(), 1);
    std::fs::remove_dir_all(&dir).unwrap();

    let out = run_on(&["plot", "--no-result"], "support_square_exterior.json");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout)
            .unwrap()
            .matches("<line")
            .count(),
        0
    );
}

#[test]
fn input_errors_exit_two() {
    let out = run_on(&["plot"], "support_cube_3d.json");
    assert_eq!(out.status.code(), Some(2));
    let out = persep(&["support", "/nonexistent/scene.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = persep(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_on(&["separate", "--at-point"], "separate_search_clusters.json");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("no point p"));

    let dir = std::env::temp_dir().join(format!("persep-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        "{\n  \"dim\": 2,\n  \"sets\": {\"C\": []},\n  \"extra\": 1\n}\n",
    )
    .unwrap();
    let out = persep(&["support", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 4"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn help_exits_zero() {
    let out = persep(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("separate"));
}
