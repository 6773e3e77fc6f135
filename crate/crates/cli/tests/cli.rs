use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planar-inv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn compute_circle_and_eight() {
    let o = run(&["compute", "--format", "text", path(&data("circle.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("F_hat = X[1,0;1,-1]\n"),
        "{}",
        stdout(&o)
    );

    let o = run(&["compute", "--format", "json", path(&data("eight.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["whitney"], 0);
    assert_eq!(v["crossing_sum"].as_array().unwrap().len(), 1);
    assert_eq!(v["per_crossing"].as_array().unwrap().len(), 1);
}

#[test]
fn compute_default_prints_json_then_text() {
    let out = stdout(&run(&["compute", path(&data("eight.json"))]));
    let (head, tail) = out.split_once("\nwhitney = ").unwrap();
    serde_json::from_str::<Value>(head).unwrap();
    assert!(tail.starts_with("0\n"));
}

#[test]
fn exit_codes() {
    let o = run(&["compute", path(&data("nongeneric.json"))]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(
        err.contains("not stable") && err.contains("DegenerateIntersection"),
        "{err}"
    );

    assert_eq!(
        run(&["compute", "/nonexistent/curve.json"]).status.code(),
        Some(1)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"points": [[0, 0], [1]]}"#).unwrap();
    assert_eq!(run(&["compute", path(&bad)]).status.code(), Some(1));

    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"unknown": 1}"#).unwrap();
    let o = run(&[
        "--config",
        path(&cfg),
        "compute",
        path(&data("circle.json")),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invariance_passes_for_base_curves() {
    for name in ["circle.json", "eight.json", "winding3.json"] {
        let o = run(&["check-invariance", "--trials", "100", path(&data(name))]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let text = stdout(&o);
        assert!(text.trim_end().ends_with("PASS"));
        let report: Value = serde_json::from_str(text.trim_end().trim_end_matches("PASS")).unwrap();
        assert_eq!(report["identical"], 100, "{name}");
    }
}

#[test]
fn oversized_perturbation_is_reported_not_failed() {
    let o = run(&[
        "check-invariance",
        "--trials",
        "20",
        "--amplitude",
        "0.5",
        path(&data("eight.json")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let report: Value = serde_json::from_str(text.trim_end().trim_end_matches("PASS")).unwrap();
    assert!(report["stability_lost"].as_u64().unwrap() > 0);
    assert_eq!(report["mismatches"].as_array().unwrap().len(), 0);
}

#[test]
fn tangency_move_on_circle() {
    let o = run(&[
        "move-test",
        path(&data("circle.json")),
        path(&data("j_site.json")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["symbol"]["type"], "J");
    assert_eq!(v["prediction_matches"], true);
    assert_eq!(v["whitney"], 1);
    assert_eq!(v["sum_minus"].as_array().unwrap().len(), 0);
}

#[test]
fn triple_point_realizations_agree() {
    let dir = tempfile::tempdir().unwrap();
    let mut seen = Vec::new();
    for width in ["null", "0.003", "0.002"] {
        let site = dir.path().join("site.json");
        std::fs::write(
            &site,
            format!(
                r#"{{"move": "s", "crossing": [0.0, 0.0], "direction": [1.0, 0.0], "side": 1, "half_width": {width}}}"#
            ),
        )
        .unwrap();
        let o = run(&["move-test", path(&data("eight.json")), path(&site)]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        let v = json(&o);
        seen.push((v["symbol"].clone(), v["delta"].clone()));
    }
    assert!(seen.windows(2).all(|w| w[0] == w[1]), "{seen:?}");
}

#[test]
fn bad_site_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let site = dir.path().join("site.json");
    std::fs::write(&site, r#"{"move": "j", "base": [1.0, 0.0], "side": -1}"#).unwrap();
    let o = run(&["move-test", path(&data("circle.json")), path(&site)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn algebra_windows() {
    let o = run(&[
        "algebra-verify",
        "--basis-depth",
        "50",
        path(&data("windows.json")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["model_basis"]["pass"], true);
    let w = v["windows"].as_array().unwrap();
    assert_eq!(w[0]["certificate"]["codimension"], 0);
    assert_eq!(w[1]["certificate"]["codimension"], 1);
    assert_eq!(w[1]["certificate"]["rank"], 20);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("w.json");
    std::fs::write(&bad, r#"{"n": 0, "k": 3, "l": 1}"#).unwrap();
    assert_eq!(run(&["algebra-verify", path(&bad)]).status.code(), Some(1));
}

#[test]
fn render_markers_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut svgs = Vec::new();
    for (name, markers) in [
        ("circle.json", 0),
        ("eight.json", 1),
        ("winding3.json", 2),
        ("eight.json", 1),
    ] {
        let out = dir.path().join("out.svg");
        let o = run(&["render", path(&data(name)), "-o", path(&out)]);
        assert_eq!(o.status.code(), Some(0));
        let svg = std::fs::read_to_string(&out).unwrap();
        assert_eq!(svg.matches(r#"class="curve""#).count(), 1);
        assert_eq!(
            svg.matches(r#"class="crossing""#).count(),
            markers,
            "{name}"
        );
        svgs.push(svg);
    }
    assert!(svgs[1].contains(">(0,1|0,-1)<"));
    assert_eq!(svgs[1], svgs[3]);
}

#[test]
fn outputs_are_reproducible() {
    for args in [
        vec!["compute", path(&data("winding3.json"))],
        vec![
            "--seed",
            "7",
            "check-invariance",
            "--trials",
            "10",
            path(&data("eight.json")),
        ],
        vec!["--seed", "11", "generate", "--random"],
    ] {
        let a = run(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, run(&args).stdout, "{args:?}");
    }
}

#[test]
fn generated_base_curve_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    assert_eq!(
        run(&["generate", "--base", "-2", "-o", path(&out)])
            .status
            .code(),
        Some(0)
    );
    let v = json(&run(&["compute", "--format", "json", path(&out)]));
    assert_eq!(v["whitney"], -2);
}
