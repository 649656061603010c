use conezar::cli::{run, EXIT_CONFIG, EXIT_MATH, EXIT_OK, EXIT_VERIFY};
use conezar::toric::fans;

fn conezar(args: &[&str]) -> conezar::cli::Outcome {
    run(std::iter::once("conezar").chain(args.iter().copied()))
}

#[test]
fn exit_codes() {
    assert_eq!(conezar(&["presets"]).code, EXIT_OK);
    assert_eq!(conezar(&["volume", "--alpha", "1,1"]).code, EXIT_CONFIG);
    assert_eq!(conezar(&["--preset", "nope", "volume", "--alpha", "1,1"]).code, EXIT_CONFIG);
    assert_eq!(conezar(&["--preset", "proj-bundle-p1", "volume", "--alpha", "1,2,3"]).code, EXIT_CONFIG);
    assert_eq!(conezar(&["verify-paper", "--suite", "no-such-suite"]).code, EXIT_CONFIG);
    // a non-big class has no Zariski decomposition
    assert_eq!(conezar(&["--preset", "proj-bundle-p1", "zariski", "--alpha", "0,1"]).code, EXIT_MATH);
    assert_ne!(EXIT_VERIFY, EXIT_OK);
}

#[test]
fn seeded_runs_are_identical() {
    let args = ["--preset", "toric-flip-3fold", "--seed", "7", "zariski", "--alpha", "3,2,2"];
    let a = conezar(&args);
    let b = conezar(&args);
    assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn zariski_json_fields() {
    let o = conezar(&["--preset", "proj-bundle-p1", "zariski", "--alpha", "1,1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    let gamma: Vec<f64> = serde_json::from_value(v["gamma"].clone()).unwrap();
    assert!(gamma[0].abs() < 1e-6 && (gamma[1] - 0.5).abs() < 1e-6, "{gamma:?}");
    assert!(v["volhat"].as_f64().unwrap() > 0.0);
}

#[test]
fn sweep_matches_closed_form() {
    let o = conezar(&[
        "--preset", "proj-bundle-p1", "--format", "csv", "sweep", "--alpha", "3,1", "--dir", "-2,-1", "--t0", "0",
        "--t1", "0.99", "--steps", "100",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let mut lines = o.stdout.lines();
    assert!(lines.next().unwrap().starts_with("t,volhat,B1,B2,derivative"));
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let t: f64 = cols[0].parse().unwrap();
        let vol: f64 = cols[1].parse().unwrap();
        let expected = (3.5 - 2.0 * t) * (1.0 - t).sqrt();
        assert!((vol - expected).abs() < 1e-5, "t={t}: {vol} vs {expected}");
        rows += 1;
    }
    assert_eq!(rows, 101);
}

#[test]
fn fan2chow_writes_model() {
    let dir = tempfile::tempdir().unwrap();
    let fan = dir.path().join("flip.json");
    let model = dir.path().join("model.json");
    std::fs::write(&fan, serde_json::to_string(&fans::flip_threefold()).unwrap()).unwrap();
    let o = conezar(&["--out", model.to_str().unwrap(), "fan2chow", fan.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let from_file = conezar(&["--model", model.to_str().unwrap(), "volume", "--alpha", "3,2,2"]);
    let from_preset = conezar(&["--preset", "toric-flip-3fold", "volume", "--alpha", "3,2,2"]);
    assert_eq!(from_file.code, EXIT_OK, "{}", from_file.stderr);
    assert_eq!(from_file.stdout, from_preset.stdout);
}

#[test]
fn fan_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let fan = dir.path().join("bad.json");
    std::fs::write(&fan, r#"{"dim": 2, "rays": [[1,0],[0,1]], "max_cones": [[0,1],[0,1]]}"#).unwrap();
    // a geometrically invalid fan is a math error, unreadable input a config error
    assert_eq!(conezar(&["fan2chow", fan.to_str().unwrap()]).code, EXIT_MATH);
    std::fs::write(&fan, "not json").unwrap();
    assert_eq!(conezar(&["fan2chow", fan.to_str().unwrap()]).code, EXIT_CONFIG);
}
