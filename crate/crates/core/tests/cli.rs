//! End-to-end tests of the command-line binary.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simplederiv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_report(tag: &str, args: &[&str]) -> Value {
    let path: PathBuf = std::env::temp_dir().join(format!("simplederiv-{tag}-{}.json", std::process::id()));
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--json", &p]);
    let out = bin(&full);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    v
}

fn assert_certificates_well_formed(v: &Value) {
    assert_eq!(v["schema"], 1);
    for c in v["certificates"].as_array().unwrap() {
        let obj = c.as_object().unwrap();
        for key in ["claim", "degree_bound", "verdict"] {
            assert!(obj.contains_key(key), "certificate lacks {key}: {c}");
        }
        assert!(obj
            .keys()
            .all(|k| ["claim", "degree_bound", "verdict", "witness"].contains(&k.as_str())));
    }
}

#[test]
fn apply_partial_u() {
    let out = bin(&["--ring", "u", "--coeffs", "1", "apply", "--poly", "u^2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("D(u^2) = 2*u"));
    let v = json_report("apply", &["--ring", "u", "--coeffs", "1", "apply", "--poly", "u^2"]);
    assert_eq!(v["result"]["image"], "2*u");
    assert_eq!(v["command"], "apply");
}

#[test]
fn jordan_centralizer_report() {
    let v = json_report(
        "jordan",
        &["--example", "jordan", "--n", "3", "centralizer", "--deg", "2"],
    );
    assert_certificates_well_formed(&v);
    assert_eq!(v["result"]["lnd_span_dimension"], 1);
    assert_eq!(v["result"]["lnd_span_basis"][0]["text"], "d/dx3");
    assert_eq!(v["certificates"][0]["degree_bound"], 2);
}

#[test]
fn shamsuddin_registry_instance() {
    let v = json_report("sham", &["--example", "shamsuddin-uv", "shamsuddin", "--deg-h", "10"]);
    assert_certificates_well_formed(&v);
    assert_eq!(v["certificates"][0]["verdict"], "no-witness-up-to-degree");
    assert_eq!(v["certificates"][0]["degree_bound"], 10);
    assert_eq!(v["result"]["extension"]["text"], "d/du + (u*v + 1)*d/dv");
}

#[test]
fn negative_verdicts_exit_zero() {
    let out = bin(&["--example", "nonsimple", "screen", "--deg", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("-> fails"));
    let v = json_report("screen", &["--example", "nonsimple", "screen", "--deg", "3"]);
    assert_certificates_well_formed(&v);
    assert!(v["certificates"][0]["witness"]["kernel_element"].is_string());
}

#[test]
fn tool_errors_exit_nonzero() {
    for args in [
        &["--ring", "x", "--coeffs", "1", "apply", "--poly", "x^(2)"][..],
        &["--ring", "u", "--coeffs", "w", "apply", "--poly", "u"][..],
        &["--example", "nope", "example"][..],
        &["--ring", "u,v", "--coeffs", "1", "apply", "--poly", "u"][..],
    ] {
        let out = bin(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn map_subcommands() {
    let out = bin(&[
        "--example",
        "jordan",
        "--n",
        "3",
        "isotropy-check",
        "--map",
        "x1; x2; x3 + 1",
    ]);
    assert!(stdout(&out).contains("-> holds"), "{}", stdout(&out));
    let v = json_report(
        "growth",
        &[
            "--ring",
            "x1,x2",
            "degree-growth",
            "--map",
            "x2; x1 + x2^2",
            "--inverse",
            "x2 - x1^2; x1",
            "--cap",
            "100",
        ],
    );
    assert_eq!(v["result"]["verdict"]["exceeded_cap_at_power"], 7);
    let v = json_report("fixed", &["--ring", "x,y", "fixed-points", "--map", "x + y^2; y + 1"]);
    assert_eq!(v["certificates"][0]["verdict"], "none");
    let v = json_report(
        "conj",
        &[
            "--ring",
            "x1,x2",
            "--coeffs",
            "1;0",
            "conjugate",
            "--map",
            "x1; x2 + x1^2",
        ],
    );
    assert_eq!(v["result"]["conjugate"]["text"], "d/dx1 + (-2*x1)*d/dx2");
}

#[test]
fn lnd_exp_and_translations() {
    let v = json_report("exp", &["--ring", "x1,x2", "--coeffs", "1;x1", "exp", "--t", "1"]);
    assert_eq!(v["result"]["forward"][1], "x1 + x2 + 1/2");
    let v = json_report("tr", &["--example", "jordan", "--n", "4", "translations"]);
    assert_eq!(v["result"]["coordinate_directions"][0], "x4");
    let out = bin(&["--example", "tower", "--n", "2", "example"]);
    assert!(
        stdout(&out).contains("d/du + (u*v + 1)*d/dv + v*d/dx1 + v^2*d/dx2"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn image_kernel_and_tower_commands() {
    let v = json_report(
        "img",
        &[
            "--example",
            "exa-maximal",
            "image-intersect",
            "--span",
            "v;v^2;v^3",
            "--deg",
            "6",
        ],
    );
    assert_eq!(v["result"]["dimension"], 0);
    let v = json_report("ker", &["--example", "nonsimple", "kernel", "--deg", "3"]);
    assert!(v["result"]["basis"].as_array().unwrap().len() >= 2);
    let v = json_report(
        "tower",
        &[
            "--ring",
            "u",
            "--coeffs",
            "1",
            "build-tower",
            "--images",
            "u",
            "--new-vars",
            "v",
            "--deg",
            "4",
        ],
    );
    assert_certificates_well_formed(&v);
    let v = json_report("plinth", &["--ring", "x,y", "--coeffs", "1;x", "plinth", "--deg", "2"]);
    assert_eq!(v["result"]["contains_constant"], true);
    let v = json_report(
        "darboux",
        &["--ring", "x", "--coeffs", "x", "darboux-check", "--poly", "x^3"],
    );
    assert_eq!(v["result"]["lambda"], "3");
    let v = json_report("br", &["--ring", "x,y", "--coeffs", "1;0", "bracket", "--other", "0;x"]);
    assert_eq!(v["result"]["bracket"]["text"], "d/dy");
    let v = json_report("lnd", &["--ring", "x,y", "--coeffs", "y;0", "lnd-check"]);
    assert_eq!(v["certificates"][0]["verdict"], "locally-nilpotent");
}
