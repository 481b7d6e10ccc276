use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn jetvar(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jetvar"));
    cmd.args(args)
        .current_dir(golden_dir())
        .env_remove("JETVAR_MAX_ORDER")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().expect("piped").write_all(text.as_bytes()).expect("write stdin");
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("binary exits")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

/// `(name, args)` pairs from `cases.txt`.
pub fn golden_cases() -> Vec<(String, Vec<String>)> {
    let text = std::fs::read_to_string(golden_dir().join("cases.txt")).expect("cases.txt");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once('|').expect("name | args");
            (name.trim().to_string(), args.split_whitespace().map(String::from).collect())
        })
        .collect()
}

#[test]
fn golden_outputs_are_byte_stable() {
    let bless = std::env::var_os("JETVAR_BLESS").is_some();
    for (name, args) in golden_cases() {
        let mut full = vec!["--format".to_string(), "json".to_string()];
        full.extend(args);
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let out = jetvar(&refs, None);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let path = golden_dir().join("expected").join(format!("{name}.json"));
        if bless {
            std::fs::write(&path, &out.stdout).expect("write golden");
            continue;
        }
        let want = std::fs::read(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(out.stdout, want, "{name} differs from {}", path.display());
    }
}

#[test]
fn golden_models_round_trip() {
    for model in ["counterexample.jv", "free_particle.jv", "tangent_covariance.jv"] {
        let text = std::fs::read_to_string(golden_dir().join(model)).unwrap();
        let once = jetvar_cli::ModelFile::parse(&text, 12).unwrap().emit();
        let twice = jetvar_cli::ModelFile::parse(&once, 12).unwrap().emit();
        assert_eq!(once, twice, "{model}");
    }
}

const PARTICLE: &str = "[space]\nbase_dim = 1\nfiber_dim = 1\norder = 1\n\
    [lagrangian]\nL = 1/2*y1_1^2\n[fields]\nX[y1] = 1\n";

#[test]
fn euler_of_free_particle_from_stdin() {
    let out = jetvar(&["--format", "json", "euler", "-"], Some(PARTICLE));
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"], serde_json::json!({"E": {"1": "-y1_11"}}));
    assert_eq!(v["warnings"], serde_json::json!([]));
}

#[test]
fn noether_for_vertical_translation() {
    let out = jetvar(&["--format", "json", "noether", "--field", "X", "-"], Some(PARTICLE));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"], serde_json::json!({"invariant": true, "residual": "0"}));
}

#[test]
fn renderings_agree() {
    let text = jetvar(&["euler", "free_particle.jv"], None);
    assert_eq!(stdout(&text), "E.1 = -y1_11\n");
    let latex = jetvar(&["--format", "latex", "euler", "free_particle.jv"], None);
    assert!(stdout(&latex).contains("-z_{11,1}"));
}

#[test]
fn exit_codes() {
    let usage = jetvar(&["frobnicate", "free_particle.jv"], None);
    assert_eq!(usage.status.code(), Some(2));
    let unknown_field = jetvar(&["noether", "--field", "nope", "free_particle.jv"], None);
    assert_eq!(unknown_field.status.code(), Some(2));
    let bad = jetvar(&["euler", "-"], Some("[space]\nbase_dim = 1\nfiber_dim = 1\norder = 1\n[lagrangian]\nL = f\n"));
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("6:5: undeclared function symbol f"));
    let domain = jetvar(&["covariance", "free_particle.jv"], None);
    assert_eq!(domain.status.code(), Some(1));
    let json_err = jetvar(&["--format", "json", "weakcritical", "free_particle.jv"], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json_err)).unwrap();
    assert_eq!(v["error"]["code"], "context");
}

#[test]
fn order_cap_from_environment() {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jetvar"));
    let out = cmd
        .args(["--format", "json", "euler", "free_particle.jv"])
        .current_dir(golden_dir())
        .env("JETVAR_MAX_ORDER", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[order]"));
    let out = Command::new(env!("CARGO_BIN_EXE_jetvar"))
        .args(["--format", "json", "euler", "free_particle.jv"])
        .current_dir(golden_dir())
        .env("JETVAR_MAX_ORDER", "3")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["context"]["max_order"], 3);
}

#[test]
fn normalization_warning_is_reported() {
    let model = "[space]\nbase_dim = 2\nfiber_dim = 1\norder = 2\n[lagrangian]\nL = y1_21^2\n";
    let out = jetvar(&["--format", "json", "euler", "-"], Some(model));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["warnings"][0], "6:5: y1_21 normalized to y1_12");
}

#[test]
fn remaining_commands_run() {
    for args in [
        vec!["split", "free_particle.jv"],
        vec!["lepage", "--method", "theta", "free_particle.jv"],
        vec!["symmetric", "--fields", "shift,boost", "free_particle.jv"],
        vec!["gradcheck", "--section", "parabola", "--grid", "50", "free_particle.jv"],
    ] {
        let out = jetvar(&args, None);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let split = stdout(&jetvar(&["--format", "json", "split", "free_particle.jv"], None));
    let v: serde_json::Value = serde_json::from_str(&split).unwrap();
    assert_eq!(v["result"]["lepagean"], false);
    assert_eq!(v["result"]["A"]["1,1"], "y1_1");
}
