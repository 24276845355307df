use std::process::{Command, Output};

use serde_json::Value;

fn drinfeld(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drinfeld"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = drinfeld(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn classify_examples() {
    let v = json(&["classify", "--q", "2", "--gamma", "0", "--a", "[1,1]"]);
    assert_eq!(v["h"], 1);
    assert_eq!(v["kind"], "ordinary");
    assert_eq!(v["j"], serde_json::json!([1]));
    assert_eq!(v["characteristic"], "T");

    let v = json(&["classify", "--q", "2", "--gamma", "0", "--a", "[0,1]"]);
    assert_eq!(v["h"], 0);
    assert_eq!(v["kind"], "supersingular");
    assert_eq!(v["j"], serde_json::json!([0]));

    let v = json(&["classify", "--q", "2", "--gamma", "1", "--a", "[1]"]);
    assert_eq!(v["rank"], 1);
    assert_eq!(v["h"], 0);
    assert!(v.get("kind").is_none() && v.get("j").is_none());
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| drinfeld(args).status.code();
    assert_eq!(code(&["classify", "--q", "2", "--a", "[1,1]"]), Some(0));
    assert_eq!(
        code(&["torsion", "--q", "2", "--a", "[1,1]", "--ideal", "T+1"]),
        Some(0)
    );
    assert_eq!(
        code(&["levels", "--q", "3", "--a", "[1,1]", "--ideal", "T+1", "--kind", "gamma1"]),
        Some(0)
    );
    assert_eq!(
        code(&["ihara", "--q", "2", "--p", "T", "--n", "T+1", "--genus", "0"]),
        Some(0)
    );
    assert_eq!(
        code(&[
            "quotient",
            "--q",
            "2",
            "--a",
            "[1,1]",
            "--kernel-points",
            "[0]",
            "--mult",
            "1"
        ]),
        Some(0)
    );
    // a failed mathematical check
    assert_eq!(
        code(&["deform-check", "--q", "2", "--a", "[1,1]", "--kind", "full"]),
        Some(1)
    );
    // usage errors
    assert_eq!(code(&["classify", "--q", "6", "--a", "[1]"]), Some(2));
    assert_eq!(code(&["classify", "--q", "2", "--a", "[1,0]"]), Some(2));
    assert_eq!(
        code(&["levels", "--q", "2", "--a", "[1,1]", "--ideal", "T+1", "--kind", "gamma7"]),
        Some(2)
    );
    assert_eq!(code(&["ihara", "--q", "2", "--p", "T", "--n", "T"]), Some(2));
    assert_eq!(code(&["bogus"]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn json_is_deterministic_and_round_trips() {
    let args = ["levels", "--q", "2", "--a", "[1,1]", "--ideal", "T^2+T+1", "--list"];
    let a = drinfeld(&args).stdout;
    assert_eq!(a, drinfeld(&args).stdout);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["operation"], "level::enumerate_gamma0");
    assert_eq!(v["count"], 5);
    assert_eq!(v["gamma0"].as_array().unwrap().len(), 5);
    let again = serde_json::to_string_pretty(&v).unwrap();
    assert_eq!(again.trim_end(), String::from_utf8(a).unwrap().trim_end());
}

#[test]
fn text_and_csv_formats() {
    let out = drinfeld(&["classify", "--q", "2", "--a", "[1,1]", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "h: 1"));
    let out = drinfeld(&["classify", "--q", "2", "--a", "[1,1]", "--format", "csv"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("characteristic,field,h,j,kind"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = std::env::temp_dir().join(format!("drinfeld-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("session.conf");
    std::fs::write(&path, "# over F_9\nq = 3^2\nformat = text\n").unwrap();
    let p = path.to_str().unwrap();
    let out = drinfeld(&["classify", "--config", p, "--a", "[1,1]"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "q: 9"), "{text}");
    let v: Value =
        serde_json::from_slice(&drinfeld(&["classify", "--config", p, "--format", "json", "--a", "[1,1]"]).stdout)
            .unwrap();
    assert_eq!(v["q"], 9);

    std::fs::write(&path, "q = 3\nseed\n").unwrap();
    let out = drinfeld(&["classify", "--config", p, "--a", "[1,1]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"));
    std::fs::remove_dir_all(&dir).unwrap();
}
