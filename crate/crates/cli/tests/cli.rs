use std::process::{Command, Output};

fn g2re(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2re")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn roots_are_listed_in_order() {
    let o = g2re(&["roots"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines, ["theta_1 = a1", "theta_2 = a1 + a2", "theta_3 = 2a1 + 3a2", "theta_4 = a1 + 2a2", "theta_5 = a1 + 3a2", "theta_6 = a2"]);
}

#[test]
fn golden_matrices_reproduce() {
    let o = g2re(&["reproduce-appendix-b"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 diffs: pass"));
}

#[test]
fn equation_check_writes_artifact() {
    let dir = std::env::temp_dir().join(format!("g2re-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g2re.json");
    let o = g2re(&["verify-g2re", "--kind", "tr", "--n", "1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["entries_checked"], 64);
    assert_eq!(v["residuals"].as_array().unwrap().len(), 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn negative_rescaling_is_accepted() {
    let o = g2re(&["verify-g2re", "--kind", "tr", "--n", "1", "--rescale", "-5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn degenerate_angles_are_a_configuration_error() {
    let o = g2re(&["pappus", "--u", "0.4", "--v", "0.4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn inconsistent_u_values_are_rejected() {
    let o = g2re(&["build-g", "--kind", "bv", "--n", "1", "--umode", "spec", "--u1", "1", "--u2", "1", "--u3", "1", "--u4", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn out_of_range_n_is_rejected() {
    assert_eq!(g2re(&["build-r", "--kind", "tr", "--n", "7"]).status.code(), Some(2));
}
