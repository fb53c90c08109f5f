use std::process::{Command, Output};

fn lieinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lieinv"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("LIEINV_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_files() {
    assert!(lieinv(&["validate", "examples/so3.json"]).status.success());
    assert!(lieinv(&["validate", "examples/abelian3.json"]).status.success());
    let bad = lieinv(&["validate", "examples/bad.json"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("(i,j,k,l) = (1,2,3,1)"), "{}", stdout(&bad));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = lieinv(&["validate", "examples/missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[io]"));
}

#[test]
fn affine_line_template() {
    let o = lieinv(&["invariants", "g2", "--pipeline", "transitive", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["template"], "v_12 + b(v_1) = 0");
    assert_eq!(v["verified"], true);
    assert_eq!(v["invariants"].as_array().unwrap().len(), 2);
}

#[test]
fn rotation_group_free_invariants() {
    let o = lieinv(&["invariants", "g3_7", "--pipeline", "free", "--m", "1", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for label in ["u_(1)", "u_(2)", "u_(3)", "u_(11)", "u_(12)", "u_(22)"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{label},"))), "{label} missing:\n{text}");
    }
}

#[test]
fn custom_algebra_file() {
    let o = lieinv(&["invariants", "examples/g3_4.json", "--pipeline", "transitive"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("verified: yes"));
}

#[test]
fn covariant_directions() {
    let to = lieinv(&["covariant", "--to", "examples/transport.pde"]);
    assert!(to.status.success());
    assert!(stdout(&to).contains("lhs: -x*w_y - w_x*exp(y) - w_u*sin(u)"), "{}", stdout(&to));
    let from = lieinv(&["covariant", "--from", "examples/example3.pde"]);
    assert!(stdout(&from).contains("lhs: u + u_x^2 + x*u_y^2 - 2*y*u_x"), "{}", stdout(&from));
    let bad = lieinv(&["covariant", "--from", "examples/w11.pde"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("not invariant"));
}

#[test]
fn reproduce_with_parameter_override() {
    let o = lieinv(&["reproduce", "--table", "3d-transitive", "--params", "g3_4:h=1/3", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("h=1/3"));
    assert!(!text.contains("h=1/2"));
}

#[test]
fn reproduce_two_dimensional() {
    let o = lieinv(&["reproduce", "--table", "2d-transitive"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS 2d-transitive")).count(), 2);
}

#[test]
fn seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_lieinv"))
        .env("LIEINV_SEED", "0x7")
        .args(["invariants", "g2", "--format", "json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 7);
}

#[test]
fn unknown_flag_rejected() {
    assert_eq!(lieinv(&["reproduce", "--bogus"]).status.code(), Some(2));
}
