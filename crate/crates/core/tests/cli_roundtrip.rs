use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_unipotent-diameter"))
}

fn run(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn synth_then_verify_reproduces_the_element() {
    for (ty, n, p) in [("A", "3", "17"), ("B", "3", "5"), ("C", "3", "17"), ("D", "4", "101")] {
        for seed in 0..5 {
            let seed = seed.to_string();
            let (code, out, err) = run(&["synth", "--type", ty, "--n", n, "--p", p, "--seed", &seed], None);
            assert_eq!(code, 0, "{err}");
            let syn: Value = serde_json::from_str(&out).unwrap();
            assert_eq!(syn["verified"], Value::Bool(true));
            let (code, out, err) = run(&["verify"], Some(&out));
            assert_eq!(code, 0, "{err}");
            let ver: Value = serde_json::from_str(&out).unwrap();
            assert_eq!(ver["matrix"], syn["matrix"]);
            assert_eq!(ver["coords"], syn["coords"]);
        }
    }
}

#[test]
fn synth_accepts_coordinate_input() {
    let dir = std::env::temp_dir().join(format!("ud-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("elem.json");
    std::fs::write(&path, r#"{"coords": [1, 2, -3]}"#).unwrap();
    let (code, out, err) = run(&["synth", "--type", "A", "--n", "2", "--p", "7", "--input", path.to_str().unwrap()], None);
    assert_eq!(code, 0, "{err}");
    let syn: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(syn["verified"], Value::Bool(true));
    assert_eq!(syn["coords"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_empty_word_is_identity() {
    let (code, out, _) = run(&["verify"], Some(r#"{"type":"B","n":2,"p":5,"word":[]}"#));
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let m = v["matrix"].as_array().unwrap();
    for (r, row) in m.iter().enumerate() {
        for (c, x) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(x.as_u64().unwrap(), u64::from(r == c));
        }
    }
}

#[test]
fn growth_prints_d4_polynomial() {
    let (code, out, _) = run(&["growth", "--type", "D", "--n", "4"], None);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["P"], serde_json::json!([1, -4, 3, -1]));
}

#[test]
fn errors_are_single_lines_with_status() {
    let (code, out, err) = run(&["synth", "--type", "A", "--n", "2", "--p", "15"], None);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert_eq!(err.trim_end().lines().count(), 1);
    let v: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["error"], "bad_modulus");

    let (code, _, err) = run(&["roots", "--type", "E", "--n", "6"], None);
    assert_eq!(code, 2);
    assert_eq!(err.trim_end().lines().count(), 1);

    let (code, _, err) = run(&["diameter", "--type", "B", "--n", "3", "--p", "101"], None);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["error"], "infeasible");
}

#[test]
fn diameter_csv_header() {
    let (code, out, _) = run(&["diameter", "--type", "A", "--n", "1", "--p", "7", "--format", "csv"], None);
    assert_eq!(code, 0);
    assert_eq!(out, "# type=A n=1 p=7 diameter=3 order=7\nm,count\n0,1\n1,2\n2,2\n3,2\n");
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("ud-bounds-{}.csv", std::process::id()));
    let (code, out, _) = run(
        &["bounds", "--type", "A", "--n", "2", "--p", "5", "--format", "csv", "--out", path.to_str().unwrap()],
        None,
    );
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("type,n,p,lower_bound,abelianization_bound,upper_bound\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 2);
}

// Checks required keys and primitive types against the shipped schema.
fn conforms(value: &Value, def: &str) {
    let schema: Value = serde_json::from_str(include_str!("../../../docs/schema.json")).unwrap();
    let def = &schema["$defs"][def];
    for key in def["required"].as_array().unwrap() {
        let key = key.as_str().unwrap();
        let field = value.get(key).unwrap_or_else(|| panic!("missing {key}"));
        let prop = &def["properties"][key];
        let ok = match prop["type"].as_str() {
            Some("integer") => field.is_i64() || field.is_u64(),
            Some("string") => field.is_string(),
            Some("boolean") => field.is_boolean(),
            Some("array") => field.is_array(),
            _ => true,
        };
        assert!(ok, "{key} has the wrong type");
    }
}

#[test]
fn json_outputs_follow_the_schema() {
    let (_, out, _) = run(&["synth", "--type", "B", "--n", "3", "--p", "7", "--seed", "1"], None);
    let syn: Value = serde_json::from_str(&out).unwrap();
    conforms(&syn, "synth_output");
    conforms(&syn, "word_file");
    let (_, out, _) = run(&["verify"], Some(&out));
    conforms(&serde_json::from_str(&out).unwrap(), "verify_output");
    let (_, out, _) = run(&["diameter", "--type", "C", "--n", "2", "--p", "3"], None);
    conforms(&serde_json::from_str(&out).unwrap(), "sphere_profile");
    let (_, out, _) = run(&["growth", "--type", "A", "--n", "5"], None);
    conforms(&serde_json::from_str(&out).unwrap(), "growth_output");
    let (_, out, _) = run(&["bounds", "--type", "A", "--n", "2", "--p", "3"], None);
    let rows: Value = serde_json::from_str(&out).unwrap();
    for row in rows.as_array().unwrap() {
        conforms(row, "bounds_row");
    }
    let (_, _, err) = run(&["synth", "--type", "A", "--n", "0", "--p", "5"], None);
    conforms(&serde_json::from_str(err.trim()).unwrap(), "error");
}
