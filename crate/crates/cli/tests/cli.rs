//! End-to-end checks of the command-line surface: exit codes, JSON shapes,
//! determinism and batch behavior.

use std::io::Write;
use std::process::{Command, Output};

fn progal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_progal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_temp(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

fn stdout_line(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap().trim().to_string()
}

#[test]
fn tgroup_free_rank_two_exact_output() {
    let f = write_temp("p 5\ngens a b\nchi a=1 b=0\n");
    let out = progal(&["tgroup", "--pres", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_line(&out), r#"{"t":{"1":1,"5":1},"u":1}"#);
}

#[test]
fn decompose_matrix_file() {
    // 5x5 cyclic shift minus identity: one free block
    let mut rows = String::new();
    for i in 0..5 {
        let row: Vec<String> = (0..5)
            .map(|j| {
                let mut v = 0i64;
                if (i + 4) % 5 == j {
                    v += 1; // shift: e_j -> e_{j+1}
                }
                if i == j {
                    v -= 1;
                }
                v.to_string()
            })
            .collect();
        rows.push_str(&row.join(" "));
        rows.push('\n');
    }
    let f = write_temp(&rows);
    let out = progal(&["decompose", "--matrix", f.path().to_str().unwrap(), "--p", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(json["jordan_type"], serde_json::json!({"5": 1}));

    // identity is not nilpotent: contract error
    let f = write_temp("1 0\n0 1\n");
    let out = progal(&["decompose", "--matrix", f.path().to_str().unwrap(), "--p", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(json["error"], "input");
}

#[test]
fn omega_dump_feeds_cohomology() {
    let out = progal(&["omega", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let f = write_temp(&String::from_utf8(out.stdout).unwrap());
    let out = progal(&["cohomology", "--pres", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        stdout_line(&out),
        r#"{"h1":{"5":1},"h2dec":{"4":1,"5":1}}"#
    );
}

#[test]
fn detect_exit_codes() {
    let cor = write_temp("p 5\ngens x1 x2\nrel x1^25 [x1,[x1,[x1,x2]]]\nchi x1=1 x2=0\n");
    let out = progal(&[
        "detect", "--rule", "thm1.1",
        "--pres", cor.path().to_str().unwrap(),
        "--sigma", "x1", "--tau", "x2", "--e", "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let json: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(json["verdict"], "not_absolute_galois");
    assert_eq!(json["rule"], "thm1.1");

    let free = write_temp("p 5\ngens a b\nchi a=1 b=0\n");
    let out = progal(&[
        "detect", "--rule", "thm1.3",
        "--pres", free.path().to_str().unwrap(),
        "--sigma", "a",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(json["verdict"], "no_witness");
}

#[test]
fn omega_dump_flags_under_h2dec_rule() {
    let out = progal(&["omega", "--p", "5"]);
    let f = write_temp(&String::from_utf8(out.stdout).unwrap());
    let out = progal(&["detect", "--rule", "h2dec", "--pres", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(json["witness"]["flag_size"], serde_json::json!(4));
}

#[test]
fn usage_errors_exit_one() {
    let f = write_temp("p 5\ngens a\nchi a=1\n");
    let out = progal(&["detect", "--rule", "nonsense", "--pres", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(json["error"], "usage");

    // a genuinely malformed invocation
    let out = progal(&["no-such-subcommand"]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(json["error"], "usage");
    assert!(!out.stderr.is_empty(), "human text goes to stderr");

    // missing required argument for a rule
    let out = progal(&["detect", "--rule", "thm1.1", "--pres", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert!(json["message"].as_str().unwrap().contains("--sigma"));
}

#[test]
fn contract_errors_exit_two() {
    // zero character
    let f = write_temp("p 5\ngens a b\nchi a=0 b=0\n");
    let out = progal(&["tgroup", "--pres", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // non-minimal presentation under the h2dec rule names the relator
    let f = write_temp("p 5\ngens a b\nrel [a,b]\nrel b^2\nchi a=1 b=0\n");
    let out = progal(&["detect", "--rule", "h2dec", "--pres", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    let message = json["message"].as_str().unwrap();
    assert!(message.contains("relator 1"), "message was: {message}");

    // inadmissible invariants
    let out = progal(&["canonical", "--p", "5", "--t", "", "--u", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn canonical_dump() {
    let out = progal(&["canonical", "--p", "5", "--t", "1=1,5=2", "--u", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(json["invariants"]["t"], serde_json::json!({"1": 1, "5": 2}));
    assert_eq!(json["invariants"]["u"], serde_json::json!(1));
    assert_eq!(json["action"]["rows"], serde_json::json!(11));
}

#[test]
fn family_flags() {
    let out = progal(&["family", "--p", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let json: serde_json::Value = serde_json::from_str(&stdout_line(&out)).unwrap();
    assert_eq!(json["witness"]["flag_size"], serde_json::json!(4));

    let sigma = write_temp("p 5\ngens w\n");
    let out = progal(&["family", "--p", "5", "--sigma", sigma.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    let a = progal(&["omega", "--p", "7", "--verify"]);
    let b = progal(&["omega", "--p", "7", "--verify"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn batch_detection_preserves_order() {
    let flagged = write_temp("p 5\ngens x1 x2\nrel x1^25 [x1,[x1,[x1,x2]]]\nchi x1=1 x2=0\n");
    let free = write_temp("p 5\ngens a b\nchi a=1 b=0\n");
    for jobs in ["1", "2", "3"] {
        let out = progal(&[
            "detect", "--rule", "tgroup",
            "--pres", flagged.path().to_str().unwrap(),
            "--pres", free.path().to_str().unwrap(),
            "--pres", flagged.path().to_str().unwrap(),
            "--jobs", jobs,
        ]);
        assert_eq!(out.status.code(), Some(3));
        let lines: Vec<String> =
            String::from_utf8(out.stdout).unwrap().lines().map(String::from).collect();
        assert_eq!(lines.len(), 3);
        let verdicts: Vec<serde_json::Value> =
            lines.iter().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(verdicts[0]["verdict"], "not_absolute_galois");
        assert_eq!(verdicts[1]["verdict"], "no_witness");
        assert_eq!(verdicts[2]["verdict"], "not_absolute_galois");
    }
}

#[test]
fn error_json_is_single_line() {
    let out = progal(&["tgroup", "--pres", "/definitely/not/a/file"]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    let json: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert!(json["message"].as_str().unwrap().contains("cannot read"));
}
