//! End-to-end tests that drive the `qv` binary as a subprocess.

use std::fs;
use std::process::{Command, Output};

use qv::io::{emit_groupring, read_groupring, read_groupring_str};

fn qv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qv"))
        .args(args)
        .output()
        .expect("failed to spawn qv")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is not utf-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is not utf-8")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process was killed by a signal")
}

/// Table rows with trailing whitespace removed, so the empty `flags` column
/// does not make comparisons depend on invisible characters.
fn trimmed_lines(text: &str) -> Vec<String> {
    text.lines().map(|l| l.trim_end().to_string()).collect()
}

fn data_path(name: &str) -> String {
    format!("{}/tests/data/{}", env!("CARGO_MANIFEST_DIR"), name)
}

#[test]
fn color_counts_trefoil_colorings() {
    let out = qv(&["color", "--braid", "2 ; 1 1 1", "--p", "3", "--h", "1,1"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    assert_eq!(stdout_of(&out), "9\n");
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let out = qv(&["color", "--braid", "2 ; 1 1 1"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn nonprime_characteristic_is_a_domain_error() {
    let out = qv(&["axioms", "--p", "4", "--h", "1,1"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr_of(&out).contains("prime"), "stderr: {}", stderr_of(&out));
}

#[test]
fn help_succeeds() {
    let out = qv(&["--help"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout_of(&out).contains("Usage"));
}

#[test]
fn axioms_reports_a_valid_quandle() {
    let out = qv(&["axioms", "--p", "2", "--h", "1,1,1"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("axioms: ok"), "stdout: {text}");
}

#[test]
fn basis_enumeration_is_deterministic() {
    let out = qv(&["basis", "--deg", "2", "--p", "2", "--h", "1,1,1"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.starts_with("count: 1\n"), "stdout: {text}");
    assert!(text.contains("basis2:0,1 = U1*U2^2"), "stdout: {text}");

    let out = qv(&["basis", "--deg", "3", "--p", "3", "--h", "1,0,1"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.starts_with("count: 4\n"), "stdout: {text}");
    assert!(text.contains("basis3:4-3:0,0,1,1"), "stdout: {text}");
}

#[test]
fn diagram_describes_the_closure() {
    let out = qv(&["diagram", "--braid", "2 ; 1 -1"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("strands: 2"), "stdout: {text}");
    assert!(text.contains("components: 2"), "stdout: {text}");
    assert!(text.contains("sign=+1"), "stdout: {text}");
    assert!(text.contains("sign=-1"), "stdout: {text}");
}

#[test]
fn invariant_output_round_trips_through_the_reader() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trefoil.gr");
    let out = qv(&[
        "invariant",
        "--braid",
        "2 ; 1 1 1",
        "--deg",
        "2",
        "--cocycle",
        "example111",
        "--p",
        "2",
        "--h",
        "1,1,1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));

    let g = read_groupring(&path).unwrap();
    assert_eq!(g.eval_t1(), 16);
    let counts = g.class_counts();
    let classes: Vec<(String, i64)> = counts
        .iter()
        .map(|(cls, c)| (g.ring().element_string(cls), *c))
        .collect();
    assert_eq!(classes, vec![("0".to_string(), 4), ("w".to_string(), 12)]);

    // The file is exactly the canonical emission of what it encodes.
    assert_eq!(emit_groupring(&g), fs::read_to_string(&path).unwrap());
}

#[test]
fn operator_agrees_with_the_state_sum() {
    let common = [
        "--cocycle",
        "example111",
        "--p",
        "2",
        "--h",
        "1,1,1",
    ];
    for braid in ["2 ; 1 1 1", "2 ; 1 -1", "3 ; 1 1 -2", "2 ; 1 1 1 1 1 1"] {
        let mut op_args = vec!["operator", "--braid", braid];
        op_args.extend_from_slice(&common);
        let mut inv_args = vec!["invariant", "--braid", braid, "--deg", "2"];
        inv_args.extend_from_slice(&common);

        let op = qv(&op_args);
        let inv = qv(&inv_args);
        assert_eq!(exit_code(&op), 0, "stderr: {}", stderr_of(&op));
        assert_eq!(exit_code(&inv), 0, "stderr: {}", stderr_of(&inv));

        let g_op = read_groupring_str(&stdout_of(&op)).unwrap();
        let g_inv = read_groupring_str(&stdout_of(&inv)).unwrap();
        assert_eq!(
            g_op.class_counts(),
            g_inv.class_counts(),
            "operator and state sum disagree on {braid}"
        );
    }
}

#[test]
fn expand_reproduces_the_published_torus_series() {
    let out = qv(&[
        "expand",
        "--in",
        &data_path("example111_n3.gr"),
        "--a",
        "3",
        "--b",
        "2",
        "--D",
        "5",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    let expected = [
        "d | u_d | d!*u_d mod p | flags",
        "0 | 16 | 0 |",
        "1 | 0 | 0 |",
        "2 | 144 | 0 |",
        "3 | 276 | 0 |",
        "4 | 1260 | 0 |",
        "5 | 3812 | 0 |",
    ];
    assert_eq!(trimmed_lines(&stdout_of(&out)), expected);
}

#[test]
fn expand_accepts_an_integer_relation_override() {
    let out = qv(&[
        "expand",
        "--in",
        &data_path("example110_n3.gr"),
        "--a",
        "2",
        "--b",
        "1",
        "--D",
        "5",
        "--h",
        "1,-1,1",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    let expected = [
        "d | u_d | d!*u_d mod p | flags",
        "0 | 9 | 0 |",
        "1 | 0 | 0 |",
        "2 | 20 | 1 |",
        "3 | 10 | 0 |",
        "4 | 898/3 | 2 |",
        "5 | 1373/6 | 1 |",
    ];
    assert_eq!(trimmed_lines(&stdout_of(&out)), expected);
}

#[test]
fn expand_rejects_the_reduced_relation_when_no_root_exists() {
    // Without the override the file's reduced relation 1 + 2w + w^2 is used,
    // and t = e^{2 hbar}, w = e^{hbar} does not annihilate it on the unit
    // circle.
    let out = qv(&[
        "expand",
        "--in",
        &data_path("example110_n3.gr"),
        "--a",
        "2",
        "--b",
        "1",
        "--D",
        "5",
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(
        stderr_of(&out).contains("annihilate"),
        "stderr: {}",
        stderr_of(&out)
    );
}

#[test]
fn expand_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.gr");
    fs::write(&path, "p: 2\nh: 1 1 1\nterms: coeff=1 exp_in_S=\"0\" lift=\"0\"\n").unwrap();
    let out = qv(&["expand", "--in", path.to_str().unwrap(), "--a", "3", "--b", "2"]);
    assert_eq!(exit_code(&out), 1);
    let err = stderr_of(&out);
    assert!(err.contains("line 3"), "stderr: {err}");
    assert!(err.contains("unknown field"), "stderr: {err}");
}

#[test]
fn repro_output_is_deterministic() {
    let first = qv(&["repro", "example111", "--n", "3"]);
    let second = qv(&["repro", "example111", "--n", "3"]);
    assert_eq!(exit_code(&first), 0, "stderr: {}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout_of(&first);
    assert!(text.contains("Phi = 4 + 12*t^(w)"), "stdout: {text}");
    assert!(text.contains("Phi(t=1) = 16"), "stdout: {text}");
}

#[test]
fn repro_shadow_example_warns_but_completes() {
    let out = qv(&["repro", "example110", "--n", "3"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    assert!(
        stderr_of(&out).contains("not a cocycle"),
        "stderr: {}",
        stderr_of(&out)
    );
    let text = stdout_of(&out);
    assert!(text.contains("Phi(t=1) = 9"), "stdout: {text}");
    assert!(
        text.contains("Phi = 3 + 2*t^(2) + 2*t^(w) + 2*t^(2*w+1)"),
        "stdout: {text}"
    );
}

#[test]
fn ybe_passes_for_a_cocycle() {
    let out = qv(&["ybe", "--cocycle", "example111", "--p", "2", "--h", "1,1,1"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("yang_baxter: true"), "stdout: {text}");
    assert!(text.contains("markov: true"), "stdout: {text}");
}

#[test]
fn ybe_reports_failures_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("not_a_cocycle.txt");
    fs::write(&path, "x*y\n").unwrap();
    let out = qv(&["ybe", "--cocycle", path.to_str().unwrap(), "--p", "2", "--h", "1,1,1"]);
    assert_eq!(exit_code(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("is_cocycle: false"), "stdout: {text}");
    assert!(text.contains("yang_baxter: false"), "stdout: {text}");
}

#[test]
fn vassiliev_reports_singular_residues() {
    let out = qv(&[
        "vassiliev",
        "--braid",
        "2 ; 1 s1 s1",
        "--deg",
        "2",
        "--cocycle",
        "example111",
        "--p",
        "2",
        "--h",
        "1,1,1",
        "--a",
        "3",
        "--b",
        "2",
        "--D",
        "4",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    let expected = [
        "d | u_d | d!*u_d mod p | flags",
        "0 | 12 | 0 |",
        "1 | 144 | 0 |",
        "2 | 1152 | 0 |",
        "3 | 7344 | 0 |",
        "4 | 40224 | 0 |",
    ];
    assert_eq!(trimmed_lines(&stdout_of(&out)), expected);
}

#[test]
fn out_flag_duplicates_stdout_into_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.txt");
    let out = qv(&[
        "expand",
        "--in",
        &data_path("example111_n3.gr"),
        "--a",
        "3",
        "--b",
        "2",
        "--D",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_of(&out));
    assert_eq!(stdout_of(&out), fs::read_to_string(&path).unwrap());
}
