//! End-to-end tests for the `gbx` binary: output goldens, pipe fidelity,
//! exit-code contract, and environment/flag precedence.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_str().unwrap().to_owned()
}

/// Command for the binary with budget env vars scrubbed so ambient
/// configuration cannot leak into the tests.
fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gbx"));
    c.env_remove("GBX_BUDGET_PAIRS");
    c.env_remove("GBX_BUDGET_DEG");
    c.env_remove("GBX_BUDGET_BASIS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn gbx")
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = bin();
    c.args(args);
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("spawn gbx")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn gbx");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().expect("wait gbx")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "expected success, got {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn gb_lex_golden_for_two_binomials() {
    let out = run(&["gb", "--ideal", &data("ex34.id"), "--order", "lex"]);
    assert_eq!(stdout(&out), "x + y^2\ny^3 + 1\n");
}

#[test]
fn gb_deglex_golden_for_two_binomials() {
    let out = run(&["gb", "--ideal", &data("ex34.id"), "--order", "deglex"]);
    assert_eq!(stdout(&out), "x^2 + y\nx*y + 1\ny^2 + x\n");
}

#[test]
fn gb_output_is_byte_stable_across_runs_and_thread_counts() {
    let one = run(&["gb", "--ideal", "family:0", "--order", "deglex", "--threads", "1"]);
    let again = run(&["gb", "--ideal", "family:0", "--order", "deglex", "--threads", "1"]);
    let four = run(&["gb", "--ideal", "family:0", "--order", "deglex", "--threads", "4"]);
    let a = stdout(&one);
    assert_eq!(a, stdout(&again), "same invocation must be reproducible");
    assert_eq!(a, stdout(&four), "thread count must not change the output");
    assert!(a.lines().count() >= 2);
}

#[test]
fn gen_output_is_deterministic_and_sized() {
    let a = run(&["gen", "--n", "1"]);
    let b = run(&["gen", "--n", "1"]);
    let text = stdout(&a);
    assert_eq!(text, stdout(&b));
    let poly_lines = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(poly_lines, 35, "level 1 has 20*1+15 generators");
    let z = stdout(&run(&["gen", "--n", "0"]));
    assert_eq!(z.lines().filter(|l| !l.starts_with('#')).count(), 15);
}

#[test]
fn piping_gen_into_gb_matches_direct_family_input() {
    let gen = stdout(&run(&["gen", "--n", "0"]));
    let piped = run_stdin(&["gb", "--ideal", "-", "--order", "deglex"], &gen);
    let direct = run(&["gb", "--ideal", "family:0", "--order", "deglex"]);
    assert_eq!(stdout(&piped), stdout(&direct));
}

#[test]
fn nf_reduces_to_zero_exactly_for_members() {
    let zero = run(&[
        "nf", "--ideal", &data("ex34.id"), "--order", "lex", "--poly", "x^3*y + y",
    ]);
    assert_eq!(stdout(&zero), "0\n");
    let nonzero = run(&[
        "nf", "--ideal", &data("ex34.id"), "--order", "lex", "--poly", "x + 1",
    ]);
    assert_eq!(stdout(&nonzero), "y^2 + 1\n");
}

#[test]
fn member_prints_verdict_and_exits_zero_either_way() {
    let yes = run(&[
        "member", "--ideal", &data("ex34.id"), "--order", "lex", "--poly", "x^3*y + y",
    ]);
    assert_eq!(stdout(&yes), "true\n");
    let no = run(&[
        "member", "--ideal", &data("ex34.id"), "--order", "lex", "--poly", "x + 1",
    ]);
    assert_eq!(stdout(&no), "false\n");
}

#[test]
fn residues_bounded_goldens() {
    let lex = run(&[
        "residues", "--ideal", &data("ex34.id"), "--order", "lex", "--max-deg", "2",
    ]);
    assert_eq!(
        stdout(&lex),
        "1\ny\ny + 1\ny^2\ny^2 + 1\ny^2 + y\ny^2 + y + 1\n"
    );
    let deglex = run(&[
        "residues", "--ideal", &data("ex34.id"), "--order", "deglex", "--max-deg", "1",
    ]);
    assert_eq!(stdout(&deglex), "1\ny\ny + 1\nx\nx + 1\nx + y\nx + y + 1\n");
}

#[test]
fn min_elems_golden() {
    let out = run(&["min-elems", "--monomials", &data("mons.txt")]);
    assert_eq!(stdout(&out), "y*x\nx^2\ny^3\n");
}

#[test]
fn search_reaches_the_sink_variable() {
    let out = run(&[
        "search", "--ideal", "family:0", "--order", "lex", "--from", "ell*c^2",
        "--max-deg", "12", "--max-steps", "30",
    ]);
    let text = stdout(&out);
    assert!(text.contains("found = s\n"), "got: {text}");
    assert!(text.contains("truncated = false\n"));
}

#[test]
fn search_certificate_passes_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("s.cert");
    let cert = cert.to_str().unwrap();
    run(&[
        "search", "--ideal", "family:0", "--order", "lex", "--from", "ell*c^2",
        "--max-deg", "12", "--max-steps", "30", "-o", cert,
    ]);
    let verify = run(&["verify-cert", "--ideal", "family:0", "--cert", cert]);
    assert_eq!(stdout(&verify), "valid\n");
}

#[test]
fn derive_emits_exact_single_step_certificate() {
    let out = run(&["derive", "--family", "0", "--target", "mayr:0,1"]);
    assert_eq!(
        stdout(&out),
        "cert v1\nstart c1_0*s0\nstep 0 1 0\nend b1_0^2*c1_0*f0\n"
    );
}

#[test]
fn derive_then_verify_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    for (family, target) in [
        ("0", "mayr:0,2"),
        ("1", "mayr:1,2,bar"),
        ("1", "C:3,1"),
        ("2", "mayr:2,4"),
    ] {
        let cert = dir.path().join(format!("{}.cert", target.replace([':', ','], "_")));
        let cert = cert.to_str().unwrap();
        let d = run(&["derive", "--family", family, "--target", target, "-o", cert]);
        assert!(d.status.success(), "derive {target} failed");
        let v = run(&[
            "verify-cert", "--ideal", &format!("family:{family}"), "--cert", cert,
        ]);
        assert_eq!(stdout(&v), "valid\n", "target {target}");
    }
}

#[test]
fn verify_cert_rejects_a_tampered_step() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.cert");
    let cert_s = cert.to_str().unwrap();
    run(&["derive", "--family", "1", "--target", "C:3,1", "-o", cert_s]);
    let text = std::fs::read_to_string(&cert).unwrap();
    // Flip the direction bit of the first rewrite step.
    let mut lines: Vec<String> = text.lines().map(str::to_owned).collect();
    let step = lines
        .iter()
        .position(|l| l.starts_with("step "))
        .expect("certificate has steps");
    assert!(lines[step].ends_with(" 0"), "first step applies left-to-right");
    let n = lines[step].len();
    lines[step].replace_range(n - 1.., "1");
    let bad = dir.path().join("bad.cert");
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();

    let out = run(&["verify-cert", "--ideal", "family:1", "--cert", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("invalid:"), "got: {text}");
}

#[test]
fn var_order_file_controls_lex_elimination() {
    let dir = tempfile::tempdir().unwrap();
    let vo = dir.path().join("vo.txt");
    std::fs::write(&vo, "x\ny\n").unwrap();
    let out = run(&[
        "gb", "--ideal", &data("ex34.id"), "--order", "lex",
        "--var-order", vo.to_str().unwrap(),
    ]);
    // With x least, lex eliminates y instead of x.
    assert_eq!(stdout(&out), "y + x^2\nx^3 + 1\n");
}

#[test]
fn weights_file_enables_weighted_order_on_ad_hoc_ideals() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    std::fs::write(&w, "x 2\ny 3\n").unwrap();
    let out = run(&[
        "gb", "--ideal", &data("ex34.id"), "--order", "weighted",
        "--weights", w.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out), "y^2 + x\nx*y + 1\nx^2 + y\n");
}

#[test]
fn weighted_without_weights_is_an_error_on_ad_hoc_ideals() {
    let out = run(&["gb", "--ideal", &data("ex34.id"), "--order", "weighted"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--weights"), "got: {err}");
}

#[test]
fn weighted_on_family_defaults_to_family_weights() {
    let out = run(&["gb", "--ideal", "family:0", "--order", "weighted"]);
    assert!(out.status.success());
    assert!(!out.stdout.is_empty());
}

#[test]
fn malformed_inputs_exit_2() {
    // Truncated exponent in --poly.
    let out = run(&[
        "nf", "--ideal", &data("ex34.id"), "--order", "lex", "--poly", "x^",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    // Weights file that misses a registry variable.
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    std::fs::write(&w, "x 2\n").unwrap();
    let out = run(&[
        "gb", "--ideal", &data("ex34.id"), "--order", "weighted",
        "--weights", w.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);

    // Variable-order file with an unknown name.
    let vo = dir.path().join("vo.txt");
    std::fs::write(&vo, "x\ny\nz\n").unwrap();
    let out = run(&[
        "gb", "--ideal", &data("ex34.id"), "--order", "lex",
        "--var-order", vo.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn budget_exhaustion_exits_3() {
    let out = run(&[
        "gb", "--ideal", "family:0", "--order", "lex", "--budget-pairs", "10",
    ]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("budget exceeded"), "got: {err}");
}

#[test]
fn budget_env_vars_apply_and_flags_override_them() {
    let out = run_env(
        &["gb", "--ideal", "family:0", "--order", "deglex"],
        &[("GBX_BUDGET_PAIRS", "10")],
    );
    assert_eq!(code(&out), 3, "env budget must be honored");

    let out = run_env(
        &["gb", "--ideal", "family:0", "--order", "deglex", "--budget-pairs", "500000"],
        &[("GBX_BUDGET_PAIRS", "10")],
    );
    assert_eq!(code(&out), 0, "explicit flag must win over env");

    let out = run_env(
        &["gb", "--ideal", "family:0", "--order", "deglex"],
        &[("GBX_BUDGET_PAIRS", "abc")],
    );
    assert_eq!(code(&out), 2, "unparsable env value is a usage error");
}

#[test]
fn check_level_zero_passes_and_reports_every_section() {
    let out = run(&["check", "--family", "0", "--order", "deglex"]);
    let text = stdout(&out);
    for key in [
        "family = 0",
        "order = deglex",
        "family_size = pass",
        "criterion_one = pass",
        "criterion_two = pass",
        "certificates = pass",
        "height = pass",
        "evidence = pass",
        "overall = pass",
    ] {
        assert!(text.contains(key), "missing `{key}` in:\n{text}");
    }
}

#[test]
fn check_with_full_gb_passes_at_level_zero() {
    let out = run(&[
        "check", "--family", "0", "--order", "deglex", "--full-gb", "--threads", "4",
    ]);
    let text = stdout(&out);
    assert!(text.contains("gb_blowup = pass"), "got:\n{text}");
    assert!(text.contains("overall = pass"));
}

#[test]
fn check_exit_code_reflects_failure() {
    // A pair budget too small for the certificate replay leaves the check
    // unable to finish; that surfaces as exit 3, not a silent pass.
    let out = run(&[
        "check", "--family", "0", "--order", "deglex", "--full-gb", "--budget-pairs", "5",
    ]);
    assert_eq!(code(&out), 3);
}
