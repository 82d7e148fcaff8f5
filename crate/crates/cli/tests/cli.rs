//! End-to-end tests of the binary: output formats, exit-code semantics, and
//! the certificate workflow.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isospec"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("isospec-cli-{}-{name}", std::process::id()))
}

#[test]
fn construct_prints_the_small_generator() {
    let output = run(&["construct", "--print", "a"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "4 3\n0 1 0 0\n0 0 1 0\n0 0 0 1\n2 2 2 2\n");
}

#[test]
fn construct_symmetric_uses_negative_residues() {
    let output = run(&["construct", "--print", "a", "--symmetric"]);
    assert!(output.status.success());
    assert!(stdout(&output).contains("-1 -1 -1 -1"));
}

#[test]
fn construct_prints_a_17x17_generator() {
    let output = run(&["construct", "--print", "D"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert!(text.starts_with("17 3\n"));
    assert_eq!(text.lines().count(), 18);
}

#[test]
fn spectrum_of_the_frobenius_group() {
    let output = run(&["spectrum", "--group", "frobenius"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "1 2 4 5\n4 5\n");
}

#[test]
fn spectrum_of_the_affine_group() {
    let output = run(&["spectrum", "--group", "vf"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "1 2 3 4 5 6 12\n5 12\n");
}

#[test]
fn spectrum_of_the_tuple_group() {
    let output = run(&["spectrum", "--group", "cgroup"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "1 3\n3\n");
}

#[test]
fn verify_single_check_passes() {
    let output = run(&["verify", "--only", "frobenius"]);
    assert!(output.status.success());
    assert!(stdout(&output).starts_with("PASS  frobenius"));
}

#[test]
fn verify_list_names_every_check() {
    let output = run(&["verify", "--list"]);
    assert!(output.status.success());
    let text = stdout(&output);
    for name in [
        "frobenius",
        "psi-order18",
        "reference-spectrum",
        "sampled-spectrum",
        "spectrum-verdict",
    ] {
        assert!(text.lines().any(|l| l == name), "missing {name}");
    }
}

#[test]
fn unknown_check_name_exits_with_config_code() {
    let output = run(&["verify", "--only", "nope"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_with_usage_code() {
    let output = run(&["--frobnicate"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn bad_prime_is_a_config_error() {
    let output = run(&["--prime", "5", "verify", "--only", "frobenius"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn tight_limit_is_a_config_error_not_a_failure() {
    let output = run(&["--limit", "100", "verify", "--only", "reference-spectrum"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn sample_prints_a_histogram_inside_the_spectrum() {
    let output = run(&["sample", "--group", "frobenius", "--n", "300", "--seed", "9"]);
    assert!(output.status.success());
    for line in stdout(&output).lines() {
        let order: u64 = line.split_whitespace().next().unwrap().parse().unwrap();
        assert!([1, 2, 4, 5].contains(&order));
    }
}

#[test]
fn certify_writes_a_passing_certificate() {
    let path = temp_path("cert.json");
    let output = run(&[
        "--samples",
        "300",
        "--word-length",
        "24",
        "--seed",
        "3",
        "-o",
        path.to_str().unwrap(),
        "certify",
    ]);
    assert!(
        output.status.success(),
        "stdout: {}\nstderr: {}",
        stdout(&output),
        String::from_utf8_lossy(&output.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["schema_version"], 1);
    assert_eq!(value["summary"]["verdict"], "pass");
    assert_eq!(value["summary"]["claimed_group_order"], 5_648_590_729_620u64);
    let human = stdout(&output);
    assert!(human.contains("verdict: PASS"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn corrupted_generator_file_fails_verification() {
    let gens_path = temp_path("gens.txt");
    let cert_path = temp_path("cert-fail.json");
    // Print the four generators, then corrupt one C entry.
    let mut file_text = String::from("17 3\n");
    for name in ["A", "B", "C", "D"] {
        let output = run(&["construct", "--print", name]);
        assert!(output.status.success());
        file_text.push('\n');
        file_text.push_str(&stdout(&output));
    }
    // Entry (2,6) of C sits in the c1 block; flipping it keeps the matrix
    // unipotent (hence invertible) but breaks the construction.
    let corrupted = {
        let mut lines: Vec<String> = file_text.lines().map(|l| l.to_string()).collect();
        // Locate the C block: third generator, so third "17 3" header.
        let mut headers = 0;
        let mut c_start = 0;
        for (i, line) in lines.iter().enumerate() {
            if line == "17 3" && i > 0 {
                headers += 1;
                if headers == 3 {
                    c_start = i;
                    break;
                }
            }
        }
        let row = c_start + 2;
        let mut entries: Vec<i64> = lines[row]
            .split_whitespace()
            .map(|t| t.parse().unwrap())
            .collect();
        entries[5] = (entries[5] + 1) % 3;
        lines[row] = entries
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        lines.join("\n") + "\n"
    };
    std::fs::write(&gens_path, corrupted).unwrap();
    let output = run(&[
        "--samples",
        "200",
        "--word-length",
        "24",
        "--generators",
        gens_path.to_str().unwrap(),
        "-o",
        cert_path.to_str().unwrap(),
        "certify",
    ]);
    assert_eq!(output.status.code(), Some(1));
    let text = std::fs::read_to_string(&cert_path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["summary"]["verdict"], "fail");
    let failed_names: Vec<String> = value["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    assert!(failed_names.contains(&"big-generators".to_string()));
    std::fs::remove_file(&gens_path).ok();
    std::fs::remove_file(&cert_path).ok();
}

#[test]
fn env_variable_overrides_the_seed() {
    let out_a = bin()
        .args(["sample", "--group", "frobenius", "--n", "100"])
        .env("ISOSPEC_SEED", "42")
        .output()
        .unwrap();
    let out_b = run(&["sample", "--group", "frobenius", "--n", "100", "--seed", "42"]);
    assert_eq!(stdout(&out_a), stdout(&out_b));
}
