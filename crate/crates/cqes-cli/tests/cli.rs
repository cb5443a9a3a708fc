//! End-to-end tests of the `cqes` binary: exit-code contract, output
//! schemas, determinism, config merging, and the reproduce machinery.

use std::path::PathBuf;
use std::process::{Command, Output};

fn cqes() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cqes"))
}

fn run(args: &[&str]) -> Output {
    cqes().args(args).output().expect("binary spawns")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "`cqes {}` failed (code {:?}): {}",
        args.join(" "),
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout is utf-8")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process not killed by signal")
}

/// CSV body rows: everything after the `#` comment and the column header.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn csv_column_header(text: &str) -> &str {
    text.lines()
        .find(|l| !l.starts_with('#'))
        .expect("csv has a column header")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cqes-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir is creatable");
    dir
}

#[test]
fn analytic_quotes_the_exact_block_energies() {
    let text = run_ok(&["analytic", "--beta", "-5", "--kappa", "3", "--irrep", "A1"]);
    assert!(
        text.starts_with("# cqes v"),
        "csv must open with a traceability comment, got: {}",
        text.lines().next().unwrap_or("")
    );
    assert_eq!(csv_column_header(&text), "kappa,irrep,n,E_t,E_h,coeff_0,coeff_1");

    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2, "the kappa=3 A1 block holds two states");
    let expected = [-34.5125, -14.4875];
    for (row, want) in rows.iter().zip(expected) {
        assert_eq!(row[0], "3");
        assert_eq!(row[1], "A1");
        let e_t: f64 = row[3].parse().expect("E_t parses");
        let e_h: f64 = row[4].parse().expect("E_h parses");
        assert!(
            (e_t - want).abs() < 1e-4,
            "E_t = {e_t} should match the quoted value {want}"
        );
        assert_eq!(e_h, -e_t, "the two systems' energies are exact negatives");
    }
}

#[test]
fn fgh_reproduces_the_lowest_razavy_level() {
    let text = run_ok(&[
        "fgh", "--system", "hyp", "--beta", "-5", "--kappa", "1", "--levels", "1", "--grid",
        "512",
    ]);
    assert_eq!(csv_column_header(&text), "n,irrep,energy,method,error_estimate");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let energy: f64 = rows[0][2].parse().expect("energy parses");
    assert!(
        (energy - 25.0).abs() < 1e-4,
        "hyperbolic ground level at kappa=1 is exactly 25, got {energy}"
    );
    assert_eq!(rows[0][1], "A'", "the ground state is inversion-even");
}

#[test]
fn build_matrix_emits_the_split_operator() {
    let text = run_ok(&[
        "build-matrix", "--beta", "-5", "--kappa", "3", "--irrep", "A1", "--dim", "8",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).expect("output is JSON");
    assert_eq!(v["irrep"], "A1");
    assert_eq!(v["beta"], -5.0);
    assert_eq!(v["kappa"], 3.0);
    assert_eq!(v["eta"], -15.0);
    assert_eq!(v["zeta"], 25.0);
    assert_eq!(v["dim"], 8);
    let diag = v["diag"].as_array().expect("diag is an array");
    let sub = v["sub"].as_array().expect("sub is an array");
    let sup = v["sup"].as_array().expect("sup is an array");
    assert_eq!(diag.len(), 8);
    assert_eq!(sub.len(), 7);
    assert_eq!(sup.len(), 7);

    // At kappa = 3 the A1 block detaches two states: the sub-diagonal zero
    // sits right below them.
    let split = v["split_index"].as_u64().expect("split_index is set") as usize;
    assert_eq!(split, 2);
    assert_eq!(sub[split - 1], 0.0, "the coupling at the split must vanish exactly");
}

#[test]
fn usage_errors_exit_code_one() {
    let cases: &[&[&str]] = &[
        // incomplete coupling parameters
        &["analytic", "--beta", "-5"],
        // rival parameter conventions in one invocation
        &["analytic", "--beta", "-5", "--kappa", "3", "--eta", "-15", "--zeta", "25"],
        // grid size that is not a power of two
        &["fgh", "--system", "trig", "--beta", "-5", "--kappa", "1", "--grid", "100"],
        // box override on the fixed angular domain
        &["fgh", "--system", "trig", "--beta", "-5", "--kappa", "1", "--box", "9"],
        // unknown reproduce target
        &["reproduce", "table7"],
        // no analytic block at non-integer kappa
        &["analytic", "--beta", "-5", "--kappa", "2.5"],
        // degenerate sampling grid
        &[
            "wavefunction", "--system", "trig", "--irrep", "A1", "--beta", "-5", "--kappa",
            "3", "--points", "1",
        ],
        // unknown subcommand (clap-level error)
        &["frobnicate"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(
            exit_code(&out),
            1,
            "`cqes {}` must exit 1; stderr: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(
            !out.stderr.is_empty(),
            "`cqes {}` must explain itself on stderr",
            args.join(" ")
        );
    }
}

#[test]
fn strict_mode_escalates_a_cramped_box_to_exit_two() {
    // A 2-unit box cannot hold eight hyperbolic levels. Without --strict the
    // solve is reported as-is; with it, box verification fails numerically.
    let relaxed = run(&[
        "fgh", "--system", "hyp", "--beta", "-5", "--kappa", "1", "--levels", "8", "--grid",
        "128", "--box", "2",
    ]);
    assert_eq!(
        exit_code(&relaxed),
        0,
        "without --strict the cramped box is the user's business: {}",
        String::from_utf8_lossy(&relaxed.stderr)
    );

    let strict = run(&[
        "fgh", "--system", "hyp", "--beta", "-5", "--kappa", "1", "--levels", "8", "--grid",
        "128", "--box", "2", "--strict",
    ]);
    assert_eq!(
        exit_code(&strict),
        2,
        "--strict must escalate the failed box check to a numerical failure; stderr: {}",
        String::from_utf8_lossy(&strict.stderr)
    );
}

#[test]
fn verify_reports_a_failed_pairing_with_exit_zero() {
    let out = run(&["verify", "--beta", "-2", "--kappa", "2.5", "--grid", "256"]);
    assert_eq!(
        exit_code(&out),
        0,
        "a broken pairing is a documented finding, not a tool failure"
    );
    let v: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("verify emits JSON");
    assert_eq!(v["holds"], false, "no pairing can hold at non-integer kappa");
    assert!(
        !v["pairs"].as_array().expect("pairs array").is_empty(),
        "the measured defects must still be listed"
    );
    assert_eq!(v["kappa"], 2.5);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_sinks() {
    let args = [
        "wavefunction", "--system", "trig", "--irrep", "A1", "--beta", "-5", "--kappa", "5",
        "--level", "1", "--points", "64",
    ];
    let first = run_ok(&args);
    let second = run_ok(&args);
    assert_eq!(first, second, "repeated runs must be byte-identical");

    let dir = scratch_dir("sink");
    let path = dir.join("wf.csv");
    let mut with_file: Vec<&str> = args.to_vec();
    let path_str = path.to_str().expect("scratch path is utf-8");
    with_file.extend(["--output", path_str]);
    let stdout = run_ok(&with_file);
    assert!(stdout.is_empty(), "--output must silence stdout");
    let written = std::fs::read_to_string(&path).expect("output file exists");
    assert_eq!(written, first, "file sink and stdout sink must agree");
}

#[test]
fn config_file_fills_flags_and_cli_overrides() {
    let dir = scratch_dir("config");
    let cfg = dir.join("base.json");
    std::fs::write(&cfg, r#"{"beta": -5.0, "kappa": 3.0, "irrep": "A1"}"#)
        .expect("config written");
    let cfg_str = cfg.to_str().expect("utf-8 path");

    let from_config = run_ok(&["analytic", "--config", cfg_str]);
    let rows = csv_rows(&from_config);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[1] == "A1"));

    // The command line wins over the file.
    let overridden = run_ok(&["analytic", "--config", cfg_str, "--irrep", "A2"]);
    let rows = csv_rows(&overridden);
    assert_eq!(rows.len(), 1, "the kappa=3 A2 block holds one state");
    assert_eq!(rows[0][1], "A2");
    let e_t: f64 = rows[0][3].parse().expect("E_t parses");
    assert!((e_t + 24.0).abs() < 1e-10, "A2 level at kappa=3 is exactly -24");

    // A typo in the file is a usage error, not a silent default.
    let bad = dir.join("typo.json");
    std::fs::write(&bad, r#"{"beta": -5.0, "kapa": 3.0}"#).expect("config written");
    let out = run(&["analytic", "--config", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1, "unknown config keys must be rejected");
}

#[test]
fn wavefunction_grid_covers_the_full_domain() {
    let text = run_ok(&[
        "wavefunction", "--system", "trig", "--irrep", "B1", "--beta", "-5", "--kappa", "6",
        "--level", "2", "--points", "33",
    ]);
    assert_eq!(csv_column_header(&text), "coord,value");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 33, "one row per requested sample");
    let first: f64 = rows[0][0].parse().expect("coord parses");
    let last: f64 = rows[32][0].parse().expect("coord parses");
    let two_pi = 2.0 * std::f64::consts::PI;
    assert_eq!(first, -two_pi, "angular grid starts at -2*pi");
    assert_eq!(last, two_pi, "angular grid ends at +2*pi");
}

#[test]
fn scan_writes_curve_and_event_files() {
    let dir = scratch_dir("scan");
    let base = dir.join("sweep");
    let base_str = base.to_str().expect("utf-8 path");
    run_ok(&[
        "scan", "--beta", "-2", "--kappa-start", "0.5", "--kappa-end", "2.5", "--steps", "4",
        "--levels", "4", "--grid", "64", "--output", base_str,
    ]);

    let curves = std::fs::read_to_string(dir.join("sweep_curves.csv")).expect("curves file");
    assert_eq!(
        csv_column_header(&curves),
        "kappa,system,label,level,E_t,minus_E_h"
    );
    let rows = csv_rows(&curves);
    assert!(
        rows.iter().any(|r| r[1] == "trig" && !r[4].is_empty() && r[5].is_empty()),
        "pendulum rows fill E_t only"
    );
    assert!(
        rows.iter().any(|r| r[1] == "hyp" && r[4].is_empty() && !r[5].is_empty()),
        "hyperbolic rows fill minus_E_h only"
    );
    let kappas: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert!(kappas.contains(&"5.0000000000000000e-1"));
    assert!(kappas.contains(&"2.5000000000000000e0"));

    let events = std::fs::read_to_string(dir.join("sweep_events.csv")).expect("events file");
    assert_eq!(csv_column_header(&events), "kind,system,kappa,labels,gap");
}

#[test]
fn reproduce_table4_check_is_green() {
    let dir = scratch_dir("table4");
    let out = run(&["reproduce", "table4-check", "--out-dir", dir.to_str().unwrap(), "--strict"]);
    assert_eq!(
        exit_code(&out),
        0,
        "closed forms and block roots must agree even under --strict: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("table4-check_manifest.json")).expect("manifest"),
    )
    .expect("manifest is JSON");
    assert_eq!(manifest["pass"], true);
    assert_eq!(manifest["failed"], 0);
    assert_eq!(
        manifest["checked"], 96,
        "four betas over every block with kappa <= 7 give 96 roots"
    );
    assert!(dir.join("table4-check.csv").is_file());
}

#[test]
fn reproduce_table6_matches_the_printed_column() {
    let dir = scratch_dir("table6");
    let out = run(&["reproduce", "table6", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(
        exit_code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("table6_manifest.json")).expect("manifest"),
    )
    .expect("manifest is JSON");
    assert_eq!(manifest["checked"], 66, "six columns of eleven slots");
    assert_eq!(manifest["failed"], 0, "every printed value must be reproduced");
    assert_eq!(manifest["pass"], true);

    let cells = manifest["cells"].as_array().expect("cells array");
    let analytic_cells = cells
        .iter()
        .filter(|c| c["provenance"] == "analytic route")
        .count();
    assert_eq!(
        analytic_cells, 21,
        "bold cells are the detached states: 1+2+...+6 of them"
    );
    // Parity bookkeeping: every cell records which sector it was measured in.
    assert!(cells
        .iter()
        .all(|c| c["label_measured"] == "A'" || c["label_measured"] == "A\""));
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"][..], &["analytic", "--help"][..]] {
        let out = run(args);
        assert_eq!(exit_code(&out), 0, "`cqes {}` is not an error", args.join(" "));
    }
}

/// Guard against path-handling regressions: reproduce must create nested
/// output directories rather than fail.
#[test]
fn reproduce_creates_the_output_directory() {
    let dir = scratch_dir("nested").join("a").join("b");
    assert!(!dir.exists());
    run_ok(&["reproduce", "table4-check", "--out-dir", dir.to_str().unwrap()]);
    assert!(dir.join("table4-check_manifest.json").is_file());
    let _ = std::fs::remove_dir_all(dir.parent().unwrap().parent().unwrap());
}
