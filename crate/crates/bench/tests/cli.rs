use std::fs;
use std::process::{Command, Output};

use nide_bench::experiment::CSV_HEADER;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nide-bench"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

const SMALL: [&str; 8] = [
    "--length", "256", "--levels", "4", "--trials", "3", "--snr", "4,8",
];

#[test]
fn bench_csv_is_deterministic() {
    let args: Vec<&str> = ["bench", "--signal", "blocks,doppler"]
        .iter()
        .chain(&SMALL)
        .copied()
        .collect();
    let first = stdout(&args);
    assert_eq!(first, stdout(&args));
    let mut lines = first.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 2 * 4 * 2);
}

#[test]
fn bench_json_and_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.json");
    let mut args: Vec<&str> = vec![
        "bench",
        "--method",
        "nide,visu",
        "--format",
        "json",
        "--noise",
        "ar1:0.5",
    ];
    args.extend(SMALL);
    args.extend(["--out", path.to_str().unwrap()]);
    assert!(stdout(&args).is_empty());
    let value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let rows = value["rows"].as_array().expect("rows array");
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["mean_mse"].as_f64().unwrap() > 0.0));
}

#[test]
fn denoise_file_writes_column_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let output = dir.path().join("out.csv");
    let samples: Vec<String> = (0..200)
        .map(|i| format!("{}", ((i / 50) % 2) as f64 + 0.01 * (i % 7) as f64))
        .collect();
    fs::write(&input, format!("x\n{}\n", samples.join("\n"))).unwrap();
    let base = [
        "denoise-file",
        "--input",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--levels",
        "3",
    ];

    assert!(
        !run(&base).status.success(),
        "non power-of-two input must be rejected"
    );

    let padded: Vec<&str> = base.iter().copied().chain(["--pad", "zero"]).collect();
    let out = run(&padded);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let column = fs::read_to_string(&output).unwrap();
    let mut lines = column.lines();
    assert_eq!(lines.next(), Some("denoised"));
    assert!(lines.all(|l| l.parse::<f64>().is_ok()));
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out.csv.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["lambda"].as_f64(), Some(4.5));
    assert!(sidecar["threshold"].as_f64().unwrap() >= 0.0);
    assert!(sidecar["sigma_used"].as_f64().unwrap() > 0.0);
}

#[test]
fn trace_emits_band_rows() {
    let text = stdout(&["trace", "--length", "512", "--levels", "3", "--seed", "4"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("z,g,lower,upper"));
    assert_eq!(lines.count(), 512 - 64);
}

#[test]
fn mc_reports_and_fails_loudly() {
    let text = stdout(&[
        "mc",
        "--formula",
        "appendixB",
        "--runs",
        "2000",
        "--n",
        "256",
    ]);
    assert!(text.contains("PASS"), "{text}");
    let bad = run(&["mc", "--formula", "nonsense"]);
    assert!(!bad.status.success());
}

#[test]
fn lambda_sweep_lists_each_lambda() {
    let text = stdout(&[
        "lambda-sweep",
        "--length",
        "256",
        "--levels",
        "4",
        "--trials",
        "2",
        "--lambdas",
        "3,4.5",
    ]);
    assert_eq!(text.lines().count(), 3);
}
