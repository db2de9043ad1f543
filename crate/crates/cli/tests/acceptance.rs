//! Acceptance criterion covered at the command-line level: verification
//! reports are byte-identical across runs with the same seed.

use std::path::Path;
use std::process::Command;

fn run_verify(dir: &Path) {
    let out = Command::new(env!("CARGO_BIN_EXE_momerit"))
        .args([
            "verify",
            "--seed",
            "7",
            "--out-dir",
            dir.to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert_eq!(
        out.status.code(),
        Some(0),
        "verify failed:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn criterion_12_verification_reports_are_byte_identical() {
    let base = std::env::temp_dir().join(format!("momerit-accept-{}", std::process::id()));
    let a = base.join("run-a");
    let b = base.join("run-b");
    std::fs::create_dir_all(&a).unwrap();
    std::fs::create_dir_all(&b).unwrap();
    run_verify(&a);
    run_verify(&b);
    let csv_a = std::fs::read(a.join("report.csv")).unwrap();
    let csv_b = std::fs::read(b.join("report.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "CSV reports differ between identical runs");
    let txt_a = std::fs::read(a.join("report.txt")).unwrap();
    let txt_b = std::fs::read(b.join("report.txt")).unwrap();
    assert_eq!(txt_a, txt_b, "text reports differ between identical runs");
    println!("ACCEPTANCE 12 PASS: verification reports byte-identical across seeded runs");
}
