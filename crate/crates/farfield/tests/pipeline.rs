//! End-to-end runs of the `farfield` binary: simulate → reconstruct →
//! metrics → figure, byte-stable outputs, and the documented exit codes.

use std::path::Path;
use std::process::Command;

fn farfield() -> Command {
    Command::new(env!("CARGO_BIN_EXE_farfield"))
}

fn write_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    std::fs::write(
        &path,
        "problem = elastic2d\n\
         source.name = example_two\n\
         directions.count = 15\n\
         frequencies.count = 20\n\
         grid.h = 0.2\n\
         indicators = f,p,s\n\
         output.dir = OUT\n"
            .replace("OUT", dir.join("out").to_str().unwrap()),
    )
    .unwrap();
    path
}

#[test]
fn full_cli_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let out = dir.path().join("out");

    let status = farfield().args(["simulate", "-c"]).arg(&cfg).status().unwrap();
    assert!(status.success());
    assert!(out.join("dataset_clean.txt").exists());
    let noisy = out.join("dataset_noisy.txt");
    assert!(noisy.exists());

    let status = farfield()
        .args(["reconstruct", "-c"])
        .arg(&cfg)
        .arg(&noisy)
        .status()
        .unwrap();
    assert!(status.success());
    for kind in ["f2d", "p2d", "s2d"] {
        assert!(out.join(format!("field_{kind}.txt")).exists());
    }

    let output = farfield()
        .args(["metrics", "-c"])
        .arg(&cfg)
        .arg(out.join("field_f2d.txt"))
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("e_F = "), "metrics output: {text}");
    assert!(out.join("metrics.csv").exists());

    let status = farfield()
        .arg("figure")
        .arg(out.join("field_f2d.txt"))
        .args(["--component", "2"])
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.join("field_f2d_c2_real.pgm").exists());
    assert!(out.join("field_f2d_c2_real.csv").exists());
    assert!(out.join("field_f2d_c2_real.txt").exists());
}

#[test]
fn simulate_outputs_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let noisy = dir.path().join("out/dataset_noisy.txt");

    assert!(farfield().args(["simulate", "-c"]).arg(&cfg).status().unwrap().success());
    let first = std::fs::read(&noisy).unwrap();
    assert!(farfield().args(["simulate", "-c"]).arg(&cfg).status().unwrap().success());
    let second = std::fs::read(&noisy).unwrap();
    assert_eq!(first, second);
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());

    // config error -> 2
    let bad_cfg = dir.path().join("bad.cfg");
    std::fs::write(&bad_cfg, "problem = warp\n").unwrap();
    let status = farfield().args(["simulate", "-c"]).arg(&bad_cfg).status().unwrap();
    assert_eq!(status.code(), Some(2));

    // io error (missing file) -> 3
    let status = farfield()
        .args(["metrics", "-c"])
        .arg(&cfg)
        .arg(dir.path().join("nope.txt"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));

    // dimension mismatch -> 4
    assert!(farfield().args(["simulate", "-c"]).arg(&cfg).status().unwrap().success());
    let em_cfg = dir.path().join("em.cfg");
    std::fs::write(
        &em_cfg,
        "problem = em3d\nsource.name = example_four\nslices = 3:0\n",
    )
    .unwrap();
    let status = farfield()
        .args(["reconstruct", "-c"])
        .arg(&em_cfg)
        .arg(dir.path().join("out/dataset_noisy.txt"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(4));

    // unknown indicator kind on the data -> rejected at config level
    let status = farfield()
        .args(["reconstruct", "-c"])
        .arg(&cfg)
        .args(["--set", "indicators=E"])
        .arg(dir.path().join("out/dataset_noisy.txt"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn cli_overrides_replace_config_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let output = farfield()
        .args(["simulate", "-c"])
        .arg(&cfg)
        .args(["--set", "directions.count=7", "--set", "frequencies.count=5"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("35 records"), "got: {text}");
}

#[test]
fn sweep_emits_table_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let output = farfield()
        .args(["sweep", "-c"])
        .arg(&cfg)
        .args(["--axis", "L", "--values", "7,15", "--set", "seeds.count=2"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("trend:"), "got: {text}");
    assert!(dir.path().join("out/sweep_L.csv").exists());
}

#[test]
fn output_dir_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path());
    let other = dir.path().join("elsewhere");
    let status = farfield()
        .args(["simulate", "-c"])
        .arg(&cfg)
        .env("FARFIELD_OUT", &other)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(other.join("dataset_noisy.txt").exists());
}
