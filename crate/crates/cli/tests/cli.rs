use std::process::Command;

fn muxsim(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_muxsim")).args(args).output().expect("binary runs")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn sweep_writes_csv_with_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = muxsim(&["sweep", "--seed", "11", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# seed: 11"));
    assert!(text.contains("# config_sha256: "));
    assert!(text.contains(&format!("# version: {}", env!("CARGO_PKG_VERSION"))));
    let lines = data_lines(&text);
    assert!(lines[0].starts_with("axis,value,mode,"));
    assert_eq!(lines.len(), 6);
}

#[test]
fn mc_sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "s.toml", "[sweep]\nvalues = [0.0297]\n");
    let args = ["sweep", "--config", &cfg, "--mode", "mc", "--cycles", "20000", "--seed", "5"];
    let a = muxsim(&args);
    let b = muxsim(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("# mode: mc"));
    assert!(data_lines(&text)[1].contains(",mc,"));
}

#[test]
fn other_subcommands_run() {
    for cmd in ["repeater", "calibrate", "tomography"] {
        let o = muxsim(&[cmd]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let text = String::from_utf8(o.stdout).unwrap();
        assert!(text.contains(&format!("# command: {cmd}")));
        assert!(data_lines(&text).len() >= 2);
    }
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.toml", "[interface]\ncount = 0\n");
    let unknown = write(&dir, "unknown.toml", "seed = 1\nflavour = 2\n");
    for path in [bad.as_str(), unknown.as_str(), "/definitely/missing.toml"] {
        let o = muxsim(&["sweep", "--config", path]);
        assert_eq!(o.status.code(), Some(2), "{path}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = muxsim(&["sweep", "--mode", "sometimes"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(&dir, "r.toml", "[calibration.visibilities]\nrl = 0.99\n");
    let o = muxsim(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let o = muxsim(&["sweep", "--out", "/definitely/missing/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bundled_scenarios_run() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios");
    for (file, cmd) in [("lifetime.toml", "sweep"), ("low_excitation_mc.toml", "sweep"), ("repeater.toml", "repeater")] {
        let path = format!("{dir}/{file}");
        let o = muxsim(&[cmd, "--config", &path, "--cycles", "20000"]);
        assert!(o.status.success(), "{file}: {}", String::from_utf8_lossy(&o.stderr));
    }
}
