use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_nodesim");

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn nodesim(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("NODESIM_CALIBRATION")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const KEY: &str = "000102030405060708090a0b0c0d0e0f";
const KEY2: &str = "f0e0d0c0b0a090807060504030201000";

#[test]
fn usecase_summary_is_json() {
    let o = nodesim(&["usecase", "EEG_SEIZURE", "--level", "all", "--summary-only"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 7);
    assert!(v["battery"]["iterations"].as_f64().unwrap() > 1e8);

    let o = nodesim(&["usecase", "FACE_DETECT", "--level", "all", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);

    let o = nodesim(&["usecase", "NOPE"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn xts_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let pt: Vec<u8> = (0..4096u32).map(|i| (i * 7 % 251) as u8).collect();
    let (p, c, back) = (dir.path().join("pt"), dir.path().join("ct"), dir.path().join("back"));
    std::fs::write(&p, &pt).unwrap();
    let o = nodesim(&["crypt", "--mode", "xts", "--key", KEY, "--key2", KEY2, "--sector", "77", "--out", s(&c), s(&p)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let ct = std::fs::read(&c).unwrap();
    assert_eq!(ct.len(), pt.len());
    assert_ne!(ct, pt);
    let o = nodesim(&[
        "crypt", "--mode", "xts", "--op", "decrypt", "--key", KEY, "--key2", KEY2, "--sector", "77", "--out", s(&back), s(&c),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(&back).unwrap(), pt);
}

#[test]
fn unaligned_xts_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("odd");
    std::fs::write(&p, [0u8; 33]).unwrap();
    let o = nodesim(&["crypt", "--mode", "xts", "--key", KEY, s(&p)]);
    assert_eq!(code(&o), 1);
    assert!(!o.stderr.is_empty());
}

#[test]
fn sponge_tag_tamper_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let (p, c) = (dir.path().join("pt"), dir.path().join("ct"));
    std::fs::write(&p, b"attack at dawn, bring snacks").unwrap();
    let common = ["--mode", "sponge-ae", "--key", KEY, "--iv", "0011223344556677"];
    let mut args = vec!["crypt"];
    args.extend(common);
    args.extend(["--out", s(&c), s(&p)]);
    assert_eq!(code(&nodesim(&args)), 0);

    let mut args = vec!["crypt"];
    args.extend(common);
    args.extend(["--op", "decrypt", s(&c)]);
    let o = nodesim(&args);
    assert_eq!(code(&o), 0);
    assert_eq!(o.stdout, b"attack at dawn, bring snacks");

    let mut ct = std::fs::read(&c).unwrap();
    let last = ct.len() - 1;
    ct[last] ^= 0x01;
    std::fs::write(&c, &ct).unwrap();
    assert_eq!(code(&nodesim(&args)), 3);
}

#[test]
fn conv_check_on_golden_case() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = data("golden/hwce/fs3_p16_yin/manifest.json");
    let o = nodesim(&["conv", s(&manifest), "--check", "--out", s(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let produced = std::fs::read(dir.path().join("out_0.bin")).unwrap();
    assert_eq!(produced, std::fs::read(data("golden/hwce/fs3_p16_yin/out_0.bin")).unwrap());
}

#[test]
fn verify_passes_and_fails() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("uav.json");
    let o = nodesim(&["usecase", "UAV_RESNET20", "--level", "all", "--summary-only", "--out", s(&report)]);
    assert_eq!(code(&o), 0);
    let targets = data("targets/uav_resnet20.json");
    let o = nodesim(&["verify", s(&report), s(&targets)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));

    let strict = dir.path().join("strict.json");
    std::fs::write(
        &strict,
        r#"{"label":"too strict","targets":[{"metric":"best.total_joules","value":1e-3,"rel_tol":0.01}]}"#,
    )
    .unwrap();
    let o = nodesim(&["verify", s(&report), s(&strict)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn simulate_many_scenarios_into_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let a = data("scenarios/secure_tile.json");
    let b = data("scenarios/sponge_then_sleep.json");
    let o = nodesim(&["simulate", s(&a), s(&b), "--jobs", "2", "--summary-only", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names, ["secure_tile.json", "sponge_then_sleep.json"]);

    // same input, same bytes
    let again = dir.path().join("again");
    nodesim(&["simulate", s(&a), s(&b), "--jobs", "1", "--summary-only", "--out", s(&again)]);
    for n in &names {
        assert_eq!(std::fs::read(out.join(n)).unwrap(), std::fs::read(again.join(n)).unwrap());
    }
}

#[test]
fn infeasible_scenario_exits_2() {
    let o = nodesim(&["simulate", s(&data("scenarios/tile_too_big.json"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn calibration_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut cal: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(data("calibration.json")).unwrap()).unwrap();
    let doubled = cal["power_table"]["soc_mw"]["value"].as_f64().unwrap() * 2.0;
    cal["power_table"]["soc_mw"]["value"] = doubled.into();
    let path = dir.path().join("cal.json");
    std::fs::write(&path, cal.to_string()).unwrap();

    let run = |env: Option<&Path>| {
        let mut c = Command::new(BIN);
        c.args(["usecase", "EEG_SEIZURE", "--summary-only"]).env_remove("NODESIM_CALIBRATION");
        if let Some(p) = env {
            c.env("NODESIM_CALIBRATION", p);
        }
        let o = c.output().unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["total_joules"].as_f64().unwrap()
    };
    assert!(run(Some(&path)) > run(None));
}

#[test]
fn calibrate_writes_a_loadable_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fit.json");
    let o = nodesim(&["calibrate", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = nodesim(&["--calibration", s(&out), "usecase", "FACE_DETECT", "--summary-only"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}
