use std::path::Path;
use std::process::{Command, Output};

fn gcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcs")).args(args).env_remove("CI").output().expect("run gcs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn seed_build_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d4 = dir.path().join("d4.json");
    let o = gcs(&["seed", "build", "--family", "double", "--n", "4", "--out", d4.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&d4);
    assert_eq!(v["format"], 1);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 32);

    let b = dir.path().join("b.json");
    let o = gcs(&["seed", "build", "--family", "band", "--n", "7", "--k", "4", "--out", b.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&b)["vertices"].as_array().unwrap().len(), 35);

    let o = gcs(&["seed", "build", "--family", "double", "--n", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("n >= 3"));
}

#[test]
fn verify_identities_is_byte_stable() {
    let args = ["verify", "identities", "--n", "3", "--points", "5", "--rng-seed", "7"];
    let (a, b) = (gcs(&args), gcs(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let ids: Vec<&str> = v["records"].as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"identities.kappa") && ids.contains(&"identities.special-exchange"));
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    assert_eq!(ids, sorted);
    assert!(v["records"].as_array().unwrap().iter().all(|r| !r["anchor"].as_str().unwrap().is_empty()));
}

#[test]
fn different_seeds_still_pass() {
    let o = gcs(&["verify", "identities", "--n", "4", "--rng-seed", "123"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn verify_charge_reports_the_census() {
    let o = gcs(&["verify", "charge", "--grid", "30", "--charge-bound", "8"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let census = v["records"].as_array().unwrap().iter().find(|r| r["id"] == "charge.census").unwrap();
    assert_eq!(census["values"]["types"]["[3,0,0]"], 54000);
    let sep = v["records"].as_array().unwrap().iter().find(|r| r["id"] == "charge.separated").unwrap();
    assert_eq!(sep["values"]["reachable"], false);
}

#[test]
fn verify_band_log_canonical_emits_omega() {
    let o = gcs(&["verify", "log-canonical", "--family", "band", "--n", "4", "--k", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let omega = v["records"][0]["values"]["omega"].as_array().unwrap();
    assert_eq!(omega.len(), 16);
    assert_eq!(omega[0][0], "0");
}

#[test]
fn configuration_errors_exit_with_two() {
    assert_eq!(code(&gcs(&["verify", "band", "--n", "3", "--k", "5"])), 2);
    assert_eq!(code(&gcs(&["verify", "compatibility", "--n", "2"])), 2);
    assert_eq!(code(&gcs(&["verify", "identities", "--family", "band"])), 2);
    assert_eq!(code(&gcs(&["verify", "nonsense"])), 2);
    assert_eq!(code(&gcs(&["verify", "charge", "--points", "0"])), 2);
    let ci = Command::new(env!("CARGO_BIN_EXE_gcs")).args(["verify", "charge"]).env("CI", "1").output().unwrap();
    assert_eq!(code(&ci), 2);
}

#[test]
fn range_and_workers_come_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_gcs"))
        .args(["verify", "identities", "--rng-seed", "1"])
        .env_remove("CI")
        .env("GCS_RANGE", "50")
        .env("GCS_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["parameters"]["range"], 50);
}

#[test]
fn mutate_round_trip_and_refusals() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    assert_eq!(code(&gcs(&["seed", "build", "--family", "double", "--n", "3", "--out", &p("s.json")])), 0);
    let o = gcs(&["mutate", &p("s.json"), "(2,1)", "--out", &p("m.json"), "--check-regular"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
    assert_eq!(code(&gcs(&["mutate", &p("m.json"), "(2,1)", "--out", &p("mm.json")])), 0);
    assert_eq!(json(Path::new(&p("mm.json")))["edges"], json(Path::new(&p("s.json")))["edges"]);
    assert_eq!(code(&gcs(&["mutate", &p("s.json"), "c1", "--out", &p("x.json")])), 2);
    assert_eq!(code(&gcs(&["mutate", &p("missing.json"), "(2,1)", "--out", &p("x.json")])), 2);

    assert_eq!(code(&gcs(&["seed", "build", "--family", "double", "--n", "4", "--out", &p("f.json")])), 0);
    let o = gcs(&["mutate", &p("f.json"), "(2,1)", "--out", &p("x.json"), "--check-regular"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("n <= 3"));
}
