use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn binloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn makes_the_published_constants() {
    let o = binloc(&["repr", "make", "--kind", "ubl"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o).trim(),
        r#"{"ell":5,"perm":[24,1,4,19,15,16,21,13,9,26,18,0,23,12,6,22,3,28,20,14,30,7,5,27,29,10,8,31,2,17,25,11]}"#
    );
    assert_eq!(code(&binloc(&["repr", "make", "--kind", "ngg", "--ell", "6"])), 3);
}

#[test]
fn locality_report_uses_three_decimals() {
    let o = binloc(&["locality", "report", "--repr", "ngg"]);
    assert_eq!(stdout(&o), "ell,point_locality,dm,general_locality,dc\n5,8.350,588,,\n");
    let o = binloc(&["locality", "report", "--repr", "sb", "--ell", "11", "--general"]);
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert_eq!(row, "11,186.091,2084864,677.502,677.502");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&binloc(&["frobnicate"])), 2);
    assert_eq!(code(&binloc(&["sa", "--repr", "nope", "--target", "3"])), 2);
    assert_eq!(code(&binloc(&["reproduce", "fig9"])), 2);
    assert_eq!(code(&binloc(&["verify", "--max-ell", "11"])), 2);
    assert_eq!(code(&binloc(&["--help"])), 0);
}

#[test]
fn verify_passes_and_rejects_corrupt_input() {
    let o = binloc(&["verify", "--max-ell", "3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"ell":2,"perm":[0,0,1,2]}"#).unwrap();
    let o = binloc(&["verify", "--max-ell", "3", "--repr-file", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("not a permutation") && err.contains("index 1"), "{err}");
}

#[test]
fn local_maxima_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sb.json");
    assert_eq!(code(&binloc(&["repr", "make", "--kind", "sb", "--out", file.to_str().unwrap()])), 0);
    let o = binloc(&["fitness", "local-maxima", "--repr-file", file.to_str().unwrap(), "--target", "29"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 4, "{}", stdout(&o));
}

#[test]
fn manifests_replay_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sa.csv");
    let o = binloc(&[
        "sa", "--repr", "ubl", "--target", "15", "--trials", "500", "--generations", "300", "--seed", "7", "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let first = fs::read(&csv).unwrap();
    assert!(first.starts_with(b"generation,mean_fitness,best_fitness,fraction_at_optimum,online_performance\n"));
    assert_eq!(first.iter().filter(|&&b| b == b'\n').count(), 301);

    let manifest = dir.path().join("sa.manifest.json");
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["command"], "sa");
    assert_eq!(m["master_seed"], 7);
    assert_eq!(m["parameters"]["sa"]["trials"], 500);

    fs::remove_file(&csv).unwrap();
    assert_eq!(code(&binloc(&["replay", manifest.to_str().unwrap()])), 0);
    assert_eq!(fs::read(&csv).unwrap(), first);
}

#[test]
fn es_prints_its_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("es.csv");
    let o = binloc(&["es", "--repr", "brg", "--target", "31", "--trials", "300", "--out", csv.to_str().unwrap()]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("mean_generations_to_optimum,converged_fraction"));
    let values: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!(values[0] > 1.0 && values[1] == 1.0);
}

#[test]
fn ga_and_markov_write_csv() {
    let o = binloc(&["ga", "--function", "f3", "--repr", "ngg", "--trials", "10", "--generations", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 5);

    let o = binloc(&["markov", "--repr", "sb", "--target", "15", "--generations", "2000"]);
    let text = stdout(&o);
    assert!(text.starts_with("generation,mass_at_optimum,mass_at_15,mass_at_16\n1,0.03125,"));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[0], 2000.0);
    assert!((last[1] - 0.6).abs() < 0.02 && (last[1] + last[3] - 1.0).abs() < 0.01);

    let o = binloc(&["markov", "--repr", "sb", "--target", "31", "--absorption"]);
    assert_eq!(stdout(&o), "phenotype,genotype,probability\n31,31,1\n");
}

fn lines(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count()
}

#[test]
fn reproduce_writes_series_summary_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig2");
    let o = binloc(&["reproduce", "fig2", "--trials", "200", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(lines(&out.join("fig2_a15_sb.csv")), 2001);
    assert_eq!(lines(&out.join("fig2_summary.csv")), 9);
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("fig2.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["outputs"].as_array().unwrap().len(), 9);
    assert_eq!(m["parameters"]["reproduce"]["trials"], 200);

    let svg = dir.path().join("fig2.svg");
    let o = binloc(&[
        "plot",
        "--csv",
        out.join("fig2_a15_sb.csv").to_str().unwrap(),
        "--csv",
        out.join("fig2_a15_brg.csv").to_str().unwrap(),
        "--column",
        "fraction_at_optimum",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}
