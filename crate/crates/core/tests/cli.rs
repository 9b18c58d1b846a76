use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn digrow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digrow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".dpres").tempfile().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn growth_csv_of_free_a() {
    let f = fixture("free_a.dpres");
    let o = digrow(&["growth", f.to_str().unwrap(), "--max-degree", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let cumulative: Vec<u64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let expected: Vec<u64> = (1..=10).map(|n| n * (n + 1) / 2).collect();
    assert_eq!(cumulative, expected);
    assert!(stdout(&o).starts_with("n,count_n,cumulative_n,mode\n"));
}

#[test]
fn gk_of_free_a() {
    let f = fixture("free_a.dpres");
    let o = digrow(&["gk", f.to_str().unwrap(), "--max-degree", "512", "--window", "128:512"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let slope = v["slope"].as_f64().unwrap();
    assert!((1.9..=2.1).contains(&slope), "{slope}");
    assert_eq!(v["classification"]["kind"], "polynomial");
}

#[test]
fn verify_comm_ab() {
    let f = fixture("comm_ab.dpres");
    let o = digrow(&["verify", f.to_str().unwrap(), "--max-degree", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("GK(D) = GK(A_D) = 2"));
    let o = digrow(&["verify", f.to_str().unwrap(), "--max-degree", "10", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["identities"]["predicted_gk"], 2);
    assert_eq!(v["special_basis"]["m"], 1);
}

#[test]
fn verify_every_fixture() {
    for name in [
        "free_a.dpres",
        "free_ab.dpres",
        "comm_a.dpres",
        "lcomm_ab.dpres",
        "cross_ab.dpres",
        "middles_a.dpres",
        "remark.dpres",
    ] {
        let f = fixture(name);
        let o = digrow(&["verify", f.to_str().unwrap(), "--max-degree", "8"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}{}", stdout(&o), stderr(&o));
    }
    let o = digrow(&["verify", fixture("remark.dpres").to_str().unwrap(), "--max-degree", "8"]);
    assert!(stderr(&o).contains("warning: inhomogeneous"));
}

#[test]
fn normal_form_verb() {
    let f = fixture("remark.dpres");
    let o = digrow(&["nf", f.to_str().unwrap(), "--expr", "[a a]@2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[b]@1 + [a a]@1\n");
    let o = digrow(&["nf", f.to_str().unwrap(), "--expr", "[a a]@2", "--mode", "assoc"]);
    assert_eq!(stdout(&o), "[a a]@1\n");
    let o = digrow(&["nf", f.to_str().unwrap(), "--expr", "[a c]@1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = digrow(&["nf", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn basis_verb_and_out_file() {
    let f = fixture("free_ab.dpres");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.json");
    let o = digrow(&["basis", f.to_str().unwrap(), "--max-degree", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["basis"].as_array().unwrap().len(), 10);
    assert_eq!(v["mode"], "dialgebra");
    let o = digrow(&["basis", f.to_str().unwrap(), "--max-degree", "2", "--format", "text", "--mode", "assoc"]);
    assert_eq!(stdout(&o), "[a]@1\n[b]@1\n[a a]@1\n[a b]@1\n[b a]@1\n[b b]@1\n");
}

#[test]
fn output_is_deterministic() {
    let f = fixture("lcomm_ab.dpres");
    for verb in ["basis", "growth", "gk", "verify"] {
        let args = [verb, f.to_str().unwrap(), "--max-degree", "7", "--format", "json"];
        let a = digrow(&args);
        let b = Command::new(env!("CARGO_BIN_EXE_digrow"))
            .args(args)
            .env("DIGROW_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(a.stdout, b.stdout, "{verb}");
        assert_eq!(a.status.code(), Some(0));
    }
}

#[test]
fn exit_codes() {
    let f = fixture("free_ab.dpres");
    let f = f.to_str().unwrap();
    // Resource cap on two generators, lifted by --force.
    assert_eq!(digrow(&["growth", f, "--max-degree", "13"]).status.code(), Some(3));
    assert_eq!(digrow(&["growth", f, "--max-degree", "13", "--force"]).status.code(), Some(0));
    assert_eq!(digrow(&["growth", f, "--max-degree", "40", "--mode", "assoc"]).status.code(), Some(0));
    // Invalid input.
    assert_eq!(digrow(&["growth", "/nonexistent.dpres"]).status.code(), Some(1));
    assert_eq!(digrow(&["gk", f, "--max-degree", "8", "--window", "1:8"]).status.code(), Some(1));
    assert_eq!(digrow(&["gk", f, "--max-degree", "8", "--window", "4:9"]).status.code(), Some(1));
    assert_eq!(digrow(&["gk", f, "--window", "4-9"]).status.code(), Some(1));
    assert_eq!(digrow(&["growth", f, "--max-degree", "0"]).status.code(), Some(1));
    assert_eq!(digrow(&["growth", f, "--format", "xml"]).status.code(), Some(1));
    let dup = temp_file("generators a a\n");
    let o = digrow(&["growth", dup.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 1, column 14: duplicate generator"), "{}", stderr(&o));
    let bad = temp_file("field gf 10\ngenerators a\n");
    assert_eq!(digrow(&["growth", bad.path().to_str().unwrap()]).status.code(), Some(1));
    let env = Command::new(env!("CARGO_BIN_EXE_digrow"))
        .args(["growth", f])
        .env("DIGROW_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(1));
}

#[test]
fn verification_failure_exits_two() {
    // An associative-mode relator that the dialgebra side lacks cannot be
    // built from a file, so break theorem A through the library instead.
    use digrow::growth::{theorem_a_check, GrowthSeries};
    use digrow::presentation::Mode;
    let d = GrowthSeries::from_cumulative(vec![1, 2], Mode::Dialgebra).unwrap();
    let a = GrowthSeries::from_cumulative(vec![1, 3], Mode::Associative).unwrap();
    assert!(!theorem_a_check(&d, &a, 1).passed());
    assert_eq!(digrow::cli::EXIT_VERIFY, 2);
}
