use assert_cmd::Command;
use serde_json::Value;

fn qkahler() -> Command {
    Command::cargo_bin("qkahler").unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = qkahler().args(args).assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn spectrum_csv_has_preamble_and_multiplicities() {
    let out = qkahler()
        .args(["spectrum", "--q", "1/2", "--cutoff", "3"])
        .assert()
        .success();
    let text = String::from_utf8(out.get_output().stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# qkahler q=1/2 cutoff=3 mode=exact ledger-hash="));
    assert_eq!(
        lines.next().unwrap(),
        "block,eigenvalue_exact,eigenvalue_float,multiplicity"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let mults: Vec<&str> = rows.iter().map(|r| r[3]).collect();
    assert_eq!(mults, ["1", "6", "10", "14"]);
    assert_eq!(rows[1][1], "5/4");
}

#[test]
fn spectrum_json_carries_the_envelope() {
    let v = json(&["spectrum", "--cutoff", "2", "--format", "json"]);
    assert_eq!(v["q"], "4/5");
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["ledger-hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn numeric_and_exact_spectra_agree() {
    let exact = json(&["spectrum", "--cutoff", "4", "--format", "json"]);
    let numeric = json(&["spectrum", "--cutoff", "4", "--format", "json", "--mode", "numeric"]);
    let values = |v: &Value| -> Vec<f64> {
        v["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| r["eigenvalue_float"].as_f64().unwrap())
            .collect()
    };
    for (a, b) in values(&exact).iter().zip(values(&numeric)) {
        assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
    }
}

#[test]
fn untwisted_index_is_one() {
    let v = json(&["index", "--cutoff", "3"]);
    assert_eq!(v["index_dbar"], 1);
    assert_eq!(v["index_del"], 1);
    assert_eq!(v["h01"], 0);
}

#[test]
fn negative_bundle() {
    let v = json(&["bundle", "--k", "-2", "--cutoff", "3"]);
    assert_eq!(v["holomorphic_sections"], 0);
    assert_eq!(v["index"], -1);
    assert_eq!(v["cohomology"]["0,1"], 1);
    assert_eq!(v["theta_exact"], "-656/625");
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_passes_in_every_mode() {
    for mode in ["exact", "numeric"] {
        let v = json(&["verify", "--cutoff", "2", "--mode", mode]);
        assert!(v["failures"].as_array().unwrap().is_empty(), "{mode}");
    }
    let v = json(&["verify", "--n", "2", "--q", "1"]);
    assert_eq!(v["suites"][0]["passed"], true);
}

#[test]
fn output_is_deterministic() {
    let run = || {
        qkahler()
            .args(["verify", "--cutoff", "2"])
            .assert()
            .success()
            .get_output()
            .stdout
            .clone()
    };
    assert_eq!(run(), run());
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("qkahler-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dims.json");
    qkahler()
        .args(["dims", "--n", "3", "--format", "json", "--out"])
        .arg(&path)
        .assert()
        .success()
        .stdout("");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["by_degree"], serde_json::json!([1, 6, 15, 20, 15, 6, 1]));
    assert_eq!(v["classical"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn blocks_have_square_dimensions() {
    let v = json(&["blocks", "--cutoff", "4"]);
    let dims: Vec<u64> = v["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [1, 4, 9, 16, 25]);
}

#[test]
fn exit_codes() {
    let out = qkahler().args(["index", "--cutoff", "0"]).assert().code(3);
    let v: Value = serde_json::from_slice(&out.get_output().stdout).unwrap();
    assert_eq!(v["failures"][0]["suite"], "cutoff stability");
    qkahler().args(["spectrum", "--q", "-1"]).assert().code(1);
    qkahler().args(["dims", "--n", "7"]).assert().code(1);
    qkahler().args(["frobnicate"]).assert().code(1);
}
