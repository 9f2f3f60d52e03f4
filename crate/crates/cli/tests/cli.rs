use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn sofic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sofic"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = sofic(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Checks that `value` has exactly the keys the schema allows and at least
/// the ones it requires.
fn conforms(value: &Value, schema: &str) {
    let text = std::fs::read_to_string(root().join("schemas").join(schema)).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let obj = value.as_object().expect("object output");
    if let Some(required) = schema["required"].as_array() {
        for key in required {
            assert!(obj.contains_key(key.as_str().unwrap()), "missing {key} in {value}");
        }
    }
    if let Some(props) = schema["properties"].as_object() {
        for key in obj.keys() {
            assert!(props.contains_key(key), "unexpected key {key}");
        }
    }
}

#[test]
fn measure_numbers_of_the_two_codings() {
    let g1 = json(&["meas", "data/graphs/gamma1.json"]);
    let g2 = json(&["meas", "data/graphs/gamma2.json"]);
    conforms(&g1, "measure_number.schema.json");
    assert_eq!(g1["measure_number"], 2);
    assert_eq!(g2["measure_number"], 1);
    assert_eq!(g2["witness"], "0");
}

#[test]
fn f_vector_of_a_non_resolving_graph() {
    let f = json(&["mu-f", "data/graphs/gamma.json"]);
    assert_eq!(f, serde_json::json!({"a": "1/2", "b": "1/1"}));
    let weighted = json(&["mu-f", "data/graphs/gamma.json", "--weights", "0=1/3,1=2/3"]);
    assert_eq!(weighted["b"], "1/1");
}

#[test]
fn report_and_vectors_conform() {
    let r = json(&["report", "data/graphs/gamma2.json", "--weights", "0=1/4,1=3/4"]);
    conforms(&r, "measure_report.schema.json");
    let f = &r["F"];
    let sum: f64 = f
        .as_object()
        .unwrap()
        .values()
        .map(|v| {
            let (p, q) = v.as_str().unwrap().split_once('/').unwrap();
            p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap()
        })
        .sum();
    assert!((sum - 1.0).abs() < 1e-12);
    conforms(&json(&["determinize", "data/graphs/gamma.json"]), "determinize.schema.json");
    conforms(&json(&["full-shift", "data/graphs/word_labels.json"]), "full_shift.schema.json");
}

#[test]
fn tile_reports() {
    let r = json(&["tile", "data/pairs/pair_0_3.json"]);
    conforms(&r, "tile_report.schema.json");
    assert_eq!(r["tile_measure"], 3);
    assert_eq!(r["osc"], false);
    let overlaps: Vec<&str> = r["intersections"].as_object().unwrap().values().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(overlaps, ["3/1", "2/1", "2/1", "1/1", "1/1", "0/1", "0/1"]);

    let dragon = json(&["tile", "data/pairs/twin_dragon.json"]);
    assert_eq!(dragon["tile_measure"], 1);
    assert_eq!(dragon["osc"], true);

    let stored = json(&["tile", "--nucleus", "data/nuclei/adding_machine.json"]);
    conforms(&stored, "tile_report.schema.json");
    assert!(stored.get("intersections").is_none());
    assert_eq!(stored["tile_measure"], 1);
}

#[test]
fn nucleus_output_is_deterministic_and_reloadable() {
    let a = sofic(&["nucleus", "data/pairs/twin_dragon.json"]);
    let b = sofic(&["nucleus", "data/pairs/twin_dragon.json"]);
    assert_eq!(a.stdout, b.stdout);
    let value: Value = serde_json::from_slice(&a.stdout).unwrap();
    conforms(&value, "nucleus.schema.json");
    let stored = std::fs::read_to_string(root().join("data/nuclei/adding_machine.json")).unwrap();
    let fresh = sofic(&["nucleus", "data/pairs/adding_machine.json"]);
    assert_eq!(serde_json::from_str::<Value>(&stored).unwrap(), serde_json::from_slice::<Value>(&fresh.stdout).unwrap());
}

#[test]
fn oracle_and_raster() {
    let e = json(&["oracle", "data/pairs/twin_dragon.json", "--level", "16", "--cell", "2^-5"]);
    conforms(&e, "estimate.schema.json");
    assert!((e["estimate"].as_f64().unwrap() - 1.0).abs() < 0.1);
    assert_eq!(e["cell"], 0.03125);

    let dir = std::env::temp_dir().join(format!("sofic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pgm = dir.join("dragon.pgm");
    let csv = dir.join("dragon.csv");
    let r = json(&[
        "raster",
        "data/pairs/twin_dragon.json",
        "--level",
        "10",
        "--res",
        "32",
        "-o",
        pgm.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    conforms(&r, "raster.schema.json");
    let bytes = std::fs::read(&pgm).unwrap();
    assert!(bytes.starts_with(b"P5\n32 32\n255\n"));
    assert_eq!(bytes.len(), b"P5\n32 32\n255\n".len() + 32 * 32);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 32);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn text_format() {
    let out = sofic(&["--format", "text", "meas", "data/graphs/gamma1.json"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("measure number: 2\n"));
}

#[test]
fn exit_codes() {
    let bad_pair = sofic(&["tile", "data/pairs/invalid_same_coset.json"]);
    assert_eq!(bad_pair.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_pair.stderr).starts_with("error[input]"));
    // Γ is not right-resolving.
    assert_eq!(sofic(&["meas", "data/graphs/gamma.json"]).status.code(), Some(2));
    assert_eq!(sofic(&["meas", "data/graphs/missing.json"]).status.code(), Some(2));
    // Raster resolution above the cap.
    let capped = sofic(&["raster", "data/pairs/twin_dragon.json", "--level", "4", "--res", "100000", "-o", "/dev/null"]);
    assert_eq!(capped.status.code(), Some(3));
    // Raster needs a planar tile.
    let line = sofic(&["raster", "data/pairs/pair_0_3.json", "--level", "4", "--res", "8", "-o", "/dev/null"]);
    assert_eq!(line.status.code(), Some(2));
}
