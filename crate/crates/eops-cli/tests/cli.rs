use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn eops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eops")).args(args).env_remove("EOPS_CACHE_DIR").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn ok(args: &[&str]) -> String {
    let out = eops(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out).trim_end().to_string()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    serde_json::from_str(&ok(&all)).expect("valid json")
}

#[test]
fn basis_listing() {
    let text = ok(&["basis", "--p", "2", "--ring", "E", "--length", "2", "--max-degree", "6"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.first(), Some(&"0\tE0_0 o E0_0"));
    assert!(lines.contains(&"3\tE0_1 o E0_2"));
    assert!(lines.iter().all(|l| l.split('\t').next().unwrap().parse::<u32>().unwrap() <= 6));
    let j = json(&["basis", "--p", "2", "--ring", "E", "--length", "2", "--max-degree", "6"]);
    assert_eq!(j["elements"].as_array().unwrap().len(), lines.len());
}

#[test]
fn verify_relations_prints_ok() {
    assert_eq!(ok(&["verify", "relations", "--p", "3", "--max-degree", "12"]), "OK");
    let j = json(&["verify", "mixed-adem", "--p", "2", "--max-degree", "6"]);
    assert_eq!(j["passed"], Value::Bool(true));
    assert!(j["cases"].as_u64().unwrap() > 0);
}

#[test]
fn coinvariant_table_at_two() {
    let text = ok(&["oracle", "coinvariants", "--p", "2", "--n", "2", "--max-degree", "12", "--table"]);
    // the Dickson algebra has generators in degrees 2 and 3
    let dims: Vec<u32> = text.lines().skip(1).map(|l| l.split('\t').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(dims, vec![1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 3]);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(eops(&["reduce", "E0_1"]).status.code(), Some(1));
    assert_eq!(eops(&["reduce", "--p", "4", "E0_1"]).status.code(), Some(1));
    assert_eq!(eops(&["reduce", "--p", "2", "--max-degree", "65", "E0_1"]).status.code(), Some(1));
    assert_eq!(
        eops(&["reduce", "--p", "2", "--max-degree", "65", "--allow-high-degree", "E0_1"]).status.code(),
        Some(0)
    );
    assert_eq!(eops(&["verify", "nonsense", "--p", "2"]).status.code(), Some(1));
    assert_eq!(eops(&["sharp", "--p", "5", "E0_1", "E0_1"]).status.code(), Some(1));
    let out = eops(&["reduce", "--p", "3", "E1_0"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("at byte 0") && err.contains("E1_0"), "{err}");
    assert_eq!(eops(&["--help"]).status.code(), Some(0));
}

#[test]
fn degree_cap_guards_intermediate_results() {
    let out = eops(&["circ", "--p", "3", "--max-degree", "8", "E0_2", "E0_2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds --max-degree 8"));
}

#[test]
fn small_products() {
    assert_eq!(ok(&["sharp", "--p", "2", "E0_1", "E0_1"]), "E0_1^2");
    // [m] ♯ [n] = [n^m]
    assert_eq!(ok(&["sharp", "--p", "2", "[2]", "[3]"]), "[9]");
    assert_eq!(ok(&["sharp", "--p", "3", "[3]", "[2]"]), "[8]");
    assert_eq!(ok(&["dot", "--p", "3", "[2]", "[3]"]), "[5]");
    assert_eq!(ok(&["circ", "--p", "3", "[2]", "[3]"]), "[6]");
    assert_eq!(ok(&["counit", "--p", "2", "[3] * E0_1"]), "0");
    assert_eq!(ok(&["counit", "--p", "2", "[3]"]), "1");
    assert_eq!(ok(&["psi", "--p", "2", "E0_2"]), "(E0_0) ⊗ (E0_2) + (E0_1) ⊗ (E0_1) + (E0_2) ⊗ (E0_0)");
    // the mod-2 Bockstein is Sq^1_*
    assert_eq!(ok(&["bockstein", "--p", "2", "E0_2"]), ok(&["steenrod", "--p", "2", "--k", "1", "E0_2"]));
    assert_eq!(ok(&["bockstein", "--p", "2", "E0_2"]), "E0_1");
    assert_eq!(ok(&["bockstein", "--p", "3", "E0_2"]), "E1_2");
    // Q^{|z|} z = z^p at p = 2
    assert_eq!(ok(&["dl-to-e", "--p", "2", "Q1", "--on", "z[1]"]), "z[1]^2");
    assert_eq!(ok(&["reduce", "--p", "2", "E0_1 o z[1]"]), "z[1]^2");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["sharp", "--p", "3", "E0_1", "E0_2", "--json"][..],
        &["psi", "--p", "3", "E0_1 * E1_2 + [2]"],
        &["free-homology", "--p", "3", "--spheres", "1,2", "--max-degree", "12", "--generators"],
    ] {
        let a = eops(args);
        let b = eops(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), Some(0));
    }
}

/// The `text` of an element result evaluates back to the same element.
#[test]
fn element_json_round_trips_through_the_parser() {
    let cases: [(&str, &[&str]); 7] = [
        ("3", &["reduce", "--p", "3", "E0_1 o E0_2 + 2*E1_1 o E0_2"]),
        ("2", &["sharp", "--p", "2", "E0_2", "E0_1"]),
        ("3", &["sharp", "--p", "3", "E0_1", "E0_1"]),
        ("3", &["dot", "--p", "3", "[2] * E1_1", "E0_1 o E0_1 + [1]"]),
        ("2", &["reduce", "--p", "2", "E0_3 o z[1] * z[2] + (E0_2 o z[2])^2"]),
        ("3", &["steenrod", "--p", "3", "--k", "1", "E0_2 o z[2]"]),
        ("3", &["reduce", "--p", "3", "2*[1] + E0_1 o E0_1"]),
    ];
    for (p, args) in cases {
        let first = json(args);
        let text = first["text"].as_str().unwrap().to_string();
        let again = json(&["reduce", "--p", p, &text]);
        assert_eq!(again["terms"], first["terms"], "{args:?} printed {text}");
    }
}

#[test]
fn cache_directory_is_populated_and_reused() {
    let dir: PathBuf = std::env::temp_dir().join(format!("eops-cli-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_eops"))
            .args(["sharp", "--p", "3", "E0_1 o E0_1", "E1_1"])
            .env("EOPS_CACHE_DIR", &dir)
            .output()
            .unwrap()
    };
    let cold = run();
    assert_eq!(cold.status.code(), Some(0));
    assert!(dir.join("rewrite-p3.bin").exists());
    assert!(dir.join("sharp-p3.bin").exists());
    let warm = run();
    assert_eq!(warm.stdout, cold.stdout);
    assert!(warm.stderr.is_empty(), "{}", String::from_utf8_lossy(&warm.stderr));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn free_homology_from_a_presentation_file() {
    let dir = std::env::temp_dir().join(format!("eops-cli-pres-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("circle.json");
    std::fs::write(&path, r#"{"p": 2, "classes": [{"name": "b", "degree": 0}, {"name": "x", "degree": 1}], "basepoint": "b", "pi0": ["b"]}"#)
        .unwrap();
    let from_file = json(&["free-homology", "--p", "2", "--input", path.to_str().unwrap(), "--max-degree", "8"]);
    let from_spheres = json(&["free-homology", "--p", "2", "--spheres", "1", "--max-degree", "8"]);
    assert_eq!(from_file["dims"], from_spheres["dims"]);
    let gens = json(&["free-homology", "--p", "2", "--spheres", "1", "--max-degree", "4", "--generators"]);
    let symbols: Vec<&str> =
        gens["generators"].as_array().unwrap().iter().map(|g| g["symbol"].as_str().unwrap()).collect();
    assert_eq!(symbols, vec!["z[1]", "(E0_2 o z[1])", "(E0_3 o z[1])"]);
    for s in symbols {
        assert_eq!(eops(&["reduce", "--p", "2", s]).status.code(), Some(0), "{s}");
    }
    assert_eq!(eops(&["free-homology", "--p", "3", "--input", path.to_str().unwrap()]).status.code(), Some(1));
    let _ = std::fs::remove_dir_all(&dir);
}
