use std::path::Path;
use std::process::{Command, Output};

fn simplicia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simplicia"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = simplicia(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn construct_then_info() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.json");
    stdout(&["construct", "cyclic", "-d", "4", "-n", "10", "-o", p(&file)]);
    let info = stdout(&["info", p(&file)]);
    assert!(info.contains("F=[10,45,70,35]"), "{info}");
    assert!(info.contains("Chi=0"), "{info}");
    assert!(info.contains("IsPseudoManifold=true"), "{info}");
    assert!(info.contains("IsOrientable=true"), "{info}");

    let json: serde_json::Value = serde_json::from_str(&stdout(&["info", "--json", p(&file)])).unwrap();
    assert_eq!(json["euler_characteristic"], 0);
    assert_eq!(json["f_vector"], serde_json::json!([10, 45, 70, 35]));

    let h = stdout(&["homology", p(&file)]);
    assert_eq!(h.trim(), "[ [ 0, [ ] ], [ 0, [ ] ], [ 0, [ ] ], [ 1, [ ] ] ]");
}

#[test]
fn slice_and_triangulate() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.json");
    let ns = dir.path().join("ns.json");
    let tri = dir.path().join("t.json");
    stdout(&["construct", "cyclic", "-d", "4", "-n", "10", "-o", p(&file)]);
    let out = stdout(&["slice", p(&file), "--sides", "1,3,5,7,9/2,4,6,8,10", "-o", p(&ns)]);
    assert!(out.contains("F=[25,70,0,35]"), "{out}");
    assert!(out.contains("Chi=-10"), "{out}");
    assert!(out.contains("TopologicalType=\"(T^2)#6\""), "{out}");
    let out = stdout(&["nstriangulate", p(&ns), "-o", p(&tri)]);
    assert!(out.contains("F=[25,105,70]"), "{out}");
    assert!(stdout(&["info", p(&tri)]).contains("Chi=-10"));
}

#[test]
fn reduce_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    stdout(&["construct", "stacked", "-d", "3", "-n", "12", "--seed", "3", "-o", p(&file)]);
    let first = stdout(&["reduce", p(&file), "--seed", "7", "-o", p(&a)]);
    let second = stdout(&["reduce", p(&file), "--seed", "7", "-o", p(&b)]);
    assert_eq!(first, second);
    assert!(first.contains("F=[5,10,10,5]"), "{first}");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert!(doc["move_log"].as_array().is_some_and(|m| !m.is_empty()));

    let bd = dir.path().join("bd.json");
    stdout(&["construct", "bdsimplex", "-d", "4", "-o", p(&bd)]);
    let eq = stdout(&["equivalent", p(&file), p(&bd)]);
    assert!(eq.starts_with("equivalent"), "{eq}");
}

#[test]
fn library_search() {
    let hits = stdout(&["lib", "search", "RP^3"]);
    assert!(hits.contains("RP^3 (11 vertices)"), "{hits}");
    let hits = stdout(&["lib", "search", "dim == 3 and chi == 0"]);
    assert!(hits.contains("cyclic_4_10.json"), "{hits}");
    assert!(!hits.contains("rp2_6.json"), "{hits}");
    let hits = stdout(&["lib", "search", "homology[1].torsion nonempty"]);
    assert!(hits.contains("rp2_6.json") && hits.contains("rp3_11.json"), "{hits}");
    assert_eq!(stdout(&["lib", "search", "zzz-nonexistent"]), "");
    let json: serde_json::Value = serde_json::from_str(&stdout(&["lib", "search", "--json", "Kummer"])).unwrap();
    assert_eq!(json[0]["f_vector"], serde_json::json!([16, 120, 400, 480, 192]));
}

#[test]
fn export_formats() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.json");
    stdout(&["construct", "bdsimplex", "-d", "3", "-o", p(&file)]);
    let topaz = stdout(&["export", p(&file), "--format", "topaz"]);
    assert!(topaz.contains("FACETS\n{0 1 2}\n"), "{topaz}");
    let tex = stdout(&["export", p(&file), "--format", "latex"]);
    assert_eq!(tex.lines().filter(|l| l.contains("$\\{")).count(), 4);
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let out = simplicia(&["info", p(&missing)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"schema_version\": 9}").unwrap();
    let out = simplicia(&["info", p(&bad)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema"));

    let file = dir.path().join("c.json");
    stdout(&["construct", "bdsimplex", "-d", "3", "-o", p(&file)]);
    assert!(!simplicia(&["export", p(&file), "--format", "docx"]).status.success());
    assert!(!simplicia(&["slice", p(&file), "--sides", "1,2/3,4"]).status.success());
    assert!(!simplicia(&["lib", "search", "dim === 3"]).status.success());
    assert!(!simplicia(&["construct", "cyclic", "-d", "4", "-o", p(&file)]).status.success());
}
