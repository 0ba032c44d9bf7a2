use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plmorse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn validate_collapsed_interval() {
    let o = run(&["validate", "--complex", &data("interval.json"), "--morse", &data("interval_collapsed.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("morse ✓ generic ✓ tame ✓"));
    assert!(stdout(&o).contains("∂²=0 ✓"));
}

#[test]
fn validate_reports_generic_violation() {
    let o = run(&["validate", "--complex", &data("interval.json"), "--morse", &data("interval_flat.json")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("generic ✗"));
    assert!(out.contains("generic violation: F(a) = F(e)"));
}

#[test]
fn validate_reports_morse_witness() {
    let o = run(&["validate", "--complex", &data("triangle.json"), "--morse", &data("triangle_not_morse.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["morse"], false);
    let t = v["violations"]["morse"].as_array().unwrap().iter().find(|w| w["cell"] == "t012").unwrap();
    assert_eq!(t["high_facets"].as_array().unwrap().len(), 3);
}

#[test]
fn missing_file_is_a_usage_error() {
    let o = run(&["validate", "--complex", "/does/not/exist.json", "--random-morse"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["validate", "--builtin", "no_such_complex"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["validate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pipeline_torus() {
    let o = run(&["pipeline", "--builtin", "torus_7", "--random-morse", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("∂̃²=0 ✓, d_PL=∂̃ ✓, H matches cellular ✓ (1,2,1)"));
}

#[test]
fn pipeline_projective_plane_has_torsion() {
    let o = run(&["pipeline", "--builtin", "rp2_6", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("H(ℳ_PL): ℤ, ℤ/2, 0"));
    assert!(out.contains("H(cellular): ℤ, ℤ/2, 0"));
}

#[test]
fn pipeline_point() {
    let o = run(&["pipeline", "--builtin", "point", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["morse_complex"]["basis"][0]["cells"], serde_json::json!(["v0"]));
    assert_eq!(v["homology"]["cellular"]["groups"], serde_json::json!(["ℤ"]));
}

#[test]
fn output_is_deterministic() {
    let args = ["pipeline", "--builtin", "klein_bottle", "--seed", "11", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["audit-metric", "--builtin", "sphere_3", "--samples", "200", "--seed", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn circle_trajectories() {
    let o = run(&[
        "trajectories", "--builtin", "circle_3", "--morse", &data("circle_collapsed.json"),
        "--from", "e02", "--to", "v0", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let pair = &json(&o)["pairs"][0];
    let ts = pair["trajectories"].as_array().unwrap();
    assert_eq!(ts.len(), 2);
    let signs: Vec<i64> = ts.iter().map(|t| t["sign"].as_i64().unwrap()).collect();
    assert_eq!(signs.iter().sum::<i64>(), 0);
    assert_eq!(pair["signed_count"], 0);
}

#[test]
fn audit_sphere() {
    let o = run(&["audit-metric", "--builtin", "sphere_2", "--samples", "1000", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("0 failures / 1000 sections"));
}

#[test]
fn chord_sections_of_tetrahedra_fail() {
    let o = run(&["audit-metric", "--builtin", "sphere_3", "--family", "chords", "--samples", "2000"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn subdivide_interval() {
    let o = run(&["subdivide", "--builtin", "interval", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["simplex_counts"], serde_json::json!([3, 2]));
    assert_eq!(v["vertices"].as_array().unwrap().len(), 3);
    assert!(v["vertices"].as_array().unwrap().iter().all(|x| x["f"].is_string()));
    let dot = run(&["subdivide", "--builtin", "interval", "--format", "dot"]);
    assert!(stdout(&dot).starts_with("graph subdivision {"));
}

#[test]
fn dot_is_rejected_where_unsupported() {
    let o = run(&["pipeline", "--builtin", "point", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tameify_output_is_a_tame_function() {
    let dir = std::env::temp_dir().join(format!("plmorse-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tame.json");
    let p = path.to_str().unwrap();
    let o = run(&["tameify", "--builtin", "sphere_3", "--seed", "2", "--format", "json", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let o = run(&["validate", "--builtin", "sphere_3", "--morse", p]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn reversed_pl_complex_reverses_betti() {
    let fwd = json(&run(&["pl-complex", "--builtin", "torus_7", "--seed", "4", "--format", "json"]));
    let rev = json(&run(&["pl-complex", "--builtin", "torus_7", "--seed", "4", "--reversed", "--format", "json"]));
    assert_eq!(fwd["homology"]["betti"], serde_json::json!([1, 2, 1]));
    assert_eq!(rev["homology"]["betti"], serde_json::json!([1, 2, 1]));
    assert_eq!(rev["direction"], "reversed");
    let fwd = json(&run(&["pl-complex", "--builtin", "interval", "--format", "json"]));
    assert_eq!(fwd["homology"]["betti"], serde_json::json!([1, 0]));
}

#[test]
fn swept_complexes() {
    let base = ["--builtin", "circle_3", "--morse"];
    let m = data("circle_collapsed.json");
    let u = json(&run(&["unstable", base[0], base[1], base[2], &m, "--from", "e02", "--format", "json"]));
    let mut cells: Vec<&str> = u[0]["cells"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    cells.sort();
    assert_eq!(cells, ["e01", "e02", "e12", "v0", "v1", "v2"]);
    let s = json(&run(&["stable", base[0], base[1], base[2], &m, "--from", "v0", "--format", "json"]));
    assert_eq!(s[0]["direction"], "reversed");
    let o = run(&["unstable", base[0], base[1], base[2], &m, "--from", "e01"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn remaining_commands_run() {
    for cmd in ["critical", "gradient-field", "morse-complex", "flows", "homology"] {
        let o = run(&[cmd, "--builtin", "rp2_6", "--seed", "1"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
    }
    let h = json(&run(&["homology", "--builtin", "klein_bottle", "--format", "json"]));
    assert_eq!(h["groups"], serde_json::json!(["ℤ", "ℤ⊕ℤ/2", "0"]));
    let g = run(&["gradient-field", "--builtin", "interval", "--morse", &data("interval_collapsed.json")]);
    // ∂e = b - a, so V(a) = -⟨∂e, a⟩ e = +e
    assert!(stdout(&g).contains("a -> e (+1)"));
}
