use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use buildings_core::exact::Rational;
use buildings_core::treefold::{
    cyclic_impossible_instance, fold_quotient, gen_config3, Instance, InstanceJson, QuotientTree,
    QuotientTreeJson,
};
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_buildings"))
        .args(args)
        .output()
        .unwrap()
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_buildings"))
        .args(args)
        .env(key, value)
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn write_instance(dir: &TempDir, name: &str, inst: &Instance) -> PathBuf {
    let p = path(dir, name);
    std::fs::write(&p, serde_json::to_string(&inst.to_json()).unwrap()).unwrap();
    p
}

fn read_instance(p: &Path) -> Instance {
    let j: InstanceJson = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    Instance::from_json(&j).unwrap()
}

fn read_tree(p: &Path) -> QuotientTree {
    let j: QuotientTreeJson = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    QuotientTree::from_json(&j).unwrap()
}

#[test]
fn classify_g2() {
    let out = run(&["classify", "--catalog-id", "G2_pi3"]);
    assert_eq!(code(&out), 0);
    let v = report(&out);
    assert_eq!(v["result"]["verdict"], "PartII");
    assert_eq!(v["result"]["minimal_angle"]["named"], "pi/3");
    assert_eq!(v["result"]["minimal_angle"]["cos_squared"], "1/4");
    assert_eq!(v["result"]["long_root_vertex_check"], true);
    assert_eq!(v["result"]["realization"], "standard");
}

#[test]
fn classify_problematic() {
    let v = report(&run(&["classify", "--catalog-id", "E8_problematic_rank1"]));
    assert_eq!(v["result"]["verdict"], "Neither");
    assert_eq!(v["result"]["relative_rank"], 1);
    // cos^2 = 9/16 is a smaller angle than pi/3
    assert_eq!(v["result"]["minimal_angle"]["cos_squared"], "9/16");
    assert_eq!(v["result"]["minimal_angle"]["cos_sign"], 1);

    let v = report(&run(&["classify", "--catalog-id", "E7_problematic_rank2"]));
    assert_eq!(v["result"]["verdict"], "Neither");
    assert_eq!(v["result"]["relative_rank"], 2);
    assert_eq!(v["result"]["long_root_vertex_check"], Value::Null);
}

#[test]
fn classify_from_file() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "a2.json");
    std::fs::write(&p, r#"{"family":"A","rank":2,"encircled":[1]}"#).unwrap();
    let out = run(&["classify", "--diagram", s(&p)]);
    assert_eq!(code(&out), 0);
    let v = report(&out);
    assert_eq!(v["result"]["verdict"], "PartI");
    assert_eq!(v["result"]["minimal_angle"]["named"], "2pi/3");
    assert!(v["result"]["minimal_angle"]["radians_approx"]["approx"].is_f64());

    std::fs::write(&p, r#"{"family":"A","rank":2,"encircled":[5]}"#).unwrap();
    assert_eq!(code(&run(&["classify", "--diagram", s(&p)])), 3);
    std::fs::write(&p, "not json").unwrap();
    assert_eq!(code(&run(&["classify", "--diagram", s(&p)])), 3);
}

#[test]
fn orbit_cap_from_environment() {
    let out = run_env(
        &["classify", "--catalog-id", "E8_problematic_rank1"],
        "BUILDINGS_ORBIT_CAP",
        "100",
    );
    assert_eq!(code(&out), 3);
    let out = run_env(
        &["classify", "--catalog-id", "G2_pi3"],
        "BUILDINGS_ORBIT_CAP",
        "many",
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn catalog_lists_everything() {
    let out = run(&["catalog"]);
    assert_eq!(code(&out), 0);
    let v = report(&out);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 16);
    let neither = entries.iter().filter(|e| e["verdict"] == "Neither").count();
    // the four problematic diagrams plus the two intermediate entries repeating them
    assert_eq!(neither, 6);
}

#[test]
fn gen_second_configuration() {
    let dir = TempDir::new().unwrap();
    let out_path = path(&dir, "c2.json");
    let out = run(&[
        "gen",
        "--template",
        "config2",
        "--params",
        "u=1,lbig=3",
        "--out",
        s(&out_path),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["classes"][0]["tag"], "C2");
    let inst = read_instance(&out_path);
    let (p, q) = (inst.end_id("p").unwrap(), inst.end_id("q").unwrap());
    let mut coords: Vec<Rational> = inst
        .ends()
        .filter(|&x| x != p && x != q)
        .flat_map(|x| [inst.corner(p, q, x).clone(), inst.corner(q, p, x).clone()])
        .collect();
    coords.sort();
    coords.dedup();
    assert_eq!(coords, vec![r(-1, 1), r(0, 1), r(1, 1), r(3, 1)]);
}

#[test]
fn gen_trivial_tripod() {
    let dir = TempDir::new().unwrap();
    let out_path = path(&dir, "t.json");
    assert_eq!(
        code(&run(&[
            "gen",
            "--template",
            "tripod",
            "--params",
            "l=0",
            "--out",
            s(&out_path)
        ])),
        0
    );
    let inst = read_instance(&out_path);
    assert_eq!(inst.end_count(), 3);
    assert!(inst.side(0, 1, 2).is_zero());
}

#[test]
fn gen_random_is_seeded() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "a.json");
    let b = path(&dir, "b.json");
    let out = run(&[
        "gen",
        "--template",
        "random",
        "--seed",
        "7",
        "--params",
        "n=6",
        "--out",
        s(&a),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["inputs"]["seed"], 7);
    run(&[
        "gen",
        "--template",
        "random",
        "--seed",
        "7",
        "--params",
        "n=6",
        "--out",
        s(&b),
    ]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(read_instance(&a).end_count(), 6);
}

#[test]
fn gen_rejects_bad_parameters() {
    let dir = TempDir::new().unwrap();
    let o = path(&dir, "x.json");
    for params in ["u=3,lbig=3", "u=1", "u=1,lbig=3,z=1", "u=one,lbig=3", "u"] {
        let out = run(&[
            "gen",
            "--template",
            "config2",
            "--params",
            params,
            "--out",
            s(&o),
        ]);
        assert_eq!(code(&out), 3, "{params}");
    }
    assert!(!o.exists());
    assert_eq!(
        code(&run(&["gen", "--template", "nonsense", "--out", s(&o)])),
        3
    );
}

#[test]
fn fold_single_triangle() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "t.json");
    let tree = path(&dir, "tree.json");
    let dot = path(&dir, "tree.dot");
    run(&[
        "gen",
        "--template",
        "tripod",
        "--params",
        "l=2",
        "--out",
        s(&inst),
    ]);
    let out = run(&[
        "fold",
        "--instance",
        s(&inst),
        "--out",
        s(&tree),
        "--dot",
        s(&dot),
    ]);
    assert_eq!(code(&out), 0);
    let t = read_tree(&tree);
    let branch: Vec<usize> = (0..t.node_count()).filter(|&v| t.degree(v) >= 3).collect();
    assert_eq!(branch.len(), 1);
    assert_eq!(t.degree(branch[0]), 3);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("graph"));
}

#[test]
fn fold_two_ends_is_a_line() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "l.json");
    let tree = path(&dir, "tree.json");
    run(&[
        "gen",
        "--template",
        "random",
        "--params",
        "n=2",
        "--out",
        s(&inst),
    ]);
    assert_eq!(
        code(&run(&["fold", "--instance", s(&inst), "--out", s(&tree)])),
        0
    );
    let t = read_tree(&tree);
    assert_eq!(t.end_names.len(), 2);
    assert!(t.edges.is_empty());
}

#[test]
fn fold_rejects_impossible_configuration() {
    let dir = TempDir::new().unwrap();
    let inst = write_instance(&dir, "cyclic.json", &cyclic_impossible_instance());
    let tree = path(&dir, "tree.json");
    let out = run(&["fold", "--instance", s(&inst), "--out", s(&tree)]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["error"]["kind"], "ImpossibleConfiguration");
    assert!(!tree.exists());
}

#[test]
fn verify_third_configuration_sample() {
    let dir = TempDir::new().unwrap();
    let inst = write_instance(
        &dir,
        "c3.json",
        &gen_config3(r(4, 1), r(2, 1), r(6, 5)).unwrap(),
    );
    let out = run(&["verify", "--instance", s(&inst)]);
    assert_eq!(code(&out), 0);
    let v = report(&out);
    assert_eq!(v["status"], "passed");
    assert!(v["axioms"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn verify_corrupted_tree() {
    let dir = TempDir::new().unwrap();
    let c3 = gen_config3(r(4, 1), r(2, 1), r(6, 5)).unwrap();
    let inst = write_instance(&dir, "c3.json", &c3);
    let t = fold_quotient(&c3).unwrap();
    let total: Rational = t.edges.iter().map(|(_, _, l)| l.clone()).sum();
    let bad = t.with_perturbed_distance(0, 1, &(total + r(1, 3)));
    let tree = path(&dir, "bad.json");
    std::fs::write(&tree, serde_json::to_string(&bad.to_json()).unwrap()).unwrap();
    let out = run(&["verify", "--instance", s(&inst), "--tree", s(&tree)]);
    assert_eq!(code(&out), 2);
    let v = report(&out);
    let four = v["axioms"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "TREE")
        .unwrap()
        .clone();
    assert_eq!(four["passed"], false);
    assert!(four["witness"].as_str().unwrap().contains("nodes"));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(code(&run(&["verify", "--instance", s(&bad)])), 3);
    assert_eq!(
        code(&run(&[
            "verify",
            "--instance",
            s(&path(&dir, "missing.json"))
        ])),
        3
    );
    let cyclic = write_instance(&dir, "cyclic.json", &cyclic_impossible_instance());
    assert_eq!(code(&run(&["verify", "--instance", s(&cyclic)])), 1);
}
