use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sp_equitable::io::coloring_from_json;
use sp_equitable::solver::trace::from_json_lines;
use sp_equitable::sp_tree::is_normal_form;
use sp_equitable::SpTree;
use tempfile::TempDir;

fn spcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spcolor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn graph_file(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn path_in(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn triangle_colors_with_three() {
    let dir = TempDir::new().unwrap();
    let input = graph_file(&dir, "tri.txt", "0 1\n1 2\n0 2\n");
    let out = path_in(&dir, "c.json");
    let trace = path_in(&dir, "t.jsonl");
    let res = spcolor(&["color", "--input", &input, "--k", "3", "--output", &out, "--trace", &trace]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let c = coloring_from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(c.class_sizes(), vec![1, 1, 1]);
    assert!(String::from_utf8_lossy(&res.stderr).contains("profile"));
    assert!(from_json_lines(&fs::read_to_string(&trace).unwrap()).is_ok());
}

#[test]
fn k4_is_invalid_input() {
    let dir = TempDir::new().unwrap();
    let input = graph_file(&dir, "k4.txt", "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    for k in ["3", "4", "6"] {
        assert_eq!(code(&spcolor(&["color", "--input", &input, "--k", k])), 2);
    }
}

#[test]
fn below_bound_names_the_bound() {
    let dir = TempDir::new().unwrap();
    let input = graph_file(&dir, "star.txt", "0 1\n0 2\n0 3\n0 4\n0 5\n");
    let res = spcolor(&["color", "--input", &input, "--k", "3"]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("bound 4"));
    assert_eq!(code(&spcolor(&["color", "--input", &input, "--k", "4"])), 0);
}

#[test]
fn parse_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let input = graph_file(&dir, "bad.txt", "0 1\n1 x\n");
    assert_eq!(code(&spcolor(&["color", "--input", &input, "--k", "3"])), 2);
    let missing = path_in(&dir, "nope.txt");
    assert_eq!(code(&spcolor(&["color", "--input", &missing, "--k", "3"])), 2);
}

#[test]
fn check_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let input = graph_file(&dir, "p.txt", "0 1\n1 2\n2 3\n");
    let good = graph_file(&dir, "good.json", r#"{"k": 2, "colors": {"0": 1, "1": 2, "2": 1, "3": 2}}"#);
    let tampered = graph_file(&dir, "bad.json", r#"{"k": 2, "colors": {"0": 1, "1": 1, "2": 1, "3": 2}}"#);
    assert_eq!(code(&spcolor(&["check", "--input", &input, "--coloring", &good, "--k", "2"])), 0);
    assert_eq!(code(&spcolor(&["check", "--input", &input, "--coloring", &tampered, "--k", "2"])), 1);
    assert_eq!(code(&spcolor(&["check", "--input", &input, "--coloring", &good, "--k", "3"])), 1);
}

#[test]
fn decompose_path_is_normal() {
    let dir = TempDir::new().unwrap();
    let input = graph_file(&dir, "p.txt", "0 1\n1 2\n2 3\n3 4\n");
    let out = path_in(&dir, "t.json");
    assert_eq!(code(&spcolor(&["decompose", "--input", &input, "--normalize", "--output", &out])), 0);
    let t = SpTree::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(is_normal_form(&t));
    let dot = path_in(&dir, "t.dot");
    assert_eq!(code(&spcolor(&["decompose", "--input", &input, "--dot", "--output", &dot])), 0);
    assert!(fs::read_to_string(&dot).unwrap().starts_with("digraph"));
}

#[test]
fn random_generation_needs_a_seed_and_is_deterministic() {
    assert_eq!(code(&spcolor(&["gen", "--random", "30"])), 2);
    let a = spcolor(&["gen", "--random", "30", "--drop", "0.1", "--seed", "9"]);
    let b = spcolor(&["gen", "--random", "30", "--drop", "0.1", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&spcolor(&["stress", "--mode", "random", "--iters", "3"])), 2);
}

#[test]
fn family_roundtrips_through_color() {
    let dir = TempDir::new().unwrap();
    let g = path_in(&dir, "d.txt");
    assert_eq!(code(&spcolor(&["gen", "--family", "diamond", "--size", "4", "--output", &g])), 0);
    assert_eq!(code(&spcolor(&["color", "--input", &g, "--k", "4"])), 0);
    assert_eq!(code(&spcolor(&["gen", "--family", "pentagon"])), 2);
}

#[test]
fn oracle_reports_infeasible_star() {
    let dir = TempDir::new().unwrap();
    let input = graph_file(&dir, "star.txt", "0 1\n0 2\n0 3\n0 4\n0 5\n");
    assert_eq!(code(&spcolor(&["oracle", "--input", &input, "--k", "3"])), 1);
    assert_eq!(code(&spcolor(&["oracle", "--input", &input, "--k", "4"])), 0);
}

#[test]
fn exhaustive_stress_passes() {
    let dir = TempDir::new().unwrap();
    let dumps = path_in(&dir, "dumps");
    let res = spcolor(&["stress", "--mode", "exhaustive", "--max-n", "5", "--k-policy", "all", "--dump-dir", &dumps]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    assert!(!Path::new(&dumps).exists());
}

#[test]
fn random_stress_passes() {
    let res = spcolor(&["stress", "--mode", "random", "--iters", "25", "--seed", "4", "--max-n", "80"]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
}
