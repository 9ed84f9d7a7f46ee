use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;

use num_complex::Complex64;
use ptorus::complexes::{build_cw_prime, ColoredComplex, Color, LayeredComplex, Window};
use ptorus::geometry::{build_triangulation, develop_cusp, solve_shapes, SOLVER_MAX_ITER, SOLVER_TOL};
use ptorus::render::{
    build_scene, emit_scene_document, emit_svg, Scene, SceneFace, SceneVertex, Style, Viewport, WindowDoc,
    SCENE_VERSION,
};
use ptorus::{EgSystem, Monodromy};

fn scene(word: &str) -> Scene {
    let sys = EgSystem::new(Monodromy::from_text(word).unwrap());
    let mon = sys.monodromy().clone();
    let w = Window::standard(&mon, 1, 3);
    let sol = solve_shapes(&build_triangulation(&mon), SOLVER_TOL, SOLVER_MAX_ITER).unwrap();
    let dev = develop_cusp(&sys, &sol, w).unwrap();
    let cw = build_cw_prime(&mon, w).collapse(&sys).unwrap();
    build_scene(&mon.word.to_string(), &dev, &dev.delta, &cw, w).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn output_is_deterministic() {
    let (a, b) = (scene("R^2L^3"), scene("R^2L^3"));
    assert_eq!(emit_scene_document(&a), emit_scene_document(&b));
    assert_eq!(emit_svg(&a, &Style::default()), emit_svg(&b, &Style::default()));
}

#[test]
fn empty_window_gives_an_empty_document() {
    let sys = EgSystem::new(Monodromy::from_text("RL").unwrap());
    let mon = sys.monodromy().clone();
    let w = Window::standard(&mon, 1, 3);
    let sol = solve_shapes(&build_triangulation(&mon), SOLVER_TOL, SOLVER_MAX_ITER).unwrap();
    let dev = develop_cusp(&sys, &sol, w).unwrap();
    let lc = LayeredComplex { window: w, vertices: vec![], edges: vec![], faces: vec![], layers: BTreeMap::new() };
    let cc = ColoredComplex { window: w, vertices: vec![], lines: BTreeMap::new(), edges: vec![], faces: vec![] };
    let s = build_scene("RL", &dev, &lc, &cc, w).unwrap();
    assert!(s.faces.is_empty() && s.vertices.is_empty());
    let doc: serde_json::Value = serde_json::from_slice(&emit_scene_document(&s)).unwrap();
    assert_eq!(doc["version"], SCENE_VERSION);
    assert_eq!(doc["faces"].as_array().unwrap().len(), 0);
    let svg = String::from_utf8(emit_svg(&s, &Style::default())).unwrap();
    assert!(svg.starts_with("<?xml") && svg.ends_with("</svg>\n"));
    assert!(!svg.contains("<polygon"));
}

#[test]
fn one_triangle_one_polygon() {
    let v = |id, re, im| SceneVertex {
        id,
        label: format!("v{id}"),
        word_length: 1,
        position: Complex64::new(re, im),
        color: None,
    };
    let s = Scene {
        word: "RL".into(),
        window: WindowDoc { m: [0, 0], n: [0, 0] },
        lambda: Complex64::new(0.0, 1.0),
        vertices: vec![v(0, 0.0, 0.0), v(1, 1.0, 0.0), v(2, 0.5, 0.8)],
        delta_edges: vec![],
        cw_polylines: vec![],
        faces: vec![SceneFace { left_line: 0, index: None, color: Color::White, vertices: vec![0, 1, 2] }],
        viewport: Viewport { min: Complex64::new(0.0, 0.0), max: Complex64::new(1.0, 0.8) },
        version: SCENE_VERSION.into(),
    };
    let svg = String::from_utf8(emit_svg(&s, &Style::default())).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 1);
    assert!(svg.contains("fill=\"#ffffff\""));
}

#[test]
fn rl_delta_is_equilateral() {
    let s = scene("RL");
    let side = 1.0 / 3f64.sqrt();
    assert!(!s.delta_edges.is_empty());
    for e in &s.delta_edges {
        let len = (s.position(e.a) - s.position(e.b)).norm();
        assert!((len - side).abs() < 1e-6, "edge {e:?} has length {len}");
    }
}

#[test]
fn colors_follow_lines() {
    let s = scene("RLLRRRLLLL");
    assert!(!s.faces.is_empty());
    for f in &s.faces {
        let want = if f.left_line.rem_euclid(2) == 0 { Color::White } else { Color::Gray };
        assert_eq!(f.color, want, "cell left of line {}", f.left_line);
    }
}

#[test]
fn delta_vertices_lie_on_cw_lines() {
    let sys = EgSystem::new(Monodromy::from_text("RLLRRRLLLL").unwrap());
    let mon = sys.monodromy().clone();
    let w = Window::standard(&mon, 1, 3);
    let sol = solve_shapes(&build_triangulation(&mon), SOLVER_TOL, SOLVER_MAX_ITER).unwrap();
    let dev = develop_cusp(&sys, &sol, w).unwrap();
    let cw = build_cw_prime(&mon, w).collapse(&sys).unwrap();
    let s = build_scene("RLLRRRLLLL", &dev, &dev.delta, &cw, w).unwrap();
    // core vertices only: the window border cuts lines and layers differently
    let core: Vec<Complex64> = dev
        .delta
        .vertices
        .iter()
        .zip(&dev.vertex_positions)
        .filter_map(|(v, z)| if v.core { *z } else { None })
        .collect();
    let on_lines: HashSet<usize> = s.cw_polylines.iter().flat_map(|l| l.vertices.iter().copied()).collect();
    let mut checked = 0;
    for v in s.delta_edges.iter().flat_map(|e| [e.a, e.b]) {
        if core.iter().any(|z| (z - s.position(v)).norm() < 1e-12) {
            assert!(on_lines.contains(&v), "vertex {} is off the CW lines", s.vertices[v].label);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

/// Regenerate with `UPDATE_SNAPSHOTS=1 cargo test --test render`.
#[test]
fn snapshot_matches() {
    let s = scene("RLLRRRLLLL");
    let doc = emit_scene_document(&s);
    let svg = emit_svg(&s, &Style::default());
    let (doc_path, svg_path) = (fixture("rllrrrllll.scene.json"), fixture("rllrrrllll.svg"));
    if std::env::var_os("UPDATE_SNAPSHOTS").is_some() {
        std::fs::write(&doc_path, &doc).unwrap();
        std::fs::write(&svg_path, &svg).unwrap();
    }
    assert!(std::fs::read(&doc_path).unwrap() == doc, "scene document differs from {}", doc_path.display());
    assert!(std::fs::read(&svg_path).unwrap() == svg, "SVG differs from {}", svg_path.display());
}
