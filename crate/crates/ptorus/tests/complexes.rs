use std::collections::{BTreeSet, HashSet};

use ptorus::complexes::{
    build_cw_prime, build_delta_direct, build_parent, cell_counts, iso_colored, iso_layered, project_cw,
    project_delta, recover_cw_from_delta, recover_delta_from_cw, Color, ComplexError, Window,
};
use ptorus::verify::{complex_window, run_suite, Suite};
use ptorus::{EgSystem, GroupElement, Letter, Monodromy};

const WORDS: [&str; 3] = ["RL", "R^2L^3", "RLLRRRLLLL"];

fn sys(word: &str) -> EgSystem {
    EgSystem::new(Monodromy::from_text(word).unwrap())
}

type Pt = (i64, i64);

fn has(edges: &[(Pt, Pt)], a: Pt, b: Pt) -> bool {
    edges.iter().any(|&e| e == (a, b) || e == (b, a))
}

#[test]
fn parent_edge_patterns() {
    let sys = sys("RLLRRRLLLL");
    let mon = sys.monodromy().clone();
    let pc = build_parent(&sys, Window::new((-1, 1), (-6, 12)).unwrap());
    let vertical: Vec<_> = pc.vertical_edges.iter().map(|e| (e.0, e.1)).collect();
    for n in -6..12 {
        for m in -1..1 {
            match mon.letter(n) {
                Letter::R => {
                    assert!(has(&pc.slanted_edges, (3 * m, n), (3 * m, n + 1)), "m {m} n {n}");
                    assert!(has(&pc.slanted_edges, (3 * m + 1, n), (3 * m + 2, n + 1)), "m {m} n {n}");
                }
                Letter::L if mon.letter(n + 1) == Letter::L => {
                    assert!(has(&vertical, (3 * m + 3, n), (3 * m + 3, n + 1)), "m {m} n {n}");
                }
                Letter::L => {}
            }
        }
    }
    for (a, b) in &pc.slanted_edges {
        assert_eq!(pc.labels[a], pc.labels[b], "slanted edge {a:?} {b:?}");
    }
}

#[test]
fn cw_prime_examples() {
    let mon = Monodromy::from_text("RLLRRRLLLL").unwrap();
    let w = Window::new((-1, 1), (-10, 12)).unwrap();
    let cw = build_cw_prime(&mon, w);
    assert!(has(&cw.slanted_edges, (0, 1), (1, 4)));
    let mut seen = 0;
    for f in &cw.faces {
        if mon.letter(f.n) != Letter::R {
            continue;
        }
        seen += 1;
        assert_eq!(f.color, Color::White);
        let want: BTreeSet<_> =
            [(2 * f.m, mon.prev_same(f.n)), (2 * f.m, f.n), (2 * f.m + 1, f.n), (2 * f.m + 1, mon.next_same(f.n))].into();
        assert_eq!(f.corners().into_iter().collect::<BTreeSet<_>>(), want);
    }
    assert!(seen > 0);
    // D moves cells two columns to the right
    let cells: HashSet<_> = cw.faces.iter().map(|f| (f.corners(), f.color)).collect();
    for f in cw.faces.iter().filter(|f| f.m < w.m_hi) {
        let moved = f.corners().map(|(c, n)| (c + 2, n));
        assert!(cells.contains(&(moved, f.color)), "cell {:?}", f.corners());
    }
}

#[test]
fn quotients_match_direct_models() {
    for word in WORDS {
        let sys = sys(word);
        let w = complex_window(sys.monodromy());
        let pc = build_parent(&sys, w);
        let dd = project_delta(&pc).unwrap();
        let direct = build_delta_direct(&sys, w);
        assert_eq!(iso_layered(&dd, &direct).map(|c| c.shift), Some(0), "{word}");
        let cc = project_cw(&pc).unwrap();
        let star = build_cw_prime(sys.monodromy(), w).collapse(&sys).unwrap();
        assert_eq!(iso_colored(&cc, &star).map(|c| c.shift), Some(0), "{word}");
    }
}

#[test]
fn quotient_lines_carry_p_labels() {
    let sys = sys("RLLRRRLLLL");
    let w = complex_window(sys.monodromy());
    let cc = project_cw(&build_parent(&sys, w)).unwrap();
    let (lo, hi) = w.interior_rows(sys.monodromy()).unwrap();
    for m in (w.m_lo + 1)..w.m_hi {
        let on_line: HashSet<&GroupElement> = cc.lines[&(2 * m)].iter().map(|&v| &*cc.vertices[v].label).collect();
        for n in lo..=hi {
            assert!(on_line.contains(&sys.p(2 * m, n)), "P({}, {n})", 2 * m);
        }
    }
}

#[test]
fn iso_identity_and_shift() {
    let sys = sys("R^2L^3");
    let w = complex_window(sys.monodromy());
    let lc = build_delta_direct(&sys, w);
    let id = iso_layered(&lc, &lc).unwrap();
    assert_eq!(id.shift, 0);
    assert!(id.vertex_map.iter().all(|(a, b)| a == b));
    assert_eq!(iso_layered(&lc, &lc.shift_layers(1)).unwrap().shift, 1);
    let cc = build_cw_prime(sys.monodromy(), w).collapse(&sys).unwrap();
    assert_eq!(iso_colored(&cc, &cc).unwrap().shift, 0);
    assert_eq!(iso_colored(&cc, &cc.shift_lines(1)).unwrap().shift, 1);
}

#[test]
fn upward_apexes_are_even_p() {
    for word in WORDS {
        let sys = sys(word);
        let w = complex_window(sys.monodromy());
        let lc = build_delta_direct(&sys, w);
        let below_layers: Vec<i64> = lc.layers.keys().copied().filter(|n| lc.layers.contains_key(&(n - 1))).collect();
        let mut count = 0;
        for n in below_layers {
            let below: HashSet<usize> = lc.layers[&(n - 1)].iter().copied().collect();
            let evens: HashSet<GroupElement> = (w.m_lo - 1..=w.m_hi + 1).map(|m| sys.p(2 * m, n)).collect();
            for &v in &lc.layers[&n] {
                if lc.vertices[v].core && !below.contains(&v) {
                    assert!(evens.contains(&*lc.vertices[v].label), "{word} layer {n}");
                    count += 1;
                }
            }
        }
        assert!(count > 0);
    }
}

#[test]
fn round_trips() {
    for word in WORDS {
        let sys = sys(word);
        let w = complex_window(sys.monodromy());
        let lc = build_delta_direct(&sys, w);
        let cc = build_cw_prime(sys.monodromy(), w).collapse(&sys).unwrap();
        let a = recover_cw_from_delta(&lc).unwrap();
        assert_eq!(iso_colored(&a, &cc).map(|c| c.shift), Some(0), "{word}: Δ → CW");
        let b = recover_delta_from_cw(&cc).unwrap();
        assert_eq!(iso_layered(&b, &lc).map(|c| c.shift), Some(0), "{word}: CW → Δ");
    }
}

#[test]
fn white_cell_boundary_and_counts() {
    let sys = sys("RLLRRRLLLL");
    let mon = sys.monodromy().clone();
    let w = complex_window(&mon);
    let cc = build_cw_prime(&mon, w).collapse(&sys).unwrap();
    let mut checked = 0;
    for f in &cc.faces {
        let core = f.left.iter().chain(&f.right).all(|&v| cc.vertices[v].core);
        if !core {
            continue;
        }
        let counts = cell_counts(f);
        assert_eq!(counts.bigons, counts.vertices);
        assert_eq!(counts.triangles + 2, counts.vertices);
        let Some((m, n)) = f.index else { continue };
        if f.color == Color::White {
            let (alpha, _) = f.alpha_beta();
            let got: Vec<&GroupElement> = alpha.iter().map(|&v| &*cc.vertices[v].label).collect();
            let want: Vec<GroupElement> = (mon.prev_same(n)..=n).map(|k| sys.p(2 * m, k)).collect();
            assert_eq!(got, want.iter().collect::<Vec<_>>(), "c({m},{n})");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn recovery_needs_three_layers() {
    let sys = sys("RL");
    let lc = build_delta_direct(&sys, Window::new((-1, 1), (0, 1)).unwrap());
    assert!(matches!(recover_cw_from_delta(&lc), Err(ComplexError::InsufficientWindow(_))));
}

#[test]
fn suites_pass_on_named_words() {
    for word in WORDS {
        for r in run_suite(&sys(word), Suite::Roundtrip, None) {
            assert!(r.passed(), "{word}: {} {:?}", r.name, r.witnesses);
        }
    }
}
