//! Label-free isomorphism search; run with `--features blind-search`.

use ptorus::complexes::{
    build_cw_prime, build_delta_direct, build_parent, iso_colored_blind, iso_layered_blind, project_cw, project_delta,
    recover_cw_from_delta, Window,
};
use ptorus::{EgSystem, Monodromy};

fn small(word: &str) -> (EgSystem, Window) {
    let sys = EgSystem::new(Monodromy::from_text(word).unwrap());
    let w = Window::standard(sys.monodromy(), 2, 3);
    (sys, w)
}

#[test]
fn blind_layered_matches_quotient() {
    let (sys, w) = small("RL");
    let a = project_delta(&build_parent(&sys, w)).unwrap();
    let b = build_delta_direct(&sys, w);
    assert!(iso_layered_blind(&a, &b).is_some());
    // periodicity makes the shift ambiguous; any consistent one will do
    assert!(iso_layered_blind(&b, &b.shift_layers(1)).is_some());
}

#[test]
fn blind_colored_matches_recovery() {
    let (sys, w) = small("RL");
    let star = build_cw_prime(sys.monodromy(), w).collapse(&sys).unwrap();
    assert!(iso_colored_blind(&star, &star.shift_lines(1)).is_some());
    let rec = recover_cw_from_delta(&build_delta_direct(&sys, w)).unwrap();
    assert!(iso_colored_blind(&rec, &star).is_some());
    // both sides built from the parent complex share their core
    let pc = build_parent(&sys, w);
    let rec = recover_cw_from_delta(&project_delta(&pc).unwrap()).unwrap();
    assert!(iso_colored_blind(&rec, &project_cw(&pc).unwrap()).is_some());
}

#[test]
fn blind_tells_words_apart() {
    let (a, wa) = small("RL");
    let (b, wb) = small("RRL");
    let (da, db) = (build_delta_direct(&a, wa), build_delta_direct(&b, wb));
    assert!(iso_layered_blind(&da, &db).is_none());
    let ca = build_cw_prime(a.monodromy(), wa).collapse(&a).unwrap();
    let cb = build_cw_prime(b.monodromy(), wb).collapse(&b).unwrap();
    assert!(iso_colored_blind(&ca, &cb).is_none());
}
