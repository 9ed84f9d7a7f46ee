//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.  `cargo test --test acceptance` (add `--release` for speed).

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use ptorus::complexes::{build_cw_prime, Window};
use ptorus::geometry::{
    build_triangulation, develop_cusp, gluing_residual, solve_shapes, SOLVER_MAX_ITER, SOLVER_TOL,
};
use ptorus::render::{build_scene, emit_scene_document, emit_svg, Scene, Style};
use ptorus::verify::{complex_window, holonomy_suite, lemma_suite, lemma_window, roundtrip_suite, CheckResult};
use ptorus::{EgSystem, Monodromy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NAMED: [&str; 3] = ["RL", "R^2L^3", "RLLRRRLLLL"];
const RANDOM_WORDS: usize = 20;
const SEED: u64 = 20_240_917;

struct Criterion {
    id: u32,
    title: &'static str,
    checked: usize,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Criterion {
        Criterion { id, title, checked: 0, failures: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, word: &str, results: impl IntoIterator<Item = CheckResult>) {
        for r in results {
            self.checked += r.checked;
            if !r.passed() {
                let first = r.witnesses.first().map(|w| w.to_string()).unwrap_or_default();
                self.failures.push(format!("{word}: {} ({} failed) {first}", r.name, r.failures));
            }
        }
    }

    fn report(&self) -> bool {
        let ok = self.failures.is_empty() && self.checked > 0;
        println!(
            "{} criterion {}: {} ({} checks, {} failures)",
            if ok { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.checked,
            self.failures.len()
        );
        for f in self.failures.iter().take(5) {
            println!("    {f}");
        }
        ok
    }
}

/// The named words followed by distinct seeded random words of length ≤ 8.
fn word_suite() -> Vec<Monodromy> {
    let mut out: Vec<Monodromy> = NAMED.iter().map(|w| Monodromy::from_text(w).unwrap()).collect();
    let mut seen: BTreeSet<String> = out.iter().map(|m| m.word.to_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    while out.len() < NAMED.len() + RANDOM_WORDS {
        let len = rng.gen_range(2..=8);
        let text: String = (0..len).map(|_| if rng.gen_bool(0.5) { 'R' } else { 'L' }).collect();
        let Ok(mon) = Monodromy::from_text(&text) else { continue };
        if seen.insert(mon.word.to_string()) {
            out.push(mon);
        }
    }
    out
}

fn scene(mon: &Monodromy) -> Result<Scene, String> {
    let sys = EgSystem::new(mon.clone());
    let w = Window::standard(mon, 1, 3);
    let sol = solve_shapes(&build_triangulation(mon), SOLVER_TOL, SOLVER_MAX_ITER).map_err(|e| e.to_string())?;
    let dev = develop_cusp(&sys, &sol, w).map_err(|e| e.to_string())?;
    let cw = build_cw_prime(mon, w).collapse(&sys).map_err(|e| e.to_string())?;
    build_scene(&mon.word.to_string(), &dev, &dev.delta, &cw, w).map_err(|e| e.to_string())
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::new(4, "shapes, gluing residual and cusp translation");
    let rl = Monodromy::from_text("RL").unwrap();
    let want = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    match solve_shapes(&build_triangulation(&rl), SOLVER_TOL, 20) {
        Ok(sol) => {
            for (i, z) in sol.shapes.iter().enumerate() {
                c.expect((z.re - want.re).abs() <= 1e-9 && (z.im - want.im).abs() <= 1e-9, || {
                    format!("RL: z_{} = {z}", i + 1)
                });
            }
            c.expect(sol.residual <= 1e-12, || format!("RL: residual {:e}", sol.residual));
            c.expect(sol.iterations <= 20, || format!("RL: {} iterations", sol.iterations));
            let sys = EgSystem::new(rl.clone());
            match develop_cusp(&sys, &sol, complex_window(&rl)) {
                Ok(dev) => c.expect((dev.lambda.im - 0.577350269).abs() <= 1e-8, || {
                    format!("RL: Im λ = {}", dev.lambda.im)
                }),
                Err(e) => c.expect(false, || format!("RL: {e}")),
            }
        }
        Err(e) => c.expect(false, || format!("RL: {e}")),
    }
    for word in ["R^2L^3", "RLLRRRLLLL"] {
        let mon = Monodromy::from_text(word).unwrap();
        let tri = build_triangulation(&mon);
        match solve_shapes(&tri, SOLVER_TOL, 50) {
            Ok(sol) => {
                let r = gluing_residual(&tri, &sol.shapes);
                c.expect(r <= 1e-12, || format!("{word}: residual {r:e}"));
                c.expect(sol.shapes.iter().all(|z| z.im > 0.0), || format!("{word}: shape off the upper half plane"));
                c.expect(sol.iterations <= 50, || format!("{word}: {} iterations", sol.iterations));
            }
            Err(e) => c.expect(false, || format!("{word}: {e}")),
        }
    }
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::new(7, "byte-stable rendering and the snapshot fixture");
    for word in NAMED {
        let mon = Monodromy::from_text(word).unwrap();
        match (scene(&mon), scene(&mon)) {
            (Ok(a), Ok(b)) => {
                c.expect(emit_scene_document(&a) == emit_scene_document(&b), || format!("{word}: scene document differs"));
                let style = Style::default();
                c.expect(emit_svg(&a, &style) == emit_svg(&b, &style), || format!("{word}: SVG differs"));
            }
            (Err(e), _) | (_, Err(e)) => c.expect(false, || format!("{word}: {e}")),
        }
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mon = Monodromy::from_text("RLLRRRLLLL").unwrap();
    match scene(&mon) {
        Ok(s) => {
            let doc = std::fs::read(dir.join("rllrrrllll.scene.json")).unwrap_or_default();
            let svg = std::fs::read(dir.join("rllrrrllll.svg")).unwrap_or_default();
            c.expect(doc == emit_scene_document(&s), || "snapshot scene document differs".into());
            c.expect(svg == emit_svg(&s, &Style::default()), || "snapshot SVG differs".into());
        }
        Err(e) => c.expect(false, || e),
    }
    c
}

fn main() -> ExitCode {
    let start = Instant::now();
    let words = word_suite();
    println!("acceptance: {} words ({} named, {} random, seed {SEED})", words.len(), NAMED.len(), RANDOM_WORDS);

    let mut c1 = Criterion::new(1, "word identities, exact, |m| ≤ 3, n ∈ [−2p, 2p]");
    let mut c2 = Criterion::new(2, "quotient isomorphisms Δ** ≅ Δ*, CW** ≅ CW*");
    let mut c3 = Criterion::new(3, "round trips Δ ↔ CW and the per-cell count identity");
    for mon in &words {
        let word = mon.word.to_string();
        let sys = EgSystem::new(mon.clone());
        c1.absorb(&word, lemma_suite(&sys, lemma_window(&sys)));
        for r in roundtrip_suite(&sys, complex_window(mon)) {
            let target = if r.name.starts_with("quotient") || r.name.starts_with("vertical") { &mut c2 } else { &mut c3 };
            target.absorb(&word, [r]);
        }
    }

    let c4 = criterion_4();

    let mut c5 = Criterion::new(5, "ρ(P)(∞) matches the developed Q position within 1e−6");
    let mut c6 = Criterion::new(6, "ρ(Q(j+3))(∞) = ρ(Q(j))(∞) + 1 within 1e−8");
    for word in NAMED {
        let mon = Monodromy::from_text(word).unwrap();
        let sys = EgSystem::new(mon.clone());
        for r in holonomy_suite(&sys, complex_window(&mon), SOLVER_TOL, SOLVER_MAX_ITER) {
            let target = if r.name.starts_with("translation") { &mut c6 } else { &mut c5 };
            target.absorb(word, [r]);
        }
    }

    let c7 = criterion_7();

    let mut ok = true;
    for c in [&c1, &c2, &c3, &c4, &c5, &c6, &c7] {
        ok &= c.report();
    }
    println!("acceptance: {:.1} s, {}", start.elapsed().as_secs_f64(), if ok { "all criteria pass" } else { "FAILED" });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
