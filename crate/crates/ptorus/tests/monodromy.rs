use num_bigint::BigInt;
use proptest::prelude::*;
use ptorus::monodromy::{slope_action, FareyTriangle, Mat2, WordError};
use ptorus::{canonicalize, parse_rl_word, Letter, Monodromy, RLWord, Slope};

const FIG_WORD: &str = "RLLRRRLLLL";

fn letters(s: &str) -> Vec<Letter> {
    s.chars().map(|c| if c == 'R' { Letter::R } else { Letter::L }).collect()
}

fn tri(a: Slope, b: Slope, c: Slope) -> FareyTriangle {
    FareyTriangle::new(a, b, c)
}

#[test]
fn parse_plain_and_exponents() {
    assert_eq!(parse_rl_word(FIG_WORD).unwrap().letters, letters(FIG_WORD));
    assert_eq!(parse_rl_word("R^2L^3").unwrap().letters, letters("RRLLL"));
    assert!(matches!(parse_rl_word("RRRR"), Err(WordError::NotPseudoAnosov)));
    assert!(parse_rl_word("").is_err());
    assert!(parse_rl_word("RXL").is_err());
}

#[test]
fn canonicalize_lr() {
    let mon = canonicalize(&RLWord::new(letters("LR")).unwrap(), None);
    assert_eq!(mon.word.to_string(), "RL");
    assert_eq!(mon.p(), 2);
    assert_eq!(mon.matrix.to_string(), "(2,1;1,1)");
    assert_eq!(mon.trace, BigInt::from(3));
    assert_eq!(mon.sign, 1);
}

#[test]
fn canonical_rotation_kept() {
    let mon = Monodromy::from_text(FIG_WORD).unwrap();
    assert_eq!(mon.word.to_string(), FIG_WORD);
    assert_eq!(mon.p(), 10);
}

#[test]
fn golden_ratio_fixed_points() {
    let mon = Monodromy::from_text("RL").unwrap();
    let s5 = 5f64.sqrt();
    // fixed points of s -> (1 + s)/(2 + s); the golden pair in the reciprocal chart
    assert_eq!(mon.mu_plus.coefficients, [1, 1, -1]);
    assert!((mon.mu_plus.witness - (s5 - 1.0) / 2.0).abs() < 1e-12);
    assert!((mon.mu_minus.witness + (1.0 + s5) / 2.0).abs() < 1e-12);
    assert!((1.0 / mon.mu_plus.witness - (1.0 + s5) / 2.0).abs() < 1e-12);
    assert!((1.0 / mon.mu_minus.witness - (1.0 - s5) / 2.0).abs() < 1e-12);
}

#[test]
fn letters_and_neighbours() {
    let rl = Monodromy::from_text("RL").unwrap();
    assert_eq!(rl.letter(1), Letter::R);
    assert_eq!(rl.letter(0), Letter::L);
    let fig = Monodromy::from_text(FIG_WORD).unwrap();
    assert_eq!(fig.letter(-3), Letter::L);
    assert_eq!(fig.next_same(1), 4);
    assert_eq!(fig.prev_same(1), -4);
    for n in -20..20 {
        assert_eq!(fig.d(n), if fig.letter(n) == Letter::L { 3 } else { 2 });
    }
}

#[test]
fn slope_action_examples() {
    let r = Letter::R.matrix();
    assert!(slope_action(&r, &Slope::integer(-1)).is_infinite());
    assert_eq!(slope_action(&r, &Slope::integer(1)), Slope::from_ratio(1, 2));
    let s = Slope::from_ratio(-3, 7);
    assert_eq!(slope_action(&Mat2::identity(), &s), s);
}

#[test]
fn farey_triangles() {
    let fig = Monodromy::from_text(FIG_WORD).unwrap();
    let inf = Slope::infinity;
    assert_eq!(fig.farey_triangle(0), tri(Slope::integer(0), inf(), Slope::integer(-1)));
    assert_eq!(fig.farey_triangle(1), tri(Slope::integer(0), Slope::integer(1), inf()));
    assert_eq!(fig.farey_triangle(2), tri(Slope::integer(0), Slope::from_ratio(1, 2), Slope::integer(1)));
    let rl = Monodromy::from_text("RL").unwrap();
    assert_eq!(rl.farey_triangle(2), rl.farey_triangle(0).image(&rl.phi_matrix()));
}

fn word_strategy() -> impl Strategy<Value = Monodromy> {
    prop::collection::vec(any::<bool>(), 2..12).prop_filter_map("needs both letters", |bits| {
        let s: String = bits.iter().map(|&b| if b { 'R' } else { 'L' }).collect();
        Monodromy::from_text(&s).ok()
    })
}

proptest! {
    #[test]
    fn letters_are_periodic(mon in word_strategy(), n in -10_000i64..10_000) {
        prop_assert_eq!(mon.letter(n + mon.p()), mon.letter(n));
    }

    #[test]
    fn neighbour_indices(mon in word_strategy(), n in -200i64..200) {
        let (up, down) = (mon.next_same(n), mon.prev_same(n));
        prop_assert!(up > n && down < n);
        prop_assert_eq!(mon.prev_same(up), n);
        prop_assert_eq!(mon.next_same(down), n);
        prop_assert!((n + 1..up).all(|k| mon.letter(k) != mon.letter(n)));
    }

    #[test]
    fn canonical_form(mon in word_strategy()) {
        prop_assert_eq!(mon.letter(1), Letter::R);
        prop_assert_eq!(mon.letter(0), Letter::L);
        prop_assert_eq!(mon.matrix.det(), BigInt::from(1));
        prop_assert!(mon.trace.clone() * mon.trace.clone() > BigInt::from(4));
        prop_assert!(mon.mu_plus.witness != mon.mu_minus.witness);
        let [b, amd, mc] = mon.mu_plus.coefficients;
        let x = mon.mu_plus.witness;
        let scale = (b as f64).abs() + (amd as f64).abs() + (mc as f64).abs();
        prop_assert!((b as f64 * x * x + amd as f64 * x + mc as f64).abs() < 1e-9 * scale * (1.0 + x * x));
    }

    #[test]
    fn walk_is_farey_and_periodic(mon in word_strategy(), n in -30i64..30) {
        let (s, t, u) = (mon.farey_triangle(n), mon.farey_triangle(n + 1), mon.farey_triangle(n + 2));
        prop_assert!(s.is_farey() && s.is_coherent());
        prop_assert_eq!(s.shared(&t).len(), 2);
        prop_assert_eq!(mon.farey_triangle(n + mon.p()), s.image(&mon.phi_matrix()));
        // the pivot shared by three consecutive triangles
        let pivot: Vec<Slope> = s.shared(&t).into_iter().filter(|x| u.contains(x)).collect();
        prop_assert_eq!(pivot.len(), 1);
        for x in &s.vertices {
            for y in &s.vertices {
                if x != y {
                    prop_assert!(x.is_farey_neighbor(y));
                }
            }
        }
    }
}
