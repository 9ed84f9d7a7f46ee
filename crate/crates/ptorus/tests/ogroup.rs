use proptest::prelude::*;
use ptorus::ogroup::{apply, compose, conj, invert, multiply};
use ptorus::{Automorphism, EgSystem, Gen, GroupElement, Monodromy, Slope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn g(s: &str) -> GroupElement {
    GroupElement::parse(s).unwrap()
}

fn fig() -> EgSystem {
    EgSystem::new(Monodromy::from_text("RLLRRRLLLL").unwrap())
}

fn random_word(rng: &mut ChaCha8Rng, max: usize) -> GroupElement {
    let len = rng.gen_range(0..=max);
    GroupElement::from_letters((0..len).map(|_| Gen::ALL[rng.gen_range(0..3)]))
}

#[test]
fn multiplication_examples() {
    assert_eq!(multiply(&g("CB"), &g("BA")), g("CA"));
    assert!(multiply(&g("CBA"), &g("ABC")).is_identity());
    assert!(multiply(&g("B"), &g("B")).is_identity());
    assert_eq!(g("CBA"), GroupElement::d());
    assert_eq!(GroupElement::d().inverse(), g("ABC"));
}

#[test]
fn conjugation_examples() {
    assert_eq!(conj(&g("C"), &g("B")), g("CBC"));
    assert_eq!(conj(&GroupElement::d(), &g("A")), g("CBABC"));
    let y = g("ABCB");
    assert_eq!(conj(&GroupElement::identity(), &y), y);
}

#[test]
fn reduction_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..10_000 {
        let (x, y, z) = (random_word(&mut rng, 12), random_word(&mut rng, 12), random_word(&mut rng, 12));
        assert_eq!(multiply(&multiply(&x, &y), &z), multiply(&x, &multiply(&y, &z)));
    }
}

#[test]
fn r_and_l_fix_d() {
    let d = GroupElement::d();
    assert_eq!(apply(&Automorphism::r(), &d), d);
    assert_eq!(apply(&Automorphism::l(), &d), d);
}

#[test]
fn inverse_of_l() {
    let li = invert(&Automorphism::l()).unwrap();
    assert_eq!(li.images(), &[g("ABA"), g("A"), g("C")]);
    assert_eq!(apply(&Automorphism::l(), &g("ABA")), g("A"));
    for f in [Automorphism::r(), Automorphism::l()] {
        let fi = invert(&f).unwrap();
        assert!(compose(&f, &fi).same_map(&Automorphism::identity()));
        assert!(compose(&fi, &f).same_map(&Automorphism::identity()));
    }
}

#[test]
fn shift_along_the_base_sequence() {
    let sys = fig();
    let shift = compose(&Automorphism::l(), &invert(&Automorphism::r()).unwrap());
    for j in -9..9 {
        assert_eq!(shift.apply(&sys.q(j, 1)), sys.q(j + 1, 1), "j = {j}");
    }
    // three steps make one D-conjugation
    let cube = compose(&shift, &compose(&shift, &shift));
    assert!(cube.same_map(&Automorphism::inner(&GroupElement::d())));
}

#[test]
fn f_examples() {
    let rl = EgSystem::new(Monodromy::from_text("RL").unwrap());
    assert!(rl.f(0).same_map(&Automorphism::identity()));
    assert!(rl.f(1).same_map(&Automorphism::r()));
    let sys = fig();
    assert!(sys.f(-1).same_map(&invert(&Automorphism::l()).unwrap()));
    let mon = sys.monodromy().clone();
    for n in -12..12 {
        let other = Automorphism::of_letter(mon.letter(n).other());
        assert!(sys.f_prime(n).same_map(&compose(&sys.f(n - 1), &other)));
        assert!(sys.f(n).same_map(&compose(&sys.f(n - 1), &Automorphism::of_letter(mon.letter(n)))));
    }
}

#[test]
fn p_and_q_examples() {
    let sys = fig();
    assert_eq!(sys.p(0, 1), g("B"));
    assert_eq!(sys.p(1, 0), g("CBC"));
    for n in -5..6 {
        assert_eq!(sys.p(2, n), conj(&GroupElement::d(), &sys.p(0, n)));
    }
    assert_eq!(sys.q(1, 1), g("B"));
    assert_eq!(sys.q(3, 1), g("CBABC"));
    assert_eq!(sys.q(3, 0), g("CBC"));
    assert_eq!((sys.q(0, 1), sys.q(2, 1)), (g("A"), g("C")));
}

#[test]
fn slope_examples() {
    let sys = fig();
    let mon = sys.monodromy().clone();
    assert_eq!(sys.slope_q(1, 1), Slope::integer(1));
    assert_eq!((sys.slope_q(0, 1), sys.slope_q(2, 1)), (Slope::integer(0), Slope::infinity()));
    assert!(sys.slope_p(1, 1).is_infinite());
    for n in -12..12 {
        let new: Vec<Slope> = mon.farey_triangle(n).vertices.iter()
            .filter(|s| !mon.farey_triangle(n - 1).contains(s)).cloned().collect();
        assert_eq!(new, vec![sys.slope_p(0, n)], "n = {n}");
        for m in -3..3 {
            assert_eq!(sys.slope_p(2 * m, n), sys.slope_p(0, n));
            assert_eq!(sys.slope_p(2 * m + 1, n), sys.slope_p(1, n));
            assert_eq!(sys.slope_q(3 * m + 1, n), sys.slope_q(1, n));
        }
    }
}

#[test]
fn invert_rejects_non_automorphisms() {
    // A ↦ A, B ↦ A, C ↦ C is not onto
    let f = Automorphism::from_images([g("A"), g("A"), g("C")]).unwrap();
    assert!(invert(&f).is_err());
}

fn element() -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(0usize..3, 0..16).prop_map(|v| GroupElement::from_letters(v.into_iter().map(|i| Gen::ALL[i])))
}

proptest! {
    #[test]
    fn automorphisms_are_homomorphisms(x in element(), y in element()) {
        for f in [Automorphism::r(), Automorphism::l(), invert(&Automorphism::r()).unwrap()] {
            prop_assert_eq!(f.apply(&multiply(&x, &y)), multiply(&f.apply(&x), &f.apply(&y)));
        }
    }

    #[test]
    fn inverse_is_reversal(x in element()) {
        prop_assert!(multiply(&x, &x.inverse()).is_identity());
        let rev: Vec<Gen> = x.letters().iter().rev().copied().collect();
        let inv = x.inverse();
        prop_assert_eq!(inv.letters(), &rev[..]);
    }

    #[test]
    fn words_are_reduced(x in element()) {
        prop_assert!(x.letters().windows(2).all(|w| w[0] != w[1]));
    }
}
