//! Words in ⟨A, B, C | A² = B² = C² = 1⟩, the automorphisms R, L, F_n and the
//! elliptic generators P_{m,n}, Q_{m,n}.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monodromy::{slope_action, Letter, Monodromy, Slope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    A,
    B,
    C,
}

impl Gen {
    pub const ALL: [Gen; 3] = [Gen::A, Gen::B, Gen::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_char(c: char) -> Option<Gen> {
        match c.to_ascii_uppercase() {
            'A' => Some(Gen::A),
            'B' => Some(Gen::B),
            'C' => Some(Gen::C),
            _ => None,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gen::A => "A",
            Gen::B => "B",
            Gen::C => "C",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("illegal letter {0:?} in group word")]
    IllegalLetter(char),
    #[error("image of {0} is not conjugate to a generator")]
    NotInvolution(Gen),
    #[error("automorphism could not be inverted")]
    NotInvertible,
}

/// Reduced word: no two equal adjacent letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupElement {
    letters: Vec<Gen>,
}

impl GroupElement {
    pub fn identity() -> GroupElement {
        GroupElement { letters: Vec::new() }
    }

    pub fn gen(g: Gen) -> GroupElement {
        GroupElement { letters: vec![g] }
    }

    pub fn from_letters<I: IntoIterator<Item = Gen>>(it: I) -> GroupElement {
        let mut w = GroupElement::identity();
        for g in it {
            w.push(g);
        }
        w
    }

    pub fn parse(text: &str) -> Result<GroupElement, GroupError> {
        let t = text.trim();
        if t == "1" || t.is_empty() {
            return Ok(GroupElement::identity());
        }
        let gens = t
            .chars()
            .map(|c| Gen::from_char(c).ok_or(GroupError::IllegalLetter(c)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupElement::from_letters(gens))
    }

    /// D = CBA
    pub fn d() -> GroupElement {
        GroupElement { letters: vec![Gen::C, Gen::B, Gen::A] }
    }

    /// D^k for any integer k (D⁻¹ = ABC).
    pub fn d_pow(k: i64) -> GroupElement {
        let unit = if k >= 0 { [Gen::C, Gen::B, Gen::A] } else { [Gen::A, Gen::B, Gen::C] };
        let mut letters = Vec::with_capacity(3 * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&unit);
        }
        GroupElement { letters }
    }

    pub fn letters(&self) -> &[Gen] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn push(&mut self, g: Gen) {
        if self.letters.last() == Some(&g) {
            self.letters.pop();
        } else {
            self.letters.push(g);
        }
    }

    fn extend(&mut self, w: &[Gen]) {
        // cancellation only happens at the junction
        let mut i = 0;
        while i < w.len() && self.letters.last() == Some(&w[i]) {
            self.letters.pop();
            i += 1;
        }
        self.letters.extend_from_slice(&w[i..]);
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { letters: self.letters.iter().rev().copied().collect() }
    }

    /// Odd-length palindromes are exactly the conjugates of generators.
    pub fn is_generator_conjugate(&self) -> bool {
        self.len() % 2 == 1 && self.letters.iter().eq(self.letters.iter().rev())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for g in &self.letters {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

pub fn multiply(u: &GroupElement, v: &GroupElement) -> GroupElement {
    let mut w = u.clone();
    w.extend(&v.letters);
    w
}

/// ⟨x⟩(y) = x y x⁻¹
pub fn conj(x: &GroupElement, y: &GroupElement) -> GroupElement {
    let mut w = x.clone();
    w.extend(&y.letters);
    w.extend(&x.inverse().letters);
    w
}

/// Endomorphism given by the images of A, B, C.  When the automorphism was
/// assembled from invertible pieces the inverse images travel along.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    images: [GroupElement; 3],
    inverse: Option<Box<[GroupElement; 3]>>,
}

fn words(a: &str, b: &str, c: &str) -> [GroupElement; 3] {
    [a, b, c].map(|s| GroupElement::parse(s).unwrap())
}

impl Automorphism {
    pub fn from_images(images: [GroupElement; 3]) -> Result<Automorphism, GroupError> {
        for (g, w) in Gen::ALL.iter().zip(images.iter()) {
            if !w.is_generator_conjugate() {
                return Err(GroupError::NotInvolution(*g));
            }
        }
        Ok(Automorphism { images, inverse: None })
    }

    pub fn identity() -> Automorphism {
        let id = words("A", "B", "C");
        Automorphism { images: id.clone(), inverse: Some(Box::new(id)) }
    }

    /// R: (A, B, C) ↦ (A, BCB, B)
    pub fn r() -> Automorphism {
        Automorphism { images: words("A", "BCB", "B"), inverse: Some(Box::new(words("A", "C", "CBC"))) }
    }

    /// L: (A, B, C) ↦ (B, BAB, C)
    pub fn l() -> Automorphism {
        Automorphism { images: words("B", "BAB", "C"), inverse: Some(Box::new(words("ABA", "A", "C"))) }
    }

    pub fn of_letter(l: Letter) -> Automorphism {
        match l {
            Letter::R => Automorphism::r(),
            Letter::L => Automorphism::l(),
        }
    }

    /// Inner automorphism ⟨x⟩.
    pub fn inner(x: &GroupElement) -> Automorphism {
        let xi = x.inverse();
        let images = Gen::ALL.map(|g| conj(x, &GroupElement::gen(g)));
        let inverse = Gen::ALL.map(|g| conj(&xi, &GroupElement::gen(g)));
        Automorphism { images, inverse: Some(Box::new(inverse)) }
    }

    pub fn image(&self, g: Gen) -> &GroupElement {
        &self.images[g.index()]
    }

    pub fn images(&self) -> &[GroupElement; 3] {
        &self.images
    }

    pub fn apply(&self, w: &GroupElement) -> GroupElement {
        apply_images(&self.images, w)
    }

    /// Agreement on the generators; inverse bookkeeping is ignored.
    pub fn same_map(&self, other: &Automorphism) -> bool {
        self.images == other.images
    }
}

fn apply_images(images: &[GroupElement; 3], w: &GroupElement) -> GroupElement {
    let mut out = GroupElement::identity();
    for g in w.letters() {
        out.extend(&images[g.index()].letters);
    }
    out
}

pub fn apply(f: &Automorphism, g: &GroupElement) -> GroupElement {
    f.apply(g)
}

/// compose(f, g) = f ∘ g, i.e. g acts first; F_n = compose(F_{n−1}, f_n).
pub fn compose(f: &Automorphism, g: &Automorphism) -> Automorphism {
    let images = g.images.clone().map(|w| f.apply(&w));
    let inverse = match (&f.inverse, &g.inverse) {
        (Some(fi), Some(gi)) => Some(Box::new(fi.clone().map(|w| apply_images(gi, &w)))),
        _ => None,
    };
    Automorphism { images, inverse }
}

pub fn invert(f: &Automorphism) -> Result<Automorphism, GroupError> {
    if let Some(inv) = &f.inverse {
        return Ok(Automorphism { images: (**inv).clone(), inverse: Some(Box::new(f.images.clone())) });
    }
    invert_by_reduction(f)
}

fn total_len(imgs: &[GroupElement; 3]) -> usize {
    imgs.iter().map(|w| w.len()).sum()
}

/// Greedy Nielsen-style reduction: post-compose with elementary
/// automorphisms while the total image length drops, until the triple is
/// (A, B, C).  Fails when no elementary move shortens the images.
fn invert_by_reduction(f: &Automorphism) -> Result<Automorphism, GroupError> {
    let moves: Vec<Automorphism> = {
        let mut v = vec![Automorphism::r(), Automorphism::l()];
        v.push(invert(&Automorphism::r())?);
        v.push(invert(&Automorphism::l())?);
        for g in Gen::ALL {
            v.push(Automorphism::inner(&GroupElement::gen(g)));
        }
        v
    };
    let target = words("A", "B", "C");
    let mut current = Automorphism { images: f.images.clone(), inverse: None };
    let mut acc = Automorphism::identity();
    for _ in 0..10_000 {
        if current.images == target {
            return Ok(Automorphism { images: acc.images.clone(), inverse: Some(Box::new(f.images.clone())) });
        }
        let here = total_len(&current.images);
        let best = moves
            .iter()
            .map(|m| (m, current.images.clone().map(|w| m.apply(&w))))
            .min_by_key(|(_, imgs)| total_len(imgs));
        match best {
            Some((m, imgs)) if total_len(&imgs) < here => {
                current.images = imgs;
                acc = compose(m, &acc);
            }
            _ => return Err(GroupError::NotInvertible),
        }
    }
    Err(GroupError::NotInvertible)
}

/// Memoizing front end for F_n, F'_n, P_{m,n}, Q_{m,n} of one monodromy.
pub struct EgSystem {
    mon: Monodromy,
    memo: Mutex<HashMap<i64, Arc<Automorphism>>>,
}

impl EgSystem {
    pub fn new(mon: Monodromy) -> EgSystem {
        let mut memo = HashMap::new();
        memo.insert(0, Arc::new(Automorphism::identity()));
        EgSystem { mon, memo: Mutex::new(memo) }
    }

    pub fn monodromy(&self) -> &Monodromy {
        &self.mon
    }

    /// F_0 = id, F_n = F_{n−1} f_n, F_{n−1} = F_n f_n⁻¹.
    pub fn f(&self, n: i64) -> Arc<Automorphism> {
        if let Some(a) = self.memo.lock().unwrap().get(&n) {
            return a.clone();
        }
        let (start, step): (i64, i64) = if n > 0 { (n - 1, 1) } else { (n + 1, -1) };
        // walk towards 0 until a cached value is found
        let mut k = start;
        loop {
            if self.memo.lock().unwrap().contains_key(&k) {
                break;
            }
            k -= step;
        }
        let mut cur = self.memo.lock().unwrap().get(&k).unwrap().clone();
        while k != n {
            let next = if step > 0 {
                compose(&cur, &Automorphism::of_letter(self.mon.letter(k + 1)))
            } else {
                let inv = invert(&Automorphism::of_letter(self.mon.letter(k))).unwrap();
                compose(&cur, &inv)
            };
            k += step;
            cur = Arc::new(next);
            self.memo.lock().unwrap().insert(k, cur.clone());
        }
        cur
    }

    /// F'_n = F_{n−1} L if f_n = R, F_{n−1} R if f_n = L.
    pub fn f_prime(&self, n: i64) -> Automorphism {
        compose(&self.f(n - 1), &Automorphism::of_letter(self.mon.letter(n).other()))
    }

    /// P_{2m,n} = ⟨D^m⟩ F_{n−1}(B), P_{2m+1,n} = ⟨D^m⟩ F_n(CBC).
    pub fn p(&self, m: i64, n: i64) -> GroupElement {
        let k = m.div_euclid(2);
        let base = if m.rem_euclid(2) == 0 {
            self.f(n - 1).apply(&GroupElement::gen(Gen::B))
        } else {
            self.f(n).apply(&GroupElement::parse("CBC").unwrap())
        };
        conj(&GroupElement::d_pow(k), &base)
    }

    /// Q_{3k+r,n} = ⟨D^k⟩ F_{n−1}(Q_{r,1}) with (Q_{0,1}, Q_{1,1}, Q_{2,1}) = (A, B, C).
    pub fn q(&self, m: i64, n: i64) -> GroupElement {
        let k = m.div_euclid(3);
        let r = m.rem_euclid(3) as usize;
        let base = self.f(n - 1).apply(&GroupElement::gen(Gen::ALL[r]));
        // F_{n−1} fixes D, so conjugating after applying F_{n−1} is the same
        conj(&GroupElement::d_pow(k), &base)
    }

    pub fn slope_p(&self, m: i64, n: i64) -> Slope {
        if m.rem_euclid(2) == 0 {
            slope_action(&self.mon.f_matrix(n - 1), &Slope::integer(1))
        } else {
            slope_action(&self.mon.f_matrix(n), &Slope::integer(-1))
        }
    }

    pub fn slope_q(&self, m: i64, n: i64) -> Slope {
        self.mon.farey_triangle(n).vertices[m.rem_euclid(3) as usize].clone()
    }
}
