//! RL-words, the Farey walk σ_n and exact slope arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("empty input")]
    Empty,
    #[error("illegal character {0:?} at offset {1}")]
    IllegalCharacter(char, usize),
    #[error("malformed exponent at offset {0}")]
    BadExponent(usize),
    #[error("not pseudo-Anosov")]
    NotPseudoAnosov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    R,
    L,
}

impl Letter {
    pub fn other(self) -> Letter {
        match self {
            Letter::R => Letter::L,
            Letter::L => Letter::R,
        }
    }

    pub fn matrix(self) -> Mat2 {
        match self {
            Letter::R => Mat2::from_i64(1, 1, 0, 1),
            Letter::L => Mat2::from_i64(1, 0, 1, 1),
        }
    }

    pub fn inverse_matrix(self) -> Mat2 {
        match self {
            Letter::R => Mat2::from_i64(1, -1, 0, 1),
            Letter::L => Mat2::from_i64(1, 0, -1, 1),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::R => "R",
            Letter::L => "L",
        })
    }
}

/// A point of Q ∪ {∞} in lowest terms; ∞ is stored as 1/0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slope {
    num: BigInt,
    den: BigInt,
}

impl Slope {
    pub fn new(num: BigInt, den: BigInt) -> Slope {
        if den.is_zero() {
            assert!(!num.is_zero(), "0/0 is not a slope");
            return Slope::infinity();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / &g, den / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Slope { num: n, den: d }
    }

    pub fn from_ratio(num: i64, den: i64) -> Slope {
        Slope::new(BigInt::from(num), BigInt::from(den))
    }

    pub fn integer(n: i64) -> Slope {
        Slope::from_ratio(n, 1)
    }

    pub fn infinity() -> Slope {
        Slope { num: BigInt::one(), den: BigInt::zero() }
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// |ps − qr| = 1
    pub fn is_farey_neighbor(&self, other: &Slope) -> bool {
        let det = &self.num * &other.den - &self.den * &other.num;
        det.abs().is_one()
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_infinite() {
            return f64::INFINITY;
        }
        // ratio of big integers; scale down first so huge entries do not overflow
        let bits = self.den.bits().max(self.num.bits());
        let shift = bits.saturating_sub(1000) as usize;
        let n = (&self.num >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (&self.den >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    }

    /// Linear order on R ∪ {∞} with ∞ as the largest element.
    pub fn cmp_on_line(&self, other: &Slope) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => (&self.num * &other.den).cmp(&(&other.num * &self.den)),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Slope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// 2×2 integer matrix (a b; c d).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Mat2 {
        Mat2 { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Mat2 {
        Mat2::from_i64(1, 0, 0, 1)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn scale(&self, s: i64) -> Mat2 {
        Mat2 { a: &self.a * s, b: &self.b * s, c: &self.c * s, d: &self.d * s }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.a, self.b, self.c, self.d)
    }
}

/// s ↦ (c + d s)/(a + b s); ∞ goes to d/b.
pub fn slope_action(m: &Mat2, s: &Slope) -> Slope {
    let num = &m.c * &s.den + &m.d * &s.num;
    let den = &m.a * &s.den + &m.b * &s.num;
    Slope::new(num, den)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RLWord {
    pub letters: Vec<Letter>,
}

impl RLWord {
    pub fn new(letters: Vec<Letter>) -> Result<RLWord, WordError> {
        if letters.is_empty() {
            return Err(WordError::Empty);
        }
        if !letters.contains(&Letter::R) || !letters.contains(&Letter::L) {
            return Err(WordError::NotPseudoAnosov);
        }
        Ok(RLWord { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for RLWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Accepts "RLLRRRLLLL", "rl" or exponent notation "R^2L^3".
pub fn parse_rl_word(text: &str) -> Result<RLWord, WordError> {
    let chars: Vec<char> = text.trim().chars().collect();
    if chars.is_empty() {
        return Err(WordError::Empty);
    }
    let mut letters = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let letter = match chars[i].to_ascii_uppercase() {
            'R' => Letter::R,
            'L' => Letter::L,
            c => return Err(WordError::IllegalCharacter(c, i)),
        };
        i += 1;
        let mut count = 1usize;
        if i < chars.len() && chars[i] == '^' {
            let start = i;
            i += 1;
            let digits_from = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[digits_from..i].iter().collect();
            count = digits.parse().map_err(|_| WordError::BadExponent(start))?;
            if count == 0 {
                return Err(WordError::BadExponent(start));
            }
        }
        letters.extend(std::iter::repeat_n(letter, count));
    }
    RLWord::new(letters)
}

/// A root of b μ² + (a − d) μ − c = 0 with a float witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticIrrational {
    /// coefficients (b, a − d, −c) of the defining quadratic
    pub coefficients: [i64; 3],
    pub witness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Monodromy {
    pub word: RLWord,
    pub period_p: usize,
    pub matrix: Mat2,
    pub trace: BigInt,
    pub mu_plus: QuadraticIrrational,
    pub mu_minus: QuadraticIrrational,
    pub sign: i8,
}

fn is_valid_rotation(letters: &[Letter]) -> bool {
    letters.first() == Some(&Letter::R) && letters.last() == Some(&Letter::L)
}

/// Rotates the word so that f_1 = R and f_p = L.  A word that already has
/// this shape is kept; otherwise the lexicographically smallest valid
/// rotation (R < L) is chosen.
pub fn canonical_rotation(word: &RLWord) -> RLWord {
    if is_valid_rotation(&word.letters) {
        return word.clone();
    }
    let p = word.letters.len();
    let best = (0..p)
        .map(|k| {
            let mut v = word.letters[k..].to_vec();
            v.extend_from_slice(&word.letters[..k]);
            v
        })
        .filter(|v| is_valid_rotation(v))
        .min()
        .expect("a word containing both letters has a rotation starting with R and ending with L");
    RLWord { letters: best }
}

pub fn canonicalize(word: &RLWord, sign_hint: Option<i8>) -> Monodromy {
    let word = canonical_rotation(word);
    let sign = match sign_hint {
        Some(s) if s < 0 => -1,
        _ => 1,
    };
    let mut matrix = Mat2::identity();
    for l in &word.letters {
        matrix = matrix.mul(&l.matrix());
    }
    let matrix = matrix.scale(sign as i64);
    let trace = matrix.trace();
    let (mu_plus, mu_minus) = fixed_points(&matrix);
    Monodromy { period_p: word.len(), word, matrix, trace, mu_plus, mu_minus, sign }
}

fn fixed_points(m: &Mat2) -> (QuadraticIrrational, QuadraticIrrational) {
    let to = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
    let (a, b, c, d) = (to(&m.a), to(&m.b), to(&m.c), to(&m.d));
    let coeffs = [
        m.b.to_i64().unwrap_or(i64::MAX),
        (&m.a - &m.d).to_i64().unwrap_or(i64::MAX),
        (-&m.c).to_i64().unwrap_or(i64::MAX),
    ];
    // b μ² + (a − d) μ − c = 0; b > 0 for positive words
    let disc = ((a - d) * (a - d) + 4.0 * b * c).sqrt();
    let r1 = (-(a - d) + disc) / (2.0 * b);
    let r2 = (-(a - d) - disc) / (2.0 * b);
    // derivative of s ↦ (c + d s)/(a + b s) is det/(a + b s)²
    let attracting = |s: f64| (a + b * s).powi(2) > 1.0;
    let (plus, minus) = if attracting(r1) { (r1, r2) } else { (r2, r1) };
    (
        QuadraticIrrational { coefficients: coeffs, witness: plus },
        QuadraticIrrational { coefficients: coeffs, witness: minus },
    )
}

/// Three slopes, listed in the order of the associated elliptic generators
/// `Q_{0,n}, Q_{1,n}, Q_{2,n}`.  Equality is up to cyclic rotation.
#[derive(Debug, Clone, Eq)]
pub struct FareyTriangle {
    pub vertices: [Slope; 3],
}

impl PartialEq for FareyTriangle {
    fn eq(&self, other: &Self) -> bool {
        (0..3).any(|k| (0..3).all(|i| self.vertices[(i + k) % 3] == other.vertices[i]))
    }
}

impl FareyTriangle {
    pub fn new(a: Slope, b: Slope, c: Slope) -> FareyTriangle {
        FareyTriangle { vertices: [a, b, c] }
    }

    pub fn contains(&self, s: &Slope) -> bool {
        self.vertices.contains(s)
    }

    pub fn is_farey(&self) -> bool {
        let v = &self.vertices;
        v[0].is_farey_neighbor(&v[1]) && v[1].is_farey_neighbor(&v[2]) && v[2].is_farey_neighbor(&v[0])
    }

    /// Same circular orientation as ⟨0, 1, ∞⟩: some rotation is increasing
    /// on R ∪ {∞}.
    pub fn is_coherent(&self) -> bool {
        let v = &self.vertices;
        (0..3).any(|k| {
            v[k].cmp_on_line(&v[(k + 1) % 3]) == Ordering::Less
                && v[(k + 1) % 3].cmp_on_line(&v[(k + 2) % 3]) == Ordering::Less
        })
    }

    pub fn image(&self, m: &Mat2) -> FareyTriangle {
        FareyTriangle { vertices: self.vertices.clone().map(|s| slope_action(m, &s)) }
    }

    pub fn shared(&self, other: &FareyTriangle) -> Vec<Slope> {
        self.vertices.iter().filter(|s| other.contains(s)).cloned().collect()
    }
}

impl fmt::Display for FareyTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}, {}>", self.vertices[0], self.vertices[1], self.vertices[2])
    }
}

impl Monodromy {
    pub fn from_text(text: &str) -> Result<Monodromy, WordError> {
        Ok(canonicalize(&parse_rl_word(text)?, None))
    }

    pub fn p(&self) -> i64 {
        self.period_p as i64
    }

    /// f_n, periodic with f_1 = R and f_p = f_0 = L.
    pub fn letter(&self, n: i64) -> Letter {
        self.word.letters[(n - 1).rem_euclid(self.p()) as usize]
    }

    /// n_+ : the next index carrying the same letter.
    pub fn next_same(&self, n: i64) -> i64 {
        let f = self.letter(n);
        (n + 1..).find(|&k| self.letter(k) == f).unwrap()
    }

    /// n_− : the previous index carrying the same letter.
    pub fn prev_same(&self, n: i64) -> i64 {
        let f = self.letter(n);
        let mut k = n - 1;
        while self.letter(k) != f {
            k -= 1;
        }
        k
    }

    /// Smallest r > 0 with f_{n+r} ≠ f_n.
    pub fn run_change(&self, n: i64) -> i64 {
        let f = self.letter(n);
        (1..).find(|&r| self.letter(n + r) != f).unwrap()
    }

    pub fn d(&self, n: i64) -> i64 {
        match self.letter(n) {
            Letter::R => 2,
            Letter::L => 3,
        }
    }

    /// Largest n_+ − n over one period.
    pub fn max_gap(&self) -> i64 {
        (1..=self.p()).map(|n| self.next_same(n) - n).max().unwrap()
    }

    /// Matrix of F_n: f_1 ⋯ f_n for n ≥ 0, f_0⁻¹ f_{−1}⁻¹ ⋯ f_{n+1}⁻¹ for n < 0.
    pub fn f_matrix(&self, n: i64) -> Mat2 {
        let mut m = Mat2::identity();
        if n >= 0 {
            for k in 1..=n {
                m = m.mul(&self.letter(k).matrix());
            }
        } else {
            let mut k = 0;
            while k > n {
                m = m.mul(&self.letter(k).inverse_matrix());
                k -= 1;
            }
        }
        m
    }

    /// σ_n = (F_{n−1})_*(σ_1), vertices in Q-order.
    pub fn farey_triangle(&self, n: i64) -> FareyTriangle {
        sigma_one().image(&self.f_matrix(n - 1))
    }

    /// φ_* as a slope map (the unsigned monodromy matrix).
    pub fn phi_matrix(&self) -> Mat2 {
        self.f_matrix(self.p())
    }
}

pub fn sigma_zero() -> FareyTriangle {
    FareyTriangle::new(Slope::integer(0), Slope::infinity(), Slope::integer(-1))
}

pub fn sigma_one() -> FareyTriangle {
    FareyTriangle::new(Slope::integer(0), Slope::integer(1), Slope::infinity())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_and_case() {
        let w = parse_rl_word("r^2L^3").unwrap();
        assert_eq!(w.to_string(), "RRLLL");
        assert_eq!(parse_rl_word(""), Err(WordError::Empty));
        assert_eq!(parse_rl_word("RRRR"), Err(WordError::NotPseudoAnosov));
        assert!(matches!(parse_rl_word("RXL"), Err(WordError::IllegalCharacter('X', 1))));
        assert!(matches!(parse_rl_word("R^L"), Err(WordError::BadExponent(1))));
    }

    #[test]
    fn rotation_rules() {
        let m = canonicalize(&parse_rl_word("LR").unwrap(), None);
        assert_eq!(m.word.to_string(), "RL");
        assert_eq!(m.matrix, Mat2::from_i64(2, 1, 1, 1));
        let m = canonicalize(&parse_rl_word("LRLR").unwrap(), None);
        assert_eq!(m.word.to_string(), "RLRL");
        let m = canonicalize(&parse_rl_word("RLLRRRLLLL").unwrap(), None);
        assert_eq!(m.word.to_string(), "RLLRRRLLLL");
        let m = canonicalize(&parse_rl_word("LLRRL").unwrap(), None);
        assert_eq!(m.word.to_string(), "RRLLL");
    }

    #[test]
    fn slope_basics() {
        let r = Letter::R.matrix();
        assert!(slope_action(&r, &Slope::integer(-1)).is_infinite());
        assert_eq!(slope_action(&r, &Slope::integer(1)), Slope::from_ratio(1, 2));
        assert_eq!(slope_action(&r, &Slope::infinity()), Slope::integer(1));
        assert_eq!(Slope::from_ratio(2, -4).to_string(), "-1/2");
    }
}
