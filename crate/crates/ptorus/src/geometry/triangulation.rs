use std::collections::BTreeMap;

use serde::Serialize;

use crate::monodromy::{Letter, Monodromy, Slope};

/// Which of the three shape parameters z, z′ = 1/(1−z), z″ = (z−1)/z sits
/// on an edge of a tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Corner {
    Z,
    ZPrime,
    ZDoublePrime,
}

impl Corner {
    /// The corner following this one counter-clockwise in a cusp triangle.
    pub fn next(self) -> Corner {
        match self {
            Corner::Z => Corner::ZPrime,
            Corner::ZPrime => Corner::ZDoublePrime,
            Corner::ZDoublePrime => Corner::Z,
        }
    }
}

/// T_n: the diagonal exchange σ_n → σ_{n+1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tetrahedron {
    pub n: i64,
    pub letter: Letter,
    /// slope of σ_n missing from σ_{n+1}
    pub old: Slope,
    /// slope of σ_{n+1} missing from σ_n
    pub new: Slope,
    pub z_prime: Slope,
    pub z_double_prime: Slope,
}

impl Tetrahedron {
    /// The tetrahedron of the exchange σ_n → σ_{n+1}, for any n.
    pub fn at(mon: &Monodromy, n: i64) -> Tetrahedron {
        let s = mon.farey_triangle(n).vertices;
        let next = mon.farey_triangle(n + 1);
        let new = next.vertices.iter().find(|v| !s.contains(v)).expect("σ_{n+1} shares two slopes with σ_n").clone();
        let [r0, r1, r2] = s;
        let letter = mon.letter(n);
        let (old, z_prime, z_double_prime) = match letter {
            Letter::R => (r2, r0, r1),
            Letter::L => (r0, r1, r2),
        };
        debug_assert!(!next.contains(&old));
        Tetrahedron { n, letter, old, new, z_prime, z_double_prime }
    }

    pub fn corner_of(&self, s: &Slope) -> Option<Corner> {
        if *s == self.old || *s == self.new {
            Some(Corner::Z)
        } else if *s == self.z_prime {
            Some(Corner::ZPrime)
        } else if *s == self.z_double_prime {
            Some(Corner::ZDoublePrime)
        } else {
            None
        }
    }

    /// Opposite edge pairs: (old, new), (z′, z′), (z″, z″).
    pub fn opposite_pairs(&self) -> [(&Slope, &Slope); 3] {
        [(&self.old, &self.new), (&self.z_prime, &self.z_prime), (&self.z_double_prime, &self.z_double_prime)]
    }
}

/// Top faces of `lower` glued to the bottom faces of `upper`; the last
/// gluing of a period goes through φ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceGluing {
    pub lower: usize,
    pub upper: usize,
    /// the slopes of the two ideal triangles being glued
    pub slopes: [Slope; 3],
    pub through_monodromy: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Term {
    pub tet: usize,
    pub corner: Corner,
    pub coefficient: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct Triangulation {
    pub p: usize,
    pub tetrahedra: Vec<Tetrahedron>,
    /// one entry per pair of glued faces
    pub gluings: Vec<FaceGluing>,
    /// edge class k collects slopes first appearing in σ_n with n ≡ k mod p;
    /// each class sums to 2πi
    pub edge_classes: Vec<Vec<Term>>,
    /// the meridian of the cusp, summing to 3πi at the complete structure
    pub completeness: Vec<Term>,
}

impl Triangulation {
    /// Number of ideal triangles counted by the gluings (two per gluing).
    pub fn face_count(&self) -> usize {
        2 * self.gluings.len()
    }

    /// How often each (tetrahedron, corner) occurs over all edge classes.
    pub fn corner_totals(&self) -> BTreeMap<(usize, Corner), u32> {
        let mut out = BTreeMap::new();
        for class in &self.edge_classes {
            for t in class {
                *out.entry((t.tet, t.corner)).or_default() += t.coefficient;
            }
        }
        out
    }
}

/// First n' ≤ n with s ∈ σ_{n'}, σ_{n'+1}, …, σ_n.
fn birth(mon: &Monodromy, s: &Slope, mut n: i64) -> i64 {
    while mon.farey_triangle(n - 1).contains(s) {
        n -= 1;
    }
    n
}

fn push(terms: &mut Vec<Term>, tet: usize, corner: Corner, coefficient: u32) {
    match terms.iter_mut().find(|t| t.tet == tet && t.corner == corner) {
        Some(t) => t.coefficient += coefficient,
        None => terms.push(Term { tet, corner, coefficient }),
    }
}

pub fn build_triangulation(mon: &Monodromy) -> Triangulation {
    let p = mon.p();
    let tetrahedra: Vec<Tetrahedron> = (1..=p).map(|n| Tetrahedron::at(mon, n)).collect();
    let mut gluings = Vec::new();
    for i in 0..p as usize {
        let upper = (i + 1) % p as usize;
        gluings.push(FaceGluing {
            lower: i,
            upper,
            slopes: mon.farey_triangle(i as i64 + 2).vertices,
            through_monodromy: upper == 0,
        });
    }
    let mut edge_classes = vec![Vec::new(); p as usize];
    for (i, t) in tetrahedra.iter().enumerate() {
        let n = t.n;
        for (s, row, corner, coef) in [
            (&t.old, n, Corner::Z, 1),
            (&t.new, n + 1, Corner::Z, 1),
            (&t.z_prime, n, Corner::ZPrime, 2),
            (&t.z_double_prime, n, Corner::ZDoublePrime, 2),
        ] {
            let k = birth(mon, s, row).rem_euclid(p) as usize;
            push(&mut edge_classes[k], i, corner, coef);
        }
    }
    let mut completeness = Vec::new();
    for s in mon.farey_triangle(1).vertices {
        let mut k = 1;
        loop {
            let t = Tetrahedron::at(mon, k);
            let i = (k - 1).rem_euclid(p) as usize;
            match t.corner_of(&s) {
                Some(Corner::Z) => {
                    push(&mut completeness, i, Corner::Z, 1);
                    break;
                }
                Some(c) => push(&mut completeness, i, c, 2),
                None => unreachable!("slope left σ_k without being the old diagonal"),
            }
            k += 1;
        }
    }
    Triangulation { p: p as usize, tetrahedra, gluings, edge_classes, completeness }
}
