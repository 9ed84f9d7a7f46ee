use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::develop::CuspDevelopment;
use super::GeometryError;
use crate::ogroup::{Gen, GroupElement};

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Point {
    Finite(Complex64),
    Infinity,
}

impl Point {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Point::Infinity
    }
}

/// Below this |c|·scale a map is taken to fix ∞.
pub const INFINITY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> MoebiusMap {
        MoebiusMap { a, b, c, d }
    }

    pub fn identity() -> MoebiusMap {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        MoebiusMap::new(o, z, z, o)
    }

    pub fn translation(t: Complex64) -> MoebiusMap {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        MoebiusMap::new(o, t, z, o)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Scaled to determinant 1.
    pub fn normalized(&self) -> MoebiusMap {
        let s = self.det().sqrt();
        MoebiusMap::new(self.a / s, self.b / s, self.c / s, self.d / s)
    }

    pub fn mul(&self, o: &MoebiusMap) -> MoebiusMap {
        MoebiusMap::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn apply(&self, p: Point) -> Point {
        match p {
            Point::Infinity => {
                if self.c.norm() <= INFINITY_EPS * self.a.norm().max(1.0) {
                    Point::Infinity
                } else {
                    Point::Finite(self.a / self.c)
                }
            }
            Point::Finite(z) => {
                let den = self.c * z + self.d;
                let num = self.a * z + self.b;
                if den.norm() <= INFINITY_EPS * num.norm().max(1.0) {
                    Point::Infinity
                } else {
                    Point::Finite(num / den)
                }
            }
        }
    }

    /// Max entry distance to ±o (projective comparison of unit-determinant maps).
    pub fn projective_distance(&self, o: &MoebiusMap) -> f64 {
        let e = |s: f64| {
            [self.a - o.a * s, self.b - o.b * s, self.c - o.c * s, self.d - o.d * s]
                .iter()
                .map(|x| x.norm())
                .fold(0.0, f64::max)
        };
        e(1.0).min(e(-1.0))
    }
}

/// ρ on the generators A, B, C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Holonomy {
    pub a: MoebiusMap,
    pub b: MoebiusMap,
    pub c: MoebiusMap,
}

impl Holonomy {
    pub fn of(&self, g: Gen) -> &MoebiusMap {
        match g {
            Gen::A => &self.a,
            Gen::B => &self.b,
            Gen::C => &self.c,
        }
    }

    /// ρ(g) as a matrix product.
    pub fn matrix(&self, g: &GroupElement) -> MoebiusMap {
        g.letters().iter().fold(MoebiusMap::identity(), |acc, x| acc.mul(self.of(*x)))
    }

    /// ρ(D) = ρ(C)ρ(B)ρ(A).
    pub fn d(&self) -> MoebiusMap {
        self.c.mul(&self.b).mul(&self.a)
    }
}

/// The involution with ∞ ↦ x, parametrized by c: (xc, −1/c − x²c; c, −xc).
fn involution(x: Complex64, c: Complex64) -> MoebiusMap {
    MoebiusMap::new(x * c, -1.0 / c - x * x * c, c, -x * c)
}

fn product(x: [Complex64; 3], c: [Complex64; 3]) -> MoebiusMap {
    involution(x[2], c[2]).mul(&involution(x[1], c[1])).mul(&involution(x[0], c[0]))
}

fn defect(x: [Complex64; 3], c: [Complex64; 3], sign: f64) -> [Complex64; 4] {
    let m = product(x, c);
    [m.a - sign, m.b - sign, m.c, m.d - sign]
}

/// Solves for ρ(A), ρ(B), ρ(C) from the developed positions of Q(0,1),
/// Q(1,1), Q(2,1).
pub fn reconstruct_holonomy(dev: &CuspDevelopment) -> Result<Holonomy, GeometryError> {
    let get = |m| dev.position(m, 1).ok_or_else(|| GeometryError::Window(format!("Q({m},1) not developed")));
    let x = [get(0)?, get(1)?, get(2)?];
    let [xa, xb, xc] = x;
    let k = [(xb - xa) * (xc - 1.0 - xa), (xa - xb) * (xc - xb), (xa + 1.0 - xc) * (xb - xc)];
    if k.iter().any(|k| k.norm() < 1e-14) {
        return Err(GeometryError::Holonomy("coincident generator fixed points".into()));
    }
    let mut c = k.map(|k| 1.0 / (-k).sqrt());
    let sign = if product(x, c).trace().re >= 0.0 { 1.0 } else { -1.0 };
    for _ in 0..20 {
        let r = defect(x, c, sign);
        if r.iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-15 {
            break;
        }
        let h = 1e-7;
        let mut jac = DMatrix::<Complex64>::zeros(4, 3);
        for j in 0..3 {
            let mut cp = c;
            cp[j] += c[j] * h;
            let rp = defect(x, cp, sign);
            for i in 0..4 {
                jac[(i, j)] = (rp[i] - r[i]) / (c[j] * h);
            }
        }
        let rhs = DVector::from_iterator(4, r.iter().map(|v| -v));
        let step = jac.svd(true, true).solve(&rhs, 1e-14).map_err(|e| GeometryError::Holonomy(e.to_string()))?;
        for j in 0..3 {
            c[j] += step[j];
        }
    }
    let hol = Holonomy { a: involution(xa, c[0]), b: involution(xb, c[1]), c: involution(xc, c[2]) };
    let dist = hol.d().projective_distance(&MoebiusMap::translation(Complex64::new(1.0, 0.0)));
    if dist > 1e-9 {
        return Err(GeometryError::Holonomy(format!("ρ(D) is {dist:e} away from z ↦ z + 1")));
    }
    for (g, m) in [("A", hol.a), ("B", hol.b), ("C", hol.c)] {
        if m.trace().norm() > 1e-9 || (m.det() - 1.0).norm() > 1e-12 {
            return Err(GeometryError::Holonomy(format!("ρ({g}) is not a unit involution")));
        }
    }
    Ok(hol)
}

/// ρ(g)(∞), applying the generators to the point from the right.
pub fn evaluate_at_infinity(rep: &Holonomy, g: &GroupElement) -> Point {
    g.letters().iter().rev().fold(Point::Infinity, |p, x| rep.of(*x).apply(p))
}
