use std::collections::{BTreeMap, HashMap, VecDeque};

use num_complex::Complex64;

use super::solve::{corner_value, ShapeSolution};
use super::triangulation::Corner;
use super::GeometryError;
use crate::complexes::{build_delta_direct, LayeredComplex, Pt, Window};
use crate::ogroup::EgSystem;

/// Path-consistency tolerance of the development.
pub const DEVELOP_TOL: f64 = 1e-9;
/// Agreement required between λ measured at different base vertices.
pub const LAMBDA_TOL: f64 = 1e-8;

/// A triangle of Δ* with its vertices counter-clockwise, starting at the apex
/// (the vertex between its two edges in one layer), which carries z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CuspTriangle {
    pub ccw: [usize; 3],
    /// lower layer of the strip holding the triangle
    pub strip: i64,
    /// index of the owning tetrahedron, 0-based
    pub tet: usize,
}

impl CuspTriangle {
    pub fn corners(&self) -> [(usize, Corner); 3] {
        [(self.ccw[0], Corner::Z), (self.ccw[1], Corner::ZPrime), (self.ccw[2], Corner::ZDoublePrime)]
    }
}

/// Triangles of a windowed Δ*, each tagged with its strip and tetrahedron.
pub fn cusp_triangles(lc: &LayeredComplex, p: i64) -> Vec<CuspTriangle> {
    let consecutive = |n: i64, a: usize, b: usize| {
        lc.layers.get(&n).is_some_and(|l| l.windows(2).any(|w| (w[0] == a && w[1] == b) || (w[0] == b && w[1] == a)))
    };
    let mut out = Vec::new();
    for (&n, row) in &lc.layers {
        for t in row.windows(3) {
            // base in layer n, third edge above: strip n; third edge below: strip n − 1
            let (ccw, strip) = if consecutive(n + 1, t[0], t[2]) {
                ([t[1], t[2], t[0]], n)
            } else if consecutive(n - 1, t[0], t[2]) {
                ([t[1], t[0], t[2]], n - 1)
            } else {
                continue;
            };
            out.push(CuspTriangle { ccw, strip, tet: (strip - 1).rem_euclid(p) as usize });
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct CuspDevelopment {
    pub window: Window,
    /// developed position of the Q-grid point (m, n)
    pub positions: BTreeMap<Pt, Complex64>,
    /// translation of D†, Re reduced to [0, 1)
    pub lambda: Complex64,
    /// the measured translation before reduction
    pub lambda_raw: Complex64,
    /// the development was complex-conjugated to make Im λ > 0
    pub conjugated: bool,
    /// largest closing defect seen while developing (before renormalization)
    pub max_defect: f64,
    pub delta: LayeredComplex,
    pub vertex_positions: Vec<Option<Complex64>>,
}

impl CuspDevelopment {
    pub fn position(&self, m: i64, n: i64) -> Option<Complex64> {
        self.positions.get(&(m, n)).copied()
    }
}

fn place(c: [Complex64; 3], m: [Complex64; 3], known: [bool; 3]) -> (usize, Complex64) {
    // c2 = c0 + m0 (c1 − c0), cyclically
    match known {
        [true, true, false] => (2, c[0] + m[0] * (c[1] - c[0])),
        [false, true, true] => (0, c[1] + m[1] * (c[2] - c[1])),
        _ => (1, c[2] + m[2] * (c[0] - c[2])),
    }
}

/// Develops the cusp cross-section over the Δ* window with dev(Q_{0,1}) = 0,
/// dev(Q_{1,1}) = 1, then rescales so that D acts by z ↦ z + 1.
pub fn develop_cusp(sys: &EgSystem, shapes: &ShapeSolution, w: Window) -> Result<CuspDevelopment, GeometryError> {
    let mon = sys.monodromy();
    let p = mon.p();
    if w.m_lo > 0 || w.m_hi < 1 || w.n_lo > 1 || w.n_hi < 1 {
        return Err(GeometryError::Window(format!("window {w} must contain Q(0..3, 1)")));
    }
    if shapes.shapes.iter().any(|z| z.im <= 0.0) {
        return Err(GeometryError::Degenerate("a shape parameter is not in the upper half plane".into()));
    }
    let lc = build_delta_direct(sys, w);
    let tris = cusp_triangles(&lc, p);
    let mut by_vertex: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, t) in tris.iter().enumerate() {
        for v in t.ccw {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    let index = lc.label_index();
    let v0 = index[&sys.q(0, 1)];
    let v1 = index[&sys.q(1, 1)];
    let mut pos: Vec<Option<Complex64>> = vec![None; lc.vertices.len()];
    pos[v0] = Some(Complex64::new(0.0, 0.0));
    pos[v1] = Some(Complex64::new(1.0, 0.0));
    let mut queue: VecDeque<usize> = by_vertex[&v0].iter().chain(&by_vertex[&v1]).copied().collect();
    let mut max_defect: f64 = 0.0;
    while let Some(ti) = queue.pop_front() {
        let t = &tris[ti];
        let z = shapes.shapes[t.tet];
        let m = [corner_value(Corner::Z, z), corner_value(Corner::ZPrime, z), corner_value(Corner::ZDoublePrime, z)];
        let known = t.ccw.map(|v| pos[v].is_some());
        let c = t.ccw.map(|v| pos[v].unwrap_or_default());
        match known.iter().filter(|k| **k).count() {
            3 => {
                let expect = c[0] + m[0] * (c[1] - c[0]);
                let scale = (c[1] - c[0]).norm().max(1.0);
                let defect = (expect - c[2]).norm() / scale;
                max_defect = max_defect.max(defect);
                if defect > DEVELOP_TOL {
                    return Err(GeometryError::NonflatDevelopment {
                        vertex: lc.vertices[t.ccw[2]].label.to_string(),
                        defect,
                    });
                }
            }
            2 => {
                let (k, x) = place(c, m, known);
                let v = t.ccw[k];
                pos[v] = Some(x);
                queue.extend(by_vertex[&v].iter().copied());
                // re-check this triangle once all corners are in place
                queue.push_back(ti);
            }
            _ => {}
        }
    }

    let (c_lo, c_hi) = (3 * w.m_lo, 3 * w.m_hi + 2);
    let grid = |c: i64, n: i64| index.get(&sys.q(c, n)).copied();
    let unit = pos[grid(3, 1).ok_or_else(|| GeometryError::Window("Q(3,1) outside window".into()))?]
        .ok_or_else(|| GeometryError::Window("Q(3,1) not reached".into()))?;
    for x in pos.iter_mut().flatten() {
        *x /= unit;
    }

    // λ from every developed pair (m, n), (m, n + p)
    let mut samples = Vec::new();
    let mut rows: BTreeMap<i64, Vec<Option<usize>>> = BTreeMap::new();
    for n in w.n_lo..=w.n_hi {
        rows.insert(n, (c_lo..=c_hi).map(|c| grid(c, n)).collect());
    }
    for n in w.n_lo..=w.n_hi - p {
        for (k, c) in (c_lo..=c_hi).enumerate() {
            let (Some(a), Some(b)) = (rows[&n][k], rows[&(n + p)][k]) else { continue };
            if let (Some(x), Some(y)) = (pos[a], pos[b]) {
                samples.push(((c, n), y - x));
            }
        }
    }
    let Some(&(_, first)) = samples.first() else {
        return Err(GeometryError::Window(format!("window {w} has no developed pair one period apart")));
    };
    for &(at, s) in &samples {
        if (s - first).norm() > LAMBDA_TOL {
            return Err(GeometryError::Lambda(format!(
                "translation at {at:?} is {s}, at the first base vertex {first}"
            )));
        }
    }
    let mut lambda_raw = samples.iter().map(|s| s.1).sum::<Complex64>() / samples.len() as f64;
    let conjugated = lambda_raw.im < 0.0;
    if conjugated {
        lambda_raw = lambda_raw.conj();
        for x in pos.iter_mut().flatten() {
            *x = x.conj();
        }
    }
    let lambda = Complex64::new(lambda_raw.re.rem_euclid(1.0), lambda_raw.im);

    let mut positions = BTreeMap::new();
    for (n, row) in &rows {
        for (k, v) in row.iter().enumerate() {
            if let Some(x) = v.and_then(|v| pos[v]) {
                positions.insert((c_lo + k as i64, *n), x);
            }
        }
    }
    Ok(CuspDevelopment {
        window: w,
        positions,
        lambda,
        lambda_raw,
        conjugated,
        max_defect,
        delta: lc,
        vertex_positions: pos,
    })
}
