use std::collections::BTreeMap;
use std::sync::Arc;

use super::{collapse_slanted, CEdge, CFace, CVertex, Color, ColoredComplex, ComplexError, Pt, Window};
use crate::monodromy::{Letter, Monodromy};
use crate::ogroup::EgSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CwPrimeFace {
    pub m: i64,
    pub n: i64,
    pub color: Color,
    pub left_line: i64,
    /// bottom-to-top grid points on the left and right columns
    pub left: Vec<Pt>,
    pub right: Vec<Pt>,
}

impl CwPrimeFace {
    /// The four corner points of c'_{m,n}.
    pub fn corners(&self) -> [Pt; 4] {
        [self.left[0], *self.left.last().unwrap(), self.right[0], *self.right.last().unwrap()]
    }
}

/// CW′(φ) on a window: the grid Z² with vertex (m, n) labelled by f_n.
#[derive(Debug, Clone)]
pub struct CwPrime {
    pub window: Window,
    pub mon: Monodromy,
    pub letters: BTreeMap<Pt, Letter>,
    pub vertical_edges: Vec<(Pt, Pt)>,
    pub slanted_edges: Vec<(Pt, Pt)>,
    pub faces: Vec<CwPrimeFace>,
}

pub fn build_cw_prime(mon: &Monodromy, w: Window) -> CwPrime {
    let (c_lo, c_hi) = (2 * w.m_lo, 2 * w.m_hi + 1);
    let inside = |p: &Pt| p.0 >= c_lo && p.0 <= c_hi && p.1 >= w.n_lo && p.1 <= w.n_hi;
    let mut letters = BTreeMap::new();
    let mut vertical_edges = Vec::new();
    let mut slanted_edges = Vec::new();
    for n in w.n_lo..=w.n_hi {
        for c in c_lo..=c_hi {
            letters.insert((c, n), mon.letter(n));
            if n < w.n_hi {
                vertical_edges.push(((c, n), (c, n + 1)));
            }
        }
    }
    for n in (w.n_lo - mon.p())..=w.n_hi {
        let np = mon.next_same(n);
        for m in (w.m_lo - 1)..=(w.m_hi + 1) {
            let e = match mon.letter(n) {
                Letter::R => ((2 * m, n), (2 * m + 1, np)),
                Letter::L => ((2 * m, n), (2 * m - 1, np)),
            };
            if inside(&e.0) && inside(&e.1) {
                slanted_edges.push(e);
            }
        }
    }
    let mut faces = Vec::new();
    for n in w.n_lo..=w.n_hi {
        let (nm, np) = (mon.prev_same(n), mon.next_same(n));
        for m in (w.m_lo - 1)..=(w.m_hi + 1) {
            let (left_line, left, right, color) = match mon.letter(n) {
                Letter::R => (
                    2 * m,
                    (nm..=n).map(|k| (2 * m, k)).collect::<Vec<_>>(),
                    (n..=np).map(|k| (2 * m + 1, k)).collect::<Vec<_>>(),
                    Color::White,
                ),
                Letter::L => (
                    2 * m - 1,
                    (n..=np).map(|k| (2 * m - 1, k)).collect(),
                    (nm..=n).map(|k| (2 * m, k)).collect(),
                    Color::Gray,
                ),
            };
            if left.iter().chain(right.iter()).all(inside) {
                faces.push(CwPrimeFace { m, n, color, left_line, left, right });
            }
        }
    }
    CwPrime { window: w, mon: mon.clone(), letters, vertical_edges, slanted_edges, faces }
}

impl CwPrime {
    /// CW*: collapse every slanted edge; the class of (m, n) is labelled P_{m,n}.
    pub fn collapse(&self, sys: &EgSystem) -> Result<ColoredComplex, ComplexError> {
        let labels = self.letters.keys().map(|&(c, n)| ((c, n), Arc::new(sys.p(c, n)))).collect();
        let col = collapse_slanted(&labels, &self.slanted_edges)?;
        let mon = &self.mon;
        let w = self.window;
        let vertices = col
            .members
            .iter()
            .zip(&col.labels)
            .map(|(mem, label)| {
                // every member of a class carries the same letter, R on white strips
                let color = if mon.letter(mem[0].1) == Letter::R { Color::White } else { Color::Gray };
                CVertex {
                    label: label.clone(),
                    color: Some(color),
                    core: mem.iter().all(|&(c, n)| w.is_interior(mon, c.div_euclid(2), n)),
                }
            })
            .collect();
        let mut lines: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for &(c, _n) in self.letters.keys() {
            lines.entry(c).or_default();
        }
        for (c, list) in lines.iter_mut() {
            *list = (w.n_lo..=w.n_hi).map(|n| col.class_of[&(*c, n)]).collect();
        }
        let edges = self
            .vertical_edges
            .iter()
            .map(|(a, b)| CEdge { a: col.class_of[a], b: col.class_of[b], line: a.0 })
            .collect();
        let faces = self
            .faces
            .iter()
            .map(|f| CFace {
                left_line: f.left_line,
                color: f.color,
                left: f.left.iter().map(|p| col.class_of[p]).collect(),
                right: f.right.iter().map(|p| col.class_of[p]).collect(),
                index: Some((f.m, f.n)),
            })
            .collect();
        Ok(ColoredComplex { window: w, vertices, lines, edges, faces })
    }
}
