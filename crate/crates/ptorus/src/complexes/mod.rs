//! Windowed models of the two tessellations and the parent complex CWΔ.
//!
//! Window m-ranges count D-periods ("blocks"): the parent complex spans the
//! Q-columns `3·m_lo ..= 3·m_hi + 2`, the complex CW′ the P-columns
//! `2·m_lo ..= 2·m_hi + 1`.  A vertex is *core* when every grid point carrying
//! its label sits in the interior of the window, i.e. at least one block away
//! from the left and right edges and `2·g + 1` rows away from the top and
//! bottom, where g is the largest gap `n_+ − n` of the word.  Cells all of
//! whose vertices are core are complete in any window.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monodromy::Monodromy;
use crate::ogroup::GroupElement;

mod cwprime;
mod delta;
mod iso;
mod parent;
mod planar;
mod recover;

pub use cwprime::{build_cw_prime, CwPrime, CwPrimeFace};
pub use delta::build_delta_direct;
pub use iso::{iso_colored, iso_colored_explain, iso_layered, iso_layered_explain, Correspondence};
#[cfg(any(test, feature = "blind-search"))]
pub use iso::{iso_colored_blind, iso_layered_blind};
pub use parent::{build_parent, project_cw, project_delta, ParentComplex};
pub use planar::planar_faces;
pub use recover::{
    cell_counts, recover_cw_from_delta, recover_cw_from_delta_anchored, recover_delta_from_cw, CellCounts,
};

pub type Pt = (i64, i64);
pub type Label = Arc<GroupElement>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("empty window")]
    EmptyWindow,
    #[error("insufficient window: {0}")]
    InsufficientWindow(String),
    #[error("inconsistent merge at {a:?} ~ {b:?}: labels differ")]
    InconsistentMerge { a: Pt, b: Pt },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub m_lo: i64,
    pub m_hi: i64,
    pub n_lo: i64,
    pub n_hi: i64,
}

impl Window {
    pub fn new(m: (i64, i64), n: (i64, i64)) -> Result<Window, ComplexError> {
        if m.0 > m.1 || n.0 > n.1 {
            return Err(ComplexError::EmptyWindow);
        }
        Ok(Window { m_lo: m.0, m_hi: m.1, n_lo: n.0, n_hi: n.1 })
    }

    pub fn row_margin(mon: &Monodromy) -> i64 {
        2 * mon.max_gap() + 1
    }

    /// Block/row pairs whose cells are guaranteed complete.
    pub fn is_interior(&self, mon: &Monodromy, block: i64, n: i64) -> bool {
        let r = Window::row_margin(mon);
        block > self.m_lo && block < self.m_hi && n >= self.n_lo + r && n <= self.n_hi - r
    }

    pub fn interior_rows(&self, mon: &Monodromy) -> Option<(i64, i64)> {
        let r = Window::row_margin(mon);
        let (a, b) = (self.n_lo + r, self.n_hi - r);
        (a <= b).then_some((a, b))
    }

    /// The window `[-mb, mb] × [-N, N]` with `N ≥ 2p` large enough to have at
    /// least `core_rows` interior rows on each side of 0.
    pub fn standard(mon: &Monodromy, blocks: i64, core_rows: i64) -> Window {
        let n = (2 * mon.p()).max(Window::row_margin(mon) + core_rows);
        Window { m_lo: -blocks, m_hi: blocks, n_lo: -n, n_hi: n }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m:{}..{} n:{}..{}", self.m_lo, self.m_hi, self.n_lo, self.n_hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Gray,
}

impl Color {
    /// Strip between lines j and j+1.
    pub fn of_strip(j: i64) -> Color {
        if j.rem_euclid(2) == 0 {
            Color::White
        } else {
            Color::Gray
        }
    }
}

#[derive(Debug, Clone)]
pub struct LVertex {
    pub label: Label,
    pub core: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LEdge {
    pub a: usize,
    pub b: usize,
    pub layer: i64,
}

/// A windowed layered simplicial complex (Δ*, Δ** or a recovered Δ).
#[derive(Debug, Clone)]
pub struct LayeredComplex {
    pub window: Window,
    pub vertices: Vec<LVertex>,
    pub edges: Vec<LEdge>,
    /// Triangles, counter-clockwise when the construction knows the embedding.
    pub faces: Vec<[usize; 3]>,
    /// Layer n as a left-to-right vertex path.
    pub layers: BTreeMap<i64, Vec<usize>>,
}

impl LayeredComplex {
    pub fn label_index(&self) -> HashMap<&GroupElement, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (&*v.label, i)).collect()
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            nb[e.a].push(e.b);
            nb[e.b].push(e.a);
        }
        for v in &mut nb {
            v.sort_unstable();
            v.dedup();
        }
        nb
    }

    pub fn layers_of(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (n, layer) in &self.layers {
            for &v in layer {
                out[v].push(*n);
            }
        }
        out
    }

    pub fn shift_layers(&self, d: i64) -> LayeredComplex {
        let mut c = self.clone();
        c.layers = self.layers.iter().map(|(n, l)| (n + d, l.clone())).collect();
        for e in &mut c.edges {
            e.layer += d;
        }
        c
    }
}

#[derive(Debug, Clone)]
pub struct CVertex {
    pub label: Label,
    pub color: Option<Color>,
    pub core: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CEdge {
    pub a: usize,
    pub b: usize,
    pub line: i64,
}

/// A 2-cell bounded by a path on line `left_line` and a path on
/// `left_line + 1`, both listed bottom to top; they share their endpoints
/// v₋ (first) and v₊ (last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFace {
    pub left_line: i64,
    pub color: Color,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// (m, n) of c_{m,n} when the construction knows it.
    pub index: Option<(i64, i64)>,
}

impl CFace {
    pub fn v_minus(&self) -> usize {
        self.left[0]
    }

    pub fn v_plus(&self) -> usize {
        *self.left.last().unwrap()
    }

    /// (α, β): α is on the left for white cells and on the right for gray ones.
    pub fn alpha_beta(&self) -> (&[usize], &[usize]) {
        match self.color {
            Color::White => (&self.left, &self.right),
            Color::Gray => (&self.right, &self.left),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.left.len() + self.right.len() - 2
    }
}

/// A windowed colored CW complex (CW*, CW**, CW#).
#[derive(Debug, Clone)]
pub struct ColoredComplex {
    pub window: Window,
    pub vertices: Vec<CVertex>,
    /// Vertical line ∂_j as a bottom-to-top vertex list.
    pub lines: BTreeMap<i64, Vec<usize>>,
    pub edges: Vec<CEdge>,
    pub faces: Vec<CFace>,
}

impl ColoredComplex {
    pub fn label_index(&self) -> HashMap<&GroupElement, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (&*v.label, i)).collect()
    }

    pub fn lines_of(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (j, line) in &self.lines {
            for &v in line {
                out[v].push(*j);
            }
        }
        out
    }

    pub fn shift_lines(&self, d: i64) -> ColoredComplex {
        let mut c = self.clone();
        c.lines = self.lines.iter().map(|(j, l)| (j + d, l.clone())).collect();
        for e in &mut c.edges {
            e.line += d;
        }
        for f in &mut c.faces {
            f.left_line += d;
        }
        c
    }
}

/// Disjoint sets with path compression and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}

/// Grid points merged along slanted edges, with the label check applied at
/// every union.
pub(crate) struct Collapse {
    pub class_of: BTreeMap<Pt, usize>,
    pub members: Vec<Vec<Pt>>,
    pub labels: Vec<Label>,
}

pub(crate) fn collapse_slanted(
    labels: &BTreeMap<Pt, Label>,
    slanted: &[(Pt, Pt)],
) -> Result<Collapse, ComplexError> {
    let pts: Vec<Pt> = labels.keys().copied().collect();
    let idx: HashMap<Pt, usize> = pts.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut uf = UnionFind::new(pts.len());
    for (a, b) in slanted {
        let (ia, ib) = (idx[a], idx[b]);
        let (ra, rb) = (uf.find(ia), uf.find(ib));
        if ra != rb {
            if labels[&pts[ra]] != labels[&pts[rb]] {
                return Err(ComplexError::InconsistentMerge { a: *a, b: *b });
            }
            uf.union(ia, ib);
        }
    }
    // classes numbered by their first member in (n, column) order
    let mut order: Vec<Pt> = pts.clone();
    order.sort_by_key(|&(c, n)| (n, c));
    let mut root_to_class = HashMap::new();
    let mut class_of = BTreeMap::new();
    let mut members: Vec<Vec<Pt>> = Vec::new();
    let mut out_labels = Vec::new();
    for p in order {
        let r = uf.find(idx[&p]);
        let cls = *root_to_class.entry(r).or_insert_with(|| {
            members.push(Vec::new());
            out_labels.push(labels[&p].clone());
            members.len() - 1
        });
        members[cls].push(p);
        class_of.insert(p, cls);
    }
    Ok(Collapse { class_of, members, labels: out_labels })
}
