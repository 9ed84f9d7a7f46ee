use std::collections::{BTreeMap, BTreeSet};

use super::{
    collapse_slanted, planar_faces, CEdge, CFace, CVertex, Color, ColoredComplex, ComplexError, LEdge,
    LVertex, Label, LayeredComplex, Pt, Window,
};
use crate::monodromy::{Letter, Monodromy};
use crate::ogroup::EgSystem;
use std::sync::Arc;

/// CWΔ(φ) on a window: vertices (m, n) labelled Q_{m,n}.
#[derive(Debug, Clone)]
pub struct ParentComplex {
    pub window: Window,
    pub mon: Monodromy,
    pub labels: BTreeMap<Pt, Label>,
    pub horizontal_edges: Vec<(Pt, Pt)>,
    /// (bottom, top, line index): column 3m+1 is ∂_{2m}, the d(n)-column ∂_{2m+1}.
    pub vertical_edges: Vec<(Pt, Pt, i64)>,
    pub slanted_edges: Vec<(Pt, Pt)>,
    /// Bounded faces of the full graph, counter-clockwise.
    pub faces: Vec<Vec<Pt>>,
}

impl ParentComplex {
    pub fn columns(&self) -> (i64, i64) {
        (3 * self.window.m_lo, 3 * self.window.m_hi + 2)
    }

    pub fn contains(&self, p: Pt) -> bool {
        self.labels.contains_key(&p)
    }

    fn interior_point(&self, p: Pt) -> bool {
        self.window.is_interior(&self.mon, p.0.div_euclid(3), p.1)
    }
}

/// Vertical edges between rows n and n+1 for block m.
fn vertical_pattern(mon: &Monodromy, m: i64, n: i64) -> [(Pt, Pt, i64); 2] {
    [
        ((3 * m + 1, n), (3 * m + 1, n + 1), 2 * m),
        ((3 * m + mon.d(n), n), (3 * m + mon.d(n + 1), n + 1), 2 * m + 1),
    ]
}

fn slanted_pattern(mon: &Monodromy, m: i64, n: i64) -> [(Pt, Pt); 2] {
    match mon.letter(n) {
        Letter::R => [((3 * m, n), (3 * m, n + 1)), ((3 * m + 1, n), (3 * m + 2, n + 1))],
        Letter::L => [((3 * m + 1, n), (3 * m, n + 1)), ((3 * m + 2, n), (3 * m + 2, n + 1))],
    }
}

pub fn build_parent(sys: &EgSystem, w: Window) -> ParentComplex {
    let mon = sys.monodromy().clone();
    let (c_lo, c_hi) = (3 * w.m_lo, 3 * w.m_hi + 2);
    let mut labels = BTreeMap::new();
    for n in w.n_lo..=w.n_hi {
        for c in c_lo..=c_hi {
            labels.insert((c, n), Arc::new(sys.q(c, n)));
        }
    }
    let inside = |p: &Pt| p.0 >= c_lo && p.0 <= c_hi && p.1 >= w.n_lo && p.1 <= w.n_hi;
    let mut horizontal_edges = Vec::new();
    let mut vertical_edges = Vec::new();
    let mut slanted_edges = Vec::new();
    for n in w.n_lo..=w.n_hi {
        for c in c_lo..c_hi {
            horizontal_edges.push(((c, n), (c + 1, n)));
        }
        if n == w.n_hi {
            continue;
        }
        for m in (w.m_lo - 1)..=(w.m_hi + 1) {
            for e in vertical_pattern(&mon, m, n) {
                if inside(&e.0) && inside(&e.1) {
                    vertical_edges.push(e);
                }
            }
            for e in slanted_pattern(&mon, m, n) {
                if inside(&e.0) && inside(&e.1) {
                    slanted_edges.push(e);
                }
            }
        }
    }
    let all: Vec<(Pt, Pt)> = horizontal_edges
        .iter()
        .copied()
        .chain(vertical_edges.iter().map(|e| (e.0, e.1)))
        .chain(slanted_edges.iter().copied())
        .collect();
    let faces = planar_faces(&all);
    ParentComplex { window: w, mon, labels, horizontal_edges, vertical_edges, slanted_edges, faces }
}

fn dedup_cycle(mut v: Vec<usize>) -> Vec<usize> {
    v.dedup();
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    v
}

/// Δ**: delete vertical edges, collapse slanted edges.
pub fn project_delta(pc: &ParentComplex) -> Result<LayeredComplex, ComplexError> {
    let col = collapse_slanted(&pc.labels, &pc.slanted_edges)?;
    let vertices: Vec<LVertex> = col
        .members
        .iter()
        .zip(&col.labels)
        .map(|(mem, label)| LVertex { label: label.clone(), core: mem.iter().all(|p| pc.interior_point(*p)) })
        .collect();
    let mut layers: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for n in pc.window.n_lo..=pc.window.n_hi {
        let (c_lo, c_hi) = pc.columns();
        layers.insert(n, (c_lo..=c_hi).map(|c| col.class_of[&(c, n)]).collect());
    }
    let mut edges = Vec::new();
    for &(a, b) in &pc.horizontal_edges {
        let (ia, ib) = (col.class_of[&a], col.class_of[&b]);
        if ia == ib {
            return Err(ComplexError::Invariant(format!("horizontal edge {a:?}-{b:?} collapsed")));
        }
        edges.push(LEdge { a: ia, b: ib, layer: a.1 });
    }
    let graph: Vec<(Pt, Pt)> = pc.horizontal_edges.iter().chain(pc.slanted_edges.iter()).copied().collect();
    let mut faces = Vec::new();
    let mut seen = BTreeSet::new();
    for cyc in planar_faces(&graph) {
        if cyc.len() != 5 {
            return Err(ComplexError::Invariant(format!("non-pentagonal face {cyc:?}")));
        }
        let ids = dedup_cycle(cyc.iter().map(|p| col.class_of[p]).collect());
        if ids.len() != 3 {
            return Err(ComplexError::Invariant(format!("pentagon {cyc:?} does not collapse to a triangle")));
        }
        let tri = [ids[0], ids[1], ids[2]];
        let mut key = tri;
        key.sort_unstable();
        if seen.insert(key) {
            faces.push(tri);
        }
    }
    Ok(LayeredComplex { window: pc.window, vertices, edges, faces, layers })
}

/// CW**: delete horizontal edges, collapse slanted edges.
pub fn project_cw(pc: &ParentComplex) -> Result<ColoredComplex, ComplexError> {
    let col = collapse_slanted(&pc.labels, &pc.slanted_edges)?;
    // lines from the vertical edges, keeping the longest run of consecutive rows
    let mut by_line: BTreeMap<i64, Vec<(Pt, Pt)>> = BTreeMap::new();
    for &(a, b, j) in &pc.vertical_edges {
        by_line.entry(j).or_default().push((a, b));
    }
    let mut lines: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut edges = Vec::new();
    for (j, mut es) in by_line {
        es.sort_by_key(|(a, _)| a.1);
        let mut best: Vec<(Pt, Pt)> = Vec::new();
        let mut run: Vec<(Pt, Pt)> = Vec::new();
        for e in es {
            if run.last().is_some_and(|l: &(Pt, Pt)| l.1 != e.0) {
                run.clear();
            }
            run.push(e);
            if run.len() > best.len() {
                best = run.clone();
            }
        }
        let mut path = vec![col.class_of[&best[0].0]];
        for (a, b) in &best {
            let (ia, ib) = (col.class_of[a], col.class_of[b]);
            if ia == ib {
                return Err(ComplexError::Invariant(format!("vertical edge {a:?}-{b:?} collapsed")));
            }
            edges.push(CEdge { a: ia, b: ib, line: j });
            path.push(ib);
        }
        lines.insert(j, path);
    }

    let mut line_sets: Vec<BTreeSet<i64>> = vec![BTreeSet::new(); col.members.len()];
    for (j, l) in &lines {
        for &v in l {
            line_sets[v].insert(*j);
        }
    }
    let vertices: Vec<CVertex> = (0..col.members.len())
        .map(|i| {
            let js: Vec<i64> = line_sets[i].iter().copied().collect();
            let color = (js.len() == 2 && js[1] == js[0] + 1).then(|| Color::of_strip(js[0]));
            CVertex {
                label: col.labels[i].clone(),
                color,
                core: col.members[i].iter().all(|p| pc.interior_point(*p)),
            }
        })
        .collect();

    let vline: BTreeMap<(Pt, Pt), i64> = pc
        .vertical_edges
        .iter()
        .flat_map(|&(a, b, j)| [((a, b), j), ((b, a), j)])
        .collect();
    let graph: Vec<(Pt, Pt)> =
        pc.vertical_edges.iter().map(|e| (e.0, e.1)).chain(pc.slanted_edges.iter().copied()).collect();
    let mut faces = Vec::new();
    for cyc in planar_faces(&graph) {
        faces.push(region_to_face(&cyc, &vline, &col.class_of, &pc.mon)?);
    }
    faces.sort_by_key(|f| (f.left_line, f.index));
    Ok(ColoredComplex { window: pc.window, vertices, lines, edges, faces })
}

/// Splits a counter-clockwise region boundary into its two vertical paths.
fn region_to_face(
    cyc: &[Pt],
    vline: &BTreeMap<(Pt, Pt), i64>,
    class_of: &BTreeMap<Pt, usize>,
    mon: &Monodromy,
) -> Result<CFace, ComplexError> {
    let k = cyc.len();
    // vertical steps in cycle order: (line, from, to)
    let steps: Vec<(i64, Pt, Pt)> = (0..k)
        .filter_map(|i| {
            let (a, b) = (cyc[i], cyc[(i + 1) % k]);
            vline.get(&(a, b)).map(|&j| (j, a, b))
        })
        .collect();
    let js: BTreeSet<i64> = steps.iter().map(|s| s.0).collect();
    let bad = || ComplexError::Invariant(format!("region {cyc:?} is not bounded by two adjacent lines"));
    if js.len() != 2 {
        return Err(bad());
    }
    let j = *js.iter().next().unwrap();
    if !js.contains(&(j + 1)) {
        return Err(bad());
    }
    // rotate to start with the first right-line step that follows a left-line step
    let s = steps.len();
    let start = (0..s).find(|&i| steps[i].0 == j + 1 && steps[(i + s - 1) % s].0 == j).ok_or_else(bad)?;
    let rot: Vec<(i64, Pt, Pt)> = (0..s).map(|i| steps[(start + i) % s]).collect();
    let split = rot.iter().position(|st| st.0 == j).ok_or_else(bad)?;
    if rot[split..].iter().any(|st| st.0 != j) {
        return Err(bad());
    }
    let (right_steps, left_steps) = rot.split_at(split);
    let mut right = vec![class_of[&right_steps[0].1]];
    right.extend(right_steps.iter().map(|st| class_of[&st.2]));
    let mut left = vec![class_of[&left_steps[0].1]];
    left.extend(left_steps.iter().map(|st| class_of[&st.2]));
    left.reverse();
    if right_steps.iter().any(|st| st.2 .1 != st.1 .1 + 1) || left_steps.iter().any(|st| st.2 .1 != st.1 .1 - 1) {
        return Err(ComplexError::Invariant(format!("region {cyc:?} boundary is not monotone")));
    }
    if left[0] != right[0] || left.last() != right.last() {
        return Err(ComplexError::Invariant(format!("region {cyc:?}: paths do not share endpoints")));
    }
    let color = Color::of_strip(j);
    // n of c_{m,n}: the top row of α on the even line
    let (m, n) = match color {
        Color::White => (j.div_euclid(2), left_steps[0].1 .1),
        Color::Gray => ((j + 1).div_euclid(2), right_steps.last().unwrap().2 .1),
    };
    debug_assert_eq!(color == Color::White, mon.letter(n) == Letter::R);
    Ok(CFace { left_line: j, color, left, right, index: Some((m, n)) })
}
