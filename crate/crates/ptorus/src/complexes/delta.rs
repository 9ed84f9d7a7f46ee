use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::{LEdge, LVertex, LayeredComplex, Pt, Window};
use crate::ogroup::{EgSystem, GroupElement};

/// Δ*(φ) straight from the elliptic generator sequences: vertices are the
/// distinct labels Q_{m,n}, layer n is the row of Q-labels in column order,
/// and the triangles are the triples of consecutive row entries whose outer
/// pair is consecutive in a neighbouring row.
pub fn build_delta_direct(sys: &EgSystem, w: Window) -> LayeredComplex {
    let mon = sys.monodromy();
    let (c_lo, c_hi) = (3 * w.m_lo, 3 * w.m_hi + 2);
    let mut index: HashMap<Arc<GroupElement>, usize> = HashMap::new();
    let mut reps: Vec<Vec<Pt>> = Vec::new();
    let mut vertices: Vec<LVertex> = Vec::new();
    let mut layers: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for n in w.n_lo..=w.n_hi {
        let mut row = Vec::with_capacity((c_hi - c_lo + 1) as usize);
        for c in c_lo..=c_hi {
            let label = Arc::new(sys.q(c, n));
            let id = *index.entry(label.clone()).or_insert_with(|| {
                vertices.push(LVertex { label, core: true });
                reps.push(Vec::new());
                vertices.len() - 1
            });
            reps[id].push((c, n));
            row.push(id);
        }
        layers.insert(n, row);
    }
    for (v, r) in vertices.iter_mut().zip(&reps) {
        v.core = r.iter().all(|&(c, n)| w.is_interior(mon, c.div_euclid(3), n));
    }

    let mut edges = Vec::new();
    let mut pairs: BTreeMap<i64, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for (&n, row) in &layers {
        let set = pairs.entry(n).or_default();
        for win in row.windows(2) {
            edges.push(LEdge { a: win[0], b: win[1], layer: n });
            set.insert((win[0].min(win[1]), win[0].max(win[1])));
        }
    }
    let consecutive = |n: i64, a: usize, b: usize| pairs.get(&n).is_some_and(|s| s.contains(&(a.min(b), a.max(b))));
    let mut faces = Vec::new();
    let mut seen = BTreeSet::new();
    for (&n, row) in &layers {
        for t in row.windows(3) {
            let tri = if consecutive(n + 1, t[0], t[2]) {
                [t[0], t[1], t[2]]
            } else if consecutive(n - 1, t[0], t[2]) {
                [t[2], t[1], t[0]]
            } else {
                continue;
            };
            let mut key = tri;
            key.sort_unstable();
            if seen.insert(key) {
                faces.push(tri);
            }
        }
    }
    LayeredComplex { window: w, vertices, edges, faces, layers }
}
