//! The two recovery recipes: the colored complex from the layered one
//! (apex lines, strips between adjacent lines) and back (arcs inside each
//! 2-cell, bigons shrunk, layers chained from the local edge pairings).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use super::{
    CEdge, CFace, CVertex, Color, ColoredComplex, ComplexError, LEdge, LVertex, LayeredComplex, UnionFind,
};
use crate::ogroup::{Gen, GroupElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Kind {
    Up,
    Down,
}

/// The colored complex of a layered one.  Upward lines get even indices and
/// the line through the label B = P_{0,1} is ∂₀ when that label is present.
pub fn recover_cw_from_delta(lc: &LayeredComplex) -> Result<ColoredComplex, ComplexError> {
    recover_cw_from_delta_anchored(lc, Some(&GroupElement::gen(Gen::B)))
}

/// As [`recover_cw_from_delta`] with ∂₀ taken through `anchor`; without an
/// anchor (or if it lies on no upward line) the leftmost upward line is ∂₀.
pub fn recover_cw_from_delta_anchored(
    lc: &LayeredComplex,
    anchor: Option<&GroupElement>,
) -> Result<ColoredComplex, ComplexError> {
    if lc.layers.len() < 3 {
        return Err(ComplexError::InsufficientWindow(format!("{} layers", lc.layers.len())));
    }
    let sets: BTreeMap<i64, HashSet<usize>> =
        lc.layers.iter().map(|(n, l)| (*n, l.iter().copied().collect())).collect();

    // apexes per layer, core vertices only
    let mut apex: BTreeMap<(i64, Kind), Vec<usize>> = BTreeMap::new();
    for (&n, layer) in &lc.layers {
        for &v in layer {
            if !lc.vertices[v].core {
                continue;
            }
            if let Some(below) = sets.get(&(n - 1)) {
                if !below.contains(&v) {
                    apex.entry((n, Kind::Up)).or_default().push(v);
                }
            }
            if let Some(above) = sets.get(&(n + 1)) {
                if !above.contains(&v) {
                    apex.entry((n, Kind::Down)).or_default().push(v);
                }
            }
        }
    }

    // chain apexes of consecutive layers; lines are stored bottom to top as (n, v).
    // An upward apex of L_n is followed by its neighbour in L_{n+1} that is an
    // upward apex there; a downward apex of L_n by the downward apex of L_{n+1}
    // next to it in L_n.  Adjacency anywhere in Δ is not enough: an apex can
    // be joined to two apexes of the next layer.
    let layer_nbrs = |n: i64, v: usize| -> Vec<usize> {
        let Some(l) = lc.layers.get(&n) else { return Vec::new() };
        let Some(i) = l.iter().position(|&x| x == v) else { return Vec::new() };
        [i.checked_sub(1), Some(i + 1)].into_iter().flatten().filter_map(|k| l.get(k).copied()).collect()
    };
    let mut lines: Vec<(Kind, Vec<(i64, usize)>)> = Vec::new();
    for kind in [Kind::Up, Kind::Down] {
        let mut next: HashMap<(i64, usize), usize> = HashMap::new();
        let mut has_prev: HashSet<(i64, usize)> = HashSet::new();
        for (&(n, k), vs) in &apex {
            if k != kind {
                continue;
            }
            let Some(up) = apex.get(&(n + 1, kind)) else { continue };
            let within = if kind == Kind::Up { n + 1 } else { n };
            for &v in vs {
                let hits: Vec<usize> = layer_nbrs(within, v).into_iter().filter(|u| up.contains(u)).collect();
                match hits.len() {
                    0 => {}
                    1 => {
                        next.insert((n, v), hits[0]);
                        has_prev.insert((n + 1, hits[0]));
                    }
                    _ => {
                        return Err(ComplexError::Invariant(format!(
                            "apex {} of layer {n} has {} adjacent apexes above",
                            lc.vertices[v].label,
                            hits.len()
                        )))
                    }
                }
            }
        }
        for (&(n, k), vs) in &apex {
            if k != kind {
                continue;
            }
            for &v in vs {
                if has_prev.contains(&(n, v)) {
                    continue;
                }
                let mut path = vec![(n, v)];
                let (mut cn, mut cv) = (n, v);
                while let Some(&u) = next.get(&(cn, cv)) {
                    cn += 1;
                    cv = u;
                    path.push((cn, cv));
                }
                lines.push((kind, path));
            }
        }
    }
    if lines.is_empty() {
        return Err(ComplexError::InsufficientWindow("no apex lines".into()));
    }

    // left-to-right order from the positions in the layer met by most lines
    let mut met: BTreeMap<i64, usize> = BTreeMap::new();
    for (_, path) in &lines {
        for &(n, _) in path {
            *met.entry(n).or_default() += 1;
        }
    }
    let (&ref_n, _) = met.iter().max_by_key(|(n, c)| (**c, -**n)).unwrap();
    let pos: HashMap<usize, usize> = lc.layers[&ref_n].iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut ordered: Vec<(usize, Kind, Vec<(i64, usize)>)> = lines
        .into_iter()
        .filter_map(|(k, path)| {
            let at = path.iter().find(|(n, _)| *n == ref_n)?;
            Some((pos[&at.1], k, path))
        })
        .collect();
    ordered.sort_by_key(|(p, k, _)| (*p, *k == Kind::Down));
    if ordered.windows(2).any(|w| w[0].1 == w[1].1) {
        return Err(ComplexError::Invariant(format!("apex lines do not alternate in layer {ref_n}")));
    }
    let on_anchor = |path: &[(i64, usize)]| anchor.is_some_and(|a| path.iter().any(|(_, v)| *lc.vertices[*v].label == *a));
    let zero = ordered
        .iter()
        .position(|(_, k, path)| *k == Kind::Up && on_anchor(path))
        .or_else(|| ordered.iter().position(|(_, k, _)| *k == Kind::Up))
        .ok_or_else(|| ComplexError::InsufficientWindow("no upward line".into()))?;

    let mut out_lines: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut edges = Vec::new();
    for (i, (_, _, path)) in ordered.iter().enumerate() {
        let j = i as i64 - zero as i64;
        let verts: Vec<usize> = path.iter().map(|(_, v)| *v).collect();
        for w in verts.windows(2) {
            edges.push(CEdge { a: w[0], b: w[1], line: j });
        }
        out_lines.insert(j, verts);
    }

    let mut on: Vec<Vec<i64>> = vec![Vec::new(); lc.vertices.len()];
    for (j, l) in &out_lines {
        for &v in l {
            on[v].push(*j);
        }
    }
    let vertices: Vec<CVertex> = lc
        .vertices
        .iter()
        .zip(&on)
        .map(|(v, js)| {
            let color = (js.len() == 2 && js[1] == js[0] + 1).then(|| Color::of_strip(js[0]));
            CVertex { label: v.label.clone(), color, core: v.core && color.is_some() }
        })
        .collect();

    let mut faces = Vec::new();
    for (&j, left) in &out_lines {
        let Some(right) = out_lines.get(&(j + 1)) else { continue };
        let rpos: HashMap<usize, usize> = right.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let common: Vec<(usize, usize)> =
            left.iter().enumerate().filter_map(|(i, v)| rpos.get(v).map(|&r| (i, r))).collect();
        for w in common.windows(2) {
            let ((l0, r0), (l1, r1)) = (w[0], w[1]);
            if r1 <= r0 {
                return Err(ComplexError::Invariant(format!("lines {j} and {} cross", j + 1)));
            }
            faces.push(CFace {
                left_line: j,
                color: Color::of_strip(j),
                left: left[l0..=l1].to_vec(),
                right: right[r0..=r1].to_vec(),
                index: None,
            });
        }
    }
    Ok(ColoredComplex { window: lc.window, vertices, lines: out_lines, edges, faces })
}

/// Vertex, bigon and triangle counts produced by the arc recipe in one 2-cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellCounts {
    pub vertices: usize,
    pub bigons: usize,
    pub triangles: usize,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Arcs of the recipe inside one cell (central edge first).
fn cell_arcs(f: &CFace) -> Vec<(usize, usize)> {
    let (vm, vp) = (f.v_minus(), f.v_plus());
    let (alpha, beta) = f.alpha_beta();
    let mut arcs = vec![(vm, vp)];
    let mut joined: HashSet<(usize, usize)> = HashSet::from([key(vm, vp)]);
    for &a in &alpha[1..alpha.len() - 1] {
        arcs.push((vm, a));
        joined.insert(key(vm, a));
    }
    for &b in &beta[1..beta.len() - 1] {
        arcs.push((vp, b));
        joined.insert(key(vp, b));
    }
    for path in [alpha, beta] {
        for w in path.windows(2) {
            if !joined.contains(&key(w[0], w[1])) {
                arcs.push((w[0], w[1]));
            }
        }
    }
    arcs
}

/// Triangles of one cell, counter-clockwise.
fn cell_triangles(f: &CFace) -> Vec<[usize; 3]> {
    let (vm, vp) = (f.v_minus(), f.v_plus());
    let (a, b) = f.alpha_beta();
    let mut out = Vec::new();
    match f.color {
        Color::White => {
            for i in 1..a.len() - 1 {
                out.push([vm, a[i + 1], a[i]]);
            }
            for i in 0..b.len().saturating_sub(2) {
                out.push([vp, b[i], b[i + 1]]);
            }
        }
        Color::Gray => {
            for i in 1..a.len() - 1 {
                out.push([vm, a[i], a[i + 1]]);
            }
            for i in 0..b.len().saturating_sub(2) {
                out.push([vp, b[i + 1], b[i]]);
            }
        }
    }
    out
}

pub fn cell_counts(f: &CFace) -> CellCounts {
    let mut mult: HashMap<(usize, usize), usize> = HashMap::new();
    let boundary = f.left.windows(2).chain(f.right.windows(2)).map(|w| (w[0], w[1]));
    for (a, b) in boundary.chain(cell_arcs(f)) {
        *mult.entry(key(a, b)).or_default() += 1;
    }
    CellCounts {
        vertices: f.vertex_count(),
        bigons: mult.values().map(|m| m - 1).sum(),
        triangles: cell_triangles(f).len(),
    }
}

fn check_cell(cc: &ColoredComplex, f: &CFace) -> Result<(), ComplexError> {
    let malformed = |what: &str| {
        ComplexError::Malformed(format!("cell on line {} ({:?}): {what}", f.left_line, f.color))
    };
    if f.left.len() < 2 || f.right.len() < 2 {
        return Err(malformed("path shorter than an edge"));
    }
    if f.left[0] != f.right[0] || f.left.last() != f.right.last() {
        return Err(malformed("paths do not share endpoints"));
    }
    let inner = f.left[1..f.left.len() - 1].iter().chain(&f.right[1..f.right.len() - 1]);
    let mut same = 0;
    for &v in inner {
        if cc.vertices[v].color == Some(f.color) {
            same += 1;
        }
    }
    for v in [f.v_minus(), f.v_plus()] {
        if cc.vertices[v].color.is_some_and(|c| c != f.color) {
            return Err(malformed("an endpoint has the other color"));
        }
    }
    if same > 0 {
        return Err(malformed("more than two vertices share its color"));
    }
    Ok(())
}

/// Clockwise neighbours of every vertex whose surrounding cells are all present.
fn rotations(cc: &ColoredComplex) -> HashMap<usize, Vec<usize>> {
    let lines_of = cc.lines_of();
    // cells by (left line, endpoint), and by (left line, vertex on a path interior)
    let mut above: HashMap<(i64, usize), &CFace> = HashMap::new();
    let mut below: HashMap<(i64, usize), &CFace> = HashMap::new();
    let mut left_side: HashMap<(i64, usize), &CFace> = HashMap::new();
    let mut right_side: HashMap<(i64, usize), &CFace> = HashMap::new();
    for f in &cc.faces {
        above.insert((f.left_line, f.v_minus()), f);
        below.insert((f.left_line, f.v_plus()), f);
        for &v in &f.left[1..f.left.len() - 1] {
            left_side.insert((f.left_line, v), f);
        }
        for &v in &f.right[1..f.right.len() - 1] {
            right_side.insert((f.left_line, v), f);
        }
    }
    let step = |j: i64, v: usize, d: i64| -> Option<usize> {
        let l = cc.lines.get(&j)?;
        let i = l.iter().position(|&x| x == v)? as i64 + d;
        (i >= 0 && (i as usize) < l.len()).then(|| l[i as usize])
    };
    let mut out = HashMap::new();
    for v in 0..cc.vertices.len() {
        let js = &lines_of[v];
        if js.len() != 2 || js[1] != js[0] + 1 {
            continue;
        }
        let j = js[0];
        let (Some(up), Some(dn), Some(rc), Some(lcell)) =
            (above.get(&(j, v)), below.get(&(j, v)), left_side.get(&(j + 1, v)), right_side.get(&(j - 1, v)))
        else {
            continue;
        };
        let parts = [step(j, v, 1), step(j + 1, v, 1), step(j + 1, v, -1), step(j, v, -1)];
        let [Some(up_j), Some(up_j1), Some(dn_j1), Some(dn_j)] = parts else { continue };
        let mut rot = vec![up_j];
        match up.color {
            Color::White => {
                rot.extend(&up.left[1..]);
                rot.push(up.right[1]);
            }
            Color::Gray => {
                rot.push(up.left[1]);
                rot.push(up.v_plus());
                rot.extend(up.right[1..up.right.len() - 1].iter().rev());
            }
        }
        rot.push(up_j1);
        rot.push(match rc.color {
            Color::White => rc.v_minus(),
            Color::Gray => rc.v_plus(),
        });
        rot.push(dn_j1);
        let (s, t) = (dn.left.len() - 1, dn.right.len() - 1);
        match dn.color {
            Color::White => {
                rot.extend(dn.right[..t].iter().rev());
                rot.push(dn.left[s - 1]);
            }
            Color::Gray => {
                rot.push(dn.right[t - 1]);
                rot.push(dn.v_minus());
                rot.extend(&dn.left[1..s]);
            }
        }
        rot.push(dn_j);
        rot.push(match lcell.color {
            Color::White => lcell.v_plus(),
            Color::Gray => lcell.v_minus(),
        });
        rot.dedup();
        while rot.len() > 1 && rot.first() == rot.last() {
            rot.pop();
        }
        out.insert(v, rot);
    }
    out
}

/// The layered complex of a colored one.
pub fn recover_delta_from_cw(cc: &ColoredComplex) -> Result<LayeredComplex, ComplexError> {
    for f in &cc.faces {
        check_cell(cc, f)?;
    }
    let vertices: Vec<LVertex> =
        cc.vertices.iter().map(|v| LVertex { label: v.label.clone(), core: v.core }).collect();
    let mut faces = Vec::new();
    let mut all_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for f in &cc.faces {
        let counts = cell_counts(f);
        if counts.bigons != counts.vertices || counts.triangles + 2 != counts.vertices {
            return Err(ComplexError::Invariant(format!("cell on line {} has counts {counts:?}", f.left_line)));
        }
        faces.extend(cell_triangles(f));
        for (a, b) in cell_arcs(f) {
            all_edges.insert(key(a, b));
        }
    }

    // local pairings: slot i of v is (left neighbour, right neighbour) in its i-th layer from below
    let rot = rotations(cc);
    let lines_of = cc.lines_of();
    let below: HashMap<(i64, usize), &CFace> = cc.faces.iter().map(|f| ((f.left_line, f.v_plus()), f)).collect();
    let mut slots: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (&v, r) in &rot {
        let j = lines_of[v][0];
        let color = Color::of_strip(j);
        let e1 = below[&(j, v)].v_minus();
        let k = r.iter().position(|&x| x == e1).ok_or_else(|| {
            ComplexError::Invariant(format!("central edge missing at {}", cc.vertices[v].label))
        })?;
        let walk: Vec<usize> = match color {
            Color::White => (0..r.len()).map(|i| r[(k + r.len() - i) % r.len()]).collect(),
            Color::Gray => (0..r.len()).map(|i| r[(k + i) % r.len()]).collect(),
        };
        if !walk.len().is_multiple_of(2) {
            return Err(ComplexError::Invariant(format!("odd valence at {}", cc.vertices[v].label)));
        }
        let d = walk.len() / 2;
        let s = (0..d)
            .map(|i| {
                let (x, y) = (walk[i], walk[2 * d - 1 - i]);
                match color {
                    Color::White => (y, x),
                    Color::Gray => (x, y),
                }
            })
            .collect();
        slots.insert(v, s);
    }

    // chain slots across edges: slot (v, i) with right neighbour r meets r's
    // slots whose left neighbour is v, matched in order
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    for (&v, s) in &slots {
        for i in 0..s.len() {
            let n = ids.len();
            ids.insert((v, i), n);
        }
    }
    let mut uf = UnionFind::new(ids.len());
    let mut links: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for (&v, s) in &slots {
        let mut by_right: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &(_, r)) in s.iter().enumerate() {
            by_right.entry(r).or_default().push(i);
        }
        for (r, mine) in by_right {
            let Some(rs) = slots.get(&r) else { continue };
            let theirs: Vec<usize> = (0..rs.len()).filter(|&k| rs[k].0 == v).collect();
            if theirs.len() != mine.len() {
                return Err(ComplexError::Invariant(format!(
                    "edge {} - {} lies in {} layers on one side and {} on the other",
                    cc.vertices[v].label,
                    cc.vertices[r].label,
                    mine.len(),
                    theirs.len()
                )));
            }
            for (a, b) in mine.into_iter().zip(theirs) {
                uf.union(ids[&(v, a)], ids[&(r, b)]);
                links.push(((v, a), (r, b)));
            }
        }
    }

    // layer offsets: slot i+1 is one layer above slot i; a chain is one layer
    let mut adj: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
    let mut add = |a: usize, b: usize, d: i64| {
        adj.entry(a).or_default().push((b, d));
        adj.entry(b).or_default().push((a, -d));
    };
    for (&v, s) in &slots {
        for i in 1..s.len() {
            add(uf.find(ids[&(v, i - 1)]), uf.find(ids[&(v, i)]), 1);
        }
    }
    let mut level: HashMap<usize, i64> = HashMap::new();
    let mut best: Vec<usize> = Vec::new();
    let mut roots: Vec<usize> = adj.keys().copied().collect();
    roots.sort_unstable();
    for start in roots {
        if level.contains_key(&start) {
            continue;
        }
        let mut comp = vec![start];
        level.insert(start, 0);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(y, d) in &adj[&x] {
                let want = level[&x] + d;
                match level.get(&y) {
                    Some(&have) if have != want => {
                        return Err(ComplexError::Invariant("layer chaining is inconsistent".into()))
                    }
                    Some(_) => {}
                    None => {
                        level.insert(y, want);
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        if comp.len() > best.len() {
            best = comp;
        }
    }
    let keep: HashSet<usize> = best.into_iter().collect();
    // the central edge of a white cell c_{m,n} is the lowest layer edge of its
    // v₊ and lies in L_n; use it to fix the numbering when cells carry indices
    let anchor = cc.faces.iter().find_map(|f| {
        let (_, n) = f.index?;
        if f.color != Color::White {
            return None;
        }
        let root = uf.find(*ids.get(&(f.v_plus(), 0))?);
        keep.contains(&root).then(|| n - level[&root])
    });
    if let Some(shift) = anchor {
        for l in level.values_mut() {
            *l += shift;
        }
    }

    // each layer as a left-to-right path
    let mut right_of: BTreeMap<i64, HashMap<usize, usize>> = BTreeMap::new();
    let mut members: BTreeMap<i64, BTreeSet<usize>> = BTreeMap::new();
    for ((v, a), (r, _)) in &links {
        let root = uf.find(ids[&(*v, *a)]);
        if !keep.contains(&root) {
            continue;
        }
        let n = level[&root];
        right_of.entry(n).or_default().insert(*v, *r);
        members.entry(n).or_default().extend([*v, *r]);
    }
    let mut layers = BTreeMap::new();
    let mut edges = Vec::new();
    for (n, next) in right_of {
        let targets: HashSet<usize> = next.values().copied().collect();
        let mut starts: Vec<usize> = next.keys().copied().filter(|v| !targets.contains(v)).collect();
        // segments left to right by the line they start on
        starts.sort_by_key(|v| lines_of[*v].first().copied().unwrap_or(i64::MAX));
        let mut path = Vec::new();
        for s in starts {
            let mut cur = s;
            path.push(cur);
            while let Some(&r) = next.get(&cur) {
                edges.push(LEdge { a: cur, b: r, layer: n });
                path.push(r);
                cur = r;
                if path.len() > members[&n].len() + 1 {
                    return Err(ComplexError::Invariant(format!("layer {n} is cyclic")));
                }
            }
        }
        layers.insert(n, path);
    }
    let layered: HashSet<(usize, usize)> = edges.iter().map(|e| key(e.a, e.b)).collect();
    for (a, b) in all_edges {
        if !layered.contains(&(a, b)) && vertices[a].core && vertices[b].core {
            return Err(ComplexError::Invariant(format!(
                "edge {} - {} lies in no layer",
                vertices[a].label, vertices[b].label
            )));
        }
    }
    Ok(LayeredComplex { window: cc.window, vertices, edges, faces, layers })
}
