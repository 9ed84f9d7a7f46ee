//! Equivariant isomorphism tests restricted to the common core of two windows.
//!
//! The label-driven tests identify vertices by their group element; the map
//! is then forced and only the layer (or line) shift has to be found.  The
//! blind variants ignore labels and align layers by position.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{ColoredComplex, LayeredComplex};

/// A vertex correspondence `a → b` together with the index shift d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pub shift: i64,
    pub vertex_map: BTreeMap<usize, usize>,
}

impl Correspondence {
    pub fn len(&self) -> usize {
        self.vertex_map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_map.is_empty()
    }
}

fn pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Compares two keyed sets in both directions, reporting the first element
/// of either side missing from the other.
fn same_sets<T: Ord + std::fmt::Debug>(what: &str, a: BTreeSet<T>, b: BTreeSet<T>) -> Result<(), String> {
    if let Some(x) = a.difference(&b).next() {
        return Err(format!("{what} {x:?} of the first complex has no image"));
    }
    if let Some(x) = b.difference(&a).next() {
        return Err(format!("{what} {x:?} of the second complex has no preimage"));
    }
    Ok(())
}

/// Finds the single shift d with `index_b(φ(v)) = index_a(v) + d` on every
/// vertex of `map`, given each vertex's sorted index list.
fn common_shift(
    map: &BTreeMap<usize, usize>,
    idx_a: &[Vec<i64>],
    idx_b: &[Vec<i64>],
    what: &str,
) -> Result<i64, String> {
    let mut shift = None;
    for (&u, &v) in map {
        let (xa, xb) = (&idx_a[u], &idx_b[v]);
        if xa.is_empty() && xb.is_empty() {
            continue;
        }
        if xa.len() != xb.len() || xa.is_empty() {
            return Err(format!("vertex {u}: {what} sets {xa:?} and {xb:?} differ in size"));
        }
        let d = xb[0] - xa[0];
        if xa.iter().zip(xb).any(|(p, q)| q - p != d) {
            return Err(format!("vertex {u}: {what} sets {xa:?} and {xb:?} are not shifts"));
        }
        match shift {
            None => shift = Some(d),
            Some(s) if s != d => return Err(format!("vertex {u}: {what} shift {d} conflicts with {s}")),
            _ => {}
        }
    }
    shift.ok_or_else(|| format!("no vertex carries a {what} index"))
}

fn label_map<'a, I, J>(a: I, b: J) -> Result<BTreeMap<usize, usize>, String>
where
    I: Iterator<Item = (&'a crate::ogroup::GroupElement, bool)>,
    J: Iterator<Item = (&'a crate::ogroup::GroupElement, bool)>,
{
    let b_index: HashMap<&crate::ogroup::GroupElement, (usize, bool)> =
        b.enumerate().map(|(i, (l, c))| (l, (i, c))).collect();
    let mut map = BTreeMap::new();
    for (i, (l, core)) in a.enumerate() {
        if !core {
            continue;
        }
        if let Some(&(j, true)) = b_index.get(l) {
            map.insert(i, j);
        }
    }
    if map.is_empty() {
        return Err("the two cores share no vertex".into());
    }
    Ok(map)
}

fn check_layered(a: &LayeredComplex, b: &LayeredComplex, map: &BTreeMap<usize, usize>) -> Result<i64, String> {
    let d = common_shift(map, &a.layers_of(), &b.layers_of(), "layer")?;
    let back: BTreeMap<usize, usize> = map.iter().map(|(u, v)| (*v, *u)).collect();
    if back.len() != map.len() {
        return Err("vertex map is not injective".into());
    }
    let img = |v: usize| map.get(&v).copied();
    let edges_a: BTreeSet<((usize, usize), i64)> = a
        .edges
        .iter()
        .filter_map(|e| Some((pair(img(e.a)?, img(e.b)?), e.layer + d)))
        .collect();
    let edges_b: BTreeSet<((usize, usize), i64)> = b
        .edges
        .iter()
        .filter(|e| back.contains_key(&e.a) && back.contains_key(&e.b))
        .map(|e| (pair(e.a, e.b), e.layer))
        .collect();
    same_sets("edge", edges_a, edges_b)?;
    let faces_a: BTreeSet<[usize; 3]> = a
        .faces
        .iter()
        .filter_map(|f| {
            let mut t = [img(f[0])?, img(f[1])?, img(f[2])?];
            t.sort_unstable();
            Some(t)
        })
        .collect();
    let faces_b: BTreeSet<[usize; 3]> = b
        .faces
        .iter()
        .filter(|f| f.iter().all(|v| back.contains_key(v)))
        .map(|f| {
            let mut t = *f;
            t.sort_unstable();
            t
        })
        .collect();
    same_sets("face", faces_a, faces_b)?;
    for (n, layer) in &a.layers {
        let seq_a: Vec<usize> = layer.iter().filter_map(|&v| img(v)).collect();
        let seq_b: Vec<usize> = b
            .layers
            .get(&(n + d))
            .map(|l| l.iter().copied().filter(|v| back.contains_key(v)).collect())
            .unwrap_or_default();
        if seq_a != seq_b {
            return Err(format!("layer {n} is not carried onto layer {} in order", n + d));
        }
    }
    Ok(d)
}

fn check_colored(a: &ColoredComplex, b: &ColoredComplex, map: &BTreeMap<usize, usize>) -> Result<i64, String> {
    let d = common_shift(map, &a.lines_of(), &b.lines_of(), "line")?;
    let back: BTreeMap<usize, usize> = map.iter().map(|(u, v)| (*v, *u)).collect();
    if back.len() != map.len() {
        return Err("vertex map is not injective".into());
    }
    for (&u, &v) in map {
        if a.vertices[u].color != b.vertices[v].color {
            return Err(format!("vertex {} changes color", a.vertices[u].label));
        }
    }
    let img = |v: usize| map.get(&v).copied();
    let edges_a: BTreeSet<((usize, usize), i64)> = a
        .edges
        .iter()
        .filter_map(|e| Some((pair(img(e.a)?, img(e.b)?), e.line + d)))
        .collect();
    let edges_b: BTreeSet<((usize, usize), i64)> = b
        .edges
        .iter()
        .filter(|e| back.contains_key(&e.a) && back.contains_key(&e.b))
        .map(|e| (pair(e.a, e.b), e.line))
        .collect();
    same_sets("edge", edges_a, edges_b)?;
    type FaceKey = (i64, super::Color, Vec<usize>, Vec<usize>);
    let faces_a: BTreeSet<FaceKey> = a
        .faces
        .iter()
        .filter_map(|f| {
            let l: Option<Vec<usize>> = f.left.iter().map(|&v| img(v)).collect();
            let r: Option<Vec<usize>> = f.right.iter().map(|&v| img(v)).collect();
            Some((f.left_line + d, f.color, l?, r?))
        })
        .collect();
    let faces_b: BTreeSet<FaceKey> = b
        .faces
        .iter()
        .filter(|f| f.left.iter().chain(&f.right).all(|v| back.contains_key(v)))
        .map(|f| (f.left_line, f.color, f.left.clone(), f.right.clone()))
        .collect();
    same_sets("cell", faces_a, faces_b)?;
    for (j, line) in &a.lines {
        let seq_a: Vec<usize> = line.iter().filter_map(|&v| img(v)).collect();
        let seq_b: Vec<usize> = b
            .lines
            .get(&(j + d))
            .map(|l| l.iter().copied().filter(|v| back.contains_key(v)).collect())
            .unwrap_or_default();
        if seq_a != seq_b {
            return Err(format!("line {j} is not carried onto line {} in order", j + d));
        }
    }
    Ok(d)
}

pub fn iso_layered_explain(a: &LayeredComplex, b: &LayeredComplex) -> Result<Correspondence, String> {
    let map = label_map(
        a.vertices.iter().map(|v| (&*v.label, v.core)),
        b.vertices.iter().map(|v| (&*v.label, v.core)),
    )?;
    let shift = check_layered(a, b, &map)?;
    Ok(Correspondence { shift, vertex_map: map })
}

pub fn iso_layered(a: &LayeredComplex, b: &LayeredComplex) -> Option<Correspondence> {
    iso_layered_explain(a, b).ok()
}

pub fn iso_colored_explain(a: &ColoredComplex, b: &ColoredComplex) -> Result<Correspondence, String> {
    let map = label_map(
        a.vertices.iter().map(|v| (&*v.label, v.core)),
        b.vertices.iter().map(|v| (&*v.label, v.core)),
    )?;
    let shift = check_colored(a, b, &map)?;
    Ok(Correspondence { shift, vertex_map: map })
}

pub fn iso_colored(a: &ColoredComplex, b: &ColoredComplex) -> Option<Correspondence> {
    iso_colored_explain(a, b).ok()
}

#[cfg(any(test, feature = "blind-search"))]
mod blind {
    use super::*;

    /// Largest complex the blind search accepts.
    pub const MAX_VERTICES: usize = 600;

    /// Aligns sequence k of `a` with sequence k + d of `b` by a per-sequence
    /// offset: one offset is guessed, the rest follow through shared vertices.
    /// Only positions that are core on both sides enter the map, as in the
    /// label-driven tests.
    fn align(
        sa: &BTreeMap<i64, Vec<usize>>,
        sb: &BTreeMap<i64, Vec<usize>>,
        core: (&dyn Fn(usize) -> bool, &dyn Fn(usize) -> bool),
        d: i64,
        seed: i64,
        off0: i64,
    ) -> Option<BTreeMap<usize, usize>> {
        let mut offset: BTreeMap<i64, i64> = BTreeMap::from([(seed, off0)]);
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = vec![seed];
        let where_a: HashMap<usize, Vec<(i64, usize)>> = {
            let mut w: HashMap<usize, Vec<(i64, usize)>> = HashMap::new();
            for (k, s) in sa {
                for (i, &v) in s.iter().enumerate() {
                    w.entry(v).or_default().push((*k, i));
                }
            }
            w
        };
        let pos_b: HashMap<(i64, usize), usize> =
            sb.iter().flat_map(|(k, s)| s.iter().enumerate().map(move |(i, &v)| ((*k, v), i))).collect();
        while let Some(k) = queue.pop() {
            let (s, o) = (&sa[&k], offset[&k]);
            let t = sb.get(&(k + d))?;
            for (i, &v) in s.iter().enumerate() {
                let Some(&w) = usize::try_from(i as i64 + o).ok().and_then(|x| t.get(x)) else { continue };
                if !(core.0(v) && core.1(w)) {
                    continue;
                }
                if let Some(&old) = map.get(&v) {
                    if old != w {
                        return None;
                    }
                    continue;
                }
                map.insert(v, w);
                for &(k2, i2) in &where_a[&v] {
                    if offset.contains_key(&k2) {
                        continue;
                    }
                    let Some(&j2) = pos_b.get(&(k2 + d, w)) else { continue };
                    offset.insert(k2, j2 as i64 - i2 as i64);
                    queue.push(k2);
                }
            }
        }
        Some(map)
    }

    fn search(
        sa: &BTreeMap<i64, Vec<usize>>,
        sb: &BTreeMap<i64, Vec<usize>>,
        core: (&dyn Fn(usize) -> bool, &dyn Fn(usize) -> bool),
        mut check: impl FnMut(&BTreeMap<usize, usize>) -> Result<i64, String>,
    ) -> Option<Correspondence> {
        let core_len = |s: &Vec<usize>| s.iter().filter(|&&v| core.0(v)).count();
        let (Some((&ka, s)), Some((&kb_lo, _)), Some((&kb_hi, _))) =
            (sa.iter().max_by_key(|(_, s)| core_len(s)), sb.first_key_value(), sb.last_key_value())
        else {
            return None;
        };
        let need = core_len(s);
        for d in (kb_lo - ka)..=(kb_hi - ka) {
            let Some(t) = sb.get(&(ka + d)) else { continue };
            for off in -(s.len() as i64)..(t.len() as i64) {
                let Some(map) = align(sa, sb, core, d, ka, off) else { continue };
                if map.len() * 2 < need {
                    continue;
                }
                if let Ok(shift) = check(&map) {
                    return Some(Correspondence { shift, vertex_map: map });
                }
            }
        }
        None
    }

    /// Layer-preserving isomorphism found without looking at labels.
    pub fn iso_layered_blind(a: &LayeredComplex, b: &LayeredComplex) -> Option<Correspondence> {
        if a.vertices.len() > MAX_VERTICES || b.vertices.len() > MAX_VERTICES {
            return None;
        }
        let (ca, cb) = (|v: usize| a.vertices[v].core, |v: usize| b.vertices[v].core);
        search(&a.layers, &b.layers, (&ca, &cb), |m| check_layered(a, b, m))
    }

    /// Line- and color-preserving isomorphism found without looking at labels.
    pub fn iso_colored_blind(a: &ColoredComplex, b: &ColoredComplex) -> Option<Correspondence> {
        if a.vertices.len() > MAX_VERTICES || b.vertices.len() > MAX_VERTICES {
            return None;
        }
        let (ca, cb) = (|v: usize| a.vertices[v].core, |v: usize| b.vertices[v].core);
        search(&a.lines, &b.lines, (&ca, &cb), |m| check_colored(a, b, m))
    }
}

#[cfg(any(test, feature = "blind-search"))]
pub use blind::{iso_colored_blind, iso_layered_blind};
