use std::collections::{BTreeMap, BTreeSet};

use super::Pt;

/// Bounded faces of a straight-line plane graph on lattice points, each as a
/// counter-clockwise vertex cycle.  Edges must not cross.
pub fn planar_faces(edges: &[(Pt, Pt)]) -> Vec<Vec<Pt>> {
    let mut nbrs: BTreeMap<Pt, Vec<Pt>> = BTreeMap::new();
    for &(a, b) in edges {
        if a == b {
            continue;
        }
        nbrs.entry(a).or_default().push(b);
        nbrs.entry(b).or_default().push(a);
    }
    for (v, list) in nbrs.iter_mut() {
        list.sort_unstable();
        list.dedup();
        list.sort_by(|p, q| {
            let ap = ((p.1 - v.1) as f64).atan2((p.0 - v.0) as f64);
            let aq = ((q.1 - v.1) as f64).atan2((q.0 - v.0) as f64);
            ap.partial_cmp(&aq).unwrap()
        });
    }
    let mut seen: BTreeSet<(Pt, Pt)> = BTreeSet::new();
    let mut faces = Vec::new();
    let starts: Vec<(Pt, Pt)> =
        nbrs.iter().flat_map(|(v, l)| l.iter().map(move |w| (*v, *w))).collect();
    for start in starts {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = Vec::new();
        let (mut u, mut v) = start;
        loop {
            seen.insert((u, v));
            cycle.push(u);
            let around = &nbrs[&v];
            let i = around.iter().position(|&x| x == u).unwrap();
            let w = around[(i + around.len() - 1) % around.len()];
            u = v;
            v = w;
            if (u, v) == start {
                break;
            }
        }
        if twice_area(&cycle) > 0 {
            faces.push(cycle);
        }
    }
    faces
}

fn twice_area(cycle: &[Pt]) -> i64 {
    let n = cycle.len();
    (0..n)
        .map(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_squares() {
        let e = vec![
            ((0, 0), (1, 0)),
            ((1, 0), (2, 0)),
            ((0, 1), (1, 1)),
            ((1, 1), (2, 1)),
            ((0, 0), (0, 1)),
            ((1, 0), (1, 1)),
            ((2, 0), (2, 1)),
        ];
        let f = planar_faces(&e);
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn dangling_edge_stays_inside() {
        let e = vec![((0, 0), (2, 0)), ((2, 0), (2, 2)), ((2, 2), (0, 2)), ((0, 2), (0, 0)), ((0, 0), (1, 1))];
        let f = planar_faces(&e);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].len(), 6);
    }
}
