//! Cage certificates: short chains of parts, facial sets and region-linked
//! unions of parts joining any two vertices of a region.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use super::topology::Facial;
use crate::plane::{Dist, Graph, VertexSet};
use crate::rig;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CageSet {
    Part(u32),
    Face(u32),
    /// Union of the listed parts, linked through the region.
    Linked(VertexSet),
}

#[derive(Clone, Debug, Serialize)]
pub struct CageCertificate {
    pub region: u32,
    /// The pair needing the longest chain.
    pub pair: (u32, u32),
    pub chain: Vec<CageSet>,
}

impl CageCertificate {
    pub fn length(&self) -> u32 {
        self.chain.len().saturating_sub(1) as u32
    }
}

struct Nodes {
    sets: Vec<CageSet>,
    /// Parts of each non-face node.
    parts: Vec<VertexSet>,
}

/// Unions of the parts met by each component of `h ∩ ∪B`.
fn canonical_unions(g: &Graph, facial: &Facial, h: &VertexSet) -> Vec<VertexSet> {
    let covered: VertexSet = h.iter().filter(|&v| facial.covers(v)).collect();
    let mut out: Vec<VertexSet> = rig::components_within(g, &covered)
        .iter()
        .map(|c| c.iter().map(|v| facial.owner[v as usize]).collect())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Every union of parts some connected piece of `h ∩ ∪B'` meets entirely.
pub fn all_linked_unions(g: &Graph, facial: &Facial, h: &VertexSet, parts: usize) -> Vec<VertexSet> {
    assert!(parts <= 16, "exhaustive union search is for small families");
    let mut out = Vec::new();
    for mask in 1u32..(1 << parts) {
        let chosen: VertexSet = (0..parts as u32).filter(|&b| mask >> b & 1 == 1).collect();
        let pool: VertexSet = h.iter().filter(|&v| chosen.contains(facial.owner[v as usize])).collect();
        let linked = rig::components_within(g, &pool).iter().any(|c| {
            let met: VertexSet = c.iter().map(|v| facial.owner[v as usize]).collect();
            met == chosen
        });
        if linked {
            out.push(chosen);
        }
    }
    out
}

/// Shortest admissible chain length between every pair of vertices of `h`,
/// maximised; `unions` are the linked unions allowed for `h`.
pub fn cage_region(
    g: &Graph,
    im: &Graph,
    facial: &Facial,
    region: u32,
    h: &VertexSet,
    unions: Vec<VertexSet>,
) -> (Dist, CageCertificate) {
    let parts = im.vertex_count();
    let mut nodes = Nodes { sets: Vec::new(), parts: Vec::new() };
    for b in 0..parts as u32 {
        nodes.sets.push(CageSet::Part(b));
        nodes.parts.push(VertexSet::singleton(b));
    }
    let faces: VertexSet = h.iter().filter(|&v| !facial.covers(v)).map(|v| facial.face_of[v as usize]).collect();
    for f in faces.iter() {
        nodes.sets.push(CageSet::Face(f));
        nodes.parts.push(VertexSet::new());
    }
    let face_node = |f: u32| parts + faces.as_slice().binary_search(&f).unwrap();
    let first_union = nodes.sets.len();
    for u in unions {
        nodes.sets.push(CageSet::Linked(u.clone()));
        nodes.parts.push(u);
    }
    let count = nodes.sets.len();
    // Nodes holding each vertex of `h`.
    let holders = |v: u32| -> Vec<usize> {
        if facial.covers(v) {
            let b = facial.owner[v as usize];
            let mut out = vec![b as usize];
            out.extend((first_union..count).filter(|&i| nodes.parts[i].contains(b)));
            out
        } else {
            vec![face_node(facial.face_of[v as usize])]
        }
    };
    let mut adj: Vec<VertexSet> = vec![VertexSet::new(); count];
    let mut link = |a: usize, b: usize| {
        if a != b {
            adj[a].insert(b as u32);
            adj[b].insert(a as u32);
        }
    };
    // Region-linked steps: shared vertex or edge of `G[h]`.
    for v in h.iter() {
        let hv = holders(v);
        for &a in &hv {
            for &b in &hv {
                link(a, b);
            }
        }
        for &w in g.neighbors(v) {
            if w > v && h.contains(w) {
                for &a in &hv {
                    for b in holders(w) {
                        link(a, b);
                    }
                }
            }
        }
    }
    // Touching steps between non-face nodes.
    let non_face: Vec<usize> = (0..parts).chain(first_union..count).collect();
    for (i, &a) in non_face.iter().enumerate() {
        for &b in &non_face[i + 1..] {
            let (pa, pb) = (&nodes.parts[a], &nodes.parts[b]);
            let touch = pa.intersects(pb) || pa.iter().any(|x| im.neighbors(x).iter().any(|&y| pb.contains(y)));
            if touch {
                link(a, b);
            }
        }
    }
    // Group the vertices of `h` by holder list and search from each holder.
    let mut groups: Vec<(Vec<usize>, u32)> = Vec::new();
    for v in h.iter() {
        let hv = holders(v);
        if !groups.iter().any(|(g, _)| *g == hv) {
            groups.push((hv, v));
        }
    }
    let sources: VertexSet = groups.iter().flat_map(|(g, _)| g.iter().map(|&x| x as u32)).collect();
    let searches: Vec<(usize, Vec<u32>, Vec<usize>)> = sources
        .iter()
        .map(|s| {
            let mut dist = vec![u32::MAX; count];
            let mut parent = vec![usize::MAX; count];
            dist[s as usize] = 0;
            let mut queue = VecDeque::from([s as usize]);
            while let Some(x) = queue.pop_front() {
                for y in adj[x].iter() {
                    if dist[y as usize] == u32::MAX {
                        dist[y as usize] = dist[x] + 1;
                        parent[y as usize] = x;
                        queue.push_back(y as usize);
                    }
                }
            }
            (s as usize, dist, parent)
        })
        .collect();
    let mut worst: (Dist, (u32, u32), Option<(usize, usize)>) = (Dist::ZERO, (h.min().unwrap_or(0), h.min().unwrap_or(0)), None);
    for (ga, va) in &groups {
        for (gb, vb) in &groups {
            let mut best: (u32, Option<(usize, usize)>) = (u32::MAX, None);
            for &a in ga {
                let (_, dist, _) = searches.iter().find(|s| s.0 == a).unwrap();
                for &b in gb {
                    if dist[b] < best.0 {
                        best = (dist[b], Some((a, b)));
                    }
                }
            }
            let d = if best.0 == u32::MAX { Dist::Infinite } else { Dist::Finite(best.0) };
            if d > worst.0 || (worst.2.is_none() && best.1.is_some()) {
                worst = (d, (*va, *vb), best.1);
            }
        }
    }
    let chain = match worst.2 {
        Some((a, b)) => {
            let (_, _, parent) = searches.iter().find(|s| s.0 == a).unwrap();
            let mut path = vec![b];
            while *path.last().unwrap() != a {
                path.push(parent[*path.last().unwrap()]);
            }
            path.reverse();
            path.into_iter().map(|i| nodes.sets[i].clone()).collect()
        }
        None => Vec::new(),
    };
    (worst.0, CageCertificate { region, pair: worst.1, chain })
}

/// Cage check over all regions with canonical unions. Returns the largest
/// chain length and one certificate per region.
pub fn cage_check(g: &Graph, facial: &Facial, parts: usize, regions: &[VertexSet]) -> (Dist, Vec<CageCertificate>) {
    let im = rig::im_graph(g, &facial.owner, parts);
    let results: Vec<(Dist, CageCertificate)> = regions
        .par_iter()
        .enumerate()
        .map(|(i, h)| cage_region(g, &im, facial, i as u32, h, canonical_unions(g, facial, h)))
        .collect();
    let worst = results.iter().map(|r| r.0).max().unwrap_or(Dist::ZERO);
    (worst, results.into_iter().map(|r| r.1).collect())
}

/// Same check with every linked union allowed; small families only.
pub fn cage_check_exhaustive(g: &Graph, facial: &Facial, parts: usize, regions: &[VertexSet]) -> Dist {
    let im = rig::im_graph(g, &facial.owner, parts);
    regions
        .par_iter()
        .enumerate()
        .map(|(i, h)| cage_region(g, &im, facial, i as u32, h, all_linked_unions(g, facial, h, parts)).0)
        .max()
        .unwrap_or(Dist::ZERO)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::fixtures::grid;

    fn ring(k: u32) -> VertexSet {
        (0..k * k).filter(|&v| v / k == 0 || v / k == k - 1 || v % k == 0 || v % k == k - 1).collect()
    }

    #[test]
    fn region_inside_the_cover_needs_no_step() {
        let g = grid(3);
        let facial = Facial::new(&g, &[(0..9).collect()]).unwrap();
        let (d, certs) = cage_check(&g.graph(), &facial, 1, &[vec![0, 1, 2].into()]);
        assert_eq!(d, Dist::ZERO);
        assert_eq!(certs[0].chain, vec![CageSet::Part(0)]);
    }

    #[test]
    fn region_crossing_a_face() {
        let g = grid(4);
        let top: VertexSet = vec![0, 1, 2, 3, 7, 11].into();
        let bottom: VertexSet = vec![4, 8, 12, 13, 14, 15].into();
        let facial = Facial::new(&g, &[top, bottom]).unwrap();
        // Down through the face from 1 to 13.
        let h: VertexSet = vec![1, 5, 9, 13].into();
        let (d, certs) = cage_check(&g.graph(), &facial, 2, std::slice::from_ref(&h));
        assert_eq!(d, Dist::Finite(1));
        assert_eq!(certs[0].length(), 1);
        let exhaustive = cage_check_exhaustive(&g.graph(), &facial, 2, &[h]);
        assert_eq!(exhaustive, d);
    }

    #[test]
    fn canonical_unions_follow_components() {
        let g = grid(5);
        let facial = Facial::new(&g, &[ring(5)]).unwrap();
        let h: VertexSet = vec![1, 2, 3, 6, 8].into();
        assert_eq!(canonical_unions(&g.graph(), &facial, &h), vec![VertexSet::singleton(0)]);
    }
}
