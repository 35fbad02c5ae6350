//! Encasings: disjoint connected parts along the outer face of the host that
//! every outer-anchored region lies inside, refined in four stages until all
//! four bullets `(a, b, c, d)` hold.

pub mod cage;
pub mod separation;
pub mod surround;
pub mod topology;

use std::collections::VecDeque;

use serde::Serialize;

use crate::constants::{CAGE_D, ENCASE_A, ENCASE_B, ENCIRCLE_A, ENFORCED_A, SURROUND_C};
use crate::error::{cert_fail, Error, Result};
use crate::outerstring;
use crate::plane::{Dist, DistMatrix, Graph, PlaneMap, VertexSet};
use crate::rig;

pub use cage::{cage_check, cage_check_exhaustive, CageCertificate, CageSet};
pub use separation::{AuxGraph, CleanSeparation, SeparationKind, SeparationTree};
pub use surround::{surround_check, SurroundReport};
pub use topology::{Crossing, EncroachRun, Facial};

/// A disjoint family with its certified and measured bullets `(a, b, c, d)`;
/// unmeasured bullets are `None`.
#[derive(Clone, Debug, Serialize)]
pub struct Encasing {
    #[serde(rename = "B")]
    pub parts: Vec<VertexSet>,
    pub params: [Dist; 4],
    pub measured: [Option<Dist>; 4],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cage_certs: Option<Vec<CageCertificate>>,
}

/// RIG distance from the outer-anchored regions, capped at 4: levels 0 to 3
/// are the strata `H_0 .. H_3`.
pub fn strata(map: &PlaneMap, regions: &[VertexSet]) -> Vec<u32> {
    let n = map.vertex_count();
    let outer = map.outer_vertex_mask();
    let anchored = (0..regions.len() as u32).filter(|&i| regions[i as usize].iter().any(|v| outer[v as usize]));
    crate::plane::multi_source_bfs(&rig::rig_graph(n, regions), anchored)
        .into_iter()
        .map(|d| d.finite().map_or(4, |d| d.min(4)))
        .collect()
}

/// Shared state for one host and family.
struct Setting<'a> {
    map: &'a PlaneMap,
    g: Graph,
    regions: &'a [VertexSet],
    by_vertex: Vec<Vec<u32>>,
    rig: DistMatrix,
    level: Vec<u32>,
    outer: Vec<bool>,
}

impl<'a> Setting<'a> {
    fn new(map: &'a PlaneMap, regions: &'a [VertexSet]) -> Result<Self> {
        let g = map.graph();
        let n = g.vertex_count();
        rig::check_regions(&g, regions)?;
        rig::check_spanning(&g, regions)?;
        let by_vertex = rig::incidence(n, regions);
        if let Some(v) = by_vertex.iter().position(Vec::is_empty) {
            return Err(Error::Input(format!("vertex {v} lies in no region")));
        }
        Ok(Setting {
            map,
            rig: DistMatrix::new(&rig::rig_graph(n, regions)),
            level: strata(map, regions),
            outer: map.outer_vertex_mask(),
            by_vertex,
            g,
            regions,
        })
    }

    fn union_of_levels(&self, max: u32) -> VertexSet {
        VertexSet::union_all((0..self.regions.len()).filter(|&i| self.level[i] <= max).map(|i| &self.regions[i]))
    }

    fn spread(&self, set: &VertexSet) -> Dist {
        self.rig.weak_diameter(&rig::hitting(&self.by_vertex, set))
    }

    /// Disjoint, connected, each part outer, every anchored region inside.
    fn check_encircles(&self, parts: &[VertexSet]) -> Result<Vec<u32>> {
        let owner = rig::owners(self.g.vertex_count(), parts)?;
        for (i, p) in parts.iter().enumerate() {
            if !rig::is_connected_in(&self.g, p) {
                cert_fail!("part {i} is disconnected");
            }
            if !p.iter().any(|v| self.outer[v as usize]) {
                cert_fail!("part {i} has no outer vertex");
            }
        }
        for (i, h) in self.regions.iter().enumerate() {
            if self.level[i] == 0 && h.iter().any(|v| owner[v as usize] == u32::MAX) {
                cert_fail!("outer region {i} leaves the family");
            }
        }
        Ok(owner)
    }

    fn check_spread(&self, parts: &[VertexSet], bound: u32) -> Result<Dist> {
        let worst = parts.iter().map(|p| self.spread(p)).max().unwrap_or(Dist::ZERO);
        if !worst.within(bound) {
            cert_fail!("a part meets regions of spread {worst} > {bound}");
        }
        Ok(worst)
    }
}

/// First stage: parts covering the regions within one step of the outer
/// face, with spread at most 210.
pub fn encircle_base(map: &PlaneMap, regions: &[VertexSet], audit: bool) -> Result<Encasing> {
    let s = Setting::new(map, regions)?;
    encircle_in(&s, audit)
}

fn encircle_in(s: &Setting, audit: bool) -> Result<Encasing> {
    let n = s.g.vertex_count();
    let near: Vec<usize> = (0..s.regions.len()).filter(|&i| s.level[i] <= 1).collect();
    let keep = s.union_of_levels(1);
    let keep_vertex = keep.mask(n);
    let keep_edge: Vec<bool> = s
        .map
        .edges()
        .iter()
        .map(|&[a, b]| {
            let (la, lb) = (&s.by_vertex[a as usize], &s.by_vertex[b as usize]);
            la.iter().any(|h| s.level[*h as usize] <= 1 && lb.contains(h))
        })
        .collect();
    let (sub, old) = s.map.submap(&keep_vertex, &keep_edge)?;
    let mut new_index = vec![u32::MAX; n];
    for (i, &v) in old.iter().enumerate() {
        new_index[v as usize] = i as u32;
    }
    let local = |set: &VertexSet| -> VertexSet { set.iter().map(|v| new_index[v as usize]).collect() };
    let mut starred = Vec::new();
    for &i in &near {
        let h = &s.regions[i];
        if s.level[i] == 0 {
            starred.push(local(h));
        } else {
            let partner = near
                .iter()
                .find(|&&j| s.level[j] == 0 && s.regions[j].intersects(h))
                .expect("level one meets level zero");
            starred.push(local(&h.union(&s.regions[*partner])));
        }
    }
    let (refined, _) = outerstring::outerstring_refine(&sub, &starred, audit)?;
    let mut parts: Vec<VertexSet> =
        refined.parts.iter().map(|p| p.iter().map(|v| old[v as usize]).collect()).collect();
    parts.sort();
    s.check_encircles(&parts)?;
    if VertexSet::union_all(&parts) != keep {
        cert_fail!("base family does not cover the regions near the outer face");
    }
    let a = s.check_spread(&parts, ENCIRCLE_A)?;
    Ok(Encasing {
        parts,
        params: [Dist::Finite(ENCIRCLE_A), Dist::Infinite, Dist::Infinite, Dist::Infinite],
        measured: [Some(a), None, None, None],
        cage_certs: None,
    })
}

/// Second stage output with the intermediate structure kept for inspection.
#[derive(Clone, Debug, Serialize)]
pub struct Enforced {
    pub encasing: Encasing,
    pub tree: SeparationTree,
    /// The sets built per tree node before merging, one or two per node.
    pub node_sets: Vec<Vec<VertexSet>>,
}

/// Splits `w` into connected parts grown from `b1` and `b2`.
fn split_pair(g: &Graph, w: &VertexSet, b1: &VertexSet, b2: &VertexSet) -> Result<[VertexSet; 2]> {
    let mut label: std::collections::BTreeMap<u32, usize> = std::collections::BTreeMap::new();
    let mut queue = VecDeque::new();
    for (k, b) in [b1, b2].into_iter().enumerate() {
        for v in b.iter() {
            label.insert(v, k);
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        let k = label[&v];
        for &x in g.neighbors(v) {
            if w.contains(x) && !label.contains_key(&x) {
                label.insert(x, k);
                queue.push_back(x);
            }
        }
    }
    if let Some(v) = w.iter().find(|v| !label.contains_key(v)) {
        cert_fail!("vertex {v} cannot be reached from either side of a two-part cut");
    }
    let side = |k: usize| -> VertexSet { w.iter().filter(|v| label[v] == k).collect() };
    let out = [side(0), side(1)];
    for (k, part) in out.iter().enumerate() {
        if !rig::is_connected_in(g, part) {
            cert_fail!("side {k} of a two-part cut split is disconnected");
        }
    }
    Ok(out)
}

/// Second stage: absorbs faces reached by second-level regions along the
/// clean separations of `G(B)`; spread at most 840, enforced, 7-cage.
pub fn enforced_encase(map: &PlaneMap, regions: &[VertexSet], audit: bool) -> Result<Enforced> {
    let s = Setting::new(map, regions)?;
    enforced_in(&s, audit)
}

fn enforced_in(s: &Setting, audit: bool) -> Result<Enforced> {
    let base = encircle_in(s, audit)?;
    let n = s.g.vertex_count();
    let parts = &base.parts;
    let nb = parts.len();
    let facial = Facial::new(s.map, parts)?;
    let aux = AuxGraph::new(&s.g, &facial, nb);
    let met_by: Vec<VertexSet> = s
        .regions
        .iter()
        .map(|h| h.iter().map(|v| facial.owner[v as usize]).filter(|&o| o != u32::MAX).collect())
        .collect();
    let mut shares = vec![VertexSet::new(); nb];
    for met in &met_by {
        for a in met.iter() {
            shares[a as usize] = shares[a as usize].union(met);
        }
    }
    for (b, sh) in shares.iter_mut().enumerate() {
        sh.insert(b as u32);
    }
    let tree = separation::separation_tree(&aux, &shares);
    let mut node_sets = Vec::new();
    for (k, node) in tree.nodes.iter().enumerate() {
        let cut: VertexSet = node.cut.iter().copied().collect();
        let mut w = VertexSet::union_all(tree.reach[k].iter().map(|b| &parts[b as usize]));
        for (i, h) in s.regions.iter().enumerate() {
            if s.level[i] != 2 || !met_by[i].intersects(&cut) {
                continue;
            }
            let faced: VertexSet = h
                .iter()
                .filter(|&v| !facial.covers(v) && node.y.contains((nb as u32) + facial.face_of[v as usize]))
                .collect();
            w = w.union(&faced);
        }
        let sets = match node.kind {
            SeparationKind::Root | SeparationKind::OneClean => {
                if !rig::is_connected_in(&s.g, &w) {
                    cert_fail!("set of separation node {k} is disconnected");
                }
                vec![w]
            }
            SeparationKind::TwoClean => {
                let [b1, b2] = [&parts[node.cut[0] as usize], &parts[node.cut[1] as usize]];
                split_pair(&s.g, &w, b1, b2)?.to_vec()
            }
        };
        node_sets.push(sets);
    }
    // Overlapping sets from different nodes are merged.
    let flat: Vec<&VertexSet> = node_sets.iter().flatten().filter(|v| !v.is_empty()).collect();
    let mut owner_set = vec![u32::MAX; n];
    let mut uf: Vec<usize> = (0..flat.len()).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        uf[x] = r;
        r
    }
    for (i, v) in flat.iter().enumerate() {
        for x in v.iter() {
            let o = owner_set[x as usize];
            if o == u32::MAX {
                owner_set[x as usize] = i as u32;
            } else {
                let (a, b) = (find(&mut uf, o as usize), find(&mut uf, i));
                uf[a.max(b)] = a.min(b);
            }
        }
    }
    let mut merged: std::collections::BTreeMap<usize, VertexSet> = std::collections::BTreeMap::new();
    for (i, v) in flat.iter().enumerate() {
        let r = find(&mut uf, i);
        let e = merged.entry(r).or_default();
        *e = e.union(v);
    }
    let absorbed: VertexSet = VertexSet::union_all(merged.values());
    let mut out: Vec<VertexSet> = parts.iter().filter(|p| !p.intersects(&absorbed)).cloned().collect();
    out.extend(merged.into_values());
    out.sort();
    let owner = s.check_encircles(&out)?;
    // Enforced sandwich and its connected witnesses.
    let inner = s.union_of_levels(1);
    let outer_bound = s.union_of_levels(2);
    let covered = VertexSet::union_all(&out);
    if !inner.is_subset(&covered) || !covered.is_subset(&outer_bound) {
        cert_fail!("enforced sandwich fails");
    }
    for v in covered.difference(&inner).iter() {
        let witnessed = s.by_vertex[v as usize].iter().any(|&i| {
            if s.level[i as usize] != 2 {
                return false;
            }
            let pool: VertexSet = s.regions[i as usize].iter().filter(|&x| owner[x as usize] != u32::MAX).collect();
            rig::components_within(&s.g, &pool).iter().any(|c| c.contains(v) && c.intersects(&inner))
        });
        if !witnessed {
            cert_fail!("vertex {v} joined the family without a second-level witness");
        }
    }
    let a = s.check_spread(&out, ENFORCED_A)?;
    let facial = Facial::new(s.map, &out)?;
    let (d, certs) = cage_check(&s.g, &facial, out.len(), s.regions);
    if !d.within(CAGE_D) {
        cert_fail!("cage needs chains of length {d} > {CAGE_D}");
    }
    Ok(Enforced {
        encasing: Encasing {
            parts: out,
            params: [Dist::Finite(ENFORCED_A), Dist::Infinite, Dist::Infinite, Dist::Finite(CAGE_D)],
            measured: [Some(a), None, None, Some(d)],
            cage_certs: Some(certs),
        },
        tree,
        node_sets,
    })
}

/// Outer-anchored flag per region.
fn anchored_flags(s: &Setting) -> Vec<bool> {
    s.level.iter().map(|&l| l == 0).collect()
}

/// Largest `I_B(H*)` weak diameter in `IM(G, B)` over connected pieces of
/// regions inside the cover.
pub fn linked_spread(g: &Graph, facial: &Facial, parts: usize, regions: &[VertexSet]) -> Dist {
    let im = rig::im_graph(g, &facial.owner, parts);
    let groups: Vec<Vec<u32>> = regions
        .iter()
        .flat_map(|h| {
            let pool: VertexSet = h.iter().filter(|&v| facial.covers(v)).collect();
            rig::components_within(g, &pool)
        })
        .map(|c| {
            let met: VertexSet = c.iter().map(|v| facial.owner[v as usize]).collect();
            met.into_vec()
        })
        .collect();
    rig::weak_diameters(&im, &groups).into_iter().max().unwrap_or(Dist::ZERO)
}

/// Final stage: a `(9240, 9, 4, 7)`-encasing with every bullet measured.
pub fn encase_final(map: &PlaneMap, regions: &[VertexSet], audit: bool) -> Result<Encasing> {
    let s = Setting::new(map, regions)?;
    let enforced = enforced_in(&s, audit)?;
    let coarse = &enforced.encasing.parts;
    let facial = Facial::new(map, coarse)?;
    let anchored = anchored_flags(&s);
    let report = surround_check(map, &facial, regions, &anchored);
    if !report.measured.within(SURROUND_C) {
        cert_fail!("enforced family is only a {}-surround", report.measured);
    }
    let im = rig::im_graph(&s.g, &facial.owner, coarse.len());
    let mut pieces: Vec<VertexSet> = regions
        .iter()
        .flat_map(|h| {
            let pool: VertexSet = h.iter().filter(|&v| facial.covers(v)).collect();
            rig::components_within(&s.g, &pool)
        })
        .map(|c| c.iter().map(|v| facial.owner[v as usize]).collect())
        .collect();
    pieces.sort();
    pieces.dedup();
    let (layered, _) = outerstring::outerplanar_impression_of(&im, &pieces)?;
    let mut parts = outerstring::lift_parts(coarse, &layered.parts);
    parts.sort();
    s.check_encircles(&parts)?;
    if VertexSet::union_all(&parts) != VertexSet::union_all(coarse) {
        cert_fail!("final family changed the cover");
    }
    let a = s.check_spread(&parts, ENCASE_A)?;
    let facial = Facial::new(map, &parts)?;
    let b = linked_spread(&s.g, &facial, parts.len(), regions);
    if !b.within(ENCASE_B) {
        cert_fail!("linked pieces spread {b} > {ENCASE_B} in the part graph");
    }
    let c = surround_check(map, &facial, regions, &anchored).measured;
    if !c.within(SURROUND_C) {
        cert_fail!("final family is only a {c}-surround");
    }
    let (d, certs) = cage_check(&s.g, &facial, parts.len(), regions);
    if !d.within(CAGE_D) {
        cert_fail!("final cage needs chains of length {d} > {CAGE_D}");
    }
    Ok(Encasing {
        parts,
        params: [
            Dist::Finite(ENCASE_A),
            Dist::Finite(ENCASE_B),
            Dist::Finite(SURROUND_C),
            Dist::Finite(CAGE_D),
        ],
        measured: [Some(a), Some(b), Some(c), Some(d)],
        cage_certs: Some(certs),
    })
}
