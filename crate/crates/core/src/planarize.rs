//! The main recursion: encroachment closures and fortifications, the
//! `(9242, 80)` induction, and the pipeline from a string graph to a planar
//! graph on the same vertex set.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{
    ENCASE_A, ENCASE_B, FORTIFY_K, LOWER_DIVISOR, QUASI_X1, QUASI_X2, QUASI_X3, QUASI_X4, STRING_X,
    STRING_Y, TRANSFER_X, UPPER_FACTOR,
};
use crate::encase::{self, surround::InnerRig, EncroachRun, Facial};
use crate::error::{cert_fail, Error, Result};
use crate::plane::{Dart, Dist, Graph, PlaneMap, VertexSet};
use crate::rig::{self, CoarseConstants, Impression, QuasiIsometryReport, Q};

/// Added edges in insertion order. Each is given by its two slots in the map
/// current at the time; `sides[i]` is the new forward dart, whose face is
/// the chosen side.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Fortification {
    pub slots: Vec<[Dart; 2]>,
    pub sides: Vec<Dart>,
}

impl Fortification {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Inserts one edge into `map`. Refuses to split an earlier side and to
    /// create a side with a vertex in `outer`.
    fn insert(&mut self, map: &PlaneMap, a: Dart, b: Dart, outer: &[bool]) -> Result<PlaneMap> {
        let f = map.face_of(b);
        if let Some(k) = self.sides.iter().position(|&s| map.face_of(s) == f) {
            cert_fail!("insertion at {}-{} would split the side of added edge {k}", map.origin(a), map.origin(b));
        }
        let (next, ins) = map.insert_edge(a, b)?;
        if let Some(v) = next.face_vertices(ins.face_forward).iter().find(|&v| outer[v as usize]) {
            cert_fail!("side of added edge {}-{} reaches outer vertex {v}", map.origin(a), map.origin(b));
        }
        self.slots.push([a, b]);
        self.sides.push(ins.dart);
        Ok(next)
    }

    /// Vertices of every side in the final map.
    pub fn side_vertices(&self, map: &PlaneMap) -> Vec<VertexSet> {
        self.sides.iter().map(|&d| map.face_vertices(map.face_of(d))).collect()
    }
}

/// One set `R_{F,H}`: the vertices of facial set `face` encroached by
/// `region`, together with the facial vertices of the region.
#[derive(Clone, Debug, Serialize)]
pub struct ClosureSet {
    pub face: u32,
    pub region: u32,
    pub encroached: VertexSet,
    pub set: VertexSet,
}

#[derive(Clone, Debug)]
pub struct EncroachClosure {
    /// The host with the closure edges added.
    pub map: PlaneMap,
    pub sets: Vec<ClosureSet>,
    pub fortification: Fortification,
    /// Largest weak diameter of `I_H(R)` with outer regions removed.
    pub spread: Dist,
    /// Largest distance, outer regions removed, between regions meeting one
    /// side.
    pub side_spread: Dist,
}

fn pairwise_spread(inner: &InnerRig, ids: &[u32]) -> Dist {
    let mut worst = Dist::ZERO;
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i..] {
            worst = worst.max(inner.get(a, b));
        }
    }
    worst
}

/// Builds every `R_{F,H}` for the encasing `parts` and adds the edges making
/// each one connected.
pub fn encroach_closure(map: &PlaneMap, regions: &[VertexSet], parts: &[VertexSet]) -> Result<EncroachClosure> {
    let n = map.vertex_count();
    let outer = map.outer_vertex_mask();
    let anchored: Vec<bool> = regions.iter().map(|h| h.iter().any(|v| outer[v as usize])).collect();
    let facial = Facial::new(map, parts)?;
    let inner = InnerRig::new(n, regions, &anchored);
    let by_vertex = rig::incidence(n, regions);

    let per_region: Vec<Vec<(u32, Vec<EncroachRun>)>> = regions
        .par_iter()
        .map(|h| {
            let faces: VertexSet =
                h.iter().filter(|&v| !facial.covers(v)).map(|v| facial.face_of[v as usize]).collect();
            if faces.is_empty() || !h.iter().any(|v| facial.covers(v)) {
                return Vec::new();
            }
            let bounded = facial.bounded_by(map, h);
            faces.iter().map(|f| (f, facial.encroached(f, h, &bounded))).collect()
        })
        .collect();
    let mut by_face: BTreeMap<(u32, u32), &Vec<EncroachRun>> = BTreeMap::new();
    for (i, list) in per_region.iter().enumerate() {
        for (f, runs) in list {
            by_face.insert((*f, i as u32), runs);
        }
    }

    let mut sets = Vec::new();
    let mut wanted: Vec<(u32, u32)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (&(f, i), runs) in &by_face {
        let encroached = VertexSet::union_all(runs.iter().map(|r| &r.encroached));
        let own: VertexSet = facial.sets[f as usize].intersection(&regions[i as usize]);
        sets.push(ClosureSet { face: f, region: i, set: encroached.union(&own), encroached });
        for run in runs.iter() {
            for &k in &run.crossings[..run.crossings.len() - 1] {
                if seen.insert((f, k)) {
                    wanted.push((f, k));
                }
            }
        }
    }

    let mut current = map.clone();
    let mut adjacent: BTreeSet<(u32, u32)> = map.edges().iter().map(|&[a, b]| (a.min(b), a.max(b))).collect();
    let mut fortification = Fortification::default();
    for (f, k) in wanted {
        let list = &facial.crossings[f as usize];
        let (x, y) = (&list[k as usize], &list[(k as usize + 1) % list.len()]);
        if x.v == y.v || !adjacent.insert((x.v.min(y.v), x.v.max(y.v))) {
            continue;
        }
        let a = current.next_in_face(y.dart);
        current = fortification.insert(&current, a, x.dart.rev(), &outer)?;
    }

    let mut side_spread = Dist::ZERO;
    for side in fortification.side_vertices(&current) {
        let spread = pairwise_spread(&inner, &rig::hitting(&by_vertex, &side));
        if !spread.within(FORTIFY_K) {
            cert_fail!("regions meeting one side lie {spread} apart");
        }
        side_spread = side_spread.max(spread);
    }
    let g = current.graph();
    let mut spread = Dist::ZERO;
    for s in &sets {
        if !rig::is_connected_in(&g, &s.set) {
            cert_fail!("closure set of face {} and region {} is disconnected", s.face, s.region);
        }
        let d = pairwise_spread(&inner, &rig::hitting(&by_vertex, &s.set));
        if !d.within(FORTIFY_K) {
            cert_fail!("closure set of face {} and region {} spreads {d} > {FORTIFY_K}", s.face, s.region);
        }
        spread = spread.max(d);
    }
    Ok(EncroachClosure { map: current, sets, fortification, spread, side_spread })
}

/// Summary of one level of the recursion.
#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub depth: u32,
    pub vertices: usize,
    pub regions: usize,
    pub encasing_parts: usize,
    /// Measured `(a, b, c, d)` of the encasing.
    pub encasing: [Option<Dist>; 4],
    pub closure_sets: usize,
    pub inserted: usize,
    pub closure_spread: Dist,
    pub side_spread: Dist,
    /// Largest `I_H(H')` spread, outer regions removed, over all sets added
    /// at this level or below; reported only.
    pub added_spread: Dist,
    pub measured_x: Dist,
    pub measured_y: Dist,
    pub outer_part_spread: Dist,
    pub outer_region_spread: Dist,
}

/// A `(9242, 80)`-impression of a fortification of the input.
#[derive(Clone, Debug)]
pub struct Induction {
    /// The fortified host `G'`.
    pub map: PlaneMap,
    pub fortification: Fortification,
    /// `H'`: the input regions first, then the added sets.
    pub regions: Vec<VertexSet>,
    pub parts: Vec<VertexSet>,
    pub impression: Impression,
    pub levels: Vec<LevelReport>,
}

pub fn string_induct(map: &PlaneMap, regions: &[VertexSet], audit: bool) -> Result<Induction> {
    induct(map, regions, 0, map.vertex_count() as u32, audit)
}

/// Edges of `map` surviving in `submap(keep_vertex, all edges)`, in order.
fn kept_edges(map: &PlaneMap, keep_vertex: &[bool]) -> Vec<u32> {
    (0..map.edge_count() as u32)
        .filter(|&e| map.endpoints(e).iter().all(|&v| keep_vertex[v as usize]))
        .collect()
}

fn induct(map: &PlaneMap, regions: &[VertexSet], depth: u32, guard: u32, audit: bool) -> Result<Induction> {
    if depth > guard {
        return Err(Error::Structure(format!("recursion passed depth {guard}")));
    }
    let n = map.vertex_count();
    let outer = map.outer_vertex_mask();
    let enc = encase::encase_final(map, regions, audit)?;
    let closure = encroach_closure(map, regions, &enc.parts)?;
    let covered = VertexSet::union_all(&enc.parts);
    let rest: Vec<u32> =
        (0..regions.len() as u32).filter(|&i| !regions[i as usize].intersects(&covered)).collect();

    let keep_vertex: Vec<bool> = (0..n as u32).map(|v| !covered.contains(v)).collect();
    let mut map_out = closure.map.clone();
    let mut fortification = closure.fortification.clone();
    let mut added: Vec<VertexSet> = closure.sets.iter().map(|s| s.set.clone()).collect();
    let mut parts = enc.parts.clone();
    let mut levels = Vec::new();
    if covered.len() < n {
        let (sub, old) = closure.map.submap(&keep_vertex, &vec![true; closure.map.edge_count()])?;
        let mut new_index = vec![u32::MAX; n];
        for (i, &v) in old.iter().enumerate() {
            new_index[v as usize] = i as u32;
        }
        let local = |s: &VertexSet| -> VertexSet { s.iter().map(|v| new_index[v as usize]).collect() };
        let sub_outer = sub.outer_vertex_mask();
        for s in &closure.sets {
            if !s.set.iter().any(|v| sub_outer[new_index[v as usize] as usize]) {
                cert_fail!("closure set of face {} and region {} misses the inner outer face", s.face, s.region);
            }
        }
        let mut starred: Vec<VertexSet> = rest.iter().map(|&i| local(&regions[i as usize])).collect();
        starred.extend(closure.sets.iter().map(|s| local(&s.set)));
        let child = induct(&sub, &starred, depth + 1, guard, audit)?;

        // Replay the deeper insertions on the full map.
        let mut edge_of = kept_edges(&closure.map, &keep_vertex);
        let lift = |d: Dart, edge_of: &[u32]| Dart::new(edge_of[d.edge() as usize], d.0 & 1 == 1);
        for &[a, b] in &child.fortification.slots {
            let e = map_out.edge_count() as u32;
            map_out = fortification.insert(&map_out, lift(a, &edge_of), lift(b, &edge_of), &outer)?;
            edge_of.push(e);
        }
        let global = |s: &VertexSet| -> VertexSet { s.iter().map(|v| old[v as usize]).collect() };
        added.extend(child.regions[starred.len()..].iter().map(global));
        parts.extend(child.parts.iter().map(global));
        levels = child.levels;
    }

    let mut all_regions = regions.to_vec();
    all_regions.extend(added.iter().cloned());
    let anchored: Vec<bool> = regions.iter().map(|h| h.iter().any(|v| outer[v as usize])).collect();
    let inner = InnerRig::new(n, regions, &anchored);
    let by_vertex = rig::incidence(n, regions);
    let added_spread = added
        .iter()
        .map(|s| pairwise_spread(&inner, &rig::hitting(&by_vertex, s)))
        .max()
        .unwrap_or(Dist::ZERO);

    let g = map_out.graph();
    let profile = rig::impression_profile(&g, &all_regions, &parts)?;
    let x = profile.part_spread.iter().copied().max().unwrap_or(Dist::ZERO);
    let y = profile.region_spread.iter().copied().max().unwrap_or(Dist::ZERO);
    if !x.within(STRING_X) || !y.within(STRING_Y) {
        cert_fail!("level {depth} measures ({x}, {y}), above ({STRING_X}, {STRING_Y})");
    }
    let outer_part_spread = (0..parts.len())
        .filter(|&i| parts[i].iter().any(|v| outer[v as usize]))
        .map(|i| profile.part_spread[i])
        .max()
        .unwrap_or(Dist::ZERO);
    if !outer_part_spread.within(ENCASE_A) {
        cert_fail!("outer part at level {depth} spreads {outer_part_spread} > {ENCASE_A}");
    }
    let outer_region_spread = (0..regions.len())
        .filter(|&i| anchored[i])
        .map(|i| profile.region_spread[i])
        .max()
        .unwrap_or(Dist::ZERO);
    if !outer_region_spread.within(ENCASE_B) {
        cert_fail!("outer region at level {depth} spreads {outer_region_spread} > {ENCASE_B}");
    }
    levels.insert(
        0,
        LevelReport {
            depth,
            vertices: n,
            regions: regions.len(),
            encasing_parts: enc.parts.len(),
            encasing: enc.measured,
            closure_sets: closure.sets.len(),
            inserted: closure.fortification.len(),
            closure_spread: closure.spread,
            side_spread: closure.side_spread,
            added_spread,
            measured_x: x,
            measured_y: y,
            outer_part_spread,
            outer_region_spread,
        },
    );
    Ok(Induction {
        map: map_out,
        fortification,
        regions: all_regions,
        parts: parts.clone(),
        impression: Impression {
            parts,
            x: Dist::Finite(STRING_X),
            y: Dist::Finite(STRING_Y),
            measured_x: x,
            measured_y: y,
        },
        levels,
    })
}

/// A `(73936, 80)`-impression of the input regions on the fortified host,
/// which the regions 8-span.
pub fn string_impression(map: &PlaneMap, regions: &[VertexSet], audit: bool) -> Result<(Induction, Impression)> {
    let ind = string_induct(map, regions, audit)?;
    let g = ind.map.graph();
    let keep: Vec<u32> = (0..regions.len() as u32).collect();
    let imp = rig::transfer_impression(&g, &ind.regions, &ind.impression, &keep, FORTIFY_K)?;
    debug_assert_eq!(imp.x, Dist::Finite(TRANSFER_X));
    let span = rig::min_z_span(&g, regions);
    if !span.z.within(FORTIFY_K) {
        cert_fail!("regions only {}-span the fortified host", span.z);
    }
    Ok((ind, imp))
}

/// Map from regions to parts with the displayed quasi-isometry inequalities
/// checked for every pair.
pub fn string_quasi(map: &PlaneMap, regions: &[VertexSet], audit: bool) -> Result<(Induction, Impression, QuasiIsometryReport)> {
    let (ind, imp) = string_impression(map, regions, audit)?;
    let report = rig::impression_map(&ind.map.graph(), regions, &imp, FORTIFY_K)?;
    if report.x as u64 + report.z as u64 != QUASI_X1 || report.x as u64 != QUASI_X2 {
        cert_fail!("quasi-isometry constants drifted from the chain");
    }
    Ok((ind, imp, report))
}

/// Contracts each part to one vertex. Returns the minor and the vertex of
/// each part.
pub fn contract_parts(map: &PlaneMap, parts: &[VertexSet]) -> Result<(PlaneMap, Vec<u32>)> {
    let g: Graph = map.graph();
    let owner = rig::owners(map.vertex_count(), parts)?;
    let mut forest = Vec::new();
    let mut seen = vec![false; map.vertex_count()];
    for p in parts {
        let root = p.min().ok_or_else(|| Error::Input("empty part".into()))?;
        seen[root as usize] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &d in map.rotation(v) {
                let w = map.target(d);
                if owner[w as usize] == owner[v as usize] && !seen[w as usize] {
                    seen[w as usize] = true;
                    forest.push(d.edge());
                    queue.push_back(w);
                }
            }
        }
        if let Some(v) = p.iter().find(|&v| !seen[v as usize]) {
            cert_fail!("part holding {v} is not connected");
        }
    }
    debug_assert_eq!(forest.len() + parts.len(), g.vertex_count());
    let roots: VertexSet = parts.iter().filter_map(VertexSet::min).collect();
    let (minor, vertex_map) = map.contract_forest(&forest, &roots)?;
    Ok((minor, parts.iter().map(|p| vertex_map[p.min().unwrap() as usize]).collect()))
}

#[derive(Clone, Debug, Serialize)]
pub struct Constants {
    pub string_x: u32,
    pub string_y: u32,
    pub transfer_x: u32,
    pub fortify_k: u32,
    pub x1: u64,
    pub x2: u64,
    pub x3: u64,
    pub x4: u64,
    pub lower_divisor: u64,
    pub upper_factor: u64,
}

impl Constants {
    pub fn chain() -> Constants {
        Constants {
            string_x: STRING_X,
            string_y: STRING_Y,
            transfer_x: TRANSFER_X,
            fortify_k: FORTIFY_K,
            x1: QUASI_X1,
            x2: QUASI_X2,
            x3: QUASI_X3,
            x4: QUASI_X4,
            lower_divisor: LOWER_DIVISOR,
            upper_factor: UPPER_FACTOR,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Measured {
    #[serde(serialize_with = "crate::rig::ratio_text")]
    pub max_expansion: Q,
    #[serde(serialize_with = "crate::rig::ratio_text")]
    pub max_contraction: Q,
    pub impression_x: Dist,
    pub impression_y: Dist,
    pub transfer_x: Dist,
    pub quasi: QuasiIsometryReport,
    pub inserted_edges: usize,
    pub intermediate_misses: usize,
}

/// The planar graph on the regions, with the bijection and certificates.
#[derive(Clone, Debug)]
pub struct Planarized {
    pub map: PlaneMap,
    /// Output vertex of each region.
    pub bijection: Vec<u32>,
    pub constants: Constants,
    pub measured: Measured,
    pub levels: Vec<LevelReport>,
}

#[derive(Serialize)]
struct PlanarizedFile<'a> {
    output_map: &'a crate::plane::MapFile,
    bijection: Vec<[u32; 2]>,
    constants: &'a Constants,
    measured: &'a Measured,
    certificates: &'a [LevelReport],
}

impl Planarized {
    pub fn to_json(&self) -> Result<String> {
        let file = PlanarizedFile {
            output_map: &crate::plane::MapFile::from(&self.map),
            bijection: self.bijection.iter().enumerate().map(|(u, &w)| [u as u32, w]).collect(),
            constants: &self.constants,
            measured: &self.measured,
            certificates: &self.levels,
        };
        Ok(serde_json::to_string(&file)?)
    }
}

/// The whole pipeline on `S = RIG(map, regions)`.
pub fn planarize_full(map: &PlaneMap, regions: &[VertexSet], audit: bool) -> Result<Planarized> {
    if regions.is_empty() {
        return Err(Error::Input("no regions".into()));
    }
    let n = map.vertex_count();
    let s = rig::rig_graph(n, regions);
    let (ind, imp, report) = string_quasi(map, regions, audit)?;
    let (minor, part_vertex) = contract_parts(&ind.map, &imp.parts)?;
    let f: Vec<u32> = report.f.iter().map(|&p| part_vertex[p as usize]).collect();
    let c = CoarseConstants { x1: QUASI_X1, x2: QUASI_X2, x3: QUASI_X3, x4: QUASI_X4 };
    debug_assert_eq!((c.lower_divisor(), c.upper_factor()), (LOWER_DIVISOR, UPPER_FACTOR));
    let bi = rig::quasibi(&s, &minor, &f, c)?;
    Ok(Planarized {
        map: bi.map,
        bijection: bi.f_prime,
        constants: Constants::chain(),
        measured: Measured {
            max_expansion: bi.max_expansion,
            max_contraction: bi.max_contraction,
            impression_x: ind.impression.measured_x,
            impression_y: ind.impression.measured_y,
            transfer_x: imp.measured_x,
            quasi: report,
            inserted_edges: ind.fortification.len(),
            intermediate_misses: bi.intermediate_misses,
        },
        levels: ind.levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::fixtures::grid;

    fn edge_family(map: &PlaneMap) -> Vec<VertexSet> {
        map.graph().edges().map(|(a, b)| vec![a, b].into()).collect()
    }

    #[test]
    fn outer_regions_only_need_no_recursion() {
        let g = grid(3);
        let fam = vec![(0..9).collect::<VertexSet>()];
        let ind = string_induct(&g, &fam, true).unwrap();
        assert_eq!(ind.levels.len(), 1);
        assert!(ind.fortification.is_empty());
        assert_eq!(ind.parts, vec![(0..9).collect::<VertexSet>()]);
    }

    #[test]
    fn no_encroachment_leaves_the_map() {
        let g = grid(4);
        let closure = encroach_closure(&g, &edge_family(&g), &[(0..16).collect()]).unwrap();
        assert!(closure.sets.is_empty());
        assert!(closure.fortification.is_empty());
        assert_eq!(closure.map.edge_count(), g.edge_count());
    }

    #[test]
    fn grid_edges_recurse() {
        for (k, depth) in [(7, 1), (9, 2), (13, 3)] {
            let g = grid(k);
            let fam = edge_family(&g);
            let ind = string_induct(&g, &fam, true).unwrap();
            assert_eq!(ind.levels.len(), depth);
            let cover: usize = ind.parts.iter().map(VertexSet::len).sum();
            assert_eq!(cover, (k * k) as usize);
            assert!(ind.impression.measured_y <= Dist::Finite(STRING_Y));
        }
    }

    #[test]
    fn grid_pipeline_is_bijective() {
        let g = grid(5);
        let fam = edge_family(&g);
        let out = planarize_full(&g, &fam, true).unwrap();
        assert_eq!(out.map.vertex_count(), fam.len());
        let mut b = out.bijection.clone();
        b.sort();
        b.dedup();
        assert_eq!(b.len(), fam.len());
    }

    #[test]
    fn contracting_parts() {
        let g = grid(3);
        let parts: Vec<VertexSet> = vec![vec![0, 1, 2].into(), vec![3, 4, 5].into(), vec![6, 7, 8].into()];
        let (minor, pv) = contract_parts(&g, &parts).unwrap();
        assert_eq!(minor.vertex_count(), 3);
        assert_eq!(minor.edge_count(), 2);
        assert_eq!(pv, vec![0, 1, 2]);
    }
}
