//! Embedded planar graphs as combinatorial maps.
//!
//! Edge `e` owns darts `2e` (leaving `edges[e][0]`) and `2e + 1` (leaving
//! `edges[e][1]`). Rotations list darts counter-clockwise and faces are the
//! orbits of `next(d) = succ(rev(d))`. Every connected component carries its
//! own outer face, identified by a reference dart; components are treated as
//! drawn side by side, so no component sits inside a face of another.

mod graph;
mod set;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use graph::{bfs_distances, multi_source_bfs, weak_diameter, Dist, DistMatrix, Graph};
pub use set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dart(pub u32);

impl Dart {
    pub fn new(edge: u32, backward: bool) -> Dart {
        Dart(edge << 1 | backward as u32)
    }

    pub fn edge(self) -> u32 {
        self.0 >> 1
    }

    pub fn rev(self) -> Dart {
        Dart(self.0 ^ 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Result of splitting a face with a new edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Insertion {
    pub edge: u32,
    /// The new dart leaving the first endpoint.
    pub dart: Dart,
    /// Face containing `dart`.
    pub face_forward: u32,
    /// Face containing `dart.rev()`.
    pub face_backward: u32,
}

#[derive(Clone, Debug)]
pub struct PlaneMap {
    labels: Vec<u32>,
    edges: Vec<[u32; 2]>,
    rot: Vec<Vec<Dart>>,
    pos: Vec<u32>,
    face_of: Vec<u32>,
    faces: Vec<Vec<Dart>>,
    comp: Vec<u32>,
    comp_count: u32,
    /// Reference dart of the outer face, per component; `None` when isolated.
    outer_ref: Vec<Option<Dart>>,
}

impl PartialEq for PlaneMap {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.edges == other.edges
            && self.rot == other.rot
            && self.outer_faces() == other.outer_faces()
    }
}

impl Eq for PlaneMap {}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut x = x;
        while self.0[x as usize] != r {
            let next = self.0[x as usize];
            self.0[x as usize] = r;
            x = next;
        }
        r
    }

    /// Returns false when `a` and `b` were already joined.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.0[hi as usize] = lo;
        true
    }
}

impl PlaneMap {
    /// Builds and audits a map. `outer` holds one dart per component that has
    /// edges, in any order.
    pub fn from_parts(
        labels: Vec<u32>,
        edges: Vec<[u32; 2]>,
        rot: Vec<Vec<Dart>>,
        outer: &[Dart],
    ) -> Result<Self> {
        let mut map = Self::skeleton(labels, edges, rot)?;
        map.assign_outer(outer)?;
        Ok(map)
    }

    /// Audited map without outer faces assigned yet.
    fn skeleton(labels: Vec<u32>, edges: Vec<[u32; 2]>, rot: Vec<Vec<Dart>>) -> Result<Self> {
        let n = rot.len();
        if labels.len() != n {
            return Err(Error::Structure(format!(
                "{} labels for {} vertices",
                labels.len(),
                n
            )));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Structure("labels must be strictly increasing".into()));
        }
        let darts = edges.len() * 2;
        for (e, &[a, b]) in edges.iter().enumerate() {
            if a as usize >= n || b as usize >= n {
                return Err(Error::Structure(format!("edge {e} has an endpoint out of range")));
            }
        }
        let mut pos = vec![u32::MAX; darts];
        for (v, list) in rot.iter().enumerate() {
            for (i, &d) in list.iter().enumerate() {
                if d.index() >= darts {
                    return Err(Error::Structure(format!("dart {} out of range", d.0)));
                }
                if pos[d.index()] != u32::MAX {
                    return Err(Error::Structure(format!("dart {} listed twice", d.0)));
                }
                let origin = edges[d.edge() as usize][(d.0 & 1) as usize];
                if origin as usize != v {
                    return Err(Error::Structure(format!(
                        "dart {} listed at vertex {} but leaves {}",
                        d.0, v, origin
                    )));
                }
                pos[d.index()] = i as u32;
            }
        }
        if let Some(d) = pos.iter().position(|&p| p == u32::MAX) {
            return Err(Error::Structure(format!("dart {d} missing from rotations")));
        }

        let mut uf = UnionFind::new(n);
        for &[a, b] in &edges {
            uf.union(a, b);
        }
        let mut comp = vec![u32::MAX; n];
        let mut comp_count = 0;
        for v in 0..n as u32 {
            let r = uf.find(v);
            if comp[r as usize] == u32::MAX {
                comp[r as usize] = comp_count;
                comp_count += 1;
            }
            comp[v as usize] = comp[r as usize];
        }

        let mut map = PlaneMap {
            labels,
            edges,
            rot,
            pos,
            face_of: vec![u32::MAX; darts],
            faces: Vec::new(),
            comp,
            comp_count,
            outer_ref: vec![None; comp_count as usize],
        };
        for start in 0..darts as u32 {
            if map.face_of[start as usize] != u32::MAX {
                continue;
            }
            let id = map.faces.len() as u32;
            let mut orbit = Vec::new();
            let mut d = Dart(start);
            loop {
                map.face_of[d.index()] = id;
                orbit.push(d);
                d = map.next_in_face(d);
                if d.0 == start {
                    break;
                }
            }
            map.faces.push(orbit);
        }
        map.euler_audit()?;
        Ok(map)
    }

    fn euler_audit(&self) -> Result<()> {
        let c = self.comp_count as usize;
        let (mut v, mut e, mut f) = (vec![0i64; c], vec![0i64; c], vec![0i64; c]);
        for &k in &self.comp {
            v[k as usize] += 1;
        }
        for &[a, _] in &self.edges {
            e[self.comp[a as usize] as usize] += 1;
        }
        for face in &self.faces {
            f[self.comp[self.origin(face[0]) as usize] as usize] += 1;
        }
        for k in 0..c {
            if e[k] > 0 && v[k] - e[k] + f[k] != 2 {
                return Err(Error::Structure(format!(
                    "component {k} fails Euler: V={} E={} F={}",
                    v[k], e[k], f[k]
                )));
            }
        }
        Ok(())
    }

    fn assign_outer(&mut self, outer: &[Dart]) -> Result<()> {
        for &d in outer {
            if d.index() >= self.dart_count() {
                return Err(Error::Structure(format!("outer dart {} out of range", d.0)));
            }
            let k = self.comp[self.origin(d) as usize] as usize;
            if self.outer_ref[k].replace(d).is_some() {
                return Err(Error::Structure(format!("component {k} has two outer darts")));
            }
        }
        for k in 0..self.comp_count as usize {
            let has_edges = self.outer_ref[k].is_some();
            let needs = self.edges.iter().any(|&[a, _]| self.comp[a as usize] as usize == k);
            if needs && !has_edges {
                return Err(Error::Structure(format!("component {k} lacks an outer dart")));
            }
        }
        Ok(())
    }

    /// Embeds a straight-line drawing: rotations sort darts by angle, and the
    /// outer face of each component is read off at its lowest, leftmost vertex.
    pub fn from_coordinates(points: &[[f64; 2]], edges: &[[u32; 2]]) -> Result<Self> {
        let n = points.len();
        let angle = |d: Dart| {
            let [a, b] = edges[d.edge() as usize];
            let (o, t) = if d.0 & 1 == 0 { (a, b) } else { (b, a) };
            let (p, q) = (points[o as usize], points[t as usize]);
            (q[1] - p[1]).atan2(q[0] - p[0]).rem_euclid(std::f64::consts::TAU)
        };
        let mut rot = vec![Vec::new(); n];
        for e in 0..edges.len() as u32 {
            for back in [false, true] {
                let d = Dart::new(e, back);
                let [a, b] = edges[e as usize];
                rot[if back { b } else { a } as usize].push(d);
            }
        }
        for list in &mut rot {
            list.sort_by(|&x, &y| angle(x).total_cmp(&angle(y)).then(x.cmp(&y)));
        }
        let mut map = Self::skeleton((0..n as u32).collect(), edges.to_vec(), rot)?;
        let mut lowest: Vec<Option<u32>> = vec![None; map.comp_count as usize];
        for v in 0..n as u32 {
            if map.rot[v as usize].is_empty() {
                continue;
            }
            let slot = &mut lowest[map.comp[v as usize] as usize];
            let p = points[v as usize];
            let better = match *slot {
                None => true,
                Some(w) => {
                    let q = points[w as usize];
                    (p[1], p[0]) < (q[1], q[0])
                }
            };
            if better {
                *slot = Some(v);
            }
        }
        // All neighbours of the lowest vertex lie at angles in [0, pi), so the
        // sector around 5pi/4 belongs to the outer face. It is the sector that
        // starts after the last dart in counter-clockwise order.
        let outer: Vec<Dart> = lowest
            .into_iter()
            .flatten()
            .map(|v| map.rot[v as usize][0])
            .collect();
        map.assign_outer(&outer)?;
        Ok(map)
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dart_count(&self) -> usize {
        self.edges.len() * 2
    }

    pub fn label(&self, v: u32) -> u32 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Vertex index carrying `label`.
    pub fn local(&self, label: u32) -> Option<u32> {
        self.labels.binary_search(&label).ok().map(|i| i as u32)
    }

    pub fn endpoints(&self, e: u32) -> [u32; 2] {
        self.edges[e as usize]
    }

    pub fn edges(&self) -> &[[u32; 2]] {
        &self.edges
    }

    pub fn origin(&self, d: Dart) -> u32 {
        self.edges[d.edge() as usize][(d.0 & 1) as usize]
    }

    pub fn target(&self, d: Dart) -> u32 {
        self.origin(d.rev())
    }

    pub fn rotation(&self, v: u32) -> &[Dart] {
        &self.rot[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.rot[v as usize].len()
    }

    /// Next dart counter-clockwise around the origin.
    pub fn succ(&self, d: Dart) -> Dart {
        let list = &self.rot[self.origin(d) as usize];
        list[(self.pos[d.index()] as usize + 1) % list.len()]
    }

    pub fn pred(&self, d: Dart) -> Dart {
        let list = &self.rot[self.origin(d) as usize];
        let p = self.pos[d.index()] as usize;
        list[(p + list.len() - 1) % list.len()]
    }

    pub fn next_in_face(&self, d: Dart) -> Dart {
        self.succ(d.rev())
    }

    pub fn prev_in_face(&self, d: Dart) -> Dart {
        self.pred(d).rev()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    /// Boundary darts of face `f`, starting at its least dart.
    pub fn face(&self, f: u32) -> &[Dart] {
        &self.faces[f as usize]
    }

    pub fn face_of(&self, d: Dart) -> u32 {
        self.face_of[d.index()]
    }

    /// Origins along the boundary walk of `f`; repeats are kept.
    pub fn face_walk(&self, f: u32) -> Vec<u32> {
        self.faces[f as usize].iter().map(|&d| self.origin(d)).collect()
    }

    /// Distinct vertices on the boundary of `f`.
    pub fn face_vertices(&self, f: u32) -> VertexSet {
        self.face_walk(f).into_iter().collect()
    }

    /// Component index per vertex, numbered by least vertex.
    pub fn components(&self) -> &[u32] {
        &self.comp
    }

    pub fn component_count(&self) -> usize {
        self.comp_count as usize
    }

    pub fn outer_ref(&self, component: u32) -> Option<Dart> {
        self.outer_ref[component as usize]
    }

    pub fn outer_refs(&self) -> Vec<Dart> {
        self.outer_ref.iter().flatten().copied().collect()
    }

    /// Outer face id per component with edges, in component order.
    pub fn outer_faces(&self) -> Vec<u32> {
        self.outer_ref.iter().flatten().map(|&d| self.face_of(d)).collect()
    }

    pub fn is_outer_face(&self, f: u32) -> bool {
        let d = self.faces[f as usize][0];
        self.outer_ref[self.comp[self.origin(d) as usize] as usize]
            .is_some_and(|r| self.face_of(r) == f)
    }

    /// Vertices incident to an outer face; isolated vertices count as outer.
    pub fn outer_vertex_mask(&self) -> Vec<bool> {
        let mut mask: Vec<bool> = self.rot.iter().map(Vec::is_empty).collect();
        for f in self.outer_faces() {
            for &d in &self.faces[f as usize] {
                mask[self.origin(d) as usize] = true;
            }
        }
        mask
    }

    pub fn outer_vertices(&self) -> VertexSet {
        VertexSet::from_mask(&self.outer_vertex_mask())
    }

    /// Underlying simple graph on the vertex indices.
    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.vertex_count(), self.edges.iter().map(|&[a, b]| (a, b)))
    }

    /// Face boundaries as cyclic label sequences, each rotated to its least
    /// entry; the list is sorted. Independent of dart and vertex numbering.
    pub fn face_signature(&self) -> Vec<Vec<(u32, u32)>> {
        let mut out: Vec<Vec<(u32, u32)>> = self
            .faces
            .iter()
            .map(|face| {
                let seq: Vec<(u32, u32)> = face
                    .iter()
                    .map(|&d| (self.label(self.origin(d)), self.label(self.target(d))))
                    .collect();
                let k = (0..seq.len()).min_by_key(|&i| (seq[i], i)).unwrap_or(0);
                seq[k..].iter().chain(&seq[..k]).copied().collect()
            })
            .collect();
        out.sort();
        out
    }

    /// Keeps the given vertices and edges; an edge survives only when it and
    /// both endpoints are kept. Returns the map and the old index of every
    /// new vertex.
    ///
    /// Outer faces follow the plane regions: old outer faces and the two sides
    /// of every deleted edge are merged, and each surviving component takes as
    /// outer face the face lying in the merged outer region.
    pub fn submap(&self, keep_vertex: &[bool], keep_edge: &[bool]) -> Result<(PlaneMap, Vec<u32>)> {
        let mut new_vertex = vec![u32::MAX; self.vertex_count()];
        let mut old_vertex = Vec::new();
        for v in 0..self.vertex_count() {
            if keep_vertex[v] {
                new_vertex[v] = old_vertex.len() as u32;
                old_vertex.push(v as u32);
            }
        }
        let mut new_edge = vec![u32::MAX; self.edge_count()];
        let mut edges = Vec::new();
        let mut faces_uf = UnionFind::new(self.face_count() + 1);
        let infinity = self.face_count() as u32;
        for f in self.outer_faces() {
            faces_uf.union(f, infinity);
        }
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            if keep_edge[e] && keep_vertex[a as usize] && keep_vertex[b as usize] {
                new_edge[e] = edges.len() as u32;
                edges.push([new_vertex[a as usize], new_vertex[b as usize]]);
            } else {
                let d = Dart::new(e as u32, false);
                faces_uf.union(self.face_of(d), self.face_of(d.rev()));
            }
        }
        let map_dart = |d: Dart| match new_edge[d.edge() as usize] {
            u32::MAX => None,
            e => Some(Dart::new(e, d.0 & 1 == 1)),
        };
        let rot: Vec<Vec<Dart>> = old_vertex
            .iter()
            .map(|&v| self.rot[v as usize].iter().filter_map(|&d| map_dart(d)).collect())
            .collect();
        let labels = old_vertex.iter().map(|&v| self.labels[v as usize]).collect();
        let mut sub = Self::skeleton(labels, edges, rot)?;

        // Old face of each new dart, to locate the outer region.
        let mut old_dart = vec![Dart(0); sub.dart_count()];
        for e in 0..self.edge_count() as u32 {
            if new_edge[e as usize] != u32::MAX {
                for back in [false, true] {
                    old_dart[Dart::new(new_edge[e as usize], back).index()] = Dart::new(e, back);
                }
            }
        }
        let inf_class = faces_uf.find(infinity);
        let mut refs = Vec::new();
        let mut chosen: Vec<Option<u32>> = vec![None; sub.component_count()];
        let mut largest: Vec<Option<u32>> = vec![None; sub.component_count()];
        for f in 0..sub.face_count() as u32 {
            let first = sub.faces[f as usize][0];
            let k = sub.comp[sub.origin(first) as usize] as usize;
            let old_face = self.face_of(old_dart[first.index()]);
            if chosen[k].is_none() && faces_uf.find(old_face) == inf_class {
                chosen[k] = Some(f);
            }
            let len = sub.faces[f as usize].len();
            if largest[k].is_none_or(|g| sub.faces[g as usize].len() < len) {
                largest[k] = Some(f);
            }
        }
        for k in 0..sub.component_count() {
            let Some(f) = chosen[k].or(largest[k]) else { continue };
            // Keep the old reference dart when it survives on this face.
            let kept = self
                .outer_ref
                .iter()
                .flatten()
                .filter_map(|&d| map_dart(d))
                .find(|&d| sub.face_of(d) == f);
            refs.push(kept.unwrap_or(sub.faces[f as usize][0]));
        }
        sub.assign_outer(&refs)?;
        Ok((sub, old_vertex))
    }

    pub fn induced_submap(&self, s: &VertexSet) -> Result<PlaneMap> {
        if s.is_empty() {
            return Err(Error::Input("induced submap of an empty vertex set".into()));
        }
        let keep_edge = vec![true; self.edge_count()];
        Ok(self.submap(&s.mask(self.vertex_count()), &keep_edge)?.0)
    }

    pub fn delete_edges(&self, edges: &[u32]) -> Result<PlaneMap> {
        let mut keep_edge = vec![true; self.edge_count()];
        for &e in edges {
            keep_edge[e as usize] = false;
        }
        Ok(self.submap(&vec![true; self.vertex_count()], &keep_edge)?.0)
    }

    /// Removes loops and all but the least-index edge of each parallel class.
    pub fn simplify(&self) -> Result<PlaneMap> {
        let mut seen = BTreeMap::new();
        let mut drop = Vec::new();
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            if a == b || seen.insert((a.min(b), a.max(b)), e).is_some() {
                drop.push(e as u32);
            }
        }
        if drop.is_empty() {
            return Ok(self.clone());
        }
        self.delete_edges(&drop)
    }

    /// Inserts a new edge from `origin(a_slot)` to `origin(b_slot)`. Both slots
    /// must be darts of one face; the new darts are placed just before the
    /// slots in their rotations, so the face splits into the walk from
    /// `b_slot` (which gains the new forward dart) and the walk from `a_slot`.
    pub fn insert_edge(&self, a_slot: Dart, b_slot: Dart) -> Result<(PlaneMap, Insertion)> {
        for d in [a_slot, b_slot] {
            if d.index() >= self.dart_count() {
                return Err(Error::Topology(format!("slot dart {} out of range", d.0)));
            }
        }
        if self.face_of(a_slot) != self.face_of(b_slot) {
            return Err(Error::Topology(format!(
                "slots {} and {} lie on different faces",
                a_slot.0, b_slot.0
            )));
        }
        let (a, b) = (self.origin(a_slot), self.origin(b_slot));
        if a == b {
            return Err(Error::Topology(format!("insertion would create a loop at {a}")));
        }
        let e = self.edge_count() as u32;
        let dart = Dart::new(e, false);
        let mut edges = self.edges.clone();
        edges.push([a, b]);
        let mut rot = self.rot.clone();
        let pa = self.pos[a_slot.index()] as usize;
        rot[a as usize].insert(pa, dart);
        let pb = self.pos[b_slot.index()] as usize;
        rot[b as usize].insert(pb, dart.rev());
        let map = Self::from_parts(self.labels.clone(), edges, rot, &self.outer_refs())?;
        let ins = Insertion {
            edge: e,
            dart,
            face_forward: map.face_of(dart),
            face_backward: map.face_of(dart.rev()),
        };
        Ok((map, ins))
    }

    /// Checked form of [`PlaneMap::insert_edge`] naming the face and endpoints.
    pub fn insert_edge_in_face(
        &self,
        u: u32,
        v: u32,
        f: u32,
        u_slot: Dart,
        v_slot: Dart,
    ) -> Result<(PlaneMap, Insertion)> {
        for (x, slot) in [(u, u_slot), (v, v_slot)] {
            if slot.index() >= self.dart_count()
                || self.origin(slot) != x
                || self.face_of(slot) != f
            {
                return Err(Error::Topology(format!(
                    "vertex {x} has no slot dart {} on face {f}",
                    slot.0
                )));
            }
        }
        self.insert_edge(u_slot, v_slot)
    }

    /// Appends a new vertex joined to `v`, placed last in `v`'s rotation.
    pub fn add_pendant(&self, v: u32, label: u32) -> Result<(PlaneMap, u32)> {
        if self.labels.last().is_some_and(|&l| l >= label) {
            return Err(Error::Input(format!("pendant label {label} is not fresh")));
        }
        let w = self.vertex_count() as u32;
        let e = self.edge_count() as u32;
        let mut edges = self.edges.clone();
        edges.push([v, w]);
        let mut rot = self.rot.clone();
        rot[v as usize].push(Dart::new(e, false));
        rot.push(vec![Dart::new(e, true)]);
        let mut labels = self.labels.clone();
        labels.push(label);
        let mut outer = self.outer_refs();
        if self.rot[v as usize].is_empty() {
            outer.push(Dart::new(e, false));
        }
        Ok((Self::from_parts(labels, edges, rot, &outer)?, w))
    }

    /// Contracts every tree of `forest_edges` onto its root, then removes the
    /// loops and parallel edges this creates. Returns the new index of every
    /// old vertex. Vertices outside the forest are kept as they are.
    pub fn contract_forest(
        &self,
        forest_edges: &[u32],
        roots: &VertexSet,
    ) -> Result<(PlaneMap, Vec<u32>)> {
        let n = self.vertex_count();
        let mut in_forest = vec![false; self.edge_count()];
        let mut uf = UnionFind::new(n);
        for &e in forest_edges {
            let [a, b] = self.edges[e as usize];
            if in_forest[e as usize] || !uf.union(a, b) {
                return Err(Error::Input(format!("forest edges contain a cycle at edge {e}")));
            }
            in_forest[e as usize] = true;
        }
        let mut touched = vec![false; n];
        for &e in forest_edges {
            for v in self.edges[e as usize] {
                touched[v as usize] = true;
            }
        }
        let mut root_of_class = vec![u32::MAX; n];
        for r in roots.iter() {
            if !touched[r as usize] {
                continue;
            }
            let c = uf.find(r) as usize;
            if root_of_class[c] != u32::MAX {
                return Err(Error::Input(format!("tree of vertex {r} holds two roots")));
            }
            root_of_class[c] = r;
        }
        let mut rep = vec![0u32; n];
        for v in 0..n as u32 {
            rep[v as usize] = if touched[v as usize] {
                match root_of_class[uf.find(v) as usize] {
                    u32::MAX => {
                        return Err(Error::Input(format!("tree of vertex {v} has no root")))
                    }
                    r => r,
                }
            } else {
                v
            };
        }
        let mut new_index = vec![u32::MAX; n];
        let mut old_of_new = Vec::new();
        for v in 0..n as u32 {
            if rep[v as usize] == v {
                new_index[v as usize] = old_of_new.len() as u32;
                old_of_new.push(v);
            }
        }
        let vertex_map: Vec<u32> = (0..n).map(|v| new_index[rep[v] as usize]).collect();

        let mut new_edge = vec![u32::MAX; self.edge_count()];
        let mut edges = Vec::new();
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            if !in_forest[e] {
                new_edge[e] = edges.len() as u32;
                edges.push([vertex_map[a as usize], vertex_map[b as usize]]);
            }
        }
        let map_dart = |d: Dart| Dart::new(new_edge[d.edge() as usize], d.0 & 1 == 1);

        let mut rot = vec![Vec::new(); old_of_new.len()];
        for (i, &r) in old_of_new.iter().enumerate() {
            let Some(&start) = self.rot[r as usize].first() else { continue };
            if !touched[r as usize] {
                rot[i] = self.rot[r as usize].iter().map(|&d| map_dart(d)).collect();
                continue;
            }
            // Walk around the tree: tree darts are crossed, other darts are
            // emitted in the order met.
            let mut d = start;
            loop {
                if in_forest[d.edge() as usize] {
                    d = self.succ(d.rev());
                } else {
                    rot[i].push(map_dart(d));
                    d = self.succ(d);
                }
                if d == start {
                    break;
                }
            }
        }
        let mut outer = Vec::new();
        for &r in self.outer_ref.iter().flatten() {
            let mut d = r;
            loop {
                if !in_forest[d.edge() as usize] {
                    outer.push(map_dart(d));
                    break;
                }
                d = self.next_in_face(d);
                if d == r {
                    break;
                }
            }
        }
        let labels = old_of_new.iter().map(|&v| self.labels[v as usize]).collect();
        let raw = Self::from_parts(labels, edges, rot, &outer)?;
        Ok((raw.simplify()?, vertex_map))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&MapFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<MapFile>(text)?.try_into()
    }
}

/// On-disk map format. `outer` is a single dart for a connected map and a
/// list of darts (one per component with edges) otherwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapFile {
    pub n: usize,
    pub edges: Vec<[u32; 2]>,
    pub rot: Vec<Vec<u32>>,
    pub outer: OuterField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OuterField {
    One(u32),
    Many(Vec<u32>),
}

impl From<&PlaneMap> for MapFile {
    fn from(map: &PlaneMap) -> Self {
        let refs: Vec<u32> = map.outer_refs().into_iter().map(|d| d.0).collect();
        let identity = map.labels.iter().enumerate().all(|(i, &l)| l == i as u32);
        MapFile {
            n: map.vertex_count(),
            edges: map.edges.clone(),
            rot: map.rot.iter().map(|l| l.iter().map(|d| d.0).collect()).collect(),
            outer: if refs.len() == 1 { OuterField::One(refs[0]) } else { OuterField::Many(refs) },
            labels: (!identity).then(|| map.labels.clone()),
        }
    }
}

impl TryFrom<MapFile> for PlaneMap {
    type Error = Error;

    fn try_from(file: MapFile) -> Result<Self> {
        if file.rot.len() != file.n {
            return Err(Error::Structure(format!(
                "n = {} but {} rotations",
                file.n,
                file.rot.len()
            )));
        }
        let outer: Vec<Dart> = match file.outer {
            OuterField::One(d) => vec![Dart(d)],
            OuterField::Many(ds) => ds.into_iter().map(Dart).collect(),
        };
        let labels = file.labels.unwrap_or_else(|| (0..file.n as u32).collect());
        let rot = file.rot.into_iter().map(|l| l.into_iter().map(Dart).collect()).collect();
        PlaneMap::from_parts(labels, file.edges, rot, &outer)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// k×k grid drawn on the integer lattice; vertex r·k + c sits at (c, r).
    pub fn grid(k: u32) -> PlaneMap {
        let mut pts = Vec::new();
        for r in 0..k {
            for c in 0..k {
                pts.push([c as f64, r as f64]);
            }
        }
        let id = |r: u32, c: u32| r * k + c;
        let mut edges = Vec::new();
        for r in 0..k {
            for c in 0..k {
                if c + 1 < k {
                    edges.push([id(r, c), id(r, c + 1)]);
                }
                if r + 1 < k {
                    edges.push([id(r, c), id(r + 1, c)]);
                }
            }
        }
        PlaneMap::from_coordinates(&pts, &edges).unwrap()
    }

    pub fn triangle() -> PlaneMap {
        PlaneMap::from_coordinates(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], &[[0, 1], [1, 2], [0, 2]])
            .unwrap()
    }

    /// K4 drawn with vertex 3 inside triangle 0 1 2.
    pub fn k4() -> PlaneMap {
        PlaneMap::from_coordinates(
            &[[0.0, 0.0], [4.0, 0.0], [0.0, 4.0], [1.0, 1.0]],
            &[[0, 1], [1, 2], [0, 2], [0, 3], [1, 3], [2, 3]],
        )
        .unwrap()
    }

    pub fn square() -> PlaneMap {
        PlaneMap::from_coordinates(
            &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            &[[0, 1], [1, 2], [2, 3], [0, 3]],
        )
        .unwrap()
    }
}
