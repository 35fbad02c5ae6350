//! Faces of `G[∪B]` seen from the host: facial vertex sets, the F–B
//! crossings along each face boundary, bounded vertices and encroachment.

use serde::Serialize;

use crate::error::{cert_fail, Result};
use crate::plane::{Dart, PlaneMap, VertexSet};
use crate::rig;

/// An edge `uv` from the covered part `u` into a facial set `v`, followed by
/// the boundary walk from `u` to the next crossing of the same face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub u: u32,
    pub v: u32,
    /// The host dart from `u` to `v`.
    pub dart: Dart,
    pub walk: Vec<u32>,
}

/// Facial structure of a disjoint family `B` that encircles the host.
#[derive(Clone, Debug)]
pub struct Facial {
    /// Owning part per vertex, `u32::MAX` outside `∪B`.
    pub owner: Vec<u32>,
    /// Facial vertex sets, one per inner face of `G[∪B]` holding vertices.
    pub sets: Vec<VertexSet>,
    /// Facial set per vertex outside `∪B`.
    pub face_of: Vec<u32>,
    /// Covered vertices on the boundary of each facial set's face.
    pub boundary: Vec<VertexSet>,
    /// Cyclic crossing sequence of each facial set's face.
    pub crossings: Vec<Vec<Crossing>>,
    pub outer: Vec<bool>,
}

impl Facial {
    pub fn new(map: &PlaneMap, parts: &[VertexSet]) -> Result<Facial> {
        let n = map.vertex_count();
        let owner = rig::owners(n, parts)?;
        let inside = |v: u32| owner[v as usize] != u32::MAX;
        let outer = map.outer_vertex_mask();
        let g = map.graph();
        let mut face_of = vec![u32::MAX; n];
        let mut seen = vec![false; map.dart_count()];
        let mut sets = Vec::new();
        let mut boundary = Vec::new();
        let mut crossings = Vec::new();
        let in_u = |d: Dart| inside(map.origin(d)) && inside(map.target(d));
        for start in 0..map.dart_count() as u32 {
            let start = Dart(start);
            if seen[start.index()] || !in_u(start) {
                continue;
            }
            // Walk the face of G[∪B] on the left of `start`, listing the
            // host darts that leave the boundary into the face.
            let mut events: Vec<(u32, Option<Dart>)> = Vec::new();
            let mut is_outer = false;
            let mut d = start;
            loop {
                seen[d.index()] = true;
                if map.is_outer_face(map.face_of(d)) {
                    is_outer = true;
                }
                let w = map.target(d);
                events.push((w, None));
                let mut x = map.succ(d.rev());
                while !in_u(x) {
                    events.push((w, Some(x)));
                    x = map.succ(x);
                }
                d = x;
                if d == start {
                    break;
                }
            }
            let cross_at: Vec<usize> = (0..events.len()).filter(|&i| events[i].1.is_some()).collect();
            if cross_at.is_empty() {
                continue;
            }
            if is_outer {
                cert_fail!(
                    "vertex {} outside the family lies in the outer face",
                    map.target(events[cross_at[0]].1.unwrap())
                );
            }
            let len = events.len();
            let list: Vec<Crossing> = cross_at
                .iter()
                .enumerate()
                .map(|(k, &p)| {
                    let next = cross_at[(k + 1) % cross_at.len()];
                    let span = if next > p { next - p } else { next + len - p };
                    let mut walk = vec![events[p].0];
                    walk.extend((1..span).map(|j| events[(p + j) % len]).filter(|e| e.1.is_none()).map(|e| e.0));
                    let dart = events[p].1.unwrap();
                    Crossing { u: events[p].0, v: map.target(dart), dart, walk }
                })
                .collect();
            let id = sets.len() as u32;
            let seeds: VertexSet = list.iter().map(|c| c.v).collect();
            let mut set = VertexSet::new();
            let mut stack: Vec<u32> = seeds.iter().collect();
            while let Some(v) = stack.pop() {
                if face_of[v as usize] == id {
                    continue;
                }
                if face_of[v as usize] != u32::MAX {
                    cert_fail!("vertex {v} lies in two faces of the covered subgraph");
                }
                face_of[v as usize] = id;
                set.insert(v);
                stack.extend(g.neighbors(v).iter().copied().filter(|&w| !inside(w)));
            }
            boundary.push(events.iter().map(|e| e.0).collect());
            sets.push(set);
            crossings.push(list);
        }
        if let Some(v) = (0..n).find(|&v| !inside(v as u32) && face_of[v] == u32::MAX) {
            cert_fail!("vertex {v} outside the family meets no face boundary");
        }
        Ok(Facial { owner, sets, face_of, boundary, crossings, outer })
    }

    pub fn covers(&self, v: u32) -> bool {
        self.owner[v as usize] != u32::MAX
    }

    /// Covered vertices bounded by `h`: those in `h`, and those cut off from
    /// the outer boundary once `h` is removed from the covered subgraph.
    pub fn bounded_by(&self, map: &PlaneMap, h: &VertexSet) -> Vec<bool> {
        let n = self.owner.len();
        let mut reach = vec![false; n];
        let mut stack: Vec<u32> = (0..n as u32)
            .filter(|&v| self.covers(v) && self.outer[v as usize] && !h.contains(v))
            .collect();
        for &v in &stack {
            reach[v as usize] = true;
        }
        while let Some(v) = stack.pop() {
            for &d in map.rotation(v) {
                let w = map.target(d);
                if self.covers(w) && !h.contains(w) && !reach[w as usize] {
                    reach[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        (0..n).map(|v| self.covers(v as u32) && !reach[v]).collect()
    }

    /// Vertices of facial set `f` encroached by `h`, given the vertices
    /// bounded by `h`.
    pub fn encroached(&self, f: u32, h: &VertexSet, bounded: &[bool]) -> Vec<EncroachRun> {
        let list = &self.crossings[f as usize];
        let k = list.len();
        let link_ok: Vec<bool> = list.iter().map(|c| c.walk.iter().all(|&w| bounded[w as usize])).collect();
        let anchor: Vec<bool> = list.iter().map(|c| h.contains(c.u) && h.contains(c.v)).collect();
        let mut runs = Vec::new();
        let mut emit = |idx: Vec<usize>| {
            if idx.len() < 2 {
                return;
            }
            let edges: Vec<(u32, u32)> = idx.iter().map(|&i| (list[i].u, list[i].v)).collect();
            let crossings: Vec<u32> = idx.iter().map(|&i| i as u32).collect();
            let walk: VertexSet = idx[..idx.len() - 1]
                .iter()
                .flat_map(|&i| list[i].walk.iter().copied())
                .chain(std::iter::once(list[*idx.last().unwrap()].u))
                .collect();
            let encroached: VertexSet = edges.iter().map(|e| e.1).filter(|&v| !h.contains(v)).collect();
            runs.push(EncroachRun { face: f, crossings, edges, walk, encroached });
        };
        if link_ok.iter().all(|&b| b) {
            let anchors: Vec<usize> = (0..k).filter(|&i| anchor[i]).collect();
            if anchors.len() >= 2 {
                for (j, &a) in anchors.iter().enumerate() {
                    let b = anchors[(j + 1) % anchors.len()];
                    let span = if b > a { b - a } else { b + k - a };
                    emit((0..=span).map(|t| (a + t) % k).collect());
                }
            }
            return runs;
        }
        let start = (0..k).find(|&i| !link_ok[i]).unwrap() + 1;
        let mut chain: Vec<usize> = Vec::new();
        for t in 0..k {
            let i = (start + t) % k;
            chain.push(i);
            if !link_ok[i] {
                let first = chain.iter().position(|&j| anchor[j]);
                let last = chain.iter().rposition(|&j| anchor[j]);
                if let (Some(a), Some(b)) = (first, last) {
                    emit(chain[a..=b].to_vec());
                }
                chain.clear();
            }
        }
        runs
    }
}

/// A maximal stretch of consecutive crossings between two crossings lying in
/// the encroaching region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncroachRun {
    pub face: u32,
    /// Indices into the face's crossing sequence, in walk order.
    pub crossings: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
    /// The covered walk joining the run.
    pub walk: VertexSet,
    pub encroached: VertexSet,
}
