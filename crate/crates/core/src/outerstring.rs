//! Impressions whose parts touch the outer face.
//!
//! [`outerplanar_impression`] layers an outerplanar host by RIG distance from
//! a base region. [`outerstring_induct`] grows a partial impression one
//! uncovered component at a time; [`outerstring_refine`] folds interior parts
//! into outer ones, and [`outerstring_impression`] composes the two.

use serde::Serialize;

use crate::constants::{OUTERPLANAR_X, OUTERPLANAR_Y, OUTERSTRING_REFINED, OUTERSTRING_X};
use crate::error::{cert_fail, Error, Result};
use crate::plane::{multi_source_bfs, Dist, DistMatrix, Graph, PlaneMap, VertexSet};
use crate::rig::{self, Impression};

/// Thresholds of the partial impression grown by the induction.
pub const ANCHOR_SPREAD: u32 = 10;
pub const PARTIAL_SPREAD: u32 = 30;

/// BFS layering of one RIG component around its least-index region.
#[derive(Clone, Debug, Serialize)]
pub struct LayeredDecomposition {
    pub base_region: u32,
    /// Region indices at RIG distance `i` from the base.
    pub layers: Vec<Vec<u32>>,
    /// `A_i`: vertices first reached at layer `i`.
    pub fresh: Vec<VertexSet>,
    /// Components of `G[A_i]`.
    pub parts_per_layer: Vec<Vec<VertexSet>>,
}

/// The layered impression of a host whose regions span it. Works on any
/// host; the certified `(11, 9)` is only claimed for outerplanar hosts, so
/// callers pass the certificate they can justify through `certify`.
pub fn layered_parts(g: &Graph, regions: &[VertexSet]) -> Result<(Vec<VertexSet>, Vec<LayeredDecomposition>)> {
    rig::check_regions(g, regions)?;
    let n = g.vertex_count();
    rig::check_spanning(g, regions)?;
    let covered = VertexSet::union_all(regions);
    let rig_graph = rig::rig_graph(n, regions);
    let mut layer_of = vec![Dist::Infinite; regions.len()];
    let mut decomps = Vec::new();
    let mut parts = Vec::new();
    for base in 0..regions.len() as u32 {
        if layer_of[base as usize].is_finite() {
            continue;
        }
        let dist = rig_graph.bfs(base);
        let mut layers: Vec<Vec<u32>> = Vec::new();
        for (h, d) in dist.iter().enumerate() {
            if let Some(d) = d.finite() {
                layer_of[h] = Dist::Finite(d);
                if layers.len() <= d as usize {
                    layers.resize(d as usize + 1, Vec::new());
                }
                layers[d as usize].push(h as u32);
            }
        }
        let mut fresh = Vec::new();
        let mut per_layer = Vec::new();
        let mut previous = VertexSet::new();
        for layer in &layers {
            let d = VertexSet::union_all(layer.iter().map(|&h| &regions[h as usize]));
            let a = d.difference(&previous);
            let comps = rig::components_within(g, &a);
            parts.extend(comps.iter().cloned());
            per_layer.push(comps);
            fresh.push(a);
            previous = d;
        }
        decomps.push(LayeredDecomposition { base_region: base, layers, fresh, parts_per_layer: per_layer });
    }
    for v in 0..n as u32 {
        if !covered.contains(v) {
            parts.push(VertexSet::singleton(v));
        }
    }
    parts.sort();
    Ok((parts, decomps))
}

/// Layered `(11, 9)`-impression of an outerplanar host given abstractly.
pub fn outerplanar_impression_of(g: &Graph, regions: &[VertexSet]) -> Result<(Impression, Vec<LayeredDecomposition>)> {
    let (parts, decomps) = layered_parts(g, regions)?;
    audit_layers(g, regions, &decomps)?;
    let imp = Impression::certify(
        g,
        regions,
        parts,
        Dist::Finite(OUTERPLANAR_X),
        Dist::Finite(OUTERPLANAR_Y),
    )?;
    Ok((imp, decomps))
}

/// Embedded form: rejects hosts with a vertex off the outer face.
pub fn outerplanar_impression(map: &PlaneMap, regions: &[VertexSet]) -> Result<(Impression, Vec<LayeredDecomposition>)> {
    if let Some(v) = map.outer_vertex_mask().iter().position(|&o| !o) {
        return Err(Error::Input(format!("vertex {v} is not on the outer face")));
    }
    outerplanar_impression_of(&map.graph(), regions)
}

/// Fresh sets partition the cover and every region spans at most two
/// consecutive `D` levels.
fn audit_layers(g: &Graph, regions: &[VertexSet], decomps: &[LayeredDecomposition]) -> Result<()> {
    let mut owner = vec![u32::MAX; g.vertex_count()];
    for (k, dec) in decomps.iter().enumerate() {
        for (i, a) in dec.fresh.iter().enumerate() {
            for v in a.iter() {
                if owner[v as usize] != u32::MAX {
                    cert_fail!("vertex {v} is fresh in two layers");
                }
                owner[v as usize] = (k << 16 | i) as u32;
            }
        }
        for (i, layer) in dec.layers.iter().enumerate() {
            for &h in layer {
                for v in regions[h as usize].iter() {
                    let o = owner[v as usize] as usize;
                    if o >> 16 != k || !(i.saturating_sub(1)..=i).contains(&(o & 0xffff)) {
                        cert_fail!("region {h} at layer {i} reaches outside layers {}..={i}", i.saturating_sub(1));
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    /// Small spread and an outer vertex.
    Item1a,
    /// Moderate spread and touches a part with an outer vertex.
    Item1b,
    /// Outer vertex, touches nothing.
    Item2,
    /// Outer vertex, touches exactly one part.
    Item3,
    /// Outer vertex, touches exactly two outer parts sharing an inner face.
    Item4,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentCase {
    pub component: VertexSet,
    pub tag: CaseTag,
    /// Parts touched by the component, ascending.
    pub touching: Vec<u32>,
    /// Inner face shared by the two touched parts in the fourth case.
    pub face: Option<u32>,
}

/// One step of the induction, for tracing.
#[derive(Clone, Debug, Serialize)]
pub struct InductStep {
    pub step: usize,
    pub tag: CaseTag,
    pub touching: Vec<u32>,
    pub added: Vec<VertexSet>,
}

/// Result of [`outerstring_induct`].
#[derive(Clone, Debug, Serialize)]
pub struct PartialImpression {
    pub parts: Vec<VertexSet>,
    /// Contains an outer vertex and meets regions of spread at most 10.
    pub anchored: Vec<bool>,
    pub steps: Vec<InductStep>,
    pub measured_x: Dist,
}

struct Ctx<'a> {
    map: &'a PlaneMap,
    g: Graph,
    regions: &'a [VertexSet],
    by_vertex: Vec<Vec<u32>>,
    rig_graph: Graph,
    rig: DistMatrix,
    outer: Vec<bool>,
    /// Inner faces at each vertex.
    inner_faces: Vec<Vec<u32>>,
    audit: bool,
}

impl<'a> Ctx<'a> {
    fn new(map: &'a PlaneMap, regions: &'a [VertexSet], audit: bool) -> Result<Self> {
        let g = map.graph();
        rig::check_regions(&g, regions)?;
        let n = g.vertex_count();
        let outer = map.outer_vertex_mask();
        for (i, h) in regions.iter().enumerate() {
            if !h.iter().any(|v| outer[v as usize]) {
                return Err(Error::Input(format!("region {i} has no outer vertex")));
            }
        }
        rig::check_spanning(&g, regions)?;
        let mut inner_faces = vec![Vec::new(); n];
        for f in 0..map.face_count() as u32 {
            if !map.is_outer_face(f) {
                for v in map.face_vertices(f).iter() {
                    inner_faces[v as usize].push(f);
                }
            }
        }
        let rig_graph = rig::rig_graph(n, regions);
        Ok(Ctx {
            map,
            by_vertex: rig::incidence(n, regions),
            rig: DistMatrix::new(&rig_graph),
            rig_graph,
            g,
            regions,
            outer,
            inner_faces,
            audit,
        })
    }

    fn spread(&self, set: &VertexSet) -> Dist {
        self.rig.weak_diameter(&rig::hitting(&self.by_vertex, set))
    }

    fn has_outer(&self, set: &VertexSet) -> bool {
        set.iter().any(|v| self.outer[v as usize])
    }

    fn touching(&self, set: &VertexSet, owner: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = set
            .iter()
            .flat_map(|v| self.g.neighbors(v).iter().map(|&w| owner[w as usize]))
            .filter(|&o| o != u32::MAX)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn common_inner_face(&self, a: &VertexSet, b: &VertexSet) -> Option<u32> {
        let fa: VertexSet = a.iter().flat_map(|v| self.inner_faces[v as usize].iter().copied()).collect();
        b.iter()
            .flat_map(|v| self.inner_faces[v as usize].iter().copied())
            .filter(|&f| fa.contains(f))
            .min()
    }

    fn classify(&self, k: &VertexSet, parts: &[VertexSet], owner: &[u32]) -> Result<ComponentCase> {
        let touching = self.touching(k, owner);
        let outer_k = self.has_outer(k);
        let spread = self.spread(k);
        let case = |tag, face| ComponentCase { component: k.clone(), tag, touching: touching.clone(), face };
        if outer_k && spread.within(ANCHOR_SPREAD) {
            return Ok(case(CaseTag::Item1a, None));
        }
        if spread.within(PARTIAL_SPREAD) && touching.iter().any(|&b| self.has_outer(&parts[b as usize])) {
            return Ok(case(CaseTag::Item1b, None));
        }
        if outer_k {
            match touching.as_slice() {
                [] => return Ok(case(CaseTag::Item2, None)),
                [_] => return Ok(case(CaseTag::Item3, None)),
                &[b1, b2] => {
                    let (p1, p2) = (&parts[b1 as usize], &parts[b2 as usize]);
                    if self.has_outer(p1) && self.has_outer(p2) {
                        if let Some(f) = self.common_inner_face(p1, p2) {
                            return Ok(case(CaseTag::Item4, Some(f)));
                        }
                    }
                }
                _ => {}
            }
        }
        cert_fail!(
            "component at vertex {} fits no case (spread {spread}, touches {touching:?})",
            k.min().unwrap_or(0)
        )
    }

    /// Shortest path inside `allowed` from `sources` to the nearest vertex
    /// satisfying `target`, least index among the nearest.
    fn path_within(
        &self,
        allowed: &VertexSet,
        sources: &[u32],
        target: impl Fn(u32) -> bool,
    ) -> Option<Vec<u32>> {
        let mut parent = std::collections::BTreeMap::new();
        let mut frontier: Vec<u32> = sources.iter().copied().filter(|&s| allowed.contains(s)).collect();
        frontier.sort_unstable();
        frontier.dedup();
        for &s in &frontier {
            parent.insert(s, s);
        }
        while !frontier.is_empty() {
            if let Some(&t) = frontier.iter().filter(|&&v| target(v)).min() {
                let mut path = vec![t];
                let mut v = t;
                while parent[&v] != v {
                    v = parent[&v];
                    path.push(v);
                }
                return Some(path);
            }
            let mut next = Vec::new();
            for &u in &frontier {
                for &w in self.g.neighbors(u) {
                    if allowed.contains(w) && !parent.contains_key(&w) {
                        parent.insert(w, u);
                        next.push(w);
                    }
                }
            }
            next.sort_unstable();
            frontier = next;
        }
        None
    }

    /// Region pairs in search order: each region alone, then intersecting
    /// pairs `(a, b)` with `a < b`.
    fn region_pairs(&self, first: &[u32]) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = first.iter().map(|&h| (h, h)).collect();
        for &h in first {
            for &w in self.rig_graph.neighbors(h) {
                out.push((h, w));
            }
        }
        out
    }

    fn neighborhood(&self, set: &VertexSet) -> VertexSet {
        set.iter()
            .flat_map(|v| self.g.neighbors(v).iter().copied())
            .filter(|&w| !set.contains(w))
            .collect()
    }

    fn extend_item3(&self, k: &VertexSet, b: &VertexSet) -> Result<VertexSet> {
        let nb = self.neighborhood(b);
        let all: Vec<u32> = (0..self.regions.len() as u32).collect();
        for (h1, h2) in self.region_pairs(&all) {
            let inside = k.intersection(&self.regions[h1 as usize].union(&self.regions[h2 as usize]));
            let starts: Vec<u32> = inside.iter().filter(|&v| nb.contains(v)).collect();
            if starts.is_empty() {
                continue;
            }
            if let Some(path) = self.path_within(&inside, &starts, |v| self.outer[v as usize]) {
                return Ok(path.into_iter().collect());
            }
        }
        cert_fail!("no region pair links an outer vertex of the component at {} to its neighbour", k.min().unwrap_or(0))
    }

    /// The outer-boundary run of `k` between the two touched parts, oriented
    /// to start next to `b1`.
    fn boundary_run(&self, k: &VertexSet, b1: &VertexSet, b2: &VertexSet, owner_touch: impl Fn(u32, &VertexSet) -> bool) -> Vec<u32> {
        let start = k.iter().find(|&v| self.outer[v as usize]).expect("component has an outer vertex");
        let comp = self.map.components()[start as usize];
        let Some(r) = self.map.outer_ref(comp) else { return vec![start] };
        let walk = self.map.face_walk(self.map.face_of(r));
        let len = walk.len();
        let inside = |j: usize| k.contains(walk[j % len]);
        let mut runs: Vec<(usize, usize)> = Vec::new();
        if (0..len).all(inside) {
            runs.push((0, len));
        } else {
            for j in 0..len {
                if inside(j) && !inside(j + len - 1) {
                    let mut e = j;
                    while inside(e + 1) {
                        e += 1;
                    }
                    runs.push((j, e - j + 1));
                }
            }
        }
        let seq = |(s, l): (usize, usize)| -> Vec<u32> { (s..s + l).map(|j| walk[j % len]).collect() };
        for &(s, l) in &runs {
            let before = walk[(s + len - 1) % len];
            let after = walk[(s + l) % len];
            if b1.contains(before) && b2.contains(after) {
                return seq((s, l));
            }
            if b2.contains(before) && b1.contains(after) {
                let mut v = seq((s, l));
                v.reverse();
                return v;
            }
        }
        let &(s, l) = runs.iter().max_by_key(|&&(s, l)| (l, std::cmp::Reverse(s))).expect("a run exists");
        let mut v = seq((s, l));
        if !owner_touch(v[0], b1) && owner_touch(v[v.len() - 1], b1) {
            v.reverse();
        }
        v
    }

    /// Largest index along `walk` (or smallest when `from_end` is false) whose
    /// vertex reaches `N(b)` inside `k` and two intersecting regions.
    fn reach(&self, k: &VertexSet, walk: &[u32], b: &VertexSet, from_end: bool) -> Option<(usize, Vec<u32>)> {
        let nb = self.neighborhood(b);
        let order: Vec<usize> = if from_end { (0..walk.len()).rev().collect() } else { (0..walk.len()).collect() };
        for i in order {
            let p = walk[i];
            for (h1, h2) in self.region_pairs(&self.by_vertex[p as usize]) {
                let inside = k.intersection(&self.regions[h1 as usize].union(&self.regions[h2 as usize]));
                if let Some(path) = self.path_within(&inside, &[p], |v| nb.contains(v)) {
                    return Some((i, path));
                }
            }
        }
        None
    }

    fn grow(&self, k: &VertexSet, path: &[u32]) -> VertexSet {
        let path: VertexSet = path.iter().copied().collect();
        let hit = rig::hitting(&self.by_vertex, &path);
        let cover = VertexSet::union_all(hit.iter().map(|&h| &self.regions[h as usize]));
        let pool = k.intersection(&cover);
        rig::components_within(&self.g, &pool)
            .into_iter()
            .find(|c| c.intersects(&path))
            .expect("path lies in the pool")
    }

    fn extend_item4(&self, k: &VertexSet, b1: &VertexSet, b2: &VertexSet) -> Result<Vec<VertexSet>> {
        let touches = |v: u32, b: &VertexSet| self.g.neighbors(v).iter().any(|&w| b.contains(w));
        let walk = self.boundary_run(k, b1, b2, touches);
        let Some((l, lpath)) = self.reach(k, &walk, b1, true) else {
            cert_fail!("no boundary vertex reaches the first part");
        };
        let Some((r, rpath)) = self.reach(k, &walk, b2, false) else {
            cert_fail!("no boundary vertex reaches the second part");
        };
        let l_star = self.grow(k, &lpath);
        let r_star = self.grow(k, &rpath);
        for (name, s) in [("left", &l_star), ("right", &r_star)] {
            let d = self.spread(s);
            if !d.within(5) {
                cert_fail!("{name} growth has spread {d} > 5");
            }
        }
        if l_star.intersects(&r_star) {
            return Ok(vec![l_star.union(&r_star)]);
        }
        if l >= r {
            cert_fail!("disjoint growths with left index {l} >= right index {r}");
        }
        Ok(vec![l_star, r_star])
    }

    fn owner_of(&self, parts: &[VertexSet]) -> Result<Vec<u32>> {
        rig::owners(self.g.vertex_count(), parts)
    }

    /// Components of the uncovered graph, ordered by least vertex.
    fn uncovered_components(&self, owner: &[u32]) -> Vec<VertexSet> {
        let free = VertexSet::from_mask(&owner.iter().map(|&o| o == u32::MAX).collect::<Vec<_>>());
        rig::components_within(&self.g, &free)
    }

    fn check_parts(&self, parts: &[VertexSet], owner: &[u32]) -> Result<Vec<bool>> {
        let mut anchored = Vec::with_capacity(parts.len());
        for (i, b) in parts.iter().enumerate() {
            if !rig::is_connected_in(&self.g, b) {
                cert_fail!("part {i} is disconnected");
            }
            let spread = self.spread(b);
            if !spread.within(PARTIAL_SPREAD) {
                cert_fail!("part {i} has spread {spread} > {PARTIAL_SPREAD}");
            }
            anchored.push(self.has_outer(b) && spread.within(ANCHOR_SPREAD));
        }
        for (i, b) in parts.iter().enumerate() {
            if !anchored[i] && !self.touching(b, owner).iter().any(|&j| self.has_outer(&parts[j as usize])) {
                cert_fail!("part {i} is neither anchored nor next to an outer part");
            }
        }
        Ok(anchored)
    }

    fn check_hypothesis(&self, parts: &[VertexSet]) -> Result<Vec<bool>> {
        let owner = self.owner_of(parts)?;
        let anchored = self.check_parts(parts, &owner)?;
        for k in self.uncovered_components(&owner) {
            self.classify(&k, parts, &owner)?;
        }
        Ok(anchored)
    }
}

/// Grows a partial `(30, ∞)`-impression from nothing, re-checking the
/// induction hypothesis after every step when `audit` is set.
pub fn outerstring_induct(map: &PlaneMap, regions: &[VertexSet], audit: bool) -> Result<PartialImpression> {
    let ctx = Ctx::new(map, regions, audit)?;
    let mut parts: Vec<VertexSet> = Vec::new();
    let mut steps = Vec::new();
    let n = ctx.g.vertex_count();
    let mut uncovered = n;
    loop {
        let owner = ctx.owner_of(&parts)?;
        let Some(k) = ctx.uncovered_components(&owner).into_iter().next() else { break };
        let case = ctx.classify(&k, &parts, &owner)?;
        let added = match case.tag {
            CaseTag::Item1a | CaseTag::Item1b => vec![k.clone()],
            CaseTag::Item2 => {
                let b = k.iter().find(|&v| ctx.outer[v as usize]).expect("outer vertex");
                vec![VertexSet::singleton(b)]
            }
            CaseTag::Item3 => vec![ctx.extend_item3(&k, &parts[case.touching[0] as usize])?],
            CaseTag::Item4 => ctx.extend_item4(
                &k,
                &parts[case.touching[0] as usize],
                &parts[case.touching[1] as usize],
            )?,
        };
        parts.extend(added.iter().cloned());
        let covered: usize = parts.iter().map(VertexSet::len).sum();
        if n - covered >= uncovered {
            cert_fail!("induction step {} covered nothing", steps.len());
        }
        uncovered = n - covered;
        if ctx.audit {
            ctx.check_hypothesis(&parts)?;
        }
        steps.push(InductStep { step: steps.len(), tag: case.tag, touching: case.touching, added });
    }
    let anchored = ctx.check_hypothesis(&parts)?;
    let measured_x = parts.iter().map(|p| ctx.spread(p)).max().unwrap_or(Dist::ZERO);
    Ok(PartialImpression { parts, anchored, steps, measured_x })
}

/// Every part gains an outer vertex: interior parts join their least-index
/// touching outer part.
pub fn refine_parts(map: &PlaneMap, partial: &PartialImpression) -> Result<Vec<VertexSet>> {
    let g = map.graph();
    let outer = map.outer_vertex_mask();
    let has_outer = |p: &VertexSet| p.iter().any(|v| outer[v as usize]);
    let owner = rig::owners(g.vertex_count(), &partial.parts)?;
    let mut merged: Vec<Option<VertexSet>> =
        partial.parts.iter().map(|p| has_outer(p).then(|| p.clone())).collect();
    for (i, p) in partial.parts.iter().enumerate() {
        if has_outer(p) {
            continue;
        }
        let target = p
            .iter()
            .flat_map(|v| g.neighbors(v).iter().map(|&w| owner[w as usize]))
            .filter(|&o| o != u32::MAX && has_outer(&partial.parts[o as usize]))
            .min();
        let Some(t) = target else {
            cert_fail!("interior part {i} touches no outer part");
        };
        let slot = merged[t as usize].as_mut().expect("outer part kept");
        *slot = slot.union(p);
    }
    Ok(merged.into_iter().flatten().collect())
}

/// Induction then refinement, certified `(70, ∞)`.
pub fn outerstring_refine(map: &PlaneMap, regions: &[VertexSet], audit: bool) -> Result<(Impression, PartialImpression)> {
    let partial = outerstring_induct(map, regions, audit)?;
    let parts = refine_parts(map, &partial)?;
    let outer = map.outer_vertex_mask();
    if let Some(i) = parts.iter().position(|p| !p.iter().any(|v| outer[v as usize])) {
        cert_fail!("refined part {i} has no outer vertex");
    }
    let imp = Impression::certify(&map.graph(), regions, parts, Dist::Finite(OUTERSTRING_REFINED), Dist::Infinite)?;
    Ok((imp, partial))
}

/// Regions seen through a disjoint family: region `h` becomes the set of
/// part indices it meets.
pub fn quotient_regions(n: usize, parts: &[VertexSet], regions: &[VertexSet]) -> Result<Vec<VertexSet>> {
    let owner = rig::owners(n, parts)?;
    regions
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let q: VertexSet = h.iter().map(|v| owner[v as usize]).collect();
            if q.contains(u32::MAX) {
                return Err(Error::Input(format!("region {i} leaves the parts' cover")));
            }
            Ok(q)
        })
        .collect()
}

/// Unions of parts, one per quotient part.
pub fn lift_parts(parts: &[VertexSet], quotient_parts: &[VertexSet]) -> Vec<VertexSet> {
    quotient_parts
        .iter()
        .map(|q| VertexSet::union_all(q.iter().map(|i| &parts[i as usize])))
        .collect()
}

/// `(770, 9)`-impression whose parts all touch the outer face.
pub fn outerstring_impression(map: &PlaneMap, regions: &[VertexSet], audit: bool) -> Result<Impression> {
    let g = map.graph();
    let (refined, _) = outerstring_refine(map, regions, audit)?;
    let im = rig::build_im(&g, &refined.parts)?;
    let quotient = quotient_regions(g.vertex_count(), &refined.parts, regions)?;
    let (inner, _) = outerplanar_impression_of(&im, &quotient)?;
    let parts = lift_parts(&refined.parts, &inner.parts);
    let outer = map.outer_vertex_mask();
    if let Some(i) = parts.iter().position(|p| !p.iter().any(|v| outer[v as usize])) {
        cert_fail!("composed part {i} has no outer vertex");
    }
    Impression::certify(&g, regions, parts, Dist::Finite(OUTERSTRING_X), Dist::Finite(OUTERPLANAR_Y))
}

/// Distance from every vertex to the nearest outer vertex; used by tests and
/// generators to check outerplanarity quickly.
pub fn outer_depth(map: &PlaneMap) -> Vec<Dist> {
    let outer = map.outer_vertices();
    multi_source_bfs(&map.graph(), outer.iter())
}
