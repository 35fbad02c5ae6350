//! Region intersection graphs, touching graphs and impressions.
//!
//! Regions and parts are vertex sets of an abstract host graph. `RIG` joins
//! two regions when they share a vertex; `IM` joins two disjoint parts when a
//! host edge runs between them.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{cert_fail, Error, Result};
use crate::plane::{multi_source_bfs, Dist, DistMatrix, Graph, PlaneMap, VertexSet};

pub type Q = Ratio<u64>;

pub(crate) fn ratio_text<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub(crate) fn opt_ratio_text<S: Serializer>(
    q: &Option<Q>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&q.to_string()),
        None => s.serialize_none(),
    }
}

/// Whether `set` is nonempty and induces a connected subgraph.
pub fn is_connected_in(g: &Graph, set: &VertexSet) -> bool {
    let Some(start) = set.min() else { return false };
    let mut seen = VertexSet::singleton(start);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &w in g.neighbors(u) {
            if set.contains(w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == set.len()
}

/// Connected components of `g[set]`, each sorted, ordered by least vertex.
pub fn components_within(g: &Graph, set: &VertexSet) -> Vec<VertexSet> {
    let mut done = VertexSet::new();
    let mut out = Vec::new();
    for s in set.iter() {
        if done.contains(s) {
            continue;
        }
        let mut comp = vec![s];
        done.insert(s);
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &w in g.neighbors(u) {
                if set.contains(w) && done.insert(w) {
                    comp.push(w);
                }
            }
        }
        out.push(comp.into_iter().collect());
    }
    out
}

pub fn check_regions(g: &Graph, sets: &[VertexSet]) -> Result<()> {
    for (i, s) in sets.iter().enumerate() {
        if s.iter().any(|v| v as usize >= g.vertex_count()) {
            return Err(Error::Input(format!("region {i} has a vertex outside the host")));
        }
        if !is_connected_in(g, s) {
            return Err(Error::Input(format!("region {i} is empty or disconnected")));
        }
    }
    Ok(())
}

/// Every edge of `g` lies inside some region.
pub fn check_spanning(g: &Graph, sets: &[VertexSet]) -> Result<()> {
    let by_vertex = incidence(g.vertex_count(), sets);
    for (u, v) in g.edges() {
        let (a, b) = (&by_vertex[u as usize], &by_vertex[v as usize]);
        if !a.iter().any(|h| b.binary_search(h).is_ok()) {
            return Err(Error::Input(format!("edge {u}-{v} lies in no region")));
        }
    }
    Ok(())
}

/// Owner of each vertex in a disjoint family, `u32::MAX` where uncovered.
pub fn owners(n: usize, parts: &[VertexSet]) -> Result<Vec<u32>> {
    let mut owner = vec![u32::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for v in p.iter() {
            if v as usize >= n {
                return Err(Error::Input(format!("part {i} has a vertex outside the host")));
            }
            if owner[v as usize] != u32::MAX {
                return Err(Error::Input(format!(
                    "parts {} and {i} overlap at vertex {v}",
                    owner[v as usize]
                )));
            }
            owner[v as usize] = i as u32;
        }
    }
    Ok(owner)
}

/// For each vertex, the indices of the sets containing it.
pub fn incidence(n: usize, sets: &[VertexSet]) -> Vec<Vec<u32>> {
    let mut by_vertex = vec![Vec::new(); n];
    for (i, s) in sets.iter().enumerate() {
        for v in s.iter() {
            by_vertex[v as usize].push(i as u32);
        }
    }
    by_vertex
}

/// `I_sets(target)`: indices of the sets meeting `target`, ascending.
pub fn hitting(by_vertex: &[Vec<u32>], target: &VertexSet) -> Vec<u32> {
    let mut out: Vec<u32> = target.iter().flat_map(|v| by_vertex[v as usize].iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// RIG without the connectivity audit.
pub fn rig_graph(n: usize, sets: &[VertexSet]) -> Graph {
    let by_vertex = incidence(n, sets);
    let mut edges = Vec::new();
    for list in &by_vertex {
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(sets.len(), edges)
}

pub fn build_rig(g: &Graph, regions: &[VertexSet]) -> Result<Graph> {
    check_regions(g, regions)?;
    Ok(rig_graph(g.vertex_count(), regions))
}

/// IM over a family whose owner table is already known.
pub fn im_graph(g: &Graph, owner: &[u32], parts: usize) -> Graph {
    let edges = g.edges().filter_map(|(u, v)| {
        let (a, b) = (owner[u as usize], owner[v as usize]);
        (a != b && a != u32::MAX && b != u32::MAX).then_some((a, b))
    });
    Graph::from_edges(parts, edges.collect::<Vec<_>>())
}

pub fn build_im(g: &Graph, parts: &[VertexSet]) -> Result<Graph> {
    let owner = owners(g.vertex_count(), parts)?;
    check_regions(g, parts)?;
    Ok(im_graph(g, &owner, parts.len()))
}

/// Weak diameter of every group of vertices of `graph`. Each vertex that
/// occurs in some group of size two or more is searched from once.
pub fn weak_diameters(graph: &Graph, groups: &[Vec<u32>]) -> Vec<Dist> {
    let mut member_of: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, grp) in groups.iter().enumerate() {
        if grp.len() > 1 {
            for &v in grp {
                member_of.entry(v).or_default().push(i);
            }
        }
    }
    let sources: Vec<(u32, Vec<usize>)> = member_of.into_iter().collect();
    let partial: Vec<Vec<(usize, Dist)>> = sources
        .par_iter()
        .map(|(s, grps)| {
            let dist = graph.bfs(*s);
            grps.iter()
                .map(|&i| {
                    let far = groups[i].iter().map(|&t| dist[t as usize]).max();
                    (i, far.unwrap_or(Dist::ZERO))
                })
                .collect()
        })
        .collect();
    let mut out = vec![Dist::ZERO; groups.len()];
    for (i, d) in partial.into_iter().flatten() {
        out[i] = out[i].max(d);
    }
    out
}

/// Outcome of [`min_z_span`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanReport {
    pub z: Dist,
    /// A vertex lying in no region, when one exists.
    pub uncovered: Option<u32>,
    /// An edge attaining `z`.
    pub witness: Option<(u32, u32)>,
}

/// Least `z` such that the regions `z`-span `g`.
pub fn min_z_span(g: &Graph, regions: &[VertexSet]) -> SpanReport {
    let n = g.vertex_count();
    let by_vertex = incidence(n, regions);
    if let Some(v) = (0..n).find(|&v| by_vertex[v].is_empty()) {
        return SpanReport { z: Dist::Infinite, uncovered: Some(v as u32), witness: None };
    }
    let rig = rig_graph(n, regions);
    let edges: Vec<(u32, u32)> = g.edges().collect();
    let per_edge: Vec<Dist> = edges
        .par_iter()
        .map(|&(u, v)| {
            let from_u = &by_vertex[u as usize];
            if from_u.iter().any(|h| by_vertex[v as usize].contains(h)) {
                return Dist::ZERO;
            }
            let dist = multi_source_bfs(&rig, from_u.iter().copied());
            by_vertex[v as usize].iter().map(|&h| dist[h as usize]).min().unwrap_or(Dist::Infinite)
        })
        .collect();
    let best = per_edge.iter().enumerate().max_by_key(|&(i, d)| (*d, std::cmp::Reverse(i)));
    match best {
        Some((i, &z)) => SpanReport { z, uncovered: None, witness: Some(edges[i]) },
        None => SpanReport { z: Dist::ZERO, uncovered: None, witness: None },
    }
}

/// A disjoint cover with certified and measured parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Impression {
    pub parts: Vec<VertexSet>,
    pub x: Dist,
    pub y: Dist,
    pub measured_x: Dist,
    pub measured_y: Dist,
}

impl Impression {
    /// Measures `parts` against `regions` and attaches the certificate
    /// `(x, y)`; fails when the measurement exceeds it.
    pub fn certify(
        g: &Graph,
        regions: &[VertexSet],
        parts: Vec<VertexSet>,
        x: Dist,
        y: Dist,
    ) -> Result<Impression> {
        let (mx, my) = verify_impression(g, regions, &parts)?;
        if mx > x || my > y {
            cert_fail!("measured ({mx}, {my}) exceeds certified ({x}, {y})");
        }
        Ok(Impression { parts, x, y, measured_x: mx, measured_y: my })
    }
}

/// Per-part and per-region weak diameters of an impression candidate.
#[derive(Clone, Debug)]
pub struct ImpressionProfile {
    /// Weak diameter of `I_H(M)` in the RIG, per part.
    pub part_spread: Vec<Dist>,
    /// Weak diameter of `I_M(H)` in the IM, per region.
    pub region_spread: Vec<Dist>,
}

pub fn impression_profile(
    g: &Graph,
    regions: &[VertexSet],
    parts: &[VertexSet],
) -> Result<ImpressionProfile> {
    let n = g.vertex_count();
    let owner = owners(n, parts)?;
    if let Some(v) = owner.iter().position(|&o| o == u32::MAX) {
        cert_fail!("vertex {v} is covered by no part");
    }
    for (i, p) in parts.iter().enumerate() {
        if !is_connected_in(g, p) {
            cert_fail!("part {i} is not connected");
        }
    }
    let rig = rig_graph(n, regions);
    let im = im_graph(g, &owner, parts.len());
    let by_region = incidence(n, regions);
    let part_groups: Vec<Vec<u32>> = parts.iter().map(|p| hitting(&by_region, p)).collect();
    let region_groups: Vec<Vec<u32>> = regions
        .iter()
        .map(|h| {
            let mut ps: Vec<u32> = h.iter().map(|v| owner[v as usize]).collect();
            ps.sort_unstable();
            ps.dedup();
            ps
        })
        .collect();
    Ok(ImpressionProfile {
        part_spread: weak_diameters(&rig, &part_groups),
        region_spread: weak_diameters(&im, &region_groups),
    })
}

/// Exact minimal `(x, y)` for which `parts` is an impression of `regions`.
pub fn verify_impression(g: &Graph, regions: &[VertexSet], parts: &[VertexSet]) -> Result<(Dist, Dist)> {
    let p = impression_profile(g, regions, parts)?;
    let x = p.part_spread.iter().copied().max().unwrap_or(Dist::ZERO);
    let y = p.region_spread.iter().copied().max().unwrap_or(Dist::ZERO);
    Ok((x, y))
}

/// Keeps the parts of an impression of `(g, all)` and re-certifies them for
/// the subfamily `keep` with parameters `(k·x, y)`.
pub fn transfer_impression(
    g: &Graph,
    all: &[VertexSet],
    imp: &Impression,
    keep: &[u32],
    k: u32,
) -> Result<Impression> {
    let n = g.vertex_count();
    let sub: Vec<VertexSet> = keep.iter().map(|&i| all[i as usize].clone()).collect();
    let covered = VertexSet::union_all(&sub);
    if covered.len() != n {
        let v = (0..n as u32).find(|&v| !covered.contains(v)).unwrap_or(0);
        return Err(Error::Input(format!("vertex {v} lies in no kept region")));
    }
    let kept = VertexSet::from(keep.to_vec());
    let rig = rig_graph(n, &sub);
    let by_vertex = incidence(n, &sub);
    let dropped: Vec<u32> = (0..all.len() as u32).filter(|&i| !kept.contains(i)).collect();
    let groups: Vec<Vec<u32>> = dropped.iter().map(|&i| hitting(&by_vertex, &all[i as usize])).collect();
    for (i, d) in weak_diameters(&rig, &groups).into_iter().enumerate() {
        if !d.within(k) {
            cert_fail!("dropped region {} meets kept regions of weak diameter {d} > {k}", dropped[i]);
        }
    }
    let x = match imp.x {
        Dist::Finite(x) => Dist::Finite(k * x),
        Dist::Infinite => Dist::Infinite,
    };
    Impression::certify(g, &sub, imp.parts.clone(), x, imp.y)
}

/// Constants and witnesses of the map from regions to parts.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiIsometryReport {
    /// Part chosen for each region.
    pub f: Vec<u32>,
    pub x: u32,
    pub y: u32,
    pub z: u32,
    /// `1/(x+z)`; absent when `x + z = 0`.
    #[serde(serialize_with = "opt_ratio_text")]
    pub lower_slope: Option<Q>,
    #[serde(serialize_with = "opt_ratio_text")]
    pub lower_offset: Option<Q>,
    #[serde(serialize_with = "ratio_text")]
    pub upper_slope: Q,
    pub cobounded_radius: u32,
    /// Largest `d_IM / d_RIG` over pairs at positive finite distance.
    #[serde(serialize_with = "ratio_text")]
    pub measured_expansion: Q,
    /// Largest `d_RIG / max(d_IM, 1)` over pairs at positive finite distance.
    #[serde(serialize_with = "ratio_text")]
    pub measured_contraction: Q,
    pub measured_radius: u32,
}

/// The map `H ↦ least-index part meeting H`, with every displayed inequality
/// checked over all region pairs against the certified `(x, y)` and `z`.
pub fn impression_map(
    g: &Graph,
    regions: &[VertexSet],
    imp: &Impression,
    z: u32,
) -> Result<QuasiIsometryReport> {
    let (Dist::Finite(x), Dist::Finite(y)) = (imp.x, imp.y) else {
        return Err(Error::Input("impression map needs finite parameters".into()));
    };
    let span = min_z_span(g, regions);
    if !span.z.within(z) {
        cert_fail!("regions only {}-span the host, not {z}", span.z);
    }
    let n = g.vertex_count();
    let owner = owners(n, &imp.parts)?;
    let f: Vec<u32> = regions
        .iter()
        .map(|h| h.iter().map(|v| owner[v as usize]).min().unwrap_or(u32::MAX))
        .collect();
    if let Some(i) = f.iter().position(|&p| p == u32::MAX) {
        cert_fail!("region {i} meets no part");
    }
    let rig = DistMatrix::new(&rig_graph(n, regions));
    let im = im_graph(g, &owner, imp.parts.len());
    let images: VertexSet = f.iter().copied().collect();
    let rows: BTreeMap<u32, Vec<Dist>> =
        images.as_slice().par_iter().map(|&p| (p, im.bfs(p))).collect();

    let (x64, y64, z64) = (x as u64, y as u64, z as u64);
    let pairs: Vec<(Q, Q)> = (0..regions.len() as u32)
        .into_par_iter()
        .map(|a| -> Result<(Q, Q)> {
            let mut expansion = Q::from_integer(0);
            let mut contraction = Q::from_integer(0);
            for b in 0..regions.len() as u32 {
                let dr = rig.get(a, b);
                let di = rows[&f[a as usize]][f[b as usize] as usize];
                match (dr, di) {
                    (Dist::Finite(dr), Dist::Finite(di)) => {
                        let (dr, di) = (dr as u64, di as u64);
                        if dr > (x64 + z64) * di + x64 {
                            cert_fail!("lower bound fails for regions {a}, {b}: d_RIG={dr}, d_IM={di}");
                        }
                        if di > 2 * y64 * dr {
                            cert_fail!("upper bound fails for regions {a}, {b}: d_RIG={dr}, d_IM={di}");
                        }
                        if dr > 0 {
                            expansion = expansion.max(Q::new(di, dr));
                            contraction = contraction.max(Q::new(dr, di.max(1)));
                        }
                    }
                    (Dist::Infinite, Dist::Infinite) => {}
                    _ => cert_fail!("regions {a}, {b}: d_RIG={dr} but d_IM={di}"),
                }
            }
            Ok((expansion, contraction))
        })
        .collect::<Result<_>>()?;

    let reach = multi_source_bfs(&im, images.iter());
    let mut radius = 0;
    for (m, d) in reach.iter().enumerate() {
        match d.finite() {
            Some(d) if d <= y => radius = radius.max(d),
            _ => cert_fail!("part {m} is at distance {d} > {y} from the image"),
        }
    }
    let lower = (x + z > 0).then(|| Q::new(1, x64 + z64));
    Ok(QuasiIsometryReport {
        f,
        x,
        y,
        z,
        lower_slope: lower,
        lower_offset: lower.map(|q| q * x64),
        upper_slope: Q::from_integer(2 * y64),
        cobounded_radius: y,
        measured_expansion: pairs.iter().map(|p| p.0).max().unwrap_or_default(),
        measured_contraction: pairs.iter().map(|p| p.1).max().unwrap_or_default(),
        measured_radius: radius,
    })
}

/// Constants `(x1, x2, x3, x4)` of a coarse map `f: V(G) -> V(H)` with
/// `d_G/x1 - x2/x1 <= d_H(f u, f v) <= x3 d_G` and image radius `x4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoarseConstants {
    pub x1: u64,
    pub x2: u64,
    pub x3: u64,
    pub x4: u64,
}

impl CoarseConstants {
    /// Denominator of the lower bound after bijection. A zero radius is
    /// treated as one so the bound stays finite.
    pub fn lower_divisor(&self) -> u64 {
        2 * self.x4.max(1) * (self.x1 + self.x2)
    }

    pub fn upper_factor(&self) -> u64 {
        self.x3 + 2
    }
}

/// Output of [`quasibi`].
#[derive(Clone, Debug)]
pub struct QuasiBijection {
    pub map: PlaneMap,
    /// Vertex of `map` assigned to each source vertex.
    pub f_prime: Vec<u32>,
    /// Vertex of `map` that each vertex of the target collapsed into.
    pub collapse: Vec<u32>,
    /// Edges of the target contracted onto the image.
    pub forest: Vec<u32>,
    pub forest_depth: u32,
    pub max_expansion: Q,
    pub max_contraction: Q,
    /// Pairs breaking `d_H(f u, f v) <= 2·x4·d'`; reported only.
    pub intermediate_misses: usize,
}

/// Adds pendants and contracts a forest so that `f` becomes a bijection,
/// checking the hypotheses first and the resulting bounds afterwards.
pub fn quasibi(
    g: &Graph,
    h: &PlaneMap,
    f: &[u32],
    c: CoarseConstants,
) -> Result<QuasiBijection> {
    let n = g.vertex_count();
    if f.len() != n {
        return Err(Error::Input(format!("map has {} entries for {n} vertices", f.len())));
    }
    let hg = h.graph();
    let dg = DistMatrix::new(g);
    let image: VertexSet = f.iter().copied().collect();
    let rows: BTreeMap<u32, Vec<Dist>> =
        image.as_slice().par_iter().map(|&a| (a, hg.bfs(a))).collect();
    let dh = |u: u32, v: u32| rows[&f[u as usize]][f[v as usize] as usize];

    (0..n as u32).into_par_iter().try_for_each(|u| -> Result<()> {
        for v in 0..n as u32 {
            match (dg.get(u, v), dh(u, v)) {
                (Dist::Finite(a), Dist::Finite(b)) => {
                    let (a, b) = (a as u64, b as u64);
                    if a > c.x1 * b + c.x2 || b > c.x3 * a {
                        cert_fail!("hypothesis fails at {u}, {v}: d_G={a}, d_H={b}");
                    }
                }
                (Dist::Infinite, Dist::Infinite) => {}
                (a, b) => cert_fail!("hypothesis fails at {u}, {v}: d_G={a}, d_H={b}"),
            }
        }
        Ok(())
    })?;

    // BFS forest from the image; each vertex hangs from its least-index
    // neighbour one layer closer.
    let depth = multi_source_bfs(&hg, image.iter());
    let mut forest = Vec::new();
    let mut forest_depth = 0;
    for v in 0..h.vertex_count() as u32 {
        let Some(dv) = depth[v as usize].finite() else {
            cert_fail!("vertex {v} of the target is not reachable from the image");
        };
        if dv as u64 > c.x4 {
            cert_fail!("vertex {v} is at distance {dv} > {} from the image", c.x4);
        }
        forest_depth = forest_depth.max(dv);
        if dv == 0 {
            continue;
        }
        let parent = hg
            .neighbors(v)
            .iter()
            .copied()
            .find(|&w| depth[w as usize] == Dist::Finite(dv - 1))
            .expect("BFS layer has a parent");
        let edge = h
            .rotation(v)
            .iter()
            .filter(|&&d| h.target(d) == parent)
            .map(|d| d.edge())
            .min()
            .expect("graph edge comes from the map");
        forest.push(edge);
    }

    let mut preimage: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (u, &a) in f.iter().enumerate() {
        preimage.entry(a).or_default().push(u as u32);
    }
    let mut star = h.clone();
    let mut next_label = h.labels().last().map_or(0, |&l| l + 1);
    let mut assigned = vec![0u32; n];
    for (&a, us) in &preimage {
        assigned[us[0] as usize] = a;
        for &u in &us[1..] {
            let (m, w) = star.add_pendant(a, next_label)?;
            star = m;
            next_label += 1;
            assigned[u as usize] = w;
        }
    }
    let (map, vertex_map) = star.contract_forest(&forest, &image)?;
    let f_prime: Vec<u32> = assigned.iter().map(|&w| vertex_map[w as usize]).collect();
    let collapse = vertex_map[..h.vertex_count()].to_vec();
    if map.vertex_count() != n {
        cert_fail!("bijection target has {} vertices, source {n}", map.vertex_count());
    }
    let mut hit = vec![false; n];
    for &w in &f_prime {
        if std::mem::replace(&mut hit[w as usize], true) {
            cert_fail!("vertex {w} is hit twice");
        }
    }
    let out_graph = map.graph();
    for u in 0..n {
        let base = collapse[f[u] as usize];
        if f_prime[u] != base && !out_graph.has_edge(f_prime[u], base) {
            cert_fail!("source vertex {u} is neither on nor next to its collapsed image");
        }
    }

    let out = DistMatrix::new(&out_graph);
    let results: Vec<(Q, Q, usize)> = (0..n as u32)
        .into_par_iter()
        .map(|u| -> Result<(Q, Q, usize)> {
            let (mut exp, mut con, mut misses) = (Q::from_integer(0), Q::from_integer(0), 0);
            for v in 0..n as u32 {
                let d_new = out.get(f_prime[u as usize], f_prime[v as usize]);
                match (dg.get(u, v), d_new) {
                    (Dist::Finite(a), Dist::Finite(b)) => {
                        let (a, b) = (a as u64, b as u64);
                        if a > c.lower_divisor() * b || b > c.upper_factor() * a {
                            cert_fail!("bijection bound fails at {u}, {v}: d_G={a}, d'={b}");
                        }
                        let b_h = dh(u, v).finite().expect("hypothesis checked") as u64;
                        if b > b_h + 2 {
                            cert_fail!("contraction lengthened a path at {u}, {v}");
                        }
                        if b_h > 2 * c.x4.max(1) * b {
                            misses += 1;
                        }
                        if a > 0 {
                            exp = exp.max(Q::new(b, a));
                            con = con.max(Q::new(a, b));
                        }
                    }
                    (Dist::Infinite, Dist::Infinite) => {}
                    (a, b) => cert_fail!("bijection bound fails at {u}, {v}: d_G={a}, d'={b}"),
                }
            }
            Ok((exp, con, misses))
        })
        .collect::<Result<_>>()?;
    Ok(QuasiBijection {
        map,
        f_prime,
        collapse,
        forest,
        forest_depth,
        max_expansion: results.iter().map(|r| r.0).max().unwrap_or_default(),
        max_contraction: results.iter().map(|r| r.1).max().unwrap_or_default(),
        intermediate_misses: results.iter().map(|r| r.2).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::fixtures::grid;

    fn sets(v: &[&[u32]]) -> Vec<VertexSet> {
        v.iter().map(|s| s.to_vec().into()).collect()
    }

    fn path(n: u32) -> Graph {
        Graph::from_edges(n as usize, (0..n - 1).map(|i| (i, i + 1)))
    }

    fn edge_family(g: &Graph) -> Vec<VertexSet> {
        g.edges().map(|(a, b)| vec![a, b].into()).collect()
    }

    #[test]
    fn rig_of_overlapping_edges() {
        let r = build_rig(&path(3), &sets(&[&[0, 1], &[1, 2]])).unwrap();
        assert_eq!(r.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        let r = build_rig(&path(4), &sets(&[&[0], &[2, 3]])).unwrap();
        assert_eq!(r.edge_count(), 0);
    }

    #[test]
    fn rig_rejects_disconnected_region() {
        assert!(matches!(build_rig(&path(3), &sets(&[&[0, 2]])), Err(Error::Input(_))));
    }

    #[test]
    fn grid_edge_family_rig_is_edge_incidence() {
        let g = grid(3).graph();
        let fam = edge_family(&g);
        assert_eq!(fam.len(), 12);
        let r = build_rig(&g, &fam).unwrap();
        for (i, a) in fam.iter().enumerate() {
            for (j, b) in fam.iter().enumerate() {
                if i != j {
                    assert_eq!(r.has_edge(i as u32, j as u32), a.intersects(b));
                }
            }
        }
    }

    #[test]
    fn im_cases() {
        let two = build_im(&path(2), &sets(&[&[0], &[1]])).unwrap();
        assert_eq!(two.edge_count(), 1);
        let g = grid(3).graph();
        let singletons: Vec<VertexSet> = (0..9).map(VertexSet::singleton).collect();
        assert_eq!(build_im(&g, &singletons).unwrap(), g);
        let rows = build_im(&g, &sets(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8]])).unwrap();
        assert_eq!(rows.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(matches!(build_im(&g, &sets(&[&[0, 1], &[1, 2]])), Err(Error::Input(_))));
    }

    #[test]
    fn z_span_cases() {
        let g = grid(3).graph();
        assert_eq!(min_z_span(&g, &edge_family(&g)).z, Dist::ZERO);
        let p = path(3);
        let singles = sets(&[&[0], &[1], &[2]]);
        // Disjoint singletons never meet, so no finite chain joins them.
        assert_eq!(min_z_span(&p, &singles).z, Dist::Infinite);
        let linked = sets(&[&[0], &[1], &[2], &[0, 1, 2]]);
        assert_eq!(min_z_span(&p, &linked).z, Dist::ZERO);
        let chain = sets(&[&[0], &[0, 1], &[1], &[2], &[1, 2]]);
        assert_eq!(min_z_span(&p, &chain).z, Dist::ZERO);
        let r = min_z_span(&p, &sets(&[&[0, 1]]));
        assert_eq!((r.z, r.uncovered), (Dist::Infinite, Some(2)));
    }

    #[test]
    fn z_span_counts_rig_steps() {
        // Edge 1-2 lies in no region; {1,3} and {2,3} meet at 3.
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (1, 3), (2, 3)]);
        let fam = sets(&[&[0, 1], &[1, 3], &[2, 3]]);
        assert_eq!(min_z_span(&g, &fam).z, Dist::Finite(1));
    }

    #[test]
    fn singleton_impression_is_zero() {
        let g = grid(3).graph();
        let singles: Vec<VertexSet> = (0..9).map(VertexSet::singleton).collect();
        assert_eq!(verify_impression(&g, &singles, &singles).unwrap(), (Dist::ZERO, Dist::ZERO));
    }

    #[test]
    fn impression_cover_failure_names_vertex() {
        let g = path(3);
        let err = verify_impression(&g, &sets(&[&[0, 1, 2]]), &sets(&[&[0, 1]])).unwrap_err();
        assert!(err.to_string().contains("vertex 2"));
    }

    #[test]
    fn grid_rows_impression() {
        let g = grid(3).graph();
        let fam = edge_family(&g);
        let rows = sets(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8]]);
        // A row meets its two horizontal edges and the vertical edges above
        // and below it; the vertical edges 0-3 and 2-5 are three RIG steps apart.
        assert_eq!(verify_impression(&g, &fam, &rows).unwrap(), (Dist::Finite(3), Dist::Finite(1)));
    }

    #[test]
    fn transfer_scales_certificate() {
        let g = grid(3).graph();
        let fam = edge_family(&g);
        let singles: Vec<VertexSet> = (0..9).map(VertexSet::singleton).collect();
        let imp = Impression::certify(&g, &fam, singles, Dist::Finite(70), Dist::Finite(9)).unwrap();
        let all: Vec<u32> = (0..fam.len() as u32).collect();
        let t = transfer_impression(&g, &fam, &imp, &all, 11).unwrap();
        assert_eq!((t.x, t.y), (Dist::Finite(770), Dist::Finite(9)));
        assert_eq!(t.measured_x, imp.measured_x);

        let mut bigger = fam.clone();
        bigger.push((0..9).collect());
        let imp = Impression::certify(&g, &bigger, imp.parts.clone(), Dist::Finite(9242), Dist::Finite(80))
            .unwrap();
        let t = transfer_impression(&g, &bigger, &imp, &all, 8).unwrap();
        assert_eq!(t.x, Dist::Finite(73936));
        // The whole grid meets edges three RIG steps apart.
        assert!(transfer_impression(&g, &bigger, &imp, &all, 3).is_ok());
        assert!(matches!(transfer_impression(&g, &bigger, &imp, &all, 2), Err(Error::Certificate(_))));
    }

    #[test]
    fn impression_map_constants() {
        let g = grid(3).graph();
        let fam = edge_family(&g);
        let singles: Vec<VertexSet> = (0..9).map(VertexSet::singleton).collect();
        let imp =
            Impression::certify(&g, &fam, singles, Dist::Finite(73936), Dist::Finite(80)).unwrap();
        let r = impression_map(&g, &fam, &imp, 8).unwrap();
        assert_eq!(r.lower_slope, Some(Q::new(1, 73944)));
        assert_eq!(r.lower_offset, Some(Q::new(73936, 73944)));
        assert_eq!(r.upper_slope, Q::from_integer(160));
        assert_eq!(r.cobounded_radius, 80);
        // f sends an edge to its lower endpoint.
        assert_eq!(r.f[0], 0);
    }

    #[test]
    fn impression_map_measured_grid() {
        let g = grid(3).graph();
        let fam = edge_family(&g);
        let singles: Vec<VertexSet> = (0..9).map(VertexSet::singleton).collect();
        let (mx, my) = verify_impression(&g, &fam, &singles).unwrap();
        let imp = Impression::certify(&g, &fam, singles, mx, my).unwrap();
        let r = impression_map(&g, &fam, &imp, 0).unwrap();
        assert_eq!((r.x, r.y), (1, 1));
        assert!(r.measured_expansion <= Q::from_integer(2));
    }

    #[test]
    fn impression_map_rejects_bad_certificate() {
        let g = grid(3).graph();
        let fam = edge_family(&g);
        let rows = sets(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 8]]);
        // Under-certified x must trip the lower bound somewhere or fail certify.
        let imp = Impression { parts: rows, x: Dist::ZERO, y: Dist::Finite(1), measured_x: Dist::ZERO, measured_y: Dist::ZERO };
        assert!(matches!(impression_map(&g, &fam, &imp, 0), Err(Error::Certificate(_))));
    }

    #[test]
    fn quasibi_identity() {
        let h = grid(3);
        let g = h.graph();
        let f: Vec<u32> = (0..9).collect();
        let c = CoarseConstants { x1: 1, x2: 0, x3: 1, x4: 0 };
        let q = quasibi(&g, &h, &f, c).unwrap();
        assert_eq!(q.map.vertex_count(), 9);
        assert_eq!(q.forest, Vec::<u32>::new());
        assert_eq!(q.max_expansion, Q::from_integer(1));
        assert_eq!(q.max_contraction, Q::from_integer(1));
    }

    #[test]
    fn quasibi_collapses_and_adds_pendants() {
        // Source: path of 4. Target: path of 3 with f = 0,0,1,2 and a spare
        // vertex hanging off 2 that must be contracted away.
        let g = path(4);
        let h = PlaneMap::from_coordinates(
            &[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]],
            &[[0, 1], [1, 2], [2, 3]],
        )
        .unwrap();
        let f = vec![0, 0, 1, 2];
        let c = CoarseConstants { x1: 2, x2: 2, x3: 1, x4: 1 };
        let q = quasibi(&g, &h, &f, c).unwrap();
        assert_eq!(q.map.vertex_count(), 4);
        assert_eq!(q.forest.len(), 1);
        let mut seen = q.f_prime.clone();
        seen.sort();
        assert_eq!(seen, vec![0, 1, 2, 3]);
        assert_eq!(q.collapse[3], q.collapse[2]);
    }

    #[test]
    fn quasibi_rejects_false_hypothesis() {
        let g = path(3);
        let h = PlaneMap::from_coordinates(&[[0.0, 0.0], [1.0, 0.0]], &[[0, 1]]).unwrap();
        let c = CoarseConstants { x1: 1, x2: 0, x3: 1, x4: 1 };
        assert!(matches!(quasibi(&g, &h, &[0, 1, 1], c), Err(Error::Certificate(_))));
    }

    #[test]
    fn quasibi_rejects_far_vertices() {
        let g = Graph::empty(1);
        let h = PlaneMap::from_coordinates(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], &[[0, 1], [1, 2]])
            .unwrap();
        let c = CoarseConstants { x1: 1, x2: 0, x3: 1, x4: 1 };
        assert!(matches!(quasibi(&g, &h, &[0], c), Err(Error::Certificate(_))));
    }

    #[test]
    fn weak_diameters_match_pairwise() {
        let g = grid(3).graph();
        let groups = vec![vec![0, 8], vec![4], vec![0, 1, 2], vec![]];
        assert_eq!(
            weak_diameters(&g, &groups),
            vec![Dist::Finite(4), Dist::ZERO, Dist::Finite(2), Dist::ZERO]
        );
    }
}
