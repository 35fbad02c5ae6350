//! Planar graphs with edge lengths in `(0, 1]`: radius-one balls give a
//! string graph on the same vertices, which the main pipeline planarizes.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::CheckedAdd;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{LOWER_DIVISOR, METRIC_LOWER_DIVISOR, UPPER_FACTOR};
use crate::error::{cert_fail, Error, Result};
use crate::planarize::{planarize_full, Planarized};
use crate::plane::{Dart, Dist, DistMatrix, Graph, MapFile, PlaneMap, VertexSet};
use crate::rig::{self, Q};

/// Exact edge length or distance.
pub type Len = Ratio<u64>;

#[derive(Clone, Debug)]
pub struct MetricPlanarGraph {
    pub map: PlaneMap,
    pub lengths: Vec<Len>,
}

#[derive(Serialize, Deserialize)]
struct MetricFile {
    #[serde(flatten)]
    map: MapFile,
    lengths: Vec<String>,
}

impl MetricPlanarGraph {
    pub fn new(map: PlaneMap, lengths: Vec<Len>) -> Result<Self> {
        if lengths.len() != map.edge_count() {
            return Err(Error::Input(format!("{} lengths for {} edges", lengths.len(), map.edge_count())));
        }
        let one = Len::from_integer(1);
        if let Some(e) = lengths.iter().position(|l| *l.numer() == 0 || *l > one) {
            return Err(Error::Input(format!("length {} of edge {e} is outside (0, 1]", lengths[e])));
        }
        Ok(MetricPlanarGraph { map, lengths })
    }

    pub fn to_json(&self) -> Result<String> {
        let file = MetricFile {
            map: MapFile::from(&self.map),
            lengths: self.lengths.iter().map(Len::to_string).collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MetricFile = serde_json::from_str(text)?;
        let lengths = file
            .lengths
            .iter()
            .map(|s| Len::from_str(s).map_err(|_| Error::Input(format!("bad length {s:?}"))))
            .collect::<Result<_>>()?;
        Self::new(PlaneMap::try_from(file.map)?, lengths)
    }

    /// Exact single-source distances; `None` when unreachable.
    pub fn distances_from(&self, source: u32) -> Result<Vec<Option<Len>>> {
        let mut dist: Vec<Option<Len>> = vec![None; self.map.vertex_count()];
        let mut heap = BinaryHeap::from([Reverse((Len::from_integer(0), source))]);
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[v as usize].is_some() {
                continue;
            }
            dist[v as usize] = Some(d);
            for &dart in self.map.rotation(v) {
                let w = self.map.target(dart);
                if dist[w as usize].is_none() {
                    let nd = d
                        .checked_add(&self.lengths[dart.edge() as usize])
                        .ok_or_else(|| Error::Input("length arithmetic overflows".into()))?;
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        Ok(dist)
    }

    pub fn all_distances(&self) -> Result<Vec<Vec<Option<Len>>>> {
        (0..self.map.vertex_count() as u32).into_par_iter().map(|s| self.distances_from(s)).collect()
    }
}

/// Ball regions on the subdivided host.
#[derive(Clone, Debug)]
pub struct BallRepresentation {
    pub map: PlaneMap,
    /// Breakpoints of each original edge, measured from its first endpoint.
    pub breakpoints: Vec<Vec<Len>>,
    /// `H_u` for every original vertex `u`.
    pub regions: Vec<VertexSet>,
}

/// Replaces every edge by a path through its breakpoints, keeping the
/// embedding. New vertices follow the old ones, edge by edge.
fn subdivide(map: &PlaneMap, cuts: &[usize]) -> Result<PlaneMap> {
    let n = map.vertex_count();
    let mut labels = map.labels().to_vec();
    let mut next_label = labels.last().map_or(0, |&l| l + 1);
    let mut edges = Vec::new();
    let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); n];
    // First and last new dart of each old edge, pointing along the edge.
    let mut ends = Vec::with_capacity(map.edge_count());
    for (e, &[a, b]) in map.edges().iter().enumerate() {
        let mut prev = a;
        let first = Dart::new(edges.len() as u32, false);
        for _ in 0..cuts[e] {
            let s = rot.len() as u32;
            rot.push(Vec::new());
            labels.push(next_label);
            next_label += 1;
            let d = Dart::new(edges.len() as u32, false);
            edges.push([prev, s]);
            if prev != a {
                rot[prev as usize].push(d);
            }
            rot[s as usize].push(d.rev());
            prev = s;
        }
        let last = Dart::new(edges.len() as u32, false);
        edges.push([prev, b]);
        if prev != a {
            rot[prev as usize].push(last);
        }
        ends.push((first, last));
    }
    let lift = |d: Dart| if d.0 & 1 == 0 { ends[d.edge() as usize].0 } else { ends[d.edge() as usize].1.rev() };
    for (v, r) in rot.iter_mut().enumerate().take(n) {
        *r = map.rotation(v as u32).iter().map(|&d| lift(d)).collect();
    }
    let outer: Vec<Dart> = map.outer_refs().into_iter().map(lift).collect();
    PlaneMap::from_parts(labels, edges, rot, &outer)
}

fn in_ball(da: Option<Len>, db: Option<Len>, x: Len, l: Len) -> bool {
    let one = Len::from_integer(1);
    da.is_some_and(|d| d + x <= one) || db.is_some_and(|d| d + (l - x) <= one)
}

/// The string graph of radius-one balls and its representation. Adjacency
/// follows `0 < d ≤ 2`; the representation's RIG is checked to agree.
pub fn metric_to_string(h: &MetricPlanarGraph) -> Result<(Graph, BallRepresentation)> {
    let n = h.map.vertex_count();
    let dist = h.all_distances()?;
    let one = Len::from_integer(1);
    let two = Len::from_integer(2);
    let s = Graph::from_edges(
        n,
        (0..n as u32).flat_map(|u| {
            let dist = &dist;
            (u + 1..n as u32).filter(move |&v| dist[u as usize][v as usize].is_some_and(|d| d <= two)).map(move |v| (u, v))
        }),
    );

    let mut breakpoints = Vec::with_capacity(h.map.edge_count());
    for (e, &[a, b]) in h.map.edges().iter().enumerate() {
        let l = h.lengths[e];
        let mut cuts = BTreeSet::new();
        for row in &dist {
            if let Some(d) = row[a as usize].filter(|d| *d < one) {
                cuts.insert(one - d);
            }
            if let Some(d) = row[b as usize].filter(|d| *d < one && one - *d < l) {
                cuts.insert(l - (one - d));
            }
        }
        breakpoints.push(cuts.into_iter().filter(|x| *x > Len::from_integer(0) && *x < l).collect::<Vec<_>>());
    }
    let counts: Vec<usize> = breakpoints.iter().map(Vec::len).collect();
    let map = subdivide(&h.map, &counts)?;
    let regions: Vec<VertexSet> = (0..n)
        .map(|u| {
            let row = &dist[u];
            let mut set: Vec<u32> = (0..n as u32).filter(|&v| row[v as usize].is_some_and(|d| d <= one)).collect();
            let mut next = n as u32;
            for (e, &[a, b]) in h.map.edges().iter().enumerate() {
                for &x in &breakpoints[e] {
                    if in_ball(row[a as usize], row[b as usize], x, h.lengths[e]) {
                        set.push(next);
                    }
                    next += 1;
                }
            }
            set.into()
        })
        .collect();
    let g = map.graph();
    rig::check_regions(&g, &regions)?;
    rig::check_spanning(&g, &regions)?;
    let r = rig::rig_graph(g.vertex_count(), &regions);
    for u in 0..n as u32 {
        if r.neighbors(u) != s.neighbors(u) {
            cert_fail!("ball of {u} meets {:?}, distance rule gives {:?}", r.neighbors(u), s.neighbors(u));
        }
    }
    Ok((s, BallRepresentation { map, breakpoints, regions }))
}

/// Extremes of `d_S / d_H` over pairs of distinct vertices.
#[derive(Clone, Debug, Serialize)]
pub struct MetricDistortion {
    #[serde(serialize_with = "crate::rig::ratio_text")]
    pub min_ratio: Q,
    #[serde(serialize_with = "crate::rig::ratio_text")]
    pub max_ratio: Q,
}

/// Checks `d_H/2 ≤ d_S ≤ d_H + 1` for every pair.
pub fn metric_distortion_check(h: &MetricPlanarGraph, s: &Graph) -> Result<MetricDistortion> {
    let dist = h.all_distances()?;
    let ds = DistMatrix::new(s);
    let mut lo: Option<Q> = None;
    let mut hi = Q::from_integer(0);
    for u in 0..s.vertex_count() as u32 {
        for v in 0..s.vertex_count() as u32 {
            match (dist[u as usize][v as usize], ds.get(u, v)) {
                (Some(dh), Dist::Finite(d)) => {
                    let d = Len::from_integer(d as u64);
                    if dh > d * 2 || d > dh + 1 {
                        cert_fail!("pair {u}, {v}: d_H = {dh}, d_S = {d}");
                    }
                    if u != v {
                        let r = d / dh;
                        lo = Some(lo.map_or(r, |q| q.min(r)));
                        hi = hi.max(r);
                    }
                }
                (None, Dist::Infinite) => {}
                (a, b) => cert_fail!("pair {u}, {v}: d_H = {a:?}, d_S = {b}"),
            }
        }
    }
    Ok(MetricDistortion { min_ratio: lo.unwrap_or_default(), max_ratio: hi })
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricReport {
    pub representation: MetricDistortion,
    pub lower_divisor: u64,
    pub upper_factor: u64,
    /// Pairs where `d_out > 162·d_H + 1`; the chain only guarantees
    /// `162·(d_H + 1)`.
    pub stated_upper_misses: usize,
    #[serde(serialize_with = "crate::rig::ratio_text")]
    pub max_expansion: Q,
    #[serde(serialize_with = "crate::rig::ratio_text")]
    pub max_contraction: Q,
}

/// Balls, then the string pipeline, then the composed bounds.
pub fn metric_pipeline(h: &MetricPlanarGraph, audit: bool) -> Result<(Planarized, MetricReport)> {
    debug_assert_eq!(METRIC_LOWER_DIVISOR, 2 * LOWER_DIVISOR);
    let (s, rep) = metric_to_string(h)?;
    let representation = metric_distortion_check(h, &s)?;
    let out = planarize_full(&rep.map, &rep.regions, audit)?;
    let dist = h.all_distances()?;
    let dout = DistMatrix::new(&out.map.graph());
    let n = h.map.vertex_count() as u32;
    let mut misses = 0;
    let mut exp = Q::from_integer(0);
    let mut con = Q::from_integer(0);
    for u in 0..n {
        for v in 0..n {
            let (a, b) = (out.bijection[u as usize], out.bijection[v as usize]);
            match (dist[u as usize][v as usize], dout.get(a, b)) {
                (Some(dh), Dist::Finite(d)) => {
                    let d = Len::from_integer(d as u64);
                    if dh > d * METRIC_LOWER_DIVISOR || d > (dh + 1) * UPPER_FACTOR {
                        cert_fail!("pair {u}, {v}: d_H = {dh}, d_out = {d}");
                    }
                    if d > dh * UPPER_FACTOR + 1 {
                        misses += 1;
                    }
                    if u != v {
                        exp = exp.max(d / dh);
                        con = con.max(dh / d);
                    }
                }
                (None, Dist::Infinite) => {}
                (a, b) => cert_fail!("pair {u}, {v}: d_H = {a:?}, d_out = {b}"),
            }
        }
    }
    let report = MetricReport {
        representation,
        lower_divisor: METRIC_LOWER_DIVISOR,
        upper_factor: UPPER_FACTOR,
        stated_upper_misses: misses,
        max_expansion: exp,
        max_contraction: con,
    };
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::fixtures::triangle;

    fn path(lengths: &[Len]) -> MetricPlanarGraph {
        let k = lengths.len() + 1;
        let pts: Vec<[f64; 2]> = (0..k).map(|i| [i as f64, 0.0]).collect();
        let edges: Vec<[u32; 2]> = (0..k as u32 - 1).map(|i| [i, i + 1]).collect();
        MetricPlanarGraph::new(PlaneMap::from_coordinates(&pts, &edges).unwrap(), lengths.to_vec()).unwrap()
    }

    fn q(p: u64, d: u64) -> Len {
        Len::new(p, d)
    }

    #[test]
    fn unit_triangle_is_complete() {
        let h = MetricPlanarGraph::new(triangle(), vec![q(1, 1); 3]).unwrap();
        let (s, _) = metric_to_string(&h).unwrap();
        assert_eq!(s.edge_count(), 3);
    }

    #[test]
    fn unit_path_adjacency() {
        let h = path(&[q(1, 1); 3]);
        let (s, rep) = metric_to_string(&h).unwrap();
        assert!(s.has_edge(0, 2) && !s.has_edge(0, 3));
        // Unit edges need no breakpoints.
        assert!(rep.breakpoints.iter().all(Vec::is_empty));
        metric_distortion_check(&h, &s).unwrap();
    }

    #[test]
    fn short_path_balls_overlap_mid_edge() {
        let h = path(&[q(9, 10), q(9, 10)]);
        let (s, rep) = metric_to_string(&h).unwrap();
        assert!(s.has_edge(0, 2));
        // From 0 the ball ends at 1/10 into the second edge; from 2 at 8/10.
        assert_eq!(rep.breakpoints[0], vec![q(1, 10), q(8, 10)]);
        assert_eq!(rep.breakpoints[1], vec![q(1, 10), q(8, 10)]);
        assert!(rep.regions[0].intersects(&rep.regions[2]));
    }

    #[test]
    fn long_unit_path_distances() {
        let k = 9;
        let h = path(&vec![q(1, 1); k - 1]);
        let (s, _) = metric_to_string(&h).unwrap();
        let d = DistMatrix::new(&s);
        assert_eq!(d.get(0, k as u32 - 1), Dist::Finite(((k - 1) as u32).div_ceil(2)));
        metric_distortion_check(&h, &s).unwrap();
    }

    #[test]
    fn lengths_out_of_range_rejected() {
        assert!(MetricPlanarGraph::new(triangle(), vec![q(1, 1), q(3, 2), q(1, 2)]).is_err());
        assert!(MetricPlanarGraph::new(triangle(), vec![q(1, 1), q(0, 1), q(1, 2)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let h = path(&[q(1, 3), q(2, 5)]);
        let text = h.to_json().unwrap();
        let back = MetricPlanarGraph::from_json(&text).unwrap();
        assert_eq!(back.to_json().unwrap(), text);
        assert_eq!(back.lengths, vec![q(1, 3), q(2, 5)]);
    }

    #[test]
    fn small_pipeline() {
        let h = path(&[q(1, 2), q(1, 1), q(1, 3), q(1, 1)]);
        let (out, report) = metric_pipeline(&h, true).unwrap();
        assert_eq!(out.map.vertex_count(), 5);
        assert_eq!(report.lower_divisor, 47_321_600);
    }
}
