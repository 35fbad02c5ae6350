//! Seeded instance generators, corpora and the brute-force distortion
//! oracle.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constants::{LOWER_DIVISOR, METRIC_LOWER_DIVISOR, UPPER_FACTOR};
use crate::error::{cert_fail, Error, Result};
use crate::metricgraph::{Len, MetricPlanarGraph, MetricReport};
use crate::planarize::{Constants, Planarized};
use crate::plane::{Dist, DistMatrix, Graph, MapFile, PlaneMap, VertexSet};
use crate::rig::{self, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    GridPolylines { strings: u32, grid: u32, seed: u64 },
    RandomTriangulationFamily { points: u32, regions: u32, seed: u64 },
    FEll { ell: u32 },
    MetricRandom { points: u32, seed: u64 },
    /// Every vertex on the outer face; for the layering corpus.
    OuterplanarRandom { vertices: u32, regions: u32, seed: u64 },
    /// Every region holds an outer vertex; for the outerstring corpus.
    OuterstringRandom { points: u32, regions: u32, seed: u64 },
    /// A cycle with its edges as regions.
    EdgeCycle { len: u32 },
    /// A `2 × len` ladder with its edges as regions.
    EdgeLadder { len: u32 },
}

impl InstanceSpec {
    pub fn name(&self) -> String {
        match self {
            InstanceSpec::GridPolylines { strings, grid, seed } => format!("polylines-{strings}x{grid}-{seed}"),
            InstanceSpec::RandomTriangulationFamily { points, regions, seed } => {
                format!("triangulation-{points}-{regions}-{seed}")
            }
            InstanceSpec::FEll { ell } => format!("f-ell-{ell}"),
            InstanceSpec::MetricRandom { points, seed } => format!("metric-{points}-{seed}"),
            InstanceSpec::OuterplanarRandom { vertices, regions, seed } => {
                format!("outerplanar-{vertices}-{regions}-{seed}")
            }
            InstanceSpec::OuterstringRandom { points, regions, seed } => {
                format!("outerstring-{points}-{regions}-{seed}")
            }
            InstanceSpec::EdgeCycle { len } => format!("cycle-{len}"),
            InstanceSpec::EdgeLadder { len } => format!("ladder-{len}"),
        }
    }
}

/// A host with its regions.
#[derive(Clone, Debug)]
pub struct Instance {
    pub map: PlaneMap,
    pub regions: Vec<VertexSet>,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    map: MapFile,
    regions: Vec<Vec<u32>>,
}

impl Instance {
    /// Checks that every region is connected and the regions span the host.
    pub fn audit(&self) -> Result<()> {
        let g = self.map.graph();
        rig::check_regions(&g, &self.regions)?;
        rig::check_spanning(&g, &self.regions)?;
        let covered = VertexSet::union_all(&self.regions);
        if covered.len() != self.map.vertex_count() {
            return Err(Error::Input("some vertex lies in no region".into()));
        }
        Ok(())
    }

    pub fn string_graph(&self) -> Graph {
        rig::rig_graph(self.map.vertex_count(), &self.regions)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = InstanceFile {
            map: MapFile::from(&self.map),
            regions: self.regions.iter().map(|r| r.as_slice().to_vec()).collect(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        Ok(Instance { map: PlaneMap::try_from(file.map)?, regions: file.regions.into_iter().map(VertexSet::from).collect() })
    }
}

#[derive(Clone, Debug)]
pub enum Generated {
    Regions(Instance),
    Metric(MetricPlanarGraph),
}

impl Generated {
    pub fn to_json(&self) -> Result<String> {
        match self {
            Generated::Regions(i) => i.to_json(),
            Generated::Metric(m) => m.to_json(),
        }
    }
}

pub fn generate(spec: &InstanceSpec) -> Result<Generated> {
    let out = match *spec {
        InstanceSpec::GridPolylines { strings, grid, seed } => Generated::Regions(gen_grid_polylines(strings, grid, seed)?),
        InstanceSpec::RandomTriangulationFamily { points, regions, seed } => {
            Generated::Regions(gen_triangulation_family(points, regions, seed, false)?)
        }
        InstanceSpec::FEll { ell } => Generated::Regions(gen_f_ell(ell)?),
        InstanceSpec::MetricRandom { points, seed } => Generated::Metric(gen_metric_random(points, seed)?),
        InstanceSpec::OuterplanarRandom { vertices, regions, seed } => {
            Generated::Regions(gen_outerplanar(vertices, regions, seed)?)
        }
        InstanceSpec::OuterstringRandom { points, regions, seed } => {
            Generated::Regions(gen_triangulation_family(points, regions, seed, true)?)
        }
        InstanceSpec::EdgeCycle { len } => Generated::Regions(gen_edge_cycle(len)?),
        InstanceSpec::EdgeLadder { len } => Generated::Regions(gen_edge_ladder(len)?),
    };
    if let Generated::Regions(i) = &out {
        i.audit()?;
    }
    Ok(out)
}

/// Host and regions from lattice polylines; each polyline is a list of
/// lattice points joined by unit steps.
pub fn polylines_instance(lines: &[Vec<(i32, i32)>]) -> Result<Instance> {
    let mut index: BTreeMap<(i32, i32), u32> = BTreeMap::new();
    for p in lines.iter().flatten() {
        index.insert((p.1, p.0), 0);
    }
    if index.is_empty() {
        return Err(Error::Input("no lattice points".into()));
    }
    let points: Vec<[f64; 2]> = index.keys().map(|&(y, x)| [x as f64, y as f64]).collect();
    for (i, v) in index.values_mut().enumerate() {
        *v = i as u32;
    }
    let id = |p: &(i32, i32)| index[&(p.1, p.0)];
    let mut edges = BTreeSet::new();
    let mut regions = Vec::new();
    for line in lines {
        for w in line.windows(2) {
            if (w[0].0 - w[1].0).abs() + (w[0].1 - w[1].1).abs() != 1 {
                return Err(Error::Input(format!("polyline step {:?} -> {:?} is not a unit step", w[0], w[1])));
            }
            let (a, b) = (id(&w[0]), id(&w[1]));
            edges.insert([a.min(b), a.max(b)]);
        }
        regions.push(line.iter().map(id).collect::<VertexSet>());
    }
    let edges: Vec<[u32; 2]> = edges.into_iter().collect();
    Ok(Instance { map: PlaneMap::from_coordinates(&points, &edges)?, regions })
}

/// Random lattice walks on a `grid × grid` lattice.
pub fn gen_grid_polylines(strings: u32, grid: u32, seed: u64) -> Result<Instance> {
    if strings == 0 || grid < 2 {
        return Err(Error::Input("need at least one string on a 2x2 lattice".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = grid as i32;
    let lines: Vec<Vec<(i32, i32)>> = (0..strings)
        .map(|_| {
            let mut p = (rng.gen_range(0..g), rng.gen_range(0..g));
            let steps = rng.gen_range(1..=grid);
            let mut line = vec![p];
            for _ in 0..steps {
                let moves: Vec<(i32, i32)> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
                    .into_iter()
                    .map(|(dx, dy)| (p.0 + dx, p.1 + dy))
                    .filter(|q| (0..g).contains(&q.0) && (0..g).contains(&q.1))
                    .collect();
                p = *moves.choose(&mut rng).expect("lattice has neighbours");
                line.push(p);
            }
            line
        })
        .collect();
    polylines_instance(&lines)
}

fn delaunay_edges(points: &[[f64; 2]]) -> Vec<[u32; 2]> {
    let pts: Vec<delaunator::Point> = points.iter().map(|p| delaunator::Point { x: p[0], y: p[1] }).collect();
    let tri = delaunator::triangulate(&pts);
    let mut edges = BTreeSet::new();
    for t in tri.triangles.chunks(3) {
        for k in 0..3 {
            let (a, b) = (t[k] as u32, t[(k + 1) % 3] as u32);
            edges.insert([a.min(b), a.max(b)]);
        }
    }
    edges.into_iter().collect()
}

/// Grows a connected set of about `size` vertices from `seed`.
fn grow(adj: &[Vec<u32>], seed: u32, size: usize, rng: &mut ChaCha8Rng) -> VertexSet {
    let mut set = BTreeSet::from([seed]);
    let mut frontier: Vec<u32> = adj[seed as usize].clone();
    while set.len() < size && !frontier.is_empty() {
        let k = rng.gen_range(0..frontier.len());
        let v = frontier.swap_remove(k);
        if set.insert(v) {
            frontier.extend(adj[v as usize].iter().copied().filter(|w| !set.contains(w)));
        }
    }
    set.into_iter().collect()
}

/// Keeps the vertices in some region and the edges inside some region.
fn prune(points: &[[f64; 2]], edges: &[[u32; 2]], regions: &[VertexSet]) -> Result<Instance> {
    let n = points.len();
    let by_vertex = rig::incidence(n, regions);
    let mut new_index = vec![u32::MAX; n];
    let mut kept_points = Vec::new();
    for v in 0..n {
        if !by_vertex[v].is_empty() {
            new_index[v] = kept_points.len() as u32;
            kept_points.push(points[v]);
        }
    }
    let kept_edges: Vec<[u32; 2]> = edges
        .iter()
        .filter(|&&[a, b]| by_vertex[a as usize].iter().any(|r| by_vertex[b as usize].contains(r)))
        .map(|&[a, b]| [new_index[a as usize], new_index[b as usize]])
        .collect();
    let regions = regions.iter().map(|r| r.iter().map(|v| new_index[v as usize]).collect()).collect();
    Ok(Instance { map: PlaneMap::from_coordinates(&kept_points, &kept_edges)?, regions })
}

fn adjacency(n: usize, edges: &[[u32; 2]]) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); n];
    for &[a, b] in edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    adj
}

/// Random regions on a Delaunay triangulation. With `outer`, a third of the
/// points lie on the unit circle and every region starts there.
pub fn gen_triangulation_family(points: u32, regions: u32, seed: u64, outer: bool) -> Result<Instance> {
    if points < 3 || regions == 0 {
        return Err(Error::Input("need three points and one region".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rim = if outer { (points / 3).max(3) } else { 0 };
    let mut pts: Vec<[f64; 2]> = (0..rim)
        .map(|i| {
            let a = std::f64::consts::TAU * (i as f64 + rng.gen_range(0.0..0.5)) / rim as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    while pts.len() < points as usize {
        let p = [rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9)];
        if !outer || p[0] * p[0] + p[1] * p[1] < 0.8 {
            pts.push(p);
        }
    }
    let edges = delaunay_edges(&pts);
    let adj = adjacency(pts.len(), &edges);
    let max_size = if outer { 12 } else { 6 };
    let family: Vec<VertexSet> = (0..regions)
        .map(|_| {
            let s = if outer { rng.gen_range(0..rim) } else { rng.gen_range(0..points) };
            let size = rng.gen_range(1..=max_size);
            grow(&adj, s, size, &mut rng)
        })
        .collect();
    prune(&pts, &edges, &family)
}

/// Random chords in a polygon, then random connected regions.
pub fn gen_outerplanar(vertices: u32, regions: u32, seed: u64) -> Result<Instance> {
    if vertices < 3 || regions == 0 {
        return Err(Error::Input("need a polygon and one region".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = vertices;
    let pts: Vec<[f64; 2]> = (0..k)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / k as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    let mut edges: BTreeSet<[u32; 2]> = (0..k).map(|i| [i.min((i + 1) % k), i.max((i + 1) % k)]).collect();
    // Random triangulation of the polygon by splitting ranges, keeping
    // each chord with probability one half.
    let mut stack = vec![(0u32, k - 1)];
    while let Some((a, b)) = stack.pop() {
        if b - a < 2 {
            continue;
        }
        let c = rng.gen_range(a + 1..b);
        for (x, y) in [(a, c), (c, b)] {
            if y - x >= 2 && rng.gen_bool(0.5) {
                edges.insert([x, y]);
            }
            stack.push((x, y));
        }
    }
    let edges: Vec<[u32; 2]> = edges.into_iter().collect();
    let adj = adjacency(k as usize, &edges);
    let family: Vec<VertexSet> = (0..regions)
        .map(|_| {
            let s = rng.gen_range(0..k);
            let size = rng.gen_range(1..=8);
            grow(&adj, s, size, &mut rng)
        })
        .collect();
    prune(&pts, &edges, &family)
}

/// The outerplanar graph made of an `ell`-cycle with a further `ell`-cycle
/// glued along each of its edges; regions are the edges.
pub fn gen_f_ell(ell: u32) -> Result<Instance> {
    if ell < 3 {
        return Err(Error::Input(format!("F_ell needs ell >= 3, got {ell}")));
    }
    use std::f64::consts::TAU;
    let l = ell;
    let mut pts: Vec<[f64; 2]> = (0..l)
        .map(|i| {
            let a = TAU * i as f64 / l as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    let mut edges: Vec<[u32; 2]> = (0..l).map(|i| [i, (i + 1) % l]).collect();
    for i in 0..l {
        let a0 = TAU * i as f64 / l as f64;
        let a1 = TAU * (i + 1) as f64 / l as f64;
        let mut prev = (i + 1) % l;
        for j in 1..l - 1 {
            let t = a1 + (a0 - a1) * j as f64 / (l - 1) as f64;
            pts.push([2.0 * t.cos(), 2.0 * t.sin()]);
            let v = pts.len() as u32 - 1;
            edges.push([prev, v]);
            prev = v;
        }
        edges.push([prev, i]);
    }
    Ok(edge_regions(PlaneMap::from_coordinates(&pts, &edges)?))
}

fn edge_regions(map: PlaneMap) -> Instance {
    let regions = map.edges().iter().map(|&[a, b]| VertexSet::from(vec![a.min(b), a.max(b)])).collect();
    Instance { map, regions }
}

pub fn gen_edge_cycle(len: u32) -> Result<Instance> {
    if len < 3 {
        return Err(Error::Input(format!("cycle needs length >= 3, got {len}")));
    }
    let pts: Vec<[f64; 2]> = (0..len)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / len as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    let edges: Vec<[u32; 2]> = (0..len).map(|i| [i, (i + 1) % len]).collect();
    Ok(edge_regions(PlaneMap::from_coordinates(&pts, &edges)?))
}

pub fn gen_edge_ladder(len: u32) -> Result<Instance> {
    if len < 2 {
        return Err(Error::Input(format!("ladder needs length >= 2, got {len}")));
    }
    let pts: Vec<[f64; 2]> = (0..2 * len).map(|i| [(i % len) as f64, (i / len) as f64]).collect();
    let mut edges = Vec::new();
    for i in 0..len {
        edges.push([i, i + len]);
        if i + 1 < len {
            edges.push([i, i + 1]);
            edges.push([i + len, i + len + 1]);
        }
    }
    Ok(edge_regions(PlaneMap::from_coordinates(&pts, &edges)?))
}

/// Delaunay triangulation with lengths `p/q`, `1 ≤ p ≤ q ≤ 6`.
pub fn gen_metric_random(points: u32, seed: u64) -> Result<MetricPlanarGraph> {
    if points < 3 {
        return Err(Error::Input("need three points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<[f64; 2]> = (0..points).map(|_| [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
    let edges = delaunay_edges(&pts);
    let map = PlaneMap::from_coordinates(&pts, &edges)?;
    let lengths = (0..map.edge_count())
        .map(|_| {
            let q = rng.gen_range(1..=6u64);
            Len::new(rng.gen_range(1..=q), q)
        })
        .collect();
    MetricPlanarGraph::new(map, lengths)
}

/// Extremes of the output distortion over all pairs.
#[derive(Clone, Debug, Serialize)]
pub struct DistortionReport {
    pub pairs: usize,
    #[serde(serialize_with = "crate::rig::ratio_text")]
    pub max_expansion: Q,
    #[serde(serialize_with = "crate::rig::ratio_text")]
    pub max_contraction: Q,
    /// First pair breaking a bound, with both distances.
    pub violation: Option<(u32, u32, Dist, Dist)>,
}

/// All-pairs BFS on both graphs; checks `d_S/23660800 ≤ d_out ≤ 162·d_S`.
pub fn oracle_distortion(s: &Graph, out: &Graph, bijection: &[u32]) -> DistortionReport {
    let ds = DistMatrix::new(s);
    let dout = DistMatrix::new(out);
    let n = s.vertex_count() as u32;
    let mut report = DistortionReport {
        pairs: 0,
        max_expansion: Q::from_integer(0),
        max_contraction: Q::from_integer(0),
        violation: None,
    };
    for u in 0..n {
        for v in u + 1..n {
            report.pairs += 1;
            let (a, b) = (ds.get(u, v), dout.get(bijection[u as usize], bijection[v as usize]));
            let ok = match (a, b) {
                (Dist::Finite(a), Dist::Finite(b)) => {
                    let (a, b) = (a as u64, b as u64);
                    if b > 0 {
                        report.max_expansion = report.max_expansion.max(Q::new(b, a.max(1)));
                        report.max_contraction = report.max_contraction.max(Q::new(a, b));
                    }
                    a <= LOWER_DIVISOR * b && b <= UPPER_FACTOR * a
                }
                (Dist::Infinite, Dist::Infinite) => true,
                _ => false,
            };
            if !ok && report.violation.is_none() {
                report.violation = Some((u, v, a, b));
            }
        }
    }
    report
}

/// Outcome of [`verify_result`].
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub metric: bool,
    pub input_vertices: usize,
    pub output_vertices: usize,
    pub pairs: usize,
    #[serde(serialize_with = "crate::rig::ratio_text")]
    pub max_expansion: Q,
    #[serde(serialize_with = "crate::rig::ratio_text")]
    pub max_contraction: Q,
    /// Metric pairs above `162·d_H + 1` but within `162·(d_H + 1)`.
    pub stated_upper_misses: usize,
}

/// Result file: the pipeline output with its input embedded under `input`
/// and, for metric runs, the report under `metric_report`.
pub fn result_json(input_json: &str, out: &Planarized, metric: Option<&MetricReport>) -> Result<String> {
    let mut value: serde_json::Value = serde_json::from_str(&out.to_json()?)?;
    let obj = value.as_object_mut().expect("planarized output is an object");
    obj.insert("input".into(), serde_json::from_str(input_json)?);
    if let Some(m) = metric {
        obj.insert("metric_report".into(), serde_json::to_value(m)?);
    }
    Ok(serde_json::to_string(&value)?)
}

/// Rechecks a result file from scratch: the output map's embedding, the
/// bijection, the constant chain, and the distortion bounds over all pairs.
pub fn verify_result(text: &str) -> Result<VerifyReport> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let field = |k: &str| value.get(k).ok_or_else(|| Error::Input(format!("result has no `{k}`")));
    let out_map = PlaneMap::try_from(serde_json::from_value::<MapFile>(field("output_map")?.clone())?)?;
    if field("constants")? != &serde_json::to_value(Constants::chain())? {
        cert_fail!("constants differ from the chain");
    }
    let pairs: Vec<[u32; 2]> = serde_json::from_value(field("bijection")?.clone())?;
    let m = out_map.vertex_count();
    let mut hit = vec![false; m];
    let mut bijection = Vec::with_capacity(pairs.len());
    for (i, &[u, w]) in pairs.iter().enumerate() {
        if u as usize != i || w as usize >= m || std::mem::replace(&mut hit[w as usize], true) {
            cert_fail!("bijection entry {i} ({u}, {w}) is out of order, out of range or repeated");
        }
        bijection.push(w);
    }
    if bijection.len() != m {
        cert_fail!("bijection covers {} of {m} output vertices", bijection.len());
    }
    let input = serde_json::to_string(field("input")?)?;
    let out = out_map.graph();
    if field("input")?.get("lengths").is_some() {
        let h = MetricPlanarGraph::from_json(&input)?;
        verify_metric(&h, &out, &bijection)
    } else {
        let inst = Instance::from_json(&input)?;
        inst.audit()?;
        let s = inst.string_graph();
        if s.vertex_count() != bijection.len() {
            cert_fail!("bijection has {} entries for {} regions", bijection.len(), s.vertex_count());
        }
        let r = oracle_distortion(&s, &out, &bijection);
        if let Some((u, v, a, b)) = r.violation {
            cert_fail!("pair {u}, {v}: d_S = {a}, d_out = {b}");
        }
        Ok(VerifyReport {
            metric: false,
            input_vertices: inst.map.vertex_count(),
            output_vertices: m,
            pairs: r.pairs,
            max_expansion: r.max_expansion,
            max_contraction: r.max_contraction,
            stated_upper_misses: 0,
        })
    }
}

fn verify_metric(h: &MetricPlanarGraph, out: &Graph, bijection: &[u32]) -> Result<VerifyReport> {
    let n = h.map.vertex_count();
    if bijection.len() < n {
        cert_fail!("bijection has {} entries for {n} host vertices", bijection.len());
    }
    let dh = h.all_distances()?;
    let dout = DistMatrix::new(out);
    let mut report = VerifyReport {
        metric: true,
        input_vertices: n,
        output_vertices: out.vertex_count(),
        pairs: 0,
        max_expansion: Q::from_integer(0),
        max_contraction: Q::from_integer(0),
        stated_upper_misses: 0,
    };
    for u in 0..n {
        for v in u + 1..n {
            report.pairs += 1;
            match (dh[u][v], dout.get(bijection[u], bijection[v])) {
                (Some(a), Dist::Finite(b)) => {
                    let b = Len::from_integer(b as u64);
                    if a > b * METRIC_LOWER_DIVISOR || b > (a + 1) * UPPER_FACTOR {
                        cert_fail!("pair {u}, {v}: d_H = {a}, d_out = {b}");
                    }
                    if b > a * UPPER_FACTOR + 1 {
                        report.stated_upper_misses += 1;
                    }
                    report.max_expansion = report.max_expansion.max(b / a);
                    report.max_contraction = report.max_contraction.max(a / b);
                }
                (None, Dist::Infinite) => {}
                (a, b) => cert_fail!("pair {u}, {v}: d_H = {a:?}, d_out = {b}"),
            }
        }
    }
    Ok(report)
}

/// At least 100 string instances: polylines up to 150 strings and
/// triangulation families up to 200 regions.
pub fn string_corpus() -> Vec<InstanceSpec> {
    let mut out = Vec::new();
    for i in 0..50u64 {
        let strings = 5 + (i as u32 * 145) / 49;
        let grid = 8 + (i as u32 * 24) / 49;
        out.push(InstanceSpec::GridPolylines { strings, grid, seed: 1000 + i });
    }
    for i in 0..50u64 {
        let regions = 4 + (i as u32 * 196) / 49;
        let points = 10 + regions * 3 / 2;
        out.push(InstanceSpec::RandomTriangulationFamily { points, regions, seed: 2000 + i });
    }
    out
}

/// `F_ell` for `3 ≤ ell ≤ 50` and random outerplanar instances.
pub fn outerplanar_corpus() -> Vec<InstanceSpec> {
    let mut out: Vec<InstanceSpec> = (3..=50).map(|ell| InstanceSpec::FEll { ell }).collect();
    for i in 0..20u64 {
        let vertices = 6 + i as u32 * 4;
        out.push(InstanceSpec::OuterplanarRandom { vertices, regions: vertices / 2 + 2, seed: 3000 + i });
    }
    out
}

/// Random outer-anchored families plus long cycles, ladders and `F_ell`,
/// whose large spreads reach every case of the induction.
pub fn outerstring_corpus() -> Vec<InstanceSpec> {
    let mut out: Vec<InstanceSpec> = (0..30u64)
        .map(|i| {
            let points = 12 + i as u32 * 5;
            InstanceSpec::OuterstringRandom { points, regions: points / 2, seed: 4000 + i }
        })
        .collect();
    out.extend((0..8).map(|i| InstanceSpec::EdgeCycle { len: 30 + 15 * i }));
    out.extend((0..6).map(|i| InstanceSpec::EdgeLadder { len: 15 + 10 * i }));
    out.extend((0..6).map(|i| InstanceSpec::FEll { ell: 25 + 5 * i }));
    out
}

pub fn metric_corpus() -> Vec<InstanceSpec> {
    (0..50u64).map(|i| InstanceSpec::MetricRandom { points: 4 + (i as u32 % 27), seed: 5000 + i }).collect()
}
