use std::collections::VecDeque;

use proptest::prelude::*;
use stringqi::harness::{self, Generated, InstanceSpec};
use stringqi::metricgraph::{metric_to_string, Len};
use stringqi::planarize::planarize_full;
use stringqi::plane::{Dist, Graph, PlaneMap, VertexSet};
use stringqi::rig;

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<Option<u32>> {
    let mut d = vec![None; adj.len()];
    d[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if d[w].is_none() {
                d[w] = Some(d[v].unwrap() + 1);
                q.push_back(w);
            }
        }
    }
    d
}

/// Pairwise intersection adjacency, independent of the library's RIG.
fn naive_rig(regions: &[VertexSet]) -> Vec<Vec<usize>> {
    let k = regions.len();
    let mut adj = vec![Vec::new(); k];
    for i in 0..k {
        for j in 0..k {
            if i != j && regions[i].iter().any(|v| regions[j].contains(v)) {
                adj[i].push(j);
            }
        }
    }
    adj
}

fn naive_weak_diameter(adj: &[Vec<usize>], group: &[usize]) -> Option<u32> {
    let mut worst = 0;
    for &a in group {
        let d = bfs(adj, a);
        for &b in group {
            worst = worst.max(d[b]?);
        }
    }
    Some(worst)
}

fn as_dist(d: Option<u32>) -> Dist {
    d.map_or(Dist::Infinite, Dist::Finite)
}

fn instance(kind: u8, seed: u64) -> harness::Instance {
    let spec = match kind % 3 {
        0 => InstanceSpec::GridPolylines { strings: 12, grid: 8, seed },
        1 => InstanceSpec::RandomTriangulationFamily { points: 30, regions: 14, seed },
        _ => InstanceSpec::OuterstringRandom { points: 30, regions: 12, seed },
    };
    match harness::generate(&spec).unwrap() {
        Generated::Regions(i) => i,
        Generated::Metric(_) => unreachable!(),
    }
}

fn check_map(map: &PlaneMap) {
    let v = map.vertex_count() as i64;
    let e = map.edge_count() as i64;
    let f = map.face_count() as i64;
    // Every component has its own outer face; isolated vertices have none.
    let isolated = (0..map.vertex_count() as u32).filter(|&x| map.degree(x) == 0).count() as i64;
    let c = map.component_count() as i64;
    assert_eq!(v - e + f, 2 * (c - isolated) + isolated);
    let mut seen = vec![0; map.dart_count()];
    for face in map.faces() {
        for &d in face {
            seen[d.index()] += 1;
            assert_eq!(map.origin(d.rev()), map.target(d));
            assert_eq!(map.prev_in_face(map.next_in_face(d)), d);
        }
    }
    assert!(seen.iter().all(|&c| c == 1));
}

#[test]
fn seeded_polylines_string_graph() {
    let Generated::Regions(inst) = harness::generate(&InstanceSpec::GridPolylines { strings: 40, grid: 20, seed: 7 }).unwrap() else {
        unreachable!()
    };
    let naive: usize = naive_rig(&inst.regions).iter().map(Vec::len).sum::<usize>() / 2;
    assert_eq!(inst.string_graph().edge_count(), naive);
    assert_eq!(naive, FROZEN_EDGES);
}

const FROZEN_EDGES: usize = 56;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_maps_are_valid(kind in 0u8..3, seed in 0u64..10_000) {
        let inst = instance(kind, seed);
        check_map(&inst.map);
        inst.audit().unwrap();
    }

    #[test]
    fn instance_json_round_trip(kind in 0u8..3, seed in 0u64..10_000) {
        let text = instance(kind, seed).to_json().unwrap();
        let again = harness::Instance::from_json(&text).unwrap().to_json().unwrap();
        prop_assert_eq!(again, text);
    }

    #[test]
    fn generation_is_deterministic(kind in 0u8..3, seed in 0u64..10_000) {
        prop_assert_eq!(instance(kind, seed).to_json().unwrap(), instance(kind, seed).to_json().unwrap());
    }

    #[test]
    fn rig_matches_pairwise_intersection(kind in 0u8..3, seed in 0u64..10_000) {
        let inst = instance(kind, seed);
        let s = inst.string_graph();
        let naive = naive_rig(&inst.regions);
        for (i, row) in naive.iter().enumerate() {
            let mut got: Vec<usize> = s.neighbors(i as u32).iter().map(|&w| w as usize).collect();
            got.sort_unstable();
            prop_assert_eq!(&got, row);
        }
    }

    #[test]
    fn impression_measure_matches_double_loop(kind in 0u8..3, seed in 0u64..10_000) {
        let inst = instance(kind, seed);
        let g = inst.map.graph();
        let (parts, _) = stringqi::outerstring::layered_parts(&g, &inst.regions).unwrap();
        let (x, y) = rig::verify_impression(&g, &inst.regions, &parts).unwrap();
        let rig_adj = naive_rig(&inst.regions);
        let owner: Vec<usize> = (0..g.vertex_count() as u32)
            .map(|v| parts.iter().position(|p| p.contains(v)).unwrap())
            .collect();
        let mut im_adj = vec![Vec::new(); parts.len()];
        for (a, b) in g.edges() {
            let (p, q) = (owner[a as usize], owner[b as usize]);
            if p != q {
                im_adj[p].push(q);
                im_adj[q].push(p);
            }
        }
        let mut nx = Some(0);
        for p in &parts {
            let hit: Vec<usize> = (0..inst.regions.len()).filter(|&h| inst.regions[h].intersects(p)).collect();
            nx = match (nx, naive_weak_diameter(&rig_adj, &hit)) { (Some(a), Some(b)) => Some(a.max(b)), _ => None };
        }
        let mut ny = Some(0);
        for h in &inst.regions {
            let mut hit: Vec<usize> = h.iter().map(|v| owner[v as usize]).collect();
            hit.sort_unstable();
            hit.dedup();
            ny = match (ny, naive_weak_diameter(&im_adj, &hit)) { (Some(a), Some(b)) => Some(a.max(b)), _ => None };
        }
        prop_assert_eq!((x, y), (as_dist(nx), as_dist(ny)));
    }

    #[test]
    fn submaps_keep_euler(kind in 0u8..3, seed in 0u64..10_000, mask in proptest::collection::vec(any::<bool>(), 64)) {
        let inst = instance(kind, seed);
        let keep_v: Vec<bool> = (0..inst.map.vertex_count()).map(|v| mask[v % 64]).collect();
        let keep_e: Vec<bool> = (0..inst.map.edge_count()).map(|e| mask[(e * 7 + 3) % 64]).collect();
        let (sub, _) = inst.map.submap(&keep_v, &keep_e).unwrap();
        check_map(&sub);
    }

    #[test]
    fn pipeline_is_deterministic_and_within_bounds(kind in 0u8..3, seed in 0u64..10_000) {
        let inst = instance(kind, seed);
        let a = planarize_full(&inst.map, &inst.regions, true).unwrap();
        let b = planarize_full(&inst.map, &inst.regions, true).unwrap();
        prop_assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        check_map(&a.map);
        let r = harness::oracle_distortion(&inst.string_graph(), &a.map.graph(), &a.bijection);
        prop_assert!(r.violation.is_none());
        prop_assert_eq!((r.max_expansion, r.max_contraction), (a.measured.max_expansion, a.measured.max_contraction));
    }

    #[test]
    fn metric_distances_form_a_metric(points in 3u32..14, seed in 0u64..10_000) {
        let h = harness::gen_metric_random(points, seed).unwrap();
        let d = h.all_distances().unwrap();
        let n = d.len();
        for a in 0..n {
            prop_assert_eq!(d[a][a], Some(Len::from_integer(0)));
            for b in 0..n {
                prop_assert_eq!(d[a][b], d[b][a]);
                for c in 0..n {
                    if let (Some(x), Some(y), Some(z)) = (d[a][b], d[b][c], d[a][c]) {
                        prop_assert!(z <= x + y);
                    }
                }
            }
        }
        let (s, rep) = metric_to_string(&h).unwrap();
        check_map(&rep.map);
        prop_assert_eq!(s.vertex_count(), n);
    }
}

#[test]
fn disconnected_string_graph_pairs_are_infinite() {
    let s = Graph::from_edges(4, [(0, 1), (2, 3)]);
    let r = harness::oracle_distortion(&s, &s, &[0, 1, 2, 3]);
    assert!(r.violation.is_none());
    assert_eq!(r.pairs, 6);
}
