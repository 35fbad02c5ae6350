//! The auxiliary graph `G(B)` and its tree of clean separations.

use serde::Serialize;

use super::topology::Facial;
use crate::plane::{Graph, VertexSet};
use crate::rig;

/// `G(B)`: part nodes `0..parts` followed by one node per facial set.
#[derive(Clone, Debug)]
pub struct AuxGraph {
    pub parts: usize,
    pub faces: usize,
    pub graph: Graph,
}

impl AuxGraph {
    pub fn new(g: &Graph, facial: &Facial, parts: usize) -> AuxGraph {
        let mut edges: Vec<(u32, u32)> = rig::im_graph(g, &facial.owner, parts).edges().collect();
        for (f, bd) in facial.boundary.iter().enumerate() {
            for v in bd.iter() {
                edges.push((facial.owner[v as usize], (parts + f) as u32));
            }
        }
        let faces = facial.sets.len();
        AuxGraph { parts, faces, graph: Graph::from_edges(parts + faces, edges) }
    }

    pub fn is_part(&self, x: u32) -> bool {
        (x as usize) < self.parts
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeparationKind {
    Root,
    OneClean,
    TwoClean,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CleanSeparation {
    pub kind: SeparationKind,
    /// `X ∩ Y`, part nodes only.
    pub cut: Vec<u32>,
    pub y: VertexSet,
}

/// Clean separations reachable from the roots through the child relation.
#[derive(Clone, Debug, Serialize)]
pub struct SeparationTree {
    pub nodes: Vec<CleanSeparation>,
    /// Children of each node, by index.
    pub children: Vec<Vec<u32>>,
    /// `R_(X,Y)`: part nodes of `Y` sharing a region with the cut.
    pub reach: Vec<VertexSet>,
}

/// Components of `graph[within] - removed`.
fn split(graph: &Graph, within: &VertexSet, removed: &[u32]) -> Vec<VertexSet> {
    let rest: VertexSet = within.iter().filter(|v| !removed.contains(v)).collect();
    rig::components_within(graph, &rest)
}

fn adjacent_to(graph: &Graph, comp: &VertexSet, x: u32) -> bool {
    graph.neighbors(x).iter().any(|&w| comp.contains(w))
}

/// `Y` of the 1-clean separation at `c`, if it is proper.
fn one_clean(graph: &Graph, within: &VertexSet, root: u32, c: u32) -> Option<VertexSet> {
    if c == root {
        return None;
    }
    let comps = split(graph, within, &[c]);
    let k0 = comps.iter().find(|k| k.contains(root)).expect("root survives");
    let y = within.difference(k0);
    (y.len() >= 2).then_some(y)
}

/// `Y` of the 2-clean separation at the adjacent pair `cut`.
fn two_clean(graph: &Graph, within: &VertexSet, root: u32, cut: [u32; 2]) -> Option<VertexSet> {
    // A cut through the root never avoids the root's reach, so it cannot
    // enter the tree.
    if cut.contains(&root) {
        return None;
    }
    let comps = split(graph, within, &cut);
    let x_side = comps.iter().find(|k| k.contains(root)).expect("root survives");
    let behind: Vec<&VertexSet> = comps
        .iter()
        .filter(|k| *k != x_side && adjacent_to(graph, k, cut[0]) && adjacent_to(graph, k, cut[1]))
        .collect();
    if behind.is_empty() {
        return None;
    }
    let y: VertexSet = VertexSet::union_all(behind).union(&cut.iter().copied().collect());
    for c in cut {
        if one_clean(graph, within, root, c).is_some_and(|y1| y1.is_subset(&y)) {
            return None;
        }
    }
    Some(y)
}

/// All clean separations of one component of the aux graph, rooted at its
/// least part node.
pub fn clean_separations(aux: &AuxGraph, within: &VertexSet) -> Vec<CleanSeparation> {
    let graph = &aux.graph;
    let root = within.iter().find(|&x| aux.is_part(x)).expect("component has a part");
    let mut out = vec![CleanSeparation { kind: SeparationKind::Root, cut: vec![root], y: within.clone() }];
    let part_nodes: Vec<u32> = within.iter().filter(|&x| aux.is_part(x)).collect();
    for &c in &part_nodes {
        if let Some(y) = one_clean(graph, within, root, c) {
            out.push(CleanSeparation { kind: SeparationKind::OneClean, cut: vec![c], y });
        }
    }
    for &c1 in &part_nodes {
        for &c2 in graph.neighbors(c1) {
            if c2 > c1 && aux.is_part(c2) {
                if let Some(y) = two_clean(graph, within, root, [c1, c2]) {
                    out.push(CleanSeparation { kind: SeparationKind::TwoClean, cut: vec![c1, c2], y });
                }
            }
        }
    }
    out
}

/// The tree of the root and its descendants. `shares_region[b]` lists the
/// parts sharing a region with part `b`, itself included.
pub fn separation_tree(aux: &AuxGraph, shares_region: &[VertexSet]) -> SeparationTree {
    let mut tree = SeparationTree { nodes: Vec::new(), children: Vec::new(), reach: Vec::new() };
    let labels = aux.graph.components();
    let mut comps: Vec<VertexSet> = Vec::new();
    let mut index = std::collections::BTreeMap::new();
    for (x, &l) in labels.iter().enumerate() {
        let k = *index.entry(l).or_insert_with(|| {
            comps.push(VertexSet::new());
            comps.len() - 1
        });
        comps[k].insert(x as u32);
    }
    for within in comps.iter().filter(|c| c.iter().any(|x| aux.is_part(x))) {
        let all = clean_separations(aux, within);
        let reach_of = |s: &CleanSeparation| -> VertexSet {
            let near = VertexSet::union_all(s.cut.iter().map(|&c| &shares_region[c as usize]));
            s.y.iter().filter(|&x| aux.is_part(x) && near.contains(x)).collect()
        };
        let base = tree.nodes.len();
        let mut local: Vec<usize> = vec![0];
        let mut pos = std::collections::BTreeMap::new();
        pos.insert(0usize, base);
        tree.nodes.push(all[0].clone());
        tree.reach.push(reach_of(&all[0]));
        tree.children.push(Vec::new());
        let mut i = 0;
        while i < local.len() {
            let s = local[i];
            let me = pos[&s];
            let reach = tree.reach[me].clone();
            let cands: Vec<usize> = (0..all.len())
                .filter(|&t| t != s && all[t].y.is_subset(&all[s].y) && !all[t].y.intersects(&reach))
                .collect();
            for &t in &cands {
                let maximal = !cands.iter().any(|&o| o != t && all[t].y.is_subset(&all[o].y) && all[t].y != all[o].y);
                if !maximal {
                    continue;
                }
                let id = *pos.entry(t).or_insert_with(|| {
                    tree.nodes.push(all[t].clone());
                    tree.reach.push(reach_of(&all[t]));
                    tree.children.push(Vec::new());
                    local.push(t);
                    tree.nodes.len() - 1
                });
                tree.children[me].push(id as u32);
            }
            i += 1;
        }
    }
    tree
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aux_of(n: usize, edges: &[(u32, u32)]) -> AuxGraph {
        AuxGraph { parts: n, faces: 0, graph: Graph::from_edges(n, edges.iter().copied()) }
    }

    #[test]
    fn path_middle_is_one_clean() {
        let aux = aux_of(3, &[(0, 1), (1, 2)]);
        let all = clean_separations(&aux, &(0..3).collect());
        assert_eq!(all.len(), 2);
        assert_eq!(all[1].kind, SeparationKind::OneClean);
        assert_eq!(all[1].cut, vec![1]);
        assert_eq!(all[1].y.as_slice(), &[1, 2]);
    }

    #[test]
    fn two_connected_without_adjacent_cuts_is_root_only() {
        // K4 has no separating adjacent pair.
        let aux = aux_of(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(clean_separations(&aux, &(0..4).collect()).len(), 1);
    }

    #[test]
    fn theta_shape() {
        // Two poles 1 and 2, adjacent, joined also through 3 and through 0.
        let aux = aux_of(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let all = clean_separations(&aux, &(0..4).collect());
        let two: Vec<_> = all.iter().filter(|s| s.kind == SeparationKind::TwoClean).collect();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].cut, vec![1, 2]);
        assert_eq!(two[0].y.as_slice(), &[1, 2, 3]);
        // Parts 1 and 2 share no region with 0, so the 2-clean node is a child.
        let shares: Vec<VertexSet> = (0..4).map(VertexSet::singleton).collect();
        let tree = separation_tree(&aux, &shares);
        assert_eq!(tree.nodes.len(), 2);
        assert_eq!(tree.children[0], vec![1]);
        assert_eq!(tree.reach[1].as_slice(), &[1, 2]);
    }

    #[test]
    fn pendant_behind_a_pair_is_left_to_the_cut_vertex() {
        // 3 hangs off 1 only; 4 sits behind the pair (1, 2).
        let aux = aux_of(5, &[(0, 1), (0, 2), (1, 2), (1, 3), (1, 4), (2, 4)]);
        let all = clean_separations(&aux, &(0..5).collect());
        let one: Vec<_> = all.iter().filter(|s| s.kind == SeparationKind::OneClean).collect();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].y.as_slice(), &[1, 3]);
        let two: Vec<_> = all.iter().filter(|s| s.kind == SeparationKind::TwoClean).collect();
        assert_eq!(two[0].y.as_slice(), &[1, 2, 4]);
    }
}
