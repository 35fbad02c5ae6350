//! Abstract (non-embedded) graphs and unweighted shortest paths.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Graph distance; unreachable pairs are `Infinite`, never a large number.
///
/// The derived order puts every finite distance below `Infinite`. In JSON a
/// finite distance is a plain number and infinity is the string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "DistRepr", try_from = "DistRepr")]
pub enum Dist {
    Finite(u32),
    Infinite,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DistRepr {
    Finite(u32),
    Text(String),
}

impl From<Dist> for DistRepr {
    fn from(d: Dist) -> Self {
        match d {
            Dist::Finite(k) => DistRepr::Finite(k),
            Dist::Infinite => DistRepr::Text("inf".into()),
        }
    }
}

impl TryFrom<DistRepr> for Dist {
    type Error = String;

    fn try_from(r: DistRepr) -> Result<Self, String> {
        match r {
            DistRepr::Finite(k) => Ok(Dist::Finite(k)),
            DistRepr::Text(t) if t == "inf" => Ok(Dist::Infinite),
            DistRepr::Text(t) => Err(format!("not a distance: {t}")),
        }
    }
}

impl Dist {
    pub const ZERO: Dist = Dist::Finite(0);

    pub fn finite(self) -> Option<u32> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    /// Saturating addition; anything plus infinity is infinity.
    pub fn plus(self, k: u32) -> Dist {
        match self {
            Dist::Finite(d) => Dist::Finite(d + k),
            Dist::Infinite => Dist::Infinite,
        }
    }

    /// `self <= bound`, with `Infinite` never within a finite bound.
    pub fn within(self, bound: u32) -> bool {
        matches!(self, Dist::Finite(d) if d <= bound)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Infinite => write!(f, "inf"),
        }
    }
}

/// Simple undirected graph stored as sorted adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a simple graph; loops are dropped and parallel edges merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v {
                adj[u as usize].push(v);
                adj[v as usize].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Graph { adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    pub fn bfs(&self, source: u32) -> Vec<Dist> {
        bfs_distances(self, source)
    }

    /// Connected component index per vertex, numbered by least vertex.
    pub fn components(&self) -> Vec<u32> {
        let n = self.adj.len();
        let mut comp = vec![u32::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != u32::MAX {
                continue;
            }
            comp[s] = next;
            queue.push_back(s as u32);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u as usize] {
                    if comp[w as usize] == u32::MAX {
                        comp[w as usize] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Induced subgraph on `keep`, vertices renumbered in increasing order.
    pub fn induced(&self, keep: &[u32]) -> Graph {
        let mut index = vec![u32::MAX; self.adj.len()];
        for (i, &v) in keep.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let edges = keep.iter().flat_map(|&v| {
            let index = &index;
            self.adj[v as usize]
                .iter()
                .filter(move |&&w| index[w as usize] != u32::MAX)
                .map(move |&w| (index[v as usize], index[w as usize]))
        });
        Graph::from_edges(keep.len(), edges.collect::<Vec<_>>())
    }
}

/// Exact unweighted distances from `source`.
pub fn bfs_distances(graph: &Graph, source: u32) -> Vec<Dist> {
    multi_source_bfs(graph, std::iter::once(source))
}

pub fn multi_source_bfs(graph: &Graph, sources: impl IntoIterator<Item = u32>) -> Vec<Dist> {
    let mut dist = vec![Dist::Infinite; graph.vertex_count()];
    let mut queue = VecDeque::new();
    for s in sources {
        if dist[s as usize] == Dist::Infinite {
            dist[s as usize] = Dist::ZERO;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let next = dist[u as usize].plus(1);
        for &w in graph.neighbors(u) {
            if dist[w as usize] == Dist::Infinite {
                dist[w as usize] = next;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// All-pairs distance table; rows are computed in parallel.
#[derive(Clone, Debug)]
pub struct DistMatrix {
    n: usize,
    data: Vec<u32>,
}

const INF_CELL: u32 = u32::MAX;

impl DistMatrix {
    pub fn new(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        let rows: Vec<Vec<u32>> = (0..n as u32)
            .into_par_iter()
            .map(|s| {
                graph
                    .bfs(s)
                    .into_iter()
                    .map(|d| d.finite().unwrap_or(INF_CELL))
                    .collect()
            })
            .collect();
        DistMatrix { n, data: rows.concat() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: u32, v: u32) -> Dist {
        match self.data[u as usize * self.n + v as usize] {
            INF_CELL => Dist::Infinite,
            d => Dist::Finite(d),
        }
    }

    /// Maximum pairwise distance among `subset`; 0 for fewer than two members.
    pub fn weak_diameter(&self, subset: &[u32]) -> Dist {
        let mut best = Dist::ZERO;
        for (i, &a) in subset.iter().enumerate() {
            for &b in &subset[i + 1..] {
                best = best.max(self.get(a, b));
                if best == Dist::Infinite {
                    return best;
                }
            }
        }
        best
    }
}

/// Weak diameter by BFS from each member; used where an all-pairs table
/// would be too large.
pub fn weak_diameter(graph: &Graph, subset: &[u32]) -> Dist {
    if subset.len() < 2 {
        return Dist::ZERO;
    }
    subset
        .par_iter()
        .map(|&s| {
            let dist = graph.bfs(s);
            subset.iter().map(|&t| dist[t as usize]).max().unwrap_or(Dist::ZERO)
        })
        .max()
        .unwrap_or(Dist::ZERO)
}
