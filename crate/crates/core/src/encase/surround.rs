//! Surround check: regions bounded by or encroached by a region leaving the
//! cover stay close to it once outer regions are removed.

use rayon::prelude::*;
use serde::Serialize;

use super::topology::{EncroachRun, Facial};
use crate::plane::{Dist, DistMatrix, PlaneMap, VertexSet};
use crate::rig;

/// Worst pair found for either bullet.
#[derive(Clone, Debug, Serialize)]
pub struct SurroundReport {
    /// Largest distance (plus one) over bounded pairs.
    pub bounded: Dist,
    pub bounded_pair: Option<(u32, u32)>,
    /// Largest distance over encroachment pairs.
    pub encroach: Dist,
    pub encroach_pair: Option<(u32, u32)>,
    /// Smallest `c` for which the family is a `c`-surround.
    pub measured: Dist,
}

/// RIG distance with outer-anchored regions removed; pairs involving an
/// anchored region are infinitely far apart.
pub struct InnerRig {
    index: Vec<u32>,
    dist: DistMatrix,
}

impl InnerRig {
    pub fn new(n: usize, regions: &[VertexSet], anchored: &[bool]) -> InnerRig {
        let mut index = vec![u32::MAX; regions.len()];
        let mut kept = Vec::new();
        for (i, h) in regions.iter().enumerate() {
            if !anchored[i] {
                index[i] = kept.len() as u32;
                kept.push(h.clone());
            }
        }
        InnerRig { index, dist: DistMatrix::new(&rig::rig_graph(n, &kept)) }
    }

    pub fn get(&self, a: u32, b: u32) -> Dist {
        let (x, y) = (self.index[a as usize], self.index[b as usize]);
        if x == u32::MAX || y == u32::MAX {
            return Dist::Infinite;
        }
        self.dist.get(x, y)
    }
}

/// Encroachment runs of every facial set `h` meets, given its bounded mask.
pub fn runs_for(facial: &Facial, h: &VertexSet, bounded: &[bool]) -> Vec<EncroachRun> {
    let faces: VertexSet = h.iter().filter(|&v| !facial.covers(v)).map(|v| facial.face_of[v as usize]).collect();
    faces.iter().flat_map(|f| facial.encroached(f, h, bounded)).collect()
}

type Worst = (Dist, Option<(u32, u32)>);

pub fn surround_check(map: &PlaneMap, facial: &Facial, regions: &[VertexSet], anchored: &[bool]) -> SurroundReport {
    let n = map.vertex_count();
    let inner = InnerRig::new(n, regions, anchored);
    let by_vertex = rig::incidence(n, regions);
    let per_region: Vec<(Worst, Worst)> = regions
        .par_iter()
        .enumerate()
        .map(|(i, h)| {
            let i = i as u32;
            let meets = h.iter().any(|v| facial.covers(v));
            let leaves = h.iter().any(|v| !facial.covers(v));
            let mut b1 = (Dist::ZERO, None);
            let mut b2 = (Dist::ZERO, None);
            if !(meets && leaves) {
                return (b1, b2);
            }
            let bounded = facial.bounded_by(map, h);
            let near: VertexSet = (0..n as u32).filter(|&v| bounded[v as usize]).collect();
            for j in rig::hitting(&by_vertex, &near) {
                let d = inner.get(j, i).plus(1);
                if d > b1.0 {
                    b1 = (d, Some((j, i)));
                }
            }
            let encroached = VertexSet::union_all(runs_for(facial, h, &bounded).iter().map(|r| &r.encroached));
            for j in rig::hitting(&by_vertex, &encroached) {
                let d = inner.get(j, i);
                if d > b2.0 {
                    b2 = (d, Some((j, i)));
                }
            }
            (b1, b2)
        })
        .collect();
    let b1 = per_region.iter().map(|r| r.0).max_by_key(|r| r.0).unwrap_or((Dist::ZERO, None));
    let b2 = per_region.iter().map(|r| r.1).max_by_key(|r| r.0).unwrap_or((Dist::ZERO, None));
    SurroundReport {
        bounded: b1.0,
        bounded_pair: b1.1,
        encroach: b2.0,
        encroach_pair: b2.1,
        measured: b1.0.max(b2.0),
    }
}
