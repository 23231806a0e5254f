use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::canonical::{canonicalize, CanonicalKey};
use super::graph::{BoundaryCircle, BoundaryPoint, BoundarySlot, InteriorSlot, Piece, StratumGraph};
use super::moves::{degenerations, MoveKind};
use crate::error::{Error, Result};
use crate::surface_types::MarkedTopType;

/// One covering relation: `lower` is obtained from `upper` by one move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cover {
    pub upper: usize,
    pub lower: usize,
    pub kind: MoveKind,
}

/// All strata of one moduli space with their degeneration relations.
/// Strata are ordered by decreasing dimension, then by canonical key.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegenerationPoset {
    pub strata: Vec<StratumGraph>,
    pub dims: Vec<i64>,
    pub covers: Vec<Cover>,
}

impl DegenerationPoset {
    /// Number of strata of each dimension, highest dimension first.
    pub fn counts_by_dim(&self) -> Vec<(i64, usize)> {
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for &d in &self.dims {
            *counts.entry(d).or_default() += 1;
        }
        counts.into_iter().rev().collect()
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    /// Indices of the strata that `i` covers.
    pub fn lower_covers(&self, i: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.covers.iter().filter(|c| c.upper == i).map(|c| c.lower).collect();
        set.into_iter().collect()
    }

    pub fn upper_covers(&self, i: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.covers.iter().filter(|c| c.lower == i).map(|c| c.upper).collect();
        set.into_iter().collect()
    }
}

fn cyclic_orders(circle: u32, count: u32) -> Vec<Vec<BoundaryPoint>> {
    let point = |index| BoundaryPoint {
        slot: BoundarySlot::Marked { circle, index },
        arc_label: circle,
    };
    if count == 0 {
        return vec![Vec::new()];
    }
    (2..=count)
        .permutations(count as usize - 1)
        .map(|rest| std::iter::once(1).chain(rest).map(point).collect())
        .collect()
}

/// The smooth strata of `t`, one per choice of cyclic orders of the
/// boundary marked points.
pub fn top_strata(t: &MarkedTopType) -> Vec<StratumGraph> {
    let interior: Vec<InteriorSlot> = (1..=t.n).map(|index| InteriorSlot::Marked { index }).collect();
    let per_circle: Vec<Vec<BoundaryCircle>> = t
        .m
        .iter()
        .enumerate()
        .map(|(i, &mi)| {
            let label = i as u32 + 1;
            if mi == 0 {
                vec![BoundaryCircle::Empty { label }]
            } else {
                cyclic_orders(label, mi)
                    .into_iter()
                    .map(|points| BoundaryCircle::Points { points })
                    .collect()
            }
        })
        .collect();
    per_circle
        .into_iter()
        .multi_cartesian_product()
        .map(|circles| StratumGraph {
            g: t.g(),
            h: t.h(),
            n: t.n,
            m: t.m.clone(),
            pieces: vec![Piece::new(t.g(), circles, interior.clone())],
        })
        .collect()
}

/// Closes `tops` under degeneration moves, deduplicating by canonical form.
fn explore(tops: Vec<StratumGraph>) -> Result<DegenerationPoset> {
    let mut index: HashMap<CanonicalKey, usize> = HashMap::new();
    let mut graphs: Vec<StratumGraph> = Vec::new();
    let mut keys: Vec<CanonicalKey> = Vec::new();
    let mut edges: BTreeSet<(usize, usize, MoveKind)> = BTreeSet::new();
    let mut queue = VecDeque::new();

    let mut intern = |g: &StratumGraph,
                      graphs: &mut Vec<StratumGraph>,
                      keys: &mut Vec<CanonicalKey>,
                      queue: &mut VecDeque<usize>|
     -> usize {
        let (canon, key) = canonicalize(g);
        if let Some(&i) = index.get(&key) {
            return i;
        }
        let i = graphs.len();
        index.insert(key.clone(), i);
        graphs.push(canon);
        keys.push(key);
        queue.push_back(i);
        i
    };

    for t in &tops {
        intern(t, &mut graphs, &mut keys, &mut queue);
    }
    while let Some(i) = queue.pop_front() {
        let current = graphs[i].clone();
        for (kind, child) in degenerations(&current) {
            let j = intern(&child, &mut graphs, &mut keys, &mut queue);
            edges.insert((i, j, kind));
        }
    }

    let mut dims = Vec::with_capacity(graphs.len());
    for g in &graphs {
        g.validate()?;
        dims.push(g.stratum_dim()?);
    }
    let mut order: Vec<usize> = (0..graphs.len()).collect();
    order.sort_by(|&a, &b| dims[b].cmp(&dims[a]).then_with(|| keys[a].cmp(&keys[b])));
    let mut position = vec![0; graphs.len()];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let mut covers: Vec<Cover> = edges
        .into_iter()
        .map(|(u, l, kind)| Cover {
            upper: position[u],
            lower: position[l],
            kind,
        })
        .collect();
    covers.sort();
    for c in &covers {
        let drop = dims[order[c.upper]] - dims[order[c.lower]];
        if drop != c.kind.codimension() {
            return Err(Error::InternalConsistency(format!(
                "{:?} move lowers the dimension by {drop}",
                c.kind
            )));
        }
    }
    Ok(DegenerationPoset {
        strata: order.iter().map(|&i| graphs[i].clone()).collect(),
        dims: order.iter().map(|&i| dims[i]).collect(),
        covers,
    })
}

pub fn degeneration_poset(t: &MarkedTopType) -> Result<DegenerationPoset> {
    if !t.is_stable() {
        return Err(Error::domain(
            "type",
            format!(
                "(g,h) = ({},{}) with n = {}, m = {:?} is not stable",
                t.g(),
                t.h(),
                t.n,
                t.m
            ),
        ));
    }
    explore(top_strata(t))
}

/// Canonical strata of `t`, grouped by decreasing dimension.
pub fn enumerate_strata(t: &MarkedTopType) -> Result<DegenerationPoset> {
    degeneration_poset(t)
}

/// Stable graphs of closed genus-`g` curves with `n` marked points.
pub fn enumerate_closed_strata(g: u32, n: u32) -> Result<DegenerationPoset> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::domain("g", format!("closed type (g,n) = ({g},{n}) is not stable")));
    }
    let interior = (1..=n).map(|index| InteriorSlot::Marked { index }).collect();
    explore(vec![StratumGraph {
        g,
        h: 0,
        n,
        m: Vec::new(),
        pieces: vec![Piece::new(g, Vec::new(), interior)],
    }])
}

/// Number of distinct cyclic orderings of the boundary marked points among
/// the top-dimensional strata.
pub fn top_cyclic_orderings(p: &DegenerationPoset) -> usize {
    let Some(&top) = p.dims.first() else { return 0 };
    let orders: BTreeSet<Vec<Vec<BoundarySlot>>> = p
        .strata
        .iter()
        .zip(&p.dims)
        .filter(|(_, &d)| d == top)
        .map(|(s, _)| {
            s.pieces
                .iter()
                .flat_map(|piece| piece.circles.iter())
                .map(|c| c.points().iter().map(|pt| pt.slot).collect())
                .collect()
        })
        .collect();
    orders.len()
}
