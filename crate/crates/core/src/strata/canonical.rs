//! Canonical form of stratum graphs.
//!
//! Marked points and boundary labels are fixed by every isomorphism; pieces,
//! circles within a piece, interior slots and node names are not, and each
//! circle is only defined up to rotation. The canonical form is the
//! lexicographically smallest encoding over all node renamings that respect
//! a renaming-invariant node signature.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;

use super::graph::{BoundaryCircle, BoundaryPoint, BoundarySlot, InteriorSlot, Piece, PieceKind, StratumGraph};

/// Comparable encoding of a canonical graph. Equal keys ⇔ isomorphic graphs.
pub type CanonicalKey = Vec<Vec<u32>>;

#[derive(Clone, Copy)]
enum Naming<'a> {
    Blank,
    Map(&'a HashMap<u32, u32>, &'a HashMap<u32, u32>),
}

impl Naming<'_> {
    fn h(&self, id: u32) -> u32 {
        match self {
            Naming::Blank => 0,
            Naming::Map(h, _) => h[&id] + 1,
        }
    }

    fn i(&self, id: u32) -> u32 {
        match self {
            Naming::Blank => 0,
            Naming::Map(_, i) => i[&id] + 1,
        }
    }
}

fn point_tokens(p: &BoundaryPoint, naming: Naming) -> [u32; 4] {
    match p.slot {
        BoundarySlot::Marked { circle, index } => [0, circle, index, p.arc_label],
        BoundarySlot::Node { id } => [1, naming.h(id), 0, p.arc_label],
    }
}

/// Index of the rotation giving the smallest token sequence.
fn min_rotation(points: &[BoundaryPoint], naming: Naming) -> usize {
    let tokens: Vec<[u32; 4]> = points.iter().map(|p| point_tokens(p, naming)).collect();
    let k = tokens.len();
    (0..k)
        .min_by(|&a, &b| {
            (0..k)
                .map(|j| tokens[(a + j) % k])
                .cmp((0..k).map(|j| tokens[(b + j) % k]))
        })
        .unwrap_or(0)
}

fn encode_circle(c: &BoundaryCircle, naming: Naming) -> Vec<u32> {
    match c {
        BoundaryCircle::Collapsed { label } => vec![0, *label],
        BoundaryCircle::Empty { label } => vec![1, *label],
        BoundaryCircle::Points { points } => {
            let start = min_rotation(points, naming);
            let k = points.len();
            let mut out = vec![2, k as u32];
            for j in 0..k {
                out.extend(point_tokens(&points[(start + j) % k], naming));
            }
            out
        }
    }
}

fn encode_interior(s: &InteriorSlot, naming: Naming) -> [u32; 2] {
    match *s {
        InteriorSlot::Marked { index } => [0, index],
        InteriorSlot::Node { id } => [1, naming.i(id)],
    }
}

fn encode_piece(p: &Piece, naming: Naming) -> Vec<u32> {
    let mut interior: Vec<[u32; 2]> = p.interior.iter().map(|s| encode_interior(s, naming)).collect();
    interior.sort_unstable();
    let mut circles: Vec<Vec<u32>> = p.circles.iter().map(|c| encode_circle(c, naming)).collect();
    circles.sort_unstable();
    let mut out = vec![p.genus, matches!(p.kind, PieceKind::Bordered) as u32, interior.len() as u32];
    out.extend(interior.into_iter().flatten());
    out.push(circles.len() as u32);
    for c in circles {
        out.push(c.len() as u32);
        out.extend(c);
    }
    out
}

fn encode_graph(s: &StratumGraph, naming: Naming) -> CanonicalKey {
    let mut header = vec![s.g, s.h, s.n];
    header.extend(&s.m);
    let mut pieces: Vec<Vec<u32>> = s.pieces.iter().map(|p| encode_piece(p, naming)).collect();
    pieces.sort_unstable();
    let mut out = vec![header];
    out.extend(pieces);
    out
}

/// Node ids grouped by a signature invariant under renaming, groups in
/// signature order.
fn node_groups(s: &StratumGraph) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let blank_pieces: Vec<Vec<u32>> = s.pieces.iter().map(|p| encode_piece(p, Naming::Blank)).collect();
    let mut h_sig: HashMap<u32, Vec<Vec<u32>>> = HashMap::new();
    let mut i_sig: HashMap<u32, Vec<Vec<u32>>> = HashMap::new();
    for (pi, p) in s.pieces.iter().enumerate() {
        for c in &p.circles {
            let circle_code = encode_circle(c, Naming::Blank);
            for pt in c.points() {
                if let BoundarySlot::Node { id } = pt.slot {
                    let mut d = blank_pieces[pi].clone();
                    d.push(u32::MAX);
                    d.extend(&circle_code);
                    d.push(u32::MAX);
                    d.extend(point_tokens(pt, Naming::Blank));
                    h_sig.entry(id).or_default().push(d);
                }
            }
        }
        for slot in &p.interior {
            if let InteriorSlot::Node { id } = slot {
                i_sig.entry(*id).or_default().push(blank_pieces[pi].clone());
            }
        }
    }
    let group = |sigs: HashMap<u32, Vec<Vec<u32>>>| -> Vec<Vec<u32>> {
        let mut by_sig: BTreeMap<Vec<Vec<u32>>, Vec<u32>> = BTreeMap::new();
        for (id, mut sig) in sigs {
            sig.sort_unstable();
            by_sig.entry(sig).or_default().push(id);
        }
        by_sig
            .into_values()
            .map(|mut ids| {
                ids.sort_unstable();
                ids
            })
            .collect()
    };
    (group(h_sig), group(i_sig))
}

/// Every renaming `old id → new id` consistent with the signature groups.
fn candidate_namings(groups: &[Vec<u32>]) -> Vec<HashMap<u32, u32>> {
    let mut offset = 0u32;
    let per_group: Vec<Vec<Vec<(u32, u32)>>> = groups
        .iter()
        .map(|ids| {
            let base = offset;
            offset += ids.len() as u32;
            ids.iter()
                .permutations(ids.len())
                .map(|perm| perm.into_iter().enumerate().map(|(k, &id)| (id, base + k as u32)).collect())
                .collect()
        })
        .collect();
    if per_group.is_empty() {
        return vec![HashMap::new()];
    }
    per_group
        .into_iter()
        .multi_cartesian_product()
        .map(|choice| choice.into_iter().flatten().collect())
        .collect()
}

fn relabel(s: &StratumGraph, h: &HashMap<u32, u32>, i: &HashMap<u32, u32>) -> StratumGraph {
    let naming = Naming::Map(h, i);
    let mut pieces: Vec<(Vec<u32>, Piece)> = s
        .pieces
        .iter()
        .map(|p| {
            let mut circles: Vec<(Vec<u32>, BoundaryCircle)> = p
                .circles
                .iter()
                .map(|c| {
                    let code = encode_circle(c, naming);
                    let c = match c {
                        BoundaryCircle::Points { points } => {
                            let mut pts: Vec<BoundaryPoint> = points
                                .iter()
                                .map(|pt| BoundaryPoint {
                                    slot: match pt.slot {
                                        BoundarySlot::Node { id } => BoundarySlot::Node { id: h[&id] },
                                        m => m,
                                    },
                                    arc_label: pt.arc_label,
                                })
                                .collect();
                            let start = min_rotation(points, naming);
                            pts.rotate_left(start);
                            BoundaryCircle::Points { points: pts }
                        }
                        other => other.clone(),
                    };
                    (code, c)
                })
                .collect();
            circles.sort_by(|a, b| a.0.cmp(&b.0));
            let mut interior: Vec<([u32; 2], InteriorSlot)> = p
                .interior
                .iter()
                .map(|slot| {
                    let new = match *slot {
                        InteriorSlot::Node { id } => InteriorSlot::Node { id: i[&id] },
                        m => m,
                    };
                    (encode_interior(slot, naming), new)
                })
                .collect();
            interior.sort_by_key(|a| a.0);
            let piece = Piece::new(
                p.genus,
                circles.into_iter().map(|c| c.1).collect(),
                interior.into_iter().map(|x| x.1).collect(),
            );
            (encode_piece(p, naming), piece)
        })
        .collect();
    pieces.sort_by(|a, b| a.0.cmp(&b.0));
    StratumGraph {
        g: s.g,
        h: s.h,
        n: s.n,
        m: s.m.clone(),
        pieces: pieces.into_iter().map(|p| p.1).collect(),
    }
}

/// Canonical representative of the isomorphism class of `s` and its key.
pub fn canonicalize(s: &StratumGraph) -> (StratumGraph, CanonicalKey) {
    let (h_groups, i_groups) = node_groups(s);
    let h_names = candidate_namings(&h_groups);
    let i_names = candidate_namings(&i_groups);
    let mut best: Option<(CanonicalKey, usize, usize)> = None;
    for (a, hn) in h_names.iter().enumerate() {
        for (b, inn) in i_names.iter().enumerate() {
            let key = encode_graph(s, Naming::Map(hn, inn));
            if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                best = Some((key, a, b));
            }
        }
    }
    let (key, a, b) = best.expect("at least one naming");
    (relabel(s, &h_names[a], &i_names[b]), key)
}

pub fn canonical_key(s: &StratumGraph) -> CanonicalKey {
    canonicalize(s).1
}
