//! Single-node degenerations of a stratum.
//!
//! Each move pinches one curve or arc on one piece: an empty circle
//! collapses (type E), an interior simple closed curve becomes an interior
//! node, or a proper arc becomes a boundary node of type H.

use super::graph::{is_piece_stable, BoundaryCircle, BoundaryPoint, BoundarySlot, InteriorSlot, Piece, StratumGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    /// An empty boundary circle shrinks to a point.
    CollapseCircle,
    /// A simple closed curve in the interior is pinched.
    InteriorNode,
    /// Two boundary circles touch (normalization keeps both preimages on one circle).
    H1,
    /// A circle touches itself, normalization connected.
    H2,
    /// A circle touches itself, normalization disconnected.
    H3,
}

impl MoveKind {
    pub fn codimension(self) -> i64 {
        match self {
            MoveKind::InteriorNode => 2,
            _ => 1,
        }
    }
}

/// Material that can be distributed between the two sides of a separating curve.
#[derive(Clone)]
enum Item {
    Circle(BoundaryCircle),
    Interior(InteriorSlot),
}

/// Every way of splitting `items` and `genus` between two sides.
fn bipartitions(items: &[Item], genus: u32) -> Vec<(u32, Vec<Item>, u32, Vec<Item>)> {
    let count = items.len();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << count) {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (k, it) in items.iter().enumerate() {
            if mask >> k & 1 == 1 {
                a.push(it.clone());
            } else {
                b.push(it.clone());
            }
        }
        for ga in 0..=genus {
            out.push((ga, a.clone(), genus - ga, b.clone()));
        }
    }
    out
}

fn build_piece(genus: u32, items: Vec<Item>) -> Piece {
    let mut circles = Vec::new();
    let mut interior = Vec::new();
    for it in items {
        match it {
            Item::Circle(c) => circles.push(c),
            Item::Interior(s) => interior.push(s),
        }
    }
    Piece::new(genus, circles, interior)
}

fn make_circle(points: Vec<BoundaryPoint>) -> BoundaryCircle {
    BoundaryCircle::Points { points }
}

/// Cuts circle `c` by an arc from gap `i` to gap `j` (`i ≤ j`). Returns the
/// two resulting circles, each closed up by one endpoint of node `id`.
fn split_circle(c: &BoundaryCircle, i: usize, j: usize, id: u32) -> (BoundaryCircle, BoundaryCircle) {
    let gaps = c.gap_labels();
    let pts = c.points();
    let k = pts.len();
    let node = BoundarySlot::Node { id };
    let mut first: Vec<BoundaryPoint> = pts[i..j].to_vec();
    first.push(BoundaryPoint {
        slot: node,
        arc_label: gaps[i],
    });
    let mut second: Vec<BoundaryPoint> = Vec::with_capacity(k - (j - i) + 1);
    second.extend_from_slice(&pts[j..]);
    second.extend_from_slice(&pts[..i]);
    second.push(BoundaryPoint {
        slot: node,
        arc_label: if k == 0 { gaps[0] } else { gaps[j % k] },
    });
    (make_circle(first), make_circle(second))
}

/// Joins circles `c` (at gap `i`) and `d` (at gap `j`) by an arc.
fn merge_circles(c: &BoundaryCircle, i: usize, d: &BoundaryCircle, j: usize, id: u32) -> BoundaryCircle {
    let (gc, gd) = (c.gap_labels(), d.gap_labels());
    let (pc, pd) = (c.points(), d.points());
    let node = BoundarySlot::Node { id };
    let mut out = Vec::with_capacity(pc.len() + pd.len() + 2);
    out.extend_from_slice(&pc[i.min(pc.len())..]);
    out.extend_from_slice(&pc[..i.min(pc.len())]);
    out.push(BoundaryPoint {
        slot: node,
        arc_label: gd[j],
    });
    out.extend_from_slice(&pd[j.min(pd.len())..]);
    out.extend_from_slice(&pd[..j.min(pd.len())]);
    out.push(BoundaryPoint {
        slot: node,
        arc_label: gc[i],
    });
    make_circle(out)
}

/// Gap pairs `(i, j)` with `i ≤ j` on a circle with `k` points.
fn gap_pairs(k: usize) -> Vec<(usize, usize)> {
    if k == 0 {
        return vec![(0, 0)];
    }
    (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect()
}

/// All replacements of one piece by its single-node degenerations.
fn degenerate_piece(p: &Piece, next_h: u32, next_i: u32) -> Vec<(MoveKind, Vec<Piece>)> {
    let mut out = Vec::new();

    for (ci, c) in p.circles.iter().enumerate() {
        if let BoundaryCircle::Empty { label } = c {
            let mut q = p.clone();
            q.circles[ci] = BoundaryCircle::Collapsed { label: *label };
            out.push((MoveKind::CollapseCircle, vec![q]));
        }
    }

    let node_i = InteriorSlot::Node { id: next_i };
    if p.genus >= 1 {
        let mut interior = p.interior.clone();
        interior.extend([node_i, node_i]);
        out.push((MoveKind::InteriorNode, vec![Piece::new(p.genus - 1, p.circles.clone(), interior)]));
    }
    let items: Vec<Item> = p
        .circles
        .iter()
        .cloned()
        .map(Item::Circle)
        .chain(p.interior.iter().copied().map(Item::Interior))
        .collect();
    for (ga, mut a, gb, mut b) in bipartitions(&items, p.genus) {
        a.push(Item::Interior(node_i));
        b.push(Item::Interior(node_i));
        out.push((MoveKind::InteriorNode, vec![build_piece(ga, a), build_piece(gb, b)]));
    }

    for (ci, c) in p.circles.iter().enumerate() {
        if c.is_collapsed() {
            continue;
        }
        let rest: Vec<Item> = p
            .circles
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != ci)
            .map(|(_, c)| Item::Circle(c.clone()))
            .chain(p.interior.iter().copied().map(Item::Interior))
            .collect();
        for (i, j) in gap_pairs(c.points().len()) {
            let (c1, c2) = split_circle(c, i, j, next_h);
            if p.genus >= 1 {
                let mut circles: Vec<BoundaryCircle> = p.circles.clone();
                circles[ci] = c1.clone();
                circles.push(c2.clone());
                out.push((MoveKind::H2, vec![Piece::new(p.genus - 1, circles, p.interior.clone())]));
            }
            for (ga, mut a, gb, mut b) in bipartitions(&rest, p.genus) {
                a.push(Item::Circle(c1.clone()));
                b.push(Item::Circle(c2.clone()));
                out.push((MoveKind::H3, vec![build_piece(ga, a), build_piece(gb, b)]));
            }
        }
        for (di, d) in p.circles.iter().enumerate().skip(ci + 1) {
            if d.is_collapsed() {
                continue;
            }
            let gaps_c = c.points().len().max(1);
            let gaps_d = d.points().len().max(1);
            for i in 0..gaps_c {
                for j in 0..gaps_d {
                    let merged = merge_circles(c, i, d, j, next_h);
                    let mut circles: Vec<BoundaryCircle> = p
                        .circles
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != ci && k != di)
                        .map(|(_, c)| c.clone())
                        .collect();
                    circles.push(merged);
                    out.push((MoveKind::H1, vec![Piece::new(p.genus, circles, p.interior.clone())]));
                }
            }
        }
    }
    out
}

/// Every stable single-node degeneration of `s`, not yet canonicalized.
pub fn degenerations(s: &StratumGraph) -> Vec<(MoveKind, StratumGraph)> {
    let (next_h, next_i) = s.max_node_ids();
    let mut out = Vec::new();
    for (pi, p) in s.pieces.iter().enumerate() {
        for (kind, replacement) in degenerate_piece(p, next_h, next_i) {
            if !replacement.iter().all(is_piece_stable) {
                continue;
            }
            let mut pieces: Vec<Piece> = s
                .pieces
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != pi)
                .map(|(_, q)| q.clone())
                .collect();
            pieces.extend(replacement);
            out.push((
                kind,
                StratumGraph {
                    g: s.g,
                    h: s.h,
                    n: s.n,
                    m: s.m.clone(),
                    pieces,
                },
            ));
        }
    }
    out
}
