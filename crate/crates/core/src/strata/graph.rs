//! Decorated dual graphs of prestable marked bordered surfaces.
//!
//! A stratum is described by the components of its normalization
//! ([`Piece`]s). Boundary circles of a piece carry a cyclically ordered
//! list of special points. Every point records the boundary label of the
//! arc that leaves it in the direction of the boundary orientation, so the
//! labelling of the circles obtained by smoothing all boundary nodes is
//! part of the data. Nodes are implicit: a node id appears on exactly two
//! slots.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::index::{arithmetic_genus, DoubleComponent};
use crate::surface_types::MarkedTopType;

/// A special point on a boundary circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundarySlot {
    /// Marked point `q^circle_index` (both 1-based).
    Marked { circle: u32, index: u32 },
    /// Endpoint of the boundary node `id` (type H).
    Node { id: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub slot: BoundarySlot,
    /// Label of the boundary circle `B^i` that the outgoing arc belongs to.
    pub arc_label: u32,
}

/// One boundary circle of a piece of the normalization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryCircle {
    /// A circle shrunk to a point (type E node). Carries no slots.
    Collapsed { label: u32 },
    /// A circle with no special points; it survives smoothing unchanged.
    Empty { label: u32 },
    /// A circle with special points in boundary-orientation order.
    /// Compared up to rotation.
    Points { points: Vec<BoundaryPoint> },
}

impl BoundaryCircle {
    pub fn is_collapsed(&self) -> bool {
        matches!(self, BoundaryCircle::Collapsed { .. })
    }

    pub fn points(&self) -> &[BoundaryPoint] {
        match self {
            BoundaryCircle::Points { points } => points,
            _ => &[],
        }
    }

    /// Labels of the gaps between consecutive points; gap `i` precedes point `i`.
    pub(crate) fn gap_labels(&self) -> Vec<u32> {
        match self {
            BoundaryCircle::Collapsed { .. } => Vec::new(),
            BoundaryCircle::Empty { label } => vec![*label],
            BoundaryCircle::Points { points } => {
                let k = points.len();
                (0..k).map(|i| points[(i + k - 1) % k].arc_label).collect()
            }
        }
    }
}

/// A special point in the interior of a piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InteriorSlot {
    /// Interior marked point `p_index` (1-based).
    Marked { index: u32 },
    /// Endpoint of the interior node `id`.
    Node { id: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    Closed,
    Bordered,
}

/// A connected component of the normalization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub genus: u32,
    pub kind: PieceKind,
    pub circles: Vec<BoundaryCircle>,
    pub interior: Vec<InteriorSlot>,
}

impl Piece {
    pub fn new(genus: u32, circles: Vec<BoundaryCircle>, interior: Vec<InteriorSlot>) -> Self {
        let kind = if circles.is_empty() {
            PieceKind::Closed
        } else {
            PieceKind::Bordered
        };
        Piece {
            genus,
            kind,
            circles,
            interior,
        }
    }

    pub fn open_circles(&self) -> usize {
        self.circles.iter().filter(|c| !c.is_collapsed()).count()
    }

    pub fn collapsed_circles(&self) -> usize {
        self.circles.iter().filter(|c| c.is_collapsed()).count()
    }

    pub fn boundary_specials(&self) -> usize {
        self.circles.iter().map(|c| c.points().len()).sum()
    }

    /// Interior special points, counting each collapsed circle as one.
    pub fn interior_specials(&self) -> usize {
        self.interior.len() + self.collapsed_circles()
    }

    /// Real dimension of the moduli of this piece with its special points.
    pub fn moduli_dim(&self) -> i64 {
        6 * self.genus as i64 + 3 * self.open_circles() as i64 - 6
            + 2 * self.interior_specials() as i64
            + self.boundary_specials() as i64
    }
}

pub fn is_piece_stable(p: &Piece) -> bool {
    match p.kind {
        PieceKind::Closed => 2 * p.genus as i64 - 2 + p.interior.len() as i64 > 0,
        PieceKind::Bordered => {
            4 * p.genus as i64 + 2 * p.open_circles() as i64 - 4
                + 2 * p.interior_specials() as i64
                + p.boundary_specials() as i64
                > 0
        }
    }
}

/// Decorated dual graph of a stratum. `h = 0` (with empty `m`) denotes a
/// closed nodal curve, used for the closed-surface enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumGraph {
    pub g: u32,
    pub h: u32,
    pub n: u32,
    pub m: Vec<u32>,
    pub pieces: Vec<Piece>,
}

/// A circle obtained by smoothing every boundary node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedCircle {
    pub label: u32,
    pub collapsed: bool,
    /// Slots met along the smoothed circle, starting from the smallest.
    pub slots: Vec<BoundarySlot>,
}

/// Node-type counts entering the genus and boundary-count formulas.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCensus {
    pub connecting_interior: u32,
    pub separating_interior: u32,
    pub e: u32,
    pub h1: u32,
    pub h2: u32,
    pub h3: u32,
}

impl StratumGraph {
    pub fn marked_type(&self) -> Result<MarkedTopType> {
        MarkedTopType::new(self.g, self.h, self.n, self.m.clone())
    }

    pub fn is_closed_curve(&self) -> bool {
        self.h == 0
    }

    /// Number of interior nodes `l₀`.
    pub fn interior_node_count(&self) -> usize {
        self.interior_nodes().len()
    }

    /// Number of boundary nodes `l₁`: H nodes plus collapsed circles.
    pub fn boundary_node_count(&self) -> usize {
        self.h_nodes().len() + self.collapsed_count()
    }

    pub fn collapsed_count(&self) -> usize {
        self.pieces.iter().map(Piece::collapsed_circles).sum()
    }

    /// Interior nodes as `id → (piece, piece)`.
    pub fn interior_nodes(&self) -> BTreeMap<u32, Vec<usize>> {
        let mut out: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (pi, p) in self.pieces.iter().enumerate() {
            for s in &p.interior {
                if let InteriorSlot::Node { id } = s {
                    out.entry(*id).or_default().push(pi);
                }
            }
        }
        out
    }

    /// H nodes as `id → [(piece, circle, position)]`.
    pub fn h_nodes(&self) -> BTreeMap<u32, Vec<(usize, usize, usize)>> {
        let mut out: BTreeMap<u32, Vec<(usize, usize, usize)>> = BTreeMap::new();
        for (pi, p) in self.pieces.iter().enumerate() {
            for (ci, c) in p.circles.iter().enumerate() {
                for (k, pt) in c.points().iter().enumerate() {
                    if let BoundarySlot::Node { id } = pt.slot {
                        out.entry(id).or_default().push((pi, ci, k));
                    }
                }
            }
        }
        out
    }

    pub(crate) fn max_node_ids(&self) -> (u32, u32) {
        let h = self.h_nodes().keys().next_back().map_or(0, |k| k + 1);
        let i = self.interior_nodes().keys().next_back().map_or(0, |k| k + 1);
        (h, i)
    }

    /// Real dimension of the stratum, computed piece by piece and checked
    /// against `moduli_dim - 2 l₀ - l₁`.
    pub fn stratum_dim(&self) -> Result<i64> {
        let by_pieces: i64 = self.pieces.iter().map(Piece::moduli_dim).sum();
        let total = 6 * self.g as i64 + 3 * self.h as i64 - 6
            + 2 * self.n as i64
            + self.m.iter().map(|&x| x as i64).sum::<i64>();
        let by_codim = total - 2 * self.interior_node_count() as i64 - self.boundary_node_count() as i64;
        if by_pieces != by_codim {
            return Err(Error::InternalConsistency(format!(
                "stratum dimension {by_pieces} from pieces, {by_codim} from node count"
            )));
        }
        Ok(by_pieces)
    }

    /// Structural checks: node pairing, marked labels, connectivity.
    fn check_structure(&self) -> Result<()> {
        if self.m.len() != self.h as usize {
            return Err(Error::Validation(format!(
                "m has {} entries but h = {}",
                self.m.len(),
                self.h
            )));
        }
        if self.pieces.is_empty() {
            return Err(Error::Validation("no pieces".into()));
        }
        for (pi, p) in self.pieces.iter().enumerate() {
            let expected = if p.circles.is_empty() {
                PieceKind::Closed
            } else {
                PieceKind::Bordered
            };
            if p.kind != expected {
                return Err(Error::Validation(format!("piece {pi} has inconsistent kind")));
            }
            if self.h == 0 && p.kind == PieceKind::Bordered {
                return Err(Error::Validation("closed curve with a bordered piece".into()));
            }
        }
        for (id, ends) in self.h_nodes() {
            if ends.len() != 2 {
                return Err(Error::Validation(format!(
                    "boundary node {id} has {} endpoints",
                    ends.len()
                )));
            }
        }
        for (id, ends) in self.interior_nodes() {
            if ends.len() != 2 {
                return Err(Error::Validation(format!(
                    "interior node {id} has {} endpoints",
                    ends.len()
                )));
            }
        }
        let mut interior_marked = BTreeSet::new();
        let mut boundary_marked = BTreeSet::new();
        for p in &self.pieces {
            for s in &p.interior {
                if let InteriorSlot::Marked { index } = s {
                    if !interior_marked.insert(*index) {
                        return Err(Error::Validation(format!("p_{index} appears twice")));
                    }
                }
            }
            for c in &p.circles {
                for pt in c.points() {
                    if let BoundarySlot::Marked { circle, index } = pt.slot {
                        if !boundary_marked.insert((circle, index)) {
                            return Err(Error::Validation(format!("q^{circle}_{index} appears twice")));
                        }
                    }
                }
            }
        }
        let want_interior: BTreeSet<u32> = (1..=self.n).collect();
        if interior_marked != want_interior {
            return Err(Error::Validation("interior marked points do not match n".into()));
        }
        let want_boundary: BTreeSet<(u32, u32)> = self
            .m
            .iter()
            .enumerate()
            .flat_map(|(i, &mi)| (1..=mi).map(move |k| (i as u32 + 1, k)))
            .collect();
        if boundary_marked != want_boundary {
            return Err(Error::Validation("boundary marked points do not match m".into()));
        }
        let mut uf = UnionFind::new(self.pieces.len());
        for ends in self.interior_nodes().values() {
            uf.union(ends[0], ends[1]);
        }
        for ends in self.h_nodes().values() {
            uf.union(ends[0].0, ends[1].0);
        }
        if uf.components() != 1 {
            return Err(Error::Validation("dual graph is disconnected".into()));
        }
        Ok(())
    }

    /// Full validation: structure, boundary labels, stability and total type.
    pub fn validate(&self) -> Result<()> {
        self.check_structure()?;
        self.smooth_boundary()?;
        for (pi, p) in self.pieces.iter().enumerate() {
            if !is_piece_stable(p) {
                return Err(Error::Validation(format!("piece {pi} is unstable")));
            }
        }
        let (g, h) = self.total_type()?;
        if (g, h) != (self.g, self.h) {
            return Err(Error::Validation(format!(
                "graph has type ({g},{h}) but declares ({},{})",
                self.g, self.h
            )));
        }
        Ok(())
    }

    /// Smooths every H node by the orientation-compatible resplice and
    /// returns the resulting circles together with the collapsed ones.
    pub fn smooth_boundary(&self) -> Result<Vec<ResolvedCircle>> {
        let (slots, succ, label_of) = self.boundary_arrays();
        let partner = self.partner_map(&slots)?;
        let count = slots.len();
        let mut seen = vec![false; count];
        let mut out = Vec::new();
        for start in 0..count {
            if seen[start] {
                continue;
            }
            let label = label_of[start];
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                if label_of[x] != label {
                    return Err(Error::Validation(format!(
                        "smoothed circle through {:?} carries labels {} and {}",
                        slots[x], label, label_of[x]
                    )));
                }
                if let BoundarySlot::Marked { circle, .. } = slots[x] {
                    if circle != label {
                        return Err(Error::Validation(format!(
                            "marked point {:?} lies on smoothed circle labelled {label}",
                            slots[x]
                        )));
                    }
                }
                cycle.push(slots[x]);
                let y = succ[x];
                x = partner[y].unwrap_or(y);
            }
            if x != start {
                return Err(Error::Validation("boundary resplice is not a permutation".into()));
            }
            let min_pos = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
            cycle.rotate_left(min_pos);
            out.push(ResolvedCircle {
                label,
                collapsed: false,
                slots: cycle,
            });
        }
        for p in &self.pieces {
            for c in &p.circles {
                match c {
                    BoundaryCircle::Collapsed { label } => out.push(ResolvedCircle {
                        label: *label,
                        collapsed: true,
                        slots: Vec::new(),
                    }),
                    BoundaryCircle::Empty { label } => out.push(ResolvedCircle {
                        label: *label,
                        collapsed: false,
                        slots: Vec::new(),
                    }),
                    BoundaryCircle::Points { .. } => {}
                }
            }
        }
        let labels: BTreeSet<u32> = out.iter().map(|c| c.label).collect();
        let want: BTreeSet<u32> = (1..=self.h).collect();
        if labels.len() != out.len() || labels != want {
            return Err(Error::Validation(format!(
                "smoothing yields labels {:?}, expected each of 1..={} once",
                out.iter().map(|c| c.label).collect::<Vec<_>>(),
                self.h
            )));
        }
        out.sort_by_key(|c| c.label);
        Ok(out)
    }

    /// Flattened boundary points with successor map and outgoing-arc labels.
    fn boundary_arrays(&self) -> (Vec<BoundarySlot>, Vec<usize>, Vec<u32>) {
        let mut slots = Vec::new();
        let mut succ = Vec::new();
        let mut labels = Vec::new();
        for p in &self.pieces {
            for c in &p.circles {
                let pts = c.points();
                let base = slots.len();
                for (k, pt) in pts.iter().enumerate() {
                    slots.push(pt.slot);
                    succ.push(base + (k + 1) % pts.len());
                    labels.push(pt.arc_label);
                }
            }
        }
        (slots, succ, labels)
    }

    fn partner_map(&self, slots: &[BoundarySlot]) -> Result<Vec<Option<usize>>> {
        let mut by_id: HashMap<u32, Vec<usize>> = HashMap::new();
        for (i, s) in slots.iter().enumerate() {
            if let BoundarySlot::Node { id } = s {
                by_id.entry(*id).or_default().push(i);
            }
        }
        let mut partner = vec![None; slots.len()];
        for (id, ends) in by_id {
            if ends.len() != 2 {
                return Err(Error::Validation(format!(
                    "boundary node {id} cannot be resolved: {} endpoints",
                    ends.len()
                )));
            }
            partner[ends[0]] = Some(ends[1]);
            partner[ends[1]] = Some(ends[0]);
        }
        Ok(partner)
    }

    /// Total type `(g, h)`. `h` is counted by smoothing, `g` through the
    /// arithmetic genus of the complex double; the node-type formulas are
    /// evaluated independently and must agree.
    pub fn total_type(&self) -> Result<(u32, u32)> {
        let by_double = self.total_type_by_double()?;
        let (census, by_census) = self.total_type_by_census()?;
        if by_double != by_census {
            return Err(Error::InternalConsistency(format!(
                "type {:?} from the double, {:?} from node types {:?}",
                by_double, by_census, census
            )));
        }
        Ok(by_double)
    }

    fn total_type_by_double(&self) -> Result<(u32, u32)> {
        let l0 = self.interior_node_count() as i64;
        if self.is_closed_curve() {
            let g = self
                .pieces
                .iter()
                .map(|p| p.genus as i64 - 1)
                .sum::<i64>()
                + l0
                + 1;
            return u32::try_from(g)
                .map(|g| (g, 0))
                .map_err(|_| Error::InternalConsistency(format!("negative arithmetic genus {g}")));
        }
        let parts: Vec<DoubleComponent> = self
            .pieces
            .iter()
            .map(|p| match p.kind {
                PieceKind::Closed => DoubleComponent::Closed { genus: p.genus },
                PieceKind::Bordered => DoubleComponent::Bordered {
                    genus: p.genus,
                    circles: p.open_circles() as u32,
                },
            })
            .collect();
        let g_tilde = arithmetic_genus(&parts, l0 as u64, self.boundary_node_count() as u64)
            .to_i64()
            .ok_or_else(|| Error::InternalConsistency("arithmetic genus out of range".into()))?;
        let h = self.smooth_boundary()?.len() as i64;
        let twice_g = g_tilde + 1 - h;
        if twice_g < 0 || twice_g % 2 != 0 {
            return Err(Error::InternalConsistency(format!(
                "double genus {g_tilde} incompatible with h = {h}"
            )));
        }
        Ok(((twice_g / 2) as u32, h as u32))
    }

    /// Node-type census with interior nodes processed first, then H nodes
    /// in slot order, each classified against the partially smoothed surface.
    pub fn node_census(&self) -> Result<NodeCensus> {
        Ok(self.total_type_by_census()?.0)
    }

    fn total_type_by_census(&self) -> Result<(NodeCensus, (u32, u32))> {
        let mut census = NodeCensus::default();
        let mut uf = UnionFind::new(self.pieces.len());
        for ends in self.interior_nodes().values() {
            if ends.len() != 2 {
                return Err(Error::Validation("unpaired interior node".into()));
            }
            if uf.find(ends[0]) == uf.find(ends[1]) {
                census.connecting_interior += 1;
            } else {
                census.separating_interior += 1;
                uf.union(ends[0], ends[1]);
            }
        }
        census.e = self.collapsed_count() as u32;

        let (slots, succ, _) = self.boundary_arrays();
        let partner = self.partner_map(&slots)?;
        let piece_of: Vec<usize> = self
            .pieces
            .iter()
            .enumerate()
            .flat_map(|(pi, p)| std::iter::repeat_n(pi, p.boundary_specials()))
            .collect();
        // next[x]: start of the arc following the arc that starts at x.
        let mut next = succ.clone();
        let mut prev = vec![0; next.len()];
        for (x, &y) in next.iter().enumerate() {
            prev[y] = x;
        }
        let mut done = vec![false; slots.len()];
        for a in 0..slots.len() {
            let Some(b) = partner[a] else { continue };
            if done[a] {
                continue;
            }
            done[a] = true;
            done[b] = true;
            let same_cycle = {
                let mut x = next[a];
                let mut found = x == b;
                while x != a && !found {
                    x = next[x];
                    found = x == b;
                }
                found
            };
            if same_cycle {
                census.h1 += 1;
            } else if uf.find(piece_of[a]) == uf.find(piece_of[b]) {
                census.h2 += 1;
            } else {
                census.h3 += 1;
                uf.union(piece_of[a], piece_of[b]);
            }
            // The arc ending at a continues along the arc leaving b, and vice versa.
            let (u, v) = (prev[a], prev[b]);
            next[u] = b;
            next[v] = a;
            prev[b] = u;
            prev[a] = v;
        }

        let genus_sum: i64 = self.pieces.iter().map(|p| p.genus as i64).sum();
        let g = genus_sum + census.connecting_interior as i64 + census.h2 as i64;
        if self.is_closed_curve() {
            return Ok((census, (g as u32, 0)));
        }
        let open: i64 = self.pieces.iter().map(|p| p.open_circles() as i64).sum();
        let h = open + census.e as i64 + census.h1 as i64 - census.h2 as i64 - census.h3 as i64;
        if h < 0 {
            return Err(Error::InternalConsistency(format!("negative boundary count {h}")));
        }
        Ok((census, (g as u32, h as u32)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("stratum graphs always serialize")
    }

    /// Decodes and validates a graph from its JSON encoding.
    pub fn from_json(s: &str) -> Result<Self> {
        let graph: StratumGraph =
            serde_json::from_str(s).map_err(|e| Error::Validation(format!("malformed stratum JSON: {e}")))?;
        graph.validate()?;
        Ok(graph)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}
