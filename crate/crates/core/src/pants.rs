//! Pants-decomposition counts and the identification of small moduli
//! spaces with Stasheff associahedra.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::strata::{enumerate_strata, top_cyclic_orderings, DegenerationPoset};
use crate::surface_types::MarkedTopType;

/// A finite graded poset given by its covering relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceLattice {
    pub ranks: Vec<i64>,
    /// `(upper, lower)` pairs.
    pub covers: Vec<(usize, usize)>,
    pub labels: Vec<String>,
}

impl FaceLattice {
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Number of elements of each rank, lowest rank first.
    pub fn f_vector(&self) -> Vec<usize> {
        let Some(&max) = self.ranks.iter().max() else { return Vec::new() };
        let min = *self.ranks.iter().min().unwrap();
        (min..=max).map(|r| self.ranks.iter().filter(|&&x| x == r).count()).collect()
    }

    fn adjacency(&self) -> (Vec<BTreeSet<usize>>, Vec<BTreeSet<usize>>) {
        let mut down = vec![BTreeSet::new(); self.len()];
        let mut up = vec![BTreeSet::new(); self.len()];
        for &(u, l) in &self.covers {
            down[u].insert(l);
            up[l].insert(u);
        }
        (up, down)
    }

    /// Every maximal chain runs from the top rank to the bottom rank.
    pub fn is_graded(&self) -> bool {
        let (up, down) = self.adjacency();
        let (Some(&max), Some(&min)) = (self.ranks.iter().max(), self.ranks.iter().min()) else {
            return true;
        };
        (0..self.len()).all(|i| {
            (down[i].is_empty() == (self.ranks[i] == min)) && (up[i].is_empty() == (self.ranks[i] == max))
        }) && self.covers.iter().all(|&(u, l)| self.ranks[u] - self.ranks[l] == 1)
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "'"));
        let _ = writeln!(out, "  rankdir=TB;");
        for (i, label) in self.labels.iter().enumerate() {
            let _ = writeln!(
                out,
                "  n{i} [label=\"{}\\n(dim {})\"];",
                label.replace('"', "'"),
                self.ranks[i]
            );
        }
        for &(u, l) in &self.covers {
            let _ = writeln!(out, "  n{u} -> n{l};");
        }
        out.push_str("}\n");
        out
    }
}

impl From<&DegenerationPoset> for FaceLattice {
    fn from(p: &DegenerationPoset) -> Self {
        let covers: BTreeSet<(usize, usize)> = p.covers.iter().map(|c| (c.upper, c.lower)).collect();
        FaceLattice {
            ranks: p.dims.clone(),
            covers: covers.into_iter().collect(),
            labels: p
                .strata
                .iter()
                .map(|s| {
                    format!(
                        "pieces={} l0={} l1={}",
                        s.pieces.len(),
                        s.interior_node_count(),
                        s.boundary_node_count()
                    )
                })
                .collect(),
        }
    }
}

/// `(3g̃ - 3 + ñ, 2g̃ - 2 + ñ)`: decomposing curves and pairs of pants of a
/// closed surface of genus `g̃` with `ñ` punctures.
pub fn pants_counts(g_tilde: u32, n_tilde: u32) -> Result<(i64, i64)> {
    let (g, n) = (g_tilde as i64, n_tilde as i64);
    if 2 * g - 2 + n <= 0 {
        return Err(Error::domain("g_tilde", format!("(g̃,ñ) = ({g},{n}) has no pants decomposition")));
    }
    Ok((3 * g - 3 + n, 2 * g - 2 + n))
}

/// Decomposing curves and pants of a bordered surface of type `(g, h)` with
/// `n` punctures, checked against the count on its double.
pub fn pants_counts_bordered(g: u32, h: u32, n: u32) -> Result<(i64, i64)> {
    let (gi, hi, ni) = (g as i64, h as i64, n as i64);
    if h == 0 || 2 * gi + hi - 2 + ni <= 0 {
        return Err(Error::domain("h", format!("(g,h,n) = ({g},{h},{n}) has no pants decomposition")));
    }
    let bordered = (3 * gi + hi - 3 + ni, 2 * gi + hi - 2 + ni);
    let (double_curves, _) = pants_counts(2 * g + h - 1, 2 * n)?;
    if double_curves - bordered.0 != 3 * gi + 2 * hi - 3 + ni {
        return Err(Error::InternalConsistency("bordered and doubled curve counts disagree".into()));
    }
    Ok(bordered)
}

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    let (i, j) = a;
    let (k, l) = b;
    (i < k && k < j && j < l) || (k < i && i < l && l < j)
}

/// Face lattice of the associahedron of dimension `mdim`, realized as the
/// non-crossing sets of diagonals of a polygon with `mdim + 3` vertices.
/// The empty dissection is the top cell; a face with `d` diagonals has
/// dimension `mdim - d`.
pub fn associahedron(mdim: u32) -> FaceLattice {
    let vertices = mdim as usize + 3;
    let diagonals: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|i| ((i + 2)..vertices).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i == 0 && j == vertices - 1))
        .collect();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    fn extend(start: usize, current: &mut Vec<usize>, diagonals: &[(usize, usize)], out: &mut Vec<Vec<usize>>) {
        out.push(current.clone());
        for d in start..diagonals.len() {
            if current.iter().all(|&c| !crosses(diagonals[c], diagonals[d])) {
                current.push(d);
                extend(d + 1, current, diagonals, out);
                current.pop();
            }
        }
    }
    extend(0, &mut Vec::new(), &diagonals, &mut faces);
    faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: std::collections::HashMap<Vec<usize>, usize> =
        faces.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
    let mut covers = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        for d in 0..diagonals.len() {
            if f.contains(&d) {
                continue;
            }
            let mut g = f.clone();
            g.push(d);
            g.sort_unstable();
            if let Some(&j) = index.get(&g) {
                covers.push((i, j));
            }
        }
    }
    FaceLattice {
        ranks: faces.iter().map(|f| mdim as i64 - f.len() as i64).collect(),
        covers,
        labels: faces
            .iter()
            .map(|f| {
                let ds: Vec<String> = f.iter().map(|&d| format!("{}-{}", diagonals[d].0, diagonals[d].1)).collect();
                format!("{{{}}}", ds.join(","))
            })
            .collect(),
    }
}

/// Result of a graded-poset isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IsoCertificate {
    /// `mapping[i]` is the image of element `i` of the first poset.
    Isomorphic { mapping: Vec<usize> },
    /// `element`, when present, is an element of the first poset that has
    /// no admissible image.
    NotIsomorphic { reason: String, element: Option<usize> },
}

impl IsoCertificate {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoCertificate::Isomorphic { .. })
    }
}

/// Graded-poset isomorphism by backtracking over rank- and degree-compatible
/// candidates, highest rank first.
pub fn poset_isomorphism(a: &FaceLattice, b: &FaceLattice) -> IsoCertificate {
    if a.len() != b.len() {
        return IsoCertificate::NotIsomorphic {
            reason: format!("{} elements against {}", a.len(), b.len()),
            element: None,
        };
    }
    let rank_sorted = |x: &FaceLattice| {
        let mut r = x.ranks.clone();
        r.sort_unstable();
        r
    };
    if rank_sorted(a) != rank_sorted(b) || a.covers.len() != b.covers.len() {
        return IsoCertificate::NotIsomorphic {
            reason: format!(
                "f-vectors {:?} and {:?}, {} and {} covers",
                a.f_vector(),
                b.f_vector(),
                a.covers.len(),
                b.covers.len()
            ),
            element: None,
        };
    }
    let (a_up, a_down) = a.adjacency();
    let (b_up, b_down) = b.adjacency();
    let sig = |r: i64, up: &BTreeSet<usize>, down: &BTreeSet<usize>| (r, up.len(), down.len());
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(a.ranks[i]));

    struct Search<'a> {
        order: Vec<usize>,
        a_up: &'a [BTreeSet<usize>],
        a_down: &'a [BTreeSet<usize>],
        b_up: &'a [BTreeSet<usize>],
        b_down: &'a [BTreeSet<usize>],
        candidates: Vec<Vec<usize>>,
        map: Vec<Option<usize>>,
        used: Vec<bool>,
        deepest: usize,
    }

    impl Search<'_> {
        fn consistent(&self, i: usize, j: usize) -> bool {
            for &x in self.a_up[i].iter().chain(self.a_down[i].iter()) {
                if let Some(y) = self.map[x] {
                    let related = self.b_up[j].contains(&y) || self.b_down[j].contains(&y);
                    let same_direction = self.a_up[i].contains(&x) == self.b_up[j].contains(&y);
                    if !related || !same_direction {
                        return false;
                    }
                }
            }
            // Mapped neighbours of j must come from neighbours of i.
            for &y in self.b_up[j].iter().chain(self.b_down[j].iter()) {
                if let Some(x) = self.map.iter().position(|m| *m == Some(y)) {
                    if !self.a_up[i].contains(&x) && !self.a_down[i].contains(&x) {
                        return false;
                    }
                }
            }
            true
        }

        fn run(&mut self, k: usize) -> bool {
            self.deepest = self.deepest.max(k);
            if k == self.order.len() {
                return true;
            }
            let i = self.order[k];
            for idx in 0..self.candidates[i].len() {
                let j = self.candidates[i][idx];
                if self.used[j] || !self.consistent(i, j) {
                    continue;
                }
                self.map[i] = Some(j);
                self.used[j] = true;
                if self.run(k + 1) {
                    return true;
                }
                self.map[i] = None;
                self.used[j] = false;
            }
            false
        }
    }

    let candidates: Vec<Vec<usize>> = (0..a.len())
        .map(|i| {
            (0..b.len())
                .filter(|&j| sig(a.ranks[i], &a_up[i], &a_down[i]) == sig(b.ranks[j], &b_up[j], &b_down[j]))
                .collect()
        })
        .collect();
    if let Some(i) = (0..a.len()).find(|&i| candidates[i].is_empty()) {
        return IsoCertificate::NotIsomorphic {
            reason: format!(
                "no element of matching rank and degree for rank {} with {} up and {} down covers",
                a.ranks[i],
                a_up[i].len(),
                a_down[i].len()
            ),
            element: Some(i),
        };
    }
    let mut search = Search {
        order,
        a_up: &a_up,
        a_down: &a_down,
        b_up: &b_up,
        b_down: &b_down,
        candidates,
        map: vec![None; a.len()],
        used: vec![false; b.len()],
        deepest: 0,
    };
    if search.run(0) {
        IsoCertificate::Isomorphic {
            mapping: search.map.into_iter().map(|m| m.expect("complete mapping")).collect(),
        }
    } else {
        let stuck = search.order[search.deepest.min(search.order.len() - 1)];
        IsoCertificate::NotIsomorphic {
            reason: "covering relations admit no bijection".into(),
            element: Some(stuck),
        }
    }
}

/// Checks a mapping returned by [`poset_isomorphism`].
pub fn verify_isomorphism(a: &FaceLattice, b: &FaceLattice, mapping: &[usize]) -> bool {
    let image: BTreeSet<usize> = mapping.iter().copied().collect();
    if mapping.len() != a.len() || image.len() != b.len() {
        return false;
    }
    let bc: BTreeSet<(usize, usize)> = b.covers.iter().copied().collect();
    let mapped: BTreeSet<(usize, usize)> = a.covers.iter().map(|&(u, l)| (mapping[u], mapping[l])).collect();
    (0..a.len()).all(|i| a.ranks[i] == b.ranks[mapping[i]]) && mapped == bc
}

/// Compares the degeneration poset of `t` with the associahedron of the
/// same dimension.
pub fn check_associahedron_identification(t: &MarkedTopType) -> Result<IsoCertificate> {
    let poset = enumerate_strata(t)?;
    let mdim = poset.dims.first().copied().unwrap_or(0);
    let k = associahedron(u32::try_from(mdim).map_err(|_| Error::domain("type", "negative dimension"))?);
    Ok(poset_isomorphism(&FaceLattice::from(&poset), &k))
}

/// The `(0,3)` strata poset against `K₅`.
pub fn check_k5_identification() -> Result<IsoCertificate> {
    check_associahedron_identification(&MarkedTopType::new(0, 3, 0, vec![0, 0, 0])?)
}

/// `(m - 1)!` components of the moduli of discs with `m` boundary points.
pub fn disc_component_count(m: u32) -> Result<BigInt> {
    if m < 3 {
        return Err(Error::domain("m", format!("need at least 3 boundary points, got {m}")));
    }
    Ok((1..m).map(BigInt::from).product())
}

/// The same count read off the top-dimensional strata of the enumeration.
pub fn disc_components_from_strata(m: u32) -> Result<usize> {
    if m < 3 {
        return Err(Error::domain("m", format!("need at least 3 boundary points, got {m}")));
    }
    Ok(top_cyclic_orderings(&enumerate_strata(&MarkedTopType::new(0, 1, 0, vec![m])?)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pants() {
        assert_eq!(pants_counts(2, 0).unwrap(), (3, 2));
        assert_eq!(pants_counts(0, 4).unwrap(), (1, 2));
        assert_eq!(pants_counts(1, 1).unwrap(), (1, 1));
        assert!(pants_counts(1, 0).is_err());
        assert_eq!(pants_counts_bordered(0, 3, 0).unwrap(), (0, 1));
        assert_eq!(pants_counts_bordered(1, 1, 0).unwrap(), (1, 1));
        assert_eq!(pants_counts_bordered(0, 2, 1).unwrap(), (0, 1));
    }

    #[test]
    fn f_vectors() {
        assert_eq!(associahedron(3).f_vector(), vec![14, 21, 9, 1]);
        assert_eq!(associahedron(2).f_vector(), vec![5, 5, 1]);
        assert_eq!(associahedron(1).f_vector(), vec![2, 1]);
        assert!(associahedron(3).is_graded());
    }

    /// Full bracketings of a word of `letters` letters.
    fn bracketings(letters: usize) -> Vec<String> {
        if letters == 1 {
            return vec!["x".into()];
        }
        let mut out = Vec::new();
        for split in 1..letters {
            for l in bracketings(split) {
                for r in bracketings(letters - split) {
                    out.push(format!("({l}{r})"));
                }
            }
        }
        out
    }

    #[test]
    fn vertices_are_bracketings() {
        // The associahedron of dimension d has the bracketings of d + 2 letters as vertices.
        for d in 0..=6u32 {
            let k = associahedron(d);
            assert_eq!(k.f_vector()[0], bracketings(d as usize + 2).len(), "d = {d}");
        }
    }

    #[test]
    fn identifications() {
        let k5 = check_k5_identification().unwrap();
        assert!(k5.is_isomorphic());
        let pentagon = check_associahedron_identification(&MarkedTopType::new(0, 2, 0, vec![2, 0]).unwrap()).unwrap();
        assert!(pentagon.is_isomorphic());
        let segment = check_associahedron_identification(&MarkedTopType::new(0, 2, 0, vec![1, 0]).unwrap()).unwrap();
        assert!(segment.is_isomorphic());
        if let IsoCertificate::Isomorphic { mapping } = k5 {
            let poset = enumerate_strata(&MarkedTopType::new(0, 3, 0, vec![0, 0, 0]).unwrap()).unwrap();
            assert!(verify_isomorphism(&FaceLattice::from(&poset), &associahedron(3), &mapping));
        }
    }

    #[test]
    fn corrupted_poset_is_rejected() {
        let k = associahedron(3);
        let mut bad = k.clone();
        // Reroute one edge-to-vertex cover so that degrees are preserved
        // elsewhere but the incidence structure breaks.
        let pos = bad.covers.iter().position(|&(u, _)| bad.ranks[u] == 1).unwrap();
        let (u, l) = bad.covers[pos];
        let other = (0..bad.len())
            .find(|&v| bad.ranks[v] == 0 && v != l && !bad.covers.contains(&(u, v)))
            .unwrap();
        bad.covers[pos] = (u, other);
        let cert = poset_isomorphism(&bad, &k);
        assert!(!cert.is_isomorphic());
        let mut fewer = k.clone();
        fewer.covers.pop();
        assert!(matches!(poset_isomorphism(&fewer, &k), IsoCertificate::NotIsomorphic { .. }));
    }

    #[test]
    fn disc_components() {
        assert_eq!(disc_component_count(3).unwrap(), BigInt::from(2));
        assert_eq!(disc_component_count(4).unwrap(), BigInt::from(6));
        assert_eq!(disc_component_count(5).unwrap(), BigInt::from(24));
        assert!(disc_component_count(2).is_err());
        assert_eq!(disc_components_from_strata(4).unwrap(), 6);
    }

    #[test]
    fn dot_export() {
        let dot = associahedron(1).to_dot("K3");
        assert!(dot.starts_with("digraph \"K3\""));
        assert_eq!(dot.matches("->").count(), 2);
    }
}
