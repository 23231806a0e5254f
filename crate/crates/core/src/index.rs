//! Dimension and index formulas: moduli dimensions, Fredholm indices of the
//! linearized Cauchy–Riemann operator, virtual dimensions, deformation
//! bookkeeping at a stratum, Maslov index arithmetic and the orientability
//! criterion. Everything is computed over `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::strata::StratumGraph;
use crate::surface_types::MarkedTopType;

/// Dimensions of the pieces of the deformation space at a stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationDims {
    /// Deformations inside the stratum.
    #[serde(with = "crate::bigint_serde")]
    pub deform: BigInt,
    /// Smoothing parameters of interior nodes, `2 l₀`.
    #[serde(with = "crate::bigint_serde")]
    pub interior: BigInt,
    /// Half-space smoothing parameters of boundary nodes, `l₁`.
    #[serde(with = "crate::bigint_serde")]
    pub boundary: BigInt,
    /// Infinitesimal automorphisms; zero on stable domains.
    #[serde(with = "crate::bigint_serde")]
    pub aut: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    #[serde(with = "crate::bigint_serde")]
    pub maslov: BigInt,
    pub ambient_half_dim: u32,
    #[serde(with = "crate::bigint_serde")]
    pub fredholm_index: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub moduli_dim: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub virtual_dim: BigInt,
    pub deformation_dims: Option<DeformationDims>,
}

/// A component of the normalization as seen from the complex double.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoubleComponent {
    /// Closed piece of genus `ĝ`; appears twice in the double.
    Closed { genus: u32 },
    /// Bordered piece of type `(g, h)`, `h` counting uncollapsed circles.
    Bordered { genus: u32, circles: u32 },
}

fn big(x: impl Into<BigInt>) -> BigInt {
    x.into()
}

fn require_even(mu: &BigInt) -> Result<()> {
    if mu.is_odd() {
        return Err(Error::domain("mu", format!("Maslov index must be even, got {mu}")));
    }
    Ok(())
}

fn require_positive_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("N", "ambient half-dimension must be positive"));
    }
    Ok(())
}

/// `6g + 3h - 6 + 2n + Σ m^i`.
pub fn moduli_dim(t: &MarkedTopType) -> BigInt {
    big(6) * t.g() + big(3) * t.h() - 6 + big(2) * t.n + t.m.iter().map(|&x| big(x)).sum::<BigInt>()
}

/// Index `μ + N(2 - 2g - h)` on a smooth domain of type `(g, h)`.
pub fn fredholm_index_smooth(mu: &BigInt, n: u32, g: u32, h: u32) -> Result<BigInt> {
    require_even(mu)?;
    require_positive_n(n)?;
    Ok(mu + big(n) * (big(2) - big(2) * g - h))
}

/// Index `μ + N(1 - g̃)` on a nodal domain whose double has arithmetic genus `g̃`.
pub fn fredholm_index_nodal(mu: &BigInt, n: u32, g_tilde: &BigInt) -> Result<BigInt> {
    require_even(mu)?;
    require_positive_n(n)?;
    Ok(mu + big(n) * (big(1) - g_tilde))
}

/// Arithmetic genus of the complex double of a nodal bordered surface:
/// `2 Σ(ĝ_i - 1) + Σ(2g_i' + h_i' - 2) + 2 l₀ + l₁ + 1`.
pub fn arithmetic_genus(parts: &[DoubleComponent], l0: u64, l1: u64) -> BigInt {
    let components: BigInt = parts
        .iter()
        .map(|c| match *c {
            DoubleComponent::Closed { genus } => big(2) * (big(genus) - 1),
            DoubleComponent::Bordered { genus, circles } => big(2) * genus + circles - 2,
        })
        .sum();
    components + big(2) * l0 + l1 + 1
}

/// Arithmetic genus of the double of a stratum graph.
pub fn stratum_arithmetic_genus(s: &StratumGraph) -> BigInt {
    let parts: Vec<DoubleComponent> = s
        .pieces
        .iter()
        .map(|p| {
            if p.circles.is_empty() {
                DoubleComponent::Closed { genus: p.genus }
            } else {
                DoubleComponent::Bordered {
                    genus: p.genus,
                    circles: p.open_circles() as u32,
                }
            }
        })
        .collect();
    arithmetic_genus(&parts, s.interior_node_count() as u64, s.boundary_node_count() as u64)
}

/// `μ + (N - 3)(2 - 2g - h) + 2n + Σ m^i`, checked against the sum of the
/// Fredholm index and the moduli dimension.
pub fn virtual_dim(mu: &BigInt, n: u32, t: &MarkedTopType) -> Result<BigInt> {
    require_even(mu)?;
    require_positive_n(n)?;
    let chi = big(2) - big(2) * t.g() - t.h();
    let formula = mu + (big(n) - 3) * &chi + big(2) * t.n + t.m.iter().map(|&x| big(x)).sum::<BigInt>();
    let split = fredholm_index_smooth(mu, n, t.g(), t.h())? + moduli_dim(t);
    if formula != split {
        return Err(Error::InternalConsistency(format!(
            "virtual dimension {formula} differs from index + moduli dimension {split}"
        )));
    }
    Ok(formula)
}

/// Splits the moduli dimension at a stratum into deformations along the
/// stratum and node-smoothing directions.
pub fn deformation_dims(s: &StratumGraph) -> Result<DeformationDims> {
    let t = s.marked_type()?;
    let dims = DeformationDims {
        deform: big(s.stratum_dim()?),
        interior: big(2) * s.interior_node_count(),
        boundary: big(s.boundary_node_count()),
        aut: big(0),
    };
    let total = &dims.deform + &dims.interior + &dims.boundary;
    if total != moduli_dim(&t) {
        return Err(Error::InternalConsistency(format!(
            "deformation dimensions sum to {total}, moduli dimension is {}",
            moduli_dim(&t)
        )));
    }
    Ok(dims)
}

/// Dimension `μ + N(1 - g̃) + dim E` of the map-deformation space once an
/// obstruction space of dimension `obstruction_dim` has been chosen.
pub fn map_deformation_dim(mu: &BigInt, n: u32, g_tilde: &BigInt, obstruction_dim: u64) -> Result<BigInt> {
    Ok(fredholm_index_nodal(mu, n, g_tilde)? + obstruction_dim)
}

pub fn index_report(mu: &BigInt, n: u32, t: &MarkedTopType, stratum: Option<&StratumGraph>) -> Result<IndexReport> {
    Ok(IndexReport {
        maslov: mu.clone(),
        ambient_half_dim: n,
        fredholm_index: fredholm_index_smooth(mu, n, t.g(), t.h())?,
        moduli_dim: moduli_dim(t),
        virtual_dim: virtual_dim(mu, n, t)?,
        deformation_dims: stratum.map(deformation_dims).transpose()?,
    })
}

/// Degree of the doubled bundle, `μ / 2`.
pub fn double_degree(mu: &BigInt) -> Result<BigInt> {
    require_even(mu)?;
    Ok(mu / 2)
}

/// Maslov index of a nodal map from the degrees of its closed components and
/// the Maslov indices of its bordered components: `2 Σ deg + Σ μ`.
pub fn total_maslov(closed_degrees: &[BigInt], bordered_maslov: &[BigInt]) -> Result<BigInt> {
    for mu in bordered_maslov {
        require_even(mu)?;
    }
    Ok(big(2) * closed_degrees.iter().sum::<BigInt>() + bordered_maslov.iter().sum::<BigInt>())
}

/// Maslov index of a degree-`d` disc in `(P¹, S¹)`.
pub fn disc_maslov(d: i64) -> BigInt {
    big(2) * d
}

/// Sufficient condition for the moduli space to be orientable: `L` spin, or
/// `h = 1` and `L` relatively spin. A `false` answer makes no claim.
pub fn orientability(spin: bool, relatively_spin: bool, h: u32) -> bool {
    spin || (h == 1 && relatively_spin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mt(g: u32, h: u32, n: u32, m: &[u32]) -> MarkedTopType {
        MarkedTopType::new(g, h, n, m.to_vec()).unwrap()
    }

    #[test]
    fn moduli_dims() {
        assert_eq!(moduli_dim(&mt(0, 3, 0, &[0, 0, 0])), big(3));
        assert_eq!(moduli_dim(&mt(1, 1, 0, &[0])), big(3));
        assert_eq!(moduli_dim(&mt(0, 2, 0, &[1, 1])), big(2));
    }

    #[test]
    fn smooth_index() {
        assert_eq!(fredholm_index_smooth(&big(0), 3, 0, 1).unwrap(), big(3));
        for d in 0..6 {
            assert_eq!(fredholm_index_smooth(&big(2 * d), 1, 0, 1).unwrap(), big(2 * d + 1));
        }
        assert_eq!(fredholm_index_smooth(&big(0), 3, 1, 1).unwrap(), big(-3));
        assert!(fredholm_index_smooth(&big(1), 3, 0, 1).is_err());
    }

    #[test]
    fn nodal_index() {
        assert_eq!(fredholm_index_nodal(&big(0), 3, &big(2)).unwrap(), big(-3));
        assert_eq!(fredholm_index_nodal(&big(4), 1, &big(0)).unwrap(), big(5));
        for g in 0..5u32 {
            for h in 1..5u32 {
                let gt = big(2 * g + h - 1);
                assert_eq!(
                    fredholm_index_nodal(&big(6), 2, &gt).unwrap(),
                    fredholm_index_smooth(&big(6), 2, g, h).unwrap()
                );
            }
        }
    }

    #[test]
    fn arithmetic_genus_examples() {
        let pants = [DoubleComponent::Bordered { genus: 0, circles: 3 }];
        assert_eq!(arithmetic_genus(&pants, 0, 0), big(2));
        let discs = [
            DoubleComponent::Bordered { genus: 0, circles: 1 },
            DoubleComponent::Bordered { genus: 0, circles: 1 },
        ];
        assert_eq!(arithmetic_genus(&discs, 0, 1), big(0));
        let mixed = [
            DoubleComponent::Closed { genus: 1 },
            DoubleComponent::Bordered { genus: 0, circles: 1 },
        ];
        // 2(1 - 1) + (0 + 1 - 2) + 2 + 0 + 1
        assert_eq!(arithmetic_genus(&mixed, 1, 0), big(2));
    }

    #[test]
    fn virtual_dims() {
        for g in 0..4 {
            for h in 1..4 {
                let t = mt(g, h, 0, &vec![0; h as usize]);
                assert_eq!(virtual_dim(&big(0), 3, &t).unwrap(), big(0));
            }
        }
        for d in 1..6 {
            assert_eq!(virtual_dim(&big(2 * d), 1, &mt(0, 1, 0, &[0])).unwrap(), big(2 * d - 2));
        }
        // 0 + 0 * (2 - 0 - 3) + 2 * 1 + 0
        assert_eq!(virtual_dim(&big(0), 3, &mt(0, 3, 1, &[0, 0, 0])).unwrap(), big(2));
        // 2 + 2 * (2 - 2 - 2) + 2 * 1 + (1 + 2)
        assert_eq!(virtual_dim(&big(2), 5, &mt(1, 2, 1, &[1, 2])).unwrap(), big(3));
    }

    #[test]
    fn maslov_tools() {
        assert_eq!(double_degree(&disc_maslov(3)).unwrap(), big(3));
        assert_eq!(total_maslov(&[big(1)], &[big(2)]).unwrap(), big(4));
        assert!(double_degree(&big(3)).is_err());
        assert_eq!(disc_maslov(0), big(0));
    }

    #[test]
    fn orientability_criterion() {
        assert!(orientability(true, false, 5));
        assert!(orientability(false, true, 1));
        assert!(!orientability(false, true, 2));
        assert!(!orientability(false, false, 1));
    }

    #[test]
    fn report_json_keeps_integers_exact() {
        let r = index_report(&big(0), 3, &mt(0, 3, 0, &[0, 0, 0]), None).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: IndexReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let huge = DeformationDims {
            deform: big(i64::MAX) * 4,
            interior: big(0),
            boundary: big(0),
            aut: big(0),
        };
        let json = serde_json::to_string(&huge).unwrap();
        assert!(json.contains("\"36893488147419103228\""));
        assert_eq!(serde_json::from_str::<DeformationDims>(&json).unwrap(), huge);
    }
}
