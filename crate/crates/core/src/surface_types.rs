//! Topological types of bordered surfaces, their complex doubles, and the
//! classification of compact symmetric Riemann surfaces by `(g̃, h, k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Genus `g` and number of boundary circles `h ≥ 1` of a bordered surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TopType {
    pub g: u32,
    pub h: u32,
}

impl TopType {
    pub fn new(g: u32, h: u32) -> Result<Self> {
        if h == 0 {
            return Err(Error::domain("h", "a bordered surface needs at least one boundary circle"));
        }
        Ok(TopType { g, h })
    }

    /// Euler characteristic `2 - 2g - h`.
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.g as i64 - self.h as i64
    }

    pub fn is_stable(&self) -> bool {
        is_stable(*self)
    }
}

/// A topological type together with its marked-point profile: `n` interior
/// points and `m[i]` points on the `i`-th boundary circle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedTopType {
    pub base: TopType,
    pub n: u32,
    pub m: Vec<u32>,
}

impl MarkedTopType {
    pub fn new(g: u32, h: u32, n: u32, m: Vec<u32>) -> Result<Self> {
        let base = TopType::new(g, h)?;
        if m.len() != h as usize {
            return Err(Error::domain(
                "m",
                format!("expected {} boundary counts, got {}", h, m.len()),
            ));
        }
        Ok(MarkedTopType { base, n, m })
    }

    pub fn g(&self) -> u32 {
        self.base.g
    }

    pub fn h(&self) -> u32 {
        self.base.h
    }

    pub fn boundary_marked(&self) -> u32 {
        self.m.iter().sum()
    }

    /// Real dimension `6g + 3h - 6 + 2n + Σ m^i` of the moduli space.
    pub fn moduli_dim(&self) -> i64 {
        6 * self.g() as i64 + 3 * self.h() as i64 - 6 + 2 * self.n as i64 + self.boundary_marked() as i64
    }

    /// Stable as a marked type: the automorphism group of a generic member is finite.
    pub fn is_stable(&self) -> bool {
        4 * self.g() as i64 + 2 * self.h() as i64 - 4 + 2 * self.n as i64 + self.boundary_marked() as i64 > 0
    }
}

/// Invariants `(g̃, h, k)` of a compact symmetric Riemann surface: genus,
/// number of real circles, and index of orientability of the quotient
/// (`k = 0` orientable, `k = 1` not).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymType {
    pub g_tilde: u32,
    pub h: u32,
    pub k: u8,
}

impl SymType {
    pub fn new(g_tilde: u32, h: u32, k: u8) -> Result<Self> {
        let s = SymType { g_tilde, h, k };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let SymType { g_tilde, h, k } = *self;
        if h > g_tilde + 1 {
            return Err(Error::Validation(format!("h = {h} exceeds g̃ + 1 = {}", g_tilde + 1)));
        }
        match k {
            0 => {
                if h == 0 {
                    return Err(Error::Validation("orientable quotient needs h > 0".into()));
                }
                if (g_tilde + 1 - h) % 2 != 0 {
                    return Err(Error::Validation(format!(
                        "orientable quotient needs h ≡ g̃ + 1 (mod 2), got h = {h}, g̃ = {g_tilde}"
                    )));
                }
            }
            1 => {
                if h > g_tilde {
                    return Err(Error::Validation(format!(
                        "nonorientable quotient needs h ≤ g̃, got h = {h}, g̃ = {g_tilde}"
                    )));
                }
            }
            _ => return Err(Error::Validation(format!("k must be 0 or 1, got {k}"))),
        }
        Ok(())
    }
}

/// Topology of the quotient `Σ_C / σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuotientType {
    /// Orientable bordered surface of genus `g` with `h` boundary circles.
    Orientable { g: u32, h: u32 },
    /// Connected sum of `crosscaps` projective planes with `h` boundary circles.
    Nonorientable { crosscaps: u32, h: u32 },
}

/// Genus `2g + h - 1` of the complex double.
pub fn complex_double(t: TopType) -> u32 {
    2 * t.g + t.h - 1
}

pub fn is_stable(t: TopType) -> bool {
    t.euler_characteristic() < 0
}

/// Every symmetric type of genus `g_tilde`; there are `⌊(3g̃ + 4)/2⌋` of them.
pub fn classify_symmetric(g_tilde: u32) -> Vec<SymType> {
    let mut out = Vec::new();
    for k in 0..=1u8 {
        for h in 0..=g_tilde + 1 {
            let s = SymType { g_tilde, h, k };
            if s.validate().is_ok() {
                out.push(s);
            }
        }
    }
    out
}

pub fn quotient_type(s: SymType) -> Result<QuotientType> {
    s.validate()?;
    Ok(match s.k {
        0 => QuotientType::Orientable {
            g: (s.g_tilde + 1 - s.h) / 2,
            h: s.h,
        },
        _ => QuotientType::Nonorientable {
            crosscaps: s.g_tilde + 1 - s.h,
            h: s.h,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubles() {
        assert_eq!(complex_double(TopType::new(0, 1).unwrap()), 0);
        assert_eq!(complex_double(TopType::new(0, 3).unwrap()), 2);
        assert_eq!(complex_double(TopType::new(1, 1).unwrap()), 2);
    }

    #[test]
    fn genus_two_census() {
        let expected = vec![
            SymType { g_tilde: 2, h: 1, k: 0 },
            SymType { g_tilde: 2, h: 3, k: 0 },
            SymType { g_tilde: 2, h: 0, k: 1 },
            SymType { g_tilde: 2, h: 1, k: 1 },
            SymType { g_tilde: 2, h: 2, k: 1 },
        ];
        assert_eq!(classify_symmetric(2), expected);
        assert_eq!(
            classify_symmetric(0),
            vec![SymType { g_tilde: 0, h: 1, k: 0 }, SymType { g_tilde: 0, h: 0, k: 1 }]
        );
        assert_eq!(classify_symmetric(1).len(), 3);
    }

    #[test]
    fn census_brute_force() {
        // Independent count: orientable quotients (g, h) with 2g + h - 1 = g̃,
        // nonorientable ones with c ≥ 1 crosscaps and c + h - 1 = g̃.
        for gt in 0..=30u32 {
            let orientable = (0..=gt).filter(|g| 2 * g <= gt).count();
            let nonorientable = (1..=gt + 1).count();
            assert_eq!(classify_symmetric(gt).len(), orientable + nonorientable);
            assert_eq!(classify_symmetric(gt).len() as u32, (3 * gt + 4) / 2);
        }
    }

    #[test]
    fn quotients() {
        assert_eq!(
            quotient_type(SymType::new(2, 3, 0).unwrap()).unwrap(),
            QuotientType::Orientable { g: 0, h: 3 }
        );
        assert_eq!(
            quotient_type(SymType::new(2, 1, 0).unwrap()).unwrap(),
            QuotientType::Orientable { g: 1, h: 1 }
        );
        assert_eq!(
            quotient_type(SymType::new(0, 0, 1).unwrap()).unwrap(),
            QuotientType::Nonorientable { crosscaps: 1, h: 0 }
        );
        let bad = SymType { g_tilde: 2, h: 2, k: 0 };
        assert!(matches!(quotient_type(bad), Err(Error::Validation(_))));
    }

    #[test]
    fn stability() {
        assert!(is_stable(TopType::new(0, 3).unwrap()));
        assert!(!is_stable(TopType::new(0, 2).unwrap()));
        assert!(!is_stable(TopType::new(0, 1).unwrap()));
        assert!(TopType::new(1, 0).is_err());
    }

    #[test]
    fn double_round_trip() {
        for g in 0..=10 {
            for h in 1..=10 {
                let t = TopType::new(g, h).unwrap();
                if !t.is_stable() {
                    continue;
                }
                let s = SymType::new(complex_double(t), h, 0).unwrap();
                assert_eq!(quotient_type(s).unwrap(), QuotientType::Orientable { g, h });
            }
        }
    }
}
