//! Open Gromov-Witten multiple-cover invariants `C(g;h|d;n|a)` of the resolved
//! conifold, evaluated exactly through the localization formula.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `"num/den"`, denominator positive, always reduced.
pub fn rational_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Validation(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().map_err(|_| bad())?, d.trim().parse::<BigInt>().map_err(|_| bad())?),
        None => (s.trim().parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// `x(x-1)...(x-k+1)/k!` for any integer `x`.
pub fn gen_binom(x: &BigInt, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= x - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn check_composition(h: u32, d: u32, n: &[u32]) -> Result<()> {
    if h == 0 {
        return Err(Error::domain("h", "need at least one boundary circle"));
    }
    if n.len() != h as usize {
        return Err(Error::domain("n", format!("{} winding numbers for h = {h}", n.len())));
    }
    if n.contains(&0) {
        return Err(Error::domain("n", "winding numbers must be positive"));
    }
    let total: u64 = n.iter().map(|&x| x as u64).sum();
    if total != d as u64 {
        return Err(Error::domain("n", format!("winding numbers sum to {total}, not d = {d}")));
    }
    Ok(())
}

/// `(a(1-a))^{h-1} ∏ binom(n_i a - 1, n_i - 1)`.
fn prefactor(h: u32, n: &[u32], a: i64) -> Rational {
    let a = BigInt::from(a);
    let base = &a * (BigInt::one() - &a);
    let mut out = num_traits::pow(base, (h - 1) as usize);
    for &ni in n {
        out *= gen_binom(&(BigInt::from(ni) * &a - 1), ni - 1);
    }
    Rational::from_integer(out)
}

/// Genus-zero closed form `(a(1-a))^{h-1} ∏ binom(n_i a - 1, n_i - 1) d^{h-3}`.
pub fn c_genus0(h: u32, d: u32, n: &[u32], a: i64) -> Result<Rational> {
    check_composition(h, d, n)?;
    let dpow = Rational::from_integer(BigInt::from(d)).pow(h as i32 - 3);
    Ok(prefactor(h, n, a) * dpow)
}

/// A monomial `ψ_1^{e_1}⋯ψ_h^{e_h} λ_{i_1}⋯λ_{i_k}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub psi: Vec<u32>,
    /// Sorted Hodge class indices, repetition allowed.
    pub lambda: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.psi.iter().sum::<u32>() + self.lambda.iter().sum::<u32>()
    }
}

/// Truncated polynomial in ψ and λ classes, further graded by a power of
/// the equivariant weight `w`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LocalizationExpr {
    pub h: usize,
    pub max_degree: u32,
    pub terms: BTreeMap<(i64, Monomial), Rational>,
}

impl LocalizationExpr {
    pub fn one(h: usize, max_degree: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, Monomial { psi: vec![0; h], lambda: Vec::new() }), Rational::one());
        LocalizationExpr { h, max_degree, terms }
    }

    pub fn add_term(&mut self, wpow: i64, m: Monomial, c: Rational) {
        if m.degree() > self.max_degree || c.is_zero() {
            return;
        }
        let entry = self.terms.entry((wpow, m)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn mul(&self, other: &LocalizationExpr) -> LocalizationExpr {
        let mut out = LocalizationExpr { h: self.h, max_degree: self.max_degree, terms: BTreeMap::new() };
        for ((w1, m1), c1) in &self.terms {
            for ((w2, m2), c2) in &other.terms {
                let mut lambda = m1.lambda.clone();
                lambda.extend_from_slice(&m2.lambda);
                lambda.sort_unstable();
                let psi = m1.psi.iter().zip(&m2.psi).map(|(a, b)| a + b).collect();
                out.add_term(w1 + w2, Monomial { psi, lambda }, c1 * c2);
            }
        }
        out
    }

    pub fn shift_weight(&mut self, by: i64) {
        self.terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|((w, m), c)| ((w + by, m), c))
            .collect();
    }

    /// `c_g(E^∨(x w)) = Σ_i (-1)^i λ_i (x w)^{g-i}`.
    pub fn dual_hodge_chern(h: usize, max_degree: u32, g: u32, x: &BigInt) -> Self {
        let mut out = LocalizationExpr { h, max_degree, terms: BTreeMap::new() };
        for i in 0..=g {
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let coeff = sign * num_traits::pow(x.clone(), (g - i) as usize);
            let lambda = if i == 0 { Vec::new() } else { vec![i] };
            out.add_term((g - i) as i64, Monomial { psi: vec![0; h], lambda }, Rational::from_integer(coeff));
        }
        out
    }

    /// `1/(w - n ψ_j) = Σ_k n^k ψ_j^k w^{-k-1}`, truncated.
    pub fn inverse_edge(h: usize, max_degree: u32, j: usize, n: u32) -> Self {
        let mut out = LocalizationExpr { h, max_degree, terms: BTreeMap::new() };
        for k in 0..=max_degree {
            let mut psi = vec![0; h];
            psi[j] = k;
            let c = num_traits::pow(BigInt::from(n), k as usize);
            out.add_term(-(k as i64) - 1, Monomial { psi, lambda: Vec::new() }, Rational::from_integer(c));
        }
        out
    }

    /// Terms of weight `w^0`.
    pub fn weight_zero(&self) -> Vec<(Monomial, Rational)> {
        self.terms
            .iter()
            .filter(|((w, _), _)| *w == 0)
            .map(|((_, m), c)| (m.clone(), c.clone()))
            .collect()
    }
}

/// Provider of ψ/λ intersection numbers on `M̄_{g,h}`.
pub trait HodgeOracle: Send + Sync {
    fn covers(&self, g: u32, h: u32) -> bool;

    /// Integral of a monomial; zero unless its degree is `3g - 3 + h`.
    fn integrate(&self, g: u32, h: u32, m: &Monomial) -> Result<Rational>;
}

/// Finite table of intersection numbers keyed by `(g, h)` and the monomial
/// with ψ exponents sorted, which is legitimate because the integrals are
/// symmetric in the marked points.
#[derive(Clone, Debug, Default)]
pub struct TableOracle {
    pub entries: BTreeMap<(u32, u32), BTreeMap<Monomial, Rational>>,
}

impl TableOracle {
    pub fn insert(&mut self, g: u32, h: u32, psi: Vec<u32>, lambda: Vec<u32>, value: Rational) {
        let m = normalize(Monomial { psi, lambda });
        self.entries.entry((g, h)).or_default().insert(m, value);
    }
}

fn normalize(mut m: Monomial) -> Monomial {
    m.psi.sort_unstable_by(|a, b| b.cmp(a));
    m.lambda.sort_unstable();
    m
}

impl HodgeOracle for TableOracle {
    fn covers(&self, g: u32, h: u32) -> bool {
        self.entries.contains_key(&(g, h))
    }

    fn integrate(&self, g: u32, h: u32, m: &Monomial) -> Result<Rational> {
        let table = self
            .entries
            .get(&(g, h))
            .ok_or_else(|| Error::Unsupported(format!("no Hodge integrals available on M̄_{{{g},{h}}}")))?;
        if m.psi.len() != h as usize {
            return Err(Error::Validation(format!("{} ψ exponents on M̄_{{{g},{h}}}", m.psi.len())));
        }
        if m.degree() as i64 != 3 * g as i64 - 3 + h as i64 {
            return Ok(Rational::zero());
        }
        table
            .get(&normalize(m.clone()))
            .cloned()
            .ok_or_else(|| Error::Unsupported(format!("monomial {m:?} missing from the table on M̄_{{{g},{h}}}")))
    }
}

/// `M̄_{1,1}`: `∫ψ₁ = ∫λ₁ = 1/24`.
pub fn builtin_oracle_g1() -> TableOracle {
    let mut t = TableOracle::default();
    let v = Rational::new(BigInt::one(), BigInt::from(24));
    t.insert(1, 1, vec![1], vec![], v.clone());
    t.insert(1, 1, vec![0], vec![1], v);
    t
}

/// ψ integrals on `M̄_{0,h}`, the multinomial `(h-3)!/∏ a_i!`, for
/// `3 <= h <= max_h`. Hodge classes vanish in genus zero.
pub fn genus0_psi_oracle(max_h: u32) -> TableOracle {
    fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            compositions(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let fact = |k: u32| -> BigInt { (1..=k).map(BigInt::from).product() };
    let mut t = TableOracle::default();
    for h in 3..=max_h {
        let mut all = Vec::new();
        compositions(h - 3, h as usize, &mut Vec::new(), &mut all);
        t.entries.entry((0, h)).or_default();
        for psi in all {
            let den: BigInt = psi.iter().map(|&e| fact(e)).product();
            t.insert(0, h, psi, vec![], Rational::new(fact(h - 3), den));
        }
    }
    t
}

/// The integrand of the localization formula before integration:
/// `c_g(E^∨(w)) c_g(E^∨((a-1)w)) c_g(E^∨(-a w)) w^{2h-3} / ∏(w - n_i ψ_i)`.
pub fn localization_integrand(g: u32, h: u32, n: &[u32], a: i64) -> LocalizationExpr {
    let hu = h as usize;
    let top = (3 * g as i64 - 3 + h as i64).max(0) as u32;
    let a = BigInt::from(a);
    let mut expr = LocalizationExpr::one(hu, top);
    for x in [BigInt::one(), &a - 1, -a] {
        expr = expr.mul(&LocalizationExpr::dual_hodge_chern(hu, top, g, &x));
    }
    for (j, &nj) in n.iter().enumerate() {
        expr = expr.mul(&LocalizationExpr::inverse_edge(hu, top, j, nj));
    }
    expr.shift_weight(2 * h as i64 - 3);
    expr
}

/// Localized invariant: the `w^0` part of [`localization_integrand`],
/// integrated against `oracle`, times the prefactor.
pub fn c_localized(g: u32, h: u32, d: u32, n: &[u32], a: i64, oracle: &dyn HodgeOracle) -> Result<Rational> {
    check_composition(h, d, n)?;
    if (3 * g as i64 - 3 + h as i64) < 0 || !oracle.covers(g, h) {
        return Err(Error::Unsupported(format!("no Hodge integrals available on M̄_{{{g},{h}}}")));
    }
    let mut total = Rational::zero();
    for (m, c) in localization_integrand(g, h, n, a).weight_zero() {
        let value = oracle.integrate(g, h, &m)?;
        total += c * value;
    }
    Ok(total * prefactor(h, n, a))
}

pub fn c_genus_g(g: u32, h: u32, d: u32, n: &[u32], a: i64, oracle: &dyn HodgeOracle) -> Result<Rational> {
    if g == 0 {
        return Err(Error::domain("g", "genus zero uses the closed form"));
    }
    c_localized(g, h, d, n, a, oracle)
}

/// Genus-dispatched evaluation: closed form in genus zero, the oracle otherwise.
pub fn invariant(g: u32, h: u32, d: u32, n: &[u32], a: i64, oracle: &dyn HodgeOracle) -> Result<Rational> {
    if g == 0 {
        c_genus0(h, d, n, a)
    } else {
        c_genus_g(g, h, d, n, a, oracle)
    }
}

/// `(-1)^{d-h} C(a) == C(1-a)`.
pub fn sign_symmetry_check(g: u32, h: u32, d: u32, n: &[u32], a: i64, oracle: &dyn HodgeOracle) -> Result<bool> {
    let lhs = invariant(g, h, d, n, a, oracle)?;
    let rhs = invariant(g, h, d, n, 1 - a, oracle)?;
    let sign = if (d as i64 - h as i64).rem_euclid(2) == 0 { lhs } else { -lhs };
    Ok(sign == rhs)
}

/// Maslov index `2d` of the `d`-fold cover of the disc.
pub fn maslov_p1(d: u32) -> u64 {
    2 * d as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRow {
    pub g: u32,
    pub h: u32,
    pub d: u32,
    pub n: Vec<u32>,
    pub a: i64,
    pub value: String,
}

pub fn invariant_table(
    g: u32,
    h: u32,
    d: u32,
    n: &[u32],
    a_range: std::ops::RangeInclusive<i64>,
    oracle: &dyn HodgeOracle,
) -> Result<Vec<InvariantRow>> {
    a_range
        .map(|a| {
            Ok(InvariantRow {
                g,
                h,
                d,
                n: n.to_vec(),
                a,
                value: rational_string(&invariant(g, h, d, n, a, oracle)?),
            })
        })
        .collect()
}

pub fn table_to_csv(rows: &[InvariantRow]) -> String {
    let mut out = String::from("g,h,d,n,a,value\n");
    for r in rows {
        let n: Vec<String> = r.n.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("{},{},{},{},{},{}\n", r.g, r.h, r.d, n.join(";"), r.a, r.value));
    }
    out
}

/// Sign of a rational as `-1`, `0`, `1`.
pub fn signum(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}
