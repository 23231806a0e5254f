//! Numerical verification of the local pregluing estimates on the flat model
//! target `C^N` with `exp_p(v) = p + v`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node-centred log-polar grid on `inner <= |z| <= outer`. Radial nodes are
/// uniform in `s = log |z|`, angular nodes uniform and periodic. Each node
/// carries the exact area of its dual cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusGrid {
    pub inner: f64,
    pub outer: f64,
    pub nr: usize,
    pub nt: usize,
    pub ds: f64,
    pub dtheta: f64,
    /// Area of the dual cell of any node in radial row `i`.
    pub weights: Vec<f64>,
}

impl AnnulusGrid {
    pub fn new(inner: f64, outer: f64, nr: usize, nt: usize) -> Result<Self> {
        if !(inner.is_finite() && outer.is_finite() && inner > 0.0) {
            return Err(Error::domain("inner", format!("radii must be positive and finite, got ({inner}, {outer})")));
        }
        if inner >= outer {
            return Err(Error::domain("outer", format!("inner radius {inner} is not below outer radius {outer}")));
        }
        if nr < 5 || nt < 5 {
            return Err(Error::domain("resolution", format!("need at least 5 nodes per direction, got {nr}x{nt}")));
        }
        let ds = (outer.ln() - inner.ln()) / (nr - 1) as f64;
        let dtheta = 2.0 * PI / nt as f64;
        let s0 = inner.ln();
        let edge = |k: f64| (s0 + k * ds).exp();
        let weights = (0..nr)
            .map(|i| {
                let lo = if i == 0 { inner } else { edge(i as f64 - 0.5) };
                let hi = if i == nr - 1 { outer } else { edge(i as f64 + 0.5) };
                0.5 * dtheta * (hi * hi - lo * lo)
            })
            .collect();
        Ok(AnnulusGrid { inner, outer, nr, nt, ds, dtheta, weights })
    }

    pub fn radius(&self, i: usize) -> f64 {
        match i {
            0 => self.inner,
            _ if i == self.nr - 1 => self.outer,
            _ => (self.inner.ln() + i as f64 * self.ds).exp(),
        }
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.dtheta
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(self.radius(i), self.theta(j))
    }

    pub fn len(&self) -> usize {
        self.nr * self.nt
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exact_area(&self) -> f64 {
        PI * (self.outer * self.outer - self.inner * self.inner)
    }

    pub fn quadrature_area(&self) -> f64 {
        self.weights.iter().sum::<f64>() * self.nt as f64
    }
}

/// A sampled map from an annulus into `C^N`, stored component-major.
#[derive(Clone, Debug)]
pub struct LocalMap {
    pub grid: AnnulusGrid,
    pub basepoint: Vec<Complex64>,
    pub values: Vec<Vec<Complex64>>,
}

impl LocalMap {
    pub fn from_fn<F>(grid: AnnulusGrid, basepoint: Vec<Complex64>, f: F) -> Result<Self>
    where
        F: Fn(usize, usize, Complex64) -> Vec<Complex64> + Sync,
    {
        let dim = basepoint.len();
        let rows: Vec<Vec<Vec<Complex64>>> = (0..grid.nr)
            .into_par_iter()
            .map(|i| (0..grid.nt).map(|j| f(i, j, grid.point(i, j))).collect())
            .collect();
        let mut values = vec![Vec::with_capacity(grid.len()); dim];
        for row in rows {
            for v in row {
                if v.len() != dim {
                    return Err(Error::Validation(format!("map value of dimension {} in C^{dim}", v.len())));
                }
                for (c, x) in v.into_iter().enumerate() {
                    if !x.is_finite() {
                        return Err(Error::Validation("non-finite map value".into()));
                    }
                    values[c].push(x);
                }
            }
        }
        Ok(LocalMap { grid, basepoint, values })
    }

    pub fn dim(&self) -> usize {
        self.basepoint.len()
    }

    pub fn at(&self, i: usize, j: usize) -> Vec<Complex64> {
        self.values.iter().map(|c| c[i * self.grid.nt + j]).collect()
    }

    /// `(∂_s u, ∂_θ u)` for component `c`.
    pub fn log_polar_derivatives(&self, c: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let (nr, nt) = (self.grid.nr, self.grid.nt);
        let u = &self.values[c];
        let (hs, ht) = (12.0 * self.grid.ds, 12.0 * self.grid.dtheta);
        let rows: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..nr)
            .into_par_iter()
            .map(|i| {
                let at = |k: usize, j: usize| u[k * nt + j];
                let us = (0..nt)
                    .map(|j| {
                        let f = |k: usize| at(k, j);
                        let num = match i {
                            0 => -25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4),
                            1 => -3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4),
                            _ if i == nr - 1 => {
                                25.0 * f(i) - 48.0 * f(i - 1) + 36.0 * f(i - 2) - 16.0 * f(i - 3) + 3.0 * f(i - 4)
                            }
                            _ if i == nr - 2 => {
                                3.0 * f(i + 1) + 10.0 * f(i) - 18.0 * f(i - 1) + 6.0 * f(i - 2) - f(i - 3)
                            }
                            _ => f(i - 2) - 8.0 * f(i - 1) + 8.0 * f(i + 1) - f(i + 2),
                        };
                        num / hs
                    })
                    .collect();
                let ut = (0..nt)
                    .map(|j| {
                        let f = |d: isize| at(i, (j as isize + d).rem_euclid(nt as isize) as usize);
                        (f(-2) - 8.0 * f(-1) + 8.0 * f(1) - f(2)) / ht
                    })
                    .collect();
                (us, ut)
            })
            .collect();
        let mut us = Vec::with_capacity(nr * nt);
        let mut ut = Vec::with_capacity(nr * nt);
        for (a, b) in rows {
            us.extend(a);
            ut.extend(b);
        }
        (us, ut)
    }

    /// `|∂̄u|` at every node, Euclidean over components.
    pub fn dbar_magnitude(&self) -> Vec<f64> {
        self.pointwise(|rho, us, ut| ((us + Complex64::i() * ut) / (2.0 * rho)).norm_sqr())
    }

    /// `|∇u|` at every node.
    pub fn gradient_magnitude(&self) -> Vec<f64> {
        self.pointwise(|rho, us, ut| (us.norm_sqr() + ut.norm_sqr()) / (rho * rho))
    }

    fn pointwise(&self, sq: impl Fn(f64, Complex64, Complex64) -> f64) -> Vec<f64> {
        let nt = self.grid.nt;
        let mut acc = vec![0.0; self.grid.len()];
        for c in 0..self.dim() {
            let (us, ut) = self.log_polar_derivatives(c);
            for (k, a) in acc.iter_mut().enumerate() {
                *a += sq(self.grid.radius(k / nt), us[k], ut[k]);
            }
        }
        acc.into_iter().map(f64::sqrt).collect()
    }
}

/// Metric on the neck used for `L^p` norms of `(0,1)`-forms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metric {
    Flat,
    /// Induced by `z ↦ (z, t/z) ∈ C²`, conformal factor `1 + |t|²/|z|⁴`.
    Neck { t_abs: f64 },
}

impl Metric {
    fn density(&self, rho: f64, p: f64) -> f64 {
        match *self {
            Metric::Flat => 1.0,
            Metric::Neck { t_abs } => (1.0 + t_abs * t_abs / rho.powi(4)).powf(1.0 - p / 2.0),
        }
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::domain("p", format!("L^p exponent must be at least 1, got {p}")));
    }
    Ok(())
}

fn lp_sum(u: &LocalMap, p: f64, metric: Metric, keep: impl Fn(usize) -> f64 + Sync) -> f64 {
    let mag = u.dbar_magnitude();
    let nt = u.grid.nt;
    let rows: Vec<f64> = (0..u.grid.nr)
        .into_par_iter()
        .map(|i| {
            let dens = metric.density(u.grid.radius(i), p) * u.grid.weights[i];
            (0..nt).map(|j| keep(j) * mag[i * nt + j].powf(p)).sum::<f64>() * dens
        })
        .collect();
    rows.iter().sum()
}

/// `‖∂̄u‖_{L^p}` by finite differences and dual-cell quadrature.
pub fn dbar_lp_norm(u: &LocalMap, p: f64, metric: Metric) -> Result<f64> {
    check_exponent(p)?;
    Ok(lp_sum(u, p, metric, |_| 1.0).powf(1.0 / p))
}

/// The same norm over the closed upper half `0 <= θ <= π`, the half-model of
/// a boundary node. Needs an even angular count.
pub fn dbar_lp_norm_upper_half(u: &LocalMap, p: f64, metric: Metric) -> Result<f64> {
    check_exponent(p)?;
    let nt = u.grid.nt;
    if !nt.is_multiple_of(2) {
        return Err(Error::domain("nt", "upper half needs an even angular count"));
    }
    let keep = |j: usize| match j {
        0 => 0.5,
        _ if j == nt / 2 => 0.5,
        _ if j < nt / 2 => 1.0,
        _ => 0.0,
    };
    Ok(lp_sum(u, p, metric, keep).powf(1.0 / p))
}

/// Polynomial map `C → C^N` with `f(0) = p`; `coeffs[c][k]` multiplies
/// `z^{k+1}` in component `c`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySeed {
    pub basepoint: Vec<Complex64>,
    pub coeffs: Vec<Vec<Complex64>>,
}

impl PolySeed {
    pub fn new(basepoint: Vec<Complex64>, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        if coeffs.len() != basepoint.len() {
            return Err(Error::Validation(format!(
                "{} coefficient rows for a target of dimension {}",
                coeffs.len(),
                basepoint.len()
            )));
        }
        Ok(PolySeed { basepoint, coeffs })
    }

    pub fn constant(basepoint: Vec<Complex64>) -> Self {
        let coeffs = vec![Vec::new(); basepoint.len()];
        PolySeed { basepoint, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.basepoint.len()
    }

    pub fn eval(&self, z: Complex64) -> Vec<Complex64> {
        self.basepoint
            .iter()
            .zip(&self.coeffs)
            .map(|(p, cs)| p + z * cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c))
            .collect()
    }

    pub fn deriv(&self, z: Complex64) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .map(|cs| {
                cs.iter()
                    .enumerate()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * z + c * (k as f64 + 1.0))
            })
            .collect()
    }

    /// `max_{|z| <= radius}` of the Euclidean norm, sampled on the boundary
    /// circle where it is attained.
    pub fn sup_on_disc(&self, radius: f64, samples: usize) -> f64 {
        sup_on_circle(|z| norm(&self.eval(z)), radius, samples)
    }

    pub fn sup_deriv_on_disc(&self, radius: f64, samples: usize) -> f64 {
        sup_on_circle(|z| norm(&self.deriv(z)), radius, samples)
    }
}

fn sup_on_circle(f: impl Fn(Complex64) -> f64, radius: f64, samples: usize) -> f64 {
    (0..samples)
        .map(|k| f(Complex64::from_polar(radius, 2.0 * PI * k as f64 / samples as f64)))
        .fold(0.0, f64::max)
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Radial cutoff `χ₁`: 0 for `|w| <= 1`, 1 for `|w| >= 2`, quintic smootherstep
/// in between (slope at most 15/8).
pub fn chi1(abs_w: f64) -> f64 {
    let x = (abs_w - 1.0).clamp(0.0, 1.0);
    x * x * x * (x * (6.0 * x - 15.0) + 10.0)
}

/// Smooth step `χ` with `χ = 0` on `s <= 1`, `χ = 1` on `s >= 4`, flat to all
/// orders at both ends and `0 <= χ' <= 1`.
pub fn chi_step(s: f64) -> f64 {
    let phi = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let (a, b) = (phi(s - 1.0), phi(4.0 - s));
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Piecewise-logarithmic cutoff: 1 on `|z| <= r^{3/2}`, 0 on `|z| >= r`.
pub fn beta_value(r: f64, rho: f64) -> f64 {
    (2.0 * (rho.ln() / r.ln() - 1.0)).clamp(0.0, 1.0)
}

#[derive(Clone, Debug)]
pub struct BetaCutoff {
    pub r: f64,
    pub map: LocalMap,
    pub energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaSummary {
    pub r: f64,
    pub resolution: usize,
    pub energy: f64,
    pub expected: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Samples `β_r` on an `n × n` log-polar grid whose radial nodes include both
/// breakpoints `r^{3/2}` and `r`, and integrates `|∇β_r|²`.
pub fn beta_r(r: f64, n: usize) -> Result<BetaCutoff> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain("r", format!("need 0 < r < 1, got {r}")));
    }
    if n < 16 {
        return Err(Error::domain("n", format!("resolution {n} is below 16")));
    }
    let pad = n / 8;
    let interior = n - 1 - 2 * pad;
    let ds = 0.5 * r.ln().abs() / interior as f64;
    let inner = (1.5 * r.ln() - pad as f64 * ds).exp();
    let outer = (r.ln() + pad as f64 * ds).exp();
    let grid = AnnulusGrid::new(inner, outer, n, n)?;
    let map = LocalMap::from_fn(grid, vec![Complex64::new(0.0, 0.0)], |i, _, _| {
        let v = if i <= pad {
            1.0
        } else if i >= n - 1 - pad {
            0.0
        } else {
            // Exact in the node index, so the breakpoints are hit exactly.
            1.0 - (i - pad) as f64 / interior as f64
        };
        vec![Complex64::new(v, 0.0)]
    })?;
    let grad = map.gradient_magnitude();
    let nt = map.grid.nt;
    let energy = (0..map.grid.nr)
        .map(|i| map.grid.weights[i] * (0..nt).map(|j| grad[i * nt + j].powi(2)).sum::<f64>())
        .sum();
    Ok(BetaCutoff { r, map, energy })
}

pub fn beta_energy_exact(r: f64) -> f64 {
    4.0 * PI / r.ln().abs()
}

pub fn beta_summary(r: f64, n: usize, tolerance: f64) -> Result<BetaSummary> {
    let b = beta_r(r, n)?;
    let expected = beta_energy_exact(r);
    let rel_error = (b.energy - expected).abs() / expected;
    Ok(BetaSummary { r, resolution: n, energy: b.energy, expected, rel_error, tolerance, passed: rel_error < tolerance })
}

/// Which closed form the pregluing takes at radius `rho`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PregluingRegion {
    G,
    Plateau,
    F,
    Transition,
}

pub fn pregluing_region(rho: f64, r: f64) -> PregluingRegion {
    let (inner, outer) = (r * r.sqrt(), r.sqrt());
    if rho < inner / 2.0 {
        PregluingRegion::G
    } else if (inner..=outer).contains(&rho) {
        PregluingRegion::Plateau
    } else if rho > 2.0 * outer {
        PregluingRegion::F
    } else {
        PregluingRegion::Transition
    }
}

/// `u_t(z) = p + χ₁(z/√r)(f(z) - p) + χ₁(r√r/z)(g(t/z) - p)` on
/// `|t|/ε₁ <= |z| <= ε₁`, with `r = √|t|`.
pub fn preglue(f: &PolySeed, g: &PolySeed, t: Complex64, eps1: f64, nr: usize, nt: usize) -> Result<LocalMap> {
    if f.basepoint != g.basepoint {
        return Err(Error::domain("g", "seeds must share the basepoint f(0) = g(0)"));
    }
    if !(eps1 > 0.0 && eps1.is_finite()) {
        return Err(Error::domain("eps1", format!("need a positive radius, got {eps1}")));
    }
    let r = t.norm().sqrt();
    if r == 0.0 || r >= eps1 * eps1 / 16.0 {
        return Err(Error::domain("t", format!("need 0 < √|t| < ε₁²/16, got √|t| = {r}, ε₁ = {eps1}")));
    }
    let grid = AnnulusGrid::new(t.norm() / eps1, eps1, nr, nt)?;
    let p = f.basepoint.clone();
    LocalMap::from_fn(grid, p.clone(), |_, _, z| {
        let rho = z.norm();
        match pregluing_region(rho, r) {
            PregluingRegion::G => g.eval(t / z),
            PregluingRegion::Plateau => p.clone(),
            PregluingRegion::F => f.eval(z),
            PregluingRegion::Transition => {
                let a = chi1(rho / r.sqrt());
                let b = chi1(r * r.sqrt() / rho);
                let (fz, gz) = (f.eval(z), g.eval(t / z));
                (0..p.len()).map(|c| p[c] + a * (fz[c] - p[c]) + b * (gz[c] - p[c])).collect()
            }
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Flat,
    Neck,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub eps1: f64,
    pub nr: usize,
    pub nt: usize,
    /// Argument of the gluing parameter `t = r² e^{iφ}`.
    pub phase: f64,
    pub metric: MetricKind,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig { eps1: 1.0, nr: 1024, nt: 256, phase: 0.3, metric: MetricKind::Neck }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub p: f64,
    pub r: Vec<f64>,
    pub norms: Vec<f64>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub residual: Option<f64>,
    pub degenerate: bool,
}

impl ScalingFit {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,norm\n");
        for (r, n) in self.r.iter().zip(&self.norms) {
            out.push_str(&format!("{r:e},{n:e}\n"));
        }
        out
    }
}

/// Least-squares slope of `log y` against `log x`, with the root-mean-square
/// residual.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = lx.iter().zip(&ly).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Fits `‖∂̄u_t‖_{L^p} ~ C r^s` over `r_list`.
pub fn scaling_fit(f: &PolySeed, g: &PolySeed, r_list: &[f64], p: f64, cfg: &ScalingConfig) -> Result<ScalingFit> {
    check_exponent(p)?;
    if r_list.len() < 2 {
        return Err(Error::domain("r_list", "need at least two radii"));
    }
    let norms = r_list
        .iter()
        .map(|&r| {
            let t = Complex64::from_polar(r * r, cfg.phase);
            let u = preglue(f, g, t, cfg.eps1, cfg.nr, cfg.nt)?;
            let metric = match cfg.metric {
                MetricKind::Flat => Metric::Flat,
                MetricKind::Neck => Metric::Neck { t_abs: t.norm() },
            };
            dbar_lp_norm(&u, p, metric)
        })
        .collect::<Result<Vec<f64>>>()?;
    let degenerate = norms.iter().cloned().fold(0.0, f64::max) < 1e-12;
    let (slope, intercept, residual) = if degenerate {
        (None, None, None)
    } else {
        let (s, i, res) = loglog_fit(r_list, &norms);
        (Some(s), Some(i), Some(res))
    };
    Ok(ScalingFit { p, r: r_list.to_vec(), norms, slope, intercept, residual, degenerate })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpConfig {
    /// Odd, so that `|z| = r` is a radial node.
    pub nr: usize,
    pub nt: usize,
    pub disc_samples: usize,
    pub sup_tol: f64,
    pub seam_tol: f64,
}

impl Default for InterpConfig {
    fn default() -> Self {
        InterpConfig { nr: 513, nt: 512, disc_samples: 4096, sup_tol: 1e-3, seam_tol: 1e-4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpReport {
    pub r: f64,
    pub sup_grid: f64,
    pub sup_expected: f64,
    pub sup_ok: bool,
    pub grad_sup: f64,
    pub grad_bound: f64,
    pub grad_ratio: f64,
    pub grad_ok: bool,
    pub seam_grad: f64,
    pub seam_ok: bool,
    pub passed: bool,
}

/// `F(z) = f(χ(|z/r|²) z)` for `|z| >= r` and `g(χ(|t/(zr)|²) t/z)` for
/// `|z| <= r`, checked on `A(r/2, 2r)`.
pub fn interp_check(f: &PolySeed, g: &PolySeed, t: Complex64, cfg: &InterpConfig) -> Result<InterpReport> {
    if f.basepoint != g.basepoint {
        return Err(Error::domain("g", "seeds must share the basepoint f(0) = g(0)"));
    }
    if cfg.nr.is_multiple_of(2) {
        return Err(Error::domain("nr", "radial count must be odd"));
    }
    let r = t.norm().sqrt();
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain("t", "gluing parameter must be nonzero"));
    }
    let seam = cfg.nr / 2;
    let grid = AnnulusGrid::new(r / 2.0, 2.0 * r, cfg.nr, cfg.nt)?;
    let map = LocalMap::from_fn(grid, f.basepoint.clone(), |i, _, z| {
        if i >= seam {
            f.eval(z * chi_step(z.norm_sqr() / (r * r)))
        } else {
            g.eval(t / z * chi_step(r * r / z.norm_sqr()))
        }
    })?;
    let nt = cfg.nt;
    let sup_grid = (0..map.grid.len()).map(|k| norm(&map.at(k / nt, k % nt))).fold(0.0, f64::max);
    let sup_expected = f.sup_on_disc(2.0 * r, cfg.disc_samples).max(g.sup_on_disc(2.0 * r, cfg.disc_samples));
    let scale = sup_expected.max(1e-300);
    let sup_ok = (sup_grid - sup_expected).abs() <= cfg.sup_tol * scale;
    let grad = map.gradient_magnitude();
    let grad_sup = grad.iter().cloned().fold(0.0, f64::max);
    let grad_bound = 9.0
        * 2f64.sqrt()
        * f.sup_deriv_on_disc(2.0 * r, cfg.disc_samples).max(4.0 * g.sup_deriv_on_disc(2.0 * r, cfg.disc_samples));
    let grad_ok = grad_sup <= grad_bound * (1.0 + 1e-9) + 1e-12;
    let grad_ratio = if grad_bound > 0.0 { grad_sup / grad_bound } else { 0.0 };
    let seam_grad = (0..nt).map(|j| grad[seam * nt + j]).fold(0.0, f64::max);
    let seam_ok = seam_grad < cfg.seam_tol;
    Ok(InterpReport {
        r,
        sup_grid,
        sup_expected,
        sup_ok,
        grad_sup,
        grad_bound,
        grad_ratio,
        grad_ok,
        seam_grad,
        seam_ok,
        passed: sup_ok && grad_ok && seam_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutsectionReport {
    pub p: f64,
    pub r: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Slope of `log ratio` against `log |log r|`.
    pub slope: f64,
    pub bound: f64,
    pub passed: bool,
}

/// Scaling-only check of `‖(∇β_r) w‖_{L^p} <= C ‖w‖_{W^{1,p}} |log r|^{1/p-1}`
/// for `w(z) = z` on the unit disc. Only the exponent is tested.
pub fn cutsection_check(r_list: &[f64], p: f64, n: usize, tol: f64) -> Result<CutsectionReport> {
    check_exponent(p)?;
    if r_list.len() < 2 {
        return Err(Error::domain("r_list", "need at least two radii"));
    }
    let w_norm = (2.0 * PI / (p + 2.0) + PI * 2f64.powf(p / 2.0)).powf(1.0 / p);
    let ratios = r_list
        .iter()
        .map(|&r| {
            let b = beta_r(r, n)?;
            let grad = b.map.gradient_magnitude();
            let nt = b.map.grid.nt;
            let sum: f64 = (0..b.map.grid.nr)
                .map(|i| {
                    let rho = b.map.grid.radius(i);
                    b.map.grid.weights[i] * (0..nt).map(|j| (grad[i * nt + j] * rho).powf(p)).sum::<f64>()
                })
                .sum();
            Ok(sum.powf(1.0 / p) / w_norm)
        })
        .collect::<Result<Vec<f64>>>()?;
    let logs: Vec<f64> = r_list.iter().map(|r| r.ln().abs()).collect();
    let (slope, _, _) = loglog_fit(&logs, &ratios);
    let bound = 1.0 / p - 1.0;
    Ok(CutsectionReport { p, r: r_list.to_vec(), ratios, slope, bound, passed: slope <= bound + tol })
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Three polynomial seed pairs into `C²` with a common basepoint.
pub fn standard_seed_pairs() -> Vec<(String, PolySeed, PolySeed)> {
    let p = vec![c(0.3, 0.1), c(-0.2, 0.0)];
    let seed = |coeffs: Vec<Vec<Complex64>>| PolySeed { basepoint: p.clone(), coeffs };
    vec![
        (
            "linear".into(),
            seed(vec![vec![c(1.0, 0.0)], vec![c(0.5, 0.0)]]),
            seed(vec![vec![c(0.3, 0.0)], vec![c(-1.0, 0.0)]]),
        ),
        (
            "cubic".into(),
            seed(vec![vec![c(1.0, 0.0), c(0.5, 0.0), c(0.0, -0.25)], vec![c(0.0, 1.0), c(0.0, 0.0), c(-1.0, 0.0)]]),
            seed(vec![vec![c(1.0, 0.0), c(-0.7, 0.0), c(1.0, 0.0)], vec![c(0.5, 0.0), c(0.0, 0.2)]]),
        ),
        (
            "mixed".into(),
            seed(vec![vec![c(0.0, 0.0), c(1.0, 1.0)], vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]]),
            seed(vec![vec![c(2.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]]),
        ),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluingConfig {
    pub beta_r: Vec<f64>,
    pub beta_resolution: usize,
    pub energy_tol: f64,
    pub scaling_r: Vec<f64>,
    pub p_list: Vec<f64>,
    pub exponent_tol: f64,
    pub scaling: ScalingConfig,
    pub interp_t: Vec<f64>,
    pub interp: InterpConfig,
    pub cutsection_p: f64,
}

impl Default for GluingConfig {
    fn default() -> Self {
        GluingConfig {
            beta_r: vec![1e-2, 1e-3, 1e-4],
            beta_resolution: 1024,
            energy_tol: 0.02,
            scaling_r: vec![1e-2, 1e-3, 1e-4, 1e-5],
            p_list: vec![2.0, 4.0],
            exponent_tol: 0.15,
            scaling: ScalingConfig::default(),
            interp_t: vec![1e-4],
            interp: InterpConfig::default(),
            cutsection_p: 4.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedScaling {
    pub seeds: String,
    pub fit: ScalingFit,
    pub required: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedInterp {
    pub seeds: String,
    pub t: f64,
    pub report: InterpReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluingReport {
    pub config: GluingConfig,
    pub beta: Vec<BetaSummary>,
    pub scaling: Vec<SeedScaling>,
    pub interp: Vec<SeedInterp>,
    pub cutsection: CutsectionReport,
    pub passed: bool,
}

pub fn verify_gluing(cfg: &GluingConfig) -> Result<GluingReport> {
    let beta = cfg
        .beta_r
        .iter()
        .map(|&r| beta_summary(r, cfg.beta_resolution, cfg.energy_tol))
        .collect::<Result<Vec<_>>>()?;
    let pairs = standard_seed_pairs();
    let mut scaling = Vec::new();
    for (name, f, g) in &pairs {
        for &p in &cfg.p_list {
            let fit = scaling_fit(f, g, &cfg.scaling_r, p, &cfg.scaling)?;
            let required = 1.0 / p - cfg.exponent_tol;
            let passed = !fit.degenerate && fit.slope.is_some_and(|s| s >= required);
            scaling.push(SeedScaling { seeds: name.clone(), fit, required, passed });
        }
    }
    let mut interp = Vec::new();
    for (name, f, g) in &pairs {
        for &t in &cfg.interp_t {
            let report = interp_check(f, g, Complex64::new(t, 0.0), &cfg.interp)?;
            interp.push(SeedInterp { seeds: name.clone(), t, report });
        }
    }
    let cutsection = cutsection_check(&cfg.beta_r, cfg.cutsection_p, cfg.beta_resolution.min(256), cfg.exponent_tol)?;
    let passed = beta.iter().all(|b| b.passed)
        && scaling.iter().all(|s| s.passed)
        && interp.iter().all(|i| i.report.passed);
    Ok(GluingReport { config: cfg.clone(), beta, scaling, interp, cutsection, passed })
}

#[cfg(test)]
mod tests;
