use super::*;
use proptest::prelude::*;

fn scalar(coeffs: &[Complex64]) -> PolySeed {
    PolySeed::new(vec![c(0.0, 0.0)], vec![coeffs.to_vec()]).unwrap()
}

#[test]
fn grid_weights_sum_to_area() {
    for (a, b, nr, nt) in [(0.5, 1.0, 64, 32), (1e-8, 1.0, 1000, 17), (2.0, 3.0, 5, 5)] {
        let g = AnnulusGrid::new(a, b, nr, nt).unwrap();
        assert!((g.quadrature_area() - g.exact_area()).abs() <= 1e-10 * g.exact_area());
        assert_eq!(g.radius(0), a);
        assert_eq!(g.radius(nr - 1), b);
    }
    assert!(AnnulusGrid::new(1.0, 0.5, 10, 10).is_err());
    assert!(AnnulusGrid::new(0.0, 0.5, 10, 10).is_err());
    assert!(AnnulusGrid::new(0.1, 0.5, 4, 10).is_err());
}

#[test]
fn cutoff_shapes() {
    assert_eq!(chi1(0.3), 0.0);
    assert_eq!(chi1(1.0), 0.0);
    assert_eq!(chi1(2.0), 1.0);
    assert_eq!(chi1(7.0), 1.0);
    let h = 1e-6;
    let max_slope = (0..=1000).map(|k| 1.0 + k as f64 / 1000.0).map(|x| (chi1(x + h) - chi1(x - h)) / (2.0 * h)).fold(0.0, f64::max);
    assert!(max_slope <= 2.0 && max_slope > 1.8);

    assert_eq!(chi_step(1.0), 0.0);
    assert_eq!(chi_step(0.0), 0.0);
    assert_eq!(chi_step(4.0), 1.0);
    assert!(chi_step(1.0 + 1e-3) < 1e-100);
    let mut prev = 0.0;
    for k in 0..=3000 {
        let s = 1.0 + k as f64 / 1000.0;
        let v = chi_step(s);
        assert!(v >= prev && v - prev <= 1e-3 + 1e-12);
        prev = v;
    }
}

#[test]
fn beta_energy_matches_log_formula() {
    for r in [1e-2, 1e-4] {
        let s = beta_summary(r, 512, 0.02).unwrap();
        assert!(s.passed, "r = {r}: {s:?}");
    }
    assert!(beta_r(1.0, 64).is_err());
    assert!(beta_r(0.0, 64).is_err());
}

#[test]
fn beta_profile() {
    let r = 1e-3;
    let b = beta_r(r, 256).unwrap();
    let g = &b.map.grid;
    for i in 0..g.nr {
        let rho = g.radius(i);
        let v = b.map.values[0][i * g.nt].re;
        if rho <= r * r.sqrt() * (1.0 - 1e-9) {
            assert_eq!(v, 1.0);
        }
        if rho >= r * (1.0 + 1e-9) {
            assert_eq!(v, 0.0);
        }
        assert!((v - beta_value(r, rho)).abs() < 1e-9);
    }
}

#[test]
fn beta_error_halves_with_mesh() {
    let r = 1e-3;
    let exact = beta_energy_exact(r);
    let coarse = (beta_r(r, 256).unwrap().energy - exact).abs();
    let fine = (beta_r(r, 512).unwrap().energy - exact).abs();
    assert!(coarse / fine >= 1.5, "{coarse} vs {fine}");
}

#[test]
fn holomorphic_maps_have_small_dbar() {
    let grid = AnnulusGrid::new(0.5, 1.0, 512, 512).unwrap();
    let u = LocalMap::from_fn(grid.clone(), vec![c(0.0, 0.0)], |_, _, z| vec![z]).unwrap();
    assert!(dbar_lp_norm(&u, 2.0, Metric::Flat).unwrap() < 1e-6);
    assert!(dbar_lp_norm(&u, 4.0, Metric::Flat).unwrap() < 1e-6);

    let v = LocalMap::from_fn(grid.clone(), vec![c(0.0, 0.0)], |_, _, z| vec![z.conj()]).unwrap();
    for p in [2.0, 4.0] {
        let expected = grid.exact_area().powf(1.0 / p);
        let got = dbar_lp_norm(&v, p, Metric::Flat).unwrap();
        assert!((got - expected).abs() < 0.01 * expected, "p = {p}: {got} vs {expected}");
    }
    assert!(dbar_lp_norm(&u, 0.5, Metric::Flat).is_err());
}

#[test]
fn holomorphic_error_decays_under_refinement() {
    let f = |z: Complex64| vec![z * z * z + (z * 2.0).exp()];
    let norm_at = |n: usize| {
        let grid = AnnulusGrid::new(0.25, 1.0, n, n).unwrap();
        dbar_lp_norm(&LocalMap::from_fn(grid, vec![c(1.0, 0.0)], |_, _, z| f(z)).unwrap(), 2.0, Metric::Flat).unwrap()
    };
    let (a, b) = (norm_at(32), norm_at(64));
    assert!(a / b >= 4.0, "{a} -> {b}");
}

#[test]
fn gradient_of_modulus_function() {
    let grid = AnnulusGrid::new(0.5, 2.0, 256, 64).unwrap();
    let u = LocalMap::from_fn(grid.clone(), vec![c(0.0, 0.0)], |_, _, z| vec![c(z.norm_sqr(), 0.0)]).unwrap();
    let grad = u.gradient_magnitude();
    for i in 0..grid.nr {
        let expected = 2.0 * grid.radius(i);
        assert!((grad[i * grid.nt] - expected).abs() < 1e-6 * expected);
    }
}

#[test]
fn preglue_examples() {
    let p = vec![c(0.2, -0.1)];
    let constant = PolySeed::constant(p.clone());
    let t = c(1e-6, 0.0);
    let u = preglue(&constant, &constant, t, 1.0, 64, 16).unwrap();
    assert!(u.values[0].iter().all(|v| *v == p[0]));

    let f = PolySeed::new(p.clone(), vec![vec![c(1.0, 0.0)]]).unwrap();
    let u = preglue(&f, &constant, t, 1.0, 128, 16).unwrap();
    let r = t.norm().sqrt();
    for i in 0..u.grid.nr {
        for j in 0..u.grid.nt {
            let z = u.grid.point(i, j);
            let expected = p[0] + chi1(z.norm() / r.sqrt()) * z;
            assert!((u.values[0][i * u.grid.nt + j] - expected).norm() < 1e-15);
            if (r * r.sqrt()..=r.sqrt()).contains(&z.norm()) {
                assert_eq!(u.values[0][i * u.grid.nt + j], p[0]);
            }
        }
    }
    assert!(matches!(preglue(&f, &constant, c(1e-2, 0.0), 1.0, 64, 16), Err(Error::Domain { .. })));
    let other = PolySeed::constant(vec![c(0.0, 0.0)]);
    assert!(preglue(&f, &other, t, 1.0, 64, 16).is_err());
}

#[test]
fn linear_seed_norms_decrease_with_r() {
    let (_, f, g) = standard_seed_pairs().remove(0);
    let cfg = ScalingConfig { nr: 512, nt: 64, ..ScalingConfig::default() };
    let fit = scaling_fit(&f, &g, &[1e-2, 1e-3, 1e-4], 2.0, &cfg).unwrap();
    assert!(fit.norms.iter().all(|n| n.is_finite()));
    assert!(fit.norms.windows(2).all(|w| w[1] < w[0]), "{:?}", fit.norms);
    assert!(fit.slope.unwrap() >= 0.5 - 0.15);
    assert_eq!(fit.to_csv().lines().count(), 4);
}

#[test]
fn constant_seeds_are_degenerate() {
    let p = PolySeed::constant(vec![c(1.0, 2.0)]);
    let cfg = ScalingConfig { nr: 128, nt: 16, ..ScalingConfig::default() };
    let fit = scaling_fit(&p, &p, &[1e-2, 1e-3], 4.0, &cfg).unwrap();
    assert!(fit.degenerate);
    assert!(fit.slope.is_none());
    assert!(scaling_fit(&p, &p, &[1e-2], 4.0, &cfg).is_err());
}

#[test]
fn flat_metric_hides_the_g_side_decay() {
    let f = PolySeed::constant(vec![c(0.0, 0.0)]);
    let g = scalar(&[c(1.0, 0.0)]);
    let flat = ScalingConfig { nr: 512, nt: 32, metric: MetricKind::Flat, ..ScalingConfig::default() };
    let neck = ScalingConfig { metric: MetricKind::Neck, ..flat.clone() };
    let r = [1e-2, 1e-3, 1e-4];
    let s_flat = scaling_fit(&f, &g, &r, 4.0, &flat).unwrap().slope.unwrap();
    let s_neck = scaling_fit(&f, &g, &r, 4.0, &neck).unwrap().slope.unwrap();
    assert!((s_flat - (3.0 / 4.0 - 1.0)).abs() < 0.05, "{s_flat}");
    assert!((s_neck - 0.25).abs() < 0.05, "{s_neck}");
}

#[test]
fn upper_half_is_half_for_real_seeds() {
    let f = scalar(&[c(1.0, 0.0), c(0.5, 0.0)]);
    let g = scalar(&[c(-2.0, 0.0)]);
    let u = preglue(&f, &g, c(1e-6, 0.0), 1.0, 256, 64).unwrap();
    for p in [2.0, 4.0] {
        let full = dbar_lp_norm(&u, p, Metric::Flat).unwrap().powf(p);
        let half = dbar_lp_norm_upper_half(&u, p, Metric::Flat).unwrap().powf(p);
        assert!((2.0 * half - full).abs() < 1e-10 * full);
    }
}

#[test]
fn interp_examples() {
    let cfg = InterpConfig { nr: 257, nt: 256, ..InterpConfig::default() };
    let k = PolySeed::constant(vec![c(0.5, 0.5)]);
    let rep = interp_check(&k, &k, c(1e-4, 0.0), &cfg).unwrap();
    assert_eq!(rep.grad_sup, 0.0);
    assert!(rep.passed);

    let id = scalar(&[c(1.0, 0.0)]);
    let rep = interp_check(&id, &id, c(1e-4, 0.0), &cfg).unwrap();
    assert!(rep.passed, "{rep:?}");
    assert!(rep.grad_ratio < 0.5);
    assert!((rep.sup_expected - 2e-2).abs() < 1e-12);
    assert!(interp_check(&id, &id, c(1e-4, 0.0), &InterpConfig { nr: 256, ..cfg }).is_err());
}

#[test]
fn cutsection_slope_is_below_bound() {
    let rep = cutsection_check(&[1e-2, 1e-3, 1e-4], 4.0, 128, 0.15).unwrap();
    assert!(rep.passed, "{rep:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn preglue_matches_closed_forms(
        log_r in -5.0f64..-2.0,
        phase in 0.0f64..std::f64::consts::TAU,
        a in -2.0f64..2.0,
        b in -2.0f64..2.0,
    ) {
        let r = 10f64.powf(log_r);
        let t = Complex64::from_polar(r * r, phase);
        let f = PolySeed::new(vec![c(0.1, 0.2)], vec![vec![c(a, 1.0), c(0.0, b)]]).unwrap();
        let g = PolySeed::new(vec![c(0.1, 0.2)], vec![vec![c(b, -a), c(1.0, 0.0), c(a, 0.0)]]).unwrap();
        let u = preglue(&f, &g, t, 1.0, 96, 12).unwrap();
        for i in 0..u.grid.nr {
            for j in 0..u.grid.nt {
                let z = u.grid.point(i, j);
                let v = u.at(i, j);
                match pregluing_region(z.norm(), r) {
                    PregluingRegion::G => prop_assert_eq!(v, g.eval(t / z)),
                    PregluingRegion::Plateau => prop_assert_eq!(v, f.basepoint.clone()),
                    PregluingRegion::F => prop_assert_eq!(v, f.eval(z)),
                    PregluingRegion::Transition => {}
                }
            }
        }
    }
}
