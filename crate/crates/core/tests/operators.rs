mod common;

use bergman_lab::extrapolation::tile_norm;
use bergman_lab::geometry::pow2;
use bergman_lab::kernel::{kernel_bergman, kernel_dyadic, kernel_plus};
use bergman_lab::operators::{
    apply_bergman, apply_dyadic, apply_pplus, dyadic_floor_tail, dyadic_maximal, dyadic_tail, family_maximal,
    maximal_alpha, weight_tile_masses,
};
use bergman_lab::{
    locate_tile, AlphaMeasure, BoxFamily, CarlesonBox, DyadicInterval, GridWindow, Interval, Point, QuadratureSpec,
    Shift, TestFunction, TileFunction, Weight,
};
use common::{grid, random_tiles, rect_oracle, rel};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mu(a: f64) -> AlphaMeasure {
    AlphaMeasure::new(a).unwrap()
}

fn pt(x: f64, y: f64) -> Point {
    Point::new(x, y).unwrap()
}

fn unit_box() -> CarlesonBox {
    CarlesonBox::full(Interval::new(0.0, 1.0).unwrap())
}

#[test]
fn kernel_values() {
    let v = kernel_bergman(pt(0.0, 1.0), pt(0.0, 1.0), &mu(0.0));
    assert!((v - Complex64::new(-0.25, 0.0)).norm() < 1e-16);
    let v = kernel_bergman(pt(1.0, 1.0), pt(0.0, 1.0), &mu(1.0));
    let expect = Complex64::new(1.0, 2.0).powi(-3);
    assert!((v - expect).norm() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let z = pt(rng.gen_range(-5.0..5.0), rng.gen_range(0.01..5.0));
        let xi = pt(rng.gen_range(-5.0..5.0), rng.gen_range(0.01..5.0));
        let m = mu(rng.gen_range(-0.9..3.0));
        let a = kernel_bergman(z, xi, &m).norm();
        let b = kernel_plus(z, xi, &m);
        assert!(rel(a, b) < 1e-12);
    }
}

#[test]
fn dyadic_kernel_series() {
    let win = GridWindow::new(-4, 30, -1e9, 1e9).unwrap();
    let z = pt(0.5, 0.75);
    let k = kernel_dyadic(z, z, Shift::Zero, &mu(0.0), &win).unwrap();
    assert!((k.value - 4.0 / 3.0).abs() <= k.tail + 1e-15);
    let k = kernel_dyadic(z, pt(1.5, 0.75), Shift::Zero, &mu(0.0), &win).unwrap();
    assert!((k.value - 1.0 / 3.0).abs() <= k.tail + 1e-15);
    let small = GridWindow::new(-4, 0, -4.0, 4.0).unwrap();
    let k = kernel_dyadic(pt(-0.5, 0.75), pt(0.5, 0.75), Shift::Zero, &mu(0.0), &small).unwrap();
    assert_eq!(k.value, 0.0);
}

#[test]
fn pplus_bracket_and_oracle() {
    let win = GridWindow::new(-6, 3, -8.0, 8.0).unwrap();
    let q = QuadratureSpec::default();
    let f = TestFunction::Indicator(unit_box());
    let zero = TestFunction::custom(|_| 0.0);
    assert_eq!(apply_pplus(&zero, pt(0.3, 0.3), &mu(0.0), &win, &q).unwrap().value, 0.0);

    let v = apply_pplus(&f, pt(0.0, 10.0), &mu(0.0), &win, &q).unwrap().value;
    assert!((1.0 / 122.0..=1.0 / 100.0).contains(&v), "{v}");

    let z = pt(0.5, 0.5);
    let v = apply_pplus(&f, z, &mu(0.0), &win, &q).unwrap();
    let r = unit_box().rect();
    let oracle = rect_oracle(&r, 0.0, 16, |x, y| kernel_plus(z, pt(x, y.max(1e-300)), &mu(0.0)));
    assert!(rel(v.value, oracle) < 1e-8, "{} vs {oracle}", v.value);
}

#[test]
fn bergman_is_dominated_by_pplus() {
    let win = GridWindow::new(-5, 3, -8.0, 8.0).unwrap();
    let q = QuadratureSpec::default();
    let f = TestFunction::custom(|z| (3.0 * z.x).sin() * (-z.modulus()).exp());
    let g = TestFunction::custom(|z| ((3.0 * z.x).sin() * (-z.modulus()).exp()).abs());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..6 {
        let z = pt(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..3.0));
        for a in [0.0, 1.0] {
            let b = apply_bergman(&f, z, &mu(a), &win, &q, 1.0).unwrap();
            let p = apply_pplus(&g, z, &mu(a), &win, &q).unwrap();
            assert!(b.value.norm() <= p.value * (1.0 + 1e-10) + p.error);
        }
    }
}

#[test]
fn dyadic_operator_on_unit_box() {
    let g = grid(Shift::Zero, -6, 10, -1024.0, 1024.0);
    let f = TileFunction::from_fn(g, |d| if d.left() >= 0.0 && d.right() <= 1.0 { 1.0 } else { 0.0 });
    let m = mu(0.0);
    let q = apply_dyadic(&f, &m);
    let unit = DyadicInterval::new(Shift::Zero, 0, 0);
    let v = q.get(&unit).unwrap();
    // mass of the unit box above the finest row, times the ancestor series up to 2^10
    let exact = (1.0 - pow2(-7)) * (1.0 - 0.25f64.powi(11)) / 0.75;
    assert!((v - exact).abs() < 1e-13);
    let allowance = dyadic_tail(&f, &m) + dyadic_floor_tail(&f, &m).get(&unit).unwrap();
    assert!((v - 4.0 / 3.0).abs() <= allowance);

    let twice = apply_dyadic(&f.map(|v| 2.0 * v), &m);
    assert!(twice.values().zip(q.values()).all(|(a, b)| a == 2.0 * b));
    let zero = apply_dyadic(&f.map(|_| 0.0), &m);
    assert!(zero.values().all(|v| v == 0.0));
}

// Q f at a tile by enumerating its ancestors and integrating f over each box
fn dyadic_by_ancestors(f: &TileFunction, shift: Shift, z: Point, m: &AlphaMeasure) -> f64 {
    let mut d = locate_tile(shift, z).unwrap();
    let j_max = f.grid().window.j_max;
    let mut total = 0.0;
    while d.j <= j_max {
        let iv = d.realize();
        total += f.box_integral(&iv, m) * iv.length.powf(-m.dimension());
        d = d.parent();
    }
    total
}

#[test]
fn dyadic_operator_matches_ancestor_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for shift in Shift::BOTH {
        for a in [-0.5, 0.0, 1.5] {
            let g = grid(shift, -4, 2, -4.0, 4.0);
            let f = random_tiles(&mut rng, &g, -1.0, 1.0);
            let q = apply_dyadic(&f, &mu(a));
            for (d, v) in q.iter() {
                let c = d.realize();
                let z = pt(c.left + 0.5 * c.length, 0.75 * c.length);
                let w = dyadic_by_ancestors(&f, shift, z, &mu(a));
                assert!((v - w).abs() <= 1e-11 * (1.0 + w.abs()), "{d}: {v} vs {w}");
            }
        }
    }
}

#[test]
fn dyadic_operator_is_self_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 0..100 {
        let shift = if n % 2 == 0 { Shift::Zero } else { Shift::Third };
        let g = grid(shift, -5, rng.gen_range(-1..3), -4.0, 4.0);
        let m = mu(rng.gen_range(-0.9..2.0));
        let f = random_tiles(&mut rng, &g, -1.0, 1.0);
        let h = random_tiles(&mut rng, &g, -1.0, 1.0);
        let a = apply_dyadic(&f, &m).inner(&h, &m).unwrap();
        let b = f.inner(&apply_dyadic(&h, &m), &m).unwrap();
        assert!((a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1e-300));
    }
}

#[test]
fn weighted_norm_equality_on_matched_vectors() {
    // Q on L²(w) and Q(w⁻¹ ·) from L²(w⁻¹) to L²(w) give the same quotient at g = w f
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let g = grid(Shift::Third, -4, 1, -2.0, 2.0);
    let m = mu(0.5);
    let w = random_tiles(&mut rng, &g, 0.2, 5.0);
    let winv = w.map(f64::recip);
    for _ in 0..10 {
        let f = random_tiles(&mut rng, &g, 0.0, 1.0);
        let gf = f.zip_map(&w, |a, b| a * b).unwrap();
        let lhs = tile_norm(&apply_dyadic(&f, &m), &w, 2.0, &m).unwrap() / tile_norm(&f, &w, 2.0, &m).unwrap();
        let qg = apply_dyadic(&gf.zip_map(&winv, |a, b| a * b).unwrap(), &m);
        let rhs = tile_norm(&qg, &w, 2.0, &m).unwrap() / tile_norm(&gf, &winv, 2.0, &m).unwrap();
        assert!(rel(lhs, rhs) < 1e-13);
    }
}

#[test]
fn operator_domination_at_sampled_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let q = QuadratureSpec::default();
    for a in [0.0, 1.0] {
        let m = mu(a);
        let g = grid(Shift::Zero, -3, 3, -4.0, 4.0);
        let f = TileFunction::from_fn(g.clone(), |d| if d.j <= 0 && d.left().abs() < 2.0 { rng.gen_range(0.0..1.0) } else { 0.0 });
        let win = g.window;
        let c = 16f64.powf(m.dimension()) / (1.0 - (-m.dimension()).exp2());
        let tf = TestFunction::Tiles(f.clone());
        for _ in 0..20 {
            let z = pt(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..4.0));
            let p = apply_pplus(&tf, z, &m, &win, &q).unwrap();
            let d: f64 = Shift::BOTH.iter().map(|&s| dyadic_by_ancestors(&f, s, z, &m)).sum();
            assert!(p.value <= c * d + p.tail + p.error, "{z:?}: {} vs {}", p.value, c * d);
        }
    }
}

#[test]
fn maximal_of_unit_box() {
    let g = grid(Shift::Zero, -5, 2, -4.0, 4.0);
    let f = TileFunction::from_fn(g.clone(), |d| if d.left() >= 0.0 && d.right() <= 1.0 { 1.0 } else { 0.0 });
    let one = Weight::constant(1.0).unwrap();
    let q = QuadratureSpec::default();
    let mf = dyadic_maximal(&f, &one, &mu(0.0), &q).unwrap();
    for (d, v) in mf.iter() {
        if d.left() >= 0.0 && d.right() <= 1.0 {
            assert!((v - 1.0).abs() < 1e-12, "{d} {v}");
        }
    }
    let next = mf.get(&DyadicInterval::new(Shift::Zero, 0, 1)).unwrap();
    // best box is [0,2), truncated at the bottom of the window
    let bottom = pow2(-6);
    assert!((next - (1.0 - bottom) / (2.0 * (2.0 - bottom))).abs() < 1e-12, "{next}");
    let left = DyadicInterval::new(Shift::Zero, -3, -1);
    let two = maximal_alpha(&f, &mu(0.0));
    assert_eq!(mf.get(&left).unwrap(), 0.0);
    assert!(two.get(&left).unwrap() > 0.0);
}

#[test]
fn maximal_functions_are_ordered() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let q = QuadratureSpec::default();
    let one = Weight::constant(1.0).unwrap();
    for shift in Shift::BOTH {
        let g = grid(shift, -4, 1, -2.0, 2.0);
        let m = mu(0.5);
        let f = random_tiles(&mut rng, &g, -1.0, 1.0);
        let dy = dyadic_maximal(&f, &one, &m, &q).unwrap();
        let two = maximal_alpha(&f, &m);
        let fam = BoxFamily::explicit(
            "random",
            (0..100).map(|_| Interval::new(rng.gen_range(-2.5..1.5), rng.gen_range(0.05..3.0)).unwrap()).collect(),
        )
        .unwrap();
        let full = family_maximal(&f, &fam, &m);
        for ((a, b), c) in dy.values().zip(two.values()).zip(full.values()) {
            assert!(a <= b + 1e-12 && b <= c);
        }
        // on the finest row the box of the tile is the tile itself
        let bottom = g.levels() - 1;
        for (v, a) in f.level(bottom).iter().zip(dy.level(bottom)) {
            assert!(v.abs() <= a + 1e-12);
        }
        let c = TileFunction::constant(g, 2.5);
        assert!(maximal_alpha(&c, &m).values().all(|v| (v - 2.5).abs() < 1e-12));
    }
}

#[test]
fn doob_bound_for_weighted_maximal() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let q = QuadratureSpec::default();
    let g = grid(Shift::Third, -5, 1, -3.0, 3.0);
    let m = mu(0.0);
    let areas = TileFunction::tile_areas(&g, &m);
    let weights = [
        Weight::power(1.2).unwrap(),
        Weight::step(1.0, 30.0).unwrap(),
        Weight::table(random_tiles(&mut rng, &g, 0.01, 10.0)).unwrap(),
    ];
    for w in &weights {
        let masses = weight_tile_masses(&g, w, &m, &q).unwrap();
        let wt = masses.zip_map(&areas, |a, b| a / b).unwrap();
        for _ in 0..5 {
            let f = TileFunction::from_fn(g.clone(), |_| if rng.gen_bool(0.1) { rng.gen_range(0.0..10.0) } else { 0.0 });
            let mf = dyadic_maximal(&f, w, &m, &q).unwrap();
            for p in [1.5, 2.0, 3.0] {
                let r = tile_norm(&mf, &wt, p, &m).unwrap() / tile_norm(&f, &wt, p, &m).unwrap();
                assert!(r <= p / (p - 1.0), "{w} p={p}: {r}");
            }
        }
    }
}
