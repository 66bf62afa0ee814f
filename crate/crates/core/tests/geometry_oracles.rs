mod common;

use common::*;
use horosvm::geometry::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn distance_matches_arccosh_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for dim in [2, 3, 7] {
        for _ in 0..200 {
            let x = ball_point(&mut rng, dim, 0.0, 0.99);
            let y = ball_point(&mut rng, dim, 0.0, 0.99);
            let want = acosh_distance(x.coords(), y.coords());
            assert!((geodesic_distance(&x, &y) - want).abs() <= 1e-9 * want.max(1.0));
        }
    }
}

#[test]
fn geodesic_from_has_the_requested_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let start = ball_point(&mut rng, 3, 0.0, 0.7);
        let dir = unit(&mut rng, 3);
        let t = rng.random_range(0.2..3.0);
        let len = hyperbolic_arclength(|s| geodesic_from(&start, &dir, s * t).coords().to_vec(), 2000);
        assert!((len - t).abs() < 1e-5 * t, "length {len} vs {t}");
    }
}

#[test]
fn exp_and_log_agree_with_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let x = ball_point(&mut rng, 4, 0.0, 0.9);
        let y = ball_point(&mut rng, 4, 0.0, 0.9);
        let v = log_map(&x, &y);
        // |v|_x = λ_x |v| is the geodesic distance.
        let speed = x.conformal_factor() * norm(v.vec());
        assert!((speed - acosh_distance(x.coords(), y.coords())).abs() < 1e-8);
        let back = exp_map(&v);
        assert!(acosh_distance(back.coords(), y.coords()) < 1e-6);
    }
}

#[test]
fn busemann_is_the_limit_of_distance_minus_time() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for dim in [2, 5, 10] {
        for _ in 0..100 {
            let w = unit(&mut rng, dim);
            let x = ball_point(&mut rng, dim, 0.0, 0.95);
            let closed = busemann(&IdealPoint::new(w.clone()).unwrap(), &x);
            assert!((closed - busemann_limit(&w, x.coords(), 20.0)).abs() <= 1e-6);
        }
    }
}

#[test]
fn horosphere_distance_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 60 {
        let dim = rng.random_range(2..=3);
        let omega = IdealPoint::new(unit(&mut rng, dim)).unwrap();
        let h = Horosphere::new(rng.random_range(0.3..3.0), omega, rng.random_range(-2.0..2.0)).unwrap();
        let x = ball_point(&mut rng, dim, 0.0, 0.95);
        let d = point_to_horosphere_distance(&x, &h);
        if d < 1e-2 {
            continue;
        }
        let oracle = brute_force_horosphere_distance(&x, &h);
        assert!((d - oracle).abs() <= 1e-4 * oracle, "{d} vs {oracle}");
        checked += 1;
    }
}

#[test]
fn horosphere_sphere_points_share_one_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let omega = IdealPoint::new(unit(&mut rng, 3)).unwrap();
        let h = Horosphere::new(1.7, omega.clone(), rng.random_range(-3.0..3.0)).unwrap();
        let (c, r) = h.euclidean_form();
        let u = unit(&mut rng, 3);
        let z: Vec<f64> = c.iter().zip(&u).map(|(a, b)| a + r * b).collect();
        if dot(&z, &z) > 0.999 {
            continue;
        }
        let z = PoincarePoint::new(z).unwrap();
        assert!((poincare_inner(&omega, &z) - h.level()).abs() < 1e-8);
    }
}
