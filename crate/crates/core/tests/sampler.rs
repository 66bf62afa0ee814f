mod common;

use common::*;
use horosvm::geometry::{poincare_inner, IdealPoint, PoincarePoint};
use horosvm::synth::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn radius(x: &PoincarePoint) -> f64 {
    2.0 * x.norm().atanh()
}

#[test]
fn tabulated_quantiles_match_disk_closed_form() {
    for sigma in [0.5, 1.0, 1.5f64.sqrt(), 2.0] {
        let s = RadialSampler::new(sigma, 2);
        for k in 1..100 {
            let u = k as f64 / 100.0;
            let want = invert_cdf(|r| disk_radial_cdf(r, sigma), u, 50.0);
            assert!((s.quantile(u) - want).abs() < 1e-4 * want.max(1.0), "sigma {sigma}, u {u}");
        }
    }
}

#[test]
fn disk_samples_pass_chi_square_and_ks() {
    let sigma = 1.0;
    let n = 20_000;
    let samples = sample_riemannian_normal(&RiemannianNormalParams::new(PoincarePoint::origin(2), sigma).unwrap(), n, 99);
    let radii: Vec<f64> = samples.iter().map(radius).collect();
    let bins = 40;
    let stat = chi_square_equiprobable(&radii, |r| disk_radial_cdf(r, sigma), bins);
    let crit = ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(0.99);
    assert!(stat < crit, "chi2 {stat} >= {crit}");
    let angles: Vec<f64> = samples.iter().map(|x| x.coords()[1].atan2(x.coords()[0])).collect();
    let pi = std::f64::consts::PI;
    let d = ks_statistic(&angles, |a| (a + pi) / (2.0 * pi));
    assert!(d < ks_critical_01(n), "ks {d}");
}

#[test]
fn cap_levels_respect_the_gap() {
    let omega = IdealPoint::axis(3, 2);
    let spec = CapSpec::new(omega.clone(), 1.0, 0.5, 80);
    let data = make_cap_dataset(&spec, 4).unwrap();
    for (x, label) in data.points().iter().zip(data.labels()) {
        let level = poincare_inner(&omega, x);
        match label.as_str() {
            "1" => assert!(level >= 1.5 - 1e-9, "{level}"),
            _ => assert!(level <= 0.5 + 1e-9, "{level}"),
        }
    }
}
