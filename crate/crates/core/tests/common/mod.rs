// Reference implementations used by the integration tests. Each one is
// computed from first principles and never calls into the library's own
// closed forms.
#![allow(dead_code)]

use std::f64::consts::PI;

use horosvm::data::BinaryDataset;
use horosvm::geometry::{Horosphere, PoincarePoint};
use horosvm::manifold::{AmbientGradient, ProductPoint};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::erf::erf;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = norm(&v);
        if n > 1e-12 {
            return v.iter().map(|a| a / n).collect();
        }
    }
}

/// Uniform direction, radius uniform in `[r_lo, r_hi)`.
pub fn ball_point(rng: &mut ChaCha8Rng, dim: usize, r_lo: f64, r_hi: f64) -> PoincarePoint {
    let r = rng.random_range(r_lo..r_hi);
    PoincarePoint::new(unit(rng, dim).iter().map(|a| a * r).collect()).unwrap()
}

/// `arccosh(1 + 2|x − y|² / ((1 − |x|²)(1 − |y|²)))`, straight from the
/// definition of the Poincare metric.
pub fn acosh_distance(x: &[f64], y: &[f64]) -> f64 {
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum();
    (1.0 + 2.0 * d2 / ((1.0 - dot(x, x)) * (1.0 - dot(y, y)))).acosh()
}

/// Busemann function as the limit `d(γ_ω(t), x) − t` at finite `t`, with
/// the ray `γ_ω(t) = tanh(t/2)·ω` through the origin.
pub fn busemann_limit(omega: &[f64], x: &[f64], t: f64) -> f64 {
    let ray: Vec<f64> = omega.iter().map(|w| w * (0.5 * t).tanh()).collect();
    // 1 − tanh²(t/2) underflows for large t; use sech² directly.
    let s = 1.0 / (0.5 * t).cosh();
    let ray_boundary = s * s;
    let d2: f64 = ray.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum();
    let arg = 1.0 + 2.0 * d2 / (ray_boundary * (1.0 - dot(x, x)));
    // arccosh(z) = ln(z + sqrt(z² − 1)) is exact enough at z ~ e^t.
    (arg + (arg * arg - 1.0).sqrt()).ln() - t
}

/// Euclidean arclength of a curve in the ball under the Poincare metric,
/// `∫ 2|c'(s)| / (1 − |c(s)|²) ds`, by the composite Simpson rule.
pub fn hyperbolic_arclength(curve: impl Fn(f64) -> Vec<f64>, steps: usize) -> f64 {
    let speed = |s: f64| {
        let h = 1e-6;
        let a = curve(s - h);
        let b = curve(s + h);
        let c = curve(s);
        let v: Vec<f64> = a.iter().zip(&b).map(|(p, q)| (q - p) / (2.0 * h)).collect();
        2.0 * norm(&v) / (1.0 - dot(&c, &c))
    };
    let n = steps + steps % 2;
    let (lo, hi) = (1e-6, 1.0 - 1e-6);
    let h = (hi - lo) / n as f64;
    let mut total = speed(lo) + speed(hi);
    for i in 1..n {
        total += if i % 2 == 1 { 4.0 } else { 2.0 } * speed(lo + i as f64 * h);
    }
    total * h / 3.0
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    f(0.5 * (a + b))
}

/// Distance from `x` to the horosphere by minimizing `d(x, y)` over its
/// points `y`. The horosphere is the Euclidean sphere tangent to the
/// boundary at ω through `tanh(λ/2)·ω`; by symmetry the nearest point lies
/// in the plane of ω and x, so a circle search plus golden-section
/// refinement suffices.
pub fn brute_force_horosphere_distance(x: &PoincarePoint, h: &Horosphere) -> f64 {
    let omega = h.omega().direction();
    let level = h.b() / h.mu();
    let p = (0.5 * level).tanh();
    let center: Vec<f64> = omega.iter().map(|w| w * 0.5 * (1.0 + p)).collect();
    let radius = 0.5 * (1.0 - p);
    let xc = x.coords();
    let along = dot(xc, omega);
    let mut e: Vec<f64> = xc.iter().zip(omega).map(|(a, w)| a - along * w).collect();
    let en = norm(&e);
    if en < 1e-12 {
        // x on the axis: any orthogonal direction will do.
        e = vec![0.0; omega.len()];
        let k = if omega[0].abs() < 0.9 { 0 } else { 1 };
        e[k] = 1.0;
        let a = dot(&e, omega);
        e.iter_mut().zip(omega).for_each(|(v, w)| *v -= a * w);
        let n = norm(&e);
        e.iter_mut().for_each(|v| *v /= n);
    } else {
        e.iter_mut().for_each(|v| *v /= en);
    }
    let on = |theta: f64| -> Vec<f64> {
        center
            .iter()
            .zip(omega)
            .zip(&e)
            .map(|((c, w), u)| c + radius * (theta.cos() * w + theta.sin() * u))
            .collect()
    };
    let dist = |theta: f64| acosh_distance(xc, &on(theta));
    let n = 20_000;
    let step = 2.0 * PI / n as f64;
    let (mut best, mut best_theta) = (f64::INFINITY, PI);
    for i in 1..n {
        let theta = i as f64 * step;
        let d = dist(theta);
        if d < best {
            best = d;
            best_theta = theta;
        }
    }
    golden_min(dist, best_theta - step, best_theta + step, 200).min(best)
}

/// Positive-class penalty sum from its definition, with ω free in `R^n`:
/// `Σ φ(offset − yᵢ(μ·(ln(1 − |xᵢ|²) − ln|ω − xᵢ|²) − b))`.
pub fn raw_objective(mu: f64, omega: &[f64], b: f64, data: &BinaryDataset, perceptron: bool, c: f64) -> f64 {
    let mut total = 0.0;
    for (x, &y) in data.points().iter().zip(data.y()) {
        let xc = x.coords();
        let d2: f64 = omega.iter().zip(xc).map(|(w, a)| (w - a).powi(2)).sum();
        let s = (1.0 - dot(xc, xc)).ln() - d2.ln();
        let g = y * (mu * s - b);
        total += if perceptron { (-g).max(0.0) } else { (1.0 - g).max(0.0) };
    }
    if perceptron {
        total / data.len() as f64
    } else {
        0.5 * mu * mu + c * total
    }
}

/// Smallest distance of any sample's hinge argument to its kink.
pub fn kink_distance(mu: f64, omega: &[f64], b: f64, data: &BinaryDataset, perceptron: bool) -> f64 {
    let offset = if perceptron { 0.0 } else { 1.0 };
    data.points()
        .iter()
        .zip(data.y())
        .map(|(x, &y)| {
            let xc = x.coords();
            let d2: f64 = omega.iter().zip(xc).map(|(w, a)| (w - a).powi(2)).sum();
            let s = (1.0 - dot(xc, xc)).ln() - d2.ln();
            (offset - y * (mu * s - b)).abs()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Central differences of [`raw_objective`] in `μ`, `b` and every ambient
/// coordinate of ω.
pub fn finite_difference_gradient(
    p: &ProductPoint,
    data: &BinaryDataset,
    perceptron: bool,
    c: f64,
    h: f64,
) -> AmbientGradient {
    let mu = p.mu.value();
    let b = p.b.value();
    let omega = p.omega.as_slice().to_vec();
    let f = |m: f64, w: &[f64], bb: f64| raw_objective(m, w, bb, data, perceptron, c);
    let d_mu = (f(mu + h, &omega, b) - f(mu - h, &omega, b)) / (2.0 * h);
    let d_b = (f(mu, &omega, b + h) - f(mu, &omega, b - h)) / (2.0 * h);
    let d_omega = (0..omega.len())
        .map(|k| {
            let mut up = omega.clone();
            let mut down = omega.clone();
            up[k] += h;
            down[k] -= h;
            (f(mu, &up, b) - f(mu, &down, b)) / (2.0 * h)
        })
        .collect();
    AmbientGradient { mu: d_mu, omega: d_omega, b: d_b }
}

/// CDF of the radius of an origin-centered Riemannian normal in the
/// Poincare disk, density `∝ exp(−r²/2σ²) sinh r`. Completing the square
/// in `e^{±r}` gives the closed form in `erf`.
pub fn disk_radial_cdf(r: f64, sigma: f64) -> f64 {
    let s2 = std::f64::consts::SQRT_2 * sigma;
    let a = sigma / std::f64::consts::SQRT_2;
    (erf((r - sigma * sigma) / s2) - erf((r + sigma * sigma) / s2) + 2.0 * erf(a)) / (2.0 * erf(a))
}

pub fn invert_cdf(cdf: impl Fn(f64) -> f64, u: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// χ² statistic of `samples` against `bins` equiprobable bins of `cdf`.
pub fn chi_square_equiprobable(samples: &[f64], cdf: impl Fn(f64) -> f64, bins: usize) -> f64 {
    let mut counts = vec![0usize; bins];
    for &s in samples {
        let k = ((cdf(s) * bins as f64) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let expected = samples.len() as f64 / bins as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

/// Kolmogorov–Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let f = cdf(s);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at significance 0.01.
pub fn ks_critical_01(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}

pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff) / norm(a).max(norm(b)).max(1e-12)
}

pub fn flatten(g: &AmbientGradient) -> Vec<f64> {
    let mut v = vec![g.mu, g.b];
    v.extend_from_slice(&g.omega);
    v
}

/// Spearman rank correlation, ties given their mean rank.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let mean = 0.5 * (i + j) as f64 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = mean;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
