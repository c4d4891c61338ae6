use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, exp, pow, sin, sqrt};

use crate::rng::RngHandle;

fn mean_tail(x: &[f64]) -> f64 {
    x[1..].iter().sum::<f64>() / (x.len() - 1) as f64
}

pub(super) fn zdt1(x: &[f64]) -> Vec<f64> {
    let f1 = x[0];
    let g = 1.0 + 9.0 * mean_tail(x);
    vec![f1, g * (1.0 - sqrt(f1 / g))]
}

pub(super) fn zdt2(x: &[f64]) -> Vec<f64> {
    let f1 = x[0];
    let g = 1.0 + 9.0 * mean_tail(x);
    let r = f1 / g;
    vec![f1, g * (1.0 - r * r)]
}

pub(super) fn zdt3(x: &[f64]) -> Vec<f64> {
    let f1 = x[0];
    let g = 1.0 + 9.0 * mean_tail(x);
    let r = f1 / g;
    vec![f1, g * (1.0 - sqrt(r) - r * sin(10.0 * PI * f1))]
}

pub(super) fn zdt4(x: &[f64]) -> Vec<f64> {
    let f1 = x[0];
    let g = 1.0
        + 10.0 * (x.len() - 1) as f64
        + x[1..]
            .iter()
            .map(|&v| v * v - 10.0 * cos(4.0 * PI * v))
            .sum::<f64>();
    vec![f1, g * (1.0 - sqrt(f1 / g))]
}

fn zdt6_f1(x1: f64) -> f64 {
    1.0 - exp(-4.0 * x1) * pow(sin(6.0 * PI * x1), 6.0)
}

pub(super) fn zdt6(x: &[f64]) -> Vec<f64> {
    let f1 = zdt6_f1(x[0]);
    let g = 1.0 + 9.0 * pow(mean_tail(x), 0.25);
    let r = f1 / g;
    vec![f1, g * (1.0 - r * r)]
}

/// Golden-section search for a minimum of `h` on `[lo, hi]`.
fn golden_min(h: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (sqrt(5.0) - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (h(a), h(b));
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = h(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = h(b);
        }
    }
    let mid = 0.5 * (lo + hi);
    [lo, mid, hi]
        .into_iter()
        .fold(mid, |best, t| if h(t) < h(best) { t } else { best })
}

/// Smallest attainable first objective of ZDT6, found by a dense grid scan
/// followed by golden-section refinement.
pub fn zdt6_min_f1() -> f64 {
    const GRID: usize = 10_000;
    let step = 1.0 / GRID as f64;
    let best = (0..=GRID)
        .min_by(|&a, &b| zdt6_f1(a as f64 * step).total_cmp(&zdt6_f1(b as f64 * step)))
        .unwrap_or(0);
    let lo = (best as f64 - 1.0).max(0.0) * step;
    let hi = ((best + 1) as f64 * step).min(1.0);
    zdt6_f1(golden_min(zdt6_f1, lo, hi))
}

fn zdt3_curve(t: f64) -> f64 {
    1.0 - sqrt(t) - t * sin(10.0 * PI * t)
}

/// The disconnected `f1` intervals on which ZDT3's front lives.
///
/// A dense sweep keeps every grid point whose curve value undercuts all
/// earlier ones; consecutive runs form the segments, whose ends are then
/// refined (local minimum by golden section, start by bisection on the
/// running-minimum level).
pub fn zdt3_front_segments() -> Vec<(f64, f64)> {
    const GRID: usize = 1_000_000;
    let step = 1.0 / GRID as f64;
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut running_min = f64::INFINITY;
    for k in 0..=GRID {
        let v = zdt3_curve(k as f64 * step);
        if v < running_min {
            running_min = v;
            match runs.last_mut() {
                Some(run) if run.1 + 1 == k => run.1 = k,
                _ => runs.push((k, k)),
            }
        }
    }

    let mut segments = Vec::with_capacity(runs.len());
    let mut level = f64::INFINITY;
    for (ks, ke) in runs {
        let start = if ks == 0 {
            0.0
        } else {
            // h(lo) >= level > h(hi)
            let (mut lo, mut hi) = ((ks - 1) as f64 * step, ks as f64 * step);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if zdt3_curve(mid) >= level {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hi
        };
        let lo = ke.saturating_sub(1) as f64 * step;
        let hi = ((ke + 1) as f64 * step).min(1.0);
        let end = golden_min(zdt3_curve, lo, hi);
        level = zdt3_curve(end);
        segments.push((start, end));
    }
    segments
}

/// `f2 = 1 - sqrt(f1)` with `f1` uniform on `[0, 1]`.
pub(super) fn sample_convex(count: usize, rng: &mut RngHandle) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let t = rng.uniform();
            vec![t, 1.0 - sqrt(t)]
        })
        .collect()
}

/// `f2 = 1 - f1^2` with `f1` uniform on `[start, 1]`.
pub(super) fn sample_concave(count: usize, start: f64, rng: &mut RngHandle) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let t = rng.uniform_in(start, 1.0);
            vec![t, 1.0 - t * t]
        })
        .collect()
}

pub(super) fn sample_zdt3(count: usize, rng: &mut RngHandle) -> Vec<Vec<f64>> {
    let segments = zdt3_front_segments();
    let total: f64 = segments.iter().map(|(a, b)| b - a).sum();
    (0..count)
        .map(|_| {
            let mut u = rng.uniform() * total;
            let mut t = segments[segments.len() - 1].1;
            for &(a, b) in &segments {
                if u <= b - a {
                    t = a + u;
                    break;
                }
                u -= b - a;
            }
            vec![t, zdt3_curve(t)]
        })
        .collect()
}
