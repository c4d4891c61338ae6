use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use libm::{cos, pow, sin, sqrt};

use crate::rng::RngHandle;

fn g_rastrigin(tail: &[f64]) -> f64 {
    let sum: f64 = tail
        .iter()
        .map(|&v| (v - 0.5) * (v - 0.5) - cos(20.0 * PI * (v - 0.5)))
        .sum();
    100.0 * (tail.len() as f64 + sum)
}

fn g_sphere(tail: &[f64]) -> f64 {
    tail.iter().map(|&v| (v - 0.5) * (v - 0.5)).sum()
}

/// Linear front `sum f = 0.5 (1 + g)`.
fn linear(pos: &[f64], g: f64, d: usize) -> Vec<f64> {
    (0..d)
        .map(|i| {
            let mut f = 0.5 * (1.0 + g);
            f *= pos[..d - 1 - i].iter().product::<f64>();
            if i > 0 {
                f *= 1.0 - pos[d - 1 - i];
            }
            f
        })
        .collect()
}

/// Spherical front `|f| = 1 + g`.
fn spherical(pos: &[f64], g: f64, d: usize) -> Vec<f64> {
    (0..d)
        .map(|i| {
            let mut f = 1.0 + g;
            f *= pos[..d - 1 - i]
                .iter()
                .map(|&v| cos(v * FRAC_PI_2))
                .product::<f64>();
            if i > 0 {
                f *= sin(pos[d - 1 - i] * FRAC_PI_2);
            }
            f
        })
        .collect()
}

pub(super) fn dtlz1(x: &[f64], d: usize) -> Vec<f64> {
    let (pos, tail) = x.split_at(d - 1);
    linear(pos, g_rastrigin(tail), d)
}

pub(super) fn dtlz2(x: &[f64], d: usize) -> Vec<f64> {
    let (pos, tail) = x.split_at(d - 1);
    spherical(pos, g_sphere(tail), d)
}

pub(super) fn dtlz3(x: &[f64], d: usize) -> Vec<f64> {
    let (pos, tail) = x.split_at(d - 1);
    spherical(pos, g_rastrigin(tail), d)
}

pub(super) fn dtlz4(x: &[f64], d: usize) -> Vec<f64> {
    const ALPHA: f64 = 100.0;
    let (pos, tail) = x.split_at(d - 1);
    let pos: Vec<f64> = pos.iter().map(|&v| pow(v, ALPHA)).collect();
    spherical(&pos, g_sphere(tail), d)
}

/// Uniform on `{f >= 0, sum f = 0.5}`: normalized exponentials are a flat
/// Dirichlet draw.
pub(super) fn sample_simplex(count: usize, d: usize, rng: &mut RngHandle) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| loop {
            let e: Vec<f64> = (0..d).map(|_| rng.exponential()).collect();
            let total: f64 = e.iter().sum();
            if total > 0.0 {
                break e.into_iter().map(|v| 0.5 * v / total).collect();
            }
        })
        .collect()
}

/// Uniform on the unit sphere restricted to the non-negative orthant.
pub(super) fn sample_sphere(count: usize, d: usize, rng: &mut RngHandle) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| loop {
            let z: Vec<f64> = (0..d).map(|_| rng.standard_normal().abs()).collect();
            let norm = sqrt(z.iter().map(|v| v * v).sum::<f64>());
            if norm > 0.0 {
                break z.into_iter().map(|v| v / norm).collect();
            }
        })
        .collect()
}
