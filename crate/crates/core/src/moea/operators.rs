//! Real-coded variation: simulated binary crossover, polynomial mutation and
//! binary tournament selection.

use alloc::vec::Vec;
use core::cmp::Ordering;

use libm::pow;

use crate::rng::RngHandle;
use crate::types::Bounds;

/// Gaps below this are treated as identical parent values.
const MIN_GAP: f64 = 1e-14;

/// Spread factor β of SBX for a uniform draw `u`.
fn spread_factor(u: f64, eta: f64) -> f64 {
    let e = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        pow(2.0 * u, e)
    } else {
        pow(1.0 / (2.0 * (1.0 - u)), e)
    }
}

/// SBX without the final clamp. Each variable recombines with probability
/// one half and the two child values then swap sides with probability one
/// half, which mixes variables between the children. The pair's midpoint is
/// preserved for every variable.
pub(crate) fn sbx_unclamped(
    a: &[f64],
    b: &[f64],
    eta: f64,
    p_c: f64,
    rng: &mut RngHandle,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    if !rng.coin(p_c) {
        return (c1, c2);
    }
    for i in 0..a.len() {
        if !rng.coin(0.5) || (a[i] - b[i]).abs() <= MIN_GAP {
            continue;
        }
        let beta = spread_factor(rng.uniform(), eta);
        let lo = 0.5 * ((1.0 + beta) * a[i] + (1.0 - beta) * b[i]);
        let hi = 0.5 * ((1.0 - beta) * a[i] + (1.0 + beta) * b[i]);
        if rng.coin(0.5) {
            (c1[i], c2[i]) = (hi, lo);
        } else {
            (c1[i], c2[i]) = (lo, hi);
        }
    }
    (c1, c2)
}

/// Simulated binary crossover with distribution index `eta`, applied with
/// probability `p_c`; children are clamped to `bounds`.
pub fn sbx_crossover(
    a: &[f64],
    b: &[f64],
    eta: f64,
    p_c: f64,
    bounds: &Bounds,
    rng: &mut RngHandle,
) -> (Vec<f64>, Vec<f64>) {
    let (mut c1, mut c2) = sbx_unclamped(a, b, eta, p_c, rng);
    bounds.clamp_in_place(&mut c1);
    bounds.clamp_in_place(&mut c2);
    (c1, c2)
}

/// Bounded polynomial mutation: each variable is perturbed with probability
/// `p_m` by a step whose distribution shrinks toward the nearer bound.
pub fn polynomial_mutation(x: &mut [f64], eta: f64, p_m: f64, bounds: &Bounds, rng: &mut RngHandle) {
    for (i, v) in x.iter_mut().enumerate() {
        if !rng.coin(p_m) {
            continue;
        }
        let (lo, hi) = (bounds.lower()[i], bounds.upper()[i]);
        let width = hi - lo;
        if width <= 0.0 {
            continue;
        }
        let d1 = (*v - lo) / width;
        let d2 = (hi - *v) / width;
        let r = rng.uniform();
        let power = 1.0 / (eta + 1.0);
        let dq = if r < 0.5 {
            let val = 2.0 * r + (1.0 - 2.0 * r) * pow(1.0 - d1, eta + 1.0);
            pow(val, power) - 1.0
        } else {
            let val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * pow(1.0 - d2, eta + 1.0);
            1.0 - pow(val, power)
        };
        *v = (*v + dq * width).clamp(lo, hi);
    }
}

/// Draws two members of `0..n` uniformly and returns the preferred one;
/// `cmp(i, j) == Less` means `i` is better. Ties go to a fair coin.
pub fn binary_tournament(
    n: usize,
    rng: &mut RngHandle,
    cmp: impl Fn(usize, usize) -> Ordering,
) -> usize {
    let i = rng.index(n);
    let j = rng.index(n);
    match cmp(i, j) {
        Ordering::Less => i,
        Ordering::Greater => j,
        Ordering::Equal => {
            if rng.coin(0.5) {
                i
            } else {
                j
            }
        }
    }
}
