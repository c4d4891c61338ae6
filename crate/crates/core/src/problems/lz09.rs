//! LZ09 F1 and F2, two objectives with 30 variables.
//!
//! Variables are 1-indexed in the definitions: `J1` holds the odd indices
//! and `J2` the even indices in `2..=n`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{pow, sin, sqrt};

fn assemble(x: &[f64], residual: impl Fn(usize, f64) -> f64) -> Vec<f64> {
    let n = x.len();
    let (mut odd, mut even) = (0.0, 0.0);
    let (mut n_odd, mut n_even) = (0usize, 0usize);
    for j in 2..=n {
        let y = residual(j, x[j - 1]);
        if j % 2 == 1 {
            odd += y * y;
            n_odd += 1;
        } else {
            even += y * y;
            n_even += 1;
        }
    }
    let x1 = x[0];
    vec![
        x1 + 2.0 * odd / n_odd as f64,
        1.0 - sqrt(x1) + 2.0 * even / n_even as f64,
    ]
}

pub(super) fn f1(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let x1 = x[0];
    assemble(x, |j, xj| {
        let exponent = 0.5 * (1.0 + 3.0 * (j as f64 - 2.0) / (n - 2.0));
        xj - pow(x1, exponent)
    })
}

pub(super) fn f2(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let x1 = x[0];
    assemble(x, |j, xj| xj - sin(6.0 * PI * x1 + j as f64 * PI / n))
}
