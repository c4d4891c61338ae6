//! Quality indicators: the additive approximation constant and exact
//! hypervolume with exclusive per-point contributions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::rng::RngHandle;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproximationResult {
    pub alpha: f64,
    /// Index into the reference set of the first point attaining `alpha`.
    pub witness: usize,
}

/// Worst-coordinate gap between a reference point and a candidate,
/// abandoned as soon as the partial maximum reaches `cutoff` (the returned
/// value is then `>= cutoff`). With `MIN` the gap is `t_i - s_i`, which is
/// the literal `s_i - t_i` evaluated on negated objectives.
#[inline]
fn shift_needed<const MIN: bool>(s: &[f64], t: &[f64], cutoff: f64) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for (a, b) in s.iter().zip(t) {
        let diff = if MIN { b - a } else { a - b };
        if diff > worst {
            worst = diff;
            if worst >= cutoff {
                break;
            }
        }
    }
    worst
}

fn check_sets<S: AsRef<[f64]>, T: AsRef<[f64]>>(s: &[S], t: &[T]) -> Result<usize> {
    let (Some(first), false) = (s.first(), t.is_empty()) else {
        return Err(Error::EmptySet);
    };
    let d = first.as_ref().len();
    for v in s.iter().map(AsRef::as_ref).chain(t.iter().map(AsRef::as_ref)) {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    Ok(d)
}

/// The inner scan starts at the previous minimizer and stops as soon as the
/// running minimum can no longer raise the outer maximum, so the result is
/// exactly the value of the plain triple loop.
fn max_min_max<const MIN: bool, S: AsRef<[f64]>, T: AsRef<[f64]>>(
    s: &[S],
    t: &[T],
) -> Result<ApproximationResult> {
    check_sets(s, t)?;
    let mut alpha = f64::NEG_INFINITY;
    let mut witness = 0;
    let mut hint = 0;
    for (si, sp) in s.iter().enumerate() {
        let sp = sp.as_ref();
        let mut best = f64::INFINITY;
        let mut best_t = hint;
        for k in 0..t.len() {
            let ti = (hint + k) % t.len();
            let v = shift_needed::<MIN>(sp, t[ti].as_ref(), best);
            if v < best {
                best = v;
                best_t = ti;
                if best <= alpha {
                    break;
                }
            }
        }
        hint = best_t;
        if best > alpha {
            alpha = best;
            witness = si;
        }
    }
    Ok(ApproximationResult { alpha, witness })
}

/// Additive approximation of `t` with respect to `s`, taken literally:
/// `max_{s} min_{t} max_i (s_i - t_i)`. This is the orientation for
/// objectives where larger is better.
pub fn additive_approximation<S: AsRef<[f64]>, T: AsRef<[f64]>>(
    s: &[S],
    t: &[T],
) -> Result<ApproximationResult> {
    max_min_max::<false, S, T>(s, t)
}

/// Additive approximation for minimized objectives:
/// `max_{s} min_{t} max_i (t_i - s_i)`, i.e. [`additive_approximation`] on
/// negated vectors. The smallest `c` such that every `s` is weakly dominated
/// by some `t - c`.
pub fn additive_approximation_min<S: AsRef<[f64]>, T: AsRef<[f64]>>(
    s: &[S],
    t: &[T],
) -> Result<ApproximationResult> {
    max_min_max::<true, S, T>(s, t)
}

/// How well `population` approximates a fresh sample of `sample_size`
/// points of the problem's Pareto front (minimization orientation).
pub fn approximation_of_front<T: AsRef<[f64]>>(
    problem: &dyn Problem,
    population: &[T],
    sample_size: usize,
    rng: &mut RngHandle,
) -> Result<f64> {
    let front = problem.sample_front(sample_size, rng);
    additive_approximation_min(&front, population).map(|r| r.alpha)
}

/// Exact hypervolume of the region dominated by `points` and bounded by
/// `reference`. Points exceeding the reference in any coordinate are ignored.
pub fn hypervolume<P: AsRef<[f64]>>(points: &[P], reference: &[f64]) -> f64 {
    let pts: Vec<Vec<f64>> = points
        .iter()
        .map(AsRef::as_ref)
        .filter(|p| p.len() == reference.len() && within(p, reference))
        .map(|p| p.to_vec())
        .collect();
    hv(nondominated(pts), reference)
}

/// Exclusive contribution of every point: `hv(all) - hv(all \ {p})`.
pub fn hv_contributions<P: AsRef<[f64]>>(points: &[P], reference: &[f64]) -> Vec<f64> {
    let valid: Vec<bool> = points
        .iter()
        .map(|p| p.as_ref().len() == reference.len() && within(p.as_ref(), reference))
        .collect();
    (0..points.len())
        .map(|i| {
            if !valid[i] {
                return 0.0;
            }
            let p = points[i].as_ref();
            let limited: Vec<Vec<f64>> = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i && valid[j])
                .map(|(_, q)| q.as_ref().iter().zip(p).map(|(a, b)| a.max(*b)).collect())
                .collect();
            let own = box_volume(p, reference);
            (own - hv(nondominated(limited), reference)).max(0.0)
        })
        .collect()
}

/// Contributions for a mutually non-dominated two-objective set from the
/// sorted-neighbor rectangles. Duplicated points contribute zero.
pub fn hv_contributions_2d<P: AsRef<[f64]>>(front: &[P], reference: &[f64]) -> Vec<f64> {
    debug_assert_eq!(reference.len(), 2);
    let mut order: Vec<usize> = (0..front.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (front[a].as_ref(), front[b].as_ref());
        pa[0].total_cmp(&pb[0]).then(pa[1].total_cmp(&pb[1]))
    });
    let mut out = alloc::vec![0.0; front.len()];
    for (k, &i) in order.iter().enumerate() {
        let p = front[i].as_ref();
        if !within(p, reference) {
            continue;
        }
        let prev = (k > 0).then(|| front[order[k - 1]].as_ref());
        let next = order.get(k + 1).map(|&j| front[j].as_ref());
        if prev == Some(p) || next == Some(p) {
            continue;
        }
        let right = next.map_or(reference[0], |q| q[0].min(reference[0]));
        let top = prev.map_or(reference[1], |q| q[1].min(reference[1]));
        out[i] = (right - p[0]) * (top - p[1]);
    }
    out
}

#[inline]
fn within(p: &[f64], reference: &[f64]) -> bool {
    p.iter().zip(reference).all(|(a, r)| a <= r)
}

fn box_volume(p: &[f64], reference: &[f64]) -> f64 {
    p.iter().zip(reference).map(|(a, r)| r - a).product()
}

/// Drops every point weakly dominated by another one (keeping one copy of
/// duplicates).
fn nondominated(mut pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    pts.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(pts.len());
    // Lexicographic order guarantees a point can only be weakly dominated by
    // one appearing before it.
    for p in pts {
        if !kept
            .iter()
            .any(|k| k.iter().zip(&p).all(|(a, b)| a <= b))
        {
            kept.push(p);
        }
    }
    kept
}

/// Hypervolume of a non-dominated set by slicing along the last objective:
/// after sorting worst-first on it, the exclusive part of each point is a
/// prism over a `(d - 1)`-dimensional exclusive area.
fn hv(mut pts: Vec<Vec<f64>>, reference: &[f64]) -> f64 {
    let d = reference.len();
    match (pts.len(), d) {
        (0, _) => 0.0,
        (1, _) => box_volume(&pts[0], reference),
        (_, 1) => reference[0] - pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
        (_, 2) => hv2(&mut pts, reference),
        _ => {
            pts.sort_by(|a, b| b[d - 1].total_cmp(&a[d - 1]));
            let sub_ref = &reference[..d - 1];
            let mut total = 0.0;
            for k in 0..pts.len() {
                let p = &pts[k];
                let height = reference[d - 1] - p[d - 1];
                if height <= 0.0 {
                    continue;
                }
                let base = &p[..d - 1];
                let limited: Vec<Vec<f64>> = pts[k + 1..]
                    .iter()
                    .map(|q| q[..d - 1].iter().zip(base).map(|(a, b)| a.max(*b)).collect())
                    .collect();
                let exclusive = box_volume(base, sub_ref) - hv(nondominated(limited), sub_ref);
                total += height * exclusive;
            }
            total
        }
    }
}

fn hv2(pts: &mut [Vec<f64>], reference: &[f64]) -> f64 {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut level = reference[1];
    let mut area = 0.0;
    for p in pts.iter() {
        if p[1] < level {
            area += (reference[0] - p[0]) * (level - p[1]);
            level = p[1];
        }
    }
    area
}
