//! Pareto ranking and crowding.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::types::{compare, Dominance};

/// Splits the points into successive non-dominated fronts, returned as
/// index lists. Front 0 is the non-dominated set of the input.
pub fn fast_nondominated_sort<P: AsRef<[f64]>>(points: &[P]) -> Vec<Vec<usize>> {
    if points.is_empty() {
        return Vec::new();
    }
    if points[0].as_ref().len() == 2 {
        return sort_2d(points);
    }
    let n = points.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            match compare(points[i].as_ref(), points[j].as_ref()) {
                Dominance::ADominatesB => {
                    dominates[i].push(j);
                    dominated_by[j] += 1;
                }
                Dominance::BDominatesA => {
                    dominates[j].push(i);
                    dominated_by[i] += 1;
                }
                _ => {}
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Two objectives: after sorting by (f1, f2) each front's last member has
/// its smallest f2, so one comparison per front decides membership and the
/// fronts can be binary searched.
fn sort_2d<P: AsRef<[f64]>>(points: &[P]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (points[a].as_ref(), points[b].as_ref());
        pa[0].total_cmp(&pb[0])
            .then(pa[1].total_cmp(&pb[1]))
            .then(a.cmp(&b))
    });
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        let p = points[i].as_ref();
        let beaten = |front: &Vec<usize>| {
            let t = points[*front.last().unwrap()].as_ref();
            t[1] < p[1] || (t[1] == p[1] && t[0] < p[0])
        };
        let k = fronts.partition_point(beaten);
        if k == fronts.len() {
            fronts.push(vec![i]);
        } else {
            fronts[k].push(i);
        }
    }
    for f in &mut fronts {
        f.sort_unstable();
    }
    fronts
}

/// Rank of every point (index of its front).
pub fn ranks_from_fronts(fronts: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut rank = vec![usize::MAX; n];
    for (k, f) in fronts.iter().enumerate() {
        for &i in f {
            rank[i] = k;
        }
    }
    rank
}

/// Crowding distance of each member of a front. Per objective the extreme
/// members get +∞ and the others add their normalized neighbour gap.
pub fn crowding_distance<P: AsRef<[f64]>>(front: &[P]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let d = front[0].as_ref().len();
    let mut dist = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    for m in 0..d {
        let value = |i: usize| front[i].as_ref()[m];
        order.sort_by(|&a, &b| {
            value(a)
                .total_cmp(&value(b))
                .then_with(|| lex(front[a].as_ref(), front[b].as_ref()))
                .then(a.cmp(&b))
        });
        let (first, last) = (order[0], order[n - 1]);
        dist[first] = f64::INFINITY;
        dist[last] = f64::INFINITY;
        let range = value(last) - value(first);
        if range <= 0.0 {
            continue;
        }
        for w in order.windows(3) {
            dist[w[1]] += (value(w[2]) - value(w[0])) / range;
        }
    }
    dist
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}
